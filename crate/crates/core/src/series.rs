//! Truncated power series and the group of formal diffeomorphisms.
//!
//! A [`FormalDiffeo`] of order `N` is the class of `x + a_2 x^2 + ... ` modulo
//! `x^{N+1}`. Because the degree-`n` coefficient of a composite or an inverse
//! only depends on input coefficients of degree `<= n`, every operation here
//! is exact on the truncation.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Coefficient};

/// Dense series `u_0 + u_1 x + ... + u_N x^N` modulo `x^{N+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Coefficient>,
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            coeffs: vec![Coefficient::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(order, 0, Coefficient::one())
    }

    /// `c x^degree`, which is zero when `degree > order`.
    pub fn monomial(order: usize, degree: usize, c: Coefficient) -> Self {
        let mut s = Self::zero(order);
        if degree <= order {
            s.coeffs[degree] = c;
        }
        s
    }

    /// Takes `coeffs[k]` as the coefficient of `x^k`; the order is
    /// `coeffs.len() - 1`. An empty vector is rejected by returning order 0.
    pub fn from_coeffs(mut coeffs: Vec<Coefficient>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(Coefficient::zero());
        }
        TruncatedSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, degree: usize) -> Coefficient {
        self.coeffs
            .get(degree)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate_to(&self, order: usize) -> Self {
        let order = order.min(self.order());
        TruncatedSeries {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        TruncatedSeries {
            coeffs: (0..=order)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Cauchy product truncated at the smaller order.
    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut out = vec![Coefficient::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        TruncatedSeries { coeffs: out }
    }

    pub fn pow(&self, exp: usize) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let u0 = &self.coeffs[0];
        if u0.is_zero() {
            return Err(Error::InvariantViolation(
                "reciprocal of a series with zero constant term".into(),
            ));
        }
        let n = self.order();
        let inv0 = u0.recip();
        let mut out: Vec<Coefficient> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = Coefficient::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &out[k - j];
            }
            out.push(-acc * &inv0);
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// `self(inner(x))` for an `inner` without constant term, by Horner's rule.
    pub fn substitute(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::InvariantViolation(
                "substitution requires an inner series without constant term".into(),
            ));
        }
        let order = self.order().min(inner.order());
        let inner = inner.truncate_to(order);
        let mut acc = TruncatedSeries::zero(order);
        for c in self.coeffs[..=order].iter().rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }
}

/// `gamma(x) = x + a_2 x^2 + ... + a_N x^N` modulo `x^{N+1}`.
///
/// Only `a_2..a_N` are stored, so the unit linear term cannot be broken.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalDiffeo {
    order: usize,
    higher: Vec<Coefficient>,
}

impl FormalDiffeo {
    pub fn identity(order: usize) -> Self {
        let order = order.max(1);
        FormalDiffeo {
            order,
            higher: vec![Coefficient::zero(); order - 1],
        }
    }

    /// `higher[0]` is `a_2`. Missing trailing coefficients are zero and
    /// extra ones beyond `order` are rejected.
    pub fn new(order: usize, higher: Vec<Coefficient>) -> Result<Self> {
        if order == 0 {
            return Err(Error::OutOfRange {
                what: "order",
                detail: "a formal diffeomorphism needs order >= 1".into(),
            });
        }
        if higher.len() > order - 1 {
            return Err(Error::OutOfRange {
                what: "coefficient degree",
                detail: format!("degree {} exceeds order {order}", higher.len() + 1),
            });
        }
        let mut higher = higher;
        higher.resize(order - 1, Coefficient::zero());
        Ok(FormalDiffeo { order, higher })
    }

    /// Reads `x + ...` off a series with `u_0 = 0` and `u_1 = 1`.
    pub fn from_series(s: &TruncatedSeries) -> Result<Self> {
        if !s.coeff(0).is_zero() || !s.coeff(1).is_one() || s.order() < 1 {
            return Err(Error::InvariantViolation(
                "series is not of the form x + O(x^2)".into(),
            ));
        }
        Self::new(s.order(), s.coeffs()[2..].to_vec())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Coefficient of `x^degree`, including the implicit `0` and `1`.
    pub fn coeff(&self, degree: usize) -> Coefficient {
        match degree {
            0 => Coefficient::zero(),
            1 => Coefficient::one(),
            d if d <= self.order => self.higher[d - 2].clone(),
            _ => Coefficient::zero(),
        }
    }

    /// `a_2, ..., a_N`.
    pub fn higher(&self) -> &[Coefficient] {
        &self.higher
    }

    pub fn is_identity(&self) -> bool {
        self.higher.iter().all(Zero::is_zero)
    }

    pub fn as_series(&self) -> TruncatedSeries {
        let mut coeffs = Vec::with_capacity(self.order + 1);
        coeffs.push(Coefficient::zero());
        coeffs.push(Coefficient::one());
        coeffs.extend(self.higher.iter().cloned());
        TruncatedSeries::from_coeffs(coeffs)
    }

    /// `h` with `gamma(x) - x = x^2 h(x)`, of order `N - 2` (or a zero
    /// series of order 0 when `N = 1`).
    pub fn quotient_h(&self) -> TruncatedSeries {
        if self.higher.is_empty() {
            return TruncatedSeries::zero(0);
        }
        TruncatedSeries::from_coeffs(self.higher.clone())
    }

    pub fn truncate_to(&self, order: usize) -> Self {
        let order = order.clamp(1, self.order);
        FormalDiffeo {
            order,
            higher: self.higher[..order - 1].to_vec(),
        }
    }
}

/// Grading-degree coefficients of `sum_j p_j x^{j+1} d/dx`, `j = 1..N`.
///
/// The order of a field is its top grading degree. Since `L_j` raises the
/// power of `x` by `j`, a field of order `N` pairs with diffeomorphisms of
/// order `N + 1` (`a_{j+1}` has grading degree `j`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FormalVectorField {
    coeffs: Vec<Coefficient>,
}

impl FormalVectorField {
    pub fn zero(order: usize) -> Self {
        FormalVectorField {
            coeffs: vec![Coefficient::zero(); order.max(1)],
        }
    }

    /// `c L_j` inside the truncation of the given order.
    pub fn basis(order: usize, j: usize, c: Coefficient) -> Result<Self> {
        if j == 0 || j > order {
            return Err(Error::OutOfRange {
                what: "grading degree",
                detail: format!("L_{j} is outside 1..={order}"),
            });
        }
        let mut f = Self::zero(order);
        f.coeffs[j - 1] = c;
        Ok(f)
    }

    /// `coeffs[0]` is `p_1`; the order is the number of coefficients.
    pub fn new(order: usize, coeffs: Vec<Coefficient>) -> Result<Self> {
        if order == 0 {
            return Err(Error::OutOfRange {
                what: "order",
                detail: "a vector field needs order >= 1".into(),
            });
        }
        if coeffs.len() > order {
            return Err(Error::OutOfRange {
                what: "grading degree",
                detail: format!("degree {} exceeds order {order}", coeffs.len()),
            });
        }
        let mut coeffs = coeffs;
        coeffs.resize(order, Coefficient::zero());
        Ok(FormalVectorField { coeffs })
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `p_j`, zero outside `1..=N`.
    pub fn coeff(&self, j: usize) -> Coefficient {
        if j == 0 {
            return Coefficient::zero();
        }
        self.coeffs
            .get(j - 1)
            .cloned()
            .unwrap_or_else(Coefficient::zero)
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        FormalVectorField {
            coeffs: (0..order)
                .map(|k| &self.coeffs[k] + &other.coeffs[k])
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        FormalVectorField {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        FormalVectorField {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    pub fn truncate_to(&self, order: usize) -> Self {
        let order = order.clamp(1, self.order());
        FormalVectorField {
            coeffs: self.coeffs[..order].to_vec(),
        }
    }

    /// Zero extension to a larger order, for fields known to be finitely
    /// supported.
    pub fn padded(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(self.order()), Coefficient::zero());
        FormalVectorField { coeffs }
    }

    /// Largest `j` with `p_j != 0`, or 0 for the zero field.
    pub fn top_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| !c.is_zero())
            .map_or(0, |i| i + 1)
    }
}

pub fn series_add(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    f.add(g)
}

pub fn series_mul(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    f.mul(g)
}

fn same_order(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::OrderMismatch { left, right })
    }
}

/// `gamma1(gamma2(x))` modulo `x^{N+1}`; both inputs must have order `N`.
pub fn compose(gamma1: &FormalDiffeo, gamma2: &FormalDiffeo) -> Result<FormalDiffeo> {
    same_order(gamma1.order(), gamma2.order())?;
    let outer = gamma1.as_series();
    let inner = gamma2.as_series();
    FormalDiffeo::from_series(&outer.substitute(&inner)?)
}

/// Compositional inverse by Lagrange inversion:
/// `c_n = (1/n) [x^{n-1}] (x / gamma(x))^n`.
pub fn invert_lagrange(gamma: &FormalDiffeo) -> FormalDiffeo {
    let order = gamma.order();
    if order == 1 {
        return FormalDiffeo::identity(1);
    }
    // x / gamma(x) = 1 / (1 + a_2 x + a_3 x^2 + ...), needed through x^{N-1}.
    let mut denom = vec![Coefficient::one()];
    denom.extend(gamma.higher().iter().cloned());
    let phi = TruncatedSeries::from_coeffs(denom)
        .reciprocal()
        .expect("constant term is one");
    let mut power = phi.clone();
    let mut higher = Vec::with_capacity(order - 1);
    for n in 2..=order {
        power = power.mul(&phi);
        higher.push(power.coeff(n - 1) / rational::int(n as i64));
    }
    FormalDiffeo::new(order, higher).expect("lengths match order")
}

/// Compositional inverse by solving `gamma(mu(x)) = x` degree by degree.
///
/// The degree-`n` equation reads `c_n + (terms in c_2..c_{n-1}) = 0`, so
/// each step computes the composite with `c_n` still zero and negates the
/// resulting `x^n` coefficient.
pub fn invert_recursive(gamma: &FormalDiffeo) -> FormalDiffeo {
    let order = gamma.order();
    let outer = gamma.as_series();
    let mut mu = vec![Coefficient::zero(), Coefficient::one()];
    for n in 2..=order {
        mu.push(Coefficient::zero());
        let inner = TruncatedSeries::from_coeffs(mu.clone());
        let composite = outer
            .truncate_to(n)
            .substitute(&inner)
            .expect("inner has no constant term");
        mu[n] = -composite.coeff(n);
    }
    FormalDiffeo::from_series(&TruncatedSeries::from_coeffs(mu)).expect("unit linear term")
}

/// The default inversion algorithm.
pub fn invert(gamma: &FormalDiffeo) -> FormalDiffeo {
    invert_lagrange(gamma)
}

/// `E_sigma`: `a_j -> sigma^{j-1} a_j`, i.e. `sigma^{-1} gamma(sigma x)`.
/// `sigma = 0` gives the identity.
pub fn scale_automorphism(gamma: &FormalDiffeo, sigma: &Coefficient) -> FormalDiffeo {
    let higher = gamma
        .higher()
        .iter()
        .enumerate()
        .map(|(i, a)| a * rational::pow(sigma, i + 1))
        .collect();
    FormalDiffeo::new(gamma.order(), higher).expect("same length")
}

/// Grading scaling on vector fields: `p_j -> sigma^j p_j`.
pub fn scale_field(field: &FormalVectorField, sigma: &Coefficient) -> FormalVectorField {
    let coeffs = field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, p)| p * rational::pow(sigma, i + 1))
        .collect();
    FormalVectorField::new(field.order(), coeffs).expect("same length")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn diffeo(order: usize, higher: &[i64]) -> FormalDiffeo {
        FormalDiffeo::new(order, higher.iter().map(|&a| int(a)).collect()).unwrap()
    }

    fn series(coeffs: &[i64]) -> TruncatedSeries {
        TruncatedSeries::from_coeffs(coeffs.iter().map(|&a| int(a)).collect())
    }

    #[test]
    fn add_follows_min_order() {
        let f = series(&[1, 1, 0]);
        let g = series(&[2, 0, 1]);
        assert_eq!(f.add(&g), series(&[3, 1, 1]));
        assert_eq!(f.add(&TruncatedSeries::zero(2)), f);
        let a = TruncatedSeries::zero(3);
        let b = TruncatedSeries::zero(5);
        assert_eq!(series_add(&a, &b).order(), 3);
    }

    #[test]
    fn mul_truncates() {
        let f = series(&[1, 1, 0]);
        assert_eq!(series_mul(&f, &f), series(&[1, 2, 1]));
        assert_eq!(f.mul(&TruncatedSeries::one(2)), f);
        let x = series(&[0, 1]);
        assert_eq!(x.mul(&x), series(&[0, 0]));
    }

    #[test]
    fn compose_by_hand() {
        // (x + x^2) o (x + x^2) = x + x^2 + (x + x^2)^2 = x + 2x^2 + 2x^3 + x^4
        let g = diffeo(4, &[1]);
        assert_eq!(compose(&g, &g).unwrap(), diffeo(4, &[2, 2, 1]));
        let id = FormalDiffeo::identity(4);
        assert_eq!(compose(&g, &id).unwrap(), g);
        assert_eq!(compose(&id, &g).unwrap(), g);
    }

    #[test]
    fn compose_rejects_order_mismatch() {
        let err = compose(&FormalDiffeo::identity(3), &FormalDiffeo::identity(4)).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 3, right: 4 });
    }

    #[test]
    fn inverse_of_x_plus_x2_is_signed_catalan() {
        let g = diffeo(5, &[1]);
        let expected = diffeo(5, &[-1, 2, -5, 14]);
        assert_eq!(invert_lagrange(&g), expected);
        assert_eq!(invert_recursive(&g), expected);
    }

    #[test]
    fn inverse_of_x_plus_x3() {
        let g = diffeo(5, &[0, 1]);
        let expected = diffeo(5, &[0, -1, 0, 3]);
        assert_eq!(invert_recursive(&g), expected);
        assert_eq!(invert_lagrange(&g), expected);
    }

    #[test]
    fn identity_is_self_inverse() {
        for n in 1..6 {
            let id = FormalDiffeo::identity(n);
            assert_eq!(invert_lagrange(&id), id);
            assert_eq!(invert_recursive(&id), id);
        }
    }

    #[test]
    fn scaling_examples() {
        let g = diffeo(3, &[1, 1]);
        assert_eq!(scale_automorphism(&g, &int(1)), g);
        assert_eq!(scale_automorphism(&g, &int(2)), diffeo(3, &[2, 4]));
        assert!(scale_automorphism(&g, &int(0)).is_identity());

        let f = FormalVectorField::new(3, vec![int(1), int(1)]).unwrap();
        assert_eq!(scale_field(&f, &int(1)), f);
        assert_eq!(
            scale_field(&f, &int(2)),
            FormalVectorField::new(3, vec![int(2), int(4)]).unwrap()
        );
        let half = ratio(1, 2);
        assert_eq!(
            scale_field(&f, &half).coeffs()[..2],
            [ratio(1, 2), ratio(1, 4)]
        );
    }

    #[test]
    fn constructors_validate() {
        assert!(FormalDiffeo::new(0, vec![]).is_err());
        assert!(FormalDiffeo::new(2, vec![int(1), int(2)]).is_err());
        assert!(FormalVectorField::new(1, vec![int(1), int(1)]).is_err());
        assert!(FormalVectorField::basis(3, 4, int(1)).is_err());
        let bad = series(&[0, 2, 1]);
        assert!(FormalDiffeo::from_series(&bad).is_err());
    }

    #[test]
    fn reciprocal_of_one_minus_x() {
        let r = series(&[1, -1, 0, 0]).reciprocal().unwrap();
        assert_eq!(r, series(&[1, 1, 1, 1]));
        assert!(series(&[0, 1]).reciprocal().is_err());
    }
}
