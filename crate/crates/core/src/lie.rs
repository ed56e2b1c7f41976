//! The Lie algebra of formal vector fields and its exponential map.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Coefficient};
use crate::series::{compose, FormalDiffeo, FormalVectorField, TruncatedSeries};
use crate::triangular::{exp_strict, log_unitriangular, rep_field, rep_t};

/// `[L_n, L_m] = (m - n) L_{n+m}`, extended bilinearly and truncated.
pub fn bracket(a: &FormalVectorField, b: &FormalVectorField) -> Result<FormalVectorField> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    let order = a.order();
    let mut out = vec![Coefficient::zero(); order];
    for n in 1..order {
        let an = a.coeff(n);
        if an.is_zero() {
            continue;
        }
        for m in 1..=order - n {
            let bm = b.coeff(m);
            if bm.is_zero() || m == n {
                continue;
            }
            out[n + m - 1] += &an * &bm * rational::int(m as i64 - n as i64);
        }
    }
    FormalVectorField::new(order, out)
}

/// `gamma` with `T(gamma) = exp(L)`, read off as `exp(L) x`.
///
/// A field with grading degrees `1..=N` exponentiates to a diffeomorphism of
/// order `N + 1`.
pub fn exp_field(field: &FormalVectorField) -> FormalDiffeo {
    let n = field.order() + 1;
    let s = rep_field(field, n).expect("order matches");
    let e = exp_strict(&s).expect("vector fields act strictly");
    FormalDiffeo::from_series(&e.column(1)).expect("exp of a strict operator is unipotent")
}

/// Time-one flow of `dx/dt = sum_j p_j x^{j+1}` by coefficient recursion.
///
/// Writes the flow as `x + sum_{n>=2} c_n(t) x^n` with polynomial `c_n(t)`.
/// The `x^n` coefficient of `v(flow)` only involves `c_2..c_{n-1}`, so each
/// `c_n` is the integral of already known polynomials. Independent of the
/// matrix exponential in [`exp_field`].
pub fn exp_field_flow(field: &FormalVectorField) -> FormalDiffeo {
    let order = field.order() + 1;
    // powers[e][k]: the x^k coefficient of flow^e, a polynomial in t.
    let mut powers: Vec<Vec<Poly>> = vec![vec![Poly::zero(); order + 1]; order + 1];
    let mut flow: Vec<Poly> = vec![Poly::zero(); order + 1];
    flow[1] = Poly::constant(Coefficient::one());
    powers[1][1] = flow[1].clone();

    for n in 2..=order {
        // Fill [x^n] flow^e for e >= 2 using flow coefficients below degree n.
        for e in 2..=n {
            let mut acc = Poly::zero();
            for k in 1..=n - (e - 1) {
                if flow[k].is_zero() || powers[e - 1][n - k].is_zero() {
                    continue;
                }
                acc = acc.add(&flow[k].mul(&powers[e - 1][n - k]));
            }
            powers[e][n] = acc;
        }
        let mut velocity = Poly::zero();
        for j in 1..n {
            let p = field.coeff(j);
            if !p.is_zero() {
                velocity = velocity.add(&powers[j + 1][n].scale(&p));
            }
        }
        flow[n] = velocity.integrate();
        powers[1][n] = flow[n].clone();
    }
    let higher = flow[2..]
        .iter()
        .map(|c| c.eval(&Coefficient::one()))
        .collect();
    FormalDiffeo::new(order, higher).expect("lengths match order")
}

/// `L` with `exp(L) = gamma`, via the matrix logarithm of `T(gamma)`.
///
/// A diffeomorphism of order `N >= 2` yields a field with grading degrees
/// `1..=N-1`. The logarithm is checked to be the matrix of a vector field; a
/// mismatch is reported as an invariant violation.
pub fn log_diffeo(gamma: &FormalDiffeo) -> Result<FormalVectorField> {
    let n = gamma.order();
    if n < 2 {
        return Err(Error::InsufficientOrder { have: n, need: 2 });
    }
    let log = log_unitriangular(&rep_t(gamma, n)?)?;
    let column = log.column(1);
    let field = FormalVectorField::new(n - 1, (2..=n).map(|k| column.coeff(k)).collect())?;
    if rep_field(&field, n)? != log {
        return Err(Error::InvariantViolation(
            "logarithm of T(gamma) is not a derivation matrix".into(),
        ));
    }
    Ok(field)
}

/// `log(exp(A) o exp(B))` on the truncation.
///
/// `T` reverses composition (`T(g1) T(g2) = T(g2 o g1)`), so in terms of the
/// vector-field bracket this is `A + B - [A,B]/2 + ([A,[A,B]] + [B,[B,A]])/12
/// + ...`.
pub fn bch(a: &FormalVectorField, b: &FormalVectorField) -> Result<FormalVectorField> {
    let product = compose(&exp_field(a), &exp_field(b))?;
    log_diffeo(&product)
}

/// Dense polynomial in the formal time variable.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Poly(Vec<Coefficient>);

impl Poly {
    fn zero() -> Self {
        Poly(Vec::new())
    }

    fn constant(c: Coefficient) -> Self {
        Poly(vec![c]).normalized()
    }

    fn normalized(mut self) -> Self {
        while self.0.last().is_some_and(Zero::is_zero) {
            self.0.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add(&self, other: &Self) -> Self {
        let len = self.0.len().max(other.0.len());
        let zero = Coefficient::zero();
        Poly(
            (0..len)
                .map(|i| self.0.get(i).unwrap_or(&zero) + other.0.get(i).unwrap_or(&zero))
                .collect(),
        )
        .normalized()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Coefficient::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly(out).normalized()
    }

    fn scale(&self, c: &Coefficient) -> Self {
        Poly(self.0.iter().map(|a| a * c).collect()).normalized()
    }

    /// Antiderivative vanishing at `t = 0`.
    fn integrate(&self) -> Self {
        let mut out = vec![Coefficient::zero()];
        out.extend(
            self.0
                .iter()
                .enumerate()
                .map(|(i, a)| a * rational::ratio(1, i as i64 + 1)),
        );
        Poly(out).normalized()
    }

    fn eval(&self, t: &Coefficient) -> Coefficient {
        self.0
            .iter()
            .rev()
            .fold(Coefficient::zero(), |acc, a| acc * t + a)
    }
}

/// `x / (1 - c x)` truncated at the given order, the time-one flow of `c L_1`.
pub fn geometric_flow(order: usize, c: &Coefficient) -> FormalDiffeo {
    let coeffs = (0..=order)
        .map(|k| {
            if k == 0 {
                Coefficient::zero()
            } else {
                rational::pow(c, k - 1)
            }
        })
        .collect();
    FormalDiffeo::from_series(&TruncatedSeries::from_coeffs(coeffs)).expect("x + O(x^2)")
}
