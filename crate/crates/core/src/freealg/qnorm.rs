use std::cell::RefCell;
use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::rc::Rc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::norms::{field_weight, operator_norm_trunc, NormValue};
use crate::rational::{self, factorial_q, Coefficient};
use crate::series::FormalVectorField;
use crate::triangular::{rep_field, TriangularOperator};

use super::lp::{LinearProgram, LpOutcome, PivotRule};
use super::pbw::{pbw_basis, pi_map, PbwMonomial, UElement};
use super::word::{words_of_degree, NCPolynomial, Word};

/// Optimal preimage of one homogeneous component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentSolution {
    pub degree: usize,
    /// Weighted l1 norm of `certificate`.
    pub value: Coefficient,
    /// Number of words of this degree, i.e. LP columns before splitting.
    pub words: usize,
    /// A word combination with `pi(certificate) = u^(degree)` attaining `value`.
    pub certificate: NCPolynomial,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QNorm {
    pub norm: NormValue,
    pub components: Vec<ComponentSolution>,
}

impl QNorm {
    /// Sum of the component certificates, a preimage of the whole element.
    pub fn certificate(&self) -> NCPolynomial {
        self.components
            .iter()
            .fold(NCPolynomial::zero(), |acc, c| acc.add(&c.certificate))
    }
}

type Images = Rc<Vec<(Word, UElement)>>;

thread_local! {
    static IMAGES: RefCell<HashMap<usize, Images>> = RefCell::new(HashMap::new());
}

/// `(w, pi(w))` for every word of graded degree `k`.
fn word_images(k: usize) -> Images {
    IMAGES.with(|cache| {
        if let Some(v) = cache.borrow().get(&k) {
            return Rc::clone(v);
        }
        let images: Vec<(Word, UElement)> = words_of_degree(k)
            .into_iter()
            .map(|w| {
                let image = pi_map(&NCPolynomial::monomial(w.clone(), Coefficient::one()));
                (w, image)
            })
            .collect();
        let images = Rc::new(images);
        cache.borrow_mut().insert(k, Rc::clone(&images));
        images
    })
}

/// `min R(c) subject to pi(c) = target`, over words of degree `k`, where
/// `R` charges `weight(w)` per unit of `|c_w|`.
fn solve_component<F>(
    target: &UElement,
    k: usize,
    weight: F,
    rule: PivotRule,
) -> Result<ComponentSolution>
where
    F: Fn(&Word) -> Coefficient,
{
    let images = word_images(k);
    let mut monomials: BTreeSet<PbwMonomial> = target.terms().keys().cloned().collect();
    for (_, image) in images.iter() {
        monomials.extend(image.terms().keys().cloned());
    }
    let rows: Vec<PbwMonomial> = monomials.into_iter().collect();
    let n = images.len();

    let mut a = Vec::with_capacity(rows.len());
    for m in &rows {
        let mut row = Vec::with_capacity(2 * n);
        let plus: Vec<Coefficient> = images.iter().map(|(_, img)| img.coeff(m)).collect();
        row.extend(plus.iter().cloned());
        row.extend(plus.iter().map(|v| -v));
        a.push(row);
    }
    let b: Vec<Coefficient> = rows.iter().map(|m| target.coeff(m)).collect();
    let weights: Vec<Coefficient> = images.iter().map(|(w, _)| weight(w)).collect();
    let c: Vec<Coefficient> = weights.iter().chain(weights.iter()).cloned().collect();

    let lp = LinearProgram { a, b, c };
    let (x, value) = match lp.solve(rule)? {
        LpOutcome::Optimal { x, value } => (x, value),
        LpOutcome::Infeasible => return Err(Error::NotInImage { degree: k }),
        LpOutcome::Unbounded => {
            return Err(Error::InvariantViolation(
                "weighted l1 objective reported unbounded".into(),
            ))
        }
    };
    let mut certificate = NCPolynomial::zero();
    for (i, (w, _)) in images.iter().enumerate() {
        certificate.add_term(w.clone(), &x[i] - &x[n + i]);
    }
    if pi_map(&certificate) != *target {
        return Err(Error::InvariantViolation(format!(
            "LP certificate for degree {k} does not map onto the component"
        )));
    }
    log::debug!(
        "degree {k}: {n} words, {} rows, optimum {}",
        rows.len(),
        rational::format(&value)
    );
    Ok(ComponentSolution {
        degree: k,
        value,
        words: n,
        certificate,
    })
}

/// Quotient of `R_[t1,t2]` along `pi`, solved degree by degree.
pub fn q_norm_weighted(
    u: &UElement,
    t1: &Coefficient,
    t2: &Coefficient,
    rule: PivotRule,
) -> Result<QNorm> {
    rational::require_positive("t1", t1)?;
    rational::require_positive("t2", t2)?;
    let mut components = Vec::new();
    let mut total = Coefficient::zero();
    for (k, part) in u.components() {
        let sol = solve_component(
            &part,
            k,
            |w| rational::pow(t1, w.d1()) * rational::pow(t2, w.d2()),
            rule,
        )?;
        total += &sol.value;
        components.push(sol);
    }
    Ok(QNorm {
        norm: NormValue::exact(total),
        components,
    })
}

/// `Q_[1](u) = min { R_[1,1](w) : pi(w) = u }`.
pub fn q1_norm(u: &UElement, rule: PivotRule) -> Result<QNorm> {
    let one = Coefficient::one();
    q_norm_weighted(u, &one, &one, rule)
}

/// `Q_[1](u)` as a single LP over every word of degree `<= deg u`, without
/// splitting by degree. Independent of the per-degree solve in [`q1_norm`];
/// agreement checks that homogeneous preimages suffice and that the norm is
/// additive over components.
pub fn q1_norm_joint(u: &UElement, rule: PivotRule) -> Result<Coefficient> {
    let top = u.max_degree();
    let mut images = Vec::new();
    for k in 0..=top {
        images.extend(word_images(k).iter().cloned());
    }
    let rows: Vec<PbwMonomial> = (0..=top).flat_map(pbw_basis).collect();
    let n = images.len();
    let a = rows
        .iter()
        .map(|m| {
            let plus: Vec<Coefficient> = images.iter().map(|(_, img)| img.coeff(m)).collect();
            let minus: Vec<Coefficient> = plus.iter().map(|v| -v).collect();
            plus.into_iter().chain(minus).collect()
        })
        .collect();
    let b = rows.iter().map(|m| u.coeff(m)).collect();
    let lp = LinearProgram {
        a,
        b,
        c: vec![Coefficient::one(); 2 * n],
    };
    match lp.solve(rule)? {
        LpOutcome::Optimal { value, .. } => Ok(value),
        LpOutcome::Infeasible => Err(Error::NotInImage { degree: top }),
        LpOutcome::Unbounded => Err(Error::InvariantViolation(
            "l1 objective reported unbounded".into(),
        )),
    }
}

/// `Q_[t](u) = Q_[1](E_t u)`, where `E_t` scales the degree-`n` component by
/// `t^n`. Certificates are reported as preimages of `u` itself.
pub fn qt_norm(u: &UElement, t: &Coefficient, rule: PivotRule) -> Result<QNorm> {
    rational::require_positive("t", t)?;
    let mut q = q1_norm(&u.scale_grading(t), rule)?;
    for c in &mut q.components {
        c.certificate = c.certificate.scale(&rational::pow(t, c.degree).recip());
    }
    Ok(q)
}

/// Both readings of the upper estimate for `sum p_j L_j` obtained from
/// `L_n = [L_1, L_{n-1}] / (n-2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpperEstimate {
    /// `|p_1| + 1/4 sum_{j>1} |p_j| (2t)^j / (j-2)!`.
    pub displayed: NormValue,
    /// Same with `t |p_1|`, the form compatible with `Q_[t](L_1) = t`.
    pub homogeneous: NormValue,
}

pub fn q_upper_vect(field: &FormalVectorField, t: &Coefficient) -> Result<UpperEstimate> {
    rational::require_positive("t", t)?;
    let two_t = t * rational::int(2);
    let quarter = rational::ratio(1, 4);
    let higher = field
        .coeffs()
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, p)| {
            let j = i + 1;
            p.abs() * rational::pow(&two_t, j) / factorial_q(j - 2)
        })
        .fold(Coefficient::zero(), |acc, x| acc + x)
        * quarter;
    let p1 = field.coeff(1).abs();
    Ok(UpperEstimate {
        displayed: NormValue::upper(&p1 + &higher),
        homogeneous: NormValue::upper(p1 * t + higher),
    })
}

/// Lower certificate for `Q_[s](u)` from the representation of `U(vect)` on
/// the truncated space `V_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerCertificate {
    /// Truncated operator norm of `rho(u)` over columns `0..=M`.
    pub norm: NormValue,
    /// Dimension of the truncation; columns `0..=M` are exact there.
    pub dim: usize,
    /// `||rho(L_1)||_t` and `||rho(L_2)||_t` restricted to columns `0..=M`.
    pub l1_truncated: Coefficient,
    pub l2_truncated: Coefficient,
    /// Exact operator norms: `sup_m t m/(m+1) = t` and `t^2/6`.
    pub l1_sup: Coefficient,
    pub l2_sup: Coefficient,
    /// `s` with `||rho(L_1)|| <= s` and `||rho(L_2)|| <= s^2`; the certificate
    /// `Q_[s](u) >= norm` holds for this scale.
    pub certified_scale: Coefficient,
    /// `t/2`, the scale under the reading `||L_1||_t = t/2`.
    pub half_scale: Coefficient,
}

/// `rho(L_i)` on polynomials of degree `< dim`, for `1 <= i < dim - 1`.
fn rep_generator(i: usize, dim: usize) -> Result<TriangularOperator> {
    let field = FormalVectorField::basis(dim - 2, i, Coefficient::one())?;
    rep_field(&field, dim - 1)
}

/// `rho(u)` on polynomials of degree `< dim`.
pub fn represent(u: &UElement, dim: usize) -> Result<TriangularOperator> {
    let mut generators: BTreeMap<usize, TriangularOperator> = BTreeMap::new();
    let mut total = TriangularOperator::zero(dim);
    for (m, c) in u.terms() {
        let mut prod = TriangularOperator::identity(dim);
        for &i in m.indices() {
            if i + 1 >= dim {
                prod = TriangularOperator::zero(dim);
                break;
            }
            let g = match generators.entry(i) {
                Entry::Occupied(e) => e.into_mut(),
                Entry::Vacant(e) => e.insert(rep_generator(i, dim)?),
            };
            prod = prod.mul(g)?;
        }
        total = total.add(&prod.scale(c))?;
    }
    Ok(total)
}

pub fn q_lower_vect(u: &UElement, t: &Coefficient, columns: usize) -> Result<LowerCertificate> {
    rational::require_positive("t", t)?;
    let dim = columns + u.max_degree().max(2) + 1;
    let norm = operator_norm_trunc(&represent(u, dim)?, t, columns)?;
    let l1 = operator_norm_trunc(&rep_generator(1, dim)?, t, columns)?.value;
    let l2 = operator_norm_trunc(&rep_generator(2, dim)?, t, columns)?.value;
    let l1_sup = t.clone();
    let l2_sup = t * t / rational::int(6);
    if l1 > l1_sup || l2 > l2_sup {
        return Err(Error::InvariantViolation(
            "truncated generator norm exceeds its supremum".into(),
        ));
    }
    // l2_sup = t^2/6 <= t^2, so s = t covers both generators.
    let certified_scale = l1_sup.clone();
    Ok(LowerCertificate {
        norm,
        dim,
        l1_truncated: l1,
        l2_truncated: l2,
        l1_sup,
        l2_sup,
        certified_scale,
        half_scale: t / rational::int(2),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionRow {
    pub n: usize,
    /// `Q_[t](L_n)`, exact.
    pub q: Coefficient,
    /// `Q_[1](L_n)`, exact.
    pub q1: Coefficient,
    pub upper_homogeneous: Coefficient,
    pub upper_displayed: Coefficient,
    /// `t^n / (n+1)!`
    pub w_t: Coefficient,
    /// `(2t)^n / (n+1)!`
    pub w_2t: Coefficient,
    pub within_upper: bool,
    pub above_w_t: bool,
    pub above_w_2t: bool,
    /// `Q_[t](L_n) = t^n Q_[1](L_n)`.
    pub homogeneous: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionReport {
    pub t: Coefficient,
    pub rows: Vec<InclusionRow>,
    /// Failures of the certified pattern: upper estimate, `W_t` lower bound,
    /// homogeneity.
    pub violations: Vec<String>,
    /// Rows where `Q_[t](L_n) < ||L_n||_{W_2t}`.
    pub strong_lower_failures: Vec<usize>,
}

/// Basis-element comparisons between `Q_[t]` and the weights `W_t`, `W_2t`.
pub fn inclusion_check(t: &Coefficient, nmax: usize, rule: PivotRule) -> Result<InclusionReport> {
    rational::require_positive("t", t)?;
    let two_t = t * rational::int(2);
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    let mut strong_lower_failures = Vec::new();
    for n in 1..=nmax {
        let ln = UElement::generator(n, Coefficient::one())?;
        let q = qt_norm(&ln, t, rule)?.norm.value;
        let q1 = q1_norm(&ln, rule)?.norm.value;
        let field = FormalVectorField::basis(n, n, Coefficient::one())?;
        let upper = q_upper_vect(&field, t)?;
        let w_t = field_weight(&field, t);
        let w_2t = field_weight(&field, &two_t);
        let row = InclusionRow {
            n,
            within_upper: q <= upper.homogeneous.value,
            above_w_t: q >= w_t,
            above_w_2t: q >= w_2t,
            homogeneous: q == rational::pow(t, n) * &q1,
            q,
            q1,
            upper_homogeneous: upper.homogeneous.value,
            upper_displayed: upper.displayed.value,
            w_t,
            w_2t,
        };
        if !row.within_upper {
            violations.push(format!("n = {n}: Q_[t](L_n) exceeds the upper estimate"));
        }
        if !row.above_w_t {
            violations.push(format!("n = {n}: Q_[t](L_n) below ||L_n||_W_t"));
        }
        if !row.homogeneous {
            violations.push(format!("n = {n}: Q_[t](L_n) != t^n Q_[1](L_n)"));
        }
        if !row.above_w_2t {
            strong_lower_failures.push(n);
        }
        rows.push(row);
    }
    Ok(InclusionReport {
        t: t.clone(),
        rows,
        violations,
        strong_lower_failures,
    })
}

/// `2^{n-2} t^n / (n-2)!` for `n >= 2`, the estimate for a single `L_n`.
pub fn recursion_bound(n: usize, t: &Coefficient) -> Coefficient {
    if n < 2 {
        return t.clone();
    }
    rational::pow(&rational::int(2), n - 2) * rational::pow(t, n) / factorial_q(n - 2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn l(n: usize) -> UElement {
        UElement::generator(n, int(1)).unwrap()
    }

    fn q1(u: &UElement) -> Coefficient {
        q1_norm(u, PivotRule::Bland).unwrap().norm.value
    }

    #[test]
    fn generators_have_norm_one() {
        assert_eq!(q1(&l(1)), int(1));
        assert_eq!(q1(&l(2)), int(1));
        assert_eq!(q1(&UElement::zero()), int(0));
        assert_eq!(q1(&UElement::one().scale(&int(-3))), int(3));
    }

    #[test]
    fn l3_has_norm_two() {
        let q = q1_norm(&l(3), PivotRule::Bland).unwrap();
        assert_eq!(q.norm.value, int(2));
        let w12 = Word::new(vec![1, 2]).unwrap();
        let w21 = Word::new(vec![2, 1]).unwrap();
        let expected =
            NCPolynomial::monomial(w12, int(1)).add(&NCPolynomial::monomial(w21, int(-1)));
        assert_eq!(q.certificate(), expected);
    }

    #[test]
    fn additivity_over_components() {
        assert_eq!(q1(&l(1).add(&l(2))), int(2));
        let u = l(3).scale(&ratio(1, 2)).add(&l(1).scale(&int(-2)));
        assert_eq!(q1(&u), int(3));
    }

    #[test]
    fn joint_lp_matches_graded() {
        let u = l(1)
            .scale(&int(3))
            .add(&l(3))
            .add(&l(1).mul(&l(2)).scale(&ratio(-1, 2)));
        assert_eq!(q1_norm_joint(&u, PivotRule::Bland).unwrap(), q1(&u));
    }

    #[test]
    fn pivot_rules_agree() {
        for n in 1..=7 {
            let a = q1_norm(&l(n), PivotRule::Bland).unwrap().norm.value;
            let b = q1_norm(&l(n), PivotRule::Dantzig).unwrap().norm.value;
            assert_eq!(a, b, "n = {n}");
        }
    }

    #[test]
    fn recursion_bound_dominates() {
        for n in 3..=8 {
            assert!(q1(&l(n)) <= recursion_bound(n, &int(1)), "n = {n}");
        }
    }

    #[test]
    fn qt_three_ways() {
        let u = l(1).add(&l(3).scale(&int(2))).add(&l(1).mul(&l(2)));
        let t = ratio(3, 5);
        let a = qt_norm(&u, &t, PivotRule::Bland).unwrap();
        let b = q_norm_weighted(&u, &t, &(&t * &t), PivotRule::Bland).unwrap();
        let c: Coefficient = u
            .components()
            .iter()
            .map(|(k, part)| rational::pow(&t, *k) * q1(part))
            .fold(Coefficient::zero(), |acc, x| acc + x);
        assert_eq!(a.norm.value, b.norm.value);
        assert_eq!(a.norm.value, c);
        assert_eq!(pi_map(&a.certificate()), u);
    }

    #[test]
    fn upper_estimates() {
        let f3 = FormalVectorField::basis(5, 3, int(1)).unwrap();
        assert_eq!(q_upper_vect(&f3, &int(1)).unwrap().displayed.value, int(2));
        let f4 = FormalVectorField::basis(5, 4, int(1)).unwrap();
        assert_eq!(
            q_upper_vect(&f4, &int(1)).unwrap().homogeneous.value,
            int(2)
        );
        let f1 = FormalVectorField::basis(5, 1, int(1)).unwrap();
        let e = q_upper_vect(&f1, &int(3)).unwrap();
        assert_eq!(e.displayed.value, int(1));
        assert_eq!(e.homogeneous.value, int(3));
    }

    #[test]
    fn lower_certificate_l1() {
        let cert = q_lower_vect(&l(1), &int(1), 50).unwrap();
        assert_eq!(cert.norm.value, ratio(50, 51));
        assert_eq!(cert.l2_truncated, ratio(1, 6));
        assert_eq!(cert.certified_scale, int(1));
        assert!(q_lower_vect(&UElement::zero(), &int(1), 10)
            .unwrap()
            .norm
            .value
            .is_zero());
        let l3 = q_lower_vect(&l(3), &int(1), 20).unwrap();
        assert!(l3.norm.value <= int(2));
    }

    #[test]
    fn inclusion_rows() {
        let t = ratio(1, 2);
        let r = inclusion_check(&t, 6, PivotRule::Bland).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        assert_eq!(r.rows[0].q, t);
        assert_eq!(r.rows[1].q, &t * &t);
        assert_eq!(r.rows[2].q, rational::pow(&t, 3) * int(2));
    }

    #[test]
    fn not_in_image_detected() {
        // A monomial of the wrong degree is outside the span of the word images.
        let bad = UElement::monomial(PbwMonomial::new(vec![1]).unwrap(), int(1));
        assert!(solve_component(&bad, 2, |_| int(1), PivotRule::Bland).is_err());
    }
}
