//! Weighted Banach norms and executable versions of the norm estimates.
//!
//! Conventions:
//! * `W_sigma`: `||a||_sigma = sum_{j>=2} |a_j| sigma^{j-1} / j!` on the
//!   coefficients of `x + a_2 x^2 + ...`; on fields `sum p_j L_j` the same
//!   weight is shifted, `sum |p_j| sigma^j / (j+1)!`.
//! * `V_t`: `||F||_t = sum_m |u_m| t^m / m!`, with operator norm equal to the
//!   supremum over columns of `(m!/t^m) ||A x^m||_t`.
//!
//! Every value is an exact rational. Sums over a truncation stand in for
//! infinite sums or suprema, so [`NormValue`] records which side they
//! approximate.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rational::{self, factorial_q, Coefficient};
use crate::series::{invert, FormalDiffeo, FormalVectorField};
use crate::triangular::{monomial_q, taylor_decomposition, TriangularOperator};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NormKind {
    Exact,
    LowerApprox,
    UpperBound,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormValue {
    pub value: Coefficient,
    pub kind: NormKind,
    /// Column attaining a truncated operator norm.
    pub witness_column: Option<usize>,
}

impl NormValue {
    pub fn exact(value: Coefficient) -> Self {
        NormValue {
            value,
            kind: NormKind::Exact,
            witness_column: None,
        }
    }

    pub fn lower(value: Coefficient) -> Self {
        NormValue {
            value,
            kind: NormKind::LowerApprox,
            witness_column: None,
        }
    }

    pub fn upper(value: Coefficient) -> Self {
        NormValue {
            value,
            kind: NormKind::UpperBound,
            witness_column: None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut obj = serde_json::json!({
            "value": rational::format(&self.value),
            "kind": self.kind,
        });
        if let Some(m) = self.witness_column {
            obj["witness_column"] = m.into();
        }
        obj
    }
}

/// Whether the stored coefficients are the whole sequence.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The series continues beyond the truncation; the sum is a lower bound.
    Unknown,
    /// All coefficients beyond the truncation vanish.
    Zero,
}

/// `sum_{j=2..N} |a_j| sigma^{j-1} / j!`.
pub fn w_norm(gamma: &FormalDiffeo, sigma: &Coefficient, tail: Tail) -> Result<NormValue> {
    rational::require_positive("sigma", sigma)?;
    let sum = gamma
        .higher()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            let j = i + 2;
            a.abs() * rational::pow(sigma, j - 1) / factorial_q(j)
        })
        .fold(Coefficient::zero(), |acc, x| acc + x);
    Ok(match tail {
        Tail::Unknown => NormValue::lower(sum),
        Tail::Zero => NormValue::exact(sum),
    })
}

/// `sum_j |p_j| t^j / (j+1)!`, the `x`-column of `L` in `V_t`.
pub fn field_weight(field: &FormalVectorField, t: &Coefficient) -> Coefficient {
    field
        .coeffs()
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let j = i + 1;
            p.abs() * rational::pow(t, j) / factorial_q(j + 1)
        })
        .fold(Coefficient::zero(), |acc, x| acc + x)
}

/// `(S, 2S)` with `S = sum |p_j| t^j / (j+1)!`; the operator norm of a
/// finitely supported field on `V_t` lies between them.
pub fn field_norm_bound(
    field: &FormalVectorField,
    t: &Coefficient,
) -> Result<(NormValue, NormValue)> {
    rational::require_positive("t", t)?;
    let s = field_weight(field, t);
    let twice = &s * rational::int(2);
    Ok((NormValue::lower(s), NormValue::upper(twice)))
}

/// `(m!/t^m) sum_i |A_{im}| t^i / i!`, the `V_t` norm ratio of column `m`.
pub fn column_norm(a: &TriangularOperator, t: &Coefficient, m: usize) -> Coefficient {
    let sum = (m..a.dim())
        .map(|i| a.entry(i, m))
        .enumerate()
        .filter(|(_, s)| !s.is_zero())
        .map(|(offset, s)| {
            let i = m + offset;
            s.abs() * rational::pow(t, i) / factorial_q(i)
        })
        .fold(Coefficient::zero(), |acc, x| acc + x);
    sum * factorial_q(m) / rational::pow(t, m)
}

/// Maximum of [`column_norm`] over columns `0..=M`.
///
/// A lower approximation of the `V_t` operator norm: unseen columns and rows
/// cut off by the truncation can only add. Nondecreasing in `M`.
pub fn operator_norm_trunc(
    a: &TriangularOperator,
    t: &Coefficient,
    columns: usize,
) -> Result<NormValue> {
    rational::require_positive("t", t)?;
    if columns >= a.dim() {
        return Err(Error::OutOfRange {
            what: "column bound",
            detail: format!("M = {columns} but the operator has dimension {}", a.dim()),
        });
    }
    let mut best = Coefficient::zero();
    let mut witness = 0;
    for m in 0..=columns {
        let v = column_norm(a, t, m);
        if v > best {
            best = v;
            witness = m;
        }
    }
    Ok(NormValue {
        value: best,
        kind: NormKind::LowerApprox,
        witness_column: Some(witness),
    })
}

/// `(n!)^2 / (2n)!`, the `V_1` norm of `x^n -> n! x^{2n}`.
pub fn qn_norm(n: usize) -> NormValue {
    let nf = factorial_q(n);
    NormValue::exact(&nf * &nf / factorial_q(2 * n))
}

/// Exact check of `(n!)^2/(2n)! <= 2 sqrt(n) / 4^n`, by squaring. Equality
/// holds at `n = 1`, so the inequality is not strict there.
pub fn qn_bound_holds(n: usize) -> bool {
    if n == 0 {
        return true;
    }
    let lhs = qn_norm(n).value * rational::pow(&rational::int(4), n) / rational::int(2);
    rational::le_sqrt(&lhs, &rational::int(n as i64))
}

/// Cross-check of [`qn_norm`]: the truncated `V_1` norm of the single-column
/// operator, computed on a space just large enough to hold `x^{2n}`.
pub fn qn_norm_by_columns(n: usize) -> Result<NormValue> {
    let dim = 2 * n + 1;
    operator_norm_trunc(&monomial_q(n, dim), &Coefficient::one(), dim - 1)
}

/// `(computed ||H||, 2 sum |a_j| / j!)` on `V_1`, failing if the computed
/// value exceeds the bound.
pub fn h_norm_bound(gamma: &FormalDiffeo) -> Result<(NormValue, NormValue)> {
    let n = gamma.order();
    let h = taylor_decomposition(gamma, n)?.h;
    let computed = operator_norm_trunc(&h, &Coefficient::one(), n)?;
    let bound = w_norm(gamma, &Coefficient::one(), Tail::Zero)?.value * rational::int(2);
    if computed.value > bound {
        return Err(Error::InvariantViolation(format!(
            "||H|| = {} exceeds 2 [|a|] = {}",
            rational::format(&computed.value),
            rational::format(&bound)
        )));
    }
    Ok((computed, NormValue::upper(bound)))
}

/// `U(k_1, k_2, ...)` with `k[0] = k_1`:
///
/// `(s+2)(s+3)...(s+p) * prod_j ((j+1)!)^{k_j} / (s+1)!`, where
/// `s = sum j k_j` and `p = sum k_j`. The ascending product is empty when
/// `p <= 1`.
pub fn u_combinatorial(k: &[u64]) -> Coefficient {
    let weighted: u64 = k
        .iter()
        .enumerate()
        .map(|(i, &kj)| (i as u64 + 1) * kj)
        .sum();
    let count: u64 = k.iter().sum();
    let mut numer = BigInt::one();
    for f in (weighted + 2)..=(weighted + count) {
        numer *= BigInt::from(f);
    }
    for (i, &kj) in k.iter().enumerate() {
        let f = rational::factorial(i + 2);
        for _ in 0..kj {
            numer *= &f;
        }
    }
    Coefficient::new(numer, rational::factorial(weighted as usize + 1))
}

/// Constants `(L, M)` with `U(k) <= L * M^{sum k_j}`. The first factor of `U`
/// is at most `binom(2l, l) <= 4^l` with `l = p - 1`, the second at most
/// `2^{p-1}`, so `U <= 8^{p-1} <= 8^p`.
pub const U_BOUND_L: u64 = 1;
pub const U_BOUND_M: u64 = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UEnumeration {
    pub max_weight: u64,
    pub tuples: usize,
    /// Largest `U(k) / 8^{sum k}` seen, with its tuple.
    pub worst_ratio: Coefficient,
    pub worst_tuple: Vec<u64>,
    pub violations: Vec<Vec<u64>>,
}

/// Checks `U(k) <= L * M^{sum k}` for every tuple with `sum j k_j <= max_weight`
/// (one tuple per partition of each weight).
pub fn u_bound_enumeration(max_weight: u64) -> UEnumeration {
    let mut report = UEnumeration {
        max_weight,
        tuples: 0,
        worst_ratio: Coefficient::zero(),
        worst_tuple: Vec::new(),
        violations: Vec::new(),
    };
    let l = rational::int(U_BOUND_L as i64);
    let m = rational::int(U_BOUND_M as i64);
    let mut k = vec![0u64; max_weight.max(1) as usize];
    enumerate_tuples(&mut k, 0, max_weight, &mut |k| {
        let tuple = trim(k);
        let u = u_combinatorial(&tuple);
        let p: u64 = tuple.iter().sum();
        let cap = &l * rational::pow(&m, p as usize);
        let ratio = &u / &cap;
        report.tuples += 1;
        if ratio > report.worst_ratio {
            report.worst_ratio = ratio;
            report.worst_tuple = tuple.clone();
        }
        if u > cap {
            report.violations.push(tuple);
        }
    });
    report
}

fn trim(k: &[u64]) -> Vec<u64> {
    let len = k.iter().rposition(|&x| x != 0).map_or(0, |i| i + 1);
    k[..len].to_vec()
}

fn enumerate_tuples(k: &mut [u64], index: usize, budget: u64, visit: &mut dyn FnMut(&[u64])) {
    if index == k.len() {
        visit(k);
        return;
    }
    let weight = index as u64 + 1;
    let mut count = 0;
    while count * weight <= budget {
        k[index] = count;
        enumerate_tuples(k, index + 1, budget - count * weight, visit);
        count += 1;
    }
    k[index] = 0;
}

/// A rational `>= exp(x)` for `x >= 0`: the Taylor polynomial through
/// `x^K/K!` plus the geometric majorant `x^{K+1}/(K+1)! / (1 - x/(K+2))` of
/// the tail, with `K + 2 > 2x`.
pub fn exp_upper(x: &Coefficient) -> Coefficient {
    assert!(!x.is_negative(), "exp_upper expects x >= 0");
    let twice = (x * rational::int(2)).ceil().to_integer();
    let k = 20usize.max(usize::try_from(twice).unwrap_or(usize::MAX / 2) + 10);
    let mut term = Coefficient::one();
    let mut sum = Coefficient::one();
    for i in 1..=k {
        term = term * x / rational::int(i as i64);
        sum += &term;
    }
    let next = term * x / rational::int(k as i64 + 1);
    let ratio = x / rational::int(k as i64 + 2);
    sum + next / (Coefficient::one() - ratio)
}

/// `(sum_{n=2..N} |c_n| / n!, L exp(M [|a|]))` for `mu = gamma^{-1}`, where
/// `[|a|] = sum_j |a_j| / j!`. Fails if the partial sum exceeds the cap.
pub fn inversion_norm_bound(gamma: &FormalDiffeo) -> Result<(NormValue, NormValue)> {
    let mu = invert(gamma);
    let partial = w_norm(&mu, &Coefficient::one(), Tail::Unknown)?;
    let weight = w_norm(gamma, &Coefficient::one(), Tail::Zero)?.value;
    let cap =
        rational::int(U_BOUND_L as i64) * exp_upper(&(weight * rational::int(U_BOUND_M as i64)));
    if partial.value > cap {
        return Err(Error::InvariantViolation(format!(
            "inverse weight {} exceeds cap {}",
            rational::format(&partial.value),
            rational::format(&cap)
        )));
    }
    Ok((partial, NormValue::upper(cap)))
}

/// Built-in coefficient families for [`membership_report`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoefficientRule {
    /// `a_j = r^j`
    Geometric(Coefficient),
    /// `a_j = j! r^j`
    Factorial(Coefficient),
    /// `a_j = (j-1)! r^j`
    Subfactorial(Coefficient),
    /// `a_2, a_3, ...` given explicitly.
    List(Vec<Coefficient>),
}

impl CoefficientRule {
    pub fn from_name(name: &str, r: Coefficient, list: Vec<Coefficient>) -> Result<Self> {
        match name {
            "geometric" => Ok(CoefficientRule::Geometric(r)),
            "factorial" => Ok(CoefficientRule::Factorial(r)),
            "subfactorial" => Ok(CoefficientRule::Subfactorial(r)),
            "list" => Ok(CoefficientRule::List(list)),
            other => Err(Error::Unknown {
                what: "coefficient rule",
                name: other.to_string(),
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CoefficientRule::Geometric(_) => "geometric",
            CoefficientRule::Factorial(_) => "factorial",
            CoefficientRule::Subfactorial(_) => "subfactorial",
            CoefficientRule::List(_) => "list",
        }
    }

    /// `a_j` for `j >= 2`.
    pub fn coefficient(&self, j: usize) -> Coefficient {
        match self {
            CoefficientRule::Geometric(r) => rational::pow(r, j),
            CoefficientRule::Factorial(r) => factorial_q(j) * rational::pow(r, j),
            CoefficientRule::Subfactorial(r) => factorial_q(j - 1) * rational::pow(r, j),
            CoefficientRule::List(values) => {
                values.get(j - 2).cloned().unwrap_or_else(Coefficient::zero)
            }
        }
    }

    pub fn diffeo(&self, order: usize) -> FormalDiffeo {
        let higher = (2..=order).map(|j| self.coefficient(j)).collect();
        FormalDiffeo::new(order.max(1), higher).expect("lengths match order")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum Membership {
    /// Growth indicator tends to zero: in `W_sigma` for every sigma.
    AllSigma,
    /// Indicator tends to a finite positive limit `c`: in `W_sigma` for
    /// `sigma < 1/c` only.
    SmallSigma { radius: f64 },
    /// Indicator grows without bound: in no `W_sigma`.
    Divergent,
}

#[derive(Clone, Debug, Serialize)]
pub struct SigmaRow {
    pub sigma: String,
    pub partial_sum: String,
    pub partial_sum_approx: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub rule: String,
    pub order: usize,
    pub sigma_rows: Vec<SigmaRow>,
    /// `(j, (|a_j|/j!)^{1/(j-1)})` for the nonzero coefficients.
    pub indicators: Vec<(usize, f64)>,
    /// Least-squares slope of `ln indicator` against `ln j` over the upper
    /// half of the range.
    pub log_slope: f64,
    pub membership: Membership,
}

pub fn default_sigma_grid() -> Vec<Coefficient> {
    vec![
        rational::ratio(1, 4),
        rational::ratio(1, 2),
        rational::int(1),
        rational::int(2),
        rational::int(4),
    ]
}

/// Growth diagnostic for `x + sum a_j x^j` with `a_j` from `rule`.
///
/// Root-test heuristic on the first `N` coefficients; it classifies the
/// trend, it proves nothing about the infinite sequence.
pub fn membership_report(
    rule: &CoefficientRule,
    order: usize,
    sigmas: &[Coefficient],
) -> Result<MembershipReport> {
    if order < 2 {
        return Err(Error::OutOfRange {
            what: "order",
            detail: "membership diagnostics need order >= 2".into(),
        });
    }
    let gamma = rule.diffeo(order);
    let sigma_rows = sigmas
        .iter()
        .map(|s| {
            let v = w_norm(&gamma, s, Tail::Unknown)?.value;
            Ok(SigmaRow {
                sigma: rational::format(s),
                partial_sum: rational::format(&v),
                partial_sum_approx: rational::to_f64(&v),
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let mut ln_factorial = 0f64;
    let mut indicators = Vec::new();
    for j in 2..=order {
        ln_factorial += (j as f64).ln();
        let a = gamma.coeff(j);
        if a.is_zero() {
            continue;
        }
        let ln_g = (rational::ln_abs(&a) - ln_factorial) / (j as f64 - 1.0);
        indicators.push((j, ln_g.exp()));
    }

    let tail: Vec<(f64, f64)> = indicators
        .iter()
        .filter(|(j, _)| 2 * j >= order)
        .map(|&(j, g)| ((j as f64).ln(), g.ln()))
        .collect();
    let log_slope = least_squares_slope(&tail);
    let membership = match indicators.last() {
        None => Membership::AllSigma,
        Some(_) if tail.len() < 2 => Membership::AllSigma,
        Some(_) if log_slope < -0.5 => Membership::AllSigma,
        Some(_) if log_slope > 0.5 => Membership::Divergent,
        Some(&(_, g)) => Membership::SmallSigma { radius: 1.0 / g },
    };
    Ok(MembershipReport {
        rule: rule.name().to_string(),
        order,
        sigma_rows,
        indicators,
        log_slope,
        membership,
    })
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::series::scale_automorphism;
    use crate::triangular::rep_field;

    fn diffeo(order: usize, higher: &[i64]) -> FormalDiffeo {
        FormalDiffeo::new(order, higher.iter().map(|&a| int(a)).collect()).unwrap()
    }

    #[test]
    fn w_norm_examples() {
        let g = diffeo(3, &[2, 6]);
        assert_eq!(w_norm(&g, &int(1), Tail::Zero).unwrap().value, int(2));
        assert_eq!(
            w_norm(&g, &int(1), Tail::Unknown).unwrap().kind,
            NormKind::LowerApprox
        );
        assert!(w_norm(&FormalDiffeo::identity(5), &int(1), Tail::Zero)
            .unwrap()
            .value
            .is_zero());
        let sigma = ratio(3, 2);
        assert_eq!(
            w_norm(&scale_automorphism(&g, &sigma), &int(1), Tail::Zero).unwrap(),
            w_norm(&g, &sigma, Tail::Zero).unwrap()
        );
        assert!(w_norm(&g, &int(0), Tail::Zero).is_err());
    }

    #[test]
    fn field_bounds() {
        let f = FormalVectorField::basis(4, 1, int(2)).unwrap();
        let (lo, hi) = field_norm_bound(&f, &int(1)).unwrap();
        assert_eq!((lo.value, hi.value), (int(1), int(2)));
        let (lo, hi) = field_norm_bound(&FormalVectorField::zero(4), &int(1)).unwrap();
        assert!(lo.value.is_zero() && hi.value.is_zero());
        assert!(field_norm_bound(&f, &int(-1)).is_err());
    }

    #[test]
    fn l1_columns_approach_one() {
        let l1 = FormalVectorField::basis(20, 1, int(1)).unwrap();
        let a = rep_field(&l1, 21).unwrap();
        for m in 1..=20 {
            let v = operator_norm_trunc(&a, &int(1), m).unwrap();
            assert_eq!(v.value, ratio(m as i64, m as i64 + 1));
            assert_eq!(v.witness_column, Some(m));
        }
    }

    #[test]
    fn l2_norm_is_one_sixth() {
        let l2 = FormalVectorField::basis(20, 2, int(1)).unwrap();
        let a = rep_field(&l2, 21).unwrap();
        for m in 2..=19 {
            let v = operator_norm_trunc(&a, &int(1), m).unwrap();
            assert_eq!(v.value, ratio(1, 6));
            assert_eq!(v.witness_column, Some(1));
        }
        assert_eq!(column_norm(&a, &int(1), 2), ratio(1, 6));
    }

    #[test]
    fn identity_has_norm_one() {
        let v = operator_norm_trunc(&TriangularOperator::identity(6), &ratio(1, 2), 5).unwrap();
        assert_eq!(v.value, int(1));
        assert!(operator_norm_trunc(&TriangularOperator::identity(6), &int(1), 6).is_err());
    }

    #[test]
    fn qn_values() {
        assert_eq!(qn_norm(0).value, int(1));
        assert_eq!(qn_norm(2).value, ratio(1, 6));
        assert_eq!(qn_norm(5).value, ratio(1, 252));
        for n in 0..=10 {
            assert_eq!(qn_norm_by_columns(n).unwrap().value, qn_norm(n).value);
            assert!(qn_bound_holds(n), "n = {n}");
        }
        // Equality at n = 1: 1/2 = 2 sqrt(1) / 4.
        assert_eq!(qn_norm(1).value * int(4) / int(2), int(1));
    }

    #[test]
    fn h_norm_of_x_plus_x2_is_tight() {
        let (computed, bound) = h_norm_bound(&diffeo(8, &[1])).unwrap();
        assert_eq!(computed.value, int(1));
        assert_eq!(bound.value, int(1));
        let (c, b) = h_norm_bound(&FormalDiffeo::identity(6)).unwrap();
        assert!(c.value.is_zero() && b.value.is_zero());
    }

    #[test]
    fn u_examples() {
        assert_eq!(u_combinatorial(&[1]), int(1));
        assert_eq!(u_combinatorial(&[]), int(1));
        assert_eq!(u_combinatorial(&[0, 0, 0]), int(1));
        // k_1 = 2: s = 2, p = 2: (4) * (2!)^2 / 3! = 16/6
        assert_eq!(u_combinatorial(&[2]), ratio(8, 3));
        // k_2 = 1: s = 2, p = 1: 3! / 3! = 1
        assert_eq!(u_combinatorial(&[0, 1]), int(1));
    }

    #[test]
    fn u_bound_small_range() {
        let report = u_bound_enumeration(8);
        // Partitions of 0..=8: 1+1+2+3+5+7+11+15+22
        assert_eq!(report.tuples, 67);
        assert!(report.violations.is_empty());
        assert!(report.worst_ratio <= int(1));
    }

    #[test]
    fn exp_upper_brackets_exp() {
        for (n, d) in [(0, 1), (1, 1), (4, 1), (17, 3), (40, 1)] {
            let x = ratio(n, d);
            let up = rational::to_f64(&exp_upper(&x));
            let truth = (n as f64 / d as f64).exp();
            assert!(up >= truth * (1.0 - 1e-12), "x = {n}/{d}");
            assert!(up <= truth * (1.0 + 1e-9), "x = {n}/{d}");
        }
        assert_eq!(exp_upper(&int(0)), int(1));
    }

    #[test]
    fn inversion_bound_examples() {
        let (s, cap) = inversion_norm_bound(&FormalDiffeo::identity(6)).unwrap();
        assert!(s.value.is_zero());
        assert_eq!(cap.value, int(1));

        let g = diffeo(12, &[1]);
        let (s, cap) = inversion_norm_bound(&g).unwrap();
        // Catalan(n-1) / n! for n = 2..=12
        let catalan = [1i64, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786];
        let expected = catalan
            .iter()
            .enumerate()
            .map(|(i, &c)| int(c) / factorial_q(i + 2))
            .fold(Coefficient::zero(), |a, b| a + b);
        assert_eq!(s.value, expected);
        assert!(rational::to_f64(&cap.value) >= 4f64.exp());
    }

    #[test]
    fn membership_examples() {
        let grid = default_sigma_grid();
        let ones = CoefficientRule::Geometric(int(1));
        let r = membership_report(&ones, 40, &grid).unwrap();
        assert_eq!(r.membership, Membership::AllSigma);
        assert!(r.indicators.last().unwrap().1 < 0.1);

        let fact = CoefficientRule::Factorial(int(1));
        let r = membership_report(&fact, 40, &grid).unwrap();
        match r.membership {
            Membership::SmallSigma { radius } => assert!((radius - 1.0).abs() < 1e-9),
            other => panic!("unexpected {other:?}"),
        }

        let squares: Vec<_> = (2..=40).map(|j| factorial_q(j) * factorial_q(j)).collect();
        let r = membership_report(&CoefficientRule::List(squares), 40, &grid).unwrap();
        assert_eq!(r.membership, Membership::Divergent);

        assert!(CoefficientRule::from_name("bogus", int(1), vec![]).is_err());
    }
}
