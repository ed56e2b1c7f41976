//! Seeded invariant suites.
//!
//! Each suite draws its instances from a stream derived from the seed and the
//! suite name, so `all` reproduces the individual suites exactly. Reports
//! contain no timings and serialize with sorted keys.

use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freealg::{
    inclusion_check, pbw_straighten, pi_map, q1_norm, q1_norm_joint, q_lower_vect, q_norm_weighted,
    q_upper_vect, qt_norm, r_norm, recursion_bound, represent, PivotRule, Strategy, UElement,
};
use crate::json::{diffeo_to_json, field_to_json, nc_polynomial_to_json, uelement_to_json};
use crate::lie::{bracket, exp_field, exp_field_flow, geometric_flow, log_diffeo};
use crate::norms::{
    field_weight, h_norm_bound, inversion_norm_bound, operator_norm_trunc, qn_bound_holds, qn_norm,
    qn_norm_by_columns, u_bound_enumeration, w_norm, Tail,
};
use crate::random::Instances;
use crate::rational::{self, Coefficient};
use crate::series::{
    compose, invert, invert_lagrange, invert_recursive, scale_automorphism, scale_field,
    FormalDiffeo, FormalVectorField,
};
use crate::triangular::{rep_field, rep_t, taylor_decomposition};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Group,
    Operators,
    Norms,
    Freealg,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(Suite::Group),
            "operators" => Ok(Suite::Operators),
            "norms" => Ok(Suite::Norms),
            "freealg" => Ok(Suite::Freealg),
            "all" => Ok(Suite::All),
            other => Err(Error::Unknown {
                what: "suite",
                name: other.to_string(),
            }),
        }
    }
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Group => "group",
            Suite::Operators => "operators",
            Suite::Norms => "norms",
            Suite::Freealg => "freealg",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub order: usize,
    pub seed: u64,
    pub pivot: PivotRule,
    /// Appends a check that always fails, to exercise failure reporting.
    pub force_fail: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            order: 12,
            seed: 0,
            pivot: PivotRule::Bland,
            force_fail: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub invariant: String,
    pub instances: usize,
    pub passed: bool,
    /// First failing instance, with the error message if the check errored.
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub order: usize,
    pub seed: u64,
    pub lp_pivot: String,
    pub suites: Vec<SuiteReport>,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report fields serialize")
    }
}

#[derive(Default)]
struct Checks {
    out: Vec<CheckResult>,
}

impl Checks {
    fn run<T>(
        &mut self,
        name: &str,
        items: &[T],
        mut holds: impl FnMut(&T) -> Result<bool>,
        show: impl Fn(&T) -> Value,
    ) {
        let mut counterexample = None;
        for item in items {
            match holds(item) {
                Ok(true) => {}
                Ok(false) => {
                    counterexample = Some(json!({ "input": show(item) }));
                    break;
                }
                Err(e) => {
                    counterexample = Some(json!({ "input": show(item), "error": e.to_string() }));
                    break;
                }
            }
        }
        log::debug!(
            "{name}: {} instances, passed = {}",
            items.len(),
            counterexample.is_none()
        );
        self.out.push(CheckResult {
            invariant: name.to_string(),
            instances: items.len(),
            passed: counterexample.is_none(),
            counterexample,
        });
    }

    fn single(&mut self, name: &str, holds: impl FnOnce() -> Result<bool>, show: Value) {
        let mut once = Some(holds);
        self.run(
            name,
            &[()],
            |_| (once.take().expect("called once"))(),
            |_| show.clone(),
        );
    }

    fn finish(self, suite: Suite) -> SuiteReport {
        let passed = self.out.iter().all(|c| c.passed);
        SuiteReport {
            suite: suite.name().to_string(),
            checks: self.out,
            passed,
        }
    }
}

pub fn run(suite: Suite, cfg: &VerifyConfig) -> Result<VerifyReport> {
    if cfg.order < 2 {
        return Err(Error::OutOfRange {
            what: "order",
            detail: "verification suites need order >= 2".into(),
        });
    }
    let suites = match suite {
        Suite::All => vec![Suite::Group, Suite::Operators, Suite::Norms, Suite::Freealg],
        one => vec![one],
    };
    let mut reports: Vec<SuiteReport> = suites
        .into_iter()
        .map(|s| match s {
            Suite::Group => group_suite(cfg),
            Suite::Operators => operators_suite(cfg),
            Suite::Norms => norms_suite(cfg),
            _ => freealg_suite(cfg),
        })
        .collect();
    if cfg.force_fail {
        let mut checks = Checks::default();
        checks.single("forced_failure", || Ok(false), json!("injected by request"));
        let last = reports.last_mut().expect("at least one suite runs");
        last.checks.append(&mut checks.out);
        last.passed = false;
    }
    let passed = reports.iter().all(|r| r.passed);
    Ok(VerifyReport {
        order: cfg.order,
        seed: cfg.seed,
        lp_pivot: cfg.pivot.name().to_string(),
        suites: reports,
        passed,
    })
}

fn pair_json(a: &FormalDiffeo, b: &FormalDiffeo) -> Value {
    json!([diffeo_to_json(a), diffeo_to_json(b)])
}

fn group_suite(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.order;
    let mut rng = Instances::derived(cfg.seed, "group");
    let triples: Vec<[FormalDiffeo; 3]> = (0..200)
        .map(|_| [rng.diffeo(n), rng.diffeo(n), rng.diffeo(n)])
        .collect();
    let id = FormalDiffeo::identity(n);
    let mut c = Checks::default();
    let show3 = |t: &[FormalDiffeo; 3]| json!(t.iter().map(diffeo_to_json).collect::<Vec<_>>());
    let show1 = |t: &[FormalDiffeo; 3]| diffeo_to_json(&t[0]);

    c.run(
        "associativity",
        &triples,
        |[a, b, g]| Ok(compose(&compose(a, b)?, g)? == compose(a, &compose(b, g)?)?),
        show3,
    );
    c.run(
        "two_sided_identity",
        &triples,
        |[a, ..]| Ok(compose(a, &id)? == *a && compose(&id, a)? == *a),
        show1,
    );
    c.run(
        "two_sided_inverse",
        &triples,
        |[a, ..]| {
            let inv = invert(a);
            Ok(compose(a, &inv)?.is_identity() && compose(&inv, a)?.is_identity())
        },
        show1,
    );
    c.run(
        "inversion_oracles_agree",
        &triples,
        |[a, ..]| Ok(invert_lagrange(a) == invert_recursive(a)),
        show1,
    );
    let catalan = FormalDiffeo::new(n, {
        let mut v = vec![Coefficient::zero(); n - 1];
        v[0] = Coefficient::one();
        v
    })
    .expect("order >= 2");
    c.single(
        "inverse_of_x_plus_x2_is_signed_catalan",
        || {
            let inv = invert_lagrange(&catalan);
            Ok((2..=n).all(|j| {
                let k = j - 1;
                let cat = rational::factorial_q(2 * k)
                    / (rational::factorial_q(k + 1) * rational::factorial_q(k));
                let sign = if k % 2 == 1 {
                    -Coefficient::one()
                } else {
                    Coefficient::one()
                };
                inv.coeff(j) == sign * cat
            }))
        },
        diffeo_to_json(&catalan),
    );
    let cuts: Vec<usize> = (0..triples.len()).map(|_| rng.range(1, n)).collect();
    let indexed: Vec<(usize, &[FormalDiffeo; 3])> = cuts.iter().copied().zip(&triples).collect();
    c.run(
        "truncation_is_a_homomorphism",
        &indexed,
        |(k, [a, b, _])| {
            Ok(compose(a, b)?.truncate_to(*k) == compose(&a.truncate_to(*k), &b.truncate_to(*k))?)
        },
        |(k, [a, b, _])| json!({ "order": k, "pair": pair_json(a, b) }),
    );
    let sigmas: Vec<Coefficient> = (0..triples.len()).map(|_| rng.rational()).collect();
    let scaled: Vec<(&Coefficient, &[FormalDiffeo; 3])> = sigmas.iter().zip(&triples).collect();
    c.run(
        "scaling_is_an_automorphism",
        &scaled,
        |(s, [a, b, _])| {
            Ok(scale_automorphism(&compose(a, b)?, s)
                == compose(&scale_automorphism(a, s), &scale_automorphism(b, s))?)
        },
        |(s, [a, b, _])| json!({ "sigma": rational::format(s), "pair": pair_json(a, b) }),
    );
    c.finish(Suite::Group)
}

fn operators_suite(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.order;
    let mut rng = Instances::derived(cfg.seed, "operators");
    let pairs: Vec<(FormalDiffeo, FormalDiffeo)> =
        (0..100).map(|_| (rng.diffeo(n), rng.diffeo(n))).collect();
    let fields: Vec<[FormalVectorField; 3]> = (0..100)
        .map(|_| [rng.field(n - 1), rng.field(n - 1), rng.field(n - 1)])
        .collect();
    let mut c = Checks::default();
    let show_pair = |(a, b): &(FormalDiffeo, FormalDiffeo)| pair_json(a, b);
    let show_f =
        |f: &[FormalVectorField; 3]| json!(f.iter().map(field_to_json).collect::<Vec<_>>());
    let show_f1 = |f: &[FormalVectorField; 3]| field_to_json(&f[0]);

    c.run(
        "substitution_reverses_composition",
        &pairs,
        |(a, b)| Ok(rep_t(a, n)?.mul(&rep_t(b, n)?)? == rep_t(&compose(b, a)?, n)?),
        show_pair,
    );
    c.run(
        "field_representation_preserves_bracket",
        &fields,
        |[a, b, _]| {
            let lhs = rep_field(&bracket(a, b)?, n)?;
            Ok(lhs == rep_field(a, n)?.commutator(&rep_field(b, n)?)?)
        },
        show_f,
    );
    c.run(
        "jacobi_identity",
        &fields,
        |[a, b, g]| {
            let s = bracket(a, &bracket(b, g)?)?
                .add(&bracket(b, &bracket(g, a)?)?)
                .add(&bracket(g, &bracket(a, b)?)?);
            Ok(s.is_zero())
        },
        show_f,
    );
    c.run(
        "exp_matrix_equals_flow",
        &fields,
        |[a, ..]| Ok(exp_field(a) == exp_field_flow(a)),
        show_f1,
    );
    c.run(
        "log_of_exp_is_identity",
        &fields,
        |[a, ..]| Ok(log_diffeo(&exp_field(a))? == *a),
        show_f1,
    );
    c.run(
        "exp_of_log_is_identity",
        &pairs,
        |(g, _)| Ok(exp_field(&log_diffeo(g)?) == *g),
        |(g, _)| diffeo_to_json(g),
    );
    let sigmas: Vec<Coefficient> = (0..fields.len()).map(|_| rng.rational()).collect();
    let scaled: Vec<(&Coefficient, &[FormalVectorField; 3])> = sigmas.iter().zip(&fields).collect();
    c.run(
        "exp_commutes_with_scaling",
        &scaled,
        |(s, [a, ..])| Ok(exp_field(&scale_field(a, s)) == scale_automorphism(&exp_field(a), s)),
        |(s, [a, ..])| json!({ "sigma": rational::format(s), "field": field_to_json(a) }),
    );
    c.run(
        "taylor_decomposition_reassembles",
        &pairs,
        |(g, _)| taylor_decomposition(g, n).map(|_| true),
        |(g, _)| diffeo_to_json(g),
    );
    let l1 = FormalVectorField::basis(n - 1, 1, Coefficient::one()).expect("n >= 2");
    c.single(
        "exp_of_l1_is_x_over_1_minus_x",
        || Ok(exp_field(&l1) == geometric_flow(n, &Coefficient::one())),
        field_to_json(&l1),
    );
    c.finish(Suite::Operators)
}

fn norms_suite(cfg: &VerifyConfig) -> SuiteReport {
    let n = cfg.order;
    let mut rng = Instances::derived(cfg.seed, "norms");
    let mut c = Checks::default();

    let ns: Vec<usize> = (0..=10).collect();
    c.run(
        "qn_norm_matches_columns",
        &ns,
        |&k| Ok(qn_norm_by_columns(k)?.value == qn_norm(k).value),
        |k| json!(k),
    );
    c.run(
        "qn_norm_below_sqrt_bound",
        &ns[1..],
        |&k| Ok(qn_bound_holds(k)),
        |k| json!(k),
    );

    let diffeos: Vec<FormalDiffeo> = (0..100).map(|_| rng.diffeo(n)).collect();
    c.run(
        "h_norm_below_twice_weight",
        &diffeos,
        |g| h_norm_bound(g).map(|_| true),
        diffeo_to_json,
    );

    let ts = [rational::ratio(1, 2), Coefficient::one(), rational::int(2)];
    let fields: Vec<(Coefficient, FormalVectorField)> = (0..100)
        .map(|i| (ts[i % 3].clone(), rng.supported_field(6, 4)))
        .collect();
    c.run(
        "field_norm_sandwich_and_monotone",
        &fields,
        |(t, f)| {
            let top = f.top_degree().max(1);
            let lower = field_weight(f, t);
            let upper = &lower * rational::int(2);
            let mut prev = Coefficient::zero();
            for m in [2usize, 4, 8, 16] {
                let a = rep_field(&f.padded(m + top), m + top)?;
                let v = operator_norm_trunc(&a, t, m)?.value;
                if v < prev || v < lower || v > upper {
                    return Ok(false);
                }
                prev = v;
            }
            Ok(true)
        },
        |(t, f)| json!({ "t": rational::format(t), "field": field_to_json(f) }),
    );

    let ops: Vec<(FormalVectorField, FormalVectorField)> = (0..100)
        .map(|_| (rng.supported_field(4, 4), rng.supported_field(4, 4)))
        .collect();
    c.run(
        "operator_norm_submultiplicative",
        &ops,
        |(a, b)| {
            let (m, t) = (6usize, Coefficient::one());
            let deg_b = b.top_degree();
            let dim = m + deg_b + 4 + 1;
            let ra = rep_field(&a.padded(dim), dim - 1)?;
            let rb = rep_field(&b.padded(dim), dim - 1)?;
            let ab = operator_norm_trunc(&ra.mul(&rb)?, &t, m)?.value;
            let na = operator_norm_trunc(&ra, &t, m + deg_b)?.value;
            let nb = operator_norm_trunc(&rb, &t, m)?.value;
            Ok(ab <= na * nb)
        },
        |(a, b)| json!([field_to_json(a), field_to_json(b)]),
    );

    let scalings: Vec<(Coefficient, Coefficient, FormalDiffeo)> = (0..100)
        .map(|_| (rng.positive(4), rng.positive(4), rng.diffeo(n)))
        .collect();
    c.run(
        "w_norm_scaling",
        &scalings,
        |(s, tau, g)| {
            let lhs = w_norm(&scale_automorphism(g, tau), s, Tail::Zero)?.value;
            Ok(lhs == w_norm(g, &(s * tau), Tail::Zero)?.value)
        },
        |(s, tau, g)| {
            json!({ "sigma": rational::format(s), "tau": rational::format(tau), "gamma": diffeo_to_json(g) })
        },
    );

    let enumeration = u_bound_enumeration(20);
    c.run(
        "combinatorial_bound_to_weight_20",
        &[enumeration],
        |e| Ok(e.violations.is_empty()),
        |e| json!({ "violations": e.violations, "tuples": e.tuples }),
    );

    let small: Vec<FormalDiffeo> = (0..100).map(|_| rng.small_diffeo(n)).collect();
    c.run(
        "inversion_below_exp_cap",
        &small,
        |g| inversion_norm_bound(g).map(|_| true),
        diffeo_to_json,
    );
    c.finish(Suite::Norms)
}

fn freealg_suite(cfg: &VerifyConfig) -> SuiteReport {
    let rule = cfg.pivot;
    let mut rng = Instances::derived(cfg.seed, "freealg");
    let mut c = Checks::default();
    let gen = |k: usize| UElement::generator(k, Coefficient::one()).expect("k >= 1");

    let goldens = [(1usize, 1i64), (2, 1), (3, 2)];
    c.run(
        "q1_goldens",
        &goldens,
        |&(k, v)| Ok(q1_norm(&gen(k), rule)?.norm.value == rational::int(v)),
        |(k, v)| json!({ "n": k, "expected": v }),
    );
    let ns: Vec<usize> = (3..=8).collect();
    c.run(
        "q1_below_recursion_bound",
        &ns,
        |&k| Ok(q1_norm(&gen(k), rule)?.norm.value <= recursion_bound(k, &Coefficient::one())),
        |k| json!(k),
    );

    let polys: Vec<_> = (0..50)
        .map(|_| {
            (
                rng.nc_polynomial(3, 4),
                rng.nc_polynomial(3, 4),
                rng.positive(4),
                rng.positive(4),
            )
        })
        .collect();
    let show_polys = |(p, q, t1, t2): &(_, _, Coefficient, Coefficient)| {
        json!({
            "p": nc_polynomial_to_json(p),
            "q": nc_polynomial_to_json(q),
            "t1": rational::format(t1),
            "t2": rational::format(t2),
        })
    };
    c.run(
        "r_norm_submultiplicative",
        &polys,
        |(p, q, t1, t2)| {
            let pq = r_norm(&p.mul(q), t1, t2)?.value;
            Ok(pq <= r_norm(p, t1, t2)?.value * r_norm(q, t1, t2)?.value)
        },
        show_polys,
    );
    c.run(
        "r_norm_monotone",
        &polys,
        |(p, _, t1, t2)| {
            let bigger = |t: &Coefficient| t * rational::ratio(3, 2);
            Ok(r_norm(p, t1, t2)?.value <= r_norm(p, &bigger(t1), &bigger(t2))?.value)
        },
        show_polys,
    );
    c.run(
        "pi_is_a_homomorphism",
        &polys,
        |(p, q, ..)| Ok(pi_map(&p.mul(q)) == pi_map(p).mul(&pi_map(q))),
        show_polys,
    );

    let products: Vec<(Vec<usize>, Coefficient)> = (0..500)
        .map(|_| (rng.raw_product(6, 14), rng.rational()))
        .collect();
    c.run(
        "pbw_confluence",
        &products,
        |item| {
            let raw = std::slice::from_ref(item);
            Ok(pbw_straighten(raw, Strategy::Leftmost)?
                == pbw_straighten(raw, Strategy::Rightmost)?)
        },
        |(w, c)| json!({ "indices": w, "coeff": rational::format(c) }),
    );

    let pairs: Vec<(UElement, UElement)> = (0..50)
        .map(|_| {
            let k1 = rng.range(1, 4);
            let k2 = k1 + rng.range(1, 2);
            (rng.homogeneous(k1), rng.homogeneous(k2))
        })
        .collect();
    c.run(
        "q1_additive_over_components",
        &pairs,
        |(a, b)| {
            let sum = q1_norm(a, rule)?.norm.value + q1_norm(b, rule)?.norm.value;
            Ok(q1_norm_joint(&a.add(b), rule)? == sum)
        },
        |(a, b)| json!([uelement_to_json(a), uelement_to_json(b)]),
    );

    let homog: Vec<(UElement, Coefficient)> = (0..50)
        .map(|_| {
            let k = rng.range(1, 5);
            (rng.homogeneous(k), rng.positive(5))
        })
        .collect();
    c.run(
        "qt_homogeneous",
        &homog,
        |(u, t)| {
            let k = u.max_degree();
            let weighted = q_norm_weighted(u, t, &(t * t), rule)?.norm.value;
            Ok(weighted == rational::pow(t, k) * q1_norm(u, rule)?.norm.value)
        },
        |(u, t)| json!({ "u": uelement_to_json(u), "t": rational::format(t) }),
    );

    let sandwich: Vec<(FormalVectorField, Coefficient)> = (0..50)
        .map(|_| (rng.supported_field(6, 6), rng.positive(4)))
        .collect();
    c.run(
        "lower_q_upper_sandwich",
        &sandwich,
        |(f, t)| {
            let u = UElement::from_field(f);
            let lower = q_lower_vect(&u, t, 12)?.norm.value;
            let q = qt_norm(&u, t, rule)?.norm.value;
            let upper = q_upper_vect(f, t)?.homogeneous.value;
            Ok(lower <= q && q <= upper)
        },
        |(f, t)| json!({ "field": field_to_json(f), "t": rational::format(t) }),
    );

    let words: Vec<(crate::freealg::Word, Coefficient)> =
        (0..50).map(|_| (rng.word(5), rng.positive(3))).collect();
    c.run(
        "representation_dominated_by_r_norm",
        &words,
        |(w, t)| {
            let p = crate::freealg::NCPolynomial::monomial(w.clone(), Coefficient::one());
            let u = pi_map(&p);
            let dim = 10 + u.max_degree() + 1;
            let rho = operator_norm_trunc(&represent(&u, dim)?, t, 10)?.value;
            Ok(rho <= r_norm(&p, t, &(t * t / rational::int(6)))?.value)
        },
        |(w, t)| json!({ "word": w.to_string(), "t": rational::format(t) }),
    );

    let ts = [rational::ratio(1, 2), Coefficient::one(), rational::int(2)];
    c.run(
        "inclusion_pattern",
        &ts,
        |t| Ok(inclusion_check(t, 6, rule)?.violations.is_empty()),
        |t| json!(rational::format(t)),
    );
    c.finish(Suite::Freealg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_pass_and_repeat() {
        let cfg = VerifyConfig {
            order: 6,
            seed: 3,
            ..VerifyConfig::default()
        };
        let a = run(Suite::All, &cfg).unwrap();
        for s in &a.suites {
            for ch in &s.checks {
                assert!(ch.passed, "{}: {:?}", ch.invariant, ch.counterexample);
            }
        }
        assert_eq!(a.to_json(), run(Suite::All, &cfg).unwrap().to_json());
    }

    #[test]
    fn forced_failure_is_reported() {
        let cfg = VerifyConfig {
            order: 4,
            force_fail: true,
            ..VerifyConfig::default()
        };
        let r = run(Suite::Group, &cfg).unwrap();
        assert!(!r.passed);
        assert!("bogus".parse::<Suite>().is_err());
    }
}
