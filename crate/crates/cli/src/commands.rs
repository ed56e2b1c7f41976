use num_traits::{One, Signed, Zero};
use prodiff::freealg::{
    inclusion_check, q_lower_vect, q_upper_vect, qt_norm, InclusionReport, PivotRule, UElement,
};
use prodiff::json::{self, Element};
use prodiff::lie::{bch, exp_field, exp_field_flow, log_diffeo};
use prodiff::norms::{
    default_sigma_grid, field_norm_bound, membership_report, operator_norm_trunc, w_norm,
    CoefficientRule, Membership, NormValue, Tail,
};
use prodiff::rational::{self, factorial_q, Coefficient};
use prodiff::series::{compose, invert_lagrange, invert_recursive};
use prodiff::triangular::{rep_field, rep_t};
use prodiff::verify::{self, Suite, VerifyConfig};
use prodiff::{Error, FormalVectorField, Result};
use serde_json::{json, Value};

use crate::input::load;
use crate::{
    Cli, Command, ExpMethod, Format, InvertMethod, NormArgs, Outcome, QnormArgs, ReportArgs,
    ReportKind, Space,
};

fn ok_json(value: &Value) -> Result<Outcome> {
    Ok(Outcome {
        text: json::render(value),
        code: 0,
    })
}

fn q(c: &Coefficient) -> Value {
    Value::String(rational::format(c))
}

pub fn dispatch(cli: &Cli) -> Result<Outcome> {
    let pivot: PivotRule = cli.lp_pivot.into();
    match &cli.command {
        Command::Compose { first, second } => {
            let a = json::diffeo_from_json(&load(first)?)?;
            let b = json::diffeo_from_json(&load(second)?)?;
            let n = a.order().min(b.order());
            ok_json(&json::diffeo_to_json(&compose(
                &a.truncate_to(n),
                &b.truncate_to(n),
            )?))
        }
        Command::Invert { input, method } => {
            let g = json::diffeo_from_json(&load(input)?)?;
            let inv = match method {
                InvertMethod::Lagrange => invert_lagrange(&g),
                InvertMethod::Recursive => invert_recursive(&g),
            };
            ok_json(&json::diffeo_to_json(&inv))
        }
        Command::Exp { input, method } => {
            let f = json::field_from_json(&load(input)?)?;
            let g = match method {
                ExpMethod::Matrix => exp_field(&f),
                ExpMethod::Flow => exp_field_flow(&f),
            };
            ok_json(&json::diffeo_to_json(&g))
        }
        Command::Log { input } => {
            let g = json::diffeo_from_json(&load(input)?)?;
            ok_json(&json::field_to_json(&log_diffeo(&g)?))
        }
        Command::Bch { first, second } => {
            let a = json::field_from_json(&load(first)?)?;
            let b = json::field_from_json(&load(second)?)?;
            let n = a.order().min(b.order());
            ok_json(&json::field_to_json(&bch(
                &a.truncate_to(n),
                &b.truncate_to(n),
            )?))
        }
        Command::Norm(args) => norm(args),
        Command::Qnorm(args) => qnorm(args, pivot),
        Command::Verify { suite, force_fail } => {
            let suite: Suite = suite.parse()?;
            let cfg = VerifyConfig {
                order: cli.order as usize,
                seed: cli.seed,
                pivot,
                force_fail: *force_fail,
            };
            let report = verify::run(suite, &cfg)?;
            Ok(Outcome {
                text: json::render(&report.to_json()),
                code: if report.passed { 0 } else { 4 },
            })
        }
        Command::Report(args) => report(args, cli.order as usize, pivot),
    }
}

fn with_fields(norm: &NormValue, extra: Value) -> Value {
    let mut out = norm.to_json();
    if let (Some(obj), Value::Object(more)) = (out.as_object_mut(), extra) {
        obj.extend(more);
    }
    out
}

fn norm(args: &NormArgs) -> Result<Outcome> {
    let element = json::element_from_json(&load(&args.input)?)?;
    let tail = if args.polynomial {
        Tail::Zero
    } else {
        Tail::Unknown
    };
    match args.space {
        Space::W => {
            let Element::Diffeo(g) = element else {
                return Err(Error::parse("kind", "the w space takes a diffeo"));
            };
            let sigma = args.sigma.clone().unwrap_or_else(Coefficient::one);
            let v = w_norm(&g, &sigma, tail)?;
            ok_json(&with_fields(
                &v,
                json!({ "space": "w", "sigma": q(&sigma) }),
            ))
        }
        Space::Vt => {
            let t = args.t.clone().unwrap_or_else(Coefficient::one);
            rational::require_positive("t", &t)?;
            let series: Vec<(usize, Coefficient)> = match &element {
                Element::Diffeo(g) => (1..=g.order()).map(|m| (m, g.coeff(m))).collect(),
                Element::Field(f) => (1..=f.order()).map(|j| (j + 1, f.coeff(j))).collect(),
            };
            let sum = series
                .iter()
                .map(|(m, c)| c.abs() * rational::pow(&t, *m) / factorial_q(*m))
                .fold(Coefficient::zero(), |a, b| a + b);
            let v = match tail {
                Tail::Zero => NormValue::exact(sum),
                Tail::Unknown => NormValue::lower(sum),
            };
            ok_json(&with_fields(&v, json!({ "space": "vt", "t": q(&t) })))
        }
        Space::Op => {
            let t = args.t.clone().unwrap_or_else(Coefficient::one);
            let (matrix, columns, bounds) = match &element {
                Element::Diffeo(g) => {
                    let n = g.order();
                    (rep_t(g, n)?, args.columns.unwrap_or(n), None)
                }
                Element::Field(f) => {
                    let n = f.order();
                    let columns = args.columns.unwrap_or(n);
                    if args.polynomial {
                        let dim = columns + n;
                        let (lo, hi) = field_norm_bound(f, &t)?;
                        (rep_field(&f.padded(dim), dim)?, columns, Some((lo, hi)))
                    } else {
                        (rep_field(f, n + 1)?, columns, None)
                    }
                }
            };
            let v = operator_norm_trunc(&matrix, &t, columns)?;
            let mut extra = json!({ "space": "op", "t": q(&t), "columns": columns });
            if let Some((lo, hi)) = bounds {
                extra["bounds"] = json!({ "lower": q(&lo.value), "upper": q(&hi.value) });
            }
            if args.dump_matrix {
                extra["matrix"] = json::operator_to_json(&matrix);
            }
            ok_json(&with_fields(&v, extra))
        }
    }
}

fn uelement_input(value: &Value) -> Result<UElement> {
    if value.get("components").is_some() {
        return json::uelement_from_json(value);
    }
    match json::element_from_json(value)? {
        Element::Field(f) => Ok(UElement::from_field(&f)),
        Element::Diffeo(_) => Err(Error::parse(
            "kind",
            "expected a field or an enveloping-algebra element",
        )),
    }
}

/// `sum p_j L_j` if every monomial of `u` is a single generator.
fn as_field(u: &UElement) -> Result<FormalVectorField> {
    let order = u.max_degree().max(1);
    let mut coeffs = vec![Coefficient::zero(); order];
    for (m, c) in u.terms() {
        match m.indices() {
            [j] => coeffs[*j - 1] = c.clone(),
            _ => {
                return Err(Error::OutOfRange {
                    what: "upper estimate",
                    detail: format!("monomial {m} is not a single generator"),
                })
            }
        }
    }
    FormalVectorField::new(order, coeffs)
}

fn inclusion_json(r: &InclusionReport) -> Value {
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            json!({
                "n": row.n,
                "q": q(&row.q),
                "q1": q(&row.q1),
                "upper_homogeneous": q(&row.upper_homogeneous),
                "upper_displayed": q(&row.upper_displayed),
                "w_t": q(&row.w_t),
                "w_2t": q(&row.w_2t),
                "within_upper": row.within_upper,
                "above_w_t": row.above_w_t,
                "above_w_2t": row.above_w_2t,
                "homogeneous": row.homogeneous,
            })
        })
        .collect();
    json!({
        "t": q(&r.t),
        "rows": rows,
        "violations": r.violations,
        "strong_lower_failures": r.strong_lower_failures,
    })
}

fn qnorm(args: &QnormArgs, pivot: PivotRule) -> Result<Outcome> {
    let t = args.t.clone().unwrap_or_else(Coefficient::one);
    if let Some(family) = &args.table {
        if family != "Ln" {
            return Err(Error::Unknown {
                what: "table family",
                name: family.clone(),
            });
        }
        return ok_json(&inclusion_json(&inclusion_check(&t, args.nmax, pivot)?));
    }
    let input = args
        .input
        .as_ref()
        .ok_or_else(|| Error::parse("input", "an element is required unless --table is given"))?;
    let u = uelement_input(&load(input)?)?;
    let result = qt_norm(&u, &t, pivot)?;
    let components: Vec<Value> = result
        .components
        .iter()
        .map(|c| {
            json!({
                "degree": c.degree,
                "value": q(&c.value),
                "words": c.words,
                "certificate": json::nc_polynomial_to_json(&c.certificate),
            })
        })
        .collect();
    let mut out = with_fields(
        &result.norm,
        json!({
            "t": q(&t),
            "components": components,
            "certificate": json::nc_polynomial_to_json(&result.certificate()),
        }),
    );
    if args.upper {
        let e = q_upper_vect(&as_field(&u)?, &t)?;
        out["upper"] = json!({
            "displayed": e.displayed.to_json(),
            "homogeneous": e.homogeneous.to_json(),
        });
    }
    if args.lower {
        let vt = args.vt.clone().unwrap_or_else(|| t.clone());
        let c = q_lower_vect(&u, &vt, args.columns)?;
        out["lower"] = with_fields(
            &c.norm,
            json!({
                "vt": q(&vt),
                "dim": c.dim,
                "certified_scale": q(&c.certified_scale),
                "half_scale": q(&c.half_scale),
                "l1_truncated": q(&c.l1_truncated),
                "l1_sup": q(&c.l1_sup),
                "l2_truncated": q(&c.l2_truncated),
                "l2_sup": q(&c.l2_sup),
            }),
        );
    }
    ok_json(&out)
}

fn csv_text(header: &[&str], rows: &[Vec<String>]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvariantViolation(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row).map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvariantViolation(format!("csv encoding failed: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn report(args: &ReportArgs, order: usize, pivot: PivotRule) -> Result<Outcome> {
    match args.kind {
        ReportKind::Qtable => {
            let t = args.t.clone().unwrap_or_else(Coefficient::one);
            let r = inclusion_check(&t, args.nmax, pivot)?;
            let mut lowers = Vec::new();
            for n in 1..=args.nmax {
                let ln = UElement::generator(n, Coefficient::one())?;
                lowers.push(q_lower_vect(&ln, &t, args.columns)?.norm.value);
            }
            match args.format {
                Format::Json => {
                    let mut out = inclusion_json(&r);
                    if let Some(rows) = out["rows"].as_array_mut() {
                        for (row, lower) in rows.iter_mut().zip(&lowers) {
                            row["lower"] = q(lower);
                        }
                    }
                    out["lower_columns"] = args.columns.into();
                    ok_json(&out)
                }
                Format::Csv => {
                    let rows: Vec<Vec<String>> = r
                        .rows
                        .iter()
                        .zip(&lowers)
                        .map(|(row, lower)| {
                            vec![
                                row.n.to_string(),
                                rational::format(&row.q),
                                rational::format(&row.upper_homogeneous),
                                rational::format(&row.upper_displayed),
                                rational::format(lower),
                                rational::format(&row.w_t),
                                rational::format(&row.w_2t),
                            ]
                        })
                        .collect();
                    let header = ["n", "q", "upper", "upper_displayed", "lower", "w_t", "w_2t"];
                    Ok(Outcome {
                        text: csv_text(&header, &rows)?,
                        code: 0,
                    })
                }
            }
        }
        ReportKind::Membership => {
            let r = args.r.clone().unwrap_or_else(|| rational::ratio(1, 2));
            let list = match &args.list {
                Some(text) => text
                    .split(',')
                    .enumerate()
                    .map(|(i, s)| {
                        rational::parse(s)
                            .map_err(|e| Error::parse(format!("list[{i}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?,
                None => Vec::new(),
            };
            let rule = CoefficientRule::from_name(&args.rule, r, list)?;
            let report = membership_report(&rule, order, &default_sigma_grid())?;
            match args.format {
                Format::Json => {
                    ok_json(&serde_json::to_value(&report).expect("membership report serializes"))
                }
                Format::Csv => {
                    let mut rows = Vec::new();
                    for s in &report.sigma_rows {
                        rows.push(vec!["sigma".into(), s.sigma.clone(), s.partial_sum.clone()]);
                    }
                    for (j, g) in &report.indicators {
                        rows.push(vec!["indicator".into(), j.to_string(), g.to_string()]);
                    }
                    rows.push(vec![
                        "log_slope".into(),
                        String::new(),
                        report.log_slope.to_string(),
                    ]);
                    let (class, radius) = match &report.membership {
                        Membership::AllSigma => ("all_sigma", String::new()),
                        Membership::SmallSigma { radius } => ("small_sigma", radius.to_string()),
                        Membership::Divergent => ("divergent", String::new()),
                    };
                    rows.push(vec!["class".into(), class.into(), radius]);
                    Ok(Outcome {
                        text: csv_text(&["section", "key", "value"], &rows)?,
                        code: 0,
                    })
                }
            }
        }
    }
}
