//! JSON encoding of the exchange objects.
//!
//! Rationals travel as canonical strings (`"3"`, `"-1/2"`), zero coefficients
//! are omitted and map keys are sorted, so equal values encode to identical
//! bytes. Decoders name the offending key in every error.

use num_traits::Zero;
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::freealg::{NCPolynomial, PbwMonomial, UElement};
use crate::rational::{self, Coefficient};
use crate::series::{FormalDiffeo, FormalVectorField};
use crate::triangular::TriangularOperator;

/// A decoded `{"kind": ...}` object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Element {
    Diffeo(FormalDiffeo),
    Field(FormalVectorField),
}

pub fn parse_text(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| Error::parse("<input>", e.to_string()))
}

fn as_object<'a>(value: &'a Value, key: &str) -> Result<&'a Map<String, Value>> {
    value
        .as_object()
        .ok_or_else(|| Error::parse(key, "expected a JSON object"))
}

fn check_keys(obj: &Map<String, Value>, allowed: &[&str]) -> Result<()> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(Error::parse(k.as_str(), "unexpected key")),
        None => Ok(()),
    }
}

/// A rational given as a string, or as a JSON integer.
pub fn rational_from_json(value: &Value, key: &str) -> Result<Coefficient> {
    let text = match value {
        Value::String(s) => s.clone(),
        Value::Number(n) if n.is_i64() || n.is_u64() => n.to_string(),
        _ => {
            return Err(Error::parse(
                key,
                "expected a rational string such as \"-3/4\"",
            ))
        }
    };
    rational::parse(&text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::parse(key, message),
        other => other,
    })
}

fn index_key(text: &str, key: &str) -> Result<usize> {
    if text.is_empty() || !text.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::parse(key, "expected a non-negative integer index"));
    }
    text.parse()
        .map_err(|_| Error::parse(key, "index out of range"))
}

/// Parses `{"kind":"diffeo"|"field","order":N,"coeffs":{"j":"p/q",...}}`.
///
/// For a diffeomorphism the keys are `2..=N` (coefficients of `x^j`), for a
/// field they are `1..=N` (coefficients of `L_j`).
pub fn element_from_json(value: &Value) -> Result<Element> {
    let obj = as_object(value, "<root>")?;
    check_keys(obj, &["kind", "order", "coeffs"])?;
    let kind = obj
        .get("kind")
        .ok_or_else(|| Error::parse("kind", "missing"))?
        .as_str()
        .ok_or_else(|| Error::parse("kind", "expected a string"))?;
    let lowest = match kind {
        "diffeo" => 2,
        "field" => 1,
        other => return Err(Error::parse("kind", format!("unknown kind `{other}`"))),
    };
    let order = obj
        .get("order")
        .ok_or_else(|| Error::parse("order", "missing"))?
        .as_u64()
        .filter(|&n| n >= 1)
        .ok_or_else(|| Error::parse("order", "expected an integer >= 1"))? as usize;
    let mut coeffs = vec![Coefficient::zero(); order + 1 - lowest];
    if let Some(c) = obj.get("coeffs") {
        for (k, v) in as_object(c, "coeffs")? {
            let path = format!("coeffs.{k}");
            let j = index_key(k, &path)?;
            if j < lowest || j > order {
                return Err(Error::parse(
                    path,
                    format!("index must lie in {lowest}..={order}"),
                ));
            }
            coeffs[j - lowest] = rational_from_json(v, &path)?;
        }
    }
    Ok(match lowest {
        2 => Element::Diffeo(FormalDiffeo::new(order, coeffs)?),
        _ => Element::Field(FormalVectorField::new(order, coeffs)?),
    })
}

pub fn diffeo_from_json(value: &Value) -> Result<FormalDiffeo> {
    match element_from_json(value)? {
        Element::Diffeo(g) => Ok(g),
        Element::Field(_) => Err(Error::parse("kind", "expected \"diffeo\"")),
    }
}

pub fn field_from_json(value: &Value) -> Result<FormalVectorField> {
    match element_from_json(value)? {
        Element::Field(f) => Ok(f),
        Element::Diffeo(_) => Err(Error::parse("kind", "expected \"field\"")),
    }
}

fn coeff_map<'a>(pairs: impl Iterator<Item = (usize, &'a Coefficient)>) -> Value {
    let mut map = Map::new();
    for (j, c) in pairs {
        if !c.is_zero() {
            map.insert(j.to_string(), Value::String(rational::format(c)));
        }
    }
    Value::Object(map)
}

pub fn diffeo_to_json(g: &FormalDiffeo) -> Value {
    serde_json::json!({
        "kind": "diffeo",
        "order": g.order(),
        "coeffs": coeff_map(g.higher().iter().enumerate().map(|(i, c)| (i + 2, c))),
    })
}

pub fn field_to_json(f: &FormalVectorField) -> Value {
    serde_json::json!({
        "kind": "field",
        "order": f.order(),
        "coeffs": coeff_map(f.coeffs().iter().enumerate().map(|(i, c)| (i + 1, c))),
    })
}

pub fn element_to_json(e: &Element) -> Value {
    match e {
        Element::Diffeo(g) => diffeo_to_json(g),
        Element::Field(f) => field_to_json(f),
    }
}

/// Parses `{"components":{"n":{"(i1,...,im)":"p/q",...},...}}`.
pub fn uelement_from_json(value: &Value) -> Result<UElement> {
    let obj = as_object(value, "<root>")?;
    check_keys(obj, &["kind", "components"])?;
    if let Some(kind) = obj.get("kind") {
        if kind.as_str() != Some("uelement") {
            return Err(Error::parse("kind", "expected \"uelement\""));
        }
    }
    let components = obj
        .get("components")
        .ok_or_else(|| Error::parse("components", "missing"))?;
    let mut u = UElement::zero();
    for (deg, part) in as_object(components, "components")? {
        let path = format!("components.{deg}");
        let n = index_key(deg, &path)?;
        for (mono, c) in as_object(part, &path)? {
            let mpath = format!("{path}.{mono}");
            let m = PbwMonomial::parse_key(mono).map_err(|e| match e {
                Error::Parse { message, .. } => Error::parse(mpath.clone(), message),
                other => other,
            })?;
            if m.degree() != n {
                return Err(Error::parse(
                    mpath,
                    format!("monomial has degree {}, not {n}", m.degree()),
                ));
            }
            u.add_term(m, rational_from_json(c, &mpath)?);
        }
    }
    Ok(u)
}

pub fn uelement_to_json(u: &UElement) -> Value {
    let mut components = Map::new();
    for (k, part) in u.components() {
        let mut monos = Map::new();
        for (m, c) in part.terms() {
            monos.insert(m.key(), Value::String(rational::format(c)));
        }
        components.insert(k.to_string(), Value::Object(monos));
    }
    serde_json::json!({ "components": components })
}

/// Word combination keyed by letter tuples, e.g. `{"(1,2)":"1","(2,1)":"-1"}`.
pub fn nc_polynomial_to_json(p: &NCPolynomial) -> Value {
    let mut map = Map::new();
    for (w, c) in p.terms() {
        let letters: Vec<String> = w.letters().iter().map(u8::to_string).collect();
        map.insert(
            format!("({})", letters.join(",")),
            Value::String(rational::format(c)),
        );
    }
    Value::Object(map)
}

/// Rows of the matrix as arrays of rational strings.
pub fn operator_to_json(a: &TriangularOperator) -> Value {
    Value::Array(
        a.rows()
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| Value::String(rational::format(c)))
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Indented rendering with sorted keys and a trailing newline.
pub fn render(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    #[test]
    fn diffeo_round_trip() {
        let g = FormalDiffeo::new(5, vec![ratio(1, 2), int(0), int(-3), ratio(7, 3)]).unwrap();
        let v = diffeo_to_json(&g);
        assert_eq!(v["coeffs"]["2"], "1/2");
        assert!(v["coeffs"].get("3").is_none());
        assert_eq!(diffeo_from_json(&v).unwrap(), g);
    }

    #[test]
    fn field_round_trip() {
        let f = FormalVectorField::new(3, vec![int(1), int(0), ratio(-2, 5)]).unwrap();
        assert_eq!(field_from_json(&field_to_json(&f)).unwrap(), f);
    }

    #[test]
    fn errors_name_the_key() {
        let cases = [
            (
                r#"{"kind":"diffeo","order":3,"coeffs":{"1":"1"}}"#,
                "coeffs.1",
            ),
            (
                r#"{"kind":"diffeo","order":3,"coeffs":{"2":"0.5"}}"#,
                "coeffs.2",
            ),
            (
                r#"{"kind":"diffeo","order":3,"coeffs":{"2":"1/0"}}"#,
                "coeffs.2",
            ),
            (r#"{"kind":"diffeo","order":0}"#, "order"),
            (r#"{"kind":"flow","order":3}"#, "kind"),
            (r#"{"kind":"field","order":3,"extra":1}"#, "extra"),
            (
                r#"{"kind":"field","order":3,"coeffs":{"x":"1"}}"#,
                "coeffs.x",
            ),
        ];
        for (text, key) in cases {
            match element_from_json(&parse_text(text).unwrap()) {
                Err(Error::Parse { key: k, .. }) => assert_eq!(k, key, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn uelement_round_trip() {
        let v = parse_text(r#"{"components":{"3":{"(3)":"1","(1,2)":"-1/2"},"0":{"()":"2"}}}"#)
            .unwrap();
        let u = uelement_from_json(&v).unwrap();
        assert_eq!(u.terms().len(), 3);
        assert_eq!(uelement_from_json(&uelement_to_json(&u)).unwrap(), u);
        let bad = parse_text(r#"{"components":{"2":{"(3)":"1"}}}"#).unwrap();
        assert!(matches!(uelement_from_json(&bad), Err(Error::Parse { .. })));
    }

    #[test]
    fn kind_mismatch() {
        let v = field_to_json(&FormalVectorField::zero(2));
        assert!(diffeo_from_json(&v).is_err());
    }
}
