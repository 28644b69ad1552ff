//! JSON text format for omega sets, filters, SIF¹ elements and topologies.
//!
//! ```json
//! {"progressions":[{"start":0,"step":2}],"include":[],"exclude":[]}
//! {"kind":"factorial","set":{...}}
//! {"kind":"filter","filter":{"kind":"frechet"}}
//! {"left":{"kind":"top"},"right":{"kind":"filter","filter":{"kind":"frechet"}}}
//! ```
//!
//! Naturals are JSON numbers or decimal strings; values past `u64` are
//! printed as strings.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::filters::{join_filters, JoinCertificate, JoinOutcome, SiFilter};
use crate::omega::{OmegaSet, Progression};
use crate::topology::{SifOne, WeakTopology};

/// Joins in descriptors are checked for properness at this bound.
pub const JOIN_CHECK_BOUND: u64 = 40;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid value at {path}: {message}")]
    Validation { path: String, message: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Descriptor {
    OmegaSet(OmegaSet),
    Filter(SiFilter),
    SifOne(SifOne),
    Topology(WeakTopology),
}

fn parse_err(path: &str, message: impl Into<String>) -> DescriptorError {
    DescriptorError::Parse { path: path.to_string(), message: message.into() }
}

fn invalid(path: &str, message: impl Into<String>) -> DescriptorError {
    DescriptorError::Validation { path: path.to_string(), message: message.into() }
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str, path: &str) -> Result<&'a Value, DescriptorError> {
    obj.get(key).ok_or_else(|| parse_err(path, format!("missing field `{key}`")))
}

fn object<'a>(v: &'a Value, path: &str) -> Result<&'a Map<String, Value>, DescriptorError> {
    v.as_object().ok_or_else(|| parse_err(path, "expected an object"))
}

fn natural(v: &Value, path: &str) -> Result<BigUint, DescriptorError> {
    match v {
        Value::Number(n) => n.as_u64().map(BigUint::from).ok_or_else(|| parse_err(path, "expected a natural number")),
        Value::String(s) => s.parse().map_err(|_| parse_err(path, "expected a decimal natural")),
        _ => Err(parse_err(path, "expected a natural number")),
    }
}

fn naturals(v: Option<&Value>, path: &str) -> Result<Vec<BigUint>, DescriptorError> {
    match v {
        None => Ok(Vec::new()),
        Some(Value::Array(xs)) => xs.iter().enumerate().map(|(i, x)| natural(x, &format!("{path}[{i}]"))).collect(),
        Some(_) => Err(parse_err(path, "expected an array")),
    }
}

fn print_natural(x: &BigUint) -> Value {
    match x.to_u64() {
        Some(v) => json!(v),
        None => json!(x.to_string()),
    }
}

pub fn omega_set_from_value(v: &Value, path: &str) -> Result<OmegaSet, DescriptorError> {
    let obj = object(v, path)?;
    let ppath = format!("{path}.progressions");
    let progs = match obj.get("progressions") {
        None => Vec::new(),
        Some(Value::Array(xs)) => xs
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let here = format!("{ppath}[{i}]");
                let o = object(p, &here)?;
                let start = natural(field(o, "start", &here)?, &format!("{here}.start"))?;
                let step = natural(field(o, "step", &here)?, &format!("{here}.step"))?;
                Progression::new(start, step).map_err(|e| invalid(&here, e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?,
        Some(_) => return Err(parse_err(&ppath, "expected an array")),
    };
    let include = naturals(obj.get("include"), &format!("{path}.include"))?;
    let exclude = naturals(obj.get("exclude"), &format!("{path}.exclude"))?;
    Ok(OmegaSet::new(progs, include, exclude))
}

pub fn omega_set_to_value(s: &OmegaSet) -> Value {
    json!({
        "progressions": s.progressions().iter()
            .map(|p| json!({"start": print_natural(p.start()), "step": print_natural(p.step())}))
            .collect::<Vec<_>>(),
        "include": s.include().iter().map(print_natural).collect::<Vec<_>>(),
        "exclude": s.exclude().iter().map(print_natural).collect::<Vec<_>>(),
    })
}

fn infinite_set(v: &Value, path: &str) -> Result<OmegaSet, DescriptorError> {
    let s = omega_set_from_value(v, path)?;
    if !s.is_infinite() {
        return Err(invalid(path, "the set must be infinite"));
    }
    Ok(s)
}

pub fn filter_from_value(v: &Value, path: &str) -> Result<SiFilter, DescriptorError> {
    let obj = object(v, path)?;
    let kind = field(obj, "kind", path)?.as_str().ok_or_else(|| parse_err(path, "`kind` must be a string"))?;
    let sub = |key: &str| -> Result<SiFilter, DescriptorError> {
        filter_from_value(field(obj, key, path)?, &format!("{path}.{key}"))
    };
    match kind {
        "frechet" => Ok(SiFilter::Frechet),
        "factorial" => Ok(SiFilter::Factorial(infinite_set(field(obj, "set", path)?, &format!("{path}.set"))?)),
        "filter-induced" => {
            let bpath = format!("{path}.base");
            let Value::Array(xs) = field(obj, "base", path)? else {
                return Err(parse_err(&bpath, "expected an array"));
            };
            let sets = xs
                .iter()
                .enumerate()
                .map(|(i, x)| omega_set_from_value(x, &format!("{bpath}[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            SiFilter::from_filter_base(sets).map_err(|e| invalid(&bpath, e.to_string()))
        }
        "meet" => Ok(SiFilter::Meet(Box::new(sub("left")?), Box::new(sub("right")?))),
        "join" => {
            let (l, r) = (sub("left")?, sub("right")?);
            match join_filters(&l, &r, JOIN_CHECK_BOUND) {
                JoinOutcome::Filter(_) => {
                    let shape_pairs = l.index_shapes().len() * r.index_shapes().len();
                    Ok(SiFilter::Join(Box::new(l), Box::new(r), JoinCertificate { shape_pairs }))
                }
                JoinOutcome::Top { left, right } => Err(invalid(
                    path,
                    format!("the join is improper: base elements {left} and {right} are disjoint"),
                )),
                JoinOutcome::Unknown { bound } => {
                    Err(invalid(path, format!("properness of the join is undecided within bound {bound}")))
                }
            }
        }
        other => Err(parse_err(path, format!("unknown filter kind `{other}`"))),
    }
}

pub fn filter_to_value(f: &SiFilter) -> Value {
    match f {
        SiFilter::Frechet => json!({"kind": "frechet"}),
        SiFilter::Factorial(a) => json!({"kind": "factorial", "set": omega_set_to_value(a)}),
        SiFilter::FilterInduced(gs) => {
            json!({"kind": "filter-induced", "base": gs.iter().map(omega_set_to_value).collect::<Vec<_>>()})
        }
        SiFilter::Meet(a, b) => json!({"kind": "meet", "left": filter_to_value(a), "right": filter_to_value(b)}),
        SiFilter::Join(a, b, _) => json!({"kind": "join", "left": filter_to_value(a), "right": filter_to_value(b)}),
    }
}

pub fn sif_one_from_value(v: &Value, path: &str) -> Result<SifOne, DescriptorError> {
    let obj = object(v, path)?;
    match obj.get("kind").and_then(Value::as_str) {
        Some("top") => Ok(SifOne::Top),
        Some("filter") => Ok(SifOne::Filter(filter_from_value(field(obj, "filter", path)?, &format!("{path}.filter"))?)),
        _ => Err(parse_err(path, "expected kind `top` or `filter`")),
    }
}

pub fn sif_one_to_value(s: &SifOne) -> Value {
    match s {
        SifOne::Top => json!({"kind": "top"}),
        SifOne::Filter(f) => json!({"kind": "filter", "filter": filter_to_value(f)}),
    }
}

pub fn topology_from_value(v: &Value, path: &str) -> Result<WeakTopology, DescriptorError> {
    let obj = object(v, path)?;
    let left = sif_one_from_value(field(obj, "left", path)?, &format!("{path}.left"))?;
    let right = sif_one_from_value(field(obj, "right", path)?, &format!("{path}.right"))?;
    Ok(WeakTopology::from_pair(left, right))
}

pub fn topology_to_value(t: &WeakTopology) -> Value {
    json!({"left": sif_one_to_value(&t.left), "right": sif_one_to_value(&t.right)})
}

fn syntax(text: &str) -> Result<Value, DescriptorError> {
    serde_json::from_str(text).map_err(|e| DescriptorError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// Parses any descriptor, telling the kinds apart by their keys.
pub fn parse_descriptor(text: &str) -> Result<Descriptor, DescriptorError> {
    let v = syntax(text)?;
    let obj = object(&v, "$")?;
    if obj.contains_key("progressions") || obj.contains_key("include") {
        return omega_set_from_value(&v, "$").map(Descriptor::OmegaSet);
    }
    match obj.get("kind").and_then(Value::as_str) {
        Some("top" | "filter") => sif_one_from_value(&v, "$").map(Descriptor::SifOne),
        Some(_) => filter_from_value(&v, "$").map(Descriptor::Filter),
        None if obj.contains_key("left") => topology_from_value(&v, "$").map(Descriptor::Topology),
        None => Err(parse_err("$", "cannot tell the descriptor kind")),
    }
}

pub fn print_descriptor(d: &Descriptor) -> String {
    let v = match d {
        Descriptor::OmegaSet(s) => omega_set_to_value(s),
        Descriptor::Filter(f) => filter_to_value(f),
        Descriptor::SifOne(s) => sif_one_to_value(s),
        Descriptor::Topology(t) => topology_to_value(t),
    };
    v.to_string()
}

/// Built-in names accepted wherever a descriptor is expected.
pub fn named(name: &str) -> Option<Descriptor> {
    let fa = |s: OmegaSet| Descriptor::Filter(SiFilter::Factorial(s));
    Some(match name {
        "tau_min" => Descriptor::Topology(WeakTopology::tau_min()),
        "tau_c" => Descriptor::Topology(WeakTopology::tau_c()),
        "tau_L" => Descriptor::Topology(WeakTopology::tau_L()),
        "tau_R" => Descriptor::Topology(WeakTopology::tau_R()),
        "top" => Descriptor::SifOne(SifOne::Top),
        "frechet" => Descriptor::Filter(SiFilter::Frechet),
        "F_omega" => fa(OmegaSet::omega()),
        "F_evens" => fa(OmegaSet::evens()),
        "F_odds" => fa(OmegaSet::odds()),
        "F_mult4" => fa(OmegaSet::multiples(4u32)),
        _ => return None,
    })
}

/// Resolves a built-in name, inline JSON, or a file path.
pub fn load(arg: &str) -> Result<Descriptor, DescriptorError> {
    if let Some(d) = named(arg) {
        return Ok(d);
    }
    if arg.trim_start().starts_with('{') {
        return parse_descriptor(arg);
    }
    let text = std::fs::read_to_string(arg).map_err(|e| {
        if std::path::Path::new(arg).exists() {
            DescriptorError::Io { path: arg.to_string(), message: e.to_string() }
        } else {
            DescriptorError::UnknownName(arg.to_string())
        }
    })?;
    parse_descriptor(&text)
}

/// Loads a descriptor as a topology; filters and SIF¹ elements are not
/// accepted here.
pub fn load_topology(arg: &str) -> Result<WeakTopology, DescriptorError> {
    match load(arg)? {
        Descriptor::Topology(t) => Ok(t),
        _ => Err(invalid("$", "expected a topology descriptor")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_set_text() {
        let d = parse_descriptor(r#"{"progressions":[{"start":0,"step":2}],"include":[],"exclude":[]}"#).unwrap();
        assert_eq!(d, Descriptor::OmegaSet(OmegaSet::evens()));
        let big = r#"{"progressions":[{"start":"0","step":"340282366920938463463374607431768211456"}]}"#;
        let Descriptor::OmegaSet(s) = parse_descriptor(big).unwrap() else { panic!() };
        assert!(print_descriptor(&Descriptor::OmegaSet(s)).contains("\"340282366920938463463374607431768211456\""));
    }

    #[test]
    fn filter_text() {
        let d = parse_descriptor(
            r#"{"kind":"factorial","set":{"progressions":[{"start":1,"step":2}],"include":[],"exclude":[]}}"#,
        )
        .unwrap();
        assert_eq!(d, Descriptor::Filter(SiFilter::Factorial(OmegaSet::odds())));
    }

    #[test]
    fn validation_errors() {
        let improper = r#"{"kind":"filter-induced","base":[
            {"progressions":[{"start":0,"step":2}]},
            {"progressions":[{"start":1,"step":2}]}]}"#;
        let e = parse_descriptor(improper).unwrap_err();
        assert!(matches!(e, DescriptorError::Validation { .. }), "{e}");
        assert!(e.to_string().contains("finite intersection"));

        let zero_step = r#"{"progressions":[{"start":0,"step":0}]}"#;
        assert!(matches!(parse_descriptor(zero_step), Err(DescriptorError::Validation { .. })));

        let finite = r#"{"kind":"factorial","set":{"include":[3]}}"#;
        assert!(matches!(parse_descriptor(finite), Err(DescriptorError::Validation { .. })));

        let top_join = format!(
            r#"{{"kind":"join","left":{},"right":{}}}"#,
            filter_to_value(&SiFilter::Factorial(OmegaSet::evens())),
            filter_to_value(&SiFilter::Factorial(OmegaSet::odds()))
        );
        assert!(matches!(parse_descriptor(&top_join), Err(DescriptorError::Validation { .. })));

        let e = parse_descriptor("{\"kind\": ").unwrap_err();
        assert!(matches!(e, DescriptorError::Syntax { line: 1, .. }));
    }

    #[test]
    fn round_trips() {
        let cases = [
            Descriptor::Topology(WeakTopology::tau_L()),
            named("F_mult4").unwrap(),
            Descriptor::Filter(SiFilter::from_filter_base(vec![OmegaSet::evens(), OmegaSet::multiples(3u32)]).unwrap()),
            Descriptor::Filter(SiFilter::Meet(
                Box::new(SiFilter::Factorial(OmegaSet::evens())),
                Box::new(SiFilter::Frechet),
            )),
            Descriptor::OmegaSet(OmegaSet::new(
                vec![Progression::new(3u32, 6u32).unwrap()],
                vec![BigUint::from(1u32)],
                vec![BigUint::from(9u32)],
            )),
        ];
        for d in cases {
            let text = print_descriptor(&d);
            let back = parse_descriptor(&text).unwrap();
            assert_eq!(back, d, "{text}");
            assert_eq!(print_descriptor(&back), text);
        }
    }
}
