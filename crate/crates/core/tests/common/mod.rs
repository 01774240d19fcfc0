//! Validator for the subset of JSON Schema used by `schema/report.schema.json`.

#![allow(dead_code)]

use serde_json::Value;

pub const RATIONAL_PATTERN: &str = "^-?[0-9]+(/[0-9]+)?$";

pub fn load_schema() -> Value {
    let text = include_str!("../../schema/report.schema.json");
    serde_json::from_str(text).expect("schema is valid JSON")
}

/// Returns the first violation as a JSON-pointer-ish path and message.
pub fn validate(schema: &Value, doc: &Value) -> Result<(), String> {
    check(schema, schema, doc, "$")
}

fn resolve<'a>(root: &'a Value, reference: &str) -> &'a Value {
    let name = reference.strip_prefix("#/$defs/").expect("local $defs reference");
    &root["$defs"][name]
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        other => panic!("unsupported type {other}"),
    }
}

fn is_rational(s: &str) -> bool {
    let s = s.strip_prefix('-').unwrap_or(s);
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (s, None),
    };
    let digits = |x: &str| !x.is_empty() && x.bytes().all(|b| b.is_ascii_digit());
    digits(num) && den.is_none_or(digits)
}

fn check(root: &Value, schema: &Value, v: &Value, path: &str) -> Result<(), String> {
    let s = schema.as_object().expect("schema nodes are objects");
    for key in s.keys() {
        let known = [
            "$schema", "$id", "title", "description", "$defs", "$ref", "type", "properties", "required",
            "additionalProperties", "items", "enum", "const", "oneOf", "minimum", "pattern",
        ];
        assert!(known.contains(&key.as_str()), "unsupported keyword {key}");
    }
    if let Some(r) = s.get("$ref") {
        check(root, resolve(root, r.as_str().unwrap()), v, path)?;
    }
    if let Some(t) = s.get("type") {
        let ok = match t {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            return Err(format!("{path}: expected type {t}, found {v}"));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{path}: expected {c}, found {v}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            return Err(format!("{path}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_i64), v.as_i64()) {
        if x < min {
            return Err(format!("{path}: {x} < {min}"));
        }
    }
    if let (Some(p), Some(text)) = (s.get("pattern"), v.as_str()) {
        assert_eq!(p, RATIONAL_PATTERN, "only the rational pattern is supported");
        if !is_rational(text) {
            return Err(format!("{path}: {text:?} is not a rational string"));
        }
    }
    if let Value::Object(obj) = v {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(req)) = s.get("required") {
            for r in req {
                let r = r.as_str().unwrap();
                if !obj.contains_key(r) {
                    return Err(format!("{path}: missing {r}"));
                }
            }
        }
        for (k, x) in obj {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => check(root, sub, x, &format!("{path}.{k}"))?,
                None => {
                    if s.get("additionalProperties") == Some(&Value::Bool(false)) {
                        return Err(format!("{path}: unexpected key {k}"));
                    }
                }
            }
        }
    }
    if let (Some(items), Value::Array(xs)) = (s.get("items"), v) {
        for (i, x) in xs.iter().enumerate() {
            check(root, items, x, &format!("{path}[{i}]"))?;
        }
    }
    if let Some(Value::Array(options)) = s.get("oneOf") {
        let matching = options.iter().filter(|o| check(root, o, v, path).is_ok()).count();
        if matching != 1 {
            let errors: Vec<String> = options.iter().filter_map(|o| check(root, o, v, path).err()).collect();
            return Err(format!("{path}: {matching} oneOf branches match; {errors:?}"));
        }
    }
    Ok(())
}
