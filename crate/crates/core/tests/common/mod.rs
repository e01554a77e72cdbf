//! Shared helpers for the integration tests.

#![allow(dead_code)]

use holeforge::{parse, verify, Certificate, Verdict};
use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::Value;

/// JSON path of a leaf: object keys and array indices.
#[derive(Clone, Debug)]
pub enum Step {
    Key(String),
    Index(usize),
}

fn leaves(v: &Value, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    match v {
        Value::Object(map) => {
            for (k, child) in map {
                path.push(Step::Key(k.clone()));
                leaves(child, path, out);
                path.pop();
            }
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push(path.clone());
            }
            for (i, child) in items.iter().enumerate() {
                path.push(Step::Index(i));
                leaves(child, path, out);
                path.pop();
            }
        }
        _ => out.push(path.clone()),
    }
}

fn at<'a>(v: &'a mut Value, path: &[Step]) -> &'a mut Value {
    path.iter().fold(v, |cur, s| match s {
        Step::Key(k) => cur.get_mut(k.as_str()).expect("path exists"),
        Step::Index(i) => cur.get_mut(*i).expect("path exists"),
    })
}

/// Changes one leaf (or one array) of the certificate JSON. Returns a short
/// description of the edit.
pub fn mutate<R: Rng>(value: &mut Value, rng: &mut R) -> String {
    let mut paths = Vec::new();
    leaves(value, &mut Vec::new(), &mut paths);
    let path = paths.choose(rng).expect("certificate has leaves").clone();

    // sometimes edit the enclosing array instead of the leaf
    if let Some(Step::Index(i)) = path.last() {
        if rng.gen_bool(0.2) {
            let parent = at(value, &path[..path.len() - 1]);
            let items = parent.as_array_mut().expect("array parent");
            if rng.gen_bool(0.5) {
                items.remove(*i);
                return format!("{path:?}: removed");
            }
            let copy = items[*i].clone();
            items.insert(*i, copy);
            return format!("{path:?}: duplicated");
        }
    }

    let leaf = at(value, &path);
    let before = leaf.to_string();
    *leaf = match leaf.clone() {
        Value::Bool(b) => Value::Bool(!b),
        Value::String(s) => match s.parse::<BigInt>() {
            Ok(n) => {
                let m: BigInt = match rng.gen_range(0..4) {
                    0 => &n + 1,
                    1 => &n - 1,
                    2 => -&n + 1,
                    _ => &n * 2 + rng.gen_range(1..100i64),
                };
                Value::String(m.to_string())
            }
            Err(_) => {
                let mut t = s.clone();
                if t.is_empty() || rng.gen_bool(0.5) {
                    t.push('x');
                } else {
                    t.pop();
                }
                Value::String(t)
            }
        },
        Value::Array(_) => Value::Array(vec![Value::String("0".into())]),
        Value::Number(n) => Value::String(n.to_string()),
        Value::Null => Value::Bool(true),
        Value::Object(_) => Value::Null,
    };
    format!("{path:?}: {before} -> {}", leaf)
}

/// Outcome of verifying a mutated certificate.
#[derive(Debug, PartialEq, Eq)]
pub enum MutationOutcome {
    Rejected,
    ParseError,
    /// Accepted, and the parsed certificate equals the original.
    Equivalent,
    /// Accepted although it differs from the original.
    Escaped,
}

pub fn classify(original: &Certificate, bytes: &[u8]) -> MutationOutcome {
    match verify(bytes) {
        Err(_) => MutationOutcome::ParseError,
        Ok(Verdict::Rejected { .. }) => MutationOutcome::Rejected,
        Ok(Verdict::Accepted) => match parse(bytes) {
            Ok(c) if &c == original => MutationOutcome::Equivalent,
            _ => MutationOutcome::Escaped,
        },
    }
}
