//! Text and JSON renderings of a factorization, and reading them back.

use rug::Integer;
use serde_json::{json, Value};

use super::{parse_poly, FactorizationResult};
use crate::algebra::BivarPolyZ;
use crate::error::{Error, Result};

/// `content: c` followed by one `(<factor>)^<k>` line per factor.
pub fn to_text(r: &FactorizationResult) -> String {
    let mut out = format!("content: {}\n", r.content);
    for (f, k) in &r.factors {
        out.push_str(&format!("({f})^{k}\n"));
    }
    out
}

pub fn to_json(r: &FactorizationResult) -> Value {
    let factors: Vec<Value> = r
        .factors
        .iter()
        .map(|(f, k)| {
            let terms: Vec<Value> = f
                .terms()
                .iter()
                .rev()
                .map(|(&(i, j), c)| json!([i, j, c.to_string()]))
                .collect();
            json!({ "terms": terms, "multiplicity": k })
        })
        .collect();
    json!({
        "content": r.content.to_string(),
        "factors": factors,
        "stats": r.stats,
        "seed": r.seed,
    })
}

fn bad(message: impl Into<String>) -> Error {
    Error::Parse { column: 0, message: message.into() }
}

fn integer(s: &str) -> Result<Integer> {
    Integer::from_str_radix(s.trim(), 10).map_err(|_| bad(format!("invalid integer '{s}'")))
}

fn from_json(v: &Value) -> Result<BivarPolyZ> {
    let content = integer(v["content"].as_str().ok_or_else(|| bad("missing content"))?)?;
    let mut acc = BivarPolyZ::constant(content);
    for fac in v["factors"].as_array().ok_or_else(|| bad("missing factors"))? {
        let mut terms = Vec::new();
        for t in fac["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let (Some(i), Some(j), Some(c)) = (t[0].as_u64(), t[1].as_u64(), t[2].as_str()) else {
                return Err(bad("terms must be [i, j, \"coeff\"]"));
            };
            terms.push(((i as u32, j as u32), integer(c)?));
        }
        let k = fac["multiplicity"].as_u64().ok_or_else(|| bad("missing multiplicity"))?;
        acc = acc.mul(&BivarPolyZ::from_terms(terms).pow(k as usize));
    }
    Ok(acc)
}

/// The polynomial a factorization file (either output format) represents.
pub fn read_factorization(text: &str) -> Result<BivarPolyZ> {
    if let Ok(v) = serde_json::from_str::<Value>(text) {
        return from_json(&v);
    }
    let mut acc = None;
    for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
        match line.strip_prefix("content:") {
            Some(c) => acc = Some(BivarPolyZ::constant(integer(c)?)),
            None => {
                let current = acc.take().ok_or_else(|| bad("factor before content line"))?;
                acc = Some(current.mul(&parse_poly(line)?));
            }
        }
    }
    acc.ok_or_else(|| bad("no content line"))
}
