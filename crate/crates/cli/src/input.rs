use std::fs;

use nctorus::lattice::read_json;
use nctorus::torus::TorusElement;
use nctorus::{CoeffLattice2, Complex64, PhaseQ};
use serde::de::DeserializeOwned;
use serde_json::Value;

use crate::Failure;

/// Inline JSON if the text starts like a JSON document, otherwise a path.
pub fn load_value(src: &str, field: &str) -> Result<Value, Failure> {
    let trimmed = src.trim_start();
    let text = if trimmed.starts_with(['{', '[', '"']) || trimmed.parse::<f64>().is_ok() {
        src.to_owned()
    } else {
        fs::read_to_string(src).map_err(|e| Failure::input(format!("{field}: cannot read `{src}`: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| {
        Failure::input(format!(
            "{field}: malformed JSON at line {}, column {}: {e}",
            e.line(),
            e.column()
        ))
    })
}

pub fn decode<T: DeserializeOwned>(value: Value, field: &str) -> Result<T, Failure> {
    serde_json::from_value(value).map_err(|e| Failure::input(format!("{field}: {e}")))
}

pub fn load<T: DeserializeOwned>(src: &str, field: &str) -> Result<T, Failure> {
    decode(load_value(src, field)?, field)
}

pub fn phase_flag(src: Option<&str>) -> Result<Option<PhaseQ>, Failure> {
    src.map(|s| load(s, "q")).transpose()
}

pub fn complex(src: &str, field: &str) -> Result<Complex64, Failure> {
    let [re, im]: [f64; 2] = load(src, field)?;
    Ok(Complex64::new(re, im))
}

/// A lattice document, ignoring a `"q"` key if present.
pub fn lattice(src: &str, field: &str) -> Result<(CoeffLattice2, Option<PhaseQ>), Failure> {
    let mut value = load_value(src, field)?;
    let q = match value.as_object_mut().and_then(|m| m.remove("q")) {
        Some(q) => Some(decode(q, &format!("{field}.q"))?),
        None => None,
    };
    let bytes = serde_json::to_vec(&value).expect("re-encoding a parsed document");
    let lat = read_json(&bytes).map_err(|e| Failure::input(format!("{field}: {e}")))?;
    Ok((lat, q))
}

/// A torus element: a lattice document with its own `"q"`, or a bare
/// lattice combined with `--q`. Both present must agree.
pub fn element(src: &str, field: &str, q_flag: Option<PhaseQ>) -> Result<TorusElement, Failure> {
    let (coeffs, q) = lattice(src, field)?;
    let q = resolve_q(q, q_flag, field)?;
    Ok(TorusElement::new(coeffs, q))
}

pub fn resolve_q(own: Option<PhaseQ>, flag: Option<PhaseQ>, field: &str) -> Result<PhaseQ, Failure> {
    match (own, flag) {
        (Some(a), Some(b)) if a != b => Err(Failure::input(format!("q mismatch: {field} has {a} but --q is {b}"))),
        (Some(a), _) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(Failure::input(format!("q: {field} carries no q and --q was not given"))),
    }
}

pub fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values are serializable")
}

pub fn pair(c: Complex64) -> Value {
    serde_json::json!([c.re, c.im])
}
