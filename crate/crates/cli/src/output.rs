//! JSON encoding shared by every command.
//!
//! Rationals are `{"num": "..", "den": ".."}`, floats are decimal strings with
//! 17 significant digits, surds carry both their exact parts and a float.

use bikraw::surd::Surd;
use bikraw::Rational;
use serde_json::{json, Map, Value};

pub const SCHEMA_VERSION: &str = "1";

pub fn float(x: f64) -> Value {
    Value::String(float_str(x))
}

pub fn float_str(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn rational(r: &Rational) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

pub fn surd(s: &Surd) -> Value {
    json!({
        "coefficient": rational(s.coefficient()),
        "radicand": s.radicand().to_string(),
        "float": float(s.to_f64()),
    })
}

/// Backend-specific encoding of a scalar.
pub trait Emit {
    fn emit(&self) -> Value;
    /// Plain-text form for CSV cells.
    fn cell(&self) -> String;
}

impl Emit for Rational {
    fn emit(&self) -> Value {
        rational(self)
    }

    fn cell(&self) -> String {
        self.to_string()
    }
}

impl Emit for f64 {
    fn emit(&self) -> Value {
        float(*self)
    }

    fn cell(&self) -> String {
        float_str(*self)
    }
}

pub fn document(command: &str, inputs: Map<String, Value>, results: Value) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "inputs": Value::Object(inputs),
        "results": results,
    })
}
