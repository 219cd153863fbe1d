//! JSON encodings shared by every command.
//!
//! Rationals are `{"num": "..", "den": ".."}` with decimal strings, infinite
//! exponents are `"+inf"` / `"-inf"`, and valuations are an integer, `"+inf"`
//! for an exact zero, or `{"at_least": m}`.

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::exact::ExtRational;
use crate::linearize::{BoundVerdict, LogRadius};
use crate::ufield::Valuation;

pub fn rational(r: &BigRational) -> Value {
    json!({"num": r.numer().to_string(), "den": r.denom().to_string()})
}

pub fn ext(e: &ExtRational) -> Value {
    match e {
        ExtRational::Finite(r) => rational(r),
        ExtRational::PosInf => json!("+inf"),
        ExtRational::NegInf => json!("-inf"),
    }
}

pub fn radius(r: &LogRadius) -> Value {
    json!({"exponent": ext(&r.exponent), "status": r.status.name()})
}

pub fn opt_radius(r: Option<&LogRadius>) -> Value {
    r.map_or(Value::Null, radius)
}

pub fn valuation(v: &Valuation) -> Value {
    match v {
        Valuation::Infinite => json!("+inf"),
        Valuation::Exact(v) => json!(v),
        Valuation::AtLeast(m) => json!({"at_least": m}),
    }
}

pub fn verdicts(vs: &[BoundVerdict]) -> Value {
    vs.iter()
        .map(|v| {
            json!({
                "k": v.k,
                "valuation": valuation(&v.valuation),
                "bound": {"constant": ext(&v.bound.constant), "log2_coeff": rational(&v.bound.log2_coeff)},
                "verdict": v.verdict.name(),
                "equality": v.equality,
            })
        })
        .collect()
}
