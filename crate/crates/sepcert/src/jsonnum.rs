//! Full-precision floats in JSON output.
//!
//! Reports and serialized decompositions carry every float with 17
//! significant digits so a consumer can reconstruct the exact f64 bits.
//! serde_json's default float printing is shortest-round-trip, so [`F17`]
//! routes through an arbitrary-precision `Number` built from a fixed
//! `{:.16e}` rendering instead.

use serde::{Serialize, Serializer};

/// Format with 17 significant digits (scientific, valid JSON number syntax).
pub fn format_sig17(x: f64) -> String {
    format!("{:.16e}", x)
}

/// f64 wrapper that serializes as a JSON number with 17 significant digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F17(pub f64);

impl From<f64> for F17 {
    fn from(x: f64) -> Self {
        F17(x)
    }
}

impl Serialize for F17 {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return Err(serde::ser::Error::custom(format!(
                "non-finite value {} cannot be serialized as a JSON number",
                self.0
            )));
        }
        let literal = format_sig17(self.0);
        let number: serde_json::Number = literal.parse().map_err(|e| {
            serde::ser::Error::custom(format!("bad numeric literal {literal}: {e}"))
        })?;
        number.serialize(serializer)
    }
}
