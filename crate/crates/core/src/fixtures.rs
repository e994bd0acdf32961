//! Loader for JSON operator fixtures: expected matrices serialized as
//! row-major arrays of scalar strings in the canonical text format.

use crate::kernel::scalar::parse_scalar;
use crate::kernel::tensor::TensorOp;
use serde::Deserialize;

#[derive(Deserialize)]
struct RawFixture {
    dim: usize,
    legs: usize,
    entries: Vec<String>,
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("invalid fixture JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("fixture shape {dim}^{legs} is empty or too large")]
    BadShape { dim: usize, legs: usize },
    #[error("fixture has {got} entries, expected {want}")]
    WrongLength { got: usize, want: usize },
    #[error("entry {index} does not parse: {message}")]
    BadScalar { index: usize, message: String },
}

/// Parse a tensor operator fixture. The shape is bounded (side ≤ 1024) so the
/// loader is safe on untrusted input.
pub fn load_tensor_fixture(json: &str) -> Result<TensorOp, FixtureError> {
    let raw: RawFixture = serde_json::from_str(json)?;
    let side = (raw.legs > 0 && raw.dim > 1)
        .then(|| raw.dim.checked_pow(raw.legs as u32))
        .flatten()
        .filter(|s| *s <= 1024)
        .ok_or(FixtureError::BadShape {
            dim: raw.dim,
            legs: raw.legs,
        })?;
    let want = side * side;
    if raw.entries.len() != want {
        return Err(FixtureError::WrongLength {
            got: raw.entries.len(),
            want,
        });
    }
    let mut op = TensorOp::zeros(raw.dim, raw.legs);
    for (index, text) in raw.entries.iter().enumerate() {
        let s = parse_scalar(text).map_err(|e| FixtureError::BadScalar {
            index,
            message: e.to_string(),
        })?;
        *op.at_mut(index / side, index % side) = s;
    }
    Ok(op)
}
