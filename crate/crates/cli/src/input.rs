use std::path::Path;

use clarkson_core::{RealVector, Weights};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::grid::parse_list;
use crate::{CliError, CliResult};

/// One entry of the `pairs` array, as read from or written to JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawPair {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w: Option<Vec<f64>>,
}

/// A validated input pair.
#[derive(Debug, Clone)]
pub struct Pair {
    pub x: RealVector,
    pub y: RealVector,
    pub w: Option<Weights>,
}

impl RawPair {
    fn validate(self) -> clarkson_core::Result<Pair> {
        let x = RealVector::new(self.x)?;
        let y = RealVector::new(self.y)?;
        if x.len() != y.len() {
            return Err(clarkson_core::Error::LengthMismatch {
                left: x.len(),
                right: y.len(),
            });
        }
        let w = self.w.map(Weights::new).transpose()?;
        if let Some(w) = &w {
            w.check_len(x.len())?;
        }
        Ok(Pair { x, y, w })
    }
}

/// Reads `{"pairs":[...]}`. Each error names the offending pair index.
pub fn load_pairs(path: &Path) -> CliResult<Vec<Pair>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
    parse_pairs(&text).map_err(|e| CliError::new(format!("{}: {e}", path.display())))
}

pub fn parse_pairs(text: &str) -> CliResult<Vec<Pair>> {
    let doc: Value = serde_json::from_str(text).map_err(|e| CliError::new(format!("invalid JSON: {e}")))?;
    let pairs = doc
        .get("pairs")
        .ok_or_else(|| CliError::new("missing \"pairs\" array"))?
        .as_array()
        .ok_or_else(|| CliError::new("\"pairs\" is not an array"))?;
    if pairs.is_empty() {
        return Err(CliError::new("no input pairs"));
    }
    pairs
        .iter()
        .enumerate()
        .map(|(i, value)| {
            let raw = RawPair::deserialize(value).map_err(|e| CliError::new(format!("pair {i}: {e}")))?;
            raw.validate().map_err(|e| CliError::new(format!("pair {i}: {e}")))
        })
        .collect()
}

/// Builds a single pair from comma-separated inline vectors.
pub fn inline_pair(x: &str, y: &str, w: Option<&str>) -> CliResult<Pair> {
    let raw = RawPair {
        x: parse_list(x)?,
        y: parse_list(y)?,
        w: w.map(parse_list).transpose()?,
    };
    raw.validate().map_err(|e| CliError::new(format!("pair 0: {e}")))
}
