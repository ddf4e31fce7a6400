//! Matrix file format: `{"label": str?, "n": int, "entries": [[[re, im], ...], ...]}`.
//!
//! [`MatrixDocument::to_canonical`] writes one matrix row per line with
//! shortest round-trip decimal floats, so parsing and rewriting a canonical
//! file reproduces it byte for byte.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDocument {
    #[serde(default)]
    label: Option<String>,
    n: usize,
    entries: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MatrixDocument {
    pub label: Option<String>,
    pub matrix: CMatrix,
}

impl MatrixDocument {
    pub fn new(label: Option<String>, matrix: CMatrix) -> Self {
        Self { label, matrix }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawDocument = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let n = raw.n;
        if n == 0 {
            return Err(Error::Parse("n must be positive".into()));
        }
        if raw.entries.len() != n {
            return Err(Error::Parse(format!("expected {n} rows, found {}", raw.entries.len())));
        }
        let mut flat = Vec::with_capacity(n * n);
        for (i, row) in raw.entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            flat.extend(row.iter().map(|&[re, im]| C64::new(re, im)));
        }
        // serde_json rejects NaN and infinite literals, but overflowing
        // decimals such as 1e999 still parse to infinity
        let matrix = CMatrix::from_vec(n, flat).map_err(|e| Error::Parse(e.to_string()))?;
        Ok(Self { label: raw.label, matrix })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_canonical()).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
    }

    pub fn to_canonical(&self) -> String {
        let n = self.matrix.n();
        let mut out = String::from("{\n");
        if let Some(label) = &self.label {
            let quoted = serde_json::to_string(label).expect("strings serialize");
            let _ = writeln!(out, "  \"label\": {quoted},");
        }
        let _ = writeln!(out, "  \"n\": {n},");
        out.push_str("  \"entries\": [\n");
        for i in 0..n {
            let row: Vec<String> = (0..n)
                .map(|j| {
                    let z = self.matrix[(i, j)];
                    format!("[{}, {}]", number(z.re), number(z.im))
                })
                .collect();
            let sep = if i + 1 < n { "," } else { "" };
            let _ = writeln!(out, "    [{}]{sep}", row.join(", "));
        }
        out.push_str("  ]\n}\n");
        out
    }
}

/// Shortest decimal that parses back to the same `f64`; `-0.0` is written
/// as `0.0`.
fn number(x: f64) -> String {
    if x == 0.0 {
        "0.0".into()
    } else {
        format!("{x:?}")
    }
}
