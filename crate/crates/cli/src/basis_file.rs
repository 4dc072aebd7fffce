//! On-disk JSON schema for generated basis collections.
//!
//! ```json
//! {
//!   "dimension": 3,
//!   "generator": { "j": 1.0, "r": 0.0, "construction": "weyl" },
//!   "bases": [ { "label": "spherical", "vectors": [ [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]], ... ] } ]
//! }
//! ```
//!
//! Amplitudes are `[re, im]` pairs. Floats are written in shortest
//! round-trip form, so `load(save(x)) == x` bit for bit.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use su2mub::mub::{BasisLabel, LabeledBasis};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    Fourier,
    Weyl,
    Gauss,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Fourier => "fourier",
            Self::Weyl => "weyl",
            Self::Gauss => "gauss",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub j: f64,
    pub r: f64,
    pub construction: Construction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisEntry {
    pub label: String,
    pub vectors: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BasisFile {
    pub dimension: usize,
    pub generator: Generator,
    pub bases: Vec<BasisEntry>,
}

impl BasisFile {
    pub fn from_bases(generator: Generator, bases: &[LabeledBasis]) -> Self {
        let dimension = bases.first().map_or(0, LabeledBasis::dim);
        let bases = bases
            .iter()
            .map(|b| BasisEntry {
                label: b.label.to_string(),
                vectors: b
                    .vectors
                    .iter()
                    .map(|v| v.iter().map(|z| [z.re, z.im]).collect())
                    .collect(),
            })
            .collect();
        Self {
            dimension,
            generator,
            bases,
        }
    }

    /// Converts back to labeled bases, checking every shape against `dimension`.
    pub fn to_bases(&self) -> Result<Vec<LabeledBasis>, CliError> {
        let d = self.dimension;
        if d < 2 {
            return Err(CliError::Parse(format!(
                "dimension must be at least 2, got {d}"
            )));
        }
        self.bases
            .iter()
            .map(|entry| {
                let label = BasisLabel::from_str(&entry.label)
                    .map_err(|e| CliError::Parse(e.to_string()))?;
                if entry.vectors.len() != d {
                    return Err(CliError::Parse(format!(
                        "basis {} has {} vectors, expected {d}",
                        entry.label,
                        entry.vectors.len()
                    )));
                }
                let vectors = entry
                    .vectors
                    .iter()
                    .map(|v| {
                        if v.len() != d {
                            return Err(CliError::Parse(format!(
                                "a vector of basis {} has {} entries, expected {d}",
                                entry.label,
                                v.len()
                            )));
                        }
                        Ok(v.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                    })
                    .collect::<Result<_, _>>()?;
                Ok(LabeledBasis { label, vectors })
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("basis file serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), CliError> {
        std::fs::write(path, self.to_json() + "\n")
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}
