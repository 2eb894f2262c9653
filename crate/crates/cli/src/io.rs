//! File formats: the system document and the bare-matrix inputs used by
//! the selection subcommand. Everything is JSON with numbers written at
//! full round-trip precision.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use ctrlqual::{Horizon, LtiSystem, TimeMode};

use crate::CliError;

/// On-disk description of one system.
///
/// ```json
/// {
///   "A": [[0.0, 1.0], [0.0, 0.0]],
///   "B": [[0.0], [1.0]],
///   "time_mode": "continuous",
///   "horizon": 1.0
/// }
/// ```
///
/// `horizon` is a positive number or the string `"inf"`; for discrete
/// systems a finite horizon must be a whole number of steps.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<f64>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<f64>>,
    pub time_mode: TimeModeField,
    pub horizon: HorizonField,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TimeModeField {
    Continuous,
    Discrete,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HorizonField {
    Number(f64),
    Word(String),
}

impl SystemFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::new(format!("cannot parse {}: {e}", path.display())))
    }

    /// Validate the document into a system and its declared horizon.
    pub fn into_parts(self) -> Result<(LtiSystem, Horizon), CliError> {
        let a = rows_to_matrix(&self.a, "A")?;
        let b = rows_to_matrix(&self.b, "B")?;
        let time_mode = match self.time_mode {
            TimeModeField::Continuous => TimeMode::Continuous,
            TimeModeField::Discrete => TimeMode::Discrete,
        };
        let system = LtiSystem::new(a, b, time_mode)
            .map_err(|e| CliError::new(format!("invalid system: {e}")))?;
        let horizon = parse_horizon_field(&self.horizon)?;
        Ok((system, horizon))
    }
}

fn parse_horizon_field(field: &HorizonField) -> Result<Horizon, CliError> {
    match field {
        HorizonField::Number(t) => {
            if t.is_finite() && *t > 0.0 {
                Ok(Horizon::Finite(*t))
            } else {
                Err(CliError::new(format!(
                    "field \"horizon\" must be positive, got {t}"
                )))
            }
        }
        HorizonField::Word(w) if w == "inf" => Ok(Horizon::Infinite),
        HorizonField::Word(w) => Err(CliError::new(format!(
            "field \"horizon\" must be a positive number or \"inf\", got {w:?}"
        ))),
    }
}

/// Parse a `--horizon` flag value: a positive number or `inf`.
pub fn parse_horizon_flag(s: &str) -> Result<Horizon, String> {
    if s == "inf" {
        return Ok(Horizon::Infinite);
    }
    match s.parse::<f64>() {
        Ok(t) if t.is_finite() && t > 0.0 => Ok(Horizon::Finite(t)),
        _ => Err(format!("expected a positive number or \"inf\", got {s:?}")),
    }
}

/// Parse a comma-separated vector flag such as `--target 1,0`.
pub fn parse_vector_flag(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|part| {
            part.trim()
                .parse::<f64>()
                .map_err(|_| format!("{part:?} is not a number"))
        })
        .collect()
}

fn rows_to_matrix(rows: &[Vec<f64>], field: &str) -> Result<DMatrix<f64>, CliError> {
    if rows.is_empty() {
        return Err(CliError::new(format!("field \"{field}\" has no rows")));
    }
    let cols = rows[0].len();
    if cols == 0 {
        return Err(CliError::new(format!(
            "field \"{field}\": row 0 has no entries"
        )));
    }
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(CliError::new(format!(
                "field \"{field}\": row {i} has {} entries but row 0 has {cols}",
                row.len()
            )));
        }
    }
    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
    Ok(DMatrix::from_row_slice(rows.len(), cols, &flat))
}

/// Load a bare JSON 2-D array as a matrix.
pub fn load_matrix(path: &Path, what: &str) -> Result<DMatrix<f64>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("cannot parse {}: {e}", path.display())))?;
    rows_to_matrix(&rows, what)
}

/// Load a JSON 2-D array whose rows are candidate actuator columns.
pub fn load_candidates(path: &Path) -> Result<Vec<DVector<f64>>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::new(format!("cannot read {}: {e}", path.display())))?;
    let rows: Vec<Vec<f64>> = serde_json::from_str(&text)
        .map_err(|e| CliError::new(format!("cannot parse {}: {e}", path.display())))?;
    Ok(rows
        .into_iter()
        .map(DVector::from_vec)
        .collect())
}
