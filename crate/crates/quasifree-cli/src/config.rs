//! Configuration file schema and conversion into library types.
//!
//! A model lives in a single JSON file. Complex numbers are two-element
//! arrays `[re, im]`; matrices are nested row-major arrays of those pairs:
//!
//! ```json
//! {
//!   "dimension": 2,
//!   "operators": {
//!     "C": [[[0,0],[1,0]],[[0,0],[0,0]]],
//!     "F": [[[0,0],[0,0]],[[0,0],[0,0]]]
//!   },
//!   "bath": { "gamma": 1.0, "sigma": 0.0, "n": 0.0, "m": [0,0], "alpha": [0,0] },
//!   "run": { "t_max": 1.0, "steps": 200, "dt": 0.001, "fock_dim": 2 }
//! }
//! ```
//!
//! `operators` may carry at most one extra coefficient presentation:
//! either `W`, `H`, `L` (scattering parameters) or `E11`, `E10`, `E01`,
//! `E00` (time-ordered data). Providing both is a configuration error.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use quasifree::generator::GaussianModel;
use quasifree::linalg::{projector, zeros};
use quasifree::{C64, CMatrix};

use crate::CliError;

/// One complex number, serialized as `[re, im]`.
pub type ComplexPair = (f64, f64);

/// Row-major complex matrix.
pub type MatrixRows = Vec<Vec<ComplexPair>>;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub dimension: usize,
    pub operators: OperatorSection,
    pub bath: BathSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub run: Option<RunSection>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorSection {
    #[serde(rename = "C")]
    pub c: MatrixRows,
    #[serde(rename = "F")]
    pub f: MatrixRows,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho0: Option<MatrixRows>,
    #[serde(rename = "W", default, skip_serializing_if = "Option::is_none")]
    pub w: Option<MatrixRows>,
    #[serde(rename = "H", default, skip_serializing_if = "Option::is_none")]
    pub h: Option<MatrixRows>,
    #[serde(rename = "L", default, skip_serializing_if = "Option::is_none")]
    pub l: Option<MatrixRows>,
    #[serde(rename = "E11", default, skip_serializing_if = "Option::is_none")]
    pub e11: Option<MatrixRows>,
    #[serde(rename = "E10", default, skip_serializing_if = "Option::is_none")]
    pub e10: Option<MatrixRows>,
    #[serde(rename = "E01", default, skip_serializing_if = "Option::is_none")]
    pub e01: Option<MatrixRows>,
    #[serde(rename = "E00", default, skip_serializing_if = "Option::is_none")]
    pub e00: Option<MatrixRows>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BathSection {
    pub gamma: f64,
    pub sigma: f64,
    pub n: f64,
    pub m: ComplexPair,
    pub alpha: ComplexPair,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fock_dim: Option<usize>,
}

/// Reads and parses a configuration file. Parse failures carry the
/// serde line/column/field diagnostic and map to exit code 2.
pub fn load(path: &Path) -> Result<ConfigFile, CliError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CliError::Malformed(format!("cannot read config {}: {e}", path.display()))
    })?;
    let cfg: ConfigFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Malformed(format!("config {}: {e}", path.display())))?;
    if cfg.dimension == 0 {
        return Err(CliError::Malformed(format!(
            "config {}: dimension must be at least 1",
            path.display()
        )));
    }
    Ok(cfg)
}

/// Converts one named matrix, checking it is square of the configured
/// dimension.
pub fn matrix_from(field: &str, dimension: usize, rows: &MatrixRows) -> Result<CMatrix, CliError> {
    if rows.len() != dimension {
        return Err(CliError::Malformed(format!(
            "operators.{field}: {} rows, expected dimension {dimension}",
            rows.len()
        )));
    }
    let mut out = zeros(dimension);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != dimension {
            return Err(CliError::Malformed(format!(
                "operators.{field}: row {i} has {} entries, expected {dimension}",
                row.len()
            )));
        }
        for (j, &(re, im)) in row.iter().enumerate() {
            out[(i, j)] = C64::new(re, im);
        }
    }
    Ok(out)
}

/// Serializes a matrix back into the config representation.
pub fn matrix_to(m: &CMatrix) -> MatrixRows {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| (m[(i, j)].re, m[(i, j)].im)).collect())
        .collect()
}

/// Builds the bath parameter record without validating it, so commands can
/// diagnose inadmissible parameters instead of failing on construction.
pub fn bath_params(b: &BathSection) -> quasifree::bath::GaussianBathParams {
    quasifree::bath::GaussianBathParams {
        gamma: b.gamma,
        sigma: b.sigma,
        n: b.n,
        m: C64::new(b.m.0, b.m.1),
        alpha: C64::new(b.alpha.0, b.alpha.1),
    }
}

/// Builds the validated system model (C, F, bath). Constraint violations
/// surface as exit code 1.
pub fn build_model(cfg: &ConfigFile) -> Result<GaussianModel, CliError> {
    let c = matrix_from("C", cfg.dimension, &cfg.operators.c)?;
    let f = matrix_from("F", cfg.dimension, &cfg.operators.f)?;
    GaussianModel::new(c, f, bath_params(&cfg.bath)).map_err(CliError::from)
}

/// Initial state: `operators.rho0` when present, the ground-state projector
/// otherwise. Validity (trace one, positivity) is enforced by the library
/// when the evolution starts.
pub fn initial_state(cfg: &ConfigFile) -> Result<CMatrix, CliError> {
    match &cfg.operators.rho0 {
        Some(rows) => matrix_from("rho0", cfg.dimension, rows),
        None => Ok(projector(cfg.dimension, 0)),
    }
}

/// An extra coefficient presentation found in the config.
pub enum Presentation {
    Scattering { w: CMatrix, h: CMatrix, l: CMatrix },
    TimeOrdered { e11: CMatrix, e10: CMatrix, e01: CMatrix, e00: CMatrix },
}

/// Extracts the optional coefficient presentation, enforcing that the
/// groups (W, H, L) and (E11, E10, E01, E00) are each all-or-nothing and
/// mutually exclusive.
pub fn presentation(cfg: &ConfigFile) -> Result<Option<Presentation>, CliError> {
    let ops = &cfg.operators;
    let whl = [("W", &ops.w), ("H", &ops.h), ("L", &ops.l)];
    let eij = [
        ("E11", &ops.e11),
        ("E10", &ops.e10),
        ("E01", &ops.e01),
        ("E00", &ops.e00),
    ];
    let whl_present = whl.iter().filter(|(_, m)| m.is_some()).count();
    let eij_present = eij.iter().filter(|(_, m)| m.is_some()).count();
    if whl_present > 0 && eij_present > 0 {
        return Err(CliError::Malformed(
            "operators: provide either (W, H, L) or (E11, E10, E01, E00), not both".into(),
        ));
    }
    let missing = |group: &[(&str, &Option<MatrixRows>)]| {
        group
            .iter()
            .filter(|(_, m)| m.is_none())
            .map(|(name, _)| *name)
            .collect::<Vec<_>>()
            .join(", ")
    };
    if whl_present > 0 {
        if whl_present < whl.len() {
            return Err(CliError::Malformed(format!(
                "operators: (W, H, L) must be provided together; missing {}",
                missing(&whl)
            )));
        }
        return Ok(Some(Presentation::Scattering {
            w: matrix_from("W", cfg.dimension, ops.w.as_ref().unwrap())?,
            h: matrix_from("H", cfg.dimension, ops.h.as_ref().unwrap())?,
            l: matrix_from("L", cfg.dimension, ops.l.as_ref().unwrap())?,
        }));
    }
    if eij_present > 0 {
        if eij_present < eij.len() {
            return Err(CliError::Malformed(format!(
                "operators: (E11, E10, E01, E00) must be provided together; missing {}",
                missing(&eij)
            )));
        }
        return Ok(Some(Presentation::TimeOrdered {
            e11: matrix_from("E11", cfg.dimension, ops.e11.as_ref().unwrap())?,
            e10: matrix_from("E10", cfg.dimension, ops.e10.as_ref().unwrap())?,
            e01: matrix_from("E01", cfg.dimension, ops.e01.as_ref().unwrap())?,
            e00: matrix_from("E00", cfg.dimension, ops.e00.as_ref().unwrap())?,
        }));
    }
    Ok(None)
}
