//! Plain-text and CSV rendering.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use quasifree::evolution::Trajectory;
use quasifree::{C64, CMatrix};

use crate::CliError;

/// Full-precision float for CSV cells (17 significant digits, exact
/// round-trip through text).
pub fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn format_complex(z: C64) -> String {
    format!("{:+.9e}{:+.9e}i", z.re, z.im)
}

/// Renders `name` followed by the matrix, one row per line.
pub fn format_matrix(name: &str, m: &CMatrix) -> String {
    let mut out = format!("{name}:\n");
    for i in 0..m.nrows() {
        let row = (0..m.ncols())
            .map(|j| format_complex(m[(i, j)]))
            .collect::<Vec<_>>()
            .join("  ");
        let _ = writeln!(out, "  [ {row} ]");
    }
    out
}

/// Trajectory CSV: `t,tr_rho,herm_residual,min_eig,p0,...` plus an optional
/// extra column spliced in right after `t`.
pub fn trajectory_csv(traj: &Trajectory, extra: Option<(&str, &[f64])>) -> String {
    let dim = traj.states.first().map_or(0, |s| s.nrows());
    let mut header = String::from("t");
    if let Some((name, _)) = extra {
        header.push(',');
        header.push_str(name);
    }
    header.push_str(",tr_rho,herm_residual,min_eig");
    for k in 0..dim {
        let _ = write!(header, ",p{k}");
    }
    let mut out = header;
    out.push('\n');
    for (k, t) in traj.times.iter().enumerate() {
        let diag = &traj.diagnostics[k];
        let state = &traj.states[k];
        let mut cells = vec![csv_float(*t)];
        if let Some((_, column)) = extra {
            cells.push(csv_float(column[k]));
        }
        cells.push(csv_float(diag.trace.re));
        cells.push(csv_float(diag.hermiticity_residual));
        cells.push(csv_float(diag.min_eigenvalue.unwrap_or(f64::NAN)));
        for i in 0..dim {
            cells.push(csv_float(state[(i, i)].re));
        }
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

/// Writes `text` to `output` when given, otherwise to stdout.
pub fn emit(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| {
            CliError::Failure(format!("cannot write {}: {e}", path.display()))
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
