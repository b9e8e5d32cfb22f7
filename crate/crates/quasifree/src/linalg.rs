//! Dense complex matrices and the small-matrix operations the rest of the
//! crate is built on.
//!
//! Everything here works on `ndarray::Array2<Complex64>` in the default
//! row-major layout. System dimensions in this crate are small (a few to a
//! few hundred once collision-model ancillas are attached), so all routines
//! are written for clarity over asymptotic cleverness. All functions are
//! pure; values are immutable after construction and safe to share across
//! threads.

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMatrix = Array2<C64>;

/// Absolute entrywise tolerance for "is this matrix Hermitian" gates.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Which tensor factor `partial_trace` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Keep {
    First,
    Second,
}

pub fn identity(dim: usize) -> CMatrix {
    Array2::eye(dim)
}

pub fn zeros(dim: usize) -> CMatrix {
    Array2::zeros((dim, dim))
}

/// Conjugate transpose.
pub fn adjoint(a: &CMatrix) -> CMatrix {
    a.t().mapv(|z| z.conj())
}

pub fn trace(a: &CMatrix) -> C64 {
    a.diag().sum()
}

/// `[a, b] = ab - ba`
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.dot(b) - b.dot(a)
}

/// `{a, b} = ab + ba`
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.dot(b) + b.dot(a)
}

/// Kronecker product; the row index of the result is `i_a * rows(b) + i_b`,
/// so the first argument is the slow (outer) factor.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = Array2::zeros((ar * br, ac * bc));
    for ia in 0..ar {
        for ja in 0..ac {
            let aij = a[(ia, ja)];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for ib in 0..br {
                for jb in 0..bc {
                    out[(ia * br + ib, ja * bc + jb)] = aij * b[(ib, jb)];
                }
            }
        }
    }
    out
}

pub fn max_abs(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest entrywise absolute difference. Panics on shape mismatch; use the
/// `require_*` validators on anything user-supplied first.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim(), "max_abs_diff: shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn frobenius_norm(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Maximum absolute column sum (the induced 1-norm).
pub fn one_norm(a: &CMatrix) -> f64 {
    let (_, cols) = a.dim();
    (0..cols)
        .map(|j| a.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Largest entrywise deviation from `a = a†`.
pub fn hermiticity_residual(a: &CMatrix) -> f64 {
    max_abs_diff(a, &adjoint(a))
}

pub fn require_square(context: &'static str, a: &CMatrix) -> Result<usize> {
    let (rows, cols) = a.dim();
    if rows != cols || rows == 0 {
        return Err(Error::NotSquare {
            context,
            rows,
            cols,
        });
    }
    Ok(rows)
}

pub fn require_finite(context: &'static str, a: &CMatrix) -> Result<()> {
    for ((row, col), z) in a.indexed_iter() {
        if !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::NonFinite { context, row, col });
        }
    }
    Ok(())
}

pub fn require_same_dim(context: &'static str, a: &CMatrix, b: &CMatrix) -> Result<usize> {
    let da = require_square(context, a)?;
    let db = require_square(context, b)?;
    if da != db {
        return Err(Error::DimensionMismatch {
            context,
            expected: da,
            got: db,
        });
    }
    Ok(da)
}

pub fn require_hermitian(context: &'static str, a: &CMatrix, tolerance: f64) -> Result<()> {
    require_square(context, a)?;
    require_finite(context, a)?;
    let residual = hermiticity_residual(a);
    if residual > tolerance {
        return Err(Error::NotHermitian {
            context,
            residual,
            tolerance,
        });
    }
    Ok(())
}

/// Validates that `rho` is a density matrix: Hermitian, unit trace, and
/// positive semidefinite, all within `tolerance`.
pub fn require_density(context: &'static str, rho: &CMatrix, tolerance: f64) -> Result<()> {
    require_hermitian(context, rho, tolerance)?;
    let tr = trace(rho);
    if (tr - C64::new(1.0, 0.0)).norm() > tolerance {
        return Err(Error::NotDensity {
            context,
            reason: format!("trace is {:.12e} + {:.12e}i, expected 1", tr.re, tr.im),
        });
    }
    let floor = crate::eig::hermitian_eigenvalues(rho)?
        .first()
        .copied()
        .unwrap_or(0.0);
    if floor < -tolerance {
        return Err(Error::NotDensity {
            context,
            reason: format!("smallest eigenvalue {floor:.3e} is negative"),
        });
    }
    Ok(())
}

/// Lowering operator of a two-level system with basis order (ground,
/// excited): maps |1⟩ to |0⟩.
pub fn sigma_minus() -> CMatrix {
    let mut m = zeros(2);
    m[(0, 1)] = C64::new(1.0, 0.0);
    m
}

pub fn sigma_plus() -> CMatrix {
    adjoint(&sigma_minus())
}

/// Rank-one projector |k⟩⟨k| in dimension `dim`.
pub fn projector(dim: usize, k: usize) -> CMatrix {
    assert!(k < dim, "projector: index out of range");
    let mut m = zeros(dim);
    m[(k, k)] = C64::new(1.0, 0.0);
    m
}

/// Truncated bosonic annihilation operator: `b[k-1, k] = sqrt(k)`.
pub fn annihilator(dim: usize) -> CMatrix {
    let mut m = zeros(dim);
    for k in 1..dim {
        m[(k - 1, k)] = C64::new((k as f64).sqrt(), 0.0);
    }
    m
}

/// Partial trace of a matrix on a bipartite space of shape
/// `dims = (d_first, d_second)` with index convention
/// `row = i_first * d_second + i_second` (matching [`kron`]).
pub fn partial_trace(ab: &CMatrix, dims: (usize, usize), keep: Keep) -> Result<CMatrix> {
    let (da, db) = dims;
    if da == 0 || db == 0 {
        return Err(Error::domain("partial trace: factor dimensions must be positive"));
    }
    let n = require_square("partial trace", ab)?;
    if n != da * db {
        return Err(Error::DimensionMismatch {
            context: "partial trace",
            expected: da * db,
            got: n,
        });
    }
    match keep {
        Keep::First => {
            let mut out = zeros(da);
            for i in 0..da {
                for j in 0..da {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..db {
                        acc += ab[(i * db + k, j * db + k)];
                    }
                    out[(i, j)] = acc;
                }
            }
            Ok(out)
        }
        Keep::Second => {
            let mut out = zeros(db);
            for i in 0..db {
                for j in 0..db {
                    let mut acc = C64::new(0.0, 0.0);
                    for k in 0..da {
                        acc += ab[(k * db + i, k * db + j)];
                    }
                    out[(i, j)] = acc;
                }
            }
            Ok(out)
        }
    }
}

/// Trace distance `½ tr|ρ - σ|` for Hermitian inputs. Both arguments must be
/// Hermitian within [`HERMITICITY_TOL`]; the difference is diagonalized
/// exactly, no normality assumptions beyond that.
pub fn trace_distance(rho: &CMatrix, sigma: &CMatrix) -> Result<f64> {
    require_same_dim("trace distance", rho, sigma)?;
    require_hermitian("trace distance", rho, HERMITICITY_TOL)?;
    require_hermitian("trace distance", sigma, HERMITICITY_TOL)?;
    let diff = rho - sigma;
    let eigs = crate::eig::hermitian_eigenvalues(&diff)?;
    Ok(0.5 * eigs.iter().map(|l| l.abs()).sum::<f64>())
}
