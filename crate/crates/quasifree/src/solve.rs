//! LU factorization with partial pivoting for small dense complex systems.
//!
//! Used for the Padé solve inside the matrix exponential and for the
//! resolvent-style inverses in the coefficient conversions, where the
//! 1-norm condition number doubles as the singularity diagnostic.

use crate::error::{Error, Result};
use crate::linalg::{identity, one_norm, require_finite, require_square, C64, CMatrix};

/// Condition numbers above this are treated as numerically singular.
pub const CONDITION_LIMIT: f64 = 1e12;

/// Compact LU factorization PA = LU, pivot row indices per column.
pub struct LuFactors {
    lu: CMatrix,
    pivots: Vec<usize>,
    swaps: usize,
}

pub fn lu_factor(a: &CMatrix) -> Result<LuFactors> {
    let n = require_square("LU factorization", a)?;
    require_finite("LU factorization", a)?;
    let mut lu = a.clone();
    let mut pivots = vec![0usize; n];
    let mut swaps = 0usize;
    for k in 0..n {
        let mut p = k;
        let mut best = lu[(k, k)].norm();
        for i in (k + 1)..n {
            let mag = lu[(i, k)].norm();
            if mag > best {
                best = mag;
                p = i;
            }
        }
        pivots[k] = p;
        if best == 0.0 {
            return Err(Error::IllConditioned {
                context: "LU factorization",
                cond: f64::INFINITY,
                limit: CONDITION_LIMIT,
            });
        }
        if p != k {
            swaps += 1;
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(p, j)];
                lu[(p, j)] = tmp;
            }
        }
        let piv = lu[(k, k)];
        for i in (k + 1)..n {
            let factor = lu[(i, k)] / piv;
            lu[(i, k)] = factor;
            for j in (k + 1)..n {
                let sub = factor * lu[(k, j)];
                lu[(i, j)] -= sub;
            }
        }
    }
    Ok(LuFactors { lu, pivots, swaps })
}

impl LuFactors {
    pub fn dim(&self) -> usize {
        self.lu.nrows()
    }

    /// Solves AX = B for a multi-column right-hand side.
    pub fn solve(&self, b: &CMatrix) -> Result<CMatrix> {
        let n = self.dim();
        if b.nrows() != n {
            return Err(Error::DimensionMismatch {
                context: "LU solve",
                expected: n,
                got: b.nrows(),
            });
        }
        let mut x = b.clone();
        let ncols = x.ncols();
        // apply the full pivot sequence to the right-hand side first: the
        // stored multipliers sit in their final (fully pivoted) rows, so
        // interleaving swaps with elimination would pair multipliers with
        // the wrong rows whenever a swap happens after the first column
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                for j in 0..ncols {
                    let tmp = x[(k, j)];
                    x[(k, j)] = x[(p, j)];
                    x[(p, j)] = tmp;
                }
            }
        }
        // forward substitution
        for k in 0..n {
            for i in (k + 1)..n {
                let factor = self.lu[(i, k)];
                for j in 0..ncols {
                    let sub = factor * x[(k, j)];
                    x[(i, j)] -= sub;
                }
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let piv = self.lu[(k, k)];
            for j in 0..ncols {
                x[(k, j)] /= piv;
            }
            for i in 0..k {
                let factor = self.lu[(i, k)];
                for j in 0..ncols {
                    let sub = factor * x[(k, j)];
                    x[(i, j)] -= sub;
                }
            }
        }
        Ok(x)
    }

    pub fn determinant(&self) -> C64 {
        let mut det = if self.swaps % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        };
        for k in 0..self.dim() {
            det *= self.lu[(k, k)];
        }
        det
    }
}

/// Explicit inverse via LU.
pub fn inverse(a: &CMatrix) -> Result<CMatrix> {
    let n = require_square("matrix inverse", a)?;
    lu_factor(a)?.solve(&identity(n))
}

/// Inverse together with the 1-norm condition number `‖A‖₁ ‖A⁻¹‖₁`, rejected
/// above `limit`. The returned condition number is exact for the computed
/// inverse, not an estimate.
pub fn inverse_with_condition(
    context: &'static str,
    a: &CMatrix,
    limit: f64,
) -> Result<(CMatrix, f64)> {
    let inv = match inverse(a) {
        Ok(inv) => inv,
        Err(Error::IllConditioned { .. }) => {
            return Err(Error::IllConditioned {
                context,
                cond: f64::INFINITY,
                limit,
            })
        }
        Err(e) => return Err(e),
    };
    let cond = one_norm(a) * one_norm(&inv);
    if !cond.is_finite() || cond > limit {
        return Err(Error::IllConditioned {
            context,
            cond,
            limit,
        });
    }
    Ok((inv, cond))
}
