//! Superoperators as dense d²xd² matrices over column-stacked operators.
//!
//! Convention: `vec` stacks columns, so entry (i, j) of an operator lands at
//! flat index `j·d + i`, and the sandwich map X ↦ A X B has the matrix
//! `Bᵀ ⊗ A`. Everything downstream (generators, Liouvillian propagation,
//! spectra) relies on this one convention; the tests pin it.

use ndarray::{Array1, Array2};

use crate::error::{Error, Result};
use crate::linalg::{kron, require_square, C64, CMatrix};

/// Column-stacking vectorization.
pub fn vec_operator(x: &CMatrix) -> Array1<C64> {
    let d = x.nrows();
    let mut out = Array1::zeros(d * d);
    for j in 0..d {
        for i in 0..d {
            out[j * d + i] = x[(i, j)];
        }
    }
    out
}

/// Inverse of [`vec_operator`].
pub fn unvec_operator(v: &Array1<C64>, dim: usize) -> CMatrix {
    assert_eq!(v.len(), dim * dim, "unvec: length mismatch");
    let mut out = Array2::zeros((dim, dim));
    for j in 0..dim {
        for i in 0..dim {
            out[(i, j)] = v[j * dim + i];
        }
    }
    out
}

/// A linear map on d-dimensional operators, stored dense.
#[derive(Debug, Clone, PartialEq)]
pub struct Superoperator {
    dim: usize,
    matrix: CMatrix,
}

impl Superoperator {
    pub fn zero(dim: usize) -> Self {
        Superoperator {
            dim,
            matrix: Array2::zeros((dim * dim, dim * dim)),
        }
    }

    pub fn from_matrix(dim: usize, matrix: CMatrix) -> Result<Self> {
        let n = require_square("superoperator", &matrix)?;
        if n != dim * dim {
            return Err(Error::DimensionMismatch {
                context: "superoperator",
                expected: dim * dim,
                got: n,
            });
        }
        Ok(Superoperator { dim, matrix })
    }

    /// The map X ↦ coeff · A X B.
    pub fn sandwich(coeff: C64, a: &CMatrix, b: &CMatrix) -> Result<Self> {
        let dim = require_square("superoperator term", a)?;
        let db = require_square("superoperator term", b)?;
        if dim != db {
            return Err(Error::DimensionMismatch {
                context: "superoperator term",
                expected: dim,
                got: db,
            });
        }
        let bt = b.t().to_owned();
        Ok(Superoperator {
            dim,
            matrix: kron(&bt, a) * coeff,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Adds `coeff · A X B` in place.
    pub fn add_sandwich(&mut self, coeff: C64, a: &CMatrix, b: &CMatrix) -> Result<()> {
        let term = Superoperator::sandwich(coeff, a, b)?;
        if term.dim != self.dim {
            return Err(Error::DimensionMismatch {
                context: "superoperator term",
                expected: self.dim,
                got: term.dim,
            });
        }
        self.matrix += &term.matrix;
        Ok(())
    }

    pub fn apply(&self, x: &CMatrix) -> Result<CMatrix> {
        let d = require_square("superoperator apply", x)?;
        if d != self.dim {
            return Err(Error::DimensionMismatch {
                context: "superoperator apply",
                expected: self.dim,
                got: d,
            });
        }
        let v = self.matrix.dot(&vec_operator(x));
        Ok(unvec_operator(&v, self.dim))
    }

    /// Frobenius norm of the difference, as a superoperator-level metric.
    pub fn distance(&self, other: &Superoperator) -> f64 {
        crate::linalg::frobenius_norm(&(&self.matrix - &other.matrix))
    }

    /// Spectrum of the map (general complex eigenvalues, sorted by real
    /// part then imaginary part).
    pub fn spectrum(&self) -> Result<Vec<C64>> {
        crate::eig::eigenvalues(&self.matrix)
    }
}

impl std::ops::Add for Superoperator {
    type Output = Superoperator;
    fn add(self, rhs: Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim, "superoperator add: dimension mismatch");
        Superoperator {
            dim: self.dim,
            matrix: self.matrix + rhs.matrix,
        }
    }
}

impl std::ops::Sub for Superoperator {
    type Output = Superoperator;
    fn sub(self, rhs: Superoperator) -> Superoperator {
        assert_eq!(self.dim, rhs.dim, "superoperator sub: dimension mismatch");
        Superoperator {
            dim: self.dim,
            matrix: self.matrix - rhs.matrix,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{identity, max_abs_diff, zeros};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sample(seed: usize, dim: usize) -> CMatrix {
        let mut m = zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = c(
                    (((seed + 3 * i + 7 * j) % 13) as f64 - 6.0) / 6.0,
                    (((seed + 5 * i + 2 * j) % 11) as f64 - 5.0) / 5.0,
                );
            }
        }
        m
    }

    #[test]
    fn vec_stacks_columns() {
        let mut x = zeros(2);
        x[(0, 0)] = c(1.0, 0.0);
        x[(1, 0)] = c(2.0, 0.0);
        x[(0, 1)] = c(3.0, 0.0);
        x[(1, 1)] = c(4.0, 0.0);
        let v = vec_operator(&x);
        assert_eq!(v[0], c(1.0, 0.0));
        assert_eq!(v[1], c(2.0, 0.0));
        assert_eq!(v[2], c(3.0, 0.0));
        assert_eq!(v[3], c(4.0, 0.0));
        let back = unvec_operator(&v, 2);
        assert_eq!(max_abs_diff(&back, &x), 0.0);
    }

    #[test]
    fn sandwich_matrix_reproduces_a_x_b() {
        for dim in [2usize, 3] {
            let a = sample(1, dim);
            let b = sample(2, dim);
            let x = sample(3, dim);
            let s = Superoperator::sandwich(c(1.0, 0.0), &a, &b).unwrap();
            let direct = a.dot(&x).dot(&b);
            let via_super = s.apply(&x).unwrap();
            assert!(max_abs_diff(&direct, &via_super) < 1e-13);
        }
    }

    #[test]
    fn accumulated_terms_apply_linearly() {
        let dim = 2;
        let a = sample(4, dim);
        let b = sample(5, dim);
        let x = sample(6, dim);
        let mut s = Superoperator::zero(dim);
        s.add_sandwich(c(2.0, 0.0), &a, &identity(dim)).unwrap();
        s.add_sandwich(c(0.0, -1.0), &identity(dim), &b).unwrap();
        let want = a.dot(&x) * c(2.0, 0.0) + x.dot(&b) * c(0.0, -1.0);
        assert!(max_abs_diff(&want, &s.apply(&x).unwrap()) < 1e-13);
    }

    #[test]
    fn identity_map_has_unit_spectrum() {
        let mut s = Superoperator::zero(2);
        s.add_sandwich(c(1.0, 0.0), &identity(2), &identity(2))
            .unwrap();
        for l in s.spectrum().unwrap() {
            assert!((l - c(1.0, 0.0)).norm() < 1e-12);
        }
    }
}
