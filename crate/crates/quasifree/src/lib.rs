//! Quasi-free (Gaussian) bath dynamics for finite-dimensional systems.
//!
//! A system with annihilation-type coupling operator C driven by a
//! stationary Gaussian field is characterized by five bath numbers: the
//! coupling rate γ > 0, a Lamb-type shift σ, the occupation n ≥ 0, the
//! squeezing correlation m (|m|² ≤ n(n+1)), and a displacement amplitude α.
//! This crate provides, for such models:
//!
//! - the Ito table and characteristic function of the driving field
//!   ([`bath`]);
//! - conversions between time-ordered, normal-ordered, and
//!   Hudson–Parthasarathy coefficient presentations of the QSDE, with a
//!   unitarity residual to certify them ([`coeffs`]);
//! - the Heisenberg and Schrödinger generators induced on the system,
//!   their GKS matrix, and an exactly equivalent two-channel vacuum
//!   presentation obtained by doubling ([`generator`]);
//! - exact master-equation propagation via the matrix exponential of the
//!   vectorized generator, plus a matrix-element evaluator for
//!   exponential-vector kernels under piecewise-constant drive
//!   ([`evolution`]);
//! - an independent collision-model integrator that reproduces the same
//!   reduced dynamics from repeated system–ancilla interactions, used as a
//!   cross-check ([`oracle`]).
//!
//! Dense matrices use [`ndarray`] with `Complex64` elements throughout;
//! the small dimensions these models live in (products of qubit and
//! few-level spaces) make dense linear algebra the right tool. The crate
//! carries its own Padé matrix exponential, Jacobi Hermitian eigensolver,
//! and shifted-QR spectrum routine so it has no external BLAS/LAPACK
//! dependency.

pub mod bath;
pub mod coeffs;
pub mod generator;
pub mod eig;
pub mod error;
pub mod evolution;
pub mod expm;
pub mod linalg;
pub mod oracle;
pub mod solve;
pub mod superop;

pub use error::{Error, Result, ValidationReport};
pub use linalg::{C64, CMatrix};
