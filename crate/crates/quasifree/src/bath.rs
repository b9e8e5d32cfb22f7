//! Gaussian bath parameters and their derived data.
//!
//! A stationary Gaussian (quasi-free) bath is specified by
//! - `gamma`: coupling strength, the real part of 2κ (must be positive),
//! - `sigma`: the principal-value frequency shift, the imaginary part of κ,
//! - `n`: mean thermal occupation (n ≥ 0),
//! - `m`: complex squeezing moment, constrained by |m|² ≤ n(n+1),
//! - `alpha`: coherent displacement amplitude.
//!
//! The second moments are ⟨a a†⟩ = n+1, ⟨a† a⟩ = n, ⟨a a⟩ = m (central
//! moments when alpha ≠ 0), and the first moment is ⟨a⟩ = alpha. The
//! squeezing constraint is exactly positive-semidefiniteness of that moment
//! matrix.

use crate::error::{Result, ValidationReport};
use crate::linalg::C64;

/// Slack allowed on the squeezing constraint |m|² ≤ n(n+1), so boundary
/// baths produced by floating-point arithmetic still validate.
pub const SQUEEZING_SLACK: f64 = 1e-9;

/// Occupations below this are treated as exact vacuum when doubling.
pub const OCCUPATION_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianBathParams {
    pub gamma: f64,
    pub sigma: f64,
    pub n: f64,
    pub m: C64,
    pub alpha: C64,
}

impl GaussianBathParams {
    /// Validated constructor; use struct syntax to build candidates that
    /// still need diagnosing (e.g. for [`validate_bath`] reports).
    pub fn new(gamma: f64, sigma: f64, n: f64, m: C64, alpha: C64) -> Result<Self> {
        let p = GaussianBathParams {
            gamma,
            sigma,
            n,
            m,
            alpha,
        };
        validate_bath(&p).into_result()?;
        Ok(p)
    }

    pub fn vacuum(gamma: f64) -> Result<Self> {
        Self::new(gamma, 0.0, 0.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    pub fn thermal(gamma: f64, n: f64) -> Result<Self> {
        Self::new(gamma, 0.0, n, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// κ = γ/2 + iσ, the one-sided weight of the white-noise commutator at
    /// coincidence.
    pub fn kappa(&self) -> C64 {
        C64::new(self.gamma / 2.0, self.sigma)
    }

    pub fn validate(&self) -> ValidationReport {
        validate_bath(self)
    }
}

/// Checks every bath constraint and reports each violation on its own line.
pub fn validate_bath(p: &GaussianBathParams) -> ValidationReport {
    let mut report = ValidationReport::new();
    for (name, value) in [("gamma", p.gamma), ("sigma", p.sigma), ("n", p.n)] {
        if !value.is_finite() {
            report.push(format!("{name} must be finite (got {value})"));
        }
    }
    for (name, value) in [("m", p.m), ("alpha", p.alpha)] {
        if !value.re.is_finite() || !value.im.is_finite() {
            report.push(format!("{name} must be finite (got {value})"));
        }
    }
    if !report.is_valid() {
        return report;
    }
    if p.gamma <= 0.0 {
        report.push(format!("gamma must be positive (got {})", p.gamma));
    }
    if p.n < 0.0 {
        report.push(format!("n must be nonnegative (got {})", p.n));
    }
    if p.n >= 0.0 {
        let cap = p.n * (p.n + 1.0);
        let msq = p.m.norm_sqr();
        if msq > cap + SQUEEZING_SLACK {
            report.push(format!(
                "|m|^2 <= n(n+1) violated: |m|^2 = {msq:.12e} exceeds n(n+1) = {cap:.12e}"
            ));
        }
    }
    report
}

/// Coefficients (x, y, z) of the doubled vacuum representation: the bath
/// mode is written as x·a₁ + y·a₂† + z·a₂ over two independent vacuum
/// copies, with |x|² − |y|² + |z|² = 1, |x|² + |z|² = n+1, |y|² = n and
/// y·z = m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoublingCoefficients {
    pub x: C64,
    pub y: C64,
    pub z: C64,
}

pub fn doubling_coefficients(p: &GaussianBathParams) -> Result<DoublingCoefficients> {
    validate_bath(p).into_result()?;
    if p.n <= OCCUPATION_FLOOR {
        // vacuum limit: the constraint forces m → 0 as n → 0
        return Ok(DoublingCoefficients {
            x: C64::new(1.0, 0.0),
            y: C64::new(0.0, 0.0),
            z: C64::new(0.0, 0.0),
        });
    }
    // validity gives n+1 - |m|²/n ≥ 0 up to the slack; clamp the radicand
    let radicand = (p.n + 1.0 - p.m.norm_sqr() / p.n).max(0.0);
    Ok(DoublingCoefficients {
        x: C64::new(radicand.sqrt(), 0.0),
        y: C64::new(p.n.sqrt(), 0.0),
        z: p.m / p.n.sqrt(),
    })
}

/// Second-order Ito products of the Gaussian noise increments: the
/// coefficient of dt in each of the four quadratic combinations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ItoTable {
    /// dA dA† = γ(n+1) dt
    pub a_adag: C64,
    /// dA† dA = γ n dt
    pub adag_a: C64,
    /// dA† dA† = γ m̄ dt
    pub adag_adag: C64,
    /// dA dA = γ m dt
    pub a_a: C64,
}

pub fn ito_table(p: &GaussianBathParams) -> Result<ItoTable> {
    validate_bath(p).into_result()?;
    Ok(ItoTable {
        a_adag: C64::new(p.gamma * (p.n + 1.0), 0.0),
        adag_a: C64::new(p.gamma * p.n, 0.0),
        adag_adag: C64::new(p.gamma, 0.0) * p.m.conj(),
        a_a: C64::new(p.gamma, 0.0) * p.m,
    })
}

/// Normally-ordered characteristic function χ(ζ) = ⟨exp(iζ̄a + iζa†)⟩ of the
/// single-mode Gaussian state:
///
/// χ(ζ) = exp{ −(n+½)|ζ|² − ½(m ζ̄² + m̄ ζ²) + iζ̄α + iζᾱ }
///
/// This exponent is the moment-generating form: Wirtinger derivatives at
/// ζ = 0 return ⟨a⟩ = α and the central second moments (n+1, m).
pub fn characteristic_function(p: &GaussianBathParams, zeta: C64) -> Result<C64> {
    validate_bath(p).into_result()?;
    let zc = zeta.conj();
    let i = C64::new(0.0, 1.0);
    let exponent = C64::new(-(p.n + 0.5) * zeta.norm_sqr(), 0.0)
        - (p.m * zc * zc + p.m.conj() * zeta * zeta) * 0.5
        + i * zc * p.alpha
        + i * zeta * p.alpha.conj();
    Ok(exponent.exp())
}
