//! Master-equation propagation and exponential-vector kernel evaluation.
//!
//! Density matrices evolve by dρ/dt = L′(ρ) and Heisenberg observables by
//! dX/dt = L(X). Both are propagated with the exact step exponential of
//! the vectorized generator — one `expm(δ·mat)` per uniform grid, applied
//! repeatedly — so the only error in the recorded trajectory is rounding,
//! never integrator truncation. Each state carries diagnostics (trace,
//! Hermiticity residual, smallest eigenvalue) so conservation laws can be
//! audited after the fact.
//!
//! The kernel evaluator computes matrix elements of the dynamics between
//! exponential (coherent) vectors of the driving field with
//! piecewise-constant arguments f, g. On each interval where both are
//! constant the matrix element kernel obeys a linear ODE with frozen
//! coefficient
//!
//! ```text
//! Θ_s = L00 + f̄_s L10 + g_s L01 + f̄_s g_s L11,
//! ```
//!
//! so K_t(f, g) is the time-ordered product of the segment exponentials
//! (later segments on the left) with K_0 = 1. The full, unnormalized
//! matrix element is ⟨φ|K_t|ψ⟩·exp(γ⟨f|g⟩); splitting off the coherent
//! normalization keeps K_0 = 1 for every choice of arguments. For
//! coefficients that come from a unitary (W, H, L) triple and equal
//! arguments f = g, each segment generator satisfies Θ + Θ† = −M†M with
//! M = √γ·L + (f_s/√γ)(W − 1), so K_t(f, f) is a contraction; the tests
//! pin this.

use crate::coeffs::NormalOrderedCoeffs;
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::generator::{heisenberg_generator, schrodinger_generator, GaussianModel};
use crate::linalg::{
    hermiticity_residual, identity, require_density, require_finite, require_square, trace, C64,
    CMatrix,
};
use crate::superop::{unvec_operator, vec_operator, Superoperator};

/// A piecewise-constant complex function on [0, t_end]: value `values[k]`
/// on [breakpoints[k], breakpoints[k+1]) and `values.last()` up to t_end.
#[derive(Debug, Clone, PartialEq)]
pub struct StepFunction {
    breakpoints: Vec<f64>,
    values: Vec<C64>,
    t_end: f64,
}

impl StepFunction {
    pub fn new(breakpoints: Vec<f64>, values: Vec<C64>, t_end: f64) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::domain("step function: needs at least one breakpoint"));
        }
        if breakpoints[0] != 0.0 {
            return Err(Error::domain(format!(
                "step function: first breakpoint must be 0 (got {})",
                breakpoints[0]
            )));
        }
        if breakpoints.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::domain(
                "step function: breakpoints must be strictly ascending",
            ));
        }
        if values.len() != breakpoints.len() {
            return Err(Error::domain(format!(
                "step function: {} breakpoints need {} values (got {})",
                breakpoints.len(),
                breakpoints.len(),
                values.len()
            )));
        }
        if !(t_end.is_finite() && t_end >= *breakpoints.last().unwrap()) {
            return Err(Error::domain(format!(
                "step function: domain end {t_end} must be finite and reach the last breakpoint"
            )));
        }
        if breakpoints.iter().any(|b| !b.is_finite())
            || values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite())
        {
            return Err(Error::domain("step function: non-finite data"));
        }
        Ok(StepFunction {
            breakpoints,
            values,
            t_end,
        })
    }

    /// The zero function on [0, t_end].
    pub fn zero(t_end: f64) -> Result<Self> {
        Self::constant(C64::new(0.0, 0.0), t_end)
    }

    /// A single constant value on [0, t_end].
    pub fn constant(value: C64, t_end: f64) -> Result<Self> {
        Self::new(vec![0.0], vec![value], t_end)
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }
    pub fn values(&self) -> &[C64] {
        &self.values
    }

    /// Right-continuous evaluation; `t` must lie in [0, t_end].
    pub fn value_at(&self, t: f64) -> C64 {
        let idx = self
            .breakpoints
            .partition_point(|&b| b <= t)
            .saturating_sub(1);
        self.values[idx]
    }

    /// ∫₀ᵗ conj(self)(s)·other(s) ds. Errors if either function's domain
    /// ends before `t`.
    pub fn inner_product(&self, other: &StepFunction, t: f64) -> Result<C64> {
        let mut acc = C64::new(0.0, 0.0);
        for (delta, fval, gval) in merged_segments(self, other, t)? {
            acc += fval.conj() * gval * delta;
        }
        Ok(acc)
    }

    /// ∫₀ᵗ |self(s)|² ds.
    pub fn norm_sq(&self, t: f64) -> Result<f64> {
        Ok(self.inner_product(self, t)?.re)
    }
}

/// Shared refinement of two step functions on [0, t]:
/// (segment length, f value, g value) triples in time order.
fn merged_segments(
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
) -> Result<Vec<(f64, C64, C64)>> {
    if !(t.is_finite() && t >= 0.0) {
        return Err(Error::domain(format!(
            "step functions: time {t} must be finite and nonnegative"
        )));
    }
    if f.t_end() < t || g.t_end() < t {
        return Err(Error::domain(format!(
            "step functions: domain ends ({}, {}) do not cover [0, {t}]",
            f.t_end(),
            g.t_end()
        )));
    }
    let mut cuts: Vec<f64> = f
        .breakpoints()
        .iter()
        .chain(g.breakpoints().iter())
        .copied()
        .filter(|&b| b < t)
        .collect();
    cuts.push(0.0);
    cuts.push(t);
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let mut out = Vec::with_capacity(cuts.len());
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        out.push((hi - lo, f.value_at(lo), g.value_at(lo)));
    }
    Ok(out)
}

/// Per-state conservation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDiagnostics {
    /// tr of the state (≈ 1 for density trajectories, free otherwise).
    pub trace: C64,
    /// max |X − X†| entrywise.
    pub hermiticity_residual: f64,
    /// Smallest eigenvalue of the Hermitian part; recorded for density
    /// trajectories, `None` for Heisenberg observables.
    pub min_eigenvalue: Option<f64>,
}

/// A propagated state sequence on a uniform time grid with diagnostics.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<CMatrix>,
    pub diagnostics: Vec<StateDiagnostics>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &CMatrix {
        self.states.last().expect("trajectories are never empty")
    }

    /// Largest |tr(state) − 1| along the run.
    pub fn max_trace_deviation(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| (d.trace - C64::new(1.0, 0.0)).norm())
            .fold(0.0, f64::max)
    }

    /// Largest Hermiticity residual along the run.
    pub fn max_hermiticity_residual(&self) -> f64 {
        self.diagnostics
            .iter()
            .map(|d| d.hermiticity_residual)
            .fold(0.0, f64::max)
    }

    /// Most negative recorded eigenvalue, if eigenvalues were recorded.
    pub fn eigenvalue_floor(&self) -> Option<f64> {
        self.diagnostics
            .iter()
            .filter_map(|d| d.min_eigenvalue)
            .fold(None, |acc, e| Some(acc.map_or(e, |a: f64| a.min(e))))
    }
}

/// The d²×d² matrix of the Schrödinger generator, ready to exponentiate.
pub fn build_liouvillian(model: &GaussianModel) -> Superoperator {
    schrodinger_generator(model)
}

fn diagnostics_for(state: &CMatrix, with_eigs: bool) -> Result<StateDiagnostics> {
    let min_eigenvalue = if with_eigs {
        Some(
            crate::eig::hermitian_eigenvalues(state)?
                .first()
                .copied()
                .expect("states are nonempty"),
        )
    } else {
        None
    };
    Ok(StateDiagnostics {
        trace: trace(state),
        hermiticity_residual: hermiticity_residual(state),
        min_eigenvalue,
    })
}

fn propagate(
    generator: &Superoperator,
    x0: &CMatrix,
    t_max: f64,
    steps: usize,
    with_eigs: bool,
) -> Result<Trajectory> {
    let d = x0.nrows();
    if !(t_max.is_finite() && t_max >= 0.0) {
        return Err(Error::domain(format!(
            "propagation: horizon {t_max} must be finite and nonnegative"
        )));
    }
    if t_max == 0.0 {
        return Ok(Trajectory {
            times: vec![0.0],
            states: vec![x0.clone()],
            diagnostics: vec![diagnostics_for(x0, with_eigs)?],
        });
    }
    if steps == 0 {
        return Err(Error::domain(
            "propagation: a positive horizon needs at least one step",
        ));
    }
    let delta = t_max / steps as f64;
    let step = expm(&(generator.matrix() * C64::new(delta, 0.0)))?;
    let mut times = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    let mut diagnostics = Vec::with_capacity(steps + 1);
    let mut v = vec_operator(x0);
    times.push(0.0);
    states.push(x0.clone());
    diagnostics.push(diagnostics_for(x0, with_eigs)?);
    for k in 1..=steps {
        v = step.dot(&v);
        let state = unvec_operator(&v, d);
        times.push(delta * k as f64);
        diagnostics.push(diagnostics_for(&state, with_eigs)?);
        states.push(state);
    }
    Ok(Trajectory {
        times,
        states,
        diagnostics,
    })
}

/// Propagates a density matrix on a uniform grid of `steps` intervals up
/// to `t_max`, recording trace, Hermiticity, and positivity diagnostics.
/// `rho0` must be a density matrix (Hermitian, unit trace, PSD) within
/// 1e-10.
pub fn evolve_density(
    model: &GaussianModel,
    rho0: &CMatrix,
    t_max: f64,
    steps: usize,
) -> Result<Trajectory> {
    let d = require_square("density evolution", rho0)?;
    if d != model.dim() {
        return Err(Error::DimensionMismatch {
            context: "density evolution",
            expected: model.dim(),
            got: d,
        });
    }
    require_density("density evolution", rho0, 1e-10)?;
    propagate(&build_liouvillian(model), rho0, t_max, steps, true)
}

/// Propagates a Heisenberg observable: X_t = exp(tL)(X_0) on the same
/// uniform grid as [`evolve_density`].
pub fn evolve_heisenberg(
    model: &GaussianModel,
    x0: &CMatrix,
    t_max: f64,
    steps: usize,
) -> Result<Trajectory> {
    let d = require_square("Heisenberg evolution", x0)?;
    if d != model.dim() {
        return Err(Error::DimensionMismatch {
            context: "Heisenberg evolution",
            expected: model.dim(),
            got: d,
        });
    }
    require_finite("Heisenberg evolution", x0)?;
    propagate(&heisenberg_generator(model), x0, t_max, steps, false)
}

/// The normalized exponential-vector kernel K_t(f, g): ordered product of
/// segment exponentials of Θ_s = L00 + f̄_s L10 + g_s L01 + f̄_s g_s L11,
/// with K_0 = 1. The caller multiplies by exp(γ⟨f|g⟩) for the full
/// matrix element. Errors if either argument's domain ends before `t`.
pub fn kernel_evaluator(
    lc: &NormalOrderedCoeffs,
    f: &StepFunction,
    g: &StepFunction,
    t: f64,
) -> Result<CMatrix> {
    let d = lc.dim();
    let mut kernel = identity(d);
    for (delta, fval, gval) in merged_segments(f, g, t)? {
        if delta == 0.0 {
            continue;
        }
        let theta = lc.l00()
            + &(lc.l10() * fval.conj())
            + &(lc.l01() * gval)
            + &(lc.l11() * (fval.conj() * gval));
        kernel = expm(&(theta * C64::new(delta, 0.0)))?.dot(&kernel);
    }
    Ok(kernel)
}
