//! Implementations of the six subcommands.

use std::fmt::Write as _;

use quasifree::bath::{doubling_coefficients, ito_table, validate_bath};
use quasifree::coeffs::{
    hp_to_normal, normal_to_hp, time_to_normal, unitarity_residual, HPParams,
    NormalOrderedCoeffs, TimeOrderedCoeffs,
};
use quasifree::eig::{hermitian_eigenvalues, spectral_norm};
use quasifree::evolution::{evolve_density, kernel_evaluator, StepFunction};
use quasifree::generator::{
    build_generator, doubled_channels, heisenberg_generator, schrodinger_generator,
    vacuum_lindblad, GaussianModel,
};
use quasifree::linalg::{
    adjoint, hermiticity_residual, identity, max_abs, max_abs_diff, require_density, trace, zeros,
    C64, HERMITICITY_TOL,
};
use quasifree::oracle::{convergence_study, run_oracle, OracleConfig, DEFAULT_FOCK_DIM};

use crate::config::{
    bath_params, build_model, initial_state, matrix_from, matrix_to, presentation, ConfigFile,
    Presentation,
};
use crate::report::{emit, format_complex, format_matrix, trajectory_csv};
use crate::{CliError, CommonArgs};

/// Checks every config-level constraint and prints the findings. Exit 1
/// when any constraint is violated.
pub fn validate(cfg: &ConfigFile) -> Result<(), CliError> {
    let mut violations: Vec<String> = Vec::new();

    let bath = bath_params(&cfg.bath);
    violations.extend(validate_bath(&bath).violations().iter().cloned());

    matrix_from("C", cfg.dimension, &cfg.operators.c)?;
    let f = matrix_from("F", cfg.dimension, &cfg.operators.f)?;
    let herm = hermiticity_residual(&f);
    if herm > HERMITICITY_TOL {
        violations.push(format!(
            "F must be self-adjoint (residual {herm:.3e} exceeds {HERMITICITY_TOL:.1e})"
        ));
    }

    if let Some(rows) = &cfg.operators.rho0 {
        let rho0 = matrix_from("rho0", cfg.dimension, rows)?;
        if let Err(e) = require_density("rho0", &rho0, 1e-9) {
            violations.push(e.to_string());
        }
    }

    // structural consistency of any extra coefficient presentation
    presentation(cfg)?;

    if violations.is_empty() {
        println!("all constraints satisfied");
        Ok(())
    } else {
        for v in &violations {
            println!("violation: {v}");
        }
        Err(CliError::Failure(violations.join("; ")))
    }
}

/// Converts the provided presentation into normal order, reports the
/// coefficient blocks and the unitarity residual, extracts (W, H, L) when
/// possible, and optionally writes a re-ingestable scattering config.
pub fn convert(cfg: &ConfigFile, args: &CommonArgs) -> Result<(), CliError> {
    let pres = presentation(cfg)?.ok_or_else(|| {
        CliError::Malformed(
            "convert requires either (W, H, L) or (E11, E10, E01, E00) in operators".into(),
        )
    })?;
    let bath = bath_params(&cfg.bath);
    validate_bath(&bath).into_result()?;

    let lc: NormalOrderedCoeffs = match pres {
        Presentation::TimeOrdered { e11, e10, e01, e00 } => {
            let kappa = C64::new(bath.gamma / 2.0, bath.sigma);
            let e = TimeOrderedCoeffs::new(e11, e10, e01, e00, kappa)?;
            time_to_normal(&e)?
        }
        Presentation::Scattering { w, h, l } => {
            let p = HPParams::new(w, h, l, bath.gamma)?;
            hp_to_normal(&p)
        }
    };

    let mut out = String::new();
    let _ = writeln!(out, "gamma: {:.16e}", lc.gamma());
    out.push_str(&format_matrix("L11", lc.l11()));
    out.push_str(&format_matrix("L10", lc.l10()));
    out.push_str(&format_matrix("L01", lc.l01()));
    out.push_str(&format_matrix("L00", lc.l00()));
    let residual = unitarity_residual(&lc);
    let _ = writeln!(out, "unitarity residual: {residual:.3e}");

    let extracted = normal_to_hp(&lc);
    match &extracted {
        Ok(p) => {
            out.push_str(&format_matrix("W", p.w()));
            out.push_str(&format_matrix("H", p.h()));
            out.push_str(&format_matrix("L", p.l()));
        }
        Err(e) => {
            let _ = writeln!(out, "(W, H, L) not extractable: {e}");
        }
    }
    print!("{out}");

    if let Some(path) = &args.output {
        let p = extracted.map_err(|e| {
            CliError::Failure(format!(
                "cannot write a scattering config, (W, H, L) extraction failed: {e}"
            ))
        })?;
        let mut emitted = cfg.clone();
        emitted.operators.w = Some(matrix_to(p.w()));
        emitted.operators.h = Some(matrix_to(p.h()));
        emitted.operators.l = Some(matrix_to(p.l()));
        emitted.operators.e11 = None;
        emitted.operators.e10 = None;
        emitted.operators.e01 = None;
        emitted.operators.e00 = None;
        let json = serde_json::to_string_pretty(&emitted)
            .map_err(|e| CliError::Failure(format!("serialization failed: {e}")))?;
        std::fs::write(path, json + "\n").map_err(|e| {
            CliError::Failure(format!("cannot write {}: {e}", path.display()))
        })?;
        println!("scattering config written to {}", path.display());
    }
    Ok(())
}

/// Reports the damping operator, the second-moment (GKS) matrix with its
/// eigenvalues, and the Liouvillian spectrum.
pub fn generator(cfg: &ConfigFile, args: &CommonArgs) -> Result<(), CliError> {
    let model = build_model(cfg)?;
    let built = build_generator(&model);

    let mut out = String::new();
    out.push_str(&format_matrix("damping operator G", &built.damping));
    let bath = model.bath();
    let sym = &built.damping + &adjoint(&built.damping);
    let drift = model.coupling_quadratic() * C64::new(bath.gamma, 0.0);
    let _ = writeln!(
        out,
        "damping identity residual |G + G\u{2020} - \u{3b3}\u{3a3}|: {:.3e}",
        max_abs_diff(&sym, &drift)
    );
    out.push_str(&format_matrix("GKS matrix", &built.gks));
    let eigs = hermitian_eigenvalues(&built.gks)?;
    let _ = writeln!(
        out,
        "GKS eigenvalues: {}",
        eigs.iter()
            .map(|x| format!("{x:.16e}"))
            .collect::<Vec<_>>()
            .join(", ")
    );
    let spectrum = built.schrodinger.spectrum()?;
    let _ = writeln!(out, "Liouvillian spectrum ({} eigenvalues):", spectrum.len());
    let mut abscissa = f64::NEG_INFINITY;
    for ev in &spectrum {
        abscissa = abscissa.max(ev.re);
        let _ = writeln!(out, "  {}", format_complex(*ev));
    }
    let _ = writeln!(out, "spectral abscissa (max real part): {abscissa:.3e}");
    emit(args.output.as_deref(), &out)
}

/// Integrates the master equation and writes the trajectory CSV.
pub fn evolve(cfg: &ConfigFile, args: &CommonArgs) -> Result<(), CliError> {
    let model = build_model(cfg)?;
    let rho0 = initial_state(cfg)?;
    let run = cfg.run.unwrap_or_default();
    let t_max = args.t_max.or(run.t_max).ok_or_else(|| {
        CliError::Malformed("evolve needs a horizon: set run.t_max or pass --t-max".into())
    })?;
    let steps = args.steps.or(run.steps).ok_or_else(|| {
        CliError::Malformed("evolve needs a grid: set run.steps or pass --steps".into())
    })?;
    let trajectory = evolve_density(&model, &rho0, t_max, steps)?;
    emit(args.output.as_deref(), &trajectory_csv(&trajectory, None))
}

/// Runs the collision-model cross-check against the master equation:
/// a per-time comparison CSV plus a two-halving convergence table.
pub fn oracle(cfg: &ConfigFile, args: &CommonArgs) -> Result<(), CliError> {
    let model = build_model(cfg)?;
    let rho0 = initial_state(cfg)?;
    let run = cfg.run.unwrap_or_default();
    let t_max = args.t_max.or(run.t_max).ok_or_else(|| {
        CliError::Malformed("oracle needs a horizon: set run.t_max or pass --t-max".into())
    })?;
    let dt = args.dt.or(run.dt).ok_or_else(|| {
        CliError::Malformed("oracle needs a slice length: set run.dt or pass --dt".into())
    })?;
    let fock_dim = args.fock_dim.or(run.fock_dim).unwrap_or(DEFAULT_FOCK_DIM);

    let ocfg = OracleConfig::new(model, dt, t_max, fock_dim)?;
    let result = run_oracle(&ocfg, &rho0)?;
    let study = convergence_study(&ocfg, &rho0, 2)?;

    let mut table = String::from("convergence of the collision model (2 halvings):\n");
    let _ = writeln!(table, "  {:<12} {:<14} ratio", "dt", "max distance");
    let mut previous: Option<f64> = None;
    for (step, err) in &study {
        let ratio = previous
            .map(|p| format!("{:.3}", p / err))
            .unwrap_or_else(|| "-".into());
        let _ = writeln!(table, "  {:<12.4e} {:<14.6e} {ratio}", step, err);
        previous = Some(*err);
    }
    let _ = writeln!(
        table,
        "worst trace drift of the collision chain: {:.3e}",
        result.max_trace_error
    );

    let csv = trajectory_csv(
        &result.trajectory,
        Some(("distance_to_master", &result.comparison)),
    );
    match &args.output {
        Some(path) => {
            print!("{table}");
            emit(Some(path.as_path()), &csv)?;
            println!("comparison CSV written to {}", path.display());
        }
        None => {
            // keep stdout machine-readable; the table goes to stderr
            eprint!("{table}");
            print!("{csv}");
        }
    }
    Ok(())
}

struct CheckList {
    lines: Vec<String>,
    failures: usize,
}

impl CheckList {
    fn new() -> Self {
        CheckList {
            lines: Vec::new(),
            failures: 0,
        }
    }

    fn assess(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.lines.push(format!("ok:   {name} ({detail})"));
        } else {
            self.failures += 1;
            self.lines.push(format!("FAIL: {name} ({detail})"));
        }
    }

    fn finish(self) -> Result<(), CliError> {
        for line in &self.lines {
            println!("{line}");
        }
        let total = self.lines.len();
        if self.failures == 0 {
            println!("{total} checks passed");
            Ok(())
        } else {
            println!("{} of {total} checks failed", self.failures);
            Err(CliError::Failure(format!(
                "{} of {total} checks failed",
                self.failures
            )))
        }
    }
}

/// Deterministic invariant suite over the configured model; exits nonzero
/// on any failure. No randomness: the same config always produces the same
/// report.
pub fn check(cfg: &ConfigFile) -> Result<(), CliError> {
    let mut list = CheckList::new();

    // structural layer (exit 2 on malformed matrices)
    let cop = matrix_from("C", cfg.dimension, &cfg.operators.c)?;
    let f = matrix_from("F", cfg.dimension, &cfg.operators.f)?;
    let pres = presentation(cfg)?;
    let rho0 = initial_state(cfg)?;

    let bath = bath_params(&cfg.bath);
    let report = validate_bath(&bath);
    list.assess("bath parameters admissible", report.is_valid(), report.to_string());
    let f_herm = hermiticity_residual(&f);
    list.assess(
        "F self-adjoint",
        f_herm <= HERMITICITY_TOL,
        format!("residual {f_herm:.3e}"),
    );
    if list.failures > 0 {
        return list.finish();
    }

    // second-moment structure
    let table = ito_table(&bath)?;
    let comm = (table.a_adag - table.adag_a - C64::new(bath.gamma, 0.0)).norm();
    list.assess(
        "second moments differ by the commutator weight",
        comm <= 1e-12,
        format!("residual {comm:.3e}"),
    );
    let dc = doubling_coefficients(&bath)?;
    let ident = (dc.x.norm_sqr() - dc.y.norm_sqr() + dc.z.norm_sqr() - 1.0)
        .abs()
        .max((dc.x.norm_sqr() + dc.z.norm_sqr() - (bath.n + 1.0)).abs())
        .max((dc.y * dc.z - bath.m).norm());
    list.assess(
        "doubling coefficients solve their identities",
        ident <= 1e-10,
        format!("worst residual {ident:.3e}"),
    );
    let gks = quasifree::generator::gks_matrix(&bath);
    let gks_eigs = hermitian_eigenvalues(&gks)?;
    list.assess(
        "GKS matrix positive semidefinite",
        gks_eigs[0] >= -1e-12,
        format!("eigenvalues [{:.6e}, {:.6e}]", gks_eigs[0], gks_eigs[1]),
    );

    // generator structure
    let model = GaussianModel::new(cop, f, bath)?;
    let d = model.dim();
    let damping = quasifree::generator::damping_operator(&model);
    let damping_residual = max_abs_diff(
        &(&damping + &adjoint(&damping)),
        &(model.coupling_quadratic() * C64::new(model.bath().gamma, 0.0)),
    );
    list.assess(
        "damping operator has the prescribed self-adjoint part",
        damping_residual <= 1e-10,
        format!("residual {damping_residual:.3e}"),
    );
    let heis = heisenberg_generator(&model);
    let schr = schrodinger_generator(&model);
    let unitality = max_abs(&heis.apply(&identity(d))?);
    list.assess(
        "observable generator is unital",
        unitality <= 1e-10,
        format!("residual {unitality:.3e}"),
    );
    let mut trace_residual: f64 = 0.0;
    for k in 0..d {
        for l in 0..d {
            let mut basis = zeros(d);
            basis[(k, l)] = C64::new(1.0, 0.0);
            trace_residual = trace_residual.max(trace(&schr.apply(&basis)?).norm());
        }
    }
    list.assess(
        "state generator preserves the trace",
        trace_residual <= 1e-10,
        format!("worst basis residual {trace_residual:.3e}"),
    );
    let duality = max_abs_diff(&adjoint(heis.matrix()), schr.matrix());
    list.assess(
        "the two generators are mutual adjoints",
        duality <= 1e-10,
        format!("residual {duality:.3e}"),
    );
    let channels = doubled_channels(&model);
    let doubled = vacuum_lindblad(
        &[channels.k1.clone(), channels.k2.clone()],
        &channels.h_eff,
        channels.gamma,
    )?;
    let doubled_dist = heis.distance(&doubled);
    list.assess(
        "two-channel vacuum representation matches",
        doubled_dist <= 1e-9,
        format!("distance {doubled_dist:.3e}"),
    );
    let spectrum = schr.spectrum()?;
    let abscissa = spectrum.iter().map(|ev| ev.re).fold(f64::NEG_INFINITY, f64::max);
    let nearest_zero = spectrum
        .iter()
        .map(|ev| ev.norm())
        .fold(f64::INFINITY, f64::min);
    list.assess(
        "Liouvillian spectrum lies in the stable half-plane",
        abscissa <= 1e-10,
        format!("spectral abscissa {abscissa:.3e}"),
    );
    list.assess(
        "Liouvillian has a stationary eigenvalue",
        nearest_zero <= 1e-8,
        format!("closest eigenvalue modulus {nearest_zero:.3e}"),
    );

    // a short fixed evolution keeps the state a density matrix
    let trajectory = evolve_density(&model, &rho0, 1.0, 50)?;
    let trace_dev = trajectory.max_trace_deviation();
    let herm_dev = trajectory.max_hermiticity_residual();
    let floor = trajectory.eigenvalue_floor().unwrap_or(0.0);
    list.assess(
        "unit-time evolution conserves the trace",
        trace_dev <= 1e-9,
        format!("max deviation {trace_dev:.3e}"),
    );
    list.assess(
        "unit-time evolution stays self-adjoint",
        herm_dev <= 1e-10,
        format!("max residual {herm_dev:.3e}"),
    );
    list.assess(
        "unit-time evolution stays positive",
        floor >= -1e-9,
        format!("eigenvalue floor {floor:.3e}"),
    );

    // optional coefficient presentation
    if let Some(pres) = pres {
        let lc = match pres {
            Presentation::TimeOrdered { e11, e10, e01, e00 } => {
                let kappa = C64::new(model.bath().gamma / 2.0, model.bath().sigma);
                time_to_normal(&TimeOrderedCoeffs::new(e11, e10, e01, e00, kappa)?)?
            }
            Presentation::Scattering { w, h, l } => {
                hp_to_normal(&HPParams::new(w, h, l, model.bath().gamma)?)
            }
        };
        let residual = unitarity_residual(&lc);
        list.assess(
            "coefficients satisfy the unitarity identity",
            residual <= 1e-8,
            format!("residual {residual:.3e}"),
        );
        if residual <= 1e-8 {
            let roundtrip = normal_to_hp(&lc).and_then(|p| {
                let back = hp_to_normal(&p);
                Ok(max_abs_diff(back.l11(), lc.l11())
                    .max(max_abs_diff(back.l10(), lc.l10()))
                    .max(max_abs_diff(back.l01(), lc.l01()))
                    .max(max_abs_diff(back.l00(), lc.l00())))
            });
            match roundtrip {
                Ok(err) => list.assess(
                    "(W, H, L) extraction reproduces the coefficients",
                    err <= 1e-8,
                    format!("roundtrip error {err:.3e}"),
                ),
                Err(e) => list.assess(
                    "(W, H, L) extraction reproduces the coefficients",
                    false,
                    e.to_string(),
                ),
            }
            let horizon = 1.0;
            let drive = StepFunction::constant(C64::new(0.3, -0.2), horizon)?;
            let kernel = kernel_evaluator(&lc, &drive, &drive, horizon)?;
            let norm = spectral_norm(&kernel)?;
            list.assess(
                "kernel evaluation is contractive",
                norm <= 1.0 + 1e-8,
                format!("norm {norm:.10}"),
            );
        }
    }

    list.finish()
}
