//! End-to-end acceptance checks. Each test exercises one headline guarantee
//! at its stated tolerance and prints a single `[PASS]`/`[FAIL]` line with
//! its runtime (visible under `--nocapture`):
//!
//! ```text
//! cargo test -p quasifree --test acceptance -- --nocapture
//! ```
//!
//! The suite is deterministic: every randomized check draws from a fixed
//! ChaCha8 seed.

use std::panic::{catch_unwind, resume_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasifree::bath::{characteristic_function, validate_bath, GaussianBathParams};
use quasifree::coeffs::{
    hp_to_normal, normal_to_hp, time_to_normal, unitarity_residual, HPParams, TimeOrderedCoeffs,
};
use quasifree::eig::{hermitian_eigenvalues, spectral_norm};
use quasifree::evolution::{evolve_density, kernel_evaluator, StepFunction};
use quasifree::expm::expm;
use quasifree::generator::{
    doubled_channels, gks_matrix, heisenberg_generator, schrodinger_generator, vacuum_lindblad,
    GaussianModel,
};
use quasifree::linalg::{
    adjoint, identity, max_abs, max_abs_diff, projector, sigma_minus, trace, zeros,
};
use quasifree::oracle::{convergence_study, run_oracle, OracleConfig};
use quasifree::{C64, CMatrix};

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Runs `body`, prints one `[PASS]`/`[FAIL]` line with the elapsed time, and
/// enforces the runtime budget.
fn check<F>(name: &str, budget_secs: f64, body: F)
where
    F: FnOnce(),
{
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(body));
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(()) => {
            println!("[PASS] {name} ({elapsed:.2}s, budget {budget_secs:.0}s)");
            assert!(
                elapsed < budget_secs,
                "{name}: took {elapsed:.2}s, budget is {budget_secs}s"
            );
        }
        Err(cause) => {
            println!("[FAIL] {name} ({elapsed:.2}s)");
            resume_unwind(cause);
        }
    }
}

fn random_matrix(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> CMatrix {
    let mut m = zeros(d);
    for i in 0..d {
        for j in 0..d {
            m[(i, j)] = c(
                rng.gen_range(-scale..scale),
                rng.gen_range(-scale..scale),
            );
        }
    }
    m
}

fn random_hermitian(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> CMatrix {
    let m = random_matrix(rng, d, scale);
    (&m + &adjoint(&m)) * c(0.5, 0.0)
}

/// Random matrix rescaled so its operator norm lies in (0, `bound`].
fn random_bounded(rng: &mut ChaCha8Rng, d: usize, bound: f64, hermitian: bool) -> CMatrix {
    let m = if hermitian {
        random_hermitian(rng, d, 1.0)
    } else {
        random_matrix(rng, d, 1.0)
    };
    let norm = spectral_norm(&m).unwrap();
    if norm == 0.0 {
        return m;
    }
    let target = bound * rng.gen_range(0.2..1.0);
    m * c(target / norm, 0.0)
}

fn random_bath(rng: &mut ChaCha8Rng) -> GaussianBathParams {
    let gamma = rng.gen_range(0.2..3.0);
    let sigma = rng.gen_range(-1.0..1.0);
    let n: f64 = rng.gen_range(0.0..2.0);
    let mmag = rng.gen_range(0.0..0.95) * (n * (n + 1.0)).sqrt();
    let m = C64::from_polar(mmag, rng.gen_range(0.0..std::f64::consts::TAU));
    let alpha = c(rng.gen_range(-0.7..0.7), rng.gen_range(-0.7..0.7));
    GaussianBathParams::new(gamma, sigma, n, m, alpha).unwrap()
}

fn random_model(rng: &mut ChaCha8Rng, d: usize) -> GaussianModel {
    let cop = random_matrix(rng, d, 0.7);
    let f = random_hermitian(rng, d, 0.7);
    GaussianModel::new(cop, f, random_bath(rng)).unwrap()
}

fn random_hp(rng: &mut ChaCha8Rng, d: usize) -> HPParams {
    let r = random_hermitian(rng, d, 0.8);
    let w = expm(&(&r * c(0.0, 1.0))).unwrap();
    let h = random_hermitian(rng, d, 0.8);
    let l = random_matrix(rng, d, 0.8);
    let gamma = rng.gen_range(0.2..2.5);
    HPParams::with_tolerance(w, h, l, gamma, 1e-10).unwrap()
}

/// Conversion of self-adjoint time-ordered data keeps the evolution unitary:
/// 200 random draws across dimensions 1, 2, 4, 8 stay below 1e-10 residual.
#[test]
fn converted_coefficients_stay_unitary() {
    check("unitarity of converted coefficients", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(101);
        let mut worst: f64 = 0.0;
        for trial in 0..200 {
            let d = [1, 2, 4, 8][trial % 4];
            let e11 = random_bounded(&mut rng, d, 2.0, true);
            let e10 = random_bounded(&mut rng, d, 2.0, false);
            let e01 = adjoint(&e10);
            let e00 = random_bounded(&mut rng, d, 2.0, true);
            let gamma = rng.gen_range(1e-3..3.0);
            let sigma = rng.gen_range(-1.0..1.0);
            let e = TimeOrderedCoeffs::new(e11, e10, e01, e00, c(gamma / 2.0, sigma)).unwrap();
            let lc = time_to_normal(&e).unwrap();
            let residual = unitarity_residual(&lc);
            worst = worst.max(residual);
            assert!(
                residual <= 1e-10,
                "trial {trial} (d = {d}): residual {residual:e} above 1e-10"
            );
        }
        println!("        worst residual over 200 draws: {worst:.3e}");
    });
}

/// Recovering (W, H, L) and re-expanding reproduces the coefficients to 1e-8
/// on 100 random unitary parameter sets.
#[test]
fn scattering_parameters_roundtrip() {
    check("(W, H, L) roundtrip", 1.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(202);
        for trial in 0..100 {
            let d = [2, 3, 4][trial % 3];
            let p = random_hp(&mut rng, d);
            let lc = hp_to_normal(&p);
            let back = normal_to_hp(&lc).unwrap();
            let err = max_abs_diff(back.w(), p.w())
                .max(max_abs_diff(back.h(), p.h()))
                .max(max_abs_diff(back.l(), p.l()));
            assert!(err <= 1e-8, "trial {trial} (d = {d}): roundtrip error {err:e}");
        }
    });
}

/// The two-channel vacuum representation built from the doubling
/// coefficients reproduces the one-channel Gaussian generator to 1e-10 on
/// 100 random models, squeezing, displacement and frequency shift included.
#[test]
fn doubled_representation_matches_the_generator() {
    check("doubled two-channel equivalence", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(303);
        for trial in 0..100 {
            let d = [2, 3, 4][trial % 3];
            let model = if trial % 10 == 9 {
                // sprinkle plain thermal/vacuum baths between generic draws
                let cop = random_matrix(&mut rng, d, 0.7);
                let f = random_hermitian(&mut rng, d, 0.7);
                let bath =
                    GaussianBathParams::thermal(rng.gen_range(0.2..3.0), rng.gen_range(0.0..2.0))
                        .unwrap();
                GaussianModel::new(cop, f, bath).unwrap()
            } else {
                random_model(&mut rng, d)
            };
            let channels = doubled_channels(&model);
            let doubled = vacuum_lindblad(
                &[channels.k1.clone(), channels.k2.clone()],
                &channels.h_eff,
                channels.gamma,
            )
            .unwrap();
            let direct = heisenberg_generator(&model);
            let dist = direct.distance(&doubled);
            assert!(dist <= 1e-10, "trial {trial} (d = {d}): distance {dist:e}");
        }
    });
}

/// Structural identities of the generator pair: unitality, trace
/// preservation, and mutual adjointness, all to 1e-12 on random models.
#[test]
fn generator_pair_is_unital_trace_preserving_and_dual() {
    check("unitality / trace preservation / duality", 2.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(404);
        for trial in 0..100 {
            let d = [2, 3, 4][trial % 3];
            let model = random_model(&mut rng, d);
            let heis = heisenberg_generator(&model);
            let schr = schrodinger_generator(&model);

            let unitality = max_abs(&heis.apply(&identity(d)).unwrap());
            assert!(unitality <= 1e-12, "trial {trial}: L(1) residual {unitality:e}");

            let rho = random_hermitian(&mut rng, d, 1.0);
            let trace_drift = trace(&schr.apply(&rho).unwrap()).norm();
            assert!(
                trace_drift <= 1e-12,
                "trial {trial}: tr L'(rho) residual {trace_drift:e}"
            );

            let duality = max_abs_diff(&adjoint(heis.matrix()), schr.matrix());
            assert!(duality <= 1e-12, "trial {trial}: duality residual {duality:e}");
        }
    });
}

/// The 2×2 second-moment matrix is positive semidefinite exactly on the
/// admissible squeezing region |m|² ≤ n(n+1), with determinant zero on the
/// boundary to 1e-12.
#[test]
fn second_moment_positivity_matches_the_squeezing_bound() {
    check("second-moment positivity boundary", 1.0, || {
        let gamma = 1.5;
        let phase = std::f64::consts::PI / 5.0;
        for i in 0..20 {
            let n = 2.0 * (i as f64) / 19.0;
            for j in 0..20 {
                let mmag = 2.2 * (j as f64) / 19.0;
                let bath = GaussianBathParams {
                    gamma,
                    sigma: 0.0,
                    n,
                    m: C64::from_polar(mmag, phase),
                    alpha: c(0.0, 0.0),
                };
                let gks = gks_matrix(&bath);
                let eigs = hermitian_eigenvalues(&gks).unwrap();
                let psd = eigs[0] >= -1e-12;
                let admissible = validate_bath(&bath).into_result().is_ok();
                assert_eq!(
                    psd, admissible,
                    "n = {n}, |m| = {mmag}: PSD = {psd}, admissible = {admissible}"
                );
            }
            // exactly on the boundary the determinant vanishes
            let m_boundary = (n * (n + 1.0)).sqrt();
            let bath = GaussianBathParams {
                gamma,
                sigma: 0.0,
                n,
                m: C64::from_polar(m_boundary, phase),
                alpha: c(0.0, 0.0),
            };
            let gks = gks_matrix(&bath);
            let det = gks[(0, 0)] * gks[(1, 1)] - gks[(0, 1)] * gks[(1, 0)];
            assert!(
                det.norm() <= 1e-12,
                "boundary determinant at n = {n}: {:e}",
                det.norm()
            );
        }
    });
}

/// Amplitude damping into the vacuum: the master equation reproduces
/// e^{-γt} decay to 1e-8 and the collision model lands within 0.02.
#[test]
fn amplitude_damping_decays_exponentially() {
    check("amplitude damping decay", 60.0, || {
        let model = GaussianModel::new(
            sigma_minus(),
            zeros(2),
            GaussianBathParams::vacuum(1.0).unwrap(),
        )
        .unwrap();
        let excited = projector(2, 1);

        let trajectory = evolve_density(&model, &excited, 1.0, 1000).unwrap();
        let mut worst: f64 = 0.0;
        for (t, state) in trajectory.times.iter().zip(trajectory.states.iter()) {
            let expected = (-t).exp();
            worst = worst.max((state[(1, 1)].re - expected).abs());
        }
        assert!(worst <= 1e-8, "master-equation decay error {worst:e}");

        let cfg = OracleConfig::new(model, 1e-3, 1.0, 2).unwrap();
        let result = run_oracle(&cfg, &excited).unwrap();
        let p1 = result.trajectory.final_state()[(1, 1)].re;
        let err = (p1 - (-1.0f64).exp()).abs();
        assert!(err <= 0.02, "collision-model decay error {err:e}");
        println!(
            "        master error {worst:.2e}; collision error {err:.2e}; max trace drift {:.2e}",
            result.max_trace_error
        );
    });
}

/// A thermal bath drives the qubit to populations in the ratio n/(n+1):
/// the master equation to 1e-6 at t = 20/γ, the collision model to 0.03.
#[test]
fn thermal_bath_reaches_detailed_balance() {
    check("thermal equilibration", 90.0, || {
        let bath = GaussianBathParams::thermal(1.0, 1.0).unwrap();
        let model = GaussianModel::new(sigma_minus(), zeros(2), bath).unwrap();
        let ground = projector(2, 0);

        let trajectory = evolve_density(&model, &ground, 20.0, 2000).unwrap();
        let last = trajectory.final_state();
        let ratio = last[(1, 1)].re / last[(0, 0)].re;
        let err = (ratio - 0.5).abs();
        assert!(err <= 1e-6, "master-equation population ratio error {err:e}");

        let cfg = OracleConfig::new(model, 1e-3, 10.0, 4).unwrap();
        let result = run_oracle(&cfg, &ground).unwrap();
        let last = result.trajectory.final_state();
        let oracle_ratio = last[(1, 1)].re / last[(0, 0)].re;
        let oracle_err = (oracle_ratio - 0.5).abs();
        assert!(oracle_err <= 0.03, "collision-model ratio error {oracle_err:e}");
        println!(
            "        master ratio {ratio:.8}; collision ratio {oracle_ratio:.4}; \
             worst distance to master {:.2e}",
            result.max_comparison()
        );
    });
}

/// Maximally squeezed thermal bath (n = 1, m = 1): the collision model
/// tracks the master equation within 0.03 at dt = 1e-3 and converges at
/// first order in dt (error ratios in [1.5, 2.8] per halving).
#[test]
fn squeezed_bath_collisions_converge_to_the_master_equation() {
    check("squeezed-bath convergence", 180.0, || {
        let bath = GaussianBathParams::new(1.0, 0.0, 1.0, c(1.0, 0.0), c(0.0, 0.0)).unwrap();
        let model = GaussianModel::new(sigma_minus(), zeros(2), bath).unwrap();
        let ground = projector(2, 0);

        let cfg = OracleConfig::new(model, 4e-3, 1.0, 5).unwrap();
        let study = convergence_study(&cfg, &ground, 2).unwrap();
        assert_eq!(study.len(), 3);
        let finest = study.last().unwrap();
        assert!(
            (finest.0 - 1e-3).abs() < 1e-12,
            "finest dt should be 1e-3, got {}",
            finest.0
        );
        assert!(
            finest.1 <= 0.03,
            "trace distance {j} at dt = 1e-3 above 0.03",
            j = finest.1
        );
        for pair in study.windows(2) {
            let ratio = pair[0].1 / pair[1].1;
            assert!(
                (1.5..=2.8).contains(&ratio),
                "halving dt changed the error by {ratio:.3}, outside [1.5, 2.8]"
            );
        }
        let table = study
            .iter()
            .map(|(dt, err)| format!("dt = {dt:.0e}: {err:.3e}"))
            .collect::<Vec<_>>()
            .join("; ");
        println!("        {table}");
    });
}

/// Kernel evaluation: exponential limit at zero arguments and invariance
/// under segment splitting to 1e-12, and the contraction bound
/// ‖K_t(f, f)‖ ≤ 1 + 1e-8 on 50 random unitary parameter sets.
#[test]
fn kernel_is_exact_at_zero_and_contractive() {
    check("kernel exactness and contraction", 2.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(909);

        for trial in 0..10 {
            let d = [2, 3][trial % 2];
            let lc = hp_to_normal(&random_hp(&mut rng, d));
            let t = rng.gen_range(0.1..2.0);
            let zero = StepFunction::zero(t).unwrap();
            let kernel = kernel_evaluator(&lc, &zero, &zero, t).unwrap();
            let direct = expm(&(lc.l00() * c(t, 0.0))).unwrap();
            let err = max_abs_diff(&kernel, &direct);
            assert!(err <= 1e-12, "trial {trial}: zero-argument error {err:e}");
        }

        for trial in 0..10 {
            let lc = hp_to_normal(&random_hp(&mut rng, 2));
            let v = c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            let w = c(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            let coarse = StepFunction::new(vec![0.0, 0.7], vec![v, w], 1.4).unwrap();
            // identical data, one segment split in two
            let fine = StepFunction::new(vec![0.0, 0.35, 0.7], vec![v, v, w], 1.4).unwrap();
            let g = StepFunction::constant(w, 1.4).unwrap();
            let a = kernel_evaluator(&lc, &coarse, &g, 1.4).unwrap();
            let b = kernel_evaluator(&lc, &fine, &g, 1.4).unwrap();
            let err = max_abs_diff(&a, &b);
            assert!(err <= 1e-12, "trial {trial}: splitting changed the kernel by {err:e}");
        }

        for trial in 0..50 {
            let d = [2, 3][trial % 2];
            let lc = hp_to_normal(&random_hp(&mut rng, d));
            let horizon = rng.gen_range(0.5..2.0);
            let cuts = rng.gen_range(1..=3usize);
            let mut breakpoints = vec![0.0];
            for k in 1..cuts {
                breakpoints.push(horizon * (k as f64) / (cuts as f64));
            }
            let values = (0..cuts)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect::<Vec<_>>();
            let f = StepFunction::new(breakpoints, values, horizon).unwrap();
            let t = rng.gen_range(0.2..horizon);
            let kernel = kernel_evaluator(&lc, &f, &f, t).unwrap();
            let norm = spectral_norm(&kernel).unwrap();
            assert!(
                norm <= 1.0 + 1e-8,
                "trial {trial}: kernel norm {norm} breaks the contraction bound"
            );
        }
    });
}

/// Finite-difference moments of the characteristic function recover the
/// bath parameters (α, n + 1, m) to 1e-6 on 50 random admissible baths.
#[test]
fn characteristic_function_moments_recover_the_bath() {
    check("characteristic-function moments", 1.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(1010);
        let h = 1e-2;
        // fourth-order central stencils
        let d1 = |g: &dyn Fn(f64) -> C64| {
            (-g(2.0 * h) + g(h) * 8.0 - g(-h) * 8.0 + g(-2.0 * h)) / (12.0 * h)
        };
        let d2 = |g: &dyn Fn(f64) -> C64| {
            (-g(2.0 * h) + g(h) * 16.0 - g(0.0) * 30.0 + g(-h) * 16.0 - g(-2.0 * h))
                / (12.0 * h * h)
        };
        let offsets = [2.0, 1.0, -1.0, -2.0];
        let weights = [-1.0, 8.0, -8.0, 1.0];

        for trial in 0..50 {
            let p = random_bath(&mut rng);
            let chi = |zeta: C64| characteristic_function(&p, zeta).unwrap();

            // first Wirtinger derivative at the origin gives the displacement
            let dp = d1(&|s| chi(c(s, 0.0)));
            let dq = d1(&|s| chi(c(0.0, s)));
            let alpha_hat = (dp + c(0.0, 1.0) * dq) * c(0.0, -0.5);
            assert!(
                (alpha_hat - p.alpha).norm() <= 1e-6,
                "trial {trial}: displacement error {:e}",
                (alpha_hat - p.alpha).norm()
            );

            // divide off the recovered displacement, then read the second
            // moments from the remaining Gaussian
            let centered = |zeta: C64| {
                chi(zeta)
                    * (-c(0.0, 1.0) * (zeta.conj() * alpha_hat + zeta * alpha_hat.conj())).exp()
            };
            let dpp = d2(&|s| centered(c(s, 0.0)));
            let dqq = d2(&|s| centered(c(0.0, s)));
            let mut dpq = c(0.0, 0.0);
            for (oa, wa) in offsets.iter().zip(weights.iter()) {
                for (ob, wb) in offsets.iter().zip(weights.iter()) {
                    dpq += centered(c(oa * h, ob * h)) * (wa * wb);
                }
            }
            dpq /= 144.0 * h * h;

            let n_plus_one = -(dpp + dqq) * 0.25 + 0.5;
            let m_hat = -(dpp - dqq + c(0.0, 2.0) * dpq) * 0.25;
            assert!(
                (n_plus_one - c(p.n + 1.0, 0.0)).norm() <= 1e-6,
                "trial {trial}: occupation error {:e}",
                (n_plus_one - c(p.n + 1.0, 0.0)).norm()
            );
            assert!(
                (m_hat - p.m).norm() <= 1e-6,
                "trial {trial}: squeezing error {:e}",
                (m_hat - p.m).norm()
            );
        }
    });
}
