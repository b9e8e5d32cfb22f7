//! Amplitude damping of a qubit coupled to a squeezed thermal bath,
//! cross-checked three ways: exact master equation, doubled two-channel
//! form, and the collision-model integrator.

use quasifree::bath::GaussianBathParams;
use quasifree::evolution::evolve_density;
use quasifree::generator::{build_generator, doubled_channels, vacuum_lindblad, GaussianModel};
use quasifree::linalg::{max_abs_diff, projector, sigma_minus, zeros};
use quasifree::oracle::{run_oracle, OracleConfig};
use quasifree::C64;

fn main() -> quasifree::Result<()> {
    // squeezed thermal bath: gamma = 1, no frequency shift, n = 1, m = 0.8
    let bath = GaussianBathParams::new(1.0, 0.0, 1.0, C64::new(0.8, 0.0), C64::new(0.0, 0.0))?;
    let model = GaussianModel::new(sigma_minus(), zeros(2), bath)?;

    // exact propagation from the excited state
    let rho0 = projector(2, 1);
    let trajectory = evolve_density(&model, &rho0, 5.0, 500)?;
    let rho_final = trajectory.final_state();
    println!("p1(5) = {:.6}", rho_final[(1, 1)].re);
    println!("max trace deviation: {:.3e}", trajectory.max_trace_deviation());

    // the doubled two-channel vacuum form generates the same dynamics
    let doubled = doubled_channels(&model);
    let two_channel = vacuum_lindblad(
        &[doubled.k1.clone(), doubled.k2.clone()],
        &doubled.h_eff,
        doubled.gamma,
    )?;
    let generator = build_generator(&model);
    let gap = max_abs_diff(two_channel.matrix(), generator.heisenberg.matrix());
    println!("doubled-form mismatch: {:.3e}", gap);

    // independent collision-model cross-check (first order in dt)
    let oracle = run_oracle(&OracleConfig::new(model, 1e-3, 1.0, 4)?, &rho0)?;
    println!("collision vs master, max distance: {:.3e}", oracle.max_comparison());
    Ok(())
}
