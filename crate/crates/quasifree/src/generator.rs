//! Lindblad generators induced on the system by a Gaussian bath.
//!
//! For a coupling operator C, free Hamiltonian F, and bath numbers
//! (γ, σ, n, m, α) with κ = γ/2 + iσ, the damping operator is
//!
//! ```text
//! G = i(F + ᾱC + αC†) + κ Σ,
//! Σ = (n+1)C†C + nCC† + m̄ CC + m C†C†,
//! ```
//!
//! and the Heisenberg-picture generator and its Schrödinger dual are
//!
//! ```text
//! L(X)  = γ{(n+1)C†XC + nCXC† + m C†XC† + m̄ CXC} − XG − G†X
//! L′(ρ) = γ{(n+1)CρC† + nC†ρC + m C†ρC† + m̄ CρC} − Gρ − ρG†
//! ```
//!
//! The placement of m versus m̄ is pinned by unitality: with m on C†XC†
//! the identity G + G† = γΣ makes L(1) = 0 exactly, matches the doubled
//! two-channel construction below, and keeps the GKS matrix positive
//! semidefinite precisely on the physical region |m|² ≤ n(n+1). The
//! dissipative order in L′ (G on the left, G† on the right) is forced by
//! duality tr(ρL(X)) = tr(L′(ρ)X); regression tests pin both choices
//! against their lookalikes.
//!
//! Doubling trades the squeezed thermal channel for two vacuum channels:
//! with x = √(n+1−|m|²/n), y = √n, z = m/√n (and (1,0,0) at n=0),
//!
//! ```text
//! K1 = x C,   K2 = z̄ C + y C†,   Heff = F + ᾱC + αC† + σΣ
//! ```
//!
//! reproduce L exactly as a standard two-channel vacuum Lindbladian with
//! Hamiltonian Heff and rate γ.

use crate::bath::{doubling_coefficients, GaussianBathParams};
use crate::error::{Error, Result};
use crate::linalg::{
    adjoint, identity, require_finite, require_hermitian, require_square, C64, CMatrix,
    HERMITICITY_TOL,
};
use crate::superop::Superoperator;

/// A system coupled to one Gaussian channel: coupling operator C, free
/// Hamiltonian F (self-adjoint), and validated bath parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel {
    c: CMatrix,
    f: CMatrix,
    bath: GaussianBathParams,
}

impl GaussianModel {
    pub fn new(c: CMatrix, f: CMatrix, bath: GaussianBathParams) -> Result<Self> {
        let d = require_square("Gaussian model: C", &c)?;
        let df = require_square("Gaussian model: F", &f)?;
        if df != d {
            return Err(Error::DimensionMismatch {
                context: "Gaussian model",
                expected: d,
                got: df,
            });
        }
        require_finite("Gaussian model: C", &c)?;
        require_finite("Gaussian model: F", &f)?;
        require_hermitian("Gaussian model: F", &f, HERMITICITY_TOL)?;
        bath.validate().into_result()?;
        Ok(GaussianModel { c, f, bath })
    }

    pub fn dim(&self) -> usize {
        self.c.nrows()
    }

    pub fn c(&self) -> &CMatrix {
        &self.c
    }
    pub fn f(&self) -> &CMatrix {
        &self.f
    }
    pub fn bath(&self) -> &GaussianBathParams {
        &self.bath
    }

    /// The coupling quadratic Σ = (n+1)C†C + nCC† + m̄CC + mC†C†
    /// (self-adjoint; G + G† = γΣ).
    pub fn coupling_quadratic(&self) -> CMatrix {
        let c = &self.c;
        let cd = adjoint(c);
        let b = &self.bath;
        cd.dot(c) * C64::new(b.n + 1.0, 0.0)
            + c.dot(&cd) * C64::new(b.n, 0.0)
            + c.dot(c) * b.m.conj()
            + cd.dot(&cd) * b.m
    }

    /// Effective Hamiltonian Heff = F + ᾱC + αC† + σΣ (self-adjoint).
    pub fn effective_hamiltonian(&self) -> CMatrix {
        let b = &self.bath;
        &self.f
            + &(&self.c * b.alpha.conj())
            + &(adjoint(&self.c) * b.alpha)
            + &(self.coupling_quadratic() * C64::new(b.sigma, 0.0))
    }
}

/// Accumulates coeff·A(·)B onto a superoperator whose blocks are already
/// known to share one dimension (so the fallible path cannot trigger).
fn add_term(sup: &mut Superoperator, coeff: C64, a: &CMatrix, b: &CMatrix) {
    sup.add_sandwich(coeff, a, b)
        .expect("generator blocks share the model dimension");
}

/// The damping operator G = i(F + ᾱC + αC†) + κΣ with κ = γ/2 + iσ.
/// Equivalently G = iHeff + (γ/2)Σ.
pub fn damping_operator(model: &GaussianModel) -> CMatrix {
    let b = model.bath();
    let i = C64::new(0.0, 1.0);
    let drive = model.f()
        + &(model.c() * b.alpha.conj())
        + &(adjoint(model.c()) * b.alpha);
    drive * i + model.coupling_quadratic() * b.kappa()
}

/// The Heisenberg-picture generator
/// L(X) = γ{(n+1)C†XC + nCXC† + m C†XC† + m̄ CXC} − XG − G†X.
pub fn heisenberg_generator(model: &GaussianModel) -> Superoperator {
    let b = model.bath();
    let g = damping_operator(model);
    let c = model.c();
    let cd = adjoint(c);
    let gd = adjoint(&g);
    let one = identity(model.dim());
    let gamma = b.gamma;

    let mut sup = Superoperator::zero(model.dim());
    add_term(&mut sup, C64::new(gamma * (b.n + 1.0), 0.0), &cd, c);
    add_term(&mut sup, C64::new(gamma * b.n, 0.0), c, &cd);
    add_term(&mut sup, b.m * gamma, &cd, &cd);
    add_term(&mut sup, b.m.conj() * gamma, c, c);
    add_term(&mut sup, C64::new(-1.0, 0.0), &one, &g);
    add_term(&mut sup, C64::new(-1.0, 0.0), &gd, &one);
    sup
}

/// The Schrödinger-picture dual
/// L′(ρ) = γ{(n+1)CρC† + nC†ρC + m C†ρC† + m̄ CρC} − Gρ − ρG†,
/// satisfying tr(ρL(X)) = tr(L′(ρ)X) (as matrices, L′ = L†).
pub fn schrodinger_generator(model: &GaussianModel) -> Superoperator {
    let b = model.bath();
    let g = damping_operator(model);
    let c = model.c();
    let cd = adjoint(c);
    let gd = adjoint(&g);
    let one = identity(model.dim());
    let gamma = b.gamma;

    let mut sup = Superoperator::zero(model.dim());
    add_term(&mut sup, C64::new(gamma * (b.n + 1.0), 0.0), c, &cd);
    add_term(&mut sup, C64::new(gamma * b.n, 0.0), &cd, c);
    add_term(&mut sup, b.m * gamma, &cd, &cd);
    add_term(&mut sup, b.m.conj() * gamma, c, c);
    add_term(&mut sup, C64::new(-1.0, 0.0), &g, &one);
    add_term(&mut sup, C64::new(-1.0, 0.0), &one, &gd);
    sup
}

/// The 2×2 positivity matrix [[γ(n+1), γm], [γm̄, γn]] over the ordered
/// jump family (C, C†). Positive semidefinite exactly when
/// |m|² ≤ n(n+1); accepts unvalidated parameters on purpose so invalid
/// baths can be diagnosed through their negative eigenvalue.
pub fn gks_matrix(bath: &GaussianBathParams) -> CMatrix {
    let g = bath.gamma;
    let mut out = crate::linalg::zeros(2);
    out[(0, 0)] = C64::new(g * (bath.n + 1.0), 0.0);
    out[(0, 1)] = bath.m * g;
    out[(1, 0)] = bath.m.conj() * g;
    out[(1, 1)] = C64::new(g * bath.n, 0.0);
    out
}

/// Two vacuum jump channels and the effective Hamiltonian that together
/// replay the squeezed thermal generator.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledChannels {
    pub k1: CMatrix,
    pub k2: CMatrix,
    pub h_eff: CMatrix,
    pub gamma: f64,
}

/// K1 = xC, K2 = z̄C + yC†, Heff = F + ᾱC + αC† + σΣ. Feeding these to
/// [`vacuum_lindblad`] with the same γ reproduces
/// [`heisenberg_generator`] exactly.
pub fn doubled_channels(model: &GaussianModel) -> DoubledChannels {
    let d = doubling_coefficients(model.bath())
        .expect("model construction already validated the bath");
    let c = model.c();
    let cd = adjoint(c);
    DoubledChannels {
        k1: c * d.x,
        k2: c * d.z.conj() + cd * d.y,
        h_eff: model.effective_hamiltonian(),
        gamma: model.bath().gamma,
    }
}

/// Standard Heisenberg-picture vacuum Lindbladian
/// L(X) = i[H, X] + γ Σ_k (K_k†XK_k − ½{K_k†K_k, X}).
pub fn vacuum_lindblad(jumps: &[CMatrix], h: &CMatrix, gamma: f64) -> Result<Superoperator> {
    let d = require_square("vacuum Lindbladian: H", h)?;
    require_finite("vacuum Lindbladian: H", h)?;
    require_hermitian("vacuum Lindbladian: H", h, HERMITICITY_TOL)?;
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::domain(format!(
            "vacuum Lindbladian: gamma must be positive (got {gamma})"
        )));
    }
    for k in jumps {
        let dk = require_square("vacuum Lindbladian: jump", k)?;
        if dk != d {
            return Err(Error::DimensionMismatch {
                context: "vacuum Lindbladian: jump",
                expected: d,
                got: dk,
            });
        }
        require_finite("vacuum Lindbladian: jump", k)?;
    }
    let one = identity(d);
    let i = C64::new(0.0, 1.0);
    let mut sup = Superoperator::zero(d);
    // i[H, X] = iHX − iXH
    add_term(&mut sup, i, h, &one);
    add_term(&mut sup, -i, &one, h);
    for k in jumps {
        let kd = adjoint(k);
        let kdk = kd.dot(k);
        add_term(&mut sup, C64::new(gamma, 0.0), &kd, k);
        add_term(&mut sup, C64::new(-0.5 * gamma, 0.0), &kdk, &one);
        add_term(&mut sup, C64::new(-0.5 * gamma, 0.0), &one, &kdk);
    }
    Ok(sup)
}

/// Everything the generator layer produces for one model, bundled.
#[derive(Debug, Clone)]
pub struct GaussianGenerator {
    /// Damping operator G.
    pub damping: CMatrix,
    /// Heisenberg-picture generator L.
    pub heisenberg: Superoperator,
    /// Schrödinger-picture dual L′.
    pub schrodinger: Superoperator,
    /// 2×2 positivity matrix over (C, C†).
    pub gks: CMatrix,
}

pub fn build_generator(model: &GaussianModel) -> GaussianGenerator {
    GaussianGenerator {
        damping: damping_operator(model),
        heisenberg: heisenberg_generator(model),
        schrodinger: schrodinger_generator(model),
        gks: gks_matrix(model.bath()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::hermitian_eigenvalues;
    use crate::linalg::{max_abs, max_abs_diff, sigma_minus, sigma_plus, trace, zeros};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
        let mut m = zeros(d);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] = c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            }
        }
        m
    }

    fn random_hermitian(rng: &mut ChaCha8Rng, d: usize) -> CMatrix {
        let m = random_matrix(rng, d);
        (&m + &adjoint(&m)) * c(0.5, 0.0)
    }

    fn random_model(rng: &mut ChaCha8Rng, d: usize) -> GaussianModel {
        let n: f64 = rng.gen_range(0.0..2.0);
        let mmax = (n * (n + 1.0)).sqrt();
        let mmag = rng.gen_range(0.0..mmax.max(1e-6));
        let phase = rng.gen_range(0.0..std::f64::consts::TAU);
        let bath = GaussianBathParams::new(
            rng.gen_range(0.2..3.0),
            rng.gen_range(-1.0..1.0),
            n,
            C64::from_polar(mmag.min(mmax), phase),
            c(rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)),
        )
        .unwrap();
        GaussianModel::new(random_matrix(rng, d), random_hermitian(rng, d), bath).unwrap()
    }

    #[test]
    fn vacuum_damping_is_half_the_number_coupling() {
        let model = GaussianModel::new(
            sigma_minus(),
            zeros(2),
            GaussianBathParams::vacuum(1.0).unwrap(),
        )
        .unwrap();
        let g = damping_operator(&model);
        let want = sigma_plus().dot(&sigma_minus()) * c(0.5, 0.0);
        assert!(max_abs_diff(&g, &want) < 1e-15);
    }

    #[test]
    fn displacement_adds_a_linear_drive_to_the_damping() {
        let mut bath = GaussianBathParams::vacuum(1.0).unwrap();
        bath.alpha = c(0.2, 0.0);
        let model = GaussianModel::new(sigma_minus(), zeros(2), bath).unwrap();
        let g = damping_operator(&model);
        let want = sigma_plus().dot(&sigma_minus()) * c(0.5, 0.0)
            + (sigma_minus() + sigma_plus()) * c(0.0, 0.2);
        assert!(max_abs_diff(&g, &want) < 1e-15);
    }

    #[test]
    fn damping_plus_adjoint_is_gamma_times_the_quadratic() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [2, 3, 4] {
            let model = random_model(&mut rng, d);
            let g = damping_operator(&model);
            let lhs = &g + &adjoint(&g);
            let rhs = model.coupling_quadratic() * c(model.bath().gamma, 0.0);
            assert!(max_abs_diff(&lhs, &rhs) < 1e-13);
        }
    }

    #[test]
    fn amplitude_damping_decays_the_excited_projector() {
        let model = GaussianModel::new(
            sigma_minus(),
            zeros(2),
            GaussianBathParams::vacuum(1.0).unwrap(),
        )
        .unwrap();
        let sup = heisenberg_generator(&model);
        let number = sigma_plus().dot(&sigma_minus());
        let out = sup.apply(&number).unwrap();
        assert!(max_abs_diff(&out, &(&number * c(-1.0, 0.0))) < 1e-14);
    }

    #[test]
    fn generator_is_unital_and_its_dual_preserves_trace() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for d in [2, 3, 4] {
            for _ in 0..20 {
                let model = random_model(&mut rng, d);
                let heis = heisenberg_generator(&model);
                assert!(max_abs(&heis.apply(&identity(d)).unwrap()) < 1e-12);
                let schr = schrodinger_generator(&model);
                let rho = random_hermitian(&mut rng, d);
                assert!(trace(&schr.apply(&rho).unwrap()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn the_two_pictures_are_trace_duals() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..25 {
            let model = random_model(&mut rng, 4);
            let heis = heisenberg_generator(&model);
            let schr = schrodinger_generator(&model);
            // as matrices, L' is the conjugate transpose of L
            assert!(max_abs_diff(&adjoint(heis.matrix()), schr.matrix()) < 1e-12);
            let rho = random_hermitian(&mut rng, 4);
            let x = random_hermitian(&mut rng, 4);
            let lhs = trace(&rho.dot(&heis.apply(&x).unwrap()));
            let rhs = trace(&schr.apply(&rho).unwrap().dot(&x));
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    /// Regression: applying the damping on the wrong sides of ρ (ρG + G†ρ)
    /// agrees with the dual exactly when G is Hermitian, so a drive F ≠ 0
    /// exposes the error through the duality pairing.
    #[test]
    fn flipped_damping_order_breaks_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let mut f = zeros(2);
        f[(0, 1)] = c(0.0, 0.8);
        f[(1, 0)] = c(0.0, -0.8);
        let model = GaussianModel::new(
            sigma_minus(),
            f,
            GaussianBathParams::thermal(1.0, 0.5).unwrap(),
        )
        .unwrap();
        let g = damping_operator(&model);
        let gd = adjoint(&g);
        let one = identity(2);
        let b = model.bath();
        let mut bad = Superoperator::zero(2);
        add_term(&mut bad, c(b.gamma * (b.n + 1.0), 0.0), model.c(), &adjoint(model.c()));
        add_term(&mut bad, c(b.gamma * b.n, 0.0), &adjoint(model.c()), model.c());
        add_term(&mut bad, c(-1.0, 0.0), &one, &g); // ρG instead of Gρ
        add_term(&mut bad, c(-1.0, 0.0), &gd, &one); // G†ρ instead of ρG†
        let heis = heisenberg_generator(&model);
        let mut worst: f64 = 0.0;
        for _ in 0..10 {
            let rho = random_hermitian(&mut rng, 2);
            let x = random_hermitian(&mut rng, 2);
            let lhs = trace(&rho.dot(&heis.apply(&x).unwrap()));
            let rhs = trace(&bad.apply(&rho).unwrap().dot(&x));
            worst = worst.max((lhs - rhs).norm());
        }
        assert!(
            worst > 1e-3,
            "flipped ordering must visibly violate duality, residual {worst}"
        );
    }

    /// Regression: swapping m and m̄ between the two anomalous jump terms
    /// destroys unitality as soon as m has an imaginary part, since
    /// L_swapped(1) − L(1) = −2iγ·Im(m)·(C†C† − CC). The coupling must
    /// satisfy CC ≠ 0 for the difference to be visible, so this uses a
    /// three-level ladder operator rather than σ₋.
    #[test]
    fn swapped_squeezing_placement_breaks_unitality() {
        let bath = GaussianBathParams::new(1.0, 0.0, 1.0, c(0.4, 0.9), c(0.0, 0.0)).unwrap();
        let model =
            GaussianModel::new(crate::linalg::annihilator(3), zeros(3), bath).unwrap();
        assert!(max_abs(&heisenberg_generator(&model).apply(&identity(3)).unwrap()) < 1e-13);

        let b = model.bath();
        let g = damping_operator(&model);
        let cop = model.c();
        let cd = adjoint(cop);
        let one = identity(3);
        let mut swapped = Superoperator::zero(3);
        add_term(&mut swapped, c(b.gamma * (b.n + 1.0), 0.0), &cd, cop);
        add_term(&mut swapped, c(b.gamma * b.n, 0.0), cop, &cd);
        add_term(&mut swapped, b.m.conj() * b.gamma, &cd, &cd); // m̄ where m belongs
        add_term(&mut swapped, b.m * b.gamma, cop, cop);
        add_term(&mut swapped, c(-1.0, 0.0), &one, &g);
        add_term(&mut swapped, c(-1.0, 0.0), &adjoint(&g), &one);
        assert!(
            max_abs(&swapped.apply(&identity(3)).unwrap()) > 0.1,
            "unitality must fail for Im(m) != 0 with the swapped placement"
        );
    }

    #[test]
    fn thermal_two_level_fixed_point_has_detailed_balance_ratio() {
        let n = 0.75;
        let model = GaussianModel::new(
            sigma_minus(),
            zeros(2),
            GaussianBathParams::thermal(2.0, n).unwrap(),
        )
        .unwrap();
        let schr = schrodinger_generator(&model);
        let mut rho = zeros(2);
        rho[(0, 0)] = c((n + 1.0) / (2.0 * n + 1.0), 0.0);
        rho[(1, 1)] = c(n / (2.0 * n + 1.0), 0.0);
        assert!(max_abs(&schr.apply(&rho).unwrap()) < 1e-14);
        let ratio = rho[(1, 1)].re / rho[(0, 0)].re;
        assert!((ratio - n / (n + 1.0)).abs() < 1e-15);
    }

    #[test]
    fn frequency_shift_enters_as_a_hamiltonian_commutator() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let d = 3;
        let cop = random_matrix(&mut rng, d);
        let f = random_hermitian(&mut rng, d);
        let sigma = 0.7;
        let with = GaussianModel::new(
            cop.clone(),
            f.clone(),
            GaussianBathParams::new(1.3, sigma, 0.5, c(0.3, 0.2), c(0.1, 0.0)).unwrap(),
        )
        .unwrap();
        let without = GaussianModel::new(
            cop,
            f,
            GaussianBathParams::new(1.3, 0.0, 0.5, c(0.3, 0.2), c(0.1, 0.0)).unwrap(),
        )
        .unwrap();
        let diff = heisenberg_generator(&with) - heisenberg_generator(&without);
        let h_sigma = without.coupling_quadratic() * c(sigma, 0.0);
        let one = identity(d);
        let i = c(0.0, 1.0);
        let mut want = Superoperator::zero(d);
        add_term(&mut want, i, &h_sigma, &one);
        add_term(&mut want, -i, &one, &h_sigma);
        assert!(diff.distance(&want) < 1e-12);
    }

    #[test]
    fn gks_matrix_is_psd_exactly_on_the_physical_region() {
        // vacuum: diag(γ, 0)
        let vac = gks_matrix(&GaussianBathParams::vacuum(2.0).unwrap());
        assert!(max_abs_diff(&vac, &{
            let mut m = zeros(2);
            m[(0, 0)] = c(2.0, 0.0);
            m
        }) < 1e-15);

        // boundary |m|² = n(n+1): determinant vanishes
        let n: f64 = 0.8;
        let bath = GaussianBathParams::new(1.5, 0.0, n, c((n * (n + 1.0)).sqrt(), 0.0), c(0.0, 0.0))
            .unwrap();
        let g = gks_matrix(&bath);
        let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
        assert!(det.norm() < 1e-12);

        // invalid bath: negative eigenvalue flags the failure
        let bad = GaussianBathParams {
            gamma: 1.0,
            sigma: 0.0,
            n: 1.0,
            m: c(1.5, 0.0),
            alpha: c(0.0, 0.0),
        };
        let eigs = hermitian_eigenvalues(&gks_matrix(&bad)).unwrap();
        assert!(eigs[0] < -1e-3);
        assert!(!crate::bath::validate_bath(&bad).is_valid());

        // grid: PSD iff the squeezing constraint holds
        for i in 0..12 {
            for j in 0..12 {
                let n = 0.25 * i as f64;
                let mmag = 0.25 * j as f64;
                let bath = GaussianBathParams {
                    gamma: 1.0,
                    sigma: 0.0,
                    n,
                    m: C64::from_polar(mmag, 0.9),
                    alpha: c(0.0, 0.0),
                };
                let min_eig = hermitian_eigenvalues(&gks_matrix(&bath)).unwrap()[0];
                let valid = crate::bath::validate_bath(&bath).is_valid();
                assert_eq!(
                    min_eig >= -1e-12,
                    valid,
                    "n={n} |m|={mmag}: min eig {min_eig}, valid {valid}"
                );
            }
        }
    }

    #[test]
    fn doubled_channels_replay_the_generator() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for d in [2, 3, 4] {
            for _ in 0..5 {
                let model = random_model(&mut rng, d);
                let channels = doubled_channels(&model);
                let doubled = vacuum_lindblad(
                    &[channels.k1.clone(), channels.k2.clone()],
                    &channels.h_eff,
                    channels.gamma,
                )
                .unwrap();
                let direct = heisenberg_generator(&model);
                assert!(
                    direct.distance(&doubled) < 1e-10,
                    "doubled representation drifted: {}",
                    direct.distance(&doubled)
                );
            }
        }
    }

    #[test]
    fn doubled_channels_special_cases() {
        // vacuum: K1 = C, K2 = 0, Heff = F
        let f = {
            let mut m = zeros(2);
            m[(0, 0)] = c(0.4, 0.0);
            m
        };
        let model = GaussianModel::new(
            sigma_minus(),
            f.clone(),
            GaussianBathParams::vacuum(1.0).unwrap(),
        )
        .unwrap();
        let ch = doubled_channels(&model);
        assert!(max_abs_diff(&ch.k1, &sigma_minus()) < 1e-15);
        assert!(max_abs(&ch.k2) < 1e-15);
        assert!(max_abs_diff(&ch.h_eff, &f) < 1e-15);

        // thermal n=1: K1 = √2 C, K2 = C†
        let model = GaussianModel::new(
            sigma_minus(),
            zeros(2),
            GaussianBathParams::thermal(1.7, 1.0).unwrap(),
        )
        .unwrap();
        let ch = doubled_channels(&model);
        assert!(max_abs_diff(&ch.k1, &(sigma_minus() * c(2f64.sqrt(), 0.0))) < 1e-14);
        assert!(max_abs_diff(&ch.k2, &sigma_plus()) < 1e-14);
    }

    #[test]
    fn bundle_collects_consistent_pieces() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let model = random_model(&mut rng, 3);
        let bundle = build_generator(&model);
        assert!(max_abs_diff(&bundle.damping, &damping_operator(&model)) < 1e-15);
        assert!(bundle.heisenberg.distance(&heisenberg_generator(&model)) < 1e-15);
        assert!(bundle.schrodinger.distance(&schrodinger_generator(&model)) < 1e-15);
        assert_eq!(bundle.gks[(1, 1)].re, model.bath().gamma * model.bath().n);
    }

    #[test]
    fn model_construction_rejects_bad_inputs() {
        let bath = GaussianBathParams::vacuum(1.0).unwrap();
        // non-Hermitian F
        let mut f = zeros(2);
        f[(0, 1)] = c(1.0, 0.0);
        assert!(GaussianModel::new(sigma_minus(), f, bath.clone()).is_err());
        // dimension mismatch
        assert!(GaussianModel::new(sigma_minus(), zeros(3), bath).is_err());
        // invalid bath
        let bad = GaussianBathParams {
            gamma: -1.0,
            sigma: 0.0,
            n: 0.0,
            m: c(0.0, 0.0),
            alpha: c(0.0, 0.0),
        };
        assert!(GaussianModel::new(sigma_minus(), zeros(2), bad).is_err());
    }
}
