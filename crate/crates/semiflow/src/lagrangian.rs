//! Barotropic stored energy, the material and reduced Lagrangians, their
//! variational derivatives, and the finite-difference oracle used to verify
//! every variational derivative in the crate.
//!
//! The Lagrangian is kinetic minus potential throughout:
//!
//! ```text
//! L(η̇, μ₀) = ∫ [ ½ η̇² − Ŵ(ρ₀/η′) ] ρ₀ dX      (material labels)
//! l(v, μ)   = ∫ [ ½ v²  − Ŵ(ρ)    ] ρ  dx       (spatial points)
//! ```
//!
//! and the two agree under the change of variables v = η̇ ∘ η⁻¹, μ₀ = η*μ.

use crate::algebra::{pullback_density, pullback_scalar, Density, Diffeo, OneFormDensity};
use crate::error::{Error, Result};
use crate::grid::{Field, Grid};

/// Barotropic stored-energy law Ŵ(ρ) with pressure p = ρ² Ŵ′(ρ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BarotropicLaw {
    /// Ŵ(ρ) = κ ρ^(γ−1) / (γ−1), the polytropic gas with p = κ ρ^γ.
    Polytropic { kappa: f64, gamma: f64 },
}

impl BarotropicLaw {
    pub fn polytropic(kappa: f64, gamma: f64) -> BarotropicLaw {
        assert!(kappa > 0.0, "kappa must be positive");
        assert!(gamma > 1.0, "gamma must exceed one");
        BarotropicLaw::Polytropic { kappa, gamma }
    }

    /// Stored energy per unit mass Ŵ(ρ).
    pub fn energy(&self, rho: f64) -> f64 {
        assert!(rho > 0.0, "stored energy needs positive density, got {rho}");
        match *self {
            BarotropicLaw::Polytropic { kappa, gamma } => {
                kappa * rho.powf(gamma - 1.0) / (gamma - 1.0)
            }
        }
    }

    /// Derivative Ŵ′(ρ).
    pub fn energy_prime(&self, rho: f64) -> f64 {
        assert!(rho > 0.0, "stored energy needs positive density, got {rho}");
        match *self {
            BarotropicLaw::Polytropic { kappa, gamma } => kappa * rho.powf(gamma - 2.0),
        }
    }

    /// Pressure p(ρ) = ρ² Ŵ′(ρ).
    pub fn pressure(&self, rho: f64) -> f64 {
        rho * rho * self.energy_prime(rho)
    }

    /// Sound speed c(ρ) = sqrt(dp/dρ).
    pub fn sound_speed(&self, rho: f64) -> f64 {
        match *self {
            BarotropicLaw::Polytropic { kappa, gamma } => {
                (kappa * gamma * rho.powf(gamma - 1.0)).sqrt()
            }
        }
    }
}

/// Material (label-space) state: configuration map η, its velocity η̇, and
/// the frozen reference density ρ₀.
#[derive(Clone, Debug)]
pub struct MaterialState {
    pub eta: Diffeo,
    pub eta_dot: Field,
    pub rho0: Density,
}

impl MaterialState {
    pub fn new(eta: Diffeo, eta_dot: Field, rho0: Density) -> MaterialState {
        eta.as_field().assert_same_grid(&eta_dot);
        eta.as_field().assert_same_grid(rho0.coefficient());
        MaterialState { eta, eta_dot, rho0 }
    }

    pub fn grid(&self) -> Grid {
        self.eta.grid()
    }

    /// Relabels material particles by γ: (η, η̇, μ) ↦ (η ∘ γ, η̇ ∘ γ, γ*μ).
    /// The material Lagrangian is invariant under this action.
    pub fn relabel(&self, gamma: &Diffeo) -> MaterialState {
        MaterialState::new(
            self.eta.compose(gamma),
            pullback_scalar(gamma, &self.eta_dot),
            pullback_density(gamma, &self.rho0),
        )
    }
}

/// Reduced (spatial) state: Eulerian velocity v and spatial density.
#[derive(Clone, Debug)]
pub struct ReducedState {
    pub v: Field,
    pub rho: Density,
}

impl ReducedState {
    pub fn new(v: Field, rho: Density) -> ReducedState {
        v.assert_same_grid(rho.coefficient());
        ReducedState { v, rho }
    }

    pub fn grid(&self) -> Grid {
        self.v.grid()
    }
}

/// Reduced Lagrangian l(v, μ) = ∫ [½ v² − Ŵ(ρ)] ρ dx.
pub fn reduced_lagrangian(state: &ReducedState, law: &BarotropicLaw) -> f64 {
    let rho = state.rho.coefficient();
    let integrand = state.v.zip_with(rho, |v, r| (0.5 * v * v - law.energy(r)) * r);
    integrand.integrate()
}

/// Material Lagrangian L(η̇, μ₀) = ∫ [½ η̇² − Ŵ(ρ₀/η′)] ρ₀ dX, with the
/// pushed-forward density evaluated along the map as ρ₀/η′.
pub fn unreduced_lagrangian(state: &MaterialState, law: &BarotropicLaw) -> f64 {
    let jac = state.eta.derivative();
    let rho0 = state.rho0.coefficient();
    let mut total = 0.0;
    let n = rho0.len();
    for i in 0..n {
        let r0 = rho0.values()[i];
        let v = state.eta_dot.values()[i];
        let pushed = r0 / jac.values()[i];
        total += (0.5 * v * v - law.energy(pushed)) * r0;
    }
    state.grid().spacing() * total
}

/// δl/δv = v♭ ⊗ μ. The metric is flat Euclidean, so ♭ leaves the
/// coefficient unchanged.
pub fn dl_dv(state: &ReducedState) -> OneFormDensity {
    OneFormDensity::new(state.v.clone(), state.rho.clone())
}

/// δl/δμ = ½ v² − Ŵ(ρ) − Ŵ′(ρ) ρ, a plain function on the circle.
pub fn dl_dmu(state: &ReducedState, law: &BarotropicLaw) -> Field {
    state.v.zip_with(state.rho.coefficient(), |v, r| {
        0.5 * v * v - law.energy(r) - law.energy_prime(r) * r
    })
}

/// Symmetric bilinear form ⟨DW(μ)·α, β⟩ = ∫ Ŵ′(ρ) α β dx of the stored
/// energy, used to verify the symmetry of the second variation.
pub fn energy_cross_pairing(
    law: &BarotropicLaw,
    rho: &Density,
    alpha: &Field,
    beta: &Field,
) -> f64 {
    let wprime = rho.coefficient().map(|r| law.energy_prime(r));
    (&(&wprime * alpha) * beta).integrate()
}

/// Central difference (F(+s) − F(−s)) / 2s of a one-parameter family,
/// the oracle for all variational derivatives.
///
/// The closure receives the scalar parameter; build `state + eps·direction`
/// inside it.
pub fn functional_fd(f: impl Fn(f64) -> f64, step: f64) -> Result<f64> {
    if !(step.is_finite() && step >= 1e-12) {
        return Err(Error::StepUnderflow { step });
    }
    Ok((f(step) - f(-step)) / (2.0 * step))
}

/// Central difference at two steps (1e−4 and 1e−5) so callers can see the
/// discrepancy between levels.
#[derive(Clone, Copy, Debug)]
pub struct FdEstimate {
    /// Value at the fine step (1e−5).
    pub value: f64,
    /// Value at the coarse step (1e−4).
    pub coarse: f64,
}

impl FdEstimate {
    pub fn discrepancy(&self) -> f64 {
        (self.value - self.coarse).abs()
    }
}

pub const FD_STEP_COARSE: f64 = 1e-4;
pub const FD_STEP_FINE: f64 = 1e-5;

pub fn functional_fd_checked(f: impl Fn(f64) -> f64) -> Result<FdEstimate> {
    let coarse = functional_fd(&f, FD_STEP_COARSE)?;
    let value = functional_fd(&f, FD_STEP_FINE)?;
    Ok(FdEstimate { value, coarse })
}

/// Residuals of the reduced variational constraints measured on a
/// two-parameter analytic family of maps η(X; t, ε).
///
/// With u = η̇ ∘ η⁻¹, w = δη ∘ η⁻¹ and ρ the spatial density carried from
/// `rho0`, a consistent family satisfies
///
/// ```text
/// δu = ẇ + u w′ − w u′        δρ = −(ρ w)′
/// ```
///
/// and the report holds the max-norm defects of both relations. All t- and
/// ε-derivatives are central differences with step 1e−4.
#[derive(Clone, Copy, Debug)]
pub struct ConstraintReport {
    pub velocity_residual: f64,
    pub density_residual: f64,
}

pub fn variation_constraint_check<F>(
    family: &F,
    rho0: &Density,
    t0: f64,
    eps0: f64,
) -> Result<ConstraintReport>
where
    F: Fn(f64, f64, f64) -> f64,
{
    let grid = rho0.grid();
    let dt = 1e-4;
    let de = 1e-4;

    let diffeo_at = |t: f64, e: f64| -> Result<Diffeo> {
        Diffeo::new(Field::from_fn(grid, |x| family(x, t, e)))
    };

    // w(t) = δη ∘ η⁻¹ at parameter ε₀
    let w_at = |t: f64| -> Result<Field> {
        let plus = diffeo_at(t, eps0 + de)?;
        let minus = diffeo_at(t, eps0 - de)?;
        let delta_eta = &(plus.as_field() - minus.as_field()) * (1.0 / (2.0 * de));
        let inv = diffeo_at(t, eps0)?.invert()?;
        Ok(pullback_scalar(&inv, &delta_eta))
    };

    // u(ε) = η̇ ∘ η⁻¹ at time t₀
    let u_at = |e: f64| -> Result<Field> {
        let plus = diffeo_at(t0 + dt, e)?;
        let minus = diffeo_at(t0 - dt, e)?;
        let eta_dot = &(plus.as_field() - minus.as_field()) * (1.0 / (2.0 * dt));
        let inv = diffeo_at(t0, e)?.invert()?;
        Ok(pullback_scalar(&inv, &eta_dot))
    };

    // Spatial density (ρ₀/η′) ∘ η⁻¹ at (t₀, ε)
    let rho_at = |e: f64| -> Result<Field> {
        let map = diffeo_at(t0, e)?;
        let pushed = rho0
            .coefficient()
            .zip_with(&map.derivative(), |r, j| r / j);
        Ok(pullback_scalar(&map.invert()?, &pushed))
    };

    let u0 = u_at(eps0)?;
    let w0 = w_at(t0)?;

    let delta_u = &(&u_at(eps0 + de)? - &u_at(eps0 - de)?) * (1.0 / (2.0 * de));
    let w_dot = &(&w_at(t0 + dt)? - &w_at(t0 - dt)?) * (1.0 / (2.0 * dt));
    let transport = crate::algebra::jacobi_lie_bracket(&u0, &w0);
    let velocity_residual = delta_u.linf_distance(&(&w_dot + &transport));

    let rho_mid = rho_at(eps0)?;
    let delta_rho = &(&rho_at(eps0 + de)? - &rho_at(eps0 - de)?) * (1.0 / (2.0 * de));
    let flux = (&rho_mid * &w0).derivative();
    let density_residual = (&delta_rho + &flux).max_abs();

    Ok(ConstraintReport {
        velocity_residual,
        density_residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::pair_g;
    use std::f64::consts::{PI, TAU};

    fn grid() -> Grid {
        Grid::circle(256)
    }

    #[test]
    fn polytropic_energy_values() {
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        assert!((law.energy(3.0) - 3.0).abs() < 1e-14);
        assert!((law.energy_prime(3.0) - 1.0).abs() < 1e-14);

        let air = BarotropicLaw::polytropic(1.0, 1.4);
        assert!((air.energy(1.0) - 2.5).abs() < 1e-14);
        assert!((air.energy_prime(1.0) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn energy_prime_matches_central_difference() {
        let law = BarotropicLaw::polytropic(1.3, 1.4);
        for rho in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0] {
            let fd = functional_fd(|s| law.energy(rho + s), 1e-5).unwrap();
            let exact = law.energy_prime(rho);
            assert!(
                ((fd - exact) / exact).abs() <= 1e-8,
                "rel error at rho={rho}: {}",
                ((fd - exact) / exact).abs()
            );
        }
    }

    #[test]
    fn pressure_values() {
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        assert!((law.pressure(2.0) - 4.0).abs() < 1e-14);

        let air = BarotropicLaw::polytropic(1.0, 1.4);
        assert!((air.pressure(1.0) - 1.0).abs() < 1e-14);
        assert!(air.pressure(1e-9) < 1e-12);
    }

    #[test]
    fn reduced_lagrangian_values() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        let rho = Density::constant(g, 1.0);

        let rest = ReducedState::new(Field::zeros(g), rho.clone());
        assert!((reduced_lagrangian(&rest, &law) + TAU).abs() <= 1e-12);

        let moving = ReducedState::new(Field::constant(g, 1.0), rho.clone());
        assert!((reduced_lagrangian(&moving, &law) + PI).abs() <= 1e-12);

        // kinetic part is quadratic in v
        let v = Field::from_fn(g, |x| 0.5 * x.sin());
        let l0 = reduced_lagrangian(&ReducedState::new(Field::zeros(g), rho.clone()), &law);
        let l1 = reduced_lagrangian(&ReducedState::new(v.clone(), rho.clone()), &law);
        let l2 = reduced_lagrangian(&ReducedState::new(&v * 2.0, rho), &law);
        assert!(((l2 - l0) - 4.0 * (l1 - l0)).abs() <= 1e-10);
    }

    #[test]
    fn unreduced_lagrangian_at_identity_matches_reduced() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        let state = MaterialState::new(
            Diffeo::identity(g),
            Field::zeros(g),
            Density::constant(g, 1.0),
        );
        assert!((unreduced_lagrangian(&state, &law) + TAU).abs() <= 1e-12);
    }

    #[test]
    fn reduction_identity() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let v = Field::from_fn(g, |x| 0.2 * x.sin());
        let rho = Density::from_fn(g, |x| 1.0 + 0.2 * (2.0 * x).cos()).unwrap();
        let reduced = ReducedState::new(v.clone(), rho.clone());

        let eta = Diffeo::from_fn(g, |x| x + 0.1 * x.sin()).unwrap();
        let material = MaterialState::new(
            eta.clone(),
            pullback_scalar(&eta, &v),
            pullback_density(&eta, &rho),
        );
        let defect =
            (unreduced_lagrangian(&material, &law) - reduced_lagrangian(&reduced, &law)).abs();
        assert!(defect <= 1e-5, "reduction defect {defect}");
    }

    #[test]
    fn material_lagrangian_is_relabeling_invariant() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let state = MaterialState::new(
            Diffeo::from_fn(g, |x| x + 0.1 * x.sin()).unwrap(),
            Field::from_fn(g, |x| 0.2 * x.cos()),
            Density::from_fn(g, |x| 1.0 + 0.2 * (2.0 * x).sin()).unwrap(),
        );
        let gamma = Diffeo::from_fn(g, |x| x + 0.3 + 0.05 * x.cos()).unwrap();
        let defect =
            (unreduced_lagrangian(&state.relabel(&gamma), &law) - unreduced_lagrangian(&state, &law))
                .abs();
        assert!(defect <= 1e-5, "invariance defect {defect}");
    }

    #[test]
    fn dl_dv_matches_functional_fd() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let state = ReducedState::new(
            Field::from_fn(g, |x| 0.3 * x.sin() - 0.1 * (2.0 * x).cos()),
            Density::from_fn(g, |x| 1.0 + 0.3 * x.cos()).unwrap(),
        );
        let dir = Field::from_fn(g, |x| 0.4 + 0.5 * x.sin());
        let analytic = pair_g(&dl_dv(&state), &dir);
        let fd = functional_fd(
            |s| {
                let v = &state.v + &(&dir * s);
                reduced_lagrangian(&ReducedState::new(v, state.rho.clone()), &law)
            },
            1e-5,
        )
        .unwrap();
        assert!(((analytic - fd) / fd).abs() <= 1e-6);
    }

    #[test]
    fn dl_dmu_values_and_fd() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        let rho = Density::constant(g, 1.0);

        let rest = ReducedState::new(Field::zeros(g), rho.clone());
        let expected = Field::constant(g, -2.0);
        assert!(dl_dmu(&rest, &law).linf_distance(&expected) <= 1e-12);

        let moving = ReducedState::new(Field::constant(g, 1.0), rho);
        let expected = Field::constant(g, -1.5);
        assert!(dl_dmu(&moving, &law).linf_distance(&expected) <= 1e-12);

        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let state = ReducedState::new(
            Field::from_fn(g, |x| 0.3 * x.sin()),
            Density::from_fn(g, |x| 1.0 + 0.3 * (2.0 * x).cos()).unwrap(),
        );
        let dir = Field::from_fn(g, |x| 0.2 + 0.3 * x.cos());
        let analytic = (&dl_dmu(&state, &law) * &dir).integrate();
        let fd = functional_fd(
            |s| {
                let rho = Density::new(state.rho.coefficient() + &(&dir * s)).unwrap();
                reduced_lagrangian(&ReducedState::new(state.v.clone(), rho), &law)
            },
            1e-5,
        )
        .unwrap();
        assert!(((analytic - fd) / fd).abs() <= 1e-6);
    }

    #[test]
    fn energy_pairing_is_symmetric() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let rho = Density::from_fn(g, |x| 1.0 + 0.4 * x.sin()).unwrap();
        let a = Field::from_fn(g, |x| 0.3 * (2.0 * x).sin());
        let b = Field::from_fn(g, |x| 0.5 * x.cos() - 0.2);
        let lhs = energy_cross_pairing(&law, &rho, &a, &b);
        let rhs = energy_cross_pairing(&law, &rho, &b, &a);
        assert!((lhs - rhs).abs() <= 1e-12);
    }

    #[test]
    fn functional_fd_is_exact_on_linear_and_quadratic() {
        // dyadic step: no cancellation noise on polynomials
        let fd = functional_fd(|s| 3.0 + 2.5 * s, 0.25).unwrap();
        assert!((fd - 2.5).abs() <= 1e-12);
        let fd = functional_fd(|s| (1.0 + s) * (1.0 + s), 0.25).unwrap();
        assert!((fd - 2.0).abs() <= 1e-12);
    }

    #[test]
    fn functional_fd_rejects_bad_steps() {
        assert_eq!(
            functional_fd(|s| s, 0.0),
            Err(Error::StepUnderflow { step: 0.0 })
        );
        assert!(functional_fd(|s| s, 1e-14).is_err());
        assert!(functional_fd(|s| s, f64::NAN).is_err());
    }

    #[test]
    fn functional_fd_checked_reports_levels() {
        let est = functional_fd_checked(|s| (2.0 * s).sin()).unwrap();
        assert!((est.value - 2.0).abs() <= 1e-8);
        assert!(est.discrepancy() <= 1e-6);
    }

    #[test]
    fn constraint_check_trivial_family() {
        let g = Grid::circle(128);
        let rho0 = Density::constant(g, 1.0);
        let family = |x: f64, t: f64, _e: f64| x + t * 0.1 * x.sin();
        let report = variation_constraint_check(&family, &rho0, 0.2, 0.0).unwrap();
        assert!(report.velocity_residual <= 1e-12);
        assert!(report.density_residual <= 1e-12);
    }

    #[test]
    fn constraint_check_documented_family() {
        let g = Grid::circle(512);
        let rho0 = Density::constant(g, 1.0);
        let family = |x: f64, t: f64, e: f64| x + t * 0.1 * x.sin() + e * 0.05 * (2.0 * x).sin();
        let report = variation_constraint_check(&family, &rho0, 0.2, 0.0).unwrap();
        assert!(
            report.velocity_residual <= 1e-4,
            "velocity residual {}",
            report.velocity_residual
        );
        assert!(
            report.density_residual <= 1e-4,
            "density residual {}",
            report.density_residual
        );
    }
}
