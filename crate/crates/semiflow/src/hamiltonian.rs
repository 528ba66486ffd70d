//! The one-dimensional semidirect-product Hamiltonian H(m, ρ), its
//! variational derivatives, the Lie-Poisson bracket on functionals of
//! (m, ρ), and Poisson-structure diagnostics.
//!
//! The bracket is evaluated verbatim as
//!
//! ```text
//! {F, G}(m, ρ) = ∫ m ( G_m ∂x F_m − F_m ∂x G_m ) dx
//!              + ∫ ρ ( G_m ∂x F_ρ − F_m ∂x G_ρ ) dx
//! ```
//!
//! with the centered grid derivative. The integrand is antisymmetric
//! pointwise, so antisymmetry and bilinearity hold to rounding. The Jacobi
//! identity holds only up to the product-rule defect of the stencil and is
//! therefore checked as an O(h²) convergence statement, not an equality.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::grid::{Field, Grid};
use crate::lagrangian::{functional_fd, BarotropicLaw, ReducedState, FD_STEP_FINE};

/// Conservative variables: momentum density m = ρu and density ρ.
///
/// m is a coefficient field; geometrically it stands for the one-form
/// density m̄ = v♭ ⊗ ρ dx, and ρ for ρ dx. The identification is purely
/// notational here — all operations act on the coefficients.
#[derive(Clone, Debug)]
pub struct ConservativeState {
    pub m: Field,
    pub rho: crate::algebra::Density,
}

impl ConservativeState {
    pub fn new(m: Field, rho: crate::algebra::Density) -> ConservativeState {
        m.assert_same_grid(rho.coefficient());
        ConservativeState { m, rho }
    }

    pub fn grid(&self) -> Grid {
        self.m.grid()
    }

    /// Velocity u = m/ρ, exact pointwise.
    pub fn velocity(&self) -> Field {
        self.m.zip_with(self.rho.coefficient(), |m, r| m / r)
    }

    pub fn to_reduced(&self) -> ReducedState {
        ReducedState::new(self.velocity(), self.rho.clone())
    }

    pub fn from_reduced(state: &ReducedState) -> ConservativeState {
        ConservativeState::new(&state.v * state.rho.coefficient(), state.rho.clone())
    }
}

/// H(m, ρ) = ½ ∫ m²/ρ dx + ∫ ρ Ŵ(ρ) dx.
pub fn hamiltonian_eval(state: &ConservativeState, law: &BarotropicLaw) -> f64 {
    let kinetic = state
        .m
        .zip_with(state.rho.coefficient(), |m, r| 0.5 * m * m / r);
    let potential = state.rho.coefficient().map(|r| r * law.energy(r));
    kinetic.integrate() + potential.integrate()
}

/// δH/δm = m/ρ.
pub fn dh_dm(state: &ConservativeState) -> Field {
    state.velocity()
}

/// δH/δρ = −½ m²/ρ² + Ŵ(ρ) + ρ Ŵ′(ρ).
pub fn dh_drho(state: &ConservativeState, law: &BarotropicLaw) -> Field {
    state.m.zip_with(state.rho.coefficient(), |m, r| {
        let u = m / r;
        -0.5 * u * u + law.energy(r) + r * law.energy_prime(r)
    })
}

type EvalFn = Arc<dyn Fn(&ConservativeState) -> f64 + Send + Sync>;
type DerivFn = Arc<dyn Fn(&ConservativeState) -> Field + Send + Sync>;

/// A named functional of (m, ρ) with registered variational derivatives,
/// the currency of the Lie-Poisson bracket.
///
/// Registered derivatives are trusted by the bracket; `validate` checks them
/// against the central-difference oracle.
#[derive(Clone)]
pub struct Functional {
    name: String,
    eval: EvalFn,
    d_dm: DerivFn,
    d_drho: DerivFn,
}

impl Functional {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&ConservativeState) -> f64 + Send + Sync + 'static,
        d_dm: impl Fn(&ConservativeState) -> Field + Send + Sync + 'static,
        d_drho: impl Fn(&ConservativeState) -> Field + Send + Sync + 'static,
    ) -> Functional {
        Functional {
            name: name.into(),
            eval: Arc::new(eval),
            d_dm: Arc::new(d_dm),
            d_drho: Arc::new(d_drho),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, state: &ConservativeState) -> f64 {
        (self.eval)(state)
    }

    pub fn d_dm(&self, state: &ConservativeState) -> Field {
        (self.d_dm)(state)
    }

    pub fn d_drho(&self, state: &ConservativeState) -> Field {
        (self.d_drho)(state)
    }

    /// The Hamiltonian of a barotropic law as a bracket-ready functional.
    pub fn hamiltonian(law: BarotropicLaw) -> Functional {
        Functional::new(
            "H",
            move |s| hamiltonian_eval(s, &law),
            dh_dm,
            move |s| dh_drho(s, &law),
        )
    }

    /// a·F + b·G.
    pub fn linear_combination(a: f64, f: &Functional, b: f64, g: &Functional) -> Functional {
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let (fm, gm) = (f.d_dm.clone(), g.d_dm.clone());
        let (fr, gr) = (f.d_drho.clone(), g.d_drho.clone());
        Functional {
            name: format!("{}*{} + {}*{}", a, f.name, b, g.name),
            eval: Arc::new(move |s| a * fe(s) + b * ge(s)),
            d_dm: Arc::new(move |s| &(&fm(s) * a) + &(&gm(s) * b)),
            d_drho: Arc::new(move |s| &(&fr(s) * a) + &(&gr(s) * b)),
        }
    }

    /// Checks both registered derivatives against the finite-difference
    /// oracle along the supplied directions; returns the largest relative
    /// discrepancy.
    ///
    /// The relative gap is floored at 1e−4·(1 + |F|) so directional
    /// derivatives below the cancellation noise of the central difference
    /// count as matched rather than as spurious failures.
    pub fn validate(&self, state: &ConservativeState, directions: &[Field]) -> Result<f64> {
        let floor = 1e-4 * (1.0 + self.eval(state).abs());
        let mut worst: f64 = 0.0;
        for dir in directions {
            let analytic_m = (&self.d_dm(state) * dir).integrate();
            let fd_m = functional_fd(
                |s| {
                    let m = &state.m + &(dir * s);
                    self.eval(&ConservativeState::new(m, state.rho.clone()))
                },
                FD_STEP_FINE,
            )?;
            worst = worst.max(relative_gap(analytic_m, fd_m, floor));

            let analytic_r = (&self.d_drho(state) * dir).integrate();
            let fd_r = functional_fd(
                |s| {
                    let rho = crate::algebra::Density::new(
                        state.rho.coefficient() + &(dir * s),
                    )
                    .expect("perturbed density stays positive for validation steps");
                    self.eval(&ConservativeState::new(state.m.clone(), rho))
                },
                FD_STEP_FINE,
            )?;
            worst = worst.max(relative_gap(analytic_r, fd_r, floor));
        }
        Ok(worst)
    }
}

fn relative_gap(a: f64, b: f64, floor: f64) -> f64 {
    let scale = a.abs().max(b.abs()).max(floor);
    (a - b).abs() / scale
}

/// Which state component a weighted linear functional reads.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateComponent {
    Momentum,
    Density,
}

/// F(m, ρ) = ∫ m w dx or ∫ ρ w dx with the matching constant derivative w.
///
/// The constant-weight case w ≡ 1 gives total momentum and total mass.
pub fn weighted_linear_functional(which: StateComponent, w: &Field) -> Functional {
    let weight = w.clone();
    match which {
        StateComponent::Momentum => {
            let w1 = weight.clone();
            let w2 = weight.clone();
            Functional::new(
                "∫ m w dx",
                move |s: &ConservativeState| (&s.m * &w1).integrate(),
                move |_s| w2.clone(),
                |s| Field::zeros(s.grid()),
            )
        }
        StateComponent::Density => {
            let w1 = weight.clone();
            let w2 = weight.clone();
            Functional::new(
                "∫ ρ w dx",
                move |s: &ConservativeState| (s.rho.coefficient() * &w1).integrate(),
                |s| Field::zeros(s.grid()),
                move |_s| w2.clone(),
            )
        }
    }
}

/// Lie-Poisson bracket {F, G}(m, ρ) evaluated with the centered derivative.
pub fn lie_poisson_bracket(f: &Functional, g: &Functional, state: &ConservativeState) -> f64 {
    let fm = f.d_dm(state);
    let gm = g.d_dm(state);
    let fr = f.d_drho(state);
    let gr = g.d_drho(state);

    let momentum_part = &state.m * &(&(&gm * &fm.derivative()) - &(&fm * &gm.derivative()));
    let density_part =
        state.rho.coefficient() * &(&(&gm * &fr.derivative()) - &(&fm * &gr.derivative()));
    (&momentum_part + &density_part).integrate()
}

/// Ḟ = {F, H} with H built from the law.
pub fn evolution_rate(f: &Functional, state: &ConservativeState, law: &BarotropicLaw) -> f64 {
    lie_poisson_bracket(f, &Functional::hamiltonian(*law), state)
}

/// Gradient of a scalar functional of the state with respect to m or ρ,
/// node by node, via central differences. The /h converts the euclidean
/// gradient into a functional-derivative density.
fn fd_gradient(
    eval: &dyn Fn(&ConservativeState) -> f64,
    state: &ConservativeState,
    which: StateComponent,
    step: f64,
) -> Field {
    let grid = state.grid();
    let h = grid.spacing();
    let n = grid.n_points();
    let mut out = vec![0.0; n];
    let base_m = state.m.values().to_vec();
    let base_r = state.rho.coefficient().values().to_vec();
    for i in 0..n {
        let perturbed = |sign: f64| -> f64 {
            let mut m = base_m.clone();
            let mut r = base_r.clone();
            match which {
                StateComponent::Momentum => m[i] += sign * step,
                StateComponent::Density => r[i] += sign * step,
            }
            let rho = crate::algebra::Density::new(Field::from_values(grid, r))
                .expect("perturbed density stays positive");
            eval(&ConservativeState::new(Field::from_values(grid, m), rho))
        };
        out[i] = (perturbed(1.0) - perturbed(-1.0)) / (2.0 * step * h);
    }
    Field::from_values(grid, out)
}

/// {B, C} where B's variational derivatives come from nested finite
/// differences of `b_eval` and C's from its registered closures.
fn bracket_against_fd(
    b_eval: &dyn Fn(&ConservativeState) -> f64,
    c: &Functional,
    state: &ConservativeState,
    step: f64,
) -> Result<f64> {
    let assemble = |step: f64| -> f64 {
        let bm = fd_gradient(b_eval, state, StateComponent::Momentum, step);
        let br = fd_gradient(b_eval, state, StateComponent::Density, step);
        let cm = c.d_dm(state);
        let cr = c.d_drho(state);
        let momentum_part = &state.m * &(&(&cm * &bm.derivative()) - &(&bm * &cm.derivative()));
        let density_part =
            state.rho.coefficient() * &(&(&cm * &br.derivative()) - &(&bm * &cr.derivative()));
        (&momentum_part + &density_part).integrate()
    };
    let fine = assemble(step);
    let coarse = assemble(2.0 * step);
    // Nested differences must agree between levels, otherwise the step is
    // unusable for this functional triple.
    if (fine - coarse).abs() > 1e-3 * (1.0 + fine.abs().max(coarse.abs())) {
        return Err(Error::FdBreakdown { coarse, fine });
    }
    Ok(fine)
}

/// Cyclic sum {{F,G},K} + {{G,K},F} + {{K,F},G} with the inner brackets
/// differentiated by nested central differences.
///
/// The discrete bracket is Poisson only in the continuum limit; on smooth
/// states this diagnostic decays at second order in the spacing.
pub fn jacobiator(
    f: &Functional,
    g: &Functional,
    k: &Functional,
    state: &ConservativeState,
) -> Result<f64> {
    let step = 1e-5 * (1.0 + state.m.max_abs().max(state.rho.coefficient().max_abs()));
    let term = |a: &Functional, b: &Functional, c: &Functional| -> Result<f64> {
        let (a, b) = (a.clone(), b.clone());
        let inner = move |s: &ConservativeState| lie_poisson_bracket(&a, &b, s);
        bracket_against_fd(&inner, c, state, step)
    };
    Ok(term(f, g, k)? + term(g, k, f)? + term(k, f, g)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Density;
    use std::f64::consts::PI;
    use std::f64::consts::TAU;

    fn grid() -> Grid {
        Grid::circle(256)
    }

    fn state_rest(g: Grid) -> ConservativeState {
        ConservativeState::new(Field::zeros(g), Density::constant(g, 1.0))
    }

    #[test]
    fn hamiltonian_values() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        assert!((hamiltonian_eval(&state_rest(g), &law) - TAU).abs() <= 1e-12);

        let unit_flow =
            ConservativeState::new(Field::constant(g, 1.0), Density::constant(g, 1.0));
        assert!((hamiltonian_eval(&unit_flow, &law) - 3.0 * PI).abs() <= 1e-12);
    }

    #[test]
    fn hamiltonian_legendre_pairing() {
        // H + l = ∫ ρ v² dx when m = ρ v
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let v = Field::from_fn(g, |x| 0.3 * x.sin() + 0.1);
        let rho = Density::from_fn(g, |x| 1.0 + 0.2 * (2.0 * x).cos()).unwrap();
        let reduced = ReducedState::new(v.clone(), rho.clone());
        let conservative = ConservativeState::from_reduced(&reduced);
        let lhs = hamiltonian_eval(&conservative, &law)
            + crate::lagrangian::reduced_lagrangian(&reduced, &law);
        let rhs = (&(&v * &v) * rho.coefficient()).integrate();
        assert!((lhs - rhs).abs() <= 1e-10);
    }

    #[test]
    fn dh_dm_values_and_fd() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        assert!(dh_dm(&state_rest(g)).max_abs() == 0.0);

        let s = ConservativeState::new(Field::constant(g, 2.0), Density::constant(g, 1.0));
        assert!(dh_dm(&s).linf_distance(&Field::constant(g, 2.0)) <= 1e-14);

        let s = ConservativeState::new(
            Field::from_fn(g, |x| 0.3 * x.sin()),
            Density::from_fn(g, |x| 1.0 + 0.3 * x.cos()).unwrap(),
        );
        let dirs = [
            Field::from_fn(g, |x| 0.5 + 0.4 * (2.0 * x).sin()),
            Field::from_fn(g, |x| 0.3 * (3.0 * x).cos()),
        ];
        let worst = Functional::hamiltonian(law).validate(&s, &dirs).unwrap();
        assert!(worst <= 1e-6, "FD validation gap {worst}");
    }

    #[test]
    fn dh_drho_values() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        let expected = Field::constant(g, 2.0);
        assert!(dh_drho(&state_rest(g), &law).linf_distance(&expected) <= 1e-12);

        let s = ConservativeState::new(Field::constant(g, 1.0), Density::constant(g, 1.0));
        let expected = Field::constant(g, 1.5);
        assert!(dh_drho(&s, &law).linf_distance(&expected) <= 1e-12);
    }

    #[test]
    fn bracket_is_antisymmetric_and_vanishes_on_diagonal() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let s = ConservativeState::new(
            Field::from_fn(g, |x| 0.4 * x.sin()),
            Density::from_fn(g, |x| 1.0 + 0.3 * (2.0 * x).cos()).unwrap(),
        );
        let h = Functional::hamiltonian(law);
        assert_eq!(lie_poisson_bracket(&h, &h, &s), 0.0);

        let f = weighted_linear_functional(StateComponent::Momentum, &Field::from_fn(g, f64::cos));
        let fwd = lie_poisson_bracket(&f, &h, &s);
        let bwd = lie_poisson_bracket(&h, &f, &s);
        assert!((fwd + bwd).abs() <= 1e-12 * (1.0 + fwd.abs()));
    }

    #[test]
    fn total_momentum_bracket_on_symmetric_state() {
        // single-phase sine state: the flux-form telescoping analog vanishes
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let rho = Density::from_fn(g, |x| 1.0 + 0.3 * x.sin()).unwrap();
        let u = Field::from_fn(g, |x| 0.2 * x.sin());
        let s = ConservativeState::from_reduced(&ReducedState::new(u, rho));
        let total_m =
            weighted_linear_functional(StateComponent::Momentum, &Field::constant(g, 1.0));
        let h = Functional::hamiltonian(law);
        let rate = lie_poisson_bracket(&total_m, &h, &s);
        assert!(rate.abs() <= 1e-12, "momentum rate {rate}");
    }

    #[test]
    fn weighted_density_bracket_analytic_value() {
        // F = ∫ ρ cos dx, ρ = 1, u = sin: {F, H} = ∫ sin · ∂x cos dx = −π
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 2.0);
        let s = ConservativeState::new(
            Field::from_fn(g, f64::sin),
            Density::constant(g, 1.0),
        );
        let f = weighted_linear_functional(StateComponent::Density, &Field::from_fn(g, f64::cos));
        let h = Functional::hamiltonian(law);
        let value = lie_poisson_bracket(&f, &h, &s);
        assert!((value + PI).abs() <= 2e-3, "bracket value {value}");
    }

    #[test]
    fn evolution_rates_of_casimir_like_functionals() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        // canonical acoustic state
        let rho = Density::from_fn(g, |x| 1.0 + 0.01 * x.sin()).unwrap();
        let s = ConservativeState::new(Field::zeros(g), rho);
        let one = Field::constant(g, 1.0);

        let mass = weighted_linear_functional(StateComponent::Density, &one);
        assert!(evolution_rate(&mass, &s, &law).abs() <= 1e-12);

        let momentum = weighted_linear_functional(StateComponent::Momentum, &one);
        assert!(evolution_rate(&momentum, &s, &law).abs() <= 1e-12);

        let h = Functional::hamiltonian(law);
        assert_eq!(evolution_rate(&h, &s, &law), 0.0);
    }

    #[test]
    fn weighted_functional_values_and_validation() {
        let g = grid();
        let s = ConservativeState::new(
            Field::from_fn(g, |x| 0.5 * x.sin() + 0.2),
            Density::from_fn(g, |x| 1.0 + 0.3 * x.cos()).unwrap(),
        );
        let one = Field::constant(g, 1.0);
        let total_m = weighted_linear_functional(StateComponent::Momentum, &one);
        assert!((total_m.eval(&s) - s.m.integrate()).abs() <= 1e-14);
        assert!(total_m.d_dm(&s).linf_distance(&one) == 0.0);
        assert!(total_m.d_drho(&s).max_abs() == 0.0);

        let total_rho = weighted_linear_functional(StateComponent::Density, &one);
        assert!((total_rho.eval(&s) - s.rho.coefficient().integrate()).abs() <= 1e-14);
        assert!(total_rho.d_drho(&s).linf_distance(&one) == 0.0);

        let w = Field::from_fn(g, f64::cos);
        let weighted = weighted_linear_functional(StateComponent::Momentum, &w);
        let dirs = [Field::from_fn(g, |x| 0.3 + 0.5 * x.cos())];
        assert!(weighted.validate(&s, &dirs).unwrap() <= 1e-6);
    }

    #[test]
    fn bracket_is_bilinear() {
        let g = grid();
        let law = BarotropicLaw::polytropic(1.0, 1.4);
        let s = ConservativeState::new(
            Field::from_fn(g, |x| 0.4 * x.sin()),
            Density::from_fn(g, |x| 1.0 + 0.2 * (3.0 * x).sin()).unwrap(),
        );
        let f1 = weighted_linear_functional(StateComponent::Momentum, &Field::from_fn(g, f64::cos));
        let f2 = weighted_linear_functional(StateComponent::Density, &Field::from_fn(g, |x| (2.0 * x).sin()));
        let h = Functional::hamiltonian(law);
        let (a, b) = (1.75, -0.5);
        let combo = Functional::linear_combination(a, &f1, b, &f2);
        let lhs = lie_poisson_bracket(&combo, &h, &s);
        let rhs = a * lie_poisson_bracket(&f1, &h, &s) + b * lie_poisson_bracket(&f2, &h, &s);
        assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
    }

    #[test]
    fn jacobiator_degenerate_cases() {
        let g = Grid::circle(64);
        let s = ConservativeState::new(
            Field::from_fn(g, |x| 0.3 * x.sin()),
            Density::from_fn(g, |x| 1.0 + 0.2 * x.cos()).unwrap(),
        );
        let f = weighted_linear_functional(StateComponent::Momentum, &Field::from_fn(g, f64::cos));
        let k = weighted_linear_functional(StateComponent::Momentum, &Field::from_fn(g, |x| (2.0 * x).sin()));
        // two equal arguments
        let j = jacobiator(&f, &f, &k, &s).unwrap();
        assert!(j.abs() <= 1e-7, "degenerate jacobiator {j}");

        // constant weights: every derivative of every inner bracket vanishes
        let one = Field::constant(g, 1.0);
        let cf = weighted_linear_functional(StateComponent::Momentum, &one);
        let cg = weighted_linear_functional(StateComponent::Density, &one);
        let ck = weighted_linear_functional(StateComponent::Momentum, &one);
        let j = jacobiator(&cf, &cg, &ck, &s).unwrap();
        assert!(j.abs() <= 1e-10, "constant-weight jacobiator {j}");
    }

    #[test]
    fn jacobiator_decays_at_second_order() {
        let jac_at = |n: usize| {
            let g = Grid::circle(n);
            let s = ConservativeState::new(
                Field::from_fn(g, |x| 0.3 * x.sin() + 0.1 * (2.0 * x).cos()),
                Density::from_fn(g, |x| 1.0 + 0.25 * x.cos()).unwrap(),
            );
            let f = weighted_linear_functional(
                StateComponent::Momentum,
                &Field::from_fn(g, |x| x.cos() + 0.5 * (2.0 * x).sin()),
            );
            let gg = weighted_linear_functional(
                StateComponent::Momentum,
                &Field::from_fn(g, |x| x.sin() - 0.3 * (3.0 * x).cos()),
            );
            let k = weighted_linear_functional(
                StateComponent::Momentum,
                &Field::from_fn(g, |x| (2.0 * x).cos() + 0.2 * x.sin()),
            );
            jacobiator(&f, &gg, &k, &s).unwrap().abs()
        };
        let ratio = jac_at(64) / jac_at(128);
        assert!(
            (3.2..=4.8).contains(&ratio),
            "jacobiator refinement ratio {ratio}"
        );
    }
}
