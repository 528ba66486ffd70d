//! Evaluates the Lie-Poisson bracket: antisymmetry, the conserved rates of
//! total mass and momentum, the bracket value of a weighted density
//! functional, and the second-order decay of the jacobiator.
//!
//!     cargo run --release --example bracket_conservation

use semiflow::hamiltonian::{
    evolution_rate, jacobiator, lie_poisson_bracket, weighted_linear_functional,
    ConservativeState, Functional, StateComponent,
};
use semiflow::lagrangian::BarotropicLaw;
use semiflow::sampling::{density_series, rng, FourierSeries};
use semiflow::{Density, Field, Grid};

fn main() {
    let law = BarotropicLaw::polytropic(1.0, 1.4);
    let length = std::f64::consts::TAU;

    // canonical small acoustic state
    let grid = Grid::circle(256);
    let rho = Density::from_fn(grid, |x| 1.0 + 0.01 * x.sin()).unwrap();
    let state = ConservativeState::new(Field::zeros(grid), rho);
    let one = Field::constant(grid, 1.0);
    let h = Functional::hamiltonian(law);

    let mass = weighted_linear_functional(StateComponent::Density, &one);
    let momentum = weighted_linear_functional(StateComponent::Momentum, &one);
    println!("acoustic state, n = 256:");
    println!("  d/dt total mass      = {:.3e}", evolution_rate(&mass, &state, &law));
    println!(
        "  d/dt total momentum  = {:.3e}",
        evolution_rate(&momentum, &state, &law)
    );
    println!(
        "  {{H, H}}               = {:.3e}",
        lie_poisson_bracket(&h, &h, &state)
    );

    // weighted functional with an analytic bracket value: rho = 1, u = sin,
    // F = integral of rho cos -> {F, H} = -pi
    let s = ConservativeState::new(Field::from_fn(grid, f64::sin), Density::constant(grid, 1.0));
    let f = weighted_linear_functional(StateComponent::Density, &Field::from_fn(grid, f64::cos));
    println!(
        "\n{{∫ρcos, H}} on (ρ=1, u=sin) = {:.6} (exact: -π = {:.6})",
        lie_poisson_bracket(&f, &h, &s),
        -std::f64::consts::PI
    );

    // jacobiator trend on a fixed continuum state
    let mut r = rng(7);
    let m_series = FourierSeries::random(&mut r, length, 3, 0.3, 0.0);
    let rho_series = density_series(&mut r, length, 3, 0.3);
    let w: Vec<FourierSeries> = (0..3)
        .map(|_| FourierSeries::random(&mut r, length, 4, 0.8, 0.0))
        .collect();
    println!("\njacobiator |{{{{F,G}},K}} + cyc| on seeded momentum functionals:");
    let mut prev = None;
    for n in [64, 128, 256] {
        let g = Grid::circle(n);
        let s = ConservativeState::new(
            m_series.sample(g),
            Density::new(rho_series.sample(g)).unwrap(),
        );
        let fs: Vec<Functional> = w
            .iter()
            .map(|series| {
                weighted_linear_functional(StateComponent::Momentum, &series.sample(g))
            })
            .collect();
        let j = jacobiator(&fs[0], &fs[1], &fs[2], &s).unwrap().abs();
        match prev {
            None => println!("  n = {n:<4}  |J| = {j:.6e}"),
            Some(p) => println!("  n = {n:<4}  |J| = {j:.6e}   ratio {:.2}", p / j),
        }
        prev = Some(j);
    }
    println!("\nthe bracket is Poisson in the continuum limit: |J| decays at O(h²).");
}
