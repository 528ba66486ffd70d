//! Evolves the same acoustic initial condition by all four routes — material
//! map, Euler-Poincaré, Lie-Poisson, and flux form — and prints their
//! pairwise distances and conservation diagnostics at the final time.
//!
//!     cargo run --release --example four_routes

use semiflow::dynamics::{simulate, InitialCondition, SimulationConfig, SolverKind};
use semiflow::lagrangian::BarotropicLaw;
use semiflow::Grid;

fn main() {
    let grid = Grid::circle(256);
    let law = BarotropicLaw::polytropic(1.0, 1.4);
    let ic = InitialCondition::acoustic_default();
    let (dt, t_end) = (5e-4, 0.5);

    let mut records = Vec::new();
    for solver in SolverKind::ALL {
        let config = SimulationConfig::new(grid, law, dt, t_end, solver, ic)
            .with_output_stride((t_end / dt).round() as usize);
        let record = simulate(&config).expect("smooth acoustic run completes");
        records.push((solver, record));
    }

    println!("acoustic wave, n = 256, dt = {dt}, t_end = {t_end}\n");
    println!("pairwise distances at t = {t_end}:");
    println!("{:<38} {:>13} {:>13}", "pair", "Linf(u)", "Linf(rho)");
    for i in 0..records.len() {
        for j in i + 1..records.len() {
            let (a, ra) = &records[i];
            let (b, rb) = &records[j];
            let du = ra.last_snapshot().u.linf_distance(&rb.last_snapshot().u);
            let drho = ra.last_snapshot().rho.linf_distance(&rb.last_snapshot().rho);
            println!("{:<38} {du:>13.3e} {drho:>13.3e}", format!("{a} vs {b}"));
        }
    }

    println!("\nconservation over the run (final minus initial):");
    println!(
        "{:<16} {:>13} {:>13} {:>13}",
        "solver", "mass", "momentum", "energy"
    );
    for (solver, record) in &records {
        let d0 = &record.diagnostics[0];
        let d1 = record.last_diagnostics();
        println!(
            "{:<16} {:>13.3e} {:>13.3e} {:>13.3e}",
            solver.to_string(),
            d1.mass - d0.mass,
            d1.momentum - d0.momentum,
            d1.energy - d0.energy,
        );
    }

    println!(
        "\nall four integrate the same continuum dynamics; the spatial routes differ\n\
         from each other only through O(h²) product-rule defects of the stencil,\n\
         and the material route adds interpolation through the configuration map."
    );
}
