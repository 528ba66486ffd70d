//! Grid-refinement study of the route equivalence: the pairwise distances
//! between the three spatial solvers shrink at second order as the grid is
//! refined with dt scaled proportionally.
//!
//!     cargo run --release --example convergence_study

use semiflow::dynamics::{simulate, InitialCondition, SimulationConfig, SolverKind, TrajectoryRecord};
use semiflow::lagrangian::BarotropicLaw;
use semiflow::Grid;

fn run(solver: SolverKind, n: usize, dt: f64) -> TrajectoryRecord {
    let t_end = 0.5;
    let config = SimulationConfig::new(
        Grid::circle(n),
        BarotropicLaw::polytropic(1.0, 1.4),
        dt,
        t_end,
        solver,
        InitialCondition::acoustic_default(),
    )
    .with_output_stride((t_end / dt).round() as usize);
    simulate(&config).expect("smooth run completes")
}

fn main() {
    let solvers = [
        SolverKind::EulerPoincare,
        SolverKind::LiePoisson,
        SolverKind::FluxForm,
    ];
    let levels = [(128usize, 1e-3), (256, 5e-4), (512, 2.5e-4)];

    println!("acoustic wave to t = 0.5, dt scaled with h\n");
    let mut table: Vec<Vec<f64>> = Vec::new();
    for &(n, dt) in &levels {
        let finals: Vec<TrajectoryRecord> =
            solvers.iter().map(|&s| run(s, n, dt)).collect();
        let mut row = Vec::new();
        for i in 0..solvers.len() {
            for j in i + 1..solvers.len() {
                row.push(
                    finals[i]
                        .last_snapshot()
                        .u
                        .linf_distance(&finals[j].last_snapshot().u),
                );
            }
        }
        table.push(row);
    }

    let pairs = ["EP vs LP", "EP vs flux", "LP vs flux"];
    println!("{:<8} {:>13} {:>13} {:>13}", "n", pairs[0], pairs[1], pairs[2]);
    for (level, &(n, _)) in levels.iter().enumerate() {
        print!("{n:<8}");
        for k in 0..3 {
            print!(" {:>13.4e}", table[level][k]);
        }
        println!();
    }
    println!("\nobserved order between successive levels:");
    for level in 1..levels.len() {
        print!("{:<8}", format!("{}→{}", levels[level - 1].0, levels[level].0));
        for k in 0..3 {
            print!(" {:>13.3}", (table[level - 1][k] / table[level][k]).log2());
        }
        println!();
    }
}
