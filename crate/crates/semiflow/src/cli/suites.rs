//! Verification suites behind `semiflow verify --suite <name>`.
//!
//! Each suite measures the identities its module promises and returns a
//! [`VerificationReport`] with pinned thresholds. Identities free of the
//! product rule gate at 1e−12; product-rule identities gate on their
//! second-order decay under grid refinement. Random smooth data is seeded
//! truncated Fourier series (modes ≤ 5); the seed appears in every report.

use crate::algebra::{
    ad_star, ad_star_group, algebra_bracket, diamond, jacobi_lie_bracket, lie_derivative_density,
    lie_derivative_scalar, pair_g, pair_v, pullback_density, pullback_scalar, pushforward_vector,
    semidirect_product, Density, Diffeo, OneFormDensity, SemidirectElement,
};
use crate::cli::report::{mean_order, VerificationReport};
use crate::dynamics::{
    rhs_lie_poisson, simulate, InitialCondition, SimulationConfig, SolverKind, TrajectoryRecord,
};
use crate::grid::{Field, Grid};
use crate::hamiltonian::{
    jacobiator, lie_poisson_bracket, weighted_linear_functional, ConservativeState, Functional,
    StateComponent,
};
use crate::lagrangian::{
    dl_dmu, dl_dv, energy_cross_pairing, functional_fd, reduced_lagrangian, unreduced_lagrangian,
    variation_constraint_check, BarotropicLaw, MaterialState, ReducedState, FD_STEP_FINE,
};
use crate::sampling::{
    density_series, displacement_series, rng, smooth_density, smooth_diffeo, smooth_field,
    FourierSeries,
};

pub const DEFAULT_SEED: u64 = 7;
pub const DEFAULT_GRIDS: [usize; 3] = [64, 128, 256];

/// Exact and action identities of the semidirect-product operations.
pub fn algebra_suite(n: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("algebra", seed);
    let grid = Grid::circle(n);
    let mut r = rng(seed);

    let xi = smooth_field(&mut r, grid, 5, 0.5);
    let eta = smooth_field(&mut r, grid, 5, 0.5);
    let f = smooth_field(&mut r, grid, 5, 0.8);
    let mu = smooth_density(&mut r, grid, 5, 0.4);

    report.check_le(
        "self_bracket_vanishes",
        algebra_bracket(&xi, &xi).max_abs(),
        1e-15,
    );

    let combo = algebra_bracket(&(&(&xi * 1.75) + &(&eta * -0.5)), &f);
    let expanded = &(&algebra_bracket(&xi, &f) * 1.75) + &(&algebra_bracket(&eta, &f) * -0.5);
    report.check_le(
        "bracket_bilinearity",
        combo.linf_distance(&expanded),
        1e-12,
    );

    let lhs = pair_g(&diamond(&f, &mu), &xi);
    let rhs = pair_v(&mu, &lie_derivative_scalar(&xi, &f));
    report.check_le("diamond_adjointness", (lhs - rhs).abs(), 1e-12);

    let lhs = pair_v(&mu, &lie_derivative_scalar(&xi, &f));
    let rhs = -(&f * &lie_derivative_density(&xi, &mu)).integrate();
    report.check_le("lie_derivative_duality", (lhs - rhs).abs(), 1e-12);

    let g1 = smooth_diffeo(&mut r, grid, 3, 0.2);
    let g2 = smooth_diffeo(&mut r, grid, 3, 0.2);
    let action_f = smooth_field(&mut r, grid, 3, 0.5);
    let composed = pullback_scalar(&g1.compose(&g2), &action_f);
    let sequential = pullback_scalar(&g2, &pullback_scalar(&g1, &action_f));
    report.check_le(
        "pullback_right_action",
        composed.linf_distance(&sequential),
        1e-7,
    );

    // the pullback tolerances assume gently sloped maps, like the
    // analytic x + 0.1 sin x they were measured on
    let gentle = smooth_diffeo(&mut r, grid, 3, 0.1);
    let moved = pullback_density(&gentle, &mu);
    report.check_le(
        "pullback_mass_preservation",
        (moved.total_mass() - mu.total_mass()).abs(),
        2e-6,
    );

    let inv = g1.invert().expect("diffeo inversion converges");
    let round = g1.compose(&inv);
    report.check_le(
        "inverse_round_trip",
        round
            .as_field()
            .linf_distance(Diffeo::identity(grid).as_field()),
        1e-10,
    );

    let md = OneFormDensity::new(smooth_field(&mut r, grid, 3, 0.5), mu.clone());
    let lhs = pair_g(&ad_star_group(&gentle, &md), &xi);
    let rhs = pair_g(&md, &pushforward_vector(&gentle, &xi));
    report.check_le("group_coadjoint_duality", (lhs - rhs).abs(), 1e-5);

    // the density legs carry the O(h^2) chain-rule defect of the map
    // derivative, so the associativity bound needs a fine grid
    let fine = Grid::circle(2048);
    let e1 = SemidirectElement::new(
        smooth_diffeo(&mut r, fine, 3, 0.05),
        smooth_density(&mut r, fine, 3, 0.3),
    );
    let e2 = SemidirectElement::new(
        smooth_diffeo(&mut r, fine, 3, 0.05),
        smooth_density(&mut r, fine, 3, 0.3),
    );
    let e3 = SemidirectElement::new(
        smooth_diffeo(&mut r, fine, 3, 0.05),
        smooth_density(&mut r, fine, 3, 0.3),
    );
    let left = semidirect_product(&semidirect_product(&e1, &e2), &e3);
    let right = semidirect_product(&e1, &semidirect_product(&e2, &e3));
    let gap = left
        .gamma
        .as_field()
        .linf_distance(right.gamma.as_field())
        .max(
            left.omega
                .coefficient()
                .linf_distance(right.omega.coefficient()),
        );
    report.check_le("semidirect_associativity", gap, 1e-6);

    report
}

/// Duality identities: machine-exact ones at the finest grid, product-rule
/// ones as observed convergence orders over the grid list.
pub fn duality_suite(grids: &[usize], seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("duality", seed);
    assert!(!grids.is_empty(), "duality suite needs at least one grid");
    let finest = *grids.iter().max().unwrap();
    let length = std::f64::consts::TAU;

    // Continuum data shared by all grid levels.
    let mut r = rng(seed);
    let samples = 5;
    let mut triples = Vec::new();
    for _ in 0..samples {
        let xi = FourierSeries::random(&mut r, length, 5, 0.5, 0.0);
        let eta = FourierSeries::random(&mut r, length, 5, 0.5, 0.0);
        let zeta = FourierSeries::random(&mut r, length, 5, 0.5, 0.0);
        let a = FourierSeries::random(&mut r, length, 5, 0.5, 0.3);
        let rho = density_series(&mut r, length, 5, 0.4);
        triples.push((xi, eta, zeta, a, rho));
    }

    {
        let grid = Grid::circle(finest);
        let mut rr = rng(seed.wrapping_add(1));
        let f = smooth_field(&mut rr, grid, 5, 0.8);
        let xi = smooth_field(&mut rr, grid, 5, 0.5);
        let mu = smooth_density(&mut rr, grid, 5, 0.4);
        let lhs = pair_g(&diamond(&f, &mu), &xi);
        let rhs = pair_v(&mu, &lie_derivative_scalar(&xi, &f));
        report.check_le("diamond_adjointness", (lhs - rhs).abs(), 1e-12);

        let lhs = pair_v(&mu, &lie_derivative_scalar(&xi, &f));
        let rhs = -(&f * &lie_derivative_density(&xi, &mu)).integrate();
        report.check_le("lie_derivative_duality", (lhs - rhs).abs(), 1e-12);
    }

    let mut ad_errors = Vec::new();
    let mut jacobi_errors = Vec::new();
    for &n in grids {
        let grid = Grid::circle(n);
        let mut ad_sum = 0.0;
        let mut jac_sum = 0.0;
        for (xi_s, eta_s, zeta_s, a_s, rho_s) in &triples {
            let xi = xi_s.sample(grid);
            let eta = eta_s.sample(grid);
            let zeta = zeta_s.sample(grid);
            let md = OneFormDensity::new(
                a_s.sample(grid),
                Density::new(rho_s.sample(grid)).expect("density series stays positive"),
            );
            ad_sum += (pair_g(&ad_star(&xi, &md), &eta)
                - pair_g(&md, &algebra_bracket(&xi, &eta)))
            .abs();

            let cyclic = &(&jacobi_lie_bracket(&xi, &jacobi_lie_bracket(&eta, &zeta))
                + &jacobi_lie_bracket(&eta, &jacobi_lie_bracket(&zeta, &xi)))
                + &jacobi_lie_bracket(&zeta, &jacobi_lie_bracket(&xi, &eta));
            jac_sum += cyclic.max_abs();
        }
        ad_errors.push(ad_sum / samples as f64);
        jacobi_errors.push(jac_sum / samples as f64);
    }

    if grids.len() >= 2 {
        let h: Vec<f64> = grids.iter().map(|&n| length / n as f64).collect();
        report.check_band("ad_star_duality_order", mean_order(&h, &ad_errors), 1.8, 2.2);
        report.check_band(
            "jacobi_identity_order",
            mean_order(&h, &jacobi_errors),
            1.8,
            2.2,
        );
    }
    report.set_table(grids, length, ad_errors);
    report
}

/// Lagrangian-side identities: reduction, relabeling invariance, and the
/// variational derivatives against the finite-difference oracle.
pub fn lagrangian_suite(n: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("lagrangian", seed);
    let grid = Grid::circle(n);
    let length = std::f64::consts::TAU;
    let law = BarotropicLaw::polytropic(1.0, 1.4);
    let mut r = rng(seed);

    // Ŵ′ against the central difference of Ŵ across the working range.
    let mut worst = 0.0_f64;
    for k in 0..40 {
        let rho = 0.1 + 9.9 * k as f64 / 39.0;
        let fd = functional_fd(|s| law.energy(rho + s), FD_STEP_FINE).unwrap();
        let exact = law.energy_prime(rho);
        worst = worst.max(((fd - exact) / exact).abs());
    }
    report.check_le("energy_prime_fd", worst, 1e-8);

    // Shared continuum data keeps the defects comparable across grids.
    let v_series = FourierSeries::random(&mut r, length, 3, 0.2, 0.0);
    let rho_series = density_series(&mut r, length, 3, 0.2);
    let eta_series = displacement_series(&mut r, length, 2, 0.06);
    let gamma_series = displacement_series(&mut r, length, 2, 0.06);

    let v = v_series.sample(grid);
    let rho = Density::new(rho_series.sample(grid)).expect("positive");
    let reduced = ReducedState::new(v.clone(), rho.clone());
    let eta = Diffeo::new(Field::from_fn(grid, |x| x + eta_series.eval(x))).expect("monotone");
    let gamma = Diffeo::new(Field::from_fn(grid, |x| x + gamma_series.eval(x))).expect("monotone");

    let material = MaterialState::new(
        eta.clone(),
        pullback_scalar(&eta, &v),
        pullback_density(&eta, &rho),
    );
    report.check_le(
        "reduction_identity",
        (unreduced_lagrangian(&material, &law) - reduced_lagrangian(&reduced, &law)).abs(),
        1e-5,
    );
    report.check_le(
        "relabeling_invariance",
        (unreduced_lagrangian(&material.relabel(&gamma), &law)
            - unreduced_lagrangian(&material, &law))
        .abs(),
        1e-5,
    );

    // δl/δv and δl/δμ against the oracle on 5 seeded states.
    let mut worst_v = 0.0_f64;
    let mut worst_mu = 0.0_f64;
    for _ in 0..5 {
        let state = ReducedState::new(
            smooth_field(&mut r, grid, 4, 0.3),
            smooth_density(&mut r, grid, 4, 0.3),
        );
        let dir = smooth_field(&mut r, grid, 4, 0.5);

        let floor = 1e-4 * (1.0 + reduced_lagrangian(&state, &law).abs());
        let analytic = pair_g(&dl_dv(&state), &dir);
        let fd = functional_fd(
            |s| {
                let v = &state.v + &(&dir * s);
                reduced_lagrangian(&ReducedState::new(v, state.rho.clone()), &law)
            },
            FD_STEP_FINE,
        )
        .unwrap();
        worst_v = worst_v.max((analytic - fd).abs() / analytic.abs().max(fd.abs()).max(floor));

        let analytic = (&dl_dmu(&state, &law) * &dir).integrate();
        let fd = functional_fd(
            |s| {
                let rho = Density::new(state.rho.coefficient() + &(&dir * s)).expect("positive");
                reduced_lagrangian(&ReducedState::new(state.v.clone(), rho), &law)
            },
            FD_STEP_FINE,
        )
        .unwrap();
        worst_mu = worst_mu.max((analytic - fd).abs() / analytic.abs().max(fd.abs()).max(floor));
    }
    report.check_le("dl_dv_fd_relative", worst_v, 1e-6);
    report.check_le("dl_dmu_fd_relative", worst_mu, 1e-6);

    let alpha = smooth_field(&mut r, grid, 4, 0.5);
    let beta = smooth_field(&mut r, grid, 4, 0.5);
    report.check_le(
        "energy_pairing_symmetry",
        (energy_cross_pairing(&law, &rho, &alpha, &beta)
            - energy_cross_pairing(&law, &rho, &beta, &alpha))
        .abs(),
        1e-12,
    );

    report
}

/// Lie-Poisson bracket properties: antisymmetry and bilinearity to rounding,
/// conserved rates, derivative validation, and the O(h²) decay of both the
/// jacobiator and the total-momentum defect.
pub fn bracket_suite(seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("bracket", seed);
    let law = BarotropicLaw::polytropic(1.0, 1.4);
    let length = std::f64::consts::TAU;
    let mut r = rng(seed);

    let grid = Grid::circle(128);
    let state = ConservativeState::new(
        smooth_field(&mut r, grid, 5, 0.3),
        smooth_density(&mut r, grid, 5, 0.3),
    );

    let random_functional = |r: &mut rand_chacha::ChaCha8Rng, grid: Grid| -> Functional {
        let w = smooth_field(r, grid, 5, 1.0);
        let which = if rand::Rng::random_bool(r, 0.5) {
            StateComponent::Momentum
        } else {
            StateComponent::Density
        };
        weighted_linear_functional(which, &w)
    };

    let mut worst_antisym = 0.0_f64;
    let mut worst_bilinear = 0.0_f64;
    for _ in 0..50 {
        let f = random_functional(&mut r, grid);
        let g = random_functional(&mut r, grid);
        let fwd = lie_poisson_bracket(&f, &g, &state);
        let bwd = lie_poisson_bracket(&g, &f, &state);
        worst_antisym = worst_antisym.max((fwd + bwd).abs());

        let k = random_functional(&mut r, grid);
        let combo = Functional::linear_combination(1.75, &f, -0.5, &g);
        let lhs = lie_poisson_bracket(&combo, &k, &state);
        let rhs = 1.75 * lie_poisson_bracket(&f, &k, &state)
            - 0.5 * lie_poisson_bracket(&g, &k, &state);
        worst_bilinear = worst_bilinear.max((lhs - rhs).abs());
    }
    report.check_le("bracket_antisymmetry", worst_antisym, 1e-12);
    report.check_le("bracket_bilinearity", worst_bilinear, 1e-12);

    // Conserved rates on the canonical acoustic state.
    let acoustic_grid = Grid::circle(256);
    let (rho0, u0) = InitialCondition::acoustic_default()
        .build(acoustic_grid)
        .expect("acoustic initial condition is valid");
    let acoustic = ConservativeState::new(&u0 * rho0.coefficient(), rho0);
    let one = Field::constant(acoustic_grid, 1.0);
    let h = Functional::hamiltonian(law);
    let mass = weighted_linear_functional(StateComponent::Density, &one);
    let momentum = weighted_linear_functional(StateComponent::Momentum, &one);
    report.check_le(
        "total_mass_rate",
        lie_poisson_bracket(&mass, &h, &acoustic).abs(),
        1e-12,
    );
    report.check_le(
        "total_momentum_rate",
        lie_poisson_bracket(&momentum, &h, &acoustic).abs(),
        1e-12,
    );

    // On generic states the momentum rate is a product-rule defect of the
    // stencil; it must decay at second order. Low modes keep the coarse
    // grid inside the asymptotic range.
    let m_series = FourierSeries::random(&mut r, length, 3, 0.3, 0.0);
    let rho_series = density_series(&mut r, length, 3, 0.3);
    let momentum_defect = |n: usize| {
        let g = Grid::circle(n);
        let s = ConservativeState::new(
            m_series.sample(g),
            Density::new(rho_series.sample(g)).expect("positive"),
        );
        let one = Field::constant(g, 1.0);
        let f = weighted_linear_functional(StateComponent::Momentum, &one);
        lie_poisson_bracket(&f, &Functional::hamiltonian(law), &s).abs()
    };
    report.check_band(
        "momentum_defect_refinement_ratio",
        momentum_defect(128) / momentum_defect(256),
        3.2,
        4.8,
    );

    // Registered derivatives of the built-ins against the oracle.
    let dirs = [
        smooth_field(&mut r, grid, 4, 0.5),
        smooth_field(&mut r, grid, 4, 0.5),
    ];
    let mut worst_fd = Functional::hamiltonian(law)
        .validate(&state, &dirs)
        .expect("validation runs");
    for _ in 0..3 {
        let f = random_functional(&mut r, grid);
        worst_fd = worst_fd.max(f.validate(&state, &dirs).expect("validation runs"));
    }
    report.check_le("derivative_validation_relative", worst_fd, 1e-6);

    // Weak form: the Lie-Poisson right-hand side localizes the bracket.
    let mut worst_weak = 0.0_f64;
    {
        let g = Grid::circle(256);
        let s = ConservativeState::new(
            smooth_field(&mut r, g, 5, 0.3),
            smooth_density(&mut r, g, 5, 0.3),
        );
        let (dm, _) = rhs_lie_poisson(&s, &law);
        for _ in 0..20 {
            let w = smooth_field(&mut r, g, 5, 1.0);
            let f = weighted_linear_functional(StateComponent::Momentum, &w);
            let bracket = lie_poisson_bracket(&f, &Functional::hamiltonian(law), &s);
            let weak = (&dm * &w).integrate();
            worst_weak = worst_weak.max((weak - bracket).abs() / (1.0 + bracket.abs()));
        }
    }
    report.check_le("weak_form_consistency", worst_weak, 1e-10);

    // Jacobiator: degenerate cases collapse, generic case decays at O(h²).
    let w1 = FourierSeries::random(&mut r, length, 4, 0.8, 0.0);
    let w2 = FourierSeries::random(&mut r, length, 4, 0.8, 0.0);
    let w3 = FourierSeries::random(&mut r, length, 4, 0.8, 0.0);
    let jac = |n: usize| {
        let g = Grid::circle(n);
        let s = ConservativeState::new(
            m_series.sample(g),
            Density::new(rho_series.sample(g)).expect("positive"),
        );
        let f = weighted_linear_functional(StateComponent::Momentum, &w1.sample(g));
        let k = weighted_linear_functional(StateComponent::Momentum, &w2.sample(g));
        let l = weighted_linear_functional(StateComponent::Momentum, &w3.sample(g));
        jacobiator(&f, &k, &l, &s)
            .expect("jacobiator finite differences are stable")
            .abs()
    };
    report.check_band("jacobiator_refinement_ratio", jac(64) / jac(128), 3.2, 4.8);

    {
        let g = Grid::circle(64);
        let s = ConservativeState::new(
            m_series.sample(g),
            Density::new(rho_series.sample(g)).expect("positive"),
        );
        let f = weighted_linear_functional(StateComponent::Momentum, &w1.sample(g));
        let k = weighted_linear_functional(StateComponent::Momentum, &w2.sample(g));
        report.check_le(
            "jacobiator_two_equal_arguments",
            jacobiator(&f, &f, &k, &s).expect("stable").abs(),
            1e-7,
        );
        let one = Field::constant(g, 1.0);
        let cf = weighted_linear_functional(StateComponent::Momentum, &one);
        let cg = weighted_linear_functional(StateComponent::Density, &one);
        let ck = weighted_linear_functional(StateComponent::Momentum, &one);
        report.check_le(
            "jacobiator_constant_weights",
            jacobiator(&cf, &cg, &ck, &s).expect("stable").abs(),
            1e-10,
        );
    }

    report
}

fn run(
    solver: SolverKind,
    n: usize,
    dt: f64,
    t_end: f64,
    ic: InitialCondition,
    stride: usize,
) -> TrajectoryRecord {
    let config = SimulationConfig::new(
        Grid::circle(n),
        BarotropicLaw::polytropic(1.0, 1.4),
        dt,
        t_end,
        solver,
        ic,
    )
    .with_output_stride(stride);
    simulate(&config).unwrap_or_else(|e| panic!("{solver} run failed: {e}"))
}

/// Cross-route agreement, its refinement behavior, and the conservation and
/// energy-drift properties of the time integration.
pub fn convergence_suite(seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("convergence", seed);
    let acoustic = InitialCondition::acoustic_default();

    // Pairwise agreement of the three spatial routes at two resolutions.
    let spatial = [
        SolverKind::EulerPoincare,
        SolverKind::LiePoisson,
        SolverKind::FluxForm,
    ];
    let mut finals = Vec::new();
    for &(n, dt) in &[(256usize, 5e-4), (512usize, 2.5e-4)] {
        let runs: Vec<TrajectoryRecord> = spatial
            .iter()
            .map(|&s| run(s, n, dt, 0.5, acoustic, 1000))
            .collect();
        finals.push(runs);
    }
    for (i, a) in spatial.iter().enumerate() {
        for (j, b) in spatial.iter().enumerate().skip(i + 1) {
            let coarse_u = finals[0][i]
                .last_snapshot()
                .u
                .linf_distance(&finals[0][j].last_snapshot().u);
            let coarse_rho = finals[0][i]
                .last_snapshot()
                .rho
                .linf_distance(&finals[0][j].last_snapshot().rho);
            let fine_u = finals[1][i]
                .last_snapshot()
                .u
                .linf_distance(&finals[1][j].last_snapshot().u);
            let fine_rho = finals[1][i]
                .last_snapshot()
                .rho
                .linf_distance(&finals[1][j].last_snapshot().rho);
            report.check_le(format!("route_linf_u_{a}_vs_{b}"), coarse_u, 5e-5);
            report.check_le(format!("route_linf_rho_{a}_vs_{b}"), coarse_rho, 5e-5);
            report.check_band(
                format!("route_refinement_u_{a}_vs_{b}"),
                coarse_u / fine_u,
                3.2,
                4.8,
            );
            report.check_band(
                format!("route_refinement_rho_{a}_vs_{b}"),
                coarse_rho / fine_rho,
                3.2,
                4.8,
            );
        }
    }

    // Material route against the flux form at t = 0.25.
    let material_gap = |n: usize, dt: f64| {
        let mat = run(SolverKind::Material, n, dt, 0.25, acoustic, 500);
        let flux = run(SolverKind::FluxForm, n, dt, 0.25, acoustic, 500);
        mat.last_snapshot().u.linf_distance(&flux.last_snapshot().u)
    };
    let coarse = material_gap(256, 5e-4);
    let fine = material_gap(512, 2.5e-4);
    report.check_le("material_vs_flux_linf_u", coarse, 5e-4);
    report.check_ge("material_refinement_order", (coarse / fine).log2(), 1.8);

    // Conservation over a unit of time.
    let drift = |record: &TrajectoryRecord, f: &dyn Fn(&crate::dynamics::DiagnosticsSample) -> f64| {
        let base = f(&record.diagnostics[0]);
        record
            .diagnostics
            .iter()
            .fold(0.0_f64, |acc, d| acc.max((f(d) - base).abs()))
    };
    let flux = run(SolverKind::FluxForm, 128, 1e-3, 1.0, acoustic, 100);
    let lp = run(SolverKind::LiePoisson, 128, 1e-3, 1.0, acoustic, 100);
    report.check_le("mass_drift_flux_form", drift(&flux, &|d| d.mass), 1e-12);
    report.check_le(
        "momentum_drift_flux_form",
        drift(&flux, &|d| d.momentum),
        1e-12,
    );
    report.check_le("mass_drift_lie_poisson", drift(&lp, &|d| d.mass), 1e-12);
    report.check_le("energy_drift_flux_form", drift(&flux, &|d| d.energy), 1e-8);

    // The energy statement is a bound of the form C·dt⁴·t: halving dt must
    // leave the measured drift under a 16x tighter threshold. (The measured
    // drift itself is floored by the dt-independent O(h²) defect of the
    // spatial stencil, far below either threshold here.)
    let flux_half = run(SolverKind::FluxForm, 128, 5e-4, 1.0, acoustic, 200);
    report.check_le(
        "energy_drift_flux_form_half_dt",
        drift(&flux_half, &|d| d.energy),
        1e-8 / 16.0,
    );

    // The dt⁴ order of the integrator shows directly in self-convergence of
    // the state: a large-amplitude wave on a coarse grid keeps the time
    // error above rounding.
    let loud = InitialCondition::Acoustic {
        amplitude: 0.2,
        mode: 1,
    };
    let final_u = |dt: f64| {
        let steps = (0.5 / dt).round() as usize;
        let record = run(SolverKind::FluxForm, 64, dt, 0.5, loud, steps);
        record.last_snapshot().u.clone()
    };
    let reference = final_u(1.25e-3);
    let ratio = final_u(2e-2).linf_distance(&reference) / final_u(1e-2).linf_distance(&reference);
    report.check_band("rk4_self_convergence_ratio", ratio, 10.0, 24.0);

    report
}

/// Residuals of the constrained-variation relations on an analytic
/// two-parameter family of maps.
pub fn constraints_suite(n: usize, seed: u64) -> VerificationReport {
    let mut report = VerificationReport::new("constraints", seed);
    let grid = Grid::circle(n);
    let rho0 = Density::constant(grid, 1.0);

    let frozen = |x: f64, t: f64, _e: f64| x + t * 0.1 * x.sin();
    let trivial =
        variation_constraint_check(&frozen, &rho0, 0.2, 0.0).expect("family stays monotone");
    report.check_le("trivial_velocity_residual", trivial.velocity_residual, 1e-12);
    report.check_le("trivial_density_residual", trivial.density_residual, 1e-12);

    let family = |x: f64, t: f64, e: f64| x + t * 0.1 * x.sin() + e * 0.05 * (2.0 * x).sin();
    let result =
        variation_constraint_check(&family, &rho0, 0.2, 0.0).expect("family stays monotone");
    report.check_le("velocity_constraint_residual", result.velocity_residual, 1e-4);
    report.check_le("density_constraint_residual", result.density_residual, 1e-4);

    report
}
