//! Checks the algebraic identities connecting the actions, brackets, and the
//! diamond map on seeded smooth fields, and shows which of them hold to
//! machine precision versus at second order in the grid spacing.
//!
//!     cargo run --release --example algebra_identities

use semiflow::algebra::{
    ad_star, algebra_bracket, diamond, jacobi_lie_bracket, lie_derivative_density,
    lie_derivative_scalar, pair_g, pair_v, OneFormDensity,
};
use semiflow::sampling::{density_series, rng, FourierSeries};
use semiflow::{Density, Grid};

fn main() {
    let length = std::f64::consts::TAU;
    let seed = 7;
    let mut r = rng(seed);
    let xi_s = FourierSeries::random(&mut r, length, 5, 0.5, 0.0);
    let eta_s = FourierSeries::random(&mut r, length, 5, 0.5, 0.0);
    let zeta_s = FourierSeries::random(&mut r, length, 5, 0.5, 0.0);
    let f_s = FourierSeries::random(&mut r, length, 5, 0.8, 0.2);
    let a_s = FourierSeries::random(&mut r, length, 5, 0.5, 0.4);
    let rho_s = density_series(&mut r, length, 5, 0.4);

    println!("seeded smooth fields, seed {seed}\n");
    println!(
        "{:<10} {:>14} {:>14} {:>14} {:>14}",
        "n", "diamond", "lie duality", "ad*/ad", "jacobi"
    );

    let mut previous: Option<(f64, f64)> = None;
    for n in [64, 128, 256, 512] {
        let grid = Grid::circle(n);
        let xi = xi_s.sample(grid);
        let eta = eta_s.sample(grid);
        let zeta = zeta_s.sample(grid);
        let f = f_s.sample(grid);
        let mu = Density::new(rho_s.sample(grid)).unwrap();
        let md = OneFormDensity::new(a_s.sample(grid), mu.clone());

        // f ◇ mu pairs with xi exactly like mu pairs with the action of xi on f
        let diamond_gap =
            (pair_g(&diamond(&f, &mu), &xi) - pair_v(&mu, &lie_derivative_scalar(&xi, &f))).abs();

        // <mu, L_xi f> = -<L_xi mu, f>, exact by summation by parts
        let lie_gap = (pair_v(&mu, &lie_derivative_scalar(&xi, &f))
            + (&f * &lie_derivative_density(&xi, &mu)).integrate())
        .abs();

        // <ad*_xi md, eta> = <md, ad_xi eta>, second order (product rule)
        let ad_gap =
            (pair_g(&ad_star(&xi, &md), &eta) - pair_g(&md, &algebra_bracket(&xi, &eta))).abs();

        // cyclic Jacobi sum of the vector-field bracket, second order
        let cyclic = &(&jacobi_lie_bracket(&xi, &jacobi_lie_bracket(&eta, &zeta))
            + &jacobi_lie_bracket(&eta, &jacobi_lie_bracket(&zeta, &xi)))
            + &jacobi_lie_bracket(&zeta, &jacobi_lie_bracket(&xi, &eta));
        let jacobi = cyclic.max_abs();

        print!("{n:<10} {diamond_gap:>14.3e} {lie_gap:>14.3e} {ad_gap:>14.3e} {jacobi:>14.3e}");
        if let Some((prev_ad, prev_jac)) = previous {
            print!(
                "   ratios {:.2} / {:.2}",
                prev_ad / ad_gap,
                prev_jac / jacobi
            );
        }
        println!();
        previous = Some((ad_gap, jacobi));
    }

    println!(
        "\nthe diamond and Lie-derivative columns sit at rounding level on every grid;\n\
         the ad*/ad and Jacobi columns shrink by ~4x per halving of h (second order)."
    );
}
