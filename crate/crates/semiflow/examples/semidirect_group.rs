//! Exercises the group layer: composition and inversion of circle maps, the
//! twisted product on (map, density) pairs, and the duality between the
//! group adjoint and coadjoint actions.
//!
//!     cargo run --release --example semidirect_group

use semiflow::algebra::{
    ad_star_group, pair_g, pullback_density, pullback_scalar, pushforward_vector,
    semidirect_product, OneFormDensity, SemidirectElement,
};
use semiflow::{Density, Diffeo, Field, Grid};

fn main() {
    let grid = Grid::circle(512);

    let gamma = Diffeo::from_fn(grid, |x| x + 0.1 * x.sin()).unwrap();
    let inverse = gamma.invert().unwrap();
    let round_trip = gamma
        .compose(&inverse)
        .as_field()
        .linf_distance(Diffeo::identity(grid).as_field());
    println!("| gamma o gamma^-1 - id |_inf  = {round_trip:.3e}");

    let f = Field::from_fn(grid, |x| (2.0 * x).sin());
    let pulled = pullback_scalar(&gamma, &f);
    let exact = Field::from_fn(grid, |x| (2.0 * (x + 0.1 * x.sin())).sin());
    println!("pullback of sin(2x) error      = {:.3e}", pulled.linf_distance(&exact));

    let mu = Density::from_fn(grid, |x| 1.0 + 0.3 * x.cos()).unwrap();
    let moved = pullback_density(&gamma, &mu);
    println!(
        "mass before/after pullback     = {:.12} / {:.12}",
        mu.total_mass(),
        moved.total_mass()
    );

    // twisted product: (g1, w1)(g2, w2) = (g1 o g2, w2 + g2* w1)
    let e1 = SemidirectElement::new(gamma.clone(), mu.clone());
    let e2 = SemidirectElement::new(
        Diffeo::from_fn(grid, |x| x + 0.3 + 0.05 * (2.0 * x).cos()).unwrap(),
        Density::from_fn(grid, |x| 0.8 + 0.2 * x.sin()).unwrap(),
    );
    let e3 = SemidirectElement::new(
        Diffeo::from_fn(grid, |x| x - 0.2 + 0.04 * x.cos()).unwrap(),
        Density::constant(grid, 0.5),
    );
    let left = semidirect_product(&semidirect_product(&e1, &e2), &e3);
    let right = semidirect_product(&e1, &semidirect_product(&e2, &e3));
    println!(
        "associativity defect           = {:.3e} (map), {:.3e} (density)",
        left.gamma.as_field().linf_distance(right.gamma.as_field()),
        left.omega
            .coefficient()
            .linf_distance(right.omega.coefficient())
    );

    // <Ad*_g md, xi> = <md, Ad_g xi>
    let xi = Field::from_fn(grid, |x| (3.0 * x).cos());
    let md = OneFormDensity::new(Field::from_fn(grid, |x| 0.5 + 0.3 * x.sin()), mu);
    let lhs = pair_g(&ad_star_group(&gamma, &md), &xi);
    let rhs = pair_g(&md, &pushforward_vector(&gamma, &xi));
    println!("Ad*/Ad duality defect          = {:.3e}", (lhs - rhs).abs());
}
