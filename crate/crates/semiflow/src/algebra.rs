//! Semidirect-product geometry on the circle.
//!
//! The configuration group is Diff(S¹) acting on smooth functions by pullback
//! and on densities by pullback; the semidirect group carries pairs
//! (map, density). On the algebra side live the bracket (minus the Jacobi-Lie
//! bracket of vector fields), the coadjoint action ad* on one-form densities,
//! and the diamond map pairing function variations with densities:
//!
//! ```text
//! ad*_ξ (a ⊗ μ) = (£_ξ a + a div_μ ξ) ⊗ μ
//! f ◇ μ         = df ⊗ μ
//! ```
//!
//! Identities that involve no product rule (diamond adjointness, the
//! scalar/density Lie-derivative duality) hold here to machine precision
//! because the grid difference is summation-by-parts exact. Identities that
//! do use the product rule (ad*/ad duality, the Jacobi identity) hold at
//! second order in the spacing and are tested as convergence statements.

use crate::error::{Error, Result};
use crate::grid::{CubicInterpolant, Field, Grid};

/// Volume form μ = ρ dx with strictly positive coefficient.
#[derive(Clone, Debug, PartialEq)]
pub struct Density {
    rho: Field,
}

impl Density {
    /// Wraps a coefficient field, rejecting non-positive samples.
    pub fn new(rho: Field) -> Result<Density> {
        let min = rho.min();
        if min > 0.0 {
            Ok(Density { rho })
        } else {
            Err(Error::NonPositiveDensity { min })
        }
    }

    pub fn constant(grid: Grid, c: f64) -> Density {
        assert!(c > 0.0, "constant density must be positive");
        Density {
            rho: Field::constant(grid, c),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Density> {
        Density::new(Field::from_fn(grid, f))
    }

    /// Coefficient ρ of ρ dx.
    pub fn coefficient(&self) -> &Field {
        &self.rho
    }

    pub fn grid(&self) -> Grid {
        self.rho.grid()
    }

    /// Total mass ∫ ρ dx.
    pub fn total_mass(&self) -> f64 {
        self.rho.integrate()
    }

    /// Adds two densities (positivity is preserved).
    pub fn add(&self, other: &Density) -> Density {
        Density {
            rho: &self.rho + &other.rho,
        }
    }
}

/// One-form density a dx ⊗ ρ dx, an element of the dual algebra.
///
/// The pair is stored split rather than as the product a·ρ because ad* acts
/// on the one-form part with the density as a parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct OneFormDensity {
    a: Field,
    density: Density,
}

impl OneFormDensity {
    pub fn new(a: Field, density: Density) -> OneFormDensity {
        a.assert_same_grid(density.coefficient());
        OneFormDensity { a, density }
    }

    /// Coefficient a of the one-form part.
    pub fn one_form(&self) -> &Field {
        &self.a
    }

    pub fn density(&self) -> &Density {
        &self.density
    }

    pub fn grid(&self) -> Grid {
        self.a.grid()
    }
}

/// Orientation-preserving diffeomorphism of the circle, stored as a lifted
/// strictly monotone map with η(x + L) = η(x) + L.
///
/// Node values are never normalized back into [0, L); only interpolation
/// lookups wrap. This avoids branch-cut artifacts in composition and
/// inversion.
#[derive(Clone, Debug, PartialEq)]
pub struct Diffeo {
    eta: Field,
}

impl Diffeo {
    /// Validates strict monotonicity and winding number one.
    pub fn new(eta: Field) -> Result<Diffeo> {
        let v = eta.values();
        let l = eta.grid().length();
        for i in 1..v.len() {
            if v[i] <= v[i - 1] {
                return Err(Error::NotMonotone);
            }
        }
        if v[0] + l <= v[v.len() - 1] {
            return Err(Error::NotMonotone);
        }
        Ok(Diffeo { eta })
    }

    pub fn identity(grid: Grid) -> Diffeo {
        Diffeo {
            eta: Field::from_fn(grid, |x| x),
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn(f64) -> f64) -> Result<Diffeo> {
        Diffeo::new(Field::from_fn(grid, f))
    }

    /// Lifted node values of the map.
    pub fn as_field(&self) -> &Field {
        &self.eta
    }

    pub fn grid(&self) -> Grid {
        self.eta.grid()
    }

    /// Centered difference of the lifted map; strictly positive because the
    /// node values are strictly increasing.
    pub fn derivative(&self) -> Field {
        let grid = self.grid();
        let n = grid.n_points();
        let l = grid.length();
        let v = self.eta.values();
        let two_h = 2.0 * grid.spacing();
        let mut out = vec![0.0; n];
        for i in 0..n {
            let vp = if i + 1 == n { v[0] + l } else { v[i + 1] };
            let vm = if i == 0 { v[n - 1] - l } else { v[i - 1] };
            out[i] = (vp - vm) / two_h;
        }
        Field::from_values(grid, out)
    }

    /// Monotone cubic interpolant of the lifted map (winding L).
    pub fn interpolant(&self) -> CubicInterpolant {
        CubicInterpolant::lifted(self.grid(), self.eta.values().to_vec(), self.grid().length())
    }

    /// Composition self ∘ inner, sampled at the nodes by interpolation.
    pub fn compose(&self, inner: &Diffeo) -> Diffeo {
        self.eta.assert_same_grid(inner.as_field());
        let interp = self.interpolant();
        let values: Vec<f64> = inner.as_field().values().iter().map(|&y| interp.eval(y)).collect();
        Diffeo::new(Field::from_values(self.grid(), values))
            .expect("composition of diffeomorphisms stays monotone")
    }

    /// Inverse map sampled at the nodes by bisection on the monotone
    /// interpolant, to residual |η(η⁻¹(x)) − x| ≤ 1e−12.
    pub fn invert(&self) -> Result<Diffeo> {
        let grid = self.grid();
        let n = grid.n_points();
        let l = grid.length();
        let h = grid.spacing();
        let interp = self.interpolant();
        let v = self.eta.values();
        let lifted = |i: usize| if i == n { v[0] + l } else { v[i] };

        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let x = grid.node(j);
            // Shift the target onto the branch covered by node values.
            let k = ((x - v[0]) / l).floor();
            let target = x - k * l;

            // Locate the node interval containing the target.
            let mut lo = 0usize;
            let mut hi = n;
            while hi - lo > 1 {
                let mid = (lo + hi) / 2;
                if lifted(mid) <= target {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mut a = grid.node(lo);
            let mut b = a + h;
            for _ in 0..200 {
                if b - a <= 1e-15 {
                    break;
                }
                let mid = 0.5 * (a + b);
                if interp.eval(mid) <= target {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            let y = 0.5 * (a + b);
            let residual = (interp.eval(y) - target).abs();
            if residual > 1e-12 {
                return Err(Error::InversionFailed { residual });
            }
            out.push(y + k * l);
        }
        Diffeo::new(Field::from_values(grid, out))
    }
}

/// Element (γ, ω) of the semidirect product group of maps and densities.
#[derive(Clone, Debug)]
pub struct SemidirectElement {
    pub gamma: Diffeo,
    pub omega: Density,
}

impl SemidirectElement {
    pub fn new(gamma: Diffeo, omega: Density) -> SemidirectElement {
        gamma.as_field().assert_same_grid(omega.coefficient());
        SemidirectElement { gamma, omega }
    }

    pub fn identity(grid: Grid, omega: Density) -> SemidirectElement {
        SemidirectElement::new(Diffeo::identity(grid), omega)
    }
}

/// Group product (γ₁, ω₁)·(γ₂, ω₂) = (γ₁ ∘ γ₂, ω₂ + γ₂*ω₁).
pub fn semidirect_product(e1: &SemidirectElement, e2: &SemidirectElement) -> SemidirectElement {
    let gamma = e1.gamma.compose(&e2.gamma);
    let omega = e2.omega.add(&pullback_density(&e2.gamma, &e1.omega));
    SemidirectElement::new(gamma, omega)
}

/// Natural pairing ⟨μ, f⟩ = ∫ f μ.
pub fn pair_v(mu: &Density, f: &Field) -> f64 {
    (f * mu.coefficient()).integrate()
}

/// Dual-algebra pairing ⟨a ⊗ μ, ξ⟩ = ∫ a(ξ) μ.
pub fn pair_g(md: &OneFormDensity, xi: &Field) -> f64 {
    (&(md.one_form() * xi) * md.density().coefficient()).integrate()
}

/// Right action of a map on scalars: γ f = f ∘ η.
pub fn pullback_scalar(g: &Diffeo, f: &Field) -> Field {
    f.assert_same_grid(g.as_field());
    let interp = CubicInterpolant::periodic(f);
    let values: Vec<f64> = g.as_field().values().iter().map(|&y| interp.eval(y)).collect();
    Field::from_values(f.grid(), values)
}

/// Pullback of a density: coefficient (ρ ∘ η) · η′.
pub fn pullback_density(g: &Diffeo, mu: &Density) -> Density {
    let composed = pullback_scalar(g, mu.coefficient());
    Density::new(&composed * &g.derivative())
        .expect("pullback of a positive density by a monotone map stays positive")
}

/// Adjoint action of the group on vector fields, Ad_γ ξ = γ_* ξ,
/// realized as (η′ · ξ) ∘ η⁻¹.
pub fn pushforward_vector(g: &Diffeo, xi: &Field) -> Field {
    let inv = g
        .invert()
        .expect("inversion of a valid diffeomorphism converges");
    pullback_scalar(&inv, &(&g.derivative() * xi))
}

/// Coadjoint action of the group, Ad*_γ (a ⊗ μ) = γ*(a ⊗ μ): both the
/// one-form and the density coefficients pull back as (· ∘ η) · η′.
pub fn ad_star_group(g: &Diffeo, md: &OneFormDensity) -> OneFormDensity {
    let a = &pullback_scalar(g, md.one_form()) * &g.derivative();
    OneFormDensity::new(a, pullback_density(g, md.density()))
}

/// Algebra action on scalars, ξ f = £_ξ f = ξ f′.
pub fn lie_derivative_scalar(xi: &Field, f: &Field) -> Field {
    xi * &f.derivative()
}

/// Coefficient of £_ξ (ρ dx) = (ξ ρ)′ dx.
pub fn lie_derivative_density(xi: &Field, mu: &Density) -> Field {
    (xi * mu.coefficient()).derivative()
}

/// Jacobi-Lie bracket of vector fields, [ξ, η] = ξ η′ − η ξ′.
pub fn jacobi_lie_bracket(xi: &Field, eta: &Field) -> Field {
    &(xi * &eta.derivative()) - &(eta * &xi.derivative())
}

/// Bracket on the diffeomorphism algebra: minus the Jacobi-Lie bracket.
/// This is also ad_ξ η.
pub fn algebra_bracket(xi: &Field, eta: &Field) -> Field {
    -&jacobi_lie_bracket(xi, eta)
}

/// Divergence with respect to μ = ρ dx, defined by £_ξ μ = (div_μ ξ) μ;
/// in one dimension (ξ ρ)′ / ρ.
pub fn div_mu(xi: &Field, mu: &Density) -> Field {
    lie_derivative_density(xi, mu).zip_with(mu.coefficient(), |num, rho| num / rho)
}

/// Coadjoint action of the algebra on one-form densities,
/// ad*_ξ (a ⊗ μ) = (£_ξ a + a div_μ ξ) ⊗ μ with £_ξ (a dx) = (ξ a′ + a ξ′) dx.
pub fn ad_star(xi: &Field, md: &OneFormDensity) -> OneFormDensity {
    let a = md.one_form();
    let lie = &(xi * &a.derivative()) + &(a * &xi.derivative());
    let coeff = &lie + &(a * &div_mu(xi, md.density()));
    OneFormDensity::new(coeff, md.density().clone())
}

/// Diamond map f ◇ μ = df ⊗ μ, adjoint to the algebra action on scalars.
pub fn diamond(f: &Field, mu: &Density) -> OneFormDensity {
    OneFormDensity::new(f.derivative(), mu.clone())
}
