//! Semidirect-product geometry of one-dimensional barotropic compressible
//! flow on the circle, with four independently implemented evolution routes
//! that coincide in the continuum:
//!
//! * the material (Lagrangian-label) equation for the configuration map,
//! * the Euler-Poincaré equation for (velocity, density),
//! * the generic Lie-Poisson form driven by δH/δm and δH/δρ,
//! * the classical conservative flux form.
//!
//! The crate also exposes the geometric operations the derivations run on —
//! pullbacks, Ad/Ad*, ad/ad*, the diamond map, the Lie-Poisson bracket, and
//! variational derivatives with a finite-difference oracle — so every
//! identity connecting the routes can be checked numerically.
//!
//! ```
//! use semiflow::{
//!     dynamics::{simulate, InitialCondition, SimulationConfig, SolverKind},
//!     BarotropicLaw, Grid,
//! };
//!
//! let config = SimulationConfig::new(
//!     Grid::circle(128),
//!     BarotropicLaw::polytropic(1.0, 1.4),
//!     1e-3,
//!     0.1,
//!     SolverKind::FluxForm,
//!     InitialCondition::acoustic_default(),
//! )
//! .with_output_stride(20);
//!
//! let record = simulate(&config).unwrap();
//! let drift = (record.last_diagnostics().mass - record.diagnostics[0].mass).abs();
//! assert!(drift < 1e-12);
//! ```
//!
//! The runnable programs under `examples/` walk through each capability;
//! the `semiflow` binary wraps simulation, verification suites, and
//! cross-solver comparison for the command line.

#![allow(clippy::needless_range_loop)] // indexed loops read better in stencil code

pub mod algebra;
pub mod cli;
pub mod dynamics;
mod error;
pub mod grid;
pub mod hamiltonian;
pub mod lagrangian;
pub mod sampling;

pub use algebra::{Density, Diffeo, OneFormDensity, SemidirectElement};
pub use error::{Error, Result};
pub use grid::{Field, Grid};
pub use hamiltonian::{ConservativeState, Functional};
pub use lagrangian::{BarotropicLaw, MaterialState, ReducedState};
