//! Discrete moduli on the cut grid of `Q̄_n`.
//!
//! The potential problems and the curve families live on the same
//! resistor network, so the effective conductance between two sides equals
//! the modulus of the family joining them.

mod amg;
mod direct;
mod laplace;
mod network;

pub use direct::{
    modulus_direct, modulus_upper_nonvertical, tiling_exponent, vertical_family_bounds,
    CurveFamilySpec, ModulusEstimate, STOP_TOL,
};
pub use laplace::{
    conductance, energy_of, laplace_solve, laplace_solve_on, max_residual, BoundarySpec, Direction,
    GridField, DEFAULT_TOL, MAX_ITERATIONS,
};
pub use network::{Edge, Network};
