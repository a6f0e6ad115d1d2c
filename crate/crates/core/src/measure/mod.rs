//! Area, regularity and porosity on `Q̄_n` and its double.
//!
//! Area is Lebesgue measure with multiplicity, computed by counting grid
//! cells whose centres lie within the geodesic ball. The slit set has
//! measure zero and is never weighted on its own.

mod covering;
mod mass;
mod porosity;

pub use covering::{
    covering_check, incl_check, measure_comparability, Comparability, CoverReport, InclWitness,
    Region, SideFilter,
};
pub use mass::{ahlfors_scan, ball_mass, ball_mass_double, MassGrid, MassSample, RegularityReport};
pub use porosity::{porosity_scan, porosity_witness, PorosityReport, PorositySample};

/// Frozen bound on the greedy covering count.
pub const C_REG: usize = 4;

/// Frozen bound on the two comparability ratios.
pub const C_CMP: f64 = 2.0;
