//! The slit square `Q̄_n`, its points, and the strip model of the double.

pub mod point;
pub mod sample;
pub mod schedule;
pub mod strip;

pub use point::{locate, project, slit_generation_at, CarpetPoint, Face, Location, Side};
pub use schedule::{slits_up_to, Slit, SlitSchedule};
pub use strip::{fold, fold_raw, unfold, StripPoint};
