//! The quasisymmetry group of the double: isometries composed with shears.

mod checks;
mod group;
mod lfunction;

pub use checks::{
    bilipschitz_bound, bilipschitz_estimate, closed_vertical_curve, cohopf_check,
    enumerate_closed_vertical_curves, isometry_shear_intersection, isometry_shear_witness,
    random_elements, rotation_check, sample_vertical_curves, vertical_curve_signature,
    verttovert_check, Abscissa, VerticalCurveSignature,
};
pub use group::{
    conjugate, qs_apply, qs_compose, qs_inverse, shear_apply, Ambient, Conjugate, IsometryElement,
    QSElement, VERIFY_SAMPLES,
};
pub use lfunction::{h0, h0_eval, h_epsilon, l_add, l_neg, validate_l, LFunction, MAX_N};
