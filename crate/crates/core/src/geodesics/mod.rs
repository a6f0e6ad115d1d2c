//! Path metrics on `Q̄_n` and on the double.
//!
//! Shortest paths among vertical segment obstacles bend only at obstacle
//! endpoints, so a visibility graph over slit tips plus the two query points
//! computes the level metric exactly. The double is handled by unfolding it
//! onto the plane, where the slits form a periodic pattern. A grid Dijkstra
//! on the cut grid serves as an independent oracle.

mod double;
mod graph;
pub mod grid;
mod level;
pub(crate) mod plane;

use std::fmt::Write as _;

use crate::carpet::CarpetPoint;

pub use double::{distance_double, DoubleMetric};
pub use grid::{
    ball_distances, ball_distances_double, default_stencil_radius, CutGrid, DistanceField, NodeRef,
};
pub use level::{distance_level, distance_limit, LevelMetric, LimitSequence};

/// A path given by its vertices; consecutive vertices are joined by segments.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    pub vertices: Vec<CarpetPoint>,
    pub length: f64,
}

impl Polyline {
    /// One vertex per line: `x y [L|R] [front|back]`.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            let _ = writeln!(out, "{v}");
        }
        out
    }

    /// Sum of the Euclidean lengths of the segments.
    pub fn euclidean_length(&self) -> f64 {
        self.vertices
            .windows(2)
            .map(|w| {
                let (a, b) = (w[0].xy(), w[1].xy());
                (a.0 - b.0).hypot(a.1 - b.1)
            })
            .sum()
    }
}

/// Whether every vertex of the path has the same abscissa.
pub fn is_vertical(path: &Polyline) -> bool {
    path.vertices.windows(2).all(|w| w[0].x == w[1].x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::Side;

    fn pt(s: &str) -> CarpetPoint {
        s.parse().unwrap()
    }

    #[test]
    fn verticality() {
        let third = crate::Dyadic::from_f64(1.0 / 3.0).unwrap();
        let seg = Polyline {
            vertices: vec![
                CarpetPoint::plain(third, crate::Dyadic::ZERO),
                CarpetPoint::plain(third, crate::Dyadic::ONE),
            ],
            length: 1.0,
        };
        assert!(is_vertical(&seg));
        let diag = Polyline {
            vertices: vec![pt("0,0"), pt("1,1")],
            length: 2f64.sqrt(),
        };
        assert!(!is_vertical(&diag));
        let mut l = pt("1/2,1/2");
        l.side = Some(Side::Left);
        let along = Polyline {
            vertices: vec![l, pt("1/2,1/4"), pt("1/2,0")],
            length: 0.5,
        };
        assert!(is_vertical(&along));
    }
}
