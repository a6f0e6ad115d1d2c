//! The double, unfolded onto the plane.
//!
//! Tile the plane by unit squares; square `(a, b)` carries the front copy
//! when `a + b` is even and the back copy otherwise, reflected in `x` when
//! `a` is odd and in `y` when `b` is odd. Paths in the double unfold to
//! paths in the plane avoiding the reflected slits, and the slit pattern is
//! invariant under these reflections, so it is simply periodic. A distance
//! in the double is the planar distance from one lift of `p` to the nearest
//! lift of `q`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::graph::VisGraph;
use super::plane::{Obstacles, Vertex};
use super::Polyline;
use crate::carpet::{slits_up_to, CarpetPoint, Face};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

const DEFAULT_RADIUS: f64 = 2.0;

fn square_face(a: i64, b: i64) -> Face {
    if (a + b).rem_euclid(2) == 0 {
        Face::Front
    } else {
        Face::Back
    }
}

/// The lift of `p` into square `(a, b)`, if `p` belongs to that copy.
fn lift(p: &CarpetPoint, a: i64, b: i64) -> Option<Vertex> {
    if let Some(f) = p.face {
        if f != square_face(a, b) {
            return None;
        }
    }
    let (ad, bd) = (Dyadic::from_int(a), Dyadic::from_int(b));
    let x = if a.rem_euclid(2) == 1 {
        ad + Dyadic::ONE - p.x
    } else {
        ad + p.x
    };
    let y = if b.rem_euclid(2) == 1 {
        bd + Dyadic::ONE - p.y
    } else {
        bd + p.y
    };
    let side = if a.rem_euclid(2) == 1 {
        p.side.map(|s| s.flip())
    } else {
        p.side
    };
    Some(Vertex::new(x, y, side))
}

fn base_lift(p: &CarpetPoint) -> Vertex {
    let a = if p.face == Some(Face::Back) { 1 } else { 0 };
    lift(p, a, 0).expect("base square matches the face")
}

/// Folds a planar point back onto the double.
fn fold_plane(v: &Vertex) -> CarpetPoint {
    let a = v.x.floor();
    let b = v.y.floor();
    let fx = v.x - Dyadic::new(a, 0);
    let fy = v.y - Dyadic::new(b, 0);
    let x = if a.rem_euclid(2) == 1 {
        Dyadic::ONE - fx
    } else {
        fx
    };
    let y = if b.rem_euclid(2) == 1 {
        Dyadic::ONE - fy
    } else {
        fy
    };
    let side = if a.rem_euclid(2) == 1 {
        v.side.map(|s| s.flip())
    } else {
        v.side
    };
    let face = square_face(a as i64, b as i64);
    CarpetPoint {
        x,
        y,
        side,
        face: None,
    }
    .with_face(Some(face))
}

/// Euclidean distance from `v` to the rectangle `[0,2] × [0,1]`.
fn dist_to_base(xf: f64, yf: f64) -> f64 {
    let dx = (0.0 - xf).max(xf - 2.0).max(0.0);
    let dy = (0.0 - yf).max(yf - 1.0).max(0.0);
    dx.hypot(dy)
}

/// The exact path metric of the double of `Q̄_n`.
///
/// Tips are lifted into a window of the plane around the base squares. A
/// result not exceeding the window radius is exact, because any shorter
/// path stays inside the window; larger results trigger a rebuild.
pub struct DoubleMetric {
    level: u32,
    radius: f64,
    graph: VisGraph,
}

impl DoubleMetric {
    pub fn new(level: u32) -> DoubleMetric {
        DoubleMetric::with_radius(level, DEFAULT_RADIUS)
    }

    pub fn with_radius(level: u32, radius: f64) -> DoubleMetric {
        let base: Vec<CarpetPoint> = slits_up_to(level)
            .slits()
            .iter()
            .flat_map(|s| s.tips())
            .map(|(x, y)| CarpetPoint::plain(x, y))
            .collect();
        let r = radius.ceil() as i64;
        let mut tips = Vec::new();
        for a in -r - 1..=r + 2 {
            for b in -r - 1..=r + 1 {
                for t in &base {
                    let v = lift(t, a, b).expect("untagged tips lift everywhere");
                    if dist_to_base(v.xf, v.yf) <= radius {
                        tips.push(v);
                    }
                }
            }
        }
        let graph = VisGraph::build(Obstacles::new(level), tips, 2.0 * radius);
        DoubleMetric {
            level,
            radius,
            graph,
        }
    }

    /// A process-wide instance per level at the default radius.
    pub fn shared(level: u32) -> Arc<DoubleMetric> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<DoubleMetric>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(m) = cache.lock().expect("cache poisoned").get(&level) {
            return m.clone();
        }
        let m = Arc::new(DoubleMetric::new(level));
        cache
            .lock()
            .expect("cache poisoned")
            .entry(level)
            .or_insert(m)
            .clone()
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    fn lifts_near(&self, src: &Vertex, q: &CarpetPoint) -> Vec<Vertex> {
        let r = self.radius.ceil() as i64;
        let mut out = Vec::new();
        for a in -r - 1..=r + 2 {
            for b in -r - 1..=r + 1 {
                if let Some(v) = lift(q, a, b) {
                    if src.dist(&v) <= self.radius + 1e-12 && !out.contains(&v) {
                        out.push(v);
                    }
                }
            }
        }
        out
    }

    fn check(&self, p: &CarpetPoint) -> Result<()> {
        p.validate_double(self.level)
    }

    /// Exact distance and a realizing path; the path gains a vertex at
    /// every crossing of the seam.
    pub fn distance(&self, p: &CarpetPoint, q: &CarpetPoint) -> Result<(f64, Polyline)> {
        self.check(p)?;
        self.check(q)?;
        if p == q {
            return Ok((
                0.0,
                Polyline {
                    vertices: vec![*p],
                    length: 0.0,
                },
            ));
        }
        let src = base_lift(p);
        let lifts = self.lifts_near(&src, q);
        match self.graph.shortest_path(&src, &lifts) {
            Some((d, path)) if d <= self.radius => {
                let vertices = unfold_path(&path, p, q);
                Ok((
                    d,
                    Polyline {
                        vertices,
                        length: d,
                    },
                ))
            }
            found => {
                let bound = found.map(|f| f.0).unwrap_or(2.0 * self.radius);
                DoubleMetric::with_radius(self.level, bound + 1e-9).distance(p, q)
            }
        }
    }

    /// Distances from `p` to each target (no paths).
    pub fn distances_from(&self, p: &CarpetPoint, targets: &[CarpetPoint]) -> Result<Vec<f64>> {
        self.check(p)?;
        for q in targets {
            self.check(q)?;
        }
        let src = base_lift(p);
        let tip_dist = self.graph.tip_distances(&src);
        let order = VisGraph::order_by(&tip_dist);
        let mut out = Vec::with_capacity(targets.len());
        for q in targets {
            if q == p {
                out.push(0.0);
                continue;
            }
            let d = self
                .graph
                .distance_via(&src, &tip_dist, &order, &self.lifts_near(&src, q));
            if d <= self.radius {
                out.push(d);
            } else {
                let wide = DoubleMetric::with_radius(self.level, d.min(4.0 * self.radius) + 1e-9);
                out.push(wide.distance(p, q)?.0);
            }
        }
        Ok(out)
    }
}

fn unfold_path(path: &[Vertex], p: &CarpetPoint, q: &CarpetPoint) -> Vec<CarpetPoint> {
    let mut out = vec![*p];
    for w in path.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        let mut cuts: Vec<(f64, Vertex)> = Vec::new();
        let mut push_cuts = |lo: f64, hi: f64, along_x: bool| {
            let (s, e) = if lo < hi { (lo, hi) } else { (hi, lo) };
            let mut m = s.floor() + 1.0;
            while m < e {
                let t = (m - lo) / (hi - lo);
                let v = if along_x {
                    let y = a.yf + t * (b.yf - a.yf);
                    Vertex::new(
                        Dyadic::from_int(m as i64),
                        Dyadic::from_f64(y).unwrap_or(a.y),
                        None,
                    )
                } else {
                    let x = a.xf + t * (b.xf - a.xf);
                    Vertex::new(
                        Dyadic::from_f64(x).unwrap_or(a.x),
                        Dyadic::from_int(m as i64),
                        None,
                    )
                };
                cuts.push((t, v));
                m += 1.0;
            }
        };
        push_cuts(a.xf, b.xf, true);
        push_cuts(a.yf, b.yf, false);
        cuts.sort_by(|u, v| u.0.total_cmp(&v.0));
        cuts.dedup_by(|u, v| (u.0 - v.0).abs() < 1e-15);
        for (_, v) in cuts {
            out.push(fold_plane(&v));
        }
        out.push(fold_plane(b));
    }
    if let Some(last) = out.last_mut() {
        *last = *q;
    }
    out.dedup();
    out
}

/// `d_{DS₂}` at level `n` with one shortest path.
pub fn distance_double(n: u32, p: &CarpetPoint, q: &CarpetPoint) -> Result<(f64, Polyline)> {
    if p.face.is_none() && !p.on_seam() || q.face.is_none() && !q.on_seam() {
        return Err(Error::InvalidTag(
            "points of the double need a front/back tag off the seam".into(),
        ));
    }
    DoubleMetric::shared(n).distance(p, q)
}
