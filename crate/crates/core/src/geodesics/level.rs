use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::graph::VisGraph;
use super::plane::{Obstacles, Vertex};
use super::Polyline;
use crate::carpet::{project, slits_up_to, CarpetPoint};
use crate::error::Result;

/// The exact path metric of `Q̄_n`.
pub struct LevelMetric {
    level: u32,
    graph: VisGraph,
}

fn vertex(p: &CarpetPoint) -> Vertex {
    Vertex::new(p.x, p.y, p.side)
}

fn carpet(v: &Vertex) -> CarpetPoint {
    CarpetPoint {
        x: v.x,
        y: v.y,
        side: v.side,
        face: None,
    }
}

impl LevelMetric {
    pub fn new(level: u32) -> LevelMetric {
        let tips = slits_up_to(level)
            .slits()
            .iter()
            .flat_map(|s| s.tips())
            .map(|(x, y)| Vertex::new(x, y, None))
            .collect();
        LevelMetric {
            level,
            graph: VisGraph::build(Obstacles::new(level), tips, f64::INFINITY),
        }
    }

    /// A process-wide instance per level.
    pub fn shared(level: u32) -> Arc<LevelMetric> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<LevelMetric>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(m) = cache.lock().expect("cache poisoned").get(&level) {
            return m.clone();
        }
        let m = Arc::new(LevelMetric::new(level));
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

    pub fn tip_count(&self) -> usize {
        self.graph.tips.len()
    }

    /// Exact distance and a realizing path.
    pub fn distance(&self, p: &CarpetPoint, q: &CarpetPoint) -> Result<(f64, Polyline)> {
        p.validate(self.level)?;
        q.validate(self.level)?;
        let p = CarpetPoint { face: None, ..*p };
        let q = CarpetPoint { face: None, ..*q };
        if p == q {
            return Ok((
                0.0,
                Polyline {
                    vertices: vec![p],
                    length: 0.0,
                },
            ));
        }
        let (d, path) = self
            .graph
            .shortest_path(&vertex(&p), &[vertex(&q)])
            .expect("the slit square is path connected");
        let vertices = path.iter().map(carpet).collect();
        Ok((
            d,
            Polyline {
                vertices,
                length: d,
            },
        ))
    }

    /// Distances from `p` to each target (no paths).
    pub fn distances_from(&self, p: &CarpetPoint, targets: &[CarpetPoint]) -> Result<Vec<f64>> {
        p.validate(self.level)?;
        for q in targets {
            q.validate(self.level)?;
        }
        let src = vertex(p);
        let tip_dist = self.graph.tip_distances(&src);
        let order = VisGraph::order_by(&tip_dist);
        Ok(targets
            .iter()
            .map(|q| {
                if q.x == p.x && q.y == p.y && q.side == p.side {
                    0.0
                } else {
                    self.graph
                        .distance_via(&src, &tip_dist, &order, &[vertex(q)])
                }
            })
            .collect())
    }

    /// Distances from `p` to every slit tip, in schedule order (low tip,
    /// then high tip, per slit).
    pub fn tip_distances(&self, p: &CarpetPoint) -> Result<Vec<f64>> {
        p.validate(self.level)?;
        Ok(self.graph.tip_distances(&vertex(p)))
    }

    pub(crate) fn visible(&self, a: &CarpetPoint, b: &CarpetPoint) -> bool {
        self.graph.obstacles.visible(&vertex(a), &vertex(b))
    }

    pub(crate) fn tips(&self) -> impl Iterator<Item = CarpetPoint> + '_ {
        self.graph.tips.iter().map(carpet)
    }
}

/// `d_{Q̄_n}(p, q)` with one shortest path.
pub fn distance_level(n: u32, p: &CarpetPoint, q: &CarpetPoint) -> Result<(f64, Polyline)> {
    LevelMetric::shared(n).distance(p, q)
}

/// The distances `d_{Q̄_n}(π_n p, π_n q)` for `n = 0..=n_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitSequence {
    pub values: Vec<(u32, f64)>,
}

impl LimitSequence {
    /// `d_{n_max} - d_{n_max - 1}`; zero for a single term.
    pub fn final_gap(&self) -> f64 {
        match self.values.as_slice() {
            [.., (_, a), (_, b)] => b - a,
            _ => 0.0,
        }
    }

    pub fn is_nondecreasing(&self, slack: f64) -> bool {
        self.values.windows(2).all(|w| w[1].1 >= w[0].1 - slack)
    }

    pub fn last(&self) -> f64 {
        self.values.last().map(|v| v.1).unwrap_or(0.0)
    }
}

pub fn distance_limit(p: &CarpetPoint, q: &CarpetPoint, n_max: u32) -> Result<LimitSequence> {
    let mut values = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        let pn = project(p, n_max, n)?;
        let qn = project(q, n_max, n)?;
        values.push((n, distance_level(n, &pn, &qn)?.0));
    }
    Ok(LimitSequence { values })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::carpet::Side;

    fn pt(s: &str) -> CarpetPoint {
        s.parse().unwrap()
    }

    #[test]
    fn convex_square() {
        let (d, path) = distance_level(0, &pt("0,0"), &pt("1,1")).unwrap();
        assert_eq!(d, 2f64.sqrt());
        assert_eq!(path.vertices.len(), 2);
    }

    #[test]
    fn doubled_centre_is_half_apart() {
        let (d, path) = distance_level(1, &pt("1/2,1/2,L"), &pt("1/2,1/2,R")).unwrap();
        assert_eq!(d, 0.5);
        assert_eq!(path.vertices.len(), 3);
        assert_eq!(path.vertices[1], pt("1/2,1/4"));
        assert!(super::super::is_vertical(&path));
    }

    #[test]
    fn near_tie_through_collinear_tips_is_symmetric() {
        // Two labels of one tip differ in the last bit; the route through
        // (1/2, 1/4) must still be found from both ends.
        let m = LevelMetric::new(3);
        let (p, q) = (pt("5/32,1/4"), pt("11/16,17/32"));
        let a = m.distance(&p, &q).unwrap().0;
        let b = m.distance(&q, &p).unwrap().0;
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        let via =
            m.distance(&p, &pt("1/2,1/4")).unwrap().0 + m.distance(&pt("1/2,1/4"), &q).unwrap().0;
        assert!((a - via).abs() < 1e-12);
    }

    #[test]
    fn across_the_central_slit() {
        let (d, path) = distance_level(1, &pt("1/4,1/2"), &pt("3/4,1/2")).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
        assert_eq!(path.vertices[1], pt("1/2,1/4"));
    }

    #[test]
    fn untagged_in_slit_point_rejected() {
        assert!(distance_level(1, &pt("1/2,1/2"), &pt("0,0")).is_err());
        assert!(distance_level(0, &pt("1/2,1/2,L"), &pt("0,0")).is_err());
    }

    #[test]
    fn distances_from_agrees_with_paths() {
        let m = LevelMetric::new(3);
        let p = pt("1/2,1/2,R");
        let targets: Vec<CarpetPoint> = [
            "1/8,0",
            "1/4,1/4,L",
            "7/8,1/2",
            "1/2,1/2,L",
            "0,1",
            "1/2,1/2,R",
        ]
        .iter()
        .map(|s| pt(s))
        .collect();
        let fast = m.distances_from(&p, &targets).unwrap();
        for (q, f) in targets.iter().zip(fast) {
            let (d, path) = m.distance(&p, q).unwrap();
            assert!((d - f).abs() < 1e-12, "{q}: {d} vs {f}");
            assert!((path.euclidean_length() - d).abs() < 1e-12);
        }
    }

    #[test]
    fn limit_sequence_examples() {
        let s = distance_limit(&pt("0,0"), &pt("1,1"), 4).unwrap();
        assert_eq!(s.values[0].1, 2f64.sqrt());
        assert!(s.is_nondecreasing(1e-12));
        assert!(s
            .values
            .iter()
            .all(|&(_, d)| d >= 2f64.sqrt() - 1e-12 && d <= 3.0));
        let a = pt("3/8,3/8,R");
        assert_eq!(a.side, Some(Side::Right));
        let zero = distance_limit(&a, &a, 3).unwrap();
        assert!(zero.values.iter().all(|&(_, d)| d == 0.0));
        let s = distance_limit(&pt("0,1/2"), &pt("1,1/2"), 4).unwrap();
        assert_eq!(s.values[0].1, 1.0);
        assert!(s.is_nondecreasing(1e-12));
    }
}
