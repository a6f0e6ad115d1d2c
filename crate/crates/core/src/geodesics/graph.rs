//! Visibility graph over slit tips and the shortest-path searches on it.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use rayon::prelude::*;

use super::plane::{Obstacles, Vertex};

/// Distances closer than this are treated as ties.
pub(crate) const TIE_EPS: f64 = 1e-12;

#[derive(Clone, Copy, PartialEq)]
pub(crate) struct HeapItem(pub f64, pub u32);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .total_cmp(&other.0)
            .then_with(|| self.1.cmp(&other.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) struct VisGraph {
    pub obstacles: Obstacles,
    pub tips: Vec<Vertex>,
    pub adj: Vec<Vec<(u32, f64)>>,
}

impl VisGraph {
    /// Builds the tip graph; edges longer than `max_edge` are omitted.
    pub fn build(obstacles: Obstacles, tips: Vec<Vertex>, max_edge: f64) -> VisGraph {
        let rows: Vec<Vec<(u32, f64)>> = (0..tips.len())
            .into_par_iter()
            .map(|i| {
                let a = &tips[i];
                (i + 1..tips.len())
                    .filter_map(|j| {
                        let b = &tips[j];
                        let d = a.dist(b);
                        (d <= max_edge && obstacles.visible(a, b)).then_some((j as u32, d))
                    })
                    .collect()
            })
            .collect();
        let mut adj: Vec<Vec<(u32, f64)>> = vec![Vec::new(); tips.len()];
        for (i, row) in rows.into_iter().enumerate() {
            for (j, d) in row {
                adj[i].push((j, d));
                adj[j as usize].push((i as u32, d));
            }
        }
        VisGraph {
            obstacles,
            tips,
            adj,
        }
    }

    fn visible_tips(&self, p: &Vertex) -> Vec<(u32, f64)> {
        self.tips
            .iter()
            .enumerate()
            .filter(|(_, t)| self.obstacles.visible(p, t))
            .map(|(i, t)| (i as u32, p.dist(t)))
            .collect()
    }

    /// Shortest path from `src` to the nearest of `targets`, with ties broken
    /// by fewest vertices and then lexicographically on the vertex sequence.
    ///
    /// Runs backwards from the targets so that the preferred successor of
    /// each node is settled before the node itself.
    pub fn shortest_path(&self, src: &Vertex, targets: &[Vertex]) -> Option<(f64, Vec<Vertex>)> {
        let t = self.tips.len();
        let s = t;
        let total = t + 1 + targets.len();
        let vertex = |i: usize| -> &Vertex {
            if i < t {
                &self.tips[i]
            } else if i == s {
                src
            } else {
                &targets[i - t - 1]
            }
        };
        let src_vis: Vec<bool> = self
            .tips
            .iter()
            .map(|tp| self.obstacles.visible(src, tp))
            .collect();
        let mut dist = vec![f64::INFINITY; total];
        let mut hops = vec![u32::MAX; total];
        let mut next = vec![u32::MAX; total];
        let mut done = vec![false; total];
        let mut heap = BinaryHeap::new();
        for i in 0..targets.len() {
            let id = t + 1 + i;
            dist[id] = 0.0;
            hops[id] = 1;
            heap.push(Reverse(HeapItem(0.0, id as u32)));
        }
        let relax = |v: usize,
                     u: usize,
                     w: f64,
                     dist: &mut Vec<f64>,
                     hops: &mut Vec<u32>,
                     next: &mut Vec<u32>,
                     done: &Vec<bool>,
                     heap: &mut BinaryHeap<Reverse<HeapItem>>| {
            if done[v] {
                return;
            }
            let cand = dist[u] + w;
            let ch = hops[u] + 1;
            if cand < dist[v] - TIE_EPS {
                dist[v] = cand;
                hops[v] = ch;
                next[v] = u as u32;
                heap.push(Reverse(HeapItem(cand, v as u32)));
            } else if cand <= dist[v] + TIE_EPS {
                let better = next[v] == u32::MAX
                    || ch < hops[v]
                    || (ch == hops[v] && vertex(u).key() < vertex(next[v] as usize).key());
                if better {
                    hops[v] = ch;
                    next[v] = u as u32;
                }
                if cand < dist[v] {
                    // The old heap entry is now stale and would be skipped.
                    dist[v] = cand;
                    heap.push(Reverse(HeapItem(cand, v as u32)));
                }
            }
        };
        while let Some(Reverse(HeapItem(d, u))) = heap.pop() {
            let u = u as usize;
            if done[u] || d > dist[u] {
                continue;
            }
            if dist[s].is_finite() && d > dist[s] + TIE_EPS {
                break;
            }
            done[u] = true;
            if u == s {
                continue;
            }
            let pu = *vertex(u);
            if u < t {
                for &(v, w) in &self.adj[u] {
                    relax(
                        v as usize, u, w, &mut dist, &mut hops, &mut next, &done, &mut heap,
                    );
                }
                if src_vis[u] {
                    relax(
                        s,
                        u,
                        pu.dist(src),
                        &mut dist,
                        &mut hops,
                        &mut next,
                        &done,
                        &mut heap,
                    );
                }
            } else {
                for (v, w) in self.visible_tips(&pu) {
                    relax(
                        v as usize, u, w, &mut dist, &mut hops, &mut next, &done, &mut heap,
                    );
                }
                if self.obstacles.visible(&pu, src) {
                    relax(
                        s,
                        u,
                        pu.dist(src),
                        &mut dist,
                        &mut hops,
                        &mut next,
                        &done,
                        &mut heap,
                    );
                }
            }
        }
        if !dist[s].is_finite() {
            return None;
        }
        let mut path = vec![*src];
        let mut cur = s;
        while next[cur] != u32::MAX {
            cur = next[cur] as usize;
            path.push(*vertex(cur));
        }
        Some((dist[s], path))
    }

    /// Distances from `src` to every tip.
    pub fn tip_distances(&self, src: &Vertex) -> Vec<f64> {
        let t = self.tips.len();
        let mut dist = vec![f64::INFINITY; t];
        let mut heap = BinaryHeap::new();
        for (i, w) in self.visible_tips(src) {
            dist[i as usize] = w;
            heap.push(Reverse(HeapItem(w, i)));
        }
        while let Some(Reverse(HeapItem(d, u))) = heap.pop() {
            let u = u as usize;
            if d > dist[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let c = d + w;
                if c < dist[v as usize] {
                    dist[v as usize] = c;
                    heap.push(Reverse(HeapItem(c, v)));
                }
            }
        }
        dist
    }

    /// Exact distance from a source (given by its tip distances) to the
    /// nearest of `lifts`.
    pub fn distance_via(
        &self,
        src: &Vertex,
        tip_dist: &[f64],
        order: &[u32],
        lifts: &[Vertex],
    ) -> f64 {
        let mut best = f64::INFINITY;
        let mut lifts: Vec<&Vertex> = lifts.iter().collect();
        lifts.sort_by(|a, b| src.dist(a).total_cmp(&src.dist(b)));
        for q in &lifts {
            let direct = src.dist(q);
            if direct < best && self.obstacles.visible(src, q) {
                best = direct;
            }
        }
        for q in &lifts {
            if src.dist(q) >= best {
                continue;
            }
            for &i in order {
                let du = tip_dist[i as usize];
                if du >= best {
                    break;
                }
                let tip = &self.tips[i as usize];
                let c = du + tip.dist(q);
                if c < best && self.obstacles.visible(tip, q) {
                    best = c;
                }
            }
        }
        best
    }

    /// Tip indices sorted by distance.
    pub fn order_by(dist: &[f64]) -> Vec<u32> {
        let mut order: Vec<u32> = (0..dist.len() as u32)
            .filter(|&i| dist[i as usize].is_finite())
            .collect();
        order.sort_by(|&a, &b| dist[a as usize].total_cmp(&dist[b as usize]));
        order
    }
}
