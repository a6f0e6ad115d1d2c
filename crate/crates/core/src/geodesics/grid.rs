//! Grid Dijkstra on the cut grid.
//!
//! Nodes sit at `(i, j) / 2^g`. Nodes strictly inside a slit are duplicated,
//! one per side; for the double every off-seam node also exists once per
//! face. Edges follow a Farey stencil of primitive directions and are kept
//! unless they cross an open slit transversally, so grid distances decrease
//! towards the exact metric as the stencil and the grid are refined.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::graph::HeapItem;
use crate::carpet::{CarpetPoint, Face, Side};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

const NONE: u32 = u32::MAX;

/// A grid node in carpet terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeRef {
    pub i: u32,
    pub j: u32,
    pub side: Option<Side>,
    pub face: Option<Face>,
}

impl NodeRef {
    pub fn point(&self, g: u32) -> CarpetPoint {
        CarpetPoint {
            x: Dyadic::new(self.i as i128, g),
            y: Dyadic::new(self.j as i128, g),
            side: self.side,
            face: self.face,
        }
    }
}

fn variant(side: Option<Side>, face: Option<Face>) -> usize {
    let f = usize::from(face == Some(Face::Back));
    let s = usize::from(side == Some(Side::Right));
    f * 2 + s
}

/// `ceil(0.4 · 2^(g/2))`.
pub fn default_stencil_radius(g: u32) -> u32 {
    (0.4 * 2f64.powf(g as f64 / 2.0)).ceil().max(1.0) as u32
}

fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// The cut grid of `Q̄_n` (or of its double) at spacing `2^-g`.
#[derive(Debug, Clone)]
pub struct CutGrid {
    level: u32,
    g: u32,
    double: bool,
    stencil: Vec<(i32, i32, f64)>,
    col_gen: Vec<u32>,
    ids: Vec<[u32; 4]>,
    refs: Vec<NodeRef>,
}

impl CutGrid {
    pub fn new(level: u32, g: u32, stencil_radius: u32, double: bool) -> Result<CutGrid> {
        if g <= level {
            return Err(Error::GridMisaligned { level, grid: g });
        }
        if g > 14 {
            return Err(Error::Domain(format!("grid exponent {g} exceeds 14")));
        }
        let m = 1u32 << g;
        let k = stencil_radius.max(1) as i32;
        let h = 1.0 / m as f64;
        let mut stencil = Vec::new();
        for dx in -k..=k {
            for dy in -k..=k {
                if (dx, dy) != (0, 0) && gcd(dx, dy) == 1 {
                    stencil.push((dx, dy, (dx as f64).hypot(dy as f64) * h));
                }
            }
        }
        let col_gen = (0..=m)
            .map(|i| {
                if i == 0 || i == m {
                    0
                } else {
                    let k = g - i.trailing_zeros();
                    if k <= level {
                        k
                    } else {
                        0
                    }
                }
            })
            .collect();
        let mut grid = CutGrid {
            level,
            g,
            double,
            stencil,
            col_gen,
            ids: Vec::new(),
            refs: Vec::new(),
        };
        let side = (m as usize + 1) * (m as usize + 1);
        grid.ids = vec![[NONE; 4]; side];
        for i in 0..=m {
            for j in 0..=m {
                let seam = i == 0 || j == 0 || i == m || j == m;
                let faces: &[Option<Face>] = if !double || seam {
                    &[None]
                } else {
                    &[Some(Face::Front), Some(Face::Back)]
                };
                let sides: &[Option<Side>] = if grid.in_slit(i, j) {
                    &[Some(Side::Left), Some(Side::Right)]
                } else {
                    &[None]
                };
                for &face in faces {
                    for &s in sides {
                        let id = grid.refs.len() as u32;
                        grid.refs.push(NodeRef {
                            i,
                            j,
                            side: s,
                            face,
                        });
                        let idx = grid.index(i, j);
                        let fs: &[Option<Face>] = if face.is_none() {
                            &[Some(Face::Front), Some(Face::Back)]
                        } else {
                            std::slice::from_ref(&face)
                        };
                        let ss: &[Option<Side>] = if s.is_none() {
                            &[Some(Side::Left), Some(Side::Right)]
                        } else {
                            std::slice::from_ref(&s)
                        };
                        for &fv in fs {
                            for &sv in ss {
                                grid.ids[idx][variant(sv, fv)] = id;
                            }
                        }
                    }
                }
            }
        }
        Ok(grid)
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn g(&self) -> u32 {
        self.g
    }

    pub fn size(&self) -> u32 {
        1 << self.g
    }

    pub fn is_double(&self) -> bool {
        self.double
    }

    pub fn node_count(&self) -> usize {
        self.refs.len()
    }

    pub fn nodes(&self) -> &[NodeRef] {
        &self.refs
    }

    fn index(&self, i: u32, j: u32) -> usize {
        i as usize * (self.size() as usize + 1) + j as usize
    }

    /// Slit generation of column `i`, or 0 if it carries no slit.
    pub fn column_generation(&self, i: u32) -> u32 {
        self.col_gen[i as usize]
    }

    fn quarter(&self, k: u32) -> u64 {
        1u64 << (self.g - k - 1)
    }

    /// Whether node position `(i, j)` is strictly inside a slit.
    pub fn in_slit(&self, i: u32, j: u32) -> bool {
        let k = self.col_gen[i as usize];
        if k == 0 {
            return false;
        }
        let s = self.quarter(k);
        let r = j as u64 % (4 * s);
        r > s && r < 3 * s
    }

    /// Id of the node for `(i, j)` with the given tags; tags that do not
    /// apply are ignored.
    pub fn id(&self, i: u32, j: u32, side: Option<Side>, face: Option<Face>) -> Option<u32> {
        let m = self.size();
        if i > m || j > m {
            return None;
        }
        let slot = &self.ids[self.index(i, j)];
        let face = if self.double {
            face.or(Some(Face::Front))
        } else {
            None
        };
        let side = side.or(Some(Side::Left));
        let id = slot[variant(side, face)];
        (id != NONE).then_some(id)
    }

    /// Id of the node at a carpet point, which must lie on the grid.
    pub fn node_of(&self, p: &CarpetPoint) -> Result<u32> {
        if self.double {
            p.validate_double(self.level)?;
        } else {
            p.validate(self.level)?;
        }
        let (i, j) = match (p.x.scaled_to(self.g), p.y.scaled_to(self.g)) {
            (Some(i), Some(j)) => (i, j),
            _ => {
                return Err(Error::Domain(format!(
                    "{p} is not a node of the 2^-{} grid",
                    self.g
                )))
            }
        };
        self.id(i as u32, j as u32, p.side, p.face)
            .ok_or_else(|| Error::Domain(format!("{p} is not a node of the grid")))
    }

    fn crosses(&self, i: u32, j: u32, dx: i32, dy: i32) -> bool {
        let adx = dx.unsigned_abs() as i64;
        for t in 1..adx {
            let c = (i as i64 + dx.signum() as i64 * t) as usize;
            let k = self.col_gen[c];
            if k == 0 {
                continue;
            }
            let s = self.quarter(k) as i64;
            let y = j as i64 * adx + dy as i64 * t;
            let r = y.rem_euclid(4 * s * adx);
            if r > s * adx && r < 3 * s * adx {
                return true;
            }
        }
        false
    }

    fn neighbours(&self, u: u32, mut f: impl FnMut(u32, f64)) {
        let src = self.refs[u as usize];
        let m = self.size() as i64;
        let seam_src = src.face.is_none();
        for &(dx, dy, w) in &self.stencil {
            match src.side {
                Some(Side::Left) if dx > 0 => continue,
                Some(Side::Right) if dx < 0 => continue,
                _ => {}
            }
            let (ti, tj) = (src.i as i64 + dx as i64, src.j as i64 + dy as i64);
            if ti < 0 || tj < 0 || ti > m || tj > m {
                continue;
            }
            if self.crosses(src.i, src.j, dx, dy) {
                continue;
            }
            let (ti, tj) = (ti as u32, tj as u32);
            let sides: &[Option<Side>] = if !self.in_slit(ti, tj) {
                &[None]
            } else if dx > 0 {
                &[Some(Side::Left)]
            } else if dx < 0 {
                &[Some(Side::Right)]
            } else if src.side.is_some() {
                std::slice::from_ref(&src.side)
            } else {
                &[Some(Side::Left), Some(Side::Right)]
            };
            let faces: &[Option<Face>] = if !self.double {
                &[None]
            } else if seam_src {
                &[Some(Face::Front), Some(Face::Back)]
            } else {
                std::slice::from_ref(&src.face)
            };
            let mut last = NONE;
            for &s in sides {
                for &fc in faces {
                    if let Some(v) = self.id(ti, tj, s, fc) {
                        if v != last {
                            f(v, w);
                            last = v;
                        }
                    }
                }
            }
        }
    }

    /// Grid distances from `src`; nodes farther than `cutoff` stay infinite.
    pub fn distances(&self, src: u32, cutoff: f64) -> Vec<f64> {
        let mut dist = vec![f64::INFINITY; self.refs.len()];
        let mut heap = BinaryHeap::new();
        dist[src as usize] = 0.0;
        heap.push(Reverse(HeapItem(0.0, src)));
        while let Some(Reverse(HeapItem(d, u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            self.neighbours(u, |v, w| {
                let c = d + w;
                if c <= cutoff && c < dist[v as usize] {
                    dist[v as usize] = c;
                    heap.push(Reverse(HeapItem(c, v)));
                }
            });
        }
        dist
    }
}

/// Grid distances from one source.
#[derive(Debug, Clone)]
pub struct DistanceField {
    pub grid: CutGrid,
    pub source: u32,
    pub dist: Vec<f64>,
}

impl DistanceField {
    pub fn get(&self, p: &CarpetPoint) -> Result<f64> {
        Ok(self.dist[self.grid.node_of(p)? as usize])
    }

    pub fn iter(&self) -> impl Iterator<Item = (NodeRef, f64)> + '_ {
        self.grid
            .refs
            .iter()
            .copied()
            .zip(self.dist.iter().copied())
    }
}

fn field(grid: CutGrid, p: &CarpetPoint, r: f64) -> Result<DistanceField> {
    let source = grid.node_of(p)?;
    let dist = grid.distances(source, r);
    Ok(DistanceField { grid, source, dist })
}

/// Grid distances on `Q̄_n` from `p` up to `r`, spacing `2^-g`.
pub fn ball_distances(n: u32, g: u32, p: &CarpetPoint, r: f64) -> Result<DistanceField> {
    field(CutGrid::new(n, g, default_stencil_radius(g), false)?, p, r)
}

/// Grid distances on the double of `Q̄_n` from `p` up to `r`.
pub fn ball_distances_double(n: u32, g: u32, p: &CarpetPoint, r: f64) -> Result<DistanceField> {
    field(CutGrid::new(n, g, default_stencil_radius(g), true)?, p, r)
}
