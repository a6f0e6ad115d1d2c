//! The five-point resistor network on the cut grid.
//!
//! Every grid node is a vertex; nodes strictly inside a slit are split into
//! a left and a right copy. Horizontal edges leave a slit column from the
//! copy on their side. Each node carries its dual cell, so edges on the
//! outer square and the two vertical edges along a slit have conductance
//! 1/2.

use crate::carpet::Side;
use crate::error::{Error, Result};
use crate::geodesics::NodeRef;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub c: f64,
    pub vertical: bool,
}

#[derive(Debug, Clone)]
pub struct Network {
    level: u32,
    g: u32,
    right: Vec<Vec<u32>>,
    nodes: Vec<NodeRef>,
    edges: Vec<Edge>,
    offsets: Vec<usize>,
    incident: Vec<u32>,
}

impl Network {
    pub fn new(level: u32, g: u32) -> Result<Network> {
        if g <= level {
            return Err(Error::GridMisaligned { level, grid: g });
        }
        if g > 13 {
            return Err(Error::Domain(format!("grid exponent {g} exceeds 13")));
        }
        let m = 1u32 << g;
        let mut nodes = Vec::with_capacity((m as usize + 1).pow(2));
        for i in 0..=m {
            for j in 0..=m {
                nodes.push(NodeRef {
                    i,
                    j,
                    side: None,
                    face: None,
                });
            }
        }
        let mut net = Network {
            level,
            g,
            right: vec![Vec::new(); m as usize + 1],
            nodes,
            edges: Vec::new(),
            offsets: Vec::new(),
            incident: Vec::new(),
        };
        for i in 1..m {
            if net.column_generation(i) == 0 {
                continue;
            }
            let mut col = vec![NONE; m as usize + 1];
            for j in 0..=m {
                if net.in_slit(i, j) {
                    let b = net.base(i, j) as usize;
                    net.nodes[b].side = Some(Side::Left);
                    col[j as usize] = net.nodes.len() as u32;
                    net.nodes.push(NodeRef {
                        i,
                        j,
                        side: Some(Side::Right),
                        face: None,
                    });
                }
            }
            net.right[i as usize] = col;
        }
        let mut edges = Vec::with_capacity(2 * net.nodes.len());
        for i in 0..m {
            for j in 0..=m {
                let c = if j == 0 || j == m { 0.5 } else { 1.0 };
                edges.push(Edge {
                    a: net.id(i, j, Some(Side::Right)),
                    b: net.id(i + 1, j, Some(Side::Left)),
                    c,
                    vertical: false,
                });
            }
        }
        for i in 0..=m {
            let cb = if i == 0 || i == m { 0.5 } else { 1.0 };
            for j in 0..m {
                if net.in_slit(i, j) || net.in_slit(i, j + 1) {
                    for s in [Side::Left, Side::Right] {
                        edges.push(Edge {
                            a: net.id(i, j, Some(s)),
                            b: net.id(i, j + 1, Some(s)),
                            c: 0.5,
                            vertical: true,
                        });
                    }
                } else {
                    edges.push(Edge {
                        a: net.base(i, j),
                        b: net.base(i, j + 1),
                        c: cb,
                        vertical: true,
                    });
                }
            }
        }
        let mut degree = vec![0usize; net.nodes.len() + 1];
        for e in &edges {
            degree[e.a as usize + 1] += 1;
            degree[e.b as usize + 1] += 1;
        }
        for k in 1..degree.len() {
            degree[k] += degree[k - 1];
        }
        let mut fill = degree.clone();
        let mut incident = vec![0u32; 2 * edges.len()];
        for (k, e) in edges.iter().enumerate() {
            for v in [e.a, e.b] {
                incident[fill[v as usize]] = k as u32;
                fill[v as usize] += 1;
            }
        }
        net.edges = edges;
        net.offsets = degree;
        net.incident = incident;
        Ok(net)
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

    pub fn nodes(&self) -> &[NodeRef] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Edge indices incident to node `v`.
    pub fn incident(&self, v: u32) -> &[u32] {
        &self.incident[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn other(&self, e: u32, v: u32) -> u32 {
        let e = &self.edges[e as usize];
        if e.a == v {
            e.b
        } else {
            e.a
        }
    }

    pub fn column_generation(&self, i: u32) -> u32 {
        if i == 0 || i >= self.size() {
            return 0;
        }
        let k = self.g - i.trailing_zeros();
        if k <= self.level {
            k
        } else {
            0
        }
    }

    pub fn in_slit(&self, i: u32, j: u32) -> bool {
        let k = self.column_generation(i);
        if k == 0 {
            return false;
        }
        let s = 1u64 << (self.g - k - 1);
        let r = j as u64 % (4 * s);
        r > s && r < 3 * s
    }

    fn base(&self, i: u32, j: u32) -> u32 {
        i * (self.size() + 1) + j
    }

    /// Node id at `(i, j)`; the side selects the copy inside a slit and is
    /// ignored elsewhere.
    pub fn id(&self, i: u32, j: u32, side: Option<Side>) -> u32 {
        if side == Some(Side::Right) {
            if let Some(&r) = self.right[i as usize].get(j as usize) {
                if r != NONE {
                    return r;
                }
            }
        }
        self.base(i, j)
    }

    /// Number of columns carrying a slit.
    pub fn slit_columns(&self) -> u32 {
        (1..self.size())
            .filter(|&i| self.column_generation(i) > 0)
            .count() as u32
    }
}
