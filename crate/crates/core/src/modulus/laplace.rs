//! Dirichlet problems on the resistor network, solved by flexible CG with
//! an aggregation multigrid preconditioner.

use std::fmt::Write as _;

use rayon::prelude::*;

use super::amg::{dot, Hierarchy, Matrix, CHUNK};
use super::network::Network;
use crate::carpet::Side;
use crate::error::{Error, Result};
use crate::geodesics::NodeRef;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 1_000_000;

/// Dirichlet values on the four sides of the square; `None` is insulated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySpec {
    pub left: Option<f64>,
    pub right: Option<f64>,
    pub bottom: Option<f64>,
    pub top: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// Left side at 0, right side at 1.
    LR,
    /// Bottom side at 0, top side at 1.
    TB,
}

impl Direction {
    pub fn boundary(self) -> BoundarySpec {
        match self {
            Direction::LR => BoundarySpec {
                left: Some(0.0),
                right: Some(1.0),
                bottom: None,
                top: None,
            },
            Direction::TB => BoundarySpec {
                left: None,
                right: None,
                bottom: Some(0.0),
                top: Some(1.0),
            },
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::LR => "LR",
            Direction::TB => "TB",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Direction> {
        match s.to_ascii_uppercase().as_str() {
            "LR" => Ok(Direction::LR),
            "TB" => Ok(Direction::TB),
            _ => Err(Error::Parse(format!(
                "direction must be LR or TB, got {s:?}"
            ))),
        }
    }
}

impl BoundarySpec {
    fn value(&self, v: &NodeRef, m: u32) -> Result<Option<f64>> {
        let mut out: Option<f64> = None;
        for (on, val) in [
            (v.i == 0, self.left),
            (v.i == m, self.right),
            (v.j == 0, self.bottom),
            (v.j == m, self.top),
        ] {
            if let (true, Some(x)) = (on, val) {
                match out {
                    Some(y) if y != x => {
                        return Err(Error::Domain(format!(
                            "conflicting boundary values at ({}, {})",
                            v.i, v.j
                        )))
                    }
                    _ => out = Some(x),
                }
            }
        }
        Ok(out)
    }

    /// The harmonic extension for the two standard problems, used as the
    /// starting guess.
    fn guess(&self, v: &NodeRef, m: u32) -> f64 {
        let t = |k: u32| k as f64 / m as f64;
        match (self.left, self.right, self.bottom, self.top) {
            (Some(a), Some(b), None, None) => a + (b - a) * t(v.i),
            (None, None, Some(a), Some(b)) => a + (b - a) * t(v.j),
            _ => 0.0,
        }
    }
}

/// A solved potential.
#[derive(Debug, Clone)]
pub struct GridField {
    pub level: u32,
    pub g: u32,
    pub boundary: BoundarySpec,
    pub nodes: Vec<NodeRef>,
    pub values: Vec<f64>,
    /// Dirichlet energy `Σ c_e (Δu)²`.
    pub energy: f64,
    /// Current leaving the nodes held at the largest boundary value.
    pub flux: f64,
    /// Final relative residual.
    pub residual: f64,
    pub iterations: usize,
}

impl GridField {
    /// One node per line: `x y side value`, side `-` off the slits.
    pub fn dump(&self) -> String {
        let h = 1.0 / (1u64 << self.g) as f64;
        let mut out = String::new();
        for (v, u) in self.nodes.iter().zip(&self.values) {
            let side = v.side.map(Side::as_str).unwrap_or("-");
            let _ = writeln!(
                out,
                "{} {} {} {:.12}",
                v.i as f64 * h,
                v.j as f64 * h,
                side,
                u
            );
        }
        out
    }
}

struct System {
    free: Vec<u32>,
    a: Matrix,
    rhs: Vec<f64>,
}

fn assemble(net: &Network, fixed: &[Option<f64>]) -> System {
    let mut index = vec![u32::MAX; net.nodes().len()];
    let free: Vec<u32> = (0..net.nodes().len() as u32)
        .filter(|&v| fixed[v as usize].is_none())
        .collect();
    for (k, &v) in free.iter().enumerate() {
        index[v as usize] = k as u32;
    }
    let mut diag = vec![0.0; free.len()];
    let mut rhs = vec![0.0; free.len()];
    let mut row_ptr = vec![0usize; free.len() + 1];
    let mut cols = Vec::new();
    let mut vals = Vec::new();
    for (r, &v) in free.iter().enumerate() {
        for &e in net.incident(v) {
            let c = net.edges()[e as usize].c;
            let w = net.other(e, v);
            diag[r] += c;
            match fixed[w as usize] {
                Some(val) => rhs[r] += c * val,
                None => {
                    cols.push(index[w as usize]);
                    vals.push(c);
                }
            }
        }
        row_ptr[r + 1] = cols.len();
    }
    System {
        free,
        a: Matrix {
            diag,
            row_ptr,
            cols,
            vals,
        },
        rhs,
    }
}

/// Solves the discrete Laplace equation with the given Dirichlet data.
pub fn laplace_solve(n: u32, g: u32, boundary: &BoundarySpec, tol: f64) -> Result<GridField> {
    laplace_solve_on(&Network::new(n, g)?, boundary, tol)
}

pub fn laplace_solve_on(net: &Network, boundary: &BoundarySpec, tol: f64) -> Result<GridField> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance {tol} must be positive")));
    }
    let m = net.size();
    let fixed = net
        .nodes()
        .iter()
        .map(|v| boundary.value(v, m))
        .collect::<Result<Vec<_>>>()?;
    if fixed.iter().all(Option::is_none) {
        return Err(Error::Domain("no Dirichlet side".into()));
    }
    let sys = assemble(net, &fixed);
    let mut x: Vec<f64> = sys
        .free
        .iter()
        .map(|&v| boundary.guess(&net.nodes()[v as usize], m))
        .collect();
    let (rel, it) = fcg(&sys, &mut x, tol)?;
    let mut values: Vec<f64> = fixed.iter().map(|f| f.unwrap_or(0.0)).collect();
    for (k, &v) in sys.free.iter().enumerate() {
        values[v as usize] = x[k];
    }
    let energy = energy_of(net, &values);
    let top = fixed
        .iter()
        .flatten()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max);
    let low = fixed
        .iter()
        .flatten()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let mut flux = 0.0;
    for (v, f) in fixed.iter().enumerate() {
        if *f == Some(top) {
            for &e in net.incident(v as u32) {
                let w = net.other(e, v as u32);
                flux += net.edges()[e as usize].c * (values[v] - values[w as usize]);
            }
        }
    }
    // Energy is Σ u·outflow over fixed nodes; the two sides carry opposite
    // currents.
    let flux = flux * (top - low);
    Ok(GridField {
        level: net.level(),
        g: net.g(),
        boundary: *boundary,
        nodes: net.nodes().to_vec(),
        values,
        energy,
        flux,
        residual: rel,
        iterations: it,
    })
}

/// Flexible CG with one step of truncation, preconditioned by the
/// multigrid K-cycle. Returns the relative residual and iteration count.
fn fcg(sys: &System, x: &mut [f64], tol: f64) -> Result<(f64, usize)> {
    let nf = x.len();
    let mut r = vec![0.0; nf];
    sys.a.apply(x, &mut r);
    r.par_iter_mut()
        .zip(&sys.rhs)
        .for_each(|(ri, bi)| *ri = bi - *ri);
    let bnorm = dot(&sys.rhs, &sys.rhs).sqrt().max(f64::MIN_POSITIVE);
    let mut rel = dot(&r, &r).sqrt() / bnorm;
    if rel < tol {
        return Ok((rel, 0));
    }
    let pre = Hierarchy::new(&sys.a);
    let mut p = vec![0.0; nf];
    let mut q = vec![0.0; nf];
    let mut pq = 0.0;
    let mut it = 0;
    while rel >= tol {
        if it >= MAX_ITERATIONS {
            return Err(Error::NotConverged {
                iterations: it,
                residual: rel,
            });
        }
        let z = pre.cycle(&sys.a, 0, &r);
        if it == 0 {
            p.copy_from_slice(&z);
        } else {
            let beta = -dot(&z, &q) / pq;
            p.par_iter_mut()
                .zip(&z)
                .for_each(|(pi, zi)| *pi = zi + beta * *pi);
        }
        sys.a.apply(&p, &mut q);
        pq = dot(&p, &q);
        let alpha = dot(&p, &r) / pq;
        x.par_iter_mut()
            .zip(&p)
            .for_each(|(xi, pi)| *xi += alpha * pi);
        r.par_iter_mut()
            .zip(&q)
            .for_each(|(ri, qi)| *ri -= alpha * qi);
        rel = dot(&r, &r).sqrt() / bnorm;
        it += 1;
    }
    Ok((rel, it))
}

pub fn energy_of(net: &Network, values: &[f64]) -> f64 {
    let parts: Vec<f64> = net
        .edges()
        .par_chunks(CHUNK)
        .map(|es| {
            es.iter()
                .map(|e| e.c * (values[e.a as usize] - values[e.b as usize]).powi(2))
                .sum()
        })
        .collect();
    parts.iter().sum()
}

/// Largest absolute Kirchhoff residual of `values` at nodes not fixed by
/// `boundary`.
pub fn max_residual(net: &Network, boundary: &BoundarySpec, values: &[f64]) -> Result<f64> {
    let m = net.size();
    let mut worst: f64 = 0.0;
    for (v, node) in net.nodes().iter().enumerate() {
        if boundary.value(node, m)?.is_some() {
            continue;
        }
        let mut s = 0.0;
        for &e in net.incident(v as u32) {
            let w = net.other(e, v as u32);
            s += net.edges()[e as usize].c * (values[v] - values[w as usize]);
        }
        worst = worst.max(s.abs());
    }
    Ok(worst)
}

/// Effective conductance between the two Dirichlet sides.
pub fn conductance(n: u32, g: u32, direction: Direction) -> Result<f64> {
    Ok(laplace_solve(n, g, &direction.boundary(), DEFAULT_TOL)?.energy)
}
