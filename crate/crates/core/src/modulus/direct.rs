//! Discrete modulus of curve families by cutting planes.
//!
//! The modulus of a family of grid paths is `min Σ c_e ρ_e²` over `ρ >= 0`
//! giving every path `ρ`-length at least 1. Paths are added one at a time,
//! each the current `ρ`-shortest member, and the restricted problem is
//! solved by Hildreth's coordinate ascent on its dual.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::laplace::{conductance, Direction};
use super::network::Network;
use crate::error::{Error, Result};

/// Stop once the shortest `ρ`-length reaches `1 - STOP_TOL`.
pub const STOP_TOL: f64 = 1e-3;
const MAX_PATHS: usize = 20_000;
const MAX_SWEEPS: usize = 50_000;
const SWEEP_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CurveFamilySpec {
    /// Paths joining the left and right sides.
    ConnectLR,
    /// Paths joining the bottom and top sides.
    ConnectTB,
    /// Bottom-to-top paths made of vertical edges only.
    VerticalOnly,
    /// Paths along which `x` varies by at least `1/k`.
    Oscillation(u32),
}

impl std::fmt::Display for CurveFamilySpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CurveFamilySpec::ConnectLR => write!(f, "connect-L-R"),
            CurveFamilySpec::ConnectTB => write!(f, "connect-T-B"),
            CurveFamilySpec::VerticalOnly => write!(f, "vertical-only"),
            CurveFamilySpec::Oscillation(k) => write!(f, "oscillation-{k}"),
        }
    }
}

impl std::str::FromStr for CurveFamilySpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<CurveFamilySpec> {
        match s {
            "connect-L-R" | "LR" => Ok(CurveFamilySpec::ConnectLR),
            "connect-T-B" | "TB" => Ok(CurveFamilySpec::ConnectTB),
            "vertical-only" | "vertical" => Ok(CurveFamilySpec::VerticalOnly),
            _ => s
                .strip_prefix("oscillation-")
                .and_then(|k| k.parse().ok())
                .filter(|&k: &u32| k > 0)
                .map(CurveFamilySpec::Oscillation)
                .ok_or_else(|| Error::Parse(format!("unknown curve family {s:?}"))),
        }
    }
}

/// Bounds from the cutting-plane solve.
#[derive(Debug, Clone, PartialEq)]
pub struct ModulusEstimate {
    /// `Σ c ρ²` of the restricted optimum; a lower bound.
    pub lower: f64,
    /// The same `ρ` scaled to be admissible for the whole family; an upper
    /// bound.
    pub upper: f64,
    pub paths: usize,
}

struct Searcher<'a> {
    net: &'a Network,
    vertical_only: bool,
}

impl Searcher<'_> {
    /// `ρ`-shortest path from any source to any target, as edge indices.
    fn shortest(
        &self,
        rho: &[f64],
        sources: &[u32],
        is_target: &[bool],
    ) -> Option<(f64, Vec<u32>)> {
        let nn = self.net.nodes().len();
        let mut dist = vec![f64::INFINITY; nn];
        let mut via = vec![u32::MAX; nn];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s as usize] = 0.0;
            heap.push(Reverse((Key(0.0), s)));
        }
        while let Some(Reverse((Key(d), u))) = heap.pop() {
            if d > dist[u as usize] {
                continue;
            }
            if is_target[u as usize] {
                let mut path = Vec::new();
                let mut cur = u;
                while via[cur as usize] != u32::MAX {
                    let e = via[cur as usize];
                    path.push(e);
                    cur = self.net.other(e, cur);
                }
                return Some((d, path));
            }
            for &e in self.net.incident(u) {
                if self.vertical_only && !self.net.edges()[e as usize].vertical {
                    continue;
                }
                let v = self.net.other(e, u);
                let c = d + rho[e as usize];
                if c < dist[v as usize] {
                    dist[v as usize] = c;
                    via[v as usize] = e;
                    heap.push(Reverse((Key(c), v)));
                }
            }
        }
        None
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key(f64);
impl Eq for Key {}
impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Key {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&o.0)
    }
}

fn column(net: &Network, i: u32) -> Vec<u32> {
    (0..net.nodes().len() as u32)
        .filter(|&v| net.nodes()[v as usize].i == i)
        .collect()
}

fn row(net: &Network, j: u32) -> Vec<u32> {
    (0..net.nodes().len() as u32)
        .filter(|&v| net.nodes()[v as usize].j == j)
        .collect()
}

fn mask(net: &Network, set: &[u32]) -> Vec<bool> {
    let mut m = vec![false; net.nodes().len()];
    for &v in set {
        m[v as usize] = true;
    }
    m
}

/// The family's `ρ`-shortest member.
fn family_shortest(net: &Network, family: CurveFamilySpec, rho: &[f64]) -> Option<(f64, Vec<u32>)> {
    let m = net.size();
    let s = Searcher {
        net,
        vertical_only: family == CurveFamilySpec::VerticalOnly,
    };
    match family {
        CurveFamilySpec::ConnectLR => s.shortest(rho, &column(net, 0), &mask(net, &column(net, m))),
        CurveFamilySpec::ConnectTB | CurveFamilySpec::VerticalOnly => {
            s.shortest(rho, &row(net, 0), &mask(net, &row(net, m)))
        }
        CurveFamilySpec::Oscillation(k) => {
            let w = m.div_ceil(k);
            (0..=m - w)
                .filter_map(|a| s.shortest(rho, &column(net, a), &mask(net, &column(net, a + w))))
                .min_by(|x, y| x.0.total_cmp(&y.0))
        }
    }
}

/// Discrete modulus of `family` on the level-`n` network at step `2^-g`.
pub fn modulus_direct(family: CurveFamilySpec, n: u32, g: u32) -> Result<ModulusEstimate> {
    let net = Network::new(n, g)?;
    if net.nodes().len() > 20_000 {
        return Err(Error::Domain(format!(
            "grid 2^-{g} too large for the direct solve"
        )));
    }
    if let CurveFamilySpec::Oscillation(k) = family {
        if k == 0 {
            return Err(Error::Domain("oscillation index must be positive".into()));
        }
    }
    let c: Vec<f64> = net.edges().iter().map(|e| e.c).collect();
    let mut rho = vec![0.0; c.len()];
    let mut paths: Vec<(Vec<u32>, f64, f64)> = Vec::new();
    loop {
        let (len, path) = family_shortest(&net, family, &rho)
            .ok_or_else(|| Error::Domain(format!("family {family} is empty on this grid")))?;
        if len >= 1.0 - STOP_TOL {
            let lower: f64 = c.iter().zip(&rho).map(|(c, r)| c * r * r).sum();
            return Ok(ModulusEstimate {
                lower,
                upper: lower / (len * len),
                paths: paths.len(),
            });
        }
        if paths.len() >= MAX_PATHS {
            return Err(Error::NotConverged {
                iterations: paths.len(),
                residual: 1.0 - len,
            });
        }
        let inv: f64 = path.iter().map(|&e| 1.0 / c[e as usize]).sum();
        paths.push((path, inv, 0.0));
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut change: f64 = 0.0;
            for (path, inv, lambda) in paths.iter_mut() {
                let len: f64 = path.iter().map(|&e| rho[e as usize]).sum();
                let next = (*lambda + (1.0 - len) / *inv).max(0.0);
                let step = next - *lambda;
                if step != 0.0 {
                    for &e in path.iter() {
                        rho[e as usize] = (rho[e as usize] + step / c[e as usize]).max(0.0);
                    }
                    *lambda = next;
                }
                change = change.max(step.abs() * *inv);
            }
            if change < SWEEP_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NotConverged {
                iterations: MAX_SWEEPS,
                residual: f64::NAN,
            });
        }
    }
}

/// Least `m` with `2^m > 2k`.
pub fn tiling_exponent(k: u32) -> u32 {
    let mut m = 0;
    while (1u64 << m) <= 2 * k as u64 {
        m += 1;
    }
    m
}

/// `4^m · conductance(n, g, LR)` with `m` least such that `2^m > 2k`: the
/// mass of the rescaled extremal potential tiled over the `2^-m` squares
/// at level `n + m`, which is admissible for paths of oscillation `>= 1/k`.
pub fn modulus_upper_nonvertical(k: u32, n: u32, g: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::Domain("oscillation index must be positive".into()));
    }
    let m = tiling_exponent(k);
    Ok((4f64).powi(m as i32) * conductance(n, g, Direction::LR)?)
}

/// Bounds on the modulus of the vertical family: `1 - s/M` from the
/// slit-free columns alone, and 1 from `ρ` constant along columns.
pub fn vertical_family_bounds(n: u32, g: u32) -> Result<(f64, f64)> {
    let net = Network::new(n, g)?;
    let lower = 1.0 - net.slit_columns() as f64 / net.size() as f64;
    Ok((lower, 1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_bottom_is_one() {
        let e = modulus_direct(CurveFamilySpec::ConnectTB, 1, 3).unwrap();
        assert!(e.lower <= e.upper);
        assert!((e.upper - 1.0).abs() < 5e-2, "{e:?}");
    }

    #[test]
    fn left_right_matches_conductance() {
        let e = modulus_direct(CurveFamilySpec::ConnectLR, 1, 3).unwrap();
        let c = conductance(1, 3, Direction::LR).unwrap();
        assert!(e.lower <= c + 1e-6 && c <= e.upper + 1e-6, "{e:?} vs {c}");
        assert!((e.upper - c).abs() < 5e-2);
    }

    #[test]
    fn vertical_only_equals_connecting() {
        let v = modulus_direct(CurveFamilySpec::VerticalOnly, 1, 3).unwrap();
        let t = modulus_direct(CurveFamilySpec::ConnectTB, 1, 3).unwrap();
        assert!((v.upper - t.upper).abs() < 5e-2);
    }

    #[test]
    fn tiling_exponents() {
        assert_eq!(tiling_exponent(1), 2);
        assert_eq!(tiling_exponent(2), 3);
        assert_eq!(tiling_exponent(3), 3);
        assert_eq!(modulus_upper_nonvertical(1, 0, 3).unwrap(), 16.0);
    }

    #[test]
    fn vertical_bounds_at_level_zero() {
        assert_eq!(vertical_family_bounds(0, 4).unwrap(), (1.0, 1.0));
        let (lo, hi) = vertical_family_bounds(2, 4).unwrap();
        assert_eq!(lo, 1.0 - 3.0 / 16.0);
        assert_eq!(hi, 1.0);
    }

    #[test]
    fn family_names_round_trip() {
        for f in [
            CurveFamilySpec::ConnectLR,
            CurveFamilySpec::ConnectTB,
            CurveFamilySpec::VerticalOnly,
            CurveFamilySpec::Oscillation(3),
        ] {
            assert_eq!(f.to_string().parse::<CurveFamilySpec>().unwrap(), f);
        }
    }
}
