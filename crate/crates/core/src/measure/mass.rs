use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carpet::sample::random_point;
use crate::carpet::CarpetPoint;
use crate::error::{Error, Result};
use crate::geodesics::CutGrid;

/// Stencil radius of the mass grids.
const MASS_STENCIL: u32 = 6;

/// A cut grid at spacing `2^-(g+1)` whose odd-odd nodes are the centres of
/// the `2^-g` cells.
#[derive(Debug, Clone)]
pub struct MassGrid {
    grid: CutGrid,
    g: u32,
}

impl MassGrid {
    pub fn new(n: u32, g: u32, double: bool) -> Result<MassGrid> {
        if g <= n {
            return Err(Error::GridMisaligned { level: n, grid: g });
        }
        Ok(MassGrid {
            grid: CutGrid::new(n, g + 1, MASS_STENCIL, double)?,
            g,
        })
    }

    pub fn step(&self) -> f64 {
        (-(self.g as f64)).exp2()
    }

    /// Area of the geodesic ball `B(p, r)`, both copies for the double.
    pub fn mass(&self, p: &CarpetPoint, r: f64) -> Result<f64> {
        if !(r > 0.0) {
            return Err(Error::Domain(format!("radius {r} must be positive")));
        }
        let src = self.grid.node_of(p)?;
        let dist = self.grid.distances(src, r);
        let count = self
            .grid
            .nodes()
            .iter()
            .zip(&dist)
            .filter(|(v, &d)| v.i % 2 == 1 && v.j % 2 == 1 && d < r)
            .count();
        Ok(count as f64 * self.step() * self.step())
    }
}

/// `ℋ²(B(p, r))` on `Q̄_n` by cell counting at step `2^-g`.
pub fn ball_mass(n: u32, p: &CarpetPoint, r: f64, g: u32) -> Result<f64> {
    MassGrid::new(n, g, false)?.mass(p, r)
}

/// As [`ball_mass`] on the double.
pub fn ball_mass_double(n: u32, p: &CarpetPoint, r: f64, g: u32) -> Result<f64> {
    MassGrid::new(n, g, true)?.mass(p, r)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MassSample {
    pub p: CarpetPoint,
    pub r: f64,
    pub mass: f64,
}

/// Ball masses over sampled centres and radii, with the tightest constants
/// satisfying `r²/c_lower <= mass <= c_upper·r²`.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub level: u32,
    pub grid_step: f64,
    pub samples: Vec<MassSample>,
    pub c_upper: f64,
    pub c_lower: f64,
}

impl RegularityReport {
    /// The two-sided constant `max(c_upper, c_lower)`.
    pub fn constant(&self) -> f64 {
        self.c_upper.max(self.c_lower)
    }
}

pub fn ahlfors_scan(
    n: u32,
    num_samples: usize,
    radii: &[f64],
    g: u32,
    seed: u64,
) -> Result<RegularityReport> {
    if radii.iter().any(|&r| !(r > 0.0 && r <= 3.0)) {
        return Err(Error::Domain("radii must lie in (0, 3]".into()));
    }
    let grid = MassGrid::new(n, g, false)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<CarpetPoint> = (0..num_samples)
        .map(|_| random_point(&mut rng, n, g))
        .collect();
    let jobs: Vec<(CarpetPoint, f64)> = points
        .iter()
        .flat_map(|p| radii.iter().map(move |&r| (*p, r)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(p, r)| grid.mass(&p, r).map(|mass| MassSample { p, r, mass }))
        .collect::<Result<Vec<_>>>()?;
    let c_upper = samples
        .iter()
        .map(|s| s.mass / (s.r * s.r))
        .fold(0.0, f64::max);
    let c_lower = samples
        .iter()
        .map(|s| s.r * s.r / s.mass)
        .fold(0.0, f64::max);
    Ok(RegularityReport {
        level: n,
        grid_step: grid.step(),
        samples,
        c_upper,
        c_lower,
    })
}
