use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::carpet::sample::random_point;
use crate::carpet::{slits_up_to, CarpetPoint, Side, Slit};
use crate::error::{Error, Result};
use crate::geodesics::LevelMetric;

/// Level-metric distance from `p` to every slit of the schedule.
///
/// A shortest path to a vertical segment ends at a tip or meets the
/// segment horizontally, and its last bend is `p` or a tip.
fn slit_distances(m: &LevelMetric, p: &CarpetPoint) -> Result<Vec<(Slit, f64)>> {
    let schedule = slits_up_to(m.level());
    let tip_dist = m.tip_distances(p)?;
    let mut nodes: Vec<(CarpetPoint, f64)> = vec![(*p, 0.0)];
    nodes.extend(m.tips().zip(tip_dist.iter().copied()));
    let out = schedule
        .slits()
        .iter()
        .enumerate()
        .map(|(s, slit)| {
            if slit.contains_open(p.x, p.y) {
                return (*slit, 0.0);
            }
            let mut best = tip_dist[2 * s].min(tip_dist[2 * s + 1]);
            for (u, du) in &nodes {
                if *du >= best || u.x == slit.x || u.y <= slit.y_lo || u.y >= slit.y_hi {
                    continue;
                }
                let gap = (u.x - slit.x).abs().to_f64();
                if du + gap >= best {
                    continue;
                }
                let side = if u.x < slit.x {
                    Side::Left
                } else {
                    Side::Right
                };
                let foot = CarpetPoint {
                    x: slit.x,
                    y: u.y,
                    side: Some(side),
                    face: None,
                };
                if m.visible(u, &foot) {
                    best = du + gap;
                }
            }
            (*slit, best)
        })
        .collect();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PorositySample {
    pub p: CarpetPoint,
    pub r: f64,
    /// The best slit meeting `B(p, r)`, if any.
    pub slit: Option<Slit>,
    /// `max(r/diam, diam/r)` for that slit; infinite if none meets the ball.
    pub ratio: f64,
    /// The radius is below the finest slit scale of the level.
    pub flagged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PorosityReport {
    pub level: u32,
    pub samples: Vec<PorositySample>,
    /// Largest ratio over unflagged samples.
    pub worst: f64,
    pub flagged: usize,
}

/// The slit meeting `B(p, r)` whose diameter is closest to `r` in ratio.
pub fn porosity_witness(n: u32, p: &CarpetPoint, r: f64) -> Result<PorositySample> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let m = LevelMetric::shared(n);
    let mut best: Option<(Slit, f64)> = None;
    for (slit, d) in slit_distances(&m, p)? {
        if d >= r {
            continue;
        }
        let diam = slit.length().to_f64();
        let ratio = (r / diam).max(diam / r);
        if best.is_none_or(|b| ratio < b.1) {
            best = Some((slit, ratio));
        }
    }
    Ok(PorositySample {
        p: *p,
        r,
        slit: best.map(|b| b.0),
        ratio: best.map_or(f64::INFINITY, |b| b.1),
        flagged: r < (-(n as f64)).exp2(),
    })
}

pub fn porosity_scan(
    n: u32,
    num_samples: usize,
    radii: &[f64],
    seed: u64,
) -> Result<PorosityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<CarpetPoint> = (0..num_samples)
        .map(|_| random_point(&mut rng, n, n + 4))
        .collect();
    let jobs: Vec<(CarpetPoint, f64)> = points
        .iter()
        .flat_map(|p| radii.iter().map(move |&r| (*p, r)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|(p, r)| porosity_witness(n, p, *r))
        .collect::<Result<Vec<_>>>()?;
    let worst = samples
        .iter()
        .filter(|s| !s.flagged)
        .map(|s| s.ratio)
        .fold(0.0, f64::max);
    let flagged = samples.iter().filter(|s| s.flagged).count();
    Ok(PorosityReport {
        level: n,
        samples,
        worst,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(s: &str) -> CarpetPoint {
        s.parse().unwrap()
    }

    #[test]
    fn on_a_slit_that_slit_is_the_witness() {
        let s = porosity_witness(3, &pt("1/4,1/4,L"), 0.25).unwrap();
        assert_eq!(s.ratio, 1.0);
        assert_eq!(s.slit.unwrap().x, "1/4".parse().unwrap());
    }

    #[test]
    fn half_radius_needs_at_most_eight() {
        let rep = porosity_scan(3, 40, &[0.5], 5).unwrap();
        assert!(rep.worst <= 8.0, "{}", rep.worst);
        assert_eq!(rep.flagged, 0);
    }

    #[test]
    fn tiny_radius_is_flagged() {
        let s = porosity_witness(2, &pt("1/8,1/8"), 0.1).unwrap();
        assert!(s.flagged);
    }

    #[test]
    fn horizontal_feet_are_found() {
        let m = LevelMetric::shared(1);
        let d = slit_distances(&m, &pt("1/4,1/2")).unwrap();
        assert_eq!(d[0].1, 0.25);
    }
}
