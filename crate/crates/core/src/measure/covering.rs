use crate::carpet::{locate, CarpetPoint, Location, Side};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::geodesics::LevelMetric;

/// Every valid point of `Q̄_n` over the position `(x, y)`: one, or one per
/// side inside a slit.
fn lifts(x: Dyadic, y: Dyadic, n: u32) -> Vec<CarpetPoint> {
    match locate(x, y, n) {
        Ok(Location::InSlit(_)) => [Side::Left, Side::Right]
            .iter()
            .map(|&s| CarpetPoint {
                x,
                y,
                side: Some(s),
                face: None,
            })
            .collect(),
        Ok(_) => vec![CarpetPoint::plain(x, y)],
        Err(_) => Vec::new(),
    }
}

/// Nodes of the `2^-e` grid in the unit square within Euclidean distance
/// `< rad` of `(cx, cy)`.
fn disk_nodes(cx: f64, cy: f64, rad: f64, e: u32) -> Vec<(Dyadic, Dyadic)> {
    let m = 1i64 << e;
    let h = 1.0 / m as f64;
    let lo = |c: f64| (((c - rad) / h).floor() as i64).clamp(0, m);
    let hi = |c: f64| (((c + rad) / h).ceil() as i64).clamp(0, m);
    let mut out = Vec::new();
    for i in lo(cx)..=hi(cx) {
        for j in lo(cy)..=hi(cy) {
            let (x, y) = (i as f64 * h, j as f64 * h);
            if (x - cx).hypot(y - cy) < rad {
                out.push((Dyadic::new(i as i128, e), Dyadic::new(j as i128, e)));
            }
        }
    }
    out
}

/// A centre `q` with `B(q, r/12) ⊆ π(B(p, r))`, checked on sample points.
#[derive(Debug, Clone, PartialEq)]
pub struct InclWitness {
    pub q: (Dyadic, Dyadic),
    /// Side of the dyadic subsquare whose centre is `q`.
    pub scale: Dyadic,
    pub checked: usize,
}

/// Finds the witness centre by the subsquare argument and verifies it.
///
/// With `m` least such that `2^m r >= 3`, the `2^-m` subsquare containing
/// `p` (on `p`'s side of a slit) has diameter at most `3·2^-m <= r` and
/// contains the Euclidean disk of radius `r/12` about its centre.
pub fn incl_check(n: u32, p: &CarpetPoint, r: f64, g: u32) -> Result<InclWitness> {
    p.validate(n)?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let mut m = 0u32;
    while r * (m as f64).exp2() < 3.0 {
        m += 1;
    }
    let cells = 1i128 << m;
    let index = |v: Dyadic, side: Option<Side>| -> i128 {
        let s = v.mul_pow2(m as i32);
        let f = s.floor();
        let f = if s.is_integer() && side == Some(Side::Left) {
            f - 1
        } else {
            f
        };
        f.clamp(0, cells - 1)
    };
    let a = index(p.x, p.side);
    let b = index(p.y, None);
    let q = (Dyadic::new(2 * a + 1, m + 1), Dyadic::new(2 * b + 1, m + 1));
    let e = g.min(m + 5).max(m + 2);
    let rad = r / 12.0;
    let mut targets = Vec::new();
    let mut groups = Vec::new();
    for (x, y) in disk_nodes(q.0.to_f64(), q.1.to_f64(), rad, e) {
        let l = lifts(x, y, n);
        groups.push((targets.len(), l.len()));
        targets.extend(l);
    }
    let metric = LevelMetric::shared(n);
    let d = metric.distances_from(p, &targets)?;
    for &(start, len) in &groups {
        let best = d[start..start + len]
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if !(best < r) {
            return Err(Error::Verification(format!(
                "sample {} at distance {best} from {p}, radius {r}",
                targets[start]
            )));
        }
    }
    Ok(InclWitness {
        q,
        scale: Dyadic::pow2_inv(m),
        checked: groups.len(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverReport {
    pub count: usize,
    pub centres: Vec<CarpetPoint>,
    pub sampled: usize,
}

/// Greedy cover of the preimage in `Q̄_n` of the Euclidean disk
/// `B(π(p), r)` by level-metric balls of radius `2r`.
///
/// Sample points are visited by Euclidean distance to `π(p)`; each
/// uncovered one becomes a new centre.
pub fn covering_check(n: u32, p: &CarpetPoint, r: f64) -> Result<CoverReport> {
    p.validate(n)?;
    if !(r > 0.0) {
        return Err(Error::Domain(format!("radius {r} must be positive")));
    }
    let e = ((16.0 / r).log2().ceil().max(0.0) as u32).clamp(n + 1, 10);
    let (px, py) = p.xy();
    let mut pts: Vec<CarpetPoint> = disk_nodes(px, py, r, e)
        .into_iter()
        .flat_map(|(x, y)| lifts(x, y, n))
        .collect();
    pts.sort_by(|a, b| {
        let da = (a.xy().0 - px).hypot(a.xy().1 - py);
        let db = (b.xy().0 - px).hypot(b.xy().1 - py);
        da.total_cmp(&db).then_with(|| a.cmp(b))
    });
    let metric = LevelMetric::shared(n);
    let mut covered = vec![false; pts.len()];
    let mut centres = Vec::new();
    while let Some(c) = covered.iter().position(|&v| !v) {
        let d = metric.distances_from(&pts[c], &pts)?;
        for (flag, dist) in covered.iter_mut().zip(d) {
            if dist < 2.0 * r {
                *flag = true;
            }
        }
        covered[c] = true;
        centres.push(pts[c]);
    }
    Ok(CoverReport {
        count: centres.len(),
        centres,
        sampled: pts.len(),
    })
}

/// Which copies of in-slit nodes a region includes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SideFilter {
    Both,
    Left,
    Right,
}

/// A rectangle of `2^-g` grid nodes, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Region {
    pub g: u32,
    pub i0: u32,
    pub i1: u32,
    pub j0: u32,
    pub j1: u32,
    pub sides: SideFilter,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Comparability {
    pub mass_level: f64,
    pub mass_projected: f64,
    /// `mass_projected / mass_level`.
    pub lower: f64,
    /// `mass_level / mass_projected`.
    pub upper: f64,
}

/// Mass of a region of `Q̄_n` against the mass of its projection to the
/// square. Each node carries its dual cell clipped to the square; in-slit
/// nodes count once per included side.
pub fn measure_comparability(n: u32, region: &Region) -> Result<Comparability> {
    let m = 1u32 << region.g;
    if region.g <= n {
        return Err(Error::GridMisaligned {
            level: n,
            grid: region.g,
        });
    }
    if region.i0 > region.i1 || region.j0 > region.j1 || region.i1 > m || region.j1 > m {
        return Err(Error::Domain("empty or out-of-range region".into()));
    }
    let h = 1.0 / m as f64;
    let w = |k: u32| if k == 0 || k == m { h / 2.0 } else { h };
    let (mut level, mut proj) = (0.0, 0.0);
    for i in region.i0..=region.i1 {
        for j in region.j0..=region.j1 {
            let x = Dyadic::new(i as i128, region.g);
            let y = Dyadic::new(j as i128, region.g);
            let area = w(i) * w(j);
            let mult = match (locate(x, y, n)?, region.sides) {
                (Location::InSlit(_), SideFilter::Both) => 2.0,
                _ => 1.0,
            };
            level += mult * area;
            proj += area;
        }
    }
    Ok(Comparability {
        mass_level: level,
        mass_projected: proj,
        lower: proj / level,
        upper: level / proj,
    })
}
