//! Checks of group elements against the geometry of the double.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::group::{qs_apply, Ambient, IsometryElement, QSElement};
use super::lfunction::{h_epsilon, l_neg};
use crate::carpet::sample::random_double_point;
use crate::carpet::{slits_up_to, unfold, CarpetPoint, Face, Side, Slit};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::geodesics::{DoubleMetric, Polyline};

/// An abscissa in `(0, 1)`, dyadic or not.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Abscissa {
    Dyadic(Dyadic),
    NonDyadic,
}

/// Parses `k/2^m`, `p/q` and decimals; anything with a non-dyadic reduced
/// denominator is `NonDyadic`.
impl FromStr for Abscissa {
    type Err = Error;

    fn from_str(s: &str) -> Result<Abscissa> {
        if let Ok(d) = s.parse::<Dyadic>() {
            return Ok(Abscissa::Dyadic(d));
        }
        let bad = || Error::Parse(format!("not a rational abscissa: {s:?}"));
        let (num, den): (i128, i128) = if let Some((a, b)) = s.split_once('/') {
            (
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            )
        } else if let Some((a, b)) = s.split_once('.') {
            let k = b.len() as u32;
            let den = 10i128.checked_pow(k).ok_or_else(bad)?;
            let whole: i128 = if a.is_empty() {
                0
            } else {
                a.parse().map_err(|_| bad())?
            };
            (whole * den + b.parse::<i128>().map_err(|_| bad())?, den)
        } else {
            return Err(bad());
        };
        if den <= 0 || num <= 0 || num >= den {
            return Err(Error::Domain(format!("abscissa {s} outside (0, 1)")));
        }
        Ok(Abscissa::NonDyadic)
    }
}

/// The closed vertical curves of the double over one abscissa.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerticalCurveSignature {
    pub x: Abscissa,
    /// Slit generation of the abscissa; 0 if no slit lies over it.
    pub generation: u32,
    pub slits_per_copy: u64,
    pub slit_diameter: Dyadic,
    /// `log2` of the number of curves, one side choice per slit met.
    pub curve_count_log2: u64,
}

impl VerticalCurveSignature {
    pub fn curve_count(&self) -> Option<u128> {
        (self.curve_count_log2 < 128).then(|| 1u128 << self.curve_count_log2)
    }
}

impl fmt::Display for VerticalCurveSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let x = match self.x {
            Abscissa::Dyadic(d) => d.to_string(),
            Abscissa::NonDyadic => "non-dyadic".into(),
        };
        let count = self
            .curve_count()
            .map(|c| c.to_string())
            .unwrap_or_else(|| format!("2^{}", self.curve_count_log2));
        write!(
            f,
            "x={x} generation={} slits_per_copy={} slit_diameter={} curves={count}",
            self.generation, self.slits_per_copy, self.slit_diameter
        )
    }
}

pub fn vertical_curve_signature(x: Abscissa) -> Result<VerticalCurveSignature> {
    let none = VerticalCurveSignature {
        x,
        generation: 0,
        slits_per_copy: 0,
        slit_diameter: Dyadic::ZERO,
        curve_count_log2: 0,
    };
    let d = match x {
        Abscissa::NonDyadic => return Ok(none),
        Abscissa::Dyadic(d) => d,
    };
    if d <= Dyadic::ZERO || d >= Dyadic::ONE {
        return Err(Error::Domain(format!(
            "{d} lies on L or R, which bound no closed vertical curve"
        )));
    }
    let n = d.exponent();
    if n > 62 {
        return Err(Error::Domain(format!("generation {n} exceeds 62")));
    }
    Ok(VerticalCurveSignature {
        x,
        generation: n,
        slits_per_copy: 1 << (n - 1),
        slit_diameter: Dyadic::pow2_inv(n),
        curve_count_log2: 1 << n,
    })
}

/// The slits over `x` at `level`, bottom to top.
fn slits_over(x: Dyadic, level: u32) -> Vec<Slit> {
    let k = x.exponent();
    if k == 0 || k > level {
        return Vec::new();
    }
    slits_up_to(k)
        .generation(k)
        .filter(|s| s.x == x)
        .copied()
        .collect()
}

/// Side choices of the closed vertical curves over `x` at `level`: front
/// slits bottom to top, then back slits top to bottom.
pub fn enumerate_closed_vertical_curves(x: Abscissa, level: u32) -> Result<Vec<Vec<Side>>> {
    let d = match x {
        Abscissa::NonDyadic => return Ok(vec![Vec::new()]),
        Abscissa::Dyadic(d) => d,
    };
    vertical_curve_signature(x)?;
    let met = 2 * slits_over(d, level).len();
    if met > 16 {
        return Err(Error::Domain(format!(
            "{met} slits met; enumeration is limited to 16"
        )));
    }
    Ok((0..1u32 << met)
        .map(|bits| {
            (0..met)
                .map(|b| {
                    if bits >> b & 1 == 1 {
                        Side::Right
                    } else {
                        Side::Left
                    }
                })
                .collect()
        })
        .collect())
}

/// Vertices of one closed vertical curve over `x`: up the front copy and
/// down the back, sampled at spacing `2^-e`, with the given side choices.
pub fn closed_vertical_curve(x: Dyadic, level: u32, sides: &[Side], e: u32) -> Result<Polyline> {
    let slits = slits_over(x, level);
    if sides.len() != 2 * slits.len() {
        return Err(Error::Domain(format!(
            "expected {} side choices, got {}",
            2 * slits.len(),
            sides.len()
        )));
    }
    let e = e.max(x.exponent() + 1);
    let m = 1i128 << e;
    let side_at = |y: Dyadic, face: Face| -> Option<Side> {
        let idx = slits.iter().position(|s| s.contains_open(x, y))?;
        Some(match face {
            Face::Front => sides[idx],
            Face::Back => sides[2 * slits.len() - 1 - idx],
        })
    };
    let mut vertices = Vec::new();
    for j in 0..=m {
        let y = Dyadic::new(j, e);
        vertices.push(
            CarpetPoint {
                x,
                y,
                side: side_at(y, Face::Front),
                face: None,
            }
            .with_face(Some(Face::Front)),
        );
    }
    for j in (0..m).rev() {
        let y = Dyadic::new(j, e);
        vertices.push(
            CarpetPoint {
                x,
                y,
                side: side_at(y, Face::Back),
                face: None,
            }
            .with_face(Some(Face::Back)),
        );
    }
    let length = 2.0;
    Ok(Polyline { vertices, length })
}

/// Seeded sample of closed vertical curves at `level`.
pub fn sample_vertical_curves(level: u32, count: usize, seed: u64) -> Vec<Polyline> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let e = rng.gen_range(1..=level.max(1) + 2);
            let x = Dyadic::new(2 * rng.gen_range(0..1i128 << (e - 1)) + 1, e);
            let met = 2 * slits_over(x, level).len();
            let sides: Vec<Side> = (0..met)
                .map(|_| if rng.gen() { Side::Left } else { Side::Right })
                .collect();
            closed_vertical_curve(x, level, &sides, level + 3).expect("side count matches")
        })
        .collect()
}

/// Whether `g` maps each sampled vertical curve onto a vertical curve.
pub fn verttovert_check(g: &QSElement, curves: &[Polyline]) -> Result<bool> {
    for c in curves {
        let mut xs = HashSet::new();
        for v in &c.vertices {
            xs.insert(qs_apply(g, v)?.x);
        }
        if xs.len() != 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Position of a point on its closed vertical curve: the strip coordinate
/// modulo 2.
fn curve_position(p: &CarpetPoint) -> Dyadic {
    let sheet = if p.face == Some(Face::Back) { 1 } else { 0 };
    unfold(p, sheet)
        .expect("sheet parity matches the face")
        .y
        .rem_pow2(1)
}

/// Whether `g` moves consecutive vertices of the curve by the same signed
/// arc length (orientation preserving) or by its negative.
pub fn rotation_check(g: &QSElement, curve: &Polyline) -> Result<(bool, bool)> {
    let two = Dyadic::from_int(2);
    let wrap = |d: Dyadic| {
        let r = d.rem_pow2(1);
        if r > Dyadic::ONE {
            r - two
        } else {
            r
        }
    };
    let (mut preserved, mut reversed) = (true, true);
    for w in curve.vertices.windows(2) {
        let before = wrap(curve_position(&w[1]) - curve_position(&w[0]));
        let (a, b) = (qs_apply(g, &w[0])?, qs_apply(g, &w[1])?);
        let after = wrap(curve_position(&b) - curve_position(&a));
        preserved &= after == before;
        reversed &= after == -before;
    }
    Ok((preserved, reversed))
}

/// The level-`level` slits of both copies.
fn double_slits(level: u32) -> Vec<(Slit, Face)> {
    slits_up_to(level)
        .slits()
        .iter()
        .flat_map(|s| [(*s, Face::Front), (*s, Face::Back)])
        .collect()
}

/// Whether `g` permutes the level-`level` slits of the double, each onto a
/// slit of the same generation, found by transporting the two tips and a
/// side point.
pub fn cohopf_check(g: &QSElement, level: u32) -> Result<bool> {
    let schedule = slits_up_to(level);
    let slits = double_slits(level);
    let mut images = HashSet::new();
    for (s, face) in &slits {
        let tip = |y: Dyadic| CarpetPoint {
            x: s.x,
            y,
            side: None,
            face: Some(*face),
        };
        let a = qs_apply(g, &tip(s.y_lo))?;
        let b = qs_apply(g, &tip(s.y_hi))?;
        let mid = qs_apply(
            g,
            &CarpetPoint {
                x: s.x,
                y: s.midpoint_y(),
                side: Some(Side::Left),
                face: Some(*face),
            },
        )?;
        if a.x != b.x || a.face != b.face || a.face.is_none() {
            return Ok(false);
        }
        let (lo, hi) = (a.y.min(b.y), a.y.max(b.y));
        let target = match schedule.find_by_tips(a.x, lo, hi) {
            Some(t) if t.generation == s.generation => t,
            _ => return Ok(false),
        };
        if mid.face != a.face || !target.contains_open(mid.x, mid.y) || mid.side.is_none() {
            return Ok(false);
        }
        if !images.insert((target, a.face)) {
            return Ok(false);
        }
    }
    Ok(images.len() == slits.len())
}

/// Extreme distance ratios `d(gp, gq) / d(p, q)` over seeded random pairs
/// of the double at `level`.
pub fn bilipschitz_estimate(
    g: &QSElement,
    level: u32,
    num_pairs: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    let metric = DoubleMetric::shared(level);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(CarpetPoint, CarpetPoint)> = (0..num_pairs)
        .map(|_| loop {
            let p = random_double_point(&mut rng, level, level + 3);
            let q = random_double_point(&mut rng, level, level + 3);
            if p != q {
                break (p, q);
            }
        })
        .collect();
    let ratios = pairs
        .par_iter()
        .map(|(p, q)| {
            let d = metric.distances_from(p, &[*q])?[0];
            let (gp, gq) = (qs_apply(g, p)?, qs_apply(g, q)?);
            let dg = metric.distances_from(&gp, &[gq])?[0];
            Ok(dg / d)
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((max, min))
}

/// `√2 (1 + Lip(h))`.
pub fn bilipschitz_bound(g: &QSElement) -> f64 {
    2f64.sqrt() * (1.0 + g.lip())
}

/// Seeded group elements `(ι, ±h_ε)` with random isometry bits and one to
/// six random bits of `ε`.
pub fn random_elements(count: usize, seed: u64) -> Vec<QSElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let iso = IsometryElement {
                r: rng.gen(),
                v: rng.gen(),
                fb: rng.gen(),
            };
            let len = rng.gen_range(1..=6);
            let bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
            let h = h_epsilon(&bits).expect("six bits fit");
            let h = if rng.gen() { l_neg(&h) } else { h };
            QSElement::new(iso, h)
        })
        .collect()
}

/// A point showing that a non-identity isometry is not a shear; `None`
/// for the identity.
///
/// Shears fix `x`, fix `L` pointwise and move every point of a closed
/// vertical curve by the same amount along it.
pub fn isometry_shear_witness(iso: IsometryElement) -> Option<String> {
    let probe = |y: Dyadic, x: Dyadic, face| CarpetPoint {
        x,
        y,
        side: None,
        face: Some(face),
    };
    let p = probe(Dyadic::new(3, 3), Dyadic::new(3, 8), Face::Front);
    let q = iso.apply(&p);
    if q.x != p.x {
        return Some(format!("{p} ↦ {q} changes x"));
    }
    let l = CarpetPoint::plain(Dyadic::ZERO, Dyadic::new(1, 3));
    let lq = iso.apply(&l);
    if lq != l {
        return Some(format!("{l} ↦ {lq} moves L"));
    }
    let a = probe(Dyadic::new(1, 3), Dyadic::new(3, 8), Face::Front);
    let b = probe(Dyadic::new(3, 3), Dyadic::new(3, 8), Face::Front);
    let shift = |u: &CarpetPoint| (curve_position(&iso.apply(u)) - curve_position(u)).rem_pow2(1);
    if shift(&a) != shift(&b) {
        return Some(format!(
            "{a} and {b} move by different amounts along their curve"
        ));
    }
    None
}

/// Non-identity isometries of the ambient space with no shear witness.
pub fn isometry_shear_intersection(ambient: Ambient) -> Vec<IsometryElement> {
    IsometryElement::elements(ambient)
        .into_iter()
        .filter(|&i| i != IsometryElement::IDENTITY && isometry_shear_witness(i).is_none())
        .collect()
}
