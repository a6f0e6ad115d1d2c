//! SVG pictures of `Q̄_n` embedded in the plane.
//!
//! Each slit is opened into a thin rhombic lens: inside the band of points
//! nearer to the slit's column than to any other level-`n` column, the two
//! sides of the slit are pushed apart horizontally by the lens profile and
//! the rest of the band is compressed linearly. Outside the bands the map is
//! the identity, so the picture is the slit square with every slit visible.

use std::fmt::Write as _;

use crate::carpet::{slits_up_to, CarpetPoint, Side};
use crate::error::{Error, Result};
use crate::geodesics::Polyline;
use crate::modulus::GridField;

/// Rendering options.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderSpec {
    pub level: u32,
    /// Lens width per generation, `eta[k - 1]` for generation `k`.
    pub eta: Vec<f64>,
    /// Side of the square in pixels.
    pub scale: f64,
    pub stroke: f64,
}

impl RenderSpec {
    /// Default widths `2^-6 · 4^-k`.
    pub fn new(level: u32) -> RenderSpec {
        RenderSpec {
            level,
            eta: (1..=level).map(|k| default_eta(k, 1.0 / 64.0)).collect(),
            scale: 512.0,
            stroke: 1.0,
        }
    }

    /// Widths `eta · 4^-k`.
    pub fn with_eta(level: u32, eta: f64) -> RenderSpec {
        RenderSpec {
            eta: (1..=level).map(|k| default_eta(k, eta)).collect(),
            ..RenderSpec::new(level)
        }
    }

    /// Half the spacing of the level's slit columns.
    fn band(&self) -> f64 {
        0.5 / (1u64 << self.level) as f64
    }

    pub fn validate(&self) -> Result<()> {
        if self.eta.len() != self.level as usize {
            return Err(Error::Domain(format!(
                "{} lens widths given for level {}",
                self.eta.len(),
                self.level
            )));
        }
        if !(self.scale > 0.0 && self.stroke > 0.0) {
            return Err(Error::Domain("scale and stroke must be positive".into()));
        }
        for (k, w) in self.eta.iter().enumerate() {
            if !(*w > 0.0) {
                return Err(Error::Domain(format!("lens width {w} is not positive")));
            }
            if k > 0 && *w >= self.eta[k - 1] {
                return Err(Error::Domain(
                    "lens widths must decrease with generation".into(),
                ));
            }
            if w / 2.0 >= self.band() {
                return Err(Error::Domain(format!(
                    "generation-{} lenses of width {w} overlap their neighbours at level {}",
                    k + 1,
                    self.level
                )));
            }
        }
        Ok(())
    }

    /// Image of a point in the unit square.
    pub fn map(&self, p: &CarpetPoint) -> (f64, f64) {
        let (x, y) = p.xy();
        self.map_xy(x, y, p.side)
    }

    fn map_xy(&self, x: f64, y: f64, side: Option<Side>) -> (f64, f64) {
        let m = (1u64 << self.level) as f64;
        let c = (x * m).round();
        if self.level == 0 || c <= 0.0 || c >= m {
            return (x, y);
        }
        let s = c / m;
        let t = x - s;
        let delta = self.band();
        if t.abs() > delta {
            return (x, y);
        }
        let k = self.level - (c as u64).trailing_zeros();
        let w = self.eta[k as usize - 1] / 2.0 * profile(k, y);
        if w == 0.0 {
            return (x, y);
        }
        let sign = if t > 0.0 || (t == 0.0 && side == Some(Side::Right)) {
            1.0
        } else if t < 0.0 || side == Some(Side::Left) {
            -1.0
        } else {
            0.0
        };
        (s + sign * w + t * (1.0 - w / delta), y)
    }
}

fn default_eta(k: u32, eta: f64) -> f64 {
    eta / 4f64.powi(k as i32)
}

/// Tent over the generation-`k` slit containing height `y`, 1 at its
/// midpoint and 0 outside.
fn profile(k: u32, y: f64) -> f64 {
    let scale = (1u64 << (k + 1)) as f64;
    let u = y * scale;
    let r = u.rem_euclid(4.0);
    if r <= 1.0 || r >= 3.0 {
        return 0.0;
    }
    1.0 - (r - 2.0).abs()
}

/// Whether the lens map is injective on the `samples × samples` grid, both
/// sides of every slit included.
///
/// The map preserves heights, so it suffices that images increase strictly
/// along every row.
pub fn check_injective(spec: &RenderSpec, samples: u32) -> Result<bool> {
    spec.validate()?;
    let m = samples as f64;
    for j in 0..=samples {
        let y = j as f64 / m;
        let mut last = f64::NEG_INFINITY;
        for i in 0..=samples {
            let x = i as f64 / m;
            for side in [Some(Side::Left), Some(Side::Right)] {
                let (u, _) = spec.map_xy(x, y, side);
                if u < last || (u == last && side == Some(Side::Left)) {
                    return Ok(false);
                }
                last = u;
            }
        }
    }
    Ok(true)
}

/// Smallest and largest ratio `|F(a) - F(b)| / |a - b|` over neighbouring
/// grid samples on the same side of every slit.
pub fn sampled_expansion(spec: &RenderSpec, samples: u32) -> Result<(f64, f64)> {
    spec.validate()?;
    let m = samples as f64;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut record = |a: (f64, f64), b: (f64, f64), d: f64| {
        let r = (a.0 - b.0).hypot(a.1 - b.1) / d;
        lo = lo.min(r);
        hi = hi.max(r);
    };
    for j in 0..=samples {
        for i in 0..=samples {
            let (x, y) = (i as f64 / m, j as f64 / m);
            if i < samples {
                let a = spec.map_xy(x, y, Some(Side::Right));
                let b = spec.map_xy((i + 1) as f64 / m, y, Some(Side::Left));
                record(a, b, 1.0 / m);
            }
            if j < samples {
                for side in [Side::Left, Side::Right] {
                    let a = spec.map_xy(x, y, Some(side));
                    let b = spec.map_xy(x, (j + 1) as f64 / m, Some(side));
                    record(a, b, 1.0 / m);
                }
            }
        }
    }
    Ok((lo, hi))
}

/// Something drawn over the carpet.
#[derive(Debug, Clone)]
pub enum Overlay {
    Path(Polyline),
    /// Level sets of a potential at the given values.
    LevelSets {
        field: GridField,
        values: Vec<f64>,
    },
}

/// The level-`n` carpet with its lenses, overlays on top.
pub fn render_svg(spec: &RenderSpec, overlays: &[Overlay]) -> Result<String> {
    spec.validate()?;
    let margin = 8.0;
    let size = spec.scale + 2.0 * margin;
    let px = |(x, y): (f64, f64)| (margin + x * spec.scale, margin + (1.0 - y) * spec.scale);
    let mut out = String::new();
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">"#
    );
    let _ = writeln!(
        out,
        r##"<rect x="{margin}" y="{margin}" width="{s}" height="{s}" fill="#f4f1e8" stroke="black" stroke-width="{w}"/>"##,
        s = spec.scale,
        w = spec.stroke
    );
    let _ = writeln!(
        out,
        r#"<g fill="white" stroke="black" stroke-width="{}">"#,
        spec.stroke * 0.5
    );
    for slit in slits_up_to(spec.level).slits() {
        let s = slit.x.to_f64();
        let half = spec.eta[slit.generation as usize - 1] / 2.0;
        let (lo, mid, hi) = (
            slit.y_lo.to_f64(),
            slit.midpoint_y().to_f64(),
            slit.y_hi.to_f64(),
        );
        let pts = [(s, lo), (s + half, mid), (s, hi), (s - half, mid)].map(px);
        let _ = writeln!(out, r#"<polygon points="{}"/>"#, points(&pts));
    }
    let _ = writeln!(out, "</g>");
    for overlay in overlays {
        match overlay {
            Overlay::Path(path) => {
                let pts: Vec<(f64, f64)> = path_samples(spec, path).into_iter().map(px).collect();
                let _ = writeln!(
                    out,
                    r##"<polyline points="{}" fill="none" stroke="#c0392b" stroke-width="{}"/>"##,
                    points(&pts),
                    spec.stroke * 1.5
                );
            }
            Overlay::LevelSets { field, values } => {
                let _ = writeln!(
                    out,
                    r##"<g stroke="#2c6e9b" stroke-width="{}">"##,
                    spec.stroke * 0.75
                );
                for (a, b) in level_segments(field, values) {
                    let (p, q) = (
                        px(spec.map_xy(a.0, a.1, a.2)),
                        px(spec.map_xy(b.0, b.1, b.2)),
                    );
                    let _ = writeln!(
                        out,
                        r#"<line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
                        p.0, p.1, q.0, q.1
                    );
                }
                let _ = writeln!(out, "</g>");
            }
        }
    }
    let _ = writeln!(out, "</svg>");
    Ok(out)
}

fn points(pts: &[(f64, f64)]) -> String {
    pts.iter()
        .map(|(x, y)| format!("{x:.3},{y:.3}"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Mapped points along a path, each segment subdivided so that bends of
/// the lens map show.
fn path_samples(spec: &RenderSpec, path: &Polyline) -> Vec<(f64, f64)> {
    const PIECES: usize = 32;
    let mut out = Vec::new();
    for (k, w) in path.vertices.windows(2).enumerate() {
        let (a, b) = (w[0].xy(), w[1].xy());
        let side = if w[0].x == w[1].x {
            w[0].side.or(w[1].side)
        } else {
            None
        };
        for t in 0..PIECES {
            if k > 0 && t == 0 {
                continue;
            }
            let s = t as f64 / PIECES as f64;
            let sd = if t == 0 { w[0].side } else { side };
            out.push(spec.map_xy(a.0 + s * (b.0 - a.0), a.1 + s * (b.1 - a.1), sd));
        }
        out.push(spec.map(&w[1]));
    }
    if path.vertices.len() == 1 {
        out.push(spec.map(&path.vertices[0]));
    }
    out
}

type Tagged = (f64, f64, Option<Side>);

/// Marching-squares segments of the field at each value. Cells beside a
/// slit read the copy of the slit nodes on their own side.
fn level_segments(field: &GridField, values: &[f64]) -> Vec<(Tagged, Tagged)> {
    let m = 1usize << field.g;
    let h = 1.0 / m as f64;
    let mut base = vec![f64::NAN; (m + 1) * (m + 1)];
    let mut right = vec![f64::NAN; (m + 1) * (m + 1)];
    for (v, u) in field.nodes.iter().zip(&field.values) {
        let idx = v.i as usize * (m + 1) + v.j as usize;
        match v.side {
            Some(Side::Right) => right[idx] = *u,
            _ => base[idx] = *u,
        }
    }
    let at = |i: usize, j: usize, side: Side| {
        let idx = i * (m + 1) + j;
        if side == Side::Right && !right[idx].is_nan() {
            right[idx]
        } else {
            base[idx]
        }
    };
    let mut segs = Vec::new();
    for i in 0..m {
        for j in 0..m {
            // Corners counterclockwise from the lower left; the left column
            // faces right and the right column faces left.
            let corners = [
                (i, j, Side::Right),
                (i + 1, j, Side::Left),
                (i + 1, j + 1, Side::Left),
                (i, j + 1, Side::Right),
            ];
            let vals = corners.map(|(a, b, s)| at(a, b, s));
            for &c in values {
                let mut cut: Vec<Tagged> = Vec::new();
                for e in 0..4 {
                    let (p, q) = (corners[e], corners[(e + 1) % 4]);
                    let (u, v) = (vals[e], vals[(e + 1) % 4]);
                    if (u < c) != (v < c) {
                        let t = (c - u) / (v - u);
                        let x = (p.0 as f64 + t * (q.0 as f64 - p.0 as f64)) * h;
                        let y = (p.1 as f64 + t * (q.1 as f64 - p.1 as f64)) * h;
                        let side = if p.0 == q.0 { Some(p.2) } else { None };
                        cut.push((x, y, side));
                    }
                }
                for pair in cut.chunks_exact(2) {
                    segs.push((pair[0], pair[1]));
                }
            }
        }
    }
    segs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geodesics::distance_level;
    use crate::modulus::{laplace_solve, Direction};

    #[test]
    fn level_zero_is_the_identity() {
        let spec = RenderSpec::new(0);
        let p: CarpetPoint = "3/8,5/16".parse().unwrap();
        assert_eq!(spec.map(&p), p.xy());
        let svg = render_svg(&spec, &[]).unwrap();
        assert!(!svg.contains("<polygon"));
    }

    #[test]
    fn one_lens_opens_the_central_slit() {
        let spec = RenderSpec::with_eta(1, 1.0 / 16.0);
        let half = 1.0 / 128.0;
        let l: CarpetPoint = "1/2,1/2,L".parse().unwrap();
        let r: CarpetPoint = "1/2,1/2,R".parse().unwrap();
        assert_eq!(spec.map(&l), (0.5 - half, 0.5));
        assert_eq!(spec.map(&r), (0.5 + half, 0.5));
        let tip: CarpetPoint = "1/2,1/4".parse().unwrap();
        assert_eq!(spec.map(&tip), (0.5, 0.25));
        let svg = render_svg(&spec, &[]).unwrap();
        assert_eq!(svg.matches("<polygon").count(), 1);
    }

    #[test]
    fn expansion_of_a_thin_lens_is_small() {
        let spec = RenderSpec::with_eta(1, 1.0 / 16.0);
        let (lo, hi) = sampled_expansion(&spec, 256).unwrap();
        assert!(hi <= 1.1 && lo >= 1.0 / 1.1, "{lo} {hi}");
    }

    #[test]
    fn injective_on_the_sample_grid() {
        for n in 0..=3 {
            assert!(check_injective(&RenderSpec::new(n), 512).unwrap());
        }
    }

    #[test]
    fn overlapping_lenses_are_rejected() {
        assert!(RenderSpec::with_eta(2, 1.0).validate().is_err());
        let mut spec = RenderSpec::new(2);
        spec.eta.reverse();
        assert!(spec.validate().is_err());
    }

    #[test]
    fn overlays_are_drawn() {
        let spec = RenderSpec::new(1);
        let p = "1/2,1/2,L".parse().unwrap();
        let q = "1/2,1/2,R".parse().unwrap();
        let (_, path) = distance_level(1, &p, &q).unwrap();
        let field = laplace_solve(1, 4, &Direction::LR.boundary(), 1e-10).unwrap();
        let svg = render_svg(
            &spec,
            &[
                Overlay::Path(path),
                Overlay::LevelSets {
                    field,
                    values: vec![0.25, 0.5, 0.75],
                },
            ],
        )
        .unwrap();
        assert!(svg.contains("<polyline"));
        // Each level crosses most of the 16 cell rows; the median runs
        // through nodes that sit exactly at 1/2 and skips a few cells.
        assert!(svg.matches("<line").count() >= 3 * 14);
    }
}
