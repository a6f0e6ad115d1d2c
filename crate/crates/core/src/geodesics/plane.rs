//! Segment visibility among vertical slits.
//!
//! The obstacle set of level `n` is described arithmetically: a column
//! `X = m / 2^n` with `X` not an integer carries slits of generation
//! `k = exponent(X)`, occupying the open intervals where
//! `Y·2^(k+1) mod 4 ∈ (1, 3)`. On the unit square this is exactly the slit
//! schedule; on the plane it is the periodic pattern obtained by reflecting
//! the square across its sides, which is what the double unfolds to.

use std::cmp::Ordering;

use crate::carpet::Side;
use crate::dyadic::Dyadic;

/// Width of the band around a tip in which the float test defers to exact
/// arithmetic, in units of the scaled coordinate `Y·2^(k+1)`.
const TIP_BAND: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Vertex {
    pub x: Dyadic,
    pub y: Dyadic,
    pub xf: f64,
    pub yf: f64,
    pub side: Option<Side>,
}

impl Vertex {
    pub fn new(x: Dyadic, y: Dyadic, side: Option<Side>) -> Vertex {
        Vertex {
            x,
            y,
            xf: x.to_f64(),
            yf: y.to_f64(),
            side,
        }
    }

    pub fn dist(&self, o: &Vertex) -> f64 {
        (self.xf - o.xf).hypot(self.yf - o.yf)
    }

    pub fn key(&self) -> (Dyadic, Dyadic, Option<Side>) {
        (self.x, self.y, self.side)
    }
}

pub(crate) fn ceil(v: Dyadic) -> i128 {
    -(-v).floor()
}

/// Sign of `y_seg(X) - yt` where `y_seg` is the line through `l` and `r`
/// (`l.x < X < r.x`). `None` when exact evaluation overflows.
fn exact_sign(l: &Vertex, r: &Vertex, x: Dyadic, yt: Dyadic) -> Option<Ordering> {
    let dx = r.x.checked_add(-l.x)?;
    let a = l.y.checked_add(-yt)?.checked_mul(dx)?;
    let b = r.y.checked_add(-l.y)?.checked_mul(x.checked_add(-l.x)?)?;
    let v = a.checked_add(b)?;
    Some(v.cmp(&Dyadic::ZERO))
}

/// Index of the slit containing `y` on a generation-`k` column, counted
/// from `y = 0` (meaningful only for in-slit `y`).
pub(crate) fn slit_index(k: u32, y: Dyadic) -> i128 {
    (y.mul_pow2(k as i32 + 1) - Dyadic::ONE)
        .mul_pow2(-2)
        .floor()
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Obstacles {
    pub level: u32,
}

impl Obstacles {
    pub fn new(level: u32) -> Obstacles {
        Obstacles { level }
    }

    /// Whether `(x, y)` lies strictly inside a slit of this pattern.
    #[cfg(test)]
    pub fn in_slit(&self, x: Dyadic, y: Dyadic) -> bool {
        let k = x.exponent();
        if k == 0 || k > self.level {
            return false;
        }
        let s = y.mul_pow2(k as i32 + 1);
        let f = s.floor().rem_euclid(4);
        if s.is_integer() {
            f == 2
        } else {
            f == 1 || f == 2
        }
    }

    /// Whether the closed segment `ab` is a legal path segment.
    ///
    /// It may touch tips and run along slits, but may not cross an open
    /// slit transversally; tagged endpoints must leave into the half-plane
    /// of their side, and a vertical segment may not join the two sides of
    /// one slit.
    pub fn visible(&self, a: &Vertex, b: &Vertex) -> bool {
        if a.x == b.x {
            if let (Some(sa), Some(sb)) = (a.side, b.side) {
                if sa != sb {
                    let k = a.x.exponent();
                    return slit_index(k, a.y) != slit_index(k, b.y);
                }
            }
            return true;
        }
        let (l, r) = if a.x < b.x { (a, b) } else { (b, a) };
        if l.side == Some(Side::Left) || r.side == Some(Side::Right) {
            return false;
        }
        let n = self.level;
        if n == 0 {
            return true;
        }
        let m_lo = l.x.mul_pow2(n as i32).floor() + 1;
        let m_hi = ceil(r.x.mul_pow2(n as i32)) - 1;
        if m_lo > m_hi {
            return true;
        }
        let period = 1i128 << n;
        let inv = 1.0 / period as f64;
        let slope = (r.yf - l.yf) / (r.xf - l.xf);
        for m in m_lo..=m_hi {
            if m.rem_euclid(period) == 0 {
                continue;
            }
            let k = n - m.trailing_zeros();
            let xc = m as f64 * inv;
            let yc = l.yf + slope * (xc - l.xf);
            let scale = (1u64 << (k + 1)) as f64;
            let ys = yc * scale;
            let base = (ys / 4.0).floor() * 4.0;
            let t = ys - base;
            if t > 1.0 + TIP_BAND && t < 3.0 - TIP_BAND {
                return false;
            }
            if !(1.0 - TIP_BAND..=3.0 + TIP_BAND).contains(&t) {
                continue;
            }
            let near = if (t - 1.0).abs() <= TIP_BAND {
                1.0
            } else {
                3.0
            };
            let tip_num = (base + near) as i128;
            let xd = Dyadic::new(m, n);
            let yt = Dyadic::new(tip_num, k + 1);
            match exact_sign(l, r, xd, yt) {
                Some(Ordering::Greater) if near == 1.0 => return false,
                Some(Ordering::Less) if near == 3.0 => return false,
                _ => {}
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &str, y: &str, side: Option<Side>) -> Vertex {
        Vertex::new(x.parse().unwrap(), y.parse().unwrap(), side)
    }

    #[test]
    fn crossing_the_central_slit_is_blocked() {
        let o = Obstacles::new(1);
        assert!(!o.visible(&v("1/4", "1/2", None), &v("3/4", "1/2", None)));
        assert!(o.visible(&v("1/4", "1/8", None), &v("3/4", "1/8", None)));
    }

    #[test]
    fn touching_a_tip_is_allowed() {
        let o = Obstacles::new(1);
        assert!(o.visible(&v("0", "0", None), &v("1", "1/2", None)));
        assert!(o.visible(&v("1/4", "1/2", None), &v("1/2", "3/4", None)));
        assert!(o.visible(&v("1/4", "1/2", None), &v("3/4", "1", None)));
        assert!(!o.visible(&v("1/4", "1/2", None), &v("3/4", "7/8", None)));
    }

    #[test]
    fn side_rules() {
        let o = Obstacles::new(1);
        let l = v("1/2", "1/2", Some(Side::Left));
        let r = v("1/2", "1/2", Some(Side::Right));
        assert!(!o.visible(&l, &r));
        assert!(o.visible(&l, &v("1/4", "1/2", None)));
        assert!(!o.visible(&l, &v("3/4", "1/2", None)));
        assert!(o.visible(&r, &v("3/4", "1/2", None)));
        assert!(o.visible(&l, &v("1/2", "1/4", None)));
        assert!(o.visible(&l, &v("1/2", "5/8", Some(Side::Left))));
    }

    #[test]
    fn periodic_pattern_on_the_plane() {
        let o = Obstacles::new(1);
        assert!(o.in_slit("3/2".parse().unwrap(), "1/2".parse().unwrap()));
        assert!(o.in_slit("-1/2".parse().unwrap(), "-1/2".parse().unwrap()));
        assert!(!o.in_slit("3/2".parse().unwrap(), "1".parse().unwrap()));
        assert!(!o.visible(&v("5/4", "3/2", None), &v("7/4", "3/2", None)));
    }
}
