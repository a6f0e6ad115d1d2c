//! Isometries, shears and their semidirect product.
//!
//! In strip coordinates `(x, Y)` with the front copy on even sheets, the
//! reflection `R_v` is `x ↦ 1 - x`, the reflection `R_h` is `Y ↦ 1 - Y`,
//! the swap `R_fb` is `Y ↦ -Y` and a shear is `Y ↦ Y + h(x)`. Conjugating a
//! shear by an isometry therefore gives `Y ↦ Y ± h(φ(x))` with `φ` the
//! isometry's action on `x`. When `φ` reverses `x` this is the shear by
//! `±(h(1 - x) - h(1))` followed by the translation `Y ↦ Y ± h(1)`, which
//! is trivial for even `h(1)` and equals `T₁ = R_h ∘ R_fb` for odd `h(1)`.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::lfunction::{l_add, l_neg, LFunction};
use crate::carpet::sample::random_double_point;
use crate::carpet::{fold_raw, unfold, CarpetPoint, Face};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ambient {
    S2,
    DS2,
}

impl FromStr for Ambient {
    type Err = Error;

    fn from_str(s: &str) -> Result<Ambient> {
        match s.to_ascii_uppercase().as_str() {
            "S2" => Ok(Ambient::S2),
            "DS2" => Ok(Ambient::DS2),
            _ => Err(Error::Parse(format!(
                "ambient must be S2 or DS2, got {s:?}"
            ))),
        }
    }
}

/// `R_r^r ∘ R_v^v ∘ R_fb^fb`; the generators commute and are involutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsometryElement {
    pub r: bool,
    pub v: bool,
    pub fb: bool,
}

impl IsometryElement {
    pub const IDENTITY: IsometryElement = IsometryElement {
        r: false,
        v: false,
        fb: false,
    };
    pub const R_R: IsometryElement = IsometryElement {
        r: true,
        v: false,
        fb: false,
    };
    pub const R_V: IsometryElement = IsometryElement {
        r: false,
        v: true,
        fb: false,
    };
    pub const R_H: IsometryElement = IsometryElement {
        r: true,
        v: true,
        fb: false,
    };
    pub const R_FB: IsometryElement = IsometryElement {
        r: false,
        v: false,
        fb: true,
    };
    /// The translation `Y ↦ Y + 1` of the strip.
    pub const T1: IsometryElement = IsometryElement {
        r: true,
        v: true,
        fb: true,
    };

    pub fn elements(ambient: Ambient) -> Vec<IsometryElement> {
        let fbs: &[bool] = match ambient {
            Ambient::S2 => &[false],
            Ambient::DS2 => &[false, true],
        };
        let mut out = Vec::new();
        for &fb in fbs {
            for r in [false, true] {
                for v in [false, true] {
                    out.push(IsometryElement { r, v, fb });
                }
            }
        }
        out
    }

    pub fn compose(self, o: IsometryElement) -> IsometryElement {
        IsometryElement {
            r: self.r ^ o.r,
            v: self.v ^ o.v,
            fb: self.fb ^ o.fb,
        }
    }

    pub fn inverse(self) -> IsometryElement {
        self
    }

    pub fn flips_x(self) -> bool {
        self.r ^ self.v
    }

    pub fn flips_y(self) -> bool {
        self.r
    }

    /// Sign of the action on the strip coordinate `Y`.
    pub fn y_sign(self) -> i64 {
        if self.r ^ self.fb {
            -1
        } else {
            1
        }
    }

    pub fn apply(self, p: &CarpetPoint) -> CarpetPoint {
        let mut q = *p;
        if self.flips_x() {
            q.x = Dyadic::ONE - q.x;
            q.side = q.side.map(|s| s.flip());
        }
        if self.flips_y() {
            q.y = Dyadic::ONE - q.y;
        }
        if self.fb {
            q.face = q.face.map(Face::flip);
        }
        q
    }

    pub fn name(self) -> &'static str {
        match (self.r, self.v, self.fb) {
            (false, false, false) => "id",
            (true, false, false) => "R_r",
            (false, true, false) => "R_v",
            (true, true, false) => "R_h",
            (false, false, true) => "R_fb",
            (true, false, true) => "R_r∘R_fb",
            (false, true, true) => "R_v∘R_fb",
            (true, true, true) => "R_h∘R_fb",
        }
    }
}

/// Three bits `rvf`.
impl fmt::Display for IsometryElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let b = |x: bool| if x { '1' } else { '0' };
        write!(f, "{}{}{}", b(self.r), b(self.v), b(self.fb))
    }
}

impl FromStr for IsometryElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<IsometryElement> {
        let named = IsometryElement::elements(Ambient::DS2)
            .into_iter()
            .find(|e| e.name() == s);
        if let Some(e) = named {
            return Ok(e);
        }
        let bits: Vec<bool> = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(Error::Parse(format!(
                    "isometry bits must be 0/1, got {s:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        match bits[..] {
            [r, v, fb] => Ok(IsometryElement { r, v, fb }),
            [r, v] => Ok(IsometryElement { r, v, fb: false }),
            _ => Err(Error::Parse(format!(
                "isometry needs two or three bits, got {s:?}"
            ))),
        }
    }
}

/// The shear `(x, Y) ↦ (x, Y + h(x))` pushed down to the double.
pub fn shear_apply(h: &LFunction, p: &CarpetPoint) -> Result<CarpetPoint> {
    let sheet = if p.face == Some(Face::Back) { 1 } else { 0 };
    let mut s = unfold(p, sheet)?;
    s.y = s.y + h.eval(p.x)?;
    Ok(fold_raw(&s))
}

/// The result of moving a shear past an isometry.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Conjugate {
    pub shear: LFunction,
    /// Either the identity or `T₁`.
    pub correction: IsometryElement,
}

/// Number of sample points in the pointwise verification.
pub const VERIFY_SAMPLES: usize = 1000;
const VERIFY_SEED: u64 = 0x5eed;

fn conjugate_formula(iso: IsometryElement, h: &LFunction) -> Conjugate {
    let sign = iso.y_sign();
    let signed = |f: LFunction| if sign < 0 { l_neg(&f) } else { f };
    if !iso.flips_x() {
        return Conjugate {
            shear: signed(h.clone()),
            correction: IsometryElement::IDENTITY,
        };
    }
    let c = h.end_value();
    let values = h.reversed_values().into_iter().map(|v| v - c).collect();
    let shear = signed(LFunction::from_values_unchecked(
        h.breakpoint_exponent(),
        values,
    ));
    let odd = c.is_integer() && c.numerator().rem_euclid(2) == 1;
    let correction = if odd {
        IsometryElement::T1
    } else {
        IsometryElement::IDENTITY
    };
    Conjugate { shear, correction }
}

/// `h'` and a correction with `ι ∘ shear(h) ∘ ι⁻¹ = correction ∘ shear(h')`,
/// verified on a fixed sample of the double.
pub fn conjugate(iso: IsometryElement, h: &LFunction) -> Result<Conjugate> {
    let c = conjugate_formula(iso, h);
    LFunction::new(c.shear.breakpoint_exponent(), c.shear.values().to_vec())?;
    let mut rng = ChaCha8Rng::seed_from_u64(VERIFY_SEED);
    for _ in 0..VERIFY_SAMPLES {
        let p = random_double_point(&mut rng, 0, 24);
        let lhs = iso.apply(&shear_apply(h, &iso.inverse().apply(&p))?);
        let rhs = c.correction.apply(&shear_apply(&c.shear, &p)?);
        if lhs != rhs {
            return Err(Error::Verification(format!(
                "conjugate of shear by {} disagrees at {p}: {lhs} vs {rhs}",
                iso.name()
            )));
        }
    }
    Ok(c)
}

/// `ι ∘ shear(h)`, the normal form of a quasisymmetry of the double.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QSElement {
    pub iso: IsometryElement,
    pub shear: LFunction,
}

impl QSElement {
    pub fn identity() -> QSElement {
        QSElement {
            iso: IsometryElement::IDENTITY,
            shear: LFunction::zero(),
        }
    }

    pub fn new(iso: IsometryElement, shear: LFunction) -> QSElement {
        QSElement { iso, shear }
    }

    pub fn lip(&self) -> f64 {
        self.shear.lip().to_f64()
    }
}

/// `|iso bits| LFunction`, e.g. `101 2 0/2^0 0/2^0 0/2^0 1/2^1 0/2^0`.
impl fmt::Display for QSElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.iso, self.shear)
    }
}

impl FromStr for QSElement {
    type Err = Error;

    fn from_str(s: &str) -> Result<QSElement> {
        let s = s.trim();
        let (bits, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
        let iso = bits.parse()?;
        let shear = if rest.trim().is_empty() {
            LFunction::zero()
        } else {
            rest.parse()?
        };
        Ok(QSElement { iso, shear })
    }
}

pub fn qs_apply(g: &QSElement, p: &CarpetPoint) -> Result<CarpetPoint> {
    Ok(g.iso.apply(&shear_apply(&g.shear, p)?))
}

/// `g1 ∘ g2`.
pub fn qs_compose(g1: &QSElement, g2: &QSElement) -> Result<QSElement> {
    let c = conjugate(g2.iso, &g1.shear)?;
    Ok(QSElement {
        iso: g1.iso.compose(g2.iso).compose(c.correction),
        shear: l_add(&c.shear, &g2.shear),
    })
}

pub fn qs_inverse(g: &QSElement) -> Result<QSElement> {
    let c = conjugate(g.iso, &l_neg(&g.shear))?;
    Ok(QSElement {
        iso: g.iso.compose(c.correction),
        shear: c.shear.simplify(),
    })
}
