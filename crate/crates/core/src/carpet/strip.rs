//! The infinite strip `V = [0,1] × ℝ` covering the double.
//!
//! Sheet `k` is `[0,1] × [k, k+1]`. Even sheets map onto the front copy,
//! odd sheets onto the back copy with the vertical direction reversed, so
//! the fold is 2-periodic in `y`.

use crate::carpet::point::{CarpetPoint, Face, Side};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StripPoint {
    pub x: Dyadic,
    pub y: Dyadic,
    pub side: Option<Side>,
}

impl StripPoint {
    pub fn new(x: Dyadic, y: Dyadic, side: Option<Side>) -> StripPoint {
        StripPoint { x, y, side }
    }

    /// The sheet index `⌊y⌋`.
    pub fn sheet(&self) -> i128 {
        self.y.floor()
    }
}

/// Folds a strip point onto the double at `level`.
pub fn fold(s: &StripPoint, level: u32) -> Result<CarpetPoint> {
    if s.x < Dyadic::ZERO || s.x > Dyadic::ONE {
        return Err(Error::Domain(format!(
            "strip abscissa {} outside [0,1]",
            s.x
        )));
    }
    let t = s.y.rem_pow2(1);
    let (y, face) = if t <= Dyadic::ONE {
        (t, Face::Front)
    } else {
        (Dyadic::from_int(2) - t, Face::Back)
    };
    CarpetPoint::double(s.x, y, s.side, face, level)
}

/// The fold without level validation; the face is dropped on the seam.
pub fn fold_raw(s: &StripPoint) -> CarpetPoint {
    let t = s.y.rem_pow2(1);
    let (y, face) = if t <= Dyadic::ONE {
        (t, Face::Front)
    } else {
        (Dyadic::from_int(2) - t, Face::Back)
    };
    CarpetPoint {
        x: s.x,
        y,
        side: s.side,
        face: None,
    }
    .with_face(Some(face))
}

/// Lifts a point of the double onto sheet `sheet` of the strip.
///
/// Front points live on even sheets and back points on odd sheets; seam
/// points lie on every sheet.
pub fn unfold(p: &CarpetPoint, sheet: i64) -> Result<StripPoint> {
    let even = sheet.rem_euclid(2) == 0;
    match (p.face, even) {
        (Some(Face::Front), false) | (Some(Face::Back), true) => {
            return Err(Error::Domain(format!(
                "a {} point cannot be lifted to sheet {sheet}",
                p.face.map(Face::as_str).unwrap_or("seam")
            )))
        }
        _ => {}
    }
    let k = Dyadic::from_int(sheet);
    let y = if even { k + p.y } else { k + Dyadic::ONE - p.y };
    Ok(StripPoint {
        x: p.x,
        y,
        side: p.side,
    })
}
