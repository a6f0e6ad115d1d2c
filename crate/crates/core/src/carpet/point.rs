use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::carpet::schedule::Slit;
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Which side of a doubled slit a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "L",
            Side::Right => "R",
        }
    }
}

/// Front or back copy of `S₂` inside the double.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Face {
    Front,
    Back,
}

impl Face {
    pub fn flip(self) -> Face {
        match self {
            Face::Front => Face::Back,
            Face::Back => Face::Front,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Face::Front => "front",
            Face::Back => "back",
        }
    }
}

/// Where a planar position sits relative to the slits of a level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Interior,
    OuterSquare,
    /// One of the two endpoints of a slit; `upper` is the top-most point.
    SlitTip {
        slit: Slit,
        upper: bool,
    },
    /// Strictly inside an open slit: the point is doubled and needs a side.
    InSlit(Slit),
}

impl Location {
    pub fn needs_side(&self) -> bool {
        matches!(self, Location::InSlit(_))
    }
}

/// Generation of the slit column through `x` at `level`, if any.
pub fn slit_generation_at(x: Dyadic, level: u32) -> Option<u32> {
    let k = x.exponent();
    (k >= 1 && k <= level && x > Dyadic::ZERO && x < Dyadic::ONE).then_some(k)
}

/// Classifies `(x, y)` against the slits of `Q̄_level`.
pub fn locate(x: Dyadic, y: Dyadic, level: u32) -> Result<Location> {
    let unit = Dyadic::ZERO..=Dyadic::ONE;
    if !unit.contains(&x) || !unit.contains(&y) {
        return Err(Error::Domain(format!(
            "({x}, {y}) is outside the unit square"
        )));
    }
    if x == Dyadic::ZERO || x == Dyadic::ONE || y == Dyadic::ZERO || y == Dyadic::ONE {
        return Ok(Location::OuterSquare);
    }
    let Some(k) = slit_generation_at(x, level) else {
        return Ok(Location::Interior);
    };
    let i = ((x.numerator() - 1) / 2) as u32;
    let s = y.mul_pow2(k as i32 + 1);
    let f = s.floor();
    let slit_at = |j: i128| Slit::new(k, i, j as u32).expect("index in range");
    if s.is_integer() {
        match f.rem_euclid(4) {
            1 => Ok(Location::SlitTip {
                slit: slit_at((f - 1) / 4),
                upper: false,
            }),
            3 => Ok(Location::SlitTip {
                slit: slit_at((f - 3) / 4),
                upper: true,
            }),
            2 => Ok(Location::InSlit(slit_at((f - 2) / 4))),
            _ => Ok(Location::Interior),
        }
    } else {
        match f.rem_euclid(4) {
            1 | 2 => Ok(Location::InSlit(slit_at((f - 1).div_euclid(4)))),
            _ => Ok(Location::Interior),
        }
    }
}

/// A point of `Q̄_n`, of an approximation of `S₂`, or of the double `DS₂`.
///
/// Coordinates are exact. `side` is present exactly when the point lies in
/// the open interior of a slit of the ambient level. `face` is present for
/// points of the double that are not on the outer square (where the two
/// copies are glued).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CarpetPoint {
    pub x: Dyadic,
    pub y: Dyadic,
    pub side: Option<Side>,
    pub face: Option<Face>,
}

impl CarpetPoint {
    /// A point of `Q̄_level`, validated.
    pub fn new(x: Dyadic, y: Dyadic, side: Option<Side>, level: u32) -> Result<CarpetPoint> {
        let p = CarpetPoint {
            x,
            y,
            side,
            face: None,
        };
        p.validate(level)?;
        Ok(p)
    }

    /// A point of the double at `level`. The face is dropped on the seam.
    pub fn double(
        x: Dyadic,
        y: Dyadic,
        side: Option<Side>,
        face: Face,
        level: u32,
    ) -> Result<CarpetPoint> {
        let mut p = CarpetPoint {
            x,
            y,
            side,
            face: Some(face),
        };
        if p.on_seam() {
            p.face = None;
        }
        p.validate_double(level)?;
        Ok(p)
    }

    /// Untagged point, no validation.
    pub fn plain(x: Dyadic, y: Dyadic) -> CarpetPoint {
        CarpetPoint {
            x,
            y,
            side: None,
            face: None,
        }
    }

    pub fn from_f64(x: f64, y: f64, side: Option<Side>, level: u32) -> Result<CarpetPoint> {
        CarpetPoint::new(Dyadic::from_f64(x)?, Dyadic::from_f64(y)?, side, level)
    }

    pub fn with_face(mut self, face: Option<Face>) -> CarpetPoint {
        self.face = if self.on_seam() { None } else { face };
        self
    }

    /// On the outer square `L ∪ R ∪ T ∪ B`.
    pub fn on_seam(&self) -> bool {
        self.x == Dyadic::ZERO
            || self.x == Dyadic::ONE
            || self.y == Dyadic::ZERO
            || self.y == Dyadic::ONE
    }

    pub fn location(&self, level: u32) -> Result<Location> {
        locate(self.x, self.y, level)
    }

    /// The slit this point is tagged on, if it lies inside one at `level`.
    pub fn slit(&self, level: u32) -> Option<Slit> {
        match locate(self.x, self.y, level) {
            Ok(Location::InSlit(s)) => Some(s),
            _ => None,
        }
    }

    pub fn validate(&self, level: u32) -> Result<()> {
        let loc = self.location(level)?;
        match (loc.needs_side(), self.side) {
            (true, None) => Err(Error::InvalidTag(format!(
                "({}, {}) lies inside a slit at level {level} and needs a side tag",
                self.x, self.y
            ))),
            (false, Some(_)) => Err(Error::InvalidTag(format!(
                "({}, {}) is not inside a level-{level} slit but carries a side tag",
                self.x, self.y
            ))),
            _ => Ok(()),
        }
    }

    pub fn validate_double(&self, level: u32) -> Result<()> {
        self.validate(level)?;
        match (self.on_seam(), self.face) {
            (true, Some(_)) => Err(Error::InvalidTag("seam point carries a face tag".into())),
            (false, None) => Err(Error::InvalidTag(format!(
                "({}, {}) is off the seam and needs a front/back tag",
                self.x, self.y
            ))),
            _ => Ok(()),
        }
    }

    pub fn xy(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }

    /// Deterministic ordering used for tie-breaking between equal paths.
    pub fn order_key(&self) -> (Dyadic, Dyadic, Option<Side>, Option<Face>) {
        (self.x, self.y, self.side, self.face)
    }
}

impl PartialOrd for CarpetPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for CarpetPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// `x y [L|R] [front|back]` with decimal coordinates.
impl fmt::Display for CarpetPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (x, y) = self.xy();
        write!(f, "{x} {y}")?;
        if let Some(s) = self.side {
            write!(f, " {}", s.as_str())?;
        }
        if let Some(face) = self.face {
            write!(f, " {}", face.as_str())?;
        }
        Ok(())
    }
}

fn parse_coord(t: &str) -> Result<Dyadic> {
    match t.parse::<Dyadic>() {
        Ok(d) => Ok(d),
        Err(_) => {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad coordinate {t:?}")))?;
            Dyadic::from_f64(v)
        }
    }
}

/// Parses `x,y[,L|R][,front|back]` (commas or whitespace). Coordinates may
/// be dyadic fractions or decimals; non-dyadic decimals are taken at their
/// exact double value. No level validation is done here.
impl FromStr for CarpetPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<CarpetPoint> {
        let toks: Vec<&str> = s
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if toks.len() < 2 {
            return Err(Error::Parse(format!(
                "expected `x,y[,side][,face]`, got {s:?}"
            )));
        }
        let mut p = CarpetPoint::plain(parse_coord(toks[0])?, parse_coord(toks[1])?);
        for t in &toks[2..] {
            match t.to_ascii_lowercase().as_str() {
                "l" | "left" => p.side = Some(Side::Left),
                "r" | "right" => p.side = Some(Side::Right),
                "f" | "front" => p.face = Some(Face::Front),
                "b" | "back" => p.face = Some(Face::Back),
                other => return Err(Error::Parse(format!("unknown point tag {other:?}"))),
            }
        }
        Ok(p)
    }
}

/// The projection `π_{to,from}`: drops side tags of slits finer than `to`.
pub fn project(p: &CarpetPoint, from: u32, to: u32) -> Result<CarpetPoint> {
    if to > from {
        return Err(Error::LevelOrder { from, to });
    }
    p.validate(from)?;
    let mut q = *p;
    if q.side.is_some() && q.x.exponent() > to {
        q.side = None;
    }
    Ok(q)
}
