use std::fmt::Write as _;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// A vertical slit of generation `k >= 1`.
///
/// Its abscissa is `(2i+1)/2^k` and it spans the open interval
/// `((4j+1)/2^(k+1), (4j+3)/2^(k+1))`, so its length is `2^-k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slit {
    pub generation: u32,
    pub i: u32,
    pub j: u32,
    pub x: Dyadic,
    pub y_lo: Dyadic,
    pub y_hi: Dyadic,
}

impl Slit {
    pub fn new(generation: u32, i: u32, j: u32) -> Result<Slit> {
        if generation == 0 || generation > 30 {
            return Err(Error::Domain(format!(
                "slit generation {generation} out of range"
            )));
        }
        let cells = 1u32 << (generation - 1);
        if i >= cells || j >= cells {
            return Err(Error::Domain(format!(
                "slit indices ({i}, {j}) out of range for generation {generation}"
            )));
        }
        let k = generation;
        Ok(Slit {
            generation,
            i,
            j,
            x: Dyadic::new(2 * i as i128 + 1, k),
            y_lo: Dyadic::new(4 * j as i128 + 1, k + 1),
            y_hi: Dyadic::new(4 * j as i128 + 3, k + 1),
        })
    }

    pub fn length(&self) -> Dyadic {
        Dyadic::pow2_inv(self.generation)
    }

    pub fn midpoint_y(&self) -> Dyadic {
        Dyadic::new(2 * self.j as i128 + 1, self.generation)
    }

    pub fn contains_open(&self, x: Dyadic, y: Dyadic) -> bool {
        x == self.x && self.y_lo < y && y < self.y_hi
    }

    pub fn tips(&self) -> [(Dyadic, Dyadic); 2] {
        [(self.x, self.y_lo), (self.x, self.y_hi)]
    }
}

/// All slits of generations `1..=level`, in (generation, i, j) order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlitSchedule {
    level: u32,
    slits: Vec<Slit>,
}

/// Constructs the slit schedule of `Q̄_n`.
pub fn slits_up_to(level: u32) -> SlitSchedule {
    let mut slits = Vec::with_capacity(((4usize.pow(level)) - 1) / 3);
    for k in 1..=level {
        let cells = 1u32 << (k - 1);
        for i in 0..cells {
            for j in 0..cells {
                slits.push(Slit::new(k, i, j).expect("indices in range"));
            }
        }
    }
    SlitSchedule { level, slits }
}

impl SlitSchedule {
    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn slits(&self) -> &[Slit] {
        &self.slits
    }

    pub fn len(&self) -> usize {
        self.slits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slits.is_empty()
    }

    pub fn generation(&self, k: u32) -> impl Iterator<Item = &Slit> {
        self.slits.iter().filter(move |s| s.generation == k)
    }

    /// Index of a slit in [`SlitSchedule::slits`].
    pub fn index_of(&self, slit: &Slit) -> Option<usize> {
        if slit.generation == 0 || slit.generation > self.level {
            return None;
        }
        let k = slit.generation;
        let before = ((1usize << (2 * (k - 1))) - 1) / 3;
        let cells = 1usize << (k - 1);
        Some(before + slit.i as usize * cells + slit.j as usize)
    }

    /// The slit whose tips are exactly `lo` and `hi` at abscissa `x`.
    pub fn find_by_tips(&self, x: Dyadic, lo: Dyadic, hi: Dyadic) -> Option<Slit> {
        let k = x.exponent();
        if k == 0 || k > self.level {
            return None;
        }
        let i = (x.numerator() - 1) / 2;
        let scaled = lo.mul_pow2(k as i32 + 1);
        if !scaled.is_integer() || scaled.numerator().rem_euclid(4) != 1 {
            return None;
        }
        let j = (scaled.numerator() - 1) / 4;
        let slit = Slit::new(k, i as u32, u32::try_from(j).ok()?).ok()?;
        (slit.y_hi == hi).then_some(slit)
    }

    /// Line-oriented export: one `k i j` triple per line.
    pub fn export(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# slitcarpet-schedule v1 level={}", self.level);
        for s in &self.slits {
            let _ = writeln!(out, "{} {} {}", s.generation, s.i, s.j);
        }
        out
    }

    /// Parses the export format. The file must describe a complete schedule.
    pub fn import(text: &str) -> Result<SlitSchedule> {
        let mut declared: Option<u32> = None;
        let mut slits = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('#') {
                if let Some(v) = rest
                    .split_whitespace()
                    .find_map(|t| t.strip_prefix("level="))
                {
                    declared = Some(v.parse().map_err(|_| {
                        Error::Parse(format!("line {}: bad level {v:?}", lineno + 1))
                    })?);
                }
                continue;
            }
            let fields: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse::<u32>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::Parse(format!("line {}: expected `k i j`", lineno + 1)))?;
            let [k, i, j] = fields[..] else {
                return Err(Error::Parse(format!(
                    "line {}: expected `k i j`",
                    lineno + 1
                )));
            };
            slits.push(Slit::new(k, i, j)?);
        }
        let level =
            declared.unwrap_or_else(|| slits.iter().map(|s| s.generation).max().unwrap_or(0));
        slits.sort();
        slits.dedup();
        let expected = slits_up_to(level);
        if slits != expected.slits {
            return Err(Error::Parse(format!(
                "schedule is not the complete level-{level} schedule ({} of {} slits)",
                slits.len(),
                expected.len()
            )));
        }
        Ok(expected)
    }
}
