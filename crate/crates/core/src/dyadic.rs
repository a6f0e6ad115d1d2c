//! Exact dyadic rationals `k / 2^e`.
//!
//! All slit geometry is expressed in this type so that incidence questions
//! (is a point on a slit? at a tip?) are decided without rounding. Every
//! finite `f64` is itself a dyadic rational, so [`Dyadic::from_f64`] is an
//! exact conversion rather than a snap.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Largest exponent a reduced [`Dyadic`] may carry.
pub const MAX_EXPONENT: u32 = 120;

/// An exact rational number of the form `numerator / 2^exponent`.
///
/// Values are always stored reduced: when `exponent > 0` the numerator is
/// odd. Zero is stored as `0 / 2^0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: i128,
    exp: u32,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic { num: 0, exp: 0 };
    pub const ONE: Dyadic = Dyadic { num: 1, exp: 0 };
    pub const HALF: Dyadic = Dyadic { num: 1, exp: 1 };

    /// Builds `num / 2^exp` and reduces it.
    pub fn new(num: i128, exp: u32) -> Dyadic {
        Self::try_new(num, exp).expect("dyadic exponent out of range")
    }

    pub fn try_new(num: i128, exp: u32) -> Result<Dyadic> {
        if num == 0 {
            return Ok(Dyadic::ZERO);
        }
        let tz = num.trailing_zeros().min(exp);
        let d = Dyadic {
            num: num >> tz,
            exp: exp - tz,
        };
        if d.exp > MAX_EXPONENT {
            return Err(Error::Overflow("dyadic exponent"));
        }
        Ok(d)
    }

    pub fn from_int(n: i64) -> Dyadic {
        Dyadic {
            num: n as i128,
            exp: 0,
        }
    }

    /// `1 / 2^exp`.
    pub fn pow2_inv(exp: u32) -> Dyadic {
        Dyadic::new(1, exp)
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(v: f64) -> Result<Dyadic> {
        if !v.is_finite() {
            return Err(Error::Domain(format!("non-finite coordinate {v}")));
        }
        if v == 0.0 {
            return Ok(Dyadic::ZERO);
        }
        let bits = v.to_bits();
        let sign = if bits >> 63 == 1 { -1i128 } else { 1 };
        let raw_exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = (bits & ((1u64 << 52) - 1)) as i128;
        let (mantissa, e2) = if raw_exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1i128 << 52), raw_exp - 1075)
        };
        // v = sign * mantissa * 2^e2
        if e2 >= 0 {
            if e2 > 60 {
                return Err(Error::Overflow("dyadic magnitude"));
            }
            return Ok(Dyadic::new(sign * (mantissa << e2), 0));
        }
        let exp = (-e2) as u32;
        let tz = mantissa.trailing_zeros().min(exp);
        let exp = exp - tz;
        if exp > MAX_EXPONENT {
            return Err(Error::Domain(format!(
                "{v} needs exponent {exp} > {MAX_EXPONENT}"
            )));
        }
        Ok(Dyadic::new(sign * (mantissa >> tz), exp))
    }

    /// Nearest dyadic with exponent at most `exp` (ties toward +inf).
    pub fn snap_f64(v: f64, exp: u32) -> Dyadic {
        let scaled = (v * (1u128 << exp) as f64 + 0.5).floor();
        Dyadic::new(scaled as i128, exp)
    }

    pub fn numerator(self) -> i128 {
        self.num
    }

    /// The reduced exponent: `m` such that the value is `odd / 2^m`
    /// (or an integer when `m == 0`).
    pub fn exponent(self) -> u32 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    pub fn is_integer(self) -> bool {
        self.exp == 0
    }

    pub fn to_f64(self) -> f64 {
        // Exact for the magnitudes used here; large exponents go through
        // two steps to avoid overflowing the power.
        let mut v = self.num as f64;
        let mut e = self.exp;
        while e > 60 {
            v /= (1u64 << 60) as f64;
            e -= 60;
        }
        v / (1u64 << e) as f64
    }

    /// Numerator of the value at a fixed exponent `e >= self.exponent()`.
    pub fn scaled_to(self, e: u32) -> Option<i128> {
        if e < self.exp {
            return None;
        }
        let shift = e - self.exp;
        if shift >= 127 {
            return if self.num == 0 { Some(0) } else { None };
        }
        self.num.checked_mul(1i128 << shift)
    }

    /// Multiplies by `2^k` (k may be negative).
    pub fn mul_pow2(self, k: i32) -> Dyadic {
        if self.num == 0 {
            return self;
        }
        if k >= 0 {
            let k = k as u32;
            if k <= self.exp {
                Dyadic {
                    num: self.num,
                    exp: self.exp - k,
                }
            } else {
                let shift = k - self.exp;
                Dyadic {
                    num: self
                        .num
                        .checked_mul(1i128 << shift)
                        .expect("dyadic overflow"),
                    exp: 0,
                }
            }
        } else {
            Dyadic::new(self.num, self.exp + k.unsigned_abs())
        }
    }

    pub fn checked_add(self, other: Dyadic) -> Option<Dyadic> {
        let e = self.exp.max(other.exp);
        let a = self.scaled_to(e)?;
        let b = other.scaled_to(e)?;
        Dyadic::try_new(a.checked_add(b)?, e).ok()
    }

    pub fn checked_mul(self, other: Dyadic) -> Option<Dyadic> {
        Dyadic::try_new(self.num.checked_mul(other.num)?, self.exp + other.exp).ok()
    }

    pub fn abs(self) -> Dyadic {
        Dyadic {
            num: self.num.abs(),
            exp: self.exp,
        }
    }

    /// Largest integer not above the value.
    pub fn floor(self) -> i128 {
        if self.exp == 0 {
            self.num
        } else {
            self.num >> self.exp
        }
    }

    /// The value reduced modulo `2^k` into `[0, 2^k)` (k may be negative).
    pub fn rem_pow2(self, k: i32) -> Dyadic {
        let scaled = self.mul_pow2(-k);
        let f = scaled.floor();
        (scaled - Dyadic::new(f, 0)).mul_pow2(k)
    }

    pub fn min(self, other: Dyadic) -> Dyadic {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Dyadic) -> Dyadic {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Whether the value is a multiple of `2^-k`.
    pub fn is_multiple_of_pow2_inv(self, k: u32) -> bool {
        self.exp <= k
    }
}

impl Default for Dyadic {
    fn default() -> Self {
        Dyadic::ZERO
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        match (self.scaled_to(e), other.scaled_to(e)) {
            (Some(a), Some(b)) => a.cmp(&b),
            // Out-of-range scaling only happens for huge magnitudes with
            // tiny fractions; compare integer parts first.
            _ => self.floor().cmp(&other.floor()).then_with(|| {
                (*self - Dyadic::new(self.floor(), 0))
                    .cmp(&(*other - Dyadic::new(other.floor(), 0)))
            }),
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        self.checked_add(rhs).expect("dyadic overflow")
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            num: -self.num,
            exp: self.exp,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        self.checked_mul(rhs).expect("dyadic overflow")
    }
}

impl From<i64> for Dyadic {
    fn from(n: i64) -> Self {
        Dyadic::from_int(n)
    }
}

impl fmt::Debug for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

/// Canonical text form `num/2^exp`.
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/2^{}", self.num, self.exp)
    }
}

/// Accepts `num/2^e`, `num/den` with `den` a power of two, integers, and
/// terminating decimals whose value is dyadic (`0.375`).
impl FromStr for Dyadic {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dyadic> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a dyadic rational: {s:?}"));
        if let Some((n, d)) = s.split_once('/') {
            let num: i128 = n.trim().parse().map_err(|_| bad())?;
            let d = d.trim();
            if let Some(e) = d.strip_prefix("2^") {
                let exp: u32 = e.parse().map_err(|_| bad())?;
                return Dyadic::try_new(num, exp);
            }
            let den: u128 = d.parse().map_err(|_| bad())?;
            if den == 0 || !den.is_power_of_two() {
                return Err(bad());
            }
            return Dyadic::try_new(num, den.trailing_zeros());
        }
        if let Some((ip, fp)) = s.split_once('.') {
            let neg = ip.trim_start().starts_with('-');
            let ip_abs = ip.trim_start_matches(['-', '+']);
            let int: i128 = if ip_abs.is_empty() {
                0
            } else {
                ip_abs.parse().map_err(|_| bad())?
            };
            if fp.is_empty() || !fp.bytes().all(|b| b.is_ascii_digit()) || fp.len() > 30 {
                return Err(bad());
            }
            // frac = d / 10^k = d / (5^k 2^k); dyadic iff 5^k | d.
            let k = fp.len() as u32;
            let d: i128 = fp.parse().map_err(|_| bad())?;
            let five_k = 5i128.checked_pow(k).ok_or_else(bad)?;
            if d % five_k != 0 {
                return Err(Error::Parse(format!("{s:?} is not a dyadic rational")));
            }
            let frac = Dyadic::try_new(d / five_k, k)?;
            let v = Dyadic::new(int, 0) + frac;
            return Ok(if neg { -v } else { v });
        }
        let num: i128 = s.parse().map_err(|_| bad())?;
        Ok(Dyadic::new(num, 0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn d(n: i128, e: u32) -> Dyadic {
        Dyadic::new(n, e)
    }

    #[test]
    fn reduction_is_canonical() {
        assert_eq!(d(2, 2), d(1, 1));
        assert_eq!(d(4, 2), Dyadic::ONE);
        assert_eq!(d(0, 7), Dyadic::ZERO);
        assert_eq!(d(6, 3).numerator(), 3);
        assert_eq!(d(6, 3).exponent(), 2);
    }

    #[test]
    fn parse_forms() {
        assert_eq!("3/2^3".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("3/8".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("0.375".parse::<Dyadic>().unwrap(), d(3, 3));
        assert_eq!("-1.5".parse::<Dyadic>().unwrap(), d(-3, 1));
        assert_eq!("2".parse::<Dyadic>().unwrap(), d(2, 0));
        assert!("0.3".parse::<Dyadic>().is_err());
        assert!("1/3".parse::<Dyadic>().is_err());
    }

    #[test]
    fn from_f64_is_exact() {
        let third = Dyadic::from_f64(1.0 / 3.0).unwrap();
        assert_eq!(third.to_f64(), 1.0 / 3.0);
        assert_eq!(third.exponent(), 54);
        assert_eq!(Dyadic::from_f64(0.75).unwrap(), d(3, 2));
        assert_eq!(Dyadic::from_f64(-2.0).unwrap(), d(-2, 0));
    }

    #[test]
    fn rem_and_floor() {
        assert_eq!(d(5, 2).rem_pow2(1), d(5, 2));
        assert_eq!(d(5, 2).rem_pow2(0), d(1, 2));
        assert_eq!(d(7, 1).rem_pow2(1), d(3, 1));
        assert_eq!(d(-1, 2).floor(), -1);
        assert_eq!(d(-1, 2).rem_pow2(0), d(3, 2));
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(a in -1_000_000i64..1_000_000, ea in 0u32..20,
                                  b in -1_000_000i64..1_000_000, eb in 0u32..20) {
            let x = d(a as i128, ea);
            let y = d(b as i128, eb);
            // all values here are exactly representable in f64
            prop_assert_eq!((x + y).to_f64(), x.to_f64() + y.to_f64());
            prop_assert_eq!((x - y).to_f64(), x.to_f64() - y.to_f64());
            prop_assert_eq!(x.cmp(&y), x.to_f64().partial_cmp(&y.to_f64()).unwrap());
            prop_assert_eq!(x + y - y, x);
            let r = x + y;
            prop_assert!(r.exponent() == 0 || r.numerator() % 2 != 0);
        }

        #[test]
        fn display_round_trips(a in -1_000_000i64..1_000_000, ea in 0u32..40) {
            let x = d(a as i128, ea);
            prop_assert_eq!(x.to_string().parse::<Dyadic>().unwrap(), x);
        }
    }
}
