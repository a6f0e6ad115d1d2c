//! Piecewise-linear members of `ℒ` with dyadic breakpoints.
//!
//! `ℒ` consists of Lipschitz `h` on `[0,1]` with `h(0) = 0`, `h(1) ∈ ℤ` and
//! `h(k/2^m) ∈ 2ℤ/2^m` at every reduced dyadic `k/2^m`. For a function
//! linear between the points `i/2^N` it suffices that each grid value meets
//! the constraint of its own reduced form: between two breakpoints the
//! slope times an odd multiple of `2^-(m-N)` lands in `ℤ/2^(m-1)`.

use std::fmt;
use std::str::FromStr;

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};

/// Largest breakpoint exponent accepted.
pub const MAX_N: u32 = 20;

#[derive(Debug, Clone)]
pub struct LFunction {
    n: u32,
    values: Vec<Dyadic>,
}

/// The constraint at `t`: zero at 0, an integer at 1, `2ℤ/2^m` at a
/// reduced `k/2^m` in between.
fn admissible(t: Dyadic, v: Dyadic) -> bool {
    if t == Dyadic::ZERO {
        return v == Dyadic::ZERO;
    }
    let m = t.exponent();
    if m == 0 {
        return v.is_integer();
    }
    v.mul_pow2(m as i32 - 1).is_integer()
}

impl LFunction {
    /// Validates the grid values `h(i/2^n)`, `i = 0..=2^n`.
    pub fn new(n: u32, values: Vec<Dyadic>) -> Result<LFunction> {
        if n > MAX_N {
            return Err(Error::InvalidLFunction(format!(
                "breakpoint exponent {n} exceeds {MAX_N}"
            )));
        }
        if values.len() != (1usize << n) + 1 {
            return Err(Error::InvalidLFunction(format!(
                "expected {} values for N = {n}, got {}",
                (1usize << n) + 1,
                values.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            let t = Dyadic::new(i as i128, n);
            if !admissible(t, v) {
                return Err(Error::InvalidLFunction(format!(
                    "h({t}) = {v} violates the dyadic constraint"
                )));
            }
        }
        if n == 0 && !admissible(Dyadic::HALF, values[1].mul_pow2(-1)) {
            return Err(Error::InvalidLFunction(format!(
                "h(1/2^1) = {} violates the dyadic constraint",
                values[1].mul_pow2(-1)
            )));
        }
        Ok(LFunction { n, values })
    }

    pub fn zero() -> LFunction {
        LFunction {
            n: 0,
            values: vec![Dyadic::ZERO, Dyadic::ZERO],
        }
    }

    pub fn breakpoint_exponent(&self) -> u32 {
        self.n
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    /// Exact value at a dyadic `t ∈ [0,1]`.
    pub fn eval(&self, t: Dyadic) -> Result<Dyadic> {
        if t < Dyadic::ZERO || t > Dyadic::ONE {
            return Err(Error::Domain(format!("{t} outside [0,1]")));
        }
        let s = t.mul_pow2(self.n as i32);
        let i = s.floor() as usize;
        if i == self.values.len() - 1 {
            return Ok(self.values[i]);
        }
        let frac = s - Dyadic::new(i as i128, 0);
        let (a, b) = (self.values[i], self.values[i + 1]);
        (b - a)
            .checked_mul(frac)
            .and_then(|d| a.checked_add(d))
            .ok_or(Error::Overflow("L-function evaluation"))
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        let s = (t.clamp(0.0, 1.0)) * (1u64 << self.n) as f64;
        let i = (s.floor() as usize).min(self.values.len() - 2);
        let f = s - i as f64;
        let (a, b) = (self.values[i].to_f64(), self.values[i + 1].to_f64());
        a + (b - a) * f
    }

    /// `h(1)`.
    pub fn end_value(&self) -> Dyadic {
        *self.values.last().expect("at least two values")
    }

    /// The largest slope magnitude.
    pub fn lip(&self) -> Dyadic {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs().mul_pow2(self.n as i32))
            .max()
            .unwrap_or(Dyadic::ZERO)
    }

    /// The same function with breakpoints at `i/2^n`, `n >= N`.
    pub fn refine(&self, n: u32) -> LFunction {
        if n <= self.n {
            return self.clone();
        }
        let values = (0..=(1u64 << n))
            .map(|i| {
                self.eval(Dyadic::new(i as i128, n))
                    .expect("grid point in [0,1]")
            })
            .collect();
        LFunction { n, values }
    }

    /// Drops breakpoints where the function is linear.
    pub fn simplify(mut self) -> LFunction {
        while self.n > 0 {
            let linear = self
                .values
                .windows(3)
                .step_by(2)
                .all(|w| (w[0] + w[2]).mul_pow2(-1) == w[1]);
            if !linear {
                break;
            }
            self.values = self.values.iter().step_by(2).copied().collect();
            self.n -= 1;
        }
        self
    }

    /// `x ↦ h(1 - x)`, not itself in `ℒ` unless `h(1) = 0`.
    pub(crate) fn reversed_values(&self) -> Vec<Dyadic> {
        self.values.iter().rev().copied().collect()
    }

    pub(crate) fn from_values_unchecked(n: u32, values: Vec<Dyadic>) -> LFunction {
        LFunction { n, values }
    }
}

impl PartialEq for LFunction {
    fn eq(&self, other: &LFunction) -> bool {
        let n = self.n.max(other.n);
        self.refine(n).values == other.refine(n).values
    }
}

impl Eq for LFunction {}

/// `N v₀ v₁ … v_{2^N}` with each value as `num/2^e`.
impl fmt::Display for LFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        for v in &self.values {
            write!(f, " {v}")?;
        }
        Ok(())
    }
}

impl FromStr for LFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<LFunction> {
        let mut it = s.split_whitespace();
        let n: u32 = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| Error::Parse(format!("missing breakpoint exponent in {s:?}")))?;
        let values = it.map(str::parse).collect::<Result<Vec<Dyadic>>>()?;
        LFunction::new(n, values)
    }
}

/// Checks the defining constraints at every reduced dyadic of exponent at
/// most `depth` by exact interpolation; returns `Lip(h)`.
pub fn validate_l(h: &LFunction, depth: u32) -> Result<Dyadic> {
    if depth < h.n {
        return Err(Error::Domain(format!(
            "depth {depth} below the breakpoint exponent {}",
            h.n
        )));
    }
    if depth > 24 {
        return Err(Error::Domain(format!("depth {depth} exceeds 24")));
    }
    for m in 0..=depth {
        let step = if m == 0 { 1 } else { 2 };
        let start = if m == 0 { 0 } else { 1 };
        let mut k = start;
        while k <= (1i128 << m) {
            let t = Dyadic::new(k, m);
            let v = h.eval(t)?;
            if !admissible(t, v) {
                return Err(Error::InvalidLFunction(format!(
                    "h({t}) = {v} violates the dyadic constraint"
                )));
            }
            k += step;
        }
    }
    Ok(h.lip())
}

/// `h₀(t) = 0` on `[0, 1/2]` and `1/2 - 2|t - 3/4|` on `[1/2, 1]`, extended
/// by zero off `[0,1]`.
pub fn h0_eval(t: Dyadic) -> Dyadic {
    if t <= Dyadic::HALF || t >= Dyadic::ONE {
        return Dyadic::ZERO;
    }
    Dyadic::HALF - (t - Dyadic::new(3, 2)).abs().mul_pow2(1)
}

pub fn h0() -> LFunction {
    let values = (0..=4).map(|i| h0_eval(Dyadic::new(i, 2))).collect();
    LFunction::new(2, values).expect("h0 lies in L")
}

/// `Σ ε_m 2^-m h₀(2^m t)` over the given bits.
pub fn h_epsilon(bits: &[bool]) -> Result<LFunction> {
    if bits.is_empty() {
        return Err(Error::Domain("at least one bit is required".into()));
    }
    let n = bits.len() as u32 + 2;
    if n > MAX_N {
        return Err(Error::Domain(format!("at most {} bits", MAX_N - 2)));
    }
    // Numerators over 2^(n + top): term m at i/2^n is h₀(i·2^m/2^n)·2^-m,
    // and h₀ has numerator 2^n/2 - 2|s - 3·2^n/4| over 2^n at s/2^n.
    let top = bits.len() as u32 - 1;
    let full = 1i128 << n;
    let values = (0..=full)
        .map(|i| {
            let acc: i128 = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(m, _)| {
                    let s = i << m;
                    if s <= full / 2 || s >= full {
                        0
                    } else {
                        (full / 2 - 2 * (s - 3 * full / 4).abs()) << (top - m as u32)
                    }
                })
                .sum();
            Dyadic::new(acc, n + top)
        })
        .collect();
    LFunction::new(n, values)
}

pub fn l_add(a: &LFunction, b: &LFunction) -> LFunction {
    let n = a.n.max(b.n);
    let (ra, rb) = (a.refine(n), b.refine(n));
    let values = ra
        .values
        .iter()
        .zip(&rb.values)
        .map(|(x, y)| *x + *y)
        .collect();
    LFunction { n, values }.simplify()
}

pub fn l_neg(h: &LFunction) -> LFunction {
    LFunction {
        n: h.n,
        values: h.values.iter().map(|v| -*v).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Dyadic {
        s.parse().unwrap()
    }

    #[test]
    fn zero_and_h0() {
        assert_eq!(validate_l(&LFunction::zero(), 6).unwrap(), Dyadic::ZERO);
        let h = h0();
        assert_eq!(h.values(), &[d("0"), d("0"), d("0"), d("1/2"), d("0")]);
        assert_eq!(validate_l(&h, 12).unwrap(), d("2"));
        assert_eq!(h.eval(d("3/4")).unwrap(), d("1/2"));
        assert_eq!(h.eval(d("1/2")).unwrap(), d("0"));
        assert_eq!(h.eval(d("7/8")).unwrap(), d("1/4"));
    }

    #[test]
    fn tent_at_one_half_is_rejected() {
        let err = LFunction::new(1, vec![d("0"), d("1/2"), d("0")]).unwrap_err();
        assert!(err.to_string().contains("1/2^1"));
        let raw = LFunction::from_values_unchecked(1, vec![d("0"), d("1/2"), d("0")]);
        let err = validate_l(&raw, 4).unwrap_err();
        assert!(err.to_string().contains("h(1/2^1)"), "{err}");
    }

    #[test]
    fn linear_functions_need_an_even_end() {
        assert!(LFunction::new(0, vec![d("0"), d("1")]).is_err());
        assert!(LFunction::new(0, vec![d("0"), d("2")]).is_ok());
        let stepped = LFunction::new(1, vec![d("0"), d("1"), d("1")]).unwrap();
        validate_l(&stepped, 10).unwrap();
    }

    #[test]
    fn h_epsilon_examples() {
        let a = h_epsilon(&[true]).unwrap();
        assert_eq!(a.eval(d("3/4")).unwrap(), d("1/2"));
        assert_eq!(a, h0());
        let b = h_epsilon(&[false, true]).unwrap();
        assert_eq!(b.eval(d("3/16")).unwrap(), d("0"));
        assert_eq!(b.eval(d("7/16")).unwrap(), d("1/8"));
        validate_l(&b, 10).unwrap();
    }

    #[test]
    fn h_epsilon_matches_the_series() {
        for code in [1u32, 0b101, 0b110_0101, 0b1111_1111_1111, 0b1000_0000_0000] {
            let bits: Vec<bool> = (0..12).map(|m| code >> m & 1 == 1).collect();
            let h = h_epsilon(&bits).unwrap();
            for i in (0..=1i128 << 14).step_by(7) {
                let t = Dyadic::new(i, 14);
                let want = (0..12)
                    .filter(|&m| bits[m])
                    .map(|m| h0_eval(t.mul_pow2(m as i32)).mul_pow2(-(m as i32)))
                    .fold(Dyadic::ZERO, |a, b| a + b);
                assert_eq!(h.eval(t).unwrap(), want, "{code:b} at {t}");
            }
        }
    }

    #[test]
    fn group_law() {
        let h = h0();
        assert_eq!(l_add(&h, &l_neg(&h)), LFunction::zero());
        assert_eq!(l_add(&h, &h).eval(d("3/4")).unwrap(), d("1"));
        let sum = l_add(
            &h_epsilon(&[true, false]).unwrap(),
            &h_epsilon(&[false, true]).unwrap(),
        );
        assert_eq!(sum, h_epsilon(&[true, true]).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let h = h_epsilon(&[true, false, true]).unwrap();
        assert_eq!(h.to_string().parse::<LFunction>().unwrap(), h);
        assert_eq!(h0().to_string(), "2 0/2^0 0/2^0 0/2^0 1/2^1 0/2^0");
    }

    #[test]
    fn simplify_keeps_the_function() {
        let h = h0().refine(6);
        assert_eq!(h.breakpoint_exponent(), 6);
        let s = h.clone().simplify();
        assert_eq!(s.breakpoint_exponent(), 2);
        assert_eq!(s, h);
    }
}
