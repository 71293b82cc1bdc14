//! Counted complex arithmetic.
//!
//! Every real addition and multiplication routed through an [`OpCounter`]
//! increments its tally. Real divisions and square roots are tallied as
//! multiplications. Sign flips, comparisons and the power-of-two exponent
//! bookkeeping of [`Scaled`] values are free.
//!
//! Complex multiplication uses the schoolbook 4M+2A formula. The counter is
//! an explicit value owned by one solver run; nothing here is global.

use std::fmt;
use std::ops::{Add, AddAssign, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
}

/// A complex number. Carries no arithmetic operators on purpose: all
/// arithmetic on a solve path goes through an [`OpCounter`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Complex {
    pub re: f64,
    pub im: f64,
}

impl Complex {
    pub const ZERO: Complex = Complex::new(0.0, 0.0);
    pub const ONE: Complex = Complex::new(1.0, 0.0);
    pub const I: Complex = Complex::new(0.0, 1.0);

    pub const fn new(re: f64, im: f64) -> Self {
        Complex { re, im }
    }

    pub const fn real(re: f64) -> Self {
        Complex { re, im: 0.0 }
    }

    /// `r·e^{iθ}`, uncounted. Used for building starting configurations.
    pub fn from_polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Complex::new(r * c, r * s)
    }

    pub fn conj(self) -> Self {
        Complex::new(self.re, -self.im)
    }

    pub fn neg(self) -> Self {
        Complex::new(-self.re, -self.im)
    }

    pub fn is_finite(self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    /// `max(|re|, |im|)`.
    pub fn max_abs_component(self) -> f64 {
        self.re.abs().max(self.im.abs())
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    /// Uncounted modulus, for reporting and test code only.
    pub fn norm(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Uncounted distance, for reporting and verification only.
    pub fn dist(self, other: Complex) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }
}

impl fmt::Display for Complex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.im.is_sign_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid complex literal `{0}`")]
pub struct ParseComplexError(pub String);

impl FromStr for Complex {
    type Err = ParseComplexError;

    /// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with optional exponents.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseComplexError(s.to_string());
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(err());
        }
        let Some(body) = t.strip_suffix('i') else {
            return t.parse::<f64>().map(Complex::real).map_err(|_| err());
        };
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&j| (bytes[j] == b'+' || bytes[j] == b'-') && !matches!(bytes[j - 1], b'e' | b'E'));
        let parse_im = |x: &str| -> Result<f64, ParseComplexError> {
            match x {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => x.parse::<f64>().map_err(|_| err()),
            }
        };
        match split {
            Some(j) => {
                let re = body[..j].parse::<f64>().map_err(|_| err())?;
                Ok(Complex::new(re, parse_im(&body[j..])?))
            }
            None => Ok(Complex::new(0.0, parse_im(body)?)),
        }
    }
}

/// Snapshot of an [`OpCounter`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OpCount {
    pub real_adds: u64,
    pub real_muls: u64,
}

impl OpCount {
    pub fn total(self) -> u64 {
        self.real_adds + self.real_muls
    }
}

impl Add for OpCount {
    type Output = OpCount;
    fn add(self, rhs: OpCount) -> OpCount {
        OpCount {
            real_adds: self.real_adds + rhs.real_adds,
            real_muls: self.real_muls + rhs.real_muls,
        }
    }
}

impl AddAssign for OpCount {
    fn add_assign(&mut self, rhs: OpCount) {
        *self = *self + rhs;
    }
}

impl Sub for OpCount {
    type Output = OpCount;
    fn sub(self, rhs: OpCount) -> OpCount {
        OpCount {
            real_adds: self.real_adds - rhs.real_adds,
            real_muls: self.real_muls - rhs.real_muls,
        }
    }
}

/// Run-scoped tally of real additions and multiplications.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    count: OpCount,
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> OpCount {
        self.count
    }

    pub fn reset(&mut self) {
        self.count = OpCount::default();
    }

    /// Folds in the tally of a sub-counter.
    pub fn merge(&mut self, other: OpCount) {
        self.count += other;
    }

    #[inline]
    fn tally(&mut self, adds: u64, muls: u64) {
        self.count.real_adds += adds;
        self.count.real_muls += muls;
    }

    #[inline]
    pub fn real_add(&mut self, a: f64, b: f64) -> f64 {
        self.tally(1, 0);
        a + b
    }

    #[inline]
    pub fn real_mul(&mut self, a: f64, b: f64) -> f64 {
        self.tally(0, 1);
        a * b
    }

    #[inline]
    pub fn add(&mut self, a: Complex, b: Complex) -> Complex {
        self.tally(2, 0);
        Complex::new(a.re + b.re, a.im + b.im)
    }

    #[inline]
    pub fn sub(&mut self, a: Complex, b: Complex) -> Complex {
        self.tally(2, 0);
        Complex::new(a.re - b.re, a.im - b.im)
    }

    #[inline]
    pub fn mul(&mut self, a: Complex, b: Complex) -> Complex {
        self.tally(2, 4);
        Complex::new(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)
    }

    /// Multiplication by a real scalar: 2M.
    #[inline]
    pub fn scale(&mut self, s: f64, a: Complex) -> Complex {
        self.tally(0, 2);
        Complex::new(s * a.re, s * a.im)
    }

    /// `a / b`. Numerator and denominator are first divided by
    /// `max(|re b|, |im b|)` so the squared modulus cannot overflow.
    /// Cost: 12M + 3A.
    pub fn div(&mut self, a: Complex, b: Complex) -> Result<Complex, NumericError> {
        let s = b.max_abs_component();
        if s == 0.0 {
            return Err(NumericError::DivisionByZero);
        }
        self.tally(3, 12);
        let (br, bi) = (b.re / s, b.im / s);
        let (ar, ai) = (a.re / s, a.im / s);
        let den = br * br + bi * bi;
        Ok(Complex::new(
            (ar * br + ai * bi) / den,
            (ai * br - ar * bi) / den,
        ))
    }

    /// `1 / b` with the same scaling guard as [`OpCounter::div`]. Cost: 7M + 1A.
    pub fn recip(&mut self, b: Complex) -> Result<Complex, NumericError> {
        let s = b.max_abs_component();
        if s == 0.0 {
            return Err(NumericError::DivisionByZero);
        }
        self.tally(1, 7);
        let (br, bi) = (b.re / s, b.im / s);
        let t = (br * br + bi * bi) * s;
        Ok(Complex::new(br / t, -bi / t))
    }

    /// Hypot-style modulus `m·sqrt(1 + (n/m)²)`. Cost: 4M + 1A.
    pub fn abs(&mut self, a: Complex) -> f64 {
        self.tally(1, 4);
        let (x, y) = (a.re.abs(), a.im.abs());
        let (m, n) = if x >= y { (x, y) } else { (y, x) };
        if m == 0.0 || m.is_infinite() {
            return m;
        }
        let r = n / m;
        m * (1.0 + r * r).sqrt()
    }

    // Extended-range variants. Counts match the plain operations; the
    // exponent bookkeeping is free.

    pub fn xmul(&mut self, a: Scaled, b: Scaled) -> Scaled {
        let mant = self.mul(a.mant, b.mant);
        Scaled::normalized(mant, a.exp + b.exp)
    }

    pub fn xsqr(&mut self, a: Scaled) -> Scaled {
        self.xmul(a, a)
    }

    pub fn xadd(&mut self, a: Scaled, b: Scaled) -> Scaled {
        self.tally(2, 0);
        Scaled::sum(a, b)
    }

    pub fn xsub(&mut self, a: Scaled, b: Scaled) -> Scaled {
        self.tally(2, 0);
        Scaled::sum(a, b.neg())
    }

    pub fn xscale(&mut self, s: f64, a: Scaled) -> Scaled {
        let mant = self.scale(s, a.mant);
        Scaled::normalized(mant, a.exp)
    }

    pub fn xdiv(&mut self, a: Scaled, b: Scaled) -> Result<Scaled, NumericError> {
        let mant = self.div(a.mant, b.mant)?;
        Ok(Scaled::normalized(mant, a.exp - b.exp))
    }

    pub fn xrecip(&mut self, b: Scaled) -> Result<Scaled, NumericError> {
        let mant = self.recip(b.mant)?;
        Ok(Scaled::normalized(mant, -b.exp))
    }
}

/// Complex value in "scientific" form `mant · 2^exp`, where
/// `max(|re mant|, |im mant|)` lies in `[0.5, 1)` unless the value is zero
/// or non-finite. Survives products of 10^5 factors and doubly-exponential
/// recursions without overflow.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    mant: Complex,
    exp: i64,
}

const MAX_ALIGN_SHIFT: i64 = 1100;

impl Scaled {
    pub const ZERO: Scaled = Scaled { mant: Complex::ZERO, exp: 0 };

    pub fn normalized(mant: Complex, exp: i64) -> Scaled {
        let m = mant.max_abs_component();
        if m == 0.0 || !m.is_finite() {
            return Scaled { mant, exp: if m == 0.0 { 0 } else { exp } };
        }
        let e = frexp_exponent(m) as i64;
        Scaled {
            mant: Complex::new(ldexp(mant.re, -e), ldexp(mant.im, -e)),
            exp: exp + e,
        }
    }

    pub fn mantissa(self) -> Complex {
        self.mant
    }

    pub fn exponent(self) -> i64 {
        self.exp
    }

    pub fn is_zero(self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_finite(self) -> bool {
        self.mant.is_finite()
    }

    pub fn neg(self) -> Scaled {
        Scaled { mant: self.mant.neg(), exp: self.exp }
    }

    /// Converts back to a plain complex; components may overflow to
    /// infinity or underflow to zero.
    pub fn to_complex(self) -> Complex {
        Complex::new(ldexp(self.mant.re, self.exp), ldexp(self.mant.im, self.exp))
    }

    /// `None` when the value is finite here but not representable as `f64`.
    pub fn try_to_complex(self) -> Option<Complex> {
        let c = self.to_complex();
        (c.is_finite() || !self.is_finite()).then_some(c)
    }

    /// `log2 |value|`, uncounted; `-inf` for zero.
    pub fn log2_abs(self) -> f64 {
        self.mant.norm().log2() + self.exp as f64
    }

    fn sum(a: Scaled, b: Scaled) -> Scaled {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let (big, small) = if a.exp >= b.exp { (a, b) } else { (b, a) };
        let shift = big.exp - small.exp;
        if shift > MAX_ALIGN_SHIFT {
            return big;
        }
        let re = big.mant.re + ldexp(small.mant.re, -shift);
        let im = big.mant.im + ldexp(small.mant.im, -shift);
        Scaled::normalized(Complex::new(re, im), big.exp)
    }
}

impl From<Complex> for Scaled {
    fn from(c: Complex) -> Self {
        Scaled::normalized(c, 0)
    }
}

fn pow2(k: i64) -> f64 {
    debug_assert!((-1022..=1023).contains(&k));
    f64::from_bits(((k + 1023) as u64) << 52)
}

/// `x · 2^k` without intermediate overflow.
pub(crate) fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1023 {
        x *= pow2(1023);
        k -= 1023;
        if !x.is_finite() {
            return x;
        }
    }
    while k < -1022 {
        x *= pow2(-1022);
        k += 1022;
        if x == 0.0 {
            return x;
        }
    }
    x * pow2(k)
}

/// Exponent `e` with `x · 2^{-e}` in `[0.5, 1)`, for finite positive `x`.
fn frexp_exponent(x: f64) -> i32 {
    let biased = ((x.to_bits() >> 52) & 0x7ff) as i32;
    if biased == 0 {
        return frexp_exponent(x * pow2(64)) - 64;
    }
    biased - 1022
}
