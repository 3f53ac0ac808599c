//! Binary fixed-point reals of arbitrary precision.
//!
//! A [`Fixed`] is `raw · 2^-bits`. All operands of one computation share the
//! same `bits`; products round to nearest. This is all the space-form series
//! need: ring operations, division by small integers, π, and cos/sin of
//! rational multiples of 2π.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Float, One, Signed, ToPrimitive, Zero};

/// Extra bits carried through π and the trigonometric series.
const GUARD_BITS: u32 = 64;

/// Bits needed for `digits` decimal digits, plus a small margin.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 16
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixed {
    raw: BigInt,
    bits: u32,
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Self { raw: BigInt::zero(), bits }
    }

    pub fn from_int(v: i64, bits: u32) -> Self {
        Self { raw: BigInt::from(v) << bits, bits }
    }

    /// Exact conversion of a finite double.
    pub fn from_f64(x: f64, bits: u32) -> Self {
        assert!(x.is_finite(), "cannot convert {x} to fixed point");
        let (mantissa, exponent, sign) = x.integer_decode();
        let mut raw = BigInt::from(mantissa);
        let shift = i64::from(exponent) + i64::from(bits);
        raw = if shift >= 0 { raw << shift as u32 } else { round_shr(&raw, (-shift) as u32) };
        if sign < 0 {
            raw = -raw;
        }
        Self { raw, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits, then scale
        let shift = self.raw.bits().saturating_sub(64);
        let head = (&self.raw >> shift).to_f64().unwrap_or(f64::NAN);
        head * 2f64.powi(shift as i32 - self.bits as i32)
    }

    /// Division by a nonzero integer, rounded to nearest.
    pub fn div_int(&self, d: i64) -> Self {
        assert!(d != 0, "division by zero");
        let d = BigInt::from(d);
        let (q, r) = self.raw.div_mod_floor(&d);
        let twice = r * 2;
        let round_up = if d.is_positive() { twice >= d } else { twice <= d };
        Self { raw: if round_up { q + 1 } else { q }, bits: self.bits }
    }

    /// Nearest integer and the distance to it.
    pub fn round(&self) -> (BigInt, f64) {
        let half = BigInt::one() << (self.bits - 1);
        let n = (&self.raw + half) >> self.bits;
        let diff = Fixed { raw: &self.raw - (&n << self.bits), bits: self.bits };
        (n, diff.to_f64().abs())
    }

    /// Same value with a different number of fractional bits.
    pub fn with_bits(&self, bits: u32) -> Self {
        let raw = if bits >= self.bits {
            &self.raw << (bits - self.bits)
        } else {
            round_shr(&self.raw, self.bits - bits)
        };
        Self { raw, bits }
    }

    fn check(&self, other: &Self) {
        debug_assert_eq!(self.bits, other.bits, "mixed fixed-point precisions");
    }
}

fn round_shr(x: &BigInt, s: u32) -> BigInt {
    if s == 0 {
        return x.clone();
    }
    (x + (BigInt::one() << (s - 1))) >> s
}

impl Add for &Fixed {
    type Output = Fixed;
    fn add(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed { raw: &self.raw + &rhs.raw, bits: self.bits }
    }
}

impl Sub for &Fixed {
    type Output = Fixed;
    fn sub(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed { raw: &self.raw - &rhs.raw, bits: self.bits }
    }
}

impl Mul for &Fixed {
    type Output = Fixed;
    fn mul(self, rhs: &Fixed) -> Fixed {
        self.check(rhs);
        Fixed { raw: round_shr(&(&self.raw * &rhs.raw), self.bits), bits: self.bits }
    }
}

impl Neg for &Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed { raw: -&self.raw, bits: self.bits }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Fixed {
            type Output = Fixed;
            fn $m(self, rhs: Fixed) -> Fixed {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Fixed {
    type Output = Fixed;
    fn neg(self) -> Fixed {
        Fixed { raw: -self.raw, bits: self.bits }
    }
}

/// Scalar arithmetic shared by the f64 and the high-precision code paths.
pub trait Real: Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    /// The integer `v` at the same precision as `self`.
    fn int_like(&self, v: i64) -> Self;
    fn halve(&self) -> Self;
}

impl Real for f64 {
    fn int_like(&self, v: i64) -> Self {
        v as f64
    }
    fn halve(&self) -> Self {
        self * 0.5
    }
}

impl Real for Fixed {
    fn int_like(&self, v: i64) -> Self {
        Fixed::from_int(v, self.bits)
    }
    fn halve(&self) -> Self {
        Fixed { raw: round_shr(&self.raw, 1), bits: self.bits }
    }
}

// atan(1/x) by its alternating series.
fn atan_inv(x: i64, bits: u32) -> Fixed {
    let x2 = BigInt::from(x * x);
    let mut power = (BigInt::one() << bits) / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k: i64 = 0;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    Fixed { raw: sum, bits }
}

/// π by Machin's formula.
pub fn pi(bits: u32) -> Fixed {
    let work = bits + GUARD_BITS;
    let a = atan_inv(5, work);
    let b = atan_inv(239, work);
    let v = Fixed { raw: a.raw * 16 - b.raw * 4, bits: work };
    v.with_bits(bits)
}

/// `(cos θ, sin θ)` for `θ = 2π·p/q`.
pub fn cos_sin_turn(p: i64, q: u64, bits: u32) -> (Fixed, Fixed) {
    assert!(q > 0, "zero denominator");
    let q = q as i64;
    let mut r = p.rem_euclid(q);
    if 2 * r > q {
        r -= q;
    }
    let work = bits + GUARD_BITS;
    // |θ| ≤ π after the reduction above
    let theta = (&pi(work) * &Fixed::from_int(2 * r, work)).div_int(q);
    let theta2 = &theta * &theta;

    let mut cos = Fixed::from_int(1, work);
    let mut sin = theta.clone();
    let mut cos_term = cos.clone();
    let mut sin_term = theta;
    let mut k: i64 = 1;
    loop {
        cos_term = (-(&cos_term * &theta2)).div_int((2 * k - 1) * (2 * k));
        sin_term = (-(&sin_term * &theta2)).div_int((2 * k) * (2 * k + 1));
        if cos_term.raw.is_zero() && sin_term.raw.is_zero() {
            break;
        }
        cos = &cos + &cos_term;
        sin = &sin + &sin_term;
        k += 1;
    }
    (cos.with_bits(bits), sin.with_bits(bits))
}
