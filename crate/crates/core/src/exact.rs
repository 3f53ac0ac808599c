//! Exact representations for the quantities that come out of closed-form
//! spectra: rationals, rational multiples of powers of π, and eigenvalues
//! that are either integers (spheres, space forms) or `±2π√q` with `q`
//! rational (flat tori with a rational Gram matrix).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-0.125"` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::InvalidInput(format!("not an exact rational: {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::InvalidInput(format!("zero denominator in {text:?}")));
        }
        return Ok(BigRational::new(num, den));
    }
    let (negative, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let numer: BigInt = if all.is_empty() { BigInt::zero() } else { all.parse().map_err(|_| bad())? };
    let denom = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let value = BigRational::new(numer, denom);
    Ok(if negative { -value } else { value })
}

/// `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rational_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// `coefficient · π^pi_power` with a rational coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PiRational {
    pub coefficient: BigRational,
    pub pi_power: i32,
}

impl PiRational {
    pub fn new(coefficient: BigRational, pi_power: i32) -> Self {
        Self { coefficient, pi_power }
    }

    pub fn rational(coefficient: BigRational) -> Self {
        Self::new(coefficient, 0)
    }

    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.coefficient) * std::f64::consts::PI.powi(self.pi_power)
    }

    pub fn mul(&self, other: &PiRational) -> PiRational {
        PiRational::new(&self.coefficient * &other.coefficient, self.pi_power + other.pi_power)
    }

    pub fn div(&self, other: &PiRational) -> PiRational {
        PiRational::new(&self.coefficient / &other.coefficient, self.pi_power - other.pi_power)
    }
}

impl fmt::Display for PiRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = format_rational(&self.coefficient);
        match self.pi_power {
            0 => write!(f, "{c}"),
            1 => write!(f, "{c}*pi"),
            k => write!(f, "{c}*pi^{k}"),
        }
    }
}

impl FromStr for PiRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s.split_once("*pi") {
            None => Ok(PiRational::rational(parse_rational(s)?)),
            Some((coef, rest)) => {
                let coefficient = parse_rational(coef)?;
                let pi_power = if rest.is_empty() {
                    1
                } else {
                    rest.strip_prefix('^')
                        .and_then(|p| p.parse::<i32>().ok())
                        .ok_or_else(|| Error::InvalidInput(format!("bad power of pi in {s:?}")))?
                };
                Ok(PiRational::new(coefficient, pi_power))
            }
        }
    }
}

/// Exact eigenvalue representation. Tori produce `±2π√q`; spheres and
/// space forms produce integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExactEigenvalue {
    Integer(i64),
    TwoPiSqrt { negative: bool, norm_sq: BigRational },
}

impl ExactEigenvalue {
    pub fn two_pi_sqrt(negative: bool, norm_sq: BigRational) -> Self {
        ExactEigenvalue::TwoPiSqrt { negative, norm_sq }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExactEigenvalue::Integer(k) => *k as f64,
            ExactEigenvalue::TwoPiSqrt { negative, norm_sq } => {
                let v = 2.0 * std::f64::consts::PI * rational_to_f64(norm_sq).sqrt();
                if *negative {
                    -v
                } else {
                    v
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactEigenvalue::Integer(k) => *k == 0,
            ExactEigenvalue::TwoPiSqrt { norm_sq, .. } => norm_sq.is_zero(),
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            ExactEigenvalue::Integer(k) => *k < 0,
            ExactEigenvalue::TwoPiSqrt { negative, norm_sq } => *negative && !norm_sq.is_zero(),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            ExactEigenvalue::Integer(k) => ExactEigenvalue::Integer(-k),
            ExactEigenvalue::TwoPiSqrt { negative, norm_sq } => ExactEigenvalue::TwoPiSqrt {
                negative: !negative,
                norm_sq: norm_sq.clone(),
            },
        }
    }

    /// Exact comparison when both sides share a representation.
    pub fn exact_cmp(&self, other: &Self) -> Option<Ordering> {
        match (self, other) {
            (ExactEigenvalue::Integer(a), ExactEigenvalue::Integer(b)) => Some(a.cmp(b)),
            (
                ExactEigenvalue::TwoPiSqrt { negative: na, norm_sq: qa },
                ExactEigenvalue::TwoPiSqrt { negative: nb, norm_sq: qb },
            ) => {
                let sa = signed(*na, qa);
                let sb = signed(*nb, qb);
                Some(sa.cmp(&sb))
            }
            _ => None,
        }
    }
}

// sign(λ)·q orders the same way as λ = ±2π√q
fn signed(negative: bool, q: &BigRational) -> BigRational {
    if negative {
        -q.clone()
    } else {
        q.clone()
    }
}

impl fmt::Display for ExactEigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactEigenvalue::Integer(k) => write!(f, "{k}"),
            ExactEigenvalue::TwoPiSqrt { negative, norm_sq } => {
                let sign = if *negative { "-" } else { "" };
                write!(f, "{sign}2*pi*sqrt({})", format_rational(norm_sq))
            }
        }
    }
}

impl FromStr for ExactEigenvalue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Ok(k) = s.parse::<i64>() {
            return Ok(ExactEigenvalue::Integer(k));
        }
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let inner = body
            .strip_prefix("2*pi*sqrt(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::InvalidInput(format!("unrecognised exact eigenvalue {s:?}")))?;
        let norm_sq = parse_rational(inner)?;
        if norm_sq.is_negative() {
            return Err(Error::InvalidInput(format!("negative radicand in {s:?}")));
        }
        Ok(ExactEigenvalue::TwoPiSqrt { negative, norm_sq })
    }
}

/// `n!` as a big integer.
pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}
