//! Closed-form curl spectrum of the round sphere `Sⁿ` of curvature 1:
//! eigenvalues `±((n+1)/2 + k)` with multiplicity
//! `(n+k)! / (((n-1)/2)!² · k! · ((n+1)/2 + k))`.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::{factorial, PiRational};
use crate::spectrum::{check_dimension, validate_spectrum, Family, ManifoldDescriptor, SpectralLine, Spectrum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SphereParams {
    pub n: u32,
    pub k_max: u64,
}

impl SphereParams {
    pub fn new(n: u32, k_max: u64) -> Result<Self> {
        check_dimension(n)?;
        Ok(Self { n, k_max })
    }
}

/// `m(curl, ±((n+1)/2 + k))` on `Sⁿ` as an exact integer.
///
/// Panics if the division is not exact, which would mean the formula was
/// mistranscribed; `n` must be odd.
pub fn sphere_multiplicity(n: u32, k: u64) -> BigUint {
    assert!(n % 2 == 1, "sphere dimension must be odd");
    let h = u64::from((n - 1) / 2);
    let numerator = factorial(u64::from(n) + k);
    let half = factorial(h);
    let denominator = &half * &half * factorial(k) * BigInt::from(h + 1 + k);
    let (q, r) = numerator.div_rem(&denominator);
    assert!(r.is_zero(), "sphere multiplicity must be an integer");
    q.to_biguint().expect("positive")
}

/// `vol(Sⁿ) = 2π^((n+1)/2) / ((n-1)/2)!`.
pub fn sphere_volume(n: u32) -> PiRational {
    let h = u64::from((n - 1) / 2);
    PiRational::new(BigRational::new(BigInt::from(2), factorial(h)), (n as i32 + 1) / 2)
}

pub fn sphere_descriptor(n: u32) -> Result<ManifoldDescriptor> {
    check_dimension(n)?;
    let mut betti = vec![0; (n as usize - 1) / 2 + 1];
    betti[0] = 1;
    ManifoldDescriptor::exact(Family::Sphere, n, sphere_volume(n), betti)
}

/// Lines `±((n+1)/2 + k)` for `k = 0..=k_max`.
pub fn sphere_spectrum(params: SphereParams) -> Result<Spectrum> {
    let SphereParams { n, k_max } = params;
    check_dimension(n)?;
    let base = i64::from((n + 1) / 2);
    let mut lines = Vec::with_capacity(2 * k_max as usize + 2);
    for k in 0..=k_max {
        let m = sphere_multiplicity(n, k).to_u64().ok_or(Error::Overflow)?;
        let lambda = base + k as i64;
        lines.push(SpectralLine::integer(lambda, m));
        lines.push(SpectralLine::integer(-lambda, m));
    }
    validate_spectrum(lines, sphere_descriptor(n)?, (base + k_max as i64) as f64)
}
