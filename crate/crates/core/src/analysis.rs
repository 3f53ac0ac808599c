//! Spectral consequences checked on computed spectra: Weyl asymptotics, the
//! curl/Laplace counting identity on tori, partial ζ and η sums, ζ(0), and
//! curvature lower bounds.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{binomial, factorial, ExactEigenvalue, PiRational};
use crate::spectrum::{
    check_dimension, counting, le_tol, symmetry_defect, ManifoldDescriptor, Sign, Spectrum, FLOAT_TOLERANCE,
};
use crate::torus::{dual_lattice, torus_spectrum, EnumerationConfig, LatticeBasis};

/// Leading Weyl coefficient `c` in `N±(λ) ~ c·λⁿ`, as a float and, when the
/// volume is known exactly, as a rational multiple of a power of π.
#[derive(Clone, Debug, PartialEq)]
pub struct WeylCoefficient {
    pub value: f64,
    pub exact: Option<PiRational>,
}

fn weyl_denominator(n: u32) -> PiRational {
    // 2·π^((n+1)/2)·n·((n-1)/2)!
    let h = u64::from((n - 1) / 2);
    PiRational::new(BigRational::from_integer(BigInt::from(2 * n) * factorial(h)), (n as i32 + 1) / 2)
}

/// `vol(M) / (2·π^((n+1)/2)·n·((n-1)/2)!)`.
pub fn weyl_leading_coefficient(n: u32, volume: f64) -> Result<f64> {
    check_dimension(n)?;
    if !(volume > 0.0) {
        return Err(Error::InvalidInput(format!("volume must be positive, got {volume}")));
    }
    Ok(volume / weyl_denominator(n).to_f64())
}

pub fn weyl_leading_coefficient_exact(n: u32, volume: &PiRational) -> Result<PiRational> {
    check_dimension(n)?;
    Ok(volume.div(&weyl_denominator(n)))
}

pub fn weyl_coefficient_for(descriptor: &ManifoldDescriptor) -> Result<WeylCoefficient> {
    let n = descriptor.n();
    Ok(WeylCoefficient {
        value: weyl_leading_coefficient(n, descriptor.volume())?,
        exact: descriptor
            .volume_exact()
            .map(|v| weyl_leading_coefficient_exact(n, v))
            .transpose()?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylSample {
    pub lambda: f64,
    pub n_plus: u64,
    pub n_minus: u64,
    pub predicted: f64,
    pub relative_error_plus: f64,
    pub relative_error_minus: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeylReport {
    pub coefficient: f64,
    pub coefficient_exact: Option<String>,
    pub samples: Vec<WeylSample>,
    /// Least-squares slope of log(relative error) against log(λ).
    pub trend_slope: f64,
}

impl WeylReport {
    /// `lambda,relative_error` using the larger of the two signed errors.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["lambda", "relative_error"]).expect("in-memory write");
        for s in &self.samples {
            let e = s.relative_error_plus.max(s.relative_error_minus);
            w.write_record([s.lambda.to_string(), e.to_string()]).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
    }
}

/// Number of geometrically spaced sample points used by [`weyl_fit`].
pub const WEYL_SAMPLES: usize = 12;

/// `(|N₊/(cλⁿ) - 1|, |N₋/(cλⁿ) - 1|)` at a single `λ`.
pub fn weyl_relative_error(spectrum: &Spectrum, lambda: f64) -> Result<(f64, f64)> {
    let c = weyl_coefficient_for(spectrum.descriptor())?.value;
    let predicted = c * lambda.powi(spectrum.descriptor().n() as i32);
    let plus = counting(spectrum, Sign::Plus, lambda)? as f64;
    let minus = counting(spectrum, Sign::Minus, lambda)? as f64;
    Ok(((plus / predicted - 1.0).abs(), (minus / predicted - 1.0).abs()))
}

/// Compares `N±(λ)` with `cλⁿ` at [`WEYL_SAMPLES`] points between twice the
/// smallest `|λ|` and the truncation.
pub fn weyl_fit(spectrum: &Spectrum) -> Result<WeylReport> {
    let coefficient = weyl_coefficient_for(spectrum.descriptor())?;
    let smallest = spectrum
        .lines()
        .iter()
        .map(|l| l.lambda.abs())
        .fold(f64::INFINITY, f64::min);
    let top = spectrum.truncation();
    if !smallest.is_finite() || top < 8.0 * smallest {
        return Err(Error::InvalidInput(format!(
            "insufficient truncation for a Weyl fit: need at least 8x the smallest |lambda| ({smallest})"
        )));
    }
    let low = 2.0 * smallest;
    let n = spectrum.descriptor().n() as i32;
    let mut samples = Vec::with_capacity(WEYL_SAMPLES);
    for i in 0..WEYL_SAMPLES {
        let t = i as f64 / (WEYL_SAMPLES - 1) as f64;
        let lambda = if i + 1 == WEYL_SAMPLES { top } else { low * (top / low).powf(t) };
        let predicted = coefficient.value * lambda.powi(n);
        let n_plus = counting(spectrum, Sign::Plus, lambda)?;
        let n_minus = counting(spectrum, Sign::Minus, lambda)?;
        samples.push(WeylSample {
            lambda,
            n_plus,
            n_minus,
            predicted,
            relative_error_plus: (n_plus as f64 / predicted - 1.0).abs(),
            relative_error_minus: (n_minus as f64 / predicted - 1.0).abs(),
        });
    }
    let points: Vec<(f64, f64)> = samples
        .iter()
        .map(|s| (s.lambda.ln(), s.relative_error_plus.max(s.relative_error_minus)))
        .filter(|(_, e)| *e > 0.0)
        .map(|(x, e)| (x, e.ln()))
        .collect();
    Ok(WeylReport {
        coefficient: coefficient.value,
        coefficient_exact: coefficient.exact.map(|c| c.to_string()),
        samples,
        trend_slope: slope(&points),
    })
}

fn slope(points: &[(f64, f64)]) -> f64 {
    if points.len() < 2 {
        return 0.0;
    }
    let k = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / k;
    let my = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CountingIdentity {
    pub lambda_bits: u64,
    /// `N₊(λ) + N₋(λ)` from the curl spectrum.
    pub lhs: i64,
    /// `(-1)^((n-1)/2) Σ_p (-1)^p C(n,p) N(0, λ²)` from the Laplace count.
    pub rhs: i64,
}

/// Checks `N₊ + N₋ = (-1)^((n-1)/2) Σ_{p ≤ (n-1)/2} (-1)^p N(p, λ²)` on a flat
/// torus, where `N(p, ·) = C(n,p)·N(0, ·)`. The Laplace side counts dual lattice
/// vectors by a plain coefficient-box scan, independent of shell enumeration.
pub fn counting_identity_check_torus(
    basis: &LatticeBasis,
    lambda: f64,
    config: &EnumerationConfig,
) -> Result<CountingIdentity> {
    let spectrum = torus_spectrum(basis, lambda, config)?;
    let lhs = (counting(&spectrum, Sign::Plus, lambda)? + counting(&spectrum, Sign::Minus, lambda)?) as i64;

    let laplace = box_count_dual(basis, lambda / (2.0 * PI))? as i64;
    let n = basis.n() as u64;
    let h = (n - 1) / 2;
    let alternating: i64 = (0..=h)
        .map(|p| {
            let b = binomial(n, p) as i64;
            if p % 2 == 0 {
                b
            } else {
                -b
            }
        })
        .sum();
    let sign = if h % 2 == 0 { 1 } else { -1 };
    let rhs = sign * alternating * laplace;
    if lhs != rhs {
        return Err(Error::CountingMismatch { lambda, lhs, rhs });
    }
    Ok(CountingIdentity { lambda_bits: lambda.to_bits(), lhs, rhs })
}

/// Nonzero `μ ∈ Γ*` with `|μ| ≤ radius`. With `μ = Σ cᵢ b*ᵢ` one has
/// `cᵢ = ⟨bᵢ, μ⟩`, so `|cᵢ| ≤ |bᵢ|·radius` bounds the box.
fn box_count_dual(basis: &LatticeBasis, radius: f64) -> Result<u64> {
    let dual = dual_lattice(basis)?;
    let n = basis.n();
    let limit = radius * radius * (1.0 + FLOAT_TOLERANCE);
    let bounds: Vec<i64> = basis
        .rows_f64()
        .iter()
        .map(|row| (row.iter().map(|x| x * x).sum::<f64>().sqrt() * radius).floor() as i64)
        .collect();
    let exact_gram = dual.gram_exact();
    let gram = dual.gram_f64();
    let mut c = bounds.iter().map(|b| -b).collect::<Vec<i64>>();
    let mut total = 0u64;
    loop {
        if c.iter().any(|&x| x != 0) {
            let inside = match &exact_gram {
                Some(g) => {
                    let mut q = BigRational::from_integer(0.into());
                    for i in 0..n {
                        for j in 0..n {
                            q += &g[i][j] * BigRational::from_integer((c[i] * c[j]).into());
                        }
                    }
                    q.to_f64().unwrap_or(f64::INFINITY) <= limit
                }
                None => {
                    let mut q = 0.0;
                    for i in 0..n {
                        for j in 0..n {
                            q += gram[i][j] * (c[i] * c[j]) as f64;
                        }
                    }
                    q <= limit
                }
            };
            if inside {
                total += 1;
            }
        }
        // odometer step
        let mut i = 0;
        loop {
            if i == n {
                return Ok(total);
            }
            if c[i] < bounds[i] {
                c[i] += 1;
                break;
            }
            c[i] = -bounds[i];
            i += 1;
        }
    }
}

/// A partial ζ sum together with the Weyl estimate of the missing tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ZetaPartial {
    pub s: f64,
    pub partial: f64,
    /// `2c·n/(s-n)·λ_max^(n-s)`.
    pub tail: f64,
}

/// `Σ_{0<|λ|≤λ_max} m(λ)|λ|^{-s}` for `s > n`.
pub fn zeta_partial(spectrum: &Spectrum, s: f64) -> Result<ZetaPartial> {
    let n = f64::from(spectrum.descriptor().n());
    if !(s > n) {
        return Err(Error::InvalidInput(format!("zeta partial sums need s > n = {n}, got {s}")));
    }
    let partial = 0.0
        + spectrum
            .lines()
            .iter()
            .map(|l| l.multiplicity as f64 * l.lambda.abs().powf(-s))
            .sum::<f64>();
    let c = weyl_coefficient_for(spectrum.descriptor())?.value;
    let tail = 2.0 * c * n / (s - n) * spectrum.truncation().powf(n - s);
    Ok(ZetaPartial { s, partial, tail })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZetaZero {
    pub value: i64,
    /// `ζ(0) mod 2`.
    pub semi_characteristic: u8,
}

/// `ζ(0) = (-1)^((n+1)/2) Σ_{p ≤ (n-1)/2} (-1)^p b_p`.
pub fn zeta_at_zero(descriptor: &ManifoldDescriptor) -> ZetaZero {
    let alternating: i64 = descriptor
        .betti()
        .iter()
        .enumerate()
        .map(|(p, &b)| if p % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum();
    let sign = if ((descriptor.n() + 1) / 2) % 2 == 0 { 1 } else { -1 };
    let value = sign * alternating;
    ZetaZero { value, semi_characteristic: value.rem_euclid(2) as u8 }
}

/// `Σ_{λ>0} (m(λ) - m(-λ))·λ^{-s}` over the computed window; zero for
/// symmetric spectra.
pub fn eta_partial(spectrum: &Spectrum, s: f64) -> f64 {
    // an empty f64 sum is -0.0
    0.0 + symmetry_defect(spectrum)
        .iter()
        .map(|d| d.defect as f64 * d.lambda.powf(-s))
        .sum::<f64>()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// `𝒦 ≥ κ` in any odd dimension: `|λ| ≥ (n+1)/2·√κ`.
    CurvatureOperator,
    /// `Ric ≥ 2κ` in dimension 3: `|λ| ≥ 2√κ`.
    Ricci3d,
}

impl std::str::FromStr for BoundKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "curvature-operator" => Ok(BoundKind::CurvatureOperator),
            "ricci-3d" => Ok(BoundKind::Ricci3d),
            other => Err(Error::InvalidInput(format!("unknown bound kind {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub kappa: f64,
    pub bound: f64,
    pub kind: BoundKind,
    pub min_abs_lambda: Option<f64>,
    pub attained: bool,
    pub pass: bool,
    /// `(m(bound), m(-bound))`.
    pub multiplicities_at_bound: (u64, u64),
}

/// Checks every line against the curvature lower bound and reports the
/// multiplicities sitting exactly at `±bound`.
pub fn check_lower_bound(spectrum: &Spectrum, kappa: f64, kind: BoundKind) -> Result<BoundReport> {
    if !(kappa.is_finite() && kappa > 0.0) {
        return Err(Error::InvalidInput(format!("kappa must be positive, got {kappa}")));
    }
    let n = spectrum.descriptor().n();
    let factor = match kind {
        BoundKind::CurvatureOperator => f64::from((n + 1) / 2),
        BoundKind::Ricci3d => {
            if n != 3 {
                return Err(Error::InvalidInput("the Ricci bound applies to n = 3 only".into()));
            }
            2.0
        }
    };
    let bound = factor * kappa.sqrt();
    // integral bound → exact comparisons against integer eigenvalues
    let integral = (bound - bound.round()).abs() <= 1e-12 * bound.max(1.0);
    let exact_bound = integral.then(|| bound.round() as i64);

    let above = |lambda: f64, exact: Option<&ExactEigenvalue>| -> bool {
        match (exact_bound, exact) {
            (Some(b), Some(ExactEigenvalue::Integer(k))) => k.abs() >= b,
            _ => le_tol(bound, lambda.abs()),
        }
    };
    let pass = spectrum.lines().iter().all(|l| above(l.lambda, l.exact.as_ref()));
    let min_abs_lambda = spectrum
        .lines()
        .iter()
        .map(|l| l.lambda.abs())
        .reduce(f64::min);
    let multiplicities_at_bound = match exact_bound {
        Some(b) => (
            spectrum.multiplicity_exact(&ExactEigenvalue::Integer(b)),
            spectrum.multiplicity_exact(&ExactEigenvalue::Integer(-b)),
        ),
        None => (spectrum.multiplicity_at(bound), spectrum.multiplicity_at(-bound)),
    };
    let attained = multiplicities_at_bound.0 + multiplicities_at_bound.1 > 0;
    Ok(BoundReport { kappa, bound, kind, min_abs_lambda, attained, pass, multiplicities_at_bound })
}
