//! Curl spectra of spherical space forms `Γ\S³`.
//!
//! Every space form has the eigenvalues of `S³`, `±(2+k)`, with multiplicities
//! collected in the Poincaré series
//!
//! ```text
//! F±(z) = 1/(1+z²) · (1 + 1/|Γ| Σ_γ (χ±(γ) - 1 - z²(χ∓(γ) - 1)) / det(1 - zγ))
//! ```
//!
//! The series are summed element by element in high-precision fixed point and
//! then rounded. True coefficients are multiplicities, so the rounding residual
//! is an end-to-end check on the whole computation.

mod characters;
mod fixed;
mod group;

pub use characters::{characters, chi_pm, det_one_minus_z, det_one_minus_z_poly, exterior_square};
pub use fixed::{bits_for_digits, cos_sin_turn, pi, Fixed, Real};
pub use group::{
    assert_fixed_point_free, block_rotation, close_group, determinant4, identity_matrix, mat_mul,
    AngleTag, GroupElement, GroupInput, IsometryGroup, Matrix4, DEFAULT_CLOSURE_CAP, MATRIX_TOLERANCE,
    ORTHOGONALITY_TOLERANCE,
};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::PiRational;
use crate::spectrum::{validate_spectrum, Family, ManifoldDescriptor, SpectralLine, Spectrum};

/// Largest accepted distance of a raw coefficient from the nearest integer.
pub const RESIDUAL_GATE: f64 = 1e-6;
pub const DEFAULT_ORDER: usize = 32;

/// Working precision and the escalation policy for the residual gate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SeriesConfig {
    pub digits: u32,
    /// Each retry doubles `digits`.
    pub max_retries: u32,
}

impl Default for SeriesConfig {
    fn default() -> Self {
        Self { digits: 60, max_retries: 3 }
    }
}

/// Truncated `F₊`, `F₋` (index k ↔ eigenvalue `±(2+k)`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesPair {
    pub plus: Vec<u64>,
    pub minus: Vec<u64>,
    pub order: usize,
    /// Largest distance of a raw coefficient from its rounded value.
    pub residual: f64,
    /// Decimal digits of the precision that passed the gate.
    pub digits: u32,
}

/// Truncated auxiliary series `G₊`, `G₋`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AuxiliarySeries {
    pub plus: Vec<i64>,
    pub minus: Vec<i64>,
    pub residual: f64,
}

/// Per-element data at one precision.
struct ElementData {
    chi_plus: Fixed,
    chi_minus: Fixed,
    /// Power series of `1 / det(1 - zγ)` through the requested order.
    inverse_det: Vec<Fixed>,
}

fn element_data(g: &GroupElement, order: usize, bits: u32) -> ElementData {
    let a = g.high_precision(bits);
    let (chi_plus, chi_minus) = characters(&a);
    let d = det_one_minus_z_poly(&a);
    // a_m = -Σ_{i=1..4} d_i a_{m-i}, a_0 = 1
    let mut inverse_det: Vec<Fixed> = Vec::with_capacity(order + 1);
    inverse_det.push(Fixed::from_int(1, bits));
    for m in 1..=order {
        let mut acc = Fixed::zero(bits);
        for i in 1..=4.min(m) {
            acc = &acc - &(&d[i] * &inverse_det[m - i]);
        }
        inverse_det.push(acc);
    }
    ElementData { chi_plus, chi_minus, inverse_det }
}

fn collect(group: &IsometryGroup, order: usize, bits: u32) -> Vec<ElementData> {
    group.elements().iter().map(|g| element_data(g, order, bits)).collect()
}

fn get(series: &[Fixed], k: isize, bits: u32) -> Fixed {
    if k < 0 {
        Fixed::zero(bits)
    } else {
        series[k as usize].clone()
    }
}

/// `1 + 1/|Γ| Σ_γ (a_γ - z² b_γ)/det(1 - zγ)` where `(a, b)` picks `(χ⁺-1, χ⁻-1)`
/// or the mirrored pair.
fn bracket(data: &[ElementData], order: usize, bits: u32, plus: bool) -> Vec<Fixed> {
    let one = Fixed::from_int(1, bits);
    let mut sum = vec![Fixed::zero(bits); order + 1];
    for e in data {
        let (a, b) = if plus {
            (&e.chi_plus - &one, &e.chi_minus - &one)
        } else {
            (&e.chi_minus - &one, &e.chi_plus - &one)
        };
        for (k, slot) in sum.iter_mut().enumerate() {
            let term = &(&a * &e.inverse_det[k]) - &(&b * &get(&e.inverse_det, k as isize - 2, bits));
            *slot = &*slot + &term;
        }
    }
    let order_g = data.len() as i64;
    let mut out: Vec<Fixed> = sum.iter().map(|s| s.div_int(order_g)).collect();
    out[0] = &out[0] + &one;
    out
}

/// Multiplies by `1/(1+z²) = Σ (-1)ʲ z²ʲ`: `f_k = s_k - f_{k-2}`.
fn divide_one_plus_z2(s: &[Fixed], bits: u32) -> Vec<Fixed> {
    let mut f: Vec<Fixed> = Vec::with_capacity(s.len());
    for k in 0..s.len() {
        let prev = get(&f, k as isize - 2, bits);
        f.push(&s[k] - &prev);
    }
    f
}

fn round_series(raw: &[Fixed]) -> (Vec<i64>, f64, Option<(usize, f64, f64)>) {
    let mut worst = 0.0f64;
    let mut worst_at = None;
    let mut out = Vec::with_capacity(raw.len());
    for (k, v) in raw.iter().enumerate() {
        let (n, r) = v.round();
        if r > worst {
            worst = r;
        }
        if r > RESIDUAL_GATE && worst_at.is_none() {
            worst_at = Some((k, v.to_f64(), r));
        }
        out.push(n.to_i64().unwrap_or(i64::MAX));
    }
    (out, worst, worst_at)
}

/// Runs `attempt` at increasing precision until every residual passes.
fn with_escalation<T>(
    config: &SeriesConfig,
    series: &'static str,
    mut attempt: impl FnMut(u32) -> (T, f64, Option<(usize, f64, f64)>),
) -> Result<(T, f64, u32)> {
    let mut digits = config.digits.max(1);
    let mut last = None;
    for _ in 0..=config.max_retries {
        let (value, residual, failure) = attempt(bits_for_digits(digits));
        match failure {
            None => return Ok((value, residual, digits)),
            Some(f) => last = Some(f),
        }
        digits = digits.saturating_mul(2);
    }
    let (index, value, residual) = last.expect("at least one attempt");
    Err(Error::Residual { series, index, value, residual })
}

fn nonnegative(coeffs: Vec<i64>, series: &'static str) -> Result<Vec<u64>> {
    coeffs
        .into_iter()
        .enumerate()
        .map(|(index, v)| u64::try_from(v).map_err(|_| Error::NegativeCoefficient { series, index, value: v }))
        .collect()
}

/// Coefficients `0..=order` of `F₊` and `F₋`.
#[allow(non_snake_case)]
pub fn poincare_F(group: &IsometryGroup, order: usize, config: &SeriesConfig) -> Result<SeriesPair> {
    assert_fixed_point_free(group)?;
    let ((plus, minus), residual, digits) = with_escalation(config, "F", |bits| {
        let data = collect(group, order, bits);
        let fp = divide_one_plus_z2(&bracket(&data, order, bits, true), bits);
        let fm = divide_one_plus_z2(&bracket(&data, order, bits, false), bits);
        let (p, rp, bad_p) = round_series(&fp);
        let (m, rm, bad_m) = round_series(&fm);
        ((p, m), rp.max(rm), bad_p.or(bad_m))
    })?;
    Ok(SeriesPair {
        plus: nonnegative(plus, "F+")?,
        minus: nonnegative(minus, "F-")?,
        order,
        residual,
        digits,
    })
}

/// `G±(z) = 1 + (1 - z²)/|Γ| Σ_γ (χ±(γ) - 1)/det(1 - zγ)`, computed
/// independently of `F±` and used to cross-check `F₊ + z²F₋ = G₊`.
#[allow(non_snake_case)]
pub fn auxiliary_G(group: &IsometryGroup, order: usize, config: &SeriesConfig) -> Result<AuxiliarySeries> {
    assert_fixed_point_free(group)?;
    let ((plus, minus), residual, _) = with_escalation(config, "G", |bits| {
        let data = collect(group, order, bits);
        let one = Fixed::from_int(1, bits);
        let g_series = |plus: bool| -> Vec<Fixed> {
            let mut sum = vec![Fixed::zero(bits); order + 1];
            for e in &data {
                let c = if plus { &e.chi_plus - &one } else { &e.chi_minus - &one };
                for (k, slot) in sum.iter_mut().enumerate() {
                    let diff = &e.inverse_det[k] - &get(&e.inverse_det, k as isize - 2, bits);
                    *slot = &*slot + &(&c * &diff);
                }
            }
            let mut out: Vec<Fixed> = sum.iter().map(|s| s.div_int(data.len() as i64)).collect();
            out[0] = &out[0] + &one;
            out
        };
        let (p, rp, bad_p) = round_series(&g_series(true));
        let (m, rm, bad_m) = round_series(&g_series(false));
        ((p, m), rp.max(rm), bad_p.or(bad_m))
    })?;
    Ok(AuxiliarySeries { plus, minus, residual })
}

pub fn spaceform_descriptor(group: &IsometryGroup) -> Result<ManifoldDescriptor> {
    let volume = PiRational::new(BigRational::new(BigInt::from(2), BigInt::from(group.order())), 2);
    ManifoldDescriptor::exact(Family::Spaceform, 3, volume, vec![1, 0])
}

/// Lines `+(2+k)` with multiplicity `F₊[k]` and `-(2+k)` with `F₋[k]`, for `k ≤ k_max`.
pub fn spaceform_spectrum(group: &IsometryGroup, k_max: usize, config: &SeriesConfig) -> Result<Spectrum> {
    let series = poincare_F(group, k_max, config)?;
    spectrum_from_series(group, &series)
}

pub fn spectrum_from_series(group: &IsometryGroup, series: &SeriesPair) -> Result<Spectrum> {
    let mut lines = Vec::new();
    for k in 0..=series.order {
        let lambda = 2 + k as i64;
        if series.plus[k] > 0 {
            lines.push(SpectralLine::integer(lambda, series.plus[k]));
        }
        if series.minus[k] > 0 {
            lines.push(SpectralLine::integer(-lambda, series.minus[k]));
        }
    }
    validate_spectrum(lines, spaceform_descriptor(group)?, (2 + series.order) as f64)
}

/// `(m(curl, 2), m(curl, -2)) = (avg χ⁺, avg χ⁻)` over the group.
pub fn smallest_eigenvalue_multiplicities(group: &IsometryGroup, config: &SeriesConfig) -> Result<(u64, u64)> {
    assert_fixed_point_free(group)?;
    let ((p, m), _, _) = with_escalation(config, "character average", |bits| {
        let mut sp = Fixed::zero(bits);
        let mut sm = Fixed::zero(bits);
        for g in group.elements() {
            let (cp, cm) = characters(&g.high_precision(bits));
            sp = &sp + &cp;
            sm = &sm + &cm;
        }
        let n = group.order() as i64;
        let raw = [sp.div_int(n), sm.div_int(n)];
        let (v, r, bad) = round_series(&raw);
        ((v[0], v[1]), r, bad)
    })?;
    let v = nonnegative(vec![p, m], "character average")?;
    Ok((v[0], v[1]))
}

/// Sample points inside the unit disc for the rational-function certificate.
pub const CERTIFICATE_POINTS: [f64; 5] = [-0.6, -0.3, 0.2, 0.45, 0.7];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AsymmetryCertificate {
    pub symmetric: bool,
    /// Coefficients of `F₊ - F₋` through the requested order.
    pub defect: Vec<i64>,
    /// `(z, Σ_{γ≠1} (χ⁺(γ) - χ⁻(γ))/det(I - zγ))` evaluated directly.
    pub samples: Vec<(f64, f64)>,
    /// Whether the sampled rational sum vanishes (agrees with `symmetric`
    /// unless the truncation order is too small to see the asymmetry).
    pub rational_sum_vanishes: bool,
}

/// Decides whether the spectrum is symmetric about 0, by the series defect
/// and, independently, by evaluating the character sum at a few points.
pub fn asymmetry_certificate(group: &IsometryGroup, order: usize, config: &SeriesConfig) -> Result<AsymmetryCertificate> {
    let series = poincare_F(group, order, config)?;
    let defect: Vec<i64> = series
        .plus
        .iter()
        .zip(&series.minus)
        .map(|(&p, &m)| p as i64 - m as i64)
        .collect();
    let symmetric = defect.iter().all(|&d| d == 0);

    let mut vanishes = true;
    let mut samples = Vec::with_capacity(CERTIFICATE_POINTS.len());
    for &z in &CERTIFICATE_POINTS {
        let mut value = 0.0;
        let mut scale = 0.0;
        for g in group.elements().iter().skip(1) {
            let (cp, cm) = chi_pm(g);
            let mut m = identity_matrix();
            for (i, row) in m.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v -= z * g.matrix()[i][j];
                }
            }
            let det = determinant4(&m);
            value += (cp - cm) / det;
            scale += (cp.abs() + cm.abs()) / det.abs();
        }
        if value.abs() > MATRIX_TOLERANCE * (1.0 + scale) {
            vanishes = false;
        }
        samples.push((z, value));
    }
    Ok(AsymmetryCertificate { symmetric, defect, samples, rational_sum_vanishes: vanishes })
}
