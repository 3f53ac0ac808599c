//! Canonical spectrum representation shared by every manifold family.
//!
//! A [`Spectrum`] only ever stores nonzero eigenvalues. The kernel of curl is
//! infinite-dimensional on every closed manifold and is implied by the
//! descriptor rather than stored as a line, so the counting functions here
//! never see it.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{format_rational, ExactEigenvalue, PiRational};

/// Relative tolerance for comparing eigenvalues that lack an exact form.
pub const FLOAT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Torus,
    Sphere,
    Spaceform,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Family, dimension, volume and the Betti numbers `b_0 ..= b_{(n-1)/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct ManifoldDescriptor {
    family: Family,
    n: u32,
    volume: f64,
    volume_exact: Option<PiRational>,
    betti: Vec<u64>,
}

impl ManifoldDescriptor {
    pub fn new(
        family: Family,
        n: u32,
        volume: f64,
        volume_exact: Option<PiRational>,
        betti: Vec<u64>,
    ) -> Result<Self> {
        check_dimension(n)?;
        if !(volume.is_finite() && volume > 0.0) {
            return Err(Error::InvalidInput(format!("volume must be positive, got {volume}")));
        }
        if betti.len() != (n as usize - 1) / 2 + 1 {
            return Err(Error::InvalidInput(format!(
                "expected {} Betti numbers for n = {n}, got {}",
                (n - 1) / 2 + 1,
                betti.len()
            )));
        }
        if betti[0] != 1 {
            return Err(Error::InvalidInput("b_0 must be 1 for a connected manifold".into()));
        }
        Ok(Self { family, n, volume, volume_exact, betti })
    }

    /// Descriptor with volume given exactly.
    pub fn exact(family: Family, n: u32, volume: PiRational, betti: Vec<u64>) -> Result<Self> {
        let v = volume.to_f64();
        Self::new(family, n, v, Some(volume), betti)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    pub fn volume_exact(&self) -> Option<&PiRational> {
        self.volume_exact.as_ref()
    }

    pub fn betti(&self) -> &[u64] {
        &self.betti
    }
}

pub(crate) fn check_dimension(n: u32) -> Result<()> {
    if n < 3 || n % 2 == 0 {
        return Err(Error::InvalidInput(format!("dimension must be odd and at least 3, got {n}")));
    }
    Ok(())
}

/// One eigenvalue with its multiplicity `m(curl, λ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralLine {
    pub lambda: f64,
    pub exact: Option<ExactEigenvalue>,
    pub multiplicity: u64,
}

impl SpectralLine {
    pub fn exact(value: ExactEigenvalue, multiplicity: u64) -> Self {
        Self { lambda: value.to_f64(), exact: Some(value), multiplicity }
    }

    pub fn approximate(lambda: f64, multiplicity: u64) -> Self {
        Self { lambda, exact: None, multiplicity }
    }

    pub fn integer(lambda: i64, multiplicity: u64) -> Self {
        Self::exact(ExactEigenvalue::Integer(lambda), multiplicity)
    }

    fn is_zero(&self) -> bool {
        match &self.exact {
            Some(e) => e.is_zero(),
            None => self.lambda == 0.0,
        }
    }
}

/// Compares two eigenvalues, exactly when both have compatible exact forms.
pub fn compare_eigenvalues(
    a: (f64, Option<&ExactEigenvalue>),
    b: (f64, Option<&ExactEigenvalue>),
) -> Ordering {
    if let (Some(x), Some(y)) = (a.1, b.1) {
        if let Some(ord) = x.exact_cmp(y) {
            return ord;
        }
    }
    if approx_eq(a.0, b.0) {
        Ordering::Equal
    } else {
        a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal)
    }
}

pub(crate) fn approx_eq(a: f64, b: f64) -> bool {
    (a - b).abs() <= FLOAT_TOLERANCE * a.abs().max(b.abs())
}

/// `a ≤ b` up to the relative float tolerance.
pub(crate) fn le_tol(a: f64, b: f64) -> bool {
    a <= b + FLOAT_TOLERANCE * a.abs().max(b.abs())
}

fn line_cmp(a: &SpectralLine, b: &SpectralLine) -> Ordering {
    compare_eigenvalues((a.lambda, a.exact.as_ref()), (b.lambda, b.exact.as_ref()))
}

/// A truncated spectrum: every eigenvalue with `|λ| ≤ truncation` is present,
/// sorted ascending with distinct eigenvalues.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    lines: Vec<SpectralLine>,
    descriptor: ManifoldDescriptor,
    truncation: f64,
}

/// Sorts, merges equal eigenvalues and checks every invariant.
pub fn validate_spectrum(
    lines: Vec<SpectralLine>,
    descriptor: ManifoldDescriptor,
    truncation: f64,
) -> Result<Spectrum> {
    if !(truncation.is_finite() && truncation > 0.0) {
        return Err(Error::InvalidInput(format!("truncation must be positive, got {truncation}")));
    }
    let mut checked = Vec::with_capacity(lines.len());
    for mut line in lines {
        if let Some(e) = &line.exact {
            line.lambda = e.to_f64();
        }
        if !line.lambda.is_finite() {
            return Err(Error::InvalidInput(format!("non-finite eigenvalue {}", line.lambda)));
        }
        if line.is_zero() {
            return Err(Error::ZeroEigenvalue);
        }
        if line.multiplicity == 0 {
            return Err(Error::NonPositiveMultiplicity { lambda: line.lambda });
        }
        if !le_tol(line.lambda.abs(), truncation) {
            return Err(Error::BeyondTruncation { lambda: line.lambda, truncation });
        }
        checked.push(line);
    }
    checked.sort_by(line_cmp);

    let mut merged: Vec<SpectralLine> = Vec::with_capacity(checked.len());
    for line in checked {
        match merged.last_mut() {
            Some(last) if line_cmp(last, &line) == Ordering::Equal => {
                last.multiplicity = last
                    .multiplicity
                    .checked_add(line.multiplicity)
                    .ok_or(Error::Overflow)?;
                if last.exact.is_none() {
                    last.exact = line.exact;
                    last.lambda = line.lambda;
                }
            }
            _ => merged.push(line),
        }
    }
    Ok(Spectrum { lines: merged, descriptor, truncation })
}

impl Spectrum {
    pub fn lines(&self) -> &[SpectralLine] {
        &self.lines
    }

    pub fn descriptor(&self) -> &ManifoldDescriptor {
        &self.descriptor
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// True when some line has no exact eigenvalue (tolerance-clustered shells).
    pub fn approximate(&self) -> bool {
        self.lines.iter().any(|l| l.exact.is_none())
    }

    /// `m(curl, λ)` for a value inside the truncation window; 0 if absent.
    pub fn multiplicity_at(&self, lambda: f64) -> u64 {
        self.lines
            .iter()
            .find(|l| approx_eq(l.lambda, lambda))
            .map_or(0, |l| l.multiplicity)
    }

    /// Multiplicity of an exactly specified eigenvalue.
    pub fn multiplicity_exact(&self, value: &ExactEigenvalue) -> u64 {
        let probe = (value.to_f64(), Some(value));
        self.lines
            .iter()
            .find(|l| compare_eigenvalues((l.lambda, l.exact.as_ref()), probe) == Ordering::Equal)
            .map_or(0, |l| l.multiplicity)
    }

    /// Sum of all multiplicities in the window.
    pub fn total_multiplicity(&self) -> u64 {
        self.lines.iter().map(|l| l.multiplicity).sum()
    }

    pub fn to_json(&self) -> SpectrumJson {
        let torus = self.descriptor.family == Family::Torus;
        SpectrumJson {
            family: self.descriptor.family,
            n: self.descriptor.n,
            volume: self.descriptor.volume,
            volume_exact: self.descriptor.volume_exact.as_ref().map(|v| v.to_string()),
            betti: self.descriptor.betti.clone(),
            truncation: self.truncation,
            approximate_shells: self.approximate(),
            lines: self
                .lines
                .iter()
                .map(|l| LineJson {
                    lambda_exact: l.exact.as_ref().map(|e| e.to_string()),
                    lambda_float: l.lambda,
                    multiplicity: l.multiplicity,
                    shell_norm_sq: torus.then(|| shell_datum(l)),
                })
                .collect(),
        }
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json()).expect("spectrum serializes")
    }

    /// Two columns, `lambda,multiplicity`.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(["lambda", "multiplicity"]).expect("in-memory write");
        for line in &self.lines {
            writer
                .write_record([line.lambda.to_string(), line.multiplicity.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf8 csv")
    }

    pub fn from_json_str(text: &str) -> Result<Spectrum> {
        let json: SpectrumJson = serde_json::from_str(text)
            .map_err(|e| Error::InvalidInput(format!("spectrum JSON: {e}")))?;
        json.into_spectrum()
    }
}

// |μ|² for a torus line, exact when the eigenvalue is.
fn shell_datum(line: &SpectralLine) -> String {
    match &line.exact {
        Some(ExactEigenvalue::TwoPiSqrt { norm_sq, .. }) => format_rational(norm_sq),
        _ => {
            let r = line.lambda / (2.0 * std::f64::consts::PI);
            (r * r).to_string()
        }
    }
}

/// Wire form of a spectrum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub family: Family,
    pub n: u32,
    pub volume: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub volume_exact: Option<String>,
    pub betti: Vec<u64>,
    pub truncation: f64,
    #[serde(default)]
    pub approximate_shells: bool,
    pub lines: Vec<LineJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LineJson {
    pub lambda_exact: Option<String>,
    pub lambda_float: f64,
    pub multiplicity: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shell_norm_sq: Option<String>,
}

impl SpectrumJson {
    pub fn into_spectrum(self) -> Result<Spectrum> {
        let volume_exact = self.volume_exact.as_deref().map(str::parse).transpose()?;
        let descriptor =
            ManifoldDescriptor::new(self.family, self.n, self.volume, volume_exact, self.betti)?;
        let lines = self
            .lines
            .into_iter()
            .map(|l| {
                Ok(match l.lambda_exact {
                    Some(text) => SpectralLine::exact(text.parse()?, l.multiplicity),
                    None => SpectralLine::approximate(l.lambda_float, l.multiplicity),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        validate_spectrum(lines, descriptor, self.truncation)
    }
}

/// `N_±(λ)`: total multiplicity of eigenvalues `λ'` with `0 < ±λ' ≤ λ`.
pub fn counting(spectrum: &Spectrum, sign: Sign, lambda: f64) -> Result<u64> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidInput(format!("counting needs lambda > 0, got {lambda}")));
    }
    if !le_tol(lambda, spectrum.truncation) {
        return Err(Error::BeyondTruncation { lambda, truncation: spectrum.truncation });
    }
    let s = sign.factor();
    Ok(spectrum
        .lines
        .iter()
        .filter(|l| {
            let v = s * l.lambda;
            v > 0.0 && le_tol(v, lambda)
        })
        .map(|l| l.multiplicity)
        .sum())
}

/// One entry of a symmetry defect: `m(λ) - m(-λ)` at a positive `λ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryDefect {
    pub lambda: f64,
    pub lambda_exact: Option<String>,
    pub defect: i64,
}

/// Positive `λ` at which `m(λ) ≠ m(-λ)`. Empty iff the window is symmetric.
pub fn symmetry_defect(spectrum: &Spectrum) -> Vec<SymmetryDefect> {
    let positive: Vec<(f64, Option<ExactEigenvalue>, i64)> = spectrum
        .lines
        .iter()
        .filter(|l| l.lambda > 0.0)
        .map(|l| (l.lambda, l.exact.clone(), l.multiplicity as i64))
        .collect();
    let mut mirrored: Vec<(f64, Option<ExactEigenvalue>, i64)> = spectrum
        .lines
        .iter()
        .filter(|l| l.lambda < 0.0)
        .map(|l| (-l.lambda, l.exact.as_ref().map(ExactEigenvalue::neg), l.multiplicity as i64))
        .collect();
    mirrored.reverse();

    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    let mut push = |lambda: f64, exact: &Option<ExactEigenvalue>, defect: i64| {
        if defect != 0 {
            out.push(SymmetryDefect {
                lambda,
                lambda_exact: exact.as_ref().map(|e| e.to_string()),
                defect,
            });
        }
    };
    while i < positive.len() || j < mirrored.len() {
        let ord = match (positive.get(i), mirrored.get(j)) {
            (Some(p), Some(m)) => compare_eigenvalues((p.0, p.1.as_ref()), (m.0, m.1.as_ref())),
            (Some(_), None) => Ordering::Less,
            _ => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                let p = &positive[i];
                push(p.0, &p.1, p.2);
                i += 1;
            }
            Ordering::Greater => {
                let m = &mirrored[j];
                push(m.0, &m.1, -m.2);
                j += 1;
            }
            Ordering::Equal => {
                let (p, m) = (&positive[i], &mirrored[j]);
                push(p.0, &p.1, p.2 - m.2);
                i += 1;
                j += 1;
            }
        }
    }
    out
}
