//! Curl spectrum of flat tori `ℝⁿ/Γ`.
//!
//! `λ ≠ 0` is an eigenvalue iff `|λ| = 2π|μ|` for some `μ ∈ Γ*`, with
//! multiplicity `½·C(n-1, (n-1)/2)·#{μ ∈ Γ* : |μ| = |λ|/2π}`.

mod basis;
mod shells;

pub use basis::{dual_lattice, LatticeBasis, MAX_CONDITION};
pub use shells::{enumerate_shells, EnumerationConfig, Shell, ShellTable};

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::exact::{binomial, ExactEigenvalue, PiRational};
use crate::spectrum::{validate_spectrum, Family, ManifoldDescriptor, SpectralLine, Spectrum};

/// `½·C(n-1, (n-1)/2)`, doubled so that it stays an integer for every odd `n`.
pub(crate) fn doubled_torus_factor(n: usize) -> u64 {
    binomial(n as u64 - 1, (n as u64 - 1) / 2)
}

pub fn torus_descriptor(basis: &LatticeBasis) -> Result<ManifoldDescriptor> {
    let n = basis.n();
    let betti = (0..=(n - 1) / 2).map(|p| binomial(n as u64, p as u64)).collect();
    match basis.volume_exact() {
        Some(v) => ManifoldDescriptor::exact(Family::Torus, n as u32, PiRational::rational(v), betti),
        None => ManifoldDescriptor::new(Family::Torus, n as u32, basis.volume(), None, betti),
    }
}

/// All curl eigenvalues of `ℝⁿ/Γ` with `|λ| ≤ lambda_max`.
pub fn torus_spectrum(basis: &LatticeBasis, lambda_max: f64, config: &EnumerationConfig) -> Result<Spectrum> {
    if !(lambda_max.is_finite() && lambda_max > 0.0) {
        return Err(Error::InvalidInput(format!("lambda_max must be positive, got {lambda_max}")));
    }
    let descriptor = torus_descriptor(basis)?;
    let dual = dual_lattice(basis)?;
    let table = enumerate_shells(&dual, lambda_max / (2.0 * PI), config)?;
    let factor = doubled_torus_factor(basis.n());

    let mut lines = Vec::with_capacity(2 * table.entries.len());
    for shell in &table.entries {
        debug_assert!(shell.count % 2 == 0);
        let m = factor.checked_mul(shell.count).ok_or(Error::Overflow)? / 2;
        match &shell.norm_sq_exact {
            Some(q) => {
                lines.push(SpectralLine::exact(ExactEigenvalue::two_pi_sqrt(false, q.clone()), m));
                lines.push(SpectralLine::exact(ExactEigenvalue::two_pi_sqrt(true, q.clone()), m));
            }
            None => {
                let l = 2.0 * PI * shell.norm_sq.sqrt();
                lines.push(SpectralLine::approximate(l, m));
                lines.push(SpectralLine::approximate(-l, m));
            }
        }
    }
    validate_spectrum(lines, descriptor, lambda_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::symmetry_defect;
    use num_rational::BigRational;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn summary(s: &Spectrum) -> Vec<(String, u64)> {
        s.lines()
            .iter()
            .map(|l| (l.exact.as_ref().unwrap().to_string(), l.multiplicity))
            .collect()
    }

    #[test]
    fn z3_first_three_shells() {
        let lmax = 2.0 * PI * 3f64.sqrt();
        let s = torus_spectrum(&LatticeBasis::identity(3).unwrap(), lmax, &Default::default()).unwrap();
        let want: Vec<(String, u64)> = [
            ("-2*pi*sqrt(3)", 8),
            ("-2*pi*sqrt(2)", 12),
            ("-2*pi*sqrt(1)", 6),
            ("2*pi*sqrt(1)", 6),
            ("2*pi*sqrt(2)", 12),
            ("2*pi*sqrt(3)", 8),
        ]
        .iter()
        .map(|(a, b)| (a.to_string(), *b))
        .collect();
        assert_eq!(summary(&s), want);
        assert!(symmetry_defect(&s).is_empty());
        assert_eq!(s.descriptor().betti(), &[1, 3]);
        assert_eq!(s.descriptor().volume(), 1.0);
    }

    #[test]
    fn stretched_torus_has_eigenvalue_pi() {
        let b = LatticeBasis::diagonal(vec![q(1, 1), q(1, 1), q(2, 1)]).unwrap();
        let s = torus_spectrum(&b, 4.0, &Default::default()).unwrap();
        let first = s.lines().iter().find(|l| l.lambda > 0.0).unwrap();
        assert!((first.lambda - PI).abs() < 1e-12);
        assert_eq!(first.multiplicity, 2);
        assert_eq!(s.descriptor().volume(), 2.0);
    }

    #[test]
    fn z5_first_eigenvalue() {
        let s = torus_spectrum(&LatticeBasis::identity(5).unwrap(), 2.0 * PI, &Default::default()).unwrap();
        assert_eq!(summary(&s), vec![("-2*pi*sqrt(1)".into(), 30), ("2*pi*sqrt(1)".into(), 30)]);
        assert_eq!(s.descriptor().betti(), &[1, 5, 10]);
    }

    #[test]
    fn window_below_first_eigenvalue_is_empty() {
        let s = torus_spectrum(&LatticeBasis::identity(3).unwrap(), 6.0, &Default::default()).unwrap();
        assert!(s.lines().is_empty());
    }
}
