mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{
    binary_icosahedral, binary_tetrahedral, lens_parameters, left, quaternion_group, random_unit_quaternion, right,
};
use curlspec::spaceform::{
    asymmetry_certificate, auxiliary_G, characters, mat_mul, poincare_F, smallest_eigenvalue_multiplicities,
    spaceform_spectrum, IsometryGroup, Matrix4, SeriesConfig,
};

fn transpose(m: &Matrix4) -> Matrix4 {
    std::array::from_fn(|i| std::array::from_fn(|j| m[j][i]))
}

fn trace(m: &Matrix4) -> f64 {
    (0..4).map(|i| m[i][i]).sum()
}

fn quaternion() -> impl Strategy<Value = [f64; 4]> {
    any::<u64>().prop_map(|seed| random_unit_quaternion(&mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// `x ↦ p x q` has `χ⁺ = 4(Re p)² - 1` and `χ⁻ = 4(Re q)² - 1`.
    #[test]
    fn characters_of_quaternion_pairs(p in quaternion(), q in quaternion()) {
        let g = mat_mul(&left(p), &right(q));
        let (cp, cm) = characters(&g);
        prop_assert!((cp - (4.0 * p[0] * p[0] - 1.0)).abs() < 1e-9);
        prop_assert!((cm - (4.0 * q[0] * q[0] - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn characters_are_class_functions(p in quaternion(), q in quaternion(), r in quaternion(), s in quaternion()) {
        let g = mat_mul(&left(p), &right(q));
        let h = mat_mul(&left(r), &right(s));
        let conj = mat_mul(&mat_mul(&h, &g), &transpose(&h));
        let (a, b) = characters(&g);
        let (c, d) = characters(&conj);
        prop_assert!((a - c).abs() < 1e-9 && (b - d).abs() < 1e-9);
    }

    /// `χ⁺ + χ⁻ = tr Λ²g = ((tr g)² - tr g²)/2`.
    #[test]
    fn characters_sum_to_exterior_trace(p in quaternion(), q in quaternion()) {
        let g = mat_mul(&left(p), &right(q));
        let (a, b) = characters(&g);
        let expected = (trace(&g).powi(2) - trace(&mat_mul(&g, &g))) / 2.0;
        prop_assert!((a + b - expected).abs() < 1e-9);
    }
}

#[test]
fn quaternionic_group_orders() {
    assert_eq!(quaternion_group().order(), 8);
    assert_eq!(binary_tetrahedral().order(), 24);
    assert_eq!(binary_icosahedral().order(), 120);
}

/// Left multiplication fixes `Λ⁻` pointwise and acts on `Λ⁺` through an
/// irreducible nontrivial representation, so `(m(2), m(-2)) = (0, 3)`.
#[test]
fn left_multiplication_groups_smallest_eigenvalue() {
    let cfg = SeriesConfig::default();
    for group in [quaternion_group(), binary_tetrahedral(), binary_icosahedral()] {
        assert_eq!(smallest_eigenvalue_multiplicities(&group, &cfg).unwrap(), (0, 3));
        let spectrum = spaceform_spectrum(&group, 0, &cfg).unwrap();
        assert_eq!(spectrum.multiplicity_at(2.0), 0);
        assert_eq!(spectrum.multiplicity_at(-2.0), 3);
    }
}

#[test]
fn poincare_sphere_is_asymmetric() {
    let group = binary_icosahedral();
    let cert = asymmetry_certificate(&group, 12, &SeriesConfig::default()).unwrap();
    assert!(!cert.symmetric);
    assert!(!cert.rational_sum_vanishes);
    assert_eq!(cert.defect[0], -3);
}

#[test]
fn poincare_identity_for_quaternionic_groups() {
    let cfg = SeriesConfig::default();
    for group in [quaternion_group(), binary_tetrahedral(), binary_icosahedral()] {
        let k = 24;
        let f = poincare_F(&group, k, &cfg).unwrap();
        let g = auxiliary_G(&group, k, &cfg).unwrap();
        for i in 0..=k {
            let back = |a: &[u64]| if i >= 2 { a[i - 2] as i64 } else { 0 };
            assert_eq!(f.plus[i] as i64 + back(&f.minus), g.plus[i]);
            assert_eq!(f.minus[i] as i64 + back(&f.plus), g.minus[i]);
        }
        // F± count Γ-invariant eigenforms of S³
        for (i, (&p, &m)) in f.plus.iter().zip(&f.minus).enumerate() {
            let sphere = ((i + 1) * (i + 3)) as u64;
            assert!(p <= sphere && m <= sphere);
        }
    }
}

#[test]
fn lens_smallest_multiplicities_are_character_averages() {
    let cfg = SeriesConfig::default();
    for (q, p1, p2) in lens_parameters(9) {
        let group = IsometryGroup::cyclic(q, p1, p2).unwrap();
        // χ±(R(a,b)) = 1 + 2cos(a ± b)
        let avg = |sign: f64| -> f64 {
            (0..q)
                .map(|j| {
                    let a = 2.0 * std::f64::consts::PI * (j as f64) * (p1 as f64) / q as f64;
                    let b = 2.0 * std::f64::consts::PI * (j as f64) * (p2 as f64) / q as f64;
                    1.0 + 2.0 * (a + sign * b).cos()
                })
                .sum::<f64>()
                / q as f64
        };
        let (mp, mm) = smallest_eigenvalue_multiplicities(&group, &cfg).unwrap();
        assert_eq!(mp as f64, avg(1.0).round(), "({q}; {p1}, {p2})");
        assert_eq!(mm as f64, avg(-1.0).round(), "({q}; {p1}, {p2})");
    }
}
