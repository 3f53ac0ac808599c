//! Independent oracles and fixtures shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use curlspec::exact::ExactEigenvalue;
use curlspec::spaceform::{close_group, GroupElement, IsometryGroup, Matrix4, DEFAULT_CLOSURE_CAP};
use curlspec::Spectrum;

pub fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Random 3×3 basis with entries `p/q`, `|p| ≤ 5`, `q ≤ 3`, `|det| ≥ 1/2` and
/// rows no longer than 6.
pub fn random_rational_basis<R: Rng>(rng: &mut R) -> Vec<Vec<BigRational>> {
    loop {
        let rows: Vec<Vec<BigRational>> = (0..3)
            .map(|_| (0..3).map(|_| rat(rng.gen_range(-5..=5), rng.gen_range(1..=3))).collect())
            .collect();
        let det = det3(&rows);
        let long = rows.iter().any(|r| r.iter().map(|x| x * x).sum::<BigRational>() > rat(36, 1));
        if det.abs() >= rat(1, 2) && !long {
            return rows;
        }
    }
}

fn det3(m: &[Vec<BigRational>]) -> BigRational {
    &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
        + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
}

fn gauss_jordan_inverse(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).expect("invertible");
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

/// Squared norms (with counts) of all nonzero `μ` with `⟨μ, bᵢ⟩ ∈ ℤ` and
/// `|μ| ≤ radius`. Writing `cᵢ = ⟨μ, bᵢ⟩` gives `|μ|² = cᵀ(BBᵀ)⁻¹c`, and
/// Cauchy–Schwarz bounds `|cᵢ| ≤ |bᵢ|·radius`; every box point is tested.
pub fn brute_force_dual_shells(rows: &[Vec<BigRational>], radius: f64) -> BTreeMap<BigRational, u64> {
    let n = rows.len();
    let gram: Vec<Vec<BigRational>> = (0..n)
        .map(|i| (0..n).map(|j| rows[i].iter().zip(&rows[j]).map(|(a, b)| a * b).sum()).collect())
        .collect();
    let inv = gauss_jordan_inverse(&gram);
    let denom = inv
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let h: Vec<Vec<i128>> = inv
        .iter()
        .map(|r| r.iter().map(|x| (x.numer() * (&denom / x.denom())).to_i128().unwrap()).collect())
        .collect();
    let d = denom.to_f64().unwrap();
    let bounds: Vec<i128> = gram
        .iter()
        .enumerate()
        .map(|(i, r)| (r[i].to_f64().unwrap().sqrt() * radius).floor() as i128 + 1)
        .collect();
    let limit = radius * radius;
    let mut shells = BTreeMap::new();
    let mut c: Vec<i128> = bounds.iter().map(|b| -b).collect();
    'outer: loop {
        if c.iter().any(|&x| x != 0) {
            let mut q: i128 = 0;
            for i in 0..n {
                for j in 0..n {
                    q += c[i] * h[i][j] * c[j];
                }
            }
            if (q as f64) / d <= limit {
                *shells
                    .entry(BigRational::new(BigInt::from(q), denom.clone()))
                    .or_insert(0) += 1;
            }
        }
        for i in 0..n {
            if c[i] < bounds[i] {
                c[i] += 1;
                continue 'outer;
            }
            c[i] = -bounds[i];
        }
        return shells;
    }
}

/// Positive half of a torus spectrum as `|μ|² → m`.
pub fn positive_torus_lines(spectrum: &Spectrum) -> BTreeMap<BigRational, u64> {
    spectrum
        .lines()
        .iter()
        .filter_map(|l| match &l.exact {
            Some(ExactEigenvalue::TwoPiSqrt { negative: false, norm_sq }) => Some((norm_sq.clone(), l.multiplicity)),
            _ => None,
        })
        .collect()
}

pub type Quaternion = [f64; 4];

pub fn normalize(q: Quaternion) -> Quaternion {
    let r = q.iter().map(|x| x * x).sum::<f64>().sqrt();
    q.map(|x| x / r)
}

/// Matrix of `x ↦ p·x` in the basis `1, i, j, k`.
pub fn left(p: Quaternion) -> Matrix4 {
    let [a, b, c, d] = p;
    [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]]
}

/// Matrix of `x ↦ x·q`.
pub fn right(q: Quaternion) -> Matrix4 {
    let [a, b, c, d] = q;
    [[a, -b, -c, -d], [b, a, d, -c], [c, -d, a, b], [d, c, -b, a]]
}

pub fn random_unit_quaternion<R: Rng>(rng: &mut R) -> Quaternion {
    loop {
        let q: Quaternion = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let r = q.iter().map(|x| x * x).sum::<f64>();
        if r > 1e-3 && r <= 1.0 {
            return normalize(q);
        }
    }
}

pub fn left_group(generators: &[Quaternion]) -> IsometryGroup {
    let gens: Vec<GroupElement> = generators
        .iter()
        .map(|&q| GroupElement::from_matrix(left(q)).unwrap())
        .collect();
    close_group(&gens, DEFAULT_CLOSURE_CAP).unwrap()
}

/// Quaternion group {±1, ±i, ±j, ±k} acting by left multiplication.
pub fn quaternion_group() -> IsometryGroup {
    left_group(&[[0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0]])
}

/// Binary tetrahedral group (order 24).
pub fn binary_tetrahedral() -> IsometryGroup {
    left_group(&[[0.0, 1.0, 0.0, 0.0], [0.5, 0.5, 0.5, 0.5]])
}

/// Binary icosahedral group (order 120); the quotient is the Poincaré sphere.
pub fn binary_icosahedral() -> IsometryGroup {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    left_group(&[[0.5, 0.5, 0.5, 0.5], [phi / 2.0, 0.5 / phi, 0.5, 0.0]])
}

/// Every fixed-point-free `(q, p, p')` with `2 ≤ q ≤ max_q`, `0 < p, p' < q`.
pub fn lens_parameters(max_q: u64) -> Vec<(u64, i64, i64)> {
    let mut out = Vec::new();
    for q in 2..=max_q {
        for p in 1..q {
            for pp in 1..q {
                if p.gcd(&q) == 1 && pp.gcd(&q) == 1 {
                    out.push((q, p as i64, pp as i64));
                }
            }
        }
    }
    out
}
