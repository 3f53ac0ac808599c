//! Lattice bases, their Gram matrices and dual lattices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, rational_to_f64};
use crate::spectrum::check_dimension;

/// Largest accepted condition estimate `‖B‖_F · ‖B⁻¹‖_F` for float bases.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Debug, PartialEq)]
enum Rows {
    Exact(Vec<Vec<BigRational>>),
    Float(Vec<Vec<f64>>),
}

/// Row basis of a full-rank lattice Γ ⊂ ℝⁿ.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeBasis {
    n: usize,
    rows: Rows,
}

impl LatticeBasis {
    pub fn from_rationals(rows: Vec<Vec<BigRational>>) -> Result<Self> {
        let n = square_size(&rows)?;
        if exact_determinant(&rows).is_zero() {
            return Err(Error::SingularBasis { condition: f64::INFINITY });
        }
        Ok(Self { n, rows: Rows::Exact(rows) })
    }

    pub fn from_floats(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = square_size(&rows)?;
        if rows.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite basis entry".into()));
        }
        let basis = Self { n, rows: Rows::Float(rows) };
        float_inverse(&basis.rows_f64())?;
        Ok(basis)
    }

    /// Integer rows, exact.
    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::from_rationals(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigRational::from_integer(x.into())).collect())
                .collect(),
        )
    }

    /// The standard lattice ℤⁿ.
    pub fn identity(n: usize) -> Result<Self> {
        let rows: Vec<Vec<i64>> =
            (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect();
        Self::from_integers(&rows)
    }

    pub fn diagonal(entries: Vec<BigRational>) -> Result<Self> {
        let n = entries.len();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| if i == j { entries[i].clone() } else { BigRational::zero() })
                    .collect()
            })
            .collect();
        Self::from_rationals(rows)
    }

    /// Parses `{"n": 3, "rows": [[...], ...]}`. Integers and strings (`"p/q"`
    /// or plain decimals) are exact; any JSON float makes the basis a float basis.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("lattice JSON: {e}")))?;
        let n = value
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::InvalidInput("lattice JSON needs an integer field n".into()))?
            as usize;
        let rows = value
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("lattice JSON needs a rows array".into()))?;
        if rows.len() != n {
            return Err(Error::InvalidInput(format!("expected {n} rows, got {}", rows.len())));
        }
        let mut exact = Vec::with_capacity(n);
        let mut float = Vec::with_capacity(n);
        let mut all_exact = true;
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::InvalidInput("each row must be an array".into()))?;
            let mut er = Vec::with_capacity(row.len());
            let mut fr = Vec::with_capacity(row.len());
            for entry in row {
                match entry {
                    Value::String(s) => {
                        let q = parse_rational(s)?;
                        fr.push(rational_to_f64(&q));
                        er.push(q);
                    }
                    Value::Number(num) if num.is_i64() => {
                        let k = num.as_i64().expect("checked i64");
                        er.push(BigRational::from_integer(k.into()));
                        fr.push(k as f64);
                    }
                    Value::Number(num) => {
                        all_exact = false;
                        fr.push(num.as_f64().unwrap_or(f64::NAN));
                    }
                    other => {
                        return Err(Error::InvalidInput(format!("bad lattice entry {other}")));
                    }
                }
            }
            exact.push(er);
            float.push(fr);
        }
        if all_exact {
            Self::from_rationals(exact)
        } else {
            Self::from_floats(float)
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.rows, Rows::Exact(_))
    }

    pub fn rows_exact(&self) -> Option<&[Vec<BigRational>]> {
        match &self.rows {
            Rows::Exact(r) => Some(r),
            Rows::Float(_) => None,
        }
    }

    pub fn rows_f64(&self) -> Vec<Vec<f64>> {
        match &self.rows {
            Rows::Exact(r) => r.iter().map(|row| row.iter().map(rational_to_f64).collect()).collect(),
            Rows::Float(r) => r.clone(),
        }
    }

    /// `|det B|`, which is the covolume of the lattice.
    pub fn volume(&self) -> f64 {
        match &self.rows {
            Rows::Exact(r) => rational_to_f64(&exact_determinant(r).abs()),
            Rows::Float(r) => float_determinant(r).abs(),
        }
    }

    pub fn volume_exact(&self) -> Option<BigRational> {
        self.rows_exact().map(|r| exact_determinant(r).abs())
    }

    /// Every basis vector multiplied by `c`.
    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        match &self.rows {
            Rows::Exact(r) => Self::from_rationals(
                r.iter().map(|row| row.iter().map(|x| x * c).collect()).collect(),
            ),
            Rows::Float(r) => {
                let cf = rational_to_f64(c);
                Self::from_floats(r.iter().map(|row| row.iter().map(|x| x * cf).collect()).collect())
            }
        }
    }

    /// Gram matrix `B Bᵀ` in floating point.
    pub fn gram_f64(&self) -> Vec<Vec<f64>> {
        let rows = self.rows_f64();
        (0..self.n)
            .map(|i| (0..self.n).map(|j| dot(&rows[i], &rows[j])).collect())
            .collect()
    }

    /// Exact Gram matrix when the basis is rational.
    pub fn gram_exact(&self) -> Option<Vec<Vec<BigRational>>> {
        self.rows_exact().map(|rows| {
            (0..self.n)
                .map(|i| {
                    (0..self.n)
                        .map(|j| {
                            rows[i]
                                .iter()
                                .zip(&rows[j])
                                .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
                        })
                        .collect()
                })
                .collect()
        })
    }
}

fn square_size<T>(rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    check_dimension(n as u32)?;
    if rows.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput(format!("basis must be {n}x{n}")));
    }
    Ok(n)
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Dual lattice `Γ* = {γ : ⟨γ, μ⟩ ∈ ℤ ∀ μ ∈ Γ}`; its rows `B*` satisfy `B* Bᵀ = I`.
pub fn dual_lattice(basis: &LatticeBasis) -> Result<LatticeBasis> {
    let n = basis.n;
    match &basis.rows {
        Rows::Exact(rows) => {
            let inv = exact_inverse(rows).ok_or(Error::SingularBasis { condition: f64::INFINITY })?;
            let dual = (0..n).map(|i| (0..n).map(|j| inv[j][i].clone()).collect()).collect();
            Ok(LatticeBasis { n, rows: Rows::Exact(dual) })
        }
        Rows::Float(rows) => {
            let inv = float_inverse(rows)?;
            let dual = (0..n).map(|i| (0..n).map(|j| inv[j][i]).collect()).collect();
            Ok(LatticeBasis { n, rows: Rows::Float(dual) })
        }
    }
}

fn exact_inverse(m: &[Vec<BigRational>]) -> Option<Vec<Vec<BigRational>>> {
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
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

pub(crate) fn exact_determinant(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return BigRational::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let f = &a[r][col] / &p;
                for c in col..n {
                    let v = &a[col][c] * &f;
                    a[r][c] -= v;
                }
            }
        }
    }
    det
}

fn float_determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a = m.to_vec();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("nonempty");
        if a[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

fn frobenius(m: &[Vec<f64>]) -> f64 {
    m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
}

fn float_inverse(m: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { 1.0 } else { 0.0 }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .expect("nonempty");
        if a[pivot][col] == 0.0 {
            return Err(Error::SingularBasis { condition: f64::INFINITY });
        }
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for c in 0..2 * n {
                        a[r][c] -= f * a[col][c];
                    }
                }
            }
        }
    }
    let inv: Vec<Vec<f64>> = a.into_iter().map(|row| row[n..].to_vec()).collect();
    let condition = frobenius(m) * frobenius(&inv);
    if !condition.is_finite() || condition > MAX_CONDITION {
        return Err(Error::SingularBasis { condition });
    }
    Ok(inv)
}

/// Least common multiple of all denominators, used to turn a rational Gram
/// matrix into an integer one.
pub(crate) fn common_denominator(m: &[Vec<BigRational>]) -> BigInt {
    m.iter().flatten().fold(BigInt::one(), |acc, q| num_integer::Integer::lcm(&acc, q.denom()))
}
