//! Shell enumeration: all nonzero lattice vectors with `|μ| ≤ R`, grouped by
//! squared norm.
//!
//! The search is a Fincke–Pohst branch-and-bound on the Gram matrix. Candidate
//! coefficient vectors come from a floating-point Cholesky decomposition with a
//! little slack; the final inclusion test and the shell key are computed
//! exactly whenever the Gram matrix is rational, so coincident norms are never
//! split by rounding. Only one representative of each `±μ` pair is visited and
//! counted twice.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::basis::{common_denominator, LatticeBasis};
use crate::error::{Error, Result};
use crate::exact::rational_to_f64;
use crate::spectrum::FLOAT_TOLERANCE;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EnumerationConfig {
    /// Maximum number of distinct shells before giving up.
    pub max_shells: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        Self { max_shells: 2_000_000 }
    }
}

/// One shell: squared norm and number of lattice vectors on it.
#[derive(Clone, Debug, PartialEq)]
pub struct Shell {
    pub norm_sq: f64,
    pub norm_sq_exact: Option<BigRational>,
    pub count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShellTable {
    pub entries: Vec<Shell>,
    pub radius_sq: f64,
    /// Set when norms were clustered with a tolerance instead of compared exactly.
    pub approximate: bool,
}

impl ShellTable {
    /// Number of nonzero vectors with `|μ|² ≤ r2`.
    pub fn count_within(&self, r2: f64) -> u64 {
        self.entries
            .iter()
            .filter(|s| s.norm_sq <= r2 * (1.0 + FLOAT_TOLERANCE))
            .map(|s| s.count)
            .sum()
    }
}

/// Quadratic form in Fincke–Pohst shape:
/// `xᵀGx = Σᵢ qᵢᵢ (xᵢ + Σ_{j>i} qᵢⱼ xⱼ)²`.
struct Decomposition {
    q: Vec<Vec<f64>>,
}

impl Decomposition {
    fn new(gram: &[Vec<f64>]) -> Result<Self> {
        let n = gram.len();
        let mut q = gram.to_vec();
        for i in 0..n {
            if !(q[i][i] > 0.0) {
                return Err(Error::SingularBasis { condition: f64::INFINITY });
            }
            for j in i + 1..n {
                q[j][i] = q[i][j];
                q[i][j] /= q[i][i];
            }
            for k in i + 1..n {
                for l in k..n {
                    q[k][l] -= q[k][i] * q[i][l];
                }
            }
        }
        Ok(Self { q })
    }
}

/// Visits one coefficient vector from every `±x` pair with `xᵀGx ≤ bound`
/// (plus slack). `x = 0` is skipped.
fn search(dec: &Decomposition, bound: f64, visit: &mut dyn FnMut(&[i64]) -> Result<()>) -> Result<()> {
    let n = dec.q.len();
    let mut x = vec![0i64; n];
    descend(dec, n - 1, bound, true, &mut x, visit)
}

fn descend(
    dec: &Decomposition,
    level: usize,
    remaining: f64,
    zero_above: bool,
    x: &mut [i64],
    visit: &mut dyn FnMut(&[i64]) -> Result<()>,
) -> Result<()> {
    let q = &dec.q;
    let n = q.len();
    let center: f64 = -(level + 1..n).map(|j| q[level][j] * x[j] as f64).sum::<f64>();
    let half_width = (remaining.max(0.0) / q[level][level]).sqrt() * (1.0 + 1e-9) + 1e-9;
    let mut lo = (center - half_width).ceil() as i64;
    let hi = (center + half_width).floor() as i64;
    if zero_above {
        // the center is 0 here; keep the half with a positive leading coordinate
        lo = if level == 0 { 1 } else { 0 };
    }
    for v in lo..=hi {
        let d = v as f64 - center;
        let rest = remaining - q[level][level] * d * d;
        if rest < -1e-9 * remaining.abs().max(1.0) {
            continue;
        }
        x[level] = v;
        if level == 0 {
            visit(x)?;
        } else {
            descend(dec, level - 1, rest, zero_above && v == 0, x, visit)?;
        }
    }
    x[level] = 0;
    Ok(())
}

/// Exact quadratic form `xᵀ (D·G) x` with an integer matrix; i128 fast path.
struct IntegerForm {
    entries: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i128>>>,
}

impl IntegerForm {
    fn new(gram: &[Vec<BigRational>], denominator: &BigInt) -> Self {
        let entries: Vec<Vec<BigInt>> = gram
            .iter()
            .map(|row| row.iter().map(|g| (g * BigRational::from_integer(denominator.clone())).to_integer()).collect())
            .collect();
        let small = entries
            .iter()
            .map(|row| row.iter().map(|v| v.to_i64().map(i128::from)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        Self { entries, small }
    }

    fn eval(&self, x: &[i64]) -> BigInt {
        if let Some(m) = &self.small {
            if let Some(v) = eval_i128(m, x) {
                return BigInt::from(v);
            }
        }
        let mut acc = BigInt::zero();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, g) in row.iter().enumerate() {
                acc += g * BigInt::from(x[i]) * BigInt::from(x[j]);
            }
        }
        acc
    }
}

fn eval_i128(m: &[Vec<i128>], x: &[i64]) -> Option<i128> {
    let mut acc: i128 = 0;
    for (i, row) in m.iter().enumerate() {
        let xi = i128::from(x[i]);
        for (j, &g) in row.iter().enumerate() {
            let term = g.checked_mul(xi)?.checked_mul(i128::from(x[j]))?;
            acc = acc.checked_add(term)?;
        }
    }
    Some(acc)
}

/// Groups every nonzero vector of the lattice spanned by `basis` with
/// `|μ| ≤ radius` into shells of equal squared norm.
pub fn enumerate_shells(basis: &LatticeBasis, radius: f64, config: &EnumerationConfig) -> Result<ShellTable> {
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    let radius_sq = radius * radius;
    let limit = radius_sq * (1.0 + FLOAT_TOLERANCE);
    let dec = Decomposition::new(&basis.gram_f64())?;

    match basis.gram_exact() {
        Some(gram) => {
            let den = common_denominator(&gram);
            let form = IntegerForm::new(&gram, &den);
            let den_f = den.to_f64().unwrap_or(f64::INFINITY);
            let mut shells: BTreeMap<BigInt, u64> = BTreeMap::new();
            search(&dec, limit, &mut |x| {
                let value = form.eval(x);
                if value.to_f64().unwrap_or(f64::INFINITY) / den_f <= limit {
                    *shells.entry(value).or_insert(0) += 2;
                    if shells.len() > config.max_shells {
                        return Err(Error::ShellCap { cap: config.max_shells });
                    }
                }
                Ok(())
            })?;
            let entries = shells
                .into_iter()
                .map(|(value, count)| {
                    let exact = BigRational::new(value, den.clone());
                    Shell { norm_sq: rational_to_f64(&exact), norm_sq_exact: Some(exact), count }
                })
                .collect();
            Ok(ShellTable { entries, radius_sq, approximate: false })
        }
        None => {
            let rows = basis.rows_f64();
            let n = basis.n();
            let mut norms = Vec::new();
            search(&dec, limit, &mut |x| {
                let norm: f64 = (0..n)
                    .map(|c| {
                        let comp: f64 = (0..n).map(|i| x[i] as f64 * rows[i][c]).sum();
                        comp * comp
                    })
                    .sum();
                if norm <= limit {
                    norms.push(norm);
                }
                Ok(())
            })?;
            norms.sort_by(f64::total_cmp);
            let mut entries: Vec<Shell> = Vec::new();
            let mut start = 0;
            while start < norms.len() {
                let first = norms[start];
                let mut end = start + 1;
                while end < norms.len() && norms[end] <= first * (1.0 + FLOAT_TOLERANCE) {
                    end += 1;
                }
                let cluster = &norms[start..end];
                let mean = cluster.iter().sum::<f64>() / cluster.len() as f64;
                entries.push(Shell { norm_sq: mean, norm_sq_exact: None, count: 2 * cluster.len() as u64 });
                if entries.len() > config.max_shells {
                    return Err(Error::ShellCap { cap: config.max_shells });
                }
                start = end;
            }
            Ok(ShellTable { entries, radius_sq, approximate: true })
        }
    }
}
