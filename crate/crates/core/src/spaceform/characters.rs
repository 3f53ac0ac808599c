//! Characters `χ±` of the self-dual / anti-self-dual 2-forms and the
//! polynomial `det(1 - zγ)`.
//!
//! `Λ²ℝ⁴` is written in the basis `e_i∧e_j` (i < j). With the orientation
//! `e₁∧e₂∧e₃∧e₄`, `Λ⁺` is spanned by `e₁₂+e₃₄, e₁₄+e₂₃, e₁₃−e₂₄` and `Λ⁻`
//! by the same vectors with the second sign flipped. Both bases are
//! orthogonal with squared norm 2, so the trace of the restricted action is
//! `Σ ⟨ω, Λ²γ ω⟩ / 2`.

use super::fixed::Real;
use super::group::GroupElement;

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

// coordinates in the PAIRS basis
const SELF_DUAL: [[i64; 6]; 3] = [
    [1, 0, 0, 0, 0, 1],  // e12 + e34
    [0, 0, 1, 1, 0, 0],  // e14 + e23
    [0, 1, 0, 0, -1, 0], // e13 - e24
];
const ANTI_SELF_DUAL: [[i64; 6]; 3] = [
    [1, 0, 0, 0, 0, -1], // e12 - e34
    [0, 0, 1, -1, 0, 0], // e14 - e23
    [0, 1, 0, 0, 1, 0],  // e13 + e24
];

/// Matrix of the induced action on `Λ²`: column `(k,l)` holds `γe_k ∧ γe_l`.
pub fn exterior_square<T: Real>(a: &[[T; 4]; 4]) -> [[T; 6]; 6] {
    std::array::from_fn(|r| {
        let (i, j) = PAIRS[r];
        std::array::from_fn(|c| {
            let (k, l) = PAIRS[c];
            a[i][k].clone() * a[j][l].clone() - a[j][k].clone() * a[i][l].clone()
        })
    })
}

fn restricted_trace<T: Real>(m: &[[T; 6]; 6], basis: &[[i64; 6]; 3]) -> T {
    let zero = m[0][0].int_like(0);
    let mut total = zero.clone();
    for w in basis {
        for r in 0..6 {
            if w[r] == 0 {
                continue;
            }
            for c in 0..6 {
                if w[c] == 0 {
                    continue;
                }
                let coef = m[0][0].int_like(w[r] * w[c]);
                total = total + coef * m[r][c].clone();
            }
        }
    }
    total.halve()
}

/// `(χ⁺(γ), χ⁻(γ))` for a 4×4 matrix over any [`Real`].
pub fn characters<T: Real>(a: &[[T; 4]; 4]) -> (T, T) {
    let m = exterior_square(a);
    (restricted_trace(&m, &SELF_DUAL), restricted_trace(&m, &ANTI_SELF_DUAL))
}

/// `(χ⁺(γ), χ⁻(γ))` in double precision.
pub fn chi_pm(g: &GroupElement) -> (f64, f64) {
    characters(g.matrix())
}

fn det3<T: Real>(a: &[[T; 4]; 4], idx: [usize; 3]) -> T {
    let e = |r: usize, c: usize| a[idx[r]][idx[c]].clone();
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

/// Coefficients `[c₀, …, c₄]` of `det(I - zA) = Σ cₖ zᵏ`, i.e. `cₖ = (-1)ᵏ eₖ`
/// with `eₖ` the sum of the `k×k` principal minors of `A`.
pub fn det_one_minus_z_poly<T: Real>(a: &[[T; 4]; 4]) -> [T; 5] {
    let zero = a[0][0].int_like(0);
    let e1 = (0..4).fold(zero.clone(), |acc, i| acc + a[i][i].clone());
    let e2 = PAIRS.iter().fold(zero.clone(), |acc, &(i, j)| {
        acc + a[i][i].clone() * a[j][j].clone() - a[i][j].clone() * a[j][i].clone()
    });
    let e3 = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]]
        .into_iter()
        .fold(zero.clone(), |acc, idx| acc + det3(a, idx));
    // cofactor expansion along the first row
    let e4 = (0..4).fold(zero, |acc, c| {
        let cols: Vec<usize> = (0..4).filter(|&x| x != c).collect();
        let minor: [[T; 4]; 4] = std::array::from_fn(|r| {
            std::array::from_fn(|k| if r < 3 && k < 3 { a[r + 1][cols[k]].clone() } else { a[0][0].int_like(0) })
        });
        let term = a[0][c].clone() * det3(&minor, [0, 1, 2]);
        if c % 2 == 0 {
            acc + term
        } else {
            acc - term
        }
    });
    [a[0][0].int_like(1), -e1, e2, -e3, e4]
}

/// `det(1 - zγ)` in double precision.
pub fn det_one_minus_z(g: &GroupElement) -> [f64; 5] {
    det_one_minus_z_poly(g.matrix())
}
