//! Finite subgroups of SO(4): elements, closure, and the fixed-point-free test.

use std::collections::{HashMap, VecDeque};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::fixed::{cos_sin_turn, Fixed};
use crate::error::{Error, Result};

pub type Matrix4 = [[f64; 4]; 4];

/// Tolerance on `‖γᵀγ - I‖` and `|det γ - 1|` for input matrices.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-12;
/// Grid used to hash matrices of untagged elements, and the `det(I - γ)` floor.
pub const MATRIX_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// `R(2πp₁/q, 2πp₂/q)`, kept in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AngleTag {
    pub p1: u64,
    pub p2: u64,
    pub q: u64,
}

impl AngleTag {
    pub fn new(p1: i64, p2: i64, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("angle denominator must be positive".into()));
        }
        let qi = q as i64;
        let (a, b) = (p1.rem_euclid(qi) as u64, p2.rem_euclid(qi) as u64);
        let g = a.gcd(&b).gcd(&q);
        Ok(Self { p1: a / g, p2: b / g, q: q / g })
    }

    fn compose(&self, other: &AngleTag) -> AngleTag {
        let q = self.q.lcm(&other.q);
        let (s, t) = (q / self.q, q / other.q);
        AngleTag::new(
            (self.p1 * s + other.p1 * t) as i64,
            (self.p2 * s + other.p2 * t) as i64,
            q,
        )
        .expect("positive denominator")
    }

    pub fn is_identity(&self) -> bool {
        self.p1 == 0 && self.p2 == 0
    }

    /// Has eigenvalue 1 exactly when one of the two rotation angles vanishes.
    pub fn has_fixed_points(&self) -> bool {
        self.p1 == 0 || self.p2 == 0
    }
}

/// Block rotation `R(θ₁, θ₂)`.
pub fn block_rotation(theta1: f64, theta2: f64) -> Matrix4 {
    let (c1, s1) = (theta1.cos(), theta1.sin());
    let (c2, s2) = (theta2.cos(), theta2.sin());
    [
        [c1, -s1, 0.0, 0.0],
        [s1, c1, 0.0, 0.0],
        [0.0, 0.0, c2, -s2],
        [0.0, 0.0, s2, c2],
    ]
}

pub fn identity_matrix() -> Matrix4 {
    let mut m = [[0.0; 4]; 4];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mat_mul(a: &Matrix4, b: &Matrix4) -> Matrix4 {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn determinant4(m: &Matrix4) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for col in 0..4 {
        let pivot = (col..4)
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
        for r in col + 1..4 {
            let f = a[r][col] / a[col][col];
            for c in col..4 {
                a[r][c] -= f * a[col][c];
            }
        }
    }
    det
}

/// An element of SO(4), optionally carrying an exact block-rotation tag.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    matrix: Matrix4,
    tag: Option<AngleTag>,
}

impl GroupElement {
    pub fn identity() -> Self {
        Self { matrix: identity_matrix(), tag: Some(AngleTag { p1: 0, p2: 0, q: 1 }) }
    }

    /// Validated matrix element without an exact tag.
    pub fn from_matrix(matrix: Matrix4) -> Result<Self> {
        if matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NotSpecialOrthogonal("non-finite entry".into()));
        }
        let mut worst: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let v: f64 = (0..4).map(|k| matrix[k][i] * matrix[k][j]).sum();
                worst = worst.max((v - if i == j { 1.0 } else { 0.0 }).abs());
            }
        }
        if worst > ORTHOGONALITY_TOLERANCE {
            return Err(Error::NotSpecialOrthogonal(format!("|g^T g - I| = {worst:e}")));
        }
        let det = determinant4(&matrix);
        if (det - 1.0).abs() > ORTHOGONALITY_TOLERANCE {
            return Err(Error::NotSpecialOrthogonal(format!("det = {det}")));
        }
        Ok(Self { matrix, tag: None })
    }

    /// Row-major list of 16 entries.
    pub fn from_entries(entries: &[f64]) -> Result<Self> {
        if entries.len() != 16 {
            return Err(Error::InvalidInput(format!("expected 16 matrix entries, got {}", entries.len())));
        }
        let mut m = [[0.0; 4]; 4];
        for (i, v) in entries.iter().enumerate() {
            m[i / 4][i % 4] = *v;
        }
        Self::from_matrix(m)
    }

    /// `R(2πp₁/q, 2πp₂/q)` with its exact tag.
    pub fn rotation(p1: i64, p2: i64, q: u64) -> Result<Self> {
        let tag = AngleTag::new(p1, p2, q)?;
        Ok(Self::from_tag(tag))
    }

    fn from_tag(tag: AngleTag) -> Self {
        let turn = |p: u64| 2.0 * std::f64::consts::PI * p as f64 / tag.q as f64;
        Self { matrix: block_rotation(turn(tag.p1), turn(tag.p2)), tag: Some(tag) }
    }

    pub fn matrix(&self) -> &Matrix4 {
        &self.matrix
    }

    pub fn tag(&self) -> Option<AngleTag> {
        self.tag
    }

    pub fn compose(&self, other: &GroupElement) -> GroupElement {
        match (self.tag, other.tag) {
            (Some(a), Some(b)) => Self::from_tag(a.compose(&b)),
            _ => Self { matrix: mat_mul(&self.matrix, &other.matrix), tag: None },
        }
    }

    pub fn is_identity(&self) -> bool {
        match self.tag {
            Some(t) => t.is_identity(),
            None => max_deviation(&self.matrix, &identity_matrix()) <= MATRIX_TOLERANCE,
        }
    }

    /// Entries at `bits` of precision; tagged rotations are evaluated from
    /// their angles rather than from the rounded doubles.
    pub fn high_precision(&self, bits: u32) -> [[Fixed; 4]; 4] {
        match self.tag {
            Some(t) => {
                let (c1, s1) = cos_sin_turn(t.p1 as i64, t.q, bits);
                let (c2, s2) = cos_sin_turn(t.p2 as i64, t.q, bits);
                let z = Fixed::zero(bits);
                [
                    [c1.clone(), -&s1, z.clone(), z.clone()],
                    [s1, c1, z.clone(), z.clone()],
                    [z.clone(), z.clone(), c2.clone(), -&s2],
                    [z.clone(), z, s2, c2],
                ]
            }
            None => std::array::from_fn(|i| std::array::from_fn(|j| Fixed::from_f64(self.matrix[i][j], bits))),
        }
    }

    /// `det(I - γ)`; zero iff γ has eigenvalue 1.
    pub fn det_identity_minus(&self) -> f64 {
        let mut m = identity_matrix();
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v -= self.matrix[i][j];
            }
        }
        determinant4(&m)
    }
}

fn max_deviation(a: &Matrix4, b: &Matrix4) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Tag(AngleTag),
    Grid([i64; 16]),
}

fn key_of(g: &GroupElement, exact: bool) -> Key {
    match (exact, g.tag) {
        (true, Some(t)) => Key::Tag(t),
        _ => {
            let mut k = [0i64; 16];
            for (slot, v) in k.iter_mut().zip(g.matrix.iter().flatten()) {
                *slot = (v / MATRIX_TOLERANCE).round() as i64;
            }
            Key::Grid(k)
        }
    }
}

/// A finite group; `elements()[0]` is the identity.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryGroup {
    elements: Vec<GroupElement>,
}

impl IsometryGroup {
    pub fn trivial() -> Self {
        Self { elements: vec![GroupElement::identity()] }
    }

    /// The cyclic group `⟨R(2πp₁/q, 2πp₂/q)⟩`.
    pub fn cyclic(q: u64, p1: i64, p2: i64) -> Result<Self> {
        close_group(&[GroupElement::rotation(p1, p2, q)?], DEFAULT_CLOSURE_CAP)
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

/// Smallest set containing the identity and `generators` that is closed
/// under multiplication. Tagged generators are combined exactly; otherwise
/// elements are identified by their entries rounded to a 10⁻⁹ grid.
pub fn close_group(generators: &[GroupElement], cap: usize) -> Result<IsometryGroup> {
    let exact = generators.iter().all(|g| g.tag.is_some());
    let mut elements = vec![GroupElement::identity()];
    let mut seen: HashMap<Key, usize> = HashMap::new();
    seen.insert(key_of(&elements[0], exact), 0);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        for g in generators {
            let h = elements[i].compose(g);
            let key = key_of(&h, exact);
            if seen.contains_key(&key) {
                continue;
            }
            if elements.len() >= cap {
                return Err(Error::ClosureCap { cap });
            }
            seen.insert(key, elements.len());
            queue.push_back(elements.len());
            elements.push(h);
        }
    }
    Ok(IsometryGroup { elements })
}

/// Group description as read from JSON: generators given either as angle
/// pairs `R(2πp₁/q, 2πp₂/q)` or as row-major 4×4 matrices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum GroupInput {
    Angles { q: u64, pairs: Vec<[i64; 2]> },
    Matrices { generators: Vec<Vec<f64>> },
}

impl GroupInput {
    pub fn from_json_str(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("group JSON: {e}")))
    }

    pub fn generators(&self) -> Result<Vec<GroupElement>> {
        match self {
            GroupInput::Angles { q, pairs } => {
                pairs.iter().map(|&[p1, p2]| GroupElement::rotation(p1, p2, *q)).collect()
            }
            GroupInput::Matrices { generators } => {
                generators.iter().map(|g| GroupElement::from_entries(g)).collect()
            }
        }
    }

    /// Closes the generators and checks that the action is free.
    pub fn build(&self, cap: usize) -> Result<IsometryGroup> {
        let group = close_group(&self.generators()?, cap)?;
        assert_fixed_point_free(&group)?;
        Ok(group)
    }
}

/// Fails on the first non-identity element with eigenvalue 1.
pub fn assert_fixed_point_free(group: &IsometryGroup) -> Result<()> {
    for (index, g) in group.elements.iter().enumerate().skip(1) {
        let det = g.det_identity_minus();
        let fixed = match g.tag {
            Some(t) => t.has_fixed_points(),
            None => det.abs() <= MATRIX_TOLERANCE,
        };
        if fixed {
            return Err(Error::NotFixedPointFree { index, det });
        }
    }
    Ok(())
}
