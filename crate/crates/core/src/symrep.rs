//! The `(k+1)`-dimensional representation `ρ^(k)` of `GL(2)` on degree-`k`
//! binary forms, written in the signed binomial basis
//! `Ω = { (−1)^r C(k, r) u₁^{k−r} u₂^r : 0 ≤ r ≤ k }`.
//!
//! For `k = g` this is the action of a Fourier-Mukai transform on
//! `H^{2*}(X, Q)` in the `ℓ^i/i!` coordinates.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactnum::{scalar_compact, ExactScalar, Rational};
use crate::sl2cf::SL2;

/// A 2×2 matrix `[[x, y], [z, w]]` over `Q(√3)`, not necessarily unimodular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub x: ExactScalar,
    pub y: ExactScalar,
    pub z: ExactScalar,
    pub w: ExactScalar,
}

impl Mat2 {
    pub fn new(x: ExactScalar, y: ExactScalar, z: ExactScalar, w: ExactScalar) -> Self {
        Self { x, y, z, w }
    }

    pub fn from_rationals(x: Rational, y: Rational, z: Rational, w: Rational) -> Self {
        Self::new(x.into(), y.into(), z.into(), w.into())
    }

    /// The unipotent `[[1, 0], [−c, 1]]`, i.e. the isometry of `(−) ⊗ L^c`.
    pub fn lower_unipotent(c: &Rational) -> Self {
        Self::from_rationals(Rational::one(), Rational::zero(), -c, Rational::one())
    }

    pub fn det(&self) -> ExactScalar {
        &self.x * &self.w - &self.y * &self.z
    }
}

impl From<&SL2> for Mat2 {
    fn from(m: &SL2) -> Self {
        let q = |v: &BigInt| ExactScalar::from(Rational::from_integer(v.clone()));
        Self::new(q(&m.x), q(&m.y), q(&m.z), q(&m.w))
    }
}

impl Mul<&Mat2> for &Mat2 {
    type Output = Mat2;
    fn mul(self, b: &Mat2) -> Mat2 {
        Mat2::new(
            &self.x * &b.x + &self.y * &b.z,
            &self.x * &b.y + &self.y * &b.w,
            &self.z * &b.x + &self.w * &b.z,
            &self.z * &b.y + &self.w * &b.w,
        )
    }
}

/// Binomial coefficient with `C(a, b) = 0` unless `0 ≤ b ≤ a`.
pub fn binomial(a: i64, b: i64) -> BigInt {
    if b < 0 || a < 0 || b > a {
        return BigInt::zero();
    }
    let b = b.min(a - b);
    let mut acc = BigInt::one();
    for i in 0..b {
        acc = acc * BigInt::from(a - i) / BigInt::from(i + 1);
    }
    acc
}

fn binom_scalar(a: i64, b: i64) -> ExactScalar {
    Rational::from_integer(binomial(a, b)).into()
}

/// A square matrix `ρ^(k)(M)` of size `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepMatrix {
    pub k: usize,
    #[serde(with = "rows_serde")]
    pub rows: Vec<Vec<ExactScalar>>,
}

mod rows_serde {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Cell(#[serde(with = "scalar_compact")] ExactScalar);

    pub fn serialize<S: Serializer>(
        rows: &[Vec<ExactScalar>],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let cells: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(Cell).collect())
            .collect();
        cells.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<Vec<ExactScalar>>, D::Error> {
        let cells = Vec::<Vec<Cell>>::deserialize(d)?;
        Ok(cells
            .into_iter()
            .map(|r| r.into_iter().map(|c| c.0).collect())
            .collect())
    }
}

impl RepMatrix {
    pub fn dim(&self) -> usize {
        self.k + 1
    }

    pub fn identity(k: usize) -> Self {
        let rows = (0..=k)
            .map(|i| {
                (0..=k)
                    .map(|j| {
                        if i == j {
                            ExactScalar::one()
                        } else {
                            ExactScalar::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        Self { k, rows }
    }

    pub fn from_rational_rows(k: usize, rows: Vec<Vec<Rational>>) -> Self {
        Self {
            k,
            rows: rows
                .into_iter()
                .map(|r| r.into_iter().map(ExactScalar::from).collect())
                .collect(),
        }
    }

    /// `adiag(a_1, …, a_n)`: entry `a_i` at row `i`, column `n + 1 − i`.
    pub fn anti_diagonal(values: Vec<ExactScalar>) -> Self {
        let n = values.len();
        let mut m = Self::identity(n - 1);
        for row in m.rows.iter_mut() {
            row.iter_mut().for_each(|c| *c = ExactScalar::zero());
        }
        for (i, v) in values.into_iter().enumerate() {
            m.rows[i][n - 1 - i] = v;
        }
        m
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        Self {
            k: self.k,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|e| e * c).collect())
                .collect(),
        }
    }

    pub fn apply(&self, v: &[ExactScalar]) -> Vec<ExactScalar> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(ExactScalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    /// Applies the matrix to a rational vector; fails if an entry has a `√3` part.
    pub fn apply_rational(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        let lifted: Vec<ExactScalar> = v.iter().cloned().map(ExactScalar::from).collect();
        self.apply(&lifted)
            .into_iter()
            .map(|e| {
                e.as_rational()
                    .cloned()
                    .ok_or_else(|| Error::Domain("matrix entry leaves the rationals".into()))
            })
            .collect()
    }

    pub fn is_integral(&self) -> bool {
        self.rows
            .iter()
            .flatten()
            .all(|e| e.as_rational().is_some_and(|q| q.is_integer()))
    }

    /// Determinant by Gaussian elimination over `Q(√3)`.
    pub fn det(&self) -> ExactScalar {
        let n = self.dim();
        let mut a = self.rows.clone();
        let mut det = ExactScalar::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return ExactScalar::zero();
            };
            if pivot != col {
                a.swap(pivot, col);
                det = -det;
            }
            let inv = a[col][col].inv().expect("pivot is nonzero");
            det = &det * &a[col][col];
            let (upper, lower) = a.split_at_mut(col + 1);
            let pivot_row = &upper[col];
            for row in lower.iter_mut() {
                if row[col].is_zero() {
                    continue;
                }
                let factor = &row[col] * &inv;
                for (entry, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                    *entry -= &factor * p;
                }
            }
        }
        det
    }
}

impl Mul<&RepMatrix> for &RepMatrix {
    type Output = RepMatrix;
    fn mul(self, b: &RepMatrix) -> RepMatrix {
        assert_eq!(self.k, b.k, "representation degrees differ");
        let n = self.dim();
        let rows = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        (0..n).fold(ExactScalar::zero(), |acc, l| {
                            acc + &self.rows[i][l] * &b.rows[l][j]
                        })
                    })
                    .collect()
            })
            .collect();
        RepMatrix { k: self.k, rows }
    }
}

impl fmt::Display for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Entry `(row, col)` (1-based) of `ρ^(k)(M)` from the closed-form λ-sum.
pub fn rep_entry(k: usize, row: usize, col: usize, m: &Mat2) -> Result<ExactScalar> {
    if k == 0 || row == 0 || col == 0 || row > k + 1 || col > k + 1 {
        return Err(Error::IndexOutOfRange {
            row,
            col,
            dim: k + 1,
        });
    }
    let (k, mi, ni) = (k as i64, row as i64, col as i64);
    let lo = 1.max(ni - mi + 1);
    let hi = ni.min(k - mi + 2);
    let mut sum = ExactScalar::zero();
    for lambda in lo..=hi {
        let coeff = &binom_scalar(k - mi + 1, lambda - 1) * &binom_scalar(mi - 1, ni - lambda);
        let term = coeff
            * m.x.pow((k - mi - lambda + 2) as u32)
            * m.y.pow((lambda - 1) as u32)
            * m.z.pow((mi - ni + lambda - 1) as u32)
            * m.w.pow((ni - lambda) as u32);
        sum += term;
    }
    Ok(if (ni - mi).rem_euclid(2) == 1 {
        -sum
    } else {
        sum
    })
}

pub fn rep_matrix(k: usize, m: &Mat2) -> Result<RepMatrix> {
    if k == 0 {
        return Err(Error::Precondition(
            "representation degree k must be at least 1".into(),
        ));
    }
    let build_row = |i: usize| -> Result<Vec<ExactScalar>> {
        (1..=k + 1).map(|j| rep_entry(k, i, j, m)).collect()
    };
    // large degrees: rows are independent
    let rows = if k >= 12 {
        (1..=k + 1)
            .into_par_iter()
            .map(build_row)
            .collect::<Result<Vec<_>>>()?
    } else {
        (1..=k + 1).map(build_row).collect::<Result<Vec<_>>>()?
    };
    Ok(RepMatrix { k, rows })
}

pub fn rep_matrix_sl2(k: usize, m: &SL2) -> Result<RepMatrix> {
    rep_matrix(k, &Mat2::from(m))
}

// Coefficients in powers of u₂ of (a·u₁ + b·u₂)^e.
fn linear_form_power(a: &ExactScalar, b: &ExactScalar, e: usize) -> Vec<ExactScalar> {
    let mut poly = vec![ExactScalar::one()];
    for _ in 0..e {
        let mut next = vec![ExactScalar::zero(); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i] += c * a;
            next[i + 1] += c * b;
        }
        poly = next;
    }
    poly
}

fn poly_mul(p: &[ExactScalar], q: &[ExactScalar]) -> Vec<ExactScalar> {
    let mut out = vec![ExactScalar::zero(); p.len() + q.len() - 1];
    for (i, a) in p.iter().enumerate() {
        for (j, b) in q.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

/// `ρ^(k)(M)` computed by substituting `Mᵀ(u₁, u₂)` into each basis form of `Ω`
/// and reading off coordinates against `Ω`.
#[allow(clippy::needless_range_loop)]
pub fn rep_oracle(k: usize, m: &Mat2) -> Result<RepMatrix> {
    if k == 0 {
        return Err(Error::Precondition(
            "representation degree k must be at least 1".into(),
        ));
    }
    let basis_scale = |r: usize| -> ExactScalar {
        let b = binom_scalar(k as i64, r as i64);
        if r % 2 == 1 {
            -b
        } else {
            b
        }
    };
    let mut rows = vec![vec![ExactScalar::zero(); k + 1]; k + 1];
    for c in 0..=k {
        // Ω_c(u) = (−1)^c C(k,c) u₁^{k−c} u₂^c evaluated at (x u₁ + z u₂, y u₁ + w u₂)
        let image = poly_mul(
            &linear_form_power(&m.x, &m.z, k - c),
            &linear_form_power(&m.y, &m.w, c),
        );
        let lead = basis_scale(c);
        for (r, coeff) in image.iter().enumerate() {
            let denom = basis_scale(r)
                .inv()
                .expect("binomial basis scale is nonzero");
            rows[r][c] = &(&lead * coeff) * &denom;
        }
    }
    Ok(RepMatrix { k, rows })
}
