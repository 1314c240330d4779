//! Exact dense matrices, fraction-free determinants, LU without pivoting, and the
//! last-column replacement one-point machinery.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::kernel::{ExactInteger, ExactRational};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GvError {
    #[error("matrix must have at least one row and column, got {rows}x{cols}")]
    Empty { rows: usize, cols: usize },
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
    #[error("matrix is {rows}x{cols}, not square")]
    NotSquare { rows: usize, cols: usize },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("leading principal minor of order {order} vanishes (pivot index {index})")]
    ZeroMinor { index: usize, order: usize },
    #[error("U[n][n] is zero")]
    ZeroPivot,
}

/// Dense row-major matrix of exact rationals, indexed from 0.
#[derive(Clone, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactRational>,
}

impl fmt::Debug for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ExactMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|q| q.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactRational>) -> Result<Self, GvError> {
        if rows == 0 || cols == 0 {
            return Err(GvError::Empty { rows, cols });
        }
        if entries.len() != rows * cols {
            return Err(GvError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        Ok(ExactMatrix { rows, cols, entries })
    }

    /// Panics on a zero dimension; the closed-form builders never produce one.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactRational) -> Self {
        assert!(rows > 0 && cols > 0, "empty matrix");
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        ExactMatrix { rows, cols, entries }
    }

    pub fn from_integers(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ExactInteger) -> Self {
        Self::from_fn(rows, cols, |i, j| BigRational::from_integer(f(i, j)))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactRational {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: ExactRational) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[ExactRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ExactRational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[ExactRational] {
        &self.entries
    }

    /// Leading `size x size` block.
    pub fn truncate(&self, size: usize) -> Result<Self, GvError> {
        if size == 0 || size > self.rows || size > self.cols {
            return Err(GvError::Shape(format!(
                "cannot truncate {}x{} to {size}",
                self.rows, self.cols
            )));
        }
        Ok(Self::from_fn(size, size, |i, j| self.get(i, j).clone()))
    }

    /// Copy with the last column replaced by `b`.
    pub fn with_last_column(&self, b: &[ExactRational]) -> Result<Self, GvError> {
        if b.len() != self.rows {
            return Err(GvError::Shape(format!(
                "column of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut m = self.clone();
        let last = self.cols - 1;
        for (i, v) in b.iter().enumerate() {
            m.set(i, last, v.clone());
        }
        Ok(m)
    }

    pub fn try_mul(&self, rhs: &ExactMatrix) -> Result<ExactMatrix, GvError> {
        if self.cols != rhs.rows {
            return Err(GvError::Shape(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(Self::from_fn(self.rows, rhs.cols, |i, j| {
            let mut acc = BigRational::zero();
            for r in 0..self.cols {
                let a = self.get(i, r);
                if !a.is_zero() {
                    acc += a * rhs.get(r, j);
                }
            }
            acc
        }))
    }

    pub fn is_unit_lower_triangular(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| match j.cmp(&i) {
                    std::cmp::Ordering::Greater => self.get(i, j).is_zero(),
                    std::cmp::Ordering::Equal => self.get(i, j).is_one(),
                    std::cmp::Ordering::Less => true,
                })
            })
    }

    pub fn is_upper_triangular(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j).is_zero()))
    }

    pub fn diagonal(&self) -> Vec<ExactRational> {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i).clone()).collect()
    }

    /// Inverse of a unit lower triangular matrix by forward substitution.
    pub fn inverse_unit_lower(&self) -> Result<ExactMatrix, GvError> {
        if !self.is_unit_lower_triangular() {
            return Err(GvError::Shape("not unit lower triangular".into()));
        }
        let n = self.rows;
        let mut inv = ExactMatrix::identity(n);
        for j in 0..n {
            for i in j + 1..n {
                let mut acc = BigRational::zero();
                for r in j..i {
                    acc -= self.get(i, r) * inv.get(r, j);
                }
                inv.set(i, j, acc);
            }
        }
        Ok(inv)
    }
}

impl Mul for &ExactMatrix {
    type Output = ExactMatrix;

    fn mul(self, rhs: &ExactMatrix) -> ExactMatrix {
        self.try_mul(rhs).expect("matrix shapes must agree")
    }
}

/// Unit lower / upper factor pair with `l * u` equal to the decomposed matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LUPair {
    pub l: ExactMatrix,
    pub u: ExactMatrix,
}

/// Determinant by fraction-free (Bareiss) elimination.
///
/// Rational input is scaled row-wise to integers first; a zero pivot triggers a row swap.
pub fn det_bareiss(m: &ExactMatrix) -> Result<ExactRational, GvError> {
    if !m.is_square() {
        return Err(GvError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for i in 0..n {
        let lcm = m.row(i).iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        a.push(m.row(i).iter().map(|q| q.numer() * (&lcm / q.denom())).collect());
        scale *= lcm;
    }

    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return Ok(BigRational::zero()),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = if negate {
        -&a[n - 1][n - 1]
    } else {
        a[n - 1][n - 1].clone()
    };
    Ok(BigRational::new(det, scale))
}

/// Doolittle LU without pivoting.
pub fn lu_exact(m: &ExactMatrix) -> Result<LUPair, GvError> {
    if !m.is_square() {
        return Err(GvError::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    let n = m.rows;
    let mut l = ExactMatrix::identity(n);
    let mut u = ExactMatrix::from_fn(n, n, |_, _| BigRational::zero());
    for k in 0..n {
        for j in k..n {
            let mut acc = m.get(k, j).clone();
            for r in 0..k {
                acc -= l.get(k, r) * u.get(r, j);
            }
            u.set(k, j, acc);
        }
        if u.get(k, k).is_zero() {
            return Err(GvError::ZeroMinor { index: k, order: k + 1 });
        }
        for i in k + 1..n {
            let mut acc = m.get(i, k).clone();
            for r in 0..k {
                acc -= l.get(i, r) * u.get(r, k);
            }
            let v = acc / u.get(k, k);
            l.set(i, k, v);
        }
    }
    Ok(LUPair { l, u })
}

/// (Σ_k (L⁻¹)_{n,k} b_k) / U_{n,n}: the determinant ratio after replacing the last column by `b`.
pub fn det_ratio_last_column(
    l_inv_last_row: &[ExactRational],
    b: &[ExactRational],
    u_nn: &ExactRational,
) -> Result<ExactRational, GvError> {
    if l_inv_last_row.len() != b.len() {
        return Err(GvError::Shape(format!(
            "row of length {} against column of length {}",
            l_inv_last_row.len(),
            b.len()
        )));
    }
    if u_nn.is_zero() {
        return Err(GvError::ZeroPivot);
    }
    let dot = l_inv_last_row
        .iter()
        .zip(b)
        .fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
    Ok(dot / u_nn)
}

/// Coefficients of a two-variable series Σ c_{i,j} z^i w^j, truncated to i, j < size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoeffTable {
    size: usize,
    coeffs: Vec<ExactRational>,
}

impl CoeffTable {
    pub fn from_fn(size: usize, mut f: impl FnMut(usize, usize) -> ExactRational) -> Self {
        let mut coeffs = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                coeffs.push(f(i, j));
            }
        }
        CoeffTable { size, coeffs }
    }

    pub fn from_matrix(m: &ExactMatrix) -> Result<Self, GvError> {
        if !m.is_square() {
            return Err(GvError::NotSquare {
                rows: m.rows,
                cols: m.cols,
            });
        }
        Ok(Self::from_fn(m.rows, |i, j| m.get(i, j).clone()))
    }

    /// Expansion of 1/(1 - Σ c z^a w^b); every term must have a + b >= 1.
    pub fn inverse_of_one_minus(terms: &[(usize, usize, ExactRational)], size: usize) -> Self {
        assert!(terms.iter().all(|(a, b, _)| a + b >= 1), "constant term in denominator");
        let mut t = Self::from_fn(size, |_, _| BigRational::zero());
        for i in 0..size {
            for j in 0..size {
                let mut acc = if i == 0 && j == 0 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                };
                for (a, b, c) in terms {
                    if *a <= i && *b <= j {
                        acc += c * t.get(i - a, j - b);
                    }
                }
                t.coeffs[i * size + j] = acc;
            }
        }
        t
    }

    /// 1/(1 - zw): the identity matrix.
    pub fn identity(size: usize) -> Self {
        Self::from_fn(size, |i, j| {
            if i == j {
                BigRational::one()
            } else {
                BigRational::zero()
            }
        })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactRational {
        &self.coeffs[i * self.size + j]
    }

    pub fn to_matrix(&self) -> ExactMatrix {
        ExactMatrix::from_fn(self.size, self.size, |i, j| self.get(i, j).clone())
    }
}

/// f_A ⋆ f_B = f_A(z, 1/t) f_B(t, w) at t^0, keeping indices below `size`.
pub fn gf_convolve_truncated(fa: &CoeffTable, fb: &CoeffTable, size: usize) -> Result<CoeffTable, GvError> {
    if fa.size != fb.size || size > fa.size {
        return Err(GvError::Shape(format!(
            "tables of size {} and {} truncated to {size}",
            fa.size, fb.size
        )));
    }
    // The t^0 coefficient pairs z^i t^{-r} with t^r w^j.
    Ok(CoeffTable::from_fn(size, |i, j| {
        (0..fa.size).fold(BigRational::zero(), |acc, r| acc + fa.get(i, r) * fb.get(r, j))
    }))
}
