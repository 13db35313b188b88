//! Dense complex vectors and square matrices of small dimension.
//!
//! Level labels passed to [`CMat::matrix_unit`] and [`CVec::basis`] are
//! 1-based, matching the `|1⟩, |2⟩, …` notation of the physics. Raw indexing
//! through `Index` is 0-based.
//!
//! Checked methods (`mul`, `apply`, `inner`, …) return
//! [`Error::DimensionMismatch`]; the operator impls panic on mismatch and are
//! meant for code paths where the dimensions are already known to agree.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

pub use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

pub const MAX_DIM: usize = 8;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_DIM {
        Err(Error::InvalidDimension(dim))
    } else {
        Ok(())
    }
}

fn check_match(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}

/// Column vector `[a₁, a₂, …]ᵗ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CVec {
    entries: Vec<C64>,
}

impl CVec {
    pub fn new(entries: Vec<C64>) -> Result<Self> {
        check_dim(entries.len())?;
        Ok(Self { entries })
    }

    pub fn from_slice(entries: &[C64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { entries: vec![ZERO; dim] })
    }

    /// The bare state `|level⟩` (1-based).
    pub fn basis(dim: usize, level: usize) -> Result<Self> {
        let mut v = Self::zeros(dim)?;
        if level == 0 || level > dim {
            return Err(Error::LevelOutOfRange { level, dim });
        }
        v.entries[level - 1] = ONE;
        Ok(v)
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn iter(&self) -> core::slice::Iter<'_, C64> {
        self.entries.iter()
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &CVec) -> Result<C64> {
        check_match(self.dim(), other.dim())?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| a.conj() * b).sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        libm::sqrt(self.norm_sqr())
    }

    pub fn scale(&self, k: C64) -> CVec {
        CVec { entries: self.entries.iter().map(|a| a * k).collect() }
    }

    /// `self + k·other`.
    pub fn add_scaled(&self, other: &CVec, k: C64) -> Result<CVec> {
        check_match(self.dim(), other.dim())?;
        Ok(CVec { entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b * k).collect() })
    }

    /// `|self⟩⟨other|`.
    pub fn outer(&self, other: &CVec) -> Result<CMat> {
        check_match(self.dim(), other.dim())?;
        let n = self.dim();
        let mut m = CMat::zeros(n)?;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.entries[i] * other.entries[j].conj();
            }
        }
        Ok(m)
    }

    pub fn max_abs_diff(&self, other: &CVec) -> Result<f64> {
        check_match(self.dim(), other.dim())?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

impl Index<usize> for CVec {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

impl IndexMut<usize> for CVec {
    fn index_mut(&mut self, i: usize) -> &mut C64 {
        &mut self.entries[i]
    }
}

/// Square matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct CMat {
    dim: usize,
    entries: Vec<C64>,
}

impl CMat {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, entries: vec![ZERO; dim * dim] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from rows; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[&[C64]]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim)?;
        for (i, row) in rows.iter().enumerate() {
            check_match(dim, row.len())?;
            m.entries[i * dim..(i + 1) * dim].copy_from_slice(row);
        }
        Ok(m)
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> C64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        Ok(m)
    }

    pub fn diag(values: &[C64]) -> Result<Self> {
        let mut m = Self::zeros(values.len())?;
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        Ok(m)
    }

    /// `σ_mn = |m⟩⟨n|` with 1-based labels.
    pub fn matrix_unit(dim: usize, m: usize, n: usize) -> Result<Self> {
        let mut out = Self::zeros(dim)?;
        for level in [m, n] {
            if level == 0 || level > dim {
                return Err(Error::LevelOutOfRange { level, dim });
            }
        }
        out[(m - 1, n - 1)] = ONE;
        Ok(out)
    }

    /// Matrix with the given vectors as columns.
    pub fn from_columns(cols: &[CVec]) -> Result<Self> {
        let dim = cols.len();
        let mut m = Self::zeros(dim)?;
        for (j, c) in cols.iter().enumerate() {
            check_match(dim, c.dim())?;
            for i in 0..dim {
                m[(i, j)] = c[i];
            }
        }
        Ok(m)
    }

    pub fn column(&self, j: usize) -> CVec {
        CVec { entries: (0..self.dim).map(|i| self[(i, j)]).collect() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn adjoint(&self) -> CMat {
        let n = self.dim;
        let mut out = self.clone();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(j, i)].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &CMat) -> Result<CMat> {
        check_match(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = CMat { dim: n, entries: vec![ZERO; n * n] };
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.entries[i * n + j] += a * other.entries[k * n + j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &CVec) -> Result<CVec> {
        check_match(self.dim, v.dim())?;
        let n = self.dim;
        let entries = (0..n).map(|i| (0..n).map(|j| self.entries[i * n + j] * v.entries[j]).sum()).collect();
        Ok(CVec { entries })
    }

    pub fn add_scaled(&self, other: &CMat, k: C64) -> Result<CMat> {
        check_match(self.dim, other.dim)?;
        Ok(CMat { dim: self.dim, entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b * k).collect() })
    }

    pub fn scale(&self, k: C64) -> CMat {
        CMat { dim: self.dim, entries: self.entries.iter().map(|a| a * k).collect() }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &CMat) -> Result<f64> {
        check_match(self.dim, other.dim)?;
        Ok(self.entries.iter().zip(&other.entries).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|a| a.norm()).fold(0.0, f64::max)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let n = self.dim;
        (0..n).all(|i| (i..n).all(|j| (self[(i, j)] - self[(j, i)].conj()).norm() <= tol))
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|a| a.re.is_finite() && a.im.is_finite())
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range for dim {}", self.dim);
        &self.entries[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.dim && j < self.dim, "index ({i}, {j}) out of range for dim {}", self.dim);
        &mut self.entries[i * self.dim + j]
    }
}

impl Mul for &CMat {
    type Output = CMat;
    fn mul(self, rhs: &CMat) -> CMat {
        CMat::mul(self, rhs).expect("matrix product dimension mismatch")
    }
}

impl Mul<&CVec> for &CMat {
    type Output = CVec;
    fn mul(self, rhs: &CVec) -> CVec {
        self.apply(rhs).expect("matrix-vector dimension mismatch")
    }
}

impl Add for &CMat {
    type Output = CMat;
    fn add(self, rhs: &CMat) -> CMat {
        self.add_scaled(rhs, ONE).expect("matrix sum dimension mismatch")
    }
}

impl Sub for &CMat {
    type Output = CMat;
    fn sub(self, rhs: &CMat) -> CMat {
        self.add_scaled(rhs, -ONE).expect("matrix difference dimension mismatch")
    }
}

impl Neg for &CMat {
    type Output = CMat;
    fn neg(self) -> CMat {
        self.scale(-ONE)
    }
}
