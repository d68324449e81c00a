//! Dense complex matrices at MPFR precision.

use std::fmt;
use std::ops::{Index, IndexMut};

use rug::Float;

use crate::error::{Error, Result};
use crate::exactarith::BigComplex;

#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigComplex>,
}

impl CMatrix {
    pub fn zeros(prec: u32, rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![BigComplex::zero(prec); rows * cols] }
    }

    pub fn identity(prec: u32, n: usize) -> Self {
        let mut m = Self::zeros(prec, n, n);
        for i in 0..n {
            m[(i, i)] = BigComplex::one(prec);
        }
        m
    }

    pub fn scalar(n: usize, c: &BigComplex) -> Self {
        let mut m = Self::zeros(c.prec(), n, n);
        for i in 0..n {
            m[(i, i)] = c.clone();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> BigComplex) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
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

    pub fn prec(&self) -> u32 {
        self.data.iter().map(BigComplex::prec).min().unwrap_or(crate::exactarith::DEFAULT_PRECISION)
    }

    pub fn map(&self, f: impl Fn(&BigComplex) -> BigComplex) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn conj(&self) -> Self {
        self.map(BigComplex::conj)
    }

    pub fn star(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: &BigComplex) -> Self {
        self.map(|x| x * c)
    }

    pub fn add(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch in add");
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        assert!(self.rows == o.rows && self.cols == o.cols, "shape mismatch in sub");
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch in mul");
        let prec = self.prec().min(o.prec());
        Self::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = BigComplex::zero(prec);
            for k in 0..self.cols {
                acc = &acc + &(&self[(i, k)] * &o[(k, j)]);
            }
            acc
        })
    }

    /// Submatrix of rows `r0..r1` and columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        Self::from_fn(r1 - r0, c1 - c0, |i, j| self[(r0 + i, c0 + j)].clone())
    }

    /// `[[a, b], [c, d]]`.
    pub fn from_blocks(a: &Self, b: &Self, c: &Self, d: &Self) -> Self {
        let (r, s) = (a.rows, c.rows);
        let (p, q) = (a.cols, b.cols);
        assert!(b.rows == r && d.rows == s && c.cols == p && d.cols == q, "block shapes");
        Self::from_fn(r + s, p + q, |i, j| match (i < r, j < p) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - p)].clone(),
            (false, true) => c[(i - r, j)].clone(),
            (false, false) => d[(i - r, j - p)].clone(),
        })
    }

    /// LU with partial pivoting. Returns (lu, permutation sign, rows order)
    /// or `None` when a pivot vanishes.
    fn lu(&self) -> Option<(Self, bool, Vec<usize>)> {
        let n = self.rows;
        let mut m = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd = false;
        for col in 0..n {
            let piv = (col..n).max_by(|&a, &b| m[(a, col)].abs().partial_cmp(&m[(b, col)].abs()).unwrap())?;
            if m[(piv, col)].is_zero() {
                return None;
            }
            if piv != col {
                for j in 0..n {
                    m.data.swap(piv * n + j, col * n + j);
                }
                perm.swap(piv, col);
                odd = !odd;
            }
            let pinv = m[(col, col)].recip();
            for r in col + 1..n {
                let f = &m[(r, col)] * &pinv;
                for j in col + 1..n {
                    let t = &f * &m[(col, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                }
                m[(r, col)] = f;
            }
        }
        Some((m, odd, perm))
    }

    pub fn det(&self) -> BigComplex {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let prec = self.prec();
        match self.lu() {
            None => BigComplex::zero(prec),
            Some((lu, odd, _)) => {
                let mut d = BigComplex::one(prec);
                for i in 0..self.rows {
                    d = &d * &lu[(i, i)];
                }
                if odd {
                    -d
                } else {
                    d
                }
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let prec = self.prec();
        let (lu, _, perm) = self
            .lu()
            .ok_or_else(|| Error::Numerical("singular matrix".into()))?;
        let mut inv = Self::zeros(prec, n, n);
        for col in 0..n {
            // solve L U x = P e_col
            let mut x: Vec<BigComplex> = (0..n)
                .map(|i| if perm[i] == col { BigComplex::one(prec) } else { BigComplex::zero(prec) })
                .collect();
            for i in 0..n {
                for k in 0..i {
                    let t = &lu[(i, k)] * &x[k];
                    x[i] = &x[i] - &t;
                }
            }
            for i in (0..n).rev() {
                for k in i + 1..n {
                    let t = &lu[(i, k)] * &x[k];
                    x[i] = &x[i] - &t;
                }
                x[i] = &x[i] / &lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, col)] = x[i].clone();
            }
        }
        Ok(inv)
    }

    pub fn max_abs(&self) -> Float {
        self.data
            .iter()
            .map(BigComplex::abs)
            .fold(Float::new(self.prec()), |a, b| if b > a { b } else { a })
    }

    /// `max |a_ij - b_ij| / max(1, max |b_ij|)`.
    pub fn rel_diff(&self, o: &Self) -> f64 {
        let d = self.sub(o).max_abs().to_f64();
        d / o.max_abs().to_f64().max(1.0)
    }

    /// Positive definiteness of a Hermitian matrix through its leading
    /// principal minors: every Gaussian-elimination pivot must exceed `eps`.
    pub fn is_positive_definite(&self, eps: f64) -> bool {
        assert!(self.is_square());
        let n = self.rows;
        let mut m = self.clone();
        for col in 0..n {
            let p = m[(col, col)].re.to_f64();
            if !(p > eps) {
                return false;
            }
            let pinv = m[(col, col)].recip();
            for r in col + 1..n {
                let f = &m[(r, col)] * &pinv;
                for j in col..n {
                    let t = &f * &m[(col, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                }
            }
        }
        true
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = BigComplex;
    fn index(&self, (i, j): (usize, usize)) -> &BigComplex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigComplex {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_decimal(8)).collect();
            writeln!(f, "  {}", row.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> BigComplex {
        BigComplex::from_f64(128, re, im)
    }

    #[test]
    fn inverse_det() {
        let m = CMatrix::from_fn(3, 3, |i, j| c((i * 3 + j) as f64 + if i == j { 5.0 } else { 0.0 }, (i as f64) - (j as f64)));
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).rel_diff(&CMatrix::identity(128, 3)) < 1e-30);
        let d = m.det();
        let dt = m.transpose().det();
        assert!(d.rel_diff(&dt) < 1e-30);
    }

    #[test]
    fn definiteness() {
        let pd = CMatrix::from_fn(2, 2, |i, j| if i == j { c(2.0, 0.0) } else if i < j { c(0.0, 1.0) } else { c(0.0, -1.0) });
        assert!(pd.is_positive_definite(1e-10));
        let indef = CMatrix::from_fn(2, 2, |i, j| if i == j { c(1.0, 0.0) } else { c(2.0, 0.0) });
        assert!(!indef.is_positive_definite(1e-10));
    }
}
