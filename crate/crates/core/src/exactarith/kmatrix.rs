//! Dense matrices over an imaginary quadratic field.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_traits::Zero;

use super::field::{FieldElem, QuadField};
use super::rational::{int, Rational};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct KMatrix {
    field: QuadField,
    rows: usize,
    cols: usize,
    data: Vec<FieldElem>,
}

impl KMatrix {
    pub fn zeros(field: QuadField, rows: usize, cols: usize) -> Self {
        Self { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: QuadField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_rows(field: QuadField, rows: Vec<Vec<FieldElem>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        let data: Vec<FieldElem> = rows.into_iter().flatten().collect();
        if let Some(e) = data.iter().find(|e| e.field() != field) {
            return Err(Error::FieldMismatch { left: field.d(), right: e.d() });
        }
        Ok(Self { field, rows: r, cols: c, data })
    }

    pub fn diagonal(field: QuadField, diag: &[FieldElem]) -> Self {
        let mut m = Self::zeros(field, diag.len(), diag.len());
        for (i, x) in diag.iter().enumerate() {
            m[(i, i)] = x.clone();
        }
        m
    }

    /// `diag(1_a, -1_b)`.
    pub fn i_ab(field: QuadField, a: usize, b: usize) -> Self {
        let diag: Vec<FieldElem> = (0..a + b).map(|i| field.int(if i < a { 1 } else { -1 })).collect();
        Self::diagonal(field, &diag)
    }

    pub fn field(&self) -> QuadField {
        self.field
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

    pub fn entries(&self) -> &[FieldElem] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[FieldElem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map(&self, f: impl Fn(&FieldElem) -> FieldElem) -> Self {
        Self { field: self.field, rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn scale(&self, c: &FieldElem) -> Self {
        self.map(|x| c * x)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Conjugate transpose.
    pub fn star(&self) -> Self {
        self.transpose().map(FieldElem::conj)
    }

    pub fn is_hermitian(&self) -> bool {
        self.is_square() && *self == self.star()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(FieldElem::is_zero)
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.same_shape(o)?;
        Ok(Self {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch { left: self.field.d(), right: o.field.d() });
        }
        let mut out = Self::zeros(self.field, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let t = a * &o[(k, j)];
                    out[(i, j)] = &out[(i, j)] + &t;
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> FieldElem {
        (0..self.rows.min(self.cols)).fold(self.field.zero(), |acc, i| &acc + &self[(i, i)])
    }

    fn same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        if self.field != o.field {
            return Err(Error::FieldMismatch { left: self.field.d(), right: o.field.d() });
        }
        Ok(())
    }

    /// Row reduction; returns (echelon form, rank, determinant sign/scale).
    fn eliminate(&self) -> (Self, usize, FieldElem) {
        let mut m = self.clone();
        let mut det = self.field.one();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(piv) = (rank..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                det = self.field.zero();
                continue;
            };
            if piv != rank {
                for j in 0..m.cols {
                    m.data.swap(piv * m.cols + j, rank * m.cols + j);
                }
                det = -det;
            }
            let p = m[(rank, col)].clone();
            det = &det * &p;
            let pinv = p.inv().expect("nonzero pivot");
            for r in 0..m.rows {
                if r == rank || m[(r, col)].is_zero() {
                    continue;
                }
                let f = &m[(r, col)] * &pinv;
                for j in col..m.cols {
                    let t = &f * &m[(rank, j)];
                    m[(r, j)] = &m[(r, j)] - &t;
                }
            }
            rank += 1;
        }
        (m, rank, det)
    }

    pub fn rank(&self) -> usize {
        self.eliminate().1
    }

    pub fn det(&self) -> Result<FieldElem> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let (_, rank, det) = self.eliminate();
        Ok(if rank < self.rows { self.field.zero() } else { det })
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = Self::zeros(self.field, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, n + i)] = self.field.one();
        }
        let (red, _, _) = aug.eliminate();
        let mut inv = Self::zeros(self.field, n, n);
        for i in 0..n {
            let p = &red[(i, i)];
            if p.is_zero() {
                return Err(Error::Degenerate("singular matrix".into()));
            }
            let pinv = p.inv()?;
            for j in 0..n {
                inv[(i, j)] = &red[(i, n + j)] * &pinv;
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(x - A)` by Faddeev-LeVerrier,
    /// coefficients in increasing degree.
    pub fn charpoly(&self) -> Result<Vec<FieldElem>> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("charpoly of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut coeffs = vec![self.field.zero(); n + 1];
        coeffs[n] = self.field.one();
        let ident = Self::identity(self.field, n);
        let mut m = Self::zeros(self.field, n, n);
        for k in 1..=n {
            // M_k = A M_{k-1} + c_{n-k+1} I
            m = self.mul(&m)?.add(&ident.scale(&coeffs[n - k + 1]))?;
            let am = self.mul(&m)?;
            coeffs[n - k] = am.trace().scale(&(-int(1) / int(k as i64)));
        }
        Ok(coeffs)
    }
}

impl Index<(usize, usize)> for KMatrix {
    type Output = FieldElem;
    fn index(&self, (i, j): (usize, usize)) -> &FieldElem {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for KMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut FieldElem {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &KMatrix {
    type Output = KMatrix;
    fn mul(self, o: &KMatrix) -> KMatrix {
        KMatrix::mul(self, o).expect("matrix product shape")
    }
}

impl fmt::Debug for KMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Real rational coefficients of a polynomial known to have them.
pub fn rational_coeffs(p: &[FieldElem]) -> Option<Vec<Rational>> {
    p.iter().map(|c| c.b.is_zero().then(|| c.a.clone())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactarith::rational::rat;

    #[test]
    fn inverse_and_det() {
        let k = QuadField::gaussian();
        let i = k.root();
        let m = KMatrix::from_rows(k, vec![vec![k.int(1), i.clone()], vec![k.int(2), k.int(3)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, KMatrix::identity(k, 2));
        assert_eq!(m.det().unwrap(), &k.int(3) - &(&i * &k.int(2)));
        let sing = KMatrix::from_rows(k, vec![vec![k.int(1), k.int(2)], vec![k.int(2), k.int(4)]]).unwrap();
        assert!(sing.det().unwrap().is_zero());
        assert!(sing.inverse().is_err());
        assert_eq!(sing.rank(), 1);
    }

    #[test]
    fn charpoly_2x2() {
        let k = QuadField::gaussian();
        let m = KMatrix::diagonal(k, &[k.int(2), k.int(-3)]);
        let cp = rational_coeffs(&m.charpoly().unwrap()).unwrap();
        assert_eq!(cp, vec![int(-6), int(1), int(1)]);
        let h = KMatrix::from_rows(k, vec![vec![k.from_rational(rat(1, 2)), k.root()], vec![-k.root(), k.int(0)]]).unwrap();
        let cp = rational_coeffs(&h.charpoly().unwrap()).unwrap();
        assert_eq!(cp, vec![int(-1), rat(-1, 2), int(1)]);
    }
}
