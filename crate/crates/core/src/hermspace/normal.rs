use num_traits::{Signed, Zero};
use rug::Float;

use super::{HermitianSpace, Signature};
use crate::error::{Error, Result};
use crate::exactarith::rational::to_float;
use crate::exactarith::{BigComplex, FieldElem, KMatrix, Rational};

/// `base * A * base^* = diag(diagonal)`, exactly.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    pub base: KMatrix,
    pub diagonal: Vec<Rational>,
}

/// Hermitian Gaussian elimination by simultaneous row/column operations.
pub fn congruence_diagonalize(space: &HermitianSpace) -> Result<Diagonalization> {
    let k = space.field();
    let n = space.dim();
    let mut m = space.gram().clone();
    let mut q = KMatrix::identity(k, n);

    // row_i += t row_j on q, and the matching congruence on m
    let add_row = |m: &mut KMatrix, q: &mut KMatrix, i: usize, j: usize, t: &FieldElem| {
        for c in 0..n {
            let v = &m[(j, c)] * t;
            m[(i, c)] = &m[(i, c)] + &v;
            let v = &q[(j, c)] * t;
            q[(i, c)] = &q[(i, c)] + &v;
        }
        let tc = t.conj();
        for r in 0..n {
            let v = &m[(r, j)] * &tc;
            m[(r, i)] = &m[(r, i)] + &v;
        }
    };
    let swap = |m: &mut KMatrix, q: &mut KMatrix, i: usize, j: usize| {
        for c in 0..n {
            let t = m[(i, c)].clone();
            m[(i, c)] = m[(j, c)].clone();
            m[(j, c)] = t;
            let t = q[(i, c)].clone();
            q[(i, c)] = q[(j, c)].clone();
            q[(j, c)] = t;
        }
        for r in 0..n {
            let t = m[(r, i)].clone();
            m[(r, i)] = m[(r, j)].clone();
            m[(r, j)] = t;
        }
    };

    for i in 0..n {
        if m[(i, i)].is_zero() {
            if let Some(j) = (i + 1..n).find(|&j| !m[(j, j)].is_zero()) {
                swap(&mut m, &mut q, i, j);
            } else if let Some(j) = (i + 1..n).find(|&j| !m[(i, j)].is_zero()) {
                // new diagonal entry is 2 Re(conj(t) m_ij); one of t = 1, sqrt(-d) works
                let t = if m[(i, j)].a.is_zero() { k.root() } else { k.one() };
                add_row(&mut m, &mut q, i, j, &t);
            } else {
                return Err(Error::Degenerate("Gram matrix is singular".into()));
            }
        }
        let pivot = m[(i, i)].clone();
        debug_assert!(pivot.is_rational() && !pivot.is_zero());
        for j in i + 1..n {
            if m[(j, i)].is_zero() {
                continue;
            }
            let f = -(&m[(j, i)] / &pivot);
            add_row(&mut m, &mut q, j, i, &f);
        }
    }
    let diagonal = (0..n).map(|i| m[(i, i)].a.clone()).collect();
    Ok(Diagonalization { base: q, diagonal })
}

/// `P = diag(scales)^{-1/2} * base` with `P A P* = I_{a,b}`. The square
/// roots stay symbolic; `verify` checks the identity exactly.
#[derive(Debug, Clone)]
pub struct NormalForm {
    pub base: KMatrix,
    pub scales: Vec<Rational>,
    pub signature: Signature,
}

impl NormalForm {
    /// `base A base* = diag(sign_i * scales_i)` with signs `(+^a, -^b)`.
    pub fn verify(&self, space: &HermitianSpace) -> Result<bool> {
        let t = self.base.mul(space.gram())?.mul(&self.base.star())?;
        let k = space.field();
        let expected: Vec<FieldElem> = self
            .scales
            .iter()
            .enumerate()
            .map(|(i, s)| k.from_rational(if i < self.signature.a { s.clone() } else { -s.clone() }))
            .collect();
        Ok(t == KMatrix::diagonal(k, &expected) && self.scales.iter().all(|s| s.is_positive()))
    }

    /// Entry `(i, j)` of `P` in the complex embedding.
    pub fn numeric_entry(&self, i: usize, j: usize, prec: u32) -> BigComplex {
        let s = Float::with_val(prec, to_float(&self.scales[i], prec).sqrt().recip());
        self.base[(i, j)].to_complex(prec).scale(&s)
    }

    pub fn is_identity(&self) -> bool {
        let n = self.base.rows();
        self.base == KMatrix::identity(self.base.field(), n)
            && self.scales.iter().all(|s| *s == Rational::from_integer(1.into()))
    }
}

pub fn normalize_to_iab(space: &HermitianSpace) -> Result<NormalForm> {
    let diag = congruence_diagonalize(space)?;
    let n = space.dim();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: positives first, original order within each block
    order.sort_by_key(|&i| diag.diagonal[i].is_negative());
    let a = diag.diagonal.iter().filter(|x| x.is_positive()).count();
    let k = space.field();
    let rows: Vec<Vec<FieldElem>> = order.iter().map(|&i| diag.base.row(i).to_vec()).collect();
    let base = KMatrix::from_rows(k, rows)?;
    let scales = order.iter().map(|&i| diag.diagonal[i].abs()).collect();
    Ok(NormalForm { base, scales, signature: Signature { a, b: n - a } })
}
