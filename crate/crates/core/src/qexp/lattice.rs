//! `Z`-lattices inside the real vector space of `n x n` Hermitian matrices
//! over `K`, with the trace pairing `(h, m) -> trace(h m)`.

use std::cmp::Ordering;

use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exactarith::rational::{int, to_f64};
use crate::exactarith::{FieldElem, KMatrix, QuadField, Rational};

/// Real coordinates of a Hermitian matrix: the diagonal, then for each
/// `i < j` the two rational coordinates of the `(i, j)` entry.
pub fn herm_coords(h: &KMatrix) -> Vec<Rational> {
    let n = h.rows();
    let mut out: Vec<Rational> = (0..n).map(|i| h[(i, i)].a.clone()).collect();
    for i in 0..n {
        for j in i + 1..n {
            out.push(h[(i, j)].a.clone());
            out.push(h[(i, j)].b.clone());
        }
    }
    out
}

/// `trace(h m)`, rational for Hermitian `h, m`.
pub fn trace_pairing(h: &KMatrix, m: &KMatrix) -> Rational {
    let n = h.rows();
    let mut acc = h.field().zero();
    for i in 0..n {
        for k in 0..n {
            acc = &acc + &(&h[(i, k)] * &m[(k, i)]);
        }
    }
    acc.a
}

/// A Hermitian matrix used as a Fourier index, ordered canonically by
/// `(trace, diagonal entries, off-diagonal coordinates)`.
#[derive(Clone)]
pub struct HermIndex {
    mat: KMatrix,
    key: Vec<Rational>,
}

impl HermIndex {
    pub fn new(mat: KMatrix) -> Self {
        let mut key = vec![mat.trace().a];
        key.extend(herm_coords(&mat));
        Self { mat, key }
    }

    pub fn matrix(&self) -> &KMatrix {
        &self.mat
    }

    pub fn trace(&self) -> &Rational {
        &self.key[0]
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.mat.add(&o.mat).expect("indices share a shape"))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// All principal minors are nonnegative.
    pub fn is_psd(&self) -> bool {
        principal_minors(&self.mat).iter().all(|m| !m.is_negative())
    }

    /// All leading principal minors are positive.
    pub fn is_positive_definite(&self) -> bool {
        let n = self.mat.rows();
        (1..=n).all(|k| {
            let sub = submatrix(&self.mat, &(0..k).collect::<Vec<_>>());
            sub.det().expect("square").a.is_positive()
        })
    }
}

impl PartialEq for HermIndex {
    fn eq(&self, o: &Self) -> bool {
        self.key == o.key
    }
}

impl Eq for HermIndex {}

impl PartialOrd for HermIndex {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for HermIndex {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key.cmp(&o.key)
    }
}

impl std::fmt::Debug for HermIndex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:?}", self.mat)
    }
}

fn submatrix(m: &KMatrix, idx: &[usize]) -> KMatrix {
    let rows = idx.iter().map(|&i| idx.iter().map(|&j| m[(i, j)].clone()).collect()).collect();
    KMatrix::from_rows(m.field(), rows).expect("square")
}

fn principal_minors(m: &KMatrix) -> Vec<Rational> {
    let n = m.rows();
    (1u32..(1 << n))
        .map(|mask| {
            let idx: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            submatrix(m, &idx).det().expect("square").a
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermLattice {
    field: QuadField,
    n: usize,
    basis: Vec<KMatrix>,
}

impl HermLattice {
    pub fn new(field: QuadField, n: usize, basis: Vec<KMatrix>) -> Result<Self> {
        for b in &basis {
            if b.rows() != n || b.cols() != n || !b.is_hermitian() {
                return Err(Error::Precondition("lattice basis elements must be n x n Hermitian".into()));
            }
            if b.field() != field {
                return Err(Error::FieldMismatch { left: field.d(), right: b.field().d() });
            }
        }
        let coords: Vec<Vec<FieldElem>> = basis
            .iter()
            .map(|b| herm_coords(b).into_iter().map(|x| field.from_rational(x)).collect())
            .collect();
        if !basis.is_empty() && KMatrix::from_rows(field, coords)?.rank() != basis.len() {
            return Err(Error::Degenerate("lattice basis is linearly dependent".into()));
        }
        Ok(Self { field, n, basis })
    }

    /// `Z` inside the 1x1 Hermitian matrices (the classical case).
    pub fn classical() -> Self {
        let k = QuadField::gaussian();
        Self { field: k, n: 1, basis: vec![KMatrix::identity(k, 1)] }
    }

    /// `N Z` inside the 1x1 Hermitian matrices.
    pub fn classical_scaled(scale: Rational) -> Result<Self> {
        let k = QuadField::gaussian();
        Self::new(k, 1, vec![KMatrix::diagonal(k, &[k.from_rational(scale)])])
    }

    /// Hermitian matrices with integer diagonal and off-diagonal entries in
    /// `Z[sqrt(-d)]`.
    pub fn integral_hermitian(field: QuadField, n: usize) -> Self {
        let mut basis = Vec::new();
        for i in 0..n {
            let mut e = KMatrix::zeros(field, n, n);
            e[(i, i)] = field.one();
            basis.push(e);
        }
        for i in 0..n {
            for j in i + 1..n {
                for x in [field.one(), field.root()] {
                    let mut e = KMatrix::zeros(field, n, n);
                    e[(i, j)] = x.clone();
                    e[(j, i)] = x.conj();
                    basis.push(e);
                }
            }
        }
        Self { field, n, basis }
    }

    pub fn field(&self) -> QuadField {
        self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn basis(&self) -> &[KMatrix] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn is_full_rank(&self) -> bool {
        self.basis.len() == self.n * self.n
    }

    /// Gram matrix of the trace pairing on the basis.
    pub fn trace_gram(&self) -> KMatrix {
        let rows = self
            .basis
            .iter()
            .map(|b| self.basis.iter().map(|c| self.field.from_rational(trace_pairing(b, c))).collect())
            .collect();
        KMatrix::from_rows(self.field, rows).expect("square")
    }

    /// Rational coordinates of `h` in this basis, if `h` lies in its span.
    pub fn coordinates(&self, h: &KMatrix) -> Option<Vec<Rational>> {
        let g = self.trace_gram();
        let ginv = g.inverse().ok()?;
        let rhs: Vec<Rational> = self.basis.iter().map(|b| trace_pairing(h, b)).collect();
        let m = self.basis.len();
        let coords: Vec<Rational> = (0..m)
            .map(|i| (0..m).fold(Rational::zero(), |acc, j| acc + &ginv[(i, j)].a * &rhs[j]))
            .collect();
        (self.combine_rational(&coords) == *h).then_some(coords)
    }

    pub fn contains(&self, h: &KMatrix) -> bool {
        self.coordinates(h).is_some_and(|c| c.iter().all(Rational::is_integer))
    }

    pub fn combine(&self, coeffs: &[i64]) -> KMatrix {
        let c: Vec<Rational> = coeffs.iter().map(|&x| int(x)).collect();
        self.combine_rational(&c)
    }

    fn combine_rational(&self, coeffs: &[Rational]) -> KMatrix {
        let mut acc = KMatrix::zeros(self.field, self.n, self.n);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = acc.add(&b.scale(&self.field.from_rational(c.clone()))).expect("shape");
            }
        }
        acc
    }

    /// Same `Z`-module, independent of the chosen bases.
    pub fn same_lattice(&self, o: &Self) -> bool {
        self.n == o.n
            && self.field == o.field
            && self.rank() == o.rank()
            && o.basis.iter().all(|b| self.contains(b))
            && self.basis.iter().all(|b| o.contains(b))
    }
}

/// `M^dual = { h : trace(h m) in Z for all m in M }`, via the inverse of the
/// trace Gram matrix.
pub fn dual_lattice(m: &HermLattice) -> Result<HermLattice> {
    if !m.is_full_rank() {
        return Err(Error::Degenerate(format!(
            "lattice of rank {} in dimension {}",
            m.rank(),
            m.n * m.n
        )));
    }
    let ginv = m
        .trace_gram()
        .inverse()
        .map_err(|_| Error::Degenerate("singular trace Gram matrix".into()))?;
    let r = m.rank();
    let basis = (0..r)
        .map(|j| {
            let coeffs: Vec<Rational> = (0..r).map(|i| ginv[(j, i)].a.clone()).collect();
            m.combine_rational(&coeffs)
        })
        .collect();
    Ok(HermLattice { field: m.field, n: m.n, basis })
}

/// PSD points of `lattice` with trace at most `bound`, in canonical order.
///
/// PSD with trace `t` forces Frobenius norm at most `t`, so the candidates
/// are the lattice points in a ball for the positive definite form
/// `trace(h^2)`, found by Fincke-Pohst enumeration in exact arithmetic.
pub fn enumerate_psd(lattice: &HermLattice, bound: &Rational) -> Result<Vec<HermIndex>> {
    if bound.is_negative() {
        return Err(Error::Precondition("trace bound must be nonnegative".into()));
    }
    let m = lattice.rank();
    let g = lattice.trace_gram();
    let g: Vec<Vec<Rational>> = (0..m).map(|i| (0..m).map(|j| g[(i, j)].a.clone()).collect()).collect();
    let (q, mu) = ldl(&g)?;
    let radius = bound * bound;
    let mut out = Vec::new();
    let mut coeffs = vec![0i64; m];
    fincke_pohst(&q, &mu, m, &radius, &mut coeffs, &mut |c| {
        let h = HermIndex::new(lattice.combine(c));
        if h.trace() <= bound && h.is_psd() {
            out.push(h);
        }
    });
    out.sort();
    out.dedup();
    Ok(out)
}

/// `Q(c) = sum_i q_i (c_i + sum_{j>i} mu_ij c_j)^2`.
fn ldl(g: &[Vec<Rational>]) -> Result<(Vec<Rational>, Vec<Vec<Rational>>)> {
    let m = g.len();
    let mut a: Vec<Vec<Rational>> = g.to_vec();
    let mut q = vec![Rational::zero(); m];
    let mut mu = vec![vec![Rational::zero(); m]; m];
    for i in 0..m {
        if !a[i][i].is_positive() {
            return Err(Error::Degenerate("trace form is not positive definite".into()));
        }
        q[i] = a[i][i].clone();
        for j in i + 1..m {
            mu[i][j] = &a[i][j] / &q[i];
        }
        for r in i + 1..m {
            for c in i + 1..m {
                let t = &mu[i][r] * &a[i][c];
                a[r][c] -= t;
            }
        }
    }
    Ok((q, mu))
}

fn fincke_pohst(
    q: &[Rational],
    mu: &[Vec<Rational>],
    level: usize,
    remaining: &Rational,
    coeffs: &mut Vec<i64>,
    visit: &mut impl FnMut(&[i64]),
) {
    if level == 0 {
        visit(coeffs);
        return;
    }
    let i = level - 1;
    let m = q.len();
    let center: Rational = -(i + 1..m).fold(Rational::zero(), |acc, j| acc + &mu[i][j] * int(coeffs[j]));
    let spread = (to_f64(remaining) / to_f64(&q[i])).max(0.0).sqrt();
    let c = to_f64(&center);
    let lo = (c - spread).floor() as i64 - 1;
    let hi = (c + spread).ceil() as i64 + 1;
    for x in lo..=hi {
        let diff = int(x) - &center;
        let used = &q[i] * &diff * &diff;
        if used > *remaining {
            continue;
        }
        coeffs[i] = x;
        let rest = remaining - used;
        fincke_pohst(q, mu, i, &rest, coeffs, visit);
    }
    coeffs[i] = 0;
}

/// Integer bound on `|coordinate|` used by the brute-force box oracle.
pub fn coordinate_box_bound(lattice: &HermLattice, bound: &Rational) -> Result<i64> {
    let dual = dual_lattice(lattice)?;
    let d = lattice.field.d() as f64;
    let t = to_f64(bound);
    let mut best = 0f64;
    // |trace(h m)| <= trace(h) |m|_F for PSD h.
    for b in dual.basis() {
        let frob: f64 = b.entries().iter().map(|e| to_f64(&e.a).powi(2) + to_f64(&e.b).powi(2) * d).sum();
        best = best.max(frob.sqrt() * t);
    }
    Ok(best.ceil().to_i64().unwrap_or(i64::MAX) + 1)
}
