//! Finite-field model of the doubling method's orbit decomposition.
//!
//! `V` is a nondegenerate Hermitian space over `F_{q^2}` (conjugation
//! `x -> x^q`), `W = V + V` carries `<,> + (-<,>)`, and `U x U` acts on the
//! maximal isotropic subspaces of `W`. Vectors are rows and matrices act on
//! the right; `g` is unitary iff `g A conj(g)^T = A`.

mod gf;

pub use gf::{Gf, GfDescription};

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{precondition, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return precondition("ragged matrix");
        }
        Ok(Self { rows: rows.len(), cols, data: rows.concat() })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: u8) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    fn hcat(&self, o: &Self) -> Self {
        let mut m = Self::zeros(self.rows, self.cols + o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(i, j, self.get(i, j));
            }
            for j in 0..o.cols {
                m.set(i, self.cols + j, o.get(i, j));
            }
        }
        m
    }

    fn columns(&self, range: std::ops::Range<usize>) -> Self {
        let mut m = Self::zeros(self.rows, range.len());
        for i in 0..self.rows {
            for (k, j) in range.clone().enumerate() {
                m.set(i, k, self.get(i, j));
            }
        }
        m
    }
}

pub fn mat_mul(f: &Gf, a: &Mat, b: &Mat) -> Mat {
    assert_eq!(a.cols, b.rows);
    let mut m = Mat::zeros(a.rows, b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = 0;
            for k in 0..a.cols {
                acc = f.add(acc, f.mul(a.get(i, k), b.get(k, j)));
            }
            m.set(i, j, acc);
        }
    }
    m
}

pub fn mat_sub(f: &Gf, a: &Mat, b: &Mat) -> Mat {
    Mat { rows: a.rows, cols: a.cols, data: a.data.iter().zip(&b.data).map(|(&x, &y)| f.sub(x, y)).collect() }
}

/// `conj(a)^T`.
pub fn conj_transpose(f: &Gf, a: &Mat) -> Mat {
    let mut m = Mat::zeros(a.cols, a.rows);
    for i in 0..a.rows {
        for j in 0..a.cols {
            m.set(j, i, f.conj(a.get(i, j)));
        }
    }
    m
}

/// Reduced row echelon form with zero rows removed: the canonical basis of
/// the row space.
pub fn rref(f: &Gf, a: &Mat) -> Mat {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..m.cols {
        let Some(p) = (r..m.rows).find(|&i| m.get(i, c) != 0) else {
            continue;
        };
        for j in 0..m.cols {
            let (x, y) = (m.get(r, j), m.get(p, j));
            m.set(r, j, y);
            m.set(p, j, x);
        }
        let inv = f.inv(m.get(r, c));
        for j in 0..m.cols {
            m.set(r, j, f.mul(inv, m.get(r, j)));
        }
        for i in 0..m.rows {
            let t = m.get(i, c);
            if i != r && t != 0 {
                for j in 0..m.cols {
                    let v = f.sub(m.get(i, j), f.mul(t, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
        }
        r += 1;
        if r == m.rows {
            break;
        }
    }
    Mat { rows: r, cols: m.cols, data: m.data[..r * m.cols].to_vec() }
}

pub fn rank(f: &Gf, a: &Mat) -> usize {
    rref(f, a).rows
}

fn vstack(a: &Mat, b: &Mat) -> Mat {
    let cols = if a.rows == 0 { b.cols } else { a.cols };
    Mat { rows: a.rows + b.rows, cols, data: [a.data.as_slice(), b.data.as_slice()].concat() }
}

fn in_span(f: &Gf, basis: &Mat, v: &Mat) -> bool {
    if v.is_zero() {
        return true;
    }
    rank(f, &vstack(basis, v)) == basis.rows
}

/// All vectors of `F_{q^2}^len`, in increasing lexicographic order.
fn all_vectors(f: &Gf, len: usize) -> Vec<Vec<u8>> {
    let s = f.size() as usize;
    (0..s.pow(len as u32))
        .map(|mut k| {
            let mut v = vec![0u8; len];
            for x in v.iter_mut().rev() {
                *x = (k % s) as u8;
                k /= s;
            }
            v
        })
        .collect()
}

/// Enumeration caps.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Budget {
    /// Cap on `|F_{q^2}|^(n^2)`, the unitary-group search space.
    pub group: u128,
    /// Cap on the number of echelon-form candidates for isotropic subspaces.
    pub subspaces: u128,
}

impl Default for Budget {
    fn default() -> Self {
        Self { group: 10_000_000, subspaces: 10_000_000 }
    }
}

#[derive(Debug, Clone)]
pub struct FiniteHermSpace {
    field: Arc<Gf>,
    gram: Mat,
}

impl FiniteHermSpace {
    pub fn new(field: Arc<Gf>, gram: Mat) -> Result<Self> {
        if gram.rows != gram.cols || gram.rows == 0 {
            return Err(Error::DimensionMismatch("gram matrix must be square and nonempty".into()));
        }
        if conj_transpose(&field, &gram) != gram {
            return precondition("gram matrix is not Hermitian");
        }
        if rank(&field, &gram) != gram.rows {
            return Err(Error::Degenerate("gram matrix is singular".into()));
        }
        Ok(Self { field, gram })
    }

    /// `V = F_{q^2}^n` with the identity form; every nondegenerate
    /// Hermitian space over a finite field is isometric to it.
    pub fn standard(q: u8, n: usize) -> Result<Self> {
        Self::new(Arc::new(Gf::new(q)?), Mat::identity(n))
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn q(&self) -> u8 {
        self.field.q()
    }

    pub fn n(&self) -> usize {
        self.gram.rows
    }

    pub fn gram(&self) -> &Mat {
        &self.gram
    }

    /// `v A conj(w)^T`.
    pub fn pairing(&self, v: &[u8], w: &[u8]) -> u8 {
        let f = &self.field;
        let mut acc = 0;
        for i in 0..self.n() {
            for j in 0..self.n() {
                acc = f.add(acc, f.mul(f.mul(v[i], self.gram.get(i, j)), f.conj(w[j])));
            }
        }
        acc
    }

    pub fn is_isotropic(&self, basis: &Mat) -> bool {
        (0..basis.rows).all(|i| (i..basis.rows).all(|j| self.pairing(basis.row(i), basis.row(j)) == 0))
    }

    pub fn is_unitary(&self, g: &Mat) -> bool {
        let f = &self.field;
        mat_mul(f, &mat_mul(f, g, &self.gram), &conj_transpose(f, g)) == self.gram
    }
}

/// `q^(n(n-1)/2) prod_{i=1}^n (q^i - (-1)^i)`.
pub fn unitary_order_formula(n: usize, q: u64) -> u128 {
    let mut acc = (q as u128).pow((n * (n.saturating_sub(1)) / 2) as u32);
    for i in 1..=n as u32 {
        let qi = (q as i128).pow(i);
        acc *= (qi - if i % 2 == 0 { 1 } else { -1 }) as u128;
    }
    acc
}

/// All `g` with `g A conj(g)^T = A`, by row-wise search: row `i` must pair
/// with rows `j <= i` to `A_ij`. Sorted.
pub fn unitary_elements(space: &FiniteHermSpace, budget: &Budget) -> Result<Vec<Mat>> {
    let n = space.n();
    let needed = (space.field().size() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    if needed > budget.group {
        return Err(Error::Budget { needed, cap: budget.group });
    }
    let vectors = all_vectors(space.field(), n);
    let mut out = Vec::new();
    let mut rows: Vec<&Vec<u8>> = Vec::with_capacity(n);
    fn extend<'a>(
        space: &FiniteHermSpace,
        vectors: &'a [Vec<u8>],
        rows: &mut Vec<&'a Vec<u8>>,
        out: &mut Vec<Mat>,
    ) {
        let i = rows.len();
        if i == space.n() {
            out.push(Mat::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).expect("square"));
            return;
        }
        for v in vectors {
            if space.pairing(v, v) != space.gram.get(i, i) {
                continue;
            }
            if (0..i).all(|j| space.pairing(v, rows[j]) == space.gram.get(i, j)) {
                rows.push(v);
                extend(space, vectors, rows, out);
                rows.pop();
            }
        }
    }
    extend(space, &vectors, &mut rows, &mut out);
    out.sort();
    Ok(out)
}

/// `W = V + V` with gram `diag(A, -A)`.
pub fn doubled_space(space: &FiniteHermSpace) -> FiniteHermSpace {
    let f = space.field();
    let n = space.n();
    let mut g = Mat::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            g.set(i, j, space.gram.get(i, j));
            g.set(n + i, n + j, f.neg(space.gram.get(i, j)));
        }
    }
    FiniteHermSpace::new(space.field.clone(), g).expect("doubling preserves nondegeneracy")
}

/// A maximal isotropic subspace of a doubled space, by its canonical
/// reduced-echelon basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicSubspace {
    pub basis: Mat,
}

impl IsotropicSubspace {
    pub fn dim(&self) -> usize {
        self.basis.rows
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out.sort();
    out
}

/// Exhaustive list of isotropic subspaces of dimension `dim W / 2`. The
/// search is sharded by pivot pattern; each candidate is already in
/// canonical form, so merging is a sort.
pub fn maximal_isotropic(w: &FiniteHermSpace, budget: &Budget) -> Result<Vec<IsotropicSubspace>> {
    let total = w.n();
    if total % 2 != 0 {
        return precondition("ambient dimension must be even");
    }
    let m = total / 2;
    let f = w.field();
    let s = f.size() as u128;
    let patterns = combinations(total, m);
    let free_count = |p: &[usize]| -> usize {
        p.iter().enumerate().map(|(i, &c)| (c + 1..total).filter(|j| !p[i + 1..].contains(j)).count()).sum()
    };
    let needed: u128 = patterns.iter().map(|p| s.saturating_pow(free_count(p) as u32)).fold(0u128, u128::saturating_add);
    if needed > budget.subspaces {
        return Err(Error::Budget { needed, cap: budget.subspaces });
    }
    let mut out: Vec<IsotropicSubspace> = patterns
        .par_iter()
        .flat_map_iter(|p| {
            let slots: Vec<(usize, usize)> = p
                .iter()
                .enumerate()
                .flat_map(|(i, &c)| (c + 1..total).filter(|j| !p.contains(j)).map(move |j| (i, j)))
                .collect();
            let fills = all_vectors(f, slots.len());
            fills.into_iter().filter_map(move |fill| {
                let mut b = Mat::zeros(m, total);
                for (i, &c) in p.iter().enumerate() {
                    b.set(i, c, 1);
                }
                for (&(i, j), &x) in slots.iter().zip(&fill) {
                    b.set(i, j, x);
                }
                w.is_isotropic(&b).then_some(IsotropicSubspace { basis: b })
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// `U x U` acting on maximal isotropic subspaces of `V + V`, with the
/// enumerations done once.
pub struct DoublingModel {
    pub space: FiniteHermSpace,
    pub doubled: FiniteHermSpace,
    pub unitary: Vec<Mat>,
    pub subspaces: Vec<IsotropicSubspace>,
    index: HashMap<Mat, usize>,
    unitary_index: HashMap<Mat, usize>,
    inverse: Vec<usize>,
}

/// Orbit labelled by `d = dim(L cap V+)`; `members` index `subspaces`.
#[derive(Debug, Clone, Serialize)]
pub struct Orbit {
    pub label: usize,
    pub members: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct OrbitClassification {
    pub orbits: Vec<Orbit>,
    /// `dim(L cap V+) = dim(L cap V-)` for every `L`.
    pub dims_balanced: bool,
    /// Each orbit has one label and distinct orbits have distinct labels.
    pub single_orbit_per_label: bool,
}

/// A pair `(g, h)` as indices into `DoublingModel::unitary`.
pub type PairIndex = (usize, usize);

#[derive(Debug, Clone, Serialize)]
pub struct Negligibility {
    pub negligible: bool,
    pub note: String,
    /// `N+ x N-` from the flags `V > pi(L) > L cap V` on each side.
    pub witness: Vec<PairIndex>,
    pub contained_in_stabilizer: bool,
    pub normal_in_stabilizer: bool,
    /// `(g - 1)^n = 0` in each factor for every witness element.
    pub unipotent: bool,
    /// Orders of `{g : (g, 1) in Stab, g unipotent}` and the same for the
    /// second factor: any unipotent product subgroup of the stabilizer lies
    /// in their product.
    pub product_unipotent_orders: [usize; 2],
}

impl DoublingModel {
    pub fn new(n: usize, q: u8, budget: &Budget) -> Result<Self> {
        if n == 0 {
            return precondition("n must be positive");
        }
        let space = FiniteHermSpace::standard(q, n)?;
        Self::from_space(space, budget)
    }

    pub fn from_space(space: FiniteHermSpace, budget: &Budget) -> Result<Self> {
        let doubled = doubled_space(&space);
        let unitary = unitary_elements(&space, budget)?;
        let subspaces = maximal_isotropic(&doubled, budget)?;
        let index = subspaces.iter().enumerate().map(|(i, l)| (l.basis.clone(), i)).collect();
        let unitary_index: HashMap<Mat, usize> = unitary.iter().enumerate().map(|(i, g)| (g.clone(), i)).collect();
        let f = space.field();
        let id = Mat::identity(space.n());
        let inverse = unitary
            .iter()
            .map(|g| {
                // g^-1 = A conj(g)^T A^-1 is again unitary; search is cheap.
                unitary.iter().position(|h| mat_mul(f, g, h) == id).expect("group")
            })
            .collect();
        Ok(Self { space, doubled, unitary, subspaces, index, unitary_index, inverse })
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn field(&self) -> &Gf {
        self.space.field()
    }

    pub fn product_order(&self) -> usize {
        self.unitary.len() * self.unitary.len()
    }

    /// `L (g, h)` in canonical form.
    pub fn act(&self, l: &Mat, (g, h): PairIndex) -> Mat {
        let n = self.n();
        let f = self.field();
        let left = mat_mul(f, &l.columns(0..n), &self.unitary[g]);
        let right = mat_mul(f, &l.columns(n..2 * n), &self.unitary[h]);
        rref(f, &left.hcat(&right))
    }

    fn pairs(&self) -> impl Iterator<Item = PairIndex> + '_ {
        let u = self.unitary.len();
        (0..u).flat_map(move |g| (0..u).map(move |h| (g, h)))
    }

    pub fn subspace_index(&self, l: &Mat) -> Option<usize> {
        self.index.get(l).copied()
    }

    /// `(dim(L cap V+), dim(L cap V-))`.
    pub fn intersection_dims(&self, l: &Mat) -> (usize, usize) {
        let n = self.n();
        let f = self.field();
        (n - rank(f, &l.columns(n..2 * n)), n - rank(f, &l.columns(0..n)))
    }

    /// `V^Delta = {(v, v)}`.
    pub fn diagonal_subspace(&self) -> Mat {
        let n = self.n();
        rref(self.field(), &Mat::identity(n).hcat(&Mat::identity(n)))
    }

    pub fn classify_orbits(&self) -> OrbitClassification {
        let mut seen = vec![false; self.subspaces.len()];
        let mut orbits = Vec::new();
        let mut single = true;
        for start in 0..self.subspaces.len() {
            if seen[start] {
                continue;
            }
            let l = &self.subspaces[start].basis;
            let images: Vec<usize> = self
                .pairs()
                .collect::<Vec<_>>()
                .par_iter()
                .map(|&p| self.subspace_index(&self.act(l, p)).expect("action preserves isotropy"))
                .collect();
            let mut members: Vec<usize> = images;
            members.sort_unstable();
            members.dedup();
            for &i in &members {
                seen[i] = true;
            }
            let labels: Vec<usize> = members.iter().map(|&i| self.intersection_dims(&self.subspaces[i].basis).0).collect();
            let label = labels[0];
            if labels.iter().any(|&d| d != label) {
                single = false;
            }
            orbits.push(Orbit { label, members });
        }
        let mut labels: Vec<usize> = orbits.iter().map(|o| o.label).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            single = false;
        }
        orbits.sort_by_key(|o| o.label);
        let dims_balanced = self.subspaces.iter().all(|l| {
            let (a, b) = self.intersection_dims(&l.basis);
            a == b
        });
        OrbitClassification { orbits, dims_balanced, single_orbit_per_label: single }
    }

    pub fn stabilizer(&self, l: &Mat) -> Vec<PairIndex> {
        let l = rref(self.field(), l);
        self.pairs().filter(|&p| self.act(&l, p) == l).collect()
    }

    pub fn is_unipotent(&self, g: usize) -> bool {
        let f = self.field();
        let n = self.n();
        let x = mat_sub(f, &self.unitary[g], &Mat::identity(n));
        let mut p = x.clone();
        for _ in 1..n {
            p = mat_mul(f, &p, &x);
        }
        p.is_zero()
    }

    fn identity_index(&self) -> usize {
        self.unitary_index[&Mat::identity(self.n())]
    }

    /// Unipotent radical of the parabolic fixing the flag `V > big > small`
    /// (`small` isotropic, `big` its orthogonal): `g` fixes `small`
    /// pointwise and moves `big` into `small` and `V` into `big`.
    fn flag_radical(&self, big: &Mat, small: &Mat) -> Vec<usize> {
        let f = self.field();
        let n = self.n();
        let id = Mat::identity(n);
        (0..self.unitary.len())
            .filter(|&g| {
                let x = mat_sub(f, &self.unitary[g], &id);
                let moved = |basis: &Mat| mat_mul(f, basis, &x);
                moved(small).is_zero()
                    && (0..big.rows).all(|i| in_span(f, small, &Mat::from_rows(&[moved(big).row(i).to_vec()]).unwrap()))
                    && (0..n).all(|i| in_span(f, big, &Mat::from_rows(&[x.row(i).to_vec()]).unwrap()))
            })
            .collect()
    }

    pub fn check_negligible(&self, orbit: &Orbit) -> Negligibility {
        let n = self.n();
        let f = self.field();
        let l = &self.subspaces[orbit.members[0]].basis;
        let stab = self.stabilizer(l);
        let one = self.identity_index();
        let stab_set: std::collections::HashSet<PairIndex> = stab.iter().copied().collect();
        let product_unipotent_orders = [
            stab.iter().filter(|&&(g, h)| h == one && self.is_unipotent(g)).count(),
            stab.iter().filter(|&&(g, h)| g == one && self.is_unipotent(h)).count(),
        ];
        if n == 1 {
            return Negligibility {
                negligible: false,
                note: "no proper parabolic exists".into(),
                witness: vec![(one, one)],
                contained_in_stabilizer: true,
                normal_in_stabilizer: true,
                unipotent: true,
                product_unipotent_orders,
            };
        }
        // L cap V+ = vectors of L with vanishing second half, and its
        // projection pi+(L); likewise for V-.
        let coeffs = all_vectors(f, n);
        let vectors: Vec<Mat> = coeffs
            .iter()
            .map(|c| mat_mul(f, &Mat::from_rows(&[c.clone()]).unwrap(), l))
            .collect();
        let side = |range: std::ops::Range<usize>, other: std::ops::Range<usize>| {
            let rows: Vec<Vec<u8>> = vectors
                .iter()
                .filter(|v| v.columns(other.clone()).is_zero())
                .map(|v| v.columns(range.clone()).row(0).to_vec())
                .collect();
            let small = if rows.is_empty() { Mat::zeros(0, n) } else { rref(f, &Mat::from_rows(&rows).unwrap()) };
            let big = rref(f, &l.columns(range));
            (big, small)
        };
        let (big_p, small_p) = side(0..n, n..2 * n);
        let (big_m, small_m) = side(n..2 * n, 0..n);
        let n_plus = self.flag_radical(&big_p, &small_p);
        let n_minus = self.flag_radical(&big_m, &small_m);
        let witness: Vec<PairIndex> = n_plus.iter().flat_map(|&g| n_minus.iter().map(move |&h| (g, h))).collect();
        let witness_set: std::collections::HashSet<PairIndex> = witness.iter().copied().collect();
        let contained = witness.iter().all(|p| stab_set.contains(p));
        let conj = |s: usize, x: usize| -> usize {
            let m = mat_mul(f, &mat_mul(f, &self.unitary[s], &self.unitary[x]), &self.unitary[self.inverse[s]]);
            self.unitary_index[&m]
        };
        let normal = stab
            .iter()
            .all(|&(a, b)| witness.iter().all(|&(x, y)| witness_set.contains(&(conj(a, x), conj(b, y)))));
        let unipotent = witness.iter().all(|&(g, h)| self.is_unipotent(g) && self.is_unipotent(h));
        let nontrivial = witness.len() > 1;
        let negligible = nontrivial && contained && normal && unipotent;
        let note = if negligible {
            format!("N+ x N- of order {} is a normal unipotent subgroup of the stabilizer", witness.len())
        } else if !nontrivial {
            "L cap V+ = 0: the flag construction gives the trivial group".into()
        } else {
            "flag construction does not give a normal unipotent subgroup".into()
        };
        Negligibility {
            negligible,
            note,
            witness,
            contained_in_stabilizer: contained,
            normal_in_stabilizer: normal,
            unipotent,
            product_unipotent_orders,
        }
    }

    pub fn report(&self) -> DoublingReport {
        let classes = self.classify_orbits();
        let orbits: Vec<OrbitReport> = classes
            .orbits
            .iter()
            .map(|o| {
                let rep = &self.subspaces[o.members[0]].basis;
                let stabilizer_order = self.stabilizer(rep).len();
                let neg = self.check_negligible(o);
                OrbitReport {
                    label: format!("X{}", o.label),
                    d: o.label,
                    size: o.members.len(),
                    representative: rep.to_rows(),
                    stabilizer_order,
                    orbit_stabilizer_ok: o.members.len() * stabilizer_order == self.product_order(),
                    negligible: neg.negligible,
                    note: neg.note,
                    witness_order: neg.witness.len(),
                    witness: neg
                        .witness
                        .iter()
                        .map(|&(g, h)| [self.unitary[g].to_rows(), self.unitary[h].to_rows()])
                        .collect(),
                    witness_unipotent: neg.unipotent,
                    witness_normal: neg.normal_in_stabilizer,
                    product_unipotent_orders: neg.product_unipotent_orders,
                }
            })
            .collect();
        let mut counts = BTreeMap::new();
        counts.insert("total".to_string(), self.subspaces.len());
        for o in &orbits {
            counts.insert(o.label.clone(), o.size);
        }
        let diag = self.stabilizer(&self.diagonal_subspace());
        let equals_diagonal = diag.len() == self.unitary.len() && diag.iter().all(|&(g, h)| g == h);
        DoublingReport {
            schema: 1,
            n: self.n(),
            q: self.space.q(),
            field: self.field().describe(),
            unitary_order: self.unitary.len(),
            unitary_order_formula: unitary_order_formula(self.n(), self.space.q() as u64),
            product_order: self.product_order(),
            counts,
            orbits,
            dims_balanced: classes.dims_balanced,
            single_orbit_per_label: classes.single_orbit_per_label,
            diagonal_stabilizer: DiagonalReport { order: diag.len(), equals_diagonal },
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitReport {
    pub label: String,
    pub d: usize,
    pub size: usize,
    pub representative: Vec<Vec<u8>>,
    pub stabilizer_order: usize,
    pub orbit_stabilizer_ok: bool,
    pub negligible: bool,
    pub note: String,
    pub witness_order: usize,
    pub witness: Vec<[Vec<Vec<u8>>; 2]>,
    pub witness_unipotent: bool,
    pub witness_normal: bool,
    pub product_unipotent_orders: [usize; 2],
}

#[derive(Debug, Clone, Serialize)]
pub struct DiagonalReport {
    pub order: usize,
    pub equals_diagonal: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DoublingReport {
    pub schema: u32,
    pub n: usize,
    pub q: u8,
    pub field: GfDescription,
    pub unitary_order: usize,
    pub unitary_order_formula: u128,
    pub product_order: usize,
    pub counts: BTreeMap<String, usize>,
    pub orbits: Vec<OrbitReport>,
    pub dims_balanced: bool,
    pub single_orbit_per_label: bool,
    pub diagonal_stabilizer: DiagonalReport,
}
