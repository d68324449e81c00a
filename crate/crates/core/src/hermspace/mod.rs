//! Hermitian spaces over `K = Q(sqrt(-d))`: signatures, unitary and
//! similitude membership, normal forms and PEL data of unitary type.
//!
//! Vectors are rows and the pairing is `<v, w> = v A w*`, so `g` preserves
//! the pairing exactly when `g A g* = A`.

mod normal;
mod pel;
mod validate;

pub use normal::{congruence_diagonalize, normalize_to_iab, Diagonalization, NormalForm};
pub use pel::{build_unitary_pel_datum, PelDatumUnitary};
pub use validate::{random_elem, random_space, validate_pel, PelValidation};

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactarith::arith::{is_prime, kronecker_prime};
use crate::exactarith::kmatrix::rational_coeffs;
use crate::exactarith::{FieldElem, KMatrix, QuadField, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Signature {
    pub a: usize,
    pub b: usize,
}

impl Signature {
    pub fn n(&self) -> usize {
        self.a + self.b
    }
}

/// A nondegenerate Hermitian space `(K^n, A)` with `A = A*`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HermitianSpace {
    gram: KMatrix,
}

impl HermitianSpace {
    pub fn new(gram: KMatrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("Gram matrix must be square".into()));
        }
        if !gram.is_hermitian() {
            return Err(Error::Precondition("Gram matrix is not Hermitian".into()));
        }
        if gram.det()?.is_zero() {
            return Err(Error::Degenerate("Gram matrix is singular".into()));
        }
        Ok(Self { gram })
    }

    pub fn standard(field: QuadField, n: usize) -> Self {
        Self { gram: KMatrix::identity(field, n) }
    }

    pub fn gram(&self) -> &KMatrix {
        &self.gram
    }

    pub fn field(&self) -> QuadField {
        self.gram.field()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    /// `<v, w> = v A w*` for row vectors.
    pub fn pairing(&self, v: &[FieldElem], w: &[FieldElem]) -> FieldElem {
        let n = self.dim();
        let mut acc = self.field().zero();
        for i in 0..n {
            for j in 0..n {
                let t = &(&v[i] * &self.gram[(i, j)]) * &w[j].conj();
                acc = &acc + &t;
            }
        }
        acc
    }

    fn check_operator(&self, g: &KMatrix) -> Result<()> {
        if g.rows() != self.dim() || g.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}x{}, space has dimension {}",
                g.rows(),
                g.cols(),
                self.dim()
            )));
        }
        if g.field() != self.field() {
            return Err(Error::FieldMismatch { left: self.field().d(), right: g.field().d() });
        }
        Ok(())
    }

    fn transport(&self, g: &KMatrix) -> Result<KMatrix> {
        self.check_operator(g)?;
        g.mul(&self.gram)?.mul(&g.star())
    }
}

/// Counts of positive and negative eigenvalues of the Gram matrix. The
/// characteristic polynomial has rational coefficients and only real roots,
/// so Descartes' rule of signs counts them exactly.
pub fn signature(space: &HermitianSpace) -> Result<Signature> {
    let cp = space.gram.charpoly()?;
    let cp = rational_coeffs(&cp)
        .ok_or_else(|| Error::Degenerate("characteristic polynomial not rational".into()))?;
    if cp[0].is_zero() {
        return Err(Error::Degenerate("Gram matrix is singular".into()));
    }
    let a = sign_changes(cp.iter().cloned());
    let b = sign_changes(
        cp.iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 1 { -c.clone() } else { c.clone() }),
    );
    Ok(Signature { a, b })
}

fn sign_changes(coeffs: impl Iterator<Item = Rational>) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for c in coeffs.filter(|c| !c.is_zero()) {
        let pos = c.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

/// `g A g* == A`, exactly.
pub fn is_unitary(space: &HermitianSpace, g: &KMatrix) -> Result<bool> {
    Ok(space.transport(g)? == space.gram)
}

/// The rational `nu` with `g A g* = nu A`, if one exists.
pub fn similitude_factor(space: &HermitianSpace, g: &KMatrix) -> Result<Rational> {
    let t = space.transport(g)?;
    let (idx, pivot) = space
        .gram
        .entries()
        .iter()
        .enumerate()
        .find(|(_, x)| !x.is_zero())
        .expect("nondegenerate Gram has a nonzero entry");
    let nu = &t.entries()[idx] / pivot;
    if !nu.is_rational() {
        return Err(Error::NotSimilitude("scaling factor is not rational".into()));
    }
    if t != space.gram.scale(&nu) {
        return Err(Error::NotSimilitude("g A g* is not a multiple of A".into()));
    }
    if nu.a.is_zero() {
        return Err(Error::NotSimilitude("g is singular".into()));
    }
    Ok(nu.a)
}

/// Marker for a rational prime split in `K`, where the local unitary group
/// is `GL_n` of the completion at a prime above `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlace {
    pub p: u64,
    pub d: u64,
    pub n: usize,
}

pub fn split_place_transport(space: &HermitianSpace, p: u64) -> Result<SplitPlace> {
    if !is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    let k = space.field();
    match kronecker_prime(k.discriminant(), p) {
        1 => Ok(SplitPlace { p, d: k.d(), n: space.dim() }),
        0 => Err(Error::NotSplit { p, d: k.d(), kind: "ramified" }),
        _ => Err(Error::NotSplit { p, d: k.d(), kind: "inert" }),
    }
}

/// JSON form: `{"d": 1, "gram": [[["1","0"], ...], ...]}` with each entry the
/// pair `[a, b]` of rational strings meaning `a + b sqrt(-d)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HermitianSpaceJson {
    pub d: u64,
    pub gram: Vec<Vec<[String; 2]>>,
}

impl HermitianSpaceJson {
    pub fn from_space(space: &HermitianSpace) -> Self {
        let g = space.gram();
        Self {
            d: space.field().d(),
            gram: (0..g.rows()).map(|i| g.row(i).iter().map(FieldElem::to_pair).collect()).collect(),
        }
    }

    pub fn to_space(&self) -> Result<HermitianSpace> {
        let k = QuadField::new(self.d)?;
        let rows = self
            .gram
            .iter()
            .map(|row| row.iter().map(|e| FieldElem::from_pair(k, e)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        HermitianSpace::new(KMatrix::from_rows(k, rows)?)
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::exactarith::rational::{int, rat};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn random_elem(k: QuadField, rng: &mut impl Rng) -> FieldElem {
        k.elem(rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)), rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
    }

    pub(crate) fn random_matrix(k: QuadField, n: usize, rng: &mut impl Rng) -> KMatrix {
        let rows = (0..n).map(|_| (0..n).map(|_| random_elem(k, rng)).collect()).collect();
        KMatrix::from_rows(k, rows).unwrap()
    }

    pub(crate) fn random_space(k: QuadField, n: usize, rng: &mut impl Rng) -> HermitianSpace {
        loop {
            let m = random_matrix(k, n, rng);
            let h = m.add(&m.star()).unwrap();
            if let Ok(s) = HermitianSpace::new(h) {
                return s;
            }
        }
    }

    fn gram(k: QuadField, rows: Vec<Vec<FieldElem>>) -> HermitianSpace {
        HermitianSpace::new(KMatrix::from_rows(k, rows).unwrap()).unwrap()
    }

    #[test]
    fn signature_examples() {
        let k = QuadField::gaussian();
        assert_eq!(signature(&HermitianSpace::standard(k, 3)).unwrap(), Signature { a: 3, b: 0 });
        for (a, b) in [(2, 1), (1, 3), (0, 2)] {
            let s = HermitianSpace::new(KMatrix::i_ab(k, a, b)).unwrap();
            assert_eq!(signature(&s).unwrap(), Signature { a, b });
        }
        let i = k.root();
        let eta = gram(k, vec![vec![k.zero(), -&i], vec![i.clone(), k.zero()]]);
        assert_eq!(signature(&eta).unwrap(), Signature { a: 1, b: 1 });
    }

    #[test]
    fn degenerate_rejected() {
        let k = QuadField::gaussian();
        let m = KMatrix::from_rows(k, vec![vec![k.int(1), k.int(1)], vec![k.int(1), k.int(1)]]).unwrap();
        assert!(matches!(HermitianSpace::new(m), Err(Error::Degenerate(_))));
        let nh = KMatrix::from_rows(k, vec![vec![k.int(1), k.int(2)], vec![k.int(3), k.int(1)]]).unwrap();
        assert!(matches!(HermitianSpace::new(nh), Err(Error::Precondition(_))));
    }

    #[test]
    fn signature_matches_congruence_diagonalization() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in [1u64, 2, 3, 5] {
            let k = QuadField::new(d).unwrap();
            for n in 1..=4 {
                for _ in 0..5 {
                    let s = random_space(k, n, &mut rng);
                    let sig = signature(&s).unwrap();
                    let diag = congruence_diagonalize(&s).unwrap();
                    let pos = diag.diagonal.iter().filter(|x| x.is_positive()).count();
                    assert_eq!(sig, Signature { a: pos, b: n - pos });
                }
            }
        }
    }

    #[test]
    fn unitary_examples() {
        let k = QuadField::gaussian();
        let i = k.root();
        let s = HermitianSpace::standard(k, 2);
        assert!(is_unitary(&s, &KMatrix::identity(k, 2)).unwrap());
        assert!(is_unitary(&s, &KMatrix::diagonal(k, &[i.clone(), -&i])).unwrap());
        let iab = HermitianSpace::new(KMatrix::i_ab(k, 1, 1)).unwrap();
        let g = KMatrix::diagonal(k, &[k.int(2), k.from_rational(rat(1, 2))]);
        assert!(!is_unitary(&iab, &g).unwrap());
        assert!(is_unitary(&s, &KMatrix::identity(k, 3)).is_err());
    }

    #[test]
    fn similitude_examples() {
        let k = QuadField::new(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let s = random_space(k, 3, &mut rng);
        assert_eq!(similitude_factor(&s, &KMatrix::identity(k, 3)).unwrap(), int(1));
        let c = k.elem(int(2), int(1));
        let g = KMatrix::identity(k, 3).scale(&c);
        assert_eq!(similitude_factor(&s, &g).unwrap(), c.norm());
        let bad = random_matrix(k, 3, &mut rng);
        assert!(matches!(similitude_factor(&s, &bad), Err(Error::NotSimilitude(_))));
    }

    #[test]
    fn similitude_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let k = QuadField::gaussian();
        let s = HermitianSpace::new(KMatrix::i_ab(k, 1, 1)).unwrap();
        // similitudes of diag(1,-1): scalar times unitary; unitary built from
        // hyperbolic rotations [[x, y], [conj y, conj x]] with |x|^2 - |y|^2 = 1
        let rot = |x: FieldElem, y: FieldElem| {
            KMatrix::from_rows(k, vec![vec![x.clone(), y.clone()], vec![y.conj(), x.conj()]]).unwrap()
        };
        for _ in 0..20 {
            let c1 = random_elem(k, &mut rng);
            let c2 = random_elem(k, &mut rng);
            if c1.is_zero() || c2.is_zero() {
                continue;
            }
            // x = (t^2+1)/2t, y = (t^2-1)/2t satisfy x^2 - y^2 = 1
            let t = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
            let x = (&t * &t + int(1)) / (int(2) * &t);
            let y = (&t * &t - int(1)) / (int(2) * &t);
            let u = rot(k.from_rational(x), k.elem(y, int(0)));
            let g = u.scale(&c1);
            let h = KMatrix::identity(k, 2).scale(&c2);
            let gh = g.mul(&h).unwrap();
            let nu = |m: &KMatrix| similitude_factor(&s, m).unwrap();
            assert_eq!(nu(&gh), nu(&g) * nu(&h));
        }
    }

    #[test]
    fn signature_invariant_under_congruence() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let k = QuadField::gaussian();
        for _ in 0..10 {
            let s = random_space(k, 3, &mut rng);
            let g = loop {
                let g = random_matrix(k, 3, &mut rng);
                if !g.det().unwrap().is_zero() {
                    break g;
                }
            };
            let t = HermitianSpace::new(g.mul(s.gram()).unwrap().mul(&g.star()).unwrap()).unwrap();
            assert_eq!(signature(&s).unwrap(), signature(&t).unwrap());
        }
    }

    #[test]
    fn split_places() {
        let k = QuadField::gaussian();
        let s = HermitianSpace::standard(k, 3);
        assert_eq!(split_place_transport(&s, 5).unwrap(), SplitPlace { p: 5, d: 1, n: 3 });
        assert_eq!(split_place_transport(&s, 3), Err(Error::NotSplit { p: 3, d: 1, kind: "inert" }));
        assert_eq!(split_place_transport(&s, 2), Err(Error::NotSplit { p: 2, d: 1, kind: "ramified" }));
        assert!(split_place_transport(&s, 4).is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let s = random_space(QuadField::new(7).unwrap(), 2, &mut rng);
        let j = serde_json::to_string(&HermitianSpaceJson::from_space(&s)).unwrap();
        let back: HermitianSpaceJson = serde_json::from_str(&j).unwrap();
        assert_eq!(back.to_space().unwrap(), s);
    }
}
