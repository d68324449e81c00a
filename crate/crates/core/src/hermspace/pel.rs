use num_traits::Zero;

use super::{signature, HermitianSpace, Signature};
use crate::error::{Error, Result};
use crate::exactarith::rational::int;
use crate::exactarith::{FieldElem, QuadField, Rational};

/// PEL datum of unitary type: `V = V_1 + ... + V_m` with the alternating
/// `Q`-valued pairing `sum_i trace_{K/Q}(alpha <v_i, w_i>_i)`.
///
/// The underlying `Q`-basis of `V` runs over the spaces in order and, inside
/// each, over `e_j` then `sqrt(-d) e_j` for every coordinate `j`.
#[derive(Debug, Clone)]
pub struct PelDatumUnitary {
    pub spaces: Vec<HermitianSpace>,
    pub alpha: FieldElem,
    pub q_gram: Vec<Vec<Rational>>,
    pub signatures: Vec<Signature>,
}

impl PelDatumUnitary {
    pub fn field(&self) -> QuadField {
        self.alpha.field()
    }

    /// Total `K`-dimension.
    pub fn k_dim(&self) -> usize {
        self.spaces.iter().map(HermitianSpace::dim).sum()
    }

    pub fn q_dim(&self) -> usize {
        2 * self.k_dim()
    }

    /// The pairing on `K`-coordinate vectors (concatenated over the spaces).
    pub fn pairing(&self, v: &[FieldElem], w: &[FieldElem]) -> Rational {
        let mut off = 0;
        let mut acc = Rational::zero();
        for s in &self.spaces {
            let n = s.dim();
            let h = s.pairing(&v[off..off + n], &w[off..off + n]);
            acc += (&self.alpha * &h).trace();
            off += n;
        }
        acc
    }

    /// The pairing through the stored rational Gram matrix.
    pub fn q_pairing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                acc += xi * &self.q_gram[i][j] * yj;
            }
        }
        acc
    }

    pub fn to_q_coords(&self, v: &[FieldElem]) -> Vec<Rational> {
        v.iter().flat_map(|x| [x.a.clone(), x.b.clone()]).collect()
    }

    pub fn from_q_coords(&self, x: &[Rational]) -> Vec<FieldElem> {
        let k = self.field();
        x.chunks(2).map(|c| k.elem(c[0].clone(), c[1].clone())).collect()
    }

    /// Alternating: the Gram matrix is antisymmetric with zero diagonal.
    pub fn is_alternating(&self) -> bool {
        let n = self.q_dim();
        (0..n).all(|i| {
            self.q_gram[i][i].is_zero() && (0..n).all(|j| self.q_gram[i][j] == -self.q_gram[j][i].clone())
        })
    }

    /// `<b v, w> = <v, conj(b) w>`.
    pub fn is_compatible(&self, b: &FieldElem, v: &[FieldElem], w: &[FieldElem]) -> bool {
        let bv: Vec<FieldElem> = v.iter().map(|x| b * x).collect();
        let bw: Vec<FieldElem> = w.iter().map(|x| &b.conj() * x).collect();
        self.pairing(&bv, w) == self.pairing(v, &bw)
    }

    /// Checks alternation, compatibility with the generators `1, sqrt(-d)`
    /// and agreement of the Gram matrix with the pairing on the full basis.
    pub fn verify_on_basis(&self) -> bool {
        let n = self.q_dim();
        let k = self.field();
        let basis: Vec<Vec<FieldElem>> = (0..n)
            .map(|i| {
                let mut x = vec![Rational::zero(); n];
                x[i] = int(1);
                self.from_q_coords(&x)
            })
            .collect();
        if !self.is_alternating() {
            return false;
        }
        for (i, v) in basis.iter().enumerate() {
            for (j, w) in basis.iter().enumerate() {
                if self.pairing(v, w) != self.q_gram[i][j] || self.pairing(v, w) != -self.pairing(w, v) {
                    return false;
                }
                for b in [k.one(), k.root()] {
                    if !self.is_compatible(&b, v, w) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// The Gram matrix has integer entries (a necessary condition for a
    /// self-dual lattice on the standard basis).
    pub fn is_integral(&self) -> bool {
        self.q_gram.iter().flatten().all(|x| x.is_integer())
    }
}

pub fn build_unitary_pel_datum(spaces: Vec<HermitianSpace>, alpha: FieldElem) -> Result<PelDatumUnitary> {
    if spaces.is_empty() {
        return Err(Error::Precondition("at least one Hermitian space is required".into()));
    }
    if alpha.is_zero() || !alpha.trace().is_zero() {
        return Err(Error::Precondition(format!("alpha = {alpha} is not totally imaginary")));
    }
    let k = alpha.field();
    if let Some(s) = spaces.iter().find(|s| s.field() != k) {
        return Err(Error::FieldMismatch { left: k.d(), right: s.field().d() });
    }
    let signatures = spaces.iter().map(signature).collect::<Result<Vec<_>>>()?;
    let mut datum = PelDatumUnitary { spaces, alpha, q_gram: Vec::new(), signatures };
    let n = datum.q_dim();
    let basis: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            let mut x = vec![Rational::zero(); n];
            x[i] = int(1);
            datum.from_q_coords(&x)
        })
        .collect();
    datum.q_gram = basis
        .iter()
        .map(|v| basis.iter().map(|w| datum.pairing(v, w)).collect())
        .collect();
    Ok(datum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactarith::KMatrix;
    use crate::hermspace::tests::{random_elem, random_space};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gaussian_line_examples() {
        let k = QuadField::gaussian();
        let i = k.root();
        let v = HermitianSpace::new(KMatrix::identity(k, 1)).unwrap();
        let datum = build_unitary_pel_datum(vec![v], i.clone()).unwrap();
        assert!(datum.verify_on_basis());
        assert_eq!(datum.pairing(&[i.clone()], &[k.one()]), int(-2));
        assert_eq!(datum.pairing(&[k.one()], &[i.clone()]), int(2));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let x = random_elem(k, &mut rng);
            assert!(datum.pairing(&[x.clone()], &[x]).is_zero());
        }
        assert_eq!(datum.signatures, vec![Signature { a: 1, b: 0 }]);
    }

    #[test]
    fn alpha_must_be_totally_imaginary() {
        let k = QuadField::gaussian();
        let v = HermitianSpace::standard(k, 2);
        assert!(build_unitary_pel_datum(vec![v.clone()], k.one()).is_err());
        assert!(build_unitary_pel_datum(vec![v], k.zero()).is_err());
        assert!(build_unitary_pel_datum(vec![], k.root()).is_err());
    }

    #[test]
    fn random_data_satisfy_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for d in [1u64, 3] {
            let k = QuadField::new(d).unwrap();
            let spaces = vec![random_space(k, 2, &mut rng), random_space(k, 1, &mut rng)];
            let datum = build_unitary_pel_datum(spaces, k.root().scale(&int(3))).unwrap();
            assert!(datum.verify_on_basis());
            let n = datum.k_dim();
            for _ in 0..20 {
                let v: Vec<_> = (0..n).map(|_| random_elem(k, &mut rng)).collect();
                let w: Vec<_> = (0..n).map(|_| random_elem(k, &mut rng)).collect();
                let b = random_elem(k, &mut rng);
                assert_eq!(datum.pairing(&v, &w), -datum.pairing(&w, &v));
                assert!(datum.is_compatible(&b, &v, &w));
                let (x, y) = (datum.to_q_coords(&v), datum.to_q_coords(&w));
                assert_eq!(datum.q_pairing(&x, &y), datum.pairing(&v, &w));
            }
        }
    }
}
