use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{build_unitary_pel_datum, congruence_diagonalize, signature, HermitianSpace, Signature};
use crate::error::Result;
use crate::exactarith::rational::rat;
use crate::exactarith::{FieldElem, KMatrix, QuadField};

pub fn random_elem(k: QuadField, rng: &mut impl Rng) -> FieldElem {
    k.elem(rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)), rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)))
}

/// `M + M*` for random `M`, resampled until nondegenerate.
pub fn random_space(k: QuadField, n: usize, rng: &mut impl Rng) -> HermitianSpace {
    loop {
        let rows = (0..n).map(|_| (0..n).map(|_| random_elem(k, rng)).collect()).collect();
        let m = KMatrix::from_rows(k, rows).expect("square");
        if let Ok(s) = HermitianSpace::new(m.add(&m.star()).expect("same shape")) {
            return s;
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PelValidation {
    pub d: u64,
    pub seed: u64,
    pub signatures: Vec<Signature>,
    pub q_dim: usize,
    pub basis_ok: bool,
    pub random_triples: usize,
    pub random_triples_ok: usize,
    pub signature_spaces: usize,
    /// `a + b = n` and `a` equals the positive count of a congruence
    /// diagonalization.
    pub signature_ok: usize,
}

impl PelValidation {
    pub fn passed(&self) -> bool {
        self.basis_ok && self.random_triples_ok == self.random_triples && self.signature_ok == self.signature_spaces
    }
}

/// Builds a unitary PEL datum from a random rank-2 space, the standard line
/// and `I_{1,1}` with `alpha = sqrt(-d)`, checks it on the full basis and on
/// random `(b, v, w)`, then audits signatures of random spaces.
pub fn validate_pel(d: u64, triples: usize, signature_spaces: usize, seed: u64) -> Result<PelValidation> {
    let k = QuadField::new(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spaces = vec![
        random_space(k, 2, &mut rng),
        HermitianSpace::standard(k, 1),
        HermitianSpace::new(KMatrix::i_ab(k, 1, 1))?,
    ];
    let datum = build_unitary_pel_datum(spaces, k.root())?;
    let basis_ok = datum.verify_on_basis();
    let n = datum.k_dim();
    let mut triples_ok = 0;
    for _ in 0..triples {
        let b = random_elem(k, &mut rng);
        let v: Vec<FieldElem> = (0..n).map(|_| random_elem(k, &mut rng)).collect();
        let w: Vec<FieldElem> = (0..n).map(|_| random_elem(k, &mut rng)).collect();
        let alternating = datum.pairing(&v, &w) == -datum.pairing(&w, &v) && datum.pairing(&v, &v).is_zero();
        if alternating && datum.is_compatible(&b, &v, &w) {
            triples_ok += 1;
        }
    }
    let mut signature_ok = 0;
    for _ in 0..signature_spaces {
        let dim = rng.gen_range(1..=4);
        let s = random_space(k, dim, &mut rng);
        let sig = signature(&s)?;
        let pos = congruence_diagonalize(&s)?.diagonal.iter().filter(|x| x.is_positive()).count();
        if sig.n() == dim && sig.a == pos {
            signature_ok += 1;
        }
    }
    Ok(PelValidation {
        d,
        seed,
        signatures: datum.signatures.clone(),
        q_dim: datum.q_dim(),
        basis_ok,
        random_triples: triples,
        random_triples_ok: triples_ok,
        signature_spaces,
        signature_ok,
    })
}
