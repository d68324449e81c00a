//! Classical Eisenstein series: exact q-expansions, truncated lattice sums,
//! and assembly of Fourier coefficients from local data.

mod character;
mod numeric;

pub use character::DirichletCharacter;
pub use numeric::{eisenstein_numeric, lattice_lower_bound, EisensteinNumeric, EisensteinSpec};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{precondition, Error, Result};
use crate::exactarith::arith::{divisor_sum_table, factor, ord_p};
use crate::exactarith::{primes_up_to, zeta_neg, Rational};
use crate::qexp::FourierExpansion;

/// `G_2k = zeta(1 - 2k) + 2 sum_{n >= 1} sigma_{2k-1}(n) q^n` up to `q^bound`.
pub fn g2k_qexp(k: u32, bound: usize) -> Result<FourierExpansion> {
    FourierExpansion::from_q_series(&g2k_coefficients(k, bound)?)
}

pub fn g2k_coefficients(k: u32, bound: usize) -> Result<Vec<Rational>> {
    if k < 2 {
        return precondition(format!("weight {} is not modular of level 1", 2 * k));
    }
    let sigma = divisor_sum_table(bound, 2 * k - 1);
    let mut out = Vec::with_capacity(bound + 1);
    out.push(zeta_neg(k)?);
    out.extend(sigma.into_iter().skip(1).map(|s| Rational::from(s * 2)));
    Ok(out)
}

/// `E_2k = G_2k / zeta(1 - 2k)`, constant term 1.
pub fn e2k_coefficients(k: u32, bound: usize) -> Result<Vec<Rational>> {
    let c = zeta_neg(k)?;
    Ok(g2k_coefficients(k, bound)?.into_iter().map(|x| x / &c).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinity,
    Prime(u64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinity => write!(f, "inf"),
            Place::Prime(p) => write!(f, "{p}"),
        }
    }
}

/// Local Fourier coefficients of the weight-`2k` series:
/// `n^(2k-1)` at infinity and `sum_{j <= ord_p n} p^(-j(2k-1))` at `p`.
pub fn classical_local_coeff(place: Place, n: u64, k: u32) -> Result<Rational> {
    if n == 0 {
        return precondition("local coefficients need n >= 1");
    }
    if k < 1 {
        return precondition("k must be positive");
    }
    let e = 2 * k - 1;
    match place {
        Place::Infinity => Ok(Rational::from(Pow::pow(BigInt::from(n), e))),
        Place::Prime(p) => {
            let step = Rational::new(BigInt::one(), Pow::pow(BigInt::from(p), e));
            let mut term = Rational::one();
            let mut acc = Rational::zero();
            for _ in 0..=ord_p(n, p) {
                acc += &term;
                term *= &step;
            }
            Ok(acc)
        }
    }
}

pub type LocalRule = Arc<dyn Fn(u64) -> Result<Rational> + Send + Sync>;

#[derive(Clone)]
pub struct LocalCoeffProvider {
    pub place: Place,
    pub rule: LocalRule,
}

impl std::fmt::Debug for LocalCoeffProvider {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LocalCoeffProvider({})", self.place)
    }
}

/// Providers at infinity and at every prime up to `prime_cutoff`.
pub fn classical_providers(k: u32, prime_cutoff: u64) -> Vec<LocalCoeffProvider> {
    std::iter::once(Place::Infinity)
        .chain(primes_up_to(prime_cutoff).into_iter().map(Place::Prime))
        .map(|place| LocalCoeffProvider {
            place,
            rule: Arc::new(move |n| classical_local_coeff(place, n, k)),
        })
        .collect()
}

/// The global constant relating `G_2k`'s `q^n` coefficient to the product of
/// the classical local coefficients, fixed by matching `G_2k`.
pub const CLASSICAL_GLOBAL_CONSTANT: i64 = 2;

/// Product of the local coefficients at infinity and at all primes up to
/// `prime_cutoff`. Every prime dividing `n` must be within the cutoff.
pub fn assemble_global_coeff(providers: &[LocalCoeffProvider], n: u64, prime_cutoff: u64) -> Result<Rational> {
    if n == 0 {
        return precondition("index must be >= 1");
    }
    if let Some((p, _)) = factor(n).into_iter().find(|&(p, _)| p > prime_cutoff) {
        return precondition(format!("prime {p} divides {n} but exceeds the cutoff {prime_cutoff}"));
    }
    let by_place: BTreeMap<Place, &LocalCoeffProvider> = providers.iter().map(|p| (p.place, p)).collect();
    let places = std::iter::once(Place::Infinity).chain(primes_up_to(prime_cutoff).into_iter().map(Place::Prime));
    let mut acc = Rational::one();
    for place in places {
        let provider = by_place.get(&place).ok_or_else(|| Error::Missing(format!("no provider at {place}")))?;
        acc *= (provider.rule)(n)?;
    }
    Ok(acc)
}
