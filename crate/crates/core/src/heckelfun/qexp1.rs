use num_bigint::BigInt;
use num_traits::{Pow, Zero};

use crate::error::{precondition, Error, Result};
use crate::exactarith::{is_prime, BigComplex, Rational};
use crate::qexp::{eval_q_series, FourierExpansion};

/// A classical q-expansion `sum_{n <= B} a_n q^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QExp1 {
    pub weight: i64,
    pub level: u64,
    pub coeffs: Vec<Rational>,
}

impl QExp1 {
    pub fn new(weight: i64, level: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.is_empty() || level == 0 {
            return precondition("need at least a_0 and a positive level");
        }
        Ok(Self { weight, level, coeffs })
    }

    pub fn from_integers(weight: i64, coeffs: &[i128]) -> Self {
        Self { weight, level: 1, coeffs: coeffs.iter().map(|&c| Rational::from(BigInt::from(c))).collect() }
    }

    pub fn bound(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_cusp(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    pub fn coeff(&self, n: usize) -> &Rational {
        &self.coeffs[n]
    }

    pub fn truncate(&self, bound: usize) -> Result<Self> {
        if bound > self.bound() {
            return Err(Error::Insufficient(format!("have {} coefficients, need {}", self.bound(), bound)));
        }
        Ok(Self { coeffs: self.coeffs[..=bound].to_vec(), ..self.clone() })
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self { coeffs: self.coeffs.iter().map(|x| x * c).collect(), ..self.clone() }
    }

    /// Product of q-expansions; weights add, bound is the smaller one.
    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.level != o.level {
            return precondition("levels differ");
        }
        let b = self.bound().min(o.bound());
        let coeffs = (0..=b)
            .map(|n| (0..=n).fold(Rational::zero(), |acc, i| acc + &self.coeffs[i] * &o.coeffs[n - i]))
            .collect();
        Ok(Self { weight: self.weight + o.weight, level: self.level, coeffs })
    }

    pub fn evaluate(&self, z: &BigComplex) -> BigComplex {
        eval_q_series(&self.coeffs, z)
    }

    pub fn to_expansion(&self) -> Result<FourierExpansion> {
        FourierExpansion::from_q_series(&self.coeffs)
    }

    pub fn from_expansion(weight: i64, f: &FourierExpansion) -> Result<Self> {
        Self::new(weight, 1, f.to_q_series()?)
    }
}

/// `prod_{n >= 1} (1 - q^n)^3 = sum_{m >= 0} (-1)^m (2m + 1) q^(m(m+1)/2)`.
fn jacobi_cube(bound: usize) -> Vec<(usize, i128)> {
    (0usize..)
        .map(|m| (m * (m + 1) / 2, if m % 2 == 0 { 2 * m as i128 + 1 } else { -(2 * m as i128 + 1) }))
        .take_while(|&(e, _)| e <= bound)
        .collect()
}

/// `tau(0..=bound)` from `Delta = q (prod (1 - q^n)^3)^8`, multiplying by
/// the sparse Jacobi series eight times.
pub fn delta_coefficients(bound: usize) -> Vec<i128> {
    let mut out = vec![0i128; bound + 1];
    if bound == 0 {
        return out;
    }
    let len = bound; // exponents 0..bound-1 of the product
    let j = jacobi_cube(len - 1);
    let mut p = vec![0i128; len];
    p[0] = 1;
    for _ in 0..8 {
        let mut next = vec![0i128; len];
        for (i, &c) in p.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(e, t) in &j {
                if i + e >= len {
                    break;
                }
                next[i + e] += c * t;
            }
        }
        p = next;
    }
    out[1..].copy_from_slice(&p);
    out
}

pub fn delta_qexp(bound: usize) -> QExp1 {
    QExp1::from_integers(12, &delta_coefficients(bound))
}

/// `(T_p f)_n = a_{np} + p^(k-1) a_{n/p}` (level 1), for `n <= bound / p`.
///
/// This is the double coset `Gamma diag(1, p) Gamma` acting through its
/// decomposition into the `p + 1` cosets `[[1, j], [0, p]]` and
/// `[[p, 0], [0, 1]]`, normalized by `p^(k-1)`.
pub fn hecke_tp(f: &QExp1, p: u64) -> Result<QExp1> {
    hecke_tp_to(f, p, f.bound() / p as usize)
}

pub fn hecke_tp_to(f: &QExp1, p: u64, out_bound: usize) -> Result<QExp1> {
    if !is_prime(p) {
        return precondition(format!("{p} is not prime"));
    }
    if f.level != 1 {
        return precondition("Hecke operators are realized at level 1 only");
    }
    let p = p as usize;
    if out_bound * p > f.bound() {
        return Err(Error::Insufficient(format!(
            "T_{p} to bound {out_bound} needs coefficients up to {}, have {}",
            out_bound * p,
            f.bound()
        )));
    }
    let pk = Rational::from(Pow::pow(BigInt::from(p), (f.weight - 1) as u32));
    let coeffs = (0..=out_bound)
        .map(|n| {
            let mut c = f.coeffs[n * p].clone();
            if n % p == 0 {
                c += &pk * &f.coeffs[n / p];
            }
            c
        })
        .collect();
    QExp1::new(f.weight, 1, coeffs)
}
