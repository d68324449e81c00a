use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rug::Float;
use serde::Serialize;

use super::satake::{EulerCoeffs, EulerFactor, SatakeData};
use crate::error::{precondition, Error, Result};
use crate::exactarith::rational::to_float;
use crate::exactarith::{primes_up_to, BigComplex, Rational};

#[derive(Debug, Clone)]
pub struct PartialL {
    pub value: BigComplex,
    /// `|L_v(s) - 1|` for the largest prime included.
    pub last_factor_deviation: f64,
    pub primes_used: usize,
    pub cutoff: u64,
}

/// `prod_{p <= cutoff, p not in S} L_p(s)`, multiplied in increasing `p`.
pub fn partial_l(
    factors: &BTreeMap<u64, EulerFactor>,
    excluded: &BTreeSet<u64>,
    s: &BigComplex,
    cutoff: u64,
) -> Result<PartialL> {
    let prec = s.prec();
    let mut value = BigComplex::one(prec);
    let mut last = 0.0;
    let mut used = 0;
    for p in primes_up_to(cutoff) {
        if excluded.contains(&p) {
            continue;
        }
        let f = factors.get(&p).ok_or_else(|| Error::Missing(format!("no Euler factor at {p}")))?;
        let l = f.local_l(s)?;
        last = (&l - &BigComplex::one(prec)).abs().to_f64();
        value = &value * &l;
        used += 1;
    }
    Ok(PartialL { value, last_factor_deviation: last, primes_used: used, cutoff })
}

/// The same Euler factor shape `1 - c X` at every prime (degree one).
pub fn degree_one_factors(cutoff: u64, c: &Rational) -> BTreeMap<u64, EulerFactor> {
    primes_up_to(cutoff)
        .into_iter()
        .map(|p| (p, EulerFactor::rational(p, p, vec![Rational::one(), -c.clone()]).expect("constant 1")))
        .collect()
}

/// Checks `deg <= n` for each factor against the data it came from.
pub fn check_degree(f: &EulerFactor, data: &SatakeData) -> Result<()> {
    if f.degree() > data.n() {
        return precondition(format!("Euler factor degree {} exceeds n = {}", f.degree(), data.n()));
    }
    Ok(())
}

/// Dirichlet coefficients `a(1..=bound)` of `prod_p 1 / P_p(p^(-s))`: each
/// local inverse is expanded as a power series in `X = p^(-s)` and the
/// coefficients are combined multiplicatively. Needs rational factors with
/// `q_v = p` at every prime up to `bound`.
pub fn dirichlet_coefficients(factors: &BTreeMap<u64, EulerFactor>, bound: u64) -> Result<Vec<Rational>> {
    let mut out = vec![Rational::zero(); bound as usize + 1];
    if bound >= 1 {
        out[1] = Rational::one();
    }
    let mut local: BTreeMap<u64, Vec<Rational>> = BTreeMap::new();
    for p in primes_up_to(bound) {
        let f = factors.get(&p).ok_or_else(|| Error::Missing(format!("no Euler factor at {p}")))?;
        if f.q_v != p {
            return precondition("Dirichlet coefficients need q_v = p");
        }
        let EulerCoeffs::Rational(c) = &f.coeffs else {
            return precondition("Dirichlet coefficients need exact Euler factors");
        };
        let mut e_max = 0;
        let mut pe = p;
        while pe <= bound {
            e_max += 1;
            pe = pe.saturating_mul(p);
        }
        // 1 / P(X) = sum b_e X^e with b_0 = 1, b_e = -sum_{i>=1} c_i b_{e-i}.
        let mut b = vec![Rational::one()];
        for e in 1..=e_max {
            let mut acc = Rational::zero();
            for (i, ci) in c.iter().enumerate().skip(1) {
                if i <= e {
                    acc -= ci * &b[e - i];
                }
            }
            b.push(acc);
        }
        local.insert(p, b);
    }
    for n in 2..=bound {
        let mut acc = Rational::one();
        for (p, e) in crate::exactarith::arith::factor(n) {
            acc *= &local[&p][e as usize];
        }
        out[n as usize] = acc;
    }
    Ok(out)
}

/// Value of an unramified local character on a uniformizer, `exp(2 pi i a)`.
pub fn unit_root(angle: &Rational, prec: u32) -> BigComplex {
    let t = Float::with_val(prec, to_float(angle, prec) * BigComplex::pi(prec)) * 2u32;
    BigComplex::new(t.clone().cos(), t.sin())
}

#[derive(Debug, Clone, Serialize)]
pub struct DnvTerm {
    pub r: usize,
    /// Argument `2s + n - r` of the local abelian L-factor.
    pub argument: [String; 2],
    /// Angle of `chi eta^r` on the uniformizer.
    pub character_angle: String,
    pub value: [String; 2],
}

#[derive(Debug, Clone)]
pub struct Dnv {
    pub n: usize,
    pub terms: Vec<DnvTerm>,
    pub term_values: Vec<BigComplex>,
    pub value: BigComplex,
}

fn pair(z: &BigComplex) -> [String; 2] {
    [z.re.to_string_radix(10, Some(25)), z.im.to_string_radix(10, Some(25))]
}

/// `d_{n,v}(s) = prod_{r=0}^{n-1} L_v(2s + n - r, chi eta^r)` with
/// `L_v(t, psi) = (1 - psi(w) q_v^(-t))^(-1)`; characters are given by their
/// angles on the uniformizer `w`.
pub fn doubling_dnv(n: usize, s: &BigComplex, chi_angle: &Rational, eta_angle: &Rational, q_v: u64) -> Result<Dnv> {
    if n < 1 {
        return precondition("n must be at least 1");
    }
    let prec = s.prec();
    let q = Float::with_val(prec, q_v);
    let mut terms = Vec::with_capacity(n);
    let mut term_values = Vec::with_capacity(n);
    let mut value = BigComplex::one(prec);
    for r in 0..n {
        let arg = &s.scale_f64(2.0) + &BigComplex::from_f64(prec, (n - r) as f64, 0.0);
        let angle = chi_angle + eta_angle * Rational::from_integer((r as i64).into());
        let angle = &angle - angle.floor();
        let x = &unit_root(&angle, prec) * &BigComplex::real_pow(&q, &-arg.clone());
        let denom = &BigComplex::one(prec) - &x;
        if denom.is_zero() {
            return Err(Error::Numerical(format!("pole of the r = {r} factor")));
        }
        let l = denom.recip();
        value = &value * &l;
        terms.push(DnvTerm {
            r,
            argument: pair(&arg),
            character_angle: crate::exactarith::rational::to_string(&angle),
            value: pair(&l),
        });
        term_values.push(l);
    }
    Ok(Dnv { n, terms, term_values, value })
}

/// `L_v(s, pi_v, chi_v) = prod_i (1 - chi(w) alpha_i q_v^(-s))^(-1)`.
pub fn local_standard_l(data: &SatakeData, chi_angle: &Rational, s: &BigComplex) -> Result<BigComplex> {
    let prec = s.prec();
    let chi = unit_root(chi_angle, prec);
    let x = BigComplex::real_pow(&Float::with_val(prec, data.q_v()), &-s.clone());
    let mut acc = BigComplex::one(prec);
    for a in &data.params {
        let d = &BigComplex::one(prec) - &(&(&chi * &a.to_complex(prec)) * &x);
        if d.is_zero() {
            return Err(Error::Numerical("pole of the local L-factor".into()));
        }
        acc = &acc * &d.recip();
    }
    Ok(acc)
}

/// `Z_v = L_v(s + 1/2, pi_v, chi_v) / d_{n,v}(s)`, the part of the local
/// doubling integral left after the normalizing factor.
pub fn doubling_zv(data: &SatakeData, chi_angle: &Rational, eta_angle: &Rational, s: &BigComplex) -> Result<BigComplex> {
    let half = BigComplex::from_f64(s.prec(), 0.5, 0.0);
    let l = local_standard_l(data, chi_angle, &(s + &half))?;
    let d = doubling_dnv(data.n(), s, chi_angle, eta_angle, data.q_v())?;
    Ok(&l / &d.value)
}
