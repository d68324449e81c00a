use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;

use super::DirichletCharacter;
use crate::error::{precondition, Error, Result};
use crate::exactarith::BigComplex;
use crate::symdomain::DomainPoint;

/// `E_{lambda,N}(z, s, chi) = sum' chi(n) (mNz + n)^(-lambda) |mNz + n|^(-2s)`.
#[derive(Debug, Clone)]
pub struct EisensteinSpec {
    pub weight: i64,
    pub level: u64,
    pub character: DirichletCharacter,
    pub s: BigComplex,
}

impl EisensteinSpec {
    pub fn new(weight: i64, level: u64, character: DirichletCharacter, s: BigComplex) -> Result<Self> {
        if level == 0 || character.modulus() != level {
            return precondition("character modulus must equal the level");
        }
        Ok(Self { weight, level, character, s })
    }

    pub fn level_one(weight: i64, prec: u32) -> Self {
        Self { weight, level: 1, character: DirichletCharacter::trivial(1), s: BigComplex::zero(prec) }
    }

    /// `lambda + 2 Re(s)`, the decay exponent of the summand.
    pub fn sigma(&self) -> f64 {
        self.weight as f64 + 2.0 * self.s.re.to_f64()
    }
}

#[derive(Debug, Clone)]
pub struct EisensteinNumeric {
    /// Box sum over `max(|m|, |n|) <= cutoff`.
    pub value: BigComplex,
    /// Rigorous bound on the omitted terms.
    pub tail_bound: f64,
    /// Richardson extrapolation from the box sums at `cutoff` and
    /// `cutoff / 2`, assuming the omitted shells decay like `C^(2 - sigma)`.
    pub extrapolated: BigComplex,
    pub cutoff: u64,
}

/// `min |x w + y|` over `max(|x|, |y|) = 1`, so that
/// `|m w + n| >= c max(|m|, |n|)`.
pub fn lattice_lower_bound(w: (f64, f64)) -> f64 {
    let (u, v) = w;
    let mut best = f64::INFINITY;
    // Edges x = +-1.
    let dx = if u.abs() <= 1.0 { 0.0 } else { u.abs() - 1.0 };
    best = best.min(dx * dx + v * v);
    // Edges y = +-1: f(x) = (x u + 1)^2 + x^2 v^2.
    let f = |x: f64| (x * u + 1.0).powi(2) + x * x * v * v;
    let xs = -u / (u * u + v * v);
    if xs.abs() <= 1.0 {
        best = best.min(f(xs));
    }
    best = best.min(f(1.0)).min(f(-1.0));
    best.sqrt()
}

pub fn eisenstein_numeric(spec: &EisensteinSpec, z: &DomainPoint, cutoff: u64) -> Result<EisensteinNumeric> {
    if z.z().rows() != 1 || z.z().cols() != 1 {
        return Err(Error::DimensionMismatch("lattice sums need a point of H_1".into()));
    }
    let z = z.scalar();
    if z.im.is_sign_negative() || z.im.is_zero() {
        return precondition("z must lie in the upper half plane");
    }
    let sigma = spec.sigma();
    if sigma <= 2.0 {
        return Err(Error::Convergence(format!(
            "need Re(2s) > 2 - lambda, got lambda + 2 Re(s) = {sigma}"
        )));
    }
    if cutoff < 2 {
        return precondition("cutoff must be at least 2");
    }
    let prec = z.prec();
    let w = z.scale(&Float::with_val(prec, spec.level));
    let c = cutoff as i64;
    let half = c / 2;
    let s_zero = spec.s.is_zero();
    let neg_s = -spec.s.clone();
    // Real integer s: |w|^(-2s) by repeated multiplication.
    let s_int = (spec.s.im.is_zero() && spec.s.re.is_integer()).then(|| spec.s.re.to_f64() as i32);
    let modulus = spec.level as i64;
    let chi: Vec<BigComplex> = (0..modulus).map(|r| spec.character.value(r, prec)).collect();
    let lambda = spec.weight;

    let term = |m: i64, n: i64| -> BigComplex {
        let x = BigComplex::new(
            Float::with_val(prec, &w.re * m) + n,
            Float::with_val(prec, &w.im * m),
        );
        let mut t = x.powi(-lambda);
        if !s_zero {
            let norm = x.norm_sqr();
            t = match s_int {
                Some(k) => t.scale(&Float::with_val(prec, norm.pow(-k))),
                None => &t * &BigComplex::real_pow(&norm, &neg_s),
            };
        }
        t
    };

    // Each row m is summed in increasing n, rows are combined in increasing
    // m, so the result is independent of the thread schedule.
    let rows: Vec<(BigComplex, BigComplex)> = (-c..=c)
        .into_par_iter()
        .map(|m| {
            let mut inner = BigComplex::zero(prec);
            let mut outer = BigComplex::zero(prec);
            for n in -c..=c {
                if m == 0 && n == 0 {
                    continue;
                }
                let ch = &chi[n.rem_euclid(modulus) as usize];
                if ch.is_zero() {
                    continue;
                }
                let t = &term(m, n) * ch;
                if m.abs() <= half && n.abs() <= half {
                    inner = &inner + &t;
                } else {
                    outer = &outer + &t;
                }
            }
            (inner, outer)
        })
        .collect();
    let mut inner = BigComplex::zero(prec);
    let mut outer = BigComplex::zero(prec);
    for (a, b) in rows {
        inner = &inner + &a;
        outer = &outer + &b;
    }
    let value = &inner + &outer;

    let cz = lattice_lower_bound(w.to_f64());
    let cf = cutoff as f64;
    let tail_bound = 8.0 * cz.powf(-sigma) * cf.powf(2.0 - sigma) / (sigma - 2.0);

    let ratio = Float::with_val(prec, cf / half as f64);
    let r = Float::with_val(prec, ratio.pow(sigma - 2.0)) - 1u32;
    let extrapolated = &value + &outer.scale(&Float::with_val(prec, r.recip()));

    Ok(EisensteinNumeric { value, tail_bound, extrapolated, cutoff })
}
