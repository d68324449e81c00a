//! Maass-Shimura operators on nearly holomorphic q-expansions
//! `sum_j (sum_n a_{n,j} q^n) Y^j` with `Y = 1 / (4 pi y)`.
//!
//! With `delta_lambda = (1 / 2 pi i)(lambda / 2iy + d/dz)` one has
//! `d/dz q^n = 2 pi i n q^n` and `d/dz Y^j = -4 pi j Y^(j+1) / 2i`, so
//! `delta_lambda(q^n Y^j) = n q^n Y^j + (j - lambda) q^n Y^(j+1)`.

use num_bigint::BigInt;
use num_traits::Zero;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::eisenstein::{e2k_coefficients, eisenstein_numeric, EisensteinSpec};
use crate::error::{precondition, Error, Result};
use crate::exactarith::arith::factorial;
use crate::exactarith::complex::q_of;
use crate::exactarith::{zeta_even, BigComplex, Rational};
use crate::symdomain::DomainPoint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearlyHolomorphic {
    weight: i64,
    /// `table[j][n] = a_{n,j}`; every row has the same length.
    table: Vec<Vec<Rational>>,
}

impl NearlyHolomorphic {
    pub fn new(weight: i64, table: Vec<Vec<Rational>>) -> Result<Self> {
        if table.is_empty() || table.iter().any(|r| r.len() != table[0].len()) || table[0].is_empty() {
            return precondition("table must be a nonempty rectangle");
        }
        Ok(Self { weight, table })
    }

    pub fn holomorphic(weight: i64, coeffs: &[Rational]) -> Result<Self> {
        Self::new(weight, vec![coeffs.to_vec()])
    }

    pub fn weight(&self) -> i64 {
        self.weight
    }

    pub fn depth(&self) -> usize {
        self.table.len() - 1
    }

    /// Largest `n` carried.
    pub fn bound(&self) -> usize {
        self.table[0].len() - 1
    }

    pub fn coeff(&self, n: usize, j: usize) -> Rational {
        self.table.get(j).and_then(|r| r.get(n)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.table
    }

    /// The `Y^0` slice.
    pub fn holomorphic_part(&self) -> &[Rational] {
        &self.table[0]
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        if self.weight != o.weight {
            return Err(Error::Precondition(format!("weights {} and {} differ", self.weight, o.weight)));
        }
        let depth = self.depth().max(o.depth());
        let bound = self.bound().min(o.bound());
        let table = (0..=depth)
            .map(|j| (0..=bound).map(|n| self.coeff(n, j) + o.coeff(n, j)).collect())
            .collect();
        Self::new(self.weight, table)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let table = self.table.iter().map(|r| r.iter().map(|x| x * c).collect()).collect();
        Self { weight: self.weight, table }
    }

    /// Product with a holomorphic q-expansion of weight `k`, truncated at
    /// the smaller bound.
    pub fn mul_holomorphic(&self, g: &[Rational], k: i64) -> Result<Self> {
        if g.is_empty() {
            return precondition("empty q-expansion");
        }
        let bound = self.bound().min(g.len() - 1);
        let table = self
            .table
            .iter()
            .map(|row| {
                (0..=bound)
                    .map(|n| (0..=n).fold(Rational::zero(), |acc, i| acc + &row[i] * &g[n - i]))
                    .collect()
            })
            .collect();
        Self::new(self.weight + k, table)
    }

    /// `sum_j Y^j sum_n a_{n,j} q^n` at `z`.
    pub fn evaluate(&self, z: &BigComplex) -> Result<BigComplex> {
        Ok(self.evaluate_slices(z)?.0)
    }

    /// `sum_j Y^j |sum_n a_{n,j} q^n|`: the size of the value before the
    /// depth slices cancel against each other.
    pub fn magnitude(&self, z: &BigComplex) -> Result<Float> {
        Ok(self.evaluate_slices(z)?.1)
    }

    fn evaluate_slices(&self, z: &BigComplex) -> Result<(BigComplex, Float)> {
        let prec = z.prec();
        if !z.im.is_sign_positive() || z.im.is_zero() {
            return precondition("z must lie in the upper half plane");
        }
        let q = q_of(z);
        let y4pi = Float::with_val(prec, &z.im * BigComplex::pi(prec)) * 4u32;
        let inv = Float::with_val(prec, y4pi.recip());
        let mut acc = BigComplex::zero(prec);
        let mut mag = Float::with_val(prec, 0);
        for row in self.table.iter().rev() {
            let slice = row
                .iter()
                .rev()
                .fold(BigComplex::zero(prec), |a, c| &(&a * &q) + &BigComplex::from_rational(prec, c));
            mag = Float::with_val(prec, &mag * &inv) + slice.abs();
            acc = &acc.scale(&inv) + &slice;
        }
        Ok((acc, mag))
    }
}

/// `delta_lambda f`, of weight `lambda + 2` and depth one more than `f`.
pub fn delta(lambda: i64, f: &NearlyHolomorphic) -> Result<NearlyHolomorphic> {
    if f.weight != lambda {
        return Err(Error::Precondition(format!("delta_{lambda} applied to weight {}", f.weight)));
    }
    let bound = f.bound();
    let mut table = vec![vec![Rational::zero(); bound + 1]; f.depth() + 2];
    for (j, row) in f.table.iter().enumerate() {
        let shift = Rational::from(BigInt::from(j as i64 - lambda));
        for (n, a) in row.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            table[j][n] += a * Rational::from(BigInt::from(n));
            table[j + 1][n] += a * &shift;
        }
    }
    NearlyHolomorphic::new(lambda + 2, table)
}

/// `delta^(r) = delta_{lambda + 2r - 2} o ... o delta_lambda`.
pub fn delta_iter(lambda: i64, r: usize, f: &NearlyHolomorphic) -> Result<NearlyHolomorphic> {
    let mut g = f.clone();
    if g.weight != lambda {
        return Err(Error::Precondition(format!("delta_{lambda} applied to weight {}", g.weight)));
    }
    for i in 0..r {
        g = delta(lambda + 2 * i as i64, &g)?;
    }
    Ok(g)
}

/// `Gamma(lambda) / Gamma(lambda + r) = (lambda - 1)! / (lambda + r - 1)!`.
pub fn gamma_ratio(lambda: u64, r: u64) -> Rational {
    Rational::new(factorial(lambda - 1), factorial(lambda + r - 1))
}

#[derive(Debug, Clone, Serialize)]
pub struct EstarReport {
    pub lambda: i64,
    pub r: usize,
    pub z: [String; 2],
    pub lhs: [String; 2],
    pub rhs: [String; 2],
    /// `|lhs - rhs| / max(|lhs|, |rhs|, scale)`.
    pub relative_error: f64,
    /// Size of the right side before its depth slices cancel. At points
    /// where the form vanishes (e.g. weight 2 mod 4 at `z = i`) this keeps
    /// the error measure meaningful.
    pub scale: f64,
    /// Rigorous bound on the omitted lattice-sum terms of the left side,
    /// relative to the same denominator.
    pub lhs_tail_bound: f64,
    pub cutoff: u64,
    pub q_terms: usize,
}

fn pair(z: &BigComplex) -> [String; 2] {
    [z.re.to_string_radix(10, Some(30)), z.im.to_string_radix(10, Some(30))]
}

/// Compares `E*_{lambda+2r}(z, -r)` (a direct lattice sum, normalized by
/// `2 zeta(lambda)`, Richardson-extrapolated in the cutoff) with
/// `Gamma(lambda) / Gamma(lambda + r) (-4 pi y)^r delta^(r) E*_lambda(z)`
/// (exact q-expansion tables, evaluated at `z`).
pub fn verify_estar_relation(lambda: i64, r: usize, z: &BigComplex, prec: u32, cutoff: u64) -> Result<EstarReport> {
    if lambda < 4 || lambda % 2 != 0 {
        return precondition("need lambda >= 4 even (level 1, trivial character)");
    }
    if prec < 64 {
        return precondition("precision must be at least 64 bits");
    }
    let z = z.with_prec(prec);
    let point = DomainPoint::upper_half_plane(z.clone());
    // Re(2(-r)) > 2 - (lambda + 2r) reduces to lambda > 2.
    let spec = EisensteinSpec {
        s: BigComplex::from_f64(prec, -(r as f64), 0.0),
        ..EisensteinSpec::level_one(lambda + 2 * r as i64, prec)
    };
    let sum = eisenstein_numeric(&spec, &point, cutoff)?;
    let two_zeta = Float::with_val(prec, zeta_even((lambda / 2) as u32)?.to_float(prec) * 2u32);
    let lhs = sum.extrapolated.scale(&Float::with_val(prec, two_zeta.clone().recip()));

    // Enough q-terms that |q|^N is below the working precision.
    let y = z.im.to_f64();
    let q_terms = ((prec as f64 * std::f64::consts::LN_2) / (2.0 * std::f64::consts::PI * y)).ceil() as usize + 8;
    let estar = NearlyHolomorphic::holomorphic(lambda, &e2k_coefficients((lambda / 2) as u32, q_terms)?)?;
    let raised_form = delta_iter(lambda, r, &estar)?;
    let raised = raised_form.evaluate(&z)?;
    let factor = Float::with_val(prec, -(Float::with_val(prec, &z.im * BigComplex::pi(prec)) * 4u32));
    let factor = Float::with_val(prec, factor.pow(r as i32))
        * crate::exactarith::rational::to_float(&gamma_ratio(lambda as u64, r as u64), prec);
    let rhs = raised.scale(&factor);

    let scale = (raised_form.magnitude(&z)? * factor.abs()).to_f64();
    let denom = lhs.abs().to_f64().max(rhs.abs().to_f64()).max(scale);
    let relative_error = (&lhs - &rhs).abs().to_f64() / denom;
    let lhs_tail_bound = sum.tail_bound / (two_zeta.to_f64() * denom);
    Ok(EstarReport {
        lambda,
        r,
        z: pair(&z),
        lhs: pair(&lhs),
        rhs: pair(&rhs),
        relative_error,
        scale,
        lhs_tail_bound,
        cutoff,
        q_terms,
    })
}

#[cfg(test)]
mod tests;
