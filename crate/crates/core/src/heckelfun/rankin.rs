//! Rankin-Selberg sums, Petersson products over the standard fundamental
//! domain, and the algebraicity ratio.
//!
//! Petersson convention: `<f1, f2> = int_F f1 conj(f2) y^k dx dy / y^2`,
//! not divided by `vol(F) = pi / 3`. The `volume_normalized` fields divide
//! by it.

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use super::quadrature::gauss_legendre;
use super::QExp1;
use crate::eisenstein::e2k_coefficients;
use crate::error::{precondition, Error, Result};
use crate::exactarith::arith::factorial;
use crate::exactarith::rational::{reconstruct, to_float, to_string};
use crate::exactarith::{BigComplex, Rational};
use crate::maass::{delta_iter, NearlyHolomorphic};
use crate::qexp::RECONSTRUCTION_HEIGHT;

/// Caller-supplied growth bound `|a_n b_n| <= constant * n^exponent`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Growth {
    pub constant: f64,
    pub exponent: f64,
}

impl Growth {
    pub fn new(constant: f64, exponent: f64) -> Self {
        Self { constant, exponent }
    }

    /// For a cusp form of weight `k` times `c * sigma_{l-1}` with `l >= 4`:
    /// `|a_n| <= d(n) n^((k-1)/2) <= 2 n^(k/2)` and
    /// `sigma_{l-1}(n) <= zeta(l-1) n^(l-1)`.
    pub fn cusp_times_eisenstein(k: i64, l: i64, c: f64) -> Self {
        Self::for_shapes(&FormShape::CuspEigen { weight: k }, &FormShape::Eisenstein { weight: l, scale: c })
    }

    /// Product of the coefficient bounds of two forms.
    pub fn for_shapes(f: &FormShape, g: &FormShape) -> Self {
        let (cf, ef) = f.bound();
        let (cg, eg) = g.bound();
        Self { constant: cf * cg, exponent: ef + eg }
    }

    /// Sup of `|a_n b_n| / n^exponent` over the stored coefficients. Only an
    /// estimate of the true constant.
    pub fn empirical(f: &QExp1, g: &QExp1, exponent: f64) -> Self {
        let b = f.bound().min(g.bound());
        let constant = (1..=b)
            .map(|n| {
                let p = crate::exactarith::rational::to_f64(&(f.coeff(n) * g.coeff(n))).abs();
                p / (n as f64).powf(exponent)
            })
            .fold(0.0, f64::max);
        Self { constant, exponent }
    }

    /// Bound on `sum_{n > cutoff} |a_n b_n| n^(-sigma)`.
    pub fn tail(&self, sigma: f64, cutoff: usize) -> Result<f64> {
        let e = self.exponent;
        if sigma <= e + 1.0 {
            return Err(Error::Convergence(format!("tail bound needs Re(s) > {}, got {sigma}", e + 1.0)));
        }
        Ok(self.constant * (cutoff as f64).powf(e + 1.0 - sigma) / (sigma - e - 1.0))
    }
}

/// What is known about a form's coefficients for growth bounds.
#[derive(Debug, Clone, Copy, Serialize)]
pub enum FormShape {
    /// Cusp form of weight `k` normalized with `|a_1| <= 1`, a Hecke
    /// eigenform: `|a_n| <= d(n) n^((k-1)/2) <= 2 n^(k/2)`.
    CuspEigen { weight: i64 },
    /// `c sigma_{k-1}(n)` for `n >= 1`, `k >= 4`:
    /// `sigma_{k-1}(n) <= zeta(k-1) n^(k-1)`.
    Eisenstein { weight: i64, scale: f64 },
}

impl FormShape {
    /// `(C, e)` with `|a_n| <= C n^e`.
    pub fn bound(&self) -> (f64, f64) {
        match *self {
            FormShape::CuspEigen { weight } => (2.0, weight as f64 / 2.0),
            FormShape::Eisenstein { weight, scale } => {
                let zeta: f64 = (1..200_000u32).map(|n| (n as f64).powi(-(weight as i32 - 1))).sum::<f64>() + 1e-9;
                (scale.abs() * zeta, (weight - 1) as f64)
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct RankinSum {
    pub value: BigComplex,
    pub tail_bound: Option<f64>,
    pub cutoff: usize,
}

/// `D(s, f, g) = sum_{n <= cutoff} a_n b_n n^(-s)`.
pub fn rankin_selberg_d(f: &QExp1, g: &QExp1, s: &BigComplex, cutoff: usize, growth: Option<&Growth>) -> Result<RankinSum> {
    if cutoff == 0 {
        return precondition("cutoff must be positive");
    }
    let have = f.bound().min(g.bound());
    if cutoff > have {
        return Err(Error::Insufficient(format!("cutoff {cutoff} exceeds the {have} stored coefficients")));
    }
    let tail_bound = growth.map(|gr| gr.tail(s.re.to_f64(), cutoff)).transpose()?;
    let prec = s.prec();
    let int_s = (s.im.is_zero() && s.re.is_integer()).then(|| s.re.to_f64() as i32);
    let neg_s = -s.clone();
    let terms: Vec<BigComplex> = (1..=cutoff)
        .into_par_iter()
        .map(|n| {
            let c = f.coeff(n) * g.coeff(n);
            if c.is_zero() {
                return BigComplex::zero(prec);
            }
            let c = to_float(&c, prec);
            let nf = Float::with_val(prec, n);
            match int_s {
                Some(e) => BigComplex::from_real(c * Float::with_val(prec, nf.pow(-e))),
                None => BigComplex::real_pow(&nf, &neg_s).scale(&c),
            }
        })
        .collect();
    let value = terms.into_iter().fold(BigComplex::zero(prec), |a, t| a + t);
    Ok(RankinSum { value, tail_bound, cutoff })
}

#[derive(Debug, Clone)]
pub struct Petersson {
    pub value: BigComplex,
    /// `|I_n - I_2n|` for the quadrature below `y = 1`.
    pub error_estimate: f64,
    pub nodes: usize,
}

impl Petersson {
    /// Divided by `vol(F) = pi / 3`.
    pub fn volume_normalized(&self) -> BigComplex {
        let prec = self.value.prec();
        self.value.scale(&Float::with_val(prec, Float::with_val(prec, 3) / BigComplex::pi(prec)))
    }
}

/// q-expansion terms used by the Petersson product at `prec` bits:
/// `|q| <= e^(-pi sqrt 3)` on the fundamental domain.
pub fn petersson_terms(prec: u32) -> usize {
    (prec as f64 * std::f64::consts::LN_2 / (std::f64::consts::PI * 3f64.sqrt())).ceil() as usize + 12
}

pub fn petersson(f1: &QExp1, f2: &QExp1, nodes: usize, prec: u32) -> Result<Petersson> {
    if f1.weight != f2.weight {
        return Err(Error::Precondition(format!("weights {} and {} differ", f1.weight, f2.weight)));
    }
    petersson_nearly(f1, &NearlyHolomorphic::holomorphic(f2.weight, &f2.coeffs)?, nodes, prec)
}

/// `<f1, f2>` with `f2` nearly holomorphic. The strip `y >= 1` is integrated
/// exactly in `x` (orthogonality of `e^(2 pi i n x)`) and in `y` (incomplete
/// gamma at integer order); the region below `y = 1` by tensor
/// Gauss-Legendre with `nodes` and `2 nodes` points per direction.
pub fn petersson_nearly(f1: &QExp1, f2: &NearlyHolomorphic, nodes: usize, prec: u32) -> Result<Petersson> {
    let k = f1.weight;
    if f2.weight() != k {
        return Err(Error::Precondition(format!("weights {k} and {} differ", f2.weight())));
    }
    if f1.level != 1 {
        return precondition("Petersson products are computed at level 1");
    }
    let f2_cusp = f2.table().iter().all(|row| row[0].is_zero());
    if !f1.is_cusp() && !f2_cusp {
        return Err(Error::Convergence("both forms have a constant term; the integral diverges".into()));
    }
    if f2.depth() as i64 > k - 2 {
        return precondition("depth must be at most k - 2");
    }
    if nodes < 2 {
        return precondition("need at least 2 quadrature nodes");
    }
    let terms = petersson_terms(prec);
    let have = f1.bound().min(f2.bound());
    if have < terms {
        return Err(Error::Insufficient(format!("need {terms} coefficients at {prec} bits, have {have}")));
    }
    let work = prec + 32;
    let f1t = f1.truncate(terms)?;
    let f2t = NearlyHolomorphic::new(k, f2.table().iter().map(|r| r[..=terms].to_vec()).collect())?;

    let upper = upper_strip(&f1t, &f2t, work);
    let coarse = lower_region(&f1t, &f2t, nodes, work)?;
    let fine = lower_region(&f1t, &f2t, 2 * nodes, work)?;
    let error_estimate = (&coarse - &fine).abs().to_f64();
    Ok(Petersson { value: (upper + fine).with_prec(prec), error_estimate, nodes })
}

fn upper_strip(f1: &QExp1, f2: &NearlyHolomorphic, prec: u32) -> BigComplex {
    let k = f1.weight;
    let four_pi = BigComplex::pi(prec) * 4u32;
    let mut total = Float::with_val(prec, 0);
    for (j, row) in f2.table().iter().enumerate() {
        let a = (k - 1 - j as i64) as u32;
        let fact = Float::with_val(prec, crate::exactarith::rational::to_integer(&factorial(a as u64 - 1)));
        let mut slice = Float::with_val(prec, 0);
        for n in 1..=f1.bound() {
            let c = f1.coeff(n) * &row[n];
            if c.is_zero() {
                continue;
            }
            // int_1^inf y^(a-1) e^(-x y) dy = (a-1)! e^(-x) sum_{i<a} x^i / i! / x^a
            let x = Float::with_val(prec, &four_pi * n as u32);
            let mut term = Float::with_val(prec, 1);
            let mut poly = Float::with_val(prec, 0);
            for i in 0..a {
                poly += &term;
                term = term * &x / (i + 1);
            }
            let xa = Float::with_val(prec, (&x).pow(a));
            let gamma = Float::with_val(prec, -&x).exp() * poly * &fact / xa;
            slice += to_float(&c, prec) * gamma;
        }
        total += slice / Float::with_val(prec, (&four_pi).pow(j as u32));
    }
    BigComplex::from_real(total)
}

/// `x in [-1/2, 1/2]`, `y in [sqrt(1 - x^2), 1]`.
fn lower_region(f1: &QExp1, f2: &NearlyHolomorphic, nodes: usize, prec: u32) -> Result<BigComplex> {
    let gl = gauss_legendre(nodes, prec);
    let k = f1.weight;
    let half = Float::with_val(prec, 0.5);
    let rows: Vec<Result<BigComplex>> = gl
        .par_iter()
        .map(|(xi, wi)| {
            let x = Float::with_val(prec, xi * &half);
            let wx = Float::with_val(prec, wi * &half);
            let lo = (Float::with_val(prec, 1) - Float::with_val(prec, &x * &x)).sqrt();
            let len = Float::with_val(prec, 1) - &lo;
            let hl = Float::with_val(prec, &len * &half);
            let mut acc = BigComplex::zero(prec);
            for (eta, wj) in &gl {
                let y = Float::with_val(prec, &lo + Float::with_val(prec, &hl * Float::with_val(prec, eta + 1u32)));
                let z = BigComplex::new(x.clone(), y.clone());
                let v = &f1.evaluate(&z) * &f2.evaluate(&z)?.conj();
                let w = Float::with_val(prec, wj * &hl) * Float::with_val(prec, (&y).pow(k - 2));
                acc = acc + v.scale(&w);
            }
            Ok(acc.scale(&wx))
        })
        .collect();
    let mut total = BigComplex::zero(prec);
    for r in rows {
        total = total + r?;
    }
    Ok(total)
}

/// A rational guess is reported only when both working precisions return
/// the same fraction of height at most `RECONSTRUCTION_HEIGHT` and the
/// accuracy makes such a fraction unique (`2 tol < 1 / H^2`).
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraicityReport {
    pub k: i64,
    pub l: i64,
    pub m: i64,
    /// `D(m, f, g) / (pi^k <f, f>)`.
    pub ratio: f64,
    /// The same with the Petersson product divided by `pi / 3`.
    pub ratio_volume_normalized: f64,
    pub ratio_decimal: [String; 2],
    /// Relative uncertainty from the series tail and the quadrature.
    pub relative_uncertainty: f64,
    pub precision_agreement: f64,
    pub guess: Option<String>,
    pub guess_volume_normalized: Option<String>,
    pub status: String,
}

pub struct RatioInputs<'a> {
    pub growth: &'a Growth,
    pub cutoff: usize,
    pub nodes: usize,
}

pub const RATIO_PRECISIONS: [u32; 2] = [128, 256];

pub fn algebraicity_ratio(f: &QExp1, g: &QExp1, m: i64, inputs: &RatioInputs) -> Result<AlgebraicityReport> {
    let (k, l) = (f.weight, g.weight);
    if !(2 * m > k + l - 2 && m < k) {
        return precondition(format!("m = {m} outside the window ({}, {k})", (k + l - 2) as f64 / 2.0));
    }
    if !f.is_cusp() {
        return precondition("f must be a cusp form");
    }
    let mut ratios = Vec::new();
    let mut uncertainty: f64 = 0.0;
    for &prec in &RATIO_PRECISIONS {
        let s = BigComplex::from_f64(prec, m as f64, 0.0);
        let d = rankin_selberg_d(f, g, &s, inputs.cutoff, Some(inputs.growth))?;
        let p = petersson(f, f, inputs.nodes, prec)?;
        let pik = Float::with_val(prec, BigComplex::pi(prec).pow(k as u32));
        let ratio = &d.value / &p.value.scale(&pik);
        let dabs = d.value.abs().to_f64();
        uncertainty = uncertainty.max(d.tail_bound.unwrap_or(f64::INFINITY) / dabs + p.error_estimate / p.value.abs().to_f64());
        ratios.push(ratio);
    }
    let vol = |z: &BigComplex| {
        let prec = z.prec();
        z.scale(&Float::with_val(prec, BigComplex::pi(prec) / 3u32))
    };
    let plain: Vec<Float> = ratios.iter().map(|r| r.re.clone()).collect();
    let normalized: Vec<Float> = ratios.iter().map(|r| vol(r).re).collect();
    let precision_agreement = ratios[0].rel_diff(&ratios[1]);
    let guess = stable_guess(&plain, uncertainty);
    let guess_volume_normalized = stable_guess(&normalized, uncertainty);
    let status = if guess.is_some() || guess_volume_normalized.is_some() {
        "recognized".to_string()
    } else {
        "unrecognized".to_string()
    };
    Ok(AlgebraicityReport {
        k,
        l,
        m,
        ratio: plain[1].to_f64(),
        ratio_volume_normalized: normalized[1].to_f64(),
        ratio_decimal: [plain[1].to_string_radix(10, Some(40)), normalized[1].to_string_radix(10, Some(40))],
        relative_uncertainty: uncertainty,
        precision_agreement,
        guess,
        guess_volume_normalized,
        status,
    })
}

fn stable_guess(values: &[Float], relative_uncertainty: f64) -> Option<String> {
    let mut found: Option<Rational> = None;
    for x in values {
        let prec = x.prec();
        let mag = x.to_f64().abs().max(1.0);
        let height = (RECONSTRUCTION_HEIGHT as f64 * mag).min(u64::MAX as f64 / 2.0) as u64;
        let rel = relative_uncertainty.max(2f64.powi(-(prec as i32) / 2));
        let tol = rel * mag;
        if 2.0 * tol * (height as f64).powi(2) >= 1.0 {
            return None;
        }
        let r = reconstruct(x, height, &Float::with_val(prec, tol))?;
        match &found {
            Some(prev) if *prev != r => return None,
            _ => found = Some(r),
        }
    }
    found.map(|r| to_string(&r))
}

#[derive(Debug, Clone, Serialize)]
pub struct UnfoldingMeasurement {
    pub cutoff: usize,
    pub nodes: usize,
    pub d_value: f64,
    pub petersson: f64,
    /// `D(k - 1 - r, f, g) / <f~, g delta^(r) E*_{k-l-2r}>`.
    pub measured: f64,
    pub tail_bound: f64,
    pub quadrature_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnfoldingReport {
    pub k: i64,
    pub l: i64,
    pub r: usize,
    pub measurements: Vec<UnfoldingMeasurement>,
    pub relative_spread: f64,
    /// `(4 pi)^(k-1) / (k-2)!` from unfolding against `E*_{k-l}` (`r = 0`).
    pub unfolding_constant: Option<f64>,
    /// `c pi^k` with `c = Gamma(k-l-2r) / (Gamma(k-1-r) Gamma(k-l-r))
    /// (-1)^r 4^(k-1) N / 3 prod_{p | N}(1 + 1/p)` at `N = 1`.
    pub closed_form_constant: f64,
    pub ratio_to_closed_form: f64,
    pub ratio_to_closed_form_volume_normalized: f64,
}

/// Measures `D(k - 1 - r, f, g) / <f~, g delta^(r) E*_{k-l-2r}>` at each
/// `(cutoff, nodes)` resolution. `f~ = f` since coefficients are rational.
pub fn rankin_unfolding(
    f: &QExp1,
    g: &QExp1,
    r: usize,
    resolutions: &[(usize, usize)],
    growth: &Growth,
    prec: u32,
) -> Result<UnfoldingReport> {
    let (k, l) = (f.weight, g.weight);
    let lambda = k - l - 2 * r as i64;
    if lambda < 4 || lambda % 2 != 0 {
        return precondition(format!("k - l - 2r = {lambda} must be even and at least 4"));
    }
    if resolutions.is_empty() {
        return precondition("need at least one resolution");
    }
    let terms = petersson_terms(prec);
    let g_short = g.truncate(terms)?;
    let e = NearlyHolomorphic::holomorphic(lambda, &e2k_coefficients((lambda / 2) as u32, terms)?)?;
    let raised = delta_iter(lambda, r, &e)?;
    let partner = raised.mul_holomorphic(&g_short.coeffs, l)?;
    let s = BigComplex::from_f64(prec, (k - 1 - r as i64) as f64, 0.0);
    let mut measurements = Vec::new();
    for &(cutoff, nodes) in resolutions {
        let d = rankin_selberg_d(f, g, &s, cutoff, Some(growth))?;
        let p = petersson_nearly(f, &partner, nodes, prec)?;
        let measured = (&d.value / &p.value).re.to_f64();
        measurements.push(UnfoldingMeasurement {
            cutoff,
            nodes,
            d_value: d.value.re.to_f64(),
            petersson: p.value.re.to_f64(),
            measured,
            tail_bound: d.tail_bound.unwrap_or(f64::INFINITY),
            quadrature_error: p.error_estimate,
        });
    }
    let vals: Vec<f64> = measurements.iter().map(|m| m.measured).collect();
    let max = vals.iter().cloned().fold(f64::MIN, f64::max);
    let min = vals.iter().cloned().fold(f64::MAX, f64::min);
    let relative_spread = (max - min) / max.abs().max(min.abs());

    let unfolding_constant = (r == 0).then(|| {
        let four_pi = 4.0 * std::f64::consts::PI;
        four_pi.powi((k - 1) as i32) / crate::exactarith::rational::to_f64(&Rational::from(factorial((k - 2) as u64)))
    });
    let gamma = |n: i64| Rational::from(factorial((n - 1) as u64));
    let c = gamma(k - l - 2 * r as i64) / (gamma(k - 1 - r as i64) * gamma(k - l - r as i64))
        * Rational::from(BigInt::from(4).pow((k - 1) as u32))
        / Rational::from(BigInt::from(3));
    let sign = if r % 2 == 0 { 1.0 } else { -1.0 };
    let closed = sign * crate::exactarith::rational::to_f64(&c) * std::f64::consts::PI.powi(k as i32);
    let last = *vals.last().expect("nonempty");
    Ok(UnfoldingReport {
        k,
        l,
        r,
        measurements,
        relative_spread,
        unfolding_constant,
        closed_form_constant: closed,
        ratio_to_closed_form: last / closed,
        ratio_to_closed_form_volume_normalized: last * std::f64::consts::PI / 3.0 / closed,
    })
}
