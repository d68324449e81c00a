use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::exactarith::rational::{self, to_float};
use crate::exactarith::{BigComplex, Rational};

/// `a + b sqrt(radicand)` with a non-square integer radicand (or `b = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
    pub radicand: BigInt,
}

impl QuadSurd {
    pub fn rational(a: Rational) -> Self {
        Self { a, b: Rational::zero(), radicand: BigInt::zero() }
    }

    /// `a + b sqrt(r)`, pulling square factors of `r` that are visible by
    /// an integer square root (perfect squares and zero become rational).
    pub fn new(a: Rational, b: Rational, radicand: BigInt) -> Self {
        if b.is_zero() || radicand.is_zero() {
            return Self::rational(a);
        }
        if !radicand.is_negative() {
            let s = radicand.sqrt();
            if &s * &s == radicand {
                return Self::rational(a + b * Rational::from(s));
            }
        }
        Self { a, b, radicand }
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self { b: -self.b.clone(), ..self.clone() }
    }

    fn common(&self, o: &Self) -> Result<BigInt> {
        match (self.is_rational(), o.is_rational()) {
            (true, true) => Ok(BigInt::zero()),
            (true, false) => Ok(o.radicand.clone()),
            (false, true) => Ok(self.radicand.clone()),
            (false, false) if self.radicand == o.radicand => Ok(self.radicand.clone()),
            _ => Err(Error::Precondition("surds with different radicands".into())),
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        let r = self.common(o)?;
        Ok(Self::new(&self.a + &o.a, &self.b + &o.b, r))
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        let r = self.common(o)?;
        let rr = Rational::from(r.clone());
        Ok(Self::new(&self.a * &o.a + &self.b * &o.b * rr, &self.a * &o.b + &self.b * &o.a, r))
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        let a = to_float(&self.a, prec);
        if self.is_rational() {
            return BigComplex::from_real(a);
        }
        let root = Float::with_val(prec, crate::exactarith::rational::to_integer(&self.radicand.abs())).sqrt();
        let br = Float::with_val(prec, to_float(&self.b, prec) * root);
        if self.radicand.is_negative() {
            BigComplex::new(a, br)
        } else {
            BigComplex::from_real(Float::with_val(prec, a + br))
        }
    }
}

impl std::fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_rational() {
            write!(f, "{}", rational::to_string(&self.a))
        } else {
            write!(f, "{} + {}*sqrt({})", rational::to_string(&self.a), rational::to_string(&self.b), self.radicand)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SatakeParam {
    Exact(QuadSurd),
    Numeric(BigComplex),
}

impl SatakeParam {
    pub fn to_complex(&self, prec: u32) -> BigComplex {
        match self {
            SatakeParam::Exact(x) => x.to_complex(prec),
            SatakeParam::Numeric(z) => z.with_prec(prec),
        }
    }
}

/// How the place sits in the CM field: a split place carries `GL_n` data
/// with `q_v = p`, an inert one has `q_v = p^2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PlaceKind {
    Rational,
    Split,
    Inert,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatakeData {
    pub p: u64,
    pub kind: PlaceKind,
    pub params: Vec<SatakeParam>,
}

impl SatakeData {
    pub fn new(p: u64, kind: PlaceKind, params: Vec<SatakeParam>) -> Result<Self> {
        if !crate::exactarith::is_prime(p) {
            return precondition(format!("{p} is not prime"));
        }
        for x in &params {
            let zero = match x {
                SatakeParam::Exact(s) => s.a.is_zero() && s.b.is_zero(),
                SatakeParam::Numeric(z) => z.is_zero(),
            };
            if zero {
                return precondition("Satake parameters must be nonzero");
            }
        }
        Ok(Self { p, kind, params })
    }

    pub fn n(&self) -> usize {
        self.params.len()
    }

    /// Size of the residue field at the place.
    pub fn q_v(&self) -> u64 {
        match self.kind {
            PlaceKind::Inert => self.p * self.p,
            _ => self.p,
        }
    }
}

/// Roots of `X^2 - a_p X + p^(k-1)`, exact in `Q(sqrt(a_p^2 - 4 p^(k-1)))`.
pub fn satake_gl2(a_p: &Rational, p: u64, k: i64) -> Result<SatakeData> {
    if k < 1 {
        return precondition("weight must be positive");
    }
    let pk = Rational::from(Pow::pow(BigInt::from(p), (k - 1) as u32));
    let disc = a_p * a_p - pk * Rational::from(BigInt::from(4));
    // sqrt(N / D) = sqrt(N D) / D.
    let (num, den) = (disc.numer().clone(), disc.denom().clone());
    let radicand = &num * &den;
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    let b = &half / Rational::from(den);
    let a = a_p * &half;
    let alpha = QuadSurd::new(a.clone(), b.clone(), radicand.clone());
    let beta = QuadSurd::new(a, -b, radicand);
    SatakeData::new(p, PlaceKind::Rational, vec![SatakeParam::Exact(alpha), SatakeParam::Exact(beta)])
}

/// `det(1 - sigma X) = sum_k (-1)^k e_k(sigma) X^k`.
#[derive(Debug, Clone, PartialEq)]
pub enum EulerCoeffs {
    Rational(Vec<Rational>),
    Numeric(Vec<BigComplex>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct EulerFactor {
    pub p: u64,
    pub q_v: u64,
    pub coeffs: EulerCoeffs,
}

impl EulerFactor {
    pub fn rational(p: u64, q_v: u64, coeffs: Vec<Rational>) -> Result<Self> {
        if coeffs.first() != Some(&Rational::one()) {
            return precondition("Euler factor must have constant coefficient 1");
        }
        Ok(Self { p, q_v, coeffs: EulerCoeffs::Rational(coeffs) })
    }

    pub fn degree(&self) -> usize {
        match &self.coeffs {
            EulerCoeffs::Rational(c) => c.len() - 1,
            EulerCoeffs::Numeric(c) => c.len() - 1,
        }
    }

    pub fn coeffs_complex(&self, prec: u32) -> Vec<BigComplex> {
        match &self.coeffs {
            EulerCoeffs::Rational(c) => c.iter().map(|x| BigComplex::from_rational(prec, x)).collect(),
            EulerCoeffs::Numeric(c) => c.iter().map(|x| x.with_prec(prec)).collect(),
        }
    }

    /// `P(X)` at `X = q_v^(-s)`.
    pub fn polynomial_at(&self, s: &BigComplex) -> BigComplex {
        let prec = s.prec();
        let x = BigComplex::real_pow(&Float::with_val(prec, self.q_v), &-s.clone());
        self.coeffs_complex(prec).iter().rev().fold(BigComplex::zero(prec), |acc, c| &(&acc * &x) + c)
    }

    /// `L_v(s) = 1 / P(q_v^(-s))`.
    pub fn local_l(&self, s: &BigComplex) -> Result<BigComplex> {
        let v = self.polynomial_at(s);
        if v.is_zero() {
            return Err(Error::Numerical(format!("Euler factor at {} has a pole", self.p)));
        }
        Ok(v.recip())
    }
}

/// Elementary symmetric polynomials, exactly when all parameters are
/// surds over one radicand and every `e_k` comes out rational.
pub fn euler_factor(data: &SatakeData) -> Result<EulerFactor> {
    let exact: Option<Vec<&QuadSurd>> = data
        .params
        .iter()
        .map(|x| match x {
            SatakeParam::Exact(s) => Some(s),
            SatakeParam::Numeric(_) => None,
        })
        .collect();
    if let Some(ex) = exact {
        if let Ok(e) = elementary_exact(&ex) {
            if e.iter().all(QuadSurd::is_rational) {
                let coeffs = e
                    .into_iter()
                    .enumerate()
                    .map(|(k, s)| if k % 2 == 0 { s.a } else { -s.a })
                    .collect();
                return EulerFactor::rational(data.p, data.q_v(), coeffs);
            }
        }
    }
    let prec = data
        .params
        .iter()
        .filter_map(|x| match x {
            SatakeParam::Numeric(z) => Some(z.prec()),
            _ => None,
        })
        .min()
        .unwrap_or(crate::exactarith::DEFAULT_PRECISION);
    let mut e = vec![BigComplex::one(prec)];
    for x in &data.params {
        let v = x.to_complex(prec);
        let mut next = e.clone();
        next.push(BigComplex::zero(prec));
        for k in 1..next.len() {
            next[k] = &e.get(k).cloned().unwrap_or_else(|| BigComplex::zero(prec)) + &(&e[k - 1] * &v);
        }
        e = next;
    }
    let coeffs = e.into_iter().enumerate().map(|(k, c)| if k % 2 == 0 { c } else { -c }).collect();
    Ok(EulerFactor { p: data.p, q_v: data.q_v(), coeffs: EulerCoeffs::Numeric(coeffs) })
}

fn elementary_exact(xs: &[&QuadSurd]) -> Result<Vec<QuadSurd>> {
    let mut e = vec![QuadSurd::rational(Rational::one())];
    for x in xs {
        let mut next = e.clone();
        next.push(QuadSurd::rational(Rational::zero()));
        for k in 1..next.len() {
            let prev = e.get(k).cloned().unwrap_or_else(|| QuadSurd::rational(Rational::zero()));
            next[k] = prev.add(&e[k - 1].mul(x)?)?;
        }
        e = next;
    }
    Ok(e)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ParamJson {
    Exact { a: String, b: String, radicand: String },
    Numeric { re: String, im: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SatakeJson {
    pub schema: u32,
    pub p: u64,
    pub kind: PlaceKind,
    pub params: Vec<ParamJson>,
}

impl SatakeData {
    pub fn to_json(&self) -> SatakeJson {
        let params = self
            .params
            .iter()
            .map(|x| match x {
                SatakeParam::Exact(s) => ParamJson::Exact {
                    a: rational::to_string(&s.a),
                    b: rational::to_string(&s.b),
                    radicand: s.radicand.to_string(),
                },
                SatakeParam::Numeric(z) => ParamJson::Numeric {
                    re: z.re.to_string_radix(10, None),
                    im: z.im.to_string_radix(10, None),
                },
            })
            .collect();
        SatakeJson { schema: 1, p: self.p, kind: self.kind, params }
    }

    pub fn from_json(j: &SatakeJson, prec: u32) -> Result<Self> {
        if j.schema != 1 {
            return Err(Error::Parse(format!("unsupported schema {}", j.schema)));
        }
        let params = j
            .params
            .iter()
            .map(|x| {
                Ok(match x {
                    ParamJson::Exact { a, b, radicand } => SatakeParam::Exact(QuadSurd::new(
                        rational::parse(a)?,
                        rational::parse(b)?,
                        radicand.parse().map_err(|_| Error::Parse(format!("radicand {radicand}")))?,
                    )),
                    ParamJson::Numeric { re, im } => {
                        let f = |s: &str| {
                            Float::parse(s)
                                .map(|v| Float::with_val(prec, v))
                                .map_err(|e| Error::Parse(format!("{s}: {e}")))
                        };
                        SatakeParam::Numeric(BigComplex::new(f(re)?, f(im)?))
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(j.p, j.kind, params)
    }
}
