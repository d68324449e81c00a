//! Fourier expansions `f(z) = sum_h c(h) e(trace(h z))` indexed by PSD
//! points of a dual lattice, truncated by trace.

mod lattice;

pub use lattice::{
    coordinate_box_bound, dual_lattice, enumerate_psd, herm_coords, trace_pairing, HermIndex,
    HermLattice,
};

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactarith::rational::{self, lcm_denominators, reconstruct};
use crate::exactarith::{BigComplex, FieldElem, KMatrix, QuadField, Rational};

/// A Fourier coefficient. Arithmetic promotes along
/// `Rational -> Field -> Numeric`.
#[derive(Debug, Clone, PartialEq)]
pub enum Coeff {
    Rational(Rational),
    Field(FieldElem),
    Numeric(BigComplex),
}

impl Coeff {
    pub fn is_zero(&self) -> bool {
        match self {
            Coeff::Rational(x) => x.is_zero(),
            Coeff::Field(x) => x.is_zero(),
            Coeff::Numeric(x) => x.is_zero(),
        }
    }

    pub fn to_complex(&self, prec: u32) -> BigComplex {
        match self {
            Coeff::Rational(x) => BigComplex::from_rational(prec, x),
            Coeff::Field(x) => x.to_complex(prec),
            Coeff::Numeric(x) => x.clone(),
        }
    }

    fn numeric_prec(&self) -> Option<u32> {
        match self {
            Coeff::Numeric(x) => Some(x.prec()),
            _ => None,
        }
    }

    fn combine(
        &self,
        o: &Coeff,
        fr: impl Fn(&Rational, &Rational) -> Rational,
        ff: impl Fn(&FieldElem, &FieldElem) -> FieldElem,
        fc: impl Fn(&BigComplex, &BigComplex) -> BigComplex,
    ) -> Coeff {
        use Coeff::*;
        match (self, o) {
            (Rational(a), Rational(b)) => Rational(fr(a, b)),
            (Field(a), Field(b)) => Field(ff(a, b)),
            (Field(a), Rational(b)) => Field(ff(a, &a.field().from_rational(b.clone()))),
            (Rational(a), Field(b)) => Field(ff(&b.field().from_rational(a.clone()), b)),
            _ => {
                let prec = self.numeric_prec().into_iter().chain(o.numeric_prec()).min().unwrap();
                Numeric(fc(&self.to_complex(prec), &o.to_complex(prec)))
            }
        }
    }

    pub fn add(&self, o: &Coeff) -> Coeff {
        self.combine(o, |a, b| a + b, |a, b| a + b, |a, b| a + b)
    }

    pub fn mul(&self, o: &Coeff) -> Coeff {
        self.combine(o, |a, b| a * b, |a, b| a * b, |a, b| a * b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportMode {
    Holomorphic,
    Cusp,
}

/// Position in the fixed chain `Z ⊂ Z[1/N] ⊂ Q ⊂ Q(sqrt(-d))`, or numeric.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoefficientRing {
    Integers,
    Localized(BigInt),
    Rationals,
    QuadraticField(u64),
    Numeric,
}

impl std::fmt::Display for CoefficientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CoefficientRing::Integers => write!(f, "Z"),
            CoefficientRing::Localized(n) => write!(f, "Z[1/{n}]"),
            CoefficientRing::Rationals => write!(f, "Q"),
            CoefficientRing::QuadraticField(d) => write!(f, "Q(sqrt(-{d}))"),
            CoefficientRing::Numeric => write!(f, "numeric"),
        }
    }
}

/// Largest `N` reported as `Z[1/N]`; beyond this the ring is reported as `Q`.
pub const LOCALIZATION_CAP: u64 = 1_000_000_000_000;
/// Height bound for rational reconstruction of numeric coefficients.
pub const RECONSTRUCTION_HEIGHT: u64 = 1_000_000;

#[derive(Debug, Clone)]
pub struct FourierExpansion {
    lattice: HermLattice,
    trace_bound: Rational,
    coeffs: BTreeMap<HermIndex, Coeff>,
}

impl FourierExpansion {
    pub fn zero(lattice: HermLattice, trace_bound: Rational) -> Result<Self> {
        if trace_bound.is_negative() {
            return Err(Error::Precondition("trace bound must be nonnegative".into()));
        }
        Ok(Self { lattice, trace_bound, coeffs: BTreeMap::new() })
    }

    /// The constant expansion `c`.
    pub fn constant(lattice: HermLattice, trace_bound: Rational, c: Coeff) -> Result<Self> {
        let n = lattice.n();
        let field = lattice.field();
        let mut f = Self::zero(lattice, trace_bound)?;
        f.insert(KMatrix::zeros(field, n, n), c)?;
        Ok(f)
    }

    /// Sets `c(h)`, checking that `h` is a PSD lattice point within the bound.
    /// Zero coefficients are not stored.
    pub fn insert(&mut self, h: KMatrix, c: Coeff) -> Result<()> {
        let idx = HermIndex::new(h);
        if !idx.matrix().is_hermitian() || idx.matrix().rows() != self.lattice.n() {
            return Err(Error::Precondition("index must be an n x n Hermitian matrix".into()));
        }
        if !self.lattice.contains(idx.matrix()) {
            return Err(Error::Precondition(format!("index {idx:?} is not in the lattice")));
        }
        if !idx.is_psd() {
            return Err(Error::Precondition(format!("index {idx:?} is not PSD")));
        }
        if idx.trace() > &self.trace_bound {
            return Err(Error::Precondition(format!("index {idx:?} exceeds the trace bound")));
        }
        if c.is_zero() {
            self.coeffs.remove(&idx);
        } else {
            self.coeffs.insert(idx, c);
        }
        Ok(())
    }

    pub fn lattice(&self) -> &HermLattice {
        &self.lattice
    }

    pub fn trace_bound(&self) -> &Rational {
        &self.trace_bound
    }

    pub fn coeff(&self, h: &KMatrix) -> Option<&Coeff> {
        self.coeffs.get(&HermIndex::new(h.clone()))
    }

    /// Nonzero coefficients in canonical index order.
    pub fn iter(&self) -> impl Iterator<Item = (&HermIndex, &Coeff)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Drops all terms of trace above `bound` (which must not exceed the
    /// current bound).
    pub fn truncate(&self, bound: &Rational) -> Result<Self> {
        if bound > &self.trace_bound || bound.is_negative() {
            return Err(Error::Precondition("can only truncate to a smaller bound".into()));
        }
        let coeffs = self.coeffs.iter().filter(|(h, _)| h.trace() <= bound).map(|(h, c)| (h.clone(), c.clone())).collect();
        Ok(Self { lattice: self.lattice.clone(), trace_bound: bound.clone(), coeffs })
    }

    fn check_compatible(&self, o: &Self) -> Result<()> {
        if self.lattice == o.lattice || self.lattice.same_lattice(&o.lattice) {
            Ok(())
        } else {
            Err(Error::LatticeMismatch)
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let bound = self.trace_bound.clone().min(o.trace_bound.clone());
        let mut coeffs = BTreeMap::new();
        for (h, c) in self.coeffs.iter().chain(o.coeffs.iter()) {
            if h.trace() > &bound {
                continue;
            }
            let e = coeffs.entry(h.clone()).or_insert(Coeff::Rational(Rational::zero()));
            *e = e.add(c);
        }
        coeffs.retain(|_, c: &mut Coeff| !c.is_zero());
        Ok(Self { lattice: self.lattice.clone(), trace_bound: bound, coeffs })
    }

    pub fn scale(&self, s: &Coeff) -> Self {
        let mut coeffs: BTreeMap<HermIndex, Coeff> =
            self.coeffs.iter().map(|(h, c)| (h.clone(), c.mul(s))).collect();
        coeffs.retain(|_, c| !c.is_zero());
        Self { lattice: self.lattice.clone(), trace_bound: self.trace_bound.clone(), coeffs }
    }

    /// Convolution `q^h q^h' = q^(h+h')`, truncated at the smaller bound.
    /// Contributions to each index are summed in canonical order, so the
    /// result is deterministic.
    pub fn multiply(&self, o: &Self) -> Result<Self> {
        self.check_compatible(o)?;
        let bound = self.trace_bound.clone().min(o.trace_bound.clone());
        let mut coeffs: BTreeMap<HermIndex, Coeff> = BTreeMap::new();
        for (h1, c1) in &self.coeffs {
            if h1.trace() > &bound {
                break;
            }
            for (h2, c2) in &o.coeffs {
                if h1.trace() + h2.trace() > bound {
                    break;
                }
                let h = h1.add(h2);
                let term = c1.mul(c2);
                match coeffs.get_mut(&h) {
                    Some(e) => *e = e.add(&term),
                    None => {
                        coeffs.insert(h, term);
                    }
                }
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Ok(Self { lattice: self.lattice.clone(), trace_bound: bound, coeffs })
    }

    pub fn check_support(&self, mode: SupportMode) -> bool {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero()).all(|(h, _)| match mode {
            SupportMode::Holomorphic => h.is_psd(),
            SupportMode::Cusp => h.is_positive_definite(),
        })
    }

    /// Smallest ring of the chain containing every coefficient. Numeric
    /// coefficients are reconstructed as rationals at the full and at half
    /// precision; if either fails or they disagree the ring is `Numeric`.
    pub fn detect_coefficient_ring(&self) -> CoefficientRing {
        let mut rationals: Vec<Rational> = Vec::new();
        let mut field: Option<u64> = None;
        for c in self.coeffs.values() {
            match c {
                Coeff::Rational(x) => rationals.push(x.clone()),
                Coeff::Field(x) if x.is_rational() => rationals.push(x.a.clone()),
                Coeff::Field(x) => field = Some(x.d()),
                Coeff::Numeric(z) => match reconstruct_complex(z) {
                    Some((re, im)) if im.is_zero() => rationals.push(re),
                    Some(_) => field = Some(1),
                    None => return CoefficientRing::Numeric,
                },
            }
        }
        if let Some(d) = field {
            return CoefficientRing::QuadraticField(d);
        }
        let n = lcm_denominators(rationals.iter());
        if n.is_one() {
            CoefficientRing::Integers
        } else if n <= BigInt::from(LOCALIZATION_CAP) {
            CoefficientRing::Localized(n)
        } else {
            CoefficientRing::Rationals
        }
    }

    /// `sum_{k <= bound} c(k) q^k` as a dense vector (n = 1 only).
    pub fn to_q_series(&self) -> Result<Vec<Rational>> {
        if self.lattice.n() != 1 {
            return Err(Error::Precondition("q-series view needs n = 1".into()));
        }
        let step = self.lattice.basis()[0][(0, 0)].a.clone();
        if !step.is_one() {
            return Err(Error::Precondition("q-series view needs the lattice Z".into()));
        }
        let len = self.trace_bound.floor().to_integer();
        let len: usize = len.try_into().map_err(|_| Error::Precondition("bound too large".into()))?;
        let mut out = vec![Rational::zero(); len + 1];
        for (h, c) in &self.coeffs {
            let k: usize = h.trace().to_integer().try_into().expect("bounded index");
            out[k] = match c {
                Coeff::Rational(x) => x.clone(),
                Coeff::Field(x) if x.is_rational() => x.a.clone(),
                _ => return Err(Error::Precondition("q-series view needs rational coefficients".into())),
            };
        }
        Ok(out)
    }

    /// The n = 1 expansion with lattice `Z` and trace bound `len - 1`.
    pub fn from_q_series(coeffs: &[Rational]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Precondition("empty q-series".into()));
        }
        let lattice = HermLattice::classical();
        let k = lattice.field();
        let mut f = Self::zero(lattice, rational::int(coeffs.len() as i64 - 1))?;
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let h = KMatrix::diagonal(k, &[k.int(i as i64)]);
                f.coeffs.insert(HermIndex::new(h), Coeff::Rational(c.clone()));
            }
        }
        Ok(f)
    }

    pub fn to_json(&self) -> ExpansionJson {
        ExpansionJson {
            schema: 1,
            lattice: LatticeJson::from_lattice(&self.lattice),
            trace_bound: rational::to_string(&self.trace_bound),
            coefficients: self
                .coeffs
                .iter()
                .map(|(h, c)| CoeffEntry { index: matrix_json(h.matrix()), value: CoeffJson::from_coeff(c) })
                .collect(),
        }
    }

    pub fn from_json(j: &ExpansionJson) -> Result<Self> {
        if j.schema != 1 {
            return Err(Error::Parse(format!("unsupported schema {}", j.schema)));
        }
        let lattice = j.lattice.to_lattice()?;
        let field = lattice.field();
        let mut f = Self::zero(lattice, rational::parse(&j.trace_bound)?)?;
        for e in &j.coefficients {
            f.insert(matrix_from_json(field, &e.index)?, e.value.to_coeff(field)?)?;
        }
        Ok(f)
    }
}

/// `sum_k c_k q^k` at `q = e(z)`, by Horner's rule.
pub fn eval_q_series(coeffs: &[Rational], z: &BigComplex) -> BigComplex {
    let prec = z.prec();
    let q = crate::exactarith::complex::q_of(z);
    coeffs.iter().rev().fold(BigComplex::zero(prec), |acc, c| &(&acc * &q) + &BigComplex::from_rational(prec, c))
}

fn reconstruct_complex(z: &BigComplex) -> Option<(Rational, Rational)> {
    let part = |x: &Float| -> Option<Rational> {
        let prec = x.prec();
        let mag = x.to_f64().abs().max(1.0);
        let height = (RECONSTRUCTION_HEIGHT as f64 * mag).min(u64::MAX as f64 / 2.0) as u64;
        let attempt = |p: u32| {
            let y = Float::with_val(p, x);
            let tol = Float::with_val(p, Float::i_exp(1, -(p as i32) / 2)) * mag;
            reconstruct(&y, height, &tol)
        };
        let full = attempt(prec)?;
        let half = attempt(prec / 2)?;
        (full == half).then_some(full)
    };
    Some((part(&z.re)?, part(&z.im)?))
}

pub type MatrixJson = Vec<Vec<[String; 2]>>;

pub fn matrix_json(m: &KMatrix) -> MatrixJson {
    (0..m.rows()).map(|i| m.row(i).iter().map(FieldElem::to_pair).collect()).collect()
}

pub fn matrix_from_json(field: QuadField, m: &MatrixJson) -> Result<KMatrix> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|p| FieldElem::from_pair(field, p)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    KMatrix::from_rows(field, rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeJson {
    pub n: usize,
    pub d: u64,
    pub basis: Vec<MatrixJson>,
}

impl LatticeJson {
    pub fn from_lattice(l: &HermLattice) -> Self {
        Self { n: l.n(), d: l.field().d(), basis: l.basis().iter().map(matrix_json).collect() }
    }

    pub fn to_lattice(&self) -> Result<HermLattice> {
        let field = QuadField::new(self.d)?;
        let basis = self.basis.iter().map(|b| matrix_from_json(field, b)).collect::<Result<Vec<_>>>()?;
        HermLattice::new(field, self.n, basis)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CoeffJson {
    Rational { value: String },
    Field { value: [String; 2] },
    Numeric { re: String, im: String, prec: u32 },
}

impl CoeffJson {
    pub fn from_coeff(c: &Coeff) -> Self {
        match c {
            Coeff::Rational(x) => CoeffJson::Rational { value: rational::to_string(x) },
            Coeff::Field(x) => CoeffJson::Field { value: x.to_pair() },
            Coeff::Numeric(z) => CoeffJson::Numeric {
                re: z.re.to_string_radix(16, None),
                im: z.im.to_string_radix(16, None),
                prec: z.prec(),
            },
        }
    }

    pub fn to_coeff(&self, field: QuadField) -> Result<Coeff> {
        Ok(match self {
            CoeffJson::Rational { value } => Coeff::Rational(rational::parse(value)?),
            CoeffJson::Field { value } => Coeff::Field(FieldElem::from_pair(field, value)?),
            CoeffJson::Numeric { re, im, prec } => {
                let parse = |s: &str| {
                    Float::parse_radix(s, 16)
                        .map(|v| Float::with_val(*prec, v))
                        .map_err(|e| Error::Parse(format!("float {s}: {e}")))
                };
                Coeff::Numeric(BigComplex::new(parse(re)?, parse(im)?))
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoeffEntry {
    pub index: MatrixJson,
    pub value: CoeffJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpansionJson {
    pub schema: u32,
    pub lattice: LatticeJson,
    pub trace_bound: String,
    pub coefficients: Vec<CoeffEntry>,
}

#[cfg(test)]
mod tests;
