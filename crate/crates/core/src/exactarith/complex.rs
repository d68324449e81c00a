//! Complex numbers with MPFR real and imaginary parts.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

use super::rational::{self, Rational};

pub const DEFAULT_PRECISION: u32 = 128;

/// `re + i im` at a fixed binary precision. Binary operations work at the
/// smaller of the two operand precisions.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn new(re: Float, im: Float) -> Self {
        let p = re.prec().min(im.prec());
        Self { re: Float::with_val(p, re), im: Float::with_val(p, im) }
    }

    pub fn zero(prec: u32) -> Self {
        Self { re: Float::new(prec), im: Float::new(prec) }
    }

    pub fn one(prec: u32) -> Self {
        Self::from_f64(prec, 1.0, 0.0)
    }

    pub fn i(prec: u32) -> Self {
        Self::from_f64(prec, 0.0, 1.0)
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        Self { re: Float::with_val(prec, re), im: Float::with_val(prec, im) }
    }

    pub fn from_real(re: Float) -> Self {
        let p = re.prec();
        Self { re, im: Float::new(p) }
    }

    pub fn from_rational(prec: u32, x: &Rational) -> Self {
        Self::from_real(rational::to_float(x, prec))
    }

    pub fn from_rationals(prec: u32, re: &Rational, im: &Rational) -> Self {
        Self { re: rational::to_float(re, prec), im: rational::to_float(im, prec) }
    }

    pub fn pi(prec: u32) -> Float {
        Float::with_val(prec, Constant::Pi)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().min(self.im.prec())
    }

    pub fn with_prec(&self, prec: u32) -> Self {
        Self { re: Float::with_val(prec, &self.re), im: Float::with_val(prec, &self.im) }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: Float::with_val(self.im.prec(), -&self.im) }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.prec();
        Float::with_val(p, self.re.clone().square() + self.im.clone().square())
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.prec(), self.re.clone().hypot(&self.im))
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.prec(), self.im.clone().atan2(&self.re))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn scale(&self, s: &Float) -> Self {
        let p = self.prec().min(s.prec());
        Self {
            re: Float::with_val(p, &self.re * s),
            im: Float::with_val(p, &self.im * s),
        }
    }

    pub fn scale_f64(&self, s: f64) -> Self {
        Self { re: Float::with_val(self.re.prec(), &self.re * s), im: Float::with_val(self.im.prec(), &self.im * s) }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        Self {
            re: Float::with_val(n.prec(), &self.re / &n),
            im: Float::with_val(n.prec(), -(Float::with_val(n.prec(), &self.im / &n))),
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.prec();
        let r = self.re.clone().exp();
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        Self { re: self.abs().ln(), im: self.arg() }
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let p = self.prec();
        let r = self.abs().sqrt();
        let half = self.arg() / 2u32;
        let (s, c) = half.sin_cos(Float::new(p));
        Self { re: Float::with_val(p, &r * &c), im: Float::with_val(p, &r * &s) }
    }

    pub fn powi(&self, e: i64) -> Self {
        if e < 0 {
            return self.powi(-e).recip();
        }
        let mut base = self.clone();
        let mut acc = Self::one(self.prec());
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// `self^w = exp(w log self)` on the principal branch.
    pub fn pow(&self, w: &Self) -> Self {
        (w * &self.ln()).exp()
    }

    /// `x^s` for a positive real `x` and complex `s`.
    pub fn real_pow(x: &Float, s: &Self) -> Self {
        let l = Float::with_val(s.prec(), x.clone().ln());
        s.scale(&l).exp()
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    /// `|self - other| / max(|other|, tiny)`.
    pub fn rel_diff(&self, other: &Self) -> f64 {
        let d = (self - other).abs().to_f64();
        let m = other.abs().to_f64();
        if m == 0.0 {
            d
        } else {
            d / m
        }
    }

    /// Decimal string with `digits` significant digits per part.
    pub fn to_decimal(&self, digits: usize) -> String {
        format!(
            "{}{}{}i",
            self.re.to_string_radix(10, Some(digits)),
            if self.im.is_sign_negative() { "-" } else { "+" },
            Float::with_val(self.im.prec(), self.im.abs_ref()).to_string_radix(10, Some(digits))
        )
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_decimal(20))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().min(o.prec());
        BigComplex { re: Float::with_val(p, &self.re + &o.re), im: Float::with_val(p, &self.im + &o.im) }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().min(o.prec());
        BigComplex { re: Float::with_val(p, &self.re - &o.re), im: Float::with_val(p, &self.im - &o.im) }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        let p = self.prec().min(o.prec());
        let re = Float::with_val(p, &self.re * &o.re) - Float::with_val(p, &self.im * &o.im);
        let im = Float::with_val(p, &self.re * &o.im) + Float::with_val(p, &self.im * &o.re);
        BigComplex { re, im }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        self * &o.recip()
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: Float::with_val(self.re.prec(), -&self.re), im: Float::with_val(self.im.prec(), -&self.im) }
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -self.re, im: -self.im }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, o: &BigComplex) -> BigComplex { (&self).$m(o) }
        }
        impl<'a> $tr<BigComplex> for &'a BigComplex {
            type Output = BigComplex;
            fn $m(self, o: BigComplex) -> BigComplex { self.$m(&o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl std::iter::Sum for BigComplex {
    fn sum<I: Iterator<Item = BigComplex>>(mut iter: I) -> BigComplex {
        let first = iter.next().unwrap_or_else(|| BigComplex::zero(DEFAULT_PRECISION));
        iter.fold(first, |acc, x| acc + x)
    }
}

/// `2 pi i z` exponential: `q = e^{2 pi i z}`.
pub fn q_of(z: &BigComplex) -> BigComplex {
    let two_pi = BigComplex::pi(z.prec()) * 2u32;
    let w = BigComplex::new(-Float::with_val(z.prec(), &z.im * &two_pi), Float::with_val(z.prec(), &z.re * &two_pi));
    w.exp()
}

pub fn float_pow(x: &Float, e: i32) -> Float {
    Float::with_val(x.prec(), x.pow(e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = BigComplex::from_f64(128, 1.0, 2.0);
        let b = BigComplex::from_f64(128, -3.0, 0.5);
        let q = &(&a * &b) / &b;
        assert!(q.rel_diff(&a) < 1e-35);
        assert!((&a.sqrt() * &a.sqrt()).rel_diff(&a) < 1e-35);
        assert!(a.ln().exp().rel_diff(&a) < 1e-35);
        assert!(a.powi(-3).rel_diff(&(&a * &(&a * &a)).recip()) < 1e-35);
    }

    #[test]
    fn precision_is_minimum() {
        let a = BigComplex::from_f64(128, 1.0, 0.0);
        let b = BigComplex::from_f64(64, 1.0, 0.0);
        assert_eq!((&a + &b).prec(), 64);
        assert_eq!((&a * &b).prec(), 64);
    }

    #[test]
    fn q_at_i() {
        let z = BigComplex::i(128);
        let q = q_of(&z);
        let expected = (-2.0 * std::f64::consts::PI).exp();
        assert!((q.re.to_f64() - expected).abs() < 1e-16 && q.im.to_f64().abs() < 1e-30);
    }
}
