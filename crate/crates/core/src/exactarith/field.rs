//! Imaginary quadratic fields `K = Q(sqrt(-d))` with elements `a + b sqrt(-d)`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::arith::is_squarefree;
use super::rational::{self, int, Rational};
use crate::error::{Error, Result};

/// The field datum: `d` squarefree and positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuadField {
    d: u64,
}

impl QuadField {
    pub fn new(d: u64) -> Result<Self> {
        if !is_squarefree(d) {
            return Err(Error::Precondition(format!("d = {d} is not squarefree and positive")));
        }
        Ok(Self { d })
    }

    pub fn gaussian() -> Self {
        Self { d: 1 }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    /// Field discriminant: `-d` if `-d = 1 mod 4`, else `-4d`.
    pub fn discriminant(&self) -> i64 {
        let m = -(self.d as i64);
        if m.rem_euclid(4) == 1 {
            m
        } else {
            4 * m
        }
    }

    pub fn elem(&self, a: Rational, b: Rational) -> FieldElem {
        FieldElem { d: self.d, a, b }
    }

    pub fn from_rational(&self, a: Rational) -> FieldElem {
        self.elem(a, Rational::zero())
    }

    pub fn int(&self, n: i64) -> FieldElem {
        self.from_rational(int(n))
    }

    pub fn zero(&self) -> FieldElem {
        self.int(0)
    }

    pub fn one(&self) -> FieldElem {
        self.int(1)
    }

    /// `sqrt(-d)`.
    pub fn root(&self) -> FieldElem {
        self.elem(Rational::zero(), Rational::one())
    }
}

/// Element `a + b sqrt(-d)` of `Q(sqrt(-d))`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    d: u64,
    pub a: Rational,
    pub b: Rational,
}

impl FieldElem {
    pub fn field(&self) -> QuadField {
        QuadField { d: self.d }
    }

    pub fn d(&self) -> u64 {
        self.d
    }

    pub fn conj(&self) -> Self {
        Self { d: self.d, a: self.a.clone(), b: -&self.b }
    }

    /// `a^2 + d b^2`.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a + int(self.d as i64) * &self.b * &self.b
    }

    pub fn trace(&self) -> Rational {
        int(2) * &self.a
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::Degenerate("inverse of zero".into()));
        }
        let n = self.norm();
        Ok(Self { d: self.d, a: &self.a / &n, b: -&self.b / &n })
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Self { d: self.d, a: &self.a * r, b: &self.b * r }
    }

    /// Complex embedding `sqrt(-d) -> i sqrt(d)`.
    pub fn to_complex(&self, prec: u32) -> super::BigComplex {
        let sd = rug::Float::with_val(prec, self.d).sqrt();
        super::BigComplex::new(
            rational::to_float(&self.a, prec),
            rational::to_float(&self.b, prec) * sd,
        )
    }

    /// Serialized as the pair `["a", "b"]`.
    pub fn to_pair(&self) -> [String; 2] {
        [rational::to_string(&self.a), rational::to_string(&self.b)]
    }

    pub fn from_pair(field: QuadField, pair: &[String; 2]) -> Result<Self> {
        Ok(field.elem(rational::parse(&pair[0])?, rational::parse(&pair[1])?))
    }

    fn check(&self, other: &Self) {
        assert_eq!(
            self.d, other.d,
            "{}",
            Error::FieldMismatch { left: self.d, right: other.d }
        );
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = rational::to_string(&self.a);
        if self.b.is_zero() {
            return write!(f, "{a}");
        }
        let b = rational::to_string(&self.b.abs());
        let sign = if self.b.is_negative() { "-" } else { "+" };
        if self.a.is_zero() {
            let sign = if self.b.is_negative() { "-" } else { "" };
            write!(f, "{sign}{b}*sqrt(-{})", self.d)
        } else {
            write!(f, "{a}{sign}{b}*sqrt(-{})", self.d)
        }
    }
}

impl<'a> Add<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn add(self, o: &FieldElem) -> FieldElem {
        self.check(o);
        FieldElem { d: self.d, a: &self.a + &o.a, b: &self.b + &o.b }
    }
}

impl<'a> Sub<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn sub(self, o: &FieldElem) -> FieldElem {
        self.check(o);
        FieldElem { d: self.d, a: &self.a - &o.a, b: &self.b - &o.b }
    }
}

impl<'a> Mul<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn mul(self, o: &FieldElem) -> FieldElem {
        self.check(o);
        let d = int(self.d as i64);
        FieldElem {
            d: self.d,
            a: &self.a * &o.a - d * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
        }
    }
}

impl<'a> Div<&'a FieldElem> for &'a FieldElem {
    type Output = FieldElem;
    fn div(self, o: &FieldElem) -> FieldElem {
        self * &o.inv().expect("division by zero in Q(sqrt(-d))")
    }
}

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem { d: self.d, a: -&self.a, b: -&self.b }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: FieldElem) -> FieldElem { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, o: &FieldElem) -> FieldElem { (&self).$m(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactarith::rational::rat;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_elem(k: QuadField, rng: &mut impl Rng) -> FieldElem {
        k.elem(
            rat(rng.gen_range(-50..=50), rng.gen_range(1..=20)),
            rat(rng.gen_range(-50..=50), rng.gen_range(1..=20)),
        )
    }

    #[test]
    fn basic_invariants() {
        let k = QuadField::new(3).unwrap();
        let x = k.elem(rat(1, 2), rat(-2, 3));
        assert_eq!(x.conj().conj(), x);
        assert_eq!(x.norm(), rat(1, 4) + int(3) * rat(4, 9));
        assert_eq!(x.trace(), int(1));
        assert_eq!(&x * &x.inv().unwrap(), k.one());
        assert!(k.zero().norm().is_zero());
        assert_eq!(&k.root() * &k.root(), k.int(-3));
    }

    #[test]
    fn field_validation() {
        assert!(QuadField::new(4).is_err());
        assert!(QuadField::new(0).is_err());
        assert_eq!(QuadField::new(1).unwrap().discriminant(), -4);
        assert_eq!(QuadField::new(3).unwrap().discriminant(), -3);
        assert_eq!(QuadField::new(5).unwrap().discriminant(), -20);
    }

    #[test]
    fn norm_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for d in [1u64, 2, 3, 7] {
            let k = QuadField::new(d).unwrap();
            for _ in 0..250 {
                let x = random_elem(k, &mut rng);
                let y = random_elem(k, &mut rng);
                assert_eq!((&x * &y).norm(), x.norm() * y.norm());
                assert!(x.norm() >= Rational::zero());
                assert_eq!(x.norm().is_zero(), x.is_zero());
            }
        }
    }

    #[test]
    #[should_panic(expected = "field mismatch")]
    fn mixing_fields_panics() {
        let _ = QuadField::new(1).unwrap().one() + QuadField::new(3).unwrap().one();
    }
}
