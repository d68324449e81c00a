//! Exact rationals on top of `num_rational::BigRational`, with the string
//! form `"num/den"` used by every serialized payload.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rug::Float;

use crate::error::{Error, Result};

/// Arbitrary-precision rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn big(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// `"a/b"` (or `"a"` when the denominator is 1).
pub fn to_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn parse(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(big(s.parse::<BigInt>().map_err(|_| bad())?)),
    }
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &BigInt, p: u64) -> u32 {
    assert!(!n.is_zero(), "valuation of zero");
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

pub fn lcm_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

pub fn to_float(x: &Rational, prec: u32) -> Float {
    let n = Float::with_val(prec, to_integer(x.numer()));
    let d = Float::with_val(prec, to_integer(x.denom()));
    n / d
}

pub fn to_integer(n: &BigInt) -> rug::Integer {
    rug::Integer::from_str_radix(&n.to_str_radix(16), 16).expect("hex digits")
}

pub fn from_integer(n: &rug::Integer) -> BigInt {
    BigInt::parse_bytes(n.to_string_radix(16).as_bytes(), 16).expect("hex digits")
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        let f = to_float(x, 64);
        f.to_f64()
    })
}

/// Best rational approximation by continued fractions with numerator and
/// denominator bounded by `height`, accepted only if it lies within `tol`.
pub fn reconstruct(x: &Float, height: u64, tol: &Float) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let prec = x.prec();
    let h = BigInt::from(height);
    let (mut p0, mut q0) = (BigInt::zero(), BigInt::one());
    let (mut p1, mut q1) = (BigInt::one(), BigInt::zero());
    let mut rem = x.clone();
    let mut best: Option<Rational> = None;
    for _ in 0..128 {
        let a = rem.clone().floor();
        let a_big = from_integer(&a.to_integer()?);
        let p2 = &a_big * &p1 + &p0;
        let q2 = &a_big * &q1 + &q0;
        if p2.abs() > h || q2 > h {
            break;
        }
        let cand = Rational::new(p2.clone(), q2.clone());
        let err = Float::with_val(prec, x - to_float(&cand, prec)).abs();
        if err <= *tol {
            best = Some(cand);
            break;
        }
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let frac = Float::with_val(prec, &rem - &a);
        if frac.is_zero() {
            break;
        }
        rem = Float::with_val(prec, 1) / frac;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        assert_eq!(parse("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(to_string(&rat(-3, 2)), "-3/2");
        assert_eq!(to_string(&int(7)), "7");
        assert!(parse("1/0").is_err());
        assert!(parse("x").is_err());
    }

    #[test]
    fn valuations() {
        assert_eq!(valuation(&BigInt::from(48), 2), 4);
        assert_eq!(valuation(&BigInt::from(-45), 3), 2);
        assert_eq!(valuation(&BigInt::from(7), 5), 0);
    }

    #[test]
    fn reconstruct_simple_fraction() {
        let x = to_float(&rat(-691, 2730), 128);
        let tol = Float::with_val(128, 1e-30);
        assert_eq!(reconstruct(&x, 1_000_000, &tol), Some(rat(-691, 2730)));
        let pi = Float::with_val(128, rug::float::Constant::Pi);
        assert_eq!(reconstruct(&pi, 1_000_000, &tol), None);
    }
}
