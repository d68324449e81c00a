use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactarith::rational::{rat, to_float};
use crate::exactarith::{is_prime, BigComplex, Rational};

/// A Dirichlet character mod `N`, stored exactly: each value is either 0
/// or `exp(2 pi i a)` for a rational angle `a` in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirichletCharacter {
    modulus: u64,
    angles: Vec<Option<Rational>>,
}

fn reduce_angle(a: Rational) -> Rational {
    let f = a.floor();
    a - f
}

impl DirichletCharacter {
    pub fn trivial(modulus: u64) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let angles = (0..modulus)
            .map(|n| (n.gcd(&modulus) == 1).then(Rational::zero))
            .collect();
        Self { modulus, angles }
    }

    /// Builds a character from its table of angles, checking that it is
    /// supported exactly on the units and is multiplicative.
    pub fn from_angles(modulus: u64, angles: Vec<Option<Rational>>) -> Result<Self> {
        if modulus == 0 || angles.len() as u64 != modulus {
            return Err(Error::Precondition("character table must have N entries".into()));
        }
        let angles: Vec<Option<Rational>> = angles.into_iter().map(|a| a.map(reduce_angle)).collect();
        for (n, a) in angles.iter().enumerate() {
            let unit = (n as u64).gcd(&modulus) == 1;
            if unit != a.is_some() {
                return Err(Error::Precondition(format!("chi({n}) must vanish exactly off the units")));
            }
        }
        if modulus > 1 && angles[1] != Some(Rational::zero()) {
            return Err(Error::Precondition("chi(1) must be 1".into()));
        }
        for a in 0..modulus as usize {
            for b in a..modulus as usize {
                let ab = (a * b) % modulus as usize;
                let prod = match (&angles[a], &angles[b]) {
                    (Some(x), Some(y)) => Some(reduce_angle(x + y)),
                    _ => None,
                };
                if prod != angles[ab] {
                    return Err(Error::Precondition(format!("chi is not multiplicative at ({a}, {b})")));
                }
            }
        }
        Ok(Self { modulus, angles })
    }

    /// The Legendre symbol mod an odd prime.
    pub fn legendre(p: u64) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::Precondition(format!("{p} is not an odd prime")));
        }
        let mut angles = vec![None; p as usize];
        for n in 1..p {
            angles[n as usize] = Some(rat(1, 2));
        }
        for x in 1..p {
            angles[((x * x) % p) as usize] = Some(Rational::zero());
        }
        Self::from_angles(p, angles)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_trivial(&self) -> bool {
        self.angles.iter().all(|a| a.as_ref().map_or(true, Zero::is_zero))
    }

    pub fn angle(&self, n: i64) -> Option<&Rational> {
        self.angles[n.rem_euclid(self.modulus as i64) as usize].as_ref()
    }

    /// `chi(-1) = (-1)^parity`.
    pub fn parity(&self) -> u32 {
        match self.angle(-1) {
            Some(a) if a.is_zero() => 0,
            _ => 1,
        }
    }

    pub fn value(&self, n: i64, prec: u32) -> BigComplex {
        match self.angle(n) {
            None => BigComplex::zero(prec),
            Some(a) if a.is_zero() => BigComplex::one(prec),
            Some(a) if *a == rat(1, 2) => -BigComplex::one(prec),
            Some(a) => {
                let t = to_float(a, prec) * BigComplex::pi(prec) * 2u32;
                BigComplex::new(t.clone().cos(), t.sin())
            }
        }
    }

    /// Rational value when the character is real-valued at `n`.
    pub fn rational_value(&self, n: i64) -> Option<Rational> {
        match self.angle(n) {
            None => Some(Rational::zero()),
            Some(a) if a.is_zero() => Some(Rational::one()),
            Some(a) if *a == rat(1, 2) => Some(-Rational::one()),
            _ => None,
        }
    }
}
