use serde::Serialize;

use crate::error::{precondition, Result};

/// `F_{q^2} = F_q[t] / (t^2 - c1 t - c0)` for prime `q` in {2, 3}. Element
/// `a + b t` is encoded as `a + q b`; addition, multiplication, inverse and
/// conjugation `x -> x^q` are table lookups.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gf {
    q: u8,
    size: u8,
    /// `t^2 = c1 t + c0`.
    modulus: (u8, u8),
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    conj: Vec<u8>,
}

#[derive(Debug, Clone, Serialize)]
pub struct GfDescription {
    pub q: u8,
    /// `t^2 = c1 t + c0` as `[c1, c0]`.
    pub t_squared: [u8; 2],
    pub encoding: &'static str,
}

impl Gf {
    pub fn new(q: u8) -> Result<Self> {
        // t^2 + t + 1 over F_2, t^2 + 1 over F_3.
        let modulus = match q {
            2 => (1, 1),
            3 => (0, 2),
            _ => return precondition(format!("F_(q^2) is shipped for q in {{2, 3}}, got {q}")),
        };
        let size = q * q;
        let n = size as usize;
        let split = |x: u8| (x % q, x / q);
        let join = |a: u8, b: u8| (a % q) + q * (b % q);
        let mut add = vec![0; n * n];
        let mut mul = vec![0; n * n];
        for x in 0..size {
            for y in 0..size {
                let (a, b) = split(x);
                let (c, d) = split(y);
                add[x as usize * n + y as usize] = join(a + c, b + d);
                // (a + b t)(c + d t) = ac + (ad + bc) t + bd t^2
                let bd = b * d;
                let lo = a * c + bd * modulus.1;
                let hi = a * d + b * c + bd * modulus.0;
                mul[x as usize * n + y as usize] = join(lo % q, hi % q);
            }
        }
        let mut gf = Self { q, size, modulus, add, mul, neg: vec![0; n], inv: vec![0; n], conj: vec![0; n] };
        for x in 0..size {
            gf.neg[x as usize] = (0..size).find(|&y| gf.add(x, y) == 0).expect("additive group");
            if x != 0 {
                gf.inv[x as usize] = (1..size).find(|&y| gf.mul(x, y) == 1).expect("field");
            }
            let mut p = 1;
            for _ in 0..q {
                p = gf.mul(p, x);
            }
            gf.conj[x as usize] = p;
        }
        Ok(gf)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn size(&self) -> u8 {
        self.size
    }

    pub fn elements(&self) -> impl Iterator<Item = u8> {
        0..self.size
    }

    pub fn add(&self, x: u8, y: u8) -> u8 {
        self.add[x as usize * self.size as usize + y as usize]
    }

    pub fn sub(&self, x: u8, y: u8) -> u8 {
        self.add(x, self.neg(y))
    }

    pub fn mul(&self, x: u8, y: u8) -> u8 {
        self.mul[x as usize * self.size as usize + y as usize]
    }

    pub fn neg(&self, x: u8) -> u8 {
        self.neg[x as usize]
    }

    pub fn inv(&self, x: u8) -> u8 {
        assert!(x != 0, "inverse of zero");
        self.inv[x as usize]
    }

    pub fn conj(&self, x: u8) -> u8 {
        self.conj[x as usize]
    }

    /// `x x^q`, which lies in `F_q`.
    pub fn norm(&self, x: u8) -> u8 {
        self.mul(x, self.conj(x))
    }

    /// Elements fixed by conjugation.
    pub fn is_base(&self, x: u8) -> bool {
        self.conj(x) == x
    }

    pub fn describe(&self) -> GfDescription {
        GfDescription {
            q: self.q,
            t_squared: [self.modulus.0, self.modulus.1],
            encoding: "a + b t encoded as a + q b",
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms() {
        for q in [2u8, 3] {
            let f = Gf::new(q).unwrap();
            let els: Vec<u8> = f.elements().collect();
            for &x in &els {
                assert_eq!(f.add(x, 0), x);
                assert_eq!(f.mul(x, 1), x);
                assert_eq!(f.add(x, f.neg(x)), 0);
                if x != 0 {
                    assert_eq!(f.mul(x, f.inv(x)), 1);
                }
                assert_eq!(f.conj(f.conj(x)), x);
                assert!(f.is_base(f.norm(x)));
                for &y in &els {
                    assert_eq!(f.conj(f.mul(x, y)), f.mul(f.conj(x), f.conj(y)));
                    assert_eq!(f.conj(f.add(x, y)), f.add(f.conj(x), f.conj(y)));
                    for &z in &els {
                        assert_eq!(f.mul(x, f.add(y, z)), f.add(f.mul(x, y), f.mul(x, z)));
                        assert_eq!(f.mul(f.mul(x, y), z), f.mul(x, f.mul(y, z)));
                    }
                }
            }
            // Exactly q elements are fixed by Frobenius; the multiplicative
            // group is cyclic of order q^2 - 1.
            assert_eq!(els.iter().filter(|&&x| f.is_base(x)).count(), q as usize);
            let order = |x: u8| (1..).scan(x, |p, _| {
                let v = *p;
                *p = f.mul(*p, x);
                Some(v)
            }).position(|v| v == 1).unwrap() + 1;
            assert!(els.iter().skip(1).any(|&x| order(x) == (q * q - 1) as usize));
        }
        assert!(Gf::new(5).is_err());
    }
}
