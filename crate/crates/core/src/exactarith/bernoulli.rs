//! Bernoulli numbers under the `t e^t / (e^t - 1)` convention (`B_1 = +1/2`),
//! special values of the Riemann zeta function, and Kummer's congruences.

use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Pow, Signed, Zero};

use super::arith::{binomial, factorial, inv_mod, is_prime};
use super::rational::{big, int, Rational};
use crate::error::{precondition, Error, Result};

fn table() -> &'static Mutex<Vec<Rational>> {
    static TABLE: OnceLock<Mutex<Vec<Rational>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![int(1)]))
}

/// `B_n` via `B_m = 1 - sum_{k<m} C(m,k) B_k / (m - k + 1)`.
pub fn bernoulli(n: usize) -> Rational {
    let mut t = table().lock().unwrap_or_else(|e| e.into_inner());
    while t.len() <= n {
        let m = t.len();
        let mut acc = int(1);
        for (k, bk) in t.iter().enumerate() {
            if bk.is_zero() {
                continue;
            }
            let c = big(binomial(m as u64, k as u64));
            acc -= c * bk / int((m - k + 1) as i64);
        }
        t.push(acc);
    }
    t[n].clone()
}

/// `zeta(2k) = coeff * pi^pi_power`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZetaEven {
    pub coeff: Rational,
    pub pi_power: u32,
}

pub fn zeta_even(k: u32) -> Result<ZetaEven> {
    if k == 0 {
        return precondition("zeta_even needs k >= 1");
    }
    let two_k = 2 * k as usize;
    let sign = if k % 2 == 1 { 1 } else { -1 };
    let num = big(Pow::pow(BigInt::from(2), two_k)) * bernoulli(two_k) * int(sign);
    let den = big(factorial(two_k as u64) * 2);
    Ok(ZetaEven {
        coeff: num / den,
        pi_power: two_k as u32,
    })
}

impl ZetaEven {
    pub fn to_float(&self, prec: u32) -> rug::Float {
        let pi = rug::Float::with_val(prec, rug::float::Constant::Pi);
        let pow = rug::Float::with_val(prec, rug::ops::Pow::pow(&pi, self.pi_power));
        super::rational::to_float(&self.coeff, prec) * pow
    }
}

/// `zeta(1 - 2k) = -B_{2k} / (2k)`.
pub fn zeta_neg(k: u32) -> Result<Rational> {
    if k == 0 {
        return precondition("zeta_neg needs k >= 1");
    }
    let two_k = 2 * k as usize;
    Ok(-bernoulli(two_k) / int(two_k as i64))
}

fn kummer_value(p: u64, m: u32) -> Rational {
    let pm = Pow::pow(BigInt::from(p), m - 1);
    (int(1) - big(pm)) * bernoulli(m as usize) / int(m as i64)
}

/// Clears the prime-to-`p` part of the denominator and returns the resulting
/// integer, or `None` if `p` still divides the denominator.
fn clear_prime_to_p(x: &Rational, scale: &BigInt) -> Option<BigInt> {
    let y = x * big(scale.clone());
    y.is_integer().then(|| y.to_integer())
}

fn prime_to_p_part(mut d: BigInt, p: u64) -> BigInt {
    let pb = BigInt::from(p);
    while (&d % &pb).is_zero() {
        d /= &pb;
    }
    d
}

/// Tests `(1 - p^{m-1}) B_m / m == (1 - p^{n-1}) B_n / n (mod p)`.
pub fn kummer_congruent(p: u64, m: u32, n: u32) -> Result<bool> {
    if p < 3 || !is_prime(p) {
        return precondition(format!("{p} is not an odd prime"));
    }
    if m == 0 || n == 0 || m % 2 == 1 || n % 2 == 1 {
        return precondition("m and n must be even and positive");
    }
    let period = p - 1;
    if (m as u64) % period != (n as u64) % period {
        return precondition(format!("{m} and {n} differ mod {period}"));
    }
    if (m as u64) % period == 0 {
        return precondition(format!("{m} is divisible by {period}"));
    }
    let xm = kummer_value(p, m);
    let xn = kummer_value(p, n);
    let scale = prime_to_p_part(xm.denom().clone(), p).lcm(&prime_to_p_part(xn.denom().clone(), p));
    let (Some(a), Some(b)) = (clear_prime_to_p(&xm, &scale), clear_prime_to_p(&xn, &scale)) else {
        return Err(Error::Degenerate(format!("Kummer values not {p}-integral")));
    };
    Ok(((a - b) % BigInt::from(p)).is_zero())
}

/// Even indices `2 <= 2j <= p - 3` with `p | numerator(B_{2j})`. Bernoulli
/// numbers up to `p - 3` are `p`-integral, so the recurrence runs mod `p`.
pub fn irregular_prime(p: u64) -> Result<Vec<u32>> {
    if p < 5 || !is_prime(p) {
        return precondition(format!("irregular_prime needs a prime p >= 5, got {p}"));
    }
    let top = (p - 3) as usize;
    let pb = p as u128;
    // binomial rows mod p, built incrementally
    let mut row: Vec<u64> = vec![1];
    let mut b: Vec<u64> = vec![1];
    for m in 1..=top {
        let mut next = vec![1u64; m + 1];
        for k in 1..m {
            next[k] = (row[k - 1] + row[k]) % p;
        }
        row = next;
        let mut acc: u128 = 1;
        for k in 0..m {
            let term = row[k] as u128 * b[k] as u128 % pb * inv_mod((m - k + 1) as u64, p) as u128 % pb;
            acc = (acc + pb - term) % pb;
        }
        b.push(acc as u64);
    }
    Ok((2..=top)
        .step_by(2)
        .filter(|&i| b[i] == 0)
        .map(|i| i as u32)
        .collect())
}

/// Exact check that `p` divides the numerator of `B_n`.
pub fn divides_bernoulli_numerator(p: u64, n: usize) -> bool {
    let b = bernoulli(n);
    !b.is_zero() && (b.numer().abs() % BigInt::from(p)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use crate::exactarith::rational::rat;

    /// `t e^t / (e^t - 1) = e^t / (sum_k t^k / (k+1)!)`, divided as power series.
    fn series_oracle(n: usize) -> Vec<Rational> {
        let fact = |k: usize| big(factorial(k as u64));
        let num: Vec<Rational> = (0..=n).map(|k| Rational::one() / fact(k)).collect();
        let den: Vec<Rational> = (0..=n).map(|k| Rational::one() / fact(k + 1)).collect();
        let mut quo: Vec<Rational> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut c = num[k].clone();
            for j in 0..k {
                c -= &quo[j] * &den[k - j];
            }
            quo.push(c / &den[0]);
        }
        quo.into_iter()
            .enumerate()
            .map(|(k, c)| c * fact(k))
            .collect()
    }

    #[test]
    fn examples() {
        assert_eq!(bernoulli(0), int(1));
        assert_eq!(bernoulli(1), rat(1, 2));
        assert_eq!(bernoulli(12), rat(-691, 2730));
    }

    #[test]
    fn recurrence_matches_series_to_60() {
        let oracle = series_oracle(60);
        for (n, b) in oracle.iter().enumerate() {
            assert_eq!(&bernoulli(n), b, "B_{n}");
        }
    }

    #[test]
    fn odd_bernoulli_vanish() {
        for k in 1..=30 {
            assert!(bernoulli(2 * k + 1).is_zero());
        }
    }

    #[test]
    fn zeta_values() {
        assert_eq!(zeta_even(1).unwrap(), ZetaEven { coeff: rat(1, 6), pi_power: 2 });
        assert_eq!(zeta_even(2).unwrap(), ZetaEven { coeff: rat(1, 90), pi_power: 4 });
        assert!(zeta_even(0).is_err());
        assert_eq!(zeta_neg(1).unwrap(), rat(-1, 12));
        assert_eq!(zeta_neg(2).unwrap(), rat(1, 120));
        assert_eq!(zeta_neg(6).unwrap(), rat(691, 32760));
        assert!(zeta_neg(0).is_err());
    }

    #[test]
    fn zeta_even_against_partial_sums() {
        let n = 1_000_000u64;
        for k in 1..=3u32 {
            let exact = zeta_even(k).unwrap().to_float(128).to_f64();
            let partial: f64 = (1..=n).rev().map(|m| (m as f64).powi(-2 * k as i32)).sum();
            let tail = (n as f64).powi(1 - 2 * k as i32) / (2 * k - 1) as f64;
            assert!((exact - partial).abs() <= tail * 1.0001, "k={k}");
        }
    }

    #[test]
    fn kummer_examples() {
        assert_eq!(kummer_congruent(5, 2, 6), Ok(true));
        assert_eq!(kummer_congruent(7, 4, 10), Ok(true));
        assert!(matches!(kummer_congruent(5, 2, 4), Err(Error::Precondition(_))));
        assert!(matches!(kummer_congruent(5, 4, 8), Err(Error::Precondition(_))));
        assert!(kummer_congruent(9, 2, 10).is_err());
    }

    #[test]
    fn irregular_examples() {
        assert_eq!(irregular_prime(5).unwrap(), Vec::<u32>::new());
        assert_eq!(irregular_prime(37).unwrap(), vec![32]);
        assert!(irregular_prime(691).unwrap().contains(&12));
        assert!(irregular_prime(3).is_err());
        assert!(divides_bernoulli_numerator(37, 32));
        assert!(divides_bernoulli_numerator(691, 12));
    }

    #[test]
    fn modular_scan_agrees_with_exact_numerators() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59] {
            let exact: Vec<u32> = (2..=(p - 3) as usize)
                .step_by(2)
                .filter(|&i| divides_bernoulli_numerator(p, i))
                .map(|i| i as u32)
                .collect();
            assert_eq!(irregular_prime(p).unwrap(), exact, "p={p}");
        }
    }
}
