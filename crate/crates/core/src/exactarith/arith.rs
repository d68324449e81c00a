//! Elementary integer arithmetic: primes, factorization, divisor sums and
//! the Kronecker symbol.

use num_bigint::BigInt;
use num_traits::{One, Pow};

use crate::error::{precondition, Result};

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut i = 17u64;
    while i.saturating_mul(i) <= n {
        if n % i == 0 {
            return false;
        }
        i += 2;
    }
    true
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i <= n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve
        .iter()
        .enumerate()
        .filter_map(|(i, &b)| b.then_some(i as u64))
        .collect()
}

/// Prime factorization `[(p, e)]` in increasing order of `p`.
pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn ord_p(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n > 0 && n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// `sigma_e(n) = sum of d^e over positive divisors d of n`.
pub fn divisor_sum(n: u64, e: u32) -> Result<BigInt> {
    if n == 0 {
        return precondition("divisor_sum needs n >= 1");
    }
    Ok(divisors(n)
        .into_iter()
        .map(|d| Pow::pow(BigInt::from(d), e))
        .sum())
}

/// Table `sigma_e(1..=bound)` computed by a divisor sieve.
pub fn divisor_sum_table(bound: usize, e: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(0); bound + 1];
    for d in 1..=bound {
        let de = Pow::pow(BigInt::from(d), e);
        let mut m = d;
        while m <= bound {
            out[m] += &de;
            m += d;
        }
    }
    out
}

pub fn pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut r = 1u128 % m128;
    let mut b128 = b as u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b128 % m128;
        }
        b128 = b128 * b128 % m128;
        e >>= 1;
    }
    r as u64
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Kronecker symbol `(disc | p)` for a prime `p`.
pub fn kronecker_prime(disc: i64, p: u64) -> i32 {
    if p == 2 {
        if disc.rem_euclid(2) == 0 {
            return 0;
        }
        return match disc.rem_euclid(8) {
            1 | 7 => 1,
            _ => -1,
        };
    }
    let r = disc.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

pub fn is_squarefree(n: u64) -> bool {
    n > 0 && factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divisor_sum_examples() {
        assert_eq!(divisor_sum(1, 7).unwrap(), BigInt::from(1));
        assert_eq!(divisor_sum(6, 3).unwrap(), BigInt::from(252));
        assert_eq!(divisor_sum(2, 11).unwrap(), BigInt::from(2049));
        assert!(divisor_sum(0, 1).is_err());
    }

    #[test]
    fn sieve_matches_direct() {
        let t = divisor_sum_table(100, 3);
        for n in 1..=100u64 {
            assert_eq!(t[n as usize], divisor_sum(n, 3).unwrap());
        }
    }

    #[test]
    fn primes_and_factoring() {
        assert_eq!(primes_up_to(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factor(360), vec![(2, 3), (3, 2), (5, 1)]);
        assert!(is_prime(691) && !is_prime(4) && !is_prime(1));
        assert_eq!(primes_up_to(100_000).len(), 9592);
    }

    #[test]
    fn kronecker_gaussian() {
        // disc(Q(i)) = -4
        assert_eq!(kronecker_prime(-4, 5), 1);
        assert_eq!(kronecker_prime(-4, 3), -1);
        assert_eq!(kronecker_prime(-4, 2), 0);
        // disc(Q(sqrt(-3))) = -3
        assert_eq!(kronecker_prime(-3, 7), 1);
        assert_eq!(kronecker_prime(-3, 2), -1);
        assert_eq!(kronecker_prime(-3, 3), 0);
    }
}
