//! Prime testing, factorization into [`FactoredInteger`] and divisor enumeration.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default trial-division bound used by [`FactoredInteger::factorize`].
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all of `u64`.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Strong probable-prime test to a fixed set of bases; exact below 3.3·10^24.
pub fn is_probable_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    if n.is_even() {
        return false;
    }
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; returns a nontrivial factor of composite `n`.
fn pollard_rho(n: &BigUint) -> Option<BigUint> {
    if n.is_even() {
        return Some(BigUint::from(2u32));
    }
    let one = BigUint::one();
    for c in 1u32..64 {
        let c = BigUint::from(c);
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut y = BigUint::from(2u32);
        let mut r: u64 = 1;
        let mut q = one.clone();
        let mut g = one.clone();
        let mut x = y.clone();
        let mut ys = y.clone();
        let m = 128u64;
        while g == one {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g == one {
                ys = y.clone();
                for _ in 0..m.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = (q * diff) % n;
                }
                g = q.gcd(n);
                k += m;
            }
            r *= 2;
            if r > 1 << 24 {
                break;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if g != one {
                    break;
                }
            }
        }
        if g != one && &g != n {
            return Some(g);
        }
    }
    None
}

/// A nonzero integer stored as sign and prime → exponent map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    negative: bool,
    factors: BTreeMap<BigUint, u32>,
}

impl FactoredInteger {
    pub fn one() -> Self {
        FactoredInteger { negative: false, factors: BTreeMap::new() }
    }

    /// Builds from explicit prime powers. Keys are checked for primality.
    pub fn from_prime_powers<I>(negative: bool, powers: I) -> Result<Self>
    where
        I: IntoIterator<Item = (BigUint, u32)>,
    {
        let mut out = FactoredInteger { negative, factors: BTreeMap::new() };
        for (p, e) in powers {
            if !is_probable_prime(&p) {
                return Err(Error::NotPrime(p.to_string()));
            }
            if e > 0 {
                *out.factors.entry(p).or_insert(0) += e;
            }
        }
        Ok(out)
    }

    pub fn from_i64(n: i64) -> Result<Self> {
        Self::factorize(&BigInt::from(n))
    }

    /// Trial division to [`DEFAULT_TRIAL_BOUND`], then a probable-prime check
    /// on the cofactor and Pollard rho if that fails.
    pub fn factorize(n: &BigInt) -> Result<Self> {
        Self::factorize_with_bound(n, DEFAULT_TRIAL_BOUND)
    }

    pub fn factorize_with_bound(n: &BigInt, trial_bound: u64) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::ZeroNotFactorable);
        }
        let mut out = FactoredInteger { negative: n.sign() == Sign::Minus, factors: BTreeMap::new() };
        let mut m = n.magnitude().clone();
        if let Some(mut small) = m.to_u64() {
            let mut p = 2u64;
            while p <= trial_bound && p.saturating_mul(p) <= small {
                if small % p == 0 {
                    let mut e = 0;
                    while small % p == 0 {
                        small /= p;
                        e += 1;
                    }
                    out.factors.insert(BigUint::from(p), e);
                }
                p += if p == 2 { 1 } else { 2 };
            }
            m = BigUint::from(small);
        } else {
            let mut p = 2u64;
            while p <= trial_bound {
                let bp = BigUint::from(p);
                if &bp * &bp > m {
                    break;
                }
                let mut e = 0;
                loop {
                    let (q, r) = m.div_rem(&bp);
                    if !r.is_zero() {
                        break;
                    }
                    m = q;
                    e += 1;
                }
                if e > 0 {
                    out.factors.insert(bp, e);
                }
                p += if p == 2 { 1 } else { 2 };
            }
        }
        if !m.is_one() {
            out.split_cofactor(m)?;
        }
        Ok(out)
    }

    fn split_cofactor(&mut self, m: BigUint) -> Result<()> {
        let mut stack = vec![m];
        while let Some(c) = stack.pop() {
            if c.is_one() {
                continue;
            }
            if is_probable_prime(&c) {
                *self.factors.entry(c).or_insert(0) += 1;
                continue;
            }
            if let Some(r) = c.sqrt().pow(2).eq(&c).then(|| c.sqrt()) {
                stack.push(r.clone());
                stack.push(r);
                continue;
            }
            let f = pollard_rho(&c).ok_or_else(|| Error::FactorizationFailed(c.to_string()))?;
            let g = &c / &f;
            stack.push(f);
            stack.push(g);
        }
        Ok(())
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn factors(&self) -> &BTreeMap<BigUint, u32> {
        &self.factors
    }

    pub fn exponent_of(&self, p: &BigUint) -> u32 {
        self.factors.get(p).copied().unwrap_or(0)
    }

    pub fn abs(&self) -> Self {
        FactoredInteger { negative: false, factors: self.factors.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.negative ^= other.negative;
        for (p, e) in &other.factors {
            *out.factors.entry(p.clone()).or_insert(0) += e;
        }
        out
    }

    /// Product of already-factored parts, without re-factoring the result.
    pub fn product<'a, I: IntoIterator<Item = &'a FactoredInteger>>(parts: I) -> Self {
        parts.into_iter().fold(Self::one(), |acc, f| acc.mul(f))
    }

    pub fn expand(&self) -> BigInt {
        let mut acc = BigUint::one();
        for (p, e) in &self.factors {
            acc *= p.pow(*e);
        }
        let s = if self.negative { Sign::Minus } else { Sign::Plus };
        BigInt::from_biguint(s, acc)
    }

    /// Π (e_i + 1).
    pub fn divisor_count(&self) -> BigUint {
        self.factors.values().fold(BigUint::one(), |acc, e| acc * BigUint::from(e + 1))
    }

    pub fn divisors(&self) -> Divisors {
        Divisors::new(self)
    }

    /// All positive divisors in ascending order.
    pub fn divisors_sorted(&self) -> Vec<BigUint> {
        let mut v: Vec<BigUint> = self.divisors().collect();
        v.sort();
        v
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(p, e)| if *e == 1 { p.to_string() } else { format!("{p}^{e}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Positive divisors of a [`FactoredInteger`], each exactly once.
pub struct Divisors {
    primes: Vec<(BigUint, u32)>,
    exps: Vec<u32>,
    // powers[i] = p_i^{exps[i]}
    powers: Vec<BigUint>,
    done: bool,
}

impl Divisors {
    fn new(n: &FactoredInteger) -> Self {
        let primes: Vec<(BigUint, u32)> = n.factors.iter().map(|(p, e)| (p.clone(), *e)).collect();
        let k = primes.len();
        Divisors { primes, exps: vec![0; k], powers: vec![BigUint::one(); k], done: false }
    }
}

impl Iterator for Divisors {
    type Item = BigUint;

    fn next(&mut self) -> Option<BigUint> {
        if self.done {
            return None;
        }
        let current = self.powers.iter().fold(BigUint::one(), |acc, q| acc * q);
        // odometer increment
        let mut i = 0;
        loop {
            if i == self.primes.len() {
                self.done = true;
                break;
            }
            if self.exps[i] < self.primes[i].1 {
                self.exps[i] += 1;
                self.powers[i] *= &self.primes[i].0;
                break;
            }
            self.exps[i] = 0;
            self.powers[i] = BigUint::one();
            i += 1;
        }
        Some(current)
    }
}

/// Positive divisors of a nonzero integer.
pub fn divisors(n: &FactoredInteger) -> Divisors {
    n.divisors()
}

/// Smallest-prime-factor table for `0..=limit`.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: u32) -> Self {
        let n = limit as usize + 1;
        let mut spf = vec![0u32; n];
        for i in 2..n {
            if spf[i] == 0 {
                let mut j = i;
                while j < n {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Sieve { spf }
    }

    pub fn limit(&self) -> u32 {
        self.spf.len() as u32 - 1
    }

    pub fn is_prime(&self, n: u32) -> bool {
        n >= 2 && self.spf[n as usize] == n
    }

    /// Primes up to the limit, ascending.
    pub fn primes(&self) -> impl Iterator<Item = u32> + '_ {
        (2..self.spf.len() as u32).filter(move |&i| self.spf[i as usize] == i)
    }

    /// Prime factorization of `1 <= n <= limit` as `(p, e)` pairs, ascending.
    pub fn factor(&self, mut n: u32) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = Vec::new();
        while n > 1 {
            let p = self.spf[n as usize];
            n /= p;
            match out.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

/// Legendre's formula: the exponent of `p` in `n!`.
pub fn factorial_valuation(n: u128, p: u64) -> u64 {
    let p = p as u128;
    let (mut n, mut acc) = (n, 0u128);
    while n > 0 {
        n /= p;
        acc += n;
    }
    acc as u64
}

/// Largest prime `<= n`, if any.
pub fn prev_prime(mut n: u64) -> Option<u64> {
    while n >= 2 {
        if is_prime_u64(n) {
            return Some(n);
        }
        n -= 1;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn small_primes() {
        let primes: Vec<u64> = (0..40).filter(|&n| is_prime_u64(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37]);
        assert!(is_prime_u64(1_000_000_007));
        assert!(!is_prime_u64(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime_u64(18_446_744_073_709_551_557));
    }

    #[test]
    fn big_probable_primes() {
        let m127 = (BigUint::one() << 127) - BigUint::one();
        assert!(is_probable_prime(&m127));
        assert!(!is_probable_prime(&(&m127 * BigUint::from(3u32))));
    }

    #[test]
    fn divisors_of_twelve() {
        let n = FactoredInteger::from_i64(12).unwrap();
        let d: Vec<u64> = n.divisors_sorted().iter().map(|x| x.to_u64().unwrap()).collect();
        assert_eq!(d, vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn divisors_of_one() {
        let n = FactoredInteger::from_i64(1).unwrap();
        assert_eq!(n.divisors().collect::<Vec<_>>(), vec![BigUint::one()]);
    }

    #[test]
    fn divisors_of_135_match_brute_force() {
        let n = FactoredInteger::from_prime_powers(false, [(BigUint::from(3u32), 3), (BigUint::from(5u32), 1)]).unwrap();
        assert_eq!(n.expand(), BigInt::from(135));
        let fast: BTreeSet<u64> = n.divisors().map(|d| d.to_u64().unwrap()).collect();
        let slow: BTreeSet<u64> = (1..=135).filter(|d| 135 % d == 0).collect();
        assert_eq!(fast, slow);
        assert_eq!(n.divisors().count(), 8);
        assert_eq!(n.divisor_count(), BigUint::from(8u32));
    }

    #[test]
    fn zero_is_rejected() {
        assert_eq!(FactoredInteger::factorize(&BigInt::zero()), Err(Error::ZeroNotFactorable));
    }

    #[test]
    fn negative_and_products() {
        let a = FactoredInteger::from_i64(-18).unwrap();
        let b = FactoredInteger::from_i64(35).unwrap();
        let c = FactoredInteger::product([&a, &b]);
        assert_eq!(c.expand(), BigInt::from(-630));
        assert!(c.is_negative());
        assert_eq!(c.abs().divisor_count(), BigUint::from(24u32));
    }

    #[test]
    fn pollard_handles_large_semiprime() {
        // (2^31 - 1) * 1_000_000_007 is beyond a tiny trial bound
        let n = BigInt::from(2_147_483_647u64) * BigInt::from(1_000_000_007u64);
        let f = FactoredInteger::factorize_with_bound(&n, 100).unwrap();
        assert_eq!(f.factors().len(), 2);
        assert_eq!(f.expand(), n);
    }

    #[test]
    fn rejects_composite_keys() {
        assert!(FactoredInteger::from_prime_powers(false, [(BigUint::from(9u32), 1)]).is_err());
    }

    #[test]
    fn sieve_matches_trial_division() {
        let s = Sieve::new(1000);
        for n in 2..=1000u32 {
            assert_eq!(s.is_prime(n), is_prime_u64(n as u64));
            let prod: u32 = s.factor(n).iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(prod, n);
        }
        assert_eq!(s.primes().take(5).collect::<Vec<_>>(), vec![2, 3, 5, 7, 11]);
    }

    #[test]
    fn legendre() {
        assert_eq!(factorial_valuation(10, 2), 8);
        assert_eq!(factorial_valuation(100, 5), 24);
        assert_eq!(prev_prime(100), Some(97));
        assert_eq!(prev_prime(1), None);
    }
}
