//! Helpers around [`BigRational`], the universal scalar of the crate.
//!
//! `BigRational` keeps itself reduced with a positive denominator after every
//! operation, which is exactly the invariant the rest of the crate relies on.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exact::factor::is_prime_u64;

pub type Rational = BigRational;

/// Shorthand for `num/den` as a reduced rational.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

/// p-adic valuation; `Infinite` is the valuation of zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinite,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }
}

impl PartialOrd for Valuation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Valuation {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Valuation::Finite(a), Valuation::Finite(b)) => a.cmp(b),
            (Valuation::Finite(_), Valuation::Infinite) => Ordering::Less,
            (Valuation::Infinite, Valuation::Finite(_)) => Ordering::Greater,
            (Valuation::Infinite, Valuation::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinite => f.write_str("inf"),
        }
    }
}

/// Exponent of `p` in a nonzero integer, no primality check.
pub(crate) fn valuation_unchecked(n: &BigInt, p: u64) -> Valuation {
    if n.is_zero() {
        return Valuation::Infinite;
    }
    let p = BigUint::from(p);
    let mut m = n.magnitude().clone();
    let mut v = 0i64;
    loop {
        let (q, r) = m.div_rem(&p);
        if !r.is_zero() {
            break;
        }
        m = q;
        v += 1;
    }
    Valuation::Finite(v)
}

pub fn ord_p_int(n: &BigInt, p: u64) -> Result<Valuation> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    Ok(valuation_unchecked(n, p))
}

/// `ord_p(a/b) = ord_p(a) − ord_p(b)`; zero has infinite valuation.
pub fn ord_p(q: &Rational, p: u64) -> Result<Valuation> {
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if q.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let num = valuation_unchecked(q.numer(), p).finite().unwrap_or(0);
    let den = valuation_unchecked(q.denom(), p).finite().unwrap_or(0);
    Ok(Valuation::Finite(num - den))
}

/// `n / 2^{ord_2 n}` for nonzero `n`; zero maps to zero.
pub fn odd_part(n: &BigInt) -> BigInt {
    if n.is_zero() {
        return BigInt::zero();
    }
    let tz = n.trailing_zeros().unwrap_or(0);
    n >> tz
}

/// Strips every factor of the given primes from `n`.
pub fn strip_primes(n: &BigInt, primes: &[u64]) -> BigInt {
    let mut m = n.clone();
    if m.is_zero() {
        return m;
    }
    for &p in primes {
        let bp = BigInt::from(p);
        loop {
            let (q, r) = m.div_rem(&bp);
            if !r.is_zero() {
                break;
            }
            m = q;
        }
    }
    m
}

/// True when `n > 0` has no prime factors outside `primes`.
pub fn is_smooth_over(n: &BigInt, primes: &[u64]) -> bool {
    n.is_positive() && strip_primes(n, primes).is_one()
}

pub fn floor(q: &Rational) -> BigInt {
    q.floor().to_integer()
}

pub fn ceil(q: &Rational) -> BigInt {
    q.ceil().to_integer()
}

/// Truncated decimal expansion with `digits` places after the point.
pub fn to_decimal(q: &Rational, digits: usize) -> String {
    let neg = q.is_negative();
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (q.abs() * Rational::from_integer(scale)).floor().to_integer();
    let s = scaled.to_str_radix(10);
    let s = if s.len() <= digits { format!("{}{}", "0".repeat(digits + 1 - s.len()), s) } else { s };
    let (whole, frac) = s.split_at(s.len() - digits);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{whole}")
    } else {
        format!("{sign}{whole}.{frac}")
    }
}

/// Best-effort conversion for display and coarse numeric checks.
pub fn to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() && d != 0.0 => n / d,
        _ => {
            // very large operands: shift both down to a common scale first
            let nb = q.numer().bits() as i64;
            let db = q.denom().bits() as i64;
            let shift = (nb.max(db) - 1000).max(0) as usize;
            let n = (q.numer() >> shift).to_f64().unwrap_or(f64::NAN);
            let d = (q.denom() >> shift).to_f64().unwrap_or(f64::NAN);
            if d == 0.0 {
                if q.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// `10^{-k}` as an exact rational.
pub fn ten_pow_neg(k: u32) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(10u32).pow(k))
}

/// Integer square root if `n` is a perfect square.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Square root of a non-negative rational if both parts are squares.
pub fn exact_sqrt_rational(q: &Rational) -> Option<Rational> {
    Some(Rational::new(exact_sqrt(q.numer())?, exact_sqrt(q.denom())?))
}

/// Rational approximation of `sqrt(q)` accurate to `10^{-digits}`, from below.
pub fn sqrt_approx(q: &Rational, digits: u32) -> Rational {
    assert!(!q.is_negative(), "sqrt of a negative rational");
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (q * Rational::from_integer(&scale * &scale)).floor().to_integer();
    Rational::new(scaled.sqrt(), scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn valuation_examples() {
        assert_eq!(ord_p(&int(120), 2).unwrap(), Valuation::Finite(3));
        assert_eq!(ord_p(&int(0), 3).unwrap(), Valuation::Infinite);
        assert_eq!(ord_p(&rat(14080, 7), 7).unwrap(), Valuation::Finite(-1));
        assert_eq!(ord_p(&rat(14080, 7), 2).unwrap(), Valuation::Finite(8));
    }

    #[test]
    fn valuation_rejects_composite() {
        assert!(matches!(ord_p(&int(12), 4), Err(Error::NotPrime(_))));
        assert!(ord_p_int(&BigInt::from(9), 1).is_err());
    }

    #[test]
    fn infinite_is_largest() {
        assert!(Valuation::Infinite > Valuation::Finite(i64::MAX));
        assert!(Valuation::Finite(-3) < Valuation::Finite(0));
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(to_decimal(&rat(1, 3), 5), "0.33333");
        assert_eq!(to_decimal(&rat(-7, 2), 2), "-3.50");
        assert_eq!(to_decimal(&rat(22, 7), 0), "3");
        assert_eq!(to_decimal(&rat(1, 1000), 2), "0.00");
    }

    #[test]
    fn odd_parts_and_smoothness() {
        assert_eq!(odd_part(&BigInt::from(96)), BigInt::from(3));
        assert!(is_smooth_over(&BigInt::from(44100), &[2, 3, 5, 7]));
        assert!(!is_smooth_over(&BigInt::from(22), &[2, 3, 5, 7]));
        assert_eq!(strip_primes(&BigInt::from(-360), &[2, 3]), BigInt::from(-5));
    }

    #[test]
    fn square_roots() {
        assert_eq!(exact_sqrt(&BigInt::from(3600)), Some(BigInt::from(60)));
        assert_eq!(exact_sqrt(&BigInt::from(3900)), None);
        assert_eq!(exact_sqrt_rational(&rat(9, 4)), Some(rat(3, 2)));
        let s = sqrt_approx(&int(2), 20);
        assert!(&s * &s <= int(2));
        let hi = &s + ten_pow_neg(20);
        assert!(&hi * &hi > int(2));
    }

    #[test]
    fn f64_of_huge_operands() {
        let big = BigInt::from(3) * BigInt::from(10u32).pow(400);
        let q = Rational::new(big.clone(), big * 4);
        assert!((to_f64(&q) - 0.25).abs() < 1e-12);
    }
}
