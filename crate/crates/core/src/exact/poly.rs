//! Dense univariate polynomials over Q and Z, coefficients in ascending degree.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::rational::Rational;

/// Polynomial with rational coefficients; `coeffs[i]` multiplies `X^i`.
///
/// Trailing zeros are always trimmed, so the zero polynomial has no
/// coefficients and every other polynomial has a nonzero leading term.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn from_ints<I: IntoIterator<Item = i64>>(coeffs: I) -> Self {
        Self::new(coeffs.into_iter().map(|c| Rational::from_integer(c.into())).collect())
    }

    pub fn from_bigints(coeffs: &[BigInt]) -> Self {
        Self::new(coeffs.iter().cloned().map(Rational::from_integer).collect())
    }

    /// Builds from coefficients listed from the leading term down.
    pub fn from_descending(coeffs: Vec<Rational>) -> Self {
        let mut c = coeffs;
        c.reverse();
        Self::new(c)
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `X`.
    pub fn x() -> Self {
        Self::monomial(Rational::one(), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut v = vec![Rational::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `Π (X − r)` over the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::one(), |acc, r| {
            acc * RatPoly::new(vec![-r.clone(), Rational::one()])
        })
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `X^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.is_one())
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        if x.is_integer() {
            let xi = x.numer();
            let mut acc = Rational::zero();
            for c in self.coeffs.iter().rev() {
                acc = acc * Rational::from_integer(xi.clone()) + c;
            }
            return acc;
        }
        // Horner on the homogenised form keeps intermediate gcds out of the loop
        let (a, b) = (x.numer(), x.denom());
        let l = self.denominator_lcm();
        let n = self.coeffs.len();
        if n == 0 {
            return Rational::zero();
        }
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            let ci = (c * Rational::from_integer(l.clone())).to_integer();
            acc = acc * a + ci * &bpow;
            bpow *= b;
        }
        // acc = Σ c_i a^i b^{deg-i}·l, and we multiplied bpow once too many
        let denom = (bpow / b) * l;
        Rational::new(acc, denom)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Divides by the leading coefficient.
    pub fn make_monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        self.scale(&lc.recip())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// `p(c·X)`.
    pub fn scale_variable(&self, c: &Rational) -> Self {
        let mut pow = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &pow);
            pow *= c;
        }
        Self::new(out)
    }

    /// `p(X²)`.
    pub fn compose_square(&self) -> Self {
        let mut out = vec![Rational::zero(); 2 * self.coeffs.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        Self::new(out)
    }

    /// For `p` with only even powers, the `Q` with `p(X) = Q(X²)`; `None` otherwise.
    pub fn even_part_in_square(&self) -> Option<Self> {
        if self.coeffs.iter().skip(1).step_by(2).any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(self.coeffs.iter().step_by(2).cloned().collect()))
    }

    /// Reversed polynomial `X^deg · p(1/X)`.
    pub fn reverse(&self) -> Self {
        let mut c = self.coeffs.clone();
        c.reverse();
        Self::new(c)
    }

    /// Only even-exponent or only odd-exponent terms.
    pub fn has_parity(&self, odd: bool) -> bool {
        self.coeffs.iter().enumerate().all(|(i, c)| c.is_zero() || (i % 2 == 1) == odd)
    }

    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let dd = divisor.degree().ok_or(Error::ZeroPolynomial)?;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let lc_inv = divisor.leading().recip();
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let q = &rem[i + dd] * &lc_inv;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &q * c;
                }
            }
            quot[i] = q;
        }
        rem.truncate(dd);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_rational();
        }
        a.make_monic()
    }

    pub fn is_squarefree(&self) -> bool {
        self.gcd(&self.derivative()).degree().unwrap_or(0) == 0
    }

    /// Lcm of coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Integer polynomial `l·p` with `l` the denominator lcm.
    pub fn clear_denominators(&self) -> IntPoly {
        let l = self.denominator_lcm();
        IntPoly::new(self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect())
    }

    /// Positive multiple with coprime integer coefficients, as a `RatPoly`.
    fn primitive_rational(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let ip = self.clear_denominators().primitive();
        RatPoly::from_bigints(ip.coeffs())
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for RatPoly {
            type Output = RatPoly;
            fn $m(self, rhs: RatPoly) -> RatPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let show_coeff = i == 0 || !mag.is_one();
            if show_coeff {
                if mag.is_integer() {
                    write!(f, "{}", mag.numer())?;
                } else {
                    write!(f, "({})", mag)?;
                }
            }
            match i {
                0 => {}
                1 => f.write_str("X")?,
                _ => write!(f, "X^{i}")?,
            }
        }
        Ok(())
    }
}

/// Polynomial with integer coefficients, ascending degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c))
    }

    /// Divides out the content, keeping the sign of the leading coefficient.
    pub fn primitive(&self) -> Self {
        let g = self.content();
        if g.is_zero() || g.is_one() {
            return self.clone();
        }
        IntPoly::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Sign of `p(a/b)` for `b > 0`, without forming the rational.
    pub fn sign_at(&self, x: &Rational) -> i8 {
        let (a, b) = (x.numer(), x.denom());
        let mut acc = BigInt::zero();
        let mut bpow = BigInt::one();
        for c in self.coeffs.iter().rev() {
            acc = acc * a + c * &bpow;
            bpow *= b;
        }
        sign_of(&acc)
    }

    /// Coefficients reduced into `[0, p)`.
    pub fn reduce_mod(&self, p: u64) -> Vec<u64> {
        let bp = BigInt::from(p);
        self.coeffs
            .iter()
            .map(|c| {
                let r = c.mod_floor(&bp);
                r.try_into().expect("residue fits in u64")
            })
            .collect()
    }

    pub fn to_rat(&self) -> RatPoly {
        RatPoly::from_bigints(&self.coeffs)
    }
}

pub(crate) fn sign_of(n: &BigInt) -> i8 {
    if n.is_zero() {
        0
    } else if n.is_negative() {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn eval_examples() {
        let p = RatPoly::from_ints([16, -12, 1]);
        assert_eq!(p.eval(&q(0)), q(16));
        assert_eq!(RatPoly::from_ints([-23, 1]).eval(&q(23)), q(0));
        assert_eq!(RatPoly::from_ints([225, -50, 1]).eval(&q(5)), q(0));
        assert_eq!(RatPoly::from_ints([-1, 0, 4]).eval(&rat(1, 2)), q(0));
        let r = RatPoly::new(vec![rat(1, 3), rat(-2, 5), rat(7, 2)]);
        let x = rat(-4, 9);
        let direct = rat(1, 3) + rat(-2, 5) * &x + rat(7, 2) * &x * &x;
        assert_eq!(r.eval(&x), direct);
    }

    #[test]
    fn trims_trailing_zeros() {
        let p = RatPoly::from_ints([1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(RatPoly::from_ints([0, 0]).degree(), None);
    }

    #[test]
    fn division_round_trip() {
        let a = RatPoly::from_ints([3, 0, -2, 5, 1]);
        let b = RatPoly::new(vec![rat(1, 2), q(0), q(3)]);
        let (quo, rem) = a.div_rem(&b).unwrap();
        assert_eq!(&(&quo * &b) + &rem, a);
        assert!(rem.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn gcd_and_squarefree() {
        let a = RatPoly::from_roots(&[q(1), q(2), q(2)]);
        let b = RatPoly::from_roots(&[q(2), q(5)]);
        assert_eq!(a.gcd(&b), RatPoly::from_ints([-2, 1]));
        assert!(!a.is_squarefree());
        assert!(b.is_squarefree());
    }

    #[test]
    fn display_form() {
        assert_eq!(RatPoly::from_ints([225, -50, 1]).to_string(), "X^2 - 50X + 225");
        assert_eq!(RatPoly::zero().to_string(), "0");
    }

    #[test]
    fn even_part_and_compose() {
        let p = RatPoly::from_ints([-1, 0, 23]);
        let e = p.even_part_in_square().unwrap();
        assert_eq!(e, RatPoly::from_ints([-1, 23]));
        assert_eq!(e.compose_square(), p);
        assert!(RatPoly::from_ints([0, 1, 1]).even_part_in_square().is_none());
    }

    #[test]
    fn int_sign_matches_rational_eval() {
        let p = RatPoly::new(vec![rat(-7, 3), q(2), rat(1, 4)]);
        let ip = p.clear_denominators();
        for x in [rat(-9, 2), rat(1, 7), q(3), rat(22, 5)] {
            let v = p.eval(&x);
            let s = if v.is_zero() { 0 } else if v.is_negative() { -1 } else { 1 };
            assert_eq!(ip.sign_at(&x), s);
        }
    }
}
