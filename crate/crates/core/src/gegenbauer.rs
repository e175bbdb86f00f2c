//! Gegenbauer polynomials `P_n^{(α,α)}` with `α = (D−3)/2`, their norms,
//! even moments of the weight `(1−x²)^α`, and Christoffel numbers.
//!
//! Every quantity that the theory guarantees to be rational is computed in
//! exact arithmetic. Node squares are the natural coordinates: each `P_n` is
//! `x^{n mod 2} Q(x²)`, so nodes and Christoffel numbers never need a square
//! root unless a decimal rendering is requested.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::factor::FactoredInteger;
use crate::exact::poly::RatPoly;
use crate::exact::rational::{exact_sqrt, sqrt_approx, ten_pow_neg, to_f64, Rational};
use crate::exact::roots::{isolate_real_roots, refine_interval};
use crate::Dim;

fn q(n: impl Into<BigInt>) -> Rational {
    Rational::from_integer(n.into())
}

fn dim_q(d: Dim) -> Rational {
    q(BigInt::from(d))
}

/// `α = (D − 3)/2`.
pub fn alpha(d: Dim) -> Rational {
    (dim_q(d) - q(3)) / q(2)
}

fn check_dim(d: Dim) -> Result<()> {
    if d < 3 {
        Err(Error::InvalidDimension(d))
    } else {
        Ok(())
    }
}

/// Jacobi polynomial `P_n^{(α,α)}` for sphere dimension `D`, normalised by
/// `P_n(1) = binom(n+α, n)`, built with the three-term recurrence.
pub fn jacobi_poly(n: usize, d: Dim) -> Result<RatPoly> {
    check_dim(d)?;
    let a = alpha(d);
    let mut prev = RatPoly::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = RatPoly::monomial(&a + q(1), 1);
    for k in 2..=n {
        let k_q = q(k);
        let c = &k_q * (&k_q + q(2) * &a);
        let b1 = (q(2) * &k_q + q(2) * &a - q(1)) * (&k_q + &a) / &c;
        let b2 = (&k_q + &a - q(1)) * (&k_q + &a) / &c;
        let next = &(&RatPoly::x() * &cur).scale(&b1) - &prev.scale(&b2);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `Q_n` with `P_n(x) = x^{n mod 2} Q_n(x²)`.
pub fn jacobi_poly_in_square(n: usize, d: Dim) -> Result<RatPoly> {
    let p = jacobi_poly(n, d)?;
    let even = if n % 2 == 1 { p.div_rem(&RatPoly::x())?.0 } else { p };
    Ok(even.even_part_in_square().expect("Gegenbauer polynomials have a parity"))
}

/// `h_0 / h_i`, telescoped from the Gamma ratios one index at a time.
pub fn norm_ratio(i: usize, d: Dim) -> Rational {
    let a = alpha(d);
    let mut r = Rational::one();
    for j in 1..=i {
        let j_q = q(j);
        let num = (q(2) * &j_q + q(2) * &a + q(1)) * &j_q * (&j_q + q(2) * &a);
        let den = (q(2) * &j_q + q(2) * &a - q(1)) * (&j_q + &a) * (&j_q + &a);
        r *= num / den;
    }
    r
}

/// `(1/h_0) ∫ x^{2j} (1−x²)^α dx = (2j−1)!! / (D(D+2)⋯(D+2j−2))`.
pub fn moment(j: usize, d: Dim) -> Rational {
    let mut r = Rational::one();
    for i in 0..j {
        r *= q(2 * i + 1) / (dim_q(d) + q(2 * i));
    }
    r
}

/// Even-in-`x` values `w_i` with `P_i(x) = x^{i mod 2} w_i(x²)`, at `x² = t`.
fn reduced_values(n: usize, d: Dim, t: &Rational) -> Vec<Rational> {
    let a = alpha(d);
    let mut w = Vec::with_capacity(n.max(2));
    w.push(Rational::one());
    if n > 1 {
        w.push(&a + q(1));
    }
    for k in 2..n {
        let k_q = q(k);
        let c = &k_q * (&k_q + q(2) * &a);
        let b1 = (q(2) * &k_q + q(2) * &a - q(1)) * (&k_q + &a) / &c;
        let b2 = (&k_q + &a - q(1)) * (&k_q + &a) / &c;
        // x·P_{k-1}: for even k this contributes t·w_{k-1}, for odd k just w_{k-1}
        let lead = if k % 2 == 0 { t * &w[k - 1] } else { w[k - 1].clone() };
        let next = b1 * lead - b2 * &w[k - 2];
        w.push(next);
    }
    w
}

/// `λ_ν^{-1} = Σ_{i<n} (h_0/h_i) P_i(x_ν)²`, evaluated at `x_ν² = xsq`.
pub fn christoffel_inverse_at_xsq(n: usize, d: Dim, xsq: &Rational) -> Rational {
    let w = reduced_values(n, d, xsq);
    let mut ratio = Rational::one();
    let a = alpha(d);
    let mut acc = Rational::zero();
    for i in 0..n {
        if i > 0 {
            let j_q = q(i);
            let num = (q(2) * &j_q + q(2) * &a + q(1)) * &j_q * (&j_q + q(2) * &a);
            let den = (q(2) * &j_q + q(2) * &a - q(1)) * (&j_q + &a) * (&j_q + &a);
            ratio *= num / den;
        }
        let sq = &w[i] * &w[i];
        let term = if i % 2 == 1 { sq * xsq } else { sq };
        acc += &ratio * term;
    }
    acc
}

/// One quadrature node. `node_sq` is exact when `exact` is set, otherwise a
/// rational approximation good to the requested precision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChristoffelNode {
    /// −1, 0 or +1.
    pub sign: i8,
    pub node_sq: Rational,
    pub lambda: Rational,
    pub exact: bool,
}

impl ChristoffelNode {
    pub fn node_f64(&self) -> f64 {
        self.sign as f64 * to_f64(&self.node_sq).sqrt()
    }
}

/// Christoffel numbers of `P_n^{(α,α)}`, nodes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChristoffelSet {
    pub degree: usize,
    pub dim: Dim,
    /// Decimal digits for numeric entries; `None` when everything is exact.
    pub precision: Option<u32>,
    pub nodes: Vec<ChristoffelNode>,
}

impl ChristoffelSet {
    pub fn lambdas(&self) -> Vec<Rational> {
        self.nodes.iter().map(|n| n.lambda.clone()).collect()
    }

    pub fn is_exact(&self) -> bool {
        self.nodes.iter().all(|n| n.exact)
    }

    pub fn sum(&self) -> Rational {
        self.nodes.iter().map(|n| &n.lambda).sum()
    }

    /// `Σ λ_ν x_ν^{2j}`.
    pub fn even_quadrature(&self, j: usize) -> Rational {
        self.nodes
            .iter()
            .map(|n| if n.sign == 0 && j > 0 { Rational::zero() } else { &n.lambda * n.node_sq.pow(j as i32) })
            .sum()
    }

    /// Increasing to the middle then decreasing, with the two middle values
    /// equal for even `n`; differences below `tol` count as equal.
    pub fn is_unimodal(&self, tol: &Rational) -> bool {
        let l = self.lambdas();
        let n = l.len();
        let cmp = |a: &Rational, b: &Rational| -> Ordering {
            let diff = b - a;
            if diff.abs() <= *tol {
                Ordering::Equal
            } else if diff.is_positive() {
                Ordering::Less
            } else {
                Ordering::Greater
            }
        };
        for i in 0..n.saturating_sub(1) {
            let expected = if n.is_multiple_of(2) {
                (i + 1).cmp(&(n / 2))
            } else if i < n / 2 {
                Ordering::Less
            } else {
                Ordering::Greater
            };
            if cmp(&l[i], &l[i + 1]) != expected {
                return false;
            }
        }
        true
    }
}

/// Builds the ascending node list from positive node squares (any order).
fn assemble_nodes(n: usize, mut positive: Vec<(Rational, Rational, bool)>, zero_lambda: Option<(Rational, bool)>) -> Vec<ChristoffelNode> {
    positive.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = Vec::with_capacity(n);
    for (sq, lam, exact) in positive.iter().rev() {
        out.push(ChristoffelNode { sign: -1, node_sq: sq.clone(), lambda: lam.clone(), exact: *exact });
    }
    if let Some((lam, exact)) = zero_lambda {
        out.push(ChristoffelNode { sign: 0, node_sq: Rational::zero(), lambda: lam, exact });
    }
    for (sq, lam, exact) in positive {
        out.push(ChristoffelNode { sign: 1, node_sq: sq, lambda: lam, exact });
    }
    out
}

/// Christoffel numbers to `precision` decimal digits. Node squares come from
/// exact isolation of `Q_n` refined by bisection; exactly rational node
/// squares are detected and kept exact.
pub fn christoffel_numbers_numeric(n: usize, d: Dim, precision: u32) -> Result<ChristoffelSet> {
    check_dim(d)?;
    if n == 0 {
        return Err(Error::InvalidDegree(0));
    }
    let qn = jacobi_poly_in_square(n, d)?;
    let width = ten_pow_neg(precision + 20);
    let mut positive = Vec::new();
    for iv in isolate_real_roots(&qn)? {
        let fine = refine_interval(&qn, &iv, &width)?;
        if !fine.hi.is_positive() {
            continue;
        }
        let exact = fine.is_exact();
        let sq = if exact { fine.lo.clone() } else { fine.midpoint() };
        let lam = christoffel_inverse_at_xsq(n, d, &sq).recip();
        positive.push((sq, lam, exact));
    }
    let zero = (n % 2 == 1).then(|| (christoffel_inverse_at_xsq(n, d, &Rational::zero()).recip(), true));
    Ok(ChristoffelSet { degree: n, dim: d, precision: Some(precision), nodes: assemble_nodes(n, positive, zero) })
}

/// Exact Christoffel set from exactly known node squares, if all are rational.
pub fn christoffel_exact(n: usize, d: Dim, positive_node_sq: &[Rational]) -> ChristoffelSet {
    let positive = positive_node_sq
        .iter()
        .map(|sq| (sq.clone(), christoffel_inverse_at_xsq(n, d, sq).recip(), true))
        .collect();
    let zero = (n % 2 == 1).then(|| (christoffel_inverse_at_xsq(n, d, &Rational::zero()).recip(), true));
    ChristoffelSet { degree: n, dim: d, precision: None, nodes: assemble_nodes(n, positive, zero) }
}

/// `a + b√c` with `c` squarefree; `c = 1` exactly when `b = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSurd {
    pub a: Rational,
    pub b: Rational,
    pub c: BigInt,
}

impl QuadSurd {
    pub fn rational(a: Rational) -> Self {
        QuadSurd { a, b: Rational::zero(), c: BigInt::one() }
    }

    /// `a + b√radicand`, pulling square factors out of the radicand.
    pub fn new(a: Rational, b: Rational, radicand: BigInt) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::InvalidArgument(format!("negative radicand {radicand}")));
        }
        if b.is_zero() || radicand.is_zero() {
            return Ok(Self::rational(a));
        }
        let (outside, inside) = split_square(&radicand)?;
        if inside.is_one() {
            return Ok(Self::rational(a + b * q(outside)));
        }
        Ok(QuadSurd { a, b: b * q(outside), c: inside })
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conjugate(&self) -> Self {
        QuadSurd { a: self.a.clone(), b: -&self.b, c: self.c.clone() }
    }

    pub fn to_f64(&self) -> f64 {
        to_f64(&self.a) + to_f64(&self.b) * to_f64(&q(self.c.clone())).sqrt()
    }

    /// Rational value within `10^{-digits}`.
    pub fn approx(&self, digits: u32) -> Rational {
        if self.is_rational() {
            return self.a.clone();
        }
        // scale the error of √c by |b|
        let extra = self.b.abs().ceil().to_integer().to_string().len() as u32 + 1;
        &self.a + &self.b * sqrt_approx(&q(self.c.clone()), digits + extra)
    }

    pub fn is_positive(&self) -> bool {
        // sign of a + b√c decided exactly by comparing a² and b²c
        let a_sign = self.a.signum();
        let b_sign = self.b.signum();
        if self.b.is_zero() {
            return self.a.is_positive();
        }
        if a_sign == b_sign || self.a.is_zero() {
            return b_sign.is_positive();
        }
        let a2 = &self.a * &self.a;
        let b2c = &self.b * &self.b * q(self.c.clone());
        if self.a.is_positive() {
            a2 > b2c
        } else {
            b2c > a2
        }
    }

    /// Product of surds over the same radicand.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.is_rational() {
            return Ok(QuadSurd { a: &self.a * &other.a, b: &self.a * &other.b, c: other.c.clone() });
        }
        if other.is_rational() {
            return other.mul(self);
        }
        if self.c != other.c {
            return Err(Error::InvalidArgument("surds over different radicands".into()));
        }
        let a = &self.a * &other.a + &self.b * &other.b * q(self.c.clone());
        let b = &self.a * &other.b + &self.b * &other.a;
        QuadSurd::new(a, b, self.c.clone())
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { "-" } else { "+" };
        write!(f, "{}{}{}*sqrt({})", self.a, sign, self.b.abs(), self.c)
    }
}

/// `n = s²·r` with `r` squarefree.
fn split_square(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if let Some(s) = exact_sqrt(n) {
        return Ok((s, BigInt::one()));
    }
    let f = FactoredInteger::factorize(n)?;
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    for (p, e) in f.factors() {
        let p = BigInt::from(p.clone());
        outside *= p.pow(e / 2);
        if e % 2 == 1 {
            inside *= p;
        }
    }
    Ok((outside, inside))
}

/// Squared positive zeros for `m ≤ 5`, outermost node first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedZeros {
    pub node_sq: Vec<QuadSurd>,
    /// `x = 0` is also a zero (odd `m`).
    pub has_zero: bool,
}

/// Closed-form zeros of `P_m^{(α,α)}`; also valid at `D = 2`.
pub fn gegenbauer_zeros_closed(m: usize, d: Dim) -> Result<ClosedZeros> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let dq = dim_q(d);
    let dz = BigInt::from(d);
    let node_sq = match m {
        1 => vec![],
        2 => vec![QuadSurd::rational(dq.recip())],
        3 => vec![QuadSurd::rational(q(3) / (&dq + q(2)))],
        4 => {
            let den = (&dq + q(2)) * (&dq + q(4));
            let rad = BigInt::from(6) * (&dz + 1u32) * (&dz + 2u32);
            let a = q(3) * (&dq + q(2)) / &den;
            let b = den.recip();
            vec![QuadSurd::new(a.clone(), b.clone(), rad.clone())?, QuadSurd::new(a, -b, rad)?]
        }
        5 => {
            let den = (&dq + q(4)) * (&dq + q(6));
            let rad = BigInt::from(10) * (&dz + 1u32) * (&dz + 4u32);
            let a = q(5) * (&dq + q(4)) / &den;
            let b = den.recip();
            vec![QuadSurd::new(a.clone(), b.clone(), rad.clone())?, QuadSurd::new(a, -b, rad)?]
        }
        _ => return Err(Error::InvalidDegree(m as u64)),
    };
    Ok(ClosedZeros { node_sq, has_zero: m % 2 == 1 })
}

/// Closed-form Christoffel numbers `λ_1..λ_m` (nodes ascending) for `m ≤ 5`.
pub fn closed_form_christoffel(m: usize, d: Dim) -> Result<Vec<QuadSurd>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let dq = dim_q(d);
    let dz = BigInt::from(d);
    let r = QuadSurd::rational;
    Ok(match m {
        1 => vec![r(q(1))],
        2 => vec![r(Rational::new(1.into(), 2.into())); 2],
        3 => {
            let outer = (&dq + q(2)) / (q(6) * &dq);
            let mid = q(2) * (&dq - q(1)) / (q(3) * &dq);
            vec![r(outer.clone()), r(mid), r(outer)]
        }
        4 => {
            let den = q(12) * &dq * (&dq + q(1));
            let a = q(3) * &dq * (&dq + q(1)) / &den;
            let b = (&dq - q(2)) / &den;
            let rad = BigInt::from(6) * (&dz + 1u32) * (&dz + 2u32);
            let outer = QuadSurd::new(a.clone(), -b.clone(), rad.clone())?;
            let inner = QuadSurd::new(a, b, rad)?;
            vec![outer.clone(), inner.clone(), inner, outer]
        }
        5 => {
            let den = q(60) * &dq * (&dq + q(1)) * (&dq + q(2));
            let a = (&dq + q(1)) * (&dq + q(4)) * (q(7) * &dq + q(2)) / &den;
            let b = (&dq - q(2)) * (q(2) * &dq + q(7)) / &den;
            let rad = BigInt::from(10) * (&dz + 1u32) * (&dz + 4u32);
            let outer = QuadSurd::new(a.clone(), -b.clone(), rad.clone())?;
            let inner = QuadSurd::new(a, b, rad)?;
            let center = r(q(8) * (&dq + q(1)) * (&dq - q(1)) / (q(15) * &dq * (&dq + q(2))));
            vec![outer.clone(), inner.clone(), center, inner, outer]
        }
        _ => return Err(Error::InvalidDegree(m as u64)),
    })
}

/// `binom(n + α, n)` as a rational.
pub fn value_at_one(n: usize, d: Dim) -> Rational {
    let a = alpha(d);
    let mut r = Rational::one();
    for k in 1..=n {
        r *= (&a + q(k)) / q(k);
    }
    r
}

/// Gcd of the denominators of `λ`, used when reporting certificates.
pub fn common_denominator(values: &[Rational]) -> BigInt {
    values.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::rat;

    /// Generalised binomial `binom(x, k)` for rational `x`.
    fn binom_q(x: &Rational, k: usize) -> Rational {
        let mut r = Rational::one();
        for i in 0..k {
            r *= (x - q(i)) / q(i + 1);
        }
        r
    }

    /// Explicit sum `Σ binom(n+α, n−ν) binom(n+α, ν) ((x−1)/2)^ν ((x+1)/2)^{n−ν}`.
    fn szego_oracle(n: usize, d: Dim) -> RatPoly {
        let a = alpha(d);
        let xm = RatPoly::new(vec![rat(-1, 2), rat(1, 2)]);
        let xp = RatPoly::new(vec![rat(1, 2), rat(1, 2)]);
        let mut acc = RatPoly::zero();
        for nu in 0..=n {
            let c = binom_q(&(q(n) + &a), n - nu) * binom_q(&(q(n) + &a), nu);
            let term = (&xm.pow(nu as u32) * &xp.pow((n - nu) as u32)).scale(&c);
            acc = &acc + &term;
        }
        acc
    }

    #[test]
    fn recurrence_matches_explicit_sum() {
        for d in [3u128, 4, 5, 7, 10, 23] {
            for n in 0..=6 {
                assert_eq!(jacobi_poly(n, d).unwrap(), szego_oracle(n, d), "n={n} D={d}");
            }
        }
    }

    #[test]
    fn degree_two_display_form() {
        for d in [3u128, 8, 23, 100] {
            let dq = dim_q(d);
            let expected = RatPoly::new(vec![-q(1), q(0), dq.clone()]).scale(&((&dq + q(1)) / q(8)));
            assert_eq!(jacobi_poly(2, d).unwrap(), expected);
        }
        assert_eq!(jacobi_poly(0, 9).unwrap(), RatPoly::one());
        assert!(jacobi_poly(2, 2).is_err());
    }

    #[test]
    fn value_at_one_and_parity() {
        for d in [3u128, 6, 11] {
            for n in 0..8 {
                let p = jacobi_poly(n, d).unwrap();
                assert_eq!(p.eval(&q(1)), value_at_one(n, d));
                assert!(p.has_parity(n % 2 == 1));
            }
        }
    }

    #[test]
    fn degree_five_dimension_four_zeros() {
        let p = jacobi_poly(5, 4).unwrap();
        for x in [q(0), rat(1, 2), rat(-1, 2)] {
            assert!(p.eval(&x).is_zero());
        }
        // ±√3/2: substitute x² = 3/4 in Q_5
        let q5 = jacobi_poly_in_square(5, 4).unwrap();
        assert!(q5.eval(&rat(3, 4)).is_zero());
    }

    #[test]
    fn norm_ratio_examples() {
        assert_eq!(norm_ratio(0, 7), q(1));
        assert_eq!(norm_ratio(1, 3), q(3));
    }

    /// `∫ f w / ∫ w` from the monomial moments.
    fn weighted_mean(p: &RatPoly, d: Dim) -> Rational {
        p.coeffs()
            .iter()
            .enumerate()
            .filter(|(i, _)| i % 2 == 0)
            .map(|(i, c)| c * moment(i / 2, d))
            .sum()
    }

    #[test]
    fn norm_ratio_against_moment_integration() {
        for d in [3u128, 4, 9, 23] {
            for i in 0..6 {
                let p = jacobi_poly(i, d).unwrap();
                let hi_over_h0 = weighted_mean(&(&p * &p), d);
                assert_eq!(norm_ratio(i, d), hi_over_h0.recip(), "i={i} D={d}");
            }
        }
    }

    #[test]
    fn moment_examples() {
        assert_eq!(moment(0, 5), q(1));
        assert_eq!(moment(1, 23), rat(1, 23));
        assert_eq!(moment(2, 4), rat(1, 8));
    }

    #[test]
    fn beta_function_moment_oracle() {
        // B(j+1/2, α+1)/B(1/2, α+1) = Π_{i<j} (i+1/2)/(i+α+3/2)
        for d in [3u128, 6, 13] {
            let a = alpha(d);
            for j in 0..6 {
                let mut r = Rational::one();
                for i in 0..j {
                    r *= (q(i) + rat(1, 2)) / (q(i) + &a + rat(3, 2));
                }
                assert_eq!(moment(j, d), r);
            }
        }
    }

    #[test]
    fn christoffel_inverse_examples() {
        assert_eq!(christoffel_inverse_at_xsq(4, 23, &rat(1, 5)), rat(184, 11));
        assert_eq!(christoffel_inverse_at_xsq(4, 241, &rat(1, 45)), rat(2651, 125));
        for d in [3u128, 10, 77] {
            assert_eq!(christoffel_inverse_at_xsq(2, d, &dim_q(d).recip()), q(2));
        }
    }

    #[test]
    fn numeric_small_cases() {
        let s = christoffel_numbers_numeric(1, 9, 30).unwrap();
        assert_eq!(s.lambdas(), vec![q(1)]);
        for d in [3u128, 8, 20] {
            let s = christoffel_numbers_numeric(3, d, 40).unwrap();
            let l = s.lambdas();
            let outer = (dim_q(d) + q(2)) / (q(6) * dim_q(d));
            let mid = q(2) * (dim_q(d) - q(1)) / (q(3) * dim_q(d));
            let tol = ten_pow_neg(38);
            assert!((&l[0] - &outer).abs() < tol);
            assert!((&l[1] - &mid).abs() < tol);
            assert!((&l[2] - &outer).abs() < tol);
        }
        let s = christoffel_numbers_numeric(5, 4, 30).unwrap();
        assert!(s.is_exact());
        assert_eq!(s.lambdas(), vec![rat(1, 12), rat(1, 4), rat(1, 3), rat(1, 4), rat(1, 12)]);
    }

    #[test]
    fn closed_forms() {
        let l = closed_form_christoffel(4, 23).unwrap();
        let vals: Vec<Rational> = l.iter().map(|s| s.to_rational().unwrap()).collect();
        assert_eq!(vals, vec![rat(11, 184), rat(81, 184), rat(81, 184), rat(11, 184)]);
        let l = closed_form_christoffel(3, 4).unwrap();
        let vals: Vec<Rational> = l.iter().map(|s| s.to_rational().unwrap()).collect();
        assert_eq!(vals, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
        let l = closed_form_christoffel(5, 4).unwrap();
        let vals: Vec<Rational> = l.iter().map(|s| s.to_rational().unwrap()).collect();
        assert_eq!(vals, vec![rat(1, 12), rat(1, 4), rat(1, 3), rat(1, 4), rat(1, 12)]);
        assert!(!closed_form_christoffel(4, 24).unwrap()[0].is_rational());
        assert!(closed_form_christoffel(6, 24).is_err());
    }

    #[test]
    fn closed_zeros() {
        assert_eq!(gegenbauer_zeros_closed(2, 17).unwrap().node_sq, vec![QuadSurd::rational(rat(1, 17))]);
        let z = gegenbauer_zeros_closed(4, 23).unwrap();
        assert_eq!(z.node_sq, vec![QuadSurd::rational(rat(1, 5)), QuadSurd::rational(rat(1, 45))]);
        let z = gegenbauer_zeros_closed(5, 124).unwrap();
        assert!(z.has_zero);
        assert_eq!(z.node_sq, vec![QuadSurd::rational(rat(1, 16)), QuadSurd::rational(rat(3, 208))]);
        // regular octagon: x² = (2 ± √2)/4
        let z = gegenbauer_zeros_closed(4, 2).unwrap();
        assert_eq!(z.node_sq[0], QuadSurd { a: rat(1, 2), b: rat(1, 4), c: 2.into() });
    }

    #[test]
    fn surd_normalisation_and_sign() {
        let s = QuadSurd::new(q(6), q(1), BigInt::from(20)).unwrap();
        assert_eq!((s.b.clone(), s.c.clone()), (q(2), BigInt::from(5)));
        assert!(s.conjugate().is_positive());
        assert!(!QuadSurd::new(q(2), q(-1), BigInt::from(5)).unwrap().is_positive());
        assert_eq!(s.to_string(), "6+2*sqrt(5)");
        let prod = s.mul(&s.conjugate()).unwrap();
        assert_eq!(prod.to_rational(), Some(q(16)));
    }
}
