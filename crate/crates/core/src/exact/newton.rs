//! Newton polygons of integer polynomials at a prime.
//!
//! For `F(x) = a_0 x^k + a_1 x^{k-1} + ... + a_k` the plotted points are
//! `(0, 0)` followed by `(i + 1, ord_p a_i)`; zero coefficients are omitted.
//! If every root of `F` is an integer then every slope is an integer.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::factor::is_prime_u64;
use crate::exact::rational::{valuation_unchecked, Rational, Valuation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    pub prime: u64,
    /// Every plotted point, including those with infinite valuation.
    pub points: Vec<(i64, Valuation)>,
    /// Lower hull vertices, left to right, without collinear interior points.
    pub vertices: Vec<(i64, i64)>,
    /// Slope of each hull edge; strictly increasing.
    pub slopes: Vec<Rational>,
}

impl NewtonPolygon {
    pub fn all_slopes_integer(&self) -> bool {
        self.slopes.iter().all(|s| s.is_integer())
    }

    pub fn non_integer_slopes(&self) -> Vec<Rational> {
        self.slopes.iter().filter(|s| !s.is_integer()).cloned().collect()
    }

    /// The hull edge `(from, to)` carrying the first non-integer slope.
    pub fn first_non_integer_edge(&self) -> Option<((i64, i64), (i64, i64), Rational)> {
        self.slopes
            .iter()
            .position(|s| !s.is_integer())
            .map(|i| (self.vertices[i], self.vertices[i + 1], self.slopes[i].clone()))
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Builds the polygon from coefficients listed leading term first.
pub fn newton_polygon(coeffs: &[BigInt], p: u64) -> Result<NewtonPolygon> {
    if coeffs.is_empty() {
        return Err(Error::EmptyCoefficients);
    }
    if coeffs[0].is_zero() {
        return Err(Error::ZeroLeadingCoefficient);
    }
    if !is_prime_u64(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    let mut points = vec![(0i64, Valuation::Finite(0))];
    for (i, a) in coeffs.iter().enumerate() {
        points.push((i as i64 + 1, valuation_unchecked(a, p)));
    }
    let finite: Vec<(i64, i64)> = points.iter().filter_map(|(x, v)| v.finite().map(|y| (*x, y))).collect();
    // Andrew's monotone chain, lower half; `<= 0` drops collinear points
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &finite {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }
    let slopes = hull
        .windows(2)
        .map(|w| Rational::new(BigInt::from(w[1].1 - w[0].1), BigInt::from(w[1].0 - w[0].0)))
        .collect();
    Ok(NewtonPolygon { prime: p, points, vertices: hull, slopes })
}

/// Same as [`newton_polygon`] with small integer coefficients.
pub fn newton_polygon_i64(coeffs: &[i64], p: u64) -> Result<NewtonPolygon> {
    let c: Vec<BigInt> = coeffs.iter().map(|&a| BigInt::from(a)).collect();
    newton_polygon(&c, p)
}

/// Monic integer polynomial with the given integer roots, leading term first.
pub fn descending_from_roots(roots: &[i64]) -> Vec<BigInt> {
    let mut c = vec![BigInt::one()];
    for &r in roots {
        let mut next = vec![BigInt::zero(); c.len() + 1];
        for (i, a) in c.iter().enumerate() {
            next[i] += a;
            next[i + 1] -= a * BigInt::from(r);
        }
        c = next;
    }
    c
}
