//! Pell equations behind the m = 4 and m = 5 dimension streams, and a bounded
//! integer-point search on `A y² − B x³ = 2` for 6 ≤ m ≤ 11.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::rational::exact_sqrt;
use crate::Dim;

/// Default `|x|` bound for [`bounded_mordell_search`].
pub const DEFAULT_X_BOUND: u64 = 1_000_000;

/// Exact square root when `n` is a perfect square.
pub fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    exact_sqrt(n)
}

/// `a + b√d` in `Z[√d]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    pub a: BigInt,
    pub b: BigInt,
    pub d: u64,
}

impl QuadInt {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, d: u64) -> Self {
        QuadInt { a: a.into(), b: b.into(), d }
    }

    pub fn norm(&self) -> BigInt {
        &self.a * &self.a - BigInt::from(self.d) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        QuadInt { a: self.a.clone(), b: -&self.b, d: self.d }
    }

    pub fn neg(&self) -> Self {
        QuadInt { a: -&self.a, b: -&self.b, d: self.d }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let d = BigInt::from(self.d);
        QuadInt { a: &self.a * &o.a + d * &self.b * &o.b, b: &self.a * &o.b + &self.b * &o.a, d: self.d }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = QuadInt::new(1, 0, self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// `self / other` when it lies in `Z[√d]`.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let n = other.norm();
        if n.is_zero() {
            return None;
        }
        let p = self.mul(&other.conjugate());
        let (qa, ra) = p.a.div_rem(&n);
        let (qb, rb) = p.b.div_rem(&n);
        (ra.is_zero() && rb.is_zero()).then_some(QuadInt { a: qa, b: qb, d: self.d })
    }

    /// Whether `self = u · other` for a unit `u`.
    pub fn is_associate(&self, other: &Self) -> bool {
        self.norm().abs() == other.norm().abs() && self.div_exact(other).is_some()
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::INFINITY) + self.b.to_f64().unwrap_or(f64::INFINITY) * (self.d as f64).sqrt()
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let sign = if self.b.is_negative() { '-' } else { '+' };
        let mag = self.b.abs();
        if mag.is_one() {
            write!(f, "{}{}sqrt({})", self.a, sign, self.d)
        } else {
            write!(f, "{}{}{}*sqrt({})", self.a, sign, mag, self.d)
        }
    }
}

/// The fundamental unit `a + b√d > 1` of `Z[√d]` with its norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnitElement {
    pub a: BigInt,
    pub b: BigInt,
    pub d: u64,
    pub norm: i8,
}

impl UnitElement {
    pub fn as_quad(&self) -> QuadInt {
        QuadInt { a: self.a.clone(), b: self.b.clone(), d: self.d }
    }

    /// The smallest unit of norm +1 greater than 1.
    pub fn positive_norm_unit(&self) -> QuadInt {
        let u = self.as_quad();
        if self.norm == 1 {
            u
        } else {
            u.mul(&u)
        }
    }
}

fn check_nonsquare(d: u64) -> Result<()> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    if is_perfect_square(&BigInt::from(d)).is_some() {
        return Err(Error::SquareDiscriminant(d.to_string()));
    }
    Ok(())
}

/// Fundamental unit from the continued fraction of `√d`.
pub fn fundamental_unit(d: u64) -> Result<UnitElement> {
    check_nonsquare(d)?;
    let a0 = (d as f64).sqrt() as u64;
    let a0 = (a0.saturating_sub(1)..=a0 + 1).filter(|x| x * x <= d).max().unwrap();
    let (mut m, mut den, mut a) = (0u64, 1u64, a0);
    let (mut p1, mut p2) = (BigInt::from(a0), BigInt::one());
    let (mut q1, mut q2) = (BigInt::one(), BigInt::zero());
    let big_d = BigInt::from(d);
    loop {
        let norm = &p1 * &p1 - &big_d * &q1 * &q1;
        if norm.is_one() || norm == BigInt::from(-1) {
            return Ok(UnitElement { a: p1, b: q1, d, norm: if norm.is_one() { 1 } else { -1 } });
        }
        m = den * a - m;
        den = (d - m * m) / den;
        a = (a0 + m) / den;
        let p = BigInt::from(a) * &p1 + &p2;
        let q = BigInt::from(a) * &q1 + &q2;
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
    }
}

/// A solution of `x² − d y² = m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub d: u64,
    pub m: i64,
}

impl PellSolution {
    pub fn as_quad(&self) -> QuadInt {
        QuadInt { a: self.x.clone(), b: self.y.clone(), d: self.d }
    }

    pub fn holds(&self) -> bool {
        self.as_quad().norm() == BigInt::from(self.m)
    }
}

impl fmt::Display for PellSolution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_quad())
    }
}

/// One solution of `x² − d y² = m` per association class.
///
/// Every solution has the form `α · u_0^k` with `u_0` the smallest unit of
/// norm +1 and `α` found by brute force inside an explicit box. The box is
/// the union of the classical bound in terms of the fundamental unit and
/// Nagell's bound in terms of `u_0`.
pub fn pell_representatives(d: u64, m: i64) -> Result<Vec<PellSolution>> {
    check_nonsquare(d)?;
    if m == 0 {
        return Err(Error::InvalidArgument("m must be nonzero".into()));
    }
    let unit = fundamental_unit(d)?;
    let u0 = unit.positive_norm_unit();
    let u1 = unit.as_quad().to_f64();
    let am = m.unsigned_abs() as f64;
    let sd = (d as f64).sqrt();
    let x1 = u0.a.to_f64().unwrap_or(f64::INFINITY);
    let y1 = u0.b.to_f64().unwrap_or(f64::INFINITY);
    let classical = (u1 + am) / (2.0 * sd);
    let nagell = if m > 0 { y1 * am.sqrt() / (2.0 * (x1 + 1.0)).sqrt() } else { y1 * am.sqrt() / (2.0 * (x1 - 1.0)).sqrt() };
    let y_bound = classical.max(nagell).ceil();
    if !y_bound.is_finite() || y_bound > 1e9 {
        return Err(Error::InvalidArgument(format!("search box for d = {d}, m = {m} is too large")));
    }
    let mut found: Vec<QuadInt> = Vec::new();
    let big_d = BigInt::from(d);
    for y in 0..=y_bound as u64 {
        let x2 = BigInt::from(m) + &big_d * BigInt::from(y) * BigInt::from(y);
        if let Some(x) = is_perfect_square(&x2) {
            for sx in [x.clone(), -x.clone()] {
                for sy in [BigInt::from(y), -BigInt::from(y)] {
                    found.push(QuadInt { a: sx.clone(), b: sy, d });
                }
            }
        }
    }
    found.sort_by_key(|p| (p.b.abs(), -&p.a, -&p.b));
    found.dedup();
    let mut reps: Vec<QuadInt> = Vec::new();
    for c in found {
        if !reps.iter().any(|r| r.is_associate(&c)) {
            reps.push(c);
        }
    }
    let mut out: Vec<PellSolution> = reps.into_iter().map(|q| PellSolution { x: q.a, y: q.b, d, m }).collect();
    out.sort_by(|p, q| (&p.x, -&p.y).cmp(&(&q.x, -&q.y)));
    Ok(out)
}

/// Positive `x` over every orbit `±ρ u_0^k`, ascending and bounded by `x_max`.
fn pell_x_values(d: u64, m: i64, x_max: &BigInt) -> Result<Vec<BigInt>> {
    let reps = pell_representatives(d, m)?;
    let u0 = fundamental_unit(d)?.positive_norm_unit();
    let mut xs = Vec::new();
    for rep in &reps {
        for start in [rep.as_quad(), rep.as_quad().conjugate()] {
            let start = if start.a.is_negative() { start.neg() } else { start };
            let mut cur = start;
            // the real part grows geometrically along the orbit after at most one step
            let mut small_steps = 0;
            loop {
                if cur.a.is_positive() && cur.a <= *x_max {
                    xs.push(cur.a.clone());
                }
                if cur.a > *x_max {
                    small_steps += 1;
                    if small_steps > 2 {
                        break;
                    }
                }
                cur = cur.mul(&u0);
            }
        }
    }
    xs.sort();
    xs.dedup();
    Ok(xs)
}

/// Sphere dimensions `D >= 3` with `6(D+1)(D+2)` a perfect square, up to `max_d`.
pub fn dims_for_m4_up_to(max_d: Dim) -> Result<Vec<Dim>> {
    // 6(D+1)(D+2) = y² ⇔ (6D+9)² − 6y² = 9
    let x_max = BigInt::from(max_d) * 6 + 9;
    let mut out = Vec::new();
    for x in pell_x_values(6, 9, &x_max)? {
        let t: BigInt = x - 9;
        if t.is_positive() && (&t % BigInt::from(6)).is_zero() {
            let dim = (t / BigInt::from(6)).to_u128().unwrap();
            if dim >= 3 && dim <= max_d {
                out.push(dim);
            }
        }
    }
    Ok(out)
}

/// Sphere dimensions `D >= 3` with `10(D+1)(D+4)` a perfect square, up to `max_d`.
pub fn dims_for_m5_up_to(max_d: Dim) -> Result<Vec<Dim>> {
    // 10(D+1)(D+4) = y² ⇔ (2D+5)² − 10(y/5)² = 9
    let x_max = BigInt::from(max_d) * 2 + 5;
    let mut out = Vec::new();
    for x in pell_x_values(10, 9, &x_max)? {
        let t: BigInt = x - 5;
        if t.is_positive() && t.is_even() {
            let dim = (t / BigInt::from(2)).to_u128().unwrap();
            if dim >= 3 && dim <= max_d {
                out.push(dim);
            }
        }
    }
    Ok(out)
}

fn first_count(f: fn(Dim) -> Result<Vec<Dim>>, count: usize) -> Result<Vec<Dim>> {
    if count == 0 {
        return Err(Error::InvalidArgument("count must be at least 1".into()));
    }
    let mut max_d: Dim = 1000;
    loop {
        let v = f(max_d)?;
        if v.len() >= count {
            return Ok(v[..count].to_vec());
        }
        max_d = max_d.checked_mul(100).ok_or_else(|| Error::InvalidArgument("count too large".into()))?;
    }
}

/// The first `count` dimensions admitting a 4-stiff configuration, excluding D = 2.
pub fn dims_for_m4(count: usize) -> Result<Vec<Dim>> {
    first_count(dims_for_m4_up_to, count)
}

/// The first `count` dimensions admitting a 5-stiff configuration, excluding D = 2.
pub fn dims_for_m5(count: usize) -> Result<Vec<Dim>> {
    first_count(dims_for_m5_up_to, count)
}

/// Square-free products of primes up to 7.
pub fn mordell_a_values() -> Vec<u64> {
    let mut v: Vec<u64> = (0..16u32)
        .map(|mask| [2u64, 3, 5, 7].iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| p).product())
        .collect();
    v.sort();
    v
}

/// Products of primes up to 7 with exponents at most 2.
pub fn mordell_b_values() -> Vec<u64> {
    let mut v = Vec::with_capacity(81);
    for e2 in 0..3 {
        for e3 in 0..3 {
            for e5 in 0..3 {
                for e7 in 0..3 {
                    v.push(2u64.pow(e2) * 3u64.pow(e3) * 5u64.pow(e5) * 7u64.pow(e7));
                }
            }
        }
    }
    v.sort();
    v
}

/// All `(A, B)` pairs for degree `m` in 6..=11, sorted.
///
/// For m = 11 the prime 11 can divide `A` or `B`, so the list is incomplete.
pub fn mordell_ab_candidates(m: u64) -> Result<Vec<(u64, u64)>> {
    if !(6..=11).contains(&m) {
        return Err(Error::InvalidDegree(m));
    }
    let bs = mordell_b_values();
    Ok(mordell_a_values().into_iter().flat_map(|a| bs.iter().map(move |&b| (a, b))).collect())
}

fn isqrt_u128(v: u128) -> Option<u128> {
    let mut r = (v as f64).sqrt() as u128;
    while r * r > v {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= v {
        r += 1;
    }
    (r * r == v).then_some(r)
}

/// Quadratic residues mod 64, as a bit mask.
const QR64: u64 = {
    let mut mask = 0u64;
    let mut i = 0;
    while i < 64 {
        mask |= 1 << ((i * i) % 64);
        i += 1;
    }
    mask
};

/// Integer solutions of `A y² − B x³ = 2` with `|x| <= x_bound`, sorted.
pub fn solve_mordell(a: u64, b: u64, x_bound: u64) -> Vec<(i128, i128)> {
    let mut out = Vec::new();
    let (a, b) = (a as u128, b as u128);
    let mut push = |x: i128, w: u128| {
        if let Some(y) = isqrt_u128(w) {
            out.push((x, -(y as i128)));
            if y != 0 {
                out.push((x, y as i128));
            }
        }
    };
    // negative x needs B|x|³ <= 2
    if x_bound >= 1 && b <= 2 {
        let v = 2 - b;
        if v % a == 0 {
            push(-1, v / a);
        }
    }
    for x in 0..=x_bound as u128 {
        let v = b * x * x * x + 2;
        if v % a != 0 {
            continue;
        }
        let w = v / a;
        if QR64 >> (w % 64) & 1 == 0 {
            continue;
        }
        push(x as i128, w);
    }
    out.sort();
    out
}

/// Solutions of one `(A, B)` equation and the dimensions they suggest for degree m.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MordellCandidate {
    pub a: u64,
    pub b: u64,
    pub m: u64,
    pub x_bound: u64,
    pub solutions: Vec<(i128, i128)>,
    pub derived_dims: Vec<Dim>,
    /// Always `false`: solutions with `|x|` beyond the bound are not excluded.
    pub exhaustive: bool,
}

/// Candidate sphere dimensions from `A y²` for degree m.
///
/// With `h + 2(n−2) = A y²`, the sphere dimension is `A y² − 4n + 4` (even m)
/// or `A y² − 4n + 2` (odd m). The displayed formula `A y² − 4n + 3 ± 1` is
/// also read as the bd parameter, so the union `A y² − 4n + {2, 4, 6}` is
/// returned, restricted to `D >= 3`.
pub fn derived_dims(ay2: u128, m: u64) -> Vec<Dim> {
    let n = (m / 2) as u128;
    let mut v: Vec<Dim> = [2u128, 4, 6]
        .iter()
        .filter_map(|c| (ay2 + c).checked_sub(4 * n))
        .filter(|&d| d >= 3)
        .collect();
    v.dedup();
    v
}

pub fn bounded_mordell_search(a: u64, b: u64, m: u64, x_bound: u64) -> Result<MordellCandidate> {
    if x_bound == 0 {
        return Err(Error::InvalidArgument("x_bound must be at least 1".into()));
    }
    if a == 0 || b == 0 {
        return Err(Error::InvalidArgument("A and B must be positive".into()));
    }
    let solutions = solve_mordell(a, b, x_bound);
    Ok(candidate_from(a, b, m, x_bound, solutions))
}

fn candidate_from(a: u64, b: u64, m: u64, x_bound: u64, solutions: Vec<(i128, i128)>) -> MordellCandidate {
    let mut dims: Vec<Dim> = solutions
        .iter()
        .flat_map(|&(_, y)| derived_dims(a as u128 * (y * y) as u128, m))
        .collect();
    dims.sort();
    dims.dedup();
    MordellCandidate { a, b, m, x_bound, solutions, derived_dims: dims, exhaustive: false }
}

/// Runs every `(A, B)` pair once and derives candidates for each degree in `ms`.
/// Output is sorted by `(m, A, B)` and independent of thread count.
pub fn mordell_screen(ms: &[u64], x_bound: u64) -> Result<Vec<MordellCandidate>> {
    for &m in ms {
        mordell_ab_candidates(m)?;
    }
    if x_bound == 0 {
        return Err(Error::InvalidArgument("x_bound must be at least 1".into()));
    }
    let pairs = mordell_ab_candidates(6)?;
    let solved: Vec<((u64, u64), Vec<(i128, i128)>)> =
        pairs.par_iter().map(|&(a, b)| ((a, b), solve_mordell(a, b, x_bound))).collect();
    let mut out = Vec::new();
    for &m in ms {
        for ((a, b), sols) in &solved {
            out.push(candidate_from(*a, *b, m, x_bound, sols.clone()));
        }
    }
    out.sort_by_key(|c| (c.m, c.a, c.b));
    Ok(out)
}
