//! Real-root isolation with Sturm sequences and exact rational-root decisions.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::poly::{sign_of, IntPoly, RatPoly};
use crate::exact::rational::{floor, Rational};

/// Interval `(lo, hi]` holding exactly one root, or the exact root when `lo == hi`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RootInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl RootInterval {
    pub fn exact(x: Rational) -> Self {
        RootInterval { lo: x.clone(), hi: x }
    }

    pub fn is_exact(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / Rational::from_integer(BigInt::from(2))
    }

    pub fn contains(&self, x: &Rational) -> bool {
        if self.is_exact() {
            x == &self.lo
        } else {
            x > &self.lo && x <= &self.hi
        }
    }

    /// Image under `x ↦ c·x` for `c > 0`.
    pub fn scaled(&self, c: &Rational) -> Self {
        RootInterval { lo: &self.lo * c, hi: &self.hi * c }
    }
}

impl fmt::Display for RootInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_exact() {
            write!(f, "[{}]", self.lo)
        } else {
            write!(f, "({}, {}]", self.lo, self.hi)
        }
    }
}

/// Sturm sequence of a squarefree polynomial, each term stored as a primitive
/// integer polynomial (positive rescaling does not change signs).
#[derive(Debug, Clone)]
pub struct SturmChain {
    chain: Vec<IntPoly>,
}

fn positive_primitive(p: &RatPoly) -> IntPoly {
    p.clear_denominators().primitive()
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let mut a = RatPoly::from_bigints(positive_primitive(p).coeffs());
        let mut b = p.derivative();
        let mut chain = vec![positive_primitive(&a)];
        while !b.is_zero() {
            let bp = positive_primitive(&b);
            chain.push(bp.clone());
            let b_prim = RatPoly::from_bigints(bp.coeffs());
            let (_, r) = a.div_rem(&b_prim)?;
            a = b_prim;
            b = -&r;
        }
        Ok(SturmChain { chain })
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    fn variations<I: Iterator<Item = i8>>(signs: I) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs {
            if s == 0 {
                continue;
            }
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &Rational) -> usize {
        Self::variations(self.chain.iter().map(|p| p.sign_at(x)))
    }

    pub fn variations_at_pos_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| sign_of(p.coeffs().last().unwrap())))
    }

    pub fn variations_at_neg_inf(&self) -> usize {
        Self::variations(self.chain.iter().map(|p| {
            let s = sign_of(p.coeffs().last().unwrap());
            if p.degree().unwrap() % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct roots in `(a, b]`.
    pub fn count_in(&self, a: &Rational, b: &Rational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn count_real(&self) -> usize {
        self.variations_at_neg_inf() - self.variations_at_pos_inf()
    }
}

/// Power of two strictly above every root magnitude (Cauchy bound).
pub fn root_bound(p: &RatPoly) -> Rational {
    let lc = p.leading().abs();
    let mut m = Rational::zero();
    for c in &p.coeffs()[..p.coeffs().len() - 1] {
        let r = c.abs() / &lc;
        if r > m {
            m = r;
        }
    }
    let b = m + Rational::one();
    let mut pow = Rational::one();
    while pow <= b {
        pow *= Rational::from_integer(BigInt::from(2));
    }
    pow
}

fn squarefree_part(p: &RatPoly) -> RatPoly {
    let g = p.gcd(&p.derivative());
    if g.degree().unwrap_or(0) == 0 {
        p.clone()
    } else {
        p.div_rem(&g).expect("nonzero gcd").0
    }
}

/// One isolating interval per distinct real root, in ascending order.
pub fn isolate_real_roots(p: &RatPoly) -> Result<Vec<RootInterval>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sf = squarefree_part(p);
    if sf.degree() == Some(0) {
        return Ok(Vec::new());
    }
    let sturm = SturmChain::new(&sf)?;
    let sfi = sf.clear_denominators();
    let b = root_bound(&sf);
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b, None::<usize>)];
    while let Some((lo, hi, known)) = stack.pop() {
        let count = known.unwrap_or_else(|| sturm.count_in(&lo, &hi));
        if count == 0 {
            continue;
        }
        if count == 1 {
            if sfi.sign_at(&hi) == 0 {
                out.push(RootInterval::exact(hi));
            } else {
                out.push(RootInterval { lo, hi });
            }
            continue;
        }
        let mid = (&lo + &hi) / Rational::from_integer(BigInt::from(2));
        let left = sturm.count_in(&lo, &mid);
        stack.push((lo, mid.clone(), Some(left)));
        stack.push((mid, hi, Some(count - left)));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo).then(a.hi.cmp(&b.hi)));
    Ok(out)
}

/// Bisects `iv` (isolating a root of `p`) until its width is below `width`.
pub fn refine_interval(p: &RatPoly, iv: &RootInterval, width: &Rational) -> Result<RootInterval> {
    if iv.is_exact() {
        return Ok(iv.clone());
    }
    let sf = squarefree_part(p);
    let sturm = SturmChain::new(&sf)?;
    let sfi = sf.clear_denominators();
    Ok(refine_with(&sturm, &sfi, iv, width))
}

fn refine_with(sturm: &SturmChain, sfi: &IntPoly, iv: &RootInterval, width: &Rational) -> RootInterval {
    let mut cur = iv.clone();
    if sfi.sign_at(&cur.hi) == 0 {
        return RootInterval::exact(cur.hi);
    }
    let two = Rational::from_integer(BigInt::from(2));
    while !cur.is_exact() && &cur.width() >= width {
        let mid = (&cur.lo + &cur.hi) / &two;
        if sfi.sign_at(&mid) == 0 {
            return RootInterval::exact(mid);
        }
        if sturm.count_in(&cur.lo, &mid) == 1 {
            cur.hi = mid;
        } else {
            cur.lo = mid;
        }
    }
    cur
}

/// Why a monic polynomial fails to have all roots with allowed denominators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootWitness {
    /// After substituting `X = Y/L` the coefficient of `Y^index` is not integral.
    NonIntegralCoefficient { index: usize, value: Rational },
    /// Modulo `prime` the scaled polynomial has fewer linear factors than its degree.
    ModularObstruction { prime: u64, linear_factors: usize, degree: usize },
    /// Fewer real roots than the degree.
    NonRealRoots { real: usize, degree: usize },
    /// An isolating interval with no admissible rational inside.
    IrrationalRoot { interval: RootInterval },
}

impl fmt::Display for RootWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootWitness::NonIntegralCoefficient { index, value } => {
                write!(f, "scaled coefficient of degree {index} is {value}, not an integer")
            }
            RootWitness::ModularObstruction { prime, linear_factors, degree } => {
                write!(f, "mod {prime}: {linear_factors} linear factors for degree {degree}")
            }
            RootWitness::NonRealRoots { real, degree } => write!(f, "{real} real roots for degree {degree}"),
            RootWitness::IrrationalRoot { interval } => write!(f, "irrational root in {interval}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootReport {
    /// Every root, with multiplicity, ascending.
    AllRational { roots: Vec<Rational> },
    Irrational { witness: RootWitness },
}

impl RootReport {
    pub fn is_all_rational(&self) -> bool {
        matches!(self, RootReport::AllRational { .. })
    }

    pub fn roots(&self) -> Option<&[Rational]> {
        match self {
            RootReport::AllRational { roots } => Some(roots),
            RootReport::Irrational { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&RootWitness> {
        match self {
            RootReport::AllRational { .. } => None,
            RootReport::Irrational { witness } => Some(witness),
        }
    }
}

const MODULAR_PRIMES: [u64; 6] = [101, 103, 107, 109, 113, 127];
const MODULAR_MIN_DEGREE: usize = 5;

/// Linear factors, with multiplicity, of a polynomial over F_p.
pub fn count_linear_factors_mod(coeffs: &[u64], p: u64) -> usize {
    let mut c: Vec<u64> = coeffs.to_vec();
    while c.last() == Some(&0) {
        c.pop();
    }
    let mut count = 0;
    for r in 0..p {
        loop {
            if c.len() <= 1 {
                return count;
            }
            // synthetic division by (X - r)
            let n = c.len() - 1;
            let mut q = vec![0u64; n];
            let mut acc = 0u64;
            for i in (0..=n).rev() {
                acc = ((acc as u128 * r as u128 + c[i] as u128) % p as u128) as u64;
                if i > 0 {
                    q[i - 1] = acc;
                }
            }
            if acc != 0 {
                break;
            }
            c = q;
            count += 1;
        }
    }
    count
}

/// Decides whether every root of the monic `p` is `k/q` with `q` in `allowed`.
pub fn rational_roots(p: &RatPoly, allowed: &[u64]) -> Result<RootReport> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if !p.is_monic() {
        return Err(Error::NotMonic);
    }
    if allowed.is_empty() || allowed.contains(&0) {
        return Err(Error::InvalidArgument("allowed denominators must be positive".into()));
    }
    let deg = p.degree().unwrap();
    if deg == 0 {
        return Ok(RootReport::AllRational { roots: Vec::new() });
    }
    let l = allowed.iter().fold(BigInt::one(), |acc, &q| acc.lcm(&BigInt::from(q)));
    let lr = Rational::from_integer(l.clone());
    // T(Y) = L^deg p(Y/L) is monic; all roots in (1/L)Z forces T into Z[Y]
    let mut scaled = Vec::with_capacity(deg + 1);
    let mut pow = Rational::one();
    for i in (0..=deg).rev() {
        let c = p.coeff(i) * &pow;
        if !c.is_integer() {
            return Ok(RootReport::Irrational { witness: RootWitness::NonIntegralCoefficient { index: i, value: c } });
        }
        scaled.push(c.to_integer());
        pow *= &lr;
    }
    scaled.reverse();
    let t = IntPoly::new(scaled);

    if deg >= MODULAR_MIN_DEGREE {
        for &prime in &MODULAR_PRIMES {
            let lin = count_linear_factors_mod(&t.reduce_mod(prime), prime);
            if lin < deg {
                return Ok(RootReport::Irrational {
                    witness: RootWitness::ModularObstruction { prime, linear_factors: lin, degree: deg },
                });
            }
        }
    }

    let tr = t.to_rat();
    let sf = squarefree_part(&tr);
    let sf_deg = sf.degree().unwrap();
    let sturm = SturmChain::new(&sf)?;
    let real = sturm.count_real();
    if real < sf_deg {
        return Ok(RootReport::Irrational { witness: RootWitness::NonRealRoots { real, degree: sf_deg } });
    }
    let sfi = sf.clear_denominators();
    let intervals = isolate_real_roots(&sf)?;
    let mut int_roots: Vec<BigInt> = Vec::with_capacity(intervals.len());
    let one = Rational::one();
    let inv_l = lr.recip();
    for iv in &intervals {
        let fine = refine_with(&sturm, &sfi, iv, &one);
        let root = if fine.is_exact() {
            fine.lo.is_integer().then(|| fine.lo.to_integer())
        } else {
            // (lo, hi] with hi − lo < 1 holds at most one integer
            let cand = floor(&fine.hi);
            (Rational::from_integer(cand.clone()) > fine.lo && t.eval(&cand).is_zero()).then_some(cand)
        };
        match root {
            Some(r) => int_roots.push(r),
            None => {
                return Ok(RootReport::Irrational {
                    witness: RootWitness::IrrationalRoot { interval: fine.scaled(&inv_l) },
                })
            }
        }
    }
    // recover multiplicities by exact division of T
    let mut rest = tr;
    let mut roots = Vec::with_capacity(deg);
    for r in &int_roots {
        let lin = RatPoly::new(vec![-Rational::from_integer(r.clone()), Rational::one()]);
        loop {
            let (q, rem) = rest.div_rem(&lin)?;
            if !rem.is_zero() {
                break;
            }
            rest = q;
            roots.push(Rational::new(r.clone(), l.clone()));
        }
    }
    debug_assert_eq!(roots.len(), deg);
    for r in &roots {
        debug_assert!(p.eval(r).is_zero());
    }
    roots.sort();
    Ok(RootReport::AllRational { roots })
}

/// Convenience for diagnostics: approximate root values as `f64`.
pub fn approx_roots(intervals: &[RootInterval]) -> Vec<f64> {
    intervals.iter().map(|iv| crate::exact::rational::to_f64(&iv.midpoint())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rational::{rat, sqrt_approx};

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn isolates_table_quadratic() {
        let p = RatPoly::from_ints([225, -50, 1]);
        let iv = isolate_real_roots(&p).unwrap();
        assert_eq!(iv.len(), 2);
        assert!(iv[0].contains(&q(5)));
        assert!(iv[1].contains(&q(45)));
    }

    #[test]
    fn isolates_linear() {
        let iv = isolate_real_roots(&RatPoly::from_ints([-5, 1])).unwrap();
        assert_eq!(iv.len(), 1);
        assert!(iv[0].contains(&q(5)));
    }

    #[test]
    fn isolates_surds_and_refines() {
        let p = RatPoly::from_ints([16, -12, 1]);
        let iv = isolate_real_roots(&p).unwrap();
        assert_eq!(iv.len(), 2);
        // oracle: 6 ± 2√5 via the quadratic formula
        let s = sqrt_approx(&q(20), 30);
        let lo_root = q(6) - &s;
        let hi_root = q(6) + &s;
        let w = rat(1, 1_000_000);
        let a = refine_interval(&p, &iv[0], &w).unwrap();
        let b = refine_interval(&p, &iv[1], &w).unwrap();
        assert!((a.midpoint() - lo_root).abs() < rat(1, 100_000));
        assert!((b.midpoint() - hi_root).abs() < rat(1, 100_000));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(isolate_real_roots(&RatPoly::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn rational_roots_examples() {
        let r = rational_roots(&RatPoly::from_ints([225, -50, 1]), &[1]).unwrap();
        assert_eq!(r.roots().unwrap(), &[q(5), q(45)]);
        let r = rational_roots(&RatPoly::from_ints([64, -20, 1]), &[1, 3]).unwrap();
        assert_eq!(r.roots().unwrap(), &[q(4), q(16)]);
        let r = rational_roots(&RatPoly::from_ints([16, -12, 1]), &[1]).unwrap();
        match r.witness().unwrap() {
            RootWitness::IrrationalRoot { interval } => {
                assert!(interval.width() < q(1));
                assert!(interval.lo < q(2) && interval.hi > q(1));
            }
            w => panic!("unexpected witness {w:?}"),
        }
    }

    #[test]
    fn thirds_are_found() {
        // (X - 16)(X - 208/3)
        let p = RatPoly::from_roots(&[q(16), rat(208, 3)]);
        let r = rational_roots(&p, &[1, 3]).unwrap();
        assert_eq!(r.roots().unwrap(), &[q(16), rat(208, 3)]);
        let r = rational_roots(&p, &[1]).unwrap();
        assert!(matches!(r.witness(), Some(RootWitness::NonIntegralCoefficient { .. })));
    }

    #[test]
    fn multiplicities_are_kept() {
        let p = RatPoly::from_roots(&[q(2), q(2), q(-3)]);
        let r = rational_roots(&p, &[1]).unwrap();
        assert_eq!(r.roots().unwrap(), &[q(-3), q(2), q(2)]);
    }

    #[test]
    fn complex_roots_reported() {
        let r = rational_roots(&RatPoly::from_ints([1, 0, 1]), &[1]).unwrap();
        assert!(matches!(r.witness(), Some(RootWitness::NonRealRoots { real: 0, degree: 2 })));
    }

    #[test]
    fn non_monic_rejected() {
        assert_eq!(rational_roots(&RatPoly::from_ints([1, 2]), &[1]), Err(Error::NotMonic));
    }

    #[test]
    fn modular_count_splitting() {
        // (X-1)(X-2)^2 mod 5 has three linear factors; X^2+1 mod 3 has none
        assert_eq!(count_linear_factors_mod(&[1, 4, 0, 1], 5), 1);
        let coeffs: Vec<u64> = RatPoly::from_roots(&[q(1), q(2), q(2)]).clear_denominators().reduce_mod(5);
        assert_eq!(count_linear_factors_mod(&coeffs, 5), 3);
        assert_eq!(count_linear_factors_mod(&[1, 0, 1], 3), 0);
    }

    #[test]
    fn high_degree_split_and_nonsplit() {
        let roots: Vec<Rational> = [1, 4, 9, 16, 25, 36, 49].iter().map(|&r| q(r)).collect();
        let p = RatPoly::from_roots(&roots);
        assert_eq!(rational_roots(&p, &[1]).unwrap().roots().unwrap(), roots.as_slice());
        let perturbed = &p + &RatPoly::one();
        assert!(!rational_roots(&perturbed, &[1]).unwrap().is_all_rational());
    }
}
