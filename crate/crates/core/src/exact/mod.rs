//! Exact arithmetic layer shared by every other module.

pub mod factor;
pub mod newton;
pub mod poly;
pub mod rational;
pub mod roots;

pub use factor::{divisors, factorial_valuation, is_prime_u64, is_probable_prime, prev_prime, FactoredInteger, Sieve};
pub use newton::{newton_polygon, NewtonPolygon};
pub use poly::{IntPoly, RatPoly};
pub use rational::{ord_p, ord_p_int, rat, Rational, Valuation};
pub use roots::{isolate_real_roots, rational_roots, RootInterval, RootReport, RootWitness, SturmChain};

pub use num_bigint::{BigInt, BigUint};
