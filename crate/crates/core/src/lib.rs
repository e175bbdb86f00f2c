//! Exact decision procedures for m-stiff configurations on the sphere S^{D-1}.
//!
//! A finite set on S^{D-1} is m-stiff when it is a spherical (2m-1)-design
//! supported on m parallel hyperplanes. Existence is decided through the zeros
//! of the Gegenbauer polynomial of degree m: every Christoffel number must be
//! a positive rational, which happens exactly when the Bannai–Damerell
//! polynomial `S_m(X)` splits over Q with controlled denominators.
//!
//! The crate is organised bottom-up:
//!
//! * [`exact`]: rationals, polynomials, Sturm isolation, rational roots,
//!   divisor enumeration, p-adic valuations and Newton polygons.
//! * [`gegenbauer`]: Jacobi polynomials with α = β = (D−3)/2, norms,
//!   moments and Christoffel numbers (exact and high precision).
//! * [`stiffness`]: `S_m(X)`, its coefficients and the existence decision
//!   with checkable certificates.
//! * [`diophantine`]: Pell machinery for m = 4, 5 and the bounded search on
//!   `A y² − B x³ = 2` used to screen 6 ≤ m ≤ 10.
//! * [`search`]: non-existence thresholds, divisor pruning and the
//!   per-dimension / per-degree classification sweeps.

pub mod diophantine;
pub mod error;
pub mod exact;
pub mod gegenbauer;
pub mod search;
pub mod stiffness;

pub use error::{Error, Result};
pub use exact::{FactoredInteger, NewtonPolygon, RatPoly, Rational, RootInterval, RootReport};
pub use gegenbauer::{ChristoffelSet, QuadSurd};
pub use search::{BoundResult, Budget, CandidateSet, DimensionClassification, Parity};
pub use stiffness::{BdParams, StiffVerdict, Witness};

/// Sphere dimension D (configurations live in S^{D-1}).
///
/// Candidates produced by the elliptic screening can exceed `u64`, so the
/// dimension is carried as `u128` throughout.
pub type Dim = u128;
