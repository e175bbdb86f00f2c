//! Shared fixtures for the criterion benchmarks.

use mstiff::Dim;

/// `(m, D)` cells covering existing, screened and root-tested cases.
pub const CELLS: &[(u64, Dim)] = &[(4, 23), (5, 241), (6, 9), (8, 30), (9, 101), (20, 1000)];

/// Dimensions used for per-dimension kernels.
pub const DIMS: &[Dim] = &[9, 16, 26];
