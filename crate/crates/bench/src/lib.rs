//! Shared fixtures for the benchmarks.

use vahlen_core::modular::{enumerate_cosets, CosetTable, EnumerationBound, GroupParams};
use vahlen_core::{Multivector, VectorPoint};

/// Coset table of `Γ_p[N]` from words of length at most `l`.
pub fn table(n: usize, p: usize, level: u64, l: usize) -> CosetTable {
    let params = GroupParams::new(n, p, level).expect("valid parameters");
    enumerate_cosets(&params, &EnumerationBound::words(l)).expect("enumeration")
}

/// Deterministic dense multivector with coefficients in `(−1, 1)`.
pub fn dense(n: usize, seed: u64) -> Multivector {
    let mut state = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let coeffs = (0..1usize << n)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
        })
        .collect();
    Multivector::from_coeffs(n, coeffs).expect("coefficient count")
}

pub fn point(c: &[f64]) -> VectorPoint {
    VectorPoint::new(c.to_vec())
}
