//! Special functions used by the Fourier coefficient formula.

mod bessel;
mod gamma;

pub use bessel::{bessel_k, bessel_k_complex_order};
pub use gamma::gamma_complex;

use statrs::function::gamma::gamma as gamma_real;

/// Surface area of the unit sphere `S^{n−1} ⊂ R^n`, `2π^{n/2}/Γ(n/2)`.
pub fn sphere_area(n: usize) -> f64 {
    let h = n as f64 / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma_real(h)
}

pub fn gamma(x: f64) -> f64 {
    gamma_real(x)
}
