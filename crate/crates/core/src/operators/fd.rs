//! Central-difference realizations of `D`, `D^k`, `M_k`, `Δ_k` and `W_k`.

use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, VectorPoint};
use crate::error::{Error, Result};

/// A Clifford-valued function on `R^n`.
pub type Field<'a> = dyn Fn(&VectorPoint) -> Result<Multivector> + Sync + 'a;

/// Step sizes and the nominal tolerance of the difference operators.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdConfig {
    /// Step of first-order operators.
    pub h: f64,
    /// Step of second-order stencils (`Δ`, `Δ_k`, `W_k`).
    pub h_second: f64,
    /// Step of each level of nested `D^k`.
    pub h_nested: f64,
    pub tolerance: f64,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            h: 1e-4,
            h_second: 1e-3,
            h_nested: 1e-3,
            tolerance: 1e-6,
        }
    }
}

impl FdConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, h) in [("h", self.h), ("h_second", self.h_second), ("h_nested", self.h_nested)] {
            if !(h > 0.0) || !h.is_finite() {
                return Err(Error::InvalidParameters(format!("{name} must be positive, got {h}")));
            }
        }
        if !(self.tolerance > f64::EPSILON / self.h) {
            return Err(Error::InvalidParameters(format!(
                "tolerance {} is below the roundoff floor eps/h = {:e}",
                self.tolerance,
                f64::EPSILON / self.h
            )));
        }
        Ok(())
    }
}

fn check_dim(f_dim: usize, x: &VectorPoint) -> Result<()> {
    if f_dim != x.dim() {
        return Err(Error::DimensionMismatch {
            left: f_dim,
            right: x.dim(),
        });
    }
    Ok(())
}

/// The stencil reaches `x_n − reach`; it must stay in the upper half-space.
fn check_half_space(x: &VectorPoint, reach: f64) -> Result<()> {
    if !(x.last() - reach > 0.0) {
        return Err(Error::Domain(format!(
            "stencil of reach {reach:e} at x_n = {} leaves the upper half-space",
            x.last()
        )));
    }
    Ok(())
}

/// `∂_j f(x)` by central differences, `j` 0-based.
pub fn partial(f: &Field, x: &VectorPoint, j: usize, h: f64) -> Result<Multivector> {
    let fp = f(&x.shifted(j, h))?;
    let fm = f(&x.shifted(j, -h))?;
    Ok((&fp - &fm).scale(0.5 / h))
}

fn dirac_with_step(f: &Field, x: &VectorPoint, h: f64, right: bool) -> Result<Multivector> {
    let n = x.dim();
    let mut out = Multivector::zero(n);
    for j in 0..n {
        let d = partial(f, x, j, h)?;
        check_dim(d.dim(), x)?;
        let e = Multivector::e(n, j + 1);
        out += &if right { &d * &e } else { &e * &d };
    }
    Ok(out)
}

/// `Df = Σ e_j ∂_j f`.
pub fn apply_dirac(f: &Field, x: &VectorPoint, cfg: &FdConfig) -> Result<Multivector> {
    dirac_with_step(f, x, cfg.h, false)
}

/// `fD = Σ ∂_j f e_j`.
pub fn apply_dirac_right(f: &Field, x: &VectorPoint, cfg: &FdConfig) -> Result<Multivector> {
    dirac_with_step(f, x, cfg.h, true)
}

/// `D^k f` by nesting first-order stencils of step `h_nested`, `1 ≤ k ≤ 3`.
pub fn apply_dirac_power(f: &Field, x: &VectorPoint, k: usize, cfg: &FdConfig) -> Result<Multivector> {
    if !(1..=3).contains(&k) {
        return Err(Error::Unsupported(format!("D^k is provided for 1 <= k <= 3, got k = {k}")));
    }
    if k == 1 {
        return dirac_with_step(f, x, cfg.h, false);
    }
    apply_dirac_power_step(f, x, k, cfg.h_nested)
}

fn apply_dirac_power_step(f: &Field, x: &VectorPoint, k: usize, h: f64) -> Result<Multivector> {
    if k == 1 {
        return dirac_with_step(f, x, h, false);
    }
    let inner = move |z: &VectorPoint| apply_dirac_power_step(f, z, k - 1, h);
    dirac_with_step(&inner, x, h, false)
}

/// `M_k f = Df − k Q*(f)/x_n`.
///
/// With `Q*(a) = e_n Q(a) e_n` this is the sign that annihilates the
/// standard hypermonogenic kernels and `x/‖x‖^{n−k}`.
pub fn apply_mk(f: &Field, x: &VectorPoint, k: f64, cfg: &FdConfig) -> Result<Multivector> {
    check_half_space(x, cfg.h)?;
    let d = apply_dirac(f, x, cfg)?;
    let q = f(x)?.q_star();
    Ok(&d - &q.scale(k / x.last()))
}

/// Right-sided `M_k`: `fD − k Q*(f)/x_n`.
pub fn apply_mk_right(f: &Field, x: &VectorPoint, k: f64, cfg: &FdConfig) -> Result<Multivector> {
    check_half_space(x, cfg.h)?;
    let d = apply_dirac_right(f, x, cfg)?;
    let q = f(x)?.q_star();
    Ok(&d - &q.scale(k / x.last()))
}

/// Euclidean Laplacian by the 2n+1 point stencil.
pub fn apply_laplacian(f: &Field, x: &VectorPoint, cfg: &FdConfig) -> Result<Multivector> {
    let h = cfg.h_second;
    let f0 = f(x)?;
    let mut out = Multivector::zero(f0.dim());
    for j in 0..x.dim() {
        let s = &f(&x.shifted(j, h))? + &f(&x.shifted(j, -h))?;
        out += &(&s - &f0.scale(2.0)).scale(1.0 / (h * h));
    }
    Ok(out)
}

/// `Δ_k f = Δf − (k/x_n) ∂_n f`.
pub fn apply_laplacian_k(f: &Field, x: &VectorPoint, k: f64, cfg: &FdConfig) -> Result<Multivector> {
    check_half_space(x, cfg.h_second)?;
    let lap = apply_laplacian(f, x, cfg)?;
    let dn = partial(f, x, x.dim() - 1, cfg.h_second)?;
    Ok(&lap - &dn.scale(k / x.last()))
}

/// `W_k f = Δ_k f + (k/x_n²) f`.
pub fn apply_wk(f: &Field, x: &VectorPoint, k: f64, cfg: &FdConfig) -> Result<Multivector> {
    let dk = apply_laplacian_k(f, x, k, cfg)?;
    let xn = x.last();
    Ok(&dk + &f(x)?.scale(k / (xn * xn)))
}
