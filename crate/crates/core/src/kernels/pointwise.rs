//! Euclidean fundamental solutions and the hypermonogenic kernels of the
//! upper half-space.

use serde::{Deserialize, Serialize};

use crate::clifford::{Multivector, VectorPoint};
use crate::error::{Error, Result};
use crate::special::sphere_area;

/// Closest approach of two points treated as coincident.
pub const POINT_POLE_TOLERANCE: f64 = 1e-12;

/// `ω_n`, the surface area of the unit sphere in `R^n`.
pub fn omega(n: usize) -> f64 {
    sphere_area(n)
}

/// `C_k` with `D G_k = G_{k−1}` on the radial forms and `C_1 = 1/ω_n`.
///
/// Odd `k`: `D(u‖u‖^{−(n−k+1)}) = (1−k)‖u‖^{−(n−k+1)}`, so `C_k = −C_{k−1}/(k−1)`.
/// Even `k`: `D‖u‖^{−(n−k)} = −(n−k) u‖u‖^{−(n−k+2)}`, so `C_k = −C_{k−1}/(n−k)`.
pub fn normalization_constant_ck(k: usize, n: usize) -> Result<f64> {
    if k < 1 || k >= n {
        return Err(Error::Unsupported(format!(
            "G_k needs 1 <= k < n (k = {k}, n = {n})"
        )));
    }
    let mut c = 1.0 / omega(n);
    for j in 2..=k {
        c = if j % 2 == 0 {
            -c / (n - j) as f64
        } else {
            -c / (j - 1) as f64
        };
    }
    Ok(c)
}

fn check_dims(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<()> {
    for d in [x.dim(), y.dim()] {
        if d != n {
            return Err(Error::DimensionMismatch { left: d, right: n });
        }
    }
    Ok(())
}

fn separation(x: &VectorPoint, y: &VectorPoint, what: &str) -> Result<(VectorPoint, f64)> {
    let u = x.sub(y);
    let r = u.norm();
    if r <= POINT_POLE_TOLERANCE {
        return Err(Error::Pole(format!(
            "{what}: the points coincide (distance {r:e})"
        )));
    }
    Ok((u, r))
}

/// `G_k(x−y)`.
pub fn green_k(k: usize, x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<Multivector> {
    check_dims(x, y, n)?;
    let c = normalization_constant_ck(k, n)?;
    let (u, r) = separation(x, y, "G_k")?;
    let nf = n as f64;
    let kf = k as f64;
    Ok(if k == 1 {
        cauchy_g(&u, n)
    } else if k % 2 == 1 {
        u.to_multivector().scale(c * r.powf(-(nf - kf + 1.0)))
    } else {
        Multivector::scalar(n, c * r.powf(-(nf - kf)))
    })
}

/// Cauchy kernel `G(u) = u / (ω_n ‖u‖ⁿ)` on a difference vector.
pub(crate) fn cauchy_g(u: &VectorPoint, n: usize) -> Multivector {
    let r = u.norm();
    u.to_multivector().scale(1.0 / (omega(n) * r.powi(n as i32)))
}

/// The five kernels evaluated at one pair of points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperKernels {
    pub p: Multivector,
    pub q: Multivector,
    pub h: Multivector,
    pub e: Multivector,
    pub f: Multivector,
}

fn check_half_space(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<()> {
    check_dims(x, y, n)?;
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "the hypermonogenic kernels need n >= 3, got n = {n}"
        )));
    }
    if !(x.last() > 0.0) || !(y.last() > 0.0) {
        return Err(Error::Domain(format!(
            "both points must lie in x_n > 0 (x_n = {}, y_n = {})",
            x.last(),
            y.last()
        )));
    }
    Ok(())
}

pub(crate) fn p_kernel(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<Multivector> {
    let (u, r1) = separation(x, y, "p(x,y)")?;
    let (v, r2) = separation(x, &y.hat(), "p(x,y)")?;
    let ni = n as i32;
    let en = Multivector::e(n, n);
    let left = u.to_multivector().scale(r1.powi(-ni));
    let right = v.to_multivector().scale(r2.powi(-ni));
    let s = x.last().powi(ni - 2) * y.last().powi(ni - 1) / omega(n);
    Ok((&(&left * &en) * &right).scale(s))
}

pub(crate) fn q_kernel(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<Multivector> {
    let (u, r1) = separation(x, y, "q(x,y)")?;
    let yh = y.hat();
    let (v, r2) = separation(x, &yh, "q(x,y)")?;
    let ni = n as i32;
    let a = cauchy_g(&u, n).scale(r2.powi(2 - ni));
    let b = cauchy_g(&v, n).scale(r1.powi(2 - ni));
    Ok((&a + &b).scale(y.last().powi(ni - 2)))
}

pub(crate) fn h_kernel(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<f64> {
    let (_, r1) = separation(x, y, "H(x,y)")?;
    let (_, r2) = separation(x, &y.hat(), "H(x,y)")?;
    let e = 2 - n as i32;
    Ok((r1 * r2).powi(e) / ((n - 2) as f64 * omega(n)))
}

pub(crate) fn e_kernel(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<Multivector> {
    let (u, _) = separation(x, y, "E(x,y)")?;
    let (_, r2) = separation(x, &y.hat(), "E(x,y)")?;
    let ni = n as i32;
    Ok(cauchy_g(&u, n).scale(2f64.powi(ni - 1) * r2.powi(2 - ni)))
}

pub(crate) fn f_kernel(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<Multivector> {
    let (_, r1) = separation(x, y, "F(x,y)")?;
    let (v, _) = separation(&x.hat(), y, "F(x,y)")?;
    let ni = n as i32;
    Ok(cauchy_g(&v, n).scale(2f64.powi(ni - 1) * r1.powi(2 - ni)))
}

/// `p, q, H, E, F` at `(x, y)`.
///
/// `q` is the sum of the two Cauchy terms; it equals `−y_n^{n−2} D_x H`.
pub fn hyper_kernels_pointwise(x: &VectorPoint, y: &VectorPoint, n: usize) -> Result<HyperKernels> {
    check_half_space(x, y, n)?;
    Ok(HyperKernels {
        p: p_kernel(x, y, n)?,
        q: q_kernel(x, y, n)?,
        h: Multivector::scalar(n, h_kernel(x, y, n)?),
        e: e_kernel(x, y, n)?,
        f: f_kernel(x, y, n)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn g1_in_three_dimensions() {
        let x = VectorPoint::new(vec![0.3, -0.4, 1.2]);
        let y = VectorPoint::new(vec![0.1, 0.2, 0.5]);
        let g = green_k(1, &x, &y, 3).unwrap();
        let u = x.sub(&y);
        let expect = u.to_multivector().scale(1.0 / (4.0 * PI * u.norm().powi(3)));
        assert!(g.max_abs_diff(&expect) < 1e-14 * expect.norm());
    }

    #[test]
    fn constants_follow_the_recurrence() {
        let n = 5;
        let c1 = normalization_constant_ck(1, n).unwrap();
        assert!((c1 * omega(n) - 1.0).abs() < 1e-15);
        assert!((normalization_constant_ck(2, n).unwrap() + c1 / 3.0).abs() < 1e-16);
        assert!((normalization_constant_ck(3, n).unwrap() - c1 / 6.0).abs() < 1e-16);
        assert!(normalization_constant_ck(5, n).is_err());
    }

    #[test]
    fn even_green_is_homogeneous() {
        let n = 4;
        let o = VectorPoint::zero(n);
        let x = VectorPoint::new(vec![0.2, 0.1, -0.3, 0.4]);
        let a = green_k(2, &x, &o, n).unwrap().scalar_part();
        let b = green_k(2, &x.scale(2.0), &o, n).unwrap().scalar_part();
        assert!((b / a - 0.25).abs() < 1e-14);
    }

    #[test]
    fn coincident_points_are_poles() {
        let x = VectorPoint::new(vec![0.2, 0.1, 0.4]);
        assert!(matches!(green_k(1, &x, &x, 3), Err(Error::Pole(_))));
        assert!(hyper_kernels_pointwise(&x, &x, 3).is_err());
    }

    #[test]
    fn e_and_f_from_their_formulas() {
        let n = 4;
        let x = VectorPoint::new(vec![0.2, 0.1, -0.3, 0.4]);
        let y = VectorPoint::new(vec![-0.1, 0.3, 0.2, 0.9]);
        let k = hyper_kernels_pointwise(&x, &y, n).unwrap();
        let g = |u: &VectorPoint| green_k(1, u, &VectorPoint::zero(n), n).unwrap();
        let e = g(&x.sub(&y)).scale(8.0 / x.distance(&y.hat()).powi(2));
        let f = g(&x.hat().sub(&y)).scale(8.0 / x.distance(&y).powi(2));
        assert!(k.e.max_abs_diff(&e) < 1e-15);
        assert!(k.f.max_abs_diff(&f) < 1e-15);
        assert!(k.h.scalar_part() > 0.0);
    }
}
