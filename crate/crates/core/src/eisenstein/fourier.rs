use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::{bessel_k, bessel_k_complex_order, gamma, gamma_complex};

/// Non-constant Fourier coefficient of the Hecke series at frequency `g`:
///
/// `2^{(3−2s)/2} (2π‖g‖)^{(2s−1)/2} π^{(n−1)/2} x_n^{1/2} / Γ((n+2s)/2 − 1)
///  · K_{(1−2s)/2}(2π‖g‖x_n)`.
pub fn fourier_coefficient(x_n: f64, g: &[f64], s: Complex64, n: usize) -> Result<Complex64> {
    if !(x_n > 0.0) {
        return Err(Error::Domain(format!("requires x_n > 0, got {x_n}")));
    }
    if s.re < 0.0 {
        return Err(Error::Domain(format!("requires Re(s) >= 0, got {s}")));
    }
    let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if gn == 0.0 {
        return Err(Error::InvalidParameters(
            "g = 0: the constant term has no closed form here".into(),
        ));
    }
    let nf = n as f64;
    let z = 2.0 * PI * gn * x_n;
    if s.im == 0.0 {
        let s = s.re;
        let ga = nf / 2.0 + s - 1.0;
        if ga <= 0.0 && ga.fract() == 0.0 {
            return Err(Error::Singularity(format!("Γ pole at {ga}")));
        }
        let pref = 2f64.powf((3.0 - 2.0 * s) / 2.0)
            * (2.0 * PI * gn).powf((2.0 * s - 1.0) / 2.0)
            * PI.powf((nf - 1.0) / 2.0)
            * x_n.sqrt()
            / gamma(ga);
        return Ok(Complex64::new(pref * bessel_k((1.0 - 2.0 * s) / 2.0, z)?, 0.0));
    }
    let two = Complex64::new(2.0, 0.0);
    let pref = two.powc((3.0 - 2.0 * s) / 2.0)
        * Complex64::new(2.0 * PI * gn, 0.0).powc((2.0 * s - 1.0) / 2.0)
        * PI.powf((nf - 1.0) / 2.0)
        * x_n.sqrt()
        / gamma_complex(nf / 2.0 + s - 1.0);
    Ok(pref * bessel_k_complex_order((1.0 - 2.0 * s) / 2.0, z)?)
}
