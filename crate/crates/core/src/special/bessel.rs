//! Modified Bessel function of the second kind `K_ν(x)`.
//!
//! Real order: Temme's series for `x < 2`, Steed's continued fraction for
//! `2 ≤ x ≤ 20`, the Hankel expansion beyond, then forward recurrence in
//! the order. Half-integer orders use the elementary closed forms.
//! Complex order falls back to `∫_0^∞ e^{−x cosh t} cosh(νt) dt`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::gamma::{recip_gamma_1p, temme_gammas};
use crate::error::{Error, Result};

const EPS: f64 = 1e-16;
const MAX_ITER: usize = 10_000;

/// `K_ν(x)` for real `ν` and `x > 0`.
pub fn bessel_k(nu: f64, x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_ν(x) needs x > 0, got {x}")));
    }
    if !nu.is_finite() {
        return Err(Error::Domain("K_ν needs a finite order".into()));
    }
    let nu = nu.abs();
    let twice = 2.0 * nu;
    if twice.fract() == 0.0 && (twice as i64) % 2 == 1 {
        return Ok(bessel_k_half_integer(nu, x));
    }
    let nl = (nu + 0.5).floor();
    let mu = nu - nl;
    let (k_mu, k_mu1) = if x < 2.0 {
        temme_series(mu, x)
    } else if x > 20.0 {
        match hankel_pair(mu, x) {
            Some(pair) => pair,
            None => steed_cf2(mu, x)?,
        }
    } else {
        steed_cf2(mu, x)?
    };
    Ok(recur_up(mu, x, nl as usize, k_mu, k_mu1))
}

fn recur_up(mu: f64, x: f64, steps: usize, mut k0: f64, mut k1: f64) -> f64 {
    let xi2 = 2.0 / x;
    for i in 1..=steps {
        let next = (mu + i as f64) * xi2 * k1 + k0;
        k0 = k1;
        k1 = next;
    }
    k0
}

/// `K_{m+1/2}` from `K_{1/2} = √(π/2x) e^{−x}` and upward recurrence.
fn bessel_k_half_integer(nu: f64, x: f64) -> f64 {
    let k_half = (PI / (2.0 * x)).sqrt() * (-x).exp();
    let k_3half = k_half * (1.0 + 1.0 / x);
    recur_up(0.5, x, (nu - 0.5).round() as usize, k_half, k_3half)
}

/// `(K_μ, K_{μ+1})` for `|μ| ≤ 1/2`, `x < 2`.
fn temme_series(mu: f64, x: f64) -> (f64, f64) {
    let x2 = 0.5 * x;
    let pimu = PI * mu;
    let fact = if pimu.abs() < EPS { 1.0 } else { pimu / pimu.sin() };
    let d = -x2.ln();
    let e = mu * d;
    let fact2 = if e.abs() < EPS { 1.0 } else { e.sinh() / e };
    let (gam1, gam2) = temme_gammas(mu);
    let gampl = recip_gamma_1p(mu);
    let gammi = recip_gamma_1p(-mu);
    let mut ff = fact * (gam1 * e.cosh() + gam2 * fact2 * d);
    let mut sum = ff;
    let ee = e.exp();
    let mut p = 0.5 * ee / gampl;
    let mut q = 0.5 / (ee * gammi);
    let mut c = 1.0;
    let dd = x2 * x2;
    let mut sum1 = p;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        ff = (fi * ff + p + q) / (fi * fi - mu * mu);
        c *= dd / fi;
        p /= fi - mu;
        q /= fi + mu;
        let del = c * ff;
        sum += del;
        let del1 = c * (p - fi * ff);
        sum1 += del1;
        if del.abs() < sum.abs() * EPS {
            break;
        }
    }
    (sum, sum1 * 2.0 / x)
}

/// Steed's method on the second continued fraction, `x ≥ 2`.
fn steed_cf2(mu: f64, x: f64) -> Result<(f64, f64)> {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25 - mu * mu;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    let mut converged = false;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        a -= 2.0 * fi;
        c = -a * c / (fi + 1.0);
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < EPS {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence(format!("K continued fraction at x = {x}")));
    }
    let h = a1 * h;
    let k_mu = (PI / (2.0 * x)).sqrt() * (-x).exp() / s;
    let k_mu1 = k_mu * (mu + x + 0.5 - h) / x;
    Ok((k_mu, k_mu1))
}

/// Hankel expansion `√(π/2x) e^{−x} Σ a_k(ν)/x^k`, summed to its smallest
/// term; `None` if that term is not negligible.
fn hankel(nu: f64, x: f64) -> Option<f64> {
    let m = 4.0 * nu * nu;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..60 {
        let fk = k as f64;
        let next = term * (m - (2.0 * fk - 1.0).powi(2)) / (fk * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < EPS * sum.abs() {
            return Some((PI / (2.0 * x)).sqrt() * (-x).exp() * sum);
        }
    }
    None
}

fn hankel_pair(mu: f64, x: f64) -> Option<(f64, f64)> {
    Some((hankel(mu, x)?, hankel(mu + 1.0, x)?))
}

/// `K_ν(x)` for complex order from the trapezoid rule on the integral
/// representation; the integrand is analytic in a strip, so the rule
/// converges geometrically.
pub fn bessel_k_complex_order(nu: Complex64, x: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("K_ν(x) needs x > 0, got {x}")));
    }
    let h: f64 = 0.02;
    let mut sum = Complex64::new(0.5 * (-x).exp(), 0.0);
    let mut t: f64 = h;
    loop {
        let expo = -x * t.cosh();
        let term = (nu * t).cosh() * expo.exp();
        sum += term;
        if expo + nu.re.abs() * t < -745.0 || (term.norm() < 1e-18 * sum.norm() && t > 1.0) {
            break;
        }
        t += h;
        if t > 400.0 {
            return Err(Error::NonConvergence("complex-order K integral".into()));
        }
    }
    Ok(sum * h)
}
