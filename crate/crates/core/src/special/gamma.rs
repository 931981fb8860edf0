use num_complex::Complex64;

const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Complex gamma function by the Lanczos approximation (g = 7), with the
/// reflection formula for `Re z < 1/2`.
pub fn gamma_complex(z: Complex64) -> Complex64 {
    let pi = std::f64::consts::PI;
    if z.re < 0.5 {
        let s = (z * pi).sin();
        return Complex64::from(pi) / (s * gamma_complex(Complex64::new(1.0, 0.0) - z));
    }
    let z = z - 1.0;
    let mut acc = Complex64::from(LANCZOS[0]);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    Complex64::from((2.0 * pi).sqrt()) * t.powc(z + 0.5) * (-t).exp() * acc
}

/// Taylor coefficients of `1/Γ(z) = Σ_{k≥1} c_k z^k`.
const RECIP_GAMMA: [f64; 26] = [
    1.0,
    0.577_215_664_901_532_9,
    -0.655_878_071_520_253_8,
    -0.042_002_635_034_095_2,
    0.166_538_611_382_291_5,
    -0.042_197_734_555_544_3,
    -0.009_621_971_527_877_0,
    0.007_218_943_246_663_0,
    -0.001_165_167_591_859_1,
    -0.000_215_241_674_114_9,
    0.000_128_050_282_388_2,
    -0.000_020_134_854_780_7,
    -0.000_001_250_493_482_1,
    0.000_001_133_027_232_0,
    -0.000_000_205_633_841_7,
    0.000_000_006_116_095_0,
    0.000_000_005_002_007_5,
    -0.000_000_001_181_274_6,
    0.000_000_000_104_342_7,
    0.000_000_000_007_782_3,
    -0.000_000_000_003_696_8,
    0.000_000_000_000_510_0,
    -0.000_000_000_000_020_6,
    -0.000_000_000_000_005_4,
    0.000_000_000_000_001_4,
    0.000_000_000_000_000_1,
];

/// `1/Γ(1+μ)` for `|μ| ≤ 1/2`, from the reciprocal-gamma series.
pub fn recip_gamma_1p(mu: f64) -> f64 {
    // 1/Γ(1+μ) = Σ_k c_k μ^{k-1}
    let mut acc = 0.0;
    for &c in RECIP_GAMMA.iter().rev() {
        acc = acc * mu + c;
    }
    acc
}

/// Temme's `γ1(μ) = (1/Γ(1−μ) − 1/Γ(1+μ)) / (2μ)` and
/// `γ2(μ) = (1/Γ(1−μ) + 1/Γ(1+μ)) / 2`, free of cancellation at `μ → 0`.
pub fn temme_gammas(mu: f64) -> (f64, f64) {
    let mu2 = mu * mu;
    // γ1 = −Σ_j c_{2j} μ^{2j−2},  γ2 = Σ_j c_{2j+1} μ^{2j}   (c indexed from 1)
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    for j in (0..RECIP_GAMMA.len() / 2).rev() {
        g1 = g1 * mu2 + RECIP_GAMMA[2 * j + 1];
        g2 = g2 * mu2 + RECIP_GAMMA[2 * j];
    }
    (-g1, g2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::function::gamma::gamma;

    #[test]
    fn lanczos_matches_real_gamma() {
        for &x in &[0.1, 0.5, 1.0, 1.7, 3.25, 6.0, 10.5] {
            let g = gamma_complex(Complex64::new(x, 0.0));
            assert!((g.re / gamma(x) - 1.0).abs() < 1e-13, "x = {x}");
            assert!(g.im.abs() < 1e-13 * g.re.abs());
        }
    }

    #[test]
    fn recurrence_on_complex_axis() {
        let z = Complex64::new(1.3, 2.1);
        let lhs = gamma_complex(z + 1.0);
        let rhs = z * gamma_complex(z);
        assert!((lhs - rhs).norm() < 1e-13 * lhs.norm());
        // |Γ(1/2 + it)|² = π / cosh(πt)
        let t = 0.8;
        let g = gamma_complex(Complex64::new(0.5, t));
        let pi = std::f64::consts::PI;
        assert!((g.norm_sqr() - pi / (pi * t).cosh()).abs() < 1e-13);
    }

    #[test]
    fn reciprocal_series_matches_gamma() {
        for &mu in &[-0.5, -0.3, -0.01, 0.0, 0.2, 0.4999] {
            let expect = 1.0 / gamma(1.0 + mu);
            assert!((recip_gamma_1p(mu) - expect).abs() < 1e-14, "mu = {mu}");
            let (g1, g2) = temme_gammas(mu);
            let a = 1.0 / gamma(1.0 - mu);
            assert!((g2 - 0.5 * (a + expect)).abs() < 1e-14);
            if mu.abs() > 0.1 {
                assert!((g1 - (a - expect) / (2.0 * mu)).abs() < 1e-13);
            }
        }
    }
}
