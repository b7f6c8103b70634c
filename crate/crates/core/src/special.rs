//! Log-gamma, Beta, sphere areas and the smooth cutoff.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d, QuadratureSpec};

// Lanczos approximation, g = 7, nine terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
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

/// Lanczos series `A(z)` so that `Γ(z) = √(2π) t^{z-1/2} e^{-t} A(z)` with `t = z + g - 1/2`.
/// Accurate for `z >= 1/2`.
fn lanczos_series(z: f64) -> f64 {
    let zm1 = z - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    acc
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} requires a positive finite argument, got {v}")))
    }
}

/// `ln Γ(t)` for `t > 0`.
pub fn log_gamma(t: f64) -> Result<f64> {
    check_positive("log_gamma", t)?;
    Ok(log_gamma_unchecked(t))
}

fn log_gamma_unchecked(t: f64) -> f64 {
    if t < 0.5 {
        // Γ(t) = Γ(t+1)/t
        return log_gamma_unchecked(t + 1.0) - t.ln();
    }
    let tg = t + LANCZOS_G - 0.5;
    0.5 * (2.0 * PI).ln() + (t - 0.5) * tg.ln() - tg + lanczos_series(t).ln()
}

/// `Γ(t)` for `t > 0`.
pub fn gamma(t: f64) -> Result<f64> {
    check_positive("gamma", t)?;
    if t < 0.5 {
        return Ok(gamma(t + 1.0)? / t);
    }
    let tg = t + LANCZOS_G - 0.5;
    Ok((2.0 * PI).sqrt() * tg.powf(t - 0.5) * (-tg).exp() * lanczos_series(t))
}

/// Euler's Beta function `B(t, g) = ∫₀¹ s^{t-1}(1-s)^{g-1} ds`.
///
/// Evaluated as a ratio of Lanczos series so that the large `ln Γ` terms
/// cancel analytically rather than in floating point.
pub fn beta(t: f64, g: f64) -> Result<f64> {
    check_positive("beta", t)?;
    check_positive("beta", g)?;
    Ok(beta_unchecked(t, g))
}

fn beta_unchecked(a: f64, b: f64) -> f64 {
    // Lift small arguments with B(a, b) = B(a+1, b)(a+b)/a.
    if a < 0.5 {
        return beta_unchecked(a + 1.0, b) * (a + b) / a;
    }
    if b < 0.5 {
        return beta_unchecked(a, b + 1.0) * (a + b) / b;
    }
    let c = a + b;
    let tc = c + LANCZOS_G - 0.5;
    let series = lanczos_series(a) * lanczos_series(b) / lanczos_series(c);
    // t_a / t_c = 1 - b / t_c and t_b / t_c = 1 - a / t_c exactly.
    let log_pow = (a - 0.5) * (-b / tc).ln_1p() + (b - 0.5) * (-a / tc).ln_1p();
    (2.0 * PI).sqrt() * (-(LANCZOS_G - 0.5)).exp() * series * log_pow.exp() / tc.sqrt()
}

/// `∫₀^π (sin s)^λ ds = B((λ+1)/2, 1/2)` for `λ > -1`.
pub fn sin_power_integral(lam: f64) -> Result<f64> {
    if !(lam > -1.0) || !lam.is_finite() {
        return Err(Error::Domain(format!("sin_power_integral requires lambda > -1, got {lam}")));
    }
    beta((lam + 1.0) / 2.0, 0.5)
}

/// Direct tanh-sinh evaluation of `∫₀^π (sin s)^λ ds`, folded onto `(0, π/2)`
/// so the only singular endpoint sits at the origin.
pub fn sin_power_integral_numeric(lam: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(lam > -1.0) || !lam.is_finite() {
        return Err(Error::Domain(format!("sin_power_integral requires lambda > -1, got {lam}")));
    }
    let half = integrate_1d(|s| s.sin().powf(lam), 0.0, PI / 2.0, spec)?;
    Ok(2.0 * half.value)
}

/// Surface measure of the unit sphere `S^{m-1} ⊂ ℝ^m`: `2π^{m/2}/Γ(m/2)`.
pub fn sphere_area(m: usize) -> Result<f64> {
    if m < 1 {
        return Err(Error::Domain("sphere_area requires m >= 1".into()));
    }
    let half = m as f64 / 2.0;
    Ok(2.0 * PI.powf(half) / gamma(half)?)
}

fn smoothstep(u: f64) -> f64 {
    u * u * u * (10.0 + u * (-15.0 + 6.0 * u))
}

/// Cutoff `η`: identically 1 on `(-∞, 1]`, 0 on `[2, ∞)`, quintic smoothstep
/// ramp in between. `η` is C².
pub fn cutoff_eta(t: f64) -> f64 {
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        1.0 - smoothstep(t - 1.0)
    }
}

/// `η'(t)`; bounded by 15/8 in absolute value.
pub fn cutoff_eta_prime(t: f64) -> f64 {
    if t <= 1.0 || t >= 2.0 {
        0.0
    } else {
        let u = t - 1.0;
        let w = u * (1.0 - u);
        -30.0 * w * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gamma_reference_values() {
        assert_relative_eq!(gamma(0.5).unwrap(), PI.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(gamma(5.0).unwrap(), 24.0, max_relative = 1e-14);
        assert_relative_eq!(gamma(1.0).unwrap(), 1.0, max_relative = 1e-14);
        // ln Γ(50) = ln(49!)
        let ln49: f64 = (1..50).map(|k| (k as f64).ln()).sum();
        assert_relative_eq!(log_gamma(50.0).unwrap(), ln49, max_relative = 1e-14);
        // Frozen from mpmath at 30 digits.
        assert_relative_eq!(log_gamma(1e-3).unwrap(), 6.907178885383853, max_relative = 1e-14);
        assert_relative_eq!(log_gamma(0.1).unwrap(), 2.252712651734206, max_relative = 1e-14);
        assert_relative_eq!(log_gamma(7.3).unwrap(), 7.147892523022249, max_relative = 1e-14);
        assert_relative_eq!(log_gamma(33.25).unwrap(), 82.42923834590904, max_relative = 1e-14);
    }

    #[test]
    fn beta_classical_values() {
        assert_relative_eq!(beta(0.5, 0.5).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(beta(1.0, 1.0).unwrap(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(beta(2.0, 3.0).unwrap(), 1.0 / 12.0, max_relative = 1e-14);
        // Frozen from mpmath.
        assert_relative_eq!(beta(1e-3, 50.0).unwrap(), 995.5316196782522, max_relative = 1e-13);
        assert_relative_eq!(beta(50.0, 50.0).unwrap(), 3.964661208567336e-31, max_relative = 1e-13);
        assert_relative_eq!(beta(0.3, 7.5).unwrap(), 1.6577189121086255, max_relative = 1e-13);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(beta(0.0, 1.0), Err(Error::Domain(_))));
        assert!(matches!(log_gamma(-1.0), Err(Error::Domain(_))));
        assert!(matches!(sin_power_integral(-1.0), Err(Error::Domain(_))));
        assert!(matches!(sphere_area(0), Err(Error::Domain(_))));
    }

    #[test]
    fn sin_power_examples() {
        assert_relative_eq!(sin_power_integral(0.0).unwrap(), PI, max_relative = 1e-14);
        assert_relative_eq!(sin_power_integral(1.0).unwrap(), 2.0, max_relative = 1e-14);
        let lam = 3f64.sqrt() - 2.0;
        let spec = QuadratureSpec::default();
        let numeric = sin_power_integral_numeric(lam, &spec).unwrap();
        let closed = beta((3f64.sqrt() - 1.0) / 2.0, 0.5).unwrap();
        assert_relative_eq!(numeric, closed, max_relative = 1e-9);
    }

    #[test]
    fn sphere_areas() {
        assert_relative_eq!(sphere_area(1).unwrap(), 2.0, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(2).unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(sphere_area(3).unwrap(), 4.0 * PI, max_relative = 1e-14);
    }

    #[test]
    fn cutoff_shape() {
        assert_eq!(cutoff_eta(0.5), 1.0);
        assert_eq!(cutoff_eta(2.5), 0.0);
        assert_relative_eq!(cutoff_eta(1.5), 0.5, max_relative = 1e-15);
        assert_eq!(cutoff_eta(1.0), 1.0);
        assert_eq!(cutoff_eta(2.0), 0.0);
        assert_eq!(cutoff_eta_prime(1.0), 0.0);
        assert_eq!(cutoff_eta_prime(2.0), 0.0);
        let mut prev = cutoff_eta(0.0);
        for i in 1..=3000 {
            let t = i as f64 * 1e-3;
            let e = cutoff_eta(t);
            assert!(e <= prev);
            assert!(cutoff_eta_prime(t).abs() <= 15.0 / 8.0 + 1e-15);
            prev = e;
        }
    }

    #[test]
    fn cutoff_derivative_matches_difference_quotient() {
        for i in 1..100 {
            let t = 1.0 + i as f64 / 100.0;
            let h = 1e-6;
            let fd = (cutoff_eta(t + h) - cutoff_eta(t - h)) / (2.0 * h);
            assert!((fd - cutoff_eta_prime(t)).abs() < 1e-8);
        }
    }
}
