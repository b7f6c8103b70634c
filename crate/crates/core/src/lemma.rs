//! Numerical check of the logarithmic bound for kernels `ξ(t) = t^a (t²+1)^b`
//! with `a + 2b = -1`: `q(ε) = ∫₀^∞ ξ(t) η(εt) dt + ln ε` stays bounded as `ε → 0`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fit::fit_line;
use crate::quadrature::{integrate_1d, QuadratureSpec};
use crate::special::cutoff_eta;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XiSpec {
    pub a: f64,
    pub b: f64,
}

impl XiSpec {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a > -1.0) || !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput(format!("kernel needs a > -1 and finite b, got a = {a}, b = {b}")));
        }
        Ok(Self { a, b })
    }

    /// Whether the kernel decays exactly like `1/t`.
    pub fn is_log_balanced(&self) -> bool {
        (self.a + 2.0 * self.b + 1.0).abs() <= 1e-12
    }

    pub fn eval(&self, t: f64) -> f64 {
        t.powf(self.a) * (t * t + 1.0).powf(self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub values: Vec<f64>,
    pub max_abs: f64,
    pub slope_vs_log_eps: f64,
}

/// `q(ε)` for one `ε ∈ (0, 1)`.
pub fn lemma_q(xi: &XiSpec, eps: f64, spec: &QuadratureSpec) -> Result<f64> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let head = integrate_1d(|t| xi.eval(t), 0.0, 1.0, spec)?.value;
    // t = e^u on [1, 1/ε]
    let log_span = -eps.ln();
    let middle = integrate_1d(
        |u| {
            let t = u.exp();
            xi.eval(t) * t
        },
        0.0,
        log_span,
        spec,
    )?
    .value;
    // t = s/ε on the cutoff ramp s ∈ [1, 2]
    let tail = integrate_1d(|s| xi.eval(s / eps) * cutoff_eta(s) / eps, 1.0, 2.0, spec)?.value;
    Ok(head + middle + tail + eps.ln())
}

pub fn lemma1_check(xi: &XiSpec, eps_list: &[f64], spec: &QuadratureSpec) -> Result<LemmaReport> {
    if eps_list.len() < 2 {
        return Err(Error::EmptyInput("lemma check needs at least two epsilon values".into()));
    }
    let values = eps_list.iter().map(|&e| lemma_q(xi, e, spec)).collect::<Result<Vec<_>>>()?;
    let logs: Vec<f64> = eps_list.iter().map(|e| e.ln()).collect();
    let fit = fit_line(&logs, &values)?;
    let max_abs = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    Ok(LemmaReport { values, max_abs, slope_vs_log_eps: fit.slope })
}

/// `ε ∈ {1e-1, …, 1e-6}`.
pub fn default_eps_list() -> Vec<f64> {
    (1..=6).map(|k| 10f64.powi(-k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_kernel_is_bounded() {
        let xi = XiSpec::new(1.0, -1.0).unwrap();
        assert!(xi.is_log_balanced());
        let r = lemma1_check(&xi, &default_eps_list(), &QuadratureSpec::default()).unwrap();
        assert!(r.slope_vs_log_eps.abs() <= 1e-2, "{r:?}");
        assert!(r.max_abs < 2.0);
    }

    #[test]
    fn q_matches_closed_form_for_canonical_kernel() {
        // ∫₀^{1/ε} t/(t²+1) dt = ln(1/ε²+1)/2, plus the ramp part.
        let xi = XiSpec::new(1.0, -1.0).unwrap();
        let eps = 1e-3;
        let spec = QuadratureSpec::default();
        let ramp = integrate_1d(|s| s / (s * s + eps * eps) * cutoff_eta(s), 1.0, 2.0, &spec).unwrap().value;
        let expected = 0.5 * (1.0 / (eps * eps) + 1.0).ln() + ramp + eps.ln();
        let q = lemma_q(&xi, eps, &spec).unwrap();
        assert!((q - expected).abs() < 1e-10, "{q} vs {expected}");
    }

    #[test]
    fn unbalanced_kernel_drifts() {
        let xi = XiSpec::new(1.0, -0.6).unwrap();
        assert!(!xi.is_log_balanced());
        let r = lemma1_check(&xi, &default_eps_list(), &QuadratureSpec::default()).unwrap();
        assert!(r.slope_vs_log_eps.abs() >= 0.1);
    }

    #[test]
    fn bad_inputs() {
        assert!(XiSpec::new(-1.0, 0.0).is_err());
        let xi = XiSpec::new(1.0, -1.0).unwrap();
        assert!(lemma1_check(&xi, &[0.1], &QuadratureSpec::default()).is_err());
        assert!(lemma_q(&xi, 1.5, &QuadratureSpec::default()).is_err());
    }
}
