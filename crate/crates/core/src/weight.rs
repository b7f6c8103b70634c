//! The `H`-functions of the `p = 2` case analysis, closed-form weights
//! `W = -div(V|∇f|^{p-2}∇f)/f^{p-1}` for power-law `f`, and a finite-difference
//! divergence oracle.

use serde::{Deserialize, Serialize};

use crate::closed_form::ExponentPair;
use crate::error::{Error, Result};
use crate::params::HardyParams;

/// Points closer than this (relative to `1+|x|`) to `{x'=0}` are rejected.
pub const SINGULAR_GUARD: f64 = 1e-8;

/// `H(θ) = -θ(k+2α+θ)`.
pub fn h_theta(theta: f64, params: &HardyParams) -> f64 {
    -theta * (params.k() as f64 + 2.0 * params.alpha() + theta)
}

/// `H₂(θ,λ) = λ(n+2α+2β+2θ+λ) + 2βθ`.
pub fn h2(theta: f64, lambda: f64, params: &HardyParams) -> f64 {
    let c = params.n() as f64 + 2.0 * params.alpha() + 2.0 * params.beta();
    lambda * (c + 2.0 * theta + lambda) + 2.0 * params.beta() * theta
}

/// `H₁ = H - H₂`.
pub fn h1(theta: f64, lambda: f64, params: &HardyParams) -> f64 {
    h_theta(theta, params) - h2(theta, lambda, params)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Trial {
    /// `f = |y|^θ |x|^λ`
    Pair(ExponentPair),
    /// `f = |y|^γ`
    Gamma(f64),
}

/// A weight/trial pair: `V = |y|^{(α+1)p}|x|^{βp}` and a power-law `f`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub params: HardyParams,
    pub trial: Trial,
}

/// Split norms of a point: `|y|` over the first `k` coordinates and `|x|`.
#[derive(Debug, Clone, Copy)]
pub struct Norms {
    pub y: f64,
    pub x: f64,
}

impl Norms {
    pub fn of(x: &[f64], k: usize) -> Self {
        let y2: f64 = x[..k].iter().map(|v| v * v).sum();
        let x2: f64 = y2 + x[k..].iter().map(|v| v * v).sum::<f64>();
        Self { y: y2.sqrt(), x: x2.sqrt() }
    }
}

impl WeightSpec {
    pub fn pair(params: HardyParams, pair: ExponentPair) -> Self {
        Self { params, trial: Trial::Pair(pair) }
    }

    pub fn gamma(params: HardyParams, gamma: f64) -> Self {
        Self { params, trial: Trial::Gamma(gamma) }
    }

    pub fn exponents(&self) -> ExponentPair {
        match self.trial {
            Trial::Pair(pair) => pair,
            Trial::Gamma(g) => ExponentPair::new(g, 0.0),
        }
    }

    fn check_point(&self, x: &[f64]) -> Result<Norms> {
        if x.len() != self.params.n() {
            return Err(Error::InvalidInput(format!(
                "point has {} coordinates, expected n = {}",
                x.len(),
                self.params.n()
            )));
        }
        let norms = Norms::of(x, self.params.k());
        if !(norms.y >= SINGULAR_GUARD * (1.0 + norms.x)) {
            return Err(Error::Singular(format!("|x'| = {:e} at |x| = {:e}", norms.y, norms.x)));
        }
        Ok(norms)
    }

    /// `V(x)`.
    pub fn v(&self, x: &[f64]) -> f64 {
        let nm = Norms::of(x, self.params.k());
        let p = self.params.p();
        nm.y.powf((self.params.alpha() + 1.0) * p) * nm.x.powf(self.params.beta() * p)
    }

    /// `f(x)`.
    pub fn f(&self, x: &[f64]) -> f64 {
        let nm = Norms::of(x, self.params.k());
        let e = self.exponents();
        nm.y.powf(e.theta) * nm.x.powf(e.lambda)
    }

    /// Right-hand weight `|y|^{pα}|x|^{pβ}` of the Hardy inequality.
    pub fn rhs_weight(&self, x: &[f64]) -> f64 {
        let nm = Norms::of(x, self.params.k());
        let p = self.params.p();
        nm.y.powf(self.params.alpha() * p) * nm.x.powf(self.params.beta() * p)
    }
}

/// `H₁ V/|y|² + H₂ V|x''|²/(|y|²|x|²)` for `p = 2`.
pub fn weight_p2(x: &[f64], spec: &WeightSpec) -> Result<f64> {
    if spec.params.p() != 2.0 {
        return Err(Error::Unsupported("weight_p2 requires p = 2".into()));
    }
    let nm = spec.check_point(x)?;
    let e = spec.exponents();
    let v = spec.v(x);
    let y2 = nm.y * nm.y;
    let x2 = nm.x * nm.x;
    let rest2 = (x2 - y2).max(0.0);
    Ok(h1(e.theta, e.lambda, &spec.params) * v / y2 + h2(e.theta, e.lambda, &spec.params) * v * rest2 / (y2 * x2))
}

/// `|H₁|V/|y|² + |H₂|V|x''|²/(|y|²|x|²)`: the size of the two weight terms,
/// used to measure errors where they cancel.
pub fn weight_p2_scale(x: &[f64], spec: &WeightSpec) -> Result<f64> {
    let nm = spec.check_point(x)?;
    let e = spec.exponents();
    let v = spec.v(x);
    let y2 = nm.y * nm.y;
    let x2 = nm.x * nm.x;
    let rest2 = (x2 - y2).max(0.0);
    Ok(h1(e.theta, e.lambda, &spec.params).abs() * v / y2
        + h2(e.theta, e.lambda, &spec.params).abs() * v * rest2 / (y2 * x2))
}

/// `|s|^{q-2} s` written as `sign(s)|s|^{q-1}`; zero at `s = 0`.
pub fn signed_pow(s: f64, q: f64) -> f64 {
    if s == 0.0 {
        0.0
    } else {
        s.signum() * s.abs().powf(q - 1.0)
    }
}

/// `V|y|^{-p}{-|γ|^{p-2}γ[(p-1)γ+k+pα] - |γ|^{p-2}γβp|y|²/|x|²}` for `f = |y|^γ`.
pub fn weight_general_p(x: &[f64], spec: &WeightSpec) -> Result<f64> {
    let gamma = match spec.trial {
        Trial::Gamma(g) => g,
        Trial::Pair(pair) if pair.lambda == 0.0 => pair.theta,
        Trial::Pair(_) => return Err(Error::Unsupported("weight_general_p needs f = |x'|^gamma".into())),
    };
    let nm = spec.check_point(x)?;
    let prm = &spec.params;
    let p = prm.p();
    let g = signed_pow(gamma, p);
    let bracket = -g * ((p - 1.0) * gamma + prm.k() as f64 + p * prm.alpha())
        - g * prm.beta() * p * (nm.y * nm.y) / (nm.x * nm.x);
    Ok(spec.v(x) * nm.y.powf(-p) * bracket)
}

const STEP_SCALE: f64 = 1e-3;

/// Default base step `STEP_SCALE·(1+|x|)`.
pub fn default_step(x: &[f64]) -> f64 {
    let r: f64 = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    STEP_SCALE * (1.0 + r)
}

/// Step for weights singular on `{y = 0}`: the default step, capped at
/// `STEP_SCALE·|y|` so that the stencil stays well inside the regular region.
pub fn adapted_step(x: &[f64], k: usize) -> f64 {
    let y: f64 = x[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
    default_step(x).min(STEP_SCALE * y)
}

/// Relative Richardson disagreement above which the oracle gives up.
const RICHARDSON_LIMIT: f64 = 1e-4;

/// One flux-form evaluation of `-div(V|∇f|^{p-2}∇f)/|f|^{p-2}f` at step `h`.
/// Returns the value and the sum of the absolute per-axis flux differences.
fn flux_divergence<V, F>(v: &V, f: &F, p: f64, x: &[f64], h: f64) -> (f64, f64)
where
    V: Fn(&[f64]) -> f64 + ?Sized,
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x.len();
    let mut z = x.to_vec();
    let mut grad = vec![0.0; n];
    let mut flux = |z: &mut Vec<f64>, axis: usize| -> f64 {
        // gradient at z, which sits half a step off x along `axis`
        for j in 0..n {
            let zj = z[j];
            let step = if j == axis { 0.5 * h } else { h };
            z[j] = zj + step;
            let fp = f(z);
            z[j] = zj - step;
            let fm = f(z);
            z[j] = zj;
            grad[j] = (fp - fm) / (2.0 * step);
        }
        let norm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        let scale = if p == 2.0 { 1.0 } else if norm == 0.0 { 0.0 } else { norm.powf(p - 2.0) };
        v(z) * scale * grad[axis]
    };
    let mut total = 0.0;
    let mut magnitude = 0.0;
    for axis in 0..n {
        let xi = x[axis];
        z[axis] = xi + 0.5 * h;
        let plus = flux(&mut z, axis);
        z[axis] = xi - 0.5 * h;
        let minus = flux(&mut z, axis);
        z[axis] = xi;
        let d = (plus - minus) / h;
        total += d;
        magnitude += d.abs();
    }
    let fx = signed_pow(f(x), p);
    (-total / fx, magnitude / fx.abs())
}

/// `-div(V|∇f|^{p-2}∇f)/f^{p-1}` by compact central differences at steps `h`
/// and `h/2`, combined by Richardson extrapolation.
pub fn divergence_oracle_p<V, F>(v: &V, f: &F, p: f64, x: &[f64], h: f64) -> Result<f64>
where
    V: Fn(&[f64]) -> f64 + ?Sized,
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidInput(format!("finite-difference step must be positive, got {h}")));
    }
    if !(p >= 1.0) {
        return Err(Error::InvalidInput(format!("p must be at least 1, got {p}")));
    }
    let fx = f(x);
    if fx == 0.0 || !fx.is_finite() {
        return Err(Error::Domain(format!("f(x) = {fx} must be finite and nonzero")));
    }
    let (coarse, _) = flux_divergence(v, f, p, x, h);
    let (fine, magnitude) = flux_divergence(v, f, p, x, 0.5 * h);
    let value = (4.0 * fine - coarse) / 3.0;
    if !value.is_finite() {
        return Err(Error::Domain("non-finite finite-difference result".into()));
    }
    let disagreement = (fine - coarse).abs() / value.abs().max(magnitude).max(f64::MIN_POSITIVE);
    if disagreement > RICHARDSON_LIMIT {
        return Err(Error::IllConditioned { value, disagreement });
    }
    Ok(value)
}

/// `-div(V∇f)/f`.
pub fn divergence_oracle<V, F>(v: &V, f: &F, x: &[f64], h: f64) -> Result<f64>
where
    V: Fn(&[f64]) -> f64 + ?Sized,
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    divergence_oracle_p(v, f, 2.0, x, h)
}
