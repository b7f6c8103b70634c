//! Quadrature checks of the ground-state identities on compactly supported
//! test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bump::{power_law_gradient, BumpFunction, TestFunction};
use crate::closed_form::{ckn_constant, hardy_constant, ExponentPair};
use crate::error::{Error, Result};
use crate::params::{admissible_ckn, admissible_hardy, CknParams, HardyParams, CKN_TOLERANCE};
use crate::quadrature::{integrate_1d, QuadratureSpec};
use crate::weight::{adapted_step, default_step, divergence_oracle_p, weight_general_p, weight_p2, Norms, Trial, WeightSpec};

/// Negative values of `R` above `-R_TOLERANCE·scale` are rounding noise.
pub const R_TOLERANCE: f64 = 1e-12;

/// Tensor Gauss–Legendre rule used over the support box of a test function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxRule {
    pub panels: usize,
    pub degree: usize,
}

impl Default for BoxRule {
    fn default() -> Self {
        Self { panels: 4, degree: 20 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub lhs: f64,
    pub rhs_terms: Vec<NamedValue>,
    pub residual_rel: f64,
    /// `lhs - (1/p)∫div(V|F|^{p-2}F)|u|^p` for the CKN identity.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
    /// Largest relative error of the closed-form CKN weight against differences.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight_check_rel: Option<f64>,
}

impl IdentityReport {
    fn new(lhs: f64, rhs_terms: Vec<(&str, f64)>) -> Self {
        let sum: f64 = rhs_terms.iter().map(|t| t.1).sum();
        let abs: f64 = rhs_terms.iter().map(|t| t.1.abs()).sum();
        let residual_rel = (lhs - sum).abs() / (lhs.abs() + abs + 1e-300);
        Self {
            lhs,
            rhs_terms: rhs_terms.into_iter().map(|(n, v)| NamedValue { name: n.to_string(), value: v }).collect(),
            residual_rel,
            slack: None,
            weight_check_rel: None,
        }
    }

    pub fn rhs_sum(&self) -> f64 {
        self.rhs_terms.iter().map(|t| t.value).sum()
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.rhs_terms.iter().find(|t| t.name == name).map(|t| t.value)
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Unclamped `(p-1)|Y|^p + |X|^p + p|Y|^{p-2}⟨Y,X⟩`, with the last term
/// taken as its limit 0 at `Y = 0`.
fn r_raw(x: &[f64], y: &[f64], p: f64) -> f64 {
    let ny = norm(y);
    let nx = norm(x);
    let cross = if ny == 0.0 { 0.0 } else { ny.powf(p - 2.0) * dot(y, x) };
    (p - 1.0) * ny.powf(p) + nx.powf(p) + p * cross
}

fn r_clamped(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    let r = r_raw(x, y, p);
    if r >= 0.0 {
        return Ok(r);
    }
    let scale = 1f64.max(norm(x).powf(p) + (p - 1.0) * norm(y).powf(p));
    if r >= -R_TOLERANCE * scale {
        Ok(0.0)
    } else {
        Err(Error::NegativeR(r))
    }
}

/// `R(X, Y) = (p-1)|Y|^p + |X|^p + p|Y|^{p-2}⟨Y, X⟩`, clamped at zero.
pub fn r_functional(x: &[f64], y: &[f64], p: f64) -> Result<f64> {
    if !(p > 1.0 && p.is_finite()) {
        return Err(Error::InvalidInput(format!("p = {p} must exceed 1")));
    }
    if x.len() != y.len() {
        return Err(Error::InvalidInput("X and Y must have the same length".into()));
    }
    if p < 2.0 && norm(y) == 0.0 {
        return Err(Error::InvalidInput("Y must be nonzero when p < 2".into()));
    }
    r_clamped(x, y, p)
}

/// Integrates `M` quantities over the support box of `u`; `g` is only called
/// inside the support ball and may fail.
fn integrate_support<const M: usize, G>(u: &dyn TestFunction, rule: &BoxRule, mut g: G) -> Result<[f64; M]>
where
    G: FnMut(&[f64]) -> Result<[f64; M]>,
{
    if rule.panels == 0 || rule.degree == 0 {
        return Err(Error::InvalidInput("box rule needs at least one panel and node".into()));
    }
    let c = u.center().to_vec();
    let r = u.support_radius();
    let lo: Vec<f64> = c.iter().map(|v| v - r).collect();
    let hi: Vec<f64> = c.iter().map(|v| v + r).collect();
    let mut failure = None;
    let out = crate::quadrature::integrate_box::<M, _>(
        |x| {
            if failure.is_some() {
                return [0.0; M];
            }
            let d2: f64 = x.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum();
            if d2 >= r * r {
                return [0.0; M];
            }
            match g(x) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    [0.0; M]
                }
            }
        },
        &lo,
        &hi,
        rule.panels,
        rule.degree,
    );
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

fn check_dim(u: &dyn TestFunction, n: usize) -> Result<()> {
    if u.dim() != n {
        return Err(Error::InvalidInput(format!("test function lives in dimension {}, expected {n}", u.dim())));
    }
    Ok(())
}

/// Richardson-extrapolated central-difference gradient of `g`.
fn fd_gradient<G: Fn(&[f64]) -> f64>(g: &G, x: &[f64], h: f64, out: &mut [f64]) {
    let mut z = x.to_vec();
    for i in 0..x.len() {
        let xi = x[i];
        let mut central = |step: f64| {
            z[i] = xi + step;
            let a = g(&z);
            z[i] = xi - step;
            let b = g(&z);
            z[i] = xi;
            (a - b) / (2.0 * step)
        };
        let coarse = central(h);
        let fine = central(0.5 * h);
        out[i] = (4.0 * fine - coarse) / 3.0;
    }
}

/// `∫V|∇u|² = ∫(-div(V∇f)/f)u² + ∫Vf²|∇(u/f)|²` for `p = 2`.
pub fn verify_e2(weight: &WeightSpec, u: &dyn TestFunction, rule: &BoxRule) -> Result<IdentityReport> {
    let prm = &weight.params;
    if prm.p() != 2.0 {
        return Err(Error::Unsupported("verify_e2 requires p = 2".into()));
    }
    check_dim(u, prm.n())?;
    u.check_support(prm.k())?;
    let n = prm.n();
    let h = 1e-3 * u.support_radius();
    let quotient = |x: &[f64]| u.value(x) / weight.f(x);
    let mut grad = vec![0.0; n];
    let mut gq = vec![0.0; n];
    let [lhs, w, rem] = integrate_support::<3, _>(u, rule, |x| {
        let val = u.eval(x, &mut grad);
        let v = weight.v(x);
        let f = weight.f(x);
        fd_gradient(&quotient, x, h, &mut gq);
        Ok([v * dot(&grad, &grad), weight_p2(x, weight)? * val * val, v * f * f * dot(&gq, &gq)])
    })?;
    Ok(IdentityReport::new(lhs, vec![("weight", w), ("remainder", rem)]))
}

/// `-div(V|∇f|^{p-2}∇f)/f^{p-1}`, closed form where available.
fn ground_state_weight(weight: &WeightSpec, x: &[f64]) -> Result<f64> {
    match weight.trial {
        Trial::Gamma(_) => weight_general_p(x, weight),
        Trial::Pair(pair) if pair.lambda == 0.0 => weight_general_p(x, weight),
        Trial::Pair(_) if weight.params.p() == 2.0 => weight_p2(x, weight),
        Trial::Pair(_) => {
            let v = |z: &[f64]| weight.v(z);
            let f = |z: &[f64]| weight.f(z);
            divergence_oracle_p(&v, &f, weight.params.p(), x, adapted_step(x, weight.params.k()))
        }
    }
}

/// `∫V|∇u|^p = ∫(-div(V|∇f|^{p-2}∇f)/f^{p-1})|u|^p + ∫V R(∇u, -u∇f/f)`.
pub fn verify_ep(weight: &WeightSpec, u: &dyn TestFunction, rule: &BoxRule) -> Result<IdentityReport> {
    let prm = &weight.params;
    let p = prm.p();
    if p <= 1.0 {
        return Err(Error::InvalidInput(format!("verify_ep requires p > 1, got {p}")));
    }
    check_dim(u, prm.n())?;
    u.check_support(prm.k())?;
    let e = weight.exponents();
    if p < 2.0 && e.theta == 0.0 && e.lambda == 0.0 {
        return Err(Error::InvalidInput("p < 2 needs a trial with nonvanishing gradient".into()));
    }
    let n = prm.n();
    let mut grad = vec![0.0; n];
    let mut gf = vec![0.0; n];
    let mut y = vec![0.0; n];
    let [lhs, w, rem] = integrate_support::<3, _>(u, rule, |x| {
        let val = u.eval(x, &mut grad);
        let f = power_law_gradient(weight, x, &mut gf);
        for i in 0..n {
            y[i] = -val * gf[i] / f;
        }
        let v = weight.v(x);
        let wx = ground_state_weight(weight, x)?;
        Ok([v * norm(&grad).powf(p), wx * val.abs().powf(p), v * r_clamped(&grad, &y, p)?])
    })?;
    Ok(IdentityReport::new(lhs, vec![("weight", w), ("remainder", rem)]))
}

/// `V = |x'|^{pμ}|x|^{pγ₂}` of the CKN identity (`x'` = first `n-1` coordinates).
pub fn ckn_v(ckn: &CknParams, x: &[f64]) -> f64 {
    let nm = Norms::of(x, ckn.n() - 1);
    let p = ckn.p();
    nm.y.powf(p * ckn.mu) * nm.x.powf(p * ckn.gamma2)
}

/// `F(x) = |x'|^{β-μ}|x|^{γ₃-γ₂-1}x`.
pub fn ckn_field(ckn: &CknParams, x: &[f64]) -> Vec<f64> {
    let nm = Norms::of(x, ckn.n() - 1);
    let s = nm.y.powf(ckn.beta - ckn.mu) * nm.x.powf(ckn.gamma3 - ckn.gamma2 - 1.0);
    x.iter().map(|v| s * v).collect()
}

/// `|F(x)| = |x'|^{β-μ}|x|^{γ₃-γ₂}`.
pub fn ckn_field_norm(ckn: &CknParams, x: &[f64]) -> f64 {
    let nm = Norms::of(x, ckn.n() - 1);
    nm.y.powf(ckn.beta - ckn.mu) * nm.x.powf(ckn.gamma3 - ckn.gamma2)
}

/// `[n+p(α+γ₁)]|x'|^{αp}|x|^{γ₁p}`, equal to `div(V|F|^{p-2}F)` under normalization.
pub fn ckn_weight(ckn: &CknParams, x: &[f64]) -> f64 {
    let nm = Norms::of(x, ckn.n() - 1);
    let p = ckn.p();
    (ckn.n() as f64 + p * (ckn.alpha + ckn.gamma1)) * nm.y.powf(p * ckn.alpha) * nm.x.powf(p * ckn.gamma1)
}

/// `div(V|F|^{p-2}F)` by Richardson-extrapolated central differences.
pub fn ckn_divergence_fd(ckn: &CknParams, x: &[f64]) -> f64 {
    let p = ckn.p();
    let h = default_step(x);
    let component = |z: &[f64], i: usize| {
        let f = ckn_field(ckn, z);
        ckn_v(ckn, z) * norm(&f).powf(p - 2.0) * f[i]
    };
    let mut z = x.to_vec();
    let mut total = 0.0;
    for i in 0..x.len() {
        let xi = x[i];
        let mut central = |step: f64| {
            z[i] = xi + step;
            let a = component(&z, i);
            z[i] = xi - step;
            let b = component(&z, i);
            z[i] = xi;
            (a - b) / (2.0 * step)
        };
        let coarse = central(h);
        let fine = central(0.5 * h);
        total += (4.0 * fine - coarse) / 3.0;
    }
    total
}

/// Largest relative error of [`ckn_weight`] against [`ckn_divergence_fd`].
pub fn ckn_weight_check(ckn: &CknParams, points: &[Vec<f64>]) -> Result<f64> {
    if points.is_empty() {
        return Err(Error::EmptyInput("no sample points".into()));
    }
    let mut worst: f64 = 0.0;
    for x in points {
        if x.len() != ckn.n() {
            return Err(Error::InvalidInput("sample point has the wrong dimension".into()));
        }
        let exact = ckn_weight(ckn, x);
        let fd = ckn_divergence_fd(ckn, x);
        worst = worst.max((fd - exact).abs() / exact.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// Uniform sample of `count` points in the support ball of `u`.
fn support_samples(u: &dyn TestFunction, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = u.support_radius();
    let n = u.dim();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-r..r)).collect();
        if norm(&d) < r {
            out.push(u.center().iter().zip(&d).map(|(c, v)| c + v).collect());
        }
    }
    out
}

fn require_normalized(ckn: &CknParams) -> Result<()> {
    let flags = admissible_ckn(ckn);
    if !flags.normalized {
        return Err(Error::Inadmissible(
            "CKN identity needs alpha*p = beta(p-1)+mu and gamma1*p = gamma3(p-1)+gamma2-1".into(),
        ));
    }
    Ok(())
}

/// Checks `(∫V|∇u|^p)^{1/p}(∫V|F|^p|u|^p)^{(p-1)/p}
/// = (1/p)∫div(V|F|^{p-2}F)|u|^p + ∫V/(pκ₀)R(∇u, uκ₀^{1/(p-1)}F)`
/// with `κ₀^{p/(p-1)} = ∫V|∇u|^p / ∫V|F|^p|u|^p`.
pub fn verify_cknp(ckn: &CknParams, u: &dyn TestFunction, rule: &BoxRule) -> Result<IdentityReport> {
    require_normalized(ckn)?;
    let n = ckn.n();
    check_dim(u, n)?;
    u.check_support(n - 1)?;
    let p = ckn.p();
    let mut grad = vec![0.0; n];
    let [i1, i2, iw] = integrate_support::<3, _>(u, rule, |x| {
        let val = u.eval(x, &mut grad);
        let v = ckn_v(ckn, x);
        let up = val.abs().powf(p);
        Ok([v * norm(&grad).powf(p), v * ckn_field_norm(ckn, x).powf(p) * up, ckn_weight(ckn, x) * up])
    })?;
    let weight_check = ckn_weight_check(ckn, &support_samples(u, 20, 0x5eed))?;
    if i1 == 0.0 && i2 == 0.0 {
        let mut report = IdentityReport::new(0.0, vec![("weight", iw / p), ("remainder", 0.0)]);
        report.slack = Some(-iw / p);
        report.weight_check_rel = Some(weight_check);
        return Ok(report);
    }
    if !(i1 > 0.0 && i2 > 0.0) {
        return Err(Error::Domain(format!("degenerate CKN integrals {i1:e}, {i2:e}")));
    }
    let s = (i1 / i2).powf(1.0 / p);
    let kappa = s.powf(p - 1.0);
    let mut y = vec![0.0; n];
    let [rem] = integrate_support::<1, _>(u, rule, |x| {
        let val = u.eval(x, &mut grad);
        let f = ckn_field(ckn, x);
        for i in 0..n {
            y[i] = val * s * f[i];
        }
        Ok([ckn_v(ckn, x) / (p * kappa) * r_clamped(&grad, &y, p)?])
    })?;
    let lhs = i1.powf(1.0 / p) * i2.powf((p - 1.0) / p);
    let mut report = IdentityReport::new(lhs, vec![("weight", iw / p), ("remainder", rem)]);
    report.slack = Some(lhs - iw / p);
    report.weight_check_rel = Some(weight_check);
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtremalRecord {
    pub quotient: f64,
    pub constant: f64,
    pub residual_r_max: f64,
    /// Truncation radius at which the tail test passed.
    pub r_max: f64,
    /// `κ₀^{1/(p-1)}`, equal to `γ₃-γ₂+1`.
    pub kappa_root: f64,
}

const EXTREMAL_DELTA: f64 = 1e-6;
const EXTREMAL_TAIL: f64 = 1e-8;
const EXTREMAL_MAX_RADIUS: f64 = 1e6;

/// `∫_δ^{R} ` of `g` with `R` doubled from 1 until the mass on `(R, 2R)` is
/// below the tail fraction. Returns the integral and the final radius.
fn truncated_radial<G: Fn(f64) -> f64>(g: G, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let mut radius = 1.0;
    let mut total = integrate_1d(&g, EXTREMAL_DELTA, radius, spec)?.value;
    loop {
        let tail = integrate_1d(&g, radius, 2.0 * radius, spec)?.value;
        total += tail;
        radius *= 2.0;
        let fraction = tail.abs() / total.abs().max(f64::MIN_POSITIVE);
        if fraction <= EXTREMAL_TAIL {
            return Ok((total, radius));
        }
        if radius > EXTREMAL_MAX_RADIUS {
            return Err(Error::Truncation { radius, tail_fraction: fraction });
        }
    }
}

/// CKN quotient of `u₀ = exp(-|x|^m)`, `m = γ₃-γ₂+1`, for which
/// `∇u₀ = -u₀ m F` and the remainder vanishes identically.
pub fn ckn_extremal_check(ckn: &CknParams, spec: &QuadratureSpec) -> Result<ExtremalRecord> {
    let constant = ckn_constant(ckn)?.value;
    if (ckn.alpha - ckn.beta).abs() > CKN_TOLERANCE || (ckn.beta - ckn.mu).abs() > CKN_TOLERANCE {
        return Err(Error::Unsupported("extremal check needs alpha = beta = mu".into()));
    }
    let m = ckn.gamma3 - ckn.gamma2 + 1.0;
    if !(m > 0.0) {
        return Err(Error::Unsupported(format!("extremal check needs gamma3 - gamma2 + 1 > 0, got {m}")));
    }
    let n = ckn.n() as f64;
    let p = ckn.p();
    // the common angular factor |x'|^{pα} cancels in the quotient
    let base = p * ckn.alpha + n - 1.0;
    let (i1, r1) = truncated_radial(
        |r| r.powf(p * ckn.gamma2 + base) * (m * r.powf(m - 1.0)).powf(p) * (-p * r.powf(m)).exp(),
        spec,
    )?;
    let (i2, r2) = truncated_radial(|r| r.powf(p * ckn.gamma3 + base) * (-p * r.powf(m)).exp(), spec)?;
    let (i0, r0) = truncated_radial(|r| r.powf(p * ckn.gamma1 + base) * (-p * r.powf(m)).exp(), spec)?;
    let quotient = i1.powf(1.0 / p) * i2.powf((p - 1.0) / p) / i0;
    let r_max = r0.max(r1).max(r2);

    // R(∇u₀, u₀ m F) along a ray off both singular sets
    let dim = ckn.n();
    let dir: Vec<f64> = vec![1.0 / (dim as f64).sqrt(); dim];
    let mut residual: f64 = 0.0;
    let samples = 200;
    for j in 0..samples {
        let t = j as f64 / (samples - 1) as f64;
        let r = EXTREMAL_DELTA * (r_max / EXTREMAL_DELTA).powf(t);
        let x: Vec<f64> = dir.iter().map(|d| r * d).collect();
        let u0 = (-r.powf(m)).exp();
        let du = -m * r.powf(m - 1.0) * u0;
        let grad: Vec<f64> = dir.iter().map(|d| du * d).collect();
        let y: Vec<f64> = ckn_field(ckn, &x).iter().map(|f| u0 * m * f).collect();
        residual = residual.max(r_raw(&grad, &y, p).abs());
    }
    Ok(ExtremalRecord { quotient, constant, residual_r_max: residual, r_max, kappa_root: m })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpotRecord {
    pub min_quotient: f64,
    pub constant: f64,
    pub quotients: Vec<f64>,
}

/// Rayleigh quotients `∫V|∇u|^p / ∫|y|^{pα}|x|^{pβ}|u|^p` of the given bumps.
pub fn hardy_spot_test(params: &HardyParams, bumps: &[BumpFunction], rule: &BoxRule) -> Result<SpotRecord> {
    if bumps.is_empty() {
        return Err(Error::EmptyInput("no bumps supplied".into()));
    }
    if !admissible_hardy(params) {
        return Err(Error::Inadmissible(params.violations().join("; ")));
    }
    let constant = hardy_constant(params)?.value;
    let spec = WeightSpec::gamma(*params, 0.0);
    let p = params.p();
    let mut quotients = Vec::with_capacity(bumps.len());
    for u in bumps {
        check_dim(u, params.n())?;
        u.check_support(params.k())?;
        let mut grad = vec![0.0; params.n()];
        let [num, den] = integrate_support::<2, _>(u, rule, |x| {
            let val = u.eval(x, &mut grad);
            Ok([spec.v(x) * norm(&grad).powf(p), spec.rhs_weight(x) * val.abs().powf(p)])
        })?;
        if !(den > 0.0) {
            return Err(Error::Domain("bump has zero weighted mass".into()));
        }
        quotients.push(num / den);
    }
    let min_quotient = quotients.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SpotRecord { min_quotient, constant, quotients })
}

/// Generator for configuration `index` of a seeded batch; independent of
/// evaluation order.
pub fn config_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Random bump of random degree whose support clears `{y = 0}`; width is
/// a tenth of the center's norm.
pub fn random_bump<R: Rng>(rng: &mut R, n: usize, k: usize) -> BumpFunction {
    loop {
        let radius = rng.gen_range(0.5..2.0);
        let d: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let len = norm(&d);
        if !(len > 1e-3 && len <= 1.0) {
            continue;
        }
        let center: Vec<f64> = d.iter().map(|v| radius * v / len).collect();
        let width = 0.1 * radius;
        if norm(&center[..k]) <= 3.5 * width {
            continue;
        }
        let degree = rng.gen_range(0..=3usize);
        let count = crate::bump::monomials(n, degree).len();
        let coefficients = (0..count).map(|_| rng.gen_range(-1.0..1.0)).collect();
        return BumpFunction::new(center, width, degree, coefficients).expect("valid bump");
    }
}

/// Like [`random_bump`] but with `P > 0` on the support ball: the constant
/// term dominates the other monomials on `|z| <= 2`. Keeps `|u|^p` smooth
/// for `p < 2`.
pub fn random_positive_bump<R: Rng>(rng: &mut R, n: usize, k: usize) -> BumpFunction {
    let mut bump = random_bump(rng, n, k);
    let exps = crate::bump::monomials(n, bump.polynomial_degree);
    let bound: f64 = bump
        .coefficients
        .iter()
        .zip(&exps)
        .skip(1)
        .map(|(c, e)| c.abs() * 2f64.powi(e.iter().sum::<u32>() as i32))
        .sum();
    bump.coefficients[0] = bound + rng.gen_range(0.1..1.0);
    bump
}

/// Random admissible Hardy parameters with `k = n-1`.
pub fn random_hardy_params<R: Rng>(rng: &mut R, n: usize, p: f64) -> HardyParams {
    loop {
        let a = rng.gen_range(-1.0..1.0);
        let b = rng.gen_range(-1.0..1.0);
        if let Ok(params) = HardyParams::new(n, p, a, b) {
            if admissible_hardy(&params) {
                return params;
            }
        }
    }
}

/// `(weight, bump)` for the `p = 2` identity.
pub fn random_e2_config<R: Rng>(rng: &mut R) -> (WeightSpec, BumpFunction) {
    let n = rng.gen_range(2..=3);
    let params = random_hardy_params(rng, n, 2.0);
    let pair = ExponentPair::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5));
    let bump = random_bump(rng, n, n - 1);
    (WeightSpec::pair(params, pair), bump)
}

/// `(weight, bump)` for the general-`p` identity; the trial is `|y|^γ` with
/// `|γ| >= 0.1`, or a two-exponent trial for `p = 2`. Bumps are positive for `p < 2`.
pub fn random_ep_config<R: Rng>(rng: &mut R, p: f64) -> (WeightSpec, BumpFunction) {
    let n = rng.gen_range(2..=3);
    let params = random_hardy_params(rng, n, p);
    let magnitude = rng.gen_range(0.1..1.5);
    let gamma = if rng.gen_bool(0.5) { magnitude } else { -magnitude };
    let weight = if p == 2.0 && rng.gen_bool(0.5) {
        WeightSpec::pair(params, ExponentPair::new(gamma, rng.gen_range(-1.5..1.5)))
    } else {
        WeightSpec::gamma(params, gamma)
    };
    let bump = if p < 2.0 { random_positive_bump(rng, n, n - 1) } else { random_bump(rng, n, n - 1) };
    (weight, bump)
}

/// Normalized, balanced and integrable CKN parameters with a bump.
pub fn random_ckn_config<R: Rng>(rng: &mut R) -> (CknParams, BumpFunction) {
    const PS: [f64; 3] = [1.5, 2.0, 3.0];
    loop {
        let n = rng.gen_range(2..=3);
        let p = PS[rng.gen_range(0..PS.len())];
        let beta = rng.gen_range(-0.2..0.5);
        let mu = rng.gen_range(-0.2..0.5);
        let gamma2 = rng.gen_range(-0.5..0.5);
        let gamma3 = rng.gen_range(-0.5..0.5);
        let alpha = (beta * (p - 1.0) + mu) / p;
        let gamma1 = (gamma3 * (p - 1.0) + gamma2 - 1.0) / p;
        let Ok(ckn) = CknParams::new(n, p, alpha, beta, mu, gamma1, gamma2, gamma3) else { continue };
        if admissible_ckn(&ckn).all() {
            let bump = if p < 2.0 { random_positive_bump(rng, n, n - 1) } else { random_bump(rng, n, n - 1) };
            return (ckn, bump);
        }
    }
}
