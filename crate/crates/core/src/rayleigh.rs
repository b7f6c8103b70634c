//! Rayleigh quotients of the extremising families `v = |x'|^θ (r²+ε²)^{λ/2} η(r)`,
//! reduced to `(r, φ)` integrals with the sphere factors dropped, and their
//! extrapolation as `ε → 0` (then `σ → 0`).

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::closed_form::{branch_one, hardy_constant, lambda0, theta0, ConstantResult, ExponentPair};
use crate::error::{Error, Result};
use crate::fit::{eval_poly, fit_line, fit_poly};
use crate::params::{compute_k, HardyParams, RegimeFamily};
use crate::quadrature::{integrate_1d, integrate_2d, QuadratureSpec};
use crate::special::{cutoff_eta, cutoff_eta_prime};

/// Outer edge of the cutoff support.
const CUTOFF_SUPPORT: f64 = 2.0;
/// Fits whose RMS residual exceeds this fraction of the constant are rejected.
const FIT_TOLERANCE: f64 = 0.05;
const MIN_EPS_POINTS: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FamilyKind {
    P2KGt1,
    P2KEq1,
    P2KLt1,
    GeneralPBetaNonneg,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFamily {
    pub kind: FamilyKind,
    pub params: HardyParams,
    pub epsilon: f64,
    pub sigma: f64,
}

impl TestFamily {
    pub fn new(kind: FamilyKind, params: HardyParams, epsilon: f64, sigma: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
        }
        let regime = compute_k(&params)?;
        let p2 = matches!(kind, FamilyKind::P2KGt1 | FamilyKind::P2KEq1 | FamilyKind::P2KLt1);
        if p2 && (params.p() != 2.0 || !params.is_default_axis()) {
            return Err(Error::Unsupported("p = 2 families need p = 2 and k = n - 1".into()));
        }
        match kind {
            FamilyKind::P2KGt1 => {
                if regime.k_value <= 1.0 {
                    return Err(Error::InvalidInput(format!("K = {} is not above 1", regime.k_value)));
                }
                if sigma != 0.0 {
                    return Err(Error::InvalidInput("the K > 1 family takes sigma = 0".into()));
                }
            }
            FamilyKind::P2KEq1 => {
                if !(sigma > 0.0 && sigma < 1.0) {
                    return Err(Error::InvalidInput(format!("sigma must lie in (0, 1), got {sigma}")));
                }
            }
            FamilyKind::P2KLt1 => {
                if regime.k_value >= 1.0 {
                    return Err(Error::InvalidInput(format!("K = {} is not below 1", regime.k_value)));
                }
                let cap = (1.0 - regime.k_value).sqrt() / 2.0;
                if !(sigma > 0.0 && sigma < cap) {
                    return Err(Error::InvalidInput(format!("sigma must lie in (0, {cap}), got {sigma}")));
                }
            }
            FamilyKind::GeneralPBetaNonneg => {
                if params.beta() < 0.0 {
                    return Err(Error::Unsupported("the general-p family needs beta >= 0".into()));
                }
                if !(sigma > 0.0 && sigma < 1.0) {
                    return Err(Error::InvalidInput(format!("sigma must lie in (0, 1), got {sigma}")));
                }
            }
        }
        Ok(Self { kind, params, epsilon, sigma })
    }

    /// `(θ, λ)` of the family member (`θ = γ` for the general-p family).
    pub fn exponents(&self) -> ExponentPair {
        let prm = &self.params;
        let s = self.sigma;
        let kv = crate::params::k_value(prm.n(), prm.alpha(), prm.beta());
        match self.kind {
            FamilyKind::P2KGt1 => branch_one(prm, kv),
            FamilyKind::P2KEq1 => ExponentPair::new(theta0(prm) + s, -prm.beta() - 0.5 - s),
            FamilyKind::P2KLt1 => ExponentPair::new(theta0(prm) + s, lambda0(prm, kv)),
            FamilyKind::GeneralPBetaNonneg => {
                let p = prm.p();
                let gamma0 = -(prm.k() as f64 + p * prm.alpha()) / p;
                ExponentPair::new(gamma0 + s, -prm.beta() - prm.codim() as f64 / p - s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuotientRecord {
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
    /// Gradient decomposition `[J₁, J₂, J₃]` (p = 2 path only).
    pub terms: Option<[f64; 3]>,
}

/// Radial profile `g(r) = (r²+ε²)^{λ/2} η(r)` and its derivative.
#[derive(Debug, Clone, Copy)]
struct Radial {
    lambda: f64,
    eps: f64,
}

impl Radial {
    fn g(&self, r: f64) -> f64 {
        (r * r + self.eps * self.eps).powf(self.lambda / 2.0) * cutoff_eta(r)
    }

    fn g_prime(&self, r: f64) -> f64 {
        let q = r * r + self.eps * self.eps;
        let base = q.powf(self.lambda / 2.0);
        self.lambda * r * base / q * cutoff_eta(r) + base * cutoff_eta_prime(r)
    }
}

/// `∫₀² f(r) dr`, split at `ε` and `1` with `r = e^u` on `[ε, 1]` so the
/// transition at scale `ε` sits at an endpoint.
fn radial_integral<F: Fn(f64) -> f64>(f: F, eps: f64, spec: &QuadratureSpec) -> Result<f64> {
    let inner = integrate_1d(&f, 0.0, eps, spec)?.value;
    let middle = integrate_1d(
        |u| {
            let r = u.exp();
            f(r) * r
        },
        eps.ln(),
        0.0,
        spec,
    )?
    .value;
    let outer = integrate_1d(&f, 1.0, CUTOFF_SUPPORT, spec)?.value;
    Ok(inner + middle + outer)
}

/// Same split for `∫₀² ∫ f(r, φ) dφ dr`.
fn radial_integral_2d<F: Fn(f64, f64) -> f64>(
    f: F,
    eps: f64,
    phi: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<f64> {
    let inner = integrate_2d(&f, (0.0, eps), phi, spec)?.value;
    let middle = integrate_2d(
        |u, ph| {
            let r = u.exp();
            f(r, ph) * r
        },
        (eps.ln(), 0.0),
        phi,
        spec,
    )?
    .value;
    let outer = integrate_2d(&f, (1.0, CUTOFF_SUPPORT), phi, spec)?.value;
    Ok(inner + middle + outer)
}

fn check_exponent(exponent: f64, context: &str) -> Result<()> {
    if exponent > -1.0 {
        Ok(())
    } else {
        Err(Error::SingularParams { exponent, context: context.to_string() })
    }
}

/// `∫₀^π (sin φ)^a dφ`, folded onto `(0, π/2)`.
fn sin_integral(a: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(2.0 * integrate_1d(|ph| ph.sin().powf(a), 0.0, FRAC_PI_2, spec)?.value)
}

/// `p = 2` quotient for `v = |x'|^θ g(r)` with explicit exponents (`k = n-1`).
pub fn quotient_p2_with(
    params: &HardyParams,
    pair: ExponentPair,
    epsilon: f64,
    spec: &QuadratureSpec,
) -> Result<QuotientRecord> {
    if params.p() != 2.0 || !params.is_default_axis() {
        return Err(Error::Unsupported("quotient_p2 needs p = 2 and k = n - 1".into()));
    }
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let n = params.n() as f64;
    let (alpha, beta) = (params.alpha(), params.beta());
    let theta = pair.theta;
    let a_phi = 2.0 * theta + 2.0 * alpha + n - 2.0;
    let a_r = 2.0 * theta + 2.0 * alpha + 2.0 * beta + n - 1.0;
    check_exponent(a_phi, "angular exponent 2θ+2α+n-2")?;
    check_exponent(a_r, "radial exponent 2θ+2α+2β+n-1")?;

    let radial = Radial { lambda: pair.lambda, eps: epsilon };
    let s0 = sin_integral(a_phi, spec)?;
    let s2 = sin_integral(a_phi + 2.0, spec)?;
    let r0 = radial_integral(|r| r.powf(a_r) * radial.g(r).powi(2), epsilon, spec)?;
    let r2 = radial_integral(|r| r.powf(a_r + 2.0) * radial.g_prime(r).powi(2), epsilon, spec)?;
    let r3 = radial_integral(|r| r.powf(a_r + 1.0) * radial.g(r) * radial.g_prime(r), epsilon, spec)?;

    let j1 = theta * theta * s0 * r0;
    let j2 = s2 * r2;
    let j3 = 2.0 * theta * s2 * r3;
    let numerator = j1 + j2 + j3;
    let denominator = s0 * r0;
    Ok(QuotientRecord { numerator, denominator, quotient: numerator / denominator, terms: Some([j1, j2, j3]) })
}

pub fn quotient_p2(family: &TestFamily, spec: &QuadratureSpec) -> Result<QuotientRecord> {
    if family.kind == FamilyKind::GeneralPBetaNonneg {
        return Err(Error::InvalidInput("quotient_p2 takes a p = 2 family".into()));
    }
    quotient_p2_with(&family.params, family.exponents(), family.epsilon, spec)
}

/// General-p quotient for `v = |y|^γ g(r)`. The numerator does not factor and
/// is integrated over `(r, φ)` with `|y| = r sin φ`, `|x''| = r cos φ`.
pub fn quotient_general_p_with(
    params: &HardyParams,
    pair: ExponentPair,
    epsilon: f64,
    spec: &QuadratureSpec,
) -> Result<QuotientRecord> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let p = params.p();
    let (n, k) = (params.n() as f64, params.k() as f64);
    let (alpha, beta) = (params.alpha(), params.beta());
    let gamma = pair.theta;
    let e_sin = p * (alpha + gamma) + k - 1.0;
    let e_cos = n - k - 1.0;
    let e_r = p * (alpha + gamma) + beta * p + n - 1.0;
    check_exponent(e_sin, "angular exponent p(α+γ)+k-1")?;
    check_exponent(e_r, "radial exponent p(α+γ+β)+n-1")?;
    // φ over (0, π) folds to twice (0, π/2) when the complement is one axis.
    let fold = if params.is_default_axis() { 2.0 } else { 1.0 };
    let angular = move |ph: f64| {
        let s = ph.sin().powf(e_sin);
        if e_cos == 0.0 {
            s
        } else {
            s * ph.cos().powf(e_cos)
        }
    };
    let radial = Radial { lambda: pair.lambda, eps: epsilon };

    let numerator = fold
        * radial_integral_2d(
            |r, ph| {
                let g = radial.g(r);
                let gp = radial.g_prime(r);
                let sn = ph.sin();
                let big_g = (gamma * gamma * g * g + r * r * sn * sn * (gp * gp + 2.0 * gamma * g * gp / r)).max(0.0);
                angular(ph) * r.powf(e_r) * big_g.powf(p / 2.0)
            },
            epsilon,
            (0.0, FRAC_PI_2),
            spec,
        )?;
    let ang = fold * integrate_1d(angular, 0.0, FRAC_PI_2, spec)?.value;
    let rad = radial_integral(|r| r.powf(e_r) * radial.g(r).abs().powf(p), epsilon, spec)?;
    let denominator = ang * rad;
    Ok(QuotientRecord { numerator, denominator, quotient: numerator / denominator, terms: None })
}

pub fn quotient_general_p(family: &TestFamily, spec: &QuadratureSpec) -> Result<QuotientRecord> {
    if family.kind != FamilyKind::GeneralPBetaNonneg {
        return Err(Error::InvalidInput("quotient_general_p takes the general-p family".into()));
    }
    quotient_general_p_with(&family.params, family.exponents(), family.epsilon, spec)
}

pub fn quotient(family: &TestFamily, spec: &QuadratureSpec) -> Result<QuotientRecord> {
    match family.kind {
        FamilyKind::GeneralPBetaNonneg => quotient_general_p(family, spec),
        _ => quotient_p2(family, spec),
    }
}

/// Family used for a sharpness sweep of `params`.
pub fn select_family(params: &HardyParams) -> Result<FamilyKind> {
    let regime = compute_k(params)?;
    if params.p() == 2.0 && params.is_default_axis() {
        return Ok(match regime.family {
            RegimeFamily::KGt1 => FamilyKind::P2KGt1,
            RegimeFamily::KEq1 => FamilyKind::P2KEq1,
            RegimeFamily::KLt1 => FamilyKind::P2KLt1,
        });
    }
    if params.beta() >= 0.0 {
        return Ok(FamilyKind::GeneralPBetaNonneg);
    }
    Err(Error::Unsupported("no extremising family for beta < 0 unless p = 2 and k = n - 1".into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub epsilon: f64,
    pub sigma: f64,
    pub numerator: f64,
    pub denominator: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FitModel {
    /// `quotient = C' + c/|ln ε|`.
    InvLogEps,
    /// Limits linear in `σ`.
    LinearSigma,
    /// Numerator and denominator each affine in `|ln ε|`; limit is the slope ratio.
    LogSlopeRatio,
    /// Numerator and denominator each `ε^{-κ}(T + c ε^κ)`; limit is `T_num/T_den`.
    PowerEps,
    /// `w(σ)·num` and `w(σ)·den` quadratic in `σ`, with `w` the angular
    /// exponent plus one; limit is the ratio of intercepts.
    NormalizedSigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitInfo {
    pub model: FitModel,
    pub residual: f64,
}

/// `ε → 0` limit at one `σ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SigmaLimit {
    pub sigma: f64,
    pub limit: f64,
    pub model: FitModel,
    pub residual: f64,
    /// Limit scales of numerator and denominator (slopes in `|ln ε|` or
    /// power-law prefactors).
    pub numerator_scale: f64,
    pub denominator_scale: f64,
    /// Intercept of the plain `C' + c/|ln ε|` fit, for comparison.
    pub inv_log_limit: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub family: FamilyKind,
    pub rows: Vec<SweepRow>,
    pub extrapolated: f64,
    pub fit: FitInfo,
    pub sigma_limits: Vec<SigmaLimit>,
    /// Intercept of a straight-line fit of the `σ`-limits, for comparison.
    pub linear_sigma_limit: Option<f64>,
    pub constant: ConstantResult,
}

/// `ε ∈ {1e-2, …, 1e-6}`.
pub fn default_eps_list() -> Vec<f64> {
    (2..=6).map(|k| 10f64.powi(-k)).collect()
}

pub fn default_sigma_list() -> Vec<f64> {
    vec![0.2, 0.1, 0.05, 0.025]
}

/// Quadrature settings used for sweeps.
pub fn sweep_spec() -> QuadratureSpec {
    QuadratureSpec::default().with_rel_tol(1e-10)
}

fn check_fit(constant: f64, residual: f64) -> Result<()> {
    if !constant.is_finite() || !residual.is_finite() || residual > FIT_TOLERANCE * constant.abs() {
        return Err(Error::FitUnstable { constant, residual });
    }
    Ok(())
}

fn rms(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, count) = values.fold((0.0, 0usize), |(s, c), v| (s + v * v, c + 1));
    (sum / count.max(1) as f64).sqrt()
}

/// Intercept and RMS residual of `quotient = C' + c/|ln ε|`.
pub fn extrapolate_inv_log(eps: &[f64], quotients: &[f64]) -> Result<(f64, f64)> {
    let xs: Vec<f64> = eps.iter().map(|e| 1.0 / e.ln().abs()).collect();
    let fit = fit_line(&xs, quotients)?;
    Ok((fit.intercept, fit.rms))
}

impl TestFamily {
    /// Exponent of `sin φ` in the reduced integrals.
    pub fn angular_exponent(&self) -> f64 {
        let prm = &self.params;
        let e = self.exponents();
        let p = prm.p();
        p * (prm.alpha() + e.theta) + prm.k() as f64 - 1.0
    }

    /// Exponent `τ` with reduced radial integrands `~ r^{τ-1}` for `ε ≪ r < 1`:
    /// `τ = 0` gives `|ln ε|` growth, `τ < 0` growth like `ε^τ`.
    pub fn tail_exponent(&self) -> f64 {
        let prm = &self.params;
        let e = self.exponents();
        let p = prm.p();
        p * (prm.alpha() + e.theta) + p * prm.beta() + prm.n() as f64 + p * e.lambda
    }
}

const LOG_TAIL_TOLERANCE: f64 = 1e-9;

/// `ε → 0` limit of one `σ` slice from raw numerators and denominators.
fn eps_limit(sigma: f64, tau: f64, eps: &[f64], nums: &[f64], dens: &[f64]) -> Result<SigmaLimit> {
    let quotients: Vec<f64> = nums.iter().zip(dens).map(|(a, b)| a / b).collect();
    let (inv_log_limit, _) = extrapolate_inv_log(eps, &quotients)?;
    let (model, xs, yn, yd): (FitModel, Vec<f64>, Vec<f64>, Vec<f64>) = if tau.abs() <= LOG_TAIL_TOLERANCE {
        (FitModel::LogSlopeRatio, eps.iter().map(|e| e.ln().abs()).collect(), nums.to_vec(), dens.to_vec())
    } else if tau < 0.0 {
        let kappa = -tau;
        let scale: Vec<f64> = eps.iter().map(|e| e.powf(kappa)).collect();
        (
            FitModel::PowerEps,
            scale.clone(),
            nums.iter().zip(&scale).map(|(v, s)| v * s).collect(),
            dens.iter().zip(&scale).map(|(v, s)| v * s).collect(),
        )
    } else {
        return Err(Error::Unsupported(format!("family tail exponent {tau} > 0 has no epsilon singularity")));
    };
    let fn_ = fit_line(&xs, &yn)?;
    let fd = fit_line(&xs, &yd)?;
    let (numerator_scale, denominator_scale) = match model {
        FitModel::LogSlopeRatio => (fn_.slope, fd.slope),
        _ => (fn_.intercept, fd.intercept),
    };
    let limit = numerator_scale / denominator_scale;
    let residual = rms(xs.iter().zip(&quotients).map(|(x, q)| q - fn_.eval(*x) / fd.eval(*x)));
    check_fit(limit, residual)?;
    Ok(SigmaLimit { sigma, limit, model, residual, numerator_scale, denominator_scale, inv_log_limit })
}

/// `σ → 0` from per-`σ` limit scales weighted by `w(σ)`.
fn sigma_limit(limits: &[SigmaLimit], weights: &[f64]) -> Result<(f64, f64)> {
    let xs: Vec<f64> = limits.iter().map(|l| l.sigma).collect();
    let yn: Vec<f64> = limits.iter().zip(weights).map(|(l, w)| w * l.numerator_scale).collect();
    let yd: Vec<f64> = limits.iter().zip(weights).map(|(l, w)| w * l.denominator_scale).collect();
    let degree = (xs.len() - 1).min(2);
    let cn = fit_poly(&xs, &yn, degree)?;
    let cd = fit_poly(&xs, &yd, degree)?;
    let value = cn[0] / cd[0];
    let residual = rms(limits.iter().map(|l| l.limit - eval_poly(&cn, l.sigma) / eval_poly(&cd, l.sigma)));
    Ok((value, residual))
}

/// Sweeps the family selected by the regime over `eps_list` (and
/// `sigma_list`) and extrapolates to `ε → 0`, then `σ → 0`.
pub fn sweep_and_extrapolate(
    params: &HardyParams,
    eps_list: &[f64],
    sigma_list: &[f64],
    spec: &QuadratureSpec,
) -> Result<SweepResult> {
    let family = select_family(params)?;
    let constant = hardy_constant(params)?;
    if eps_list.len() < MIN_EPS_POINTS {
        return Err(Error::InvalidInput(format!("need at least {MIN_EPS_POINTS} epsilon values")));
    }
    if eps_list.iter().any(|e| !(*e > 0.0 && *e < 1.0)) || eps_list.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("epsilon list must be strictly decreasing inside (0, 1)".into()));
    }
    let sigmas: Vec<f64> = if family == FamilyKind::P2KGt1 {
        if !sigma_list.is_empty() {
            return Err(Error::InvalidInput("the K > 1 family takes no sigma list".into()));
        }
        vec![0.0]
    } else {
        if sigma_list.len() < 2 {
            return Err(Error::InvalidInput("this family needs at least two sigma values".into()));
        }
        let mut sorted = sigma_list.to_vec();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput("sigma values must be distinct".into()));
        }
        sigma_list.to_vec()
    };

    let mut rows = Vec::with_capacity(sigmas.len() * eps_list.len());
    let mut sigma_limits = Vec::with_capacity(sigmas.len());
    let mut weights = Vec::with_capacity(sigmas.len());
    for &sigma in &sigmas {
        let mut nums = Vec::with_capacity(eps_list.len());
        let mut dens = Vec::with_capacity(eps_list.len());
        let mut tau = 0.0;
        for &eps in eps_list {
            let fam = TestFamily::new(family, *params, eps, sigma)?;
            tau = fam.tail_exponent();
            if weights.len() < sigma_limits.len() + 1 {
                weights.push(fam.angular_exponent() + 1.0);
            }
            let rec = quotient(&fam, spec)?;
            nums.push(rec.numerator);
            dens.push(rec.denominator);
            rows.push(SweepRow {
                epsilon: eps,
                sigma,
                numerator: rec.numerator,
                denominator: rec.denominator,
                quotient: rec.quotient,
            });
        }
        sigma_limits.push(eps_limit(sigma, tau, eps_list, &nums, &dens)?);
    }

    if family == FamilyKind::P2KGt1 {
        let l = sigma_limits[0];
        return Ok(SweepResult {
            family,
            rows,
            extrapolated: l.limit,
            fit: FitInfo { model: l.model, residual: l.residual },
            sigma_limits,
            linear_sigma_limit: None,
            constant,
        });
    }
    let xs: Vec<f64> = sigma_limits.iter().map(|l| l.sigma).collect();
    let ys: Vec<f64> = sigma_limits.iter().map(|l| l.limit).collect();
    let linear_sigma_limit = Some(fit_line(&xs, &ys)?.intercept);
    let (extrapolated, residual) = sigma_limit(&sigma_limits, &weights)?;
    check_fit(extrapolated, residual)?;
    Ok(SweepResult {
        family,
        rows,
        extrapolated,
        fit: FitInfo { model: FitModel::NormalizedSigma, residual },
        sigma_limits,
        linear_sigma_limit,
        constant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::beta;

    fn eq_params() -> HardyParams {
        HardyParams::new(3, 2.0, -0.5, -0.5).unwrap()
    }

    #[test]
    fn product_matches_general_2d_path() {
        let params = eq_params();
        let eps = 1e-2;
        let fam = TestFamily::new(FamilyKind::P2KGt1, params, eps, 0.0).unwrap();
        let pair = fam.exponents();
        let spec = QuadratureSpec::default();
        let k = 3f64.sqrt();
        let radial = Radial { lambda: pair.lambda, eps };
        let a_r = 2.0 * params.beta() + k - 1.0;
        let rint = radial_integral(|r| radial.g(r).powi(2) * r.powf(a_r), eps, &spec).unwrap();
        let closed = beta((k - 1.0) / 2.0, 0.5).unwrap() * rint;
        let a_phi = k - 2.0;
        let general = 2.0
            * radial_integral_2d(
                |r, ph| ph.sin().powf(a_phi) * r.powf(a_r) * radial.g(r).powi(2),
                eps,
                (0.0, FRAC_PI_2),
                &spec,
            )
            .unwrap();
        let rec = quotient_p2(&fam, &spec).unwrap();
        assert!((general / closed - 1.0).abs() < 1e-8, "{general} vs {closed}");
        assert!((rec.denominator / closed - 1.0).abs() < 1e-8);
    }

    #[test]
    fn k_gt_one_quotient_above_constant_and_decreasing() {
        let params = eq_params();
        let c = (2.0 * 3f64.sqrt() - 3.0) / 4.0;
        let spec = sweep_spec();
        let q3 = quotient_p2(&TestFamily::new(FamilyKind::P2KGt1, params, 1e-3, 0.0).unwrap(), &spec).unwrap();
        let q5 = quotient_p2(&TestFamily::new(FamilyKind::P2KGt1, params, 1e-5, 0.0).unwrap(), &spec).unwrap();
        assert!(q3.quotient > c && q3.quotient < c + 1.0, "{q3:?}");
        assert!(q5.quotient < q3.quotient);
        let t = q3.terms.unwrap();
        assert!((t[0] + t[1] + t[2] - q3.numerator).abs() <= 1e-14 * q3.numerator.abs());
    }

    #[test]
    fn k_lt_one_quotient_near_vertex_value() {
        let params = HardyParams::new(3, 2.0, 0.0, 0.0).unwrap();
        let fam = TestFamily::new(FamilyKind::P2KLt1, params, 1e-4, 0.05).unwrap();
        let q = quotient_p2(&fam, &sweep_spec()).unwrap();
        assert!((q.quotient - 1.0).abs() < 0.2, "{q:?}");
        assert!(q.quotient >= 1.0 * (1.0 - 1e-6));
    }

    #[test]
    fn general_p_quotient_above_constant_and_slopes_match_angular_limit() {
        let params = HardyParams::new(3, 3.0, 0.0, 0.5).unwrap();
        let spec = sweep_spec();
        let c = 8.0 / 27.0;
        let eps = [1e-4, 1e-5];
        let recs: Vec<QuotientRecord> = eps
            .iter()
            .map(|&e| {
                let fam = TestFamily::new(FamilyKind::GeneralPBetaNonneg, params, e, 0.05).unwrap();
                assert!(fam.tail_exponent().abs() < 1e-12);
                quotient_general_p(&fam, &spec).unwrap()
            })
            .collect();
        for r in &recs {
            assert!(r.quotient >= c * (1.0 - 1e-6));
        }
        // Ratio of |ln ε|-slopes against the ε → 0 angular limit computed
        // independently (30-digit quadrature) at σ = 0.05.
        let dl = 10f64.ln();
        let slope_n = (recs[1].numerator - recs[0].numerator) / dl;
        let slope_d = (recs[1].denominator - recs[0].denominator) / dl;
        assert!((slope_n / slope_d - 0.593306685443978192).abs() < 1e-7, "{}", slope_n / slope_d);
    }

    #[test]
    fn general_p_reduces_to_p2() {
        let params = HardyParams::new(3, 2.0, 0.0, 0.0).unwrap();
        let fam = TestFamily::new(FamilyKind::GeneralPBetaNonneg, params, 1e-4, 0.05).unwrap();
        let spec = sweep_spec();
        let gp = quotient_general_p(&fam, &spec).unwrap();
        let p2 = quotient_p2_with(&params, fam.exponents(), 1e-4, &spec).unwrap();
        assert!((gp.quotient / p2.quotient - 1.0).abs() < 1e-6, "{} vs {}", gp.quotient, p2.quotient);
        assert!((gp.denominator / p2.denominator - 1.0).abs() < 1e-6);
    }

    #[test]
    fn family_invariants_enforced() {
        let general = HardyParams::new(3, 3.0, 0.0, 0.5).unwrap();
        assert!(TestFamily::new(FamilyKind::GeneralPBetaNonneg, general, 1e-3, 0.0).is_err());
        assert!(TestFamily::new(FamilyKind::P2KGt1, eq_params(), 1e-3, 0.1).is_err());
        assert!(TestFamily::new(FamilyKind::P2KGt1, eq_params(), 1.5, 0.0).is_err());
        let zero = HardyParams::new(3, 2.0, 0.0, 0.0).unwrap();
        assert!(TestFamily::new(FamilyKind::P2KLt1, zero, 1e-3, 0.6).is_err());
        assert!(TestFamily::new(FamilyKind::P2KGt1, zero, 1e-3, 0.0).is_err());
    }

    #[test]
    fn singular_exponents_rejected() {
        let params = HardyParams::new(3, 2.0, 0.0, 0.0).unwrap();
        let bad = ExponentPair::new(-1.6, 0.0);
        assert!(matches!(quotient_p2_with(&params, bad, 1e-3, &sweep_spec()), Err(Error::SingularParams { .. })));
    }

    #[test]
    fn sweep_input_validation() {
        let spec = sweep_spec();
        let params = eq_params();
        assert!(sweep_and_extrapolate(&params, &[1e-2, 1e-3], &[], &spec).is_err());
        assert!(sweep_and_extrapolate(&params, &[1e-2, 1e-3, 1e-4, 1e-4], &[], &spec).is_err());
        assert!(sweep_and_extrapolate(&params, &default_eps_list(), &[0.1, 0.2], &spec).is_err());
        let neg = HardyParams::new(3, 3.0, 0.0, -0.2).unwrap();
        assert!(matches!(select_family(&neg), Err(Error::Unsupported(_))));
    }
}
