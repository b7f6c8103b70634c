//! Closed-form sharp constants and the branch points of the `p = 2`
//! constrained maximisation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{admissible_ckn, compute_k, CknParams, HardyParams, RegimeFamily};
use crate::weight::{h1, h_theta};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstantKind {
    Sharp,
    LowerBound,
    Conjectured,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ConstantBranch {
    #[serde(rename = "K_LE_0")]
    KLe0,
    #[serde(rename = "K_IN_0_1")]
    KIn01,
    #[serde(rename = "K_GT_1")]
    KGt1,
    BetaNonneg,
    BetaNeg,
    Ckn,
    GeneralK,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConstantResult {
    pub value: f64,
    pub kind: ConstantKind,
    pub branch: ConstantBranch,
}

/// Trial exponents for `f = |x'|^θ |x|^λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub theta: f64,
    pub lambda: f64,
}

impl ExponentPair {
    pub fn new(theta: f64, lambda: f64) -> Self {
        Self { theta, lambda }
    }
}

fn require_p2(params: &HardyParams) -> Result<()> {
    if params.p() != 2.0 {
        return Err(Error::Unsupported(format!("p = {} but this path requires p = 2", params.p())));
    }
    Ok(())
}

fn require_default_axis(params: &HardyParams) -> Result<()> {
    if !params.is_default_axis() {
        return Err(Error::Unsupported(format!(
            "k = {} differs from n - 1 = {}; use the general-k path",
            params.k(),
            params.n() - 1
        )));
    }
    Ok(())
}

fn p2_branch(k_value: f64, family: RegimeFamily) -> ConstantBranch {
    match family {
        RegimeFamily::KGt1 => ConstantBranch::KGt1,
        _ if k_value <= 0.0 => ConstantBranch::KLe0,
        _ => ConstantBranch::KIn01,
    }
}

/// `{(n-1+2α)² - (√max(K,1) - 1)²}/4`.
pub fn sharp_constant_p2(params: &HardyParams) -> Result<ConstantResult> {
    require_p2(params)?;
    require_default_axis(params)?;
    let regime = compute_k(params)?;
    let a = params.n() as f64 - 1.0 + 2.0 * params.alpha();
    let shift = regime.k_value.max(1.0).sqrt() - 1.0;
    Ok(ConstantResult {
        value: (a * a - shift * shift) / 4.0,
        kind: ConstantKind::Sharp,
        branch: p2_branch(regime.k_value, regime.family),
    })
}

/// Constant for general `p`: sharp `((k+pα)/p)^p` when `β ≥ 0`, the lower
/// bound `((k+pα+pβ)/p)^p` when `β < 0`, and the exact `p = 2` value when
/// `β < 0`, `p = 2`, `k = n - 1`.
pub fn sharp_constant_general_p(params: &HardyParams) -> Result<ConstantResult> {
    compute_k(params)?;
    let (k, p, alpha, beta) = (params.k() as f64, params.p(), params.alpha(), params.beta());
    if beta >= 0.0 {
        return Ok(ConstantResult {
            value: ((k + p * alpha) / p).powf(p),
            kind: ConstantKind::Sharp,
            branch: ConstantBranch::BetaNonneg,
        });
    }
    if p == 2.0 && params.is_default_axis() {
        return sharp_constant_p2(params);
    }
    let base = k + p * (alpha + beta);
    if base > 0.0 {
        return Ok(ConstantResult {
            value: (base / p).powf(p),
            kind: ConstantKind::LowerBound,
            branch: ConstantBranch::BetaNeg,
        });
    }
    Err(Error::Unsupported(format!(
        "beta < 0 with k + p(alpha+beta) = {base} <= 0 and p = {p}: no bound available"
    )))
}

/// `p = 2` constant for a general axis dimension `k`:
/// `{(k+2α)² - (√max(K,(n-k)²) - (n-k))²}/4`. Reduces to
/// [`sharp_constant_p2`] at `k = n - 1`; conjectured for `k < n - 1`.
pub fn sharp_constant_general_k_p2(params: &HardyParams) -> Result<ConstantResult> {
    require_p2(params)?;
    if params.is_default_axis() {
        return sharp_constant_p2(params);
    }
    let regime = compute_k(params)?;
    let a = params.k() as f64 + 2.0 * params.alpha();
    let m = params.codim() as f64;
    let shift = regime.k_value.max(m * m).sqrt() - m;
    Ok(ConstantResult {
        value: (a * a - shift * shift) / 4.0,
        kind: ConstantKind::Conjectured,
        branch: ConstantBranch::GeneralK,
    })
}

/// Dispatches to the most specific constant available for the instance.
pub fn hardy_constant(params: &HardyParams) -> Result<ConstantResult> {
    if params.p() == 2.0 {
        if params.beta() < 0.0 || params.is_default_axis() {
            return sharp_constant_general_k_p2(params);
        }
        return sharp_constant_general_p(params);
    }
    sharp_constant_general_p(params)
}

/// Vertex of `H`, `θ₀ = (1-n-2α)/2`.
pub fn theta0(params: &HardyParams) -> f64 {
    -(params.k() as f64 + 2.0 * params.alpha()) / 2.0
}

/// Smaller root of the constraint at `θ₀`: `λ₀ = -β - (1+√(1-K))/2`, `K ≤ 1`.
pub fn lambda0(params: &HardyParams, k_value: f64) -> f64 {
    -params.beta() - (1.0 + (1.0 - k_value).max(0.0).sqrt()) / 2.0
}

/// `(θ₁, λ₁) = ((-(n+2α)+√K)/2, -β-√K/2)` for `K > 0`.
pub fn branch_one(params: &HardyParams, k_value: f64) -> ExponentPair {
    let root = k_value.max(0.0).sqrt();
    let a = params.n() as f64 + 2.0 * params.alpha();
    ExponentPair::new((-a + root) / 2.0, -params.beta() - root / 2.0)
}

/// `(θ₂, λ₂) = (-(n+2α+√K)/2, -β+√K/2)` for `K > 0`.
pub fn branch_two(params: &HardyParams, k_value: f64) -> ExponentPair {
    let root = k_value.max(0.0).sqrt();
    let a = params.n() as f64 + 2.0 * params.alpha();
    ExponentPair::new(-(a + root) / 2.0, -params.beta() + root / 2.0)
}

/// Branch points of the regime, each with its `H₁` value. All lie on `H₂ = 0`.
pub fn branch_candidates(params: &HardyParams) -> Result<Vec<(ExponentPair, f64)>> {
    require_p2(params)?;
    require_default_axis(params)?;
    let regime = compute_k(params)?;
    let kv = regime.k_value;
    let with_value = |pair: ExponentPair| (pair, h1(pair.theta, pair.lambda, params));
    let th0 = theta0(params);
    let out = match regime.family {
        RegimeFamily::KGt1 => vec![with_value(branch_one(params, kv)), with_value(branch_two(params, kv))],
        _ if kv <= 0.0 => {
            // Larger root of λ² + (1+2β)λ + 2βθ₀ = 0.
            let lam = -params.beta() - 0.5 + (1.0 - kv).sqrt() / 2.0;
            vec![with_value(ExponentPair::new(th0, lam))]
        }
        _ => vec![with_value(ExponentPair::new(th0, lambda0(params, kv)))],
    };
    Ok(out)
}

/// `H(θ)` at both `K > 1` branch points; `H(θ₂) < H(θ₁)`.
pub fn branch_h_values(params: &HardyParams, k_value: f64) -> (f64, f64) {
    let one = branch_one(params, k_value);
    let two = branch_two(params, k_value);
    (h_theta(one.theta, params), h_theta(two.theta, params))
}

/// CKN constant `(n + p(α+γ₁))/p`; sharp when `α = β = μ` and `γ₃-γ₂+1 > 0`.
pub fn ckn_constant(params: &CknParams) -> Result<ConstantResult> {
    let flags = admissible_ckn(params);
    if !(flags.integrable && flags.balanced) {
        return Err(Error::Inadmissible(params.violations().join("; ")));
    }
    let p = params.p();
    let value = (params.n() as f64 + p * (params.alpha + params.gamma1)) / p;
    let tol = crate::params::CKN_TOLERANCE;
    let equal = (params.alpha - params.beta).abs() <= tol && (params.beta - params.mu).abs() <= tol;
    let kind = if equal && params.gamma3 - params.gamma2 + 1.0 > 0.0 {
        ConstantKind::Sharp
    } else {
        ConstantKind::LowerBound
    };
    Ok(ConstantResult { value, kind, branch: ConstantBranch::Ckn })
}
