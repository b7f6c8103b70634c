//! Inequality instances and the admissibility predicates that gate every
//! other computation.
//!
//! A Hardy instance is `‖|x|^β |y|^{α+1} ∇u‖_p ≥ C ‖|x|^β |y|^α u‖_p` where
//! `x = (y, x'') ∈ ℝ^k × ℝ^{n-k}`. The default axis split is `k = n - 1`,
//! i.e. `y = x' = (x_1, …, x_{n-1})`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance used to route `K` into the critical `K = 1` family.
pub const REGIME_TOLERANCE: f64 = 1e-9;

/// Absolute tolerance for the equality constraints of a CKN instance.
pub const CKN_TOLERANCE: f64 = 1e-12;

/// An anisotropic Hardy inequality instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyParams {
    n: usize,
    k: usize,
    p: f64,
    alpha: f64,
    beta: f64,
}

impl HardyParams {
    /// Builds an instance with the default axis dimension `k = n - 1`.
    pub fn new(n: usize, p: f64, alpha: f64, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension n = {n} must be at least 2")));
        }
        Self::with_k(n, n - 1, p, alpha, beta)
    }

    pub fn with_k(n: usize, k: usize, p: f64, alpha: f64, beta: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension n = {n} must be at least 2")));
        }
        if k < 1 || k > n - 1 {
            return Err(Error::InvalidInput(format!(
                "axis dimension k = {k} must satisfy 1 <= k <= n - 1 = {}",
                n - 1
            )));
        }
        if !p.is_finite() || p < 1.0 {
            return Err(Error::InvalidInput(format!("exponent p = {p} must be finite and >= 1")));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidInput("alpha and beta must be finite".into()));
        }
        Ok(Self { n, k, p, alpha, beta })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// `n - k`, the codimension of the axis subspace `{y = 0}`.
    pub fn codim(&self) -> usize {
        self.n - self.k
    }

    pub fn is_default_axis(&self) -> bool {
        self.k == self.n - 1
    }

    /// Human-readable list of the violated local-integrability conditions.
    /// Empty iff the instance is admissible.
    pub fn violations(&self) -> Vec<String> {
        let (n, k, p) = (self.n as f64, self.k as f64, self.p);
        let mut out = Vec::new();
        if k + p * self.alpha <= 0.0 {
            if self.is_default_axis() {
                out.push(format!(
                    "p*alpha > 1-n fails: p*alpha = {} <= {}",
                    p * self.alpha,
                    1.0 - n
                ));
            } else {
                out.push(format!("k + p*alpha > 0 fails: k + p*alpha = {}", k + p * self.alpha));
            }
        }
        if p * (self.alpha + self.beta) <= -n {
            out.push(format!(
                "p*(alpha+beta) > -n fails: p*(alpha+beta) = {} <= {}",
                p * (self.alpha + self.beta),
                -n
            ));
        }
        out
    }
}

/// `|x|^β |y|^α ∈ L^p_loc` iff `k + pα > 0` and `p(α+β) > -n`.
pub fn admissible_hardy(params: &HardyParams) -> bool {
    let (n, k, p) = (params.n as f64, params.k as f64, params.p);
    k + p * params.alpha > 0.0 && p * (params.alpha + params.beta) > -n
}

/// `K = -4β(n + 2α + β)`.
pub fn k_value(n: usize, alpha: f64, beta: f64) -> f64 {
    -4.0 * beta * (n as f64 + 2.0 * alpha + beta)
}

/// The same quantity written as a difference of squares, `(n+2α)² - (n+2α+2β)²`.
pub fn k_value_squares(n: usize, alpha: f64, beta: f64) -> f64 {
    let a = n as f64 + 2.0 * alpha;
    let c = a + 2.0 * beta;
    a * a - c * c
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum RegimeFamily {
    KGt1,
    KEq1,
    KLt1,
}

impl RegimeFamily {
    pub fn classify(k_value: f64) -> Self {
        if (k_value - 1.0).abs() <= REGIME_TOLERANCE {
            Self::KEq1
        } else if k_value > 1.0 {
            Self::KGt1
        } else {
            Self::KLt1
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::KGt1 => "K_GT_1",
            Self::KEq1 => "K_EQ_1",
            Self::KLt1 => "K_LT_1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Regime {
    pub k_value: f64,
    pub family: RegimeFamily,
}

/// Computes `K` and classifies the regime. Rejects inadmissible instances.
pub fn compute_k(params: &HardyParams) -> Result<Regime> {
    if !admissible_hardy(params) {
        return Err(Error::Inadmissible(params.violations().join("; ")));
    }
    let k_value = k_value(params.n, params.alpha, params.beta);
    Ok(Regime { k_value, family: RegimeFamily::classify(k_value) })
}

/// A Caffarelli–Kohn–Nirenberg instance
/// `‖|x|^{γ₂}|x'|^μ ∇u‖_p ‖|x|^{γ₃}|x'|^β u‖_p^{p-1} ≥ C ‖|x|^{γ₁}|x'|^α u‖_p^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CknParams {
    n: usize,
    p: f64,
    pub alpha: f64,
    pub beta: f64,
    pub mu: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
}

impl CknParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        n: usize,
        p: f64,
        alpha: f64,
        beta: f64,
        mu: f64,
        gamma1: f64,
        gamma2: f64,
        gamma3: f64,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidInput(format!("dimension n = {n} must be at least 2")));
        }
        if !p.is_finite() || p <= 1.0 {
            return Err(Error::InvalidInput(format!("exponent p = {p} must be finite and > 1")));
        }
        let all = [alpha, beta, mu, gamma1, gamma2, gamma3];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("CKN exponents must be finite".into()));
        }
        Ok(Self { n, p, alpha, beta, mu, gamma1, gamma2, gamma3 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// Right-hand side of the balance equation, `(μ+γ₂-1)/p + (p-1)(β+γ₃)/p`.
    fn balance_rhs(&self) -> f64 {
        let p = self.p;
        (self.mu + self.gamma2 - 1.0) / p + (p - 1.0) * (self.beta + self.gamma3) / p
    }

    pub fn violations(&self) -> Vec<String> {
        let flags = admissible_ckn(self);
        let n = self.n as f64;
        let p = self.p;
        let mut out = Vec::new();
        if !flags.integrable {
            out.push(format!(
                "min(alpha, beta, mu) > (1-n)/p = {} and min(alpha+gamma1, mu+gamma2, beta+gamma3) > -n/p = {} required",
                (1.0 - n) / p,
                -n / p
            ));
        }
        if !flags.balanced {
            out.push(format!(
                "balance alpha+gamma1 = (mu+gamma2-1)/p + (p-1)(beta+gamma3)/p and gamma1 <= (gamma2-1)/p + (p-1)gamma3/p required (lhs {}, rhs {})",
                self.alpha + self.gamma1,
                self.balance_rhs()
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CknAdmissibility {
    pub integrable: bool,
    pub balanced: bool,
    pub normalized: bool,
}

impl CknAdmissibility {
    pub fn all(&self) -> bool {
        self.integrable && self.balanced && self.normalized
    }
}

pub fn admissible_ckn(params: &CknParams) -> CknAdmissibility {
    let n = params.n as f64;
    let p = params.p;
    let lower = (1.0 - n) / p;
    let integrable = params.alpha.min(params.beta).min(params.mu) > lower
        && (params.alpha + params.gamma1)
            .min(params.mu + params.gamma2)
            .min(params.beta + params.gamma3)
            > -n / p;

    let balanced = (params.alpha + params.gamma1 - params.balance_rhs()).abs() <= CKN_TOLERANCE
        && params.gamma1 <= (params.gamma2 - 1.0) / p + (p - 1.0) * params.gamma3 / p + CKN_TOLERANCE;

    let normalized = (params.alpha * p - params.beta * (p - 1.0) - params.mu).abs() <= CKN_TOLERANCE
        && (params.gamma1 * p - params.gamma3 * (p - 1.0) - params.gamma2 + 1.0).abs() <= CKN_TOLERANCE;

    CknAdmissibility { integrable, balanced, normalized }
}
