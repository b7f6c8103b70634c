//! Singularity-aware quadrature: tanh-sinh for algebraic endpoint
//! singularities, composite Gauss–Legendre for smooth integrands, nested 2D
//! rules, and tensor Gauss–Legendre over boxes.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const MAX_LEVELS: usize = 16;
const MIN_LEVELS: usize = 3;
// Nodes closer than this (relative to the interval length) to an endpoint are dropped.
const MIN_OFFSET: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum QuadMethod {
    TanhSinh,
    GaussLegendreComposite,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadMethod,
    /// Maximum refinement level (step halvings for tanh-sinh, panel doublings
    /// for Gauss–Legendre).
    pub levels: usize,
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Support radius of the cutoff, i.e. the outer radial limit.
    pub truncation_radius: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            method: QuadMethod::TanhSinh,
            levels: 12,
            abs_tol: 1e-300,
            rel_tol: 1e-12,
            truncation_radius: 2.0,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0 && self.rel_tol > 0.0) {
            return Err(Error::InvalidInput("quadrature tolerances must be positive".into()));
        }
        if self.levels < MIN_LEVELS || self.levels > MAX_LEVELS {
            return Err(Error::InvalidInput(format!(
                "quadrature levels must lie in [{MIN_LEVELS}, {MAX_LEVELS}], got {}",
                self.levels
            )));
        }
        if !(self.truncation_radius > 0.0) {
            return Err(Error::InvalidInput("truncation radius must be positive".into()));
        }
        Ok(())
    }

    pub fn with_rel_tol(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    pub fn with_method(mut self, method: QuadMethod) -> Self {
        self.method = method;
        self
    }

    fn accepts(&self, value: f64, err: f64) -> bool {
        err <= self.abs_tol.max(self.rel_tol * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Integral {
    pub value: f64,
    pub err_estimate: f64,
}

/// One tanh-sinh node for the reference interval: `offset` is the distance to
/// the nearest endpoint divided by the interval length, `weight` is the
/// Jacobian `(π/2) cosh t sech²(π/2 sinh t)`.
#[derive(Debug, Clone, Copy)]
struct TsNode {
    offset: f64,
    weight: f64,
}

fn ts_node(t: f64) -> TsNode {
    let u = 0.5 * PI * t.sinh();
    let e = (-2.0 * u).exp();
    let offset = e / (1.0 + e);
    TsNode { offset, weight: 2.0 * PI * t.cosh() * offset * (1.0 - offset) }
}

/// Node tables per level, computed once. Level 0 holds `t = 1, 2, …`; level
/// `l > 0` holds the odd multiples of `2^{-l}`.
fn ts_tables() -> &'static [Vec<TsNode>] {
    static TABLES: OnceLock<Vec<Vec<TsNode>>> = OnceLock::new();
    TABLES.get_or_init(|| {
        (0..=MAX_LEVELS)
            .map(|level| {
                let h = 0.5f64.powi(level as i32);
                let stride = if level == 0 { 1 } else { 2 };
                let mut nodes = Vec::new();
                let mut j = 1usize;
                loop {
                    let node = ts_node(j as f64 * h);
                    if node.offset < MIN_OFFSET {
                        break;
                    }
                    nodes.push(node);
                    j += stride;
                }
                nodes
            })
            .collect()
    })
}

fn eval_checked<F: FnMut(f64) -> f64>(f: &mut F, x: f64) -> Result<f64> {
    let y = f(x);
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Domain(format!("integrand not finite at x = {x:e} (got {y})")))
    }
}

fn tanh_sinh<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    let len = b - a;
    let half = 0.5 * len;
    let tables = ts_tables();

    let sum_nodes = |nodes: &[TsNode], f: &mut F| -> Result<f64> {
        let mut s = 0.0;
        for node in nodes {
            let d = len * node.offset;
            let left = a + d;
            let right = b - d;
            if left > a && left < b {
                s += node.weight * eval_checked(f, left)?;
            }
            if right < b && right > a {
                s += node.weight * eval_checked(f, right)?;
            }
        }
        Ok(s)
    };

    let mut sum = 0.5 * PI * eval_checked(&mut f, a + half)? + sum_nodes(&tables[0], &mut f)?;
    let mut estimate = half * sum;
    let mut err = f64::INFINITY;
    for (level, nodes) in tables.iter().enumerate().take(spec.levels + 1).skip(1) {
        sum += sum_nodes(nodes, &mut f)?;
        let next = half * sum * 0.5f64.powi(level as i32);
        err = (next - estimate).abs();
        estimate = next;
        if level >= MIN_LEVELS && spec.accepts(estimate, err) {
            return Ok(Integral { value: estimate, err_estimate: err });
        }
    }
    Err(Error::NotConverged { value: estimate, err_estimate: err })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration on `P_m`.
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    for i in 0..m.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for j in 2..=m {
                let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 0 { 1.0 } else if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = m as f64 * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Degree-`degree` Gauss–Legendre rule replicated over `panels` equal panels of `[a, b]`.
pub fn composite_gl_rule(a: f64, b: f64, panels: usize, degree: usize) -> (Vec<f64>, Vec<f64>) {
    let (xs, ws) = gauss_legendre(degree);
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * degree);
    let mut weights = Vec::with_capacity(panels * degree);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for (x, w) in xs.iter().zip(&ws) {
            nodes.push(lo + 0.5 * width * (x + 1.0));
            weights.push(0.5 * width * w);
        }
    }
    (nodes, weights)
}

const GL_DEGREE: usize = 20;

fn gauss_legendre_adaptive<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    spec: &QuadratureSpec,
) -> Result<Integral> {
    let rule = |panels: usize, f: &mut F| -> Result<f64> {
        let (xs, ws) = composite_gl_rule(a, b, panels, GL_DEGREE);
        let mut s = 0.0;
        for (x, w) in xs.iter().zip(&ws) {
            s += w * eval_checked(f, *x)?;
        }
        Ok(s)
    };
    let mut estimate = rule(1, &mut f)?;
    let mut err = f64::INFINITY;
    for level in 1..=spec.levels {
        let next = rule(1 << level, &mut f)?;
        err = (next - estimate).abs();
        estimate = next;
        if level >= 2 && spec.accepts(estimate, err) {
            return Ok(Integral { value: estimate, err_estimate: err });
        }
    }
    Err(Error::NotConverged { value: estimate, err_estimate: err })
}

/// `∫_a^b f`. Endpoint singularities of type `|t - endpoint|^c`, `c > -1`, are
/// handled by the tanh-sinh rule; a singularity is resolved most accurately
/// when it sits at an endpoint that is exactly representable near zero.
pub fn integrate_1d<F: FnMut(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Integral> {
    spec.validate()?;
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(Integral { value: 0.0, err_estimate: 0.0 });
    }
    if a > b {
        let r = integrate_1d(f, b, a, spec)?;
        return Ok(Integral { value: -r.value, err_estimate: r.err_estimate });
    }
    match spec.method {
        QuadMethod::TanhSinh => tanh_sinh(f, a, b, spec),
        QuadMethod::GaussLegendreComposite => gauss_legendre_adaptive(f, a, b, spec),
    }
}

/// `(∫ fr dr)(∫ fphi dφ)` for factorised integrands.
pub fn integrate_2d_product<Fr, Fp>(
    fr: Fr,
    fphi: Fp,
    r_range: (f64, f64),
    phi_range: (f64, f64),
    spec: &QuadratureSpec,
) -> Result<Integral>
where
    Fr: FnMut(f64) -> f64,
    Fp: FnMut(f64) -> f64,
{
    let ir = integrate_1d(fr, r_range.0, r_range.1, spec)?;
    let ip = integrate_1d(fphi, phi_range.0, phi_range.1, spec)?;
    let value = ir.value * ip.value;
    let err_estimate = ir.err_estimate * ip.value.abs() + ip.err_estimate * ir.value.abs();
    Ok(Integral { value, err_estimate })
}

/// Nested tensor rule for a general `f(r, φ)`: the inner φ-integral is
/// evaluated adaptively at every outer r-node.
pub fn integrate_2d<F>(f: F, r_range: (f64, f64), phi_range: (f64, f64), spec: &QuadratureSpec) -> Result<Integral>
where
    F: Fn(f64, f64) -> f64,
{
    // Inner tolerance is tighter so that inner adaptivity does not show up as
    // noise in the outer level differences.
    let inner_spec = QuadratureSpec { rel_tol: spec.rel_tol * 1e-2, ..*spec };
    let mut failure: Option<Error> = None;
    let outer = integrate_1d(
        |r| {
            if failure.is_some() {
                return 0.0;
            }
            match integrate_1d(|phi| f(r, phi), phi_range.0, phi_range.1, &inner_spec) {
                Ok(v) => v.value,
                Err(Error::NotConverged { value, .. }) => value,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        r_range.0,
        r_range.1,
        spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    outer
}

/// Tensor composite Gauss–Legendre over the box `Π [lo_i, hi_i]`, integrating
/// `M` components at once. Accumulation runs in fixed lexicographic order.
pub fn integrate_box<const M: usize, F>(mut f: F, lo: &[f64], hi: &[f64], panels: usize, degree: usize) -> [f64; M]
where
    F: FnMut(&[f64]) -> [f64; M],
{
    let dim = lo.len();
    assert_eq!(dim, hi.len());
    let rules: Vec<(Vec<f64>, Vec<f64>)> =
        lo.iter().zip(hi).map(|(&a, &b)| composite_gl_rule(a, b, panels, degree)).collect();
    let per_axis = panels * degree;
    let mut idx = vec![0usize; dim];
    let mut point = vec![0.0; dim];
    let mut total = [0.0; M];
    'outer: loop {
        let mut w = 1.0;
        for d in 0..dim {
            point[d] = rules[d].0[idx[d]];
            w *= rules[d].1[idx[d]];
        }
        let vals = f(&point);
        for m in 0..M {
            total[m] += w * vals[m];
        }
        for d in (0..dim).rev() {
            idx[d] += 1;
            if idx[d] < per_axis {
                continue 'outer;
            }
            idx[d] = 0;
        }
        break;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::{beta, cutoff_eta};
    use approx::assert_relative_eq;

    #[test]
    fn algebraic_endpoint_powers() {
        let spec = QuadratureSpec::default();
        for c in [-0.9, -0.5, -0.1, 0.0, 1.0, 3.0] {
            let r = integrate_1d(|t: f64| t.powf(c), 0.0, 1.0, &spec).unwrap();
            assert_relative_eq!(r.value, 1.0 / (c + 1.0), max_relative = 1e-10);
        }
    }

    #[test]
    fn inverse_sqrt_integral() {
        let r = integrate_1d(|t: f64| t.powf(-0.5), 0.0, 1.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn sin_power_on_full_interval() {
        // Singular at both ends. Near π the integrand only sees sin(π_f64 - d),
        // which caps accuracy at the rounding of π; folding onto (0, π/2) avoids it.
        let exact = beta(0.25, 0.5).unwrap();
        let spec = QuadratureSpec::default().with_rel_tol(1e-10);
        let full = integrate_1d(|t: f64| t.sin().powf(-0.5), 0.0, PI, &spec).unwrap();
        assert_relative_eq!(full.value, exact, max_relative = 1e-7);
        let half = integrate_1d(|t: f64| t.sin().powf(-0.5), 0.0, 0.5 * PI, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(2.0 * half.value, exact, max_relative = 1e-13);
    }

    #[test]
    fn cutoff_integral() {
        // Smoothstep integrates to one half on its ramp.
        let r = integrate_1d(cutoff_eta, 0.0, 2.0, &QuadratureSpec::default()).unwrap();
        assert_relative_eq!(r.value, 1.5, max_relative = 1e-10);
    }

    #[test]
    fn gauss_legendre_composite_mode() {
        let spec = QuadratureSpec::default().with_method(QuadMethod::GaussLegendreComposite);
        let r = integrate_1d(|t: f64| (3.0 * t).cos(), 0.0, 2.0, &spec).unwrap();
        assert_relative_eq!(r.value, 6f64.sin() / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn gauss_legendre_exact_for_polynomials() {
        let (x, w) = gauss_legendre(20);
        assert_relative_eq!(w.iter().sum::<f64>(), 2.0, max_relative = 1e-14);
        let m38: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(38)).sum();
        assert_relative_eq!(m38, 2.0 / 39.0, max_relative = 1e-12);
        let (x1, w1) = gauss_legendre(1);
        assert_eq!(x1, vec![0.0]);
        assert_relative_eq!(w1[0], 2.0);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let spec = QuadratureSpec::default();
        let r = integrate_1d(|t| t, 1.0, 0.0, &spec).unwrap();
        assert_relative_eq!(r.value, -0.5, max_relative = 1e-12);
        assert_eq!(integrate_1d(|t| t, 1.0, 1.0, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn nonconvergence_is_reported_with_best_value() {
        let spec = QuadratureSpec { levels: 3, rel_tol: 1e-15, ..Default::default() };
        let e = integrate_1d(|t: f64| (40.0 * t).sin().abs(), 0.0, 1.0, &spec).unwrap_err();
        assert!(matches!(e, Error::NotConverged { .. }));
    }

    #[test]
    fn two_dimensional_paths() {
        let spec = QuadratureSpec::default();
        // f = r on (0,1)×(0,π)
        let prod = integrate_2d_product(|r| r, |_| 1.0, (0.0, 1.0), (0.0, PI), &spec).unwrap();
        assert_relative_eq!(prod.value, PI / 2.0, max_relative = 1e-12);
        let gen = integrate_2d(|r, _| r, (0.0, 1.0), (0.0, PI), &spec).unwrap();
        assert_relative_eq!(gen.value, PI / 2.0, max_relative = 1e-12);
        let zero = integrate_2d(|_, _| 0.0, (0.0, 1.0), (0.0, PI), &spec).unwrap();
        assert_eq!(zero.value, 0.0);
    }

    #[test]
    fn box_rule_polynomial() {
        let v = integrate_box::<2, _>(|x| [x[0] * x[0] * x[1], 1.0], &[0.0, -1.0], &[1.0, 2.0], 2, 5);
        assert_relative_eq!(v[0], (1.0 / 3.0) * 1.5, max_relative = 1e-13);
        assert_relative_eq!(v[1], 3.0, max_relative = 1e-13);
    }

    #[test]
    fn invalid_specs_rejected() {
        let bad = QuadratureSpec { levels: 2, ..Default::default() };
        assert!(integrate_1d(|t| t, 0.0, 1.0, &bad).is_err());
        let bad = QuadratureSpec { rel_tol: 0.0, ..Default::default() };
        assert!(integrate_1d(|t| t, 0.0, 1.0, &bad).is_err());
    }
}
