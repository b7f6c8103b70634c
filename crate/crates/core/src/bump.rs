//! Compactly supported test functions with analytic gradients.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{cutoff_eta, cutoff_eta_prime};
use crate::weight::{Norms, WeightSpec};

/// A `C¹` function supported in a closed ball.
pub trait TestFunction {
    fn dim(&self) -> usize;
    fn center(&self) -> &[f64];
    /// Radius of the support ball.
    fn support_radius(&self) -> f64;
    /// Value at `x`; writes `∇u(x)` into `grad`.
    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64;

    fn value(&self, x: &[f64]) -> f64 {
        let mut g = vec![0.0; x.len()];
        self.eval(x, &mut g)
    }

    /// Checks that the support stays one width away from `{y = 0}`, where
    /// `y` is the first `k` coordinates.
    fn check_support(&self, k: usize) -> Result<()> {
        let c = self.center();
        let cy = c[..k].iter().map(|v| v * v).sum::<f64>().sqrt();
        let r = self.support_radius();
        if cy > 1.5 * r {
            Ok(())
        } else {
            Err(Error::SupportViolation(format!(
                "|center'| = {cy} must exceed 3 widths = {}",
                1.5 * r
            )))
        }
    }
}

/// Exponent tuples of all monomials of total degree `<= degree` in `n`
/// variables, ordered by degree and then lexicographically (descending).
pub fn monomials(n: usize, degree: usize) -> Vec<Vec<u32>> {
    fn rec(n: usize, remaining: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == n - 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(n, remaining - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    for d in 0..=degree as u32 {
        rec(n, d, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct BumpData {
    center: Vec<f64>,
    width: f64,
    polynomial_degree: usize,
    coefficients: Vec<f64>,
}

/// `u(x) = P((x-c)/w) η(|x-c|/w)` with `P` a polynomial of degree `<= 3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "BumpData", try_from = "BumpData")]
pub struct BumpFunction {
    pub center: Vec<f64>,
    pub width: f64,
    pub polynomial_degree: usize,
    /// One coefficient per entry of [`monomials`]`(n, polynomial_degree)`.
    pub coefficients: Vec<f64>,
    exponents: Vec<Vec<u32>>,
}

impl From<BumpFunction> for BumpData {
    fn from(b: BumpFunction) -> Self {
        Self { center: b.center, width: b.width, polynomial_degree: b.polynomial_degree, coefficients: b.coefficients }
    }
}

impl TryFrom<BumpData> for BumpFunction {
    type Error = Error;

    fn try_from(d: BumpData) -> Result<Self> {
        Self::new(d.center, d.width, d.polynomial_degree, d.coefficients)
    }
}

impl BumpFunction {
    pub fn new(center: Vec<f64>, width: f64, polynomial_degree: usize, coefficients: Vec<f64>) -> Result<Self> {
        let n = center.len();
        if n < 2 {
            return Err(Error::InvalidInput("bump needs dimension >= 2".into()));
        }
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::InvalidInput(format!("bump width must be positive, got {width}")));
        }
        if polynomial_degree > 3 {
            return Err(Error::InvalidInput("polynomial degree must be at most 3".into()));
        }
        let exponents = monomials(n, polynomial_degree);
        if coefficients.len() != exponents.len() {
            return Err(Error::InvalidInput(format!(
                "degree {polynomial_degree} in {n} variables needs {} coefficients, got {}",
                exponents.len(),
                coefficients.len()
            )));
        }
        if center.iter().chain(&coefficients).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("bump data must be finite".into()));
        }
        Ok(Self { center, width, polynomial_degree, coefficients, exponents })
    }

    /// `P ≡ 1`.
    pub fn plain(center: Vec<f64>, width: f64) -> Result<Self> {
        Self::new(center, width, 0, vec![1.0])
    }

    fn poly(&self, z: &[f64], grad: &mut [f64]) -> f64 {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut value = 0.0;
        for (c, e) in self.coefficients.iter().zip(&self.exponents) {
            if *c == 0.0 {
                continue;
            }
            let mut term = *c;
            for (zi, &ei) in z.iter().zip(e) {
                term *= zi.powi(ei as i32);
            }
            value += term;
            for i in 0..z.len() {
                if e[i] == 0 {
                    continue;
                }
                let mut d = c * e[i] as f64 * z[i].powi(e[i] as i32 - 1);
                for j in 0..z.len() {
                    if j != i {
                        d *= z[j].powi(e[j] as i32);
                    }
                }
                grad[i] += d;
            }
        }
        value
    }
}

impl TestFunction for BumpFunction {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn center(&self) -> &[f64] {
        &self.center
    }

    fn support_radius(&self) -> f64 {
        2.0 * self.width
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let w = self.width;
        let z: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| (a - c) / w).collect();
        let rho = z.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rho >= 2.0 {
            grad.iter_mut().for_each(|g| *g = 0.0);
            return 0.0;
        }
        let p = self.poly(&z, grad);
        let eta = cutoff_eta(rho);
        let deta = cutoff_eta_prime(rho);
        for i in 0..z.len() {
            let radial = if rho > 0.0 { p * deta * z[i] / rho } else { 0.0 };
            grad[i] = (grad[i] * eta + radial) / w;
        }
        p * eta
    }
}

/// `u = f·η(|x-c|/w)` for the power-law trial `f` of a weight spec.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedBump {
    pub weight: WeightSpec,
    pub center: Vec<f64>,
    pub width: f64,
}

impl WeightedBump {
    pub fn new(weight: WeightSpec, center: Vec<f64>, width: f64) -> Result<Self> {
        if center.len() != weight.params.n() {
            return Err(Error::InvalidInput("center dimension differs from n".into()));
        }
        if !(width > 0.0) {
            return Err(Error::InvalidInput("width must be positive".into()));
        }
        Ok(Self { weight, center, width })
    }
}

/// `f` and `∇f` for `f = |y|^θ |x|^λ`.
pub fn power_law_gradient(spec: &WeightSpec, x: &[f64], grad: &mut [f64]) -> f64 {
    let k = spec.params.k();
    let e = spec.exponents();
    let nm = Norms::of(x, k);
    let f = nm.y.powf(e.theta) * nm.x.powf(e.lambda);
    for i in 0..x.len() {
        let from_y = if i < k { e.theta * x[i] / (nm.y * nm.y) } else { 0.0 };
        grad[i] = f * (from_y + e.lambda * x[i] / (nm.x * nm.x));
    }
    f
}

impl TestFunction for WeightedBump {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn center(&self) -> &[f64] {
        &self.center
    }

    fn support_radius(&self) -> f64 {
        2.0 * self.width
    }

    fn eval(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let w = self.width;
        let d: Vec<f64> = x.iter().zip(&self.center).map(|(a, c)| a - c).collect();
        let dist = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        let rho = dist / w;
        if rho >= 2.0 {
            grad.iter_mut().for_each(|g| *g = 0.0);
            return 0.0;
        }
        let f = power_law_gradient(&self.weight, x, grad);
        let eta = cutoff_eta(rho);
        let deta = cutoff_eta_prime(rho);
        for i in 0..x.len() {
            let radial = if dist > 0.0 { f * deta * d[i] / (dist * w) } else { 0.0 };
            grad[i] = grad[i] * eta + radial;
        }
        f * eta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_form::ExponentPair;
    use crate::params::HardyParams;
    use approx::assert_relative_eq;

    fn fd_gradient(u: &dyn TestFunction, x: &[f64]) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|i| {
                let mut a = x.to_vec();
                let mut b = x.to_vec();
                a[i] += h;
                b[i] -= h;
                (u.value(&a) - u.value(&b)) / (2.0 * h)
            })
            .collect()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(3, 0).len(), 1);
        assert_eq!(monomials(3, 1).len(), 4);
        assert_eq!(monomials(3, 3).len(), 20);
        assert_eq!(monomials(2, 2), vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn bump_gradient_matches_differences() {
        let coeffs: Vec<f64> = (0..20).map(|i| ((i * 7 % 11) as f64 - 5.0) / 5.0).collect();
        let b = BumpFunction::new(vec![1.0, 1.0, 0.5], 0.1, 3, coeffs).unwrap();
        let mut g = vec![0.0; 3];
        for x in [[1.05, 0.97, 0.52], [0.9, 1.1, 0.45], [1.0, 1.0, 0.5]] {
            b.eval(&x, &mut g);
            let fd = fd_gradient(&b, &x);
            for i in 0..3 {
                assert_relative_eq!(g[i], fd[i], epsilon = 1e-5 * (1.0 + fd[i].abs()));
            }
        }
        assert_eq!(b.value(&[2.0, 2.0, 2.0]), 0.0);
    }

    #[test]
    fn weighted_bump_gradient() {
        let p = HardyParams::new(3, 2.0, -0.5, -0.5).unwrap();
        let wb = WeightedBump::new(WeightSpec::pair(p, ExponentPair::new(-0.3, 0.4)), vec![1.0, 0.5, 0.2], 0.1).unwrap();
        let x = [1.07, 0.45, 0.27];
        let mut g = vec![0.0; 3];
        wb.eval(&x, &mut g);
        let fd = fd_gradient(&wb, &x);
        for i in 0..3 {
            assert_relative_eq!(g[i], fd[i], epsilon = 1e-6 * (1.0 + fd[i].abs()));
        }
    }

    #[test]
    fn serde_round_trip() {
        let b = BumpFunction::new(vec![1.0, 2.0], 0.2, 1, vec![0.5, -1.0, 2.0]).unwrap();
        let back: BumpFunction = serde_json::from_str(&serde_json::to_string(&b).unwrap()).unwrap();
        assert_eq!(b, back);
        assert!(serde_json::from_str::<BumpFunction>(r#"{"center":[1,1],"width":0.1,"polynomial_degree":1,"coefficients":[1]}"#).is_err());
    }

    #[test]
    fn construction_and_support_rules() {
        assert!(BumpFunction::new(vec![1.0, 1.0], 0.1, 1, vec![1.0]).is_err());
        assert!(BumpFunction::new(vec![1.0, 1.0], -0.1, 0, vec![1.0]).is_err());
        let b = BumpFunction::plain(vec![1.0, 1.0, 0.5], 0.1).unwrap();
        assert!(b.check_support(2).is_ok());
        let close = BumpFunction::plain(vec![0.2, 0.0, 1.0], 0.1).unwrap();
        assert!(matches!(close.check_support(2), Err(Error::SupportViolation(_))));
    }
}
