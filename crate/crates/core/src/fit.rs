//! Ordinary least squares for straight lines.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineFit {
    pub intercept: f64,
    pub slope: f64,
    /// Root-mean-square residual.
    pub rms: f64,
}

impl LineFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.intercept + self.slope * x
    }
}

/// Fits `y = intercept + slope·x`. Needs at least two distinct abscissae.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("fit_line: length mismatch".into()));
    }
    if xs.len() < 2 {
        return Err(Error::EmptyInput("fit_line needs at least two points".into()));
    }
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx <= 0.0 {
        return Err(Error::InvalidInput("fit_line: abscissae are all equal".into()));
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs.iter().zip(ys).map(|(x, y)| (y - intercept - slope * x).powi(2)).sum();
    Ok(LineFit { intercept, slope, rms: (ss / m).sqrt() })
}

/// Least-squares polynomial `Σ c_j x^j` of the given degree. Coefficients are
/// returned lowest order first. Solved through the normal equations on
/// abscissae scaled to unit magnitude.
pub fn fit_poly(xs: &[f64], ys: &[f64], degree: usize) -> Result<Vec<f64>> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput("fit_poly: length mismatch".into()));
    }
    let m = degree + 1;
    if xs.len() < m {
        return Err(Error::EmptyInput(format!("fit_poly: degree {degree} needs at least {m} points")));
    }
    let scale = xs.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    if scale == 0.0 && degree > 0 {
        return Err(Error::InvalidInput("fit_poly: abscissae are all zero".into()));
    }
    let scale = if scale == 0.0 { 1.0 } else { scale };
    let mut a = vec![vec![0.0; m + 1]; m];
    for (x, y) in xs.iter().zip(ys) {
        let t = x / scale;
        let powers: Vec<f64> = (0..m).map(|j| t.powi(j as i32)).collect();
        for i in 0..m {
            for j in 0..m {
                a[i][j] += powers[i] * powers[j];
            }
            a[i][m] += powers[i] * y;
        }
    }
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty pivot range");
        if a[pivot][col].abs() < 1e-300 {
            return Err(Error::InvalidInput("fit_poly: singular normal equations".into()));
        }
        a.swap(col, pivot);
        for row in col + 1..m {
            let f = a[row][col] / a[col][col];
            for j in col..=m {
                a[row][j] -= f * a[col][j];
            }
        }
    }
    let mut coeffs = vec![0.0; m];
    for i in (0..m).rev() {
        let tail: f64 = (i + 1..m).map(|j| a[i][j] * coeffs[j]).sum();
        coeffs[i] = (a[i][m] - tail) / a[i][i];
    }
    Ok(coeffs.iter().enumerate().map(|(j, c)| c / scale.powi(j as i32)).collect())
}

/// Evaluates coefficients from [`fit_poly`].
pub fn eval_poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn quadratic_recovered() {
        let xs = [0.2, 0.1, 0.05, 0.025];
        let ys: Vec<f64> = xs.iter().map(|x| 0.3 - 2.0 * x + 5.0 * x * x).collect();
        let c = fit_poly(&xs, &ys, 2).unwrap();
        assert_relative_eq!(c[0], 0.3, epsilon = 1e-12);
        assert_relative_eq!(c[1], -2.0, epsilon = 1e-10);
        assert_relative_eq!(c[2], 5.0, epsilon = 1e-9);
        assert_relative_eq!(eval_poly(&c, 0.5), 0.3 - 1.0 + 1.25, epsilon = 1e-9);
        assert!(fit_poly(&xs[..2], &ys[..2], 2).is_err());
    }

    #[test]
    fn linear_poly_matches_line_fit() {
        let xs = [1.0, 2.0, 4.0, 7.0];
        let ys = [0.5, 1.9, 4.2, 6.1];
        let c = fit_poly(&xs, &ys, 1).unwrap();
        let l = fit_line(&xs, &ys).unwrap();
        assert_relative_eq!(c[0], l.intercept, epsilon = 1e-12);
        assert_relative_eq!(c[1], l.slope, epsilon = 1e-12);
    }

    #[test]
    fn exact_line_recovered() {
        let xs = [0.0, 1.0, 2.0, 5.0];
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 - 0.5 * x).collect();
        let f = fit_line(&xs, &ys).unwrap();
        assert_relative_eq!(f.intercept, 3.0, epsilon = 1e-14);
        assert_relative_eq!(f.slope, -0.5, epsilon = 1e-14);
        assert!(f.rms < 1e-14);
    }

    #[test]
    fn residual_of_symmetric_noise() {
        let f = fit_line(&[0.0, 1.0, 2.0, 3.0], &[1.0, -1.0, 1.0, -1.0]).unwrap();
        assert!(f.rms > 0.8);
    }

    #[test]
    fn degenerate_inputs() {
        assert!(fit_line(&[1.0], &[1.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[1.0, 2.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[1.0]).is_err());
    }
}
