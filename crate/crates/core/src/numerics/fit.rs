//! Ordinary least-squares straight-line fits.

use crate::error::{Error, Result};
use crate::numerics::summation::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rms_residual: f64,
}

impl LineFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }

    /// Abscissa at which the line reaches `y`.
    pub fn solve_for(&self, y: f64) -> f64 {
        (y - self.intercept) / self.slope
    }
}

/// Fits y = slope·x + intercept using centered sums.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<LineFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "line fit needs at least two paired samples, got {} and {}",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len() as f64;
    let x_mean = compensated_sum(xs.iter().copied()) / n;
    let y_mean = compensated_sum(ys.iter().copied()) / n;
    let sxx = compensated_sum(xs.iter().map(|x| (x - x_mean).powi(2)));
    if sxx == 0.0 {
        return Err(Error::InvalidArgument("line fit needs distinct abscissae".into()));
    }
    let sxy = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (x - x_mean) * (y - y_mean)));
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let ss = compensated_sum(xs.iter().zip(ys).map(|(x, y)| (y - slope * x - intercept).powi(2)));
    Ok(LineFit {
        slope,
        intercept,
        rms_residual: (ss / n).sqrt(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line_is_recovered() {
        let xs: Vec<f64> = (0..20).map(|i| i as f64 * 0.5).collect();
        let ys: Vec<f64> = xs.iter().map(|x| -1.5 * x + 1000.0).collect();
        let fit = fit_line(&xs, &ys).unwrap();
        assert!((fit.slope + 1.5).abs() < 1e-12);
        assert!((fit.intercept - 1000.0).abs() < 1e-10);
        assert!(fit.rms_residual < 1e-10);
        assert!((fit.solve_for(0.0) - 1000.0 / 1.5).abs() < 1e-9);
    }

    #[test]
    fn degenerate_inputs_are_errors() {
        assert!(fit_line(&[1.0], &[2.0]).is_err());
        assert!(fit_line(&[1.0, 1.0], &[2.0, 3.0]).is_err());
        assert!(fit_line(&[1.0, 2.0], &[2.0]).is_err());
    }
}
