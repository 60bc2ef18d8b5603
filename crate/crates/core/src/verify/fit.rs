//! Power-law exponent fits and the record they produce.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::poly::Rational;

/// Outcome of a log-log regression against an expected exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentFit {
    pub grid: Vec<f64>,
    pub measurements: Vec<f64>,
    /// Plain slope of `log y` on `log x` over the fit window.
    pub fitted_exponent: f64,
    /// Slope when a `log log` regressor is included.
    pub fitted_with_log: Option<f64>,
    /// Coefficient of the `log log` regressor.
    pub log_coefficient: Option<f64>,
    pub expected: Rational,
    pub tolerance: f64,
    pub pass: bool,
    /// Root-mean-square residual of the model used for `pass`.
    pub residual: f64,
    /// Number of trailing grid points used in the fit.
    pub window: usize,
    pub use_log_model: bool,
}

impl ExponentFit {
    /// The slope that `pass` was decided on.
    pub fn used_exponent(&self) -> f64 {
        if self.use_log_model {
            self.fitted_with_log.unwrap_or(self.fitted_exponent)
        } else {
            self.fitted_exponent
        }
    }
}

/// Least squares of `ys` on `[1, xs, extra]`; returns coefficients and RMS residual.
pub fn least_squares(xs: &[f64], extra: Option<&[f64]>, ys: &[f64]) -> Result<(Vec<f64>, f64)> {
    let cols = if extra.is_some() { 3 } else { 2 };
    if xs.len() < cols + 1 {
        return Err(Error::MeasurementUnderflow { needed: cols + 1 });
    }
    let a = DMatrix::from_fn(xs.len(), cols, |i, j| match j {
        0 => 1.0,
        1 => xs[i],
        _ => extra.expect("third column")[i],
    });
    let b = DVector::from_column_slice(ys);
    let svd = a.clone().svd(true, true);
    let coef = svd
        .solve(&b, 1e-14)
        .map_err(|e| Error::InvalidInput(format!("least squares failed: {e}")))?;
    let r = &a * &coef - &b;
    let rms = (r.norm_squared() / xs.len() as f64).sqrt();
    Ok((coef.iter().copied().collect(), rms))
}

/// Fits `log y ≈ c + s·log x (+ t·log |log x|)` over the last `window` points.
///
/// `log_arg` maps a grid value to the argument of the inner logarithm
/// (`λ` for decay, `1/ε` for sublevel sets).
pub fn fit_exponent(
    grid: &[f64],
    measurements: &[f64],
    window: usize,
    log_arg: impl Fn(f64) -> f64,
    expected: Rational,
    tolerance: f64,
    use_log_model: bool,
) -> Result<ExponentFit> {
    let start = grid.len().saturating_sub(window);
    let xs: Vec<f64> = grid[start..].iter().map(|x| x.ln()).collect();
    let ys: Vec<f64> = measurements[start..].iter().map(|y| y.ln()).collect();
    let ll: Vec<f64> = grid[start..].iter().map(|&x| log_arg(x).ln().ln()).collect();
    let (plain, plain_rms) = least_squares(&xs, None, &ys)?;
    let with_log = if ll.iter().all(|v| v.is_finite()) && xs.len() >= 4 {
        Some(least_squares(&xs, Some(&ll), &ys)?)
    } else {
        None
    };
    let target = crate::poly::to_f64(&expected);
    let (used, residual) = match (&with_log, use_log_model) {
        (Some((c, rms)), true) => (c[1], *rms),
        _ => (plain[1], plain_rms),
    };
    Ok(ExponentFit {
        grid: grid.to_vec(),
        measurements: measurements.to_vec(),
        fitted_exponent: plain[1],
        fitted_with_log: with_log.as_ref().map(|(c, _)| c[1]),
        log_coefficient: with_log.as_ref().map(|(c, _)| c[2]),
        expected,
        tolerance,
        pass: (used - target).abs() <= tolerance,
        residual,
        window: xs.len(),
        use_log_model,
    })
}
