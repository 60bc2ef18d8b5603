//! Decay rate of `J(λ) = ∫ e^{iλφ} η dx` as `λ → ∞`.

use crate::error::{Error, Result};
use crate::poly::{int, PuiseuxPoly, Rational};

use super::fit::{fit_exponent, ExponentFit};
use super::phase::CompiledPhase;
use super::quadrature::{oscillatory_integral, Bump, QuadOptions};

/// Measurements below this are indistinguishable from quadrature noise.
pub const UNDERFLOW: f64 = 1e-13;

#[derive(Clone, Debug, PartialEq)]
pub struct DecayOptions {
    pub bump: Bump,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub points_per_decade: u32,
    pub tolerance: f64,
    pub log_model: bool,
    /// Replace `φ(x1, x2)` by `φ(−x1, x2)` before integrating.
    pub mirror: bool,
    /// Integrate over `x1 >= 0` only; forced on for fractional exponents.
    pub half_plane: bool,
    pub quad: QuadOptions,
}

impl Default for DecayOptions {
    fn default() -> Self {
        DecayOptions {
            bump: Bump::default(),
            lambda_min: 1.0,
            lambda_max: 2048.0,
            points_per_decade: 4,
            tolerance: 0.1,
            log_model: false,
            mirror: false,
            half_plane: false,
            quad: QuadOptions::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecayFit {
    pub fit: ExponentFit,
    /// `J(0) = ∫ η dx` over the integration domain.
    pub mass: f64,
    /// `|J(λ)| <= J(0)` held at every grid point.
    pub bounded_by_mass: bool,
    pub half_plane: bool,
    pub mirrored: bool,
    pub panels: Vec<usize>,
}

/// `λ_min · 10^{k/ppd}` up to `λ_max`.
pub fn lambda_grid(lambda_min: f64, lambda_max: f64, points_per_decade: u32) -> Vec<f64> {
    let ppd = points_per_decade.max(1) as f64;
    (0..)
        .map(|k| lambda_min * 10f64.powf(k as f64 / ppd))
        .take_while(|l| *l <= lambda_max * (1.0 + 1e-12))
        .collect()
}

/// Prepared phase and domain shared by the decay and self-consistency runs.
pub(crate) fn prepare(phi: &PuiseuxPoly, mirror: bool, half_plane: bool) -> Result<(CompiledPhase, bool)> {
    let phi = if mirror { phi.mirror_x1()? } else { phi.clone() };
    let half = half_plane || !phi.has_integer_exponents();
    Ok((CompiledPhase::new(&phi), half))
}

/// Fits `log |J(λ)|` against `log λ` on the top half of the grid and compares
/// the slope with `−1/h`.
pub fn oscillatory_decay_fit(phi: &PuiseuxPoly, expected_h: &Rational, opts: &DecayOptions) -> Result<DecayFit> {
    if phi.is_zero() {
        return Err(Error::NotFiniteType);
    }
    let (phase, half_plane) = prepare(phi, opts.mirror, opts.half_plane)?;
    let quad = QuadOptions { half_plane, ..opts.quad };
    let mass = oscillatory_integral(&phase, &opts.bump, 0.0, &quad)?.value.re;

    let mut grid = Vec::new();
    let mut values = Vec::new();
    let mut panels = Vec::new();
    let mut bounded_by_mass = true;
    for lambda in lambda_grid(opts.lambda_min, opts.lambda_max, opts.points_per_decade) {
        let j = oscillatory_integral(&phase, &opts.bump, lambda, &quad)?;
        let v = j.value.norm();
        if v < UNDERFLOW {
            break;
        }
        bounded_by_mass &= v <= mass * (1.0 + 1e-9);
        grid.push(lambda);
        values.push(v);
        panels.push(j.panels);
    }
    let window = grid.len().div_ceil(2);
    if window < 3 {
        return Err(Error::MeasurementUnderflow { needed: 6 });
    }
    let expected = -(int(1) / expected_h);
    let mut fit = fit_exponent(&grid, &values, window, |l| l, expected, opts.tolerance, opts.log_model)?;
    fit.pass &= bounded_by_mass;
    Ok(DecayFit { fit, mass, bounded_by_mass, half_plane, mirrored: opts.mirror, panels })
}

/// `|J(λ)|` at one frequency with the given options.
pub fn decay_value(phi: &PuiseuxPoly, lambda: f64, opts: &DecayOptions) -> Result<f64> {
    let (phase, half_plane) = prepare(phi, opts.mirror, opts.half_plane)?;
    let quad = QuadOptions { half_plane, ..opts.quad };
    Ok(oscillatory_integral(&phase, &opts.bump, lambda, &quad)?.value.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_is_geometric() {
        let g = lambda_grid(1.0, 2048.0, 4);
        assert_eq!(g.len(), 14);
        assert!((g[4] - 10.0).abs() < 1e-12);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn circle_decays_like_one_over_lambda() {
        let phi = PuiseuxPoly::from_int_terms(&[(2, 0, 1), (0, 2, 1)]);
        let opts = DecayOptions { lambda_min: 10.0, lambda_max: 1000.0, tolerance: 0.05, ..DecayOptions::default() };
        let r = oscillatory_decay_fit(&phi, &int(1), &opts).unwrap();
        assert!(r.fit.pass, "{:?}", r.fit);
        assert!(r.bounded_by_mass);
    }
}
