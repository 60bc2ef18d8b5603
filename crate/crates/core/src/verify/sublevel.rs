//! Sublevel-set measure `|{x ∈ Ω : |φ(x)| < ε}|` by stratified grid counting.
//!
//! Every cell of an `n × n` grid on the window contributes one sample at a
//! jittered position drawn from a per-row ChaCha stream, so a run is fully
//! determined by its seed. One refinement to `2n × 2n` checks resolution.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{int, PuiseuxPoly, Rational};

use super::fit::{fit_exponent, ExponentFit};
use super::phase::CompiledPhase;

/// Phases the sublevel checker can sample.
#[derive(Clone, Debug)]
pub enum SublevelPhase {
    Poly(CompiledPhase),
    /// `x2² + exp(−|x1|^{−α})`, flat in `x1` at the origin.
    Flat { alpha: f64 },
}

impl SublevelPhase {
    #[inline]
    fn eval(&self, x1: f64, x2: f64) -> f64 {
        match self {
            SublevelPhase::Poly(p) => p.eval(x1, x2),
            SublevelPhase::Flat { alpha } => {
                let flat = if x1 == 0.0 { 0.0 } else { (-x1.abs().powf(-alpha)).exp() };
                x2 * x2 + flat
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SublevelOptions {
    /// Window `[−w, w]²` (or `[0, w] × [−w, w]` on the half-plane).
    pub half_width: f64,
    pub resolution: usize,
    pub refine: bool,
    pub seed: u64,
    /// Decreasing geometric grid of levels.
    pub eps_grid: Vec<f64>,
    pub tolerance: f64,
    pub log_model: bool,
    pub mirror: bool,
    pub half_plane: bool,
}

/// `10^{−k/ppd}` for `k` from `from·ppd` to `to·ppd`.
pub fn eps_grid(from_exp: u32, to_exp: u32, points_per_decade: u32) -> Vec<f64> {
    let ppd = points_per_decade.max(1);
    (from_exp * ppd..=to_exp * ppd).map(|k| 10f64.powf(-(k as f64) / ppd as f64)).collect()
}

impl Default for SublevelOptions {
    fn default() -> Self {
        SublevelOptions {
            half_width: 1.0,
            resolution: 4096,
            refine: true,
            seed: 0x5eed,
            eps_grid: eps_grid(2, 6, 4),
            tolerance: 0.1,
            log_model: false,
            mirror: false,
            half_plane: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SublevelFit {
    pub fit: ExponentFit,
    /// Measures at the base resolution, aligned with `fit.grid`.
    pub coarse: Vec<f64>,
    /// Relative change from base to refined resolution at the smallest level.
    pub refinement_change: Option<f64>,
    pub half_plane: bool,
    pub resolution: usize,
}

/// Measures `|{|φ| < ε}|` for every `ε` in `eps` (any order) at `n × n` samples.
pub fn sublevel_measures(
    phase: &SublevelPhase,
    half_width: f64,
    half_plane: bool,
    n: usize,
    seed: u64,
    eps: &[f64],
) -> Vec<f64> {
    let mut sorted: Vec<f64> = eps.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let x1_lo = if half_plane { 0.0 } else { -half_width };
    let dx = (half_width - x1_lo) / n as f64;
    let dy = 2.0 * half_width / n as f64;
    let k = sorted.len();
    let rows: Vec<Vec<u64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut hist = vec![0u64; k + 1];
            for j in 0..n {
                let x1 = x1_lo + (i as f64 + rng.random::<f64>()) * dx;
                let x2 = -half_width + (j as f64 + rng.random::<f64>()) * dy;
                let v = phase.eval(x1, x2).abs();
                hist[sorted.partition_point(|e| *e <= v)] += 1;
            }
            hist
        })
        .collect();
    let mut hist = vec![0u64; k + 1];
    for row in rows {
        for (h, r) in hist.iter_mut().zip(row) {
            *h += r;
        }
    }
    let cell = dx * dy;
    let mut cumulative = Vec::with_capacity(k);
    let mut acc = 0u64;
    for h in hist.iter().take(k) {
        acc += h;
        cumulative.push(acc as f64 * cell);
    }
    eps.iter()
        .map(|e| cumulative[sorted.partition_point(|s| s < e)])
        .collect()
}

fn run(phase: &SublevelPhase, half_plane: bool, expected_h: &Rational, opts: &SublevelOptions) -> Result<SublevelFit> {
    if opts.eps_grid.len() < 3 || opts.eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("level grid must be strictly decreasing with at least 3 points".into()));
    }
    let n = opts.resolution;
    let coarse = sublevel_measures(phase, opts.half_width, half_plane, n, opts.seed, &opts.eps_grid);
    let (values, change) = if opts.refine {
        let fine = sublevel_measures(phase, opts.half_width, half_plane, 2 * n, opts.seed, &opts.eps_grid);
        let last = opts.eps_grid.len() - 1;
        let change = if fine[last] > 0.0 { (coarse[last] - fine[last]).abs() / fine[last] } else { f64::INFINITY };
        if change > 0.10 {
            return Err(Error::ResolutionInsufficient { eps: opts.eps_grid[last], relative_change: change });
        }
        (fine, Some(change))
    } else {
        (coarse.clone(), None)
    };
    if values.iter().any(|v| *v <= 0.0) {
        return Err(Error::MeasurementUnderflow { needed: opts.eps_grid.len() });
    }
    let expected = int(1) / expected_h;
    let fit = fit_exponent(
        &opts.eps_grid,
        &values,
        opts.eps_grid.len(),
        |e| 1.0 / e,
        expected,
        opts.tolerance,
        opts.log_model,
    )?;
    Ok(SublevelFit { fit, coarse, refinement_change: change, half_plane, resolution: if opts.refine { 2 * n } else { n } })
}

/// Fits the log-measure against `log ε` and compares the slope with `1/h`.
pub fn sublevel_exponent_fit(phi: &PuiseuxPoly, expected_h: &Rational, opts: &SublevelOptions) -> Result<SublevelFit> {
    if phi.is_zero() {
        return Err(Error::NotFiniteType);
    }
    let (phase, half_plane) = super::decay::prepare(phi, opts.mirror, opts.half_plane)?;
    run(&SublevelPhase::Poly(phase), half_plane, expected_h, opts)
}

/// The flat phase `x2² + exp(−|x1|^{−α})`, whose height is 2.
pub fn flat_preset_fit(alpha: f64, opts: &SublevelOptions) -> Result<SublevelFit> {
    if alpha <= 0.0 {
        return Err(Error::InvalidInput("alpha must be positive".into()));
    }
    run(&SublevelPhase::Flat { alpha }, false, &int(2), opts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disc_area_is_pi_eps() {
        let phase = SublevelPhase::Poly(CompiledPhase::new(&PuiseuxPoly::from_int_terms(&[(2, 0, 1), (0, 2, 1)])));
        let eps = [0.1, 0.01];
        let m = sublevel_measures(&phase, 1.0, false, 1024, 1, &eps);
        for (e, v) in eps.iter().zip(m) {
            let exact = std::f64::consts::PI * e;
            assert!((v - exact).abs() < 0.01 * exact, "{v} vs {exact}");
        }
    }

    #[test]
    fn measure_is_monotone_and_seeded() {
        let phase = SublevelPhase::Poly(CompiledPhase::new(&PuiseuxPoly::from_int_terms(&[(2, 2, 1)])));
        let eps = eps_grid(1, 4, 2);
        let a = sublevel_measures(&phase, 1.0, false, 512, 7, &eps);
        let b = sublevel_measures(&phase, 1.0, false, 512, 7, &eps);
        assert_eq!(a, b);
        assert!(a.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn rejects_increasing_grid() {
        let opts = SublevelOptions { eps_grid: vec![0.001, 0.01, 0.1], resolution: 64, ..Default::default() };
        let p = PuiseuxPoly::from_int_terms(&[(2, 0, 1), (0, 2, 1)]);
        assert!(matches!(sublevel_exponent_fit(&p, &int(1), &opts), Err(Error::InvalidInput(_))));
    }
}
