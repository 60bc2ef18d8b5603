//! Uniform bounds for `J(λ, σ) = ∫ e^{iλF(x, σ)} ψ(x) dx` with a small parameter σ.
//!
//! `F = f1(x1) + σ·f2(x1, x2)` on the normal forms below. Each `|J|` is
//! multiplied by the reciprocal of the claimed envelope; a bounded,
//! non-growing ratio in the top λ-block is the observable substitute for
//! the (unknown) constant.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{int, rat, PuiseuxPoly, Rational};

use super::fit::{fit_exponent, ExponentFit};
use super::phase::CompiledPhase;
use super::quadrature::{oscillatory_integral, Bump, QuadOptions};

/// Exponent slack used in the degenerate Airy envelope.
pub const EPS_HAT: f64 = 0.02;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SmallParamKind {
    /// `x1² + σ·x2^m`, envelope `(1+λ)^{1/2}(1+λσ)^{1/m}`.
    NonDegenerate { m: u32 },
    /// `x1³ + σ·(x2² + x1·x2)`, envelope `(1+λ)^{1/3}(1+λσ)^{1/2}`.
    Airy,
    /// `x1³ + σ·(x2^m + x1·x2)`, envelope `λ^{1/2+ε}·σ^{l_m + c_m ε}`.
    DegenerateAiry { m: u32 },
}

impl SmallParamKind {
    pub fn m(&self) -> u32 {
        match *self {
            SmallParamKind::NonDegenerate { m } | SmallParamKind::DegenerateAiry { m } => m,
            SmallParamKind::Airy => 2,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            SmallParamKind::NonDegenerate { .. } => "81",
            SmallParamKind::Airy => "82",
            SmallParamKind::DegenerateAiry { .. } => "83",
        }
    }

    /// `F(·, σ)` with exact coefficients.
    pub fn phase(&self, sigma: &Rational) -> PuiseuxPoly {
        let m = self.m();
        let (f1, f2) = match self {
            SmallParamKind::NonDegenerate { .. } => {
                (PuiseuxPoly::from_int_terms(&[(2, 0, 1)]), PuiseuxPoly::from_int_terms(&[(0, m, 1)]))
            }
            _ => (
                PuiseuxPoly::from_int_terms(&[(3, 0, 1)]),
                PuiseuxPoly::from_int_terms(&[(0, m, 1), (1, 1, 1)]),
            ),
        };
        f1 + f2.scale(sigma)
    }

    /// `(l_m, c_m)` of the degenerate Airy bound.
    pub fn airy_constants(m: u32) -> (Rational, Rational) {
        if m < 6 {
            (rat(1, 6), int(1))
        } else {
            (rat(m as i64 - 3, 2 * (2 * m as i64 - 3)), int(2))
        }
    }

    /// Reciprocal of the claimed bound, so that `|J| · envelope` should stay bounded.
    pub fn envelope(&self, lambda: f64, sigma: f64) -> f64 {
        let ls = (lambda * sigma).abs();
        match *self {
            SmallParamKind::NonDegenerate { m } => (1.0 + lambda).sqrt() * (1.0 + ls).powf(1.0 / m as f64),
            SmallParamKind::Airy => (1.0 + lambda).cbrt() * (1.0 + ls).sqrt(),
            SmallParamKind::DegenerateAiry { m } => {
                let (l, c) = Self::airy_constants(m);
                let (l, c) = (crate::poly::to_f64(&l), crate::poly::to_f64(&c));
                lambda.powf(0.5 + EPS_HAT) * sigma.abs().powf(l + c * EPS_HAT)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallParamOptions {
    /// `λ = 2^k` for `k` in this range.
    pub lambda_exps: (i32, i32),
    /// `σ = 2^k` for `k` in this range.
    pub sigma_exps: (i32, i32),
    pub r0: f64,
    /// Octaves per block in the stability comparison.
    pub block: usize,
    pub quad: QuadOptions,
}

impl Default for SmallParamOptions {
    fn default() -> Self {
        SmallParamOptions { lambda_exps: (4, 12), sigma_exps: (-8, 0), r0: 0.5, block: 3, quad: QuadOptions::default() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SmallParamReport {
    pub kind: SmallParamKind,
    pub m: u32,
    pub lambda_grid: Vec<f64>,
    pub sigma_grid: Vec<f64>,
    /// `|J(λ_i, σ_j)|`.
    pub values: Vec<Vec<f64>>,
    /// `|J(λ_i, σ_j)| · envelope(λ_i, σ_j)`.
    pub ratio_matrix: Vec<Vec<f64>>,
    /// Largest ratio per λ-block, lowest block first.
    pub block_max: Vec<f64>,
    pub finite: bool,
    pub stable: bool,
    /// `|J| <= ∫ψ` on every grid point.
    pub bounded_by_mass: bool,
    /// Decay of the `σ = 0` row, for the Airy kind.
    pub sigma_zero_fit: Option<ExponentFit>,
}

fn dyadic(range: (i32, i32)) -> Vec<f64> {
    (range.0..=range.1).map(|k| 2f64.powi(k)).collect()
}

fn dyadic_rational(k: i32) -> Rational {
    if k >= 0 {
        Rational::from_integer(num_bigint::BigInt::from(1u8) << k as usize)
    } else {
        Rational::new(1.into(), num_bigint::BigInt::from(1u8) << (-k) as usize)
    }
}

fn abs_j(phi: &PuiseuxPoly, bump: &Bump, lambda: f64, quad: &QuadOptions) -> Result<f64> {
    Ok(oscillatory_integral(&CompiledPhase::new(phi), bump, lambda, quad)?.value.norm())
}

pub fn small_param_bound_check(kind: SmallParamKind, opts: &SmallParamOptions) -> Result<SmallParamReport> {
    let m = kind.m();
    if m < 2 {
        return Err(Error::InvalidInput("m must be at least 2".into()));
    }
    let bump = Bump::Tensor { r0: opts.r0 };
    let lambda_grid = dyadic(opts.lambda_exps);
    let sigma_grid = dyadic(opts.sigma_exps);
    let sigma_exact: Vec<Rational> = (opts.sigma_exps.0..=opts.sigma_exps.1).map(dyadic_rational).collect();
    let mass = abs_j(&kind.phase(&int(1)), &bump, 0.0, &opts.quad)?;

    let jobs: Vec<(usize, usize)> =
        (0..lambda_grid.len()).flat_map(|i| (0..sigma_grid.len()).map(move |j| (i, j))).collect();
    let cells: Vec<Result<f64>> = jobs
        .par_iter()
        .map(|&(i, j)| abs_j(&kind.phase(&sigma_exact[j]), &bump, lambda_grid[i], &opts.quad))
        .collect();
    let mut values = vec![vec![0.0; sigma_grid.len()]; lambda_grid.len()];
    for (&(i, j), v) in jobs.iter().zip(cells) {
        values[i][j] = v?;
    }
    let ratio_matrix: Vec<Vec<f64>> = values
        .iter()
        .zip(&lambda_grid)
        .map(|(row, &l)| row.iter().zip(&sigma_grid).map(|(v, &s)| v * kind.envelope(l, s)).collect())
        .collect();
    let finite = ratio_matrix.iter().flatten().all(|r| r.is_finite());
    let bounded_by_mass = values.iter().flatten().all(|v| *v <= mass * (1.0 + 1e-9));

    let row_max: Vec<f64> = ratio_matrix.iter().map(|r| r.iter().cloned().fold(0.0, f64::max)).collect();
    let block = opts.block.max(1);
    let mut block_max: Vec<f64> = row_max
        .rchunks(block)
        .filter(|c| c.len() == block)
        .map(|c| c.iter().cloned().fold(0.0, f64::max))
        .collect();
    block_max.reverse();
    let stable = finite && block_max.len() >= 2 && {
        let n = block_max.len();
        block_max[n - 1] <= 3.0 * block_max[n - 2]
    };

    let sigma_zero_fit = if kind == SmallParamKind::Airy {
        let phi = kind.phase(&Rational::from_integer(0.into()));
        let row: Vec<f64> = lambda_grid
            .par_iter()
            .map(|&l| abs_j(&phi, &bump, l, &opts.quad))
            .collect::<Result<_>>()?;
        Some(fit_exponent(&lambda_grid, &row, lambda_grid.len(), |l| l, rat(-1, 3), 0.05, false)?)
    } else {
        None
    };

    Ok(SmallParamReport {
        kind,
        m,
        lambda_grid,
        sigma_grid,
        values,
        ratio_matrix,
        block_max,
        finite,
        stable,
        bounded_by_mass,
        sigma_zero_fit,
    })
}
