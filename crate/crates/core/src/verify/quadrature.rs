//! Adaptive composite Gauss–Legendre quadrature for `∫ e^{iλφ} η dx`.
//!
//! Panels are split until the phase moves by at most `max_phase` radians
//! across each one. Panel sums are computed in parallel and reduced in a
//! fixed order, so results do not depend on the thread count.

use num_complex::Complex64;
use rayon::prelude::*;

use super::phase::CompiledPhase;
use crate::error::{Error, Result};

const GL_NODES: [f64; 8] = [
    -0.960_289_856_497_536_3,
    -0.796_666_477_413_626_7,
    -0.525_532_409_916_329,
    -0.183_434_642_495_649_8,
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 8] = [
    0.101_228_536_290_376_3,
    0.222_381_034_453_374_5,
    0.313_706_645_877_887_3,
    0.362_683_783_378_362,
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// `exp(1 − 1/(1 − s²))` for `|s| < 1`, else 0. Equals 1 at `s = 0`.
pub fn bump_profile(s: f64) -> f64 {
    let t = 1.0 - s * s;
    if t <= 0.0 {
        0.0
    } else {
        (1.0 - 1.0 / t).exp()
    }
}

/// Smooth compactly supported amplitude centred at the origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bump {
    /// `η(|x|/r0)`, supported in the disc of radius `r0`.
    Radial { r0: f64 },
    /// `η(x1/r0)·η(x2/r0)`, supported in the square `[−r0, r0]²`.
    Tensor { r0: f64 },
}

impl Default for Bump {
    fn default() -> Self {
        Bump::Radial { r0: 0.75 }
    }
}

impl Bump {
    pub fn radius(&self) -> f64 {
        match *self {
            Bump::Radial { r0 } | Bump::Tensor { r0 } => r0,
        }
    }

    #[inline]
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        match *self {
            Bump::Radial { r0 } => bump_profile((x1 * x1 + x2 * x2).sqrt() / r0),
            Bump::Tensor { r0 } => bump_profile(x1 / r0) * bump_profile(x2 / r0),
        }
    }

    fn misses(&self, x1: (f64, f64), x2: (f64, f64)) -> bool {
        match *self {
            Bump::Radial { r0 } => {
                let n1 = if x1.0 <= 0.0 && x1.1 >= 0.0 { 0.0 } else { x1.0.abs().min(x1.1.abs()) };
                let n2 = if x2.0 <= 0.0 && x2.1 >= 0.0 { 0.0 } else { x2.0.abs().min(x2.1.abs()) };
                n1 * n1 + n2 * n2 >= r0 * r0
            }
            Bump::Tensor { .. } => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    /// Largest phase change allowed across one panel.
    pub max_phase: f64,
    /// Initial panels per side of the support square.
    pub base_divisions: usize,
    pub max_panels: usize,
    /// Integrate over `x1 >= 0` only.
    pub half_plane: bool,
}

impl Default for QuadOptions {
    fn default() -> Self {
        QuadOptions {
            max_phase: std::f64::consts::PI,
            base_divisions: 32,
            max_panels: 40_000_000,
            half_plane: false,
        }
    }
}

impl QuadOptions {
    /// Same run with twice the panel density in each direction.
    pub fn refined(&self) -> Self {
        QuadOptions { max_phase: self.max_phase / 2.0, base_divisions: self.base_divisions * 2, ..*self }
    }
}

#[derive(Clone, Copy, Debug)]
struct Panel {
    x1: (f64, f64),
    x2: (f64, f64),
}

fn base_panels(bump: &Bump, opts: &QuadOptions) -> Vec<Panel> {
    let r0 = bump.radius();
    let n = opts.base_divisions.max(1);
    let x1_lo = if opts.half_plane { 0.0 } else { -r0 };
    let n1 = if opts.half_plane { n.div_ceil(2) } else { n };
    let w = (r0 - x1_lo) / n1 as f64;
    let h = 2.0 * r0 / n as f64;
    let mut out = Vec::with_capacity(n1 * n);
    for i in 0..n1 {
        for j in 0..n {
            let x1 = (x1_lo + i as f64 * w, x1_lo + (i + 1) as f64 * w);
            let x2 = (-r0 + j as f64 * h, -r0 + (j + 1) as f64 * h);
            if !bump.misses(x1, x2) {
                out.push(Panel { x1, x2 });
            }
        }
    }
    out
}

/// Depth-first refinement of one base panel; returns the sum and leaf count.
fn refine_panel(
    phase: &CompiledPhase,
    bump: &Bump,
    lambda: f64,
    opts: &QuadOptions,
    root: Panel,
) -> (Complex64, usize) {
    let mut stack = vec![root];
    let mut acc = Complex64::new(0.0, 0.0);
    let mut leaves = 0usize;
    while let Some(p) = stack.pop() {
        if bump.misses(p.x1, p.x2) {
            continue;
        }
        let (d1, d2, total) = phase.variation(p.x1, p.x2);
        if lambda.abs() * total <= opts.max_phase {
            acc += panel_sum(phase, bump, lambda, &p);
            leaves += 1;
            continue;
        }
        if leaves + stack.len() > opts.max_panels {
            return (acc, opts.max_panels + 1);
        }
        let (a, b) = if d1 >= d2 {
            let mid = 0.5 * (p.x1.0 + p.x1.1);
            (Panel { x1: (p.x1.0, mid), x2: p.x2 }, Panel { x1: (mid, p.x1.1), x2: p.x2 })
        } else {
            let mid = 0.5 * (p.x2.0 + p.x2.1);
            (Panel { x1: p.x1, x2: (p.x2.0, mid) }, Panel { x1: p.x1, x2: (mid, p.x2.1) })
        };
        stack.push(b);
        stack.push(a);
    }
    (acc, leaves)
}

fn panel_sum(phase: &CompiledPhase, bump: &Bump, lambda: f64, p: &Panel) -> Complex64 {
    let (c1, r1) = (0.5 * (p.x1.0 + p.x1.1), 0.5 * (p.x1.1 - p.x1.0));
    let (c2, r2) = (0.5 * (p.x2.0 + p.x2.1), 0.5 * (p.x2.1 - p.x2.0));
    let x1s: [f64; 8] = std::array::from_fn(|k| c1 + r1 * GL_NODES[k]);
    let x2s: [f64; 8] = std::array::from_fn(|k| c2 + r2 * GL_NODES[k]);
    let mut values = [[0.0; 8]; 8];
    phase.eval_tensor(&x1s, &x2s, &mut values);
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..8 {
        for j in 0..8 {
            let amp = bump.eval(x1s[i], x2s[j]);
            if amp == 0.0 {
                continue;
            }
            let (s, c) = (lambda * values[i][j]).sin_cos();
            acc += Complex64::new(c, s) * (amp * GL_WEIGHTS[i] * GL_WEIGHTS[j]);
        }
    }
    acc * (r1 * r2)
}

/// Quadrature result with the number of panels used.
#[derive(Clone, Copy, Debug)]
pub struct Integral {
    pub value: Complex64,
    pub panels: usize,
}

/// `∫ e^{iλφ(x)} η(x) dx`.
pub fn oscillatory_integral(
    phase: &CompiledPhase,
    bump: &Bump,
    lambda: f64,
    opts: &QuadOptions,
) -> Result<Integral> {
    let parts: Vec<(Complex64, usize)> = base_panels(bump, opts)
        .into_par_iter()
        .map(|p| refine_panel(phase, bump, lambda, opts, p))
        .collect();
    let mut value = Complex64::new(0.0, 0.0);
    let mut panels = 0usize;
    for (v, n) in parts {
        value += v;
        panels = panels.saturating_add(n);
    }
    if panels > opts.max_panels {
        return Err(Error::QuadratureBudgetExceeded { panels, lambda });
    }
    Ok(Integral { value, panels })
}

/// Gauss–Legendre integral of `f` over `[a, b]` with `n` equal panels.
pub fn integrate_1d<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut total = 0.0;
    for k in 0..n {
        let c = a + (k as f64 + 0.5) * h;
        let s: f64 = GL_NODES.iter().zip(GL_WEIGHTS).map(|(u, w)| w * f(c + 0.5 * h * u)).sum();
        total += 0.5 * h * s;
    }
    total
}

/// Complex variant of [`integrate_1d`].
pub fn integrate_1d_complex<F: Fn(f64) -> Complex64>(f: F, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let c = a + (k as f64 + 0.5) * h;
        let mut s = Complex64::new(0.0, 0.0);
        for (u, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
            s += f(c + 0.5 * h * u) * w;
        }
        total += s * (0.5 * h);
    }
    total
}
