//! Floating-point evaluation of a phase, with per-panel variation bounds.

use crate::poly::{to_f64, PuiseuxPoly};

#[derive(Clone, Debug)]
struct Term {
    c: f64,
    e1: f64,
    e1_int: Option<i32>,
    e2: i32,
}

/// A polynomial phase lowered to `f64` for fast repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledPhase {
    terms: Vec<Term>,
}

fn pow_abs(x: f64, e: f64, e_int: Option<i32>) -> f64 {
    match e_int {
        Some(n) => x.abs().powi(n),
        None => x.abs().powf(e),
    }
}

/// `max |x|` and `min |x|` over `[lo, hi]`.
fn abs_range(lo: f64, hi: f64) -> (f64, f64) {
    let max = lo.abs().max(hi.abs());
    let min = if lo <= 0.0 && hi >= 0.0 { 0.0 } else { lo.abs().min(hi.abs()) };
    (min, max)
}

impl CompiledPhase {
    pub fn new(p: &PuiseuxPoly) -> Self {
        let terms = p
            .terms()
            .map(|(e, c)| {
                let e1 = to_f64(&e.e1);
                let e1_int = e.e1.is_integer().then(|| to_f64(&e.e1) as i32);
                Term { c: to_f64(c), e1, e1_int, e2: e.e2 as i32 }
            })
            .collect();
        CompiledPhase { terms }
    }

    pub fn has_integer_exponents(&self) -> bool {
        self.terms.iter().all(|t| t.e1_int.is_some())
    }

    /// Value at `(x1, x2)`; fractional exponents assume `x1 >= 0`.
    #[inline]
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        let mut s = 0.0;
        for t in &self.terms {
            let p1 = match t.e1_int {
                Some(n) => x1.powi(n),
                None => x1.powf(t.e1),
            };
            s += t.c * p1 * x2.powi(t.e2);
        }
        s
    }

    /// Values on the tensor grid `x1s × x2s`, written to `out[i][j]`.
    pub fn eval_tensor(&self, x1s: &[f64; 8], x2s: &[f64; 8], out: &mut [[f64; 8]; 8]) {
        for row in out.iter_mut() {
            *row = [0.0; 8];
        }
        for t in &self.terms {
            let mut p1 = [0.0; 8];
            let mut p2 = [0.0; 8];
            for k in 0..8 {
                p1[k] = t.c
                    * match t.e1_int {
                        Some(n) => x1s[k].powi(n),
                        None => x1s[k].powf(t.e1),
                    };
                p2[k] = x2s[k].powi(t.e2);
            }
            for (i, row) in out.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v += p1[i] * p2[j];
                }
            }
        }
    }

    /// Exact gradient at `(x1, x2)`; fractional exponents assume `x1 > 0`.
    pub fn gradient(&self, x1: f64, x2: f64) -> (f64, f64) {
        let (mut g1, mut g2) = (0.0, 0.0);
        for t in &self.terms {
            let p2 = x2.powi(t.e2);
            if t.e1 != 0.0 {
                let p1 = match t.e1_int {
                    Some(n) => x1.powi(n - 1),
                    None => x1.powf(t.e1 - 1.0),
                };
                g1 += t.c * t.e1 * p1 * p2;
            }
            if t.e2 != 0 {
                let p1 = match t.e1_int {
                    Some(n) => x1.powi(n),
                    None => x1.powf(t.e1),
                };
                g2 += t.c * t.e2 as f64 * p1 * x2.powi(t.e2 - 1);
            }
        }
        (g1, g2)
    }

    /// Termwise bounds on `|∂11φ|`, `|∂12φ|`, `|∂22φ|` over a panel.
    fn hessian_bounds(&self, x1: (f64, f64), x2: (f64, f64)) -> (f64, f64, f64) {
        let (min1, max1) = abs_range(x1.0, x1.1);
        let (_, max2) = abs_range(x2.0, x2.1);
        let pow1 = |t: &Term, k: i32| -> f64 {
            let e = t.e1 - k as f64;
            if e >= 0.0 {
                pow_abs(max1, e, t.e1_int.map(|n| n - k))
            } else if min1 > 0.0 {
                min1.powf(e)
            } else {
                f64::INFINITY
            }
        };
        let (mut h11, mut h12, mut h22) = (0.0, 0.0, 0.0);
        for t in &self.terms {
            let c = t.c.abs();
            let f11 = (t.e1 * (t.e1 - 1.0)).abs();
            if f11 != 0.0 {
                h11 += c * f11 * pow1(t, 2) * max2.powi(t.e2);
            }
            if t.e1 != 0.0 && t.e2 != 0 {
                h12 += c * t.e1 * t.e2 as f64 * pow1(t, 1) * max2.powi(t.e2 - 1);
            }
            if t.e2 >= 2 {
                h22 += c * (t.e2 * (t.e2 - 1)) as f64 * pow1(t, 0) * max2.powi(t.e2 - 2);
            }
        }
        (h11, h12, h22)
    }

    /// Bound on the oscillation of the phase over a panel, split into the
    /// contributions `(x1-direction, x2-direction, total)`.
    ///
    /// Takes the better of a second-order Taylor bound around the centre and
    /// a termwise first-order bound.
    pub fn variation(&self, x1: (f64, f64), x2: (f64, f64)) -> (f64, f64, f64) {
        let coarse = self.termwise_variation(x1, x2);
        let (w, h) = (x1.1 - x1.0, x2.1 - x2.0);
        let (c1, c2) = (0.5 * (x1.0 + x1.1), 0.5 * (x2.0 + x2.1));
        if c1 <= 0.0 && !self.has_integer_exponents() {
            return coarse;
        }
        let (g1, g2) = self.gradient(c1, c2);
        let (h11, h12, h22) = self.hessian_bounds(x1, x2);
        let d1 = g1.abs() * w + 0.25 * (h11 * w * w + h12 * w * h);
        let d2 = g2.abs() * h + 0.25 * (h22 * h * h + h12 * w * h);
        let total = d1 + d2;
        if total.is_finite() && total < coarse.2 {
            (d1, d2, total)
        } else {
            coarse
        }
    }

    fn termwise_variation(&self, x1: (f64, f64), x2: (f64, f64)) -> (f64, f64, f64) {
        let (w, h) = (x1.1 - x1.0, x2.1 - x2.0);
        let (min1, max1) = abs_range(x1.0, x1.1);
        let (_, max2) = abs_range(x2.0, x2.1);
        let (mut d1, mut d2, mut total) = (0.0, 0.0, 0.0);
        for t in &self.terms {
            let c = t.c.abs();
            let sup = c * pow_abs(max1, t.e1, t.e1_int) * max2.powi(t.e2);
            let g1 = if t.e1 == 0.0 {
                0.0
            } else if t.e1 >= 1.0 {
                c * t.e1 * pow_abs(max1, t.e1 - 1.0, t.e1_int.map(|n| n - 1)) * max2.powi(t.e2)
            } else if min1 > 0.0 {
                c * t.e1 * min1.powf(t.e1 - 1.0) * max2.powi(t.e2)
            } else {
                f64::INFINITY
            };
            let g2 = if t.e2 == 0 { 0.0 } else { c * t.e2 as f64 * pow_abs(max1, t.e1, t.e1_int) * max2.powi(t.e2 - 1) };
            let grad = g1 * w + g2 * h;
            if grad <= 2.0 * sup {
                d1 += g1 * w;
                d2 += g2 * h;
                total += grad;
            } else {
                // The sup bound wins; attribute it to the longer side.
                if w >= h {
                    d1 += 2.0 * sup;
                } else {
                    d2 += 2.0 * sup;
                }
                total += 2.0 * sup;
            }
        }
        (d1, d2, total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_like_the_exact_polynomial() {
        let p = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)]);
        let c = CompiledPhase::new(&p);
        for &(x1, x2) in &[(0.3, -0.2), (-0.4, 0.1), (0.0, 0.5)] {
            assert!((c.eval(x1, x2) - p.evaluate_real(x1, x2).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn variation_bounds_sampled_oscillation() {
        let p = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)]);
        let c = CompiledPhase::new(&p);
        let (x1, x2) = ((0.1, 0.2), (-0.05, 0.03));
        let (_, _, bound) = c.variation(x1, x2);
        let (_, _, coarse) = c.termwise_variation(x1, x2);
        assert!(bound <= coarse);
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..=20 {
            for j in 0..=20 {
                let v = c.eval(x1.0 + 0.1 * i as f64 / 20.0, x2.0 + 0.08 * j as f64 / 20.0);
                lo = lo.min(v);
                hi = hi.max(v);
            }
        }
        assert!(hi - lo <= bound + 1e-15);
    }

    #[test]
    fn tensor_evaluation_matches_pointwise() {
        let p = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)]);
        let c = CompiledPhase::new(&p);
        let xs: [f64; 8] = std::array::from_fn(|k| -0.4 + 0.1 * k as f64);
        let ys: [f64; 8] = std::array::from_fn(|k| 0.35 - 0.09 * k as f64);
        let mut out = [[0.0; 8]; 8];
        c.eval_tensor(&xs, &ys, &mut out);
        for i in 0..8 {
            for j in 0..8 {
                assert!((out[i][j] - c.eval(xs[i], ys[j])).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn gradient_matches_exact_derivatives() {
        use crate::poly::Variable;
        let p = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)]);
        let c = CompiledPhase::new(&p);
        let (g1, g2) = c.gradient(0.3, -0.2);
        let d1 = p.partial_derivative(Variable::X1, 1).evaluate_real(0.3, -0.2).unwrap();
        let d2 = p.partial_derivative(Variable::X2, 1).evaluate_real(0.3, -0.2).unwrap();
        assert!((g1 - d1).abs() < 1e-14 && (g2 - d2).abs() < 1e-14);
    }
}
