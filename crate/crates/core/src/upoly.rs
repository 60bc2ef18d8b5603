//! Dense univariate polynomials over the rationals, with squarefree
//! decomposition and Sturm-based real root isolation on exact endpoints.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::{int, to_f64, Rational};

/// Coefficients stored low degree first, with no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        UPoly { coeffs: vec![Rational::one()] }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + to_f64(c))
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.leading();
        Self::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        let lc = divisor.leading();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); self.coeffs.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Yun's squarefree decomposition: `self = lc · Π s_i^i` with pairwise
    /// coprime squarefree monic `s_i`. Returns the non-constant `(s_i, i)`.
    pub fn squarefree_decomposition(&self) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        loop {
            let s = b.gcd(&d);
            if s.degree() > 0 {
                out.push((s.clone(), i));
            }
            b = b.div_rem(&s).0;
            if b.degree() == 0 {
                break;
            }
            c = d.div_rem(&s).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let z = Rational::zero();
        Self::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) - other.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    /// Sturm chain `p, p', -rem(p, p'), ...`.
    pub fn sturm_chain(&self) -> Vec<UPoly> {
        let mut chain = vec![self.clone()];
        let d = self.derivative();
        if d.is_zero() {
            return chain;
        }
        chain.push(d);
        loop {
            let n = chain.len();
            let r = chain[n - 2].div_rem(&chain[n - 1]).1;
            if r.is_zero() {
                break;
            }
            chain.push(r.scale(&int(-1)));
        }
        chain
    }

    /// Cauchy bound: every real root lies in `(-B, B)`.
    pub fn root_bound(&self) -> Rational {
        let lc = self.leading().abs();
        let m = self.coeffs.iter().map(|c| c.abs() / &lc).max().unwrap_or_else(Rational::zero);
        m + int(1)
    }

    /// Real roots of a squarefree polynomial, each exact or in an isolating interval.
    pub fn isolate_real_roots(&self) -> Vec<RootValue> {
        if self.degree() == 0 {
            return Vec::new();
        }
        let chain = self.sturm_chain();
        let b = self.root_bound();
        let mut out = Vec::new();
        isolate(self, &chain, -b.clone(), b, &mut out);
        out.into_iter().map(|r| r.try_exact(self)).collect()
    }

    /// Primitive integer polynomial with the same roots.
    fn to_primitive_integer(&self) -> Vec<BigInt> {
        let l = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self.coeffs.iter().map(|c| (c * Rational::from_integer(l.clone())).to_integer()).collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
        ints.into_iter().map(|c| c / &g).collect()
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*t"),
                _ => format!("{c}*t^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn sign_variations(chain: &[UPoly], x: &Rational) -> usize {
    let mut count = 0;
    let mut last = 0i8;
    for p in chain {
        let v = p.eval(x);
        let s = if v.is_positive() {
            1
        } else if v.is_negative() {
            -1
        } else {
            0
        };
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Distinct real roots in `(a, b]`.
pub fn count_roots(chain: &[UPoly], a: &Rational, b: &Rational) -> usize {
    sign_variations(chain, a) - sign_variations(chain, b)
}

fn isolate(p: &UPoly, chain: &[UPoly], a: Rational, b: Rational, out: &mut Vec<RootValue>) {
    let n = count_roots(chain, &a, &b);
    if n == 0 {
        return;
    }
    if n == 1 {
        if p.eval(&b).is_zero() {
            out.push(RootValue::Exact(b));
        } else {
            out.push(RootValue::Interval(a, b));
        }
        return;
    }
    let m = (&a + &b) / int(2);
    isolate(p, chain, a, m.clone(), out);
    isolate(p, chain, m, b, out);
}

/// A real algebraic root: an exact rational or an isolating interval `(lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RootValue {
    Exact(Rational),
    Interval(Rational, Rational),
}

impl RootValue {
    pub fn exact(&self) -> Option<&Rational> {
        match self {
            RootValue::Exact(r) => Some(r),
            RootValue::Interval(..) => None,
        }
    }

    /// Midpoint approximation.
    pub fn approx(&self) -> f64 {
        match self {
            RootValue::Exact(r) => to_f64(r),
            RootValue::Interval(a, b) => to_f64(&((a + b) / int(2))),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RootValue::Exact(r) if r.is_zero())
    }

    /// Bisects an isolating interval of a squarefree `p` below `width`.
    pub fn refine(&self, p: &UPoly, width: &Rational) -> RootValue {
        match self {
            RootValue::Exact(_) => self.clone(),
            RootValue::Interval(a, b) => {
                let (mut a, mut b) = (a.clone(), b.clone());
                let sb = p.eval(&b).is_positive();
                while &(&b - &a) > width {
                    let m = (&a + &b) / int(2);
                    let v = p.eval(&m);
                    if v.is_zero() {
                        return RootValue::Exact(m);
                    }
                    if v.is_positive() == sb {
                        b = m;
                    } else {
                        a = m;
                    }
                }
                RootValue::Interval(a, b)
            }
        }
    }

    /// Replaces an interval by the exact root when that root is rational.
    fn try_exact(self, p: &UPoly) -> RootValue {
        let RootValue::Interval(..) = self else { return self };
        // A rational root of a primitive integer polynomial is k / lc for some integer k.
        let ints = p.to_primitive_integer();
        let lc = ints.last().expect("non-zero").abs();
        let width = Rational::new(BigInt::one(), &lc * BigInt::from(4));
        let refined = self.refine(p, &width);
        let RootValue::Interval(a, b) = &refined else { return refined };
        let lcq = Rational::from_integer(lc.clone());
        let lo = (a * &lcq).floor().to_integer();
        let hi = (b * &lcq).ceil().to_integer();
        let mut k = lo;
        while k <= hi {
            let cand = Rational::new(k.clone(), lc.clone());
            if &cand > a && &cand <= b && p.eval(&cand).is_zero() {
                return RootValue::Exact(cand);
            }
            k += 1;
        }
        refined
    }
}

impl fmt::Display for RootValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RootValue::Exact(r) => write!(f, "{r}"),
            RootValue::Interval(a, b) => write!(f, "({a}, {b}]"),
        }
    }
}

/// Real roots with multiplicities, ascending.
pub fn real_roots_with_multiplicity(p: &UPoly) -> Vec<(RootValue, u32)> {
    let mut out: Vec<(RootValue, u32)> = Vec::new();
    for (s, mult) in p.squarefree_decomposition() {
        for r in s.isolate_real_roots() {
            out.push((r, mult));
        }
    }
    out.sort_by(|x, y| x.0.approx().total_cmp(&y.0.approx()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    #[test]
    fn division_and_gcd() {
        let a = UPoly::from_ints(&[-1, 0, 1]); // t^2 - 1
        let b = UPoly::from_ints(&[1, 1]); // t + 1
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, UPoly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&UPoly::from_ints(&[2, 2])), b);
    }

    #[test]
    fn yun_decomposition() {
        // (t - 1)^3 (t + 2) (t^2 + 1)^2
        let p = UPoly::from_ints(&[-1, 1])
            .mul(&UPoly::from_ints(&[-1, 1]))
            .mul(&UPoly::from_ints(&[-1, 1]))
            .mul(&UPoly::from_ints(&[2, 1]))
            .mul(&UPoly::from_ints(&[1, 0, 1]))
            .mul(&UPoly::from_ints(&[1, 0, 1]));
        let sf = p.squarefree_decomposition();
        assert_eq!(
            sf,
            vec![
                (UPoly::from_ints(&[2, 1]), 1),
                (UPoly::from_ints(&[1, 0, 1]), 2),
                (UPoly::from_ints(&[-1, 1]), 3)
            ]
        );
    }

    #[test]
    fn isolates_irrational_and_rational_roots() {
        // (t^2 - 2)(3t - 1)
        let p = UPoly::from_ints(&[-2, 0, 1]).mul(&UPoly::from_ints(&[-1, 3]));
        let roots = real_roots_with_multiplicity(&p);
        assert_eq!(roots.len(), 3);
        assert!(matches!(roots[0].0, RootValue::Interval(..)));
        assert!((roots[0].0.approx() + 2f64.sqrt()).abs() < 0.5);
        assert_eq!(roots[1].0, RootValue::Exact(rat(1, 3)));
        let r = roots[2].0.refine(&UPoly::from_ints(&[-2, 0, 1]), &rat(1, 1_000_000));
        assert!((r.approx() - 2f64.sqrt()).abs() < 1e-6);
    }

    #[test]
    fn no_real_roots() {
        assert!(real_roots_with_multiplicity(&UPoly::from_ints(&[1, 0, 1])).is_empty());
        assert!(real_roots_with_multiplicity(&UPoly::from_ints(&[5])).is_empty());
    }

    #[test]
    fn sturm_counts() {
        let p = UPoly::from_ints(&[0, -1, 0, 1]); // t^3 - t
        let chain = p.sturm_chain();
        assert_eq!(count_roots(&chain, &int(-2), &int(2)), 3);
        assert_eq!(count_roots(&chain, &rat(-1, 2), &rat(1, 2)), 1);
    }
}
