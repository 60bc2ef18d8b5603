//! Exact bivariate Puiseux polynomials.
//!
//! A [`PuiseuxPoly`] is a finite sum `Σ c · x1^e1 · x2^e2` with exact rational
//! coefficients. `e1` is a non-negative rational and `e2` a non-negative integer.
//! All values are immutable once built; every operation returns a new value.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Huge numerators and denominators overflow the direct conversion.
        let n = r.numer().to_f64().unwrap_or(f64::NAN);
        let d = r.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Denominator of a rational as `u64`. Exponent denominators stay small in practice.
fn denom_u64(r: &Rational) -> u64 {
    r.denom().to_u64().expect("exponent denominator exceeds u64")
}

/// Binomial coefficient `C(n, k)`.
fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Exponent of a monomial `x1^e1 x2^e2`; ordered lexicographically by `(e1, e2)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExponentPair {
    pub e1: Rational,
    pub e2: u32,
}

impl ExponentPair {
    pub fn new(e1: Rational, e2: u32) -> Self {
        assert!(!e1.is_negative(), "x1 exponent must be non-negative");
        ExponentPair { e1, e2 }
    }

    pub fn int(e1: u32, e2: u32) -> Self {
        ExponentPair { e1: int(e1 as i64), e2 }
    }

    pub fn t2(&self) -> Rational {
        int(self.e2 as i64)
    }

    /// `κ1·e1 + κ2·e2`.
    pub fn weighted_degree(&self, w: &Weight) -> Rational {
        &w.k1 * &self.e1 + &w.k2 * self.t2()
    }
}

impl fmt::Display for ExponentPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.e1, self.e2)
    }
}

/// A weight `κ = (κ1, κ2)` with both entries strictly positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub k1: Rational,
    pub k2: Rational,
}

impl Weight {
    pub fn new(k1: Rational, k2: Rational) -> Result<Self> {
        if !k1.is_positive() || !k2.is_positive() {
            return Err(Error::InvalidInput(format!(
                "weight entries must be positive, got ({k1}, {k2})"
            )));
        }
        Ok(Weight { k1, k2 })
    }

    /// `|κ| = κ1 + κ2`.
    pub fn norm(&self) -> Rational {
        &self.k1 + &self.k2
    }

    /// `a = κ2 / κ1`.
    pub fn ratio(&self) -> Rational {
        &self.k2 / &self.k1
    }

    /// Weight with ratio `κ2/κ1 = a` whose line `κ·t = 1` passes through `point`.
    pub fn through_point(point: &ExponentPair, a: &Rational) -> Result<Self> {
        let denom = &point.e1 + a * point.t2();
        if !denom.is_positive() {
            return Err(Error::InvalidInput("weight line through the origin".into()));
        }
        let k1 = denom.recip();
        let k2 = a * &k1;
        Weight::new(k1, k2)
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.k1, self.k2)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variable {
    X1,
    X2,
}

/// Finitely supported bivariate polynomial with rational x1-exponents.
///
/// Invariants: no stored zero coefficients, and every x1-exponent denominator
/// divides `ramification`. Equality compares terms only; the ramification
/// index is bookkeeping and may exceed the minimal one after shears.
#[derive(Clone, Debug)]
pub struct PuiseuxPoly {
    terms: BTreeMap<ExponentPair, Rational>,
    ramification: u64,
}

impl PartialEq for PuiseuxPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}

impl Eq for PuiseuxPoly {}

impl std::hash::Hash for PuiseuxPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl Default for PuiseuxPoly {
    fn default() -> Self {
        Self::zero()
    }
}

impl PuiseuxPoly {
    pub fn zero() -> Self {
        PuiseuxPoly { terms: BTreeMap::new(), ramification: 1 }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, ExponentPair::int(0, 0))
    }

    pub fn monomial(c: Rational, exp: ExponentPair) -> Self {
        Self::from_terms([(exp, c)])
    }

    pub fn x1() -> Self {
        Self::monomial(int(1), ExponentPair::int(1, 0))
    }

    pub fn x2() -> Self {
        Self::monomial(int(1), ExponentPair::int(0, 1))
    }

    /// Sums the given terms; repeated exponents are combined and zeros dropped.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (ExponentPair, Rational)>,
    {
        let mut map: BTreeMap<ExponentPair, Rational> = BTreeMap::new();
        for (exp, c) in terms {
            assert!(!exp.e1.is_negative(), "x1 exponent must be non-negative");
            *map.entry(exp).or_insert_with(Rational::zero) += c;
        }
        map.retain(|_, c| !c.is_zero());
        let ramification = map.keys().fold(1u64, |q, e| q.lcm(&denom_u64(&e.e1)));
        PuiseuxPoly { terms: map, ramification }
    }

    /// Builds from integer exponents, e.g. `[(2, 0, 1), (0, 2, 1)]` for `x1^2 + x2^2`.
    pub fn from_int_terms(terms: &[(u32, u32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(a, b, c)| (ExponentPair::int(a, b), int(c))))
    }

    fn with_ramification(mut self, q: u64) -> Self {
        self.ramification = self.ramification.lcm(&q);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Puiseux ramification index `q`.
    pub fn ramification(&self) -> u64 {
        self.ramification
    }

    /// Terms in canonical `(e1, e2)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentPair, &Rational)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &ExponentPair> {
        self.terms.keys()
    }

    pub fn coeff(&self, exp: &ExponentPair) -> Rational {
        self.terms.get(exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_x2(&self) -> u32 {
        self.terms.keys().map(|e| e.e2).max().unwrap_or(0)
    }

    /// True when every x1-exponent is an integer.
    pub fn has_integer_exponents(&self) -> bool {
        self.terms.keys().all(|e| e.e1.is_integer())
    }

    pub fn is_x1_only(&self) -> bool {
        self.terms.keys().all(|e| e.e2 == 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero().with_ramification(self.ramification);
        }
        PuiseuxPoly {
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
            ramification: self.ramification,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::constant(int(1)).with_ramification(self.ramification);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Terms whose exponent satisfies `keep`.
    pub fn filter_terms<F>(&self, mut keep: F) -> Self
    where
        F: FnMut(&ExponentPair) -> bool,
    {
        let terms = self.terms.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (e.clone(), c.clone()));
        Self::from_terms(terms).with_ramification(self.ramification)
    }

    /// `φ(x1, x2 + c·x1^a)` by exact binomial expansion.
    pub fn substitute_shear(&self, c: &Rational, a: &Rational) -> Self {
        assert!(a.is_positive(), "shear exponent must be positive");
        let q = self.ramification.lcm(&denom_u64(a));
        if c.is_zero() {
            return self.clone().with_ramification(q);
        }
        let mut out = Vec::new();
        for (exp, coef) in &self.terms {
            let mut c_pow = Rational::one();
            for k in 0..=exp.e2 {
                let b = Rational::from_integer(binomial(exp.e2, k));
                let e1 = &exp.e1 + a * int(k as i64);
                out.push((ExponentPair { e1, e2: exp.e2 - k }, coef * &b * &c_pow));
                c_pow *= c;
            }
        }
        Self::from_terms(out).with_ramification(q)
    }

    /// Exact `order`-th partial derivative.
    ///
    /// Fractional x1-exponents follow the power rule; a term whose exponent would
    /// turn negative is a precondition violation and panics.
    pub fn partial_derivative(&self, var: Variable, order: u32) -> Self {
        let mut out = Vec::new();
        for (exp, coef) in &self.terms {
            match var {
                Variable::X2 => {
                    if exp.e2 < order {
                        continue;
                    }
                    let mut f = BigInt::one();
                    for i in 0..order {
                        f *= BigInt::from(exp.e2 - i);
                    }
                    out.push((
                        ExponentPair { e1: exp.e1.clone(), e2: exp.e2 - order },
                        coef * Rational::from_integer(f),
                    ));
                }
                Variable::X1 => {
                    let mut f = Rational::one();
                    for i in 0..order {
                        f *= &exp.e1 - int(i as i64);
                    }
                    if f.is_zero() {
                        continue;
                    }
                    let e1 = &exp.e1 - int(order as i64);
                    assert!(
                        !e1.is_negative(),
                        "derivative would produce a negative x1 exponent"
                    );
                    out.push((ExponentPair { e1, e2: exp.e2 }, coef * f));
                }
            }
        }
        Self::from_terms(out).with_ramification(self.ramification)
    }

    /// Double-precision value `Σ c·x1^e1·x2^e2`.
    pub fn evaluate_real(&self, x1: f64, x2: f64) -> Result<f64> {
        if x1 < 0.0 && !self.has_integer_exponents() {
            return Err(Error::Domain { x1 });
        }
        Ok(self
            .terms
            .iter()
            .map(|(e, c)| {
                let p1 = if e.e1.is_integer() {
                    x1.powi(e.e1.to_integer().to_i32().expect("exponent overflow"))
                } else {
                    x1.powf(to_f64(&e.e1))
                };
                to_f64(c) * p1 * x2.powi(e.e2 as i32)
            })
            .sum())
    }

    /// `φ(x2, x1)`; only defined for integer exponents.
    pub fn swap_variables(&self) -> Result<Self> {
        if !self.has_integer_exponents() {
            return Err(Error::RamifiedSwap);
        }
        Ok(Self::from_terms(self.terms.iter().map(|(e, c)| {
            let e1 = e.e1.to_integer().to_u32().expect("exponent overflow");
            (ExponentPair::int(e.e2, e1), c.clone())
        })))
    }

    /// `φ(-x1, x2)`; only defined for integer exponents.
    pub fn mirror_x1(&self) -> Result<Self> {
        if !self.has_integer_exponents() {
            return Err(Error::RamifiedSwap);
        }
        Ok(Self::from_terms(self.terms.iter().map(|(e, c)| {
            let odd = e.e1.to_integer().is_odd();
            (e.clone(), if odd { -c.clone() } else { c.clone() })
        })))
    }
}

impl Add for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn add(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let terms = self.terms.iter().chain(rhs.terms.iter()).map(|(e, c)| (e.clone(), c.clone()));
        PuiseuxPoly::from_terms(terms).with_ramification(self.ramification.lcm(&rhs.ramification))
    }
}

impl Sub for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn sub(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        self + &(-rhs)
    }
}

impl Neg for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn neg(self) -> PuiseuxPoly {
        self.scale(&int(-1))
    }
}

impl Mul for &PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn mul(self, rhs: &PuiseuxPoly) -> PuiseuxPoly {
        let mut out = Vec::with_capacity(self.len() * rhs.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.push((ExponentPair { e1: &ea.e1 + &eb.e1, e2: ea.e2 + eb.e2 }, ca * cb));
            }
        }
        PuiseuxPoly::from_terms(out).with_ramification(self.ramification.lcm(&rhs.ramification))
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for PuiseuxPoly {
            type Output = PuiseuxPoly;
            fn $m(self, rhs: PuiseuxPoly) -> PuiseuxPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for PuiseuxPoly {
    type Output = PuiseuxPoly;
    fn neg(self) -> PuiseuxPoly {
        -&self
    }
}

/// Canonical text form; it re-parses to the same polynomial.
impl fmt::Display for PuiseuxPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (exp, coef)) in self.terms.iter().enumerate() {
            let abs = coef.abs();
            if i == 0 {
                if coef.is_negative() {
                    write!(f, "-")?;
                }
            } else if coef.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = exp.e1.is_zero() && exp.e2 == 0;
            if !abs.is_one() || is_const {
                factors.push(abs.to_string());
            }
            if !exp.e1.is_zero() {
                factors.push(if exp.e1.is_one() {
                    "x1".to_string()
                } else if exp.e1.is_integer() {
                    format!("x1^{}", exp.e1)
                } else {
                    format!("x1^({})", exp.e1)
                });
            }
            if exp.e2 > 0 {
                factors.push(if exp.e2 == 1 { "x2".to_string() } else { format!("x2^{}", exp.e2) });
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
