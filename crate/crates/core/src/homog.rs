//! Mixed-homogeneous polynomials: factor structure, root multiplicities along
//! the unit circle, and the invariants `m(P)`, `d_h(P)`, `d(P)`, `h(P)`.
//!
//! A `κ`-homogeneous `P` factors as `c·x1^ν1·x2^ν2·Π (x2^q − λ_l x1^p)^{n_l}`
//! with `κ2/κ1 = p/q`. Its off-axis real roots are read from the profiles
//! `g₊(t) = P(1, t)` and `g₋(t) = P(−1, t)`; the order of vanishing along the
//! circle at such a root equals the multiplicity of the corresponding `t`-root.

use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::newton::{build_polyhedron, is_mixed_homogeneous};
use crate::poly::{int, PuiseuxPoly, Rational, Variable, Weight};
use crate::upoly::{real_roots_with_multiplicity, RootValue, UPoly};

/// Which half of the circle a root was found on: `x1 > 0` or `x1 < 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Pos,
    Neg,
}

impl Branch {
    pub fn sign(&self) -> &'static str {
        match self {
            Branch::Pos => "+",
            Branch::Neg => "-",
        }
    }
}

/// A real root `x2 = t·x1^{p/q}` of the profile on one branch (`t ≠ 0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealRoot {
    pub value: RootValue,
    pub multiplicity: u32,
    pub branch: Branch,
}

/// Weight data of a non-monomial homogeneous polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogShape {
    pub weight: Weight,
    /// `κ2/κ1 = p/q` in lowest terms.
    pub p: u64,
    pub q: u64,
    /// Total number of factors `n = Σ n_l`, complex roots included.
    pub n: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredHomog {
    /// Coefficient of the highest power of `x2`.
    pub c: Rational,
    pub nu1: Rational,
    pub nu2: u32,
    /// `None` for a single monomial.
    pub shape: Option<HomogShape>,
    pub real_roots: Vec<RealRoot>,
    /// `g₊` divided by `t^ν2`.
    pub profile_pos: UPoly,
    /// `g₋` divided by `t^ν2`; absent for fractional x1-exponents.
    pub profile_neg: Option<UPoly>,
    pub m: Rational,
    pub d_h: Option<Rational>,
    pub d: Rational,
    pub h: Rational,
}

impl FactoredHomog {
    /// Largest multiplicity of an off-axis real root.
    pub fn max_root_multiplicity(&self) -> u32 {
        self.real_roots.iter().map(|r| r.multiplicity).max().unwrap_or(0)
    }

    /// Whether the principal face of the Newton polyhedron is compact.
    pub fn principal_face_compact(&self) -> bool {
        match &self.d_h {
            None => self.nu1 == int(self.nu2 as i64),
            Some(dh) => dh >= &self.nu1 && dh >= &int(self.nu2 as i64),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogInvariants {
    pub m: Rational,
    pub d_h: Option<Rational>,
    pub d: Rational,
    pub h: Rational,
}

fn profile(poly: &PuiseuxPoly, nu2: u32, negative: bool) -> Option<UPoly> {
    let len = (poly.degree_x2() - nu2) as usize + 1;
    let mut coeffs = vec![Rational::zero(); len];
    for (e, c) in poly.terms() {
        let mut v = c.clone();
        if negative {
            if !e.e1.is_integer() {
                return None;
            }
            if e.e1.to_integer().is_odd() {
                v = -v;
            }
        }
        coeffs[(e.e2 - nu2) as usize] += v;
    }
    Some(UPoly::new(coeffs))
}

/// Factor structure of a mixed-homogeneous polynomial.
pub fn factor_homog(p: &PuiseuxPoly) -> Result<FactoredHomog> {
    if p.is_zero() {
        return Err(Error::NotFiniteType);
    }
    if !is_mixed_homogeneous(p) {
        return Err(Error::NotMixedHomogeneous);
    }
    let nu1 = p.support().map(|e| e.e1.clone()).min().expect("non-empty");
    let nu2 = p.support().map(|e| e.e2).min().expect("non-empty");
    let top = p.support().max_by_key(|e| e.e2).expect("non-empty").clone();
    let c = p.coeff(&top);

    if p.len() == 1 {
        let m = nu1.clone().max(int(nu2 as i64));
        return Ok(FactoredHomog {
            c,
            nu1,
            nu2,
            shape: None,
            real_roots: Vec::new(),
            profile_pos: profile(p, nu2, false).expect("positive branch"),
            profile_neg: profile(p, nu2, true),
            m: m.clone(),
            d_h: None,
            d: m.clone(),
            h: m,
        });
    }

    let n_data = build_polyhedron(p)?;
    let weight = n_data.edges[0].weight.clone().expect("compact edge");
    let ratio = weight.ratio();
    let pp = ratio.numer().to_u64().expect("ratio numerator fits u64");
    let qq = ratio.denom().to_u64().expect("ratio denominator fits u64");
    let n = (p.degree_x2() - nu2) as u64 / qq;

    let profile_pos = profile(p, nu2, false).expect("positive branch");
    let profile_neg = profile(p, nu2, true);
    let mut real_roots = Vec::new();
    for (branch, g) in [(Branch::Pos, Some(&profile_pos)), (Branch::Neg, profile_neg.as_ref())] {
        let Some(g) = g else { continue };
        for (value, multiplicity) in real_roots_with_multiplicity(g) {
            if !value.is_zero() {
                real_roots.push(RealRoot { value, multiplicity, branch });
            }
        }
    }

    let d_h = weight.norm().recip();
    let max_mult = real_roots.iter().map(|r| r.multiplicity).max().unwrap_or(0);
    let m = nu1.clone().max(int(nu2 as i64)).max(int(max_mult as i64));
    let d = nu1.clone().max(int(nu2 as i64)).max(d_h.clone());
    let h = m.clone().max(d_h.clone());
    Ok(FactoredHomog {
        c,
        nu1,
        nu2,
        shape: Some(HomogShape { weight, p: pp, q: qq, n: n as u32 }),
        real_roots,
        profile_pos,
        profile_neg,
        m,
        d_h: Some(d_h),
        d,
        h,
    })
}

/// `d(P) = (ν1·q + ν2·p + p·q·n)/(q + p)`, valid when the principal face is compact.
pub fn distance_formula(f: &FactoredHomog) -> Option<Rational> {
    let s = f.shape.as_ref()?;
    let (p, q) = (int(s.p as i64), int(s.q as i64));
    Some((&f.nu1 * &q + int(f.nu2 as i64) * &p + &p * &q * int(s.n as i64)) / (&q + &p))
}

pub fn homog_invariants(f: &FactoredHomog) -> HomogInvariants {
    let axes = f.nu1.clone().max(int(f.nu2 as i64));
    let d = match distance_formula(f) {
        Some(formula) if f.principal_face_compact() => formula,
        _ => axes,
    };
    let h = match &f.d_h {
        Some(dh) => f.m.clone().max(dh.clone()),
        None => f.m.clone(),
    };
    HomogInvariants { m: f.m.clone(), d_h: f.d_h.clone(), d, h }
}

/// The root `x2 = b·x1^p` of multiplicity above `d_h`, when `κ2/κ1 = p` is an integer.
pub fn principal_root(f: &FactoredHomog) -> Result<Option<(Rational, u32)>> {
    let (Some(shape), Some(d_h)) = (&f.shape, &f.d_h) else { return Ok(None) };
    if shape.q >= 2 {
        return Ok(None);
    }
    let best = f
        .real_roots
        .iter()
        .filter(|r| r.branch == Branch::Pos && int(r.multiplicity as i64) > *d_h)
        .max_by_key(|r| r.multiplicity);
    match best {
        None => Ok(None),
        Some(r) => match r.value.exact() {
            Some(b) => Ok(Some((b.clone(), r.multiplicity))),
            None => Err(Error::IrrationalPrincipalRoot { multiplicity: r.multiplicity }),
        },
    }
}

/// Matches `c·(x2² − λ1·x1⁵)(x2² − λ2·x1⁵)` with `λ1 + λ2 ≠ 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExceptionalForm {
    pub lambda_sum: Rational,
    pub lambda_product: Rational,
    /// `λ1 + λ2 > 0`: the second derivative has real roots over `x1 > 0`.
    pub sum_positive: bool,
}

/// A root of `∂₂²P` on the circle away from the `x2`-axis; value `0` is the `x1`-axis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Root {
    pub value: RootValue,
    pub multiplicity: u32,
    pub branch: Branch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct D2Report {
    pub second_derivative: PuiseuxPoly,
    pub roots: Vec<D2Root>,
    /// Unique root of maximal multiplicity, if there is one.
    pub max_root: Option<D2Root>,
    /// Roots sharing the maximal multiplicity (more than one on a tie).
    pub tied_max: Vec<D2Root>,
    pub all_others_leq_dh_minus_2: bool,
    pub exceptional_form: Option<ExceptionalForm>,
}

fn detect_exceptional(p: &PuiseuxPoly) -> Option<ExceptionalForm> {
    use crate::poly::ExponentPair;
    let allowed = [ExponentPair::int(0, 4), ExponentPair::int(5, 2), ExponentPair::int(10, 0)];
    if !p.support().all(|e| allowed.contains(e)) {
        return None;
    }
    let c = p.coeff(&allowed[0]);
    let mid = p.coeff(&allowed[1]);
    if c.is_zero() || mid.is_zero() {
        return None;
    }
    let lambda_sum = -mid / &c;
    let lambda_product = p.coeff(&allowed[2]) / &c;
    let sum_positive = lambda_sum.is_positive();
    Some(ExceptionalForm { lambda_sum, lambda_product, sum_positive })
}

/// Real roots of `∂₂²P` with multiplicities, plus the exceptional-form check.
pub fn analyze_d2(p: &PuiseuxPoly) -> Result<D2Report> {
    if !is_mixed_homogeneous(p) {
        return Err(Error::NotMixedHomogeneous);
    }
    let d2 = p.partial_derivative(Variable::X2, 2);
    let exceptional_form = detect_exceptional(p);
    if d2.is_zero() {
        return Ok(D2Report {
            second_derivative: d2,
            roots: Vec::new(),
            max_root: None,
            tied_max: Vec::new(),
            all_others_leq_dh_minus_2: true,
            exceptional_form,
        });
    }
    let fp = factor_homog(p)?;
    let f2 = factor_homog(&d2)?;
    let mut roots: Vec<D2Root> = f2
        .real_roots
        .iter()
        .map(|r| D2Root { value: r.value.clone(), multiplicity: r.multiplicity, branch: r.branch })
        .collect();
    if f2.nu2 > 0 {
        let axis = |branch| D2Root { value: RootValue::Exact(Rational::zero()), multiplicity: f2.nu2, branch };
        roots.push(axis(Branch::Pos));
        if f2.profile_neg.is_some() {
            roots.push(axis(Branch::Neg));
        }
    }
    // With an integral exponent every root curve x2 = c·x1^p shows up on x1 > 0.
    let integral = fp.shape.as_ref().is_some_and(|s| s.q == 1);
    let candidates: Vec<&D2Root> = roots
        .iter()
        .filter(|r| !integral || r.branch == Branch::Pos)
        .collect();
    let top = candidates.iter().map(|r| r.multiplicity).max();
    let tied_max: Vec<D2Root> = match top {
        Some(t) => candidates.iter().filter(|r| r.multiplicity == t).map(|r| (*r).clone()).collect(),
        None => Vec::new(),
    };
    let max_root = if tied_max.len() == 1 { Some(tied_max[0].clone()) } else { None };
    let bound = fp.d_h.clone().map(|dh| dh - int(2));
    let all_others_leq_dh_minus_2 = candidates
        .iter()
        .filter(|r| max_root.as_ref() != Some(**r))
        .all(|r| bound.as_ref().is_some_and(|b| int(r.multiplicity as i64) <= *b));
    Ok(D2Report { second_derivative: d2, roots, max_root, tied_max, all_others_leq_dh_minus_2, exceptional_form })
}
