//! Adapted coordinates via Varchenko's algorithm, and the principal root jet `ψ`.
//!
//! Shears act as `φ ↦ φ(x1, x2 + b·x1^a)`, so the adapted coordinate is
//! `z2 = x2 − σ(x1)` with `σ = Σ b_l x1^{m_l}`.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::homog::{analyze_d2, factor_homog, principal_root, FactoredHomog};
use crate::newton::{build_polyhedron, principal_part, FaceKind, NewtonData};
use crate::poly::{int, ExponentPair, PuiseuxPoly, Rational, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    A,
    B,
    C,
}

impl Case {
    pub fn name(&self) -> &'static str {
        match self {
            Case::A => "a",
            Case::B => "b",
            Case::C => "c",
        }
    }
}

/// Why a verdict was reached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictReason {
    pub face: FaceKind,
    /// `max(κ2/κ1, κ1/κ2)` for a compact edge.
    pub ratio: Option<Rational>,
    pub ratio_is_integer: bool,
    /// `κ2 < κ1`: the edge is steep and the roles of the variables are exchanged.
    pub steep: bool,
    /// `m(φ_p)`, real roots only.
    pub m: Option<Rational>,
    pub distance: Rational,
    /// A non-real root of `φ_p` has multiplicity above `d`.
    pub complex_excess: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptednessVerdict {
    pub adapted: bool,
    pub case: Option<Case>,
    pub reason: VerdictReason,
}

fn check_preconditions(phi: &PuiseuxPoly) -> Result<()> {
    if phi.is_zero() {
        return Err(Error::NotFiniteType);
    }
    if phi.support().any(|e| e.e1.clone() + e.t2() <= int(1)) {
        return Err(Error::HasLinearPart);
    }
    Ok(())
}

fn complex_excess(f: &FactoredHomog, d: &Rational) -> bool {
    f.profile_pos
        .squarefree_decomposition()
        .iter()
        .any(|(factor, k)| int(*k as i64) > *d && factor.isolate_real_roots().is_empty() && factor.degree() > 0)
}

fn verdict_for(phi: &PuiseuxPoly, n: &NewtonData) -> Result<AdaptednessVerdict> {
    let face = n.principal.kind;
    let mut reason = VerdictReason {
        face,
        ratio: None,
        ratio_is_integer: false,
        steep: false,
        m: None,
        distance: n.distance.clone(),
        complex_excess: false,
    };
    let (adapted, case) = match face {
        FaceKind::Vertex => (true, Case::B),
        FaceKind::HalflineHorizontal | FaceKind::HalflineVertical => (true, Case::C),
        FaceKind::CompactEdge => {
            let w = n.principal_weight().expect("compact edge has a weight");
            let steep = w.k2 < w.k1;
            let ratio = if steep { w.ratio().recip() } else { w.ratio() };
            let f = factor_homog(&principal_part(phi, n))?;
            reason.ratio_is_integer = ratio.is_integer();
            reason.ratio = Some(ratio);
            reason.steep = steep;
            reason.complex_excess = complex_excess(&f, &n.distance);
            let adapted = !reason.ratio_is_integer || f.m <= n.distance;
            reason.m = Some(f.m);
            (adapted, Case::A)
        }
    };
    Ok(AdaptednessVerdict { adapted, case: adapted.then_some(case), reason })
}

pub fn classify_adaptedness(phi: &PuiseuxPoly) -> Result<AdaptednessVerdict> {
    check_preconditions(phi)?;
    verdict_for(phi, &build_polyhedron(phi)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptStep {
    pub distance_before: Rational,
    /// Shear coefficient `b` and exponent `a` of the principal root `x2 = b·x1^a`.
    pub root: Rational,
    pub exponent: Rational,
    pub multiplicity: u32,
    pub weight: Weight,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedResult {
    /// `(b_l, m_l)` with increasing `m_l`.
    pub sigma_jet: Vec<(Rational, Rational)>,
    pub height: Rational,
    pub steps: Vec<AdaptStep>,
    pub adapted_poly: PuiseuxPoly,
    pub verdict: AdaptednessVerdict,
    /// The variables were exchanged before the first shear.
    pub swapped: bool,
    pub newton: NewtonData,
}

impl AdaptedResult {
    /// `σ` as a polynomial in `x1`.
    pub fn sigma(&self) -> PuiseuxPoly {
        sigma_poly(&self.sigma_jet)
    }

    /// Distance before each step, followed by the final height.
    pub fn distance_trace(&self) -> Vec<Rational> {
        let mut out: Vec<Rational> = self.steps.iter().map(|s| s.distance_before.clone()).collect();
        out.push(self.height.clone());
        out
    }

    /// Applies the recorded swap and shears to `phi`.
    pub fn replay(&self, phi: &PuiseuxPoly) -> Result<PuiseuxPoly> {
        let mut out = if self.swapped { phi.swap_variables()? } else { phi.clone() };
        for (b, m) in &self.sigma_jet {
            out = out.substitute_shear(b, m);
        }
        Ok(out)
    }
}

fn sigma_poly(jet: &[(Rational, Rational)]) -> PuiseuxPoly {
    PuiseuxPoly::from_terms(jet.iter().map(|(b, m)| (ExponentPair::new(m.clone(), 0), b.clone())))
}

pub fn default_step_budget(phi: &PuiseuxPoly) -> usize {
    4 + phi.degree_x2() as usize
}

/// Shears `phi` by principal roots until the coordinates are adapted.
pub fn varchenko_adapt(phi: &PuiseuxPoly, max_steps: usize) -> Result<AdaptedResult> {
    check_preconditions(phi)?;
    let mut current = phi.clone();
    let mut swapped = false;
    let mut steps: Vec<AdaptStep> = Vec::new();
    loop {
        let n = build_polyhedron(&current)?;
        let verdict = verdict_for(&current, &n)?;
        if verdict.adapted {
            let sigma_jet = steps.iter().map(|s| (s.root.clone(), s.exponent.clone())).collect();
            return Ok(AdaptedResult {
                sigma_jet,
                height: n.distance.clone(),
                steps,
                adapted_poly: current,
                verdict,
                swapped,
                newton: n,
            });
        }
        if verdict.reason.steep {
            if !steps.is_empty() || swapped {
                return Err(Error::UnexpectedOrientation);
            }
            current = current.swap_variables()?;
            swapped = true;
            continue;
        }
        if steps.len() >= max_steps {
            return Err(Error::StepBudgetExceeded { steps: steps.len() });
        }
        let weight = n.principal_weight().expect("compact edge").clone();
        let f = factor_homog(&principal_part(&current, &n))?;
        let (root, multiplicity) = principal_root(&f)?.ok_or(Error::NoPrincipalRoot)?;
        let exponent = weight.ratio();
        current = current.substitute_shear(&root, &exponent);
        steps.push(AdaptStep { distance_before: n.distance.clone(), root, exponent, multiplicity, weight });
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootJet {
    pub psi: PuiseuxPoly,
    /// `κ̃2/κ̃1`.
    pub a: Rational,
    pub weight: Weight,
    /// `(c_p, a_p)`, present in case (a) when `a_p` is an integer.
    pub a_p_term: Option<(Rational, Rational)>,
    pub case: Case,
    pub warnings: Vec<String>,
}

/// Principal root jet of `phi`, running Varchenko's algorithm first.
pub fn principal_root_jet(phi: &PuiseuxPoly) -> Result<RootJet> {
    let r = varchenko_adapt(phi, default_step_budget(phi))?;
    root_jet_from(&r)
}

fn choose_c_p(pa: &PuiseuxPoly, warnings: &mut Vec<String>) -> Result<Rational> {
    let report = analyze_d2(pa)?;
    if let Some(root) = &report.max_root {
        return Ok(match root.value.exact() {
            Some(c) => c.clone(),
            None => {
                warnings.push(format!(
                    "maximal root of the second derivative is irrational (~{:.6}); c_p set to 0",
                    root.value.approx()
                ));
                Rational::zero()
            }
        });
    }
    if report.tied_max.is_empty() {
        warnings.push("second derivative has no real roots; c_p set to 0".into());
        return Ok(Rational::zero());
    }
    let smallest = report.tied_max.iter().filter_map(|r| r.value.exact()).min().cloned();
    match smallest {
        Some(c) => {
            warnings.push(format!(
                "{} roots of the second derivative tie at maximal multiplicity; chose the smallest rational one",
                report.tied_max.len()
            ));
            Ok(c)
        }
        None => {
            warnings.push("tied maximal roots of the second derivative are irrational; c_p set to 0".into());
            Ok(Rational::zero())
        }
    }
}

/// Principal root jet from an already adapted result.
pub fn root_jet_from(r: &AdaptedResult) -> Result<RootJet> {
    let n = &r.newton;
    let sigma = r.sigma();
    let mut warnings = Vec::new();
    if r.verdict.reason.complex_excess {
        warnings.push("a non-real root of the principal part exceeds the distance".into());
    }
    let case = r.verdict.case.expect("adapted verdict carries a case");
    let largest_m = r.sigma_jet.last().map(|(_, m)| m.clone()).unwrap_or_else(Rational::zero);
    match case {
        Case::A => {
            let weight = n.principal_weight().expect("compact edge").clone();
            let a = weight.ratio();
            if !a.is_integer() {
                return Ok(RootJet { psi: sigma, a, weight, a_p_term: None, case, warnings });
            }
            let pa = principal_part(&r.adapted_poly, n);
            let c_p = choose_c_p(&pa, &mut warnings)?;
            let psi = &sigma + &PuiseuxPoly::monomial(c_p.clone(), ExponentPair::new(a.clone(), 0));
            Ok(RootJet { psi, a: a.clone(), weight, a_p_term: Some((c_p, a)), case, warnings })
        }
        Case::B => {
            let v = &n.principal.endpoints[0];
            let i = n.vertices.iter().position(|x| x == v).expect("vertex of the diagram");
            let lo = if i > 0 { n.edge_data[i - 1].a.clone() } else { Rational::zero() };
            let hi = n.edge_data.get(i).map(|e| e.a.clone());
            let floor = lo.clone().max(Rational::one()).max(largest_m);
            let a = match hi {
                None => floor.floor() + Rational::one(),
                Some(hi) if floor < hi => (floor + hi) / int(2),
                Some(hi) => (lo + hi) / int(2),
            };
            let weight = Weight::through_point(v, &a)?;
            Ok(RootJet { psi: sigma, a, weight, a_p_term: None, case, warnings })
        }
        Case::C => {
            let v = &n.principal.endpoints[0];
            let weight = if n.principal.kind == FaceKind::HalflineHorizontal {
                let left = n.edge_data.last().map(|e| e.a.clone()).unwrap_or_else(Rational::zero);
                let m = largest_m.max(left).max(Rational::one()).floor() + Rational::one();
                Weight::through_point(v, &m)?
            } else {
                let right = n.edge_data.first().map(|e| e.a.recip()).unwrap_or_else(Rational::zero);
                let m = right.max(Rational::one()).floor() + Rational::one();
                Weight::through_point(v, &m.recip())?
            };
            Ok(RootJet { psi: sigma, a: weight.ratio(), weight, a_p_term: None, case, warnings })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;

    fn running() -> PuiseuxPoly {
        PuiseuxPoly::from_int_terms(&[(0, 2, 1), (2, 1, -2), (4, 0, 1), (5, 0, 1)])
    }

    fn two_step() -> PuiseuxPoly {
        let inner = PuiseuxPoly::from_int_terms(&[(0, 1, 1), (2, 0, -1), (3, 0, -1)]);
        inner.pow(2) + PuiseuxPoly::from_int_terms(&[(9, 0, 1)])
    }

    #[test]
    fn classify_examples() {
        let v = classify_adaptedness(&running()).unwrap();
        assert!(!v.adapted && v.case.is_none());
        assert_eq!(v.reason.ratio, Some(int(2)));
        assert_eq!(v.reason.m, Some(int(2)));
        assert_eq!(v.reason.distance, rat(4, 3));

        let v = classify_adaptedness(&PuiseuxPoly::from_int_terms(&[(2, 2, 1)])).unwrap();
        assert_eq!((v.adapted, v.case), (true, Some(Case::B)));

        let v = classify_adaptedness(&PuiseuxPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)])).unwrap();
        assert_eq!((v.adapted, v.case), (true, Some(Case::A)));
        assert_eq!(v.reason.ratio, Some(rat(3, 2)));
    }

    #[test]
    fn linear_part_rejected() {
        let p = PuiseuxPoly::from_int_terms(&[(1, 0, 1), (0, 2, 1)]);
        assert_eq!(classify_adaptedness(&p), Err(Error::HasLinearPart));
        assert_eq!(varchenko_adapt(&p, 5), Err(Error::HasLinearPart));
    }

    #[test]
    fn running_example_one_step() {
        let r = varchenko_adapt(&running(), 6).unwrap();
        assert_eq!(r.sigma_jet, vec![(int(1), int(2))]);
        assert_eq!(r.adapted_poly, PuiseuxPoly::from_int_terms(&[(0, 2, 1), (5, 0, 1)]));
        assert_eq!(r.height, rat(10, 7));
        assert_eq!(r.distance_trace(), vec![rat(4, 3), rat(10, 7)]);
        assert_eq!(r.replay(&running()).unwrap(), r.adapted_poly);
    }

    #[test]
    fn two_step_trace() {
        let r = varchenko_adapt(&two_step(), 6).unwrap();
        assert_eq!(r.sigma_jet, vec![(int(1), int(2)), (int(1), int(3))]);
        assert_eq!(r.adapted_poly, PuiseuxPoly::from_int_terms(&[(0, 2, 1), (9, 0, 1)]));
        assert_eq!(r.distance_trace(), vec![rat(4, 3), rat(3, 2), rat(18, 11)]);
    }

    #[test]
    fn already_adapted_cusp() {
        let p = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (3, 0, 1)]);
        let r = varchenko_adapt(&p, 6).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.height, rat(6, 5));
    }

    #[test]
    fn budget_is_enforced() {
        assert_eq!(varchenko_adapt(&two_step(), 1), Err(Error::StepBudgetExceeded { steps: 1 }));
    }

    #[test]
    fn steep_edge_swaps_variables() {
        // (x1 - x2^2)^2 + x2^5
        let p = PuiseuxPoly::from_int_terms(&[(2, 0, 1), (1, 2, -2), (0, 4, 1), (0, 5, 1)]);
        let r = varchenko_adapt(&p, 10).unwrap();
        assert!(r.swapped);
        assert_eq!(r.height, rat(10, 7));
        assert_eq!(r.replay(&p).unwrap(), r.adapted_poly);
    }

    #[test]
    fn linear_pre_shear() {
        // (x2 - x1)^2 + x1^3
        let p = PuiseuxPoly::from_int_terms(&[(0, 2, 1), (1, 1, -2), (2, 0, 1), (3, 0, 1)]);
        let r = varchenko_adapt(&p, 10).unwrap();
        assert_eq!(r.sigma_jet, vec![(int(1), int(1))]);
        assert_eq!(r.height, rat(6, 5));
    }

    #[test]
    fn conjugate_irrational_roots_stay_at_the_distance() {
        // (x2^2 - 2 x1^2)^2 + x1^7: both roots have multiplicity 2 = d
        let p = PuiseuxPoly::from_int_terms(&[(0, 4, 1), (2, 2, -4), (4, 0, 4), (7, 0, 1)]);
        let r = varchenko_adapt(&p, 10).unwrap();
        assert!(r.steps.is_empty());
        assert_eq!(r.height, int(2));
        assert_eq!(r.verdict.reason.m, Some(int(2)));
    }

    #[test]
    fn jet_of_running_example() {
        let j = principal_root_jet(&running()).unwrap();
        assert_eq!(j.case, Case::A);
        assert_eq!(j.psi, PuiseuxPoly::from_int_terms(&[(2, 0, 1)]));
        assert_eq!(j.a, rat(5, 2));
        assert!(j.a_p_term.is_none());
        assert_eq!(j.weight.norm().recip(), rat(10, 7));
    }

    #[test]
    fn jet_with_c_p_term() {
        // (x2 - x1^2)^3 + x2 x1^4
        let p = PuiseuxPoly::from_int_terms(&[(0, 3, 1), (2, 2, -3), (4, 1, 4), (6, 0, -1)]);
        let r = varchenko_adapt(&p, 10).unwrap();
        assert!(r.steps.is_empty());
        let j = root_jet_from(&r).unwrap();
        assert_eq!(j.case, Case::A);
        assert_eq!(j.a_p_term, Some((int(1), int(2))));
        assert_eq!(j.psi, PuiseuxPoly::from_int_terms(&[(2, 0, 1)]));
    }

    #[test]
    fn jet_of_vertex_case() {
        let j = principal_root_jet(&PuiseuxPoly::from_int_terms(&[(2, 2, 1)])).unwrap();
        assert_eq!(j.case, Case::B);
        assert!(j.psi.is_zero());
        assert!(j.a > int(1));
        assert_eq!(j.weight.norm().recip(), int(2));
    }

    #[test]
    fn jet_of_halfline_case() {
        // x2^3 + x1^2 x2^3: principal face is the horizontal half-line t2 = 3
        let j = principal_root_jet(&PuiseuxPoly::from_int_terms(&[(0, 3, 1), (2, 3, 1)])).unwrap();
        assert_eq!(j.case, Case::C);
        assert!(j.psi.is_zero());
        let v = ExponentPair::int(0, 3);
        assert_eq!(v.weighted_degree(&j.weight), int(1));
    }
}
