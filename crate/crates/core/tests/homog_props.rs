mod common;

use common::*;
use heightkit::homog::{distance_formula, Branch, factor_homog, homog_invariants};
use heightkit::newton::build_polyhedron;
use heightkit::poly::{int, rat, to_f64, ExponentPair, PuiseuxPoly, Rational};
use proptest::prelude::*;

#[derive(Clone, Debug)]
struct Homog {
    poly: PuiseuxPoly,
    nu1: u32,
    nu2: u32,
    /// `κ2/κ1 = p/q` (not necessarily reduced before `gcd` is taken).
    p: u32,
    q: u32,
    /// Distinct real factors `(x2^q − r x1^p)^n`.
    real: Vec<(Rational, u32)>,
}

fn homog() -> impl Strategy<Value = Homog> {
    let coprime = (1u32..=4, 1u32..=4).prop_filter("coprime", |(p, q)| num_integer::gcd(*p, *q) == 1);
    (
        0u32..=4,
        0u32..=4,
        coprime,
        prop::sample::subsequence(vec![rat(-3, 1), rat(-2, 1), rat(-1, 1), rat(1, 2), rat(1, 1), rat(2, 1), rat(3, 1)], 0..=3),
        prop::collection::vec(1u32..=4, 3),
        0u32..=1,
        nonzero_coeff(),
    )
        .prop_map(|(nu1, nu2, (p, q), roots, mults, complex, c)| {
            let x2q = PuiseuxPoly::monomial(int(1), ExponentPair::int(0, q));
            let mut poly = PuiseuxPoly::monomial(int(c), ExponentPair::int(nu1, nu2));
            let mut real = Vec::new();
            for (r, n) in roots.iter().zip(&mults) {
                let f = &x2q - &PuiseuxPoly::monomial(r.clone(), ExponentPair::int(p, 0));
                poly = &poly * &f.pow(*n);
                real.push((r.clone(), *n));
            }
            if complex == 1 {
                let f = &x2q.pow(2) + &PuiseuxPoly::monomial(int(1), ExponentPair::int(2 * p, 0));
                poly = &poly * &f;
            }
            Homog { poly, nu1, nu2, p, q, real }
        })
        .prop_filter("not a monomial", |h| h.poly.len() > 1)
}

/// Order of vanishing of `g` at `t0` from two nearby samples.
fn numeric_order(g: impl Fn(f64) -> f64, t0: f64) -> u32 {
    let (d1, d2) = (5e-2, 5e-3);
    let avg = |d: f64| 0.5 * (g(t0 + d).abs().ln() + g(t0 - d).abs().ln());
    ((avg(d1) - avg(d2)) / (d1 / d2).ln()).round() as u32
}

/// `m(P)` from numeric orders of vanishing along `x1 = ±1` and the axes.
fn numeric_m(h: &Homog) -> u32 {
    let eval = |x1: f64, x2: f64| h.poly.evaluate_real(x1, x2).unwrap();
    let mut m = h.nu1.max(h.nu2);
    for (r, _) in &h.real {
        for sign in [1.0f64, -1.0] {
            // x2^q = r·(±1)^p
            let rhs = to_f64(r) * sign.powi(h.p as i32);
            let mut ts = Vec::new();
            if rhs > 0.0 || !h.q.is_multiple_of(2) {
                let t = rhs.abs().powf(1.0 / h.q as f64).copysign(rhs);
                ts.push(t);
                if h.q.is_multiple_of(2) {
                    ts.push(-t);
                }
            }
            for t in ts {
                m = m.max(numeric_order(|s| eval(sign, s), t));
            }
        }
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn distance_formula_matches_polyhedron(h in homog()) {
        let f = factor_homog(&h.poly).unwrap();
        prop_assume!(f.principal_face_compact());
        let n = build_polyhedron(&h.poly).unwrap();
        prop_assert_eq!(distance_formula(&f).unwrap(), n.distance);
    }

    #[test]
    fn height_is_max_of_multiplicity_and_homogeneous_distance(h in homog()) {
        let f = factor_homog(&h.poly).unwrap();
        let inv = homog_invariants(&f);
        let dh = inv.d_h.clone().unwrap();
        prop_assert_eq!(&inv.h, &inv.m.clone().max(dh.clone()));
        prop_assert_eq!(inv.h, f.h);
        let s = f.shape.clone().unwrap();
        prop_assert_eq!(dh, int(1) / s.weight.norm());
    }

    #[test]
    fn multiplicity_bounds_by_root_structure(h in homog()) {
        prop_assume!(h.poly.support().all(|e| e.e1.clone() + e.t2() >= int(2)));
        // The statement is for κ1 <= κ2.
        let poly = if h.p < h.q { h.poly.swap_variables().unwrap() } else { h.poly.clone() };
        let f = factor_homog(&poly).unwrap();
        let dh = f.d_h.clone().unwrap();
        let s = f.shape.clone().unwrap();
        // With q = 1 each real factor `x2 − c·x1^p` appears once on each branch.
        let mults: Vec<Rational> = f
            .real_roots
            .iter()
            .filter(|r| s.q >= 2 || r.branch == Branch::Pos)
            .map(|r| int(r.multiplicity as i64))
            .collect();
        prop_assert!(s.p >= s.q);
        if s.q >= 2 {
            prop_assert!(int(s.n as i64) < dh);
            prop_assert!(mults.iter().all(|n| *n < dh), "{:?} vs {}", mults, dh);
        } else {
            let large = mults
                .iter()
                .chain([f.nu1.clone(), int(f.nu2 as i64)].iter())
                .filter(|n| **n > dh)
                .count();
            prop_assert!(large <= 1, "{} mults {:?} nu {} {} dh {} p/q {}/{}", poly, mults, f.nu1, f.nu2, dh, s.p, s.q);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn multiplicity_matches_numeric_vanishing_order(h in homog()) {
        let f = factor_homog(&h.poly).unwrap();
        prop_assert_eq!(f.m, int(numeric_m(&h) as i64), "{}", h.poly);
    }
}
