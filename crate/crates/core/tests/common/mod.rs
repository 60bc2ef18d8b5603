#![allow(dead_code)]

use heightkit::poly::{int, rat, ExponentPair, PuiseuxPoly, Rational};
use proptest::prelude::*;

pub fn nonzero_coeff() -> impl Strategy<Value = i64> {
    prop_oneof![-5i64..=-1, 1i64..=5]
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| rat(n, d))
}

pub fn nonzero_rational() -> impl Strategy<Value = Rational> {
    small_rational().prop_filter("nonzero", |r| *r != int(0))
}

/// Up to `n` monomials with exponents at most `e`.
pub fn sparse_poly(n: usize, e: u32) -> impl Strategy<Value = PuiseuxPoly> {
    prop::collection::vec((0..=e, 0..=e, nonzero_coeff()), 1..=n)
        .prop_map(|ts| PuiseuxPoly::from_terms(ts.into_iter().map(|(a, b, c)| (ExponentPair::int(a, b), int(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

/// Sparse polynomials with fractional x1 exponents of denominator at most 3.
pub fn puiseux_poly() -> impl Strategy<Value = PuiseuxPoly> {
    prop::collection::vec((0i64..=12, 1i64..=3, 0u32..=5, small_rational()), 1..=6).prop_map(|ts| {
        PuiseuxPoly::from_terms(ts.into_iter().map(|(n, d, b, c)| (ExponentPair::new(rat(n, d), b), c)))
    })
}

/// Random sparse polynomials of x2-degree at most 4 with no constant or linear part.
pub fn generic_phase() -> impl Strategy<Value = PuiseuxPoly> {
    prop::collection::vec((0u32..=8, 0u32..=4, nonzero_coeff()), 1..=6)
        .prop_map(|ts| {
            PuiseuxPoly::from_terms(
                ts.into_iter()
                    .filter(|(a, b, _)| a + b >= 2)
                    .map(|(a, b, c)| (ExponentPair::int(a, b), int(c))),
            )
        })
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn factor(r: &Rational, k: u32) -> PuiseuxPoly {
    &PuiseuxPoly::x2() - &PuiseuxPoly::monomial(r.clone(), ExponentPair::int(k, 0))
}

/// `Π (x2 − r_i x1^{k_i})^{n_i} + c·x1^N`: phases with degenerate principal faces
/// that need several adaptation steps.
pub fn structured_phase() -> impl Strategy<Value = PuiseuxPoly> {
    (
        prop::collection::vec((nonzero_rational(), 1u32..=3, 1u32..=2), 1..=2),
        nonzero_coeff(),
        2u32..=9,
    )
        .prop_map(|(fs, c, big_n)| {
            let mut p = PuiseuxPoly::constant(int(1));
            for (r, k, n) in &fs {
                p = &p * &factor(r, *k).pow(*n);
            }
            &p + &PuiseuxPoly::monomial(int(c), ExponentPair::int(big_n, 0))
        })
        .prop_filter("no linear part", |p| p.support().all(|e| e.e1.clone() + e.t2() >= int(2)))
}

pub fn phase() -> impl Strategy<Value = PuiseuxPoly> {
    prop_oneof![
        generic_phase(),
        structured_phase(),
        // steep principal edges that need the variable exchange
        structured_phase().prop_map(|p| p.swap_variables().expect("integer exponents")),
    ]
}

/// `φ(x1, x2 + ρ(x1))` for `ρ = Σ c_j x1^j`.
pub fn shear_by(phi: &PuiseuxPoly, rho: &[Rational]) -> PuiseuxPoly {
    rho.iter()
        .enumerate()
        .fold(phi.clone(), |p, (j, c)| if *c == int(0) { p } else { p.substitute_shear(c, &int(j as i64 + 1)) })
}
