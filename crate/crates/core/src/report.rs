//! The analysis pipeline and its JSON form.
//!
//! Exact values are serialized as `"p/q"` strings (`"p"` when the denominator
//! is 1); floats are rounded to 12 significant digits.

use serde::Serialize;
use serde_json::{json, Value};

use crate::adapt::{default_step_budget, root_jet_from, varchenko_adapt, AdaptedResult, AdaptednessVerdict, RootJet};
use crate::error::Result;
use crate::homog::{analyze_d2, factor_homog, homog_invariants};
use crate::newton::{build_polyhedron, principal_part, Face, NewtonData};
use crate::parse::parse_expression;
use crate::poly::{int, ExponentPair, PuiseuxPoly, Rational, Weight};
use crate::verify::{DecayFit, ExponentFit, SmallParamReport, SublevelFit};

pub fn rat_str(r: &Rational) -> String {
    r.to_string()
}

/// `x` rounded to 12 significant digits; non-finite values become `null`.
pub fn float12(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float");
    json!(rounded)
}

fn floats(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|x| float12(*x)).collect())
}

fn point(e: &ExponentPair) -> (String, u32) {
    (rat_str(&e.e1), e.e2)
}

fn kappa(w: &Weight) -> (String, String) {
    (rat_str(&w.k1), rat_str(&w.k2))
}

#[derive(Clone, Debug, Serialize)]
pub struct SupportTerm {
    pub e1: String,
    pub e2: u32,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeSummary {
    pub left: (String, u32),
    pub right: (String, u32),
    pub kappa: (String, String),
    pub a: String,
    pub d: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceSummary {
    pub kind: String,
    pub endpoints: Vec<(String, u32)>,
    pub kappa: Option<(String, String)>,
}

impl FaceSummary {
    fn new(f: &Face) -> Self {
        FaceSummary {
            kind: f.kind.name().to_string(),
            endpoints: f.endpoints.iter().map(point).collect(),
            kappa: f.weight.as_ref().map(kappa),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NewtonSummary {
    pub vertices: Vec<(String, u32)>,
    pub edges: Vec<EdgeSummary>,
    pub distance: String,
    pub principal_face: FaceSummary,
}

impl NewtonSummary {
    pub fn new(n: &NewtonData) -> Self {
        NewtonSummary {
            vertices: n.vertices.iter().map(point).collect(),
            edges: n
                .edge_data
                .iter()
                .map(|e| EdgeSummary {
                    left: (rat_str(&e.left.0), e.left.1.to_integer().try_into().unwrap_or(u32::MAX)),
                    right: (rat_str(&e.right.0), e.right.1.to_integer().try_into().unwrap_or(u32::MAX)),
                    kappa: kappa(&e.weight),
                    a: rat_str(&e.a),
                    d: rat_str(&e.d),
                })
                .collect(),
            distance: rat_str(&n.distance),
            principal_face: FaceSummary::new(&n.principal),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerdictSummary {
    pub adapted: bool,
    pub case: Option<String>,
    pub face: String,
    pub ratio: Option<String>,
    pub ratio_is_integer: bool,
    pub m: Option<String>,
    pub distance: String,
}

impl VerdictSummary {
    pub fn new(v: &AdaptednessVerdict) -> Self {
        VerdictSummary {
            adapted: v.adapted,
            case: v.case.map(|c| c.name().to_string()),
            face: v.reason.face.name().to_string(),
            ratio: v.reason.ratio.as_ref().map(rat_str),
            ratio_is_integer: v.reason.ratio_is_integer,
            m: v.reason.m.as_ref().map(rat_str),
            distance: rat_str(&v.reason.distance),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ExceptionalSummary {
    pub lambda_sum: String,
    pub lambda_product: String,
    pub real_d2_roots: bool,
}

/// Invariants of the principal part `φ_p` when the principal face is compact.
#[derive(Clone, Debug, Serialize)]
pub struct PrincipalPartSummary {
    pub poly: String,
    pub m: String,
    pub d_h: Option<String>,
    pub d: String,
    pub h: String,
    pub second_derivative: String,
    pub exceptional: Option<ExceptionalSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct StepSummary {
    pub distance_before: String,
    pub root: String,
    pub exponent: String,
    pub multiplicity: u32,
    pub kappa: (String, String),
}

#[derive(Clone, Debug, Serialize)]
pub struct AdaptSummary {
    /// Whether the input coordinates are already adapted.
    pub adapted: bool,
    pub case: Option<String>,
    pub sigma: String,
    pub height: String,
    pub swapped: bool,
    pub adapted_form: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<StepSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance_trace: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct JetSummary {
    pub psi: String,
    pub a: String,
    pub kappa: (String, String),
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_p: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_p: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Indices {
    pub h: String,
    pub beta: String,
    pub gamma: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub input: String,
    pub expanded: String,
    pub support: Vec<SupportTerm>,
    pub newton: NewtonSummary,
    pub verdict: VerdictSummary,
    pub principal_part: Option<PrincipalPartSummary>,
    pub adapt: AdaptSummary,
    pub jet: JetSummary,
    pub indices: Indices,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verify: Option<Value>,
    pub warnings: Vec<String>,
}

/// Everything computed for one input, kept in exact form.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub input: String,
    pub poly: PuiseuxPoly,
    pub newton: NewtonData,
    pub adapted: AdaptedResult,
    pub jet: RootJet,
    pub warnings: Vec<String>,
}

impl Analysis {
    pub fn height(&self) -> &Rational {
        &self.adapted.height
    }

    /// `β = γ = 1/h`.
    pub fn index(&self) -> Rational {
        int(1) / self.height()
    }
}

pub fn analyze_poly(input: &str, poly: PuiseuxPoly) -> Result<Analysis> {
    let newton = build_polyhedron(&poly)?;
    let adapted = varchenko_adapt(&poly, default_step_budget(&poly))?;
    let jet = root_jet_from(&adapted)?;
    let mut warnings = jet.warnings.clone();
    if adapted.swapped {
        warnings.push("variables exchanged before shearing: the principal edge was steep".into());
    }
    if !poly.has_integer_exponents() {
        warnings.push("fractional x1 exponents: numeric checks use the half-plane x1 >= 0".into());
    }
    Ok(Analysis { input: input.to_string(), poly, newton, adapted, jet, warnings })
}

pub fn analyze_text(text: &str) -> Result<Analysis> {
    analyze_poly(text, parse_expression(text)?)
}

/// Parses `text`, optionally dropping the constant term so that `φ(0) = 0`.
pub fn parse_phase(text: &str, shift: bool) -> Result<PuiseuxPoly> {
    let poly = parse_expression(text)?;
    if !shift {
        return Ok(poly);
    }
    let origin = ExponentPair::int(0, 0);
    Ok(poly.filter_terms(|e| *e != origin))
}

fn principal_part_summary(a: &Analysis) -> Option<PrincipalPartSummary> {
    if !a.newton.principal.is_compact() {
        return None;
    }
    let pp = principal_part(&a.poly, &a.newton);
    let f = factor_homog(&pp).ok()?;
    let inv = homog_invariants(&f);
    let d2 = analyze_d2(&pp).ok()?;
    Some(PrincipalPartSummary {
        poly: pp.to_string(),
        m: rat_str(&inv.m),
        d_h: inv.d_h.as_ref().map(rat_str),
        d: rat_str(&inv.d),
        h: rat_str(&inv.h),
        second_derivative: d2.second_derivative.to_string(),
        exceptional: d2.exceptional_form.map(|e| ExceptionalSummary {
            lambda_sum: rat_str(&e.lambda_sum),
            lambda_product: rat_str(&e.lambda_product),
            real_d2_roots: e.sum_positive,
        }),
    })
}

impl AnalysisReport {
    pub fn new(a: &Analysis, trace: bool) -> Self {
        let r = &a.adapted;
        let original_verdict = if r.steps.is_empty() && !r.swapped {
            r.verdict.clone()
        } else {
            crate::adapt::classify_adaptedness(&a.poly).expect("input already validated")
        };
        let index = rat_str(&a.index());
        AnalysisReport {
            input: a.input.clone(),
            expanded: a.poly.to_string(),
            support: a
                .poly
                .terms()
                .map(|(e, c)| SupportTerm { e1: rat_str(&e.e1), e2: e.e2, coeff: rat_str(c) })
                .collect(),
            newton: NewtonSummary::new(&a.newton),
            verdict: VerdictSummary::new(&original_verdict),
            principal_part: principal_part_summary(a),
            adapt: AdaptSummary {
                adapted: original_verdict.adapted,
                case: r.verdict.case.map(|c| c.name().to_string()),
                sigma: r.sigma().to_string(),
                height: rat_str(&r.height),
                swapped: r.swapped,
                adapted_form: r.adapted_poly.to_string(),
                trace: trace.then(|| {
                    r.steps
                        .iter()
                        .map(|s| StepSummary {
                            distance_before: rat_str(&s.distance_before),
                            root: rat_str(&s.root),
                            exponent: rat_str(&s.exponent),
                            multiplicity: s.multiplicity,
                            kappa: kappa(&s.weight),
                        })
                        .collect()
                }),
                distance_trace: trace.then(|| r.distance_trace().iter().map(rat_str).collect()),
            },
            jet: JetSummary {
                psi: a.jet.psi.to_string(),
                a: rat_str(&a.jet.a),
                kappa: kappa(&a.jet.weight),
                c_p: a.jet.a_p_term.as_ref().map(|(c, _)| rat_str(c)),
                a_p: a.jet.a_p_term.as_ref().map(|(_, p)| rat_str(p)),
            },
            indices: Indices { h: rat_str(&r.height), beta: index.clone(), gamma: index },
            verify: None,
            warnings: a.warnings.clone(),
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn fit_json(kind: &str, f: &ExponentFit) -> Value {
    json!({
        "kind": kind,
        "grid": floats(&f.grid),
        "values": floats(&f.measurements),
        "fitted": float12(f.used_exponent()),
        "fitted_plain": float12(f.fitted_exponent),
        "fitted_with_log": f.fitted_with_log.map(float12),
        "log_coefficient": f.log_coefficient.map(float12),
        "log_model": f.use_log_model,
        "expected": rat_str(&f.expected),
        "tolerance": float12(f.tolerance),
        "residual": float12(f.residual),
        "window": f.window,
        "pass": f.pass,
    })
}

pub fn decay_json(d: &DecayFit) -> Value {
    let mut v = fit_json("decay", &d.fit);
    let o = v.as_object_mut().expect("object");
    o.insert("mass".into(), float12(d.mass));
    o.insert("bounded_by_mass".into(), json!(d.bounded_by_mass));
    o.insert("half_plane".into(), json!(d.half_plane));
    o.insert("mirrored".into(), json!(d.mirrored));
    o.insert("panels".into(), json!(d.panels));
    v
}

pub fn sublevel_json(s: &SublevelFit) -> Value {
    let mut v = fit_json("sublevel", &s.fit);
    let o = v.as_object_mut().expect("object");
    o.insert("coarse_values".into(), floats(&s.coarse));
    o.insert("refinement_change".into(), s.refinement_change.map(float12).unwrap_or(Value::Null));
    o.insert("half_plane".into(), json!(s.half_plane));
    o.insert("resolution".into(), json!(s.resolution));
    v
}

pub fn small_param_json(r: &SmallParamReport) -> Value {
    let matrix = |m: &Vec<Vec<f64>>| Value::Array(m.iter().map(|row| floats(row)).collect());
    json!({
        "kind": format!("smallparam-{}", r.kind.label()),
        "m": r.m,
        "grid": { "lambda": floats(&r.lambda_grid), "sigma": floats(&r.sigma_grid) },
        "values": matrix(&r.values),
        "ratios": matrix(&r.ratio_matrix),
        "block_max": floats(&r.block_max),
        "finite": r.finite,
        "bounded_by_mass": r.bounded_by_mass,
        "stable": r.stable,
        "sigma_zero": r.sigma_zero_fit.as_ref().map(|f| fit_json("decay", f)),
        "tolerance": float12(3.0),
        "pass": r.stable && r.bounded_by_mass && r.sigma_zero_fit.as_ref().is_none_or(|f| f.pass),
    })
}

/// `{"error": {...}}` body for a failed run.
pub fn error_json(input: Option<&str>, e: &crate::Error) -> Value {
    json!({
        "input": input,
        "error": { "code": e.code(), "message": e.to_string(), "offset": e.offset() },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn running_example_report() {
        let a = analyze_text("(x2 - x1^2)^2 + x1^5").unwrap();
        let r = AnalysisReport::new(&a, true).to_json();
        assert_eq!(r["newton"]["distance"], "4/3");
        assert_eq!(r["adapt"]["sigma"], "x1^2");
        assert_eq!(r["adapt"]["height"], "10/7");
        assert_eq!(r["adapt"]["adapted_form"], "x2^2 + x1^5");
        assert_eq!(r["adapt"]["case"], "a");
        assert_eq!(r["verdict"]["adapted"], false);
        assert_eq!(r["indices"]["beta"], "7/10");
        assert_eq!(r["principal_part"]["h"], "2");
        assert_eq!(r["adapt"]["distance_trace"], json!(["4/3", "10/7"]));
        assert_eq!(r["newton"]["vertices"][0], json!(["0", 2]));
    }

    #[test]
    fn vertex_case_report() {
        let r = AnalysisReport::new(&analyze_text("x1^2*x2^2").unwrap(), false).to_json();
        assert_eq!(r["indices"]["h"], "2");
        assert_eq!(r["adapt"]["case"], "b");
        assert_eq!(r["jet"]["psi"], "0");
        assert!(r["adapt"].get("trace").is_none());
    }

    #[test]
    fn exceptional_report() {
        let r = AnalysisReport::new(&analyze_text("(x2^2 - x1^5)*(x2^2 - 2*x1^5)").unwrap(), false).to_json();
        assert_eq!(r["indices"]["h"], "20/7");
        assert_eq!(r["principal_part"]["exceptional"]["lambda_sum"], "3");
        assert_eq!(r["principal_part"]["second_derivative"], "12*x2^2 - 6*x1^5");
    }

    #[test]
    fn floats_keep_twelve_digits() {
        assert_eq!(float12(2.0 / 3.0), json!(0.666666666667));
        assert_eq!(float12(f64::NAN), Value::Null);
    }
}
