//! Python bindings: `import heightkit`.
//!
//! Exact values come back as `fractions.Fraction`; reports come back as the
//! same dictionaries the CLI writes as JSON.

use heightkit::poly::{PuiseuxPoly, Rational, Variable};
use heightkit::report::{self, AnalysisReport};
use heightkit::verify::{
    flat_preset_fit, oscillatory_decay_fit, small_param_bound_check, sublevel_exponent_fit, Bump, DecayOptions,
    SmallParamKind, SmallParamOptions, SublevelOptions,
};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

create_exception!(heightkit, HeightkitError, PyValueError, "Raised with (code, message, offset).");

fn err(e: heightkit::Error) -> PyErr {
    HeightkitError::new_err((e.code(), e.to_string(), e.offset()))
}

fn fraction<'py>(py: Python<'py>, r: &Rational) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((r.to_string(),))
}

fn rational(text: &str) -> PyResult<Rational> {
    text.trim().parse().map_err(|_| PyValueError::new_err(format!("expected p or p/q, got {text:?}")))
}

fn to_py<'py>(py: Python<'py>, v: &serde_json::Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.getattr("loads")?.call1((v.to_string(),))
}

type Term<'py> = (Bound<'py, PyAny>, u32, Bound<'py, PyAny>);

/// Exact bivariate polynomial with rational x1-exponents.
#[pyclass(name = "Poly", module = "heightkit", frozen)]
struct Poly {
    inner: PuiseuxPoly,
}

#[pymethods]
impl Poly {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        Ok(Poly { inner: heightkit::parse::parse_expression(text).map_err(err)? })
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("Poly('{}')", self.inner)
    }

    fn __eq__(&self, other: &Poly) -> bool {
        self.inner == other.inner
    }

    /// `[(e1, e2, coeff)]` with `e1` and `coeff` as fractions.
    fn terms<'py>(&self, py: Python<'py>) -> PyResult<Vec<Term<'py>>> {
        self.inner.terms().map(|(e, c)| Ok((fraction(py, &e.e1)?, e.e2, fraction(py, c)?))).collect()
    }

    fn evaluate(&self, x1: f64, x2: f64) -> PyResult<f64> {
        self.inner.evaluate_real(x1, x2).map_err(err)
    }

    /// `φ(x1, x2 + c·x1^a)`; `c` and `a` are rational strings.
    fn shear(&self, c: &str, a: &str) -> PyResult<Poly> {
        let a = rational(a)?;
        if a <= Rational::from_integer(0.into()) {
            return Err(PyValueError::new_err("a must be positive"));
        }
        Ok(Poly { inner: self.inner.substitute_shear(&rational(c)?, &a) })
    }

    #[pyo3(signature = (var, order = 1))]
    fn derivative(&self, var: u8, order: u32) -> PyResult<Poly> {
        let var = match var {
            1 => Variable::X1,
            2 => Variable::X2,
            _ => return Err(PyValueError::new_err("var must be 1 or 2")),
        };
        Ok(Poly { inner: self.inner.partial_derivative(var, order) })
    }

    fn distance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let n = heightkit::newton::build_polyhedron(&self.inner).map_err(err)?;
        fraction(py, &n.distance)
    }

    fn vertices<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Bound<'py, PyAny>, u32)>> {
        let n = heightkit::newton::build_polyhedron(&self.inner).map_err(err)?;
        n.vertices.iter().map(|v| Ok((fraction(py, &v.e1)?, v.e2))).collect()
    }
}

/// Result of `analyze`.
#[pyclass(name = "Analysis", module = "heightkit", frozen)]
struct Analysis {
    inner: report::Analysis,
}

#[pymethods]
impl Analysis {
    #[getter]
    fn input(&self) -> String {
        self.inner.input.clone()
    }

    #[getter]
    fn poly(&self) -> Poly {
        Poly { inner: self.inner.poly.clone() }
    }

    #[getter]
    fn distance<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.newton.distance)
    }

    #[getter]
    fn height<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.inner.height())
    }

    #[getter]
    fn beta<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.index())
    }

    #[getter]
    fn gamma<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &self.inner.index())
    }

    /// Whether the input coordinates were already adapted.
    #[getter]
    fn adapted(&self) -> bool {
        self.inner.adapted.steps.is_empty() && !self.inner.adapted.swapped
    }

    #[getter]
    fn case(&self) -> Option<&'static str> {
        self.inner.adapted.verdict.case.map(|c| c.name())
    }

    #[getter]
    fn sigma(&self) -> String {
        self.inner.adapted.sigma().to_string()
    }

    #[getter]
    fn adapted_form(&self) -> Poly {
        Poly { inner: self.inner.adapted.adapted_poly.clone() }
    }

    #[getter]
    fn psi(&self) -> String {
        self.inner.jet.psi.to_string()
    }

    #[getter]
    fn distance_trace<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.inner.adapted.distance_trace().iter().map(|d| fraction(py, d)).collect()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    /// The JSON report as a dictionary.
    #[pyo3(signature = (trace = false))]
    fn report<'py>(&self, py: Python<'py>, trace: bool) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &AnalysisReport::new(&self.inner, trace).to_json())
    }

    fn __repr__(&self) -> String {
        format!("Analysis(input='{}', h={})", self.inner.input, self.inner.height())
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<Poly> {
    Poly::new(text)
}

#[pyfunction]
#[pyo3(signature = (text, shift = false))]
fn analyze(text: &str, shift: bool) -> PyResult<Analysis> {
    let poly = report::parse_phase(text, shift).map_err(err)?;
    Ok(Analysis { inner: report::analyze_poly(text, poly).map_err(err)? })
}

fn expected_height(a: &report::Analysis, expect_h: Option<&str>) -> PyResult<Rational> {
    match expect_h {
        Some(t) => rational(t),
        None => Ok(a.height().clone()),
    }
}

/// Fits the decay of the oscillatory integral; returns the report with a `verify` entry.
#[pyfunction]
#[pyo3(signature = (
    text, lmax = 2048.0, tol = 0.1, loglog = false, r0 = 0.75, tensor = false,
    ppd = 4, mirror = false, half_plane = false, expect_h = None,
))]
#[allow(clippy::too_many_arguments)]
fn verify_decay<'py>(
    py: Python<'py>,
    text: &str,
    lmax: f64,
    tol: f64,
    loglog: bool,
    r0: f64,
    tensor: bool,
    ppd: u32,
    mirror: bool,
    half_plane: bool,
    expect_h: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    let a = report::analyze_text(text).map_err(err)?;
    let h = expected_height(&a, expect_h)?;
    let opts = DecayOptions {
        bump: if tensor { Bump::Tensor { r0 } } else { Bump::Radial { r0 } },
        lambda_max: lmax,
        points_per_decade: ppd,
        tolerance: tol,
        log_model: loglog,
        mirror,
        half_plane,
        ..DecayOptions::default()
    };
    let d = py.detach(|| oscillatory_decay_fit(&a.poly, &h, &opts)).map_err(err)?;
    let mut rep = AnalysisReport::new(&a, false);
    rep.verify = Some(report::decay_json(&d));
    to_py(py, &rep.to_json())
}

/// Fits the sublevel-set measure; `text=None` with `flat=alpha` runs the flat preset.
#[pyfunction]
#[pyo3(signature = (
    text = None, window = 1.0, tol = 0.1, loglog = false, resolution = 4096, refine = true,
    eps_from = 2, eps_to = 6, seed = 0x5eed, mirror = false, half_plane = false, flat = None, expect_h = None,
))]
#[allow(clippy::too_many_arguments)]
fn verify_sublevel<'py>(
    py: Python<'py>,
    text: Option<&str>,
    window: f64,
    tol: f64,
    loglog: bool,
    resolution: usize,
    refine: bool,
    eps_from: u32,
    eps_to: u32,
    seed: u64,
    mirror: bool,
    half_plane: bool,
    flat: Option<f64>,
    expect_h: Option<&str>,
) -> PyResult<Bound<'py, PyAny>> {
    if eps_to <= eps_from {
        return Err(PyValueError::new_err("eps_to must exceed eps_from"));
    }
    let opts = SublevelOptions {
        half_width: window,
        resolution,
        refine,
        seed,
        eps_grid: heightkit::verify::eps_grid(eps_from, eps_to, 4),
        tolerance: tol,
        log_model: loglog,
        mirror,
        half_plane,
    };
    match (text, flat) {
        (None, Some(alpha)) => {
            let s = py.detach(|| flat_preset_fit(alpha, &opts)).map_err(err)?;
            to_py(py, &serde_json::json!({ "input": format!("x2^2 + exp(-|x1|^-{alpha})"), "verify": report::sublevel_json(&s) }))
        }
        (Some(text), None) => {
            let a = report::analyze_text(text).map_err(err)?;
            let h = expected_height(&a, expect_h)?;
            let s = py.detach(|| sublevel_exponent_fit(&a.poly, &h, &opts)).map_err(err)?;
            let mut rep = AnalysisReport::new(&a, false);
            rep.verify = Some(report::sublevel_json(&s));
            to_py(py, &rep.to_json())
        }
        _ => Err(PyValueError::new_err("give either text or flat")),
    }
}

/// Small-parameter bound check for one of the kinds `81`/`82`/`83`.
#[pyfunction]
#[pyo3(signature = (kind, m = 2))]
fn small_param_check<'py>(py: Python<'py>, kind: &str, m: u32) -> PyResult<Bound<'py, PyAny>> {
    let kind = match kind {
        "81" => SmallParamKind::NonDegenerate { m },
        "82" => SmallParamKind::Airy,
        "83" => SmallParamKind::DegenerateAiry { m },
        _ => return Err(PyValueError::new_err("kind must be \"81\", \"82\" or \"83\"")),
    };
    if kind.m() < 2 {
        return Err(PyValueError::new_err("m must be at least 2"));
    }
    let r = py.detach(|| small_param_bound_check(kind, &SmallParamOptions::default())).map_err(err)?;
    to_py(py, &report::small_param_json(&r))
}

#[pymodule]
#[pyo3(name = "heightkit")]
fn heightkit_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("HeightkitError", m.py().get_type::<HeightkitError>())?;
    m.add_class::<Poly>()?;
    m.add_class::<Analysis>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(verify_decay, m)?)?;
    m.add_function(wrap_pyfunction!(verify_sublevel, m)?)?;
    m.add_function(wrap_pyfunction!(small_param_check, m)?)?;
    Ok(())
}
