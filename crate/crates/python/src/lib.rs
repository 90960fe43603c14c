//! Python bindings: Seifert indices, circle and Seifert representations,
//! character-variety catalogs, Brieskorn surgery and the generic torsion
//! of a based chain complex.

use std::fmt::Display;

use pyo3::exceptions::PyException;
use pyo3::prelude::*;

use rtorsion::char_variety::{self, Catalog};
use rtorsion::model_complexes as mc;
use rtorsion::seifert::{self as sf};
use rtorsion::surgery_brieskorn as sb;
use rtorsion::torsion_core::{self as tc, BasedChainComplex};
use rtorsion::verify::{self, VerifyOptions};
use rtorsion::{CMatrix, Error, C64};

pyo3::create_exception!(pyrtorsion, RTorsionError, PyException, "Base class of rtorsion errors.");
pyo3::create_exception!(pyrtorsion, ParseError, RTorsionError, "Malformed input.");
pyo3::create_exception!(pyrtorsion, PreconditionError, RTorsionError, "A mathematical precondition does not hold.");

fn to_py(e: Error) -> PyErr {
    if e.is_parse_error() {
        ParseError::new_err(e.to_string())
    } else {
        PreconditionError::new_err(e.to_string())
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for rtorsion::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// An exact rational as `fractions.Fraction`.
fn fraction<'py>(py: Python<'py>, value: &impl Display) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((value.to_string(),))
}

/// A Seifert fibered space `{b, (o, g); (α_1, β_1), …}`.
#[pyclass(frozen, module = "pyrtorsion", name = "SeifertIndex")]
pub struct PySeifertIndex(sf::SeifertIndex);

#[pymethods]
impl PySeifertIndex {
    /// Parses `"b; g; a1/b1, a2/b2, ..."` or the JSON form.
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        sf::SeifertIndex::parse_any(text).or_raise().map(Self)
    }

    /// The homology sphere with the given pairwise coprime multiplicities.
    #[staticmethod]
    fn homology_sphere(alphas: Vec<i64>) -> PyResult<Self> {
        sf::homology_sphere(&alphas).or_raise().map(Self)
    }

    #[getter]
    fn b(&self) -> i64 {
        self.0.b()
    }

    #[getter]
    fn genus(&self) -> u32 {
        self.0.genus()
    }

    #[getter]
    fn fibers(&self) -> Vec<(i64, i64)> {
        self.0.fibers().iter().map(|f| (f.alpha, f.beta)).collect()
    }

    #[getter]
    fn alphas(&self) -> Vec<i64> {
        self.0.alphas()
    }

    fn is_homology_sphere(&self) -> bool {
        sf::is_homology_sphere(&self.0)
    }

    /// `|H_1|`, or 0 when it is infinite.
    fn h1_order<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &sf::h1_order(&self.0))
    }

    fn orbifold_euler_char<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, &sf::orbifold_euler_char(&self.0))
    }

    /// `−χ`, the largest limit of `log|Tor|/(2N)` in units of `log 2`.
    fn max_limit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, sf::max_limit(&self.0).coefficient())
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("SeifertIndex({:?})", self.0.to_string())
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// A circle representation with eigenvalues `e^{±iπη/λ}`.
#[pyclass(frozen, module = "pyrtorsion", name = "CircleRep")]
pub struct PyCircleRep(mc::CircleRep);

#[pymethods]
impl PyCircleRep {
    #[new]
    fn new(eta: i64, lambda_: i64) -> PyResult<Self> {
        mc::CircleRep::new(eta, lambda_).or_raise().map(Self)
    }

    /// Reduces the angle `num/den` (in units of `π`) to lowest terms.
    #[staticmethod]
    fn from_angle(num: i64, den: i64) -> PyResult<Self> {
        mc::CircleRep::from_angle(num, den).or_raise().map(Self)
    }

    #[getter]
    fn eta(&self) -> i64 {
        self.0.eta()
    }

    #[getter]
    fn lambda_(&self) -> i64 {
        self.0.lambda()
    }

    #[getter]
    fn order(&self) -> u64 {
        self.0.order()
    }

    /// Closed-form `log|Tor(S¹; ρ_{2N})|`.
    fn log_torsion(&self, n: u64) -> f64 {
        mc::circle_log_torsion(&self.0, n)
    }

    fn log_torsion_sequence(&self, n_max: u64) -> Vec<f64> {
        mc::circle_log_torsion_sequence(&self.0, n_max)
    }

    /// `log|Tor|` of the twisted complex by the generic algorithm.
    fn generic_log_torsion(&self, n: usize) -> PyResult<Option<f64>> {
        let l = self.0.sym_power(2 * n).or_raise()?;
        Ok(tc::torsion(&mc::circle_complex(&l)).value())
    }

    /// Limit of `log|Tor|/(2N)` in units of `log 2`.
    fn limit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, mc::circle_limit_exact(self.0.lambda() as u64).coefficient())
    }

    fn convergence_constant(&self) -> f64 {
        mc::convergence_constant(&self.0)
    }

    fn __repr__(&self) -> String {
        format!("CircleRep({}, {})", self.0.eta(), self.0.lambda())
    }
}

/// A representation of a Seifert fibered space with the regular fiber sent to `−I`.
#[pyclass(frozen, module = "pyrtorsion", name = "SeifertRep")]
pub struct PySeifertRep {
    index: sf::SeifertIndex,
    rep: sf::SeifertRep,
}

#[pymethods]
impl PySeifertRep {
    /// From the rotation numbers `ξ_j` of the exceptional fibers.
    #[staticmethod]
    fn from_xi(index: &PySeifertIndex, xi: Vec<i64>) -> PyResult<Self> {
        let rep = sf::SeifertRep::from_xi(&index.0, &xi).or_raise()?;
        Ok(Self { index: index.0.clone(), rep })
    }

    /// From the exponents `η_j` of the exceptional fiber cores.
    #[staticmethod]
    fn from_eta(index: &PySeifertIndex, eta: Vec<i64>) -> PyResult<Self> {
        let rep = sf::SeifertRep::new(&index.0, &eta).or_raise()?;
        Ok(Self { index: index.0.clone(), rep })
    }

    #[getter]
    fn etas(&self) -> Vec<i64> {
        self.rep.etas().to_vec()
    }

    #[getter]
    fn lambdas(&self) -> Vec<u64> {
        self.rep.lambdas().to_vec()
    }

    fn log_torsion(&self, n: u64) -> PyResult<f64> {
        sf::seifert_log_torsion(&self.index, &self.rep, n).or_raise()
    }

    fn log_torsion_sequence(&self, n_max: u64) -> PyResult<Vec<f64>> {
        sf::seifert_log_torsion_sequence(&self.index, &self.rep, n_max).or_raise()
    }

    /// The same value assembled from the trivial bundle and the solid tori.
    fn assembled_log_torsion(&self, n: u64) -> PyResult<f64> {
        sf::assembled_log_torsion(&self.index, &self.rep, n).or_raise()
    }

    fn limit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let limit = sf::seifert_limit_exact(&self.index, self.rep.lambdas()).or_raise()?;
        fraction(py, limit.coefficient())
    }

    fn convergence_constant(&self) -> PyResult<f64> {
        self.rep.convergence_constant(&self.index).or_raise()
    }
}

/// A component of the SU(2) character variety.
#[pyclass(frozen, module = "pyrtorsion", name = "Component")]
pub struct PyComponent(char_variety::Component);

#[pymethods]
impl PyComponent {
    #[getter]
    fn xi(&self) -> Vec<i64> {
        self.0.xi.values().to_vec()
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.0.dim
    }

    #[getter]
    fn lambdas(&self) -> Vec<u64> {
        self.0.lambdas.clone()
    }

    /// Limit of `log|Tor|/(2N)` in units of `log 2`.
    #[getter]
    fn limit<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        fraction(py, self.0.limit.coefficient())
    }

    fn __repr__(&self) -> String {
        format!("Component(xi={:?}, dim={}, limit={})", self.0.xi.values(), self.0.dim, self.0.limit)
    }
}

#[pyfunction]
fn enumerate_components(index: &PySeifertIndex) -> PyResult<Vec<PyComponent>> {
    Ok(char_variety::enumerate_components(&index.0).or_raise()?.into_iter().map(PyComponent).collect())
}

#[pyfunction]
fn catalog_json(index: &PySeifertIndex) -> PyResult<String> {
    Ok(Catalog::build(&index.0).or_raise()?.to_json())
}

#[pyfunction]
fn catalog_csv(index: &PySeifertIndex) -> PyResult<String> {
    Ok(Catalog::build(&index.0).or_raise()?.to_csv())
}

/// Largest and smallest limits with the components attaining them, as JSON.
#[pyfunction]
fn extremes_json(index: &PySeifertIndex) -> PyResult<String> {
    let extremes = char_variety::classify_extremes(&index.0).or_raise()?;
    Ok(serde_json::to_string_pretty(&extremes).expect("serializable"))
}

fn surgery(p: i64, q: i64, n: i64, triple: (i64, i64, i64)) -> PyResult<(sb::TorusKnotExterior, sb::JohnsonTriple)> {
    let tk = sb::TorusKnotExterior::new(p, q, n).or_raise()?;
    let t = sb::JohnsonTriple::new(&tk, triple.0, triple.1, triple.2).or_raise()?;
    Ok((tk, t))
}

/// `(a, b, c, acyclic)` for every Johnson triple of `1/n` surgery on the `(p, q)` torus knot.
#[pyfunction]
fn brieskorn_triples(p: i64, q: i64, n: i64) -> PyResult<Vec<(i64, i64, i64, bool)>> {
    let tk = sb::TorusKnotExterior::new(p, q, n).or_raise()?;
    Ok(sb::johnson_classify(&tk).into_iter().map(|t| (t.triple.a, t.triple.b, t.triple.c, t.acyclic)).collect())
}

/// Torsion of the two-dimensional representation itself.
#[pyfunction]
fn brieskorn_torsion(p: i64, q: i64, n: i64, triple: (i64, i64, i64)) -> PyResult<f64> {
    let (tk, t) = surgery(p, q, n, triple)?;
    sb::brieskorn_torsion(&tk, &t).or_raise()
}

#[pyfunction]
#[pyo3(name = "brieskorn_log_torsion")]
fn brieskorn_higher_log_torsion(p: i64, q: i64, n: i64, triple: (i64, i64, i64), big_n: u64) -> PyResult<f64> {
    let (tk, t) = surgery(p, q, n, triple)?;
    sb::brieskorn_higher_log_torsion(&tk, &t, big_n).or_raise()
}

#[pyfunction]
fn brieskorn_limit<'py>(
    py: Python<'py>,
    p: i64,
    q: i64,
    n: i64,
    triple: (i64, i64, i64),
) -> PyResult<Bound<'py, PyAny>> {
    let (tk, t) = surgery(p, q, n, triple)?;
    fraction(py, sb::brieskorn_leading_limit_exact(&tk, &t).or_raise()?.coefficient())
}

#[pyfunction]
fn torusknot_log_torsion(p: i64, q: i64, a: i64, b: i64, big_n: u64) -> PyResult<f64> {
    sb::torusknot_higher_log_torsion(p, q, a, b, big_n).or_raise()
}

/// `log|Tor|` of a based complex with real boundary matrices, `None` when
/// it is not acyclic. `boundaries[k]` is `∂_{k+1}` as a list of rows.
#[pyfunction]
fn chain_complex_log_torsion(dims: Vec<usize>, boundaries: Vec<Vec<Vec<f64>>>) -> PyResult<Option<f64>> {
    let mats = boundaries
        .iter()
        .enumerate()
        .map(|(k, rows)| {
            let (r, c) = (dims.get(k).copied().unwrap_or(0), dims.get(k + 1).copied().unwrap_or(0));
            if rows.len() != r || rows.iter().any(|row| row.len() != c) {
                return Err(to_py(Error::parse(&format!("boundaries[{k}]"), format!("expected a {r} × {c} matrix"))));
            }
            Ok(CMatrix::from_fn(r, c, |i, j| C64::new(rows[i][j], 0.0)))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let complex = BasedChainComplex::new(dims, mats).or_raise()?;
    Ok(tc::torsion(&complex).value())
}

type CheckRow = (String, bool, usize, f64, String);

/// Runs the consistency checks; returns `(name, passed, cases, max_deviation, detail)` rows.
#[pyfunction]
#[pyo3(signature = (quick = true, check = None))]
fn run_verify(quick: bool, check: Option<&str>) -> PyResult<Vec<CheckRow>> {
    let report = verify::run(&VerifyOptions { quick, perturb: None }, check).or_raise()?;
    Ok(report.checks.into_iter().map(|c| (c.name, c.passed, c.cases, c.max_deviation, c.detail)).collect())
}

#[pymodule]
pub fn pyrtorsion(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("RTorsionError", py.get_type::<RTorsionError>())?;
    m.add("ParseError", py.get_type::<ParseError>())?;
    m.add("PreconditionError", py.get_type::<PreconditionError>())?;
    m.add_class::<PySeifertIndex>()?;
    m.add_class::<PyCircleRep>()?;
    m.add_class::<PySeifertRep>()?;
    m.add_class::<PyComponent>()?;
    m.add_function(wrap_pyfunction!(enumerate_components, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_json, m)?)?;
    m.add_function(wrap_pyfunction!(catalog_csv, m)?)?;
    m.add_function(wrap_pyfunction!(extremes_json, m)?)?;
    m.add_function(wrap_pyfunction!(brieskorn_triples, m)?)?;
    m.add_function(wrap_pyfunction!(brieskorn_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(brieskorn_higher_log_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(brieskorn_limit, m)?)?;
    m.add_function(wrap_pyfunction!(torusknot_log_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(chain_complex_log_torsion, m)?)?;
    m.add_function(wrap_pyfunction!(run_verify, m)?)?;
    Ok(())
}
