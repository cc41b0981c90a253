//! Python bindings. Rationals cross the boundary as `fractions.Fraction`;
//! matrix inputs may hold ints, Fractions or `"p/q"` strings.

use double_cluster::exact::{fmt_scalar, parse_scalar, Mat, Scalar};
use double_cluster::family::{rng_from_seed, sample_diagonal_point, sample_double_point, sample_dual_point, DEFAULT_BOUND};
use double_cluster::harness;
use double_cluster::identity;
use double_cluster::mutation::MutationState;
use double_cluster::poisson::{self, log_canonical_check, sample_points, LogCanonical};
use double_cluster::seedcore::{self, verify_string_roots, VertexKind};
use double_cluster::{BracketKind, DoublePoint, DualPoint, Evaluator, FamilyFunction};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn fraction<'py>(py: Python<'py>, s: &Scalar) -> PyResult<Bound<'py, PyAny>> {
    py.import("fractions")?.getattr("Fraction")?.call1((fmt_scalar(s),))
}

fn fractions<'py>(py: Python<'py>, v: &[Scalar]) -> PyResult<Bound<'py, PyList>> {
    let items = v.iter().map(|s| fraction(py, s)).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, items)
}

fn matrix_out<'py>(py: Python<'py>, m: &Mat<Scalar>) -> PyResult<Bound<'py, PyList>> {
    let rows = (0..m.rows()).map(|i| fractions(py, &m.row(i))).collect::<PyResult<Vec<_>>>()?;
    PyList::new(py, rows)
}

fn scalar_in(v: &Bound<'_, PyAny>) -> PyResult<Scalar> {
    let text = v.str()?.to_string();
    parse_scalar(text.trim()).ok_or_else(|| err(format!("not a rational number: {text}")))
}

fn matrix_in(rows: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<Mat<Scalar>> {
    let parsed = rows
        .iter()
        .map(|r| r.iter().map(scalar_in).collect::<PyResult<Vec<_>>>())
        .collect::<PyResult<Vec<_>>>()?;
    Mat::from_rows(parsed).map_err(err)
}

fn vector_in(v: Vec<Bound<'_, PyAny>>) -> PyResult<Vec<Scalar>> {
    v.iter().map(scalar_in).collect()
}

fn point_in(x: Vec<Vec<Bound<'_, PyAny>>>, y: Vec<Vec<Bound<'_, PyAny>>>) -> PyResult<DoublePoint> {
    DoublePoint::new(matrix_in(x)?, matrix_in(y)?).map_err(err)
}

fn kind_in(kind: &str) -> PyResult<BracketKind> {
    kind.parse().map_err(err)
}

fn kind_name(k: VertexKind) -> &'static str {
    match k {
        VertexKind::Mutable => "mutable",
        VertexKind::Stable => "stable",
        VertexKind::Isolated => "isolated",
    }
}

/// A quiver `Q_n`, its diagonal reduction or the dual quiver.
#[pyclass(name = "Quiver", frozen)]
struct PyQuiver {
    inner: double_cluster::Quiver,
}

#[pymethods]
impl PyQuiver {
    /// `kind` is `"double"`, `"std"` (diagonal reduction) or `"dual"`.
    #[new]
    #[pyo3(signature = (n, kind = "double"))]
    fn new(n: usize, kind: &str) -> PyResult<Self> {
        let seed = harness::seed_for(kind_in(kind)?, n).map_err(err)?;
        Ok(Self { inner: seed.quiver })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    /// `(name, kind, order)` per vertex.
    fn vertices(&self) -> Vec<(String, &'static str, u32)> {
        self.inner
            .vertices
            .iter()
            .map(|v| (v.name(), kind_name(v.kind), v.order))
            .collect()
    }

    /// `(from, to, multiplicity)`, sorted by name.
    fn arrows(&self) -> Vec<(String, String, u32)> {
        self.inner.named_arrows()
    }

    fn arrow_count(&self) -> u32 {
        self.inner.arrow_count()
    }

    fn count(&self, kind: &str) -> PyResult<usize> {
        let k = match kind {
            "mutable" => VertexKind::Mutable,
            "stable" => VertexKind::Stable,
            "isolated" => VertexKind::Isolated,
            other => return Err(err(format!("unknown vertex kind {other}"))),
        };
        Ok(self.inner.count_kind(k))
    }

    fn to_dot(&self) -> String {
        seedcore::to_dot(&self.inner)
    }

    fn to_json(&self) -> String {
        seedcore::to_json(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!(
            "Quiver(n={}, vertices={}, arrows={})",
            self.inner.n,
            self.inner.vertex_count(),
            self.inner.arrow_count()
        )
    }
}

/// An initial seed together with its exchange relations.
#[pyclass(name = "Seed", frozen)]
struct PySeed {
    inner: double_cluster::Seed,
    kind: BracketKind,
}

#[pymethods]
impl PySeed {
    #[new]
    #[pyo3(signature = (n, kind = "double"))]
    fn new(n: usize, kind: &str) -> PyResult<Self> {
        let kind = kind_in(kind)?;
        Ok(Self {
            inner: harness::seed_for(kind, n).map_err(err)?,
            kind,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels()
    }

    fn quiver(&self) -> PyQuiver {
        PyQuiver {
            inner: self.inner.quiver.clone(),
        }
    }

    /// Values of the extended cluster at `(x, y)`.
    fn values<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Vec<Bound<'py, PyAny>>>,
        y: Vec<Vec<Bound<'py, PyAny>>>,
    ) -> PyResult<Bound<'py, PyList>> {
        let p = point_in(x, y)?;
        fractions(py, &self.inner.eval(&p.x, &p.y).map_err(err)?)
    }

    /// Log-canonicality at `points` random points. Returns a dict with
    /// `constant` and either `omega` or the violating `pair`.
    #[pyo3(signature = (points = 5, seed = 1))]
    fn log_canonical<'py>(&self, py: Python<'py>, points: usize, seed: u64) -> PyResult<Bound<'py, PyDict>> {
        let mut rng = rng_from_seed(seed);
        let pts = sample_points(&self.inner, self.kind, self.inner.n, points, &mut rng, DEFAULT_BOUND).map_err(err)?;
        let out = PyDict::new(py);
        match py
            .detach(|| log_canonical_check(&self.inner, &pts, self.kind))
            .map_err(err)?
        {
            LogCanonical::Constant(o) => {
                out.set_item("constant", true)?;
                out.set_item("labels", o.labels.clone())?;
                let rows = o.entries.iter().map(|r| fractions(py, r)).collect::<PyResult<Vec<_>>>()?;
                out.set_item("omega", PyList::new(py, rows)?)?;
            }
            LogCanonical::Violated(v) => {
                out.set_item("constant", false)?;
                out.set_item("pair", (v.labels.0.clone(), v.labels.1.clone()))?;
                out.set_item("point", v.point)?;
            }
        }
        Ok(out)
    }

    /// `(vertex, r, ok)` for every exact-root certificate at random points.
    #[pyo3(signature = (points = 5, seed = 1))]
    fn string_roots(&self, points: usize, seed: u64) -> PyResult<Vec<(String, usize, bool)>> {
        let mut rng = rng_from_seed(seed);
        let pts = sample_points(&self.inner, BracketKind::Double, self.inner.n, points, &mut rng, DEFAULT_BOUND)
            .map_err(err)?;
        let checks = verify_string_roots(&self.inner, &pts).map_err(err)?;
        Ok(checks.into_iter().map(|c| (c.vertex, c.r, c.ok)).collect())
    }
}

/// A cluster reached from the initial seed on the double by mutations.
#[pyclass(name = "MutationState", frozen)]
struct PyMutationState {
    inner: MutationState,
}

#[pymethods]
impl PyMutationState {
    #[new]
    fn new(n: usize) -> PyResult<Self> {
        let seed = seedcore::build_initial_seed(n).map_err(err)?;
        Ok(Self {
            inner: MutationState::new(seed),
        })
    }

    #[getter]
    fn depth(&self) -> usize {
        self.inner.depth()
    }

    fn labels(&self) -> Vec<String> {
        self.inner.labels()
    }

    /// Adjacent state in direction `vertex` (e.g. `"phi11"`, `"h_2_2"`).
    fn mutate(&self, vertex: &str) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.mutate_named(vertex).map_err(err)?,
        })
    }

    fn values<'py>(
        &self,
        py: Python<'py>,
        x: Vec<Vec<Bound<'py, PyAny>>>,
        y: Vec<Vec<Bound<'py, PyAny>>>,
    ) -> PyResult<Bound<'py, PyList>> {
        let p = point_in(x, y)?;
        fractions(py, &self.inner.values(&p.x, &p.y).map_err(err)?)
    }

    /// The new variable produced by the exchange relation at `vertex`.
    fn exchange_value<'py>(
        &self,
        py: Python<'py>,
        vertex: &str,
        x: Vec<Vec<Bound<'py, PyAny>>>,
        y: Vec<Vec<Bound<'py, PyAny>>>,
    ) -> PyResult<Bound<'py, PyAny>> {
        let p = point_in(x, y)?;
        let k = self.inner.find(vertex).map_err(err)?;
        fraction(py, &self.inner.exchange_value(k, &p).map_err(err)?)
    }
}

/// Value of one family function (`"phi_1_1"`, `"c_2"`, `"psi_1_2"`, ...).
#[pyfunction]
fn evaluate<'py>(
    py: Python<'py>,
    name: &str,
    x: Vec<Vec<Bound<'py, PyAny>>>,
    y: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyAny>> {
    let p = point_in(x, y)?;
    let f = FamilyFunction::parse(p.n(), name).map_err(err)?;
    fraction(py, &p.eval(&f).map_err(err)?)
}

/// Bracket of two family functions. For `"double"` the point is `(X, Y)`,
/// for `"std"` only `x` is used, for `"dual"` the point is `(B+, B-)`.
#[pyfunction]
#[pyo3(signature = (f, g, x, y, kind = "double"))]
fn bracket<'py>(
    py: Python<'py>,
    f: &str,
    g: &str,
    x: Vec<Vec<Bound<'py, PyAny>>>,
    y: Vec<Vec<Bound<'py, PyAny>>>,
    kind: &str,
) -> PyResult<Bound<'py, PyAny>> {
    let (x, y) = (matrix_in(x)?, matrix_in(y)?);
    let n = x.rows();
    let ff = FamilyFunction::parse(n, f).map_err(err)?;
    let gg = FamilyFunction::parse(n, g).map_err(err)?;
    let value = match kind_in(kind)? {
        BracketKind::Double => poisson::bracket_double(&ff, &gg, &DoublePoint::new(x, y).map_err(err)?),
        BracketKind::Standard => poisson::bracket_std(&ff, &gg, &x),
        BracketKind::Dual => poisson::bracket_dual(&ff, &gg, &DualPoint::new(x, y).map_err(err)?),
    }
    .map_err(err)?;
    fraction(py, &value)
}

/// Random integer point `(X, Y)` of the requested kind.
#[pyfunction]
#[pyo3(signature = (n, seed = 1, kind = "double"))]
fn sample_point<'py>(
    py: Python<'py>,
    n: usize,
    seed: u64,
    kind: &str,
) -> PyResult<(Bound<'py, PyList>, Bound<'py, PyList>)> {
    let mut rng = rng_from_seed(seed);
    let p = match kind_in(kind)? {
        BracketKind::Double => sample_double_point(n, &mut rng, DEFAULT_BOUND),
        BracketKind::Standard => sample_diagonal_point(n, &mut rng, DEFAULT_BOUND),
        BracketKind::Dual => {
            let q = sample_dual_point(n, &mut rng, DEFAULT_BOUND);
            DoublePoint {
                x: q.bplus,
                y: q.bminus,
            }
        }
    };
    Ok((matrix_out(py, &p.x)?, matrix_out(py, &p.y)?))
}

/// `(lhs, rhs, equal)` of the Krylov determinantal identity.
#[pyfunction]
fn long_identity<'py>(
    py: Python<'py>,
    a: Vec<Vec<Bound<'py, PyAny>>>,
    u: Vec<Bound<'py, PyAny>>,
    v: Vec<Bound<'py, PyAny>>,
) -> PyResult<(Bound<'py, PyAny>, Bound<'py, PyAny>, bool)> {
    let r = identity::verify_long_identity(&matrix_in(a)?, &vector_in(u)?, &vector_in(v)?).map_err(err)?;
    Ok((fraction(py, &r.lhs)?, fraction(py, &r.rhs)?, r.equal))
}

/// Pencil determinant, `phi_1_1`, its cofactor and the exchange value.
#[pyfunction]
fn corollary<'py>(
    py: Python<'py>,
    x: Vec<Vec<Bound<'py, PyAny>>>,
    y: Vec<Vec<Bound<'py, PyAny>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let r = identity::verify_corollary(&point_in(x, y)?).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("pencil_det", fraction(py, &r.pencil_det)?)?;
    out.set_item("phi11", fraction(py, &r.phi11)?)?;
    out.set_item("cofactor", fraction(py, &r.cofactor)?)?;
    out.set_item("equal", r.equal)?;
    match &r.exchange_value {
        Some(v) => out.set_item("exchange_value", fraction(py, v)?)?,
        None => out.set_item("exchange_value", py.None())?,
    }
    out.set_item("relative_sign", r.relative_sign)?;
    Ok(out)
}

/// Runs the command-line tool in-process: `(exit_code, stdout, stderr)`.
#[pyfunction]
fn run_cli(py: Python<'_>, args: Vec<String>) -> (i32, String, String) {
    let mut argv = vec!["double-cluster".to_string()];
    argv.extend(args);
    let out = py.detach(|| harness::run(argv));
    (out.code, out.stdout, out.stderr)
}

#[pymodule]
#[pyo3(name = "double_cluster")]
fn double_cluster_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}

/// Adds the classes and functions to `m`; used by the module initializer.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyQuiver>()?;
    m.add_class::<PySeed>()?;
    m.add_class::<PyMutationState>()?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(bracket, m)?)?;
    m.add_function(wrap_pyfunction!(sample_point, m)?)?;
    m.add_function(wrap_pyfunction!(long_identity, m)?)?;
    m.add_function(wrap_pyfunction!(corollary, m)?)?;
    m.add_function(wrap_pyfunction!(run_cli, m)?)?;
    Ok(())
}
