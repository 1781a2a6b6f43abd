//! Python bindings: the line models, the Newtonian model, the coupling
//! operators and the verification suites.

use pyo3::create_exception;
use pyo3::exceptions::PyException;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use biharm::adjoint::{adjoint_apply, eq61_residual, Eq61Outcome};
use biharm::kernel::kernel_eval;
use biharm::models::newtonian::NewtonianModel;
use biharm::models::{bilaplace, interval};
use biharm::riquier::{biharmonic_measures, solve_riquier, RegularSubdomain};
use biharm::verify::{run_suite, Suite};
use biharm::{compose_green, coupling_apply, Evaluable, LineModel, Tolerances};

create_exception!(biharm_py, BiharmError, PyException);

fn err(e: biharm::Error) -> PyErr {
    BiharmError::new_err(e.to_string())
}

/// A nonnegative extended real: finite with an error bound, or `+inf` with
/// the estimated exponent of the divergent integrand.
#[pyclass(name = "ExtendedValue", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExtendedValue {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    error_bound: Option<f64>,
    #[pyo3(get)]
    exponent: Option<f64>,
}

impl From<biharm::ExtendedValue> for PyExtendedValue {
    fn from(v: biharm::ExtendedValue) -> Self {
        PyExtendedValue {
            value: v.value(),
            error_bound: v.error_bound(),
            exponent: v.certificate().map(|c| c.estimated_exponent),
        }
    }
}

#[pymethods]
impl PyExtendedValue {
    #[getter]
    fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    fn __float__(&self) -> f64 {
        self.value
    }

    fn __repr__(&self) -> String {
        match (self.error_bound, self.exponent) {
            (Some(e), _) => format!("ExtendedValue({} ± {e:e})", self.value),
            (None, Some(p)) => format!("ExtendedValue(inf, exponent={p:.4})"),
            _ => format!("ExtendedValue({})", self.value),
        }
    }
}

/// Data for `v`/`vstar`: a number or a callable `float -> float`.
fn evaluable(f: &Bound<'_, PyAny>, kinks: Option<Vec<f64>>) -> PyResult<Evaluable> {
    if let Ok(c) = f.extract::<f64>() {
        return Ok(Evaluable::constant(c));
    }
    if !f.is_callable() {
        return Err(pyo3::exceptions::PyTypeError::new_err(
            "data must be a number or a callable",
        ));
    }
    let callable: Py<PyAny> = f.clone().unbind();
    let e = Evaluable::closed("python callable", move |z| {
        Python::attach(|py| {
            callable
                .call1(py, (z,))
                .and_then(|r| r.extract::<f64>(py))
                .unwrap_or(f64::NAN)
        })
    });
    Ok(e.with_kinks(&kinks.unwrap_or_default()))
}

/// One of the one-dimensional model spaces.
#[pyclass(name = "LineModel", frozen)]
struct PyLineModel {
    inner: LineModel,
}

#[pymethods]
impl PyLineModel {
    /// `(x u)'' = -v` on `[0, 1)`; `stated=True` switches the reference
    /// density to `y(1 - y)`.
    #[staticmethod]
    #[pyo3(signature = (stated = false))]
    fn interval(stated: bool) -> Self {
        let inner = if stated {
            interval::model_with(interval::MuDensity::Stated)
        } else {
            interval::model()
        };
        PyLineModel { inner }
    }

    /// `u'' = -v`, `v'' = 0` on `(0, 1)` with Navier data.
    #[staticmethod]
    fn bilaplace() -> Self {
        PyLineModel {
            inner: bilaplace::model(),
        }
    }

    #[getter]
    fn name(&self) -> String {
        self.inner.id.to_string()
    }

    fn with_quad_tol(&self, tol: f64) -> Self {
        PyLineModel {
            inner: self.inner.clone().with_quad_tol(tol),
        }
    }

    /// The adjoint model (kernels transposed).
    fn adjoint(&self) -> PyResult<Self> {
        Ok(PyLineModel {
            inner: self.inner.adjoint().map_err(err)?,
        })
    }

    fn g1(&self, x: f64, y: f64) -> PyResult<PyExtendedValue> {
        kernel_eval(&self.inner.g1, x, y).map(Into::into).map_err(err)
    }

    fn g2(&self, x: f64, y: f64) -> PyResult<PyExtendedValue> {
        kernel_eval(&self.inner.g2, x, y).map(Into::into).map_err(err)
    }

    /// `H(x, y) = ∫ G1(x, z) G2(z, y) dμ(z)`.
    fn h(&self, x: f64, y: f64) -> PyResult<PyExtendedValue> {
        compose_green(&self.inner, x, y).map(Into::into).map_err(err)
    }

    /// `V f(x)`.
    #[pyo3(signature = (f, x, kinks = None))]
    fn v(&self, f: &Bound<'_, PyAny>, x: f64, kinks: Option<Vec<f64>>) -> PyResult<PyExtendedValue> {
        let e = evaluable(f, kinks)?;
        coupling_apply(&self.inner, &e, x).map(Into::into).map_err(err)
    }

    /// `V* f(x)`.
    #[pyo3(signature = (f, x, kinks = None))]
    fn vstar(&self, f: &Bound<'_, PyAny>, x: f64, kinks: Option<Vec<f64>>) -> PyResult<PyExtendedValue> {
        let e = evaluable(f, kinks)?;
        adjoint_apply(&self.inner, &e, x).map(Into::into).map_err(err)
    }

    /// `|V*(G1(y, .))(x) - H(y, x)|`, or `None` when either side diverges.
    fn route_residual(&self, x: f64, y: f64) -> PyResult<Option<f64>> {
        Ok(match eq61_residual(&self.inner, x, y).map_err(err)? {
            Eq61Outcome::Finite { residual, .. } => Some(residual),
            _ => None,
        })
    }

    /// Solves the Riquier problem on `[a, b]` with `u = f`, `v = g` at the
    /// endpoints and returns `(u(xs), v(xs))`.
    fn riquier(
        &self,
        a: f64,
        b: f64,
        f: [f64; 2],
        g: [f64; 2],
        xs: Vec<f64>,
    ) -> PyResult<(Vec<f64>, Vec<f64>)> {
        let omega = RegularSubdomain::new(&self.inner, a, b).map_err(err)?;
        let s = solve_riquier(&self.inner, &omega, f, g).map_err(err)?;
        let u = xs.iter().map(|&x| s.u(x)).collect::<Result<Vec<_>, _>>().map_err(err)?;
        let v = xs.iter().map(|&x| s.v(x)).collect();
        Ok((u, v))
    }

    /// Endpoint weights `{"mu", "nu", "lambda"}` of the biharmonic measures
    /// of `[a, b]` at `x`.
    fn measures<'py>(&self, py: Python<'py>, a: f64, b: f64, x: f64) -> PyResult<Bound<'py, PyDict>> {
        let omega = RegularSubdomain::new(&self.inner, a, b).map_err(err)?;
        let t = biharmonic_measures(&self.inner, &omega, x).map_err(err)?;
        let d = PyDict::new(py);
        d.set_item("mu", t.mu.to_vec())?;
        d.set_item("nu", t.nu.to_vec())?;
        d.set_item("lambda", t.lambda.to_vec())?;
        Ok(d)
    }

    fn __repr__(&self) -> String {
        format!("LineModel({})", self.inner.id)
    }
}

/// The Newtonian kernel `c_N |x - y|^{2-N}` on ℝᴺ, `N >= 5`.
#[pyclass(name = "NewtonianModel", frozen)]
struct PyNewtonianModel {
    inner: NewtonianModel,
}

#[pymethods]
impl PyNewtonianModel {
    #[new]
    fn new(dim: u32) -> PyResult<Self> {
        Ok(PyNewtonianModel {
            inner: NewtonianModel::new(dim).map_err(err)?,
        })
    }

    #[getter]
    fn dim(&self) -> u32 {
        self.inner.dim
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    /// `G` at distance `r` (`inf` at `0`).
    fn kernel(&self, r: f64) -> f64 {
        self.inner.at_distance(r)
    }

    /// `H` at distance `d` by quadrature.
    #[pyo3(signature = (d, tol = 1e-8))]
    fn h(&self, d: f64, tol: f64) -> PyResult<PyExtendedValue> {
        self.inner.compose_at_distance(d, tol).map(Into::into).map_err(err)
    }

    fn h_closed_form(&self, d: f64) -> f64 {
        self.inner.compose_closed_form(d)
    }

    fn gauss_flux(&self, r: f64) -> PyResult<f64> {
        self.inner.gauss_flux(r).map_err(err)
    }

    /// Estimated tail exponent of the divergent integral `V 1`.
    fn constant_coupling_exponent(&self) -> PyResult<f64> {
        Ok(self
            .inner
            .constant_coupling_divergence()
            .map_err(err)?
            .estimated_exponent)
    }

    fn __repr__(&self) -> String {
        format!("NewtonianModel({})", self.inner.dim)
    }
}

/// Runs a named suite and returns `(id, value, tolerance, passed)` tuples.
#[pyfunction]
#[pyo3(signature = (suite, tol_quad = 1e-8, tol_identity = 1e-6, tol_fd = 1e-3))]
fn verify(
    py: Python<'_>,
    suite: &str,
    tol_quad: f64,
    tol_identity: f64,
    tol_fd: f64,
) -> PyResult<Vec<(String, f64, f64, bool)>> {
    let suite: Suite = suite.parse().map_err(err)?;
    let tol = Tolerances {
        quad: tol_quad,
        identity: tol_identity,
        fd: tol_fd,
    };
    let checks = py.detach(|| run_suite(suite, &tol));
    Ok(checks
        .into_iter()
        .map(|c| (c.id, c.value, c.tolerance, c.passed))
        .collect())
}

/// Minimum of `ln(x)/x + x/2 + a + b/x` over the probes.
#[pyfunction]
fn pure_obstruction(a: f64, b: f64, probes: Vec<f64>) -> PyResult<f64> {
    interval::pure_obstruction(a, b, &probes).map_err(err)
}

#[pymodule]
fn biharm_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BiharmError", m.py().get_type::<BiharmError>())?;
    m.add_class::<PyExtendedValue>()?;
    m.add_class::<PyLineModel>()?;
    m.add_class::<PyNewtonianModel>()?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(pure_obstruction, m)?)?;
    Ok(())
}
