//! Python bindings: Beltrami data, extremal maps, Poisson series, traces and the verify suite.

use harmdisk::geometry::{self, CurveReport};
use harmdisk::poisson::{self, perimeter_of_family};
use harmdisk::{
    BoundaryFamily, BoundaryFunction, DiskSelfMap, Error, ExtremalSpec as CoreSpec,
    HarmonicSeries as CoreSeries, PlanarMap, PolarGrid, ShiftConvention,
};
use num_complex::Complex64;
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use serde::Serialize;

fn to_py(e: Error) -> PyErr {
    let msg = format!("{}: {e}", e.code());
    match e {
        Error::Io(_) => PyOSError::new_err(msg),
        Error::NonConvergence { .. } | Error::InequalityViolated { .. } => PyRuntimeError::new_err(msg),
        _ => PyValueError::new_err(msg),
    }
}

/// Round-trips a serializable value through JSON into Python objects.
fn to_object<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Holomorphic self-map of the disk, built from its text form (e.g. `"mono:2"`).
#[pyclass(name = "DiskSelfMap", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyDiskSelfMap(DiskSelfMap);

#[pymethods]
impl PyDiskSelfMap {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        let mu: DiskSelfMap = text.parse().map_err(to_py)?;
        mu.check_params().map_err(to_py)?;
        Ok(PyDiskSelfMap(mu))
    }

    fn eval(&self, z: Complex64) -> Complex64 {
        self.0.eval(z)
    }

    #[pyo3(signature = (count = 4096))]
    fn sup_norm(&self, count: usize) -> f64 {
        harmdisk::diskmaps::sup_norm_estimate(&self.0, count)
    }

    fn is_inner(&self) -> bool {
        self.0.is_inner()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("DiskSelfMap({:?})", self.0.to_string())
    }
}

/// Extremal harmonic map with Beltrami datum `mu`, perimeter `2 pi R`, equality point `a`.
#[pyclass(name = "ExtremalSpec", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyExtremalSpec(CoreSpec);

#[pymethods]
impl PyExtremalSpec {
    #[new]
    #[pyo3(signature = (mu, R = 1.0, a = Complex64::new(0.0, 0.0), theta = 0.0, convention = "forward"))]
    #[allow(non_snake_case)]
    fn new(mu: &Bound<'_, PyAny>, R: f64, a: Complex64, theta: f64, convention: &str) -> PyResult<Self> {
        let mu = match mu.cast::<PyDiskSelfMap>() {
            Ok(m) => m.get().0.clone(),
            Err(_) => PyDiskSelfMap::new(&mu.extract::<String>()?)?.0,
        };
        let convention = match convention {
            "forward" => ShiftConvention::Forward,
            "pullback" => ShiftConvention::Pullback,
            other => return Err(PyValueError::new_err(format!("unknown convention {other:?}"))),
        };
        let spec = CoreSpec::new(mu, R, a, theta).map_err(to_py)?.with_convention(convention);
        Ok(PyExtremalSpec(spec))
    }

    #[getter]
    fn mu(&self) -> PyDiskSelfMap {
        PyDiskSelfMap(self.0.mu().clone())
    }

    #[getter]
    fn equality_point(&self) -> Complex64 {
        self.0.equality_point()
    }

    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.eval_shifted(z).map_err(to_py)
    }

    fn eval_normalized(&self, z: Complex64) -> PyResult<Complex64> {
        self.0.eval_normalized(z).map_err(to_py)
    }

    /// `(f_z, f_zbar)` in closed form.
    fn derivatives(&self, z: Complex64) -> (Complex64, Complex64) {
        self.0.shifted_derivatives(z)
    }

    fn jet<'py>(&self, py: Python<'py>, z: Complex64) -> PyResult<Bound<'py, PyAny>> {
        to_object(py, &self.0.jet_at(z).map_err(to_py)?)
    }

    fn margin(&self, z: Complex64) -> f64 {
        self.0.schwarz_pick_margin(z)
    }

    fn beltrami_residual(&self, z: Complex64) -> f64 {
        self.0.beltrami_residual(z)
    }

    fn margin_field(&self, points: Vec<Complex64>) -> Vec<f64> {
        self.0.margin_field(&points)
    }

    #[pyo3(signature = (points = None))]
    fn bilipschitz<'py>(&self, py: Python<'py>, points: Option<Vec<Complex64>>) -> PyResult<Bound<'py, PyAny>> {
        let pts = points.unwrap_or_else(|| PolarGrid::default().points());
        to_object(py, &self.0.bilipschitz_report(&pts).map_err(to_py)?)
    }

    #[pyo3(signature = (points = None))]
    fn dnorm<'py>(&self, py: Python<'py>, points: Option<Vec<Complex64>>) -> PyResult<Bound<'py, PyAny>> {
        let pts = points.unwrap_or_else(|| PolarGrid::default().points());
        to_object(py, &self.0.dnorm_report(&pts).map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        format!("ExtremalSpec({:?})", self.0.source_id())
    }
}

/// Poisson extension of sampled boundary data.
#[pyclass(name = "HarmonicSeries", frozen)]
struct PyHarmonicSeries {
    series: CoreSeries,
    /// Length of the boundary curve.
    perimeter: f64,
}

#[pymethods]
impl PyHarmonicSeries {
    /// `text` is `circle`, `ellipse:b`, `polygonal:k`, `twist:eps` or `samples:path.csv`.
    #[staticmethod]
    #[pyo3(signature = (text, n = None))]
    fn from_boundary(text: &str, n: Option<usize>) -> PyResult<Self> {
        let family: BoundaryFamily = text.parse().map_err(to_py)?;
        let b = BoundaryFunction::from_family(&family, n.unwrap_or_else(|| family.default_count()))
            .map_err(to_py)?;
        Ok(PyHarmonicSeries {
            series: poisson::poisson_extend(&b).map_err(to_py)?,
            perimeter: perimeter_of_family(&family).map_err(to_py)?,
        })
    }

    /// Series through the given uniform boundary samples; the perimeter is their chord length.
    #[staticmethod]
    fn from_samples(samples: Vec<Complex64>) -> PyResult<Self> {
        let b = BoundaryFunction::from_samples(samples, "python samples").map_err(to_py)?;
        Ok(PyHarmonicSeries {
            series: poisson::poisson_extend(&b).map_err(to_py)?,
            perimeter: poisson::perimeter_of_boundary(&b),
        })
    }

    #[getter]
    fn perimeter(&self) -> f64 {
        self.perimeter
    }

    /// `R = perimeter / 2 pi`.
    #[getter]
    #[allow(non_snake_case)]
    fn R(&self) -> f64 {
        self.perimeter / (2.0 * std::f64::consts::PI)
    }

    /// `[(k, c_k)]` for `k = -N/2 .. N/2 - 1`.
    fn coefficients(&self) -> Vec<(i64, Complex64)> {
        self.series.coefficients().iter().collect()
    }

    fn eval(&self, z: Complex64) -> PyResult<Complex64> {
        self.series.eval(z).map_err(to_py)
    }

    fn derivatives(&self, z: Complex64) -> PyResult<(Complex64, Complex64)> {
        self.series.derivatives(z).map_err(to_py)
    }

    fn jet<'py>(&self, py: Python<'py>, z: Complex64) -> PyResult<Bound<'py, PyAny>> {
        to_object(py, &self.series.series_jet(z).map_err(to_py)?)
    }

    fn __repr__(&self) -> String {
        format!("HarmonicSeries({:?}, N={})", self.series.source(), self.series.coefficients().len())
    }
}

/// Runs `f` with the Rust map behind a Python `ExtremalSpec` or `HarmonicSeries`.
fn with_map<T>(obj: &Bound<'_, PyAny>, f: impl FnOnce(&dyn PlanarMap) -> PyResult<T>) -> PyResult<T> {
    if let Ok(spec) = obj.cast::<PyExtremalSpec>() {
        return f(&spec.get().0);
    }
    if let Ok(series) = obj.cast::<PyHarmonicSeries>() {
        return f(&series.get().series);
    }
    Err(PyValueError::new_err("expected ExtremalSpec or HarmonicSeries"))
}

fn default_radius(obj: &Bound<'_, PyAny>) -> PyResult<f64> {
    if let Ok(spec) = obj.cast::<PyExtremalSpec>() {
        return Ok(spec.get().0.perimeter_radius());
    }
    Ok(obj.cast::<PyHarmonicSeries>()?.get().R())
}

/// Polar grid points (origin first).
#[pyfunction]
#[pyo3(signature = (n_radii = 24, r_max = 0.95, angles = 128))]
fn polar_grid(n_radii: usize, r_max: f64, angles: usize) -> PyResult<Vec<Complex64>> {
    Ok(PolarGrid::chebyshev(n_radii, r_max, angles).map_err(to_py)?.points())
}

/// Image of the circle `|z| = r` sampled at `count` points.
#[pyfunction]
#[pyo3(signature = (map, r = 0.999, count = 8192))]
fn trace(map: &Bound<'_, PyAny>, r: f64, count: usize) -> PyResult<Vec<Complex64>> {
    with_map(map, |m| Ok(geometry::trace(m, r, count).map_err(to_py)?.points))
}

/// Perimeter, area, convexity, distance to the origin and turning number of a trace.
#[pyfunction]
#[pyo3(signature = (map, r = 0.999, count = 8192))]
fn curve_report<'py>(py: Python<'py>, map: &Bound<'py, PyAny>, r: f64, count: usize) -> PyResult<Bound<'py, PyAny>> {
    let rep = with_map(map, |m| {
        CurveReport::of(&geometry::trace(m, r, count).map_err(to_py)?).map_err(to_py)
    })?;
    to_object(py, &rep)
}

/// Margin scan `|f_z| (1 - |z|^2) / R`; `R` defaults to the map's own perimeter radius.
#[pyfunction]
#[pyo3(signature = (map, points = None, R = None))]
#[allow(non_snake_case)]
fn sp_scan<'py>(
    py: Python<'py>,
    map: &Bound<'py, PyAny>,
    points: Option<Vec<Complex64>>,
    R: Option<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let pts = points.unwrap_or_else(|| PolarGrid::default().points());
    let r = match R {
        Some(r) => r,
        None => default_radius(map)?,
    };
    let scan = with_map(map, |m| poisson::sp_scan(m, r, &pts).map_err(to_py))?;
    to_object(py, &scan)
}

/// Circle means of `|f_z - f_zbar conj(z)^2|` at increasing radii in `(0, 1)`.
#[pyfunction]
fn circle_average_profile(map: &Bound<'_, PyAny>, radii: Vec<f64>) -> PyResult<Vec<f64>> {
    with_map(map, |m| poisson::circle_average_profile(m, &radii).map_err(to_py))
}

/// Area of the image for polynomial `h` (Taylor coefficients): reference formula, oracle, derived.
#[pyfunction]
#[pyo3(signature = (hcoeffs, R = 1.0))]
#[allow(non_snake_case)]
fn area_series_check<'py>(py: Python<'py>, hcoeffs: Vec<Complex64>, R: f64) -> PyResult<Bound<'py, PyAny>> {
    to_object(py, &geometry::area_series_check(&hcoeffs, R).map_err(to_py)?)
}

/// Full invariant suite; returns the report as a dict.
#[pyfunction]
fn verify(py: Python<'_>) -> PyResult<Bound<'_, PyAny>> {
    let report = py.detach(harmdisk::verify::run_verify);
    to_object(py, &report)
}

#[pymodule]
pub fn harmdisk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDiskSelfMap>()?;
    m.add_class::<PyExtremalSpec>()?;
    m.add_class::<PyHarmonicSeries>()?;
    m.add_function(wrap_pyfunction!(polar_grid, m)?)?;
    m.add_function(wrap_pyfunction!(trace, m)?)?;
    m.add_function(wrap_pyfunction!(curve_report, m)?)?;
    m.add_function(wrap_pyfunction!(sp_scan, m)?)?;
    m.add_function(wrap_pyfunction!(circle_average_profile, m)?)?;
    m.add_function(wrap_pyfunction!(area_series_check, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
