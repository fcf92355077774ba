use harmdisk_py::harmdisk_py as module;
use pyo3::prelude::*;
use pyo3::types::PyDict;

#[test]
fn module_round_trip_through_the_interpreter() {
    pyo3::append_to_inittab!(module);
    Python::initialize();
    Python::attach(|py| {
        let locals = PyDict::new(py);
        py.run(
            cr#"
import harmdisk_py as hd
spec = hd.ExtremalSpec("mono:2", a=0.5)
margin = spec.margin(spec.equality_point)
series = hd.HarmonicSeries.from_boundary("circle", 64)
coeff = dict(series.coefficients())[1]
report = hd.curve_report(hd.ExtremalSpec("zero"), r=0.5, count=64)
try:
    hd.ExtremalSpec("mono:0")
    raised = False
except ValueError:
    raised = True
"#,
            None,
            Some(&locals),
        )
        .unwrap();
        let get = |name: &str| locals.get_item(name).unwrap().unwrap();
        assert!((get("margin").extract::<f64>().unwrap() - 1.0).abs() < 1e-12);
        let coeff: num_complex::Complex64 = get("coeff").extract().unwrap();
        assert!((coeff - 1.0).norm() < 1e-14);
        let perimeter: f64 = get("report").get_item("perimeter").unwrap().extract().unwrap();
        assert!((perimeter - std::f64::consts::PI).abs() < 1e-2);
        assert!(get("raised").extract::<bool>().unwrap());
    });
}
