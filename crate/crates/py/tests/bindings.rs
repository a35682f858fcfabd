use pyo3::prelude::*;
use pyo3::types::PyDict;

fn with_module<F: FnOnce(Python<'_>, &Bound<'_, PyDict>)>(f: F) {
    Python::attach(|py| {
        let m = PyModule::new(py, "lcverify_py").unwrap();
        lcverify_py::lcverify_py(&m).unwrap();
        let globals = PyDict::new(py);
        globals.set_item("lc", m).unwrap();
        f(py, &globals);
    });
}

fn eval<'py>(py: Python<'py>, globals: &Bound<'py, PyDict>, expr: &str) -> Bound<'py, PyAny> {
    let code = std::ffi::CString::new(expr).unwrap();
    py.eval(&code, Some(globals), None)
        .unwrap_or_else(|e| panic!("{expr}: {e}"))
}

#[test]
fn exact_pmf_round_trip() {
    with_module(|py, g| {
        assert!(eval(
            py,
            g,
            "lc.Pmf(['1/4', '1/2', '1/4'], exact=True).is_log_concave()"
        )
        .extract::<bool>()
        .unwrap());
        let var = eval(
            py,
            g,
            "str(lc.Pmf(['1/4', '1/2', '1/4'], exact=True).variance())",
        );
        assert_eq!(var.extract::<String>().unwrap(), "1/2");
        let ratio = eval(
            py,
            g,
            "lc.verify_min_entropy(lc.geometric(0.5))['details']['ratio']",
        );
        assert!((ratio.extract::<f64>().unwrap() - 0.75).abs() < 1e-6);
    });
}

#[test]
fn dof_and_cover() {
    with_module(|py, g| {
        assert_eq!(
            eval(py, g, "lc.degree_of_freedom([3, 2, '4/3', 2])")
                .extract::<usize>()
                .unwrap(),
            4
        );
        let cover = eval(py, g, "[(str(s), str(c), lo, hi) for s, c, lo, hi in lc.minimal_affine_cover([3, 2, '4/3', 2])]");
        let cover: Vec<(String, String, i64, i64)> = cover.extract().unwrap();
        assert_eq!(
            cover,
            vec![
                ("-1".into(), "3".into(), 0, 1),
                ("2/3".into(), "0".into(), 2, 3)
            ]
        );
    });
}

#[test]
fn exact_reduction_and_errors() {
    with_module(|py, g| {
        let r = eval(py, g, "lc.verify_e4('5/3', 500, 9, 1)");
        assert!(r.get_item("pass").unwrap().extract::<bool>().unwrap());
        let weakened = eval(
            py,
            g,
            "str(lc.verify_e4('5/3', 500, 9, 1)['details']['weakened'])",
        );
        assert_eq!(
            weakened.extract::<String>().unwrap(),
            "-25120067916073366567/476837158203125000000"
        );
        let code = std::ffi::CString::new("lc.verify_e5(1, 1, 0, 1)").unwrap();
        let e = py.eval(&code, Some(g), None).unwrap_err();
        assert!(e.is_instance_of::<pyo3::exceptions::PyValueError>(py));
    });
}
