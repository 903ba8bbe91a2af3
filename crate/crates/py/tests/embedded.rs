use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(code: &str) {
    pyo3::append_to_inittab!(lqw);
    Python::initialize();
    Python::attach(|py| {
        let globals = PyDict::new(py);
        let code = std::ffi::CString::new(code).unwrap();
        py.run(&code, Some(&globals), None)
            .inspect_err(|e| e.print(py))
            .unwrap();
    });
}

use lqw::lqw;

#[test]
fn module_round_trip() {
    run(r#"
import lqw
p = lqw.WalkParams(8, 2)
assert abs(p.probabilities(3)[0] - 1.0) < 1e-9
assert p.steps_to_max("floor") == (p.steps_to_max()[0], 3)
w = lqw.WeightWindow.centered(4, 1.0)
assert w.solutions(jobs=2) == [94451, 95036, 122051, 122636, 146437, 161797, 180592, 184672]
r = lqw.train(seed=1)
assert r["n"] == 512 and r["k"] >= 1
try:
    lqw.WeightWindow(0, 0.5, [0] * 9)
    raise AssertionError("z = 0 accepted")
except ValueError:
    pass
"#);
}
