//! Drives the module through an embedded interpreter.

use std::ffi::CString;

use pyo3::prelude::*;
use pyo3::types::PyDict;

fn run(script: &str) {
    Python::with_gil(|py| {
        let module = pyo3::wrap_pymodule!(qdiv_py::qdiv_py)(py);
        let globals = PyDict::new(py);
        globals.set_item("qdiv", module).unwrap();
        let code = CString::new(script).unwrap();
        if let Err(e) = py.run(&code, Some(&globals), None) {
            e.print(py);
            panic!("script failed");
        }
    });
}

#[test]
fn divergences_and_infinity() {
    run(r#"
import math
pure = [[1, 0], [0, 0]]
mixed = [[0.5, 0], [0, 0.5]]
assert abs(qdiv.umegaki(pure, mixed) - math.log(2)) < 1e-14
assert qdiv.sandwiched(mixed, pure, 2.0) == math.inf
assert abs(qdiv.sandwiched(mixed, mixed, 2.0)) < 1e-14
d = qdiv.Divergence("sandwiched", alpha=3.0)
assert d.tag == "sandwiched" and d.alpha == 3.0
assert abs(d(mixed, mixed)) < 1e-14
assert abs(qdiv.f_divergence(pure, mixed, "power:2") - 2.0) < 1e-14
assert abs(qdiv.d_fg(mixed, mixed, alpha=2.0) - 1.0) < 1e-14
"#);
}

#[test]
fn invalid_input_raises_value_error() {
    run(r#"
for call in (
    lambda: qdiv.umegaki([[2, 0], [0, 0]], [[1, 0], [0, 0]]),
    lambda: qdiv.Divergence("renyi"),
    lambda: qdiv.Divergence("nosuch"),
    lambda: qdiv.random_density(2, rank=3),
    lambda: qdiv.sandwiched([[1, 0], [0, 0]], [[1, 0, 0]], 2.0),
):
    try:
        call()
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")
"#);
}

#[test]
fn sampling_is_seeded() {
    run(r#"
assert qdiv.haar_unitary(3, seed=4) == qdiv.haar_unitary(3, seed=4)
assert qdiv.haar_unitary(3, seed=4) != qdiv.haar_unitary(3, seed=5)
g = qdiv.ginibre(2, seed=42)
assert g[0][0] == complex(0.6238441842841808, 0.9817988755233016)
rho = qdiv.random_density(3, rank=1, seed=2)
assert abs(sum(rho[i][i] for i in range(3)) - 1) < 1e-12
"#);
}

#[test]
fn reconstruction_and_suites() {
    run(r#"
u = qdiv.haar_unitary(3, seed=1)
for anti in (False, True):
    images = qdiv.wigner_images(u, antiunitary=anti)
    v, kind, residual = qdiv.wigner_reconstruct(images)
    assert kind == ("antiunitary" if anti else "unitary")
    assert residual < 1e-8
    r = qdiv.check_invariance(v, qdiv.Divergence("sandwiched", alpha=2.0), antiunitary=anti, samples=30)
    assert r["passed"] and r["witness_index"] is None
t, s, lhs, rhs, gap = qdiv.prop1_refutation(2.0)
assert gap > 1e-3
scalar, gap = qdiv.thm4_scalar_test([[1, 0], [0, 2]], 2.0)
assert not scalar and abs(gap - 0.2197265625) < 1e-12
"#);
}
