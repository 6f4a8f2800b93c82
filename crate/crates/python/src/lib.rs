//! Python bindings. Matrices cross the boundary as nested lists of complex
//! numbers (anything with `__complex__`, so real lists and NumPy arrays work),
//! and `+∞` comes back as `float("inf")`.

use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use qdiv_core::cli::registry;
use qdiv_core::divergence::{self as div, sandwiched_pair};
use qdiv_core::preserver::{self as pres, Thm4Verdict, WignerImages};
use qdiv_core::sampling;
use qdiv_core::{
    ComplexMatrix, DensityOperator, PositiveOperator, SeededRng, StateMap, SymmetryKind,
};

type Rows = Vec<Vec<Complex64>>;

fn err(e: qdiv_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Rows) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(&rows).map_err(err)
}

fn positive(rows: Rows) -> PyResult<PositiveOperator> {
    PositiveOperator::new(matrix(rows)?).map_err(err)
}

fn density(rows: Rows) -> PyResult<DensityOperator> {
    DensityOperator::new(matrix(rows)?).map_err(err)
}

fn kind(antiunitary: bool) -> SymmetryKind {
    if antiunitary {
        SymmetryKind::Antiunitary
    } else {
        SymmetryKind::Unitary
    }
}

/// A divergence chosen by tag: `umegaki`, `renyi`, `sandwiched`,
/// `sandwiched-core`, `fdiv` (needs `f`) or `dfg` (needs `f` and `g`).
/// Functions are registry names such as `power:2`, `xlogx`, `linear:1`, `frac`.
#[pyclass(name = "Divergence", frozen)]
struct PyDivergence {
    inner: div::Divergence,
}

#[pymethods]
impl PyDivergence {
    #[new]
    #[pyo3(signature = (tag, alpha=None, f=None, g=None))]
    fn new(tag: &str, alpha: Option<f64>, f: Option<&str>, g: Option<&str>) -> PyResult<Self> {
        let need_alpha = || {
            let a = alpha.ok_or_else(|| PyValueError::new_err(format!("{tag} needs alpha")))?;
            div::check_alpha(a).map_err(err)?;
            Ok::<f64, PyErr>(a)
        };
        let func = |name: Option<&str>, which: &str| {
            let name = name.ok_or_else(|| PyValueError::new_err(format!("{tag} needs {which}")))?;
            registry::lookup(name).map_err(err)
        };
        let inner = match tag {
            "umegaki" => div::Divergence::Umegaki,
            "renyi" => div::Divergence::Renyi {
                alpha: need_alpha()?,
            },
            "sandwiched" => div::Divergence::Sandwiched {
                alpha: need_alpha()?,
            },
            "sandwiched-core" => div::Divergence::SandwichedCore {
                alpha: need_alpha()?,
            },
            "fdiv" => div::Divergence::FDivergence { f: func(f, "f")? },
            "dfg" => div::Divergence::Dfg {
                f: func(f, "f")?,
                g: func(g, "g")?,
            },
            _ => return Err(PyValueError::new_err(format!("unknown divergence `{tag}`"))),
        };
        Ok(Self { inner })
    }

    #[getter]
    fn tag(&self) -> &'static str {
        self.inner.tag()
    }

    #[getter]
    fn alpha(&self) -> Option<f64> {
        self.inner.alpha()
    }

    fn __call__(&self, a: Rows, b: Rows) -> PyResult<f64> {
        Ok(self
            .inner
            .evaluate(&positive(a)?, &positive(b)?)
            .map_err(err)?
            .to_f64())
    }

    fn __repr__(&self) -> String {
        match self.inner.alpha() {
            Some(a) => format!("Divergence('{}', alpha={a})", self.inner.tag()),
            None => format!("Divergence('{}')", self.inner.tag()),
        }
    }
}

/// Umegaki relative entropy of two density matrices.
#[pyfunction]
fn umegaki(a: Rows, b: Rows) -> PyResult<f64> {
    Ok(div::umegaki(&density(a)?, &density(b)?)
        .map_err(err)?
        .to_f64())
}

/// Traditional Rényi divergence of two density matrices.
#[pyfunction]
fn renyi(a: Rows, b: Rows, alpha: f64) -> PyResult<f64> {
    Ok(div::renyi_traditional(&density(a)?, &density(b)?, alpha)
        .map_err(err)?
        .to_f64())
}

/// Sandwiched Rényi divergence of two positive matrices.
#[pyfunction]
fn sandwiched(a: Rows, b: Rows, alpha: f64) -> PyResult<f64> {
    Ok(div::sandwiched_renyi(&positive(a)?, &positive(b)?, alpha)
        .map_err(err)?
        .to_f64())
}

/// `tr (B^p A B^p)^α` with `p = (1 − α)/2α`.
#[pyfunction]
fn sandwiched_core(a: Rows, b: Rows, alpha: f64) -> PyResult<f64> {
    Ok(div::sandwiched_core(&positive(a)?, &positive(b)?, alpha)
        .map_err(err)?
        .to_f64())
}

/// Quantum f-divergence with `f` from the registry.
#[pyfunction]
fn f_divergence(a: Rows, b: Rows, f: &str) -> PyResult<f64> {
    let f = registry::lookup(f).map_err(err)?;
    Ok(div::f_divergence(&positive(a)?, &positive(b)?, &f)
        .map_err(err)?
        .to_f64())
}

/// `D'_{f,g}(A‖B)`; with `alpha` instead of `f`, `g` it uses the sandwiched pair.
#[pyfunction]
#[pyo3(signature = (a, b, f=None, g=None, alpha=None))]
fn d_fg(a: Rows, b: Rows, f: Option<&str>, g: Option<&str>, alpha: Option<f64>) -> PyResult<f64> {
    let (f, g) = match (f, g, alpha) {
        (Some(f), Some(g), None) => (
            registry::lookup(f).map_err(err)?,
            registry::lookup(g).map_err(err)?,
        ),
        (None, None, Some(alpha)) => sandwiched_pair(alpha).map_err(err)?,
        _ => return Err(PyValueError::new_err("give either f and g, or alpha")),
    };
    Ok(div::d_fg(&positive(a)?, &positive(b)?, &f, &g)
        .map_err(err)?
        .to_f64())
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn ginibre(n: usize, seed: u64) -> Rows {
    sampling::ginibre(n, &mut SeededRng::new(seed)).rows()
}

#[pyfunction]
#[pyo3(signature = (n, seed=0))]
fn haar_unitary(n: usize, seed: u64) -> Rows {
    sampling::haar_unitary(n, &mut SeededRng::new(seed)).rows()
}

#[pyfunction]
#[pyo3(signature = (n, rank=None, seed=0))]
fn random_density(n: usize, rank: Option<usize>, seed: u64) -> PyResult<Rows> {
    let d =
        sampling::random_density(n, rank.unwrap_or(n), &mut SeededRng::new(seed)).map_err(err)?;
    Ok(d.matrix().rows())
}

#[pyfunction]
#[pyo3(signature = (n, kappa=10.0, seed=0))]
fn random_positive_definite(n: usize, kappa: f64, seed: u64) -> PyResult<Rows> {
    let p = sampling::random_positive_definite(n, kappa, &mut SeededRng::new(seed)).map_err(err)?;
    Ok(p.matrix().rows())
}

/// Projection images of the reconstruction inputs under conjugation by `u`.
#[pyfunction]
#[pyo3(signature = (u, antiunitary=false))]
fn wigner_images(u: Rows, antiunitary: bool) -> PyResult<Vec<Rows>> {
    let map = StateMap::conjugation(kind(antiunitary), matrix(u)?).map_err(err)?;
    let images = WignerImages::from_map(&map).map_err(err)?;
    Ok(images.all().into_iter().map(|m| m.rows()).collect())
}

/// Recovers `(U, kind, residual)` from projection images in input order.
#[pyfunction]
fn wigner_reconstruct(images: Vec<Rows>) -> PyResult<(Rows, &'static str, f64)> {
    let list = images
        .into_iter()
        .map(matrix)
        .collect::<PyResult<Vec<_>>>()?;
    let images = WignerImages::from_list(list).map_err(err)?;
    let r = pres::wigner_reconstruct(&images).map_err(err)?;
    Ok((r.u.rows(), r.kind.as_str(), r.residual))
}

/// Compares a divergence before and after conjugation by `u` on seeded pairs.
#[pyfunction]
#[pyo3(signature = (u, divergence, antiunitary=false, samples=100, seed=0, tol=1e-9))]
fn check_invariance<'py>(
    py: Python<'py>,
    u: Rows,
    divergence: &PyDivergence,
    antiunitary: bool,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let map = StateMap::conjugation(kind(antiunitary), matrix(u)?).map_err(err)?;
    let r = pres::check_invariance(&map, &divergence.inner, samples, seed, tol).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("passed", r.passed())?;
    d.set_item("samples", r.samples)?;
    d.set_item("max_deviation", r.max_deviation)?;
    d.set_item("infinity_mismatches", r.infinity_mismatches)?;
    d.set_item("witness_index", r.witness.map(|w| w.index))?;
    Ok(d)
}

/// Grid witness `(t, s, lhs, rhs, gap)` that the Petz-type quantity is not an f-divergence.
#[pyfunction]
fn prop1_refutation(alpha: f64) -> PyResult<(f64, f64, f64, f64, f64)> {
    let w = pres::prop1_refutation(alpha).map_err(err)?;
    Ok((w.t, w.s, w.lhs, w.rhs, w.gap))
}

/// `(is_scalar, gap)` of the mean-product test on the spectrum of a definite `t`.
#[pyfunction]
fn thm4_scalar_test(t: Rows, alpha: f64) -> PyResult<(bool, f64)> {
    let r = pres::thm4_scalar_test(&positive(t)?, alpha).map_err(err)?;
    Ok((
        matches!(r.verdict, Thm4Verdict::ScalarMultipleOfIdentity),
        r.gap,
    ))
}

#[pymodule]
#[pyo3(name = "qdiv")]
pub fn qdiv_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDivergence>()?;
    m.add_function(wrap_pyfunction!(umegaki, m)?)?;
    m.add_function(wrap_pyfunction!(renyi, m)?)?;
    m.add_function(wrap_pyfunction!(sandwiched, m)?)?;
    m.add_function(wrap_pyfunction!(sandwiched_core, m)?)?;
    m.add_function(wrap_pyfunction!(f_divergence, m)?)?;
    m.add_function(wrap_pyfunction!(d_fg, m)?)?;
    m.add_function(wrap_pyfunction!(ginibre, m)?)?;
    m.add_function(wrap_pyfunction!(haar_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(random_density, m)?)?;
    m.add_function(wrap_pyfunction!(random_positive_definite, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_images, m)?)?;
    m.add_function(wrap_pyfunction!(wigner_reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(check_invariance, m)?)?;
    m.add_function(wrap_pyfunction!(prop1_refutation, m)?)?;
    m.add_function(wrap_pyfunction!(thm4_scalar_test, m)?)?;
    Ok(())
}
