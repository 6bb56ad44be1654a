//! Python bindings for the invariant-ring depth machinery.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use invdepth::depth;
use invdepth::invariants;
use invdepth::linalg::MatFp;
use invdepth::matgroup::{fixed_subspace, MatrixGroup, Subspace, DEFAULT_ORDER_CAP};
use invdepth::report::{run_scenario, RunOptions};
use invdepth::scenario::Scenario;
use invdepth::theorems;

fn err(e: invdepth::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite subgroup of GL_n(F_p) given by generator matrices.
#[pyclass]
struct Group {
    inner: MatrixGroup,
}

#[pymethods]
impl Group {
    /// Group(p, n, generators) with each generator a row-major flat list of
    /// n*n integers.
    #[new]
    fn new(p: u32, n: usize, generators: Vec<Vec<u32>>) -> PyResult<Self> {
        let gens: Vec<MatFp> = generators
            .iter()
            .map(|flat| {
                if flat.len() != n * n {
                    return Err(PyValueError::new_err(format!(
                        "generator has {} entries, expected {}",
                        flat.len(),
                        n * n
                    )));
                }
                let rows = flat
                    .chunks(n)
                    .map(|r| r.iter().map(|&x| x % p).collect())
                    .collect();
                Ok(MatFp::from_rows(p, rows))
            })
            .collect::<PyResult<_>>()?;
        let inner = MatrixGroup::enumerate(p, n, gens, DEFAULT_ORDER_CAP).map_err(err)?;
        Ok(Group { inner })
    }

    fn order(&self) -> usize {
        self.inner.order()
    }

    fn sylow_order(&self) -> usize {
        self.inner.sylow_subgroup().order()
    }

    fn fixed_subspace_dim(&self) -> usize {
        let sylow = self.inner.sylow_subgroup();
        fixed_subspace(self.inner.p(), self.inner.n(), sylow.elements()).dim()
    }

    /// Dimensions of the invariant ring's graded pieces, degrees 0..=cutoff.
    fn hilbert(&self, cutoff: u32) -> PyResult<Vec<usize>> {
        let basis = invariants::invariant_basis_up_to(&self.inner, cutoff).map_err(err)?;
        Ok((0..=cutoff).map(|d| basis.dim(d)).collect())
    }

    fn minimal_generator_degrees(&self, cutoff: u32) -> PyResult<Vec<u32>> {
        let basis = invariants::invariant_basis_up_to(&self.inner, cutoff).map_err(err)?;
        let gens = invariants::minimal_generators_of(&basis).map_err(err)?;
        Ok(gens.iter().map(|(d, _)| *d).collect())
    }

    /// Depth report as a dict-compatible JSON string.
    fn depth_report(&self, cutoff: u32, seed: u64) -> PyResult<String> {
        let r = depth::depth_report(&self.inner, cutoff, seed).map_err(err)?;
        serde_json::to_string(&r).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn depth(&self, cutoff: u32, seed: u64) -> PyResult<usize> {
        Ok(depth::depth_report(&self.inner, cutoff, seed)
            .map_err(err)?
            .depth)
    }

    fn duflot_bound(&self, cutoff: u32, seed: u64) -> PyResult<String> {
        let v = theorems::duflot_bound_check(&self.inner, cutoff, seed).map_err(err)?;
        serde_json::to_string(&v).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn carlson_detection(&self, s: usize, cutoff: u32) -> PyResult<bool> {
        let v = theorems::carlson_detection_check(&self.inner, s, cutoff).map_err(err)?;
        Ok(v.passed())
    }

    fn comodule_identities(&self, cutoff: u32) -> PyResult<bool> {
        let v = theorems::comodule_identities_check(&self.inner, cutoff).map_err(err)?;
        Ok(v.passed())
    }

    fn stabilizer_order(&self, subspace_rows: Vec<Vec<u32>>) -> usize {
        let u = Subspace::from_spanning(self.inner.p(), self.inner.n(), subspace_rows);
        self.inner.pointwise_stabilizer(&u).order()
    }
}

/// Dickson invariants of F[V]^{GL_n(F_p)} as display strings with their
/// degrees.
#[pyfunction]
fn dickson(p: u32, n: usize) -> PyResult<Vec<(u32, String)>> {
    let ds = invariants::dickson_invariants(p, n).map_err(err)?;
    Ok(ds
        .iter()
        .map(|f| (f.degree().unwrap(), f.to_string()))
        .collect())
}

/// Run a scenario given as TOML text; returns the JSON report.
#[pyfunction]
#[pyo3(signature = (toml_text, cutoff=None, seed=None))]
fn run(toml_text: &str, cutoff: Option<u32>, seed: Option<u64>) -> PyResult<String> {
    let scenario = Scenario::from_str(toml_text).map_err(err)?;
    let opts = RunOptions {
        cutoff,
        seed,
        ..Default::default()
    };
    let report = run_scenario(&scenario, &opts).map_err(err)?;
    Ok(report.to_json())
}

#[pymodule]
fn invdepth_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Group>()?;
    m.add_function(wrap_pyfunction!(dickson, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
