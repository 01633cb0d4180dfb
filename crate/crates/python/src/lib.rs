use std::collections::BTreeMap;

use nakayama_bimod::birep::{self, FinitaryBirep, LocalizationSpec};
use nakayama_bimod::cells::compute_cells;
use nakayama_bimod::{construct, Catalog, Error, ExactMatrix, StringLabel};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn py_err(e: Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Action and Cartan matrices are integral.
fn rows(m: &ExactMatrix) -> Vec<Vec<i64>> {
    m.to_i64_rows().expect("integral matrix")
}

#[pyclass(name = "Bimodule", frozen)]
struct PyBimodule {
    inner: nakayama_bimod::Bimodule,
}

#[pymethods]
impl PyBimodule {
    /// Build a catalog bimodule from a label such as `"N:1|2:k=1"`.
    #[staticmethod]
    fn construct(label: &str, n: usize) -> PyResult<Self> {
        let l = StringLabel::parse(label, n).map_err(py_err)?;
        Ok(PyBimodule { inner: construct(&l, n).map_err(py_err)? })
    }

    #[staticmethod]
    fn regular(n: usize) -> PyResult<Self> {
        Ok(PyBimodule { inner: nakayama_bimod::Bimodule::regular(n).map_err(py_err)? })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let inner = serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyBimodule { inner })
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("serializable")
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.total_dim()
    }

    /// Nonzero dimensions keyed by vertex `"i|j"`.
    fn dims(&self) -> BTreeMap<String, usize> {
        self.inner.vertices().filter(|&v| self.inner.dim_at(v) > 0).map(|v| (v.to_string(), self.inner.dim_at(v))).collect()
    }

    fn satisfies_relations(&self) -> bool {
        self.inner.satisfies_relations()
    }

    fn tensor(&self, other: &PyBimodule) -> PyResult<PyBimodule> {
        Ok(PyBimodule { inner: nakayama_bimod::tensor(&self.inner, &other.inner).map_err(py_err)? })
    }

    fn __matmul__(&self, other: &PyBimodule) -> PyResult<PyBimodule> {
        self.tensor(other)
    }

    /// Multiplicities of catalog summands, plus the dimension of anything left over.
    #[pyo3(signature = (max_valleys = 2))]
    fn decompose(&self, max_valleys: usize) -> PyResult<(BTreeMap<String, usize>, usize)> {
        let report = nakayama_bimod::decompose(&self.inner, max_valleys).map_err(py_err)?;
        let parts = report.multiset().into_iter().map(|(l, m)| (l.to_string(), m)).collect();
        Ok((parts, report.residual_dim()))
    }

    fn is_isomorphic(&self, other: &PyBimodule) -> PyResult<bool> {
        nakayama_bimod::bimodule::is_isomorphic(&self.inner, &other.inner).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("Bimodule(n={}, dim={})", self.inner.n, self.inner.total_dim())
    }
}

#[pyclass(name = "Birep", frozen)]
struct PyBirep {
    inner: FinitaryBirep,
}

#[pymethods]
impl PyBirep {
    #[getter]
    fn rank(&self) -> usize {
        self.inner.rank()
    }

    #[getter]
    fn objects(&self) -> Vec<String> {
        self.inner.objects.iter().map(|o| o.to_string()).collect()
    }

    #[getter]
    fn contracted(&self) -> Vec<usize> {
        self.inner.contracted.clone()
    }

    fn generators(&self) -> Vec<String> {
        self.inner.actions.iter().map(|a| a.label.to_string()).collect()
    }

    fn action_matrix(&self, label: &str) -> PyResult<Vec<Vec<i64>>> {
        let l = StringLabel::parse(label, self.inner.n).map_err(py_err)?;
        Ok(rows(&self.inner.action_matrix(&l).map_err(py_err)?))
    }

    fn f_matrix(&self) -> Vec<Vec<i64>> {
        rows(&self.inner.f_matrix())
    }

    fn cartan(&self) -> Vec<Vec<i64>> {
        rows(&self.inner.cartan())
    }

    fn localize(&self, contract: Vec<usize>) -> PyResult<PyBirep> {
        let inner = self.inner.localize(&LocalizationSpec::new(contract)).map_err(py_err)?;
        Ok(PyBirep { inner })
    }

    fn is_transitive(&self) -> bool {
        self.inner.is_transitive()
    }

    fn is_simple_transitive(&self) -> bool {
        self.inner.is_simple_transitive()
    }

    fn fingerprint(&self) -> Vec<usize> {
        self.inner.fingerprint()
    }

    /// Failed checks of the block structure and adjunction constraints.
    fn verify(&self) -> Vec<String> {
        let mut out = birep::verify_block_structure(&self.inner).failures;
        out.extend(birep::verify_adjunction_consequences(&self.inner).failures);
        out
    }

    fn __repr__(&self) -> String {
        format!("Birep(n={}, k={}, rank={})", self.inner.n, self.inner.k, self.inner.rank())
    }
}

#[pyfunction]
#[pyo3(signature = (n, k, j = 1))]
fn cell_birep(n: usize, k: usize, j: usize) -> PyResult<PyBirep> {
    Ok(PyBirep { inner: birep::cell_birep(n, k, j).map_err(py_err)? })
}

/// `(entries, counts)` with entries `(I, rank, simple_transitive, fingerprint)`.
#[pyfunction]
#[allow(clippy::type_complexity)]
fn classify(n: usize, k: usize) -> PyResult<(Vec<(Vec<usize>, usize, bool, Vec<usize>)>, BTreeMap<usize, usize>)> {
    let r = birep::classify(n, k).map_err(py_err)?;
    let entries = r.entries.into_iter().map(|e| (e.contract, e.rank, e.simple_transitive, e.fingerprint)).collect();
    Ok((entries, r.counts))
}

#[pyfunction]
#[pyo3(signature = (n, max_valleys = 1))]
fn catalog(n: usize, max_valleys: usize) -> PyResult<Vec<(String, usize)>> {
    let c = Catalog::new(n, max_valleys).map_err(py_err)?;
    Ok(c.labels().map(|l| (l.to_string(), l.dim())).collect())
}

/// Two-sided cells from the greatest down, if they form a chain.
#[pyfunction]
#[pyo3(signature = (n, max_valleys = 2))]
fn cell_chain(n: usize, max_valleys: usize) -> PyResult<Option<Vec<String>>> {
    let cells = compute_cells(n, max_valleys).map_err(py_err)?;
    Ok(cells.chain().map(|c| c.iter().filter_map(|&x| cells.tag(x)).map(|t| t.to_string()).collect()))
}

#[pymodule]
fn pynakayama(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBimodule>()?;
    m.add_class::<PyBirep>()?;
    m.add_function(wrap_pyfunction!(cell_birep, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(catalog, m)?)?;
    m.add_function(wrap_pyfunction!(cell_chain, m)?)?;
    Ok(())
}
