//! Python bindings for the similarity-algebra kernel: the perturbed real
//! field and matrix group, structure audits, collapse verdicts, t-norms,
//! and the fuzzy embedding bound.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use simalg::collapse::{verify_collapse, EpsilonFamily, RateFit};
use simalg::instances::PerturbedRealField;
use simalg::liegroup::{BilinearPerturbation, Matrix, PerturbedMatrixGroup};
use simalg::sample::{Domain, SampleSet};
use simalg::structures::{audit, StructureKind};

fn err(e: simalg::Error) -> PyErr {
    match e {
        simalg::Error::Input(_) | simalg::Error::Domain(_) | simalg::Error::Config(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn to_matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("expected a square matrix as nested lists"));
    }
    let flat: Vec<f64> = rows.into_iter().flatten().collect();
    if flat.iter().any(|v| !v.is_finite()) {
        return Err(PyValueError::new_err("matrix entries must be finite"));
    }
    Ok(Matrix::from_row_slice(n, n, &flat))
}

fn from_matrix(m: &Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn parse_phi(name: &str) -> PyResult<BilinearPerturbation> {
    match name {
        "commutator" => Ok(BilinearPerturbation::Commutator),
        "traceless-product" => Ok(BilinearPerturbation::TracelessProduct),
        other => Err(PyValueError::new_err(format!("unknown perturbation `{other}`"))),
    }
}

/// The perturbed real field x (+) y = x + y + eps*xy,
/// x (*) y = xy + eps*x^2*y, with exact closed-form inverses.
#[pyclass]
struct PerturbedField {
    inner: PerturbedRealField,
}

#[pymethods]
impl PerturbedField {
    #[new]
    #[pyo3(signature = (eps, lo=-1.0, hi=1.0, exclusion_radius=None))]
    fn new(eps: f64, lo: f64, hi: f64, exclusion_radius: Option<f64>) -> PyResult<Self> {
        let mut inner = PerturbedRealField::new(eps, lo, hi).map_err(err)?;
        if let Some(r) = exclusion_radius {
            inner = inner.with_exclusion_radius(r);
        }
        Ok(PerturbedField { inner })
    }

    fn add(&self, x: f64, y: f64) -> f64 {
        self.inner.add(x, y)
    }

    fn mul(&self, x: f64, y: f64) -> f64 {
        self.inner.mul(x, y)
    }

    fn add_inverse(&self, x: f64) -> PyResult<f64> {
        self.inner.add_inverse(x).map_err(err)
    }

    fn mul_inverse(&self, x: f64) -> PyResult<f64> {
        self.inner.mul_inverse(x).map_err(err)
    }

    /// Audit the full field axiom catalog on seeded samples. Returns a dict
    /// with per-axiom max/mean defects, the certified tolerance, and the
    /// overall verdict at `bound` (default: the field's own eps).
    #[pyo3(signature = (seed, samples=4096, bound=None))]
    fn audit<'py>(
        &self,
        py: Python<'py>,
        seed: u64,
        samples: usize,
        bound: Option<f64>,
    ) -> PyResult<Bound<'py, PyDict>> {
        let mut desc = self.inner.as_structure(StructureKind::Field).map_err(err)?;
        if let Some(b) = bound {
            desc.eps = b;
        }
        let sample_set = desc.carrier.sample(seed, samples).map_err(err)?;
        let report = audit(&desc, &sample_set).map_err(err)?;
        let out = PyDict::new(py);
        out.set_item("certified_eps", report.certified_eps)?;
        out.set_item("overall_pass", report.overall_pass)?;
        let axioms = PyDict::new(py);
        for entry in &report.entries {
            let row = PyDict::new(py);
            row.set_item("max_defect", entry.stats.max_defect)?;
            row.set_item("mean_defect", entry.stats.mean_defect)?;
            row.set_item("pass", entry.pass)?;
            row.set_item("skipped", entry.skipped)?;
            axioms.set_item(&entry.axiom, row)?;
        }
        out.set_item("axioms", axioms)?;
        Ok(out)
    }
}

/// Matrix multiplication deformed by a bilinear map, with the implicitly
/// defined inverse and bracket extraction at the identity.
#[pyclass]
struct MatrixGroup {
    inner: PerturbedMatrixGroup,
}

#[pymethods]
impl MatrixGroup {
    #[new]
    #[pyo3(signature = (n, eps, phi="commutator"))]
    fn new(n: usize, eps: f64, phi: &str) -> PyResult<Self> {
        let inner = PerturbedMatrixGroup::new(n, eps, parse_phi(phi)?).map_err(err)?;
        Ok(MatrixGroup { inner })
    }

    fn mul(&self, a: Vec<Vec<f64>>, b: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_matrix(&self.inner.mul_eps(&to_matrix(a)?, &to_matrix(b)?)))
    }

    /// Fixed-point solve of A (*) X = I.
    #[pyo3(signature = (a, tol=1e-12, max_iters=50))]
    fn inverse(&self, a: Vec<Vec<f64>>, tol: f64, max_iters: usize) -> PyResult<Vec<Vec<f64>>> {
        let x = self.inner.inverse_eps(&to_matrix(a)?, tol, max_iters).map_err(err)?;
        Ok(from_matrix(&x))
    }

    /// Independent dense linear-solve cross-check for the inverse.
    fn inverse_dense(&self, a: Vec<Vec<f64>>) -> PyResult<Vec<Vec<f64>>> {
        Ok(from_matrix(&self.inner.inverse_dense(&to_matrix(a)?).map_err(err)?))
    }

    /// Extract the Lie bracket at the identity from the group commutator of
    /// I + tX and I + tY.
    fn bracket(&self, x: Vec<Vec<f64>>, y: Vec<Vec<f64>>, t: f64) -> PyResult<Vec<Vec<f64>>> {
        let b = self
            .inner
            .extract_bracket(&to_matrix(x)?, &to_matrix(y)?, t)
            .map_err(err)?;
        Ok(from_matrix(&b))
    }
}

/// Evaluate a t-norm ("minimum", "product", or "lukasiewicz") on [0,1]^2.
#[pyfunction]
fn tnorm(kind: &str, a: f64, b: f64) -> PyResult<f64> {
    let t = simalg::fuzzy::TNorm::parse(kind).map_err(err)?;
    t.eval(a, b).map_err(err)
}

/// Convert a metric value to similarity: 1 - d ("bounded", d in [0,1]) or
/// 1 / (1 + d) ("unbounded").
#[pyfunction]
fn similarity(d: f64, mode: &str) -> PyResult<f64> {
    let mode = match mode {
        "bounded" => simalg::SimilarityMode::Bounded,
        "unbounded" => simalg::SimilarityMode::Unbounded,
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    simalg::similarity_from_metric(d, mode).map_err(err)
}

/// Exhaustively check the fuzzy-to-similarity embedding bound on a finite
/// carrier under addition mod `modulus`: the induced associativity
/// dissimilarity of every triple must stay within its derived tolerance.
/// Returns (holds, worst_gap, triples_checked).
#[pyfunction]
fn check_fuzzy_embedding(
    elements: Vec<f64>,
    membership: Vec<f64>,
    tnorm: &str,
    modulus: f64,
) -> PyResult<(bool, f64, usize)> {
    let fs = simalg::fuzzy::FuzzySet::from_table(elements, membership).map_err(err)?;
    let t = simalg::fuzzy::TNorm::parse(tnorm).map_err(err)?;
    let op = move |x: f64, y: f64| (x + y).rem_euclid(modulus);
    let report = simalg::fuzzy::check_embedding_bound(&fs, t, &op).map_err(err)?;
    Ok((report.holds, report.worst_gap, report.triples_checked))
}

/// (axiom, pass, degenerate, conclusive slope) row of a collapse verdict.
type VerdictRow = (String, bool, bool, Option<f64>);

/// Sweep the perturbed-field family over the default tolerance grid and
/// report one (axiom, pass, degenerate, slope) row per axiom; slope is None
/// for exact identities and inconclusive fits.
#[pyfunction]
#[pyo3(signature = (lo=-1.0, hi=1.0, seed=42, samples=2048))]
fn verify_field_collapse(
    lo: f64,
    hi: f64,
    seed: u64,
    samples: usize,
) -> PyResult<Vec<VerdictRow>> {
    let family = EpsilonFamily::new(
        "perturbed-field",
        move |eps| {
            PerturbedRealField::new(eps, lo, hi)?
                .with_exclusion_radius(0.25)
                .as_structure(StructureKind::Field)
        },
        move || {
            PerturbedRealField::new(0.0, lo, hi)?
                .with_exclusion_radius(0.25)
                .as_structure(StructureKind::Field)
        },
    );
    let domain = Domain::scalar(lo, hi).map_err(err)?;
    let sample_set = SampleSet::generate(seed, domain, samples).map_err(err)?;
    let verdicts =
        verify_collapse(&family, &simalg::collapse::default_grid(), &sample_set).map_err(err)?;
    Ok(verdicts
        .into_iter()
        .map(|v| {
            let slope = match v.rate {
                RateFit::Fitted(fit) if fit.is_conclusive() => Some(fit.slope),
                _ => None,
            };
            (v.axiom, v.pass, v.degenerate, slope)
        })
        .collect())
}

#[pymodule]
fn simalg_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PerturbedField>()?;
    m.add_class::<MatrixGroup>()?;
    m.add_function(wrap_pyfunction!(tnorm, m)?)?;
    m.add_function(wrap_pyfunction!(similarity, m)?)?;
    m.add_function(wrap_pyfunction!(check_fuzzy_embedding, m)?)?;
    m.add_function(wrap_pyfunction!(verify_field_collapse, m)?)?;
    Ok(())
}
