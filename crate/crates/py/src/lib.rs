//! Python bindings: a `Sample` class for single-dataset work and a
//! `coverage_experiment` function for simulation studies.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tailindex::complete_cl::ci_cl_tail;
use tailindex::{
    censored_hill, ci_bayes, ci_bcl, ci_el, ci_ml, ci_normal, cl_stat, elr_stat, hill, hpdi, ks_stat_ordered, lr_stat,
    ml_alpha, posterior_jeffrey, theta_from_level, CensoredSample, Error, Family, GammaPosterior, Interval, Method,
    ModelSpec, OrderedSample, SimConfig, TailStats, KS_CRITICAL_95,
};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidSample(_)
        | Error::InvalidK { .. }
        | Error::ThresholdTie { .. }
        | Error::InvalidArgument(_)
        | Error::InvalidUniform(_) => PyValueError::new_err(e.to_string()),
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn method(name: &str) -> PyResult<Method> {
    name.parse().map_err(to_py)
}

/// A positive sample with optional censoring indicators (True = observed).
#[pyclass(module = "pytailindex", frozen)]
struct Sample {
    inner: CensoredSample,
    ordered: OrderedSample,
}

impl Sample {
    fn tail(&self, k: usize) -> PyResult<TailStats> {
        self.ordered.tail(k).map_err(to_py)
    }
}

#[pymethods]
impl Sample {
    #[new]
    #[pyo3(signature = (values, statuses = None))]
    fn new(values: Vec<f64>, statuses: Option<Vec<bool>>) -> PyResult<Self> {
        let inner = match statuses {
            Some(s) => CensoredSample::new(values, s),
            None => CensoredSample::complete(values),
        }
        .map_err(to_py)?;
        let ordered = inner.ordered();
        Ok(Self { inner, ordered })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    #[getter]
    fn is_complete(&self) -> bool {
        self.inner.is_complete()
    }

    /// Fraction of observed points among the `k` largest.
    fn p_hat(&self, k: usize) -> PyResult<f64> {
        Ok(self.tail(k)?.p_hat())
    }

    fn hill(&self, k: usize) -> PyResult<f64> {
        Ok(hill(&self.tail(k)?))
    }

    fn censored_hill(&self, k: usize) -> PyResult<f64> {
        censored_hill(&self.tail(k)?).map_err(to_py)
    }

    fn ml_alpha(&self, k: usize) -> PyResult<f64> {
        ml_alpha(&self.tail(k)?).map_err(to_py)
    }

    /// `(shape, rate)` of the Jeffreys-prior Gamma posterior.
    fn posterior_jeffrey(&self, k: usize) -> PyResult<(f64, f64)> {
        let p = posterior_jeffrey(&self.tail(k)?).map_err(to_py)?;
        Ok((p.shape, p.rate))
    }

    fn lr_stat(&self, k: usize, alpha: f64) -> PyResult<f64> {
        lr_stat(&self.tail(k)?, alpha).map_err(to_py)
    }

    fn elr_stat(&self, k: usize, alpha: f64) -> PyResult<f64> {
        Ok(elr_stat(&self.tail(k)?, alpha))
    }

    fn cl_stat(&self, k: usize, alpha: f64) -> PyResult<f64> {
        cl_stat(&self.inner, k, alpha).map_err(to_py)
    }

    fn ks_stat(&self, k: usize) -> PyResult<f64> {
        ks_stat_ordered(&self.ordered, k).map_err(to_py)
    }

    /// `(k, stat, reject)` for every `k` in the range.
    fn ks_scan(&self, k_min: usize, k_max: usize) -> PyResult<Vec<(usize, f64, bool)>> {
        tailindex::ks_scan(&self.inner, k_min, k_max)
            .map(|pts| pts.into_iter().map(|p| (p.k, p.stat, p.reject)).collect())
            .map_err(to_py)
    }

    /// `(lower, upper)` of the region for `method` (EL, BCL, B, ML, CL2, NORMAL).
    #[pyo3(signature = (k, method_name = "EL", level = 0.95))]
    fn interval(&self, py: Python<'_>, k: usize, method_name: &str, level: f64) -> PyResult<(f64, f64)> {
        let m = method(method_name)?;
        let theta = theta_from_level(level).map_err(to_py)?;
        let tail = self.tail(k)?;
        let iv: Interval = py
            .detach(|| match m {
                Method::El => ci_el(&tail, theta),
                Method::Bcl => ci_bcl(&tail, theta),
                Method::B => ci_bayes(&tail, theta),
                Method::Ml => ci_ml(&tail, theta),
                Method::Cl2 => ci_cl_tail(&tail, theta),
                Method::Normal => ci_normal(&tail, theta),
            })
            .map_err(to_py)?;
        Ok((iv.lower, iv.upper))
    }
}

/// Highest posterior density interval of Gamma(shape, rate).
#[pyfunction]
#[pyo3(signature = (shape, rate, level = 0.95))]
fn gamma_hpdi(shape: f64, rate: f64, level: f64) -> PyResult<(f64, f64)> {
    let post = GammaPosterior::new(shape, rate).map_err(to_py)?;
    let iv = hpdi(&post, theta_from_level(level).map_err(to_py)?).map_err(to_py)?;
    Ok((iv.lower, iv.upper))
}

type Row = (Option<f64>, String, usize, f64, f64, f64, usize);

/// Coverage study; returns `(beta, method, k, coverage, avg_length, p_bar, failures)` rows.
#[pyfunction]
#[pyo3(signature = (
    n, m, target_family, target_index, k_min, k_max,
    censor_family = None, censor_index = None, level = 0.95, methods = None, seed = 0
))]
#[allow(clippy::too_many_arguments)]
fn coverage_experiment(
    py: Python<'_>,
    n: usize,
    m: usize,
    target_family: &str,
    target_index: f64,
    k_min: usize,
    k_max: usize,
    censor_family: Option<&str>,
    censor_index: Option<f64>,
    level: f64,
    methods: Option<Vec<String>>,
    seed: u64,
) -> PyResult<Vec<Row>> {
    let target = ModelSpec::new(target_family.parse::<Family>().map_err(to_py)?, target_index).map_err(to_py)?;
    let censor = match (censor_family, censor_index) {
        (Some(f), Some(b)) => Some(ModelSpec::new(f.parse::<Family>().map_err(to_py)?, b).map_err(to_py)?),
        (None, None) => None,
        _ => return Err(PyValueError::new_err("censor_family and censor_index go together")),
    };
    let methods = match methods {
        Some(names) => names.iter().map(|s| method(s)).collect::<PyResult<Vec<_>>>()?,
        None => Method::ALL
            .iter()
            .copied()
            .filter(|m| censor.is_none() || m.supports_censoring())
            .collect(),
    };
    let cfg = SimConfig {
        n,
        m,
        target,
        censor,
        k_min,
        k_max,
        level,
        methods,
        master_seed: seed,
    };
    let rows = py.detach(|| tailindex::coverage_experiment(&cfg)).map_err(to_py)?;
    Ok(rows
        .into_iter()
        .map(|r| (r.beta, r.method.to_string(), r.k, r.coverage, r.avg_length, r.p_bar, r.failures))
        .collect())
}

#[pymodule]
fn pytailindex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Sample>()?;
    m.add_function(wrap_pyfunction!(gamma_hpdi, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_experiment, m)?)?;
    m.add("KS_CRITICAL_95", KS_CRITICAL_95)?;
    Ok(())
}
