//! Python bindings for `entitled-cuts-core`.
//!
//! Rationals cross the boundary as strings (`"p/q"` or an integer). Inputs
//! may also be Python `int` or `fractions.Fraction`; floats are rejected.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use entitled_cuts_core::bounds::{self, CertificateStatus};
use entitled_cuts_core::config::SolverConfig;
use entitled_cuts_core::io;
use entitled_cuts_core::model::{Allocation, Instance, Interval, Region, Topology, Valuation};
use entitled_cuts_core::protocols::{self, AlgorithmKind};
use entitled_cuts_core::random::{self, RandomSpec};
use entitled_cuts_core::rational::{format_rational, parse_rational};
use entitled_cuts_core::split::{self, SplitRequest};
use entitled_cuts_core::verify;
use entitled_cuts_core::{Error, Rational};

create_exception!(entitled_cuts, BudgetExceededError, PyException);

fn to_py_err(e: Error) -> PyErr {
    match e {
        Error::BudgetExceeded { .. } => BudgetExceededError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn rational(obj: &Bound<'_, PyAny>) -> PyResult<Rational> {
    let text = obj.str()?.to_string();
    parse_rational(&text).map_err(to_py_err)
}

fn rationals(objs: &[Bound<'_, PyAny>]) -> PyResult<Vec<Rational>> {
    objs.iter().map(rational).collect()
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

type PiecePy = Vec<(String, String)>;

/// `(breakpoints, densities)` as given from Python.
type ValuationPy<'py> = (Vec<Bound<'py, PyAny>>, Vec<Bound<'py, PyAny>>);

fn piece_to_py(r: &Region) -> PiecePy {
    r.intervals()
        .iter()
        .map(|iv| (format_rational(iv.lo()), format_rational(iv.hi())))
        .collect()
}

fn piece_from_py(piece: &[(Bound<'_, PyAny>, Bound<'_, PyAny>)]) -> PyResult<Region> {
    let intervals = piece
        .iter()
        .map(|(lo, hi)| Interval::new(rational(lo)?, rational(hi)?).map_err(to_py_err))
        .collect::<PyResult<Vec<_>>>()?;
    Ok(Region::new(intervals))
}

fn config(budget: Option<u64>) -> PyResult<SolverConfig> {
    let mut cfg = SolverConfig::from_env().map_err(to_py_err)?;
    if let Some(b) = budget {
        if b == 0 {
            return Err(PyValueError::new_err("budget must be positive"));
        }
        cfg.enumeration_cap = b;
    }
    Ok(cfg)
}

/// A validated division problem.
#[pyclass(name = "Instance", module = "entitled_cuts", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInstance {
    inner: Instance,
}

#[pymethods]
impl PyInstance {
    /// `valuations` is a list of `(breakpoints, densities)` pairs.
    #[new]
    #[pyo3(signature = (valuations, entitlements, topology = "interval", names = None))]
    fn new(
        valuations: Vec<ValuationPy<'_>>,
        entitlements: Vec<Bound<'_, PyAny>>,
        topology: &str,
        names: Option<Vec<String>>,
    ) -> PyResult<Self> {
        let topology: Topology = topology.parse().map_err(to_py_err)?;
        let vals = valuations
            .iter()
            .map(|(b, d)| Valuation::new(rationals(b)?, rationals(d)?).map_err(to_py_err))
            .collect::<PyResult<Vec<_>>>()?;
        let ents = rationals(&entitlements)?;
        let inner = match names {
            Some(n) => Instance::with_names(topology, n, vals, ents),
            None => Instance::new(topology, vals, ents),
        }
        .map_err(to_py_err)?;
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        io::parse_instance(text).map(|inner| Self { inner }).map_err(to_py_err)
    }

    fn to_json(&self) -> String {
        io::instance_to_json(&self.inner)
    }

    /// SHA-256 of the canonical instance document.
    fn digest(&self) -> String {
        io::instance_digest(&self.inner)
    }

    #[getter]
    fn agent_count(&self) -> usize {
        self.inner.agent_count()
    }

    #[getter]
    fn topology(&self) -> &'static str {
        self.inner.topology().as_str()
    }

    #[getter]
    fn names(&self) -> Vec<String> {
        self.inner.names().to_vec()
    }

    #[getter]
    fn entitlements(&self) -> Vec<String> {
        strings(self.inner.entitlements())
    }

    /// `t_i · V_i(C)` for agent `i` (counted from 0).
    fn threshold(&self, agent: usize) -> PyResult<String> {
        if agent >= self.inner.agent_count() {
            return Err(PyValueError::new_err(format!("no agent {agent}")));
        }
        Ok(format_rational(&self.inner.threshold(agent)))
    }

    /// Value of a piece (list of `(lo, hi)` pairs) to agent `agent`.
    fn value(&self, agent: usize, piece: Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>) -> PyResult<String> {
        let v = self
            .inner
            .valuations()
            .get(agent)
            .ok_or_else(|| PyValueError::new_err(format!("no agent {agent}")))?;
        Ok(format_rational(&entitled_cuts_core::model::measure_of(
            v,
            &piece_from_py(&piece)?,
        )))
    }

    fn __repr__(&self) -> String {
        format!(
            "Instance(topology={:?}, entitlements={:?})",
            self.inner.topology().as_str(),
            strings(self.inner.entitlements())
        )
    }
}

/// Output of a division protocol.
#[pyclass(name = "SolveReport", module = "entitled_cuts", frozen, get_all)]
struct PySolveReport {
    algorithm: String,
    /// One list of `(lo, hi)` pairs per agent.
    pieces: Vec<PiecePy>,
    cuts: Vec<String>,
    cut_count: usize,
    bound: u64,
    json: String,
}

/// Runs a protocol: `auto`, `recursive`, `clone`, `special3a`, `special3b`
/// or `near-equal`.
#[pyfunction]
#[pyo3(signature = (instance, algorithm = "auto", budget = None))]
fn solve(py: Python<'_>, instance: &PyInstance, algorithm: &str, budget: Option<u64>) -> PyResult<PySolveReport> {
    let cfg = config(budget)?;
    let inst = instance.inner.clone();
    let algorithm = algorithm.to_string();
    let report = py
        .detach(move || {
            if algorithm == "auto" {
                protocols::auto_solve(&inst, &cfg)
            } else {
                protocols::run_algorithm(algorithm.parse::<AlgorithmKind>()?, &inst, &cfg)
            }
        })
        .map_err(to_py_err)?;
    Ok(PySolveReport {
        algorithm: report.algorithm.as_str().to_string(),
        pieces: report.allocation.pieces().iter().map(piece_to_py).collect(),
        cut_count: report.cut_count(),
        json: io::allocation_to_json(&report.allocation, &report.cuts, Some(report.algorithm.as_str())),
        cuts: strings(&report.cuts),
        bound: report.bound,
    })
}

/// Result of checking an allocation.
#[pyclass(name = "VerifyReport", module = "entitled_cuts", frozen, get_all)]
struct PyVerifyReport {
    passed: bool,
    values: Vec<String>,
    thresholds: Vec<String>,
    cuts: Vec<String>,
    cut_count: usize,
    failures: Vec<String>,
}

/// Checks `pieces` (one list of `(lo, hi)` pairs per agent) against `instance`.
#[pyfunction]
fn verify_allocation(
    instance: &PyInstance,
    pieces: Vec<Vec<(Bound<'_, PyAny>, Bound<'_, PyAny>)>>,
) -> PyResult<PyVerifyReport> {
    let regions = pieces.iter().map(|p| piece_from_py(p)).collect::<PyResult<Vec<_>>>()?;
    let rep = verify::verify_allocation(&instance.inner, &Allocation::new(regions));
    Ok(PyVerifyReport {
        passed: rep.pass,
        values: rep.agents.iter().map(|a| format_rational(&a.value)).collect(),
        thresholds: rep.agents.iter().map(|a| format_rational(&a.threshold)).collect(),
        cut_count: rep.cut_count(),
        cuts: strings(&rep.cuts),
        failures: rep.failures(),
    })
}

/// Outcome of the minimal-cut search.
#[pyclass(name = "MinCutsResult", module = "entitled_cuts", frozen, get_all)]
struct PyMinCutsResult {
    /// Smallest feasible cut budget, or `None` if none up to `k_max` works.
    min_cuts: Option<usize>,
    k_max: usize,
    /// Allocation witnessing `min_cuts`, if found.
    pieces: Option<Vec<PiecePy>>,
    systems_examined: u64,
    certificate_json: String,
}

#[pyfunction]
#[pyo3(signature = (instance, k_max, budget = None))]
fn min_cuts(py: Python<'_>, instance: &PyInstance, k_max: usize, budget: Option<u64>) -> PyResult<PyMinCutsResult> {
    let cfg = config(budget)?;
    let inst = instance.inner.clone();
    let outcome = py
        .detach(move || bounds::min_cuts(&inst, k_max, &cfg))
        .map_err(to_py_err)?;
    let pieces = match &outcome.certificate.status {
        CertificateStatus::Feasible(a) => Some(a.pieces().iter().map(piece_to_py).collect()),
        CertificateStatus::Infeasible => None,
    };
    Ok(PyMinCutsResult {
        min_cuts: outcome.min_cuts,
        k_max,
        pieces,
        systems_examined: outcome.systems_examined,
        certificate_json: io::certificate_to_json(&outcome.certificate, instance.inner.topology()),
    })
}

/// Whether a proportional allocation with at most `k` cuts exists.
#[pyfunction]
#[pyo3(signature = (instance, k, budget = None))]
fn feasible_with_k_cuts(py: Python<'_>, instance: &PyInstance, k: usize, budget: Option<u64>) -> PyResult<bool> {
    let cfg = config(budget)?;
    let inst = instance.inner.clone();
    py.detach(move || bounds::feasible_with_k_cuts(&inst, k, &cfg))
        .map(|c| c.is_feasible())
        .map_err(to_py_err)
}

/// Part of the cake worth exactly `ratio` of the whole to every agent.
#[pyfunction]
#[pyo3(signature = (instance, ratio, budget = None))]
fn exact_split(instance: &PyInstance, ratio: &Bound<'_, PyAny>, budget: Option<u64>) -> PyResult<PiecePy> {
    let cfg = config(budget)?;
    let req = SplitRequest {
        valuations: instance.inner.valuations().iter().collect(),
        subcake: Region::full(),
        topology: instance.inner.topology(),
        ratio: rational(ratio)?,
    };
    let res = split::exact_split(&req, cfg.enumeration_cap).map_err(to_py_err)?;
    Ok(piece_to_py(&res.part))
}

/// Cut bound of recursive halving for `n` agents.
#[pyfunction]
fn upper_bound_cuts(n: u64) -> PyResult<u64> {
    if n == 0 {
        return Err(PyValueError::new_err("at least one agent is required"));
    }
    Ok(protocols::upper_bound_cuts(n))
}

/// Instance on which `2n − 2` cuts are necessary.
#[pyfunction]
fn lower_bound_instance(n: usize) -> PyResult<PyInstance> {
    bounds::gen_lower_bound_instance(n)
        .map(|inner| PyInstance { inner })
        .map_err(to_py_err)
}

#[pyfunction]
#[pyo3(signature = (n, seed, max_cells = 3, denom_bound = 6))]
fn random_instance(n: usize, seed: u64, max_cells: usize, denom_bound: u64) -> PyResult<PyInstance> {
    random::random_instance(&RandomSpec::new(n, max_cells, denom_bound), seed)
        .map(|inner| PyInstance { inner })
        .map_err(to_py_err)
}

#[pymodule]
fn entitled_cuts(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyInstance>()?;
    m.add_class::<PySolveReport>()?;
    m.add_class::<PyVerifyReport>()?;
    m.add_class::<PyMinCutsResult>()?;
    m.add("BudgetExceededError", m.py().get_type::<BudgetExceededError>())?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(verify_allocation, m)?)?;
    m.add_function(wrap_pyfunction!(min_cuts, m)?)?;
    m.add_function(wrap_pyfunction!(feasible_with_k_cuts, m)?)?;
    m.add_function(wrap_pyfunction!(exact_split, m)?)?;
    m.add_function(wrap_pyfunction!(upper_bound_cuts, m)?)?;
    m.add_function(wrap_pyfunction!(lower_bound_instance, m)?)?;
    m.add_function(wrap_pyfunction!(random_instance, m)?)?;
    Ok(())
}
