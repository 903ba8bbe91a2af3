//! Python module `lqw`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyTuple};

use lqw_core::coined_walk::{Coin, CoinedWalkState1D, CoinedWalkStateND};
use lqw_core::lackadaisical_walk::{self as walk, EvolutionOperator, Rounding};
use lqw_core::mlp::{self, BackpropConfig, MlpWeights};
use lqw_core::oracle::{self, EnumerateOptions};
use lqw_core::trainer::{self, TrainerConfig};
use lqw_core::weight_space;

fn err(e: lqw_core::Error) -> PyErr {
    use lqw_core::Error::*;
    match e {
        InvalidParams(_)
        | Config(_)
        | NonUnitaryCoin { .. }
        | CoinDimension { .. }
        | WindowOverflow { .. }
        | IndexOutOfRange { .. }
        | CoordsOutOfRange(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn rounding(s: &str) -> PyResult<Rounding> {
    s.parse().map_err(err)
}

fn to_python<'py, T: serde::Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyRuntimeError::new_err(e.to_string()))?;
    py.import("json")?.call_method1("loads", (text,))
}

/// Lackadaisical walk on the complete graph with `k` marked vertices and
/// `l` self-loops per vertex.
#[pyclass(frozen, module = "lqw")]
struct WalkParams(walk::WalkParams);

#[pymethods]
impl WalkParams {
    #[new]
    #[pyo3(signature = (n, k, l = 1))]
    fn new(n: u64, k: u64, l: u64) -> PyResult<Self> {
        walk::WalkParams::new(n, k, l).map(Self).map_err(err)
    }

    #[getter]
    fn n(&self) -> u64 {
        self.0.n()
    }

    #[getter]
    fn k(&self) -> u64 {
        self.0.k()
    }

    #[getter]
    fn l(&self) -> u64 {
        self.0.l()
    }

    /// `(t_real, t_int)`.
    #[pyo3(signature = (rounding = "ceiling"))]
    fn steps_to_max(&self, rounding: &str) -> PyResult<(f64, u64)> {
        let s = walk::steps_to_max(&self.0, self::rounding(rounding)?);
        Ok((s.t_real, s.t_int))
    }

    /// Amplitudes `(AA, AB, BA, BB)` after `steps` steps.
    fn evolve(&self, steps: u64) -> [f64; 4] {
        let op = EvolutionOperator::for_params(&self.0);
        walk::evolve(&walk::initial_state(&self.0), &op, steps).0
    }

    /// Outcome probabilities after `steps` steps.
    fn probabilities(&self, steps: u64) -> [f64; 4] {
        self.evolve(steps).map(|a| a * a)
    }

    /// Probabilities for every `t` in `0..=steps`.
    fn trace(&self, steps: u64) -> Vec<[f64; 4]> {
        walk::probability_trace(&self.0, steps)
    }

    fn operator(&self) -> [[f64; 4]; 4] {
        EvolutionOperator::for_params(&self.0).0
    }

    fn __repr__(&self) -> String {
        format!(
            "WalkParams(n={}, k={}, l={})",
            self.0.n(),
            self.0.k(),
            self.0.l()
        )
    }
}

/// Position distribution of the Hadamard walk on the line.
#[pyfunction]
#[pyo3(signature = (steps, init = "asymmetric"))]
fn walk1d(steps: u64, init: &str) -> PyResult<BTreeMap<i64, f64>> {
    let start = match init {
        "asymmetric" => CoinedWalkState1D::asymmetric(),
        "symmetric" => CoinedWalkState1D::symmetric(),
        other => return Err(PyValueError::new_err(format!("unknown init {other:?}"))),
    };
    Ok(start.evolve(steps).distribution())
}

/// Position distribution of a walk on `Z^dims`, keyed by coordinate tuple.
/// `coin` is an optional `2^dims x 2^dims` unitary given as nested lists of
/// complex numbers; the default is the Hadamard coin.
#[pyfunction]
#[pyo3(signature = (dims, steps, coin_index = 0, coin = None))]
fn walknd<'py>(
    py: Python<'py>,
    dims: usize,
    steps: u64,
    coin_index: usize,
    coin: Option<Vec<Vec<Complex64>>>,
) -> PyResult<Bound<'py, PyDict>> {
    let coin = match coin {
        None => Coin::hadamard(dims),
        Some(rows) => Coin::from_matrix(dims, rows.into_iter().flatten().collect()).map_err(err)?,
    };
    let state = CoinedWalkStateND::localized(dims, coin_index)
        .and_then(|s| s.evolve(&coin, steps))
        .map_err(err)?;
    let out = PyDict::new(py);
    for (x, p) in state.distribution() {
        out.set_item(PyTuple::new(py, x)?, p)?;
    }
    Ok(out)
}

/// Finite window of the weight lattice.
#[pyclass(frozen, module = "lqw")]
struct WeightWindow(weight_space::WeightWindow);

#[pymethods]
impl WeightWindow {
    #[new]
    #[pyo3(signature = (z, delta_p, origin, w = 9))]
    fn new(z: u32, delta_p: f64, origin: Vec<i64>, w: usize) -> PyResult<Self> {
        weight_space::WeightWindow::new(w, z, delta_p, origin)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (z, delta_p, w = 9))]
    fn centered(z: u32, delta_p: f64, w: usize) -> PyResult<Self> {
        weight_space::WeightWindow::centered(w, z, delta_p)
            .map(Self)
            .map_err(err)
    }

    #[staticmethod]
    #[pyo3(signature = (z, delta_p, seed, w = 9))]
    fn random(z: u32, delta_p: f64, seed: u64, w: usize) -> PyResult<Self> {
        weight_space::random_window(w, z, delta_p, seed)
            .map(Self)
            .map_err(err)
    }

    #[getter]
    fn z(&self) -> u32 {
        self.0.z
    }

    #[getter]
    fn delta_p(&self) -> f64 {
        self.0.delta_p
    }

    #[getter]
    fn origin(&self) -> Vec<i64> {
        self.0.origin.clone()
    }

    fn size(&self) -> PyResult<u64> {
        self.0.size().map_err(err)
    }

    fn index_to_coords(&self, idx: u64) -> PyResult<Vec<u32>> {
        self.0.index_to_coords(idx).map_err(err)
    }

    fn coords_to_index(&self, coords: Vec<u32>) -> PyResult<u64> {
        self.0.coords_to_index(&coords).map_err(err)
    }

    fn index_to_weights(&self, idx: u64) -> PyResult<Vec<f64>> {
        self.0.index_to_weights(idx).map_err(err)
    }

    fn shifted(&self, shift_index: u64) -> PyResult<Self> {
        self.0.shifted(shift_index).map(Self).map_err(err)
    }

    /// Sorted indices of every vertex whose weights solve XOR.
    #[pyo3(signature = (jobs = None))]
    fn solutions(&self, py: Python<'_>, jobs: Option<usize>) -> PyResult<Vec<u64>> {
        let opts = EnumerateOptions {
            jobs,
            ..Default::default()
        };
        let window = self.0.clone();
        py.detach(|| oracle::enumerate_solutions(&window, &opts))
            .map(|s| s.indices)
            .map_err(err)
    }

    fn is_solution(&self, idx: u64) -> PyResult<bool> {
        oracle::evaluate_vertex(idx, &self.0).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "WeightWindow(z={}, delta_p={}, origin={:?})",
            self.0.z, self.0.delta_p, self.0.origin
        )
    }
}

fn weights(w: Vec<f64>) -> PyResult<MlpWeights> {
    MlpWeights::from_slice(&w).map_err(err)
}

/// `(h1, h2, y)` of the 2-2-1 network.
#[pyfunction]
fn forward(w: Vec<f64>, x0: f64, x1: f64) -> PyResult<(f64, f64, f64)> {
    Ok(mlp::forward(&weights(w)?, x0, x1))
}

#[pyfunction]
fn classification_error(w: Vec<f64>) -> PyResult<usize> {
    Ok(mlp::classification_error(&weights(w)?))
}

/// Runs the full walk-based weight search and returns the result as a dict.
#[pyfunction]
#[pyo3(signature = (
    seed = 0, z = 2, delta_p = 0.5, l = 1, rounding = "ceiling",
    max_window_shifts = None, count_noise = 0, origin = None, jobs = None
))]
#[allow(clippy::too_many_arguments)]
fn train<'py>(
    py: Python<'py>,
    seed: u64,
    z: u32,
    delta_p: f64,
    l: u64,
    rounding: &str,
    max_window_shifts: Option<u64>,
    count_noise: u64,
    origin: Option<Vec<i64>>,
    jobs: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let defaults = TrainerConfig::default();
    let cfg = TrainerConfig {
        seed,
        z,
        delta_p,
        l,
        rounding: self::rounding(rounding)?,
        max_window_shifts: max_window_shifts.unwrap_or(defaults.max_window_shifts),
        count_noise,
        origin,
        jobs,
        ..defaults
    };
    let result = py.detach(|| trainer::train(&cfg)).map_err(err)?;
    to_python(py, &result)
}

/// Backpropagation baseline run; returns a dict.
#[pyfunction]
#[pyo3(signature = (learning_rate = 0.5, seed = 0, max_epochs = 150_000, stagnation_window = 1000, init_range = 0.5))]
fn backprop<'py>(
    py: Python<'py>,
    learning_rate: f64,
    seed: u64,
    max_epochs: u64,
    stagnation_window: u64,
    init_range: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let cfg = BackpropConfig {
        learning_rate,
        seed,
        max_epochs,
        stagnation_window,
        init_range,
    };
    let result = py.detach(|| mlp::backprop_train(&cfg)).map_err(err)?;
    to_python(py, &result)
}

#[pymodule]
pub fn lqw(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<WalkParams>()?;
    m.add_class::<WeightWindow>()?;
    m.add_function(wrap_pyfunction!(walk1d, m)?)?;
    m.add_function(wrap_pyfunction!(walknd, m)?)?;
    m.add_function(wrap_pyfunction!(forward, m)?)?;
    m.add_function(wrap_pyfunction!(classification_error, m)?)?;
    m.add_function(wrap_pyfunction!(train, m)?)?;
    m.add_function(wrap_pyfunction!(backprop, m)?)?;
    Ok(())
}
