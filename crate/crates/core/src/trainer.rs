//! End-to-end weight search: pick a window, mark it, walk, measure, and
//! read the synaptic weights off the measured vertex.
//!
//! The number of walk steps is computed from `(N, k, l)` before evolution
//! starts and the evolution loop runs exactly that many steps.

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lackadaisical_walk::{
    self as walk, EvolutionOperator, FourStateVector, Outcome, Rounding, WalkParams,
};
use crate::mlp::{self, MlpWeights};
use crate::oracle::{self, EnumerateOptions, SolutionSet};
use crate::rng;
use crate::weight_space::{self, VertexIndex, WeightWindow};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainerConfig {
    pub delta_p: f64,
    pub z: u32,
    pub w: usize,
    pub l: u64,
    pub seed: u64,
    pub rounding: Rounding,
    pub max_window_shifts: u64,
    /// Largest absolute perturbation applied to the solution count before it
    /// drives the walk, emulating an approximate counting step. 0 is exact.
    pub count_noise: u64,
    /// Fixed start origin instead of a seeded random one.
    pub origin: Option<Vec<i64>>,
    pub enumeration_cap: u64,
    pub allow_large: bool,
    pub jobs: Option<usize>,
}

impl Default for TrainerConfig {
    fn default() -> Self {
        Self {
            delta_p: 0.5,
            z: 2,
            w: MlpWeights::LEN,
            l: 1,
            seed: 0,
            rounding: Rounding::Ceiling,
            max_window_shifts: 2_000_000,
            count_noise: 0,
            origin: None,
            enumeration_cap: oracle::DEFAULT_CAP,
            allow_large: false,
            jobs: None,
        }
    }
}

impl TrainerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_p > 0.0 && self.delta_p.is_finite()) {
            return Err(Error::Config(format!(
                "delta_p must be positive, got {}",
                self.delta_p
            )));
        }
        if self.z < 2 {
            return Err(Error::Config(format!("z must be >= 2, got {}", self.z)));
        }
        if self.l < 1 {
            return Err(Error::Config("l must be >= 1".into()));
        }
        if self.w != MlpWeights::LEN {
            return Err(Error::Config(format!(
                "the XOR network has {} weights, got w = {}",
                MlpWeights::LEN,
                self.w
            )));
        }
        Ok(())
    }

    fn enumerate_options(&self) -> EnumerateOptions {
        EnumerateOptions {
            cap: self.enumeration_cap,
            allow_large: self.allow_large,
            jobs: self.jobs,
        }
    }

    pub fn start_window(&self) -> Result<WeightWindow> {
        match &self.origin {
            Some(origin) => WeightWindow::new(self.w, self.z, self.delta_p, origin.clone()),
            None => weight_space::random_window(self.w, self.z, self.delta_p, self.seed),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub window: WeightWindow,
    pub shifts: u64,
    pub n: u64,
    pub k: u64,
    /// Solution count handed to the walk (differs from `k` only with count
    /// noise).
    pub k_walk: u64,
    pub l: u64,
    pub t_real: f64,
    pub t_int: u64,
    pub final_state: FourStateVector,
    pub probabilities: [f64; 4],
    pub outcome: Outcome,
    pub vertex: VertexIndex,
    pub weights: MlpWeights,
    pub classification_error: usize,
}

impl ExperimentResult {
    pub fn solution_probability(&self) -> f64 {
        self.probabilities[0] + self.probabilities[1]
    }
}

/// Shifts the start window until one contains a solution.
pub fn find_solvable_window(config: &TrainerConfig) -> Result<(SolutionSet, u64)> {
    config.validate()?;
    let start = config.start_window()?;
    let opts = config.enumerate_options();
    for shift in 0..=config.max_window_shifts {
        let window = start.shifted(shift)?;
        let solutions = oracle::enumerate_solutions(&window, &opts)?;
        if solutions.k() > 0 {
            return Ok((solutions, shift));
        }
    }
    Err(Error::NoSolution {
        shifts: config.max_window_shifts,
    })
}

/// Window search and step count without running the walk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DryRun {
    pub window: WeightWindow,
    pub shifts: u64,
    pub n: u64,
    pub k: u64,
    pub k_walk: u64,
    pub l: u64,
    pub t_real: f64,
    pub t_int: u64,
}

pub fn dry_run(config: &TrainerConfig) -> Result<DryRun> {
    let (solutions, shifts) = find_solvable_window(config)?;
    let n = solutions.window.size()?;
    let k = solutions.k();
    let k_walk = perturbed_count(k, n, config.count_noise, config.seed);
    let steps = walk::steps_to_max(&WalkParams::new(n, k_walk, config.l)?, config.rounding);
    Ok(DryRun {
        window: solutions.window,
        shifts,
        n,
        k,
        k_walk,
        l: config.l,
        t_real: steps.t_real,
        t_int: steps.t_int,
    })
}

pub fn train(config: &TrainerConfig) -> Result<ExperimentResult> {
    let (solutions, shifts) = find_solvable_window(config)?;
    run_walk(config, &solutions, shifts)
}

/// Walk, measurement and weight recovery for an already-marked window.
pub fn run_walk(
    config: &TrainerConfig,
    solutions: &SolutionSet,
    shifts: u64,
) -> Result<ExperimentResult> {
    let window = &solutions.window;
    let n = window.size()?;
    let k = solutions.k();
    let k_walk = perturbed_count(k, n, config.count_noise, config.seed);
    let params = WalkParams::new(n, k_walk, config.l)?;

    let steps = walk::steps_to_max(&params, config.rounding);
    let op = EvolutionOperator::for_params(&params);
    let final_state = walk::evolve(&walk::initial_state(&params), &op, steps.t_int);

    let mut measurement = rng::substream(config.seed, rng::MEASUREMENT);
    let outcome = walk::sample_outcome(&final_state, &mut measurement);
    let vertex = sample_vertex(outcome, solutions, &mut measurement)?;
    let weights = MlpWeights::from_slice(&window.index_to_weights(vertex)?)?;

    Ok(ExperimentResult {
        window: window.clone(),
        shifts,
        n,
        k,
        k_walk,
        l: config.l,
        t_real: steps.t_real,
        t_int: steps.t_int,
        final_state,
        probabilities: walk::outcome_probabilities(&final_state),
        outcome,
        vertex,
        classification_error: mlp::classification_error(&weights),
        weights,
    })
}

fn perturbed_count(k: u64, n: u64, noise: u64, seed: u64) -> u64 {
    if noise == 0 {
        return k;
    }
    let mut r = rng::substream(seed, rng::COUNT);
    let delta = r.gen_range(-(noise as i128)..=noise as i128);
    (k as i128 + delta).clamp(1, n as i128 - 1) as u64
}

/// Picks the measured vertex: uniform over the solutions for `AA`/`AB`,
/// uniform over the non-solutions for `BA`/`BB`.
pub fn sample_vertex(
    outcome: Outcome,
    solutions: &SolutionSet,
    rng: &mut ChaCha20Rng,
) -> Result<VertexIndex> {
    let n = solutions.window.size()?;
    let k = solutions.k();
    if outcome.is_solution() {
        if k == 0 {
            return Err(Error::InvalidParams(
                "solution outcome measured on a window without solutions".into(),
            ));
        }
        Ok(solutions.indices[rng.gen_range(0..k as usize)])
    } else {
        if k == n {
            return Err(Error::InvalidParams(
                "non-solution outcome measured on a window of only solutions".into(),
            ));
        }
        // r-th vertex not in the sorted solution list
        let mut idx = rng.gen_range(0..n - k);
        for &s in &solutions.indices {
            if s <= idx {
                idx += 1;
            } else {
                break;
            }
        }
        Ok(idx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fixture(indices: Vec<u64>) -> SolutionSet {
        SolutionSet::new(WeightWindow::centered(9, 2, 0.5).unwrap(), indices).unwrap()
    }

    #[test]
    fn single_solution_is_always_drawn() {
        let s = fixture(vec![77]);
        let mut r = rng::substream(5, rng::MEASUREMENT);
        for outcome in [Outcome::AA, Outcome::AB] {
            for _ in 0..100 {
                assert_eq!(sample_vertex(outcome, &s, &mut r).unwrap(), 77);
            }
        }
    }

    #[test]
    fn single_non_solution_is_always_drawn() {
        let all_but_one: Vec<u64> = (0..512).filter(|&i| i != 300).collect();
        let s = fixture(all_but_one);
        let mut r = rng::substream(5, rng::MEASUREMENT);
        for _ in 0..100 {
            assert_eq!(sample_vertex(Outcome::BB, &s, &mut r).unwrap(), 300);
        }
    }

    #[test]
    fn non_solution_draws_avoid_solutions() {
        let s = fixture(vec![0, 1, 2, 10, 511]);
        let mut r = rng::substream(9, rng::MEASUREMENT);
        for _ in 0..5000 {
            let v = sample_vertex(Outcome::BA, &s, &mut r).unwrap();
            assert!(v < 512 && !s.contains(v));
        }
    }

    #[test]
    fn empty_class_is_an_error() {
        let s = fixture(vec![]);
        let mut r = rng::substream(0, rng::MEASUREMENT);
        assert!(sample_vertex(Outcome::AA, &s, &mut r).is_err());
    }

    #[test]
    fn count_noise_stays_in_range() {
        for seed in 0..200 {
            let k = perturbed_count(3, 512, 10, seed);
            assert!((1..512).contains(&k));
        }
        assert_eq!(perturbed_count(3, 512, 0, 1), 3);
    }

    #[test]
    fn config_validation() {
        let bad = TrainerConfig {
            delta_p: 0.0,
            ..Default::default()
        };
        assert!(train(&bad).is_err());
        let bad = TrainerConfig {
            z: 1,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }
}
