//! Solution sets cross-checked against an independent brute-force script.

use std::fs::File;

use lqw_core::mlp::{self, MlpWeights};
use lqw_core::oracle::{self, EnumerateOptions, SolutionSet};
use lqw_core::trainer::{self, TrainerConfig};
use lqw_core::weight_space::WeightWindow;
use lqw_core::Error;

const K12_ORIGIN: [i64; 9] = [-4, -4, 2, -2, 0, -2, -2, 2, 0];

#[test]
fn z4_unit_step_window() {
    let window = WeightWindow::centered(9, 4, 1.0).unwrap();
    let s = oracle::enumerate_solutions(&window, &EnumerateOptions::default()).unwrap();
    assert_eq!(
        s.indices,
        [94451, 95036, 122051, 122636, 146437, 161797, 180592, 184672]
    );
    assert_eq!(s, oracle::enumerate_reference(&window).unwrap());
    for &idx in &s.indices {
        let w = MlpWeights::from_slice(&window.index_to_weights(idx).unwrap()).unwrap();
        for &(x0, x1, t) in &mlp::XOR {
            assert_eq!(mlp::forward(&w, x0, x1).2 >= 0.5, t == 1.0);
        }
    }
}

#[test]
fn z4_half_step_window_is_empty() {
    let window = WeightWindow::centered(9, 4, 0.5).unwrap();
    let opts = EnumerateOptions {
        jobs: Some(2),
        ..Default::default()
    };
    assert_eq!(oracle::enumerate_solutions(&window, &opts).unwrap().k(), 0);
}

#[test]
fn twelve_solution_window() {
    let window = WeightWindow::new(9, 2, 0.5, K12_ORIGIN.to_vec()).unwrap();
    let s = oracle::enumerate_solutions(&window, &EnumerateOptions::default()).unwrap();
    assert_eq!(
        s.indices,
        [392, 393, 394, 395, 396, 397, 398, 399, 456, 457, 458, 459]
    );
}

#[test]
fn trainer_on_twelve_solution_window() {
    let cfg = TrainerConfig {
        origin: Some(K12_ORIGIN.to_vec()),
        seed: 4,
        ..Default::default()
    };
    let r = trainer::train(&cfg).unwrap();
    assert_eq!((r.shifts, r.n, r.k, r.t_int), (0, 512, 12, 11));
    assert!((r.solution_probability() - 0.9857).abs() < 1e-4);
    if r.outcome.is_solution() {
        assert_eq!(r.classification_error, 0);
    }
    assert_eq!(trainer::train(&cfg).unwrap(), r);
}

#[test]
fn trainer_shifts_away_from_empty_start() {
    let mut origin = K12_ORIGIN.to_vec();
    origin[2] += 2;
    let start = WeightWindow::new(9, 2, 0.5, origin.clone()).unwrap();
    assert_eq!(oracle::enumerate_reference(&start).unwrap().k(), 0);
    let r = trainer::train(&TrainerConfig {
        origin: Some(origin.clone()),
        ..Default::default()
    })
    .unwrap();
    assert!(r.shifts >= 1 && r.k > 0);
    assert_ne!(r.window.origin, origin);
}

#[test]
fn saturated_window_exhausts_shift_budget() {
    // every weight >= 48: the output grows with both inputs, so (1,1) can
    // never fall below (0,1) and no shifted window in range can solve XOR
    let r = trainer::train(&TrainerConfig {
        origin: Some(vec![101; 9]),
        max_window_shifts: 50,
        ..Default::default()
    });
    assert!(matches!(r, Err(Error::NoSolution { shifts: 50 })));
}

#[test]
fn solution_sets_round_trip_through_files() {
    let window = WeightWindow::new(9, 2, 0.5, K12_ORIGIN.to_vec()).unwrap();
    let s = oracle::enumerate_reference(&window).unwrap();
    let dir = tempfile::tempdir().unwrap();

    let json = dir.path().join("solutions.json");
    std::fs::write(&json, s.to_json().unwrap()).unwrap();
    let back = SolutionSet::from_json(&std::fs::read_to_string(&json).unwrap()).unwrap();
    assert_eq!(back, s);

    let bin = dir.path().join("solutions.bin");
    s.write_binary(File::create(&bin).unwrap()).unwrap();
    assert_eq!(
        SolutionSet::read_binary(File::open(&bin).unwrap()).unwrap(),
        s
    );
}
