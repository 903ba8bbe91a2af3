use proptest::prelude::*;

use lqw_core::lackadaisical_walk::{self as walk, EvolutionOperator, WalkParams};
use lqw_core::mlp::{self, MlpWeights};
use lqw_core::weight_space::{self, WeightWindow};

fn params() -> impl Strategy<Value = (u64, u64, u64)> {
    (2u64..1 << 36).prop_flat_map(|n| (Just(n), 1..n, 1..=n.min(1 << 20)))
}

fn window() -> impl Strategy<Value = WeightWindow> {
    (2u32..=6, prop::collection::vec(-1000i64..1000, 9), 1u32..8)
        .prop_map(|(z, origin, q)| WeightWindow::new(9, z, f64::from(q) * 0.125, origin).unwrap())
}

proptest! {
    #[test]
    fn operator_is_orthogonal((n, k, l) in params()) {
        let p = WalkParams::new(n, k, l).unwrap();
        prop_assert!(EvolutionOperator::for_params(&p).orthogonality_defect() < 1e-12);
    }

    #[test]
    fn evolution_keeps_norm((n, k, l) in params(), steps in 0u64..2000) {
        let p = WalkParams::new(n, k, l).unwrap();
        let s = walk::evolve(&walk::initial_state(&p), &EvolutionOperator::for_params(&p), steps);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn steps_grow_with_n(n in 16u64..1 << 40, k in 1u64..8) {
        let a = walk::steps_to_max(&WalkParams::new(n, k, 1).unwrap(), Default::default());
        let b = walk::steps_to_max(&WalkParams::new(4 * n, k, 1).unwrap(), Default::default());
        prop_assert!((b.t_real / a.t_real - 2.0).abs() < 1e-9);
    }

    #[test]
    fn index_codec_round_trips(w in window(), frac in 0.0f64..1.0) {
        let size = w.size().unwrap();
        let idx = ((size as f64 * frac) as u64).min(size - 1);
        let coords = weight_space::index_to_coords(idx, &w).unwrap();
        prop_assert!(coords.iter().all(|&c| c < w.z));
        prop_assert_eq!(w.coords_to_index(&coords).unwrap(), idx);
    }

    #[test]
    fn weights_are_grid_multiples(w in window(), frac in 0.0f64..1.0) {
        let size = w.size().unwrap();
        let idx = ((size as f64 * frac) as u64).min(size - 1);
        for x in w.index_to_weights(idx).unwrap() {
            let m = x / w.delta_p;
            prop_assert_eq!(m, m.round());
        }
    }

    #[test]
    fn distinct_coords_give_distinct_weights(w in window(), a in 0.0f64..1.0, b in 0.0f64..1.0) {
        let size = w.size().unwrap();
        let (i, j) = (((size as f64 * a) as u64).min(size - 1), ((size as f64 * b) as u64).min(size - 1));
        prop_assume!(i != j);
        prop_assert_ne!(w.index_to_weights(i).unwrap(), w.index_to_weights(j).unwrap());
    }

    #[test]
    fn block_offsets_invert(w in 1usize..10, idx in 0u64..5_000_000) {
        let offset = weight_space::block_offset(w, idx).unwrap();
        prop_assert_eq!(weight_space::block_shift_index(&offset).unwrap(), idx);
    }

    #[test]
    fn classification_error_is_bounded(ws in prop::array::uniform9(-50.0f64..50.0)) {
        let w = MlpWeights(ws);
        prop_assert!(mlp::classification_error(&w) <= 4);
        prop_assert_eq!(mlp::forward(&w, 0.3, 0.7), mlp::forward(&w, 0.3, 0.7));
    }
}
