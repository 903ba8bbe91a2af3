use num_complex::Complex64;

use lqw_core::coined_walk::{init_1d_asymmetric, init_1d_symmetric, Coin, CoinedWalkStateND};

fn as_nd(alpha: Complex64, beta: Complex64) -> CoinedWalkStateND {
    CoinedWalkStateND::from_origin_coin(1, vec![alpha, beta]).unwrap()
}

#[test]
fn one_dimensional_grid_walk_equals_line_walk_bitwise() {
    for start in [init_1d_asymmetric(), init_1d_symmetric()] {
        let (a, b) = start.amplitude(0);
        let mut line = start.clone();
        let mut grid = as_nd(a, b);
        for _ in 0..20 {
            line = line.step();
            grid = grid.step(&Coin::hadamard(1)).unwrap();
            assert_eq!(line.amplitudes().len(), grid.amplitudes().len());
            for (n, &(alpha, beta)) in line.amplitudes() {
                assert_eq!(grid.amplitudes()[&vec![*n]], vec![alpha, beta]);
            }
        }
    }
}

#[test]
fn dense_coin_agrees_with_line_walk() {
    let mut line = init_1d_symmetric();
    let (a, b) = line.amplitude(0);
    let mut grid = as_nd(a, b);
    let coin = Coin::hadamard_matrix(1);
    for _ in 0..10 {
        line = line.step();
        grid = grid.step(&coin).unwrap();
    }
    let d = grid.distribution();
    for (n, p) in line.distribution() {
        assert!((d[&vec![n]] - p).abs() < 1e-12);
    }
}

#[test]
fn symmetric_walk_mirrors_and_spreads() {
    let d = init_1d_symmetric().evolve(100).distribution();
    for (&n, &p) in &d {
        assert_eq!(d[&-n], p, "position {n}");
    }
    let (&peak, _) = d.iter().max_by(|a, b| a.1.total_cmp(b.1)).unwrap();
    assert!((60..=80).contains(&peak.abs()));
    let total: f64 = d.values().sum();
    assert!((total - 1.0).abs() < 1e-10);
}

#[test]
fn three_dimensional_walk_keeps_norm_and_parity() {
    let coin = Coin::hadamard(3);
    let mut s = CoinedWalkStateND::localized(3, 5).unwrap();
    for t in 1..=12i64 {
        s = s.step(&coin).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        for x in s.amplitudes().keys() {
            assert!(x.iter().all(|&v| v.abs() <= t && (v + t) % 2 == 0));
        }
    }
}

#[test]
fn custom_unitary_coin() {
    // Fourier-like 2x2 coin with a phase
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let i = Complex64::new(0.0, 1.0);
    let coin = Coin::from_matrix(
        1,
        vec![Complex64::new(h, 0.0), i * h, i * h, Complex64::new(h, 0.0)],
    )
    .unwrap();
    let s = CoinedWalkStateND::localized(1, 0)
        .unwrap()
        .evolve(&coin, 50)
        .unwrap();
    assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
}
