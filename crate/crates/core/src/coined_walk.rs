//! Discrete-time coined quantum walks on the line and on `Z^d`.
//!
//! Amplitudes are kept in sparse ordered maps keyed by position. Positions
//! whose amplitudes are all exactly zero are dropped after every step.
//!
//! Coin index `0` moves the walker one site in the positive direction and
//! coin index `1` in the negative direction, in every dimension.
//! For `d` dimensions the coin register is indexed by the integer
//! `c = sum_p i_p * 2^p`, so dimension 0 is the least significant bit.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type ComplexAmplitude = Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One-dimensional walk state: position -> (alpha, beta), the amplitudes
/// of coin states `|0>` and `|1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinedWalkState1D {
    t: u64,
    amplitudes: BTreeMap<i64, (Complex64, Complex64)>,
}

impl CoinedWalkState1D {
    /// `|0>|n=0>`.
    pub fn asymmetric() -> Self {
        Self::localized(Complex64::new(1.0, 0.0), ZERO)
    }

    /// `(|0> - i|1>)/sqrt(2) |n=0>`.
    pub fn symmetric() -> Self {
        Self::localized(
            Complex64::new(FRAC_1_SQRT_2, 0.0),
            Complex64::new(0.0, -FRAC_1_SQRT_2),
        )
    }

    /// A walker at the origin with the given coin amplitudes. The caller is
    /// responsible for normalization.
    pub fn localized(alpha: Complex64, beta: Complex64) -> Self {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(0, (alpha, beta));
        Self { t: 0, amplitudes }
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    /// `(alpha_n, beta_n)`, zero outside the support.
    pub fn amplitude(&self, n: i64) -> (Complex64, Complex64) {
        self.amplitudes.get(&n).copied().unwrap_or((ZERO, ZERO))
    }

    pub fn amplitudes(&self) -> &BTreeMap<i64, (Complex64, Complex64)> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
            .sum()
    }

    /// One Hadamard step:
    /// `alpha'_n = (alpha_{n-1} + beta_{n-1})/sqrt2`,
    /// `beta'_n = (alpha_{n+1} - beta_{n+1})/sqrt2`.
    pub fn step(&self) -> Self {
        let mut next: BTreeMap<i64, (Complex64, Complex64)> = BTreeMap::new();
        for (&n, &(alpha, beta)) in &self.amplitudes {
            let right = (alpha + beta) * FRAC_1_SQRT_2;
            let left = (alpha - beta) * FRAC_1_SQRT_2;
            next.entry(n + 1).or_insert((ZERO, ZERO)).0 = right;
            next.entry(n - 1).or_insert((ZERO, ZERO)).1 = left;
        }
        next.retain(|_, (a, b)| *a != ZERO || *b != ZERO);
        Self {
            t: self.t + 1,
            amplitudes: next,
        }
    }

    pub fn evolve(&self, steps: u64) -> Self {
        let mut state = self.clone();
        for _ in 0..steps {
            state = state.step();
        }
        state
    }

    /// `p(n) = |alpha_n|^2 + |beta_n|^2` for every position of nonzero
    /// probability, sorted by position.
    pub fn distribution(&self) -> BTreeMap<i64, f64> {
        self.amplitudes
            .iter()
            .map(|(&n, (a, b))| (n, a.norm_sqr() + b.norm_sqr()))
            .filter(|&(_, p)| p > 0.0)
            .collect()
    }
}

pub fn init_1d_asymmetric() -> CoinedWalkState1D {
    CoinedWalkState1D::asymmetric()
}

pub fn init_1d_symmetric() -> CoinedWalkState1D {
    CoinedWalkState1D::symmetric()
}

pub fn step_1d(state: &CoinedWalkState1D) -> CoinedWalkState1D {
    state.step()
}

pub fn distribution_1d(state: &CoinedWalkState1D) -> BTreeMap<i64, f64> {
    state.distribution()
}

/// Coin operator for a `d`-dimensional walk.
#[derive(Debug, Clone, PartialEq)]
pub enum Coin {
    /// The `d`-fold tensor power of the 2x2 Hadamard, applied factor by
    /// factor as butterflies `((a+b)/sqrt2, (a-b)/sqrt2)`.
    Hadamard { dims: usize },
    /// A dense `2^d x 2^d` unitary in row-major order.
    Matrix {
        dims: usize,
        entries: Vec<Complex64>,
    },
}

impl Coin {
    pub fn hadamard(dims: usize) -> Self {
        Coin::Hadamard { dims }
    }

    /// Validates shape and unitarity (`C C^dagger = I` within 1e-12).
    pub fn from_matrix(dims: usize, entries: Vec<Complex64>) -> Result<Self> {
        let size = 1usize << dims;
        if entries.len() != size * size {
            let got = (entries.len() as f64).sqrt() as usize;
            return Err(Error::CoinDimension {
                dims,
                expected: size,
                got,
            });
        }
        let mut deviation = 0.0f64;
        for r in 0..size {
            for c in 0..size {
                let dot: Complex64 = (0..size)
                    .map(|k| entries[r * size + k] * entries[c * size + k].conj())
                    .sum();
                let target = if r == c { 1.0 } else { 0.0 };
                deviation = deviation.max((dot - target).norm());
            }
        }
        if deviation.is_nan() || deviation > 1e-12 {
            return Err(Error::NonUnitaryCoin { deviation });
        }
        Ok(Coin::Matrix { dims, entries })
    }

    /// Dense form of the `d`-fold Hadamard, used to cross-check the
    /// butterfly path.
    pub fn hadamard_matrix(dims: usize) -> Self {
        let size = 1usize << dims;
        let scale = FRAC_1_SQRT_2.powi(dims as i32);
        let entries = (0..size * size)
            .map(|rc| {
                let (r, c) = (rc / size, rc % size);
                let sign = if (r & c).count_ones() % 2 == 0 {
                    1.0
                } else {
                    -1.0
                };
                Complex64::new(sign * scale, 0.0)
            })
            .collect();
        Coin::Matrix { dims, entries }
    }

    pub fn dims(&self) -> usize {
        match self {
            Coin::Hadamard { dims } | Coin::Matrix { dims, .. } => *dims,
        }
    }

    fn apply(&self, coin: &mut [Complex64]) {
        match self {
            Coin::Hadamard { dims } => {
                for p in 0..*dims {
                    let bit = 1usize << p;
                    for c in 0..coin.len() {
                        if c & bit == 0 {
                            let (a, b) = (coin[c], coin[c | bit]);
                            coin[c] = (a + b) * FRAC_1_SQRT_2;
                            coin[c | bit] = (a - b) * FRAC_1_SQRT_2;
                        }
                    }
                }
            }
            Coin::Matrix { entries, .. } => {
                let size = coin.len();
                let input = coin.to_vec();
                for (r, out) in coin.iter_mut().enumerate() {
                    *out = (0..size).map(|k| entries[r * size + k] * input[k]).sum();
                }
            }
        }
    }
}

/// `d`-dimensional walk state: position vector -> `2^d` coin amplitudes.
#[derive(Debug, Clone, PartialEq)]
pub struct CoinedWalkStateND {
    t: u64,
    dims: usize,
    amplitudes: BTreeMap<Vec<i64>, Vec<Complex64>>,
}

impl CoinedWalkStateND {
    /// Walker at the origin with amplitude 1 on coin index `coin`.
    pub fn localized(dims: usize, coin: usize) -> Result<Self> {
        if dims == 0 || dims > 16 {
            return Err(Error::Config(format!(
                "walk dimension {dims} not in 1..=16"
            )));
        }
        let size = 1usize << dims;
        if coin >= size {
            return Err(Error::Config(format!("coin index {coin} >= {size}")));
        }
        let mut amps = vec![ZERO; size];
        amps[coin] = Complex64::new(1.0, 0.0);
        Self::from_origin_coin(dims, amps)
    }

    /// Walker at the origin with arbitrary coin amplitudes.
    pub fn from_origin_coin(dims: usize, coin: Vec<Complex64>) -> Result<Self> {
        if coin.len() != 1usize << dims {
            return Err(Error::Config(format!(
                "expected {} coin amplitudes, got {}",
                1usize << dims,
                coin.len()
            )));
        }
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(vec![0; dims], coin);
        Ok(Self {
            t: 0,
            dims,
            amplitudes,
        })
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn amplitudes(&self) -> &BTreeMap<Vec<i64>, Vec<Complex64>> {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes
            .values()
            .flat_map(|c| c.iter())
            .map(|a| a.norm_sqr())
            .sum()
    }

    /// `psi'_{i;x} = sum_j C_{i;j} psi_{j; x - s(i)}` where
    /// `s(i)_p = (-1)^{i_p}`: the coin acts first, then each coin component
    /// moves one site along every axis.
    pub fn step(&self, coin: &Coin) -> Result<Self> {
        if coin.dims() != self.dims {
            return Err(Error::CoinDimension {
                dims: self.dims,
                expected: 1usize << self.dims,
                got: 1usize << coin.dims(),
            });
        }
        let size = 1usize << self.dims;
        let mut next: BTreeMap<Vec<i64>, Vec<Complex64>> = BTreeMap::new();
        let mut buf = vec![ZERO; size];
        for (x, amps) in &self.amplitudes {
            buf.copy_from_slice(amps);
            coin.apply(&mut buf);
            for (c, &amp) in buf.iter().enumerate() {
                let target: Vec<i64> = x
                    .iter()
                    .enumerate()
                    .map(|(p, &xp)| if c >> p & 1 == 0 { xp + 1 } else { xp - 1 })
                    .collect();
                let slot = next.entry(target).or_insert_with(|| vec![ZERO; size]);
                slot[c] = amp;
            }
        }
        next.retain(|_, amps| amps.iter().any(|a| *a != ZERO));
        Ok(Self {
            t: self.t + 1,
            dims: self.dims,
            amplitudes: next,
        })
    }

    pub fn evolve(&self, coin: &Coin, steps: u64) -> Result<Self> {
        let mut state = self.clone();
        for _ in 0..steps {
            state = state.step(coin)?;
        }
        Ok(state)
    }

    /// Position probabilities summed over the coin register.
    pub fn distribution(&self) -> BTreeMap<Vec<i64>, f64> {
        self.amplitudes
            .iter()
            .map(|(x, amps)| (x.clone(), amps.iter().map(|a| a.norm_sqr()).sum::<f64>()))
            .filter(|&(_, p)| p > 0.0)
            .collect()
    }
}

pub fn step_nd(state: &CoinedWalkStateND, coin: &Coin) -> Result<CoinedWalkStateND> {
    state.step(coin)
}

pub fn distribution_nd(state: &CoinedWalkStateND) -> BTreeMap<Vec<i64>, f64> {
    state.distribution()
}

/// Writes `n,probability` rows sorted by position.
pub fn write_distribution_1d<W: Write>(dist: &BTreeMap<i64, f64>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["n", "probability"])?;
    for (n, p) in dist {
        w.serialize((n, p))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `x1,...,xd,probability` rows sorted by position.
pub fn write_distribution_nd<W: Write>(
    dims: usize,
    dist: &BTreeMap<Vec<i64>, f64>,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header: Vec<String> = (1..=dims).map(|i| format!("x{i}")).collect();
    header.push("probability".into());
    w.write_record(&header)?;
    for (x, p) in dist {
        w.serialize((x, p))?;
    }
    w.flush()?;
    Ok(())
}

/// Classical symmetric random walk estimate `2/sqrt(2 pi t) exp(-n^2/(2t))`
/// (valid for `n + t` even).
pub fn classical_walk_probability(t: u64, n: i64) -> f64 {
    let t = t as f64;
    let n = n as f64;
    2.0 / (2.0 * std::f64::consts::PI * t).sqrt() * (-(n * n) / (2.0 * t)).exp()
}
