//! Lackadaisical quantum walk search on the complete graph, simulated in the
//! four-dimensional invariant subspace spanned by
//!
//! * `AA`: solution vertices pointing at solutions (including self-loops),
//! * `AB`: solution vertices pointing at non-solutions,
//! * `BA`: non-solution vertices pointing at solutions,
//! * `BB`: non-solution vertices pointing at non-solutions (including
//!   self-loops).
//!
//! The basis order is fixed as `(AA, AB, BA, BB)` throughout. All amplitudes
//! are real.
//!
//! For a single solution (`k = 1`) the phase angle reduces to
//! `cos(phi) = (N + l - 3)/(N + l - 1)`. Some published write-ups print the
//! numerator as `N - l - 3`, which is not compatible with
//! `sin(phi) = 2 sqrt(N + l - 2)/(N + l - 1)`; the unitary form is used here.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Graph size, solution count and self-loops per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WalkParams {
    n: u64,
    k: u64,
    l: u64,
}

impl WalkParams {
    /// Requires `1 <= k < N` and `l >= 1`.
    pub fn new(n: u64, k: u64, l: u64) -> Result<Self> {
        if k == 0 || k >= n {
            return Err(Error::InvalidParams(format!(
                "solution count k={k} must satisfy 1 <= k < N={n}"
            )));
        }
        if l == 0 {
            return Err(Error::InvalidParams(
                "self-loop count l must be >= 1".into(),
            ));
        }
        Ok(Self { n, k, l })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn l(&self) -> u64 {
        self.l
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Angles {
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub cos_phi: f64,
    pub sin_phi: f64,
}

/// Closed-form angles for `k` solutions and `l` self-loops. No inverse
/// trigonometric round trips, so precision holds for large `N`.
pub fn angles(params: &WalkParams) -> Angles {
    let n = params.n as f64;
    let k = params.k as f64;
    let l = params.l as f64;
    let denom = n + l - 1.0;
    Angles {
        cos_theta: (n - 2.0 * k - l + 1.0) / denom,
        sin_theta: 2.0 * ((n - k) * (k + l - 1.0)).sqrt() / denom,
        cos_phi: (n - 2.0 * k + l - 1.0) / denom,
        sin_phi: 2.0 * (k * (n - k + l - 1.0)).sqrt() / denom,
    }
}

/// Real 4x4 evolution operator in basis order `(AA, AB, BA, BB)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolutionOperator(pub [[f64; 4]; 4]);

impl EvolutionOperator {
    /// Oracle sign flip on solution vertices followed by the edge swap
    /// `|x>|x->y> -> |y>|y->x>`:
    ///
    /// ```text
    ///  [  cos t  -sin t     0       0   ]
    ///  [    0       0    -cos p   sin p ]
    ///  [ -sin t  -cos t     0       0   ]
    ///  [    0       0     sin p   cos p ]
    /// ```
    pub fn from_angles(a: &Angles) -> Self {
        Self([
            [a.cos_theta, -a.sin_theta, 0.0, 0.0],
            [0.0, 0.0, -a.cos_phi, a.sin_phi],
            [-a.sin_theta, -a.cos_theta, 0.0, 0.0],
            [0.0, 0.0, a.sin_phi, a.cos_phi],
        ])
    }

    pub fn for_params(params: &WalkParams) -> Self {
        Self::from_angles(&angles(params))
    }

    pub fn apply(&self, s: &FourStateVector) -> FourStateVector {
        let m = &self.0;
        let v = &s.0;
        let mut out = [0.0; 4];
        for (r, o) in out.iter_mut().enumerate() {
            *o = m[r][0] * v[0] + m[r][1] * v[1] + m[r][2] * v[2] + m[r][3] * v[3];
        }
        FourStateVector(out)
    }

    /// Largest entry of `|U U^T - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let m = &self.0;
        let mut worst = 0.0f64;
        for r in 0..4 {
            for c in 0..4 {
                let dot: f64 = (0..4).map(|k| m[r][k] * m[c][k]).sum();
                let target = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

pub fn build_operator(a: &Angles) -> EvolutionOperator {
    EvolutionOperator::from_angles(a)
}

/// Real amplitudes `(AA, AB, BA, BB)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FourStateVector(pub [f64; 4]);

impl FourStateVector {
    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }

    pub fn amplitude(&self, outcome: Outcome) -> f64 {
        self.0[outcome as usize]
    }
}

/// Uniform superposition over all `N (N + l - 1)` directed edge states,
/// expressed in the collapsed basis.
pub fn initial_state(params: &WalkParams) -> FourStateVector {
    let n = params.n as f64;
    let k = params.k as f64;
    let l = params.l as f64;
    let scale = (n * (n + l - 1.0)).sqrt();
    let cross = (k * (n - k)).sqrt() / scale;
    FourStateVector([
        (k * (k + l - 1.0)).sqrt() / scale,
        cross,
        cross,
        ((n - k) * (n - k + l - 1.0)).sqrt() / scale,
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rounding {
    Floor,
    #[default]
    Ceiling,
    Nearest,
}

impl Rounding {
    pub fn apply(self, x: f64) -> u64 {
        let r = match self {
            Rounding::Floor => x.floor(),
            Rounding::Ceiling => x.ceil(),
            Rounding::Nearest => x.round(),
        };
        r.max(0.0) as u64
    }
}

impl FromStr for Rounding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floor" => Ok(Rounding::Floor),
            "ceiling" | "ceil" => Ok(Rounding::Ceiling),
            "nearest" => Ok(Rounding::Nearest),
            other => Err(Error::Config(format!("unknown rounding mode {other:?}"))),
        }
    }
}

impl fmt::Display for Rounding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rounding::Floor => "floor",
            Rounding::Ceiling => "ceiling",
            Rounding::Nearest => "nearest",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepCount {
    pub t_real: f64,
    pub t_int: u64,
}

/// `t = pi sqrt(N) / sqrt(2 (2k + l - 1))`.
pub fn steps_to_max(params: &WalkParams, rounding: Rounding) -> StepCount {
    let n = params.n as f64;
    let k = params.k as f64;
    let l = params.l as f64;
    let t_real = std::f64::consts::PI * n.sqrt() / (2.0 * (2.0 * k + l - 1.0)).sqrt();
    StepCount {
        t_real,
        t_int: rounding.apply(t_real),
    }
}

pub fn evolve(state: &FourStateVector, op: &EvolutionOperator, steps: u64) -> FourStateVector {
    let mut s = *state;
    for _ in 0..steps {
        s = op.apply(&s);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Outcome {
    AA = 0,
    AB = 1,
    BA = 2,
    BB = 3,
}

impl Outcome {
    pub const ALL: [Outcome; 4] = [Outcome::AA, Outcome::AB, Outcome::BA, Outcome::BB];

    /// The walker sits on a solution vertex.
    pub fn is_solution(self) -> bool {
        matches!(self, Outcome::AA | Outcome::AB)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Born-rule probabilities `lambda_m^2`.
pub fn outcome_probabilities(state: &FourStateVector) -> [f64; 4] {
    state.0.map(|x| x * x)
}

/// Draws one measurement outcome. A single uniform draw is compared against
/// the cumulative probabilities, so zero-probability outcomes never occur.
pub fn sample_outcome<R: Rng + ?Sized>(state: &FourStateVector, rng: &mut R) -> Outcome {
    let p = outcome_probabilities(state);
    let total: f64 = p.iter().sum();
    let u = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let mut last = Outcome::AA;
    for (outcome, pm) in Outcome::ALL.into_iter().zip(p) {
        if pm <= 0.0 {
            continue;
        }
        acc += pm;
        last = outcome;
        if u < acc {
            return outcome;
        }
    }
    last
}

/// Outcome probabilities at `t = 0..=steps`.
pub fn probability_trace(params: &WalkParams, steps: u64) -> Vec<[f64; 4]> {
    let op = EvolutionOperator::for_params(params);
    let mut s = initial_state(params);
    let mut trace = Vec::with_capacity(steps as usize + 1);
    trace.push(outcome_probabilities(&s));
    for _ in 0..steps {
        s = op.apply(&s);
        trace.push(outcome_probabilities(&s));
    }
    trace
}

/// Writes `t,p_AA,p_AB,p_BA,p_BB`.
pub fn write_trace<W: Write>(trace: &[[f64; 4]], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "p_AA", "p_AB", "p_BA", "p_BB"])?;
    for (t, p) in trace.iter().enumerate() {
        w.serialize((t, p[0], p[1], p[2], p[3]))?;
    }
    w.flush()?;
    Ok(())
}
