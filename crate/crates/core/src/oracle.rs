//! Classical stand-in for the search oracle.
//!
//! A vertex is marked when its window weights classify all four XOR
//! patterns correctly. Marking a whole window is exhaustive; the fast path
//! exploits that each hidden neuron depends on only three of the nine
//! weights, so hidden activations are tabulated once per window and the
//! per-vertex work is the linear output neuron alone.

use std::io::{Read, Write};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mlp::{self, MlpWeights, THRESHOLD, XOR};
use crate::weight_space::{VertexIndex, WeightWindow};

/// Default ceiling on the number of vertices enumerated without an explicit
/// override (2^30).
pub const DEFAULT_CAP: u64 = 1 << 30;

/// Windows smaller than this are marked on the calling thread unless a
/// worker count is requested.
const PARALLEL_MIN_SIZE: u64 = 1 << 16;

const BINARY_MAGIC: &[u8; 8] = b"LQWSOL1\0";

/// Sorted indices of the marked vertices of one window.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionSet {
    pub window: WeightWindow,
    pub indices: Vec<VertexIndex>,
}

impl SolutionSet {
    pub fn new(window: WeightWindow, mut indices: Vec<VertexIndex>) -> Result<Self> {
        let size = window.size()?;
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&i| i >= size) {
            return Err(Error::IndexOutOfRange { index: bad, size });
        }
        Ok(Self { window, indices })
    }

    pub fn k(&self) -> u64 {
        self.indices.len() as u64
    }

    pub fn contains(&self, idx: VertexIndex) -> bool {
        self.indices.binary_search(&idx).is_ok()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: SolutionSet = serde_json::from_str(text)?;
        let strictly_increasing = raw.indices.windows(2).all(|p| p[0] < p[1]);
        if !strictly_increasing {
            return Err(Error::Format("indices are not strictly increasing".into()));
        }
        Self::new(raw.window, raw.indices)
    }

    /// Little-endian binary layout:
    ///
    /// ```text
    /// magic   8 bytes  "LQWSOL1\0"
    /// w       u64
    /// z       u64
    /// delta_p f64
    /// origin  w x i64
    /// count   u64
    /// deltas  count x u64   (first relative to 0, then gaps between indices)
    /// ```
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(BINARY_MAGIC)?;
        out.write_all(&(self.window.w as u64).to_le_bytes())?;
        out.write_all(&u64::from(self.window.z).to_le_bytes())?;
        out.write_all(&self.window.delta_p.to_le_bytes())?;
        for o in &self.window.origin {
            out.write_all(&o.to_le_bytes())?;
        }
        out.write_all(&self.k().to_le_bytes())?;
        let mut prev = 0;
        for &idx in &self.indices {
            out.write_all(&(idx - prev).to_le_bytes())?;
            prev = idx;
        }
        Ok(())
    }

    pub fn read_binary<R: Read>(mut input: R) -> Result<Self> {
        let mut magic = [0u8; 8];
        input.read_exact(&mut magic)?;
        if &magic != BINARY_MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let mut word = [0u8; 8];
        let mut next = |input: &mut R| -> Result<[u8; 8]> {
            input.read_exact(&mut word)?;
            Ok(word)
        };
        let w = u64::from_le_bytes(next(&mut input)?) as usize;
        let z = u32::try_from(u64::from_le_bytes(next(&mut input)?))
            .map_err(|_| Error::Format("z out of range".into()))?;
        let delta_p = f64::from_le_bytes(next(&mut input)?);
        if w > 1 << 16 {
            return Err(Error::Format(format!("implausible dimension {w}")));
        }
        let origin = (0..w)
            .map(|_| next(&mut input).map(i64::from_le_bytes))
            .collect::<Result<Vec<_>>>()?;
        let window = WeightWindow::new(w, z, delta_p, origin)?;
        let count = u64::from_le_bytes(next(&mut input)?);
        let size = window.size()?;
        if count > size {
            return Err(Error::Format(format!(
                "{count} solutions in a window of {size}"
            )));
        }
        let mut indices = Vec::with_capacity(count as usize);
        let mut prev = 0u64;
        for i in 0..count {
            let delta = u64::from_le_bytes(next(&mut input)?);
            if i > 0 && delta == 0 {
                return Err(Error::Format("duplicate index".into()));
            }
            prev = prev
                .checked_add(delta)
                .ok_or_else(|| Error::Format("index overflow".into()))?;
            indices.push(prev);
        }
        Self::new(window, indices)
    }
}

fn check_xor_window(window: &WeightWindow) -> Result<()> {
    if window.w != MlpWeights::LEN {
        return Err(Error::Config(format!(
            "XOR oracle needs a {}-dimensional window, got {}",
            MlpWeights::LEN,
            window.w
        )));
    }
    Ok(())
}

/// True iff the vertex's weights classify XOR without error.
pub fn evaluate_vertex(idx: VertexIndex, window: &WeightWindow) -> Result<bool> {
    check_xor_window(window)?;
    let weights = MlpWeights::from_slice(&window.index_to_weights(idx)?)?;
    Ok(mlp::classification_error(&weights) == 0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerateOptions {
    pub cap: u64,
    pub allow_large: bool,
    /// Worker threads. `None` runs small windows serially and large ones on
    /// the global rayon pool; `Some(n)` always uses a dedicated pool of `n`.
    pub jobs: Option<usize>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            allow_large: false,
            jobs: None,
        }
    }
}

/// Straightforward serial enumeration through [`evaluate_vertex`].
pub fn enumerate_reference(window: &WeightWindow) -> Result<SolutionSet> {
    check_xor_window(window)?;
    let size = window.size()?;
    let mut indices = Vec::new();
    for idx in 0..size {
        if evaluate_vertex(idx, window)? {
            indices.push(idx);
        }
    }
    SolutionSet::new(window.clone(), indices)
}

/// Hidden activations for every combination of one neuron's three weights,
/// indexed `c0 + z c1 + z^2 c2`, one value per XOR pattern.
fn hidden_table(window: &WeightWindow, first_dim: usize) -> Vec<[f64; 4]> {
    let v0 = window.axis_values(first_dim);
    let v1 = window.axis_values(first_dim + 1);
    let v2 = window.axis_values(first_dim + 2);
    let mut table = Vec::with_capacity(v0.len().pow(3));
    for &bias in &v2 {
        for &w1 in &v1 {
            for &w0 in &v0 {
                table.push(XOR.map(|(x0, x1, _)| mlp::hidden(w0, w1, bias, x0, x1)));
            }
        }
    }
    table
}

fn enumerate_fast(window: &WeightWindow, parallel: bool) -> Vec<VertexIndex> {
    let h1 = hidden_table(window, 0);
    let h2 = hidden_table(window, 3);
    let out0 = window.axis_values(6);
    let out1 = window.axis_values(7);
    let out2 = window.axis_values(8);
    let z = window.z as usize;
    let block = h1.len() as u64;
    let targets = XOR.map(|(_, _, t)| t >= THRESHOLD);

    let chunk = |c: usize| {
        let w20 = out0[c % z];
        let w21 = out1[(c / z) % z];
        let w22 = out2[c / (z * z)];
        let mut found = Vec::new();
        for (b, hb) in h2.iter().enumerate() {
            let base = (c as u64 * block + b as u64) * block;
            for (a, ha) in h1.iter().enumerate() {
                let ok = (0..4)
                    .all(|p| (mlp::output(w20, w21, w22, ha[p], hb[p]) >= THRESHOLD) == targets[p]);
                if ok {
                    found.push(base + a as u64);
                }
            }
        }
        found
    };
    if parallel {
        (0..z * z * z)
            .into_par_iter()
            .flat_map_iter(chunk)
            .collect()
    } else {
        (0..z * z * z).flat_map(chunk).collect()
    }
}

/// Exhaustive marking of a window.
///
/// Work is split over output-neuron weight combinations; chunks are
/// concatenated in index order so the result does not depend on the number
/// of workers.
pub fn enumerate_solutions(window: &WeightWindow, opts: &EnumerateOptions) -> Result<SolutionSet> {
    check_xor_window(window)?;
    let size = window.size()?;
    if size > opts.cap && !opts.allow_large {
        return Err(Error::ResourceCap {
            size,
            cap: opts.cap,
        });
    }
    let indices = match opts.jobs {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::Config(e.to_string()))?
            .install(|| enumerate_fast(window, true)),
        None => enumerate_fast(window, size >= PARALLEL_MIN_SIZE),
    };
    debug_assert!(indices.windows(2).all(|p| p[0] < p[1]));
    Ok(SolutionSet {
        window: window.clone(),
        indices,
    })
}

pub fn count_solutions(s: &SolutionSet) -> u64 {
    s.k()
}
