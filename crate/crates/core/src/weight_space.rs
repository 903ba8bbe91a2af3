//! Finite hypercubic windows over the infinite integer weight lattice.
//!
//! A window holds `z` points per dimension across `w` dimensions, so
//! `N = z^w` vertices. Flat vertex indices are mixed-radix base `z` with
//! dimension 0 least significant. A lattice point with window coordinates
//! `c` maps to the synaptic weights
//!
//! ```text
//! weight_j = delta_p * (origin_j + c_j - floor(z / 2))
//! ```
//!
//! so the walker starts at the window centre. For even `z` the span is the
//! half-open `{-z/2, ..., z/2 - 1}` around the origin.
//!
//! `N` is carried as `u64`; `z = 8, w = 9` gives `134_217_728` and anything
//! past `u64::MAX` is reported as [`Error::WindowOverflow`].

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

pub type VertexIndex = u64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightWindow {
    pub w: usize,
    pub z: u32,
    pub delta_p: f64,
    pub origin: Vec<i64>,
}

impl WeightWindow {
    pub fn new(w: usize, z: u32, delta_p: f64, origin: Vec<i64>) -> Result<Self> {
        if w == 0 {
            return Err(Error::Config("window dimension w must be >= 1".into()));
        }
        if z == 0 {
            return Err(Error::Config("points per dimension z must be >= 1".into()));
        }
        if !(delta_p > 0.0 && delta_p.is_finite()) {
            return Err(Error::Config(format!(
                "delta_p must be positive, got {delta_p}"
            )));
        }
        if origin.len() != w {
            return Err(Error::Config(format!(
                "origin has {} components, expected {w}",
                origin.len()
            )));
        }
        let window = Self {
            w,
            z,
            delta_p,
            origin,
        };
        window.size()?;
        Ok(window)
    }

    /// Window centred on the lattice origin.
    pub fn centered(w: usize, z: u32, delta_p: f64) -> Result<Self> {
        Self::new(w, z, delta_p, vec![0; w])
    }

    /// `z^w`.
    pub fn size(&self) -> Result<u64> {
        u32::try_from(self.w)
            .ok()
            .and_then(|w| u64::from(self.z).checked_pow(w))
            .ok_or(Error::WindowOverflow {
                z: self.z,
                w: self.w,
            })
    }

    pub fn centering(&self) -> i64 {
        i64::from(self.z / 2)
    }

    pub fn index_to_coords(&self, idx: VertexIndex) -> Result<Vec<u32>> {
        let size = self.size()?;
        if idx >= size {
            return Err(Error::IndexOutOfRange { index: idx, size });
        }
        let z = u64::from(self.z);
        let mut rest = idx;
        Ok((0..self.w)
            .map(|_| {
                let c = (rest % z) as u32;
                rest /= z;
                c
            })
            .collect())
    }

    pub fn coords_to_index(&self, coords: &[u32]) -> Result<VertexIndex> {
        if coords.len() != self.w || coords.iter().any(|&c| c >= self.z) {
            return Err(Error::CoordsOutOfRange(coords.to_vec()));
        }
        let z = u64::from(self.z);
        Ok(coords
            .iter()
            .rev()
            .fold(0u64, |acc, &c| acc * z + u64::from(c)))
    }

    /// Integer lattice position of a window coordinate along dimension `j`.
    pub fn lattice_index(&self, j: usize, coord: u32) -> i64 {
        self.origin[j] + i64::from(coord) - self.centering()
    }

    pub fn coords_to_weights(&self, coords: &[u32]) -> Result<Vec<f64>> {
        if coords.len() != self.w || coords.iter().any(|&c| c >= self.z) {
            return Err(Error::CoordsOutOfRange(coords.to_vec()));
        }
        Ok(coords
            .iter()
            .enumerate()
            .map(|(j, &c)| self.delta_p * self.lattice_index(j, c) as f64)
            .collect())
    }

    pub fn index_to_weights(&self, idx: VertexIndex) -> Result<Vec<f64>> {
        self.coords_to_weights(&self.index_to_coords(idx)?)
    }

    /// The `z` weight values available along dimension `j`, in coordinate
    /// order.
    pub fn axis_values(&self, j: usize) -> Vec<f64> {
        (0..self.z)
            .map(|c| self.delta_p * self.lattice_index(j, c) as f64)
            .collect()
    }

    /// The window displaced by `z` times the `shift_index`-th block offset
    /// (see [`block_offset`]).
    pub fn shifted(&self, shift_index: u64) -> Result<Self> {
        let offset = block_offset(self.w, shift_index)?;
        let z = i64::from(self.z);
        let origin = self
            .origin
            .iter()
            .zip(&offset)
            .map(|(o, d)| o + z * d)
            .collect();
        Ok(Self {
            origin,
            ..self.clone()
        })
    }
}

pub fn window_size(window: &WeightWindow) -> Result<u64> {
    window.size()
}

pub fn index_to_coords(idx: VertexIndex, window: &WeightWindow) -> Result<Vec<u32>> {
    window.index_to_coords(idx)
}

pub fn coords_to_weights(coords: &[u32], window: &WeightWindow) -> Result<Vec<f64>> {
    window.coords_to_weights(coords)
}

pub fn shift_window(window: &WeightWindow, shift_index: u64) -> Result<WeightWindow> {
    window.shifted(shift_index)
}

/// Origin drawn uniformly from `[-z, z]^w` on the `window` sub-stream of
/// `seed`.
pub fn random_window(w: usize, z: u32, delta_p: f64, seed: u64) -> Result<WeightWindow> {
    let mut r = rng::substream(seed, rng::WINDOW);
    random_window_with(w, z, delta_p, &mut r)
}

pub fn random_window_with(
    w: usize,
    z: u32,
    delta_p: f64,
    rng: &mut ChaCha20Rng,
) -> Result<WeightWindow> {
    let bound = i64::from(z);
    let origin = (0..w).map(|_| rng.gen_range(-bound..=bound)).collect();
    WeightWindow::new(w, z, delta_p, origin)
}

/// Position of a value inside a ring coordinate ordering
/// `0, 1, -1, 2, -2, ...`.
fn value_rank(v: i64) -> u64 {
    if v > 0 {
        2 * v as u64 - 1
    } else {
        2 * v.unsigned_abs()
    }
}

fn rank_value(d: u64) -> i64 {
    if d % 2 == 1 {
        d.div_ceil(2) as i64
    } else {
        -((d / 2) as i64)
    }
}

fn ring_size(w: u32, r: u64) -> Option<u128> {
    let outer = u128::from(2 * r + 1).checked_pow(w)?;
    let inner = if r == 0 {
        0
    } else {
        u128::from(2 * r - 1).checked_pow(w)?
    };
    Some(outer - inner)
}

/// Block offset (in units of `z`) of the `shift_index`-th window.
///
/// Offsets are enumerated ring by ring in increasing Chebyshev distance from
/// the start block. Inside a ring the order is lexicographic with the last
/// dimension most significant and coordinate values ordered
/// `0, 1, -1, 2, -2, ...`, so index 1 is `(1, 0, ..., 0)`.
pub fn block_offset(w: usize, shift_index: u64) -> Result<Vec<i64>> {
    let wu = u32::try_from(w).map_err(|_| Error::Config("dimension too large".into()))?;
    let overflow = || {
        Error::Config(format!(
            "shift index {shift_index} overflows ring arithmetic"
        ))
    };
    let mut remaining = u128::from(shift_index);
    let mut r = 0u64;
    loop {
        let size = ring_size(wu, r).ok_or_else(overflow)?;
        if remaining < size {
            break;
        }
        remaining -= size;
        r += 1;
    }
    if r == 0 {
        return Ok(vec![0; w]);
    }
    // Unrank `remaining` among digit strings over 0..=2r (digit = value rank)
    // that contain at least one digit >= 2r - 1, i.e. a coordinate of
    // magnitude r. Most significant digit is the last dimension.
    let base = u128::from(2 * r + 1);
    let inner = u128::from(2 * r - 1);
    let mut digits = vec![0u64; w];
    let mut hit = false;
    for pos in (0..w).rev() {
        let free = pos as u32;
        let all = base.checked_pow(free).ok_or_else(overflow)?;
        let without = inner.checked_pow(free).ok_or_else(overflow)?;
        let mut chosen = None;
        for d in 0..=2 * r {
            let on_ring = hit || d >= 2 * r - 1;
            let count = if on_ring { all } else { all - without };
            if remaining < count {
                chosen = Some((d, on_ring));
                break;
            }
            remaining -= count;
        }
        let (d, on_ring) = chosen.ok_or_else(overflow)?;
        digits[pos] = d;
        hit = on_ring;
    }
    Ok(digits.into_iter().map(rank_value).collect())
}

/// Inverse of [`block_offset`].
pub fn block_shift_index(offset: &[i64]) -> Result<u64> {
    let w = offset.len();
    let wu = u32::try_from(w).map_err(|_| Error::Config("dimension too large".into()))?;
    let overflow = || Error::Config("offset overflows ring arithmetic".into());
    let r = offset.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0);
    let mut index: u128 = 0;
    for ring in 0..r {
        index += ring_size(wu, ring).ok_or_else(overflow)?;
    }
    if r == 0 {
        return Ok(0);
    }
    let base = u128::from(2 * r + 1);
    let inner = u128::from(2 * r - 1);
    let mut hit = false;
    for pos in (0..w).rev() {
        let free = pos as u32;
        let all = base.checked_pow(free).ok_or_else(overflow)?;
        let without = inner.checked_pow(free).ok_or_else(overflow)?;
        let target = value_rank(offset[pos]);
        for d in 0..target {
            let on_ring = hit || d >= 2 * r - 1;
            index += if on_ring { all } else { all - without };
        }
        hit = hit || target >= 2 * r - 1;
    }
    u64::try_from(index).map_err(|_| overflow())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn sizes() {
        for (z, n) in [(2, 512u64), (4, 262_144), (8, 134_217_728)] {
            assert_eq!(
                WeightWindow::centered(9, z, 0.5).unwrap().size().unwrap(),
                n
            );
        }
        assert!(matches!(
            WeightWindow::centered(64, 2, 0.5),
            Err(Error::WindowOverflow { .. })
        ));
    }

    #[test]
    fn rejects_bad_windows() {
        assert!(WeightWindow::centered(9, 2, 0.0).is_err());
        assert!(WeightWindow::centered(9, 2, -0.5).is_err());
        assert!(WeightWindow::new(9, 2, 0.5, vec![0; 8]).is_err());
    }

    #[test]
    fn coords_codec() {
        let win = WeightWindow::centered(9, 4, 0.5).unwrap();
        assert_eq!(win.index_to_coords(0).unwrap(), vec![0; 9]);
        assert_eq!(win.index_to_coords(262_143).unwrap(), vec![3; 9]);
        assert_eq!(
            win.index_to_coords(7).unwrap(),
            vec![3, 1, 0, 0, 0, 0, 0, 0, 0]
        );
        assert!(matches!(
            win.index_to_coords(262_144),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(win.coords_to_index(&[4, 0, 0, 0, 0, 0, 0, 0, 0]).is_err());
    }

    #[test]
    fn codec_round_trip_exhaustive() {
        let win = WeightWindow::centered(5, 16, 1.0).unwrap(); // 2^20
        for idx in 0..win.size().unwrap() {
            let c = win.index_to_coords(idx).unwrap();
            assert_eq!(win.coords_to_index(&c).unwrap(), idx);
        }
    }

    #[test]
    fn weights_are_centred() {
        let win = WeightWindow::centered(9, 2, 0.5).unwrap();
        assert_eq!(win.coords_to_weights(&[0; 9]).unwrap(), vec![-0.5; 9]);
        assert_eq!(win.coords_to_weights(&[1; 9]).unwrap(), vec![0.0; 9]);

        let odd = WeightWindow::centered(3, 5, 1.0).unwrap();
        assert_eq!(odd.axis_values(0), vec![-2.0, -1.0, 0.0, 1.0, 2.0]);
    }

    #[test]
    fn first_shift_moves_along_dimension_zero() {
        let win = WeightWindow::centered(2, 4, 1.0).unwrap();
        assert_eq!(win.shifted(0).unwrap().origin, vec![0, 0]);
        assert_eq!(win.shifted(1).unwrap().origin, vec![4, 0]);
        assert_eq!(win.shifted(2).unwrap().origin, vec![-4, 0]);
        assert_eq!(block_offset(2, 3).unwrap(), vec![0, 1]);
        assert_eq!(block_offset(2, 9).unwrap(), vec![2, 0]);
    }

    #[test]
    fn first_rings_tile_a_cube() {
        for w in 1..=4usize {
            let count = 3u64.pow(w as u32);
            let offsets: HashSet<Vec<i64>> =
                (0..count).map(|i| block_offset(w, i).unwrap()).collect();
            assert_eq!(offsets.len() as u64, count);
            assert!(offsets.iter().all(|o| o.iter().all(|v| v.abs() <= 1)));
            for i in 0..count + 20 {
                let o = block_offset(w, i).unwrap();
                assert_eq!(block_shift_index(&o).unwrap(), i);
            }
        }
    }

    #[test]
    fn random_windows() {
        let a = random_window(9, 2, 0.5, 11).unwrap();
        let b = random_window(9, 2, 0.5, 11).unwrap();
        let c = random_window(9, 2, 0.5, 12).unwrap();
        assert_eq!(a, b);
        assert_ne!(a.origin, c.origin);
        for seed in 0..1000 {
            let win = random_window(9, 4, 0.5, seed).unwrap();
            assert!(win.origin.iter().all(|o| (-4..=4).contains(o)));
        }
    }

    #[test]
    fn json_shape() {
        let win = WeightWindow::new(2, 2, 0.5, vec![1, -1]).unwrap();
        assert_eq!(
            serde_json::to_string(&win).unwrap(),
            r#"{"w":2,"z":2,"delta_p":0.5,"origin":[1,-1]}"#
        );
    }
}
