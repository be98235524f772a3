//! Staged chaotic Fisher–Yates shuffling of the sub-band planes.
//!
//! Stage `ξ` (1-based) touches a shrinking set of planes: all four while
//! `ξ <= n1`, then H/V/A, then V/A, and only the approximation plane for
//! `n3 < ξ <= n4`. Every stage draws `p - 1` positions, `k` running from
//! `p` down to 2, so position 1 is never the `k` side of a swap.

use crate::chaos::{extract_index, extract_key_byte, ChaosEngine, SecretKey};
use crate::error::{Error, Result};
use crate::wavelet::{Plane, SubBands};

/// One transposition of 1-based positions `k` and `m`, with `1 <= m <= k`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Swap {
    pub k: usize,
    pub m: usize,
}

/// Planes swapped during stage `stage` (1-based) for the bounds `n`.
pub fn planes_for_stage(stage: u32, n: [u32; 4]) -> &'static [Plane] {
    const ALL: [Plane; 4] = [Plane::Diagonal, Plane::Horizontal, Plane::Vertical, Plane::Approx];
    if stage <= n[0] {
        &ALL
    } else if stage <= n[1] {
        &ALL[1..]
    } else if stage <= n[2] {
        &ALL[2..]
    } else if stage <= n[3] {
        &ALL[3..]
    } else {
        &[]
    }
}

/// The recorded swap lists for every stage plus the key bytes drawn
/// alongside them, in consumption order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleSchedule {
    p: usize,
    bounds: [u32; 4],
    stages: Vec<Vec<Swap>>,
    key_bytes: Vec<u8>,
}

impl ShuffleSchedule {
    /// Draws the schedule from the engine: one state per swap, which also
    /// supplies one key byte.
    pub fn build(engine: &mut ChaosEngine, p: usize, key: &SecretKey) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain(format!(
                "shuffle needs at least 2 elements per plane, got {p}"
            )));
        }
        let stages_n = key.n4 as usize;
        let mut stages = Vec::with_capacity(stages_n);
        let mut key_bytes = Vec::with_capacity(stages_n * (p - 1));
        for _ in 0..stages_n {
            let mut swaps = Vec::with_capacity(p - 1);
            for count in 1..p {
                let x = engine.next_state();
                let k = p - count + 1;
                let m = extract_index(x, k)?;
                swaps.push(Swap { k, m });
                key_bytes.push(extract_key_byte(x));
            }
            stages.push(swaps);
        }
        Ok(Self {
            p,
            bounds: [key.n1, key.n2, key.n3, key.n4],
            stages,
            key_bytes,
        })
    }

    /// A schedule whose every swap is a self-swap (`m = k`).
    pub fn identity(p: usize, bounds: [u32; 4]) -> Self {
        let stages = (0..bounds[3])
            .map(|_| (2..=p).rev().map(|k| Swap { k, m: k }).collect())
            .collect();
        Self {
            p,
            bounds,
            stages,
            key_bytes: vec![0; bounds[3] as usize * p.saturating_sub(1)],
        }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn bounds(&self) -> [u32; 4] {
        self.bounds
    }

    pub fn stages(&self) -> &[Vec<Swap>] {
        &self.stages
    }

    pub fn key_bytes(&self) -> &[u8] {
        &self.key_bytes
    }

    /// Number of stages each plane takes part in.
    pub fn participation(&self, plane: Plane) -> usize {
        (1..=self.stages.len() as u32)
            .filter(|&s| planes_for_stage(s, self.bounds).contains(&plane))
            .count()
    }

    fn check(&self, bands: &SubBands) -> Result<()> {
        bands.check_shape()?;
        if bands.plane_len() != self.p {
            return Err(Error::Shape(format!(
                "schedule built for {} coefficients per plane, bands hold {}",
                self.p,
                bands.plane_len()
            )));
        }
        Ok(())
    }

    pub fn shuffle(&self, bands: &mut SubBands) -> Result<()> {
        self.check(bands)?;
        for (stage, swaps) in (1u32..).zip(&self.stages) {
            for &plane in planes_for_stage(stage, self.bounds) {
                shuffle_plane(bands.plane_mut(plane), swaps)?;
            }
        }
        Ok(())
    }

    pub fn unshuffle(&self, bands: &mut SubBands) -> Result<()> {
        self.check(bands)?;
        for (i, swaps) in self.stages.iter().enumerate().rev() {
            let stage = i as u32 + 1;
            for &plane in planes_for_stage(stage, self.bounds) {
                unshuffle_plane(bands.plane_mut(plane), swaps)?;
            }
        }
        Ok(())
    }
}

fn check_swap(len: usize, s: Swap) -> Result<()> {
    if s.m == 0 || s.m > s.k || s.k > len {
        return Err(Error::Shape(format!(
            "swap ({}, {}) out of range for length {len}",
            s.k, s.m
        )));
    }
    Ok(())
}

/// Applies the swaps in order.
pub fn shuffle_plane<T>(values: &mut [T], swaps: &[Swap]) -> Result<()> {
    for &s in swaps {
        check_swap(values.len(), s)?;
        values.swap(s.k - 1, s.m - 1);
    }
    Ok(())
}

/// Applies the swaps last to first.
pub fn unshuffle_plane<T>(values: &mut [T], swaps: &[Swap]) -> Result<()> {
    for &s in swaps.iter().rev() {
        check_swap(values.len(), s)?;
        values.swap(s.k - 1, s.m - 1);
    }
    Ok(())
}
