//! Piecewise-linear chaotic map and the rules that turn its states into
//! shuffle indices, key bytes and the modulation sequence.
//!
//! The map is the skew tent
//!
//! ```text
//! x' = x / m               for 0 < x < m
//! x' = (1 - x) / (1 - m)   for m <= x < 1
//! ```
//!
//! evaluated in binary64 with a fixed operation order, so a key always
//! yields the same trajectory on every IEEE-754 platform.

use crate::error::{Error, Result};

/// Iterations discarded before the first state is consumed. The first
/// consumed state is therefore the 1000th iterate.
pub const WARM_UP: u64 = 999;

/// Fallback state when the degenerate guard's first repair also lands on
/// the boundary.
const GUARD_FALLBACK: f64 = 0.6180339887;
const GUARD_OFFSET: f64 = 0.123456;

/// Full key material of the cipher.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecretKey {
    /// Initial map state, in (0, 1).
    pub x0: f64,
    /// Map parameter, in (0, 1).
    pub m: f64,
    /// Shuffle stage bounds, strictly increasing and positive.
    pub n1: u32,
    pub n2: u32,
    pub n3: u32,
    pub n4: u32,
    /// Modulation strength, in (0, 1).
    pub alpha: f64,
}

impl Default for SecretKey {
    fn default() -> Self {
        Self {
            x0: 0.123456,
            m: 0.489,
            n1: 1,
            n2: 2,
            n3: 3,
            n4: 4,
            alpha: 0.2,
        }
    }
}

impl SecretKey {
    pub fn validate(&self) -> Result<()> {
        fn open_unit(name: &str, v: f64) -> Result<()> {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::ParameterDomain(format!("{name} = {v} is not in (0, 1)")))
            }
        }
        open_unit("x0", self.x0)?;
        open_unit("m", self.m)?;
        open_unit("alpha", self.alpha)?;
        if !(0 < self.n1 && self.n1 < self.n2 && self.n2 < self.n3 && self.n3 < self.n4) {
            return Err(Error::ParameterDomain(format!(
                "stage bounds must satisfy 0 < n1 < n2 < n3 < n4, got {}, {}, {}, {}",
                self.n1, self.n2, self.n3, self.n4
            )));
        }
        Ok(())
    }

    /// Copy of this key with a different initial state.
    pub fn with_x0(&self, x0: f64) -> Self {
        Self { x0, ..*self }
    }
}

/// One application of the map, including the degenerate-state guard.
#[inline]
pub fn pwlcm(x: f64, m: f64) -> f64 {
    let raw = if 0.0 < x && x < m { x / m } else { (1.0 - x) / (1.0 - m) };
    if raw > 0.0 && raw < 1.0 {
        return raw;
    }
    let repaired = (0.5 * (x + GUARD_OFFSET)).fract();
    if repaired > 0.0 && repaired < 1.0 {
        repaired
    } else {
        GUARD_FALLBACK
    }
}

/// Iterated map state with a running iteration count.
///
/// Not `Clone`: every state is consumed exactly once.
#[derive(Debug)]
pub struct ChaosEngine {
    x: f64,
    m: f64,
    index: u64,
}

impl ChaosEngine {
    /// Validates `key`, then runs the warm-up.
    pub fn new(key: &SecretKey) -> Result<Self> {
        key.validate()?;
        let mut engine = Self {
            x: key.x0,
            m: key.m,
            index: 0,
        };
        for _ in 0..WARM_UP {
            engine.next_state();
        }
        Ok(engine)
    }

    #[inline]
    pub fn next_state(&mut self) -> f64 {
        self.x = pwlcm(self.x, self.m);
        self.index += 1;
        self.x
    }

    /// Iterations performed since construction, warm-up included.
    pub fn index(&self) -> u64 {
        self.index
    }

    /// States handed out after the warm-up.
    pub fn consumed(&self) -> u64 {
        self.index - WARM_UP
    }
}

/// Shuffle position in `[1, k]` from a state: `floor(x * 1e10) mod k + 1`.
pub fn extract_index(x: f64, k: usize) -> Result<usize> {
    if k == 0 {
        return Err(Error::Domain("index range k must be at least 1".into()));
    }
    let scaled = (x * 1e10).floor() as u64;
    Ok((scaled % k as u64) as usize + 1)
}

/// Key byte from a state: `floor(x * 1e15) mod 256`.
#[inline]
pub fn extract_key_byte(x: f64) -> u8 {
    ((x * 1e15).floor() as u64 % 256) as u8
}

/// Per-coefficient modulation data: the 4-digit sequence `y` and the sign
/// bits `s(j) = [y(j) > 0.5]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModSequence {
    quanta: Vec<u16>,
    y: Vec<f64>,
    s: Vec<bool>,
}

/// Smallest and largest admissible value of `y * 10^4`.
pub const MIN_QUANTUM: u16 = 1;
pub const MAX_QUANTUM: u16 = 9999;

impl ModSequence {
    /// Builds the sequence from `y * 10^4` values, clamping each into
    /// `[MIN_QUANTUM, MAX_QUANTUM]`.
    pub fn from_quanta(quanta: impl IntoIterator<Item = u16>) -> Self {
        let quanta: Vec<u16> = quanta.into_iter().map(|q| q.clamp(MIN_QUANTUM, MAX_QUANTUM)).collect();
        let y = quanta.iter().map(|&q| f64::from(q) / 1e4).collect::<Vec<_>>();
        let s = y.iter().map(|&v| v > 0.5).collect();
        Self { quanta, y, s }
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    /// `y(j) * 10^4`, exactly.
    pub fn quanta(&self) -> &[u16] {
        &self.quanta
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn s(&self) -> &[bool] {
        &self.s
    }
}

/// Quantizes a state to four decimals, rounding half away from zero.
#[inline]
pub fn quantize(x: f64) -> u16 {
    (x * 1e4).round().clamp(f64::from(MIN_QUANTUM), f64::from(MAX_QUANTUM)) as u16
}

/// Consumes `p` states and turns them into the modulation sequence.
pub fn make_mod_sequence(engine: &mut ChaosEngine, p: usize) -> ModSequence {
    ModSequence::from_quanta((0..p).map(|_| quantize(engine.next_state())))
}

/// Extends the shuffle-phase key bytes to `total_len`, one fresh state per
/// missing byte.
pub fn make_keystream(engine: &mut ChaosEngine, shuffle_keys: &[u8], total_len: usize) -> Result<Vec<u8>> {
    if total_len < shuffle_keys.len() {
        return Err(Error::Domain(format!(
            "keystream length {total_len} is shorter than the {} shuffle-phase key bytes",
            shuffle_keys.len()
        )));
    }
    let mut stream = Vec::with_capacity(total_len);
    stream.extend_from_slice(shuffle_keys);
    stream.extend((shuffle_keys.len()..total_len).map(|_| extract_key_byte(engine.next_state())));
    Ok(stream)
}
