//! End-to-end encryption and decryption, and the on-disk cipher container.
//!
//! Encryption order:
//! dwt2 → staged shuffle → sign flip → modulate → idwt2 → binary32 stream
//! → self diffusion → keyed mixing. Decryption runs the exact reverse and
//! regenerates every key-derived sequence from the key alone.

use std::ops::Range;

use crate::chaos::{make_keystream, make_mod_sequence, ChaosEngine, ModSequence, SecretKey, WARM_UP};
use crate::error::{ContainerError, Error, Result};
use crate::image::{GrayImage, RealField};
use crate::modulate::{demodulate, modulate, sign_flip};
use crate::permute::ShuffleSchedule;
use crate::stream::{deserialize, inverse_self_diffuse, mix, self_diffuse, serialize, unmix, BYTES_PER_VALUE};
use crate::wavelet::{dwt2, dwt2_field, idwt2};

pub const MAGIC: [u8; 4] = *b"CWC1";
pub const VERSION: u8 = 1;
pub const HEADER_LEN: usize = 14;

/// Payload encoding of a [`CipherBlob`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum Mode {
    /// Lossless binary32 field, four bytes per pixel.
    Exact = 0,
}

/// Cipher container:
///
/// ```text
/// offset  size  field
///      0     4  magic "CWC1"
///      4     1  version (1)
///      5     4  rows M, u32 big-endian
///      9     4  cols N, u32 big-endian
///     13     1  mode (0 = exact)
///     14  4·M·N payload
/// ```
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CipherBlob {
    rows: u32,
    cols: u32,
    mode: Mode,
    payload: Vec<u8>,
}

impl CipherBlob {
    pub fn new(rows: u32, cols: u32, payload: Vec<u8>) -> std::result::Result<Self, ContainerError> {
        if rows == 0 || cols == 0 || !rows.is_multiple_of(2) || !cols.is_multiple_of(2) {
            return Err(ContainerError::Dimensions { rows, cols });
        }
        let expected = rows as usize * cols as usize * BYTES_PER_VALUE;
        if payload.len() != expected {
            return Err(ContainerError::PayloadLength {
                expected,
                found: payload.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            mode: Mode::Exact,
            payload,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows as usize
    }

    pub fn cols(&self) -> usize {
        self.cols as usize
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn payload(&self) -> &[u8] {
        &self.payload
    }

    /// The first M·N payload bytes as an M×N image, used for display and
    /// for image-shaped statistics.
    pub fn display_plane(&self) -> GrayImage {
        let n = self.rows() * self.cols();
        GrayImage::new(self.rows(), self.cols(), self.payload[..n].to_vec())
            .expect("dimensions validated on construction")
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(HEADER_LEN + self.payload.len());
        out.extend_from_slice(&MAGIC);
        out.push(VERSION);
        out.extend_from_slice(&self.rows.to_be_bytes());
        out.extend_from_slice(&self.cols.to_be_bytes());
        out.push(self.mode as u8);
        out.extend_from_slice(&self.payload);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> std::result::Result<Self, ContainerError> {
        if bytes.len() < HEADER_LEN {
            return Err(ContainerError::ShortHeader(HEADER_LEN));
        }
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(ContainerError::BadMagic(magic));
        }
        if bytes[4] != VERSION {
            return Err(ContainerError::UnsupportedVersion(bytes[4]));
        }
        let rows = u32::from_be_bytes(bytes[5..9].try_into().unwrap());
        let cols = u32::from_be_bytes(bytes[9..13].try_into().unwrap());
        if bytes[13] != Mode::Exact as u8 {
            return Err(ContainerError::UnsupportedMode(bytes[13]));
        }
        Self::new(rows, cols, bytes[HEADER_LEN..].to_vec())
    }
}

/// Post-warm-up state indices consumed by each phase, as half-open ranges
/// of the 0-based consumption counter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConsumptionLedger {
    pub warm_up: u64,
    pub shuffle: Range<u64>,
    pub modulation: Range<u64>,
    pub keystream: Range<u64>,
}

impl ConsumptionLedger {
    /// Total map iterations, warm-up included.
    pub fn total_iterations(&self) -> u64 {
        self.warm_up
            + (self.shuffle.end - self.shuffle.start)
            + (self.modulation.end - self.modulation.start)
            + (self.keystream.end - self.keystream.start)
    }

    /// Phases are adjacent, in order, and start right after the warm-up.
    pub fn is_contiguous(&self) -> bool {
        self.shuffle.start == 0
            && self.shuffle.end == self.modulation.start
            && self.modulation.end == self.keystream.start
    }
}

/// Everything the key contributes to one image size.
#[derive(Debug, Clone)]
pub struct KeyMaterial {
    pub schedule: ShuffleSchedule,
    pub modulation: ModSequence,
    pub keystream: Vec<u8>,
    pub ledger: ConsumptionLedger,
}

impl KeyMaterial {
    /// Runs the map through all three phases for an M×N image.
    pub fn derive(key: &SecretKey, rows: usize, cols: usize) -> Result<Self> {
        let mut engine = ChaosEngine::new(key)?;
        let p = (rows / 2) * (cols / 2);
        let len = rows * cols * BYTES_PER_VALUE;

        let schedule = ShuffleSchedule::build(&mut engine, p, key)?;
        let shuffle = 0..engine.consumed();
        let modulation = make_mod_sequence(&mut engine, p);
        let modulation_range = shuffle.end..engine.consumed();
        // very large n4 can draw more shuffle-phase bytes than the stream needs
        let head = &schedule.key_bytes()[..schedule.key_bytes().len().min(len)];
        let keystream = make_keystream(&mut engine, head, len)?;
        let keystream_range = modulation_range.end..engine.consumed();

        let ledger = ConsumptionLedger {
            warm_up: WARM_UP,
            shuffle,
            modulation: modulation_range,
            keystream: keystream_range,
        };
        debug_assert_eq!(ledger.total_iterations(), engine.index());
        Ok(Self {
            schedule,
            modulation,
            keystream,
            ledger,
        })
    }
}

/// Shuffle, sign-flip and modulate in the wavelet domain, then synthesize.
/// `signs`, `y` and `alpha` are taken as given and not range-checked.
pub fn scramble_with(
    image: &GrayImage,
    schedule: &ShuffleSchedule,
    signs: &[bool],
    y: &[f64],
    alpha: f64,
) -> Result<RealField> {
    let mut bands = dwt2(image);
    schedule.shuffle(&mut bands)?;
    sign_flip(&mut bands.ca, signs)?;
    modulate(&mut bands.ca, y, alpha)?;
    idwt2(&bands)
}

/// Inverse of [`scramble_with`], before rounding to pixels.
pub fn unscramble_with(
    field: &RealField,
    schedule: &ShuffleSchedule,
    signs: &[bool],
    y: &[f64],
    alpha: f64,
) -> Result<RealField> {
    let mut bands = dwt2_field(field);
    demodulate(&mut bands.ca, y, alpha)?;
    sign_flip(&mut bands.ca, signs)?;
    schedule.unshuffle(&mut bands)?;
    idwt2(&bands)
}

pub fn encrypt(image: &GrayImage, key: &SecretKey) -> Result<CipherBlob> {
    encrypt_with_ledger(image, key).map(|(blob, _)| blob)
}

pub fn encrypt_with_ledger(image: &GrayImage, key: &SecretKey) -> Result<(CipherBlob, ConsumptionLedger)> {
    let (rows, cols) = (image.rows(), image.cols());
    let dims = |v: usize| u32::try_from(v).map_err(|_| Error::Shape(format!("dimension {v} exceeds u32")));
    let (rows32, cols32) = (dims(rows)?, dims(cols)?);
    let material = KeyMaterial::derive(key, rows, cols)?;
    let field = scramble_with(
        image,
        &material.schedule,
        material.modulation.s(),
        material.modulation.y(),
        key.alpha,
    )?;
    let mut stream = serialize(&field)?;
    self_diffuse(&mut stream)?;
    mix(&mut stream, &material.keystream)?;
    let blob = CipherBlob::new(rows32, cols32, stream)?;
    Ok((blob, material.ledger))
}

/// A wrong key is not detectable and produces a garbage image.
pub fn decrypt(blob: &CipherBlob, key: &SecretKey) -> Result<GrayImage> {
    decrypt_with_ledger(blob, key).map(|(image, _)| image)
}

pub fn decrypt_with_ledger(blob: &CipherBlob, key: &SecretKey) -> Result<(GrayImage, ConsumptionLedger)> {
    let (rows, cols) = (blob.rows(), blob.cols());
    let material = KeyMaterial::derive(key, rows, cols)?;
    let mut stream = blob.payload().to_vec();
    unmix(&mut stream, &material.keystream)?;
    inverse_self_diffuse(&mut stream)?;
    let field = deserialize(&stream, rows, cols)?;
    let plain = unscramble_with(
        &field,
        &material.schedule,
        material.modulation.s(),
        material.modulation.y(),
        key.alpha,
    )?;
    Ok((plain.to_image_rounded(), material.ledger))
}

/// The synthesized field after wavelet-domain shuffling and modulation,
/// before any byte-level diffusion.
pub fn shuffled_preview(image: &GrayImage, key: &SecretKey) -> Result<RealField> {
    let material = KeyMaterial::derive(key, image.rows(), image.cols())?;
    scramble_with(
        image,
        &material.schedule,
        material.modulation.s(),
        material.modulation.y(),
        key.alpha,
    )
}
