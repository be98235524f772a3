//! Byte-stream stage of the cipher.
//!
//! The synthesized wavelet field is real-valued and routinely leaves
//! [0, 255], so it is carried as little-endian binary32 (four bytes per
//! value, row-major) rather than being quantized to pixels. Diffusion and
//! mixing then act on that stream:
//!
//! * self diffusion, backward: `S[k-1] ^= S[k] ^ S[k+1]` for `k = len..=2`,
//!   with a virtual `S[len+1] = 170`;
//! * mixing, forward: `C[i] = S[i] ^ key[i] ^ rotl3(key[i-1]) ^ C[i-1]`,
//!   with `C[0] = 85` and `key[0] = 123`.

use crate::error::{Error, Result};
use crate::image::RealField;

pub const DIFFUSION_SENTINEL: u8 = 170;
pub const MIX_SEED_CIPHER: u8 = 85;
pub const MIX_SEED_KEY: u8 = 123;

/// Bytes per serialized field value.
pub const BYTES_PER_VALUE: usize = 4;

pub fn serialize(field: &RealField) -> Result<Vec<u8>> {
    let mut out = Vec::with_capacity(field.values().len() * BYTES_PER_VALUE);
    for (i, &v) in field.values().iter().enumerate() {
        if !v.is_finite() {
            return Err(Error::NonFinite(i));
        }
        out.extend_from_slice(&(v as f32).to_le_bytes());
    }
    Ok(out)
}

pub fn deserialize(bytes: &[u8], rows: usize, cols: usize) -> Result<RealField> {
    let expected = rows * cols * BYTES_PER_VALUE;
    if bytes.len() != expected {
        return Err(Error::Shape(format!(
            "stream of {} bytes cannot hold a {rows}x{cols} field ({expected} bytes)",
            bytes.len()
        )));
    }
    let values = bytes
        .chunks_exact(BYTES_PER_VALUE)
        .map(|c| f64::from(f32::from_le_bytes([c[0], c[1], c[2], c[3]])))
        .collect();
    RealField::new(rows, cols, values)
}

fn check_diffusable(s: &[u8]) -> Result<()> {
    if s.len() < 2 {
        return Err(Error::Domain(format!(
            "self diffusion needs at least 2 bytes, got {}",
            s.len()
        )));
    }
    Ok(())
}

#[inline]
fn next_or_sentinel(s: &[u8], i: usize) -> u8 {
    s.get(i).copied().unwrap_or(DIFFUSION_SENTINEL)
}

pub fn self_diffuse(s: &mut [u8]) -> Result<()> {
    check_diffusable(s)?;
    // 0-based: s[k-1] ^= s[k] ^ s[k+1] for k = len-1 down to 1
    for k in (1..s.len()).rev() {
        s[k - 1] ^= s[k] ^ next_or_sentinel(s, k + 1);
    }
    Ok(())
}

pub fn inverse_self_diffuse(s: &mut [u8]) -> Result<()> {
    check_diffusable(s)?;
    for k in 1..s.len() {
        s[k - 1] ^= s[k] ^ next_or_sentinel(s, k + 1);
    }
    Ok(())
}

#[inline]
pub fn rotl3(b: u8) -> u8 {
    b.rotate_left(3)
}

fn check_keystream(s: &[u8], keystream: &[u8]) -> Result<()> {
    if s.len() != keystream.len() {
        return Err(Error::Shape(format!(
            "stream has {} bytes but keystream has {}",
            s.len(),
            keystream.len()
        )));
    }
    Ok(())
}

pub fn mix(s: &mut [u8], keystream: &[u8]) -> Result<()> {
    check_keystream(s, keystream)?;
    let (mut prev_c, mut prev_k) = (MIX_SEED_CIPHER, MIX_SEED_KEY);
    for (b, &k) in s.iter_mut().zip(keystream) {
        *b ^= k ^ rotl3(prev_k) ^ prev_c;
        prev_c = *b;
        prev_k = k;
    }
    Ok(())
}

pub fn unmix(c: &mut [u8], keystream: &[u8]) -> Result<()> {
    check_keystream(c, keystream)?;
    let (mut prev_c, mut prev_k) = (MIX_SEED_CIPHER, MIX_SEED_KEY);
    for (b, &k) in c.iter_mut().zip(keystream) {
        let cipher = *b;
        *b ^= k ^ rotl3(prev_k) ^ prev_c;
        prev_c = cipher;
        prev_k = k;
    }
    Ok(())
}
