//! Text key files: one `name=value` per line for `x0`, `m`, `n1`..`n4` and
//! `alpha`. Blank lines and `#` comments are ignored. Reals go through
//! Rust's correctly rounded decimal parser, and are written in shortest
//! round-trip form, so a key survives a write/read cycle bit for bit.

use std::path::Path;

use crate::chaos::SecretKey;
use crate::error::{KeyFileError, Result};

const FIELDS: [&str; 7] = ["x0", "m", "n1", "n2", "n3", "n4", "alpha"];

pub fn parse_key(text: &str) -> Result<SecretKey> {
    let mut values: [Option<&str>; 7] = [None; 7];
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (name, value) = line.split_once('=').ok_or(KeyFileError::Syntax { line: i + 1 })?;
        let name = name.trim();
        let slot = FIELDS
            .iter()
            .position(|&f| f == name)
            .ok_or_else(|| KeyFileError::UnknownField {
                line: i + 1,
                name: name.to_string(),
            })?;
        if values[slot].replace(value.trim()).is_some() {
            return Err(KeyFileError::Duplicate(name.to_string()).into());
        }
    }
    let get = |i: usize| values[i].ok_or(KeyFileError::Missing(FIELDS[i]));
    let bad = |i: usize, v: &str| KeyFileError::BadValue {
        name: FIELDS[i].to_string(),
        value: v.to_string(),
    };
    let real = |i: usize| -> std::result::Result<f64, KeyFileError> {
        let v = get(i)?;
        v.parse::<f64>().map_err(|_| bad(i, v))
    };
    let int = |i: usize| -> std::result::Result<u32, KeyFileError> {
        let v = get(i)?;
        v.parse::<u32>().map_err(|_| bad(i, v))
    };
    let key = SecretKey {
        x0: real(0)?,
        m: real(1)?,
        n1: int(2)?,
        n2: int(3)?,
        n3: int(4)?,
        n4: int(5)?,
        alpha: real(6)?,
    };
    key.validate()?;
    Ok(key)
}

pub fn format_key(key: &SecretKey) -> String {
    format!(
        "x0={}\nm={}\nn1={}\nn2={}\nn3={}\nn4={}\nalpha={}\n",
        key.x0, key.m, key.n1, key.n2, key.n3, key.n4, key.alpha
    )
}

pub fn read_key(path: impl AsRef<Path>) -> Result<SecretKey> {
    parse_key(&std::fs::read_to_string(path)?)
}

pub fn write_key(key: &SecretKey, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, format_key(key))?;
    Ok(())
}
