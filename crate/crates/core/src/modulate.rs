//! Sign flipping and chaotic amplitude modulation of the approximation plane.

use crate::error::{Error, Result};

fn same_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!(
            "coefficient array has {a} entries, sequence has {b}"
        )));
    }
    Ok(())
}

/// Negates `ca[j]` wherever `s[j]` is set. Self-inverse.
pub fn sign_flip(ca: &mut [f64], s: &[bool]) -> Result<()> {
    same_len(ca.len(), s.len())?;
    for (c, &flip) in ca.iter_mut().zip(s) {
        if flip {
            *c = -*c;
        }
    }
    Ok(())
}

/// `ca[j] <- alpha * y[j] * ca[j]`
pub fn modulate(ca: &mut [f64], y: &[f64], alpha: f64) -> Result<()> {
    same_len(ca.len(), y.len())?;
    for (c, &yj) in ca.iter_mut().zip(y) {
        *c *= alpha * yj;
    }
    Ok(())
}

/// `ca[j] <- ca[j] / (alpha * y[j])`
pub fn demodulate(ca: &mut [f64], y: &[f64], alpha: f64) -> Result<()> {
    same_len(ca.len(), y.len())?;
    for (j, (c, &yj)) in ca.iter_mut().zip(y).enumerate() {
        let gain = alpha * yj;
        if gain == 0.0 || !gain.is_finite() {
            return Err(Error::Invariant(format!("modulation gain {gain} at position {j}")));
        }
        *c /= gain;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn flips() {
        let mut a = [1.0, -2.0, 3.0];
        sign_flip(&mut a, &[true, false, true]).unwrap();
        assert_eq!(a, [-1.0, -2.0, -3.0]);
        sign_flip(&mut a, &[false; 3]).unwrap();
        assert_eq!(a, [-1.0, -2.0, -3.0]);
        assert!(matches!(sign_flip(&mut a, &[true]), Err(Error::Shape(_))));
    }

    #[test]
    fn modulation_examples() {
        let mut a = [10.0, 0.0];
        modulate(&mut a, &[0.5, 0.3], 0.2).unwrap();
        assert_eq!(a, [1.0, 0.0]);
        demodulate(&mut a, &[0.5, 0.3], 0.2).unwrap();
        assert_eq!(a, [10.0, 0.0]);
    }

    #[test]
    fn zero_gain_is_invariant_violation() {
        let mut a = [1.0];
        assert!(matches!(demodulate(&mut a, &[0.0], 0.2), Err(Error::Invariant(_))));
    }

    #[test]
    fn smallest_gain_round_trip() {
        // alpha * y at its floor: 0.2 * 0.0001
        for &c in &[1e-3, 0.7, 255.0, -510.0, 12345.678] {
            let mut a = [c];
            modulate(&mut a, &[0.0001], 0.2).unwrap();
            demodulate(&mut a, &[0.0001], 0.2).unwrap();
            assert!(((a[0] - c) / c).abs() <= 1e-9);
        }
    }

    proptest! {
        #[test]
        fn round_trip(vals in prop::collection::vec(-1e4f64..1e4, 1..64),
                      q in prop::collection::vec(1u16..=9999, 64),
                      alpha in 1e-3f64..0.999,
                      bits in prop::collection::vec(any::<bool>(), 64)) {
            let n = vals.len();
            let y: Vec<f64> = q[..n].iter().map(|&q| f64::from(q) / 1e4).collect();
            let mut a = vals.clone();
            sign_flip(&mut a, &bits[..n]).unwrap();
            modulate(&mut a, &y, alpha).unwrap();
            for (m, v) in a.iter().zip(&vals) {
                prop_assert!(m.abs() <= v.abs());
            }
            demodulate(&mut a, &y, alpha).unwrap();
            sign_flip(&mut a, &bits[..n]).unwrap();
            for (x, v) in a.iter().zip(&vals) {
                prop_assert!((x - v).abs() <= 1e-9 * v.abs().max(f64::MIN_POSITIVE));
            }
        }
    }
}
