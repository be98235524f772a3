//! Fixtures shared by the benchmarks.

use chaoswave::GrayImage;

/// Smooth deterministic test pattern with some texture, `rows × cols`.
pub fn test_pattern(rows: usize, cols: usize) -> GrayImage {
    GrayImage::from_fn(rows, cols, |r, c| {
        let (x, y) = (c as f64 / cols as f64, r as f64 / rows as f64);
        let v = 128.0 + 60.0 * (6.0 * x).sin() * (4.0 * y).cos() + 40.0 * ((r ^ c) & 15) as f64 / 15.0;
        v.clamp(0.0, 255.0) as u8
    })
    .expect("even dimensions")
}
