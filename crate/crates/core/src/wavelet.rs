//! Single-level 2-D orthonormal Haar transform on non-overlapping 2×2 blocks.
//!
//! For a block `[[a, b], [c, d]]`:
//!
//! ```text
//! cA = (a + b + c + d) / 2
//! cH = (a - b + c - d) / 2
//! cV = (a + b - c - d) / 2
//! cD = (a - b - c + d) / 2
//! ```
//!
//! The block matrix is symmetric and orthogonal, so synthesis uses the same
//! sign pattern.

use crate::error::{Error, Result};
use crate::image::{GrayImage, RealField};

/// Coefficient plane selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    Approx,
    Horizontal,
    Vertical,
    Diagonal,
}

impl Plane {
    pub const ALL: [Plane; 4] = [Plane::Approx, Plane::Horizontal, Plane::Vertical, Plane::Diagonal];
}

/// The four level-1 sub-bands, each `rows × cols` and stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SubBands {
    rows: usize,
    cols: usize,
    pub ca: Vec<f64>,
    pub ch: Vec<f64>,
    pub cv: Vec<f64>,
    pub cd: Vec<f64>,
}

impl SubBands {
    pub fn new(rows: usize, cols: usize, ca: Vec<f64>, ch: Vec<f64>, cv: Vec<f64>, cd: Vec<f64>) -> Result<Self> {
        let bands = Self {
            rows,
            cols,
            ca,
            ch,
            cv,
            cd,
        };
        bands.check_shape()?;
        Ok(bands)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Coefficients per plane (`p = r·c`).
    pub fn plane_len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn plane(&self, plane: Plane) -> &[f64] {
        match plane {
            Plane::Approx => &self.ca,
            Plane::Horizontal => &self.ch,
            Plane::Vertical => &self.cv,
            Plane::Diagonal => &self.cd,
        }
    }

    pub fn plane_mut(&mut self, plane: Plane) -> &mut [f64] {
        match plane {
            Plane::Approx => &mut self.ca,
            Plane::Horizontal => &mut self.ch,
            Plane::Vertical => &mut self.cv,
            Plane::Diagonal => &mut self.cd,
        }
    }

    pub fn check_shape(&self) -> Result<()> {
        let p = self.plane_len();
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Shape("sub-bands must be non-empty".into()));
        }
        for plane in Plane::ALL {
            let len = self.plane(plane).len();
            if len != p {
                return Err(Error::Shape(format!(
                    "{plane:?} plane holds {len} coefficients, expected {}x{} = {p}",
                    self.rows, self.cols
                )));
            }
        }
        Ok(())
    }
}

/// Analysis of a real field.
pub fn dwt2_field(field: &RealField) -> SubBands {
    let (rows, cols) = (field.rows() / 2, field.cols() / 2);
    let p = rows * cols;
    let mut bands = SubBands {
        rows,
        cols,
        ca: Vec::with_capacity(p),
        ch: Vec::with_capacity(p),
        cv: Vec::with_capacity(p),
        cd: Vec::with_capacity(p),
    };
    for i in 0..rows {
        for j in 0..cols {
            let a = field.get(2 * i, 2 * j);
            let b = field.get(2 * i, 2 * j + 1);
            let c = field.get(2 * i + 1, 2 * j);
            let d = field.get(2 * i + 1, 2 * j + 1);
            bands.ca.push((a + b + c + d) / 2.0);
            bands.ch.push((a - b + c - d) / 2.0);
            bands.cv.push((a + b - c - d) / 2.0);
            bands.cd.push((a - b - c + d) / 2.0);
        }
    }
    bands
}

pub fn dwt2(image: &GrayImage) -> SubBands {
    dwt2_field(&RealField::from_image(image))
}

/// Synthesis. The output is not rounded or clamped.
pub fn idwt2(bands: &SubBands) -> Result<RealField> {
    bands.check_shape()?;
    let (rows, cols) = (bands.rows * 2, bands.cols * 2);
    let mut out = vec![0.0; rows * cols];
    for i in 0..bands.rows {
        for j in 0..bands.cols {
            let t = i * bands.cols + j;
            let (a, h, v, d) = (bands.ca[t], bands.ch[t], bands.cv[t], bands.cd[t]);
            let top = 2 * i * cols + 2 * j;
            let bottom = top + cols;
            out[top] = (a + h + v + d) / 2.0;
            out[top + 1] = (a - h + v - d) / 2.0;
            out[bottom] = (a + h - v - d) / 2.0;
            out[bottom + 1] = (a - h - v + d) / 2.0;
        }
    }
    RealField::new(rows, cols, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn image(rows: usize, cols: usize, px: &[u8]) -> GrayImage {
        GrayImage::new(rows, cols, px.to_vec()).unwrap()
    }

    #[test]
    fn constant_block() {
        let b = dwt2(&image(2, 2, &[100, 100, 100, 100]));
        assert_eq!((b.ca[0], b.ch[0], b.cv[0], b.cd[0]), (200.0, 0.0, 0.0, 0.0));
        let back = idwt2(&b).unwrap();
        assert_eq!(back.values(), &[100.0; 4]);
    }

    #[test]
    fn hand_evaluated_block() {
        let b = dwt2(&image(2, 2, &[4, 2, 2, 0]));
        assert_eq!((b.ca[0], b.ch[0], b.cv[0], b.cd[0]), (4.0, 2.0, 2.0, 0.0));
    }

    #[test]
    fn horizontal_detail_synthesis() {
        let b = SubBands::new(1, 1, vec![0.0], vec![2.0], vec![0.0], vec![0.0]).unwrap();
        assert_eq!(idwt2(&b).unwrap().values(), &[1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn layout_is_row_major_blocks() {
        // 2x4 image: two blocks side by side
        let b = dwt2(&image(2, 4, &[1, 1, 9, 9, 1, 1, 9, 9]));
        assert_eq!((b.rows(), b.cols()), (1, 2));
        assert_eq!(b.ca, vec![2.0, 18.0]);
    }

    #[test]
    fn mismatched_planes_rejected() {
        let b = SubBands {
            rows: 1,
            cols: 2,
            ca: vec![0.0; 2],
            ch: vec![0.0; 2],
            cv: vec![0.0; 1],
            cd: vec![0.0; 2],
        };
        assert!(matches!(idwt2(&b), Err(Error::Shape(_))));
    }

    fn arb_image() -> impl Strategy<Value = GrayImage> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(any::<u8>(), 4 * r * c).prop_map(move |px| GrayImage::new(2 * r, 2 * c, px).unwrap())
        })
    }

    proptest! {
        #[test]
        fn round_trip_and_parseval(img in arb_image()) {
            let bands = dwt2(&img);
            let back = idwt2(&bands).unwrap();
            for (x, &p) in back.values().iter().zip(img.pixels()) {
                prop_assert!((x - f64::from(p)).abs() <= 1e-9);
            }
            let energy_px: f64 = img.pixels().iter().map(|&p| f64::from(p).powi(2)).sum();
            let energy_co: f64 = Plane::ALL.iter().flat_map(|&pl| bands.plane(pl).iter()).map(|c| c * c).sum();
            prop_assert!((energy_px - energy_co).abs() <= 1e-9 * energy_px.max(1.0));
        }

        #[test]
        fn synthesis_then_analysis(r in 1usize..5, c in 1usize..5, seed in prop::collection::vec(-1e3f64..1e3, 64)) {
            let p = r * c;
            let take = |k: usize| seed.iter().cycle().skip(k * 7).take(p).copied().collect::<Vec<_>>();
            let bands = SubBands::new(r, c, take(0), take(1), take(2), take(3)).unwrap();
            let again = dwt2_field(&idwt2(&bands).unwrap());
            for pl in Plane::ALL {
                for (x, y) in again.plane(pl).iter().zip(bands.plane(pl)) {
                    prop_assert!((x - y).abs() <= 1e-9);
                }
            }
        }

        #[test]
        fn linearity(a in arb_image(), s in -3.0f64..3.0, t in -3.0f64..3.0) {
            let b = GrayImage::new(a.rows(), a.cols(), a.pixels().iter().rev().copied().collect()).unwrap();
            let mixed: Vec<f64> = a.pixels().iter().zip(b.pixels())
                .map(|(&x, &y)| s * f64::from(x) + t * f64::from(y)).collect();
            let lhs = dwt2_field(&RealField::new(a.rows(), a.cols(), mixed).unwrap());
            let (da, db) = (dwt2(&a), dwt2(&b));
            for pl in Plane::ALL {
                for ((l, x), y) in lhs.plane(pl).iter().zip(da.plane(pl)).zip(db.plane(pl)) {
                    prop_assert!((l - (s * x + t * y)).abs() <= 1e-9);
                }
            }
        }
    }
}
