//! Wavelet-domain chaotic image cipher for 8-bit grayscale images.
//!
//! The image is taken to a level-1 Haar wavelet domain, its sub-bands are
//! shuffled with a staged Fisher–Yates driven by a piecewise-linear chaotic
//! map, the approximation band is sign-flipped and amplitude-modulated, and
//! the synthesized field is serialized losslessly and diffused at the byte
//! level. [`metrics`] holds the usual cipher-image statistics.
//!
//! ```
//! use chaoswave::{decrypt, encrypt, GrayImage, SecretKey};
//!
//! let image = GrayImage::from_fn(8, 8, |r, c| (r * 32 + c) as u8).unwrap();
//! let key = SecretKey::default();
//! let blob = encrypt(&image, &key).unwrap();
//! assert_eq!(decrypt(&blob, &key).unwrap(), image);
//! ```

pub mod chaos;
pub mod error;
pub mod image;
pub mod keyfile;
pub mod metrics;
pub mod modulate;
pub mod permute;
pub mod pgm;
pub mod pipeline;
pub mod stream;
pub mod wavelet;

pub use chaos::{ChaosEngine, ModSequence, SecretKey};
pub use error::{ContainerError, Error, KeyFileError, PgmError, Result};
pub use image::{GrayImage, RealField};
pub use metrics::{Analysis, Direction, Histogram, MetricsReport};
pub use permute::{ShuffleSchedule, Swap};
pub use pipeline::{
    decrypt, decrypt_with_ledger, encrypt, encrypt_with_ledger, shuffled_preview, CipherBlob, ConsumptionLedger,
    KeyMaterial,
};
pub use wavelet::{dwt2, idwt2, Plane, SubBands};
