//! Binary PGM (P5, maxval 255) reading and writing.

use std::path::Path;

use crate::error::{PgmError, Result};
use crate::image::GrayImage;

/// Header tokenizer: whitespace-separated fields, `#` comments to end of line.
struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_blank(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self.bytes.get(self.pos).is_some_and(|&c| c != b'\n' && c != b'\r') {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> std::result::Result<u32, PgmError> {
        self.skip_blank();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| PgmError::MalformedHeader(format!("expected {what}")))
    }
}

pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage> {
    if bytes.len() < 2 || &bytes[..2] != b"P5" {
        let magic = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
        return Err(PgmError::UnsupportedFormat(magic).into());
    }
    let mut h = Header { bytes, pos: 2 };
    if !h.bytes.get(2).is_some_and(|b| b.is_ascii_whitespace() || *b == b'#') {
        return Err(PgmError::MalformedHeader("missing separator after magic".into()).into());
    }
    let width = h.number("width")? as usize;
    let height = h.number("height")? as usize;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        return Err(PgmError::UnsupportedMaxval(maxval).into());
    }
    // exactly one whitespace byte separates maxval from the raster
    if !h.bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(PgmError::MalformedHeader("missing whitespace before raster".into()).into());
    }
    let raster = &bytes[h.pos + 1..];
    let expected = width * height;
    if raster.len() < expected {
        return Err(PgmError::TruncatedRaster {
            expected,
            found: raster.len(),
        }
        .into());
    }
    GrayImage::new(height, width, raster[..expected].to_vec())
}

pub fn encode_pgm(image: &GrayImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", image.cols(), image.rows()).into_bytes();
    out.extend_from_slice(image.pixels());
    out
}

pub fn read_pgm(path: impl AsRef<Path>) -> Result<GrayImage> {
    parse_pgm(&std::fs::read(path)?)
}

pub fn write_pgm(image: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, encode_pgm(image))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn parses_minimal_file() {
        let img = parse_pgm(b"P5\n2 2\n255\n\x00\x7f\x80\xff").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 2));
        assert_eq!(img.pixels(), &[0, 127, 128, 255]);
    }

    #[test]
    fn comments_and_odd_spacing() {
        let img =
            parse_pgm(b"P5 # made by hand\n# another\n 4\t2 # w h\n255\r\x01\x02\x03\x04\x05\x06\x07\x08").unwrap();
        assert_eq!((img.rows(), img.cols()), (2, 4));
        assert_eq!(img.get(1, 3), 8);
    }

    #[test]
    fn raster_may_start_with_whitespace_bytes() {
        let img = parse_pgm(b"P5\n2 2\n255\n\x20\x0a\x09\x23").unwrap();
        assert_eq!(img.pixels(), &[0x20, 0x0a, 0x09, 0x23]);
    }

    #[test]
    fn distinct_errors() {
        assert!(
            matches!(parse_pgm(b"P2\n2 2\n255\n0 0 0 0"), Err(Error::Pgm(PgmError::UnsupportedFormat(m))) if m == "P2")
        );
        assert!(matches!(
            parse_pgm(b""),
            Err(Error::Pgm(PgmError::UnsupportedFormat(_)))
        ));
        assert!(matches!(
            parse_pgm(b"P5\nx 2\n255\n"),
            Err(Error::Pgm(PgmError::MalformedHeader(_)))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n2 2\n65535\n"),
            Err(Error::Pgm(PgmError::UnsupportedMaxval(65535)))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n2 2\n255\n\x00\x01"),
            Err(Error::Pgm(PgmError::TruncatedRaster { expected: 4, found: 2 }))
        ));
        assert!(matches!(
            parse_pgm(b"P5\n3 2\n255\n\x00\x01\x02\x03\x04\x05"),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn encode_then_parse() {
        let img = GrayImage::from_fn(4, 6, |r, c| (r * 40 + c * 9) as u8).unwrap();
        let bytes = encode_pgm(&img);
        assert!(bytes.starts_with(b"P5\n6 4\n255\n"));
        assert_eq!(parse_pgm(&bytes).unwrap(), img);
    }
}
