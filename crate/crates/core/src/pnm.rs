//! Netpbm gray-level codec (P2 ascii, P5 binary) and a P6 writer for
//! overlays.
//!
//! Header comments (`#` to end of line) are accepted on input and never
//! written. Files with `maxval < 255` are rescaled to the full 8-bit range
//! on read; output always declares `maxval = 255`.

use crate::error::PnmError;
use crate::image::{Image, RgbImage};

struct Reader<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn skip_whitespace_and_comments(&mut self) {
        while self.pos < self.data.len() {
            match self.data[self.pos] {
                b'#' => {
                    while self.pos < self.data.len() && self.data[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                c if c.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn read_uint(&mut self, what: &'static str) -> Result<(u32, usize), PnmError> {
        self.skip_whitespace_and_comments();
        let start = self.pos;
        let mut value: u32 = 0;
        while self.pos < self.data.len() && self.data[self.pos].is_ascii_digit() {
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u32::from(self.data[self.pos] - b'0')))
                .ok_or(PnmError::MalformedHeader {
                    offset: start,
                    reason: "number too large",
                })?;
            self.pos += 1;
        }
        if self.pos == start {
            return Err(PnmError::MalformedHeader {
                offset: start,
                reason: what,
            });
        }
        Ok((value, start))
    }
}

fn rescale(value: u32, maxval: u32) -> u8 {
    if maxval == 255 {
        value as u8
    } else {
        ((value * 255 + maxval / 2) / maxval) as u8
    }
}

/// Decodes a P2 or P5 gray-level image.
pub fn read_pnm(bytes: &[u8]) -> Result<Image, PnmError> {
    if bytes.len() < 2 || bytes[0] != b'P' {
        return Err(PnmError::BadMagic { offset: 0 });
    }
    let ascii = match bytes[1] {
        b'2' => true,
        b'5' => false,
        _ => return Err(PnmError::BadMagic { offset: 1 }),
    };
    let mut r = Reader {
        data: bytes,
        pos: 2,
    };
    if r.pos < bytes.len() && !bytes[r.pos].is_ascii_whitespace() && bytes[r.pos] != b'#' {
        return Err(PnmError::MalformedHeader {
            offset: r.pos,
            reason: "missing whitespace after magic number",
        });
    }
    let (width, woff) = r.read_uint("expected width")?;
    let (height, hoff) = r.read_uint("expected height")?;
    let (maxval, moff) = r.read_uint("expected maxval")?;
    if width == 0 {
        return Err(PnmError::MalformedHeader {
            offset: woff,
            reason: "width must be positive",
        });
    }
    if height == 0 {
        return Err(PnmError::MalformedHeader {
            offset: hoff,
            reason: "height must be positive",
        });
    }
    if maxval > 255 {
        return Err(PnmError::MaxvalTooLarge {
            offset: moff,
            maxval,
        });
    }
    if maxval == 0 {
        return Err(PnmError::MalformedHeader {
            offset: moff,
            reason: "maxval must be positive",
        });
    }
    let count = width as usize * height as usize;
    let mut values = Vec::with_capacity(count);
    if ascii {
        while values.len() < count {
            r.skip_whitespace_and_comments();
            if r.pos >= bytes.len() {
                return Err(PnmError::Truncated {
                    offset: r.pos,
                    expected: count,
                    found: values.len(),
                });
            }
            let (v, off) = r.read_uint("expected sample")?;
            if v > maxval {
                return Err(PnmError::SampleOutOfRange {
                    offset: off,
                    value: v,
                    maxval,
                });
            }
            values.push(rescale(v, maxval));
        }
    } else {
        // exactly one whitespace byte separates the header from the raster
        if r.pos >= bytes.len() || !bytes[r.pos].is_ascii_whitespace() {
            return Err(PnmError::Truncated {
                offset: r.pos,
                expected: count,
                found: 0,
            });
        }
        r.pos += 1;
        let payload = &bytes[r.pos..];
        if payload.len() < count {
            return Err(PnmError::Truncated {
                offset: bytes.len(),
                expected: count,
                found: payload.len(),
            });
        }
        for (i, &b) in payload[..count].iter().enumerate() {
            if u32::from(b) > maxval {
                return Err(PnmError::SampleOutOfRange {
                    offset: r.pos + i,
                    value: u32::from(b),
                    maxval,
                });
            }
            values.push(rescale(u32::from(b), maxval));
        }
    }
    Ok(Image::new(width as usize, height as usize, values)
        .expect("header dimensions match the decoded raster"))
}

/// Encodes `img` as P2 (`ascii`) or P5. ASCII output puts one image row per
/// line.
pub fn write_pnm(img: &Image, ascii: bool) -> Vec<u8> {
    let magic = if ascii { "P2" } else { "P5" };
    let mut out = format!("{magic}\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    if ascii {
        for row in img.values().chunks(img.width()) {
            let line = row
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" ");
            out.extend_from_slice(line.as_bytes());
            out.push(b'\n');
        }
    } else {
        out.extend_from_slice(img.values());
    }
    out
}

/// Encodes an RGB image as binary P6.
pub fn write_ppm(img: &RgbImage) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", img.width, img.height).into_bytes();
    for px in &img.pixels {
        out.extend_from_slice(px);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn decodes_binary() {
        let mut data = b"P5 2 1 255 ".to_vec();
        data.extend_from_slice(&[7, 200]);
        let img = read_pnm(&data).unwrap();
        assert_eq!((img.width(), img.height()), (2, 1));
        assert_eq!(img.values(), &[7, 200]);
    }

    #[test]
    fn decodes_minimal_ascii() {
        let img = read_pnm(b"P2 1 1 255 0").unwrap();
        assert_eq!(img.values(), &[0]);
    }

    #[test]
    fn truncated_binary() {
        let mut data = b"P5 2 1 255 ".to_vec();
        data.push(7);
        assert!(matches!(
            read_pnm(&data),
            Err(PnmError::Truncated {
                expected: 2,
                found: 1,
                ..
            })
        ));
    }

    #[test]
    fn truncated_ascii() {
        assert!(matches!(
            read_pnm(b"P2 2 2 255 1 2 3"),
            Err(PnmError::Truncated { found: 3, .. })
        ));
    }

    #[test]
    fn header_errors_name_offsets() {
        assert_eq!(
            read_pnm(b"P6 1 1 255 0"),
            Err(PnmError::BadMagic { offset: 1 })
        );
        assert_eq!(read_pnm(b"Q2"), Err(PnmError::BadMagic { offset: 0 }));
        assert_eq!(
            read_pnm(b"P2 1 1 256 0"),
            Err(PnmError::MaxvalTooLarge {
                offset: 7,
                maxval: 256
            })
        );
        assert!(matches!(
            read_pnm(b"P2 x 1 255 0"),
            Err(PnmError::MalformedHeader { offset: 3, .. })
        ));
        assert!(matches!(
            read_pnm(b"P2 1 1 15 16"),
            Err(PnmError::SampleOutOfRange {
                offset: 10,
                value: 16,
                ..
            })
        ));
    }

    #[test]
    fn comments_are_skipped() {
        let img = read_pnm(b"P2\n# made by hand\n2 1 # trailing\n255\n3 4\n").unwrap();
        assert_eq!(img.values(), &[3, 4]);
    }

    #[test]
    fn small_maxval_is_rescaled() {
        let img = read_pnm(b"P2 3 1 15 0 15 7").unwrap();
        assert_eq!(img.values(), &[0, 255, 119]);
    }

    #[test]
    fn fixed_serializations() {
        let one = Image::new(1, 1, vec![0]).unwrap();
        assert_eq!(write_pnm(&one, true), b"P2\n1 1\n255\n0\n");
        let two = Image::new(2, 1, vec![7, 200]).unwrap();
        let mut expected = b"P5\n2 1\n255\n".to_vec();
        expected.extend_from_slice(&[7, 200]);
        assert_eq!(write_pnm(&two, false), expected);
    }

    #[test]
    fn ppm_header() {
        let rgb = RgbImage::from_gray(&Image::new(1, 1, vec![9]).unwrap());
        assert_eq!(write_ppm(&rgb), b"P6\n1 1\n255\n\x09\x09\x09");
    }

    proptest! {
        #[test]
        fn round_trip_both_encodings(
            (w, h, values) in (1usize..24, 1usize..24)
                .prop_flat_map(|(w, h)| (Just(w), Just(h), prop::collection::vec(any::<u8>(), w * h)))
        ) {
            let img = Image::new(w, h, values).unwrap();
            prop_assert_eq!(read_pnm(&write_pnm(&img, true)).unwrap(), img.clone());
            prop_assert_eq!(read_pnm(&write_pnm(&img, false)).unwrap(), img);
        }
    }
}
