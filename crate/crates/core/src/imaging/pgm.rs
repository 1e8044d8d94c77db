//! Portable graymap reading (P5 binary, P2 ASCII) and P5 writing.

use super::GrayImage;
use crate::error::{Error, Result};

fn format_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Format(msg.into()))
}

struct Header<'a> {
    data: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
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

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.pos < self.data.len()
            && !self.data[self.pos].is_ascii_whitespace()
            && self.data[self.pos] != b'#'
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.data[start..self.pos])
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = match self.token() {
            Some(t) => t,
            None => return format_err(format!("missing {what}")),
        };
        std::str::from_utf8(tok)
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format(format!("bad {what}: {:?}", String::from_utf8_lossy(tok))))
    }
}

pub fn read_pgm(data: &[u8]) -> Result<GrayImage> {
    let mut hdr = Header { data, pos: 0 };
    let magic = hdr.token();
    let binary = match magic {
        Some(b"P5") => true,
        Some(b"P2") => false,
        _ => return format_err("not a P5 or P2 graymap"),
    };
    let width = hdr.number("width")?;
    let height = hdr.number("height")?;
    let maxval = hdr.number("maxval")?;
    if maxval != 255 {
        return format_err(format!("maxval {maxval} unsupported, expected 255"));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::Format("image dimensions overflow".into()))?;

    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        match data.get(hdr.pos) {
            Some(c) if c.is_ascii_whitespace() => {}
            _ => return format_err("missing whitespace after maxval"),
        }
        let start = hdr.pos + 1;
        match data.get(start..start + count) {
            Some(raster) => raster.to_vec(),
            None => return format_err("truncated raster"),
        }
    } else {
        let mut px = Vec::with_capacity(count);
        for _ in 0..count {
            let v = hdr.number("pixel").map_err(|_| Error::Format("truncated raster".into()))?;
            if v > 255 {
                return format_err(format!("pixel value {v} exceeds maxval"));
            }
            px.push(v as u8);
        }
        px
    };
    GrayImage::new(width, height, pixels)
}

/// Binary P5 encoding with maxval 255.
pub fn write_pgm(img: &GrayImage) -> Vec<u8> {
    write_pgm_with_comment(img, None)
}

/// P5 encoding with an optional single `#` comment line after the magic.
pub fn write_pgm_with_comment(img: &GrayImage, comment: Option<&str>) -> Vec<u8> {
    let mut out = b"P5\n".to_vec();
    if let Some(c) = comment {
        out.push(b'#');
        out.push(b' ');
        out.extend(c.bytes().filter(|&b| b != b'\n' && b != b'\r'));
        out.push(b'\n');
    }
    out.extend(format!("{} {}\n255\n", img.width(), img.height()).bytes());
    out.extend_from_slice(img.pixels());
    out
}
