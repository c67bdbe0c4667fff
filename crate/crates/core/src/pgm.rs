//! Binary greyscale PGM (`P5`, maxval 255).

use std::fs;
use std::path::Path;

use crate::error::{CtnnError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayImage {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<u8>,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        CtnnError::check_len(width * height, pixels.len())?;
        Ok(GrayImage {
            width,
            height,
            pixels,
        })
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn decode(bytes: &[u8], source: &Path) -> Result<Self> {
        let mut pos = 0;
        let mut fields = Vec::with_capacity(4);
        while fields.len() < 4 {
            // Whitespace and `#` comments may separate header fields.
            while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
                if bytes[pos] == b'#' {
                    while pos < bytes.len() && bytes[pos] != b'\n' {
                        pos += 1;
                    }
                } else {
                    pos += 1;
                }
            }
            let start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if start == pos {
                return Err(CtnnError::format(source, "truncated PGM header"));
            }
            fields.push(String::from_utf8_lossy(&bytes[start..pos]).into_owned());
        }
        if fields[0] != "P5" {
            return Err(CtnnError::format(
                source,
                format!("not a P5 PGM: {:?}", fields[0]),
            ));
        }
        let num = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| CtnnError::format(source, format!("bad PGM header field {s:?}")))
        };
        let (width, height, maxval) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
        if maxval != 255 {
            return Err(CtnnError::format(
                source,
                format!("unsupported maxval {maxval}"),
            ));
        }
        // Exactly one whitespace byte separates the header from the raster.
        pos += 1;
        let raster = bytes.get(pos..).unwrap_or_default();
        if raster.len() != width * height {
            return Err(CtnnError::format(
                source,
                format!(
                    "expected {} raster bytes, found {}",
                    width * height,
                    raster.len()
                ),
            ));
        }
        Ok(GrayImage {
            width,
            height,
            pixels: raster.to_vec(),
        })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode()).map_err(|e| CtnnError::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| CtnnError::io(path, e))?;
        Self::decode(&bytes, path)
    }
}

/// Rounds and clamps a real intensity onto `0..=255`.
pub fn to_byte(v: f32) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}
