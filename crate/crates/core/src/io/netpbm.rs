//! Minimal Netpbm support: PGM (`P2`, `P5`) and PPM (`P6`).
//!
//! Samples wider than one byte (`maxval > 255`) are big-endian. The writer
//! always emits the canonical header `P5\n<w> <h>\n<maxval>\n`, so a file
//! with that header survives a read/write cycle byte for byte.

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::image::RealImage;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PnmFormat {
    /// ASCII graymap.
    P2,
    /// Binary graymap.
    P5,
    /// Binary pixmap.
    P6,
}

impl PnmFormat {
    pub fn channels(self) -> usize {
        match self {
            PnmFormat::P2 | PnmFormat::P5 => 1,
            PnmFormat::P6 => 3,
        }
    }
}

impl fmt::Display for PnmFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PnmFormat::P2 => "P2",
            PnmFormat::P5 => "P5",
            PnmFormat::P6 => "P6",
        })
    }
}

impl FromStr for PnmFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "P2" => Ok(PnmFormat::P2),
            "P5" => Ok(PnmFormat::P5),
            "P6" => Ok(PnmFormat::P6),
            other => Err(Error::Config(format!("unsupported Netpbm format `{other}`"))),
        }
    }
}

/// Decoded Netpbm raster; `samples` are row-major, channels interleaved.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Netpbm {
    pub format: PnmFormat,
    pub width: usize,
    pub height: usize,
    pub maxval: u16,
    pub samples: Vec<u16>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl Cursor<'_> {
    fn err(&self, reason: impl Into<String>) -> Error {
        Error::Format {
            path: self.path.to_path_buf(),
            reason: reason.into(),
        }
    }

    fn skip_space_and_comments(&mut self) {
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

    fn token(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err(format!("expected {what} at byte {start}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| self.err(format!("{what} out of range")))
    }
}

impl Netpbm {
    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
        Netpbm::decode(&bytes, path)
    }

    /// Parse an in-memory file; `path` only labels errors.
    pub fn decode(bytes: &[u8], path: &Path) -> Result<Self> {
        let mut cur = Cursor { bytes, pos: 0, path };
        let format = match bytes.get(..2) {
            Some(b"P2") => PnmFormat::P2,
            Some(b"P5") => PnmFormat::P5,
            Some(b"P6") => PnmFormat::P6,
            _ => return Err(cur.err("not a P2, P5 or P6 Netpbm file")),
        };
        cur.pos = 2;
        let width = cur.token("width")?;
        let height = cur.token("height")?;
        let maxval = cur.token("maxval")?;
        if width == 0 || height == 0 {
            return Err(cur.err("image dimensions must be positive"));
        }
        if maxval == 0 || maxval > u16::MAX as usize {
            return Err(cur.err(format!("maxval {maxval} outside 1..=65535")));
        }
        let count = width * height * format.channels();
        let samples: Vec<u16> = match format {
            PnmFormat::P2 => (0..count)
                .map(|_| cur.token("sample").map(|v| v as u16))
                .collect::<Result<_>>()?,
            PnmFormat::P5 | PnmFormat::P6 => {
                // exactly one whitespace byte separates header and raster
                if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
                    return Err(cur.err("missing whitespace after maxval"));
                }
                let data = &bytes[cur.pos + 1..];
                let wide = maxval > 255;
                let need = count * if wide { 2 } else { 1 };
                if data.len() < need {
                    return Err(cur.err(format!("raster truncated: {} of {need} bytes", data.len())));
                }
                if wide {
                    data[..need]
                        .chunks_exact(2)
                        .map(|c| u16::from_be_bytes([c[0], c[1]]))
                        .collect()
                } else {
                    data[..need].iter().map(|&b| u16::from(b)).collect()
                }
            }
        };
        if samples.iter().any(|&s| s as usize > maxval) {
            return Err(cur.err("sample exceeds maxval"));
        }
        Ok(Netpbm {
            format,
            width,
            height,
            maxval: maxval as u16,
            samples,
        })
    }

    pub fn encode(&self) -> Vec<u8> {
        let mut out = format!("{}\n{} {}\n{}\n", self.format, self.width, self.height, self.maxval).into_bytes();
        match self.format {
            PnmFormat::P2 => {
                for row in self.samples.chunks(self.width * self.format.channels()) {
                    for line in row.chunks(16) {
                        let text: Vec<String> = line.iter().map(u16::to_string).collect();
                        out.extend_from_slice(text.join(" ").as_bytes());
                        out.push(b'\n');
                    }
                }
            }
            PnmFormat::P5 | PnmFormat::P6 => {
                if self.maxval > 255 {
                    for s in &self.samples {
                        out.extend_from_slice(&s.to_be_bytes());
                    }
                } else {
                    out.extend(self.samples.iter().map(|&s| s as u8));
                }
            }
        }
        out
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        fs::write(path, self.encode()).map_err(|e| Error::io(path, e))
    }

    pub fn to_image(&self) -> Result<RealImage> {
        let values: Vec<f64> = self.samples.iter().map(|&s| f64::from(s)).collect();
        RealImage::from_interleaved(self.height, self.width, self.format.channels(), &values)
    }

    /// Quantize an image: clamp to `[0, maxval]`, round half up.
    pub fn from_image(image: &RealImage, format: PnmFormat, maxval: u16) -> Result<Self> {
        if image.channels() != format.channels() {
            return Err(Error::domain(format!(
                "{format} needs {} channel(s), image has {}",
                format.channels(),
                image.channels()
            )));
        }
        let top = f64::from(maxval);
        let samples = image
            .to_interleaved()
            .into_iter()
            .map(|v| (v.clamp(0.0, top) + 0.5).floor().min(top) as u16)
            .collect();
        Ok(Netpbm {
            format,
            width: image.width(),
            height: image.height(),
            maxval,
            samples,
        })
    }

    /// One row of the first channel as a signal.
    pub fn row(&self, y: usize) -> Result<Vec<f64>> {
        if y >= self.height {
            return Err(Error::Config(format!("row {y} outside image of height {}", self.height)));
        }
        let c = self.format.channels();
        let start = y * self.width * c;
        Ok((0..self.width).map(|x| f64::from(self.samples[start + x * c])).collect())
    }
}
