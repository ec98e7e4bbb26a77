//! Single-column CSV signals and synthetic signal specs.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};
use crate::image::RealImage;
use crate::seeded_rng;
use crate::spectral::RealSignal;

/// Read one value per line. Blank lines, `#` comments and a non-numeric
/// first line (a header) are skipped.
pub fn read_csv_signal(path: impl AsRef<Path>) -> Result<RealSignal> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let format_err = |reason: String| Error::Format {
        path: path.to_path_buf(),
        reason,
    };
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.split(',').next().unwrap_or("").trim();
        if field.is_empty() || field.starts_with('#') {
            continue;
        }
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(format_err(format!("line {}: non-finite value", i + 1))),
            Err(_) if values.is_empty() && i == 0 => continue,
            Err(_) => return Err(format_err(format!("line {}: `{field}` is not a number", i + 1))),
        }
    }
    if values.is_empty() {
        return Err(format_err("no samples".into()));
    }
    RealSignal::new(values)
}

pub fn write_csv_signal(path: impl AsRef<Path>, x: &RealSignal) -> Result<()> {
    let path = path.as_ref();
    let mut text = String::from("value\n");
    for v in x.iter() {
        text.push_str(&format!("{v:e}\n"));
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Synthetic signal: `tone:<f>`, `impulse`, or `rand:<seed>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SignalSpec {
    /// `cos(2π·f·t/n)`
    Tone(f64),
    /// Unit sample at index 0.
    Impulse,
    /// Uniform on `[-1, 1)`.
    Random(u64),
}

impl SignalSpec {
    pub fn generate(&self, n: usize) -> Result<RealSignal> {
        if n == 0 {
            return Err(Error::Config("signal length must be positive".into()));
        }
        let samples = match *self {
            SignalSpec::Tone(f) => (0..n)
                .map(|t| (2.0 * PI * f * t as f64 / n as f64).cos())
                .collect(),
            SignalSpec::Impulse => {
                let mut v = vec![0.0; n];
                v[0] = 1.0;
                v
            }
            SignalSpec::Random(seed) => random_samples(seed, n),
        };
        RealSignal::new(samples)
    }
}

impl FromStr for SignalSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("bad signal spec `{s}` (use tone:<f>, impulse, rand:<seed>)"));
        match s.split_once(':') {
            None if s == "impulse" => Ok(SignalSpec::Impulse),
            Some(("tone", f)) => f.parse().map(SignalSpec::Tone).map_err(|_| bad()),
            Some(("rand", seed)) => seed.parse().map(SignalSpec::Random).map_err(|_| bad()),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for SignalSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignalSpec::Tone(freq) => write!(f, "tone:{freq}"),
            SignalSpec::Impulse => f.write_str("impulse"),
            SignalSpec::Random(seed) => write!(f, "rand:{seed}"),
        }
    }
}

pub fn random_samples(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// Deterministic grayscale test card in `[0, 255]`: a smooth background,
/// two discs with hard edges, a stripe band and mild noise.
pub fn synthetic_image(size: usize, seed: u64) -> Result<RealImage> {
    let mut rng = seeded_rng(seed);
    let s = size as f64;
    let mut values = Vec::with_capacity(size * size);
    for y in 0..size {
        for x in 0..size {
            let (u, v) = (x as f64 / s, y as f64 / s);
            let mut p = 90.0 + 60.0 * (2.0 * PI * u).sin() * (PI * v).cos() + 30.0 * v;
            if (u - 0.3).hypot(v - 0.4) < 0.18 {
                p += 70.0;
            }
            if (u - 0.72).hypot(v - 0.62) < 0.12 {
                p -= 60.0;
            }
            if (0.45..0.55).contains(&v) {
                p += 40.0 * (2.0 * PI * 24.0 * u).sin();
            }
            p += rng.random_range(-6.0..6.0);
            values.push(p.clamp(0.0, 255.0).round());
        }
    }
    RealImage::from_interleaved(size, size, 1, &values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!("impulse".parse::<SignalSpec>().unwrap(), SignalSpec::Impulse);
        assert_eq!("tone:2.5".parse::<SignalSpec>().unwrap(), SignalSpec::Tone(2.5));
        assert_eq!("rand:7".parse::<SignalSpec>().unwrap(), SignalSpec::Random(7));
        assert!("noise".parse::<SignalSpec>().is_err());
        assert!("rand:x".parse::<SignalSpec>().is_err());
        assert_eq!(SignalSpec::Random(7).to_string(), "rand:7");
    }

    #[test]
    fn generated_signals() {
        let imp = SignalSpec::Impulse.generate(4).unwrap();
        assert_eq!(imp.as_slice(), &[1.0, 0.0, 0.0, 0.0]);
        let a = SignalSpec::Random(3).generate(16).unwrap();
        assert_eq!(a, SignalSpec::Random(3).generate(16).unwrap());
        assert_ne!(a, SignalSpec::Random(4).generate(16).unwrap());
        assert!(a.iter().all(|v| (-1.0..1.0).contains(v)));
        assert!(SignalSpec::Impulse.generate(0).is_err());
    }

    #[test]
    fn csv_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.csv");
        let x = SignalSpec::Random(1).generate(9).unwrap();
        write_csv_signal(&path, &x).unwrap();
        assert_eq!(read_csv_signal(&path).unwrap(), x);
        fs::write(&path, "1\n\n# c\n2,ignored\nfoo\n").unwrap();
        assert!(read_csv_signal(&path).is_err());
        fs::write(&path, "# only comments\n").unwrap();
        assert!(read_csv_signal(&path).is_err());
    }

    #[test]
    fn synthetic_image_is_deterministic() {
        let a = synthetic_image(32, 0).unwrap();
        assert_eq!(a, synthetic_image(32, 0).unwrap());
        assert!(a.data().iter().all(|v| (0.0..=255.0).contains(v) && v.fract() == 0.0));
    }
}
