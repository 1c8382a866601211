//! Flat `key = value` configuration files and flag > file > default resolution.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    entries: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text)
    }

    /// Blank lines and `#` comments are ignored; keys may use `-` or `_`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("config line {}: expected key=value, got `{raw}`", i + 1);
            };
            let key = normalize(key.trim());
            if key.is_empty() {
                bail!("config line {}: empty key", i + 1);
            }
            entries.insert(key, value.trim().to_string());
        }
        Ok(Self { entries })
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.entries.get(&normalize(key)).map(String::as_str)
    }

    /// Flag value if given, else the config entry, else `default`.
    pub fn resolve<T>(&self, flag: Option<T>, key: &str, default: T) -> Result<T>
    where
        T: FromStr,
        T::Err: Display,
    {
        Ok(self.resolve_opt(flag, key)?.unwrap_or(default))
    }

    pub fn resolve_opt<T>(&self, flag: Option<T>, key: &str) -> Result<Option<T>>
    where
        T: FromStr,
        T::Err: Display,
    {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.raw(key) {
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key `{key}`: cannot parse `{v}`: {e}")),
            None => Ok(None),
        }
    }
}

fn normalize(key: &str) -> String {
    key.to_ascii_lowercase().replace('-', "_")
}

/// Inclusive grid `start:stop:step`; a negative step runs downwards.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    /// When the step divides the interval the points interpolate the
    /// endpoints, so symmetric ranges give exactly mirrored grids.
    pub fn points(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        if count == 0 {
            return vec![self.start];
        }
        let last = self.start + count as f64 * self.step;
        if (last - self.stop).abs() <= 1e-9 * self.step.abs() {
            let n = count as f64;
            (0..=count)
                .map(|i| (self.start * (n - i as f64) + self.stop * i as f64) / n)
                .collect()
        } else {
            (0..=count).map(|i| self.start + i as f64 * self.step).collect()
        }
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, c] = parts[..] else {
            return Err(format!("expected start:stop:step, got `{s}`"));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}"));
        let (start, stop, step) = (num(a)?, num(b)?, num(c)?);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err("range bounds must be finite".into());
        }
        if step == 0.0 || (stop - start) * step < 0.0 {
            return Err(format!("range `{s}`: step must be non-zero and point from start to stop"));
        }
        if (stop - start) / step > 1e7 {
            return Err(format!("range `{s}` has too many points"));
        }
        Ok(Self { start, stop, step })
    }
}

/// Comma-separated list of reals.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

impl FromStr for List {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|e| format!("`{t}`: {e}")))
            .collect::<Result<Vec<_>, _>>()
            .map(List)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_key_values() {
        let c = ConfigFile::parse("# model\nlambda = 0.5\nc-2=-3 # inline\n\nformat=json\n").unwrap();
        assert_eq!(c.raw("lambda"), Some("0.5"));
        assert_eq!(c.raw("c2"), None);
        assert_eq!(c.raw("c_2"), Some("-3"));
        assert_eq!(c.raw("FORMAT"), Some("json"));
        assert!(ConfigFile::parse("oops").is_err());
    }

    #[test]
    fn precedence() {
        let c = ConfigFile::parse("lambda = 0.5").unwrap();
        assert_eq!(c.resolve(Some(2.0), "lambda", 1.0).unwrap(), 2.0);
        assert_eq!(c.resolve(None, "lambda", 1.0).unwrap(), 0.5);
        assert_eq!(c.resolve(None, "hbar", 1.0).unwrap(), 1.0);
        let bad = ConfigFile::parse("lambda = x").unwrap();
        assert!(bad.resolve::<f64>(None, "lambda", 1.0).is_err());
    }

    #[test]
    fn ranges() {
        let r: Range = "0:10:0.01".parse().unwrap();
        let p = r.points();
        assert_eq!(p.len(), 1001);
        assert_eq!(p[500], 5.0);
        assert_eq!(*p.last().unwrap(), 10.0);
        assert_eq!("-1:1:0.5".parse::<Range>().unwrap().points(), [-1.0, -0.5, 0.0, 0.5, 1.0]);
        assert!("1:0:0.1".parse::<Range>().is_err());
        assert_eq!("3:1:-1".parse::<Range>().unwrap().points(), [3.0, 2.0, 1.0]);
        assert_eq!("0:1:0.3".parse::<Range>().unwrap().points().len(), 4);
        let sym = "-3:3:0.01".parse::<Range>().unwrap().points();
        assert!(sym.iter().zip(sym.iter().rev()).all(|(a, b)| *a == -*b));
        assert!("0:1".parse::<Range>().is_err());
        assert!("0:1:0".parse::<Range>().is_err());
    }

    #[test]
    fn lists() {
        assert_eq!("0.5, 0.7,1".parse::<List>().unwrap().0, [0.5, 0.7, 1.0]);
        assert!("a,1".parse::<List>().is_err());
    }
}
