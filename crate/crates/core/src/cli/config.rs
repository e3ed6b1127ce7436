//! Run configuration: flags over a `key = value` file over defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Ambient dimension for derivations: a concrete integer or the symbol n.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    Symbolic,
    Value(usize),
}

impl FromStr for Dim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Dim> {
        match s.trim() {
            "symbolic" | "n" => Ok(Dim::Symbolic),
            v => v
                .parse::<usize>()
                .ok()
                .filter(|&n| n >= 2)
                .map(Dim::Value)
                .ok_or_else(|| Error::Argument(format!("n must be an integer >= 2 or \"symbolic\", got {v:?}"))),
        }
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Symbolic => f.write_str("symbolic"),
            Dim::Value(n) => write!(f, "{n}"),
        }
    }
}

/// Suites accepted by `verify`.
pub const SUITES: [&str; 6] = ["symbolic-regression", "lemma51-oracle", "sphere-identities", "slice", "isometry", "all"];

/// Partially specified settings, as read from flags or a config file.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Settings {
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub n: Option<Dim>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub grid_volume: Option<usize>,
    pub grid_dirs: Option<usize>,
    pub grid_offsets: Option<usize>,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
}

fn line_error(line: usize, msg: String) -> Error {
    Error::Configuration(format!("config line {line}: {msg}"))
}

fn parse_value<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| line_error(line, format!("invalid value {value:?} for {key}")))
}

impl Settings {
    /// Parses `key = value` lines; `#` starts a comment, keys accept `-` or `_`.
    pub fn parse_file(text: &str) -> Result<Settings> {
        let mut out = Settings::default();
        for (k, raw) in text.lines().enumerate() {
            let line_no = k + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| line_error(line_no, format!("expected key = value, got {line:?}")))?;
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            match key.as_str() {
                "m" => out.m = Some(parse_value(&key, value, line_no)?),
                "r" => out.r = Some(parse_value(&key, value, line_no)?),
                "n" => out.n = Some(value.parse().map_err(|e: Error| line_error(line_no, e.to_string()))?),
                "s" => out.s = Some(parse_value(&key, value, line_no)?),
                "t" => out.t = Some(parse_value(&key, value, line_no)?),
                "grid-volume" => out.grid_volume = Some(parse_value(&key, value, line_no)?),
                "grid-dirs" => out.grid_dirs = Some(parse_value(&key, value, line_no)?),
                "grid-offsets" => out.grid_offsets = Some(parse_value(&key, value, line_no)?),
                "tol" => out.tol = Some(parse_value(&key, value, line_no)?),
                "out" => out.out = Some(PathBuf::from(value)),
                "suite" => out.suite = Some(value.to_string()),
                _ => return Err(line_error(line_no, format!("unknown key {key:?}"))),
            }
        }
        Ok(out)
    }

    /// Fields set in `self` win over those in `lower`.
    pub fn over(self, lower: Settings) -> Settings {
        Settings {
            m: self.m.or(lower.m),
            r: self.r.or(lower.r),
            n: self.n.or(lower.n),
            s: self.s.or(lower.s),
            t: self.t.or(lower.t),
            grid_volume: self.grid_volume.or(lower.grid_volume),
            grid_dirs: self.grid_dirs.or(lower.grid_dirs),
            grid_offsets: self.grid_offsets.or(lower.grid_offsets),
            tol: self.tol.or(lower.tol),
            out: self.out.or(lower.out),
            suite: self.suite.or(lower.suite),
        }
    }
}

/// Effective configuration of one run. Unset `m`, `r`, `n`, `s`, `t`, `tol` mean
/// "the suite's full range" or "the suite's own tolerance".
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub m: Option<usize>,
    pub r: Option<usize>,
    pub n: Option<Dim>,
    pub s: Option<f64>,
    pub t: Option<f64>,
    pub grid_volume: usize,
    pub grid_dirs: usize,
    pub grid_offsets: usize,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub suite: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::resolve(Settings::default()).expect("defaults are valid")
    }
}

impl RunConfig {
    /// Applies defaults and validates ranges.
    pub fn resolve(s: Settings) -> Result<RunConfig> {
        let cfg = RunConfig {
            m: s.m,
            r: s.r,
            n: s.n,
            s: s.s,
            t: s.t,
            grid_volume: s.grid_volume.unwrap_or(256),
            grid_dirs: s.grid_dirs.unwrap_or(512),
            grid_offsets: s.grid_offsets.unwrap_or(512),
            tol: s.tol,
            out: s.out,
            suite: s.suite,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Argument(msg));
        if let Some(t) = self.t {
            // the norms need t > −n/2; without a concrete n the numeric suites run at n = 2
            let n = match self.n {
                Some(Dim::Value(n)) => n as f64,
                _ => 2.0,
            };
            // also rejects NaN
            if t.is_nan() || t <= -n / 2.0 {
                return bad(format!("t = {t} must exceed -n/2 = {}", -n / 2.0));
            }
        }
        if let Some(s) = self.s {
            if !s.is_finite() {
                return bad(format!("s = {s} must be finite"));
            }
        }
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol.is_finite()) {
                return bad(format!("tol = {tol} must be positive"));
            }
        }
        if self.grid_volume < 16 || !self.grid_volume.is_multiple_of(2) {
            return bad(format!("grid-volume = {} must be even and at least 16", self.grid_volume));
        }
        if self.grid_dirs < 16 || !self.grid_dirs.is_multiple_of(4) {
            return bad(format!("grid-dirs = {} must be a multiple of 4 and at least 16", self.grid_dirs));
        }
        if self.grid_offsets < 16 || !self.grid_offsets.is_multiple_of(2) {
            return bad(format!("grid-offsets = {} must be even and at least 16", self.grid_offsets));
        }
        if let Some(suite) = &self.suite {
            if !SUITES.contains(&suite.as_str()) {
                return bad(format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", ")));
            }
        }
        Ok(())
    }

    /// Every effective value as text, for the report header.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let opt = |v: Option<String>| v.unwrap_or_else(|| "all".to_string());
        let mut out = BTreeMap::new();
        out.insert("m".into(), opt(self.m.map(|v| v.to_string())));
        out.insert("r".into(), opt(self.r.map(|v| v.to_string())));
        out.insert("n".into(), opt(self.n.map(|v| v.to_string())));
        out.insert("s".into(), opt(self.s.map(|v| v.to_string())));
        out.insert("t".into(), opt(self.t.map(|v| v.to_string())));
        out.insert("grid-volume".into(), self.grid_volume.to_string());
        out.insert("grid-dirs".into(), self.grid_dirs.to_string());
        out.insert("grid-offsets".into(), self.grid_offsets.to_string());
        out.insert("tol".into(), self.tol.map_or_else(|| "suite default".to_string(), |v| v.to_string()));
        if let Some(suite) = &self.suite {
            out.insert("suite".into(), suite.clone());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_parsing_and_precedence() {
        let file = Settings::parse_file("# demo\nm = 2\ngrid_dirs = 128\nn = symbolic\ntol=1e-3\n").unwrap();
        assert_eq!(file.m, Some(2));
        assert_eq!(file.grid_dirs, Some(128));
        assert_eq!(file.n, Some(Dim::Symbolic));
        let flags = Settings { m: Some(1), ..Settings::default() };
        let cfg = RunConfig::resolve(flags.over(file)).unwrap();
        assert_eq!((cfg.m, cfg.grid_dirs, cfg.grid_volume, cfg.tol), (Some(1), 128, 256, Some(1e-3)));
    }

    #[test]
    fn rejects_bad_input() {
        let e = Settings::parse_file("m 2").unwrap_err().to_string();
        assert!(e.contains("config line 1"), "{e}");
        let e = Settings::parse_file("\ncolour = red").unwrap_err().to_string();
        assert!(e.contains("config line 2") && e.contains("colour"), "{e}");
        assert!(RunConfig::resolve(Settings { t: Some(-1.0), ..Settings::default() }).is_err());
        assert!(RunConfig::resolve(Settings { suite: Some("bogus".into()), ..Settings::default() }).is_err());
        assert!("1".parse::<Dim>().is_err());
    }
}
