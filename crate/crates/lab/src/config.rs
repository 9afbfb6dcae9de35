//! Configuration files and compact profile descriptions.
//!
//! A config file is TOML with up to three tables:
//!
//! ```toml
//! [profile]
//! kind = "periodic"
//! values = ["1/4", "1/2"]
//!
//! [experiment]
//! name = "darling-kac"
//! seed = 7
//!
//! [output]
//! dir = "out"
//! formats = ["json", "csv"]
//! ```
//!
//! Command-line flags override every field.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use anisowalk_core::{ProfileSpec, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

/// A probability written either as `"1/4"` or as a number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Prob {
    Text(String),
    Number(f64),
}

impl Prob {
    pub fn to_rational(&self) -> Result<Rational, String> {
        match self {
            Prob::Text(s) => parse_rational(s),
            Prob::Number(x) => float_to_rational(*x),
        }
    }

    pub fn to_f64(&self) -> Result<f64, String> {
        match self {
            Prob::Text(s) => {
                if let Ok(x) = s.trim().parse::<f64>() {
                    return Ok(x);
                }
                let r = parse_rational(s)?;
                Ok(*r.numer() as f64 / *r.denom() as f64)
            }
            Prob::Number(x) => Ok(*x),
        }
    }
}

fn float_to_rational(x: f64) -> Result<Rational, String> {
    let r = Rational::approximate_float(x).ok_or_else(|| format!("{x} is not representable"))?;
    if *r.numer() as f64 / *r.denom() as f64 != x {
        return Err(format!("{x} has no exact small fraction; write it as \"a/b\""));
    }
    Ok(r)
}

/// Parses `"a/b"`, an integer, or a plain decimal such as `0.125` (read
/// exactly, in base ten).
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    if let Ok(r) = s.parse::<Rational>() {
        return Ok(r);
    }
    let bad = || format!("`{s}` is not a probability");
    let (int, frac) = s.split_once('.').ok_or_else(bad)?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 18 {
        return Err(bad());
    }
    let den = 10i64.pow(frac.len() as u32);
    let int: i64 = if int.is_empty() { 0 } else { int.parse().map_err(|_| bad())? };
    let frac: i64 = frac.parse().map_err(|_| bad())?;
    let num = int
        .checked_mul(den)
        .and_then(|x| x.checked_add(frac))
        .ok_or_else(bad)?;
    Ok(Rational::new(num, den))
}

/// The `[profile]` table.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileConfig {
    /// `constant`, `periodic`, `comb`, `hphc`, `powertail` or `table`.
    pub kind: String,
    pub p: Option<Prob>,
    pub values: Option<Vec<Prob>>,
    pub gamma: Option<f64>,
    pub alpha: Option<f64>,
    pub p0: Option<Prob>,
    /// Row index (as a string key) to probability.
    pub entries: Option<BTreeMap<String, Prob>>,
    pub default: Option<Prob>,
}

impl ProfileConfig {
    pub fn resolve(&self) -> LabResult<ProfileSpec> {
        let fail = |reason: String| LabError::Profile {
            text: format!("kind = {}", self.kind),
            reason,
        };
        let need = |field: &str| fail(format!("missing `{field}`"));
        let spec = match self.kind.as_str() {
            "comb" => ProfileSpec::comb(),
            "hphc" | "half-plane-half-comb" => ProfileSpec::half_plane_half_comb(),
            "constant" => {
                let p = self.p.as_ref().ok_or_else(|| need("p"))?;
                ProfileSpec::constant(p.to_rational().map_err(fail)?)?
            }
            "periodic" => {
                let values = self.values.as_ref().ok_or_else(|| need("values"))?;
                let values = values
                    .iter()
                    .map(Prob::to_rational)
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(fail)?;
                ProfileSpec::periodic(values)?
            }
            "powertail" | "power-tail" => {
                let gamma = self.gamma.ok_or_else(|| need("gamma"))?;
                let alpha = self.alpha.ok_or_else(|| need("alpha"))?;
                let p0 = self.p0.as_ref().ok_or_else(|| need("p0"))?;
                ProfileSpec::power_tail(gamma, alpha, p0.to_f64().map_err(fail)?)?
            }
            "table" => {
                let default = self.default.as_ref().ok_or_else(|| need("default"))?;
                let mut entries = BTreeMap::new();
                for (k, v) in self.entries.iter().flatten() {
                    let j: i64 = k.trim().parse().map_err(|_| fail(format!("row `{k}` is not an integer")))?;
                    entries.insert(j, v.to_rational().map_err(fail)?);
                }
                ProfileSpec::table(entries, default.to_rational().map_err(fail)?)?
            }
            other => return Err(fail(format!("unknown kind `{other}`"))),
        };
        Ok(spec)
    }
}

/// Parses the compact forms `comb`, `hphc`, `constant:1/4`,
/// `periodic:1/4,1/2` and `powertail:gamma=2,alpha=2,p0=1/4`.
pub fn parse_profile(text: &str) -> LabResult<ProfileSpec> {
    let fail = |reason: String| LabError::Profile {
        text: text.to_string(),
        reason,
    };
    let (kind, args) = match text.split_once(':') {
        Some((k, a)) => (k.trim(), a.trim()),
        None => (text.trim(), ""),
    };
    let mut cfg = ProfileConfig {
        kind: kind.to_string(),
        ..ProfileConfig::default()
    };
    match kind {
        "comb" | "hphc" | "half-plane-half-comb" => {
            if !args.is_empty() {
                return Err(fail(format!("`{kind}` takes no arguments")));
            }
        }
        "constant" => cfg.p = Some(Prob::Text(args.to_string())),
        "periodic" => cfg.values = Some(args.split(',').map(|s| Prob::Text(s.to_string())).collect()),
        "powertail" | "power-tail" => {
            for part in args.split(',') {
                let (key, value) = part
                    .split_once('=')
                    .ok_or_else(|| fail(format!("expected key=value, got `{part}`")))?;
                let number = || {
                    Prob::Text(value.to_string())
                        .to_f64()
                        .map_err(|e| fail(e))
                };
                match key.trim() {
                    "gamma" => cfg.gamma = Some(number()?),
                    "alpha" => cfg.alpha = Some(number()?),
                    "p0" => cfg.p0 = Some(Prob::Text(value.to_string())),
                    other => return Err(fail(format!("unknown parameter `{other}`"))),
                }
            }
        }
        other => return Err(fail(format!("unknown kind `{other}`"))),
    }
    cfg.resolve().map_err(|e| match e {
        LabError::Profile { reason, .. } => fail(reason),
        LabError::Core(err) => fail(err.to_string()),
        other => other,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(format!("unknown format `{other}` (json, csv)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: Option<String>,
    pub seed: Option<u64>,
    /// Overrides the registered replica count (or scales it, see `scale`).
    pub replicas: Option<u64>,
    pub scale: Option<f64>,
    /// Walk length for `simulate`.
    pub steps: Option<u64>,
    pub mechanism: Option<String>,
    pub jobs: Option<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: Option<PathBuf>,
    pub formats: Option<Vec<Format>>,
    pub plot_data: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub profile: Option<ProfileConfig>,
    #[serde(default)]
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub output: OutputSection,
}

impl Config {
    pub fn from_toml(text: &str) -> LabResult<Self> {
        toml::from_str(text).map_err(|e| LabError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Read {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use anisowalk_core::ProfileKind;

    #[test]
    fn compact_profiles() {
        assert_eq!(parse_profile("comb").unwrap(), ProfileSpec::comb());
        assert_eq!(parse_profile("hphc").unwrap(), ProfileSpec::half_plane_half_comb());
        let c = parse_profile("constant:1/4").unwrap();
        assert_eq!(c.p_exact(5), Some(Rational::new(1, 4)));
        assert_eq!(parse_profile("constant:0.25").unwrap(), c);
        let p = parse_profile("periodic:1/4,1/2").unwrap();
        assert!((p.gamma_periodic().unwrap() - 1.5).abs() < 1e-15);
        let t = parse_profile("powertail:gamma=2,alpha=0.5,p0=1/4").unwrap();
        assert!(matches!(t.kind(), ProfileKind::PowerTail { alpha, .. } if *alpha == 0.5));
        let odd = parse_profile("constant:0.1234567891").unwrap();
        assert_eq!(odd.p_exact(0), Some(Rational::new(1_234_567_891, 10_000_000_000)));
        for bad in ["", "constant:0.7", "constant:x", "constant:1.", "periodic:", "zigzag", "comb:1", "powertail:gamma=2"] {
            assert!(parse_profile(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn config_file() {
        let cfg = Config::from_toml(
            r#"
            [profile]
            kind = "table"
            default = "1/2"
            entries = { "0" = "1/4", "-3" = 0.125 }

            [experiment]
            name = "range-lln"
            seed = 9

            [output]
            formats = ["csv"]
            "#,
        )
        .unwrap();
        let profile = cfg.profile.unwrap().resolve().unwrap();
        assert_eq!(profile.p_exact(-3), Some(Rational::new(1, 8)));
        assert_eq!(profile.p_exact(1), Some(Rational::new(1, 2)));
        assert_eq!(cfg.experiment.seed, Some(9));
        assert_eq!(cfg.output.formats, Some(vec![Format::Csv]));
        assert!(Config::from_toml("[experiment]\nbogus = 1").is_err());
    }
}
