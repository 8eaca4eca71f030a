//! Run configuration: identity selection, grid overrides, precision and
//! output settings. Read from JSON, then overlaid with command-line flags.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context};
use serde::{Deserialize, Serialize};
use zeta_omega::identities::IdentityId;

pub const DIGITS_ENV: &str = "ZOMEGA_DIGITS";
pub const DEFAULT_DIGITS: u32 = 50;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// A complex parameter written as `a`, `bi` or `a+bi`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZValue {
    pub re: f64,
    pub im: f64,
}

impl FromStr for ZValue {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || format!("cannot parse complex number {s:?}");
        if s.is_empty() {
            return Err(bad());
        }
        let Some(body) = s.strip_suffix('i') else {
            return s.parse().map(|re| ZValue { re, im: 0.0 }).map_err(|_| bad());
        };
        // Split at the last sign that is not a leading sign or an exponent sign.
        let bytes = body.as_bytes();
        let split = (1..bytes.len())
            .rev()
            .find(|&k| matches!(bytes[k], b'+' | b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
        let coeff = |t: &str| -> Result<f64, String> {
            match t {
                "" | "+" => Ok(1.0),
                "-" => Ok(-1.0),
                _ => t.parse().map_err(|_| bad()),
            }
        };
        match split {
            Some(k) => Ok(ZValue { re: body[..k].parse().map_err(|_| bad())?, im: coeff(&body[k..])? }),
            None => Ok(ZValue { re: 0.0, im: coeff(body)? }),
        }
    }
}

impl fmt::Display for ZValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

impl Serialize for ZValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ZValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Per-parameter value lists; each present list replaces that parameter in
/// every default case.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridOverrides {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub t: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub m: Vec<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub z: Vec<ZValue>,
    #[serde(rename = "N", skip_serializing_if = "Vec::is_empty")]
    pub n: Vec<u32>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub h: Vec<i64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ell: Vec<i64>,
}

impl GridOverrides {
    pub fn is_empty(&self) -> bool {
        self == &GridOverrides::default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TolOverrides {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub abs: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rel: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Catalog IDs, or "all".
    pub identities: Vec<String>,
    pub grid: GridOverrides,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub digits: Option<u32>,
    pub tol: TolOverrides,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub format: Format,
    pub jobs: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            identities: vec!["all".into()],
            grid: GridOverrides::default(),
            digits: None,
            tol: TolOverrides::default(),
            out: None,
            format: Format::Json,
            jobs: 1,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("parsing {}", path.display()))
    }

    /// Catalog IDs in request order, without duplicates. Fails on the first
    /// unknown name so that nothing runs on a bad config.
    pub fn resolve_ids(&self) -> anyhow::Result<Vec<IdentityId>> {
        let mut out = Vec::new();
        if self.identities.is_empty() {
            bail!("no identities selected");
        }
        for name in &self.identities {
            let ids: Vec<IdentityId> = if name.eq_ignore_ascii_case("all") {
                IdentityId::ALL.to_vec()
            } else {
                vec![name.parse().map_err(|e| anyhow::anyhow!("{e}"))?]
            };
            for id in ids {
                if !out.contains(&id) {
                    out.push(id);
                }
            }
        }
        Ok(out)
    }

    /// Flag, then config, then $ZOMEGA_DIGITS, then 50.
    pub fn resolve_digits(&self) -> anyhow::Result<u32> {
        if let Some(d) = self.digits {
            return Ok(d);
        }
        match std::env::var(DIGITS_ENV) {
            Ok(v) => v.trim().parse().with_context(|| format!("{DIGITS_ENV}={v:?} is not an integer")),
            Err(_) => Ok(DEFAULT_DIGITS),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_literals() {
        let z = |s: &str| s.parse::<ZValue>().unwrap();
        assert_eq!(z("0.5+0.25i"), ZValue { re: 0.5, im: 0.25 });
        assert_eq!(z("-0.7"), ZValue { re: -0.7, im: 0.0 });
        assert_eq!(z("-i"), ZValue { re: 0.0, im: -1.0 });
        assert_eq!(z("1e-3-2e+1i"), ZValue { re: 1e-3, im: -20.0 });
        assert_eq!(z("3 + 2i"), ZValue { re: 3.0, im: 2.0 });
        assert!("1+xi".parse::<ZValue>().is_err());
        assert!("".parse::<ZValue>().is_err());
    }

    #[test]
    fn unknown_ids_rejected() {
        let cfg = RunConfig { identities: vec!["R7".into(), "Q9".into()], ..Default::default() };
        assert!(cfg.resolve_ids().is_err());
        let cfg = RunConfig { identities: vec!["r7".into(), "all".into()], ..Default::default() };
        let ids = cfg.resolve_ids().unwrap();
        assert_eq!(ids.len(), IdentityId::ALL.len());
        assert_eq!(ids[0], IdentityId::R7);
    }

    #[test]
    fn unknown_fields_rejected() {
        assert!(RunConfig::from_json(r#"{"identites": ["R7"]}"#).is_err());
    }
}
