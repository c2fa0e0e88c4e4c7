//! Flat `key = value` study files.
//!
//! ```text
//! # lambda=10 convergence, both forms
//! lambda = 10
//! form = both          # original | rotated | both
//! basis = ho           # trig | ho | both
//! m = 5, 10, 15, 20
//! digits = 30
//! method = rr          # rr | collocation | both
//! collocation_l = 3, 3.5
//! reference = paper    # paper | self | none
//! reference.10 = 3.0191777147719673869116789 paper
//! ```

use std::collections::BTreeMap;

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::hamiltonian::{Coupling, HamiltonianForm};
use crate::numerics::parse_rational;

use super::{Method, Provenance, ReferenceEnergy, StudyConfig};

const KEYS: [&str; 8] = ["lambda", "form", "basis", "m", "digits", "method", "collocation_l", "reference"];
const DEFAULT_M: &str = "5, 10, 15, 20, 25, 30, 35";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct KeyValues {
    entries: BTreeMap<String, String>,
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split([',', ' ', '\t']).map(str::trim).filter(|s| !s.is_empty())
}

fn choice<T: Copy>(value: &str, all: &[T], parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    if value.trim().eq_ignore_ascii_case("both") || value.trim().eq_ignore_ascii_case("all") {
        return Ok(all.to_vec());
    }
    list(value).map(parse).collect()
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut kv = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected `key = value`", n + 1)))?;
            let key = key.trim().to_ascii_lowercase();
            if !KEYS.contains(&key.as_str()) && !key.starts_with("reference.") {
                return Err(Error::Config(format!("line {}: unknown key {key:?}", n + 1)));
            }
            if kv.entries.insert(key.clone(), value.trim().to_string()).is_some() {
                return Err(Error::Config(format!("line {}: duplicate key {key:?}", n + 1)));
            }
        }
        Ok(kv)
    }

    /// Sets (or overrides) one key.
    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        self.entries.insert(key.to_ascii_lowercase(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Builds a validated study; missing keys take their defaults.
    pub fn to_study_config(&self, default_digits: u32) -> Result<StudyConfig> {
        let cfg = |e: Error| Error::Config(e.to_string());
        let lambdas = list(self.get("lambda").unwrap_or("10"))
            .map(str::parse::<Coupling>)
            .collect::<Result<Vec<_>>>()
            .map_err(cfg)?;
        let forms = choice(self.get("form").unwrap_or("both"), &HamiltonianForm::ALL, str::parse).map_err(cfg)?;
        let bases = choice(self.get("basis").unwrap_or("both"), &BasisKind::ALL, str::parse).map_err(cfg)?;
        let methods = choice(self.get("method").unwrap_or("rr"), &Method::ALL, str::parse).map_err(cfg)?;
        let m_values = list(self.get("m").unwrap_or(DEFAULT_M))
            .map(|s| s.parse::<usize>().map_err(|_| Error::Config(format!("bad basis size {s:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let target_digits = match self.get("digits") {
            Some(d) => d
                .trim()
                .parse::<u32>()
                .map_err(|_| Error::Config(format!("bad digit count {d:?}")))?,
            None => default_digits,
        };
        let collocation_widths = list(self.get("collocation_l").unwrap_or(""))
            .map(parse_rational)
            .collect::<Result<Vec<_>>>()
            .map_err(cfg)?;
        let reference_source = self.get("reference").unwrap_or("paper").parse().map_err(cfg)?;

        let mut config = StudyConfig::new(lambdas, forms, bases, m_values, target_digits)?
            .with_methods(methods)?
            .with_collocation_widths(collocation_widths)?
            .with_reference_source(reference_source);
        for (key, value) in &self.entries {
            let Some(lambda) = key.strip_prefix("reference.") else {
                continue;
            };
            let lambda: Coupling = lambda.parse().map_err(cfg)?;
            let mut parts = value.split_whitespace();
            let number = parts
                .next()
                .ok_or_else(|| Error::Config(format!("empty reference for lambda {lambda}")))?;
            let provenance = match parts.next() {
                Some(p) => p.parse::<Provenance>().map_err(cfg)?,
                None => Provenance::Paper,
            };
            let reference = ReferenceEnergy::new(number, provenance).map_err(cfg)?;
            config = config.with_reference(lambda, reference);
        }
        Ok(config)
    }
}
