//! Convergence studies: configuration, execution and rendering.

mod config;
mod emit;
mod reference;
mod study;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::hamiltonian::{Coupling, HamiltonianForm};
use crate::numerics::PrecisionContext;

pub use config::KeyValues;
pub use emit::{emit_figure_script, emit_table, FigureScript, TableStyle};
pub use reference::{
    paper_reference, paper_references, self_computed_reference, SELF_REFERENCE_DIGITS, SELF_REFERENCE_M,
};
pub use study::{correct_digits, run_study, thread_cpu_seconds};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Method {
    /// Optimized Rayleigh-Ritz.
    #[serde(rename = "rr")]
    RayleighRitz,
    #[serde(rename = "collocation")]
    Collocation,
}

impl Method {
    pub const ALL: [Method; 2] = [Method::RayleighRitz, Method::Collocation];

    pub fn label(self) -> &'static str {
        match self {
            Method::RayleighRitz => "rr",
            Method::Collocation => "collocation",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rr" => Ok(Method::RayleighRitz),
            "collocation" | "coll" => Ok(Method::Collocation),
            other => Err(Error::Parse(format!("unknown method {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Paper,
    SelfComputed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Paper => "paper",
            Provenance::SelfComputed => "self-computed",
        })
    }
}

impl FromStr for Provenance {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "paper" => Ok(Provenance::Paper),
            "self-computed" | "self" => Ok(Provenance::SelfComputed),
            other => Err(Error::Parse(format!("unknown provenance {other:?}"))),
        }
    }
}

/// Best known ground energy for one coupling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReferenceEnergy {
    /// Decimal string; its significant digits bound `correct_digits`.
    pub value: String,
    pub provenance: Provenance,
}

impl ReferenceEnergy {
    pub fn new(value: impl Into<String>, provenance: Provenance) -> Result<Self> {
        let value = value.into();
        let digits = significant_digits(&value);
        if digits == 0 || value.trim().parse::<f64>().is_err() {
            return Err(Error::Parse(format!("bad reference energy {value:?}")));
        }
        Ok(Self { value, provenance })
    }

    /// Count of significant digits in the decimal string.
    pub fn significant_digits(&self) -> usize {
        significant_digits(&self.value)
    }
}

fn significant_digits(s: &str) -> usize {
    let mantissa = s.trim().split(['e', 'E']).next().unwrap_or("");
    mantissa
        .bytes()
        .filter(u8::is_ascii_digit)
        .skip_while(|b| *b == b'0')
        .count()
}

/// Where references come from for couplings without an explicit entry.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ReferenceSource {
    /// Built-in published values (only the tabulated couplings).
    #[default]
    Paper,
    /// Computed on demand with the HO basis, rotated form.
    SelfComputed,
    None,
}

impl FromStr for ReferenceSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "paper" => Ok(ReferenceSource::Paper),
            "self" | "self-computed" => Ok(ReferenceSource::SelfComputed),
            "none" => Ok(ReferenceSource::None),
            other => Err(Error::Parse(format!("unknown reference source {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub lambdas: Vec<Coupling>,
    pub forms: Vec<HamiltonianForm>,
    pub bases: Vec<BasisKind>,
    pub methods: Vec<Method>,
    pub m_values: Vec<usize>,
    pub target_digits: u32,
    /// Fixed half-widths for collocation rows; empty means "use the RR `L_opt`".
    pub collocation_widths: Vec<Rational>,
    /// Explicit references; these take priority over `reference_source`.
    pub references: BTreeMap<Coupling, ReferenceEnergy>,
    pub reference_source: ReferenceSource,
}

impl StudyConfig {
    pub const DEFAULT_DIGITS: u32 = 30;

    /// Single-row-type study with no references.
    pub fn new(
        lambdas: Vec<Coupling>,
        forms: Vec<HamiltonianForm>,
        bases: Vec<BasisKind>,
        m_values: Vec<usize>,
        target_digits: u32,
    ) -> Result<Self> {
        let config = Self {
            lambdas,
            forms,
            bases,
            methods: vec![Method::RayleighRitz],
            m_values,
            target_digits,
            collocation_widths: Vec::new(),
            references: BTreeMap::new(),
            reference_source: ReferenceSource::None,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn with_methods(mut self, methods: Vec<Method>) -> Result<Self> {
        self.methods = methods;
        self.validate()?;
        Ok(self)
    }

    pub fn with_reference_source(mut self, source: ReferenceSource) -> Self {
        self.reference_source = source;
        self
    }

    pub fn with_collocation_widths(mut self, widths: Vec<Rational>) -> Result<Self> {
        self.collocation_widths = widths;
        self.validate()?;
        Ok(self)
    }

    pub fn with_reference(mut self, lambda: Coupling, reference: ReferenceEnergy) -> Self {
        self.references.insert(lambda, reference);
        self
    }

    pub fn validate(&self) -> Result<()> {
        let empty = |what: &str| Err(Error::Config(format!("{what} list is empty")));
        if self.lambdas.is_empty() {
            return empty("lambda");
        }
        if self.forms.is_empty() {
            return empty("form");
        }
        if self.bases.is_empty() {
            return empty("basis");
        }
        if self.methods.is_empty() {
            return empty("method");
        }
        if self.m_values.is_empty() {
            return empty("M");
        }
        if let Some(m) = self.m_values.iter().find(|m| **m == 0) {
            return Err(Error::Config(format!("basis size must be positive, got {m}")));
        }
        if self.collocation_widths.iter().any(|w| *w <= 0) {
            return Err(Error::Config("collocation half-widths must be positive".into()));
        }
        PrecisionContext::with_target(self.target_digits).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }

    pub fn context(&self) -> Result<PrecisionContext> {
        PrecisionContext::with_target(self.target_digits)
    }
}

/// One row of a study. Field order is the CSV/JSON column order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRecord {
    pub form: HamiltonianForm,
    pub basis: BasisKind,
    pub lambda: String,
    #[serde(rename = "M")]
    pub m: usize,
    /// `L` or `Omega` used for the row (the trace-stationary value for RR).
    pub alpha_opt: String,
    /// Empty when the row failed.
    pub energy: String,
    pub correct_digits: Option<u32>,
    pub cpu_seconds: Option<f64>,
    pub method: Method,
    /// `|energy - reference|` in scientific notation.
    pub abs_error: Option<String>,
    pub error: Option<String>,
}

impl ConvergenceRecord {
    pub fn is_ok(&self) -> bool {
        self.error.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_count() {
        assert_eq!(significant_digits("3.0191777"), 8);
        assert_eq!(significant_digits("0.00125"), 3);
        assert_eq!(significant_digits("11.2324392672"), 12);
        assert_eq!(significant_digits("2.5e3"), 2);
    }

    #[test]
    fn config_validation() {
        let ok = StudyConfig::new(
            vec![Coupling::from_integer(10)],
            vec![HamiltonianForm::Rotated],
            vec![BasisKind::HarmonicOscillator],
            vec![5],
            30,
        );
        assert!(ok.is_ok());
        let no_m = StudyConfig::new(
            vec![Coupling::from_integer(10)],
            vec![HamiltonianForm::Rotated],
            vec![BasisKind::HarmonicOscillator],
            vec![],
            30,
        );
        assert!(matches!(no_m, Err(Error::Config(_))));
        let low = StudyConfig::new(
            vec![Coupling::from_integer(10)],
            vec![HamiltonianForm::Rotated],
            vec![BasisKind::HarmonicOscillator],
            vec![5],
            8,
        );
        assert!(matches!(low, Err(Error::Config(_))));
    }

    #[test]
    fn method_and_provenance_parse() {
        assert_eq!("rr".parse::<Method>().unwrap(), Method::RayleighRitz);
        assert_eq!("COLL".parse::<Method>().unwrap(), Method::Collocation);
        assert_eq!("self-computed".parse::<Provenance>().unwrap(), Provenance::SelfComputed);
        assert!(ReferenceEnergy::new("abc", Provenance::Paper).is_err());
    }
}
