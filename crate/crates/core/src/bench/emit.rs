use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianForm;
use crate::numerics::{format_decimal, PrecisionContext};

use super::{ConvergenceRecord, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableStyle {
    /// Human-readable blocks, agreeing digits in brackets.
    PaperTable,
    Csv,
    Json,
}

impl FromStr for TableStyle {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "table" | "paper-table" => Ok(TableStyle::PaperTable),
            "csv" => Ok(TableStyle::Csv),
            "json" => Ok(TableStyle::Json),
            other => Err(Error::Parse(format!("unknown output style {other:?}"))),
        }
    }
}

pub fn emit_table(records: &[ConvergenceRecord], style: TableStyle) -> Result<String> {
    if records.is_empty() {
        return Err(Error::EmptyStudy);
    }
    match style {
        TableStyle::PaperTable => Ok(paper_table(records)),
        TableStyle::Csv => csv_table(records),
        TableStyle::Json => {
            let mut s = serde_json::to_string_pretty(records).map_err(|e| Error::Parse(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
    }
}

fn csv_table(records: &[ConvergenceRecord]) -> Result<String> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

/// Wraps the first `marked` significant digits of a decimal string in brackets.
fn mark_digits(value: &str, marked: usize) -> String {
    if marked == 0 {
        return value.to_string();
    }
    let mut out = String::with_capacity(value.len() + 2);
    let mut seen = 0;
    let mut started = false;
    let mut closed = false;
    for c in value.chars() {
        if !closed && !started && c.is_ascii_digit() && c != '0' {
            started = true;
            out.push('[');
        }
        out.push(c);
        if started && !closed && c.is_ascii_digit() {
            seen += 1;
            if seen == marked {
                out.push(']');
                closed = true;
            }
        }
    }
    if started && !closed {
        out.push(']');
    }
    out
}

fn short_alpha(alpha: &str) -> String {
    PrecisionContext::with_target(PrecisionContext::MIN_TARGET_DIGITS)
        .and_then(|ctx| ctx.parse(alpha))
        .map(|a| format_decimal(&a, 4))
        .unwrap_or_else(|_| alpha.to_string())
}

fn paper_table(records: &[ConvergenceRecord]) -> String {
    let mut out = String::new();
    let mut ordered: Vec<&ConvergenceRecord> = records.iter().collect();
    ordered.sort_by_key(|r| (r.method, r.form, r.basis));
    let mut current: Option<(Method, HamiltonianForm, BasisKind)> = None;
    for r in ordered {
        let key = (r.method, r.form, r.basis);
        if current != Some(key) {
            if current.is_some() {
                out.push('\n');
            }
            let _ = writeln!(out, "# {} {} {}", r.method, r.form, r.basis);
            let _ = writeln!(
                out,
                "{:>4}  {:>8}  {:>8}  energy",
                "M",
                "lambda",
                match r.method {
                    Method::RayleighRitz => format!("{}_opt", r.basis.parameter_name()),
                    Method::Collocation => r.basis.parameter_name().to_string(),
                }
            );
            current = Some(key);
        }
        match &r.error {
            Some(e) => {
                let _ = writeln!(out, "{:>4}  {:>8}  {:>8}  error: {e}", r.m, r.lambda, "-");
            }
            None => {
                let _ = writeln!(
                    out,
                    "{:>4}  {:>8}  {:>8}  {}",
                    r.m,
                    r.lambda,
                    short_alpha(&r.alpha_opt),
                    mark_digits(&r.energy, r.correct_digits.unwrap_or(0) as usize)
                );
            }
        }
    }
    out
}

/// A plot script with its backing data.
#[derive(Clone, Debug, PartialEq)]
pub struct FigureScript {
    /// Self-contained gnuplot script (data inlined).
    pub script: String,
    /// `series,label,M,cpu_seconds,abs_error` rows.
    pub data_csv: String,
    pub warnings: Vec<String>,
}

fn series_label(r: &ConvergenceRecord, with_lambda: bool) -> String {
    let method = match (r.method, r.basis) {
        (Method::Collocation, _) => "COLL",
        (Method::RayleighRitz, BasisKind::Trigonometric) => "TRIG",
        (Method::RayleighRitz, BasisKind::HarmonicOscillator) => "HO",
    };
    let form = match r.form {
        HamiltonianForm::Original => 1,
        HamiltonianForm::Rotated => 2,
    };
    if with_lambda {
        format!("{method} ({form}) lambda={}", r.lambda)
    } else {
        format!("{method} ({form})")
    }
}

/// Log-log plot of `|E - E_ref|` against CPU time, one series per
/// `(method, basis, form, lambda)`.
pub fn emit_figure_script(records: &[ConvergenceRecord]) -> Result<FigureScript> {
    if records.is_empty() {
        return Err(Error::EmptyStudy);
    }
    if let Some(i) = records.iter().position(|r| r.cpu_seconds.is_none()) {
        return Err(Error::MissingCpuTime(i));
    }
    let lambdas: BTreeSet<&str> = records.iter().map(|r| r.lambda.as_str()).collect();
    let with_lambda = lambdas.len() > 1;

    let mut labels: Vec<String> = Vec::new();
    let mut points: Vec<Vec<(usize, f64, String)>> = Vec::new();
    let mut skipped: Vec<usize> = Vec::new();
    let mut warnings = Vec::new();
    for r in records {
        let label = series_label(r, with_lambda);
        let idx = match labels.iter().position(|l| *l == label) {
            Some(i) => i,
            None => {
                labels.push(label.clone());
                points.push(Vec::new());
                skipped.push(0);
                labels.len() - 1
            }
        };
        let usable = r.error.is_none()
            && r.abs_error
                .as_deref()
                .and_then(|e| e.parse::<f64>().ok())
                .is_some_and(|e| e > 0.0);
        if usable {
            let cpu = r.cpu_seconds.unwrap_or_default();
            points[idx].push((r.m, cpu, r.abs_error.clone().unwrap_or_default()));
        } else {
            skipped[idx] += 1;
        }
    }

    let mut script = String::new();
    script.push_str("# precision vs CPU time; run with: gnuplot <this file>\n");
    script.push_str("set terminal pngcairo size 900,600\n");
    script.push_str("set output 'precision_vs_cpu.png'\n");
    script.push_str("set logscale xy\n");
    script.push_str("set format y '10^{%L}'\n");
    script.push_str("set xlabel 'CPU time [s]'\n");
    script.push_str("set ylabel '|E - E_{ref}|'\n");
    script.push_str("set key outside right\n");
    let mut data_csv = String::from("series,label,M,cpu_seconds,abs_error\n");
    let mut plots = Vec::new();
    for (i, label) in labels.iter().enumerate() {
        if skipped[i] > 0 {
            warnings.push(if points[i].is_empty() {
                format!("warning: omitting series {label}: no reference error available")
            } else {
                format!("warning: series {label}: {} point(s) without a usable reference error dropped", skipped[i])
            });
        }
        if points[i].is_empty() {
            continue;
        }
        let _ = writeln!(script, "$s{i} << EOD");
        for (m, cpu, err) in &points[i] {
            let _ = writeln!(script, "{cpu:e} {err}");
            let _ = writeln!(data_csv, "{i},{label},{m},{cpu:e},{err}");
        }
        script.push_str("EOD\n");
        plots.push(format!("$s{i} using 1:2 with linespoints title '{label}'"));
    }
    if plots.is_empty() {
        script.push_str("# no series with reference errors\n");
    } else {
        let _ = writeln!(script, "plot {}", plots.join(", \\\n     "));
    }
    Ok(FigureScript {
        script,
        data_csv,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(m: usize, energy: &str, digits: Option<u32>) -> ConvergenceRecord {
        ConvergenceRecord {
            form: HamiltonianForm::Original,
            basis: BasisKind::Trigonometric,
            lambda: "10".into(),
            m,
            alpha_opt: "2.6269512345".into(),
            energy: energy.into(),
            correct_digits: digits,
            cpu_seconds: Some(0.25),
            method: Method::RayleighRitz,
            abs_error: digits.map(|_| "5.26932e-4".into()),
            error: None,
        }
    }

    #[test]
    fn marks_leading_digits() {
        assert_eq!(mark_digits("3.01970464", 4), "[3.019]70464");
        assert_eq!(mark_digits("11.2324", 3), "[11.2]324");
        assert_eq!(mark_digits("0.00125", 2), "0.00[12]5");
        assert_eq!(mark_digits("2.5", 9), "[2.5]");
        assert_eq!(mark_digits("2.5", 0), "2.5");
    }

    #[test]
    fn paper_table_row() {
        let t = emit_table(&[record(10, "3.01970463969852571597", Some(4))], TableStyle::PaperTable).unwrap();
        let row = t.lines().nth(2).unwrap();
        assert_eq!(row.split_whitespace().collect::<Vec<_>>(), ["10", "10", "2.627", "[3.019]70463969852571597"]);
    }

    #[test]
    fn csv_round_trip() {
        let rows = vec![record(10, "3.0197", Some(4)), record(15, "3.0192", None)];
        let text = emit_table(&rows, TableStyle::Csv).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(!text.contains('\r'));
        assert!(text.starts_with("form,basis,lambda,M,alpha_opt,energy,correct_digits,cpu_seconds,method"));
        let back: Vec<ConvergenceRecord> = csv::Reader::from_reader(text.as_bytes())
            .deserialize()
            .collect::<std::result::Result<_, _>>()
            .unwrap();
        assert_eq!(back, rows);
    }

    #[test]
    fn json_round_trip_and_empty() {
        let rows = vec![record(10, "3.0197", Some(4))];
        let text = emit_table(&rows, TableStyle::Json).unwrap();
        let back: Vec<ConvergenceRecord> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, rows);
        let err = emit_table(&[], TableStyle::Json).unwrap_err();
        assert_eq!(err.to_string(), "empty study");
    }

    #[test]
    fn figure_series_and_errors() {
        let one = emit_figure_script(&[record(10, "3.0197", Some(4))]).unwrap();
        assert_eq!(one.script.matches(" title '").count(), 1);
        assert_eq!(one.data_csv.lines().count(), 2);
        assert!(one.warnings.is_empty());

        let mut rows = Vec::new();
        for method in Method::ALL {
            for basis in BasisKind::ALL {
                for form in HamiltonianForm::ALL {
                    if method == Method::Collocation && basis == BasisKind::HarmonicOscillator {
                        continue;
                    }
                    let mut r = record(10, "3.0197", Some(4));
                    (r.method, r.basis, r.form) = (method, basis, form);
                    rows.push(r);
                }
            }
        }
        let six = emit_figure_script(&rows).unwrap();
        assert_eq!(six.script.matches(" title '").count(), 6);

        let no_ref = emit_figure_script(&[record(10, "3.0197", None)]).unwrap();
        assert_eq!(no_ref.warnings.len(), 1);
        assert!(!no_ref.script.contains("\nplot "));

        let mut untimed = record(10, "3.0197", Some(4));
        untimed.cpu_seconds = None;
        assert!(matches!(emit_figure_script(&[untimed]), Err(Error::MissingCpuTime(0))));
    }
}
