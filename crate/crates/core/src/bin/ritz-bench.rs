//! Convergence studies for the coupled quartic oscillators.
//!
//! Exit status: 0 when every row succeeded, 2 when some rows failed, 1 on
//! configuration or I/O errors.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use ritz_core::bench::{emit_figure_script, emit_table, run_study, KeyValues, StudyConfig, TableStyle};
use ritz_core::hamiltonian::{dump_matrix, HamiltonianSpec};
use ritz_core::optimizer::optimize_parameter;
use ritz_core::Error;

/// Environment variable holding the default target digit count.
const DIGITS_ENV: &str = "RITZ_DIGITS";

#[derive(Debug, Parser)]
#[command(name = "ritz-bench", version, about = "Optimized Rayleigh-Ritz convergence studies")]
struct Cli {
    /// Flat `key = value` study file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Coupling constants, comma separated (e.g. `10,100` or `5/2`).
    #[arg(long)]
    lambda: Option<String>,
    /// original, rotated or both.
    #[arg(long)]
    form: Option<String>,
    /// trig, ho or both.
    #[arg(long)]
    basis: Option<String>,
    /// Basis sizes, comma separated.
    #[arg(long = "m-list")]
    m_list: Option<String>,
    /// Target decimal digits (default from RITZ_DIGITS, else 30).
    #[arg(long)]
    digits: Option<u32>,
    /// rr, collocation or both. Collocation rows use the trig basis only.
    #[arg(long)]
    method: Option<String>,
    /// Fixed collocation half-widths; omitted means the RR optimum.
    #[arg(long = "collocation-l")]
    collocation_l: Option<String>,
    /// Reference energies: paper, self or none.
    #[arg(long)]
    reference: Option<String>,
    /// Output style: table, csv or json.
    #[arg(long, default_value = "table")]
    out: String,
    /// Write a gnuplot script here (data CSV goes next to it).
    #[arg(long = "emit-plot")]
    emit_plot: Option<PathBuf>,
    /// Dump the RR matrix of a single-row study at its optimal parameter and exit.
    #[arg(long = "dump-matrix")]
    dump_matrix: Option<PathBuf>,
}

fn default_digits() -> Result<u32, Error> {
    match std::env::var(DIGITS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("{DIGITS_ENV}={v:?} is not a digit count"))),
        Err(_) => Ok(StudyConfig::DEFAULT_DIGITS),
    }
}

fn study_config(cli: &Cli) -> Result<StudyConfig, Error> {
    let mut kv = match &cli.config {
        Some(path) => KeyValues::parse(&fs::read_to_string(path)?)?,
        None => KeyValues::default(),
    };
    let flags = [
        ("lambda", &cli.lambda),
        ("form", &cli.form),
        ("basis", &cli.basis),
        ("m", &cli.m_list),
        ("method", &cli.method),
        ("collocation_l", &cli.collocation_l),
        ("reference", &cli.reference),
    ];
    for (key, value) in flags {
        if let Some(v) = value {
            kv.set(key, v.clone());
        }
    }
    if let Some(d) = cli.digits {
        kv.set("digits", d.to_string());
    }
    kv.to_study_config(default_digits()?)
}

fn dump(config: &StudyConfig, path: &Path) -> Result<(), Error> {
    let single = |n: usize, what: &str| {
        if n == 1 {
            Ok(())
        } else {
            Err(Error::Config(format!("--dump-matrix needs exactly one {what}")))
        }
    };
    single(config.lambdas.len(), "lambda")?;
    single(config.forms.len(), "form")?;
    single(config.bases.len(), "basis")?;
    single(config.m_values.len(), "basis size")?;
    let ctx = config.context()?;
    let spec = HamiltonianSpec::new(
        config.lambdas[0].clone(),
        config.forms[0],
        config.bases[0],
        config.m_values[0],
    )?;
    let alpha = optimize_parameter(&spec, &ctx)?.alpha_opt;
    let mut out = BufWriter::new(fs::File::create(path)?);
    dump_matrix(&spec, &alpha, &ctx, &mut out)?;
    out.flush()?;
    Ok(())
}

fn run(cli: &Cli) -> Result<bool, Error> {
    let style: TableStyle = cli.out.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
    let config = study_config(cli)?;
    if let Some(path) = &cli.dump_matrix {
        dump(&config, path)?;
        return Ok(true);
    }

    let records = run_study(&config)?;
    let text = emit_table(&records, style)?;
    io::stdout().lock().write_all(text.as_bytes())?;

    if let Some(path) = &cli.emit_plot {
        let figure = emit_figure_script(&records)?;
        for w in &figure.warnings {
            eprintln!("{w}");
        }
        fs::write(path, &figure.script)?;
        fs::write(path.with_extension("csv"), &figure.data_csv)?;
    }

    let failed: Vec<_> = records.iter().filter(|r| !r.is_ok()).collect();
    for r in &failed {
        eprintln!(
            "row failed: {} {} {} lambda={} M={}: {}",
            r.method,
            r.form,
            r.basis,
            r.lambda,
            r.m,
            r.error.as_deref().unwrap_or("")
        );
    }
    Ok(failed.is_empty())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors are configuration errors; keep 2 for failed rows
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("ritz-bench: {e}");
            ExitCode::from(1)
        }
    }
}
