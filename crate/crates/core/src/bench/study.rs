use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Float, Rational};

use crate::basis::BasisKind;
use crate::collocation::collocation_ground_energy;
use crate::error::Result;
use crate::hamiltonian::{assemble, Coupling, HamiltonianForm, HamiltonianSpec};
use crate::numerics::{agreeing_digits, format_decimal, format_scientific, smallest_eigenvalue, PrecisionContext};
use crate::optimizer::optimize_parameter;

use super::reference::{paper_reference, self_computed_reference};
use super::{ConvergenceRecord, Method, ReferenceEnergy, ReferenceSource, StudyConfig};

/// CPU time consumed by the calling thread, in seconds.
pub fn thread_cpu_seconds() -> f64 {
    let mut ts = libc::timespec { tv_sec: 0, tv_nsec: 0 };
    // SAFETY: `ts` is a valid out-pointer and the clock id is a constant.
    let rc = unsafe { libc::clock_gettime(libc::CLOCK_THREAD_CPUTIME_ID, &mut ts) };
    if rc != 0 {
        return 0.0;
    }
    ts.tv_sec as f64 + ts.tv_nsec as f64 * 1e-9
}

/// Leading significant digits shared with the reference, compared at the
/// shorter of the two precisions.
pub fn correct_digits(energy: &Float, reference: &ReferenceEnergy, target_digits: u32) -> Result<u32> {
    let sig = reference.significant_digits().min(target_digits as usize);
    let ctx = PrecisionContext::with_target(target_digits.max(reference.significant_digits() as u32))?;
    let r = ctx.parse(&reference.value)?;
    Ok(agreeing_digits(energy, &r, sig) as u32)
}

#[derive(Clone, Debug)]
struct Job {
    method: Method,
    form: HamiltonianForm,
    basis: BasisKind,
    lambda: Coupling,
    m: usize,
    width: Option<Rational>,
}

fn sorted_unique<T: Ord + Clone>(items: &[T]) -> Vec<T> {
    let mut v = items.to_vec();
    v.sort();
    v.dedup();
    v
}

fn jobs(config: &StudyConfig) -> Vec<Job> {
    let widths: Vec<Option<Rational>> = if config.collocation_widths.is_empty() {
        vec![None]
    } else {
        sorted_unique(&config.collocation_widths).into_iter().map(Some).collect()
    };
    let mut out = Vec::new();
    for form in sorted_unique(&config.forms) {
        for basis in sorted_unique(&config.bases) {
            for lambda in sorted_unique(&config.lambdas) {
                for m in sorted_unique(&config.m_values) {
                    for method in sorted_unique(&config.methods) {
                        match method {
                            Method::RayleighRitz => out.push(Job {
                                method,
                                form,
                                basis,
                                lambda: lambda.clone(),
                                m,
                                width: None,
                            }),
                            // collocation is only defined for the cosine grid
                            Method::Collocation if basis == BasisKind::Trigonometric => {
                                for width in &widths {
                                    out.push(Job {
                                        method,
                                        form,
                                        basis,
                                        lambda: lambda.clone(),
                                        m,
                                        width: width.clone(),
                                    });
                                }
                            }
                            Method::Collocation => {}
                        }
                    }
                }
            }
        }
    }
    out
}

fn resolve_references(config: &StudyConfig) -> Result<BTreeMap<Coupling, ReferenceEnergy>> {
    let missing: Vec<Coupling> = sorted_unique(&config.lambdas)
        .into_iter()
        .filter(|l| !config.references.contains_key(l))
        .collect();
    let found: Vec<(Coupling, ReferenceEnergy)> = match config.reference_source {
        ReferenceSource::None => Vec::new(),
        ReferenceSource::Paper => missing
            .into_iter()
            .filter_map(|l| paper_reference(&l).map(|r| (l, r)))
            .collect(),
        ReferenceSource::SelfComputed => missing
            .into_par_iter()
            .map(|l| self_computed_reference(&l).map(|r| (l, r)))
            .collect::<Result<_>>()?,
    };
    let mut all = config.references.clone();
    all.extend(found);
    Ok(all)
}

fn solve(job: &Job, ctx: &PrecisionContext) -> Result<(Float, Float)> {
    let spec = HamiltonianSpec::new(job.lambda.clone(), job.form, job.basis, job.m)?;
    match job.method {
        Method::RayleighRitz => {
            let opt = optimize_parameter(&spec, ctx)?;
            let h = assemble(&spec, &opt.alpha_opt, ctx)?;
            let e = smallest_eigenvalue(&h, ctx)?;
            Ok((opt.alpha_opt, e))
        }
        Method::Collocation => {
            let width = match &job.width {
                Some(w) => Float::with_val(ctx.bits(), w),
                None => optimize_parameter(&spec, ctx)?.alpha_opt,
            };
            let e = collocation_ground_energy(&spec, &width, ctx)?;
            Ok((width, e))
        }
    }
}

fn run_job(job: &Job, ctx: &PrecisionContext, reference: Option<&ReferenceEnergy>) -> ConvergenceRecord {
    let digits = ctx.target_digits() as usize;
    let start = thread_cpu_seconds();
    let outcome = solve(job, ctx);
    let cpu = (thread_cpu_seconds() - start).max(0.0);

    let mut record = ConvergenceRecord {
        method: job.method,
        form: job.form,
        basis: job.basis,
        lambda: job.lambda.to_string(),
        m: job.m,
        alpha_opt: String::new(),
        energy: String::new(),
        correct_digits: None,
        cpu_seconds: Some(cpu),
        abs_error: None,
        error: None,
    };
    match outcome {
        Ok((alpha, energy)) => {
            record.alpha_opt = format_decimal(&alpha, digits);
            record.energy = format_decimal(&energy, digits);
            if let Some(r) = reference {
                match correct_digits(&energy, r, ctx.target_digits())
                    .and_then(|d| ctx.parse(&r.value).map(|v| (d, v)))
                {
                    Ok((d, value)) => {
                        record.correct_digits = Some(d);
                        let diff = Float::with_val(ctx.bits(), &energy - &value).abs();
                        record.abs_error = Some(format_scientific(&diff, 6));
                    }
                    Err(e) => record.error = Some(e.to_string()),
                }
            }
        }
        Err(e) => record.error = Some(e.to_string()),
    }
    record
}

/// Runs every `(form, basis, lambda, M, method)` row of the study in
/// parallel. Rows come back sorted in that order; per-row failures are
/// reported in the record and do not abort the study.
pub fn run_study(config: &StudyConfig) -> Result<Vec<ConvergenceRecord>> {
    config.validate()?;
    let ctx = config.context()?;
    let references = resolve_references(config)?;
    let jobs = jobs(config);
    Ok(jobs
        .par_iter()
        .map(|job| run_job(job, &ctx, references.get(&job.lambda)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Provenance;

    #[test]
    fn uncoupled_row_is_exact() {
        let config = StudyConfig::new(
            vec![Coupling::from_integer(0)],
            vec![HamiltonianForm::Original],
            vec![BasisKind::HarmonicOscillator],
            vec![1],
            20,
        )
        .unwrap()
        .with_reference(
            Coupling::from_integer(0),
            ReferenceEnergy::new("2", Provenance::Paper).unwrap(),
        );
        let rows = run_study(&config).unwrap();
        assert_eq!(rows.len(), 1);
        let r = &rows[0];
        assert_eq!(r.energy, format!("2.{}", "0".repeat(19)));
        assert_eq!(r.alpha_opt, format!("1.{}", "0".repeat(19)));
        assert_eq!(r.correct_digits, Some(1));
        assert_eq!(r.abs_error.as_deref(), Some("0.00000e0"));
    }

    #[test]
    fn rows_sorted_and_collocation_limited_to_trig() {
        let config = StudyConfig::new(
            vec![Coupling::from_integer(10), Coupling::from_integer(5)],
            HamiltonianForm::ALL.to_vec(),
            BasisKind::ALL.to_vec(),
            vec![3, 2],
            16,
        )
        .unwrap()
        .with_methods(Method::ALL.to_vec())
        .unwrap();
        let rows = run_study(&config).unwrap();
        // rr: 2 forms x 2 bases x 2 lambdas x 2 M; collocation: trig only
        assert_eq!(rows.len(), 16 + 8);
        assert!(rows.iter().all(ConvergenceRecord::is_ok));
        assert!(rows
            .iter()
            .all(|r| r.method == Method::RayleighRitz || r.basis == BasisKind::Trigonometric));
        let keys: Vec<_> = rows.iter().map(|r| (r.form, r.basis, r.lambda.clone(), r.m)).collect();
        assert_eq!(keys[0], (HamiltonianForm::Original, BasisKind::Trigonometric, "5".into(), 2));
        assert!(rows.iter().all(|r| r.correct_digits.is_none()));
    }

    #[test]
    fn leading_digit_agreement() {
        let ctx = PrecisionContext::with_target(20).unwrap();
        let r = ReferenceEnergy::new("3.0191777147719673869", Provenance::Paper).unwrap();
        let e = ctx.parse("3.0197046396985257").unwrap();
        assert_eq!(correct_digits(&e, &r, 20).unwrap(), 4);
        let e = ctx.parse("3.0191777225035778950").unwrap();
        assert_eq!(correct_digits(&e, &r, 20).unwrap(), 8);
    }
}
