use proptest::prelude::*;
use ritz_core::basis::BasisKind;
use ritz_core::hamiltonian::{assemble, trace_form, Coupling, HamiltonianForm, HamiltonianSpec};
use ritz_core::numerics::{eigenvalues_symmetric, smallest_eigenvalue, PrecisionContext, SymmetricMatrix};
use ritz_core::optimizer::optimize_parameter;
use rug::{Float, Rational};

fn kind(trig: bool) -> BasisKind {
    if trig {
        BasisKind::Trigonometric
    } else {
        BasisKind::HarmonicOscillator
    }
}

fn form(rotated: bool) -> HamiltonianForm {
    if rotated {
        HamiltonianForm::Rotated
    } else {
        HamiltonianForm::Original
    }
}

fn within(a: &Float, b: &Float, rel: &Float) -> bool {
    let prec = a.prec().max(b.prec());
    let diff = Float::with_val(prec, a - b).abs();
    let scale = Float::with_val(prec, b.abs_ref()).max(&Float::with_val(prec, 1));
    diff <= scale * rel
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn trace_form_matches_assembled_trace(
        m in 1usize..=8,
        lambda_num in 0u32..5000,
        alpha_milli in 300u32..6000,
        trig: bool,
        rotated: bool,
    ) {
        let ctx = PrecisionContext::with_target(20).unwrap();
        let lambda = Coupling::new(Rational::from((lambda_num, 7u32))).unwrap();
        let spec = HamiltonianSpec::new(lambda, form(rotated), kind(trig), m).unwrap();
        let alpha = Float::with_val(ctx.bits(), alpha_milli) / 1000u32;
        let h = assemble(&spec, &alpha, &ctx).unwrap();
        let from_form = trace_form(&spec, &ctx).unwrap().evaluate(&alpha);
        prop_assert!(within(&from_form, &h.trace(), &ctx.target_epsilon()), "{} vs {}", from_form, h.trace());
    }

    #[test]
    fn optimum_is_stationary_and_minimal_nearby(
        m in 1usize..=8,
        lambda_num in 1u32..20000,
        trig: bool,
        rotated: bool,
    ) {
        let ctx = PrecisionContext::with_target(25).unwrap();
        let spec = HamiltonianSpec::new(Coupling::from_integer(lambda_num), form(rotated), kind(trig), m).unwrap();
        let opt = optimize_parameter(&spec, &ctx).unwrap();
        let tf = trace_form(&spec, &ctx).unwrap();
        let slope = tf.derivative(&opt.alpha_opt);
        let scale = Float::with_val(ctx.bits(), opt.trace_at_opt.abs_ref()) / &opt.alpha_opt;
        prop_assert!(Float::with_val(ctx.bits(), slope.abs_ref()) <= scale * ctx.target_epsilon());
        for f in [0.99f64, 1.01] {
            let a = Float::with_val(ctx.bits(), &opt.alpha_opt * f);
            prop_assert!(tf.evaluate(&a) > opt.trace_at_opt);
        }
    }

    #[test]
    fn ground_state_is_below_every_rayleigh_quotient(
        n in 2usize..12,
        entries in proptest::collection::vec(-10.0f64..10.0, 144),
        probe in proptest::collection::vec(-1.0f64..1.0, 12),
    ) {
        let ctx = PrecisionContext::with_target(20).unwrap();
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| entries[i.min(j) * 12 + i.max(j)]).collect())
            .collect();
        let a = SymmetricMatrix::from_rows_f64(&rows, ctx.bits()).unwrap();
        let e0 = smallest_eigenvalue(&a, &ctx).unwrap();
        let all = eigenvalues_symmetric(&a, &ctx).unwrap();
        let tol = Float::with_val(ctx.bits(), 1e-15);
        prop_assert!(within(&e0, &all[0], &tol), "{} vs {}", e0, all[0]);

        let x: Vec<Float> = probe[..n].iter().map(|v| Float::with_val(ctx.bits(), *v)).collect();
        let norm = x.iter().fold(ctx.zero(), |acc, v| acc + Float::with_val(ctx.bits(), v.square_ref()));
        prop_assume!(norm > 1e-6);
        let ax = a.matvec(&x);
        let num = x.iter().zip(&ax).fold(ctx.zero(), |acc, (u, v)| acc + Float::with_val(ctx.bits(), u * v));
        let rq = num / norm;
        prop_assert!(Float::with_val(ctx.bits(), &e0 - &tol) <= rq);

        let sum = all.iter().fold(ctx.zero(), |acc, v| acc + v);
        prop_assert!(within(&sum, &a.trace(), &tol));
    }
}
