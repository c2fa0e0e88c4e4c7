use rug::ops::Pow;
use rug::Float;

use super::PrecisionContext;
use crate::error::{Error, Result};

const SCAN_POINTS: usize = 240;
const SCAN_LOW: f64 = 1e-3;
const SCAN_HIGH: f64 = 1e3;

/// `f(a) = sum_k c_k a^k` over a few signed integer exponents.
#[derive(Clone, Debug, PartialEq)]
pub struct SignedPowerForm {
    terms: Vec<(i32, Float)>,
}

impl SignedPowerForm {
    /// Terms with equal exponents are merged; order is by exponent.
    pub fn new(terms: impl IntoIterator<Item = (i32, Float)>) -> Self {
        let mut merged: Vec<(i32, Float)> = Vec::new();
        for (k, c) in terms {
            match merged.iter_mut().find(|(e, _)| *e == k) {
                Some((_, acc)) => *acc += c,
                None => merged.push((k, c)),
            }
        }
        merged.sort_by_key(|(k, _)| *k);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[(i32, Float)] {
        &self.terms
    }

    pub fn coefficient(&self, exponent: i32) -> Option<&Float> {
        self.terms.iter().find(|(k, _)| *k == exponent).map(|(_, c)| c)
    }

    fn prec(&self) -> u32 {
        self.terms.iter().map(|(_, c)| c.prec()).max().unwrap_or(64)
    }

    pub fn evaluate(&self, alpha: &Float) -> Float {
        let prec = self.prec().max(alpha.prec());
        let mut sum = Float::new(prec);
        for (k, c) in &self.terms {
            sum += Float::with_val(prec, alpha.pow(*k)) * c;
        }
        sum
    }

    /// `df/da` at `alpha`.
    pub fn derivative(&self, alpha: &Float) -> Float {
        let prec = self.prec().max(alpha.prec());
        let mut sum = Float::new(prec);
        for (k, c) in &self.terms {
            if *k != 0 {
                sum += Float::with_val(prec, alpha.pow(*k - 1)) * c * *k;
            }
        }
        sum
    }
}

/// Derivative with denominators cleared: `a^shift * f'(a)` as a polynomial
/// with non-negative exponents. Same sign as `f'` for `a > 0`.
struct ClearedDerivative {
    terms: Vec<(i32, Float)>,
}

impl ClearedDerivative {
    fn new(form: &SignedPowerForm, prec: u32) -> Self {
        let raw: Vec<(i32, Float)> = form
            .terms
            .iter()
            .filter(|(k, c)| *k != 0 && !c.is_zero())
            .map(|(k, c)| (*k - 1, Float::with_val(prec, c * *k)))
            .collect();
        let low = raw.iter().map(|(e, _)| *e).min().unwrap_or(0);
        let terms = raw.into_iter().map(|(e, c)| (e - low, c)).collect();
        Self { terms }
    }

    fn value(&self, a: &Float) -> Float {
        let mut s = Float::new(a.prec());
        for (e, c) in &self.terms {
            s += Float::with_val(a.prec(), a.pow(*e)) * c;
        }
        s
    }

    fn slope(&self, a: &Float) -> Float {
        let mut s = Float::new(a.prec());
        for (e, c) in &self.terms {
            if *e > 0 {
                s += Float::with_val(a.prec(), a.pow(*e - 1)) * c * *e;
            }
        }
        s
    }
}

/// All positive stationary points of `form`, ascending.
///
/// The cleared derivative is scanned on a geometric grid over `[1e-3, 1e3]`;
/// each sign change is narrowed by bisection and polished by Newton steps to
/// working precision.
pub fn stationary_points_signed_power_form(
    form: &SignedPowerForm,
    ctx: &PrecisionContext,
) -> Result<Vec<Float>> {
    let prec = ctx.bits();
    if form.terms.iter().all(|(_, c)| c.is_zero()) {
        return Err(Error::DegenerateForm);
    }
    let poly = ClearedDerivative::new(form, prec);
    if poly.terms.is_empty() {
        return Err(Error::DegenerateForm);
    }

    let ratio = (SCAN_HIGH / SCAN_LOW).powf(1.0 / (SCAN_POINTS - 1) as f64);
    let grid: Vec<Float> = (0..SCAN_POINTS)
        .map(|i| Float::with_val(prec, SCAN_LOW) * Float::with_val(prec, ratio).pow(i as u32))
        .collect();
    let values: Vec<Float> = grid.iter().map(|a| poly.value(a)).collect();

    let mut roots = Vec::new();
    for i in 0..SCAN_POINTS {
        if values[i].is_zero() {
            roots.push(grid[i].clone());
            continue;
        }
        if i + 1 < SCAN_POINTS
            && !values[i + 1].is_zero()
            && values[i].is_sign_negative() != values[i + 1].is_sign_negative()
        {
            roots.push(polish(&poly, grid[i].clone(), grid[i + 1].clone(), ctx));
        }
    }
    if roots.is_empty() {
        return Err(Error::NoStationaryPoint);
    }
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    Ok(roots)
}

fn polish(poly: &ClearedDerivative, mut lo: Float, mut hi: Float, ctx: &PrecisionContext) -> Float {
    let prec = ctx.bits();
    let eps = ctx.working_epsilon();
    let lo_negative = poly.value(&lo).is_sign_negative();
    for _ in 0..48 {
        let mid = Float::with_val(prec, &lo + &hi) / 2u32;
        if poly.value(&mid).is_sign_negative() == lo_negative {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = Float::with_val(prec, &lo + &hi) / 2u32;
    for _ in 0..200 {
        let f = poly.value(&x);
        let df = poly.slope(&x);
        if f.is_zero() || df.is_zero() {
            break;
        }
        let step = Float::with_val(prec, &f / &df);
        let next = Float::with_val(prec, &x - &step);
        if next < lo || next > hi {
            // keep the bracket; fall back to bisection
            let mid = Float::with_val(prec, &lo + &hi) / 2u32;
            if poly.value(&mid).is_sign_negative() == lo_negative {
                lo = mid.clone();
            } else {
                hi = mid.clone();
            }
            x = mid;
            continue;
        }
        let small = Float::with_val(prec, step.abs_ref()) <= Float::with_val(prec, &eps * &x);
        x = next;
        if small {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::with_target(30).unwrap()
    }

    #[test]
    fn symmetric_forms_stationary_at_one() {
        let c = ctx();
        let ho = SignedPowerForm::new([(1, c.float(1)), (-1, c.float(1)), (-2, c.float(0))]);
        let trig = SignedPowerForm::new([(-2, c.float(1)), (2, c.float(1))]);
        for form in [ho, trig] {
            let roots = stationary_points_signed_power_form(&form, &c).unwrap();
            assert_eq!(roots.len(), 1);
            let err = Float::with_val(c.bits(), &roots[0] - 1u32).abs();
            assert!(err < c.target_epsilon());
        }
    }

    #[test]
    fn known_root() {
        // f = a^2 + 8/a  ->  f' = 2a - 8/a^2 = 0  at a = 4^(1/3)
        let c = ctx();
        let form = SignedPowerForm::new([(2, c.float(1)), (-1, c.float(8))]);
        let roots = stationary_points_signed_power_form(&form, &c).unwrap();
        let exact = c.float(4).cbrt();
        let err = Float::with_val(c.bits(), &roots[0] - &exact).abs();
        assert!(err < c.working_epsilon() * 100u32);
    }

    #[test]
    fn errors() {
        let c = ctx();
        let zero = SignedPowerForm::new([(1, c.float(0)), (-1, c.float(0))]);
        assert!(matches!(
            stationary_points_signed_power_form(&zero, &c),
            Err(Error::DegenerateForm)
        ));
        let monotone = SignedPowerForm::new([(1, c.float(1)), (2, c.float(3))]);
        assert!(matches!(
            stationary_points_signed_power_form(&monotone, &c),
            Err(Error::NoStationaryPoint)
        ));
    }

    #[test]
    fn two_stationary_points() {
        // f = a^3/3 - 5 a^2/2 + 4 a, f' = (a - 1)(a - 4)
        let c = ctx();
        let form = SignedPowerForm::new([
            (3, c.float(1) / 3u32),
            (2, c.float(-2.5)),
            (1, c.float(4)),
        ]);
        let roots = stationary_points_signed_power_form(&form, &c).unwrap();
        let r: Vec<f64> = roots.iter().map(Float::to_f64).collect();
        assert_eq!(r.len(), 2);
        assert!((r[0] - 1.0).abs() < 1e-25 && (r[1] - 4.0).abs() < 1e-25);
    }
}
