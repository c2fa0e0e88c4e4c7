//! Arbitrary-precision scalars, symmetric eigensolvers and the stationary-point
//! finder for signed power forms.
//!
//! All high-precision values are [`rug::Float`]s. A [`PrecisionContext`] fixes
//! how many bits every constructed value carries.

mod general;
mod ground;
mod jacobi;
mod matrix;
mod roots;

pub use general::{smallest_real_eigenvalue, DenseMatrix};
pub use ground::smallest_eigenvalue;
pub use jacobi::{eigenvalues_symmetric, eigenvalues_symmetric_with_cap};
pub use matrix::SymmetricMatrix;
pub use roots::{stationary_points_signed_power_form, SignedPowerForm};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float, Integer, Rational};

use crate::error::{Error, Result};

/// High-precision real scalar.
pub type HpScalar = Float;

/// Working-precision configuration shared by every numeric routine.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    target_digits: u32,
    guard_digits: u32,
}

impl PrecisionContext {
    pub const MIN_TARGET_DIGITS: u32 = 16;
    pub const MIN_GUARD_DIGITS: u32 = 10;
    pub const DEFAULT_GUARD_DIGITS: u32 = 15;
    pub const MAX_DIGITS: u32 = 100_000;

    pub fn new(target_digits: u32, guard_digits: u32) -> Result<Self> {
        if target_digits < Self::MIN_TARGET_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "target_digits {target_digits} below minimum {}",
                Self::MIN_TARGET_DIGITS
            )));
        }
        if guard_digits < Self::MIN_GUARD_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "guard_digits {guard_digits} below minimum {}",
                Self::MIN_GUARD_DIGITS
            )));
        }
        if target_digits + guard_digits > Self::MAX_DIGITS {
            return Err(Error::InvalidPrecision(format!(
                "working precision {} exceeds {}",
                target_digits + guard_digits,
                Self::MAX_DIGITS
            )));
        }
        Ok(Self {
            target_digits,
            guard_digits,
        })
    }

    /// Context with the default number of guard digits.
    pub fn with_target(target_digits: u32) -> Result<Self> {
        Self::new(target_digits, Self::DEFAULT_GUARD_DIGITS)
    }

    pub fn target_digits(&self) -> u32 {
        self.target_digits
    }

    pub fn guard_digits(&self) -> u32 {
        self.guard_digits
    }

    pub fn working_digits(&self) -> u32 {
        self.target_digits + self.guard_digits
    }

    /// Mantissa bits needed to hold `working_digits` decimal digits, plus a few spare.
    pub fn bits(&self) -> u32 {
        digits_to_bits(self.working_digits())
    }

    pub fn zero(&self) -> Float {
        Float::new(self.bits())
    }

    pub fn float<T>(&self, value: T) -> Float
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits(), value)
    }

    pub fn pi(&self) -> Float {
        Float::with_val(self.bits(), Constant::Pi)
    }

    /// `10^(-exponent)` at working precision.
    pub fn ten_pow_neg(&self, exponent: u32) -> Float {
        let ten = Float::with_val(self.bits(), 10);
        ten.pow(-(exponent as i32))
    }

    /// Relative tolerance of the working precision.
    pub fn working_epsilon(&self) -> Float {
        self.ten_pow_neg(self.working_digits())
    }

    /// Relative tolerance of the requested accuracy.
    pub fn target_epsilon(&self) -> Float {
        self.ten_pow_neg(self.target_digits)
    }

    pub fn parse(&self, text: &str) -> Result<Float> {
        let parsed = Float::parse(text.trim())
            .map_err(|e| Error::Parse(format!("{text:?}: {e}")))?;
        Ok(Float::with_val(self.bits(), parsed))
    }
}

/// Exact value of a decimal (`"2.5"`) or fraction (`"7/2"`) literal.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let s = text.trim();
    let bad = || Error::Parse(format!("bad number {s:?}"));
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let numer: Integer = format!("{whole}{frac}").parse().map_err(|_| bad())?;
        Ok(Rational::from((numer, Integer::from(10).pow(frac.len() as u32))))
    } else {
        s.parse::<Rational>().map_err(|_| bad())
    }
}

pub(crate) fn digits_to_bits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 8
}

/// Formats `x` with `significant` decimal digits, positional when the exponent
/// is moderate and scientific otherwise.
pub fn format_decimal(x: &Float, significant: usize) -> String {
    let significant = significant.max(1);
    if x.is_zero() {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let (negative, digits, exp) = x.to_sign_string_exp(10, Some(significant));
    // value = 0.digits * 10^exp
    let exp = exp.unwrap_or(0);
    let mut out = String::with_capacity(significant + 8);
    if negative {
        out.push('-');
    }
    let len = digits.len() as i32;
    if (-6..=0).contains(&exp) {
        out.push_str("0.");
        out.extend(std::iter::repeat_n('0', (-exp) as usize));
        out.push_str(&digits);
    } else if exp > 0 && exp < len {
        out.push_str(&digits[..exp as usize]);
        out.push('.');
        out.push_str(&digits[exp as usize..]);
    } else if exp > 0 && exp <= 21 {
        out.push_str(&digits);
        out.extend(std::iter::repeat_n('0', (exp - len) as usize));
    } else {
        out.push_str(&format_scientific_digits(&digits, exp - 1));
    }
    out
}

/// Scientific notation `d.ddd…e±x` with `significant` digits.
pub fn format_scientific(x: &Float, significant: usize) -> String {
    if x.is_zero() {
        return format!("{}e0", "0.".to_string() + &"0".repeat(significant.max(2) - 1));
    }
    let (negative, digits, exp) = x.to_sign_string_exp(10, Some(significant.max(1)));
    let body = format_scientific_digits(&digits, exp.unwrap_or(0) - 1);
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

fn format_scientific_digits(digits: &str, exponent: i32) -> String {
    let (head, tail) = digits.split_at(1);
    if tail.is_empty() {
        format!("{head}e{exponent}")
    } else {
        format!("{head}.{tail}e{exponent}")
    }
}

/// `floor(-log10(|value - reference| / |reference|))`, clamped at zero; `None`
/// when the two agree exactly.
pub fn relative_error_digits(value: &Float, reference: &Float) -> Option<u32> {
    let prec = value.prec().max(reference.prec());
    let diff = Float::with_val(prec, value - reference).abs();
    if diff.is_zero() {
        return None;
    }
    let rel = if reference.is_zero() {
        diff
    } else {
        diff / Float::with_val(prec, reference.abs_ref())
    };
    let digits = -rel.log10().to_f64();
    Some(digits.floor().max(0.0) as u32)
}

/// Number of leading significant decimal digits that `value` and `reference`
/// share when both are written with `significant` digits.
pub fn agreeing_digits(value: &Float, reference: &Float, significant: usize) -> usize {
    if value.is_zero() || reference.is_zero() {
        return 0;
    }
    let (nv, dv, ev) = value.to_sign_string_exp(10, Some(significant));
    let (nr, dr, er) = reference.to_sign_string_exp(10, Some(significant));
    if nv != nr || ev != er {
        return 0;
    }
    dv.bytes().zip(dr.bytes()).take_while(|(a, b)| a == b).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn working_precision_is_target_plus_guard() {
        assert_eq!(PrecisionContext::new(30, 15).unwrap().working_digits(), 45);
        assert_eq!(PrecisionContext::new(16, 10).unwrap().working_digits(), 26);
    }

    #[test]
    fn rejects_small_digit_counts() {
        assert!(matches!(
            PrecisionContext::new(0, 10),
            Err(Error::InvalidPrecision(_))
        ));
        assert!(PrecisionContext::new(15, 10).is_err());
        assert!(PrecisionContext::new(20, 9).is_err());
        assert!(PrecisionContext::new(20, PrecisionContext::MAX_DIGITS).is_err());
    }

    #[test]
    fn bits_cover_working_digits() {
        let ctx = PrecisionContext::new(30, 15).unwrap();
        assert!(f64::from(ctx.bits()) >= 45.0 * std::f64::consts::LOG2_10);
        let third = ctx.float(1) / ctx.float(3);
        let s = format_decimal(&third, 45);
        assert_eq!(s, format!("0.{}", "3".repeat(45)));
    }

    #[test]
    fn decimal_formatting() {
        let ctx = PrecisionContext::with_target(30).unwrap();
        assert_eq!(format_decimal(&ctx.float(2), 5), "2.0000");
        assert_eq!(format_decimal(&ctx.parse("3.0197046").unwrap(), 6), "3.01970");
        assert_eq!(format_decimal(&ctx.parse("-0.00125").unwrap(), 3), "-0.00125");
        assert_eq!(format_decimal(&ctx.parse("12345.678").unwrap(), 6), "12345.7");
        assert_eq!(format_decimal(&ctx.parse("1e-9").unwrap(), 2), "1.0e-9");
        assert_eq!(format_scientific(&ctx.parse("-2.5e3").unwrap(), 3), "-2.50e3");
    }

    #[test]
    fn digit_agreement() {
        let ctx = PrecisionContext::with_target(30).unwrap();
        let a = ctx.parse("3.01970464").unwrap();
        let r = ctx.parse("3.0191777147719673869").unwrap();
        assert_eq!(agreeing_digits(&a, &r, 20), 4);
        assert_eq!(relative_error_digits(&a, &r), Some(3));
        assert_eq!(relative_error_digits(&r, &r), None);
    }
}
