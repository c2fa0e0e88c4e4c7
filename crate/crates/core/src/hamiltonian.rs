//! Rayleigh-Ritz matrix of the two coupled oscillators in a tensor-product
//! basis, and its trace as an explicit function of the basis parameter.
//!
//! ```text
//! Original: H = -d2x - d2y + x^2 + y^2 + lambda x^2 y^2
//! Rotated:  H = -d2x - d2y + x^2 + y^2 + (lambda/4)(x^2 - y^2)^2
//! ```
//!
//! The product state `(n, m)` sits at flat index `n * M + m`. Writing
//! `K = T + X2` for the one-dimensional blocks,
//!
//! ```text
//! Original: H = K (x) I + I (x) K + lambda X2 (x) X2
//! Rotated:  H = D (x) I + I (x) D - (lambda/2) X2 (x) X2,   D = K + (lambda/4) X4
//! ```

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::basis::{self, Basis1DSpec, BasisKind};
use crate::error::{Error, Result};
use crate::numerics::{parse_rational, PrecisionContext, SignedPowerForm, SymmetricMatrix};

/// Trace of the Rayleigh-Ritz matrix as `sum_k c_k alpha^k`.
pub type TraceForm = SignedPowerForm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HamiltonianForm {
    /// `lambda x^2 y^2` coupling.
    Original,
    /// Coordinates rotated by `pi/4`: `(lambda/4)(x^2 - y^2)^2`.
    Rotated,
}

impl HamiltonianForm {
    pub const ALL: [HamiltonianForm; 2] = [HamiltonianForm::Original, HamiltonianForm::Rotated];

    pub fn label(self) -> &'static str {
        match self {
            HamiltonianForm::Original => "original",
            HamiltonianForm::Rotated => "rotated",
        }
    }
}

impl fmt::Display for HamiltonianForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for HamiltonianForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "original" | "1" => Ok(HamiltonianForm::Original),
            "rotated" | "2" => Ok(HamiltonianForm::Rotated),
            other => Err(Error::Parse(format!("unknown hamiltonian form {other:?}"))),
        }
    }
}

/// Non-negative coupling constant, held exactly.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Coupling(Rational);

impl Coupling {
    pub fn new(value: Rational) -> Result<Self> {
        if value < 0 {
            return Err(Error::InvalidSpec(format!("coupling must be non-negative, got {value}")));
        }
        Ok(Self(value))
    }

    pub fn from_integer(value: u32) -> Self {
        Self(Rational::from(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn to_float(&self, prec: u32) -> Float {
        Float::with_val(prec, &self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self.0.denom() == 1 {
            return write!(f, "{}", self.0.numer());
        }
        // terminating decimals print positionally
        let mut den = self.0.denom().clone();
        let (mut twos, mut fives) = (0u32, 0u32);
        while den.is_divisible_u(2) {
            den /= 2;
            twos += 1;
        }
        while den.is_divisible_u(5) {
            den /= 5;
            fives += 1;
        }
        if den == 1 {
            let places = twos.max(fives);
            let scaled = Rational::from(&self.0 * rug::Integer::from(10).pow(places));
            let digits = scaled.numer().to_string();
            let (sign, digits) = digits
                .strip_prefix('-')
                .map_or(("", digits.as_str()), |d| ("-", d));
            let padded = format!("{:0>width$}", digits, width = places as usize + 1);
            let split = padded.len() - places as usize;
            return write!(f, "{sign}{}.{}", &padded[..split], &padded[split..]);
        }
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let value = parse_rational(s).map_err(|_| Error::Parse(format!("bad coupling {:?}", s.trim())))?;
        Coupling::new(value)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HamiltonianSpec {
    pub lambda: Coupling,
    pub form: HamiltonianForm,
    pub basis: BasisKind,
    pub m: usize,
}

impl HamiltonianSpec {
    pub fn new(lambda: Coupling, form: HamiltonianForm, basis: BasisKind, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpec("basis size M must be at least 1".into()));
        }
        Ok(Self {
            lambda,
            form,
            basis,
            m,
        })
    }

    /// Dimension of the Rayleigh-Ritz matrix, `M^2`.
    pub fn dim(&self) -> usize {
        self.m * self.m
    }

    pub fn flat_index(&self, n: usize, m: usize) -> usize {
        n * self.m + m
    }
}

fn dense_1d(m: &SymmetricMatrix) -> Vec<Vec<Float>> {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j).clone()).collect())
        .collect()
}

/// The `M^2 x M^2` Rayleigh-Ritz matrix at basis parameter `alpha`.
pub fn assemble(spec: &HamiltonianSpec, alpha: &Float, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    let prec = ctx.bits();
    let m = spec.m;
    let basis_spec = Basis1DSpec::new(spec.basis, m, Float::with_val(prec, alpha))?;
    let t = basis::kinetic_matrix(&basis_spec, ctx)?;
    let x2 = basis::x2_matrix(&basis_spec, ctx)?;
    let lambda = spec.lambda.to_float(prec);

    let (single, coupling) = match spec.form {
        HamiltonianForm::Original => {
            let single = SymmetricMatrix::from_band_fn(m, t.bandwidth().max(x2.bandwidth()), prec, |i, j| {
                Float::with_val(prec, t.get(i, j) + x2.get(i, j))
            })?;
            (single, lambda)
        }
        HamiltonianForm::Rotated => {
            let x4 = basis::x4_matrix(&basis_spec, ctx)?;
            let quarter = Float::with_val(prec, &lambda / 4u32);
            let band = t.bandwidth().max(x2.bandwidth()).max(x4.bandwidth());
            let single = SymmetricMatrix::from_band_fn(m, band, prec, |i, j| {
                let mut v = Float::with_val(prec, t.get(i, j) + x2.get(i, j));
                v += &quarter * x4.get(i, j);
                v
            })?;
            (single, Float::with_val(prec, -lambda / 2u32))
        }
    };

    let bs = single.bandwidth();
    let bx = x2.bandwidth();
    let bandwidth = if coupling.is_zero() {
        bs * m
    } else {
        (bs * m).max(bx * m + bx)
    };
    let d = dense_1d(&single);
    let cx: Vec<Vec<Float>> = dense_1d(&x2)
        .into_iter()
        .map(|row| row.into_iter().map(|v| v * &coupling).collect())
        .collect();
    let x = dense_1d(&x2);

    SymmetricMatrix::from_band_fn(spec.dim(), bandwidth, prec, |p, q| {
        let (n1, m1) = (p / m, p % m);
        let (n2, m2) = (q / m, q % m);
        let mut v = Float::new(prec);
        if m1 == m2 {
            v += &d[n1][n2];
        }
        if n1 == n2 {
            v += &d[m1][m2];
        }
        let (a, b) = (&cx[n1][n2], &x[m1][m2]);
        if !a.is_zero() && !b.is_zero() {
            v += a * b;
        }
        v
    })
}

/// `Tr H(alpha)` in closed form from the one-dimensional diagonal sums.
///
/// With `t`, `s2`, `s4` the unit-parameter traces of `T`, `X2`, `X4`:
///
/// ```text
/// Original: 2M t a^e_T + 2M s2 a^e_2 + lambda s2^2 a^(2 e_2)
/// Rotated:  2M t a^e_T + 2M s2 a^e_2 + (lambda/4)(2M s4 - 2 s2^2) a^(2 e_2)
/// ```
pub fn trace_form(spec: &HamiltonianSpec, ctx: &PrecisionContext) -> Result<TraceForm> {
    let prec = ctx.bits();
    let sums = basis::diagonal_sums(spec.basis, spec.m, ctx)?;
    let exps = spec.basis.scaling_exponents();
    let two_m = Float::with_val(prec, 2 * spec.m);
    let lambda = spec.lambda.to_float(prec);
    let s2_sq = Float::with_val(prec, sums.x2.square_ref());

    let quartic = match spec.form {
        HamiltonianForm::Original => Float::with_val(prec, &lambda * &s2_sq),
        HamiltonianForm::Rotated => {
            let inner = Float::with_val(prec, &two_m * &sums.x4) - Float::with_val(prec, &s2_sq * 2u32);
            Float::with_val(prec, &lambda * &inner) / 4u32
        }
    };
    debug_assert_eq!(exps.x4, 2 * exps.x2);
    Ok(SignedPowerForm::new([
        (exps.kinetic, Float::with_val(prec, &two_m * &sums.kinetic)),
        (exps.x2, Float::with_val(prec, &two_m * &sums.x2)),
        (exps.x4, quartic),
    ]))
}

/// Exponent of the kinetic term in the trace form.
pub fn kinetic_exponent(basis: BasisKind) -> i32 {
    basis.scaling_exponents().kinetic
}

/// Writes the assembled matrix as `i j value` lines, values in scientific
/// notation with `ctx.working_digits()` significant digits.
pub fn dump_matrix<W: Write>(
    spec: &HamiltonianSpec,
    alpha: &Float,
    ctx: &PrecisionContext,
    out: W,
) -> Result<()> {
    let h = assemble(spec, alpha, ctx)?;
    h.write_dump(out, ctx.working_digits() as usize)?;
    Ok(())
}
