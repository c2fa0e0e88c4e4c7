//! One-dimensional operator matrices in the even-parity sector of the two
//! parameterized bases.
//!
//! Trigonometric basis, half-width `L`, on `[-L, L]`:
//! `phi_n(x) = cos(k_n x) / sqrt(L)`, `k_n = (n + 1/2) pi / L`, `n = 0..M-1`.
//! With `d = n - m`, `s = n + m + 1` and `j = 2n + 1` the elements follow from
//! `int x^p cos(a x) cos(b x)` over the well:
//!
//! ```text
//! <n|-d2/dx2|n> = (j pi / 2L)^2
//! <n|x^2|n>     = L^2 (1/3 - 2/(j pi)^2)
//! <n|x^2|m>     = 2 L^2 (-1)^(n+m) (1/d^2 - 1/s^2) / pi^2
//! <n|x^4|n>     = L^4 (1/5 - 4/(j pi)^2 + 24/(j pi)^4)
//! <n|x^4|m>     = L^4 (-1)^(n+m) [4 (1/d^2 - 1/s^2)/pi^2 - 24 (1/d^4 - 1/s^4)/pi^4]
//! ```
//!
//! Harmonic-oscillator basis, frequency `W`, even quantum numbers `n = 2i`.
//! With `x = (a + a+)/sqrt(2W)` and `p^2 = (W/2)(2N + 1 - a^2 - a+^2)`:
//!
//! ```text
//! <n|p^2|n>   =  W (2n + 1)/2        <n|p^2|n+2> = -W sqrt((n+1)(n+2))/2
//! <n|x^2|n>   = (2n + 1)/(2W)        <n|x^2|n+2> =  sqrt((n+1)(n+2))/(2W)
//! <n|x^4|n>   = 3(2n^2 + 2n + 1)/(4W^2)
//! <n|x^4|n+2> = (4n + 6) sqrt((n+1)(n+2))/(4W^2)
//! <n|x^4|n+4> = sqrt((n+1)(n+2)(n+3)(n+4))/(4W^2)
//! ```
//!
//! All coefficients are exact rationals (times `pi^k` or an integer square
//! root) until the final conversion to a working-precision float.

use std::fmt;
use std::str::FromStr;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{PrecisionContext, SymmetricMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisKind {
    /// Infinite-well eigenfunctions; parameter is the half-width `L`.
    #[serde(rename = "trig")]
    Trigonometric,
    /// Oscillator eigenfunctions; parameter is the frequency `Omega`.
    #[serde(rename = "ho")]
    HarmonicOscillator,
}

impl BasisKind {
    pub const ALL: [BasisKind; 2] = [BasisKind::Trigonometric, BasisKind::HarmonicOscillator];

    /// Powers of the parameter carried by the kinetic, `x^2` and `x^4` matrices.
    pub fn scaling_exponents(self) -> ScalingExponents {
        match self {
            BasisKind::Trigonometric => ScalingExponents {
                kinetic: -2,
                x2: 2,
                x4: 4,
            },
            BasisKind::HarmonicOscillator => ScalingExponents {
                kinetic: 1,
                x2: -1,
                x4: -2,
            },
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            BasisKind::Trigonometric => "trig",
            BasisKind::HarmonicOscillator => "ho",
        }
    }

    /// Symbol of the nonlinear parameter.
    pub fn parameter_name(self) -> &'static str {
        match self {
            BasisKind::Trigonometric => "L",
            BasisKind::HarmonicOscillator => "Omega",
        }
    }

    /// Quantum number of the `index`-th even basis function.
    pub fn quantum_number(self, index: usize) -> usize {
        match self {
            BasisKind::Trigonometric => index,
            BasisKind::HarmonicOscillator => 2 * index,
        }
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trig" | "trigonometric" => Ok(BasisKind::Trigonometric),
            "ho" | "harmonic" | "harmonic-oscillator" => Ok(BasisKind::HarmonicOscillator),
            other => Err(Error::Parse(format!("unknown basis {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScalingExponents {
    pub kinetic: i32,
    pub x2: i32,
    pub x4: i32,
}

#[derive(Clone, Debug)]
pub struct Basis1DSpec {
    kind: BasisKind,
    m: usize,
    alpha: Float,
}

impl Basis1DSpec {
    pub fn new(kind: BasisKind, m: usize, alpha: Float) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpec("basis size M must be at least 1".into()));
        }
        if !alpha.is_finite() || alpha <= 0 {
            return Err(Error::InvalidSpec(format!(
                "basis parameter must be positive, got {alpha}"
            )));
        }
        Ok(Self { kind, m, alpha })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn alpha(&self) -> &Float {
        &self.alpha
    }
}

/// `sum_k c_k pi^k` with rational `c_k`.
struct PiSeries(Vec<(i32, Rational)>);

impl PiSeries {
    fn eval(&self, pi: &Float) -> Float {
        let prec = pi.prec();
        let mut s = Float::new(prec);
        for (k, c) in &self.0 {
            if *c != 0 {
                s += Float::with_val(prec, pi.pow(*k)) * Float::with_val(prec, c);
            }
        }
        s
    }
}

fn ratio(num: i64, den: i64) -> Rational {
    Rational::from((num, den))
}

fn parity(n: usize, m: usize) -> i64 {
    if (n + m).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn trig_kinetic(n: usize, m: usize) -> PiSeries {
    if n != m {
        return PiSeries(vec![]);
    }
    let j = (2 * n + 1) as i64;
    PiSeries(vec![(2, ratio(j * j, 4))])
}

fn trig_x2(n: usize, m: usize) -> PiSeries {
    if n == m {
        let j = (2 * n + 1) as i64;
        return PiSeries(vec![(0, ratio(1, 3)), (-2, ratio(-2, j * j))]);
    }
    let d = n as i64 - m as i64;
    let s = (n + m + 1) as i64;
    let c = (ratio(1, d * d) - ratio(1, s * s)) * 2 * parity(n, m);
    PiSeries(vec![(-2, c)])
}

fn trig_x4(n: usize, m: usize) -> PiSeries {
    if n == m {
        let j = (2 * n + 1) as i64;
        let j2 = j * j;
        return PiSeries(vec![
            (0, ratio(1, 5)),
            (-2, ratio(-4, j2)),
            (-4, ratio(24, j2 * j2)),
        ]);
    }
    let d2 = (n as i64 - m as i64).pow(2);
    let s2 = ((n + m + 1) as i64).pow(2);
    let sign = parity(n, m);
    let c2 = (ratio(1, d2) - ratio(1, s2)) * 4 * sign;
    let c4 = (ratio(1, d2 * d2) - ratio(1, s2 * s2)) * (-24) * sign;
    PiSeries(vec![(-2, c2), (-4, c4)])
}

/// `r * sqrt(radicand)` at `prec` bits.
fn rational_sqrt(r: Rational, radicand: Integer, prec: u32) -> Float {
    let root = Float::with_val(prec, radicand).sqrt();
    root * Float::with_val(prec, r)
}

fn sqrt_product(n: usize, count: usize) -> Integer {
    (1..=count).fold(Integer::from(1), |acc, k| acc * Integer::from(n + k))
}

/// HO element at unit frequency between even indices `i <= j`.
fn ho_element(op: Operator, i: usize, j: usize, prec: u32) -> Float {
    let n = 2 * i;
    let nn = n as i64;
    match (op, j - i) {
        (Operator::Kinetic, 0) => Float::with_val(prec, ratio(2 * nn + 1, 2)),
        (Operator::Kinetic, 1) => rational_sqrt(ratio(-1, 2), sqrt_product(n, 2), prec),
        (Operator::X2, 0) => Float::with_val(prec, ratio(2 * nn + 1, 2)),
        (Operator::X2, 1) => rational_sqrt(ratio(1, 2), sqrt_product(n, 2), prec),
        (Operator::X4, 0) => Float::with_val(prec, ratio(3 * (2 * nn * nn + 2 * nn + 1), 4)),
        (Operator::X4, 1) => rational_sqrt(ratio(4 * nn + 6, 4), sqrt_product(n, 2), prec),
        (Operator::X4, 2) => rational_sqrt(ratio(1, 4), sqrt_product(n, 4), prec),
        _ => Float::new(prec),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Operator {
    /// `-d^2/dx^2`
    Kinetic,
    X2,
    X4,
}

impl Operator {
    fn exponent(self, kind: BasisKind) -> i32 {
        let e = kind.scaling_exponents();
        match self {
            Operator::Kinetic => e.kinetic,
            Operator::X2 => e.x2,
            Operator::X4 => e.x4,
        }
    }

    fn ho_bandwidth(self) -> usize {
        match self {
            Operator::Kinetic | Operator::X2 => 1,
            Operator::X4 => 2,
        }
    }
}

/// Matrix of `op` at unit parameter, i.e. without the `alpha^p` factor.
fn unit_matrix(kind: BasisKind, op: Operator, m: usize, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    let prec = ctx.bits();
    match kind {
        BasisKind::Trigonometric => {
            let pi = ctx.pi();
            let element = match op {
                Operator::Kinetic => trig_kinetic,
                Operator::X2 => trig_x2,
                Operator::X4 => trig_x4,
            };
            let band = if op == Operator::Kinetic { 0 } else { m - 1 };
            SymmetricMatrix::from_band_fn(m, band, prec, |i, j| element(i, j).eval(&pi))
        }
        BasisKind::HarmonicOscillator => {
            SymmetricMatrix::from_band_fn(m, op.ho_bandwidth(), prec, |i, j| ho_element(op, i, j, prec))
        }
    }
}

/// Matrix of `op` in the basis described by `spec`.
pub fn operator_matrix(spec: &Basis1DSpec, op: Operator, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    let prec = ctx.bits();
    let unit = unit_matrix(spec.kind, op, spec.m, ctx)?;
    let factor = Float::with_val(prec, Float::with_val(prec, &spec.alpha).pow(op.exponent(spec.kind)));
    SymmetricMatrix::from_band_fn(spec.m, unit.bandwidth(), prec, |i, j| {
        Float::with_val(prec, unit.get(i, j) * &factor)
    })
}

pub fn kinetic_matrix(spec: &Basis1DSpec, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    operator_matrix(spec, Operator::Kinetic, ctx)
}

pub fn x2_matrix(spec: &Basis1DSpec, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    operator_matrix(spec, Operator::X2, ctx)
}

pub fn x4_matrix(spec: &Basis1DSpec, ctx: &PrecisionContext) -> Result<SymmetricMatrix> {
    operator_matrix(spec, Operator::X4, ctx)
}

/// Traces of the three operators at unit parameter.
#[derive(Clone, Debug)]
pub struct DiagonalSums {
    pub kinetic: Float,
    pub x2: Float,
    pub x4: Float,
}

/// Closed-form traces, summed as exact rationals before the float conversion.
pub fn diagonal_sums(kind: BasisKind, m: usize, ctx: &PrecisionContext) -> Result<DiagonalSums> {
    if m == 0 {
        return Err(Error::InvalidSpec("basis size M must be at least 1".into()));
    }
    let prec = ctx.bits();
    match kind {
        BasisKind::Trigonometric => {
            let pi = ctx.pi();
            let mut kin = PiSeries(vec![(2, Rational::new())]);
            let mut x2 = PiSeries(vec![(0, Rational::new()), (-2, Rational::new())]);
            let mut x4 = PiSeries(vec![(0, Rational::new()), (-2, Rational::new()), (-4, Rational::new())]);
            for n in 0..m {
                accumulate(&mut kin, trig_kinetic(n, n));
                accumulate(&mut x2, trig_x2(n, n));
                accumulate(&mut x4, trig_x4(n, n));
            }
            Ok(DiagonalSums {
                kinetic: kin.eval(&pi),
                x2: x2.eval(&pi),
                x4: x4.eval(&pi),
            })
        }
        BasisKind::HarmonicOscillator => {
            // sum over n = 0, 2, .., 2(M-1) of (2n+1)/2 and 3(2n^2+2n+1)/4
            let mut lin = Rational::new();
            let mut quart = Rational::new();
            for i in 0..m {
                let n = 2 * i as i64;
                lin += ratio(2 * n + 1, 2);
                quart += ratio(3 * (2 * n * n + 2 * n + 1), 4);
            }
            Ok(DiagonalSums {
                kinetic: Float::with_val(prec, &lin),
                x2: Float::with_val(prec, &lin),
                x4: Float::with_val(prec, &quart),
            })
        }
    }
}

fn accumulate(total: &mut PiSeries, term: PiSeries) {
    for (k, c) in term.0 {
        match total.0.iter_mut().find(|(e, _)| *e == k) {
            Some((_, acc)) => *acc += c,
            None => total.0.push((k, c)),
        }
    }
}
