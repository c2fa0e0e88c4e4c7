//! Pseudospectral collocation baseline in the even cosine basis.
//!
//! The wavefunction is represented by its values on the tensor grid of the
//! `M` positive zeros of `cos((M + 1/2) pi x / L)`. The kinetic operator is the
//! exact second derivative of the even cosine interpolant; the potential acts
//! pointwise. The resulting matrix is not symmetric and carries no
//! upper-bound guarantee.

use rug::Float;

use crate::basis::BasisKind;
use crate::error::{Error, Result};
use crate::hamiltonian::{HamiltonianForm, HamiltonianSpec};
use crate::numerics::{smallest_real_eigenvalue, DenseMatrix, PrecisionContext};

/// Working digits used by every collocation solve.
pub const COLLOCATION_DIGITS: u32 = 34;

fn collocation_context() -> PrecisionContext {
    PrecisionContext::new(COLLOCATION_DIGITS - PrecisionContext::MIN_GUARD_DIGITS, PrecisionContext::MIN_GUARD_DIGITS)
        .expect("valid collocation precision")
}

#[derive(Clone, Debug)]
pub struct CollocationGrid {
    m: usize,
    half_width: Float,
    nodes: Vec<Float>,
}

impl CollocationGrid {
    /// Nodes `x_j = (2j + 1) L / (2M + 1)`, `j = 0..M-1`.
    pub fn new(m: usize, half_width: &Float, prec: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidSpec("collocation needs at least one node".into()));
        }
        if !half_width.is_finite() || *half_width <= 0 {
            return Err(Error::InvalidSpec("collocation half-width must be positive".into()));
        }
        let l = Float::with_val(prec, half_width);
        let nodes = (0..m)
            .map(|j| Float::with_val(prec, &l * (2 * j + 1) as u32) / (2 * m + 1) as u32)
            .collect();
        Ok(Self {
            m,
            half_width: l,
            nodes,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn half_width(&self) -> &Float {
        &self.half_width
    }

    pub fn nodes(&self) -> &[Float] {
        &self.nodes
    }

    /// `-d^2/dx^2` acting on nodal values: `B diag(k_n^2) B^-1` with
    /// `B_jn = cos(k_n x_j)`.
    pub fn kinetic_matrix(&self) -> Result<DenseMatrix> {
        let prec = self.half_width.prec();
        let m = self.m;
        let pi = Float::with_val(prec, rug::float::Constant::Pi);
        let k: Vec<Float> = (0..m)
            .map(|n| Float::with_val(prec, &pi * (2 * n + 1) as u32) / Float::with_val(prec, &self.half_width * 2u32))
            .collect();
        let b = DenseMatrix::from_fn(m, |j, n| Float::with_val(prec, &k[n] * &self.nodes[j]).cos());
        let identity = DenseMatrix::from_fn(m, |i, j| Float::with_val(prec, u32::from(i == j)));
        let mut inv = b.solve(&identity)?;
        for (n, kn) in k.iter().enumerate() {
            let k2 = Float::with_val(prec, kn.square_ref());
            for j in 0..m {
                *inv.get_mut(n, j) *= &k2;
            }
        }
        Ok(b.mul(&inv))
    }
}

fn potential(form: HamiltonianForm, lambda: &Float, x: &Float, y: &Float) -> Float {
    let prec = x.prec();
    let x2 = Float::with_val(prec, x.square_ref());
    let y2 = Float::with_val(prec, y.square_ref());
    let mut v = Float::with_val(prec, &x2 + &y2);
    match form {
        HamiltonianForm::Original => v += Float::with_val(prec, &x2 * &y2) * lambda,
        HamiltonianForm::Rotated => {
            let d = Float::with_val(prec, &x2 - &y2);
            v += Float::with_val(prec, d.square_ref()) * lambda / 4u32;
        }
    }
    v
}

/// The `M^2 x M^2` collocation matrix on the tensor grid, flat index `i M + j`.
pub fn collocation_matrix(spec: &HamiltonianSpec, half_width: &Float) -> Result<DenseMatrix> {
    if spec.basis != BasisKind::Trigonometric {
        return Err(Error::Unsupported(format!(
            "collocation is defined for the trigonometric basis, not {}",
            spec.basis
        )));
    }
    let ctx = collocation_context();
    let prec = ctx.bits();
    let grid = CollocationGrid::new(spec.m, half_width, prec)?;
    let kin = grid.kinetic_matrix()?;
    let lambda = spec.lambda.to_float(prec);
    let m = spec.m;
    let nodes = grid.nodes();
    Ok(DenseMatrix::from_fn(m * m, |p, q| {
        let (i, j) = (p / m, p % m);
        let (i2, j2) = (q / m, q % m);
        let mut v = Float::new(prec);
        if j == j2 {
            v += kin.get(i, i2);
        }
        if i == i2 {
            v += kin.get(j, j2);
        }
        if p == q {
            v += potential(spec.form, &lambda, &nodes[i], &nodes[j]);
        }
        v
    }))
}

/// Ground-energy estimate of the collocation matrix: the eigenvalue with the
/// smallest real part, computed at [`COLLOCATION_DIGITS`] digits and widened to
/// the caller's precision.
pub fn collocation_ground_energy(
    spec: &HamiltonianSpec,
    half_width: &Float,
    ctx: &PrecisionContext,
) -> Result<Float> {
    let matrix = collocation_matrix(spec, half_width)?;
    let energy = smallest_real_eigenvalue(&matrix, &collocation_context())?;
    Ok(Float::with_val(ctx.bits(), energy))
}
