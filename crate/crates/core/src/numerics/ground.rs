//! Lowest eigenvalue of a symmetric matrix in mixed precision.
//!
//! A double-precision shift-and-invert subspace iteration locates the ground
//! state and a positive-definite shift just below it. The eigenpair is then
//! refined at working precision by preconditioned inverse iteration: residuals
//! are formed exactly from the high-precision matrix and the correction
//! equation is solved with the double-precision Cholesky factor. Each step
//! shrinks the eigenvector error by roughly `(eps0 - shift) / gap`, and the
//! Rayleigh quotient error is quadratic in it.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::ops::SubFrom;
use rug::{Assign, Float};

use super::{PrecisionContext, SymmetricMatrix};
use crate::error::{Error, Result};

const BLOCK: usize = 6;
const MAX_REFINEMENTS: usize = 200;

/// Smallest eigenvalue of `a`, accurate to the working precision of `ctx`.
pub fn smallest_eigenvalue(a: &SymmetricMatrix, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    if a.dim() == 1 {
        return Ok(Float::with_val(prec, a.get(0, 0)));
    }
    let band = BandMatrix::from_symmetric(a);
    let seed = locate_ground(&band)?;
    refine(a, &seed, ctx)
}

/// Upper band of a symmetric matrix in double precision, row-major.
pub(crate) struct BandMatrix {
    n: usize,
    b: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    fn from_symmetric(a: &SymmetricMatrix) -> Self {
        let n = a.dim();
        let b = a.effective_bandwidth();
        let mut data = vec![0.0; n * (b + 1)];
        for (i, j, v) in a.upper_entries() {
            if j - i <= b {
                data[i * (b + 1) + (j - i)] = v.to_f64();
            }
        }
        Self { n, b, data }
    }

    fn at(&self, i: usize, d: usize) -> f64 {
        self.data[i * (self.b + 1) + d]
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        y.iter_mut().for_each(|v| *v = 0.0);
        for i in 0..self.n {
            y[i] += self.at(i, 0) * x[i];
            for d in 1..=self.b.min(self.n - 1 - i) {
                let a = self.at(i, d);
                if a != 0.0 {
                    y[i] += a * x[i + d];
                    y[i + d] += a * x[i];
                }
            }
        }
    }

    fn gershgorin_lower(&self) -> f64 {
        let mut radius = vec![0.0; self.n];
        for i in 0..self.n {
            for d in 1..=self.b.min(self.n - 1 - i) {
                let a = self.at(i, d).abs();
                radius[i] += a;
                radius[i + d] += a;
            }
        }
        (0..self.n)
            .map(|i| self.at(i, 0) - radius[i])
            .fold(f64::INFINITY, f64::min)
    }
}

/// `A - shift I = U^T U` with `U` upper banded.
pub(crate) struct BandCholesky {
    n: usize,
    b: usize,
    u: Vec<f64>,
}

impl BandCholesky {
    /// `None` when `A - shift I` is not numerically positive definite.
    fn factor(a: &BandMatrix, shift: f64) -> Option<Self> {
        let (n, b) = (a.n, a.b);
        let w = b + 1;
        let mut u = a.data.clone();
        for i in 0..n {
            u[i * w] -= shift;
        }
        let mut row = vec![0.0; w];
        for i in 0..n {
            let len = b.min(n - 1 - i) + 1;
            row[..len].copy_from_slice(&u[i * w..i * w + len]);
            for k in i.saturating_sub(b)..i {
                let f = u[k * w + (i - k)];
                if f == 0.0 {
                    continue;
                }
                // row k covers columns k..=k+b; columns i..=k+b overlap row i
                let end = (k + b).min(n - 1);
                let src = &u[k * w + (i - k)..=k * w + (end - k)];
                for (r, s) in row[..=end - i].iter_mut().zip(src) {
                    *r -= f * s;
                }
            }
            let pivot = row[0];
            if pivot.is_nan() || pivot <= 0.0 || pivot.is_infinite() {
                return None;
            }
            let d = pivot.sqrt();
            u[i * w] = d;
            for off in 1..len {
                u[i * w + off] = row[off] / d;
            }
        }
        Some(Self { n, b, u })
    }

    fn solve_in_place(&self, x: &mut [f64]) {
        let (n, b, w) = (self.n, self.b, self.b + 1);
        // U^T y = r
        for i in 0..n {
            let mut s = x[i];
            for k in i.saturating_sub(b)..i {
                s -= self.u[k * w + (i - k)] * x[k];
            }
            x[i] = s / self.u[i * w];
        }
        // U x = y
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + b).min(n - 1) {
                s -= self.u[i * w + (j - i)] * x[j];
            }
            x[i] = s / self.u[i * w];
        }
    }
}

pub(crate) struct GroundSeed {
    factor: BandCholesky,
    vector: Vec<f64>,
    gap: f64,
}

struct RitzState {
    basis: DMatrix<f64>,
    values: Vec<f64>,
    residual: f64,
}

fn ritz_step(a: &BandMatrix, fac: &BandCholesky, x: &DMatrix<f64>) -> RitzState {
    let n = a.n;
    let k = x.ncols();
    let mut y = x.clone();
    for mut col in y.column_iter_mut() {
        fac.solve_in_place(col.as_mut_slice());
    }
    let q = y.qr().q();
    let mut aq = DMatrix::zeros(n, k);
    for c in 0..k {
        let (qc, mut out) = (q.column(c), aq.column_mut(c));
        a.matvec(qc.as_slice(), out.as_mut_slice());
    }
    let g = q.transpose() * &aq;
    let g = (&g + g.transpose()) * 0.5;
    let eig = g.symmetric_eigen();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut v = DMatrix::zeros(k, k);
    for (c, &i) in order.iter().enumerate() {
        v.set_column(c, &eig.eigenvectors.column(i));
    }
    let basis = &q * &v;
    let ground_image: DVector<f64> = &aq * v.column(0);
    let residual = (ground_image - basis.column(0) * values[0]).norm();
    RitzState {
        basis,
        values,
        residual,
    }
}

/// Finds a Cholesky-certified shift just below the ground eigenvalue together
/// with a double-precision ground vector.
pub(crate) fn locate_ground(a: &BandMatrix) -> Result<GroundSeed> {
    let n = a.n;
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    let k = BLOCK.min(n);

    let mut shift = a.gershgorin_lower() - 1e-6 * scale;
    let mut factor = None;
    for _ in 0..64 {
        factor = BandCholesky::factor(a, shift);
        if factor.is_some() {
            break;
        }
        shift -= scale;
    }
    let mut factor = factor.ok_or(Error::NoConvergence {
        iterations: 64,
        residual: f64::NAN,
    })?;

    let mut diag_order: Vec<usize> = (0..n).collect();
    diag_order.sort_by(|&i, &j| a.at(i, 0).total_cmp(&a.at(j, 0)));
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut x = DMatrix::from_fn(n, k, |_, _| 1e-3 * (rng.gen::<f64>() - 0.5));
    for (c, &i) in diag_order.iter().take(k).enumerate() {
        x[(i, c)] += 1.0;
    }

    let mut state = ritz_step(a, &factor, &x);
    for _ in 0..100 {
        let mut previous = f64::INFINITY;
        for inner in 0..40 {
            state = ritz_step(a, &factor, &state.basis);
            let converged = (state.values[0] - previous).abs() <= 1e-15 * scale;
            previous = state.values[0];
            if converged && inner >= 1 {
                break;
            }
        }
        let theta = state.values[0];
        let gap = if k > 1 {
            (state.values[1] - theta).max(1e-12 * scale)
        } else {
            scale
        };
        let delta = (1e-5 * gap).max(1e-12 * scale);
        let settled = state.residual <= 1e-9 * scale;
        if settled && theta - shift <= 0.05 * gap + delta {
            return Ok(GroundSeed {
                factor,
                vector: state.basis.column(0).iter().copied().collect(),
                gap,
            });
        }

        let mut target = theta - state.residual - delta;
        if target <= shift {
            if settled {
                return Ok(GroundSeed {
                    factor,
                    vector: state.basis.column(0).iter().copied().collect(),
                    gap,
                });
            }
            continue;
        }
        // a failed factorization certifies the ground lies below `target`
        for _ in 0..60 {
            if let Some(f) = BandCholesky::factor(a, target) {
                factor = f;
                shift = target;
                break;
            }
            target = 0.5 * (shift + target);
        }
    }
    Err(Error::NoConvergence {
        iterations: 100,
        residual: state.residual,
    })
}

fn dot(x: &[Float], y: &[Float], prec: u32) -> Float {
    let mut s = Float::new(prec);
    for (a, b) in x.iter().zip(y) {
        s += a * b;
    }
    s
}

fn normalize(x: &mut [Float], prec: u32) {
    let mut norm = dot(x, x, prec);
    norm.sqrt_mut();
    for v in x.iter_mut() {
        *v /= &norm;
    }
}

fn refine(a: &SymmetricMatrix, seed: &GroundSeed, ctx: &PrecisionContext) -> Result<Float> {
    let prec = ctx.bits();
    let eps = ctx.working_epsilon();
    let gap = Float::with_val(prec, 0.5 * seed.gap);
    let hp = |v: &Float| Float::with_val(prec, v);
    let a_hp;
    let a = if a.prec() < prec {
        a_hp = SymmetricMatrix::from_band_fn(a.dim(), a.bandwidth(), prec, |i, j| hp(a.get(i, j)))?;
        &a_hp
    } else {
        a
    };

    let mut x: Vec<Float> = seed.vector.iter().map(|v| Float::with_val(prec, *v)).collect();
    normalize(&mut x, prec);
    let mut residual = vec![Float::new(prec); x.len()];
    let mut correction = vec![0.0; x.len()];
    let mut last_norm = f64::NAN;

    for _ in 0..MAX_REFINEMENTS {
        let y = a.matvec(&x);
        let rho = dot(&x, &y, prec);
        let mut largest = 0.0f64;
        for ((r, yi), xi) in residual.iter_mut().zip(&y).zip(&x) {
            r.assign(&rho * xi);
            r.sub_from(yi);
            largest = largest.max(r.to_f64().abs());
        }
        let r2 = dot(&residual, &residual, prec);
        last_norm = r2.to_f64().sqrt();
        // Kato-Temple: rho - eps0 <= |r|^2 / gap
        let bound = Float::with_val(prec, &r2 / &gap);
        let tol = Float::with_val(prec, &eps * Float::with_val(prec, rho.abs_ref()).max(&Float::with_val(prec, 1)));
        if r2.is_zero() || bound <= tol || largest == 0.0 {
            return Ok(rho);
        }
        for (c, r) in correction.iter_mut().zip(&residual) {
            *c = r.to_f64() / largest;
        }
        seed.factor.solve_in_place(&mut correction);
        let scale = Float::with_val(prec, largest);
        for (xi, c) in x.iter_mut().zip(&correction) {
            *xi -= Float::with_val(prec, *c) * &scale;
        }
        normalize(&mut x, prec);
    }
    Err(Error::NoConvergence {
        iterations: MAX_REFINEMENTS,
        residual: last_norm,
    })
}
