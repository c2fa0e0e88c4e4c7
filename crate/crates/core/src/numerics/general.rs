//! Dense general (non-symmetric) matrices: Gaussian elimination and the
//! eigenvalue with smallest real part.

use nalgebra::DMatrix;
use rug::ops::SubFrom;
use rug::{Assign, Float};

use super::PrecisionContext;
use crate::error::{Error, Result};

/// Square row-major matrix of high-precision scalars.
#[derive(Clone, Debug)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<Float>,
}

impl DenseMatrix {
    pub fn zeros(n: usize, prec: u32) -> Self {
        Self {
            n,
            data: vec![Float::new(prec); n * n],
        }
    }

    pub fn from_fn<F: FnMut(usize, usize) -> Float>(n: usize, mut f: F) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Float {
        &self.data[i * self.n + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut Float {
        &mut self.data[i * self.n + j]
    }

    pub fn matvec(&self, x: &[Float]) -> Vec<Float> {
        let prec = x.first().map_or(64, Float::prec);
        (0..self.n)
            .map(|i| {
                let mut s = Float::new(prec);
                for (a, xj) in self.data[i * self.n..(i + 1) * self.n].iter().zip(x) {
                    if !a.is_zero() {
                        s += a * xj;
                    }
                }
                s
            })
            .collect()
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        let n = self.n;
        let prec = self.data.first().map_or(64, Float::prec);
        let mut out = DenseMatrix::zeros(n, prec);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a * other.get(k, j);
                    *out.get_mut(i, j) += prod;
                }
            }
        }
        out
    }

    /// `self^-1 rhs` (columns of `rhs`) by Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        let n = self.n;
        let prec = self.data.first().map_or(64, Float::prec);
        let mut a = self.data.clone();
        let mut b = rhs.data.clone();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| {
                    a[i * n + col]
                        .as_abs()
                        .partial_cmp(&*a[j * n + col].as_abs())
                        .expect("finite")
                })
                .expect("non-empty");
            if a[pivot * n + col].is_zero() {
                return Err(Error::InvalidSpec("singular matrix".into()));
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    b.swap(pivot * n + j, col * n + j);
                }
            }
            let inv = Float::with_val(prec, a[col * n + col].recip_ref());
            for row in col + 1..n {
                let f = Float::with_val(prec, &a[row * n + col] * &inv);
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let t = Float::with_val(prec, &f * &a[col * n + j]);
                    a[row * n + j] -= t;
                }
                for j in 0..n {
                    let t = Float::with_val(prec, &f * &b[col * n + j]);
                    b[row * n + j] -= t;
                }
            }
        }
        for col in (0..n).rev() {
            for j in 0..n {
                let mut s = b[col * n + j].clone();
                for k in col + 1..n {
                    s -= &a[col * n + k] * &b[k * n + j];
                }
                s /= &a[col * n + col];
                b[col * n + j] = s;
            }
        }
        Ok(DenseMatrix { n, data: b })
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }
}

/// Eigenvalue with the smallest real part. A real eigenvalue is refined to
/// working precision by inverse iteration with a double-precision LU of the
/// shifted matrix; a complex one is returned as its double-precision real part.
pub fn smallest_real_eigenvalue(a: &DenseMatrix, ctx: &PrecisionContext) -> Result<Float> {
    let n = a.dim();
    let prec = ctx.bits();
    if n == 1 {
        return Ok(Float::with_val(prec, a.get(0, 0)));
    }
    let af = a.to_f64();
    let scale = af.amax().max(f64::MIN_POSITIVE);
    let eig = af.complex_eigenvalues();
    let lowest = eig
        .iter()
        .min_by(|x, y| x.re.total_cmp(&y.re))
        .copied()
        .ok_or(Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        })?;
    if !lowest.re.is_finite() {
        return Err(Error::NoConvergence {
            iterations: 0,
            residual: f64::NAN,
        });
    }
    if lowest.im.abs() > 1e-10 * scale {
        return Ok(Float::with_val(prec, lowest.re));
    }
    let theta = lowest.re;
    let nearest_other = eig
        .iter()
        .map(|z| ((z.re - theta).powi(2) + z.im.powi(2)).sqrt())
        .filter(|d| *d > 1e-9 * scale)
        .fold(f64::INFINITY, f64::min);
    let gap = if nearest_other.is_finite() { nearest_other } else { scale };
    let shift = theta - (1e-6 * gap).max(1e-10 * scale);
    let shifted = &af - DMatrix::identity(n, n) * shift;
    let lu = shifted.lu();

    // double-precision inverse iteration for the start vector
    let mut v = nalgebra::DVector::from_element(n, 1.0);
    for _ in 0..4 {
        v = lu
            .solve(&v)
            .ok_or_else(|| Error::InvalidSpec("singular shifted matrix".into()))?;
        v /= v.amax();
    }
    let pivot = v.iamax();
    let mut x: Vec<Float> = v.iter().map(|c| Float::with_val(prec, *c / v[pivot])).collect();

    let eps = ctx.working_epsilon();
    let mut rho_prev = Float::with_val(prec, f64::INFINITY);
    let mut stable = 0;
    let mut residual = vec![Float::new(prec); n];
    let mut last = f64::NAN;
    for _ in 0..200 {
        let y = a.matvec(&x);
        let rho = Float::with_val(prec, &y[pivot] / &x[pivot]);
        let mut largest = 0.0f64;
        for ((r, yi), xi) in residual.iter_mut().zip(&y).zip(&x) {
            r.assign(&rho * xi);
            r.sub_from(yi);
            largest = largest.max(r.to_f64().abs());
        }
        last = largest;
        let change = Float::with_val(prec, &rho - &rho_prev).abs();
        let tol = Float::with_val(prec, &eps * Float::with_val(prec, rho.abs_ref()).max(&Float::with_val(prec, 1)));
        if largest == 0.0 || change <= tol {
            stable += 1;
            if stable == 2 || largest == 0.0 {
                return Ok(rho);
            }
        } else {
            stable = 0;
        }
        rho_prev = rho;
        let r = nalgebra::DVector::from_iterator(n, residual.iter().map(|r| r.to_f64() / largest));
        let z = lu
            .solve(&r)
            .ok_or_else(|| Error::InvalidSpec("singular shifted matrix".into()))?;
        let s = Float::with_val(prec, largest);
        for (xi, zi) in x.iter_mut().zip(z.iter()) {
            *xi -= Float::with_val(prec, *zi) * &s;
        }
        let norm = x[pivot].clone();
        for xi in x.iter_mut() {
            *xi /= &norm;
        }
    }
    Err(Error::NoConvergence {
        iterations: 200,
        residual: last,
    })
}
