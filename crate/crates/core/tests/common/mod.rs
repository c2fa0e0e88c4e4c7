//! Independent reference computations shared by the integration tests:
//! tanh-sinh quadrature of the basis integrals and an f64 dense eigensolver.
#![allow(dead_code)]

use nalgebra::{DMatrix, SymmetricEigen};
use ritz_core::basis::BasisKind;
use ritz_core::hamiltonian::{HamiltonianForm, HamiltonianSpec};
use rug::float::Constant;
use rug::ops::Pow;
use rug::Float;

/// Quadrature precision: 60 digits plus margin.
pub const QUAD_BITS: u32 = 240;

/// 1D matrices `(T, X2, X4)` from numerical integration, row-major `m x m`.
pub struct QuadratureMatrices {
    pub m: usize,
    pub kinetic: Vec<Float>,
    pub x2: Vec<Float>,
    pub x4: Vec<Float>,
}

impl QuadratureMatrices {
    pub fn at(&self, which: usize, i: usize, j: usize) -> &Float {
        let v = match which {
            0 => &self.kinetic,
            1 => &self.x2,
            _ => &self.x4,
        };
        &v[i * self.m + j]
    }
}

fn f(v: f64) -> Float {
    Float::with_val(QUAD_BITS, v)
}

/// Values of the `m` even basis functions and of `-phi''` at `x`.
fn basis_values(kind: BasisKind, m: usize, alpha: &Float, x: &Float) -> (Vec<Float>, Vec<Float>) {
    let prec = QUAD_BITS;
    match kind {
        BasisKind::Trigonometric => {
            let pi = Float::with_val(prec, Constant::Pi);
            let norm = Float::with_val(prec, alpha.sqrt_ref()).recip();
            let mut phi = Vec::with_capacity(m);
            let mut minus_dd = Vec::with_capacity(m);
            for n in 0..m {
                let k = Float::with_val(prec, &pi * (2 * n + 1) as u32) / Float::with_val(prec, alpha * 2u32);
                let c = Float::with_val(prec, &k * x).cos() * &norm;
                minus_dd.push(Float::with_val(prec, k.square_ref()) * &c);
                phi.push(c);
            }
            (phi, minus_dd)
        }
        BasisKind::HarmonicOscillator => {
            // normalized Hermite functions by the three-term recurrence
            let nmax = 2 * (m - 1);
            let pi = Float::with_val(prec, Constant::Pi);
            let xi = Float::with_val(prec, alpha.sqrt_ref()) * x;
            let xi2 = Float::with_val(prec, xi.square_ref());
            let mut psi = Vec::with_capacity(nmax + 2);
            let pref = Float::with_val(prec, alpha / &pi).pow(0.25f64);
            psi.push(pref * (Float::with_val(prec, -&xi2) / 2u32).exp());
            psi.push(Float::with_val(prec, &psi[0] * &xi) * f(2.0).sqrt());
            for n in 1..=nmax {
                let a = Float::with_val(prec, 2u32) / (n + 1) as u32;
                let b = Float::with_val(prec, n as u32) / (n + 1) as u32;
                let next = Float::with_val(prec, &psi[n] * &xi) * a.sqrt() - Float::with_val(prec, &psi[n - 1] * &b.sqrt());
                psi.push(next);
            }
            let mut phi = Vec::with_capacity(m);
            let mut minus_dd = Vec::with_capacity(m);
            for i in 0..m {
                let n = 2 * i;
                // -phi'' = (Omega (2n+1) - Omega^2 x^2) phi
                let w = Float::with_val(prec, alpha * (2 * n + 1) as u32)
                    - Float::with_val(prec, alpha.square_ref()) * Float::with_val(prec, x.square_ref());
                minus_dd.push(w * &psi[n]);
                phi.push(psi[n].clone());
            }
            (phi, minus_dd)
        }
    }
}

/// Tanh-sinh nodes and weights for `[-1, 1]` at step `h`.
fn tanh_sinh(h: &Float) -> Vec<(Float, Float)> {
    let prec = QUAD_BITS;
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let mut out = Vec::new();
    let mut k = 0i64;
    loop {
        let u = Float::with_val(prec, h * k);
        let s = Float::with_val(prec, &half_pi * Float::with_val(prec, u.sinh_ref()));
        let ch = Float::with_val(prec, s.cosh_ref());
        let t = Float::with_val(prec, s.tanh_ref());
        let w = Float::with_val(prec, &half_pi * Float::with_val(prec, u.cosh_ref())) / Float::with_val(prec, ch.square_ref());
        if w < f(1e-90) || (Float::with_val(prec, 1u32) - &t).is_zero() {
            break;
        }
        out.push((t, w));
        k += 1;
    }
    out
}

/// Oracle matrices for `m` even functions at parameter `alpha`, integrated
/// over `[-L, L]` (trig) or the interval where the Gaussian weight exceeds
/// `1e-80` (HO).
pub fn quadrature_matrices(kind: BasisKind, m: usize, alpha: &Float) -> QuadratureMatrices {
    let prec = QUAD_BITS;
    let half_width = match kind {
        BasisKind::Trigonometric => alpha.clone(),
        // exp(-Omega x^2) < 1e-80 beyond x^2 = 80 ln(10) / Omega, plus margin for x^4 H_n^2
        BasisKind::HarmonicOscillator => Float::with_val(prec, 200u32 * f(10.0).ln() / alpha).sqrt(),
    };
    let integrate = |h: &Float| -> [Vec<Float>; 3] {
        let mut acc = [
            vec![Float::new(prec); m * m],
            vec![Float::new(prec); m * m],
            vec![Float::new(prec); m * m],
        ];
        for (t, w) in tanh_sinh(h) {
            let signs: &[i32] = if t.is_zero() { &[1] } else { &[1, -1] };
            for &sign in signs {
                let x = Float::with_val(prec, &half_width * &t) * sign;
                let (phi, mdd) = basis_values(kind, m, alpha, &x);
                let x2 = Float::with_val(prec, x.square_ref());
                let x4 = Float::with_val(prec, x2.square_ref());
                let wx = Float::with_val(prec, &w * h);
                for i in 0..m {
                    let pw = Float::with_val(prec, &phi[i] * &wx);
                    for j in 0..m {
                        acc[0][i * m + j] += Float::with_val(prec, &pw * &mdd[j]);
                        let pp = Float::with_val(prec, &pw * &phi[j]);
                        acc[1][i * m + j] += Float::with_val(prec, &pp * &x2);
                        acc[2][i * m + j] += pp * &x4;
                    }
                }
            }
        }
        for a in acc.iter_mut() {
            for v in a.iter_mut() {
                *v *= &half_width;
            }
        }
        acc
    };
    // halve the step until two levels agree to 1e-62
    let mut h = f(0.125);
    let mut prev = integrate(&h);
    for _ in 0..6 {
        h /= 2u32;
        let next = integrate(&h);
        let diff = prev
            .iter()
            .zip(&next)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| Float::with_val(prec, x - y).abs()))
            .fold(f(0.0), |acc, d| acc.max(&d));
        prev = next;
        if diff < f(1e-62) {
            break;
        }
    }
    let [kinetic, x2, x4] = prev;
    QuadratureMatrices { m, kinetic, x2, x4 }
}

/// Entry `(p, q)` of the 2D Hamiltonian built from oracle 1D matrices.
pub fn oracle_hamiltonian_entry(spec: &HamiltonianSpec, q1: &QuadratureMatrices, p: usize, q: usize) -> Float {
    let prec = QUAD_BITS;
    let m = spec.m;
    let (n1, m1, n2, m2) = (p / m, p % m, q / m, q % m);
    let lambda = spec.lambda.to_float(prec);
    let delta = |a: usize, b: usize| if a == b { f(1.0) } else { f(0.0) };
    let one_body = |i: usize, j: usize| -> Float {
        let mut v = Float::with_val(prec, q1.at(0, i, j) + q1.at(1, i, j));
        if spec.form == HamiltonianForm::Rotated {
            v += Float::with_val(prec, &lambda * q1.at(2, i, j)) / 4u32;
        }
        v
    };
    let mut h = one_body(n1, n2) * delta(m1, m2) + one_body(m1, m2) * delta(n1, n2);
    let coupling = Float::with_val(prec, q1.at(1, n1, n2) * q1.at(1, m1, m2)) * &lambda;
    match spec.form {
        HamiltonianForm::Original => h += coupling,
        HamiltonianForm::Rotated => h -= coupling / 2u32,
    }
    h
}

/// All eigenvalues of the f64 rounding of a dense row-major matrix, ascending.
pub fn f64_eigenvalues(a: &DMatrix<f64>) -> Vec<f64> {
    let mut v: Vec<f64> = SymmetricEigen::new(a.clone()).eigenvalues.iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}
