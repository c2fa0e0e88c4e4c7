use rug::ops::{NegAssign, SubFrom};
use rug::{Assign, Float};

use super::{PrecisionContext, SymmetricMatrix};
use crate::error::{Error, Result};

/// All eigenvalues of `a`, ascending, by cyclic Jacobi sweeps at working
/// precision. Gives up after `100 * dim` sweeps.
pub fn eigenvalues_symmetric(a: &SymmetricMatrix, ctx: &PrecisionContext) -> Result<Vec<Float>> {
    eigenvalues_symmetric_with_cap(a, ctx, 100 * a.dim())
}

pub fn eigenvalues_symmetric_with_cap(
    a: &SymmetricMatrix,
    ctx: &PrecisionContext,
    max_sweeps: usize,
) -> Result<Vec<Float>> {
    let n = a.dim();
    let prec = ctx.bits();
    let mut m: Vec<Float> = a
        .to_dense()
        .into_iter()
        .map(|v| Float::with_val(prec, v))
        .collect();
    let eps = ctx.working_epsilon();

    let mut theta = Float::new(prec);
    let mut t = Float::new(prec);
    let mut c = Float::new(prec);
    let mut s = Float::new(prec);
    let mut tau = Float::new(prec);
    let mut tmp = Float::new(prec);
    let mut g = Float::new(prec);
    let mut h = Float::new(prec);
    let mut new_rp = Float::new(prec);
    let mut new_rq = Float::new(prec);

    let mut sweeps = 0;
    loop {
        let (off, diag) = off_and_diag(&m, n, prec);
        let threshold = Float::with_val(prec, &eps * &diag);
        if off.is_zero() || off <= threshold {
            break;
        }
        if sweeps == max_sweeps {
            return Err(Error::NoConvergence {
                iterations: sweeps,
                residual: off.to_f64(),
            });
        }
        sweeps += 1;

        for p in 0..n {
            for q in p + 1..n {
                let apq = m[p * n + q].clone();
                if apq.is_zero() {
                    continue;
                }
                // theta = (a_qq - a_pp) / (2 a_pq)
                theta.assign(&m[q * n + q] - &m[p * n + p]);
                theta /= &apq;
                theta /= 2;
                // t = sign(theta) / (|theta| + sqrt(theta^2 + 1))
                tmp.assign(theta.square_ref());
                tmp += 1;
                tmp.sqrt_mut();
                tmp += &*theta.as_abs();
                t.assign(tmp.recip_ref());
                if theta.is_sign_negative() {
                    t.neg_assign();
                }
                // c = 1/sqrt(t^2 + 1), s = t c, tau = s / (1 + c)
                tmp.assign(t.square_ref());
                tmp += 1;
                tmp.sqrt_mut();
                c.assign(tmp.recip_ref());
                s.assign(&t * &c);
                tmp.assign(&c + 1u32);
                tau.assign(&s / &tmp);

                tmp.assign(&t * &apq);
                m[p * n + p] -= &tmp;
                m[q * n + q] += &tmp;
                m[p * n + q].assign(0);
                m[q * n + p].assign(0);

                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    g.assign(&m[r * n + p]);
                    h.assign(&m[r * n + q]);
                    // a_rp = g - s (h + g tau)
                    tmp.assign(&g * &tau);
                    tmp += &h;
                    tmp *= &s;
                    new_rp.assign(&g - &tmp);
                    // a_rq = h + s (g - h tau)
                    tmp.assign(&h * &tau);
                    tmp.sub_from(&g);
                    tmp *= &s;
                    new_rq.assign(&h + &tmp);
                    m[p * n + r].assign(&new_rp);
                    m[q * n + r].assign(&new_rq);
                    m[r * n + p].assign(&new_rp);
                    m[r * n + q].assign(&new_rq);
                }
            }
        }
    }

    let mut eig: Vec<Float> = (0..n).map(|i| m[i * n + i].clone()).collect();
    eig.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    Ok(eig)
}

/// Largest off-diagonal magnitude and largest diagonal magnitude.
fn off_and_diag(m: &[Float], n: usize, prec: u32) -> (Float, Float) {
    let mut off = Float::new(prec);
    let mut diag = Float::new(prec);
    for i in 0..n {
        let d = m[i * n + i].as_abs();
        if *d > diag {
            diag.assign(&*d);
        }
        for j in i + 1..n {
            let v = m[i * n + j].as_abs();
            if *v > off {
                off.assign(&*v);
            }
        }
    }
    (off, diag)
}
