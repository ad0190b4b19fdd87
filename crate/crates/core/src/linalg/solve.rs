//! Positive-definite solves for shifted systems `(αI + βM) y = r`.
//!
//! Tikhonov systems `(B + εI)` are badly conditioned for small `ε`, so the
//! Cholesky solution is polished by iterative refinement with residuals
//! accumulated in double-double arithmetic. This recovers close to full
//! working accuracy as long as `cond · 2⁻⁵³ ≪ 1`.

use super::{SymmetricMatrix, Vector};
use crate::error::{check_dim, Error, Result};

const REFINEMENT_STEPS: usize = 4;

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn factor(m: &SymmetricMatrix) -> Result<Self> {
        let n = m.dim();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = m.get(j, j);
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) {
                return Err(Error::NotPositiveDefinite);
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in j + 1..n {
                let mut s = m.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Ok(Cholesky { n, l })
    }

    pub fn solve(&self, b: &Vector) -> Vector {
        let n = self.n;
        let mut y = b.clone().into_inner();
        for i in 0..n {
            let mut s = y[i];
            for k in 0..i {
                s -= self.l[i * n + k] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let mut s = y[i];
            for k in i + 1..n {
                s -= self.l[k * n + i] * y[k];
            }
            y[i] = s / self.l[i * n + i];
        }
        Vector::new(y)
    }
}

/// Solves `(alpha·I + beta·M) y = rhs` for a positive-definite shifted matrix.
pub fn solve_shifted(m: &SymmetricMatrix, alpha: f64, beta: f64, rhs: &Vector) -> Result<Vector> {
    check_dim(m.dim(), rhs.len())?;
    let chol = Cholesky::factor(&m.shifted(alpha, beta))?;
    let mut y = chol.solve(rhs);
    for _ in 0..REFINEMENT_STEPS {
        let r = shifted_residual(m, alpha, beta, rhs, &y);
        if r.iter().all(|v| *v == 0.0) {
            break;
        }
        let dy = chol.solve(&r);
        y.axpy(1.0, &dy);
    }
    Ok(y)
}

/// `rhs − α y − β M y`, accumulated in double-double.
fn shifted_residual(m: &SymmetricMatrix, alpha: f64, beta: f64, rhs: &Vector, y: &Vector) -> Vector {
    (0..m.dim())
        .map(|i| {
            let mut my = DoubleDouble::default();
            for (a, b) in m.row(i).iter().zip(y.iter()) {
                my.add_product(*a, *b);
            }
            let mut acc = DoubleDouble::default();
            acc.add(rhs[i]);
            acc.add_product(-alpha, y[i]);
            acc.add_product(-beta, my.hi);
            acc.add_product(-beta, my.lo);
            acc.value()
        })
        .collect::<Vec<_>>()
        .into()
}

/// Unevaluated sum `hi + lo` used for compensated accumulation.
#[derive(Debug, Default, Clone, Copy)]
struct DoubleDouble {
    hi: f64,
    lo: f64,
}

impl DoubleDouble {
    fn add(&mut self, x: f64) {
        let (s, e) = two_sum(self.hi, x);
        self.hi = s;
        self.lo += e;
    }

    fn add_product(&mut self, a: f64, b: f64) {
        let p = a * b;
        let e = a.mul_add(b, -p);
        self.add(p);
        self.lo += e;
    }

    fn value(&self) -> f64 {
        self.hi + self.lo
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}
