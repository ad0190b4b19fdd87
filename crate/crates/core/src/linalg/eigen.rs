use super::{SymmetricMatrix, Vector};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi iteration.
pub const MAX_SWEEPS: usize = 100;

/// Default relative off-diagonal threshold for [`eigendecompose`].
pub const DEFAULT_EIGEN_TOL: f64 = 1e-15;

/// Spectral factorization `M = Σ λ_i v_i v_iᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenDecomposition {
    /// Ascending; ties keep the original diagonal position.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal, `eigenvectors[i]` pairs with `eigenvalues[i]`.
    pub eigenvectors: Vec<Vector>,
    /// `max_i ‖M v_i − λ_i v_i‖`
    pub residual: f64,
}

impl EigenDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `Σ f(λ_i) ⟨v_i, x⟩ v_i`
    pub fn apply_spectral(&self, x: &Vector, f: impl Fn(f64) -> f64) -> Vector {
        let mut out = Vector::zeros(x.len());
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            let w = f(*lambda);
            if w != 0.0 {
                out.axpy(w * v.dot(x), v);
            }
        }
        out
    }

    /// Eigenvectors whose eigenvalue satisfies `|λ| <= zero_threshold`.
    pub fn kernel_basis(&self, zero_threshold: f64) -> Vec<&Vector> {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .filter(|(l, _)| l.abs() <= zero_threshold)
            .map(|(_, v)| v)
            .collect()
    }
}

/// Cyclic Jacobi eigendecomposition.
///
/// Sweeps over all off-diagonal pairs `(p, q)` and annihilates each with a
/// plane rotation until the largest off-diagonal magnitude is at most
/// `tol · ‖M‖_∞`. Rotations are accumulated into the eigenvector matrix, so
/// orthogonality holds to machine precision regardless of eigenvalue
/// clustering.
pub fn eigendecompose(m: &SymmetricMatrix, tol: f64) -> Result<EigenDecomposition> {
    if !(tol > 0.0) {
        return Err(Error::invalid("eigensolver tolerance must be positive"));
    }
    let n = m.dim();
    let mut a = m.to_rows();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let threshold = tol * m.norm_inf();

    let mut converged = false;
    for _sweep in 0..=MAX_SWEEPS {
        if max_off_diagonal(&a) <= threshold {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut pairs: Vec<(f64, Vector)> = (0..n)
        .map(|i| (a[i][i], Vector::new((0..n).map(|k| v[k][i]).collect())))
        .collect();
    // stable: ties stay in original index order
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    let residual = pairs
        .iter()
        .map(|(lambda, vec)| {
            let mv = m.mul_vec(vec);
            mv.distance(&vec.scale(*lambda))
        })
        .fold(0.0, f64::max);

    if !converged {
        return Err(Error::NoConvergence {
            what: "Jacobi eigensolver",
            iterations: MAX_SWEEPS,
            residual,
        });
    }

    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

fn max_off_diagonal(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let mut worst = 0.0_f64;
    for p in 0..n {
        for q in p + 1..n {
            worst = worst.max(a[p][q].abs());
        }
    }
    worst
}

fn rotate(a: &mut [Vec<f64>], v: &mut [Vec<f64>], p: usize, q: usize) {
    let apq = a[p][q];
    if apq == 0.0 {
        return;
    }
    let n = a.len();
    let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let app = a[p][p];
    let aqq = a[q][q];
    for k in 0..n {
        if k == p || k == q {
            continue;
        }
        let akp = a[k][p];
        let akq = a[k][q];
        let new_kp = c * akp - s * akq;
        let new_kq = s * akp + c * akq;
        a[k][p] = new_kp;
        a[p][k] = new_kp;
        a[k][q] = new_kq;
        a[q][k] = new_kq;
    }
    a[p][p] = app - t * apq;
    a[q][q] = aqq + t * apq;
    a[p][q] = 0.0;
    a[q][p] = 0.0;

    for row in v.iter_mut() {
        let vkp = row[p];
        let vkq = row[q];
        row[p] = c * vkp - s * vkq;
        row[q] = s * vkp + c * vkq;
    }
}
