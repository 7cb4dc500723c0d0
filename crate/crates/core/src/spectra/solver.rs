//! Dense symmetric eigensolvers, selectable by name.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::registry::{Named, Registry};

use super::SpectraError;

/// Unsorted eigenpairs: `vectors.column(k)` belongs to `values[k]`.
#[derive(Debug, Clone)]
pub struct RawEigen {
    pub values: DVector<f64>,
    pub vectors: DMatrix<f64>,
}

impl RawEigen {
    /// `max |A V - V Λ|` over all entries.
    pub fn residual(&self, a: &DMatrix<f64>) -> f64 {
        let av = a * &self.vectors;
        let vl = &self.vectors * DMatrix::from_diagonal(&self.values);
        (av - vl).amax()
    }
}

pub trait SymmetricEigensolver: Named + Send + Sync {
    /// Full eigendecomposition of a symmetric matrix. Only the lower
    /// triangle is guaranteed to be read.
    fn decompose(&self, a: &DMatrix<f64>) -> Result<RawEigen, SpectraError>;
}

/// Cyclic Jacobi rotations, sweeping row by row until the off-diagonal
/// mass falls below machine precision relative to the Frobenius norm.
#[derive(Debug, Clone, Copy)]
pub struct Jacobi {
    pub max_sweeps: usize,
}

impl Default for Jacobi {
    fn default() -> Self {
        Jacobi { max_sweeps: 100 }
    }
}

impl Named for Jacobi {
    fn name(&self) -> &'static str {
        "jacobi"
    }
}

fn off_diagonal_norm(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    let mut sum = 0.0;
    for q in 1..n {
        for p in 0..q {
            sum += a[(p, q)] * a[(p, q)];
        }
    }
    (2.0 * sum).sqrt()
}

impl SymmetricEigensolver for Jacobi {
    fn decompose(&self, input: &DMatrix<f64>) -> Result<RawEigen, SpectraError> {
        let n = input.nrows();
        if input.ncols() != n {
            return Err(SpectraError::NotSquare {
                rows: n,
                cols: input.ncols(),
            });
        }
        // symmetrize from the lower triangle
        let mut a = DMatrix::from_fn(
            n,
            n,
            |i, j| if i >= j { input[(i, j)] } else { input[(j, i)] },
        );
        let mut v = DMatrix::<f64>::identity(n, n);
        let scale = a.norm().max(f64::MIN_POSITIVE);

        for _ in 0..self.max_sweeps {
            if off_diagonal_norm(&a) <= f64::EPSILON * scale {
                return Ok(RawEigen {
                    values: a.diagonal(),
                    vectors: v,
                });
            }
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        if k == p || k == q {
                            continue;
                        }
                        let akp = a[(k, p)];
                        let akq = a[(k, q)];
                        let new_kp = c * akp - s * akq;
                        let new_kq = s * akp + c * akq;
                        a[(k, p)] = new_kp;
                        a[(p, k)] = new_kp;
                        a[(k, q)] = new_kq;
                        a[(q, k)] = new_kq;
                    }
                    a[(p, p)] -= t * apq;
                    a[(q, q)] += t * apq;
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = c * vkp - s * vkq;
                        v[(k, q)] = s * vkp + c * vkq;
                    }
                }
            }
        }
        Err(SpectraError::NoConvergence {
            solver: self.name(),
            iterations: self.max_sweeps,
        })
    }
}

/// Householder tridiagonalization plus implicit QR, via nalgebra.
#[derive(Debug, Clone, Copy)]
pub struct Householder {
    pub max_iterations: usize,
}

impl Default for Householder {
    fn default() -> Self {
        Householder {
            max_iterations: 10_000,
        }
    }
}

impl Named for Householder {
    fn name(&self) -> &'static str {
        "householder"
    }
}

impl SymmetricEigensolver for Householder {
    fn decompose(&self, a: &DMatrix<f64>) -> Result<RawEigen, SpectraError> {
        if a.ncols() != a.nrows() {
            return Err(SpectraError::NotSquare {
                rows: a.nrows(),
                cols: a.ncols(),
            });
        }
        let eig = SymmetricEigen::try_new(a.clone(), f64::EPSILON, self.max_iterations).ok_or(
            SpectraError::NoConvergence {
                solver: self.name(),
                iterations: self.max_iterations,
            },
        )?;
        Ok(RawEigen {
            values: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }
}

pub fn default_solvers() -> Registry<dyn SymmetricEigensolver> {
    let mut reg: Registry<dyn SymmetricEigensolver> = Registry::new();
    reg.register(Box::new(Jacobi::default()))
        .register(Box::new(Householder::default()));
    reg
}
