//! Cyclic Jacobi eigensolver for dense symmetric matrices.

use crate::error::{Error, Result};

pub const MAX_SWEEPS: usize = 64;
/// Convergence once the off-diagonal Frobenius mass drops below this
/// fraction of `‖M‖_F`.
pub const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenpairs sorted by ascending eigenvalue. `vectors` is row-major
/// `dim × dim`; column `j` is the unit eigenvector for `values[j]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub dim: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
    pub sweeps: usize,
}

impl SymmetricEigen {
    pub fn vector(&self, j: usize) -> Vec<f64> {
        (0..self.dim)
            .map(|i| self.vectors[i * self.dim + j])
            .collect()
    }
}

fn off_diagonal_sq(a: &[f64], dim: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..dim {
        for j in 0..dim {
            if i != j {
                s += a[i * dim + j] * a[i * dim + j];
            }
        }
    }
    s
}

/// Diagonalizes the symmetric row-major matrix `m` (`dim × dim`). The input
/// is symmetrized before iterating.
pub fn jacobi_eigen(m: &[f64], dim: usize) -> Result<SymmetricEigen> {
    assert_eq!(m.len(), dim * dim, "matrix must be dim × dim");
    let mut a = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            a[i * dim + j] = 0.5 * (m[i * dim + j] + m[j * dim + i]);
        }
    }
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }

    let frob = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let target = OFF_DIAGONAL_TOL * frob;
    let mut sweeps = 0;
    while off_diagonal_sq(&a, dim).sqrt() > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { sweeps });
        }
        sweeps += 1;
        for p in 0..dim {
            for q in p + 1..dim {
                let apq = a[p * dim + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * dim + q] - a[p * dim + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..dim {
                    let akp = a[k * dim + p];
                    let akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for k in 0..dim {
                    let apk = a[p * dim + k];
                    let aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                a[p * dim + q] = 0.0;
                a[q * dim + p] = 0.0;
                for k in 0..dim {
                    let vkp = v[k * dim + p];
                    let vkq = v[k * dim + q];
                    v[k * dim + p] = c * vkp - s * vkq;
                    v[k * dim + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&x, &y| a[x * dim + x].total_cmp(&a[y * dim + y]));
    let values = order.iter().map(|&j| a[j * dim + j]).collect();
    let mut vectors = vec![0.0; dim * dim];
    for (new_j, &old_j) in order.iter().enumerate() {
        for i in 0..dim {
            vectors[i * dim + new_j] = v[i * dim + old_j];
        }
    }
    Ok(SymmetricEigen {
        dim,
        values,
        vectors,
        sweeps,
    })
}
