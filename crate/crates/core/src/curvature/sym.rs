use crate::error::{Error, Result};

/// Symmetric 2-tensor on an `n`-dimensional inner-product space, stored as a
/// dense row-major `n × n` array in a fixed orthonormal frame.
///
/// The inner product on this space is `<A, B> = tr(AᵀB)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTensor {
    n: usize,
    entries: Vec<f64>,
}

impl SymTensor {
    /// Builds a tensor from row-major entries, rejecting asymmetric input.
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::EntryCount {
                expected: n * n,
                got: entries.len(),
            });
        }
        let scale = entries.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
        let mut residual = 0.0_f64;
        for i in 0..n {
            for j in 0..i {
                residual = residual.max((entries[i * n + j] - entries[j * n + i]).abs());
            }
        }
        if scale > 0.0 && residual / scale > 1e-9 {
            return Err(Error::SymmetryViolation {
                residual: residual / scale,
            });
        }
        Ok(Self::from_fn(n, |i, j| {
            0.5 * (entries[i * n + j] + entries[j * n + i])
        }))
    }

    /// Builds `(f(i,j) + f(j,i)) / 2`, which is symmetric by construction.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let v = if i == j {
                    f(i, i)
                } else {
                    0.5 * (f(i, j) + f(j, i))
                };
                entries[i * n + j] = v;
                entries[j * n + i] = v;
            }
        }
        Self { n, entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n * n],
        }
    }

    /// The metric `g = Σ eᵢ ⊗ eᵢ`.
    pub fn metric(n: usize) -> Self {
        Self::from_fn(n, |i, j| if i == j { 1.0 } else { 0.0 })
    }

    pub fn diag(values: &[f64]) -> Self {
        Self::from_fn(values.len(), |i, j| if i == j { values[i] } else { 0.0 })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `A₀ = A − (tr A / n) g`.
    pub fn traceless(&self) -> Self {
        let shift = self.trace() / self.n as f64;
        Self::from_fn(self.n, |i, j| {
            self.get(i, j) - if i == j { shift } else { 0.0 }
        })
    }

    /// Returns `(A₀, tr A / n)` so that `A = A₀ + (tr A / n) g`.
    pub fn split(&self) -> (Self, f64) {
        (self.traceless(), self.trace() / self.n as f64)
    }

    /// `tr(AᵀB)`.
    pub fn inner(&self, other: &Self) -> Result<f64> {
        check_dim(self.n, other.n)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { n: self.n, entries })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(-1.0))
    }

    /// Matrix product `self · v` for a column vector `v`.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// `Q A Qᵀ` for a row-major `n × n` matrix `q`.
    pub fn conjugate(&self, q: &[f64]) -> Self {
        let n = self.n;
        let mut qa = vec![0.0; n * n];
        for i in 0..n {
            for b in 0..n {
                qa[i * n + b] = (0..n).map(|a| q[i * n + a] * self.get(a, b)).sum();
            }
        }
        Self::from_fn(n, |i, j| (0..n).map(|b| qa[i * n + b] * q[j * n + b]).sum())
    }
}

pub(crate) fn check_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { left, right })
    }
}
