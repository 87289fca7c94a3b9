//! The curvature operator of the second kind `R̊ = π ∘ R̄` on traceless
//! symmetric 2-tensors, its spectrum, and the `S`-action on `(0,4)` tensors.

use serde::{Deserialize, Serialize};

use crate::curvature::{decompose, scalar_curvature, CurvatureTensor, Rank4, SymTensor};
use crate::eigen::{jacobi_eigen, SymmetricEigen};
use crate::error::{Error, Result};

/// `N = dim S²₀(V) = (n−1)(n+2)/2`.
pub fn traceless_dim(n: usize) -> usize {
    (n - 1) * (n + 2) / 2
}

/// Orthonormal basis of `S²₀(V)` under `tr(AᵀB)`: the off-diagonal tensors
/// `(eᵢ⊙eⱼ)/√2` for lexicographic `i < j`, followed by the normalized
/// diagonal tensors `e₁⊙e₁ + … + e_k⊙e_k − k e_{k+1}⊙e_{k+1}`.
///
/// Here `⊙` is taken with the `½` that makes `eᵢ⊙eᵢ` a unit diagonal entry.
#[derive(Debug, Clone, PartialEq)]
pub struct TracelessBasis {
    n: usize,
    elements: Vec<SymTensor>,
}

impl TracelessBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[SymTensor] {
        &self.elements
    }

    /// `Σ_α c_α S^α`.
    pub fn combine(&self, coeffs: &[f64]) -> SymTensor {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for (c, e) in coeffs.iter().zip(&self.elements) {
            for (o, x) in out.iter_mut().zip(e.entries()) {
                *o += c * x;
            }
        }
        SymTensor::from_fn(n, |i, j| out[i * n + j])
    }

    pub fn gram(&self) -> Vec<f64> {
        let m = self.len();
        let mut g = vec![0.0; m * m];
        for a in 0..m {
            for b in 0..m {
                g[a * m + b] = self.elements[a].inner(&self.elements[b]).expect("same n");
            }
        }
        g
    }
}

pub fn traceless_basis(n: usize) -> Result<TracelessBasis> {
    if n < 2 {
        return Err(Error::DimensionTooSmall {
            n,
            min: 2,
            what: "traceless basis",
        });
    }
    let mut elements = Vec::with_capacity(traceless_dim(n));
    let r = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..n {
        for j in i + 1..n {
            elements.push(SymTensor::from_fn(n, |a, b| {
                if (a, b) == (i, j) || (a, b) == (j, i) {
                    r
                } else {
                    0.0
                }
            }));
        }
    }
    for k in 1..n {
        let norm = ((k * k + k) as f64).sqrt();
        let mut diag = vec![0.0; n];
        diag[..k].iter_mut().for_each(|d| *d = 1.0 / norm);
        diag[k] = -(k as f64) / norm;
        elements.push(SymTensor::diag(&diag));
    }
    Ok(TracelessBasis { n, elements })
}

/// `R̄(φ)ᵢⱼ = Σₖₗ Rᵢₖₗⱼ φₖₗ`.
pub fn rbar_apply(r: &CurvatureTensor, phi: &SymTensor) -> Result<SymTensor> {
    if r.n() != phi.n() {
        return Err(Error::DimensionMismatch {
            left: r.n(),
            right: phi.n(),
        });
    }
    let n = r.n();
    Ok(SymTensor::from_fn(n, |i, j| {
        let mut s = 0.0;
        for k in 0..n {
            for l in 0..n {
                s += r.get(i, k, l, j) * phi.get(k, l);
            }
        }
        s
    }))
}

/// Matrix of `R̊` in a [`TracelessBasis`]: `M_{αβ} = <R̄(S^α), S^β>`.
#[derive(Debug, Clone)]
pub struct SecondKindOperator {
    pub n: usize,
    pub dim: usize,
    pub matrix: Vec<f64>,
    pub basis: TracelessBasis,
    /// Scalar curvature of the source tensor, kept for the trace identity.
    pub scalar: f64,
}

impl SecondKindOperator {
    #[inline]
    pub fn entry(&self, a: usize, b: usize) -> f64 {
        self.matrix[a * self.dim + b]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|a| self.entry(a, a)).sum()
    }

    pub fn frobenius(&self) -> f64 {
        self.matrix.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `(n+2)/(2n) · Scal`, which the trace must equal.
    pub fn expected_trace(&self) -> f64 {
        (self.n as f64 + 2.0) / (2.0 * self.n as f64) * self.scalar
    }

    pub fn eigen(&self) -> Result<SymmetricEigen> {
        jacobi_eigen(&self.matrix, self.dim)
    }
}

pub fn second_kind_matrix(r: &CurvatureTensor) -> SecondKindOperator {
    let n = r.n();
    let basis = traceless_basis(n.max(2)).expect("n >= 2");
    let images: Vec<SymTensor> = basis
        .elements()
        .iter()
        .map(|s| rbar_apply(r, s).expect("same n"))
        .collect();
    let dim = basis.len();
    let mut matrix = vec![0.0; dim * dim];
    for a in 0..dim {
        for b in a..dim {
            let v = images[a].inner(&basis.elements()[b]).expect("same n");
            let w = images[b].inner(&basis.elements()[a]).expect("same n");
            matrix[a * dim + b] = 0.5 * (v + w);
            matrix[b * dim + a] = 0.5 * (v + w);
        }
    }
    SecondKindOperator {
        n,
        dim,
        matrix,
        basis,
        scalar: scalar_curvature(r),
    }
}

/// Sorted eigenvalues `λ₁ ≤ … ≤ λ_N` of `R̊` and their mean `λ̄`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub eigenvalues: Vec<f64>,
    pub mean: f64,
    /// Whether `Σλⱼ = (n+2)/(2n) · Scal` held when the spectrum was computed.
    pub trace_check: bool,
}

/// Relative tolerance of the trace identity recorded in [`Spectrum::trace_check`].
pub const TRACE_TOL: f64 = 1e-9;

impl Spectrum {
    pub fn from_eigenvalues(n: usize, mut eigenvalues: Vec<f64>, trace_check: bool) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let mean = eigenvalues.iter().sum::<f64>() / eigenvalues.len() as f64;
        Self {
            n,
            dim: eigenvalues.len(),
            eigenvalues,
            mean,
            trace_check,
        }
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn sum_sq(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x).sum()
    }

    pub fn sum_cube(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x * x).sum()
    }

    /// `(Σλⱼ²/N)^{1/2}`.
    pub fn rms(&self) -> f64 {
        (self.sum_sq() / self.dim as f64).sqrt()
    }

    /// True when `|λ̄| ≤ 1e−12 · ‖R̊‖_F`; the ratio `λ₁/λ̄` is then undefined.
    pub fn is_flat_like(&self) -> bool {
        self.mean.abs() <= 1e-12 * self.sum_sq().sqrt()
    }

    /// `λ₁ / λ̄`, or `None` for flat-like spectra.
    pub fn min_over_mean(&self) -> Option<f64> {
        (!self.is_flat_like()).then(|| self.min() / self.mean)
    }

    /// Smallest gap between consecutive eigenvalues.
    pub fn min_gap(&self) -> f64 {
        self.eigenvalues
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spectrum serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))
    }
}

pub(crate) fn spectrum_from_eigen(op: &SecondKindOperator, e: &SymmetricEigen) -> Spectrum {
    let sum: f64 = e.values.iter().sum();
    let expected = op.expected_trace();
    let scale = expected.abs().max(op.frobenius()).max(f64::MIN_POSITIVE);
    let trace_check = (sum - expected).abs() <= TRACE_TOL * scale;
    Spectrum::from_eigenvalues(op.n, e.values.clone(), trace_check)
}

pub fn spectrum(op: &SecondKindOperator) -> Result<Spectrum> {
    Ok(spectrum_from_eigen(op, &op.eigen()?))
}

/// `(ST)(X₁,…,X₄) = Σᵢ T(X₁,…,SXᵢ,…,X₄)`.
pub fn s_action(s: &SymTensor, t: &Rank4) -> Result<Rank4> {
    if s.n() != t.n() {
        return Err(Error::DimensionMismatch {
            left: s.n(),
            right: t.n(),
        });
    }
    let n = s.n();
    Ok(Rank4::from_fn(n, |a, b, c, d| {
        let mut v = 0.0;
        for e in 0..n {
            v += s.get(a, e) * t.get(e, b, c, d)
                + s.get(b, e) * t.get(a, e, c, d)
                + s.get(c, e) * t.get(a, b, e, d)
                + s.get(d, e) * t.get(a, b, c, e);
        }
        v
    }))
}

/// Gap below which neighbouring eigenvalues are treated as one eigenspace,
/// relative to `max |λ|`.
pub const DEGENERACY_GAP: f64 = 1e-7;

/// The norms `|SʲW|²` for the eigentensors `Sʲ` of `R̊`, aligned with the
/// ascending eigenvalues.
#[derive(Debug, Clone)]
pub struct SjwNorms {
    pub eigenvalues: Vec<f64>,
    values: Vec<f64>,
    /// Set when some eigenspace has dimension > 1, so the individual entries
    /// depend on the choice of eigenbasis.
    pub degenerate: bool,
    pub min_gap: f64,
}

impl SjwNorms {
    /// Individual values; fails when they are basis-dependent.
    pub fn individual(&self) -> Result<&[f64]> {
        if self.degenerate {
            Err(Error::DegenerateEigenspace { gap: self.min_gap })
        } else {
            Ok(&self.values)
        }
    }

    /// Individual values regardless of degeneracy.
    pub fn raw(&self) -> &[f64] {
        &self.values
    }

    /// `Σⱼ |SʲW|²`.
    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }

    /// `Σⱼ λⱼ |SʲW|²`.
    pub fn weighted_sum(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.values)
            .map(|(l, v)| l * v)
            .sum()
    }
}

/// Computes `|SʲW|²` with `W` the Weyl part of `r` and `Sʲ` the eigentensors
/// of `second_kind_matrix(r)` expressed through `basis`.
pub fn sjw_norms(r: &CurvatureTensor, basis: &TracelessBasis) -> Result<SjwNorms> {
    if basis.n() != r.n() {
        return Err(Error::DimensionMismatch {
            left: r.n(),
            right: basis.n(),
        });
    }
    let op = second_kind_matrix(r);
    let e = op.eigen()?;
    let weyl = decompose(r)?.weyl;
    Ok(sjw_norms_with_eigenbasis(
        &weyl, basis, &e.values, &e.vectors,
    ))
}

/// Same as [`sjw_norms`] for an explicit orthonormal eigenbasis (row-major,
/// column `j` paired with `eigenvalues[j]`).
pub fn sjw_norms_with_eigenbasis(
    weyl: &CurvatureTensor,
    basis: &TracelessBasis,
    eigenvalues: &[f64],
    vectors: &[f64],
) -> SjwNorms {
    let dim = basis.len();
    let values = (0..dim)
        .map(|j| {
            let coeffs: Vec<f64> = (0..dim).map(|a| vectors[a * dim + j]).collect();
            let sj = basis.combine(&coeffs);
            s_action(&sj, weyl.as_rank4()).expect("same n").norm_sq()
        })
        .collect();
    let min_gap = eigenvalues
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::INFINITY, f64::min);
    let scale = eigenvalues.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let scale = if scale > 0.0 { scale } else { 1.0 };
    SjwNorms {
        eigenvalues: eigenvalues.to_vec(),
        values,
        degenerate: min_gap < DEGENERACY_GAP * scale,
        min_gap,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{kulkarni_nomizu, metric_product};

    #[test]
    fn basis_sizes_and_orthonormality() {
        assert_eq!(traceless_basis(4).unwrap().len(), 9);
        let b3 = traceless_basis(3).unwrap();
        assert_eq!(b3.len(), 5);
        let g = b3.gram();
        for a in 0..5 {
            for c in 0..5 {
                let want = if a == c { 1.0 } else { 0.0 };
                assert!((g[a * 5 + c] - want).abs() < 1e-12);
            }
        }
        let b5 = traceless_basis(5).unwrap();
        assert_eq!(b5.len(), 14);
        assert!(b5.elements().iter().all(|e| e.trace().abs() < 1e-15));
        assert!(traceless_basis(1).is_err());
        assert_eq!(traceless_basis(6).unwrap(), traceless_basis(6).unwrap());
    }

    #[test]
    fn rbar_on_constant_curvature() {
        let kappa = 1.0;
        let r = metric_product(4).scale(kappa / 2.0);
        let phi =
            SymTensor::from_fn(4, |i, j| (i as f64 - j as f64).powi(2) + i as f64).traceless();
        let out = rbar_apply(&r, &phi).unwrap();
        for (x, y) in out.entries().iter().zip(phi.entries()) {
            assert!((x - kappa * y).abs() < 1e-14);
        }
        let g = SymTensor::metric(4);
        let out = rbar_apply(&r, &g).unwrap();
        for (x, y) in out.entries().iter().zip(g.entries()) {
            assert!((x - kappa * (1.0 - 4.0) * y).abs() < 1e-14);
        }
        let z = rbar_apply(&CurvatureTensor::zeros(4), &phi).unwrap();
        assert_eq!(z.norm(), 0.0);
        assert!(rbar_apply(&r, &SymTensor::metric(3)).is_err());
    }

    #[test]
    fn unit_sphere_matrix_is_identity() {
        let op = second_kind_matrix(&metric_product(4).scale(0.5));
        for a in 0..9 {
            for b in 0..9 {
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((op.entry(a, b) - want).abs() < 1e-14);
            }
        }
        assert!((op.trace() - 9.0).abs() < 1e-13);
        assert!((op.expected_trace() - 9.0).abs() < 1e-13);
        let s = spectrum(&op).unwrap();
        assert!(s.trace_check);
        assert!(s.eigenvalues.iter().all(|x| (x - 1.0).abs() < 1e-13));
        assert!((s.mean - 1.0).abs() < 1e-14);
    }

    #[test]
    fn zero_tensor_is_flat_like() {
        let op = second_kind_matrix(&CurvatureTensor::zeros(4));
        assert!(op.matrix.iter().all(|&x| x == 0.0));
        let s = spectrum(&op).unwrap();
        assert!(s.eigenvalues.iter().all(|&x| x == 0.0));
        assert!(s.is_flat_like());
        assert_eq!(s.min_over_mean(), None);
    }

    #[test]
    fn s_action_basics() {
        let t = metric_product(4).scale(0.3).into_rank4();
        let g = SymTensor::metric(4);
        let gt = s_action(&g, &t).unwrap();
        for (x, y) in gt.entries().iter().zip(t.entries()) {
            assert!((x - 4.0 * y).abs() < 1e-14);
        }
        let z = s_action(&SymTensor::zeros(4), &t).unwrap();
        assert_eq!(z.max_abs(), 0.0);
        let s = SymTensor::diag(&[1.0, -1.0, 0.0, 0.0]);
        let gg = metric_product(4).into_rank4();
        let st = s_action(&s, &gg).unwrap();
        assert!(st.contract(&gg).unwrap().abs() < 1e-12);
        assert!(s_action(&SymTensor::metric(3), &gg).is_err());
    }

    #[test]
    fn degenerate_individual_values_are_refused() {
        let r = metric_product(4).scale(0.5);
        let b = traceless_basis(4).unwrap();
        let norms = sjw_norms(&r, &b).unwrap();
        assert!(norms.degenerate);
        assert!(matches!(
            norms.individual(),
            Err(Error::DegenerateEigenspace { .. })
        ));
        assert!(norms.raw().iter().all(|&v| v < 1e-25));
        assert!(norms.sum() < 1e-25);
        assert!(sjw_norms(&r, &traceless_basis(5).unwrap()).is_err());
    }

    #[test]
    fn spectrum_json_round_trip() {
        let a0 = SymTensor::diag(&[1.0, -0.5, 0.25, -0.75]);
        let g = SymTensor::metric(4);
        let r = metric_product(4)
            .scale(0.5)
            .add(&kulkarni_nomizu(&a0, &g).unwrap())
            .unwrap();
        let s = spectrum(&second_kind_matrix(&r)).unwrap();
        let back = Spectrum::from_json(&s.to_json()).unwrap();
        assert_eq!(back, s);
        assert!(s.to_json().contains("\"N\":9"));
    }
}
