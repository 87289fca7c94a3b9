use serde::{Deserialize, Serialize};

use super::sym::{check_dim, SymTensor};
use crate::error::{Error, Result};

/// Membership tolerance for index symmetries and the first Bianchi identity,
/// applied to residuals normalized by the largest entry.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// Dense `(0,4)` tensor, indexed `[((i·n + j)·n + k)·n + l]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank4 {
    n: usize,
    data: Vec<f64>,
}

impl Rank4 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n * n],
        }
    }

    pub fn from_entries(n: usize, data: Vec<f64>) -> Result<Self> {
        let expected = n * n * n * n;
        if data.len() != expected {
            return Err(Error::EntryCount {
                expected,
                got: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n * n * n);
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        data.push(f(i, j, k, l));
                    }
                }
            }
        }
        Self { n, data }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, k: usize, l: usize) -> usize {
        ((i * self.n + j) * self.n + k) * self.n + l
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.data[self.idx(i, j, k, l)]
    }

    pub fn entries(&self) -> &[f64] {
        &self.data
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    /// Unweighted full contraction `Σ Aᵢⱼₖₗ Bᵢⱼₖₗ`.
    pub fn contract(&self, other: &Self) -> Result<f64> {
        check_dim(self.n, other.n)?;
        Ok(self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum())
    }

    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|x| c * x).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        check_dim(self.n, other.n)?;
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { n: self.n, data })
    }

    /// Largest violation of `T_{ijkl} = −T_{jikl} = −T_{ijlk} = T_{klij}`,
    /// divided by `max |T|` (zero for the zero tensor).
    pub fn symmetry_residual(&self) -> f64 {
        let n = self.n;
        let mut r = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let t = self.get(i, j, k, l);
                        r = r
                            .max((t + self.get(j, i, k, l)).abs())
                            .max((t + self.get(i, j, l, k)).abs())
                            .max((t - self.get(k, l, i, j)).abs());
                    }
                }
            }
        }
        normalized(r, self.max_abs())
    }

    /// Largest `|T_{ijkl} + T_{jkil} + T_{kijl}|`, divided by `max |T|`.
    pub fn bianchi_residual(&self) -> f64 {
        let n = self.n;
        let mut r = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let s = self.get(i, j, k, l) + self.get(j, k, i, l) + self.get(k, i, j, l);
                        r = r.max(s.abs());
                    }
                }
            }
        }
        normalized(r, self.max_abs())
    }

    /// `Σ Q_{ia} Q_{jb} Q_{kc} Q_{ld} T_{abcd}` for a row-major `n × n` matrix `q`.
    pub fn conjugate(&self, q: &[f64]) -> Self {
        let n = self.n;
        let mut cur = self.data.clone();
        // Contract one slot at a time; `stride` is the distance between
        // consecutive values of the slot being transformed.
        for slot in 0..4 {
            let stride = n.pow(3 - slot as u32);
            let mut next = vec![0.0; cur.len()];
            for (pos, out) in next.iter_mut().enumerate() {
                let digit = (pos / stride) % n;
                let base = pos - digit * stride;
                *out = (0..n)
                    .map(|a| q[digit * n + a] * cur[base + a * stride])
                    .sum();
            }
            cur = next;
        }
        Self { n, data: cur }
    }

    /// Symmetric `m × m` matrix on `∧²V` over lexicographic pairs `i < j`,
    /// `M[(ij),(kl)] = T_{ijkl}`. In the basis `{eᵢ ∧ eⱼ}` this is the matrix
    /// of the first-kind operator `R̂(ω)ᵢⱼ = ½ Σ Rᵢⱼₖₗ ωₖₗ`.
    pub fn to_two_form_matrix(&self) -> Vec<f64> {
        let pairs = pairs(self.n);
        let m = pairs.len();
        let mut out = vec![0.0; m * m];
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                out[a * m + b] = self.get(i, j, k, l);
            }
        }
        out
    }

    /// Inverse of [`Rank4::to_two_form_matrix`]; the matrix is symmetrized,
    /// and the other entries are filled by antisymmetry in each pair.
    pub fn from_two_form_matrix(n: usize, matrix: &[f64]) -> Result<Self> {
        let pairs = pairs(n);
        let m = pairs.len();
        if matrix.len() != m * m {
            return Err(Error::EntryCount {
                expected: m * m,
                got: matrix.len(),
            });
        }
        let mut t = Self::zeros(n);
        for (a, &(i, j)) in pairs.iter().enumerate() {
            for (b, &(k, l)) in pairs.iter().enumerate() {
                let v = 0.5 * (matrix[a * m + b] + matrix[b * m + a]);
                for (p, q, s) in [(i, j, 1.0), (j, i, -1.0)] {
                    for (r, u, s2) in [(k, l, 1.0), (l, k, -1.0)] {
                        let id = t.idx(p, q, r, u);
                        t.data[id] = s * s2 * v;
                    }
                }
            }
        }
        Ok(t)
    }
}

fn normalized(residual: f64, scale: f64) -> f64 {
    if scale == 0.0 {
        0.0
    } else {
        residual / scale
    }
}

/// Lexicographic pairs `(i, j)`, `i < j`.
pub fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect()
}

/// Algebraic curvature tensor: a [`Rank4`] known to carry the pair
/// symmetries and satisfy the first Bianchi identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureTensor(Rank4);

impl CurvatureTensor {
    /// Validates symmetries and Bianchi at [`MEMBERSHIP_TOL`].
    pub fn new(t: Rank4) -> Result<Self> {
        let residual = t.symmetry_residual();
        if residual >= MEMBERSHIP_TOL {
            return Err(Error::SymmetryViolation { residual });
        }
        let residual = t.bianchi_residual();
        if residual >= MEMBERSHIP_TOL {
            return Err(Error::BianchiViolation { residual });
        }
        Ok(Self(t))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Rank4::zeros(n))
    }

    pub fn n(&self) -> usize {
        self.0.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize, l: usize) -> f64 {
        self.0.get(i, j, k, l)
    }

    pub fn as_rank4(&self) -> &Rank4 {
        &self.0
    }

    pub fn into_rank4(self) -> Rank4 {
        self.0
    }

    pub fn scale(&self, c: f64) -> Self {
        Self(self.0.scale(c))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.add(&other.0)?))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Ok(Self(self.0.sub(&other.0)?))
    }

    /// Pulls the tensor back through an orthogonal change of frame `q`.
    pub fn conjugate(&self, q: &[f64]) -> Self {
        Self(self.0.conjugate(q))
    }

    pub fn to_document(&self) -> TensorDocument {
        TensorDocument {
            n: self.n(),
            entries: self.0.data.clone(),
            representation: RANK4.to_string(),
        }
    }

    pub fn from_document(doc: &TensorDocument) -> Result<Self> {
        if doc.representation != RANK4 {
            return Err(Error::Format(format!(
                "unsupported representation {:?}, expected {RANK4:?}",
                doc.representation
            )));
        }
        Self::new(Rank4::from_entries(doc.n, doc.entries.clone())?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_document()).expect("tensor document serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: TensorDocument =
            serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        Self::from_document(&doc)
    }
}

const RANK4: &str = "rank4";

/// On-disk form of a curvature tensor: row-major flattened rank-4 entries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TensorDocument {
    pub n: usize,
    pub entries: Vec<f64>,
    pub representation: String,
}

/// `(A∧B)ᵢⱼₖₗ = AᵢₖBⱼₗ + AⱼₗBᵢₖ − AⱼₖBᵢₗ − AᵢₗBⱼₖ`.
pub fn kulkarni_nomizu(a: &SymTensor, b: &SymTensor) -> Result<CurvatureTensor> {
    check_dim(a.n(), b.n())?;
    let n = a.n();
    let t = Rank4::from_fn(n, |i, j, k, l| {
        a.get(i, k) * b.get(j, l) + a.get(j, l) * b.get(i, k)
            - a.get(j, k) * b.get(i, l)
            - a.get(i, l) * b.get(j, k)
    });
    Ok(CurvatureTensor(t))
}

/// Removes the totally antisymmetric part: `T − b(T)` with
/// `b(T)ᵢⱼₖₗ = (Tᵢⱼₖₗ + Tⱼₖᵢₗ + Tₖᵢⱼₗ) / 3`.
pub fn bianchi_project(t: &Rank4) -> Result<CurvatureTensor> {
    let residual = t.symmetry_residual();
    if residual >= MEMBERSHIP_TOL {
        return Err(Error::SymmetryViolation { residual });
    }
    let out = Rank4::from_fn(t.n, |i, j, k, l| {
        let cyc = (t.get(i, j, k, l) + t.get(j, k, i, l) + t.get(k, i, j, l)) / 3.0;
        t.get(i, j, k, l) - cyc
    });
    Ok(CurvatureTensor(out))
}

/// Full `(0,4)` contraction, the convention under which
/// `|R|² = |W|² + 2n(n−1)λ̄²` holds.
pub fn inner_product(a: &CurvatureTensor, b: &CurvatureTensor) -> Result<f64> {
    a.0.contract(&b.0)
}

pub fn norm_sq(r: &CurvatureTensor) -> f64 {
    r.0.norm_sq()
}
