use super::rank4::{kulkarni_nomizu, CurvatureTensor};
use super::sym::SymTensor;
use crate::error::{Error, Result};

/// Irreducible pieces of a curvature tensor:
/// `R = W + Ric∧g/(n−2) − Scal/(2(n−1)(n−2)) g∧g`.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannDecomposition {
    pub n: usize,
    pub weyl: CurvatureTensor,
    pub ricci: SymTensor,
    pub scalar: f64,
}

impl RiemannDecomposition {
    pub fn recompose(&self) -> CurvatureTensor {
        let n = self.n as f64;
        let g = SymTensor::metric(self.n);
        let ric_g = kulkarni_nomizu(&self.ricci, &g).expect("same dimension");
        let gg = kulkarni_nomizu(&g, &g).expect("same dimension");
        self.weyl
            .add(&ric_g.scale(1.0 / (n - 2.0)))
            .and_then(|r| r.sub(&gg.scale(self.scalar / (2.0 * (n - 1.0) * (n - 2.0)))))
            .expect("same dimension")
    }

    /// Traceless Ricci `Ric₀ = Ric − (Scal/n) g`.
    pub fn traceless_ricci(&self) -> SymTensor {
        self.ricci.traceless()
    }
}

/// `Ric_{jl} = Σᵢ R_{ijil}`.
pub fn ricci(r: &CurvatureTensor) -> SymTensor {
    let n = r.n();
    SymTensor::from_fn(n, |j, l| (0..n).map(|i| r.get(i, j, i, l)).sum())
}

pub fn scalar_curvature(r: &CurvatureTensor) -> f64 {
    ricci(r).trace()
}

pub fn decompose(r: &CurvatureTensor) -> Result<RiemannDecomposition> {
    let n = r.n();
    if n < 3 {
        return Err(Error::DimensionTooSmall {
            n,
            min: 3,
            what: "Weyl decomposition",
        });
    }
    let ric = ricci(r);
    let scal = ric.trace();
    let nf = n as f64;
    let g = SymTensor::metric(n);
    let ric_g = kulkarni_nomizu(&ric, &g)?;
    let gg = kulkarni_nomizu(&g, &g)?;
    let weyl = r
        .sub(&ric_g.scale(1.0 / (nf - 2.0)))?
        .add(&gg.scale(scal / (2.0 * (nf - 1.0) * (nf - 2.0))))?;
    Ok(RiemannDecomposition {
        n,
        weyl,
        ricci: ric,
        scalar: scal,
    })
}

/// Threshold on `|Ric₀| / |Ric|` below which a tensor counts as Einstein.
pub const EINSTEIN_TOL: f64 = 1e-9;

/// `|Ric₀| / |Ric|`, or `0` when both vanish.
pub fn einstein_defect(r: &CurvatureTensor) -> f64 {
    let ric = ricci(r);
    let r0 = ric.traceless().norm();
    let scale = ric.norm();
    if r0 == 0.0 {
        0.0
    } else if scale == 0.0 {
        f64::INFINITY
    } else {
        r0 / scale
    }
}

/// Einstein up to [`EINSTEIN_TOL`]. Ricci-flat tensors also qualify when the
/// residual `|Ric₀|` is rounding noise relative to `max |R|`.
pub fn is_einstein(r: &CurvatureTensor) -> bool {
    let ric = ricci(r);
    let r0 = ric.traceless().norm();
    r0 <= EINSTEIN_TOL * ric.norm() || r0 <= 1e-12 * r.as_rank4().max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_curvature_parts() {
        let g = SymTensor::metric(4);
        let kappa = 1.5;
        let r = kulkarni_nomizu(&g, &g).unwrap().scale(kappa / 2.0);
        let d = decompose(&r).unwrap();
        assert!(d.weyl.as_rank4().max_abs() < 1e-14);
        assert!((d.scalar - 12.0 * kappa).abs() < 1e-12);
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 3.0 * kappa } else { 0.0 };
                assert!((d.ricci.get(i, j) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn zero_tensor_has_zero_parts() {
        let d = decompose(&CurvatureTensor::zeros(5)).unwrap();
        assert_eq!(d.scalar, 0.0);
        assert_eq!(d.weyl.as_rank4().max_abs(), 0.0);
        assert!(is_einstein(&CurvatureTensor::zeros(5)));
    }

    #[test]
    fn low_dimension_rejected() {
        assert!(matches!(
            decompose(&CurvatureTensor::zeros(2)),
            Err(Error::DimensionTooSmall { n: 2, .. })
        ));
    }

    #[test]
    fn removing_traceless_ricci_gives_einstein() {
        let n = 5;
        let g = SymTensor::metric(n);
        let a0 = SymTensor::from_fn(n, |i, j| ((i * 3 + j * 7) % 5) as f64 - 1.7).traceless();
        let r = kulkarni_nomizu(&g, &g)
            .unwrap()
            .scale(0.5)
            .add(&kulkarni_nomizu(&a0, &g).unwrap())
            .unwrap();
        assert!(!is_einstein(&r));
        let fixed = r.sub(&kulkarni_nomizu(&a0, &g).unwrap()).unwrap();
        assert!(is_einstein(&fixed));
        assert!(einstein_defect(&fixed) < 1e-12);
    }
}
