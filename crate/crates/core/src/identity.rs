//! Executable checks of the pointwise identities and inequalities satisfied
//! by Einstein curvature tensors, together with the cubic `f(λ)` they feed.

use std::fmt::Write as _;

use num_traits::{FromPrimitive, Num};
use serde::{Deserialize, Serialize};

use crate::curvature::{
    decompose, einstein_defect, is_einstein, norm_sq, CurvatureTensor, RiemannDecomposition,
};
use crate::error::{Error, Result};
use crate::second_kind::{
    second_kind_matrix, sjw_norms_with_eigenbasis, spectrum_from_eigen, traceless_dim,
    SecondKindOperator, SjwNorms, Spectrum,
};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Below `NOISE_FLOOR · scale` a right-hand side is treated as zero and the
/// comparison switches from relative to scaled-absolute error.
pub const NOISE_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub lhs: f64,
    pub rhs: f64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub pass: bool,
    pub tolerance: f64,
    /// `lhs − rhs` for inequality checks of the form `lhs ≥ rhs`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slack: Option<f64>,
}

impl IdentityReport {
    /// Equality `lhs == rhs`; `scale` is the natural magnitude of both sides.
    pub fn equality(name: &str, lhs: f64, rhs: f64, tolerance: f64, scale: f64) -> Self {
        let abs_err = (lhs - rhs).abs();
        let (rel_err, pass) = if rhs.abs() > NOISE_FLOOR * scale {
            let rel = abs_err / rhs.abs();
            (rel, rel <= tolerance)
        } else {
            let rel = if scale > 0.0 { abs_err / scale } else { 0.0 };
            (rel, abs_err <= tolerance * scale)
        };
        Self {
            name: name.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            pass,
            tolerance,
            slack: None,
        }
    }

    /// Inequality `lhs ≥ rhs`, accepted down to `−tolerance · scale`.
    pub fn at_least(name: &str, lhs: f64, rhs: f64, tolerance: f64, scale: f64) -> Self {
        let slack = lhs - rhs;
        let abs_err = (-slack).max(0.0);
        let rel_err = if scale > 0.0 {
            abs_err / scale
        } else {
            abs_err
        };
        let pass = slack >= -tolerance * scale;
        Self {
            name: name.into(),
            lhs,
            rhs,
            abs_err,
            rel_err,
            pass,
            tolerance,
            slack: Some(slack),
        }
    }
}

/// Result of one named check.
#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Checked(IdentityReport),
    NotApplicable { name: String, reason: String },
}

impl Outcome {
    pub fn name(&self) -> &str {
        match self {
            Outcome::Checked(r) => &r.name,
            Outcome::NotApplicable { name, .. } => name,
        }
    }

    pub fn report(&self) -> Option<&IdentityReport> {
        match self {
            Outcome::Checked(r) => Some(r),
            Outcome::NotApplicable { .. } => None,
        }
    }

    /// Failed only if checked and not passing.
    pub fn failed(&self) -> bool {
        matches!(self, Outcome::Checked(r) if !r.pass)
    }
}

/// Everything the checks need, computed once per tensor.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub n: usize,
    pub tensor: CurvatureTensor,
    pub decomposition: RiemannDecomposition,
    pub operator: SecondKindOperator,
    pub spectrum: Spectrum,
    pub sjw: SjwNorms,
    pub einstein: bool,
    pub einstein_defect: f64,
}

impl Analysis {
    pub fn new(r: &CurvatureTensor) -> Result<Self> {
        let decomposition = decompose(r)?;
        let operator = second_kind_matrix(r);
        let eigen = operator.eigen()?;
        let spectrum = spectrum_from_eigen(&operator, &eigen);
        let sjw = sjw_norms_with_eigenbasis(
            &decomposition.weyl,
            &operator.basis,
            &eigen.values,
            &eigen.vectors,
        );
        Ok(Self {
            n: r.n(),
            tensor: r.clone(),
            decomposition,
            operator,
            spectrum,
            sjw,
            einstein: is_einstein(r),
            einstein_defect: einstein_defect(r),
        })
    }

    fn nf(&self) -> f64 {
        self.n as f64
    }

    fn lambda_bar(&self) -> f64 {
        self.spectrum.mean
    }

    fn norm_r(&self) -> f64 {
        norm_sq(&self.tensor)
    }

    /// `max(|λ̄|, λ_rms)³`, the scale of cubic comparisons.
    pub fn cubic_scale(&self) -> f64 {
        self.lambda_bar().abs().max(self.spectrum.rms()).powi(3)
    }

    fn require_einstein(&self, name: &str) -> std::result::Result<(), Outcome> {
        if self.einstein {
            Ok(())
        } else {
            Err(Outcome::NotApplicable {
                name: name.into(),
                reason: format!(
                    "not Einstein (|Ric0|/|Ric| = {})",
                    format_sig(self.einstein_defect, 3)
                ),
            })
        }
    }

    /// `λ̄ > 0` and `λ₁ ≥ −θλ̄`.
    fn require_lower_bound(&self, name: &str, theta: f64) -> std::result::Result<(), Outcome> {
        self.require_einstein(name)?;
        let lb = self.lambda_bar();
        if self.spectrum.is_flat_like() || lb <= 0.0 {
            return Err(Outcome::NotApplicable {
                name: name.into(),
                reason: format!("needs mean eigenvalue > 0 (got {})", format_sig(lb, 6)),
            });
        }
        if self.spectrum.min() < -theta * lb {
            return Err(Outcome::NotApplicable {
                name: name.into(),
                reason: format!(
                    "lambda_1/lambda_bar = {} < -theta = {}",
                    format_sig(self.spectrum.min() / lb, 6),
                    format_sig(-theta, 6)
                ),
            });
        }
        Ok(())
    }

    /// `tr R̊ = (n+2)/(2n) · Scal`; holds for every curvature tensor.
    pub fn trace_identity(&self) -> Outcome {
        let lhs = self.operator.trace();
        let rhs = self.operator.expected_trace();
        let scale = rhs.abs().max(self.operator.frobenius());
        Outcome::Checked(IdentityReport::equality(
            "trace_identity",
            lhs,
            rhs,
            DEFAULT_TOL,
            scale,
        ))
    }

    /// `Scal = n(n−1) λ̄`.
    pub fn scal_identity(&self) -> Outcome {
        const NAME: &str = "scal_identity";
        if let Err(na) = self.require_einstein(NAME) {
            return na;
        }
        let n = self.nf();
        let lhs = self.decomposition.scalar;
        let rhs = n * (n - 1.0) * self.lambda_bar();
        let scale = n * (n - 1.0) * self.lambda_bar().abs().max(self.spectrum.rms());
        Outcome::Checked(IdentityReport::equality(NAME, lhs, rhs, DEFAULT_TOL, scale))
    }

    /// `|R|² = |W|² + 2n(n−1) λ̄²`.
    pub fn norm_identity(&self) -> Outcome {
        const NAME: &str = "norm_identity";
        if let Err(na) = self.require_einstein(NAME) {
            return na;
        }
        let n = self.nf();
        let lhs = self.norm_r();
        let rhs =
            norm_sq(&self.decomposition.weyl) + 2.0 * n * (n - 1.0) * self.lambda_bar().powi(2);
        Outcome::Checked(IdentityReport::equality(NAME, lhs, rhs, DEFAULT_TOL, lhs))
    }

    /// `Σλⱼ² = ¾|R|² − (n−1)² λ̄²`.
    pub fn sum_sq_identity(&self) -> Outcome {
        const NAME: &str = "sum_sq_identity";
        if let Err(na) = self.require_einstein(NAME) {
            return na;
        }
        let n = self.nf();
        let lhs = self.spectrum.sum_sq();
        let rhs = 0.75 * self.norm_r() - (n - 1.0).powi(2) * self.lambda_bar().powi(2);
        Outcome::Checked(IdentityReport::equality(
            NAME,
            lhs,
            rhs,
            DEFAULT_TOL,
            self.norm_r(),
        ))
    }

    /// `(4/3)Σλⱼ² − (2/3)(n−1)(n+2) λ̄²`, which equals `|W|²` for Einstein tensors.
    pub fn weyl_from_spectrum(&self) -> Result<f64> {
        if !self.einstein {
            return Err(Error::NotEinstein {
                ratio: self.einstein_defect,
            });
        }
        let n = self.nf();
        Ok(4.0 / 3.0 * self.spectrum.sum_sq()
            - 2.0 / 3.0 * (n - 1.0) * (n + 2.0) * self.lambda_bar().powi(2))
    }

    pub fn weyl_spectrum_identity(&self) -> Outcome {
        const NAME: &str = "weyl_from_spectrum";
        let lhs = match self.weyl_from_spectrum() {
            Ok(v) => v,
            Err(_) => return self.require_einstein(NAME).unwrap_err(),
        };
        let rhs = norm_sq(&self.decomposition.weyl);
        Outcome::Checked(IdentityReport::equality(
            NAME,
            lhs,
            rhs,
            DEFAULT_TOL,
            self.norm_r(),
        ))
    }

    /// `Σⱼ|SʲW|² = 2(n²+n−8)/n · |W|²`.
    pub fn sjw_sum_identity(&self) -> Outcome {
        const NAME: &str = "sjw_sum_identity";
        if let Err(na) = self.require_einstein(NAME) {
            return na;
        }
        let n = self.nf();
        let ratio = 2.0 * (n * n + n - 8.0) / n;
        let lhs = self.sjw.sum();
        let rhs = ratio * norm_sq(&self.decomposition.weyl);
        let scale = ratio * self.norm_r();
        Outcome::Checked(IdentityReport::equality(NAME, lhs, rhs, DEFAULT_TOL, scale))
    }

    /// Algebraic value of `3<ΔR, R>` on an Einstein manifold, with `Scal`
    /// replaced by `n(n−1)λ̄`.
    pub fn dai_fu_rhs(&self) -> Result<f64> {
        if !self.einstein {
            return Err(Error::NotEinstein {
                ratio: self.einstein_defect,
            });
        }
        let n = self.nf();
        let lb = self.lambda_bar();
        let s2 = self.spectrum.sum_sq();
        let s3 = self.spectrum.sum_cube();
        Ok(self.sjw.weighted_sum()
            + 8.0 * (n - 1.0) / (3.0 * n)
                * (-n.powi(3) + 6.0 * n * n + 12.0 * n - 8.0)
                * lb.powi(3)
            + 8.0 * (2.0 * n * n - 22.0 * n + 8.0) / (3.0 * n) * lb * s2
            + 16.0 * s3)
    }

    /// `dai_fu_rhs == 0`, expected on locally symmetric spaces.
    pub fn dai_fu_vanishes(&self) -> Outcome {
        const NAME: &str = "dai_fu_vanishes";
        let lhs = match self.dai_fu_rhs() {
            Ok(v) => v,
            Err(_) => return self.require_einstein(NAME).unwrap_err(),
        };
        let scale = self.cubic_scale();
        Outcome::Checked(IdentityReport::equality(
            NAME,
            lhs,
            0.0,
            10.0 * DEFAULT_TOL,
            scale,
        ))
    }

    /// `Σⱼ λⱼ|SʲW|² ≥ −(8(n²+n−8)/3n) θ λ̄ Σλⱼ² + (4(n²+n−8)(n−1)(n+2)/3n) θ λ̄³`.
    pub fn sjw_lower_bound(&self, theta: f64) -> Outcome {
        const NAME: &str = "sjw_lower_bound";
        if let Err(na) = self.require_lower_bound(NAME, theta) {
            return na;
        }
        let n = self.nf();
        let c = n * n + n - 8.0;
        let lb = self.lambda_bar();
        let lhs = self.sjw.weighted_sum();
        let rhs = -8.0 * c / (3.0 * n) * theta * lb * self.spectrum.sum_sq()
            + 4.0 * c * (n - 1.0) * (n + 2.0) / (3.0 * n) * theta * lb.powi(3);
        Outcome::Checked(IdentityReport::at_least(
            NAME,
            lhs,
            rhs,
            DEFAULT_TOL,
            self.cubic_scale(),
        ))
    }

    /// `dai_fu_rhs ≥ (16/3n) f(λ)`.
    pub fn chain_inequality(&self, theta: f64) -> Outcome {
        const NAME: &str = "chain_inequality";
        if let Err(na) = self.require_lower_bound(NAME, theta) {
            return na;
        }
        let n = self.nf();
        let lhs = self.dai_fu_rhs().expect("Einstein checked");
        let rhs = 16.0 / (3.0 * n) * f_lambda(&self.spectrum, theta).expect("length matches");
        Outcome::Checked(IdentityReport::at_least(
            NAME,
            lhs,
            rhs,
            DEFAULT_TOL,
            self.cubic_scale(),
        ))
    }

    /// All checks in a fixed order. `symmetric_space` adds the vanishing of
    /// `dai_fu_rhs`.
    pub fn verify_all(&self, theta: f64, symmetric_space: bool) -> Vec<Outcome> {
        let mut out = vec![
            self.trace_identity(),
            self.scal_identity(),
            self.norm_identity(),
            self.sum_sq_identity(),
            self.weyl_spectrum_identity(),
            self.sjw_sum_identity(),
            self.sjw_lower_bound(theta),
            self.chain_inequality(theta),
        ];
        if symmetric_space {
            out.push(self.dai_fu_vanishes());
        }
        out
    }
}

fn analyze_or_na(r: &CurvatureTensor, name: &str) -> std::result::Result<Analysis, Outcome> {
    Analysis::new(r).map_err(|e| Outcome::NotApplicable {
        name: name.into(),
        reason: e.to_string(),
    })
}

pub fn check_scal_identity(r: &CurvatureTensor) -> Outcome {
    analyze_or_na(r, "scal_identity").map_or_else(|na| na, |a| a.scal_identity())
}

pub fn check_norm_identity(r: &CurvatureTensor) -> Outcome {
    analyze_or_na(r, "norm_identity").map_or_else(|na| na, |a| a.norm_identity())
}

pub fn check_sum_sq_identity(r: &CurvatureTensor) -> Outcome {
    analyze_or_na(r, "sum_sq_identity").map_or_else(|na| na, |a| a.sum_sq_identity())
}

pub fn check_sjw_lower_bound(r: &CurvatureTensor, theta: f64) -> Outcome {
    analyze_or_na(r, "sjw_lower_bound").map_or_else(|na| na, |a| a.sjw_lower_bound(theta))
}

pub fn weyl_from_spectrum(r: &CurvatureTensor) -> Result<f64> {
    Analysis::new(r)?.weyl_from_spectrum()
}

pub fn dai_fu_rhs(r: &CurvatureTensor) -> Result<f64> {
    Analysis::new(r)?.dai_fu_rhs()
}

/// `f(λ) = [N(N−3)θ − (2N−9n+6)N] λ̄³ + [(2N−12n+6) − (N−3)θ] λ̄ Σλⱼ² + 3n Σλⱼ³`
/// over any numeric field, so the same code runs in `f64` and exact rationals.
pub fn cubic_objective<T>(lambda: &[T], n: usize, theta: &T) -> Result<T>
where
    T: Clone + Num + FromPrimitive,
{
    let dim = traceless_dim(n);
    if lambda.len() != dim {
        return Err(Error::EntryCount {
            expected: dim,
            got: lambda.len(),
        });
    }
    let int = |v: i64| T::from_i64(v).expect("small integer");
    let (nn, ni) = (dim as i64, n as i64);
    let sum = lambda.iter().cloned().fold(T::zero(), |a, x| a + x);
    let mean = sum / int(nn);
    let s2 = lambda
        .iter()
        .cloned()
        .fold(T::zero(), |a, x| a + x.clone() * x);
    let s3 = lambda
        .iter()
        .cloned()
        .fold(T::zero(), |a, x| a + x.clone() * x.clone() * x);
    let c3 = int(nn * (nn - 3)) * theta.clone() - int((2 * nn - 9 * ni + 6) * nn);
    let c1 = int(2 * nn - 12 * ni + 6) - int(nn - 3) * theta.clone();
    let mean3 = mean.clone() * mean.clone() * mean.clone();
    Ok(c3 * mean3 + c1 * mean * s2 + int(3 * ni) * s3)
}

pub fn f_lambda(spectrum: &Spectrum, theta: f64) -> Result<f64> {
    cubic_objective(&spectrum.eigenvalues, spectrum.n, &theta)
}

/// One JSON object per line.
pub fn to_json_lines(reports: &[IdentityReport]) -> String {
    reports
        .iter()
        .map(|r| serde_json::to_string(r).expect("report serializes") + "\n")
        .collect()
}

/// Aligned text table of outcomes; floats at 6 significant digits.
pub fn render_table(outcomes: &[Outcome]) -> String {
    let width = outcomes
        .iter()
        .map(|o| o.name().len())
        .max()
        .unwrap_or(4)
        .max(4);
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<width$}  {:>13}  {:>13}  {:>11}  {:>11}  {:>9}  status",
        "name", "lhs", "rhs", "abs_err", "rel_err", "tol"
    );
    for o in outcomes {
        match o {
            Outcome::Checked(r) => {
                let _ = writeln!(
                    s,
                    "{:<width$}  {:>13}  {:>13}  {:>11}  {:>11}  {:>9}  {}",
                    r.name,
                    format_sig(r.lhs, 6),
                    format_sig(r.rhs, 6),
                    format_sig(r.abs_err, 3),
                    format_sig(r.rel_err, 3),
                    format_sig(r.tolerance, 2),
                    if r.pass { "pass" } else { "FAIL" }
                );
            }
            Outcome::NotApplicable { name, reason } => {
                let _ = writeln!(s, "{name:<width$}  n/a: {reason}");
            }
        }
    }
    s
}

/// `%g`-style formatting with `digits` significant digits.
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exp = x.abs().log10().floor() as i32;
    if exp < -4 || exp >= digits as i32 {
        let s = format!("{:.*e}", digits.saturating_sub(1), x);
        // trim mantissa zeros: 1.50000e3 -> 1.5e3
        match s.split_once('e') {
            Some((m, e)) if m.contains('.') => {
                format!("{}e{}", m.trim_end_matches('0').trim_end_matches('.'), e)
            }
            _ => s,
        }
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        let s = format!("{:.*}", decimals, x);
        if s.contains('.') {
            s.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::metric_product;
    use crate::models::{constant_curvature, product_spheres};

    fn passed(o: Outcome) -> IdentityReport {
        match o {
            Outcome::Checked(r) => {
                assert!(r.pass, "{r:?}");
                r
            }
            other => panic!("expected a checked outcome, got {other:?}"),
        }
    }

    #[test]
    fn sphere_identities() {
        let a = Analysis::new(&constant_curvature(5, 1.0).unwrap()).unwrap();
        let r = passed(a.scal_identity());
        assert!((r.lhs - 20.0).abs() < 1e-12 && (r.rhs - 20.0).abs() < 1e-12);
        let a = Analysis::new(&constant_curvature(4, 1.0).unwrap()).unwrap();
        let r = passed(a.norm_identity());
        assert!((r.lhs - 24.0).abs() < 1e-12);
        let r = passed(a.sum_sq_identity());
        assert!((r.lhs - 9.0).abs() < 1e-12);
        assert!(a.weyl_from_spectrum().unwrap().abs() < 1e-12);
        assert!(a.dai_fu_rhs().unwrap().abs() < 1e-10);
        let r = passed(a.sjw_lower_bound(1.0 / 11.0));
        assert!(r.slack.unwrap().abs() < 1e-10);
    }

    #[test]
    fn zero_tensor_identities() {
        let a = Analysis::new(&CurvatureTensor::zeros(4)).unwrap();
        for o in [
            a.scal_identity(),
            a.norm_identity(),
            a.sum_sq_identity(),
            a.sjw_sum_identity(),
        ] {
            let r = passed(o);
            assert_eq!((r.lhs, r.rhs), (0.0, 0.0));
        }
        assert_eq!(a.dai_fu_rhs().unwrap(), 0.0);
        assert!(matches!(
            a.sjw_lower_bound(0.1),
            Outcome::NotApplicable { .. }
        ));
    }

    #[test]
    fn product_sphere_scal_and_dai_fu() {
        let a = Analysis::new(&product_spheres(2, 2, 1.0, 1.0).unwrap()).unwrap();
        let r = passed(a.scal_identity());
        assert!((r.lhs - 4.0).abs() < 1e-12);
        assert!((a.spectrum.mean - 1.0 / 3.0).abs() < 1e-14);
        passed(a.dai_fu_vanishes());
        passed(a.weyl_spectrum_identity());
        // λ₁ = −1 violates λ₁ ≥ −θλ̄ for θ(4) = 1/11
        assert!(matches!(
            a.chain_inequality(1.0 / 11.0),
            Outcome::NotApplicable { .. }
        ));
    }

    #[test]
    fn non_einstein_is_not_applicable() {
        use crate::curvature::{kulkarni_nomizu, SymTensor};
        let a0 = SymTensor::diag(&[1.0, -1.0, 0.5, -0.5]);
        let r = metric_product(4)
            .scale(0.5)
            .add(&kulkarni_nomizu(&a0, &SymTensor::metric(4)).unwrap())
            .unwrap();
        for o in [
            check_scal_identity(&r),
            check_norm_identity(&r),
            check_sum_sq_identity(&r),
        ] {
            assert!(matches!(o, Outcome::NotApplicable { .. }), "{o:?}");
        }
        assert!(matches!(dai_fu_rhs(&r), Err(Error::NotEinstein { .. })));
        assert!(matches!(
            weyl_from_spectrum(&r),
            Err(Error::NotEinstein { .. })
        ));
        // the trace identity has no Einstein hypothesis
        passed(Analysis::new(&r).unwrap().trace_identity());
    }

    #[test]
    fn f_of_constant_spectrum_vanishes() {
        for n in 4..=9 {
            let dim = traceless_dim(n);
            for theta in [0.0_f64, 0.3, 1.7] {
                let v = cubic_objective(&vec![1.0; dim], n, &theta).unwrap();
                assert!(v.abs() < 1e-9, "n={n} theta={theta} f={v}");
            }
        }
        assert!(cubic_objective(&[1.0; 3], 4, &0.0).is_err());
    }

    #[test]
    fn equality_report_rules() {
        let r = IdentityReport::equality("x", 1.0 + 1e-12, 1.0, 1e-9, 1.0);
        assert!(r.pass && r.rel_err < 1e-11);
        let r = IdentityReport::equality("x", 1.1, 1.0, 1e-9, 1.0);
        assert!(!r.pass);
        let r = IdentityReport::equality("x", 1e-30, 1e-31, 1e-9, 10.0);
        assert!(r.pass);
        let r = IdentityReport::at_least("y", 0.0, 1e-3, 1e-9, 1.0);
        assert!(!r.pass && r.slack == Some(-1e-3));
    }

    #[test]
    fn table_and_json_lines() {
        let a = Analysis::new(&constant_curvature(4, 1.0).unwrap()).unwrap();
        let outcomes = a.verify_all(1.0 / 11.0, true);
        let table = render_table(&outcomes);
        assert!(table.lines().count() == outcomes.len() + 1);
        assert!(table.contains("scal_identity"));
        let reports: Vec<IdentityReport> = outcomes
            .iter()
            .filter_map(|o| o.report().cloned())
            .collect();
        let lines = to_json_lines(&reports);
        for (line, r) in lines.lines().zip(&reports) {
            let back: IdentityReport = serde_json::from_str(line).unwrap();
            assert_eq!(&back, r);
        }
    }

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(1.0 / 11.0, 6), "0.0909091");
        assert_eq!(format_sig(123456789.0, 6), "1.23457e8");
        assert_eq!(format_sig(-2.5e-7, 3), "-2.5e-7");
        assert_eq!(format_sig(0.0, 6), "0");
    }
}
