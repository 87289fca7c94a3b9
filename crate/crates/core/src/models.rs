//! Named Einstein curvature tensors and a seeded random Einstein generator.

use std::fmt;
use std::str::FromStr;

use crate::curvature::{
    bianchi_project, decompose, kulkarni_nomizu, metric_product, norm_sq, CurvatureTensor, Rank4,
    SymTensor,
};
use crate::error::{Error, Result};
use crate::rng::SplitMix64;

/// `(κ/2) g∧g`: sectional curvature `κ`, `Ric = (n−1)κ g`.
pub fn constant_curvature(n: usize, kappa: f64) -> Result<CurvatureTensor> {
    if n < 2 {
        return Err(Error::DimensionTooSmall {
            n,
            min: 2,
            what: "constant curvature",
        });
    }
    Ok(metric_product(n).scale(kappa / 2.0))
}

/// Radius the second factor needs for `S^p(r1) × S^q(r2)` to be Einstein.
pub fn required_r2(p: usize, q: usize, r1: f64) -> f64 {
    r1 * ((q as f64 - 1.0) / (p as f64 - 1.0)).sqrt()
}

/// Block sum of round spheres `S^p(r1)` and `S^q(r2)`, Einstein exactly when
/// `(p−1)/r1² = (q−1)/r2²`.
pub fn product_spheres(p: usize, q: usize, r1: f64, r2: f64) -> Result<CurvatureTensor> {
    if p < 2 || q < 2 {
        return Err(Error::InvalidModel(format!(
            "product of spheres needs p, q >= 2 (got p={p}, q={q})"
        )));
    }
    if !(r1 > 0.0 && r2 > 0.0) {
        return Err(Error::InvalidModel("sphere radii must be positive".into()));
    }
    let c1 = (p as f64 - 1.0) / (r1 * r1);
    let c2 = (q as f64 - 1.0) / (r2 * r2);
    if (c1 - c2).abs() > 1e-12 * c1.max(c2) {
        return Err(Error::InvalidModel(format!(
            "S^{p}(r1={r1}) x S^{q}(r2={r2}) is not Einstein; Einstein needs r2 = {}",
            required_r2(p, q, r1)
        )));
    }
    let n = p + q;
    let first = SymTensor::from_fn(n, |i, j| if i == j && i < p { 1.0 } else { 0.0 });
    let second = SymTensor::from_fn(n, |i, j| if i == j && i >= p { 1.0 } else { 0.0 });
    let a = kulkarni_nomizu(&first, &first)?.scale(0.5 / (r1 * r1));
    let b = kulkarni_nomizu(&second, &second)?.scale(0.5 / (r2 * r2));
    a.add(&b)
}

/// Fubini–Study curvature on `ℂ^m ≅ ℝ^{2m}` with holomorphic sectional
/// curvature `c`. The complex structure is `J e_{2a} = e_{2a+1}`.
pub fn fubini_study(m: usize, c: f64) -> Result<CurvatureTensor> {
    if m < 2 {
        return Err(Error::InvalidModel(format!(
            "complex projective space needs m >= 2 (got {m}); m = 1 is the round 2-sphere"
        )));
    }
    let n = 2 * m;
    // jg(i, k) = g(J eᵢ, eₖ)
    let jg = |i: usize, k: usize| -> f64 {
        if i / 2 != k / 2 || i == k {
            0.0
        } else if i.is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    };
    let d = |i: usize, k: usize| if i == k { 1.0 } else { 0.0 };
    let t = Rank4::from_fn(n, |i, j, k, l| {
        0.25 * c
            * (d(i, k) * d(j, l) - d(i, l) * d(j, k) + jg(i, k) * jg(j, l) - jg(i, l) * jg(j, k)
                + 2.0 * jg(i, j) * jg(k, l))
    });
    CurvatureTensor::new(t)
}

/// Random Einstein tensor `amp·√(2n(n−1))·Ŵ + ½ g∧g`, where `Ŵ` is the
/// unit-norm Weyl part of a Bianchi-projected Gaussian element of `S²(∧²V)`.
///
/// `λ̄ = 1` and `Scal = n(n−1)`; at `amp = 1` the Weyl part carries half of
/// `|R|²`.
pub fn random_einstein(n: usize, seed: u64, weyl_amplitude: f64) -> Result<CurvatureTensor> {
    if n < 4 {
        return Err(Error::DimensionTooSmall {
            n,
            min: 4,
            what: "random Einstein tensor",
        });
    }
    let sphere = metric_product(n).scale(0.5);
    if weyl_amplitude == 0.0 {
        return Ok(sphere);
    }
    let mut rng = SplitMix64::stream(seed, n as u64);
    let m = n * (n - 1) / 2;
    let mut matrix = vec![0.0; m * m];
    for a in 0..m {
        for b in a..m {
            let v = rng.next_normal();
            matrix[a * m + b] = v;
            matrix[b * m + a] = v;
        }
    }
    let raw = Rank4::from_two_form_matrix(n, &matrix)?;
    let weyl = decompose(&bianchi_project(&raw)?)?.weyl;
    let unit = weyl.scale(1.0 / norm_sq(&weyl).sqrt());
    let amp = weyl_amplitude * (2.0 * (n * (n - 1)) as f64).sqrt();
    sphere.add(&unit.scale(amp))
}

/// Parsed model description, e.g. `sphere:n=4,k=1` or `random:n=5,seed=7,amp=1`.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    ConstantCurvature {
        n: usize,
        kappa: f64,
    },
    Flat {
        n: usize,
    },
    ProductSpheres {
        p: usize,
        q: usize,
        r1: f64,
        r2: f64,
    },
    FubiniStudy {
        m: usize,
        c: f64,
    },
    RandomEinstein {
        n: usize,
        seed: u64,
        amplitude: f64,
    },
}

impl ModelSpec {
    pub fn n(&self) -> usize {
        match *self {
            ModelSpec::ConstantCurvature { n, .. }
            | ModelSpec::Flat { n }
            | ModelSpec::RandomEinstein { n, .. } => n,
            ModelSpec::ProductSpheres { p, q, .. } => p + q,
            ModelSpec::FubiniStudy { m, .. } => 2 * m,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ModelSpec::ConstantCurvature { .. } => "constant_curvature",
            ModelSpec::Flat { .. } => "flat",
            ModelSpec::ProductSpheres { .. } => "product_spheres",
            ModelSpec::FubiniStudy { .. } => "fubini_study",
            ModelSpec::RandomEinstein { .. } => "random_einstein",
        }
    }

    /// Whether the model is a locally symmetric space (so `ΔR = 0`).
    pub fn is_symmetric_space(&self) -> bool {
        !matches!(self, ModelSpec::RandomEinstein { amplitude, .. } if *amplitude != 0.0)
    }

    pub fn build(&self) -> Result<CurvatureTensor> {
        match *self {
            ModelSpec::ConstantCurvature { n, kappa } => constant_curvature(n, kappa),
            ModelSpec::Flat { n } => constant_curvature(n, 0.0),
            ModelSpec::ProductSpheres { p, q, r1, r2 } => product_spheres(p, q, r1, r2),
            ModelSpec::FubiniStudy { m, c } => fubini_study(m, c),
            ModelSpec::RandomEinstein { n, seed, amplitude } => random_einstein(n, seed, amplitude),
        }
    }
}

struct Params<'a> {
    model: &'a str,
    pairs: Vec<(&'a str, &'a str)>,
}

impl<'a> Params<'a> {
    fn parse(model: &'a str, body: &'a str) -> Result<Self> {
        let mut pairs = Vec::new();
        for item in body.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item.split_once('=').ok_or_else(|| {
                Error::InvalidModel(format!("{model}: expected key=value, got {item:?}"))
            })?;
            pairs.push((k.trim(), v.trim()));
        }
        Ok(Self { model, pairs })
    }

    fn check_keys(&self, allowed: &[&str]) -> Result<()> {
        for (k, _) in &self.pairs {
            if !allowed.contains(k) {
                return Err(Error::InvalidModel(format!(
                    "{}: unknown parameter {k:?} (allowed: {})",
                    self.model,
                    allowed.join(", ")
                )));
            }
        }
        Ok(())
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.pairs.iter().rev().find(|(k, _)| *k == key) {
            None => Ok(None),
            Some((_, v)) => v.parse().map(Some).map_err(|_| {
                Error::InvalidModel(format!("{}: cannot parse {key}={v:?}", self.model))
            }),
        }
    }

    fn require<T: FromStr>(&self, key: &str) -> Result<T> {
        self.get(key)?
            .ok_or_else(|| Error::InvalidModel(format!("{}: missing parameter {key}", self.model)))
    }
}

impl FromStr for ModelSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, body) = s.split_once(':').unwrap_or((s, ""));
        let p = Params::parse(kind, body)?;
        let spec = match kind.trim() {
            "sphere" => {
                p.check_keys(&["n", "k"])?;
                ModelSpec::ConstantCurvature { n: p.require("n")?, kappa: p.get("k")?.unwrap_or(1.0) }
            }
            "flat" => {
                p.check_keys(&["n"])?;
                ModelSpec::Flat { n: p.require("n")? }
            }
            "s2xs2" => {
                p.check_keys(&[])?;
                ModelSpec::ProductSpheres { p: 2, q: 2, r1: 1.0, r2: 1.0 }
            }
            "products" => {
                p.check_keys(&["p", "q", "r1", "r2"])?;
                let (pp, q): (usize, usize) = (p.require("p")?, p.require("q")?);
                if pp < 2 || q < 2 {
                    return Err(Error::InvalidModel(format!(
                        "products: need p, q >= 2 (got p={pp}, q={q})"
                    )));
                }
                let r1 = p.get("r1")?.unwrap_or(1.0);
                let r2 = p.get("r2")?.unwrap_or_else(|| required_r2(pp, q, r1));
                ModelSpec::ProductSpheres { p: pp, q, r1, r2 }
            }
            "cpm" => {
                p.check_keys(&["m", "c"])?;
                ModelSpec::FubiniStudy { m: p.require("m")?, c: p.get("c")?.unwrap_or(4.0) }
            }
            "random" => {
                p.check_keys(&["n", "seed", "amp"])?;
                ModelSpec::RandomEinstein {
                    n: p.require("n")?,
                    seed: p.get("seed")?.unwrap_or(0),
                    amplitude: p.get("amp")?.unwrap_or(1.0),
                }
            }
            other => {
                return Err(Error::InvalidModel(format!(
                    "unknown model kind {other:?} (expected sphere, flat, s2xs2, products, cpm, random)"
                )))
            }
        };
        Ok(spec)
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelSpec::ConstantCurvature { n, kappa } => write!(f, "sphere:n={n},k={kappa}"),
            ModelSpec::Flat { n } => write!(f, "flat:n={n}"),
            ModelSpec::ProductSpheres { p, q, r1, r2 } => {
                write!(f, "products:p={p},q={q},r1={r1},r2={r2}")
            }
            ModelSpec::FubiniStudy { m, c } => write!(f, "cpm:m={m},c={c}"),
            ModelSpec::RandomEinstein { n, seed, amplitude } => {
                write!(f, "random:n={n},seed={seed},amp={amplitude}")
            }
        }
    }
}

/// One member of a verification corpus.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub spec: ModelSpec,
    pub tensor: CurvatureTensor,
}

/// Weyl amplitudes cycled through by [`standard_corpus`]; the small ones keep
/// `λ₁ ≥ −θ(n) λ̄` so the inequality chain is exercised under its hypothesis.
pub const CORPUS_AMPLITUDES: [f64; 5] = [0.002, 0.01, 0.1, 0.5, 1.0];

/// Named model spaces for dimensions 4 through 8.
pub fn named_models() -> Vec<ModelSpec> {
    let mut out: Vec<ModelSpec> = (4..=8)
        .map(|n| ModelSpec::ConstantCurvature { n, kappa: 1.0 })
        .collect();
    out.push(ModelSpec::ConstantCurvature { n: 5, kappa: 2.0 });
    out.push(ModelSpec::ConstantCurvature { n: 6, kappa: 0.25 });
    out.extend((4..=8).map(|n| ModelSpec::Flat { n }));
    for (p, q) in [
        (2, 2),
        (2, 3),
        (3, 3),
        (2, 4),
        (3, 4),
        (2, 5),
        (4, 4),
        (3, 5),
        (2, 6),
    ] {
        out.push(ModelSpec::ProductSpheres {
            p,
            q,
            r1: 1.0,
            r2: required_r2(p, q, 1.0),
        });
    }
    out.push(ModelSpec::FubiniStudy { m: 2, c: 4.0 });
    out.push(ModelSpec::FubiniStudy { m: 3, c: 4.0 });
    out.push(ModelSpec::FubiniStudy { m: 4, c: 1.0 });
    out
}

/// Named models followed by `random_count` random Einstein tensors spread
/// round-robin over `n ∈ {4,…,8}` and [`CORPUS_AMPLITUDES`].
pub fn standard_corpus(random_count: usize, seed: u64) -> Result<Vec<CorpusEntry>> {
    let mut specs = named_models();
    for i in 0..random_count {
        specs.push(ModelSpec::RandomEinstein {
            n: 4 + i % 5,
            seed: seed.wrapping_add(i as u64),
            amplitude: CORPUS_AMPLITUDES[(i / 5) % CORPUS_AMPLITUDES.len()],
        });
    }
    specs
        .into_iter()
        .map(|spec| {
            Ok(CorpusEntry {
                tensor: spec.build()?,
                spec,
            })
        })
        .collect()
}
