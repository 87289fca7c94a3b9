//! The threshold `θ(n)` and the minimization of the cubic `f(λ)` over
//! spectra with mean one and entries bounded below by `−θ`.
//!
//! Everything except the sampling oracle runs in exact rationals. In shifted
//! coordinates `x = λ + θ`, `t = 1 + θ`, the feasible set is the simplex
//! `Σx = Nt, x ≥ 0`, and `f(λ) = C(n,t) + 3n F(x)` with
//! `F(x) = −3A t Σx² + Σx³`, `A = 1 − (N−2)/(3(N−1))`.

mod oracle;

pub use oracle::{brute_force_min, Conclusion, ExtremumReport, OracleConfig, RationalString};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::identity::cubic_objective;
use crate::rational::to_f64;
use crate::second_kind::{traceless_dim, Spectrum};

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `θ(n)` for `n ≥ 4`, exact and as the nearest `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct Threshold {
    pub n: usize,
    pub dim: usize,
    pub exact: BigRational,
    pub value: f64,
}

/// `θ(n) = 3(N−1)(N+1−n) / ((N−1)(N−3) + 3n(N−2)) − 1`.
pub fn theta(n: usize) -> Result<Threshold> {
    if n < 4 {
        return Err(Error::DimensionTooSmall {
            n,
            min: 4,
            what: "threshold theta(n)",
        });
    }
    let dim = traceless_dim(n);
    let (nn, ni) = (dim as i64, n as i64);
    let num = BigInt::from(3) * BigInt::from(nn - 1) * BigInt::from(nn + 1 - ni);
    let den =
        BigInt::from(nn - 1) * BigInt::from(nn - 3) + BigInt::from(3 * ni) * BigInt::from(nn - 2);
    let exact = BigRational::new(num, den) - BigRational::one();
    let value = to_f64(&exact);
    Ok(Threshold {
        n,
        dim,
        exact,
        value,
    })
}

/// `λᵐ` scaled to mean one: `m` entries at `−θ`, the rest at `(N+mθ)/(N−m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePoint {
    pub m: usize,
    pub lambda: Vec<BigRational>,
    pub f_value: BigRational,
}

impl CandidatePoint {
    pub fn lambda_f64(&self) -> Vec<f64> {
        self.lambda.iter().map(to_f64).collect()
    }
}

fn check_m(n: usize, m: usize) -> Result<usize> {
    let dim = traceless_dim(n);
    if m >= dim {
        return Err(Error::OutOfRange {
            what: "m",
            value: m as i64,
            range: format!("0..={}", dim - 1),
        });
    }
    Ok(dim)
}

pub fn candidate_lambda_m(n: usize, theta: &BigRational, m: usize) -> Result<CandidatePoint> {
    let dim = check_m(n, m)?;
    let rest = (int(dim as i64) + int(m as i64) * theta) / int((dim - m) as i64);
    let mut lambda = vec![-theta.clone(); m];
    lambda.extend(std::iter::repeat_n(rest, dim - m));
    let f_value = cubic_objective(&lambda, n, theta)?;
    Ok(CandidatePoint { m, lambda, f_value })
}

/// `f(λᵐ)/λ̄³ = (mNt²/(N−m)) [3(N+1−n) − (N−3 + 3n(N−2m)/(N−m)) t]`.
pub fn f_lambda_m_closed_form(n: usize, theta: &BigRational, m: usize) -> Result<BigRational> {
    let dim = check_m(n, m)?;
    let (nn, ni, mi) = (dim as i64, n as i64, m as i64);
    let t = BigRational::one() + theta;
    let prefactor = int(mi * nn) * &t * &t / int(nn - mi);
    let slope =
        int(nn - 3) + BigRational::new(BigInt::from(3 * ni * (nn - 2 * mi)), BigInt::from(nn - mi));
    Ok(prefactor * (int(3 * (nn + 1 - ni)) - slope * t))
}

/// All candidate values `f(λᵐ)`, `m = 0…N−1`.
pub fn candidates(n: usize, theta: &BigRational) -> Result<Vec<CandidatePoint>> {
    (0..traceless_dim(n))
        .map(|m| candidate_lambda_m(n, theta, m))
        .collect()
}

/// `A = 1 − (N−2)/(3(N−1))`.
pub fn lagrange_a(n: usize) -> BigRational {
    let dim = traceless_dim(n) as i64;
    BigRational::one() - BigRational::new(BigInt::from(dim - 2), BigInt::from(3 * (dim - 1)))
}

/// `F(x) = −(3 − (N−2)/(N−1)) t Σxⱼ² + Σxⱼ³`.
pub fn shifted_objective(n: usize, t: &BigRational, x: &[BigRational]) -> BigRational {
    split_objective(&lagrange_a(n), t, x)
}

/// `−3A t Σx² + Σx³` for an arbitrary coefficient `A`.
pub fn split_objective(a: &BigRational, t: &BigRational, x: &[BigRational]) -> BigRational {
    let s2 = x.iter().fold(BigRational::zero(), |s, v| s + v * v);
    let s3 = x.iter().fold(BigRational::zero(), |s, v| s + v * v * v);
    -(int(3) * a * t * s2) + s3
}

/// The `λ`-independent part `C(n,t)` of `f/λ̄³ = C(n,t) + 3n F(x)`; the split
/// holds for `θ = θ(n)`, where the `Σx²` coefficients agree.
pub fn constant_term(n: usize, t: &BigRational) -> BigRational {
    let (nn, ni) = (int(traceless_dim(n) as i64), int(n as i64));
    let one = BigRational::one();
    let tm1 = t - &one;
    let first = &nn * ((&nn - int(3)) * t - (int(3) * &nn - int(9) * &ni + int(3)));
    let second = int(3) * &ni * &nn * &tm1 * &tm1 * (int(2) * t + &one);
    let bracket = int(3) * (&nn - int(4) * &ni + &one) - (&nn - int(3)) * t;
    let third = bracket * (-(int(2) * &nn * t * &tm1) + &nn * &tm1 * &tm1);
    first + second + third
}

/// Critical point `P_{k,l}` of `F` on the face with `N−k` zero coordinates:
/// `l` coordinates at `a`, `k−l` at `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct LagrangePoint {
    pub k: usize,
    pub l: usize,
    pub a: Option<BigRational>,
    pub b: BigRational,
    pub x: Vec<BigRational>,
    pub lambda: Vec<BigRational>,
    pub objective: BigRational,
}

/// Solves `a + b = 2At`, `la + (k−l)b = Nt` for `1 ≤ k ≤ N`, `0 ≤ l < k/2`.
/// Returns `None` when the solution leaves the simplex (`a < 0` or `b < 0`).
pub fn lagrange_candidates(
    n: usize,
    theta: &BigRational,
    k: usize,
    l: usize,
) -> Result<Option<LagrangePoint>> {
    let dim = traceless_dim(n);
    if k == 0 || k > dim {
        return Err(Error::OutOfRange {
            what: "k",
            value: k as i64,
            range: format!("1..={dim}"),
        });
    }
    if 2 * l >= k {
        return Err(Error::OutOfRange {
            what: "l",
            value: l as i64,
            range: format!("0..{} (l < k/2)", k.div_ceil(2)),
        });
    }
    let t = BigRational::one() + theta;
    let a_coef = lagrange_a(n);
    let nt = int(dim as i64) * &t;
    let (a, b) = if l == 0 {
        (None, &nt / int(k as i64))
    } else {
        let big_b = (int(dim as i64) - &a_coef * int(k as i64)) / int((k - 2 * l) as i64);
        let a = (&a_coef - &big_b) * &t;
        let b = (&a_coef + &big_b) * &t;
        (Some(a), b)
    };
    if b.is_negative() || a.as_ref().is_some_and(|v| v.is_negative()) {
        return Ok(None);
    }
    let mut x = vec![BigRational::zero(); dim - k];
    if let Some(a) = &a {
        x.extend(std::iter::repeat_n(a.clone(), l));
    }
    x.extend(std::iter::repeat_n(b.clone(), k - l));
    let lambda = x.iter().map(|v| v - theta).collect();
    let objective = shifted_objective(n, &t, &x);
    Ok(Some(LagrangePoint {
        k,
        l,
        a,
        b,
        x,
        lambda,
        objective,
    }))
}

/// `F(P_{k,l}) = t³(−2kA³ − 3A²(N−Ak) + (N−Ak)³/(k−2l)²)`.
pub fn lagrange_objective_closed_form(
    n: usize,
    theta: &BigRational,
    k: usize,
    l: usize,
) -> BigRational {
    let t = BigRational::one() + theta;
    let a = lagrange_a(n);
    let kk = int(k as i64);
    let gap = int(traceless_dim(n) as i64) - &a * &kk;
    let d = int((k - 2 * l) as i64);
    &t * &t
        * &t
        * (-(int(2) * &kk * &a * &a * &a) - int(3) * &a * &a * &gap
            + &gap * &gap * &gap / (&d * &d))
}

/// The `k` for which `A = N/k`, which would make the `l = k/2` split
/// degenerate; `None` when no admissible integer `1 ≤ k ≤ N` exists.
pub fn degenerate_split_k(n: usize) -> Option<usize> {
    let dim = traceless_dim(n);
    let k = int(dim as i64) / lagrange_a(n);
    (k.is_integer() && k >= BigRational::one() && k <= int(dim as i64))
        .then(|| k.to_integer().try_into().expect("small"))
}

/// Which equality case of `f ≥ 0` a spectrum realizes, up to scale and order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EqualityCase {
    InteriorOne,
    BoundaryLambda1,
    Neither,
}

pub const EQUALITY_TOL: f64 = 1e-8;

fn sorted(v: &[f64]) -> Vec<f64> {
    let mut v = v.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn linf(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// `ℓ∞` distances of the sorted, mean-normalized `lambda` to `λ⁰` and `λ¹`.
pub fn equality_distances(lambda: &[f64], theta: f64) -> Result<(f64, f64)> {
    let dim = lambda.len();
    let mean = lambda.iter().sum::<f64>() / dim as f64;
    if mean == 0.0 {
        return Err(Error::ZeroMean);
    }
    let normalized = sorted(&lambda.iter().map(|x| x / mean).collect::<Vec<_>>());
    let ones = vec![1.0; dim];
    let mut l1 = vec![(dim as f64 + theta) / (dim as f64 - 1.0); dim];
    l1[0] = -theta;
    Ok((linf(&normalized, &ones), linf(&normalized, &l1)))
}

pub fn classify_equality(lambda: &[f64], n: usize, theta: f64) -> Result<EqualityCase> {
    let dim = traceless_dim(n);
    if lambda.len() != dim {
        return Err(Error::EntryCount {
            expected: dim,
            got: lambda.len(),
        });
    }
    let (d0, d1) = equality_distances(lambda, theta)?;
    Ok(if d0 <= EQUALITY_TOL {
        EqualityCase::InteriorOne
    } else if d1 <= EQUALITY_TOL {
        EqualityCase::BoundaryLambda1
    } else {
        EqualityCase::Neither
    })
}

/// `λ¹` at `θ(n) + ε` and its exact `f`-value.
#[derive(Debug, Clone, PartialEq)]
pub struct SharpnessWitness {
    pub n: usize,
    pub epsilon: BigRational,
    pub theta: BigRational,
    pub lambda: Vec<BigRational>,
    pub f_value: BigRational,
}

impl SharpnessWitness {
    /// Witness proper: `f(λ¹) < 0`.
    pub fn is_witness(&self) -> bool {
        self.f_value.is_negative()
    }
}

/// Evaluates `f(λ¹)` at `θ = θ(n) + ε`; negative for every `ε > 0`.
/// `ε = 0` is accepted and returns the boundary value `0`.
pub fn sharpness_witness(n: usize, epsilon: &BigRational) -> Result<SharpnessWitness> {
    if epsilon.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "epsilon must be >= 0, got {epsilon}"
        )));
    }
    let base = theta(n)?;
    let th = &base.exact + epsilon;
    let c = candidate_lambda_m(n, &th, 1)?;
    Ok(SharpnessWitness {
        n,
        epsilon: epsilon.clone(),
        theta: th,
        lambda: c.lambda,
        f_value: c.f_value,
    })
}

/// Condition `λ₁ ≥ −θ λ̄` evaluated on a spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LowerBound {
    /// `λ̄` is numerically zero; the ratio is undefined.
    FlatLike,
    Holds {
        ratio: f64,
    },
    Violated {
        ratio: f64,
    },
}

pub fn check_lower_bound(spectrum: &Spectrum, theta: f64) -> LowerBound {
    match spectrum.min_over_mean() {
        None => LowerBound::FlatLike,
        Some(ratio) if spectrum.mean > 0.0 && ratio >= -theta => LowerBound::Holds { ratio },
        Some(ratio) => LowerBound::Violated { ratio },
    }
}
