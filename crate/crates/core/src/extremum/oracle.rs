//! Sampling oracle for `min f` over `{λ : λ̄ = 1, λⱼ ≥ −θ}`, independent of
//! the critical-point enumeration it is checked against.

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::{candidates, classify_equality, equality_distances, EqualityCase};
use crate::error::{Error, Result};
use crate::rational::to_f64;
use crate::rng::SplitMix64;
use crate::second_kind::traceless_dim;

/// Serializes an exact rational as `"p/q"` (or `"p"` for integers).
#[derive(Debug, Clone, PartialEq)]
pub struct RationalString(pub BigRational);

impl Serialize for RationalString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    NonnegMinAttained,
    CounterexampleFound,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateValue {
    pub m: usize,
    pub f: RationalString,
    pub f_float: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityEntry {
    pub m: usize,
    pub case: EqualityCase,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExtremumReport {
    pub n: usize,
    #[serde(rename = "N")]
    pub dim: usize,
    pub theta_used: RationalString,
    pub theta_float: f64,
    pub seed: u64,
    pub samples: usize,
    pub candidate_values: Vec<CandidateValue>,
    pub candidate_min: RationalString,
    pub oracle_min: f64,
    pub oracle_argmin: Vec<f64>,
    pub argmin_distance_lambda0: f64,
    pub argmin_distance_lambda1: f64,
    pub argmin_case: EqualityCase,
    pub conclusion: Conclusion,
    /// Candidates with `f(λᵐ) = 0` exactly, classified.
    pub equality_cases: Vec<EqualityEntry>,
}

/// Tuning of the sampling oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub budget: usize,
    pub seed: u64,
    /// Number of best samples refined by pairwise transfers.
    pub refine_from: usize,
    pub refine_iterations: usize,
    pub step_floor: f64,
    /// `f` below `−negativity_tol` counts as a counterexample.
    pub negativity_tol: f64,
}

impl OracleConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        Self {
            budget,
            seed,
            refine_from: 10,
            refine_iterations: 500,
            step_floor: 1e-12,
            negativity_tol: 1e-9,
        }
    }
}

/// Float evaluation of `f` with the coefficients hoisted out.
struct Objective {
    n: f64,
    c3: f64,
    c1: f64,
    theta: f64,
}

impl Objective {
    fn new(n: usize, theta: f64) -> Self {
        let dim = traceless_dim(n) as f64;
        let nf = n as f64;
        Self {
            n: nf,
            c3: dim * (dim - 3.0) * theta - (2.0 * dim - 9.0 * nf + 6.0) * dim,
            c1: (2.0 * dim - 12.0 * nf + 6.0) - (dim - 3.0) * theta,
            theta,
        }
    }

    fn eval(&self, lambda: &[f64]) -> f64 {
        let mean = lambda.iter().sum::<f64>() / lambda.len() as f64;
        let (s2, s3) = lambda
            .iter()
            .fold((0.0, 0.0), |(a, b), x| (a + x * x, b + x * x * x));
        self.c3 * mean.powi(3) + self.c1 * mean * s2 + 3.0 * self.n * s3
    }

    /// Partial derivative along `λᵢ` with `λ̄` held fixed.
    fn partial(&self, mean: f64, li: f64) -> f64 {
        2.0 * self.c1 * mean * li + 9.0 * self.n * li * li
    }

    /// Descends by transferring mass between the steepest pair of
    /// coordinates, keeping `Σλ` and `λⱼ ≥ −θ`.
    fn refine(&self, lambda: &mut [f64], cfg: &OracleConfig) -> f64 {
        let dim = lambda.len();
        let mean = lambda.iter().sum::<f64>() / dim as f64;
        let mut value = self.eval(lambda);
        for _ in 0..cfg.refine_iterations {
            let d: Vec<f64> = lambda.iter().map(|&l| self.partial(mean, l)).collect();
            let i = (0..dim)
                .min_by(|&a, &b| d[a].total_cmp(&d[b]))
                .expect("nonempty");
            let Some(j) = (0..dim)
                .filter(|&j| lambda[j] + self.theta > 0.0)
                .max_by(|&a, &b| d[a].total_cmp(&d[b]))
            else {
                break;
            };
            let slope = d[i] - d[j];
            if i == j || slope >= 0.0 {
                break;
            }
            let room = lambda[j] + self.theta;
            let mut step = room;
            let mut moved = false;
            while step >= cfg.step_floor {
                let (old_i, old_j) = (lambda[i], lambda[j]);
                lambda[i] = old_i + step;
                lambda[j] = if step == room {
                    -self.theta
                } else {
                    old_j - step
                };
                let trial = self.eval(lambda);
                if trial <= value + 1e-4 * step * slope {
                    value = trial;
                    moved = true;
                    break;
                }
                lambda[i] = old_i;
                lambda[j] = old_j;
                step *= 0.5;
            }
            if !moved {
                break;
            }
        }
        value
    }
}

/// Feasible point from a symmetric Dirichlet(1) draw on the simplex
/// `Σx = Nt`, mapped back by `λ = x − θ`.
fn sample_point(rng: &mut SplitMix64, dim: usize, theta: f64) -> Vec<f64> {
    let e: Vec<f64> = (0..dim).map(|_| rng.next_exp()).collect();
    let total: f64 = e.iter().sum();
    let mass = dim as f64 * (1.0 + theta);
    e.iter().map(|v| v / total * mass - theta).collect()
}

/// Samples `budget` feasible spectra, adds every candidate `λᵐ`, refines the
/// best `refine_from` samples, and reports the smallest `f` seen next to the
/// exact candidate values. Each sample `i` draws from its own sub-stream of
/// `seed`, so the result does not depend on evaluation order.
pub fn brute_force_min(
    n: usize,
    theta: &BigRational,
    cfg: &OracleConfig,
) -> Result<ExtremumReport> {
    if n < 4 {
        return Err(Error::DimensionTooSmall {
            n,
            min: 4,
            what: "extremum oracle",
        });
    }
    if cfg.budget == 0 {
        return Err(Error::InvalidArgument(
            "sample budget must be at least 1".into(),
        ));
    }
    if theta.is_negative() {
        return Err(Error::InvalidArgument(format!(
            "theta must be >= 0, got {theta}"
        )));
    }
    let dim = traceless_dim(n);
    let theta_f = to_f64(theta);
    let obj = Objective::new(n, theta_f);

    let exact = candidates(n, theta)?;
    let candidate_min = exact
        .iter()
        .map(|c| c.f_value.clone())
        .min()
        .expect("N >= 1");

    let mut best_value = f64::INFINITY;
    let mut best_point = Vec::new();
    let mut consider = |value: f64, point: &[f64]| {
        if value < best_value {
            best_value = value;
            best_point = point.to_vec();
        }
    };

    // best `refine_from` samples, ascending by value
    let mut pool: Vec<(f64, Vec<f64>)> = Vec::with_capacity(cfg.refine_from + 1);
    for i in 0..cfg.budget {
        let mut rng = SplitMix64::stream(cfg.seed, i as u64);
        let point = sample_point(&mut rng, dim, theta_f);
        let value = obj.eval(&point);
        consider(value, &point);
        if cfg.refine_from > 0
            && (pool.len() < cfg.refine_from || value < pool.last().expect("nonempty").0)
        {
            let pos = pool.partition_point(|(v, _)| *v <= value);
            pool.insert(pos, (value, point));
            pool.truncate(cfg.refine_from);
        }
    }
    for c in &exact {
        let point = c.lambda_f64();
        consider(obj.eval(&point), &point);
    }
    for (_, mut point) in pool {
        let value = obj.refine(&mut point, cfg);
        consider(value, &point);
    }

    let (d0, d1) = equality_distances(&best_point, theta_f)?;
    let argmin_case = classify_equality(&best_point, n, theta_f)?;
    let conclusion = if candidate_min.is_negative() || best_value < -cfg.negativity_tol {
        Conclusion::CounterexampleFound
    } else {
        Conclusion::NonnegMinAttained
    };
    let equality_cases = exact
        .iter()
        .filter(|c| c.f_value.is_zero())
        .map(|c| {
            Ok(EqualityEntry {
                m: c.m,
                case: classify_equality(&c.lambda_f64(), n, theta_f)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(ExtremumReport {
        n,
        dim,
        theta_used: RationalString(theta.clone()),
        theta_float: theta_f,
        seed: cfg.seed,
        samples: cfg.budget,
        candidate_values: exact
            .iter()
            .map(|c| CandidateValue {
                m: c.m,
                f: RationalString(c.f_value.clone()),
                f_float: to_f64(&c.f_value),
            })
            .collect(),
        candidate_min: RationalString(candidate_min),
        oracle_min: best_value,
        oracle_argmin: best_point,
        argmin_distance_lambda0: d0,
        argmin_distance_lambda1: d1,
        argmin_case,
        conclusion,
        equality_cases,
    })
}
