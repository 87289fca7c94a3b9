//! Table, JSON and CSV renderings. JSON floats use the shortest round-trip
//! form; tables use 6 significant digits.

use std::io::{self, Write};

use clap::ValueEnum;
use serde::Serialize;

use curv2k_core::extremum::{ExtremumReport, RationalString, SharpnessWitness, Threshold};
use curv2k_core::identity::{format_sig, render_table, Outcome};
use curv2k_core::rational::to_f64;
use curv2k_core::second_kind::Spectrum;

use crate::CorpusRow;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

fn g(x: f64) -> String {
    format_sig(x, 6)
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> io::Result<()> {
    writeln!(
        out,
        "{}",
        serde_json::to_string(value).map_err(io::Error::other)?
    )
}

fn csv_rows<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> io::Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(io::Error::other)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| io::Error::other(e.to_string()))?;
    out.write_all(&bytes)
}

/// Serde name of a unit enum variant.
fn tag<T: Serialize>(v: &T) -> String {
    match serde_json::to_value(v) {
        Ok(serde_json::Value::String(s)) => s,
        other => format!("{other:?}"),
    }
}

#[derive(Serialize)]
struct ThetaRow {
    n: usize,
    #[serde(rename = "N")]
    dim: usize,
    theta: RationalString,
    theta_float: f64,
}

pub fn theta(out: &mut dyn Write, format: Format, t: &Threshold, exact: bool) -> io::Result<()> {
    let row = ThetaRow {
        n: t.n,
        dim: t.dim,
        theta: RationalString(t.exact.clone()),
        theta_float: t.value,
    };
    match format {
        Format::Table if exact => writeln!(out, "{}", t.exact),
        Format::Table => writeln!(out, "{}", g(t.value)),
        Format::Json => json_line(out, &row),
        Format::Csv => csv_rows(out, &[row]),
    }
}

#[derive(Serialize)]
struct EigenRow {
    n: usize,
    #[serde(rename = "N")]
    dim: usize,
    mean: f64,
    trace_check: bool,
    j: usize,
    eigenvalue: f64,
}

pub fn spectrum(out: &mut dyn Write, format: Format, s: &Spectrum) -> io::Result<()> {
    match format {
        Format::Json => writeln!(out, "{}", s.to_json()),
        Format::Csv => {
            let rows: Vec<EigenRow> = s
                .eigenvalues
                .iter()
                .enumerate()
                .map(|(j, &eigenvalue)| EigenRow {
                    n: s.n,
                    dim: s.dim,
                    mean: s.mean,
                    trace_check: s.trace_check,
                    j: j + 1,
                    eigenvalue,
                })
                .collect();
            csv_rows(out, &rows)
        }
        Format::Table => {
            let ratio = s.min_over_mean().map_or_else(|| "undefined".to_string(), g);
            writeln!(out, "n = {}, N = {}", s.n, s.dim)?;
            writeln!(
                out,
                "mean = {}, min = {}, min/mean = {ratio}",
                g(s.mean),
                g(s.min())
            )?;
            writeln!(
                out,
                "trace check: {}",
                if s.trace_check { "pass" } else { "FAIL" }
            )?;
            writeln!(out, "{:>4}  {:>13}", "j", "eigenvalue")?;
            for (j, l) in s.eigenvalues.iter().enumerate() {
                writeln!(out, "{:>4}  {:>13}", j + 1, g(*l))?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct NotApplicableLine<'a> {
    name: &'a str,
    status: &'static str,
    reason: &'a str,
}

#[derive(Serialize)]
struct OutcomeRow<'a> {
    name: &'a str,
    status: &'static str,
    lhs: Option<f64>,
    rhs: Option<f64>,
    abs_err: Option<f64>,
    rel_err: Option<f64>,
    tolerance: Option<f64>,
    slack: Option<f64>,
    reason: &'a str,
}

pub fn outcomes(out: &mut dyn Write, format: Format, outcomes: &[Outcome]) -> io::Result<()> {
    match format {
        Format::Table => write!(out, "{}", render_table(outcomes)),
        Format::Json => {
            for o in outcomes {
                match o {
                    Outcome::Checked(r) => json_line(out, r)?,
                    Outcome::NotApplicable { name, reason } => json_line(
                        out,
                        &NotApplicableLine {
                            name,
                            status: "not_applicable",
                            reason,
                        },
                    )?,
                }
            }
            Ok(())
        }
        Format::Csv => {
            let rows: Vec<OutcomeRow> = outcomes
                .iter()
                .map(|o| match o {
                    Outcome::Checked(r) => OutcomeRow {
                        name: &r.name,
                        status: if r.pass { "pass" } else { "fail" },
                        lhs: Some(r.lhs),
                        rhs: Some(r.rhs),
                        abs_err: Some(r.abs_err),
                        rel_err: Some(r.rel_err),
                        tolerance: Some(r.tolerance),
                        slack: r.slack,
                        reason: "",
                    },
                    Outcome::NotApplicable { name, reason } => OutcomeRow {
                        name,
                        status: "not_applicable",
                        lhs: None,
                        rhs: None,
                        abs_err: None,
                        rel_err: None,
                        tolerance: None,
                        slack: None,
                        reason,
                    },
                })
                .collect();
            csv_rows(out, &rows)
        }
    }
}

#[derive(Serialize)]
struct ExtremumRow {
    n: usize,
    #[serde(rename = "N")]
    dim: usize,
    theta_used: String,
    theta_float: f64,
    seed: u64,
    samples: usize,
    candidate_min: String,
    oracle_min: f64,
    argmin_distance_lambda0: f64,
    argmin_distance_lambda1: f64,
    argmin_case: String,
    conclusion: String,
}

pub fn extremum(out: &mut dyn Write, format: Format, r: &ExtremumReport) -> io::Result<()> {
    match format {
        Format::Json => json_line(out, r),
        Format::Csv => csv_rows(
            out,
            &[ExtremumRow {
                n: r.n,
                dim: r.dim,
                theta_used: r.theta_used.0.to_string(),
                theta_float: r.theta_float,
                seed: r.seed,
                samples: r.samples,
                candidate_min: r.candidate_min.0.to_string(),
                oracle_min: r.oracle_min,
                argmin_distance_lambda0: r.argmin_distance_lambda0,
                argmin_distance_lambda1: r.argmin_distance_lambda1,
                argmin_case: tag(&r.argmin_case),
                conclusion: tag(&r.conclusion),
            }],
        ),
        Format::Table => {
            writeln!(out, "n = {}, N = {}", r.n, r.dim)?;
            writeln!(out, "theta = {} ({})", r.theta_used.0, g(r.theta_float))?;
            writeln!(out, "{:>4}  {:>28}  {:>13}", "m", "f(lambda^m)", "float")?;
            for c in &r.candidate_values {
                writeln!(
                    out,
                    "{:>4}  {:>28}  {:>13}",
                    c.m,
                    c.f.0.to_string(),
                    g(c.f_float)
                )?;
            }
            writeln!(out, "candidate min = {}", r.candidate_min.0)?;
            writeln!(
                out,
                "oracle: {} samples, seed {}, min = {}",
                r.samples,
                r.seed,
                g(r.oracle_min)
            )?;
            writeln!(
                out,
                "argmin distance to lambda^0 = {}, to lambda^1 = {} ({})",
                g(r.argmin_distance_lambda0),
                g(r.argmin_distance_lambda1),
                tag(&r.argmin_case)
            )?;
            for e in &r.equality_cases {
                writeln!(out, "equality at m = {}: {}", e.m, tag(&e.case))?;
            }
            writeln!(out, "conclusion: {}", tag(&r.conclusion))
        }
    }
}

#[derive(Serialize)]
struct SharpnessLine {
    n: usize,
    epsilon: RationalString,
    theta: RationalString,
    f_value: RationalString,
    f_float: f64,
    witness: bool,
    lambda: Vec<serde_json::Value>,
}

pub fn sharpness(
    out: &mut dyn Write,
    format: Format,
    w: &SharpnessWitness,
    exact: bool,
) -> io::Result<()> {
    match format {
        Format::Json => {
            let lambda = w
                .lambda
                .iter()
                .map(|x| {
                    if exact {
                        x.to_string().into()
                    } else {
                        to_f64(x).into()
                    }
                })
                .collect();
            json_line(
                out,
                &SharpnessLine {
                    n: w.n,
                    epsilon: RationalString(w.epsilon.clone()),
                    theta: RationalString(w.theta.clone()),
                    f_value: RationalString(w.f_value.clone()),
                    f_float: to_f64(&w.f_value),
                    witness: w.is_witness(),
                    lambda,
                },
            )
        }
        Format::Csv => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                epsilon: String,
                theta: String,
                f_value: String,
                f_float: f64,
                witness: bool,
            }
            csv_rows(
                out,
                &[Row {
                    n: w.n,
                    epsilon: w.epsilon.to_string(),
                    theta: w.theta.to_string(),
                    f_value: w.f_value.to_string(),
                    f_float: to_f64(&w.f_value),
                    witness: w.is_witness(),
                }],
            )
        }
        Format::Table => {
            writeln!(
                out,
                "n = {}, epsilon = {}, theta = {}",
                w.n, w.epsilon, w.theta
            )?;
            let first = &w.lambda[0];
            let rest = &w.lambda[1];
            if exact {
                writeln!(out, "lambda^1 = ({first}, {rest} x{})", w.lambda.len() - 1)?;
            } else {
                writeln!(
                    out,
                    "lambda^1 = ({}, {} x{})",
                    g(to_f64(first)),
                    g(to_f64(rest)),
                    w.lambda.len() - 1
                )?;
            }
            writeln!(
                out,
                "f(lambda^1) = {} ({})",
                w.f_value,
                g(to_f64(&w.f_value))
            )?;
            writeln!(
                out,
                "witness: {}",
                if w.is_witness() { "yes" } else { "no" }
            )
        }
    }
}

pub fn corpus(out: &mut dyn Write, format: Format, rows: &[CorpusRow]) -> io::Result<()> {
    match format {
        Format::Json => rows.iter().try_for_each(|r| json_line(out, r)),
        Format::Csv => csv_rows(out, rows),
        Format::Table => {
            let width = rows.iter().map(|r| r.model.len()).max().unwrap_or(5).max(5);
            writeln!(
                out,
                "{:>5}  {:<width$}  {:>10}  {:>11}  {:>5}  {:>7}  {:>6}  {:>11}",
                "index", "model", "mean", "min/mean", "bound", "checked", "failed", "chain_slack"
            )?;
            for r in rows {
                let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), g);
                writeln!(
                    out,
                    "{:>5}  {:<width$}  {:>10}  {:>11}  {:>5}  {:>7}  {:>6}  {:>11}",
                    r.index,
                    r.model,
                    g(r.mean),
                    opt(r.min_over_mean),
                    if r.lower_bound_holds { "yes" } else { "no" },
                    r.checked,
                    r.failed,
                    opt(r.chain_slack)
                )?;
            }
            let failed: usize = rows.iter().map(|r| r.failed).sum();
            writeln!(out, "{} members, {} failed checks", rows.len(), failed)
        }
    }
}
