//! Command-line front end. [`run`] is pure: it returns the exit code and
//! both output streams, so tests can drive it without a process.

use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use crate::classify::{algorithm1_classify, bound_json, bounds_for, k2l2_bound, kiem_regime, milnor_bound, segre_degree, Regime, Verdict};
use crate::fixtures::{self, FixtureError};
use crate::numeric::{GaussianRational, NumericError, Scalar};
use crate::poly::{conjugate_poly, resultant_w, PolyError};
use crate::solve::{count_product_vectors_2xn, SolveError, Tolerances};
use crate::subspace::{build_linear_system, det_poly_2xn, SubspaceError, SubspacePair};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_REGIME: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_INVALID: i32 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Regime, genericity verdict, bounds and range obstruction.
    Classify,
    /// Certified product vectors.
    Count,
    /// `P`, its conjugate `Q` and `Res_w(P, Q)`.
    Resultant,
    /// Milnor, Segre and k²+l² bounds for every boundary (k, l).
    Bounds,
    /// Counts for seeded random pairs with `k = 0`.
    SegreCheck,
    /// Prints a named fixture pair.
    Fixture,
    /// Prints a seeded random pair, or classifies a batch of them.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Domain {
    Exact,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Debug, Parser)]
#[command(name = "prodvec", version, about = "Count product vectors |x,y> in D with |x̄,y> in E")]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Subspace pair JSON file.
    #[arg(long = "input")]
    pub input_path: Option<PathBuf>,
    /// hakye-2x4, example-4-6 or diagonal.
    #[arg(long)]
    pub fixture: Option<String>,
    #[arg(long, default_value = "3")]
    pub a: GaussianRational,
    #[arg(long, default_value = "1")]
    pub b: GaussianRational,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub l: Option<usize>,
    #[arg(long, env = "PRODVEC_SEED")]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub trials: usize,
    #[arg(long, value_enum, default_value_t = Domain::Exact)]
    pub domain: Domain,
    #[arg(long, value_enum, default_value_t = OutputFormat::Json)]
    pub output: OutputFormat,
    #[arg(long)]
    pub tol_conj: Option<f64>,
    #[arg(long)]
    pub tol_rank: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Subspace(SubspaceError::Regime { .. }) | CliError::Solve(SolveError::Subspace(SubspaceError::Regime { .. })) => {
                EXIT_REGIME
            }
            CliError::Solve(SolveError::Indeterminate(_)) => EXIT_INDETERMINATE,
            CliError::Solve(SolveError::FullRank | SolveError::RankDeficient { .. } | SolveError::ZeroPolynomial) => EXIT_INTERNAL,
            _ => EXIT_INVALID,
        }
    }
}

/// A report and the exit code it warrants.
struct Report {
    code: i32,
    value: Value,
}

impl Report {
    fn ok(value: Value) -> Self {
        Self { code: EXIT_OK, value }
    }
}

/// Parses arguments (including the program name) and runs them. Parse
/// failures exit with [`EXIT_INVALID`].
pub fn run_args<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                Outcome { code: EXIT_INVALID, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: EXIT_OK, stdout: text, stderr: String::new() }
            }
        }
    }
}

pub fn run(config: &RunConfig) -> Outcome {
    match dispatch(config) {
        Ok(report) => Outcome { code: report.code, stdout: render(&report.value, config.output), stderr: String::new() },
        Err(e) => Outcome { code: e.code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn tolerances(config: &RunConfig) -> Tolerances {
    let mut tol = Tolerances::default();
    if let Some(t) = config.tol_conj {
        tol.conj = t;
    }
    if let Some(t) = config.tol_rank {
        tol.rank = t;
    }
    tol
}

fn dispatch(config: &RunConfig) -> Result<Report, CliError> {
    match config.command {
        Command::Bounds => bounds(config),
        Command::Fixture => {
            let name = config.fixture.as_deref().ok_or_else(|| CliError::Usage("fixture needs --fixture NAME".into()))?;
            Ok(Report::ok(named_fixture(config, name)?.to_json()))
        }
        Command::Random => random(config),
        Command::SegreCheck => segre_check(config),
        Command::Classify | Command::Count | Command::Resultant => with_domain(config),
    }
}

fn with_domain(config: &RunConfig) -> Result<Report, CliError> {
    let pair = load_pair(config)?;
    let tol = tolerances(config);
    match config.domain {
        Domain::Exact => on_pair(config.command, &pair, &tol),
        Domain::Float => on_pair(config.command, &pair.to_complexf()?, &tol),
    }
}

fn on_pair<S: Scalar>(command: Command, pair: &SubspacePair<S>, tol: &Tolerances) -> Result<Report, CliError> {
    match command {
        Command::Classify => classify(pair, tol),
        Command::Count => count(pair, tol),
        _ => resultant(pair),
    }
}

fn need(value: Option<usize>, flag: &str) -> Result<usize, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

fn named_fixture(config: &RunConfig, name: &str) -> Result<SubspacePair<GaussianRational>, CliError> {
    let (k, l, n) = if name == "diagonal" {
        let n = need(config.n, "n")?;
        let k = config.k.unwrap_or_else(|| n.saturating_sub(config.l.unwrap_or(0)));
        (k, config.l.unwrap_or(n.saturating_sub(k)), n)
    } else {
        (0, 0, 0)
    };
    Ok(fixtures::named(name, &config.a, &config.b, k, l, n)?)
}

fn seed(config: &RunConfig) -> Result<u64, CliError> {
    config.seed.ok_or_else(|| CliError::Usage("a seed is required: pass --seed or set PRODVEC_SEED".into()))
}

fn random_shape(config: &RunConfig) -> Result<(usize, usize, usize, usize), CliError> {
    let m = config.m.unwrap_or(2);
    let n = need(config.n, "n")?;
    let boundary = (m + n).saturating_sub(2);
    let k = match (config.k, config.l) {
        (Some(k), _) => k,
        (None, Some(l)) => boundary.saturating_sub(l),
        (None, None) => return Err(CliError::Usage("missing --k or --l".into())),
    };
    let l = config.l.unwrap_or(boundary.saturating_sub(k));
    Ok((m, n, k, l))
}

/// The pair from `--input`, `--fixture`, or a seeded random draw.
fn load_pair(config: &RunConfig) -> Result<SubspacePair<GaussianRational>, CliError> {
    if let Some(path) = &config.input_path {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
        let value: Value = serde_json::from_str(&text)?;
        return Ok(SubspacePair::from_json(&value)?);
    }
    if let Some(name) = &config.fixture {
        return named_fixture(config, name);
    }
    if config.seed.is_some() && config.n.is_some() {
        let (m, n, k, l) = random_shape(config)?;
        return Ok(fixtures::random_pair(m, n, k, l, seed(config)?)?);
    }
    Err(CliError::Usage("no input: pass --input FILE, --fixture NAME, or --seed with --n and --k/--l".into()))
}

fn regime_json<S: Scalar>(pair: &SubspacePair<S>) -> Value {
    let report = kiem_regime(pair.m(), pair.n(), pair.k(), pair.l());
    json!({
        "regime": report.regime.name(),
        "existence_coefficient": report.existence_coefficient.to_string(),
        "existence_guaranteed": report.existence_guaranteed(),
    })
}

fn classify<S: Scalar>(pair: &SubspacePair<S>, tol: &Tolerances) -> Result<Report, CliError> {
    let regime = kiem_regime(pair.m(), pair.n(), pair.k(), pair.l());
    if regime.regime == Regime::Boundary && pair.m() != 2 {
        return Err(SubspaceError::NotQubit(pair.m()).into());
    }
    let report = algorithm1_classify(pair, tol)?;
    let mut value = report.to_json();
    value["m"] = pair.m().into();
    value["n"] = pair.n().into();
    value["k"] = pair.k().into();
    value["l"] = pair.l().into();
    let code = match (&report.regime.regime, &report.verdict) {
        (Regime::Boundary, Some(Verdict::Indeterminate(_))) => EXIT_INDETERMINATE,
        (Regime::Boundary, _) => EXIT_OK,
        (other, _) => {
            value["message"] = other.to_string().into();
            EXIT_REGIME
        }
    };
    Ok(Report { code, value })
}

fn count<S: Scalar>(pair: &SubspacePair<S>, tol: &Tolerances) -> Result<Report, CliError> {
    let cert = count_product_vectors_2xn(pair, tol)?;
    let mut value = cert.to_json();
    value["regime"] = regime_json(pair);
    let b = bounds_for(pair.m(), pair.n(), pair.k(), pair.l());
    value["bounds"] = json!({ "milnor": bound_json(b.milnor), "k2l2": b.k2l2.map(bound_json), "segre": b.segre.map(bound_json) });
    let code = if matches!(cert.verdict, Verdict::Indeterminate(_)) { EXIT_INDETERMINATE } else { EXIT_OK };
    Ok(Report { code, value })
}

fn resultant<S: Scalar>(pair: &SubspacePair<S>) -> Result<Report, CliError> {
    let lin = build_linear_system(pair)?;
    let p = det_poly_2xn(&lin)?;
    let q = conjugate_poly(&p);
    let r = resultant_w(&p, &q)?;
    Ok(Report::ok(json!({
        "P": p.to_json(),
        "Q": q.to_json(),
        "R": r.to_json(),
        "R_degree": r.degree(),
    })))
}

fn bounds(config: &RunConfig) -> Result<Report, CliError> {
    let m = need(config.m, "m")?;
    let n = need(config.n, "n")?;
    if m < 2 || n < 2 {
        return Err(SubspaceError::Dimension { m, n }.into());
    }
    let boundary = m + n - 2;
    let cells: Vec<Value> = (0..=boundary)
        .map(|k| {
            let l = boundary - k;
            let k2l2 = (m == 2).then(|| k2l2_bound(k, l));
            let segre = (k * l == 0).then(|| segre_degree(m, n));
            let best = segre.or(k2l2).unwrap_or_else(|| milnor_bound(m, n));
            json!({
                "k": k,
                "l": l,
                "k2l2": k2l2.map(bound_json),
                "segre": segre.map(bound_json),
                "best": bound_json(best),
            })
        })
        .collect();
    Ok(Report::ok(json!({
        "m": m,
        "n": n,
        "milnor": bound_json(milnor_bound(m, n)),
        "segre": bound_json(segre_degree(m, n)),
        "cells": cells,
    })))
}

fn segre_check(config: &RunConfig) -> Result<Report, CliError> {
    let n = need(config.n, "n")?;
    if config.m.is_some_and(|m| m != 2) {
        return Err(SubspaceError::NotQubit(config.m.unwrap_or(2)).into());
    }
    let base = config.seed.unwrap_or(0);
    let expected = segre_degree(2, n);
    let tol = tolerances(config);
    let mut trials = Vec::with_capacity(config.trials);
    let mut all = true;
    for t in 0..config.trials as u64 {
        let seed = base.wrapping_add(t);
        let pair = fixtures::random_pair(2, n, 0, n, seed)?;
        let cert = match config.domain {
            Domain::Exact => count_product_vectors_2xn(&pair, &tol)?,
            Domain::Float => count_product_vectors_2xn(&pair.to_complexf()?, &tol)?,
        };
        let ok = cert.count() as u128 == expected;
        all &= ok;
        trials.push(json!({ "seed": seed, "count": cert.count(), "matches": ok }));
    }
    Ok(Report::ok(json!({
        "m": 2,
        "n": n,
        "k": 0,
        "l": n,
        "segre_degree": bound_json(expected),
        "trials": trials,
        "all_match": all,
    })))
}

fn random(config: &RunConfig) -> Result<Report, CliError> {
    let (m, n, k, l) = random_shape(config)?;
    let base = seed(config)?;
    if config.trials <= 1 {
        return Ok(Report::ok(fixtures::random_pair(m, n, k, l, base)?.to_json()));
    }
    let tol = tolerances(config);
    let mut rows = Vec::with_capacity(config.trials);
    let mut in_u = 0usize;
    for t in 0..config.trials as u64 {
        let seed = base.wrapping_add(t);
        let pair = fixtures::random_pair(m, n, k, l, seed)?;
        let report = match config.domain {
            Domain::Exact => algorithm1_classify(&pair, &tol)?,
            Domain::Float => algorithm1_classify(&pair.to_complexf()?, &tol)?,
        };
        let verdict = report.verdict.as_ref();
        in_u += usize::from(verdict == Some(&Verdict::InU));
        rows.push(json!({
            "seed": seed,
            "regime": report.regime.regime.name(),
            "verdict": verdict.map(Verdict::tag),
            "reason": verdict.map_or(Value::Null, Verdict::reason_json),
        }));
    }
    Ok(Report::ok(json!({
        "m": m,
        "n": n,
        "k": k,
        "l": l,
        "trials": rows,
        "in_u": in_u,
        "in_u_rate": in_u as f64 / config.trials as f64,
    })))
}

fn render(value: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(value).expect("serializing a Value cannot fail");
            s.push('\n');
            s
        }
        OutputFormat::Text => {
            let mut out = String::new();
            text(value, 0, &mut out);
            out
        }
    }
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => "-".into(),
        other => other.to_string(),
    }
}

fn has_object(v: &Value) -> bool {
    match v {
        Value::Object(_) => true,
        Value::Array(items) => items.iter().any(has_object),
        _ => false,
    }
}

fn text(value: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match value {
        Value::Object(map) => {
            for (key, v) in map {
                if !has_object(v) {
                    out.push_str(&format!("{pad}{key}: {}\n", leaf_text(v)));
                } else {
                    out.push_str(&format!("{pad}{key}:\n"));
                    text(v, depth + 1, out);
                }
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                if !has_object(v) {
                    out.push_str(&format!("{pad}[{i}] {}\n", leaf_text(v)));
                } else {
                    out.push_str(&format!("{pad}[{i}]\n"));
                    text(v, depth + 1, out);
                }
            }
        }
        leaf => out.push_str(&format!("{pad}{}\n", scalar_text(leaf))),
    }
}

fn leaf_text(v: &Value) -> String {
    match v {
        Value::Array(items) => format!("[{}]", items.iter().map(leaf_text).collect::<Vec<_>>().join(", ")),
        other => scalar_text(other),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Outcome {
        run_args(std::iter::once("prodvec").chain(s.split_whitespace()))
    }

    #[test]
    fn bounds_table() {
        let out = args("bounds --m 2 --n 4");
        assert_eq!(out.code, EXIT_OK);
        let v: Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["milnor"], 196);
        assert_eq!(v["segre"], 4);
        let k2l2: Vec<u64> = v["cells"].as_array().unwrap().iter().map(|c| c["k2l2"].as_u64().unwrap()).collect();
        assert_eq!(k2l2, [16, 10, 8, 10, 16]);
        assert_eq!(v["cells"][0]["best"], 4);
        assert_eq!(v["cells"][2]["best"], 8);
    }

    #[test]
    fn exit_codes() {
        assert_eq!(args("count --seed 1 --m 2 --n 4 --k 1 --l 1").code, EXIT_REGIME);
        assert_eq!(args("count --fixture nonsense").code, EXIT_INVALID);
        assert_eq!(args("count --fixture hakye-2x4 --a 3 --b 4").code, EXIT_INVALID);
        assert_eq!(args("frobnicate").code, EXIT_INVALID);
        assert_eq!(args("random --n 3 --k 1").code, EXIT_INVALID);
        assert_eq!(args("--help").code, EXIT_OK);
    }

    #[test]
    fn regime_message() {
        let out = args("count --seed 1 --m 2 --n 4 --k 1 --l 1");
        assert!(out.stderr.contains("infinitely many product vectors"), "{}", out.stderr);
    }

    #[test]
    fn text_output() {
        let out = args("bounds --m 2 --n 3 --output text");
        assert!(out.stdout.contains("milnor: 75"), "{}", out.stdout);
        assert!(out.stdout.contains("k2l2: 5"));
    }
}
