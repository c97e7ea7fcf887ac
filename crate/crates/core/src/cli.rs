//! The `ncfrac` command line: `expand`, `constants` and `verify`.
//!
//! Every run prints one report in `plain`, `json` or `csv` form. JSON is a
//! single object `{"config": ..., "results": [...]}` (plus `"summary"` for
//! `verify`) where `config` echoes the resolved parameters, so a run can be
//! repeated from its own output. CSV has a fixed header. Floats print with
//! 17 significant digits in CSV and as shortest round-trip decimals in
//! JSON; big integers are strings; a divergent mean is the string `+inf`.
//!
//! Exit status: 0 on success, 1 when a verification check fails, 2 on
//! usage, parse or domain errors.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::convergents::{convergent_sequence, convergent_table, ConvergentRow};
use crate::dynamics::{self, NIndex, Rational, DEFAULT_MAX_TERMS};
use crate::lab::{self, EstimateReport, Observable, SampleConfig};
use crate::measure::{self, ConstantsReport, QuantityValue};
use crate::ulam;
use crate::{Error, Result};

#[derive(Parser, Debug)]
#[command(name = "ncfrac", version, about = "N-continued fractions and the ergodic constants of T_N(x) = {N/x}")]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    pub format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Geometric mean of the digits and frequency of the digit N.
    Birkhoff,
    /// (ln B_n)/n against Λ_N + ln N, and the per-trial lower bound.
    Levy,
    /// Birkhoff average of ln|T_N'| against 2Λ_N + ln N.
    Lyapunov,
    /// Closed-form frequency identities and the empirical histogram.
    Frequencies,
    /// The two lower bounds: algebraic identity and attainment at z_{N,N}.
    Bounds,
    /// Density recovery from the Ulam matrix.
    Ulam,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Exact expansion of a fraction "p/q" in [0, 1), with convergents.
    Expand {
        /// The point, as "p/q".
        x: String,
        #[arg(long, default_value_t = 1)]
        n: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
    },
    /// Closed-form constants for each N.
    Constants {
        /// "a..b" (inclusive), "a,b,c" or a single N.
        #[arg(long, default_value = "1..10")]
        n: String,
        /// Hölder orders, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [-1.0, 0.5])]
        r: Vec<f64>,
        /// Tail bound for every series.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Runs a verification suite; exits 1 if any check is out of tolerance.
    Verify {
        suite: Suite,
        /// N values (default depends on the suite).
        #[arg(long)]
        n: Option<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 512)]
        bits: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_TERMS)]
        max_terms: usize,
        #[arg(long, default_value_t = 512)]
        cells: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Pass band (default depends on the suite).
        #[arg(long)]
        tol: Option<f64>,
        /// Orbit depth for the bounds suite.
        #[arg(long, default_value_t = 1000)]
        depth: usize,
    },
}

/// The resolved parameters of a run, echoed in JSON output.
///
/// The thread count and output path are left out: neither changes results.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum RunConfig {
    Expand {
        x: String,
        n: u64,
        max_terms: usize,
    },
    Constants {
        n: Vec<u64>,
        r: Vec<f64>,
        tol: f64,
    },
    Verify {
        suite: Suite,
        n: Vec<u64>,
        trials: usize,
        bits: u64,
        max_terms: usize,
        cells: usize,
        seed: u64,
        tol: f64,
        depth: usize,
    },
}

/// Parses "a..b", "a,b,c" or "a".
pub fn parse_n_list(s: &str) -> Result<Vec<u64>> {
    let num = |t: &str| {
        t.trim()
            .parse::<u64>()
            .map_err(|_| Error::Parse(format!("invalid N {t:?}")))
            .and_then(|v| NIndex::new(v).map(|n| n.get()))
    };
    let out = if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b)?);
        if a > b {
            return Err(Error::Parse(format!("empty range {s:?}")));
        }
        if b - a >= 100_000 {
            return Err(Error::Parse(format!("range {s:?} is too long")));
        }
        (a..=b).collect()
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    Ok(out)
}

fn indices(ns: &[u64]) -> Vec<NIndex> {
    ns.iter().map(|&v| NIndex::new(v).expect("validated")).collect()
}

fn default_n(suite: Suite) -> &'static str {
    match suite {
        Suite::Bounds => "1..10",
        Suite::Ulam => "1,2,3,5,10",
        _ => "1,2,5",
    }
}

fn default_tol(suite: Suite) -> f64 {
    match suite {
        Suite::Bounds => 1e-3,
        Suite::Ulam => 0.01,
        _ => 0.02,
    }
}

impl Command {
    pub fn resolve(&self) -> Result<RunConfig> {
        Ok(match self {
            Command::Expand { x, n, max_terms } => RunConfig::Expand {
                x: x.clone(),
                n: NIndex::new(*n)?.get(),
                max_terms: *max_terms,
            },
            Command::Constants { n, r, tol } => {
                if !(*tol > 0.0) {
                    return Err(Error::InvalidConfig(format!("tol must be positive, got {tol}")));
                }
                if let Some(bad) = r.iter().find(|v| !v.is_finite()) {
                    return Err(Error::InvalidConfig(format!("order r must be finite, got {bad}")));
                }
                RunConfig::Constants {
                    n: parse_n_list(n)?,
                    r: r.clone(),
                    tol: *tol,
                }
            }
            Command::Verify {
                suite,
                n,
                trials,
                bits,
                max_terms,
                cells,
                seed,
                tol,
                depth,
            } => {
                let tol = tol.unwrap_or_else(|| default_tol(*suite));
                if !(tol > 0.0) {
                    return Err(Error::InvalidConfig(format!("tol must be positive, got {tol}")));
                }
                RunConfig::Verify {
                    suite: *suite,
                    n: parse_n_list(n.as_deref().unwrap_or(default_n(*suite)))?,
                    trials: *trials,
                    bits: *bits,
                    max_terms: *max_terms,
                    cells: *cells,
                    seed: *seed,
                    tol,
                    depth: *depth,
                }
            }
        })
    }
}

/// One pass/fail line of a verification suite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub n: u64,
    pub check: String,
    pub value: f64,
    pub target: f64,
    pub deviation: f64,
    pub tolerance: f64,
    /// Standard error of the estimate, for Monte Carlo checks.
    pub std_error: Option<f64>,
    pub pass: bool,
}

impl Check {
    fn relative(suite: Suite, e: &EstimateReport, tol: f64) -> Self {
        Check {
            suite,
            n: e.n.get(),
            check: e.quantity.clone(),
            value: e.empirical,
            target: e.target,
            deviation: e.rel_dev,
            tolerance: tol,
            std_error: Some(e.std_error),
            pass: e.rel_dev <= tol,
        }
    }

    fn absolute(suite: Suite, n: u64, check: &str, value: f64, target: f64, tol: f64) -> Self {
        let deviation = (value - target).abs();
        Check {
            suite,
            n,
            check: check.into(),
            value,
            target,
            deviation,
            tolerance: tol,
            std_error: None,
            pass: deviation <= tol,
        }
    }
}

/// What a run produced, before rendering.
#[derive(Debug, Clone)]
pub enum Outcome {
    Expand {
        x: Rational,
        expansion: dynamics::Expansion,
        table: Vec<ConvergentRow>,
    },
    Constants(Vec<ConstantsReport>),
    Verify(Vec<Check>),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        match self {
            Outcome::Verify(checks) => checks.iter().all(|c| c.pass),
            _ => true,
        }
    }
}

/// Executes a resolved configuration.
pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    match cfg {
        RunConfig::Expand { x, n, max_terms } => {
            let x: Rational = x.parse()?;
            let n = NIndex::new(*n)?;
            let expansion = dynamics::expand(&x, n, *max_terms)?;
            let table = if expansion.is_empty() {
                Vec::new()
            } else {
                convergent_table(&x, &convergent_sequence(&expansion.coeffs, n)?)
            };
            Ok(Outcome::Expand { x, expansion, table })
        }
        RunConfig::Constants { n, r, tol } => Ok(Outcome::Constants(ConstantsReport::batch(&indices(n), r, *tol))),
        RunConfig::Verify { suite, n, .. } => {
            let mut checks = Vec::new();
            for nn in indices(n) {
                checks.extend(verify_one(cfg, *suite, nn)?);
            }
            Ok(Outcome::Verify(checks))
        }
    }
}

fn verify_one(cfg: &RunConfig, suite: Suite, n: NIndex) -> Result<Vec<Check>> {
    let RunConfig::Verify {
        trials,
        bits,
        max_terms,
        cells,
        seed,
        tol,
        depth,
        ..
    } = *cfg
    else {
        unreachable!("verify_one is only called for verify runs")
    };
    let sample = SampleConfig {
        trials,
        bits,
        max_terms,
        seed,
        ..SampleConfig::new(n)
    };
    let nv = n.get();
    let estimate = |obs| -> Result<EstimateReport> {
        Ok(lab::birkhoff_estimate(&sample, obs)?
            .estimate()
            .cloned()
            .expect("integrable observable"))
    };
    let mut out = Vec::new();
    match suite {
        Suite::Birkhoff => {
            out.push(Check::relative(suite, &estimate(Observable::LogDigit)?, tol));
            out.push(Check::relative(suite, &estimate(Observable::DigitIndicator(nv))?, tol));
        }
        Suite::Lyapunov => out.push(Check::relative(suite, &lab::lyapunov_estimate(&sample)?, tol)),
        Suite::Levy => {
            let e = lab::levy_estimate(&sample)?;
            out.push(Check::relative(suite, &e, tol));
            let bound = measure::lower_bounds(n).denominator;
            let mut c = Check::absolute(suite, nv, "levy_worst_trial_above_bound", e.per_trial_min, bound, 0.01);
            c.deviation = (bound - e.per_trial_min).max(0.0);
            c.pass = c.deviation <= c.tolerance;
            out.push(c);
        }
        Suite::Frequencies => {
            // Σ_{M=N}^{L} V_N(M) telescopes to 1 - ln(1+1/(L+1))/g(N)
            let last = nv + 10_000;
            let head = measure::neumaier((nv..=last).rev().map(|m| measure::digit_weight(n, m)));
            let tail = (1.0 / (last as f64 + 1.0)).ln_1p() / measure::log_norm(n);
            out.push(Check::absolute(suite, nv, "frequencies_sum_to_one", head + tail, 1.0, 1e-12));
            let ratio = |k: NIndex| measure::frequency(k, nv + 5).and_then(|a| Ok(a / measure::frequency(k, nv + 7)?));
            let one = NIndex::new(1)?;
            out.push(Check::absolute(suite, nv, "frequency_ratio_vs_n1", ratio(n)?, ratio(one)?, 1e-14));
            for m in nv..nv + 5 {
                let e = estimate(Observable::DigitIndicator(m))?;
                // rarer digits get a 4-standard-error band when that is wider
                let mut c = Check::relative(suite, &e, tol);
                c.pass = c.pass || e.abs_dev <= 4.0 * e.std_error;
                out.push(c);
            }
        }
        Suite::Bounds => {
            let b = measure::lower_bounds(n);
            let lhs = 2.0 * b.denominator - n.as_f64().ln();
            out.push(Check::absolute(suite, nv, "bound_identity", lhs, b.lyapunov, 1e-12));
            let a = lab::bound_achievement(n, depth)?;
            for e in [&a.lyapunov, &a.denominator] {
                out.push(Check::absolute(suite, nv, &e.quantity, e.empirical, e.target, tol));
            }
        }
        Suite::Ulam => {
            let model = ulam::build_model(n, cells, None)?;
            out.push(Check::absolute(suite, nv, "ulam_l1_error", model.l1_error, 0.0, tol));
            out.push(Check::absolute(suite, nv, "ulam_row_sums", model.max_row_defect(), 0.0, 1e-12));
            out.push(Check::absolute(suite, nv, "ulam_stationarity", model.residual, 0.0, 1e-12));
        }
    }
    Ok(out)
}

fn config_json(cfg: &RunConfig, format: Format) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    v["format"] = json!(format);
    v
}

fn sci(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders an outcome in the requested format.
pub fn render(cfg: &RunConfig, outcome: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => Ok(render_json(cfg, outcome, format)),
        Format::Csv => render_csv(outcome),
        Format::Plain => Ok(render_plain(outcome)),
    }
}

fn render_json(cfg: &RunConfig, outcome: &Outcome, format: Format) -> String {
    let config = config_json(cfg, format);
    let doc = match outcome {
        Outcome::Expand { x, expansion, table } => json!({
            "config": config,
            "results": [{
                "x": x,
                "n": expansion.n,
                "coeffs": expansion.coeffs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
                "terminated": expansion.terminated,
                "convergents": table,
            }],
        }),
        Outcome::Constants(reports) => {
            let rows: Vec<Value> = reports
                .iter()
                .map(|r| {
                    let mut m = serde_json::Map::new();
                    m.insert("n".into(), json!(r.n));
                    for q in r.quantities() {
                        m.insert(q.key, json!(q.value));
                    }
                    Value::Object(m)
                })
                .collect();
            json!({ "config": config, "results": rows })
        }
        Outcome::Verify(checks) => json!({
            "config": config,
            "results": checks,
            "summary": {
                "checks": checks.len(),
                "failed": checks.iter().filter(|c| !c.pass).count(),
                "pass": outcome.passed(),
            },
        }),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
    s.push('\n');
    s
}

fn render_csv(outcome: &Outcome) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidConfig(format!("csv: {e}"));
    match outcome {
        Outcome::Expand { x, expansion, table } => {
            w.write_record(["x", "n_index", "n", "digit", "A", "B", "reduced", "abs_error", "terminated"])
                .map_err(io)?;
            for r in table {
                w.write_record([
                    x.to_string(),
                    expansion.n.to_string(),
                    r.n.to_string(),
                    r.digit.clone(),
                    r.a.clone(),
                    r.b.clone(),
                    r.reduced.clone(),
                    sci(r.abs_error),
                    expansion.terminated.to_string(),
                ])
                .map_err(io)?;
            }
        }
        Outcome::Constants(reports) => {
            w.write_record(["n", "quantity", "value"]).map_err(io)?;
            for r in reports {
                for q in r.quantities() {
                    w.write_record([r.n.to_string(), q.key, q.value.to_string()]).map_err(io)?;
                }
            }
        }
        Outcome::Verify(checks) => {
            w.write_record([
                "suite", "n", "check", "value", "target", "deviation", "tolerance", "std_error", "pass",
            ])
            .map_err(io)?;
            for c in checks {
                w.write_record([
                    json!(c.suite).as_str().unwrap_or_default().to_string(),
                    c.n.to_string(),
                    c.check.clone(),
                    sci(c.value),
                    sci(c.target),
                    sci(c.deviation),
                    sci(c.tolerance),
                    c.std_error.map(sci).unwrap_or_default(),
                    c.pass.to_string(),
                ])
                .map_err(io)?;
            }
        }
    }
    let bytes = w.into_inner().map_err(|e| Error::InvalidConfig(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn render_plain(outcome: &Outcome) -> String {
    use std::fmt::Write as _;
    let mut s = String::new();
    match outcome {
        Outcome::Expand { x, expansion, table } => {
            let digits: Vec<String> = expansion.coeffs.iter().map(|d| d.to_string()).collect();
            let _ = writeln!(s, "x = {x}  N = {}", expansion.n);
            let _ = writeln!(s, "digits: [{}]", digits.join(", "));
            let _ = writeln!(s, "terminated: {}", expansion.terminated);
            if !table.is_empty() {
                let _ = writeln!(s, "{:>5}  {:>10}  {:>12}  {:>12}  {:>16}  {:>10}", "n", "a_n", "A_n", "B_n", "A_n/B_n", "|x-A/B|");
                for r in table {
                    let _ = writeln!(
                        s,
                        "{:>5}  {:>10}  {:>12}  {:>12}  {:>16}  {:>10.3e}",
                        r.n, r.digit, r.a, r.b, r.reduced, r.abs_error
                    );
                }
            }
        }
        Outcome::Constants(reports) => {
            for r in reports {
                let _ = writeln!(s, "N = {}", r.n);
                for q in r.quantities() {
                    let value = match q.value {
                        QuantityValue::Finite(v) => format!("{v:.12}"),
                        other => other.to_string(),
                    };
                    let _ = writeln!(s, "  {:<28} {value}", q.key);
                }
            }
        }
        Outcome::Verify(checks) => {
            for c in checks {
                let _ = writeln!(
                    s,
                    "[{}] {:<12} N={:<4} {:<32} value={:.9} target={:.9} dev={:.3e} tol={:.1e}",
                    if c.pass { "PASS" } else { "FAIL" },
                    json!(c.suite).as_str().unwrap_or_default(),
                    c.n,
                    c.check,
                    c.value,
                    c.target,
                    c.deviation,
                    c.tolerance
                );
            }
            let failed = checks.iter().filter(|c| !c.pass).count();
            let _ = writeln!(
                s,
                "{}: {} checks, {failed} failed",
                if failed == 0 { "PASS" } else { "FAIL" },
                checks.len()
            );
        }
    }
    s
}

/// Parses arguments, runs, writes the report; returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_cli(&cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

fn run_cli(cli: &Cli) -> Result<bool> {
    let cfg = cli.command.resolve()?;
    let work = || -> Result<(String, bool)> {
        let outcome = execute(&cfg)?;
        Ok((render(&cfg, &outcome, cli.format)?, outcome.passed()))
    };
    let (text, passed) = match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?
            .install(work)?,
        None => work()?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::InvalidConfig(format!("cannot write {}: {e}", path.display())))?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Error::InvalidConfig(format!("stdout: {e}")))?;
        }
    }
    Ok(passed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn n_lists() {
        assert_eq!(parse_n_list("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_n_list("1,2, 5").unwrap(), vec![1, 2, 5]);
        assert_eq!(parse_n_list("1000000").unwrap(), vec![1_000_000]);
        for bad in ["0", "3..1", "a", "1..", "", "1..1000000"] {
            assert!(parse_n_list(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn verify_defaults_resolve_per_suite() {
        let cli = Cli::try_parse_from(["ncfrac", "verify", "ulam"]).unwrap();
        let RunConfig::Verify { n, tol, cells, .. } = cli.command.resolve().unwrap() else {
            panic!()
        };
        assert_eq!((n, tol, cells), (vec![1, 2, 3, 5, 10], 0.01, 512));
    }

    #[test]
    fn negative_orders_parse() {
        let cli = Cli::try_parse_from(["ncfrac", "constants", "--r", "-1,0.5,1"]).unwrap();
        let RunConfig::Constants { r, .. } = cli.command.resolve().unwrap() else {
            panic!()
        };
        assert_eq!(r, vec![-1.0, 0.5, 1.0]);
    }

    #[test]
    fn expand_outcome_and_domain_errors() {
        let cfg = RunConfig::Expand {
            x: "2/3".into(),
            n: 1,
            max_terms: 10,
        };
        let Outcome::Expand { table, .. } = execute(&cfg).unwrap() else {
            panic!()
        };
        let reduced: Vec<&str> = table.iter().map(|r| r.reduced.as_str()).collect();
        assert_eq!(reduced, ["1/1", "2/3"]);
        for x in ["2/0", "3/2", "0.5"] {
            let cfg = RunConfig::Expand {
                x: x.into(),
                n: 1,
                max_terms: 10,
            };
            assert!(execute(&cfg).is_err(), "{x}");
        }
    }

    #[test]
    fn bounds_suite_passes_at_default_depth() {
        let cli = Cli::try_parse_from(["ncfrac", "verify", "bounds"]).unwrap();
        let outcome = execute(&cli.command.resolve().unwrap()).unwrap();
        assert!(outcome.passed());
    }
}
