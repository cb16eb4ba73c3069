//! Command-line front end.
//!
//! Settings come from an optional JSON file (`--config`) overlaid by flags;
//! a flag always wins over the file. Output is CSV on stdout or at `--out`.
//! Exit codes: 0 success, 2 configuration or usage error, 1 anything else.

mod output;

pub use output::{emit_ages, emit_comparison, emit_csv, emit_lemma, format_value};

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::analytic::{analytic_ages, lemma_envelopes, lemma_sum};
use crate::error::{Error, Result, Violations};
use crate::experiments::{
    compare_sim_analytic, figure_preset, geometric_grid, sweep, Figure, NodeSelector, SimParams, SweepResult, SweepRow,
};
use crate::model::{validate_config, CheckedConfig, RawConfig};
use crate::simulator::{replicate, SimConfig};

#[derive(Debug, Parser)]
#[command(name = "agl", version, about = "Age of gossip under timestomping adversaries")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Exact expected age of every node.
    Analytic(Common),
    /// Replicated simulation of one network.
    Simulate(Common),
    /// One node's age over a range of network sizes.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Sizes: `10,100,1000` or geometric `min:max:factor`.
        #[arg(long)]
        n_values: String,
        /// Node: an index, `n`, `A`, `pow:ALPHA` or `transition:ALPHA`.
        #[arg(long, default_value = "1")]
        node: String,
        /// Shorthand for `--node pow:ALPHA`.
        #[arg(long)]
        alpha: Option<f64>,
        /// Add simulation columns.
        #[arg(long)]
        with_sim: bool,
    },
    /// Plot-ready data for one of the preset figures.
    Figure {
        /// fig4 … fig10.
        id: String,
        #[command(flatten)]
        common: Common,
        /// Add simulation columns for small n.
        #[arg(long)]
        with_sim: bool,
    },
    /// Prefix-product sum and its Gaussian envelopes.
    Lemma {
        #[command(flatten)]
        common: Common,
        /// Number of terms; defaults to n.
        #[arg(long)]
        n0: Option<usize>,
    },
    /// Per-node simulated vs exact ages.
    Compare(Common),
}

#[derive(Debug, Args)]
struct Common {
    /// JSON file with any of the keys below; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    kind: Option<String>,
    #[arg(long)]
    honest: bool,
    #[arg(long, allow_negative_numbers = true)]
    n: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    lambda: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    p: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    horizon: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    warmup: Option<f64>,
    #[arg(long, env = "AGL_SEED")]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// explicit-flip or pre-thinned.
    #[arg(long)]
    coin_mode: Option<String>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Print the effective configuration as JSON and exit.
    #[arg(long)]
    dump_config: bool,
}

impl Common {
    /// File overlaid by flags, plus any flag values that failed to parse.
    fn raw(&self) -> Result<(RawConfig, Violations)> {
        let file = match &self.config {
            Some(path) => RawConfig::from_json(&fs::read_to_string(path)?)?,
            None => RawConfig::default(),
        };
        let mut v = Violations::default();
        let kind = self
            .kind
            .as_deref()
            .and_then(|k| k.parse().map_err(|e: String| v.push(e)).ok());
        let coin_mode = self
            .coin_mode
            .as_deref()
            .and_then(|c| c.parse().map_err(|e: String| v.push(e)).ok());
        let flags = RawConfig {
            kind,
            honest: self.honest.then_some(true),
            n: self.n,
            lambda: self.lambda,
            p: self.p,
            q: self.q,
            horizon: self.horizon,
            warmup: self.warmup,
            seed: self.seed,
            reps: self.reps,
            coin_mode,
        };
        Ok((file.overlay(flags), v))
    }

    /// Validates with `n` filled in from `fallback` when neither file nor flags set it.
    fn checked(&self, fallback_n: Option<usize>) -> Result<CheckedConfig> {
        let (mut raw, unparsed) = self.raw()?;
        if raw.n.is_none() {
            raw.n = fallback_n.map(|n| n as i64);
        }
        let checked = validate_config(&raw);
        if unparsed.is_empty() {
            return checked;
        }
        Err(merge(vec![Some(Error::InvalidConfig(unparsed)), checked.err()]))
    }
}

fn sim_params(c: &CheckedConfig) -> SimParams {
    SimParams {
        horizon: c.run.horizon,
        warmup: c.run.warmup,
        seed: c.run.seed,
        reps: c.run.reps,
        coin_mode: c.run.coin_mode,
    }
}

/// `10,100,1000` or `min:max:factor`.
pub fn parse_n_values(s: &str) -> Result<Vec<usize>> {
    let bad = |why: String| Error::InvalidConfig(Violations(vec![format!("--n-values {s:?}: {why}")]));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let min = parts[0].trim().parse().map_err(|e| bad(format!("{e}")))?;
        let max = parts[1].trim().parse().map_err(|e| bad(format!("{e}")))?;
        let factor = parts[2].trim().parse().map_err(|e| bad(format!("{e}")))?;
        return geometric_grid(min, max, factor);
    }
    if parts.len() != 1 {
        return Err(bad("expected a comma list or min:max:factor".into()));
    }
    let values = s
        .split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| bad(format!("{x:?}: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    if values.is_empty() {
        return Err(bad("no sizes given".into()));
    }
    Ok(values)
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let common = match &cmd {
        Command::Analytic(c) | Command::Simulate(c) | Command::Compare(c) => c,
        Command::Sweep { common, .. } | Command::Figure { common, .. } | Command::Lemma { common, .. } => common,
    };
    let mut buf = Vec::new();

    match &cmd {
        Command::Analytic(c) | Command::Simulate(c) | Command::Compare(c) => {
            let cfg = c.checked(None)?;
            if c.dump_config {
                writeln!(buf, "{}", cfg.to_json()?)?;
            } else if matches!(cmd, Command::Analytic(_)) {
                emit_ages(&analytic_ages(&cfg.spec)?, &mut buf)?;
            } else if matches!(cmd, Command::Simulate(_)) {
                let ages = analytic_ages(&cfg.spec)?;
                let report = replicate(&SimConfig::from(&cfg), cfg.run.reps)?;
                let n = cfg.spec.n;
                let mut rows = Vec::new();
                for i in 1..=n {
                    let (mean, ci) = report.node(i);
                    rows.push(SweepRow {
                        series: None,
                        n,
                        node_label: if i == n { "n".into() } else { i.to_string() },
                        analytic: ages.node_age(i),
                        sim_mean: Some(mean),
                        sim_ci95: ci,
                        bound_lower: None,
                        bound_upper: None,
                    });
                }
                if let (Some(a), Some(mean)) = (ages.v_adversary, report.mean_age_adversary) {
                    rows.push(SweepRow {
                        series: None,
                        n,
                        node_label: "A".into(),
                        analytic: a,
                        sim_mean: Some(mean),
                        sim_ci95: report.ci95_adversary,
                        bound_lower: None,
                        bound_upper: None,
                    });
                }
                emit_csv(
                    &SweepResult {
                        rows,
                        ..Default::default()
                    },
                    &mut buf,
                )?;
            } else {
                let cmp = compare_sim_analytic(&cfg.spec, &sim_params(&cfg))?;
                writeln!(stderr, "max relative error {}", format_value(cmp.max_rel_err))?;
                emit_comparison(&cmp, &mut buf)?;
            }
        }
        Command::Sweep {
            common: c,
            n_values,
            node,
            alpha,
            with_sim,
        } => {
            let ns = parse_n_values(n_values);
            let selector = match alpha {
                Some(a) => format!("pow:{a}").parse::<NodeSelector>(),
                None => node.parse::<NodeSelector>(),
            };
            let cfg = c.checked(ns.as_ref().ok().and_then(|v| v.iter().copied().max()));
            let (ns, selector, cfg) = collect3(ns, selector, cfg)?;
            if c.dump_config {
                writeln!(buf, "{}", cfg.to_json()?)?;
            } else {
                let sim = with_sim.then(|| sim_params(&cfg));
                let result = sweep(&cfg.spec, &ns, selector, sim.as_ref())?;
                for (n, why) in &result.skipped {
                    writeln!(stderr, "skipped n={n}: {why}")?;
                }
                emit_csv(&result, &mut buf)?;
            }
        }
        Command::Figure {
            id,
            common: c,
            with_sim,
        } => {
            let figure = id.parse::<Figure>();
            let cfg = c.checked(Some(2));
            let (figure, cfg) = match (figure, cfg) {
                (Ok(f), Ok(c)) => (f, c),
                (f, c) => return Err(merge(vec![f.err(), c.err()])),
            };
            if c.dump_config {
                writeln!(buf, "{}", cfg.to_json()?)?;
            } else {
                let sim = with_sim.then(|| sim_params(&cfg));
                let result = figure_preset(figure, sim.as_ref())?;
                for (name, fit) in &result.fits {
                    writeln!(
                        stderr,
                        "{figure} {name}: fitted exponent {}",
                        format_value(fit.exponent)
                    )?;
                }
                emit_csv(&result, &mut buf)?;
            }
        }
        Command::Lemma { common: c, n0 } => {
            let (raw, unparsed) = c.raw()?;
            let mut v = unparsed;
            let n = match raw.n {
                Some(n) if n >= 1 => n as usize,
                Some(n) => {
                    v.push(format!("n={n}: n must be ≥ 1"));
                    1
                }
                None => {
                    v.push("n is required");
                    1
                }
            };
            let n0 = n0.unwrap_or(n);
            if !(1..=n).contains(&n0) {
                v.push(format!("n0={n0}: need 1 ≤ n0 ≤ n"));
            }
            v.into_result()?;
            if c.dump_config {
                writeln!(buf, "{}", serde_json::to_string_pretty(&raw)?)?;
            } else {
                emit_lemma(n, n0, lemma_sum(n, n0), &lemma_envelopes(n, n0), &mut buf)?;
            }
        }
    }

    match &common.out {
        Some(path) => fs::write(path, &buf)?,
        None => stdout.write_all(&buf)?,
    }
    Ok(())
}

/// Folds several independent failures into one, keeping every config violation.
fn merge(errors: Vec<Option<Error>>) -> Error {
    let mut v = Violations::default();
    let mut other = None;
    for e in errors.into_iter().flatten() {
        match e {
            Error::InvalidConfig(vs) => v.0.extend(vs.0),
            e => other = other.or(Some(e)),
        }
    }
    match other {
        Some(e) if v.is_empty() => e,
        _ => Error::InvalidConfig(v),
    }
}

fn collect3<A, B, C>(a: Result<A>, b: Result<B>, c: Result<C>) -> Result<(A, B, C)> {
    match (a, b, c) {
        (Ok(a), Ok(b), Ok(c)) => Ok((a, b, c)),
        (a, b, c) => Err(merge(vec![a.err(), b.err(), c.err()])),
    }
}

/// Runs one invocation. `args` includes the program name.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(()) => 0,
        Err(Error::InvalidConfig(v)) => {
            for msg in v.iter() {
                let _ = writeln!(stderr, "error: {msg}");
            }
            2
        }
        Err(e) if e.is_config() => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            1
        }
    }
}

/// Entry point for the binary.
pub fn main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("agl").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn n_values_forms() {
        assert_eq!(parse_n_values("10, 20,30").unwrap(), vec![10, 20, 30]);
        assert_eq!(parse_n_values("10:80:2").unwrap(), vec![10, 20, 40, 80]);
        assert!(parse_n_values("10:x:2").is_err());
        assert!(parse_n_values("1:2").is_err());
    }

    #[test]
    fn analytic_rows() {
        let (code, out, _) = call(&["analytic", "--kind", "fcn-capture", "--n", "3", "--p", "1", "--q", "1"]);
        assert_eq!(code, 0);
        assert_eq!(out, "node_label,v\n1,2.775\n2,2.775\nn,3\n");
    }

    #[test]
    fn violations_go_to_stderr_with_exit_2() {
        let (code, out, err) = call(&["analytic", "--n", "1", "--p", "1.5"]);
        assert_eq!(code, 2);
        assert!(out.is_empty());
        assert!(
            err.contains("n must be ≥ 2") && err.contains("probability out of range"),
            "{err}"
        );
        assert_eq!(call(&["frobnicate"]).0, 2);
    }
}
