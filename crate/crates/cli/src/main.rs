//! `verify`: runs the verification pipelines and writes a JSON report.
//!
//! Exit codes: 0 when every trial passes, 1 on a logic failure or when too
//! many trials exhaust their resampling budget, 2 on a usage error.

use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::SystemTime;

use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::Serialize;
use spincheck::pipelines::{run_trials, CheckReport, PipelineConfig, PipelineKind, Status, Tally};
use spincheck::{Field, DEFAULT_PRIME};

#[derive(Debug, Parser)]
#[command(
    name = "verify",
    version,
    about = "Exact verification pipelines for low-genus spin curves"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    options: Options,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Genus-4 3-spin forward construction with fiber and inverse checks.
    Genus4Spin3,
    /// Forward then inverse, comparing the recovered quadric pencil.
    Genus4Spin3Roundtrip,
    /// Seed-independent checks on the invariant system I.
    Genus4OddInvariants,
    /// A sampled smooth member of I and its tritangency checks.
    Genus4OddSample,
    /// Genus-3 odd 4-spin: nodal curves and the plane system Sigma.
    Genus3Spin4Odd,
    /// Genus-3 even 4-spin: quartics through 4d and the torsion pencil.
    Genus3Spin4Even,
    /// The four pipelines in sequence.
    All,
}

impl Command {
    fn kinds(self) -> Vec<PipelineKind> {
        match self {
            Command::Genus4Spin3 => vec![PipelineKind::Genus4Spin3],
            Command::Genus4Spin3Roundtrip => vec![PipelineKind::Genus4Spin3Roundtrip],
            Command::Genus4OddInvariants => vec![PipelineKind::Genus4OddInvariants],
            Command::Genus4OddSample => vec![PipelineKind::Genus4OddSample],
            Command::Genus3Spin4Odd => vec![PipelineKind::Genus3Spin4Odd],
            Command::Genus3Spin4Even => vec![PipelineKind::Genus3Spin4Even],
            Command::All => PipelineKind::SUITE.to_vec(),
        }
    }

    fn name(self) -> &'static str {
        match self {
            Command::All => "all",
            other => other.kinds()[0].name(),
        }
    }
}

#[derive(Debug, Args)]
struct Options {
    /// Odd prime > 3 defining the base field.
    #[arg(long, global = true, conflicts_with = "rational")]
    prime: Option<u64>,
    /// Work over the rationals (symbolic pipelines only).
    #[arg(long, global = true)]
    rational: bool,
    /// First seed.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Number of consecutive seeds.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    trials: u64,
    /// Rejected samples allowed per stage.
    #[arg(long, global = true, default_value_t = spincheck::pipelines::DEFAULT_RESAMPLE_CAP)]
    resample_cap: usize,
    /// Output path; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// JSON output (default).
    #[arg(long, global = true, conflicts_with = "human")]
    json: bool,
    /// Human-readable summary instead of JSON.
    #[arg(long, global = true)]
    human: bool,
    /// Fraction of trials allowed to exhaust before the run fails.
    #[arg(long, global = true, default_value_t = 0.1)]
    exhaust_tolerance: f64,
}

#[derive(Debug, Serialize)]
struct RunConfig {
    pipeline: &'static str,
    prime: Field,
    seed: u64,
    trials: u64,
    resample_cap: usize,
    exhaust_tolerance: f64,
}

#[derive(Debug, Serialize)]
struct PipelineRun {
    name: &'static str,
    trials: Vec<CheckReport>,
}

#[derive(Debug, Serialize)]
struct Summary {
    passed: usize,
    failed: usize,
    exhausted: usize,
    exit_code: u8,
}

#[derive(Debug, Serialize)]
struct Report {
    tool_version: &'static str,
    timestamp: String,
    config: RunConfig,
    pipelines: Vec<PipelineRun>,
    summary: Summary,
}

fn usage_error(msg: String) -> ! {
    Cli::command().error(ErrorKind::ValueValidation, msg).exit()
}

fn field_of(opts: &Options, kinds: &[PipelineKind]) -> Field {
    if opts.rational {
        if let Some(k) = kinds.iter().find(|k| !k.supports_rational()) {
            usage_error(format!(
                "`{}` samples random points and needs --prime",
                k.name()
            ));
        }
        return Field::Rational;
    }
    let p = opts.prime.unwrap_or(DEFAULT_PRIME);
    match Field::prime(p) {
        Ok(f) if p > 3 => f,
        _ => usage_error(format!("--prime {p} is not an odd prime > 3")),
    }
}

fn exit_code(tally: &Tally, tolerance: f64) -> u8 {
    let exhausted_fraction = tally.exhausted as f64 / tally.total().max(1) as f64;
    if tally.failed > 0 || exhausted_fraction > tolerance {
        1
    } else {
        0
    }
}

fn human(report: &Report) -> String {
    let mut out = String::new();
    let c = &report.config;
    let prime = serde_json::to_string(&c.prime).unwrap_or_default();
    out += &format!(
        "verify {} | field {} | seeds {}..{} | cap {}\n",
        c.pipeline,
        prime.trim_matches('"'),
        c.seed,
        c.seed + c.trials - 1,
        c.resample_cap
    );
    for p in &report.pipelines {
        let t = Tally::of(&p.trials);
        out += &format!(
            "\n{}: {} passed, {} failed, {} exhausted\n",
            p.name, t.passed, t.failed, t.exhausted
        );
        for r in &p.trials {
            let seed = r.seed.map_or("-".to_string(), |s| s.to_string());
            let status = match r.status {
                Status::Passed => "pass",
                Status::Failed => "FAIL",
                Status::Exhausted => "exhausted",
            };
            let ok = r.checks.iter().filter(|c| c.pass).count();
            out += &format!(
                "  seed {seed:>4}  {status:<9}  {ok}/{} checks  {} resamples\n",
                r.checks.len(),
                r.resamples
            );
            for c in r.checks.iter().filter(|c| !c.pass) {
                out += &format!(
                    "    {}: expected {}, got {} ({})\n",
                    c.name, c.expected, c.actual, c.anchor
                );
            }
            if let Some(e) = &r.error {
                out += &format!("    error: {e}\n");
            }
        }
    }
    let s = &report.summary;
    out += &format!(
        "\nsummary: {} passed, {} failed, {} exhausted, exit {}\n",
        s.passed, s.failed, s.exhausted, s.exit_code
    );
    out
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = &cli.options;
    if !(0.0..=1.0).contains(&opts.exhaust_tolerance) {
        usage_error("--exhaust-tolerance must lie in [0, 1]".into());
    }
    let kinds = cli.command.kinds();
    let field = field_of(opts, &kinds);
    let base = PipelineConfig::new(field, opts.seed).with_cap(opts.resample_cap);

    let pipelines: Vec<PipelineRun> = kinds
        .iter()
        .map(|&k| PipelineRun {
            name: k.name(),
            trials: run_trials(k, base, opts.trials),
        })
        .collect();
    let mut tally = Tally::default();
    for p in &pipelines {
        tally.add(Tally::of(&p.trials));
    }
    let code = exit_code(&tally, opts.exhaust_tolerance);
    let report = Report {
        tool_version: env!("CARGO_PKG_VERSION"),
        timestamp: humantime::format_rfc3339_seconds(SystemTime::now()).to_string(),
        config: RunConfig {
            pipeline: cli.command.name(),
            prime: field,
            seed: opts.seed,
            trials: opts.trials,
            resample_cap: opts.resample_cap,
            exhaust_tolerance: opts.exhaust_tolerance,
        },
        pipelines,
        summary: Summary {
            passed: tally.passed,
            failed: tally.failed,
            exhausted: tally.exhausted,
            exit_code: code,
        },
    };

    let text = if opts.human {
        human(&report)
    } else {
        match serde_json::to_string_pretty(&report) {
            Ok(s) => s + "\n",
            Err(e) => {
                eprintln!("verify: cannot serialize report: {e}");
                return ExitCode::from(1);
            }
        }
    };
    let written = match &opts.out {
        Some(path) => File::create(path).and_then(|mut f| f.write_all(text.as_bytes())),
        None => io::stdout().lock().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("verify: cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
