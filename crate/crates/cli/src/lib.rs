//! Command-line front end: argument grammar, dispatch and report emission.

pub mod commands;
pub mod report;
pub mod suites;

use std::fs;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use report::RunReport;

#[derive(Parser, Debug)]
#[command(name = "minmod", version, about = "Exact and numeric checks for the (2m,1) minimal model")]
pub struct Cli {
    /// Seed for randomized property checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Critical potential, T_c, γ^{2m} and the curve coincidence.
    Curve {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// String equation in normal form and its u₀ relation.
    Stringeq {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        times: Option<String>,
    },
    /// One correlator from topological recursion.
    Tr {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        u0: String,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        at: Option<String>,
    },
    /// Polynomiality of one loop equation at given spectator points.
    Loopcheck {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        u0: String,
        #[arg(long)]
        g: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value = "")]
        points: String,
    },
    /// Kernel and determinantal-formula evaluations from a JSON file.
    Detform {
        #[arg(long, value_parser = ["k0", "w2", "connected", "detprime"])]
        op: String,
        #[arg(long)]
        input: String,
    },
    /// Endpoint grid near T_c and the fitted scaling data.
    Dscale {
        #[arg(long)]
        m: usize,
        #[arg(long, allow_hyphen_values = true)]
        b: String,
        #[arg(long, allow_hyphen_values = true)]
        eps: String,
        #[arg(long, default_value_t = 4)]
        decades: usize,
        #[arg(long, default_value_t = 5)]
        per_decade: usize,
        #[arg(long)]
        out: Option<String>,
    },
    /// Run a property suite.
    Verify {
        #[arg(long, value_parser = suites::SUITES)]
        suite: String,
        /// Include the double-scaling grid in `all`.
        #[arg(long)]
        full: bool,
    },
}

/// Output of one invocation: text for standard output and the exit status.
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

fn emit(r: RunReport) -> Outcome {
    Outcome { code: r.exit_code(), stdout: r.to_json(), stderr: String::new() }
}

fn usage_error(msg: String) -> Outcome {
    Outcome { stdout: String::new(), stderr: format!("error: {msg}\n"), code: 2 }
}

pub fn dispatch(cli: Cli) -> Outcome {
    let seed = cli.seed;
    let res = match cli.command {
        Command::Curve { m, b, eps, format } => commands::curve(m, &b, &eps).map(|r| match format {
            Format::Json => emit(r),
            Format::Csv => Outcome { code: r.exit_code(), stdout: commands::curve_csv(&r), stderr: String::new() },
        }),
        Command::Stringeq { m, times } => commands::stringeq(m, times.as_deref()).map(emit),
        Command::Tr { m, u0, g, n, at } => commands::tr(m, &u0, g, n, at.as_deref(), seed).map(emit),
        Command::Loopcheck { m, u0, g, n, points } => commands::loopcheck(m, &u0, g, n, &points).map(emit),
        Command::Detform { op, input } => commands::detform(&op, &input).map(emit),
        Command::Dscale { m, b, eps, decades, per_decade, out } => {
            commands::dscale(m, &b, &eps, decades, per_decade).and_then(|d| {
                if let (Some(path), Some(csv)) = (&out, &d.csv) {
                    fs::write(path, csv).map_err(|e| format!("{path}: {e}"))?;
                }
                Ok(emit(d.report))
            })
        }
        Command::Verify { suite, full } => {
            let mut r = RunReport::new("verify", json!({"suite": suite, "full": full, "seed": seed}));
            match suites::run(&suite, seed, full) {
                Some(c) => {
                    r.checks = c;
                    Ok(emit(r))
                }
                None => Err(format!("unknown suite {suite}")),
            }
        }
    };
    res.unwrap_or_else(usage_error)
}

/// Parse arguments and run; clap usage errors exit with status 2.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => dispatch(cli),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Outcome { stdout: text, stderr: String::new(), code }
            } else {
                Outcome { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
