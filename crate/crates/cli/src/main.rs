//! `bimod`: exact verification runs over the `A_{n,m}(V)` library.

mod commands;
mod config;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{CommandFactory, Parser, Subcommand, ValueEnum};

use bimod::bimodule::OKind;
use bimod::report::RunReport;

#[derive(Debug, Parser)]
#[command(name = "bimod", version, about = "Exact checks of the level-changing bimodules of a vertex operator algebra")]
pub struct Cli {
    /// Algebra: heisenberg, virasoro:<c> (universal) or ising.
    #[arg(long, global = true, default_value = "heisenberg")]
    pub voa: String,
    /// Weight up to which the algebra is built; defaults to what the command needs.
    #[arg(long, global = true)]
    pub max_weight: Option<usize>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// `key=value` file of default flags; flags on the command line win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print the JSON report to standard output instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

fn parse_kind(s: &str) -> std::result::Result<OKind, String> {
    OKind::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifySuite {
    /// The four binomial identity families of the formal calculus.
    Binomial,
    /// The two shift identities between products, as vectors.
    Shift,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MembershipSuite {
    Swap,
    Stability,
    Bimodule,
    Phi,
    Descent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RepSuite {
    LevelProduct,
    Omega,
    Annihilation,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep exact identities over a parameter grid.
    Verify {
        #[arg(long, value_enum, default_value_t = VerifySuite::Binomial)]
        suite: VerifySuite,
        #[arg(long, default_value_t = 8)]
        unit_sum: u32,
        #[arg(long, default_value_t = 6)]
        cancellation: u32,
        #[arg(long, default_value_t = 6)]
        reciprocal_l: u32,
        #[arg(long, default_value_t = 12)]
        reciprocal_k: u32,
        #[arg(long, default_value_t = 4)]
        convolution: u32,
        /// Largest basis weight for the shift suite.
        #[arg(long, default_value_t = 5)]
        grid_weight: usize,
        /// Largest level index for the shift suite.
        #[arg(long, default_value_t = 3)]
        max_level: u32,
    },
    /// Evaluate `u *^n_{m,p} v`.
    Product {
        #[arg(long)]
        u: String,
        #[arg(long)]
        v: String,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        p: u32,
        #[arg(long)]
        n: u32,
    },
    /// Rank of a truncated relation space.
    Ospan {
        #[arg(long, value_parser = parse_kind, default_value = "oprime")]
        kind: OKind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cutoff: usize,
        #[arg(long)]
        aux_bound: Option<u32>,
    },
    /// Dimension of `F_W` modulo a relation space, with its value one weight lower.
    QuotientDim {
        #[arg(long, value_parser = parse_kind, default_value = "ofull")]
        kind: OKind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cutoff: usize,
        #[arg(long)]
        aux_bound: Option<u32>,
    },
    /// Seeded membership suites for the product calculus.
    Check {
        #[arg(long, value_enum)]
        suite: MembershipSuite,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 8)]
        headroom_base: usize,
        #[arg(long, default_value_t = 12)]
        headroom_cap: usize,
        #[arg(long, default_value_t = 3)]
        sample_weight: usize,
        #[arg(long, default_value_t = 2)]
        sample_level: u32,
        /// Reduce every row exactly instead of screening modulo a prime first.
        #[arg(long)]
        exact: bool,
    },
    /// Checks of the level operators on a test module.
    RepCheck {
        /// fock:<lambda> or hw:<h>.
        #[arg(long)]
        module: String,
        #[arg(long, value_enum)]
        suite: RepSuite,
        /// Levels of the module to build.
        #[arg(long, default_value_t = 6)]
        levels: usize,
        #[arg(long, default_value_t = 4)]
        grid_weight: usize,
        #[arg(long, default_value_t = 2)]
        max_level: u32,
        #[arg(long, default_value_t = 0)]
        n: u32,
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Weight cap of the modes probing the kernel.
        #[arg(long, default_value_t = 4)]
        probe_weight: usize,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
        #[arg(long, default_value_t = 3)]
        aux_bound: u32,
        #[arg(long, default_value_t = 200)]
        trials: usize,
    },
    /// Build the module induced from a level-`m` module `U` and check its axioms.
    Verma {
        #[arg(long, default_value_t = 0)]
        m: u32,
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[arg(long, default_value_t = 16)]
        cutoff: usize,
        #[arg(long, value_parser = parse_kind, default_value = "oprime")]
        kind: OKind,
        /// Keep only classes of at most this weight as basis vectors.
        #[arg(long)]
        rep_weight: Option<usize>,
        /// JSON file `{"dimension": d, "generators": [{"element": .., "matrix": ..}]}`.
        #[arg(long)]
        u_spec: PathBuf,
        /// Basis elements up to this weight enter the commutator check.
        #[arg(long, default_value_t = 3)]
        probe_weight: usize,
        /// Mode indices run over `-range..=range`.
        #[arg(long, default_value_t = 3)]
        range: i64,
        /// Also check the map to this module sending `U` to its level `m` basis.
        #[arg(long)]
        target: Option<String>,
    },
    /// Compare Ising quotient dimensions with the Hom-space count.
    Structure {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 8)]
        cutoff: usize,
        #[arg(long, value_parser = parse_kind, default_value = "ofull")]
        kind: OKind,
        /// Further cutoffs that must reproduce the dimension.
        #[arg(long, default_value_t = 2)]
        confirm: usize,
    },
    /// Whether an element lies in a truncated relation space.
    Membership {
        #[arg(long, value_parser = parse_kind, default_value = "oprime")]
        kind: OKind,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long)]
        cutoff: usize,
        #[arg(long)]
        aux_bound: Option<u32>,
        #[arg(long)]
        element: String,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Product { .. } => "product",
            Command::Ospan { .. } => "ospan",
            Command::QuotientDim { .. } => "quotient-dim",
            Command::Check { .. } => "check",
            Command::RepCheck { .. } => "rep-check",
            Command::Verma { .. } => "verma",
            Command::Structure { .. } => "structure",
            Command::Membership { .. } => "membership",
        }
    }
}

/// What a command hands back for the report and the summary.
pub struct Outcome {
    pub report: RunReport,
    pub summary: Vec<String>,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<bimod::Error>() {
            return match e {
                bimod::Error::WeightRange { .. } | bimod::Error::LevelRange { .. } => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 2;
        }
    }
    1
}

/// Drops config entries that the chosen subcommand does not accept, so one
/// file can serve several commands. Keys no command accepts are errors.
fn filter_for_command(args: Vec<String>, original: usize) -> Result<Vec<String>> {
    let cmd = Cli::command();
    let anywhere = |key: &str| {
        cmd.get_arguments()
            .chain(cmd.get_subcommands().flat_map(|s| s.get_arguments()))
            .any(|a| a.get_long() == Some(key))
    };
    let sub = args[..original].iter().find_map(|a| cmd.find_subcommand(a));
    let accepts = |key: &str| {
        cmd.get_arguments().any(|a| a.get_long() == Some(key))
            || sub.is_some_and(|s| s.get_arguments().any(|a| a.get_long() == Some(key)))
    };
    let (head, tail) = args.split_at(original);
    let mut out = head.to_vec();
    let mut i = 0;
    while i < tail.len() {
        let key = tail[i].trim_start_matches("--");
        let has_value = tail.get(i + 1).is_some_and(|v| !v.starts_with("--"));
        let width = if has_value { 2 } else { 1 };
        if !anywhere(key) {
            anyhow::bail!("config key `{key}` is not a flag of any command");
        }
        if accepts(key) {
            out.extend_from_slice(&tail[i..i + width]);
        }
        i += width;
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<bool> {
    let start = Instant::now();
    let Outcome { mut report, summary } = commands::dispatch(&cli)?;
    report.timings.insert("total".into(), start.elapsed().as_secs_f64());
    if let Some(path) = &cli.out {
        fs::write(path, report.to_json() + "\n").with_context(|| format!("writing report to {}", path.display()))?;
    }
    if cli.json {
        println!("{}", report.to_json());
    } else {
        for line in &summary {
            println!("{line}");
        }
        println!("{}: {}", report.command, if report.passed { "PASS" } else { "FAIL" });
    }
    Ok(report.passed)
}

fn main() -> ExitCode {
    let raw: Vec<String> = std::env::args().collect();
    let original = raw.len();
    let args = match config::apply(raw).and_then(|a| filter_for_command(a, original)) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn config_entries_for_other_commands_are_dropped() {
        let args: Vec<String> = ["bimod", "verify", "--trials", "5", "--voa", "ising"].map(String::from).to_vec();
        assert_eq!(
            filter_for_command(args, 2).unwrap(),
            ["bimod", "verify", "--voa", "ising"].map(String::from).to_vec()
        );
    }

    #[test]
    fn config_keys_unknown_to_every_command_are_errors() {
        let args: Vec<String> = ["bimod", "verify", "--trails", "5"].map(String::from).to_vec();
        assert!(filter_for_command(args, 2).is_err());
    }

    #[test]
    fn unknown_flags_on_the_command_line_are_kept() {
        let args: Vec<String> = ["bimod", "verify", "--bogus", "1"].map(String::from).to_vec();
        assert_eq!(filter_for_command(args.clone(), 4).unwrap(), args);
    }
}
