//! Thin command-line front end over the library.
//!
//! Exit codes: 0 success, 1 verification counterexample, 2 usage or parse
//! error, 3 resource cap exceeded.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;

use popcorn_pyramids::cli::{
    cmd_count, cmd_estimate, cmd_formula, cmd_holder, cmd_verify, EstimateTarget, OutputFormat,
    RunConfig, VerifySuite,
};
use popcorn_pyramids::error::Error;
use popcorn_pyramids::exact::parse_ratio;
use popcorn_pyramids::sets::{Variant, DEFAULT_POINT_CAP};

fn ratio_arg(s: &str) -> Result<BigRational, String> {
    parse_ratio(s).map_err(|e| e.to_string())
}

fn variant_arg(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TargetArg {
    Box,
    Intermediate,
    Assouad,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    DuffinSchaeffer,
    ChungErdos,
    Totient,
    Epsilon,
    Layers,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Height exponent t, as "a/b", an integer or a decimal.
    #[arg(long, value_parser = ratio_arg, default_value = "1")]
    t: BigRational,

    /// Ambient dimension d >= 2.
    #[arg(long, default_value_t = 2)]
    d: u32,

    /// Which set: coprime numerators only (graph) or all tuples (full).
    #[arg(long, value_parser = variant_arg, default_value = "graph")]
    variant: Variant,

    /// Coarsest mesh level (delta = 2^-j).
    #[arg(long = "j-min", default_value_t = 4)]
    j_min: u32,

    /// Finest mesh level.
    #[arg(long = "j-max", default_value_t = 10)]
    j_max: u32,

    /// Interpolation parameter theta in [0,1], as a rational.
    #[arg(long, value_parser = ratio_arg)]
    theta: Option<BigRational>,

    /// Margin for admissible layer bands (defaults to half its cap).
    #[arg(long, value_parser = ratio_arg)]
    epsilon: Option<BigRational>,

    /// Smaller height exponent for the distortion bound.
    #[arg(long, value_parser = ratio_arg)]
    t1: Option<BigRational>,

    /// Larger height exponent for the distortion bound.
    #[arg(long, value_parser = ratio_arg)]
    t2: Option<BigRational>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,

    /// Write output to a file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Seed for sampled probes and verification samples.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Enumeration budget; runs predicted to exceed it abort with exit 3.
    #[arg(long = "max-points", default_value_t = DEFAULT_POINT_CAP)]
    max_points: u64,

    /// Number of sampled window corners for Assouad probing.
    #[arg(long, default_value_t = 64)]
    probes: u32,
}

impl CommonArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            t: self.t.clone(),
            d: self.d,
            variant: self.variant,
            j_min: self.j_min,
            j_max: self.j_max,
            theta: self.theta.clone(),
            epsilon: self.epsilon.clone(),
            t1: self.t1.clone(),
            t2: self.t2.clone(),
            format: match self.format {
                FormatArg::Csv => OutputFormat::Csv,
                FormatArg::Json => OutputFormat::Json,
            },
            seed: self.seed,
            max_points: self.max_points,
            probes: self.probes,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "popcorn",
    about = "Exact covering counts and dimension checks for popcorn pyramid sets",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form dimension report over a theta grid.
    Formula(CommonArgs),
    /// Cover counts for every mesh level in [j-min, j-max], as CSV/JSON.
    Count(CommonArgs),
    /// Run an estimator and compare it with the closed form.
    Estimate {
        #[arg(value_enum)]
        target: TargetArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run an inequality suite; exits 1 when a counterexample appears.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Holder distortion bound between two exponents, plus the ratio curve.
    Holder(CommonArgs),
}

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::Parse(_) | Error::Io(_) => 2,
        Error::Resource(_) => 3,
        Error::Verification(_) => 1,
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match out {
        Some(path) => fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> u8 {
    let (result, out_path) = match &cli.command {
        Command::Formula(common) => (cmd_formula(&common.config()), common.out.clone()),
        Command::Count(common) => (cmd_count(&common.config()), common.out.clone()),
        Command::Estimate { target, common } => {
            let target = match target {
                TargetArg::Box => EstimateTarget::Box,
                TargetArg::Intermediate => EstimateTarget::Intermediate,
                TargetArg::Assouad => EstimateTarget::Assouad,
            };
            (cmd_estimate(&common.config(), target), common.out.clone())
        }
        Command::Holder(common) => (cmd_holder(&common.config()), common.out.clone()),
        Command::Verify { suite, common } => {
            let suite = match suite {
                SuiteArg::DuffinSchaeffer => VerifySuite::DuffinSchaeffer,
                SuiteArg::ChungErdos => VerifySuite::ChungErdos,
                SuiteArg::Totient => VerifySuite::Totient,
                SuiteArg::Epsilon => VerifySuite::Epsilon,
                SuiteArg::Layers => VerifySuite::Layers,
            };
            return match cmd_verify(&common.config(), suite) {
                Ok(report) => {
                    let mut text = report.lines.join("\n");
                    text.push('\n');
                    text.push_str(if report.passed() { "result: PASS\n" } else { "result: FAIL\n" });
                    if emit(common.out.as_ref(), &text).is_err() {
                        return 2;
                    }
                    u8::from(!report.passed())
                }
                Err(err) => {
                    eprintln!("error: {err}");
                    exit_code_for(&err)
                }
            };
        }
    };
    match result {
        Ok(text) => match emit(out_path.as_ref(), &text) {
            Ok(()) => 0,
            Err(err) => {
                eprintln!("error: {err}");
                2
            }
        },
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn main() -> ExitCode {
    ExitCode::from(run(Cli::parse()))
}
