use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, ValueEnum};
use symgc::solver::Solver;
use symgc_cli::{run, Format, Mode, RunConfig, INPUT_ERROR};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    Check,
    Model,
    Gamma,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
    Dot,
}

/// Builds the symbolic model of a term and checks it for reachable aborts.
#[derive(Debug, Parser)]
#[command(name = "symgc", version)]
struct Args {
    /// Term file holding a judgement `ctx |- term : type`.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "check")]
    mode: ModeArg,
    /// `builtin` or `exec:<command>` for an SMT-LIB solver reading stdin.
    #[arg(long, default_value = "builtin")]
    solver: String,
    /// Search range of the built-in solver.
    #[arg(long, default_value_t = 64)]
    bound: i64,
    /// Longest play considered, in letters.
    #[arg(long = "max-len", default_value_t = 64)]
    max_len: usize,
    /// Data domain size for gamma mode.
    #[arg(long)]
    finite: Option<usize>,
    /// Abort on out-of-range array indices.
    #[arg(long = "bounds-check")]
    bounds_check: bool,
    #[arg(long = "no-simplify")]
    no_simplify: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: FormatArg,
    /// Write the model's DOT to this file.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Print elapsed time on stderr.
    #[arg(long)]
    timing: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let Some(solver) = Solver::parse(&args.solver, i128::from(args.bound)) else {
        eprintln!("unknown solver `{}`", args.solver);
        return ExitCode::from(INPUT_ERROR as u8);
    };
    let cfg = RunConfig {
        input: args.input,
        mode: match args.mode {
            ModeArg::Check => Mode::Check,
            ModeArg::Model => Mode::Model,
            ModeArg::Gamma => Mode::Gamma,
        },
        solver,
        max_len: args.max_len,
        finite: args.finite,
        bounds_check: args.bounds_check,
        simplify: !args.no_simplify,
        format: match args.format {
            FormatArg::Text => Format::Text,
            FormatArg::Structured => Format::Structured,
            FormatArg::Dot => Format::Dot,
        },
        dot: args.dot,
    };
    let start = Instant::now();
    let out = run(&cfg);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    if args.timing {
        eprintln!("time: {:.3}s", start.elapsed().as_secs_f64());
    }
    ExitCode::from(out.code as u8)
}
