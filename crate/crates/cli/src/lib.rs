//! Driver behind the `symgc` binary: load a term file, build its model and
//! check it.

use std::fmt::Write as _;
use std::path::PathBuf;

use symgc::automata::to_dot;
use symgc::oracle::{gamma, render_word};
use symgc::report::{render_structured, render_text};
use symgc::safety::check_safety;
use symgc::semantics::{interpret_judgement, Options};
use symgc::solver::Solver;
use symgc::syntax::load;

/// Exit code for unreadable, ill-formed or ill-typed input.
pub const INPUT_ERROR: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Check,
    Model,
    Gamma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Structured,
    Dot,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub mode: Mode,
    pub solver: Solver,
    pub max_len: usize,
    /// Data domain size for gamma mode.
    pub finite: Option<usize>,
    pub bounds_check: bool,
    pub simplify: bool,
    pub format: Format,
    /// Also write the model's DOT here.
    pub dot: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            mode: Mode::Check,
            solver: Solver::default(),
            max_len: 64,
            finite: None,
            bounds_check: false,
            simplify: true,
            format: Format::Text,
            dot: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    /// Diagnostics for input errors.
    pub stderr: String,
}

impl Outcome {
    fn input_error(message: String) -> Self {
        Outcome {
            code: INPUT_ERROR,
            stdout: String::new(),
            stderr: message,
        }
    }
}

pub fn run(cfg: &RunConfig) -> Outcome {
    let path = cfg.input.display();
    let text = match std::fs::read_to_string(&cfg.input) {
        Ok(t) => t,
        Err(e) => return Outcome::input_error(format!("{path}: {e}\n")),
    };
    let j = match load(&text) {
        Ok(j) => j,
        Err(e) => return Outcome::input_error(format!("{path}: {e}\n")),
    };
    let opts = Options {
        bounds_check: cfg.bounds_check,
        simplify: cfg.simplify,
        ..Options::default()
    };
    let s = match interpret_judgement(&j, opts) {
        Ok(s) => s,
        Err(e) => return Outcome::input_error(format!("{path}: {e}\n")),
    };
    let dot = to_dot(&s.automaton);
    if let Some(p) = &cfg.dot {
        if let Err(e) = std::fs::write(p, &dot) {
            return Outcome::input_error(format!("{}: {e}\n", p.display()));
        }
    }
    let counts = format!(
        "{} states, {} transitions\n",
        s.automaton.num_states(),
        s.automaton.transitions.len()
    );
    let mut out = String::new();
    let code = match cfg.mode {
        Mode::Model => {
            match cfg.format {
                Format::Structured => {
                    let _ = writeln!(
                        out,
                        "states\t{}\ntransitions\t{}",
                        s.automaton.num_states(),
                        s.automaton.transitions.len()
                    );
                }
                Format::Text | Format::Dot => {
                    out.push_str(&dot);
                    out.push_str(&counts);
                }
            }
            0
        }
        Mode::Gamma => {
            let Some(n) = cfg.finite else {
                return Outcome::input_error("gamma mode needs --finite N\n".to_string());
            };
            let words = gamma(&s, n, cfg.max_len);
            for w in &words {
                out.push_str(&render_word(w));
                out.push('\n');
            }
            let _ = writeln!(out, "{} words", words.len());
            0
        }
        Mode::Check => {
            let v = check_safety(&s, &cfg.solver, cfg.max_len);
            match cfg.format {
                Format::Text => out.push_str(&render_text(&v)),
                Format::Structured => out.push_str(&render_structured(&v)),
                Format::Dot => {
                    out.push_str(&dot);
                    out.push_str(&counts);
                }
            }
            v.exit_code()
        }
    };
    Outcome {
        code,
        stdout: out,
        stderr: String::new(),
    }
}
