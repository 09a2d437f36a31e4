use std::fmt::Write as _;
use std::io::{Read, Write};
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use super::{complete_model, Constraint, SatResult};
use crate::symbolic::{AExp, ArithOp, BExp, Evaluation, Rel, SymName, Value};
use crate::syntax::DataType;

/// A solver executable that reads SMT-LIB2 on standard input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: String,
    pub args: Vec<String>,
    pub timeout: Duration,
}

impl ExternalSolver {
    pub fn new(program: impl Into<String>, args: Vec<String>) -> Self {
        ExternalSolver {
            program: program.into(),
            args,
            timeout: Duration::from_secs(10),
        }
    }

    /// Splits a command line on whitespace.
    pub fn from_command_line(cmd: &str) -> Option<Self> {
        let mut words = cmd.split_whitespace().map(str::to_string);
        let program = words.next()?;
        Some(ExternalSolver::new(program, words.collect()))
    }
}

fn smt_name(x: SymName) -> String {
    let p = match x.dtype {
        DataType::Int => 'X',
        DataType::Bool => 'B',
    };
    if x.occurrence == 0 {
        format!("{p}{}", x.index)
    } else {
        format!("{p}{}_{}", x.index, x.occurrence)
    }
}

fn smt_int(n: i128) -> String {
    if n < 0 {
        format!("(- {})", n.unsigned_abs())
    } else {
        n.to_string()
    }
}

fn aexp(a: &AExp, out: &mut String) {
    match a {
        AExp::Lit(n) => out.push_str(&smt_int(*n)),
        AExp::Name(x) => out.push_str(&smt_name(*x)),
        AExp::Bin(op, a, b) => {
            let op = match op {
                ArithOp::Add => "+",
                ArithOp::Sub => "-",
                ArithOp::Mul => "*",
                ArithOp::Div => "div",
                ArithOp::Mod => "mod",
            };
            let _ = write!(out, "({op} ");
            aexp(a, out);
            out.push(' ');
            aexp(b, out);
            out.push(')');
        }
    }
}

fn bexp(b: &BExp, out: &mut String) {
    match b {
        BExp::Const(v) => out.push_str(if *v { "true" } else { "false" }),
        BExp::Name(x) => out.push_str(&smt_name(*x)),
        BExp::Cmp(rel, a, b) => {
            let op = match rel {
                Rel::Eq => "=",
                Rel::Ne => "distinct",
                Rel::Lt => "<",
                Rel::Le => "<=",
                Rel::Gt => ">",
                Rel::Ge => ">=",
            };
            let _ = write!(out, "({op} ");
            aexp(a, out);
            out.push(' ');
            aexp(b, out);
            out.push(')');
        }
        BExp::Not(b) => {
            out.push_str("(not ");
            bexp(b, out);
            out.push(')');
        }
        BExp::And(ps) | BExp::Or(ps) => {
            if ps.is_empty() {
                out.push_str(if matches!(b, BExp::And(_)) { "true" } else { "false" });
                return;
            }
            out.push_str(if matches!(b, BExp::And(_)) { "(and" } else { "(or" });
            for p in ps {
                out.push(' ');
                bexp(p, out);
            }
            out.push(')');
        }
    }
}

/// Divisors inside `a`, and whether `a` multiplies two non-literals.
fn scan(a: &AExp, divisors: &mut Vec<AExp>, nonlinear: &mut bool) {
    if let AExp::Bin(op, x, y) = a {
        match op {
            ArithOp::Div | ArithOp::Mod => {
                divisors.push((**y).clone());
                *nonlinear |= !matches!(**y, AExp::Lit(_));
            }
            ArithOp::Mul => {
                *nonlinear |= !matches!(**x, AExp::Lit(_)) && !matches!(**y, AExp::Lit(_));
            }
            _ => {}
        }
        scan(x, divisors, nonlinear);
        scan(y, divisors, nonlinear);
    }
}

/// The SMT-LIB2 script deciding `c`. Reads are unfolded into `ite` chains
/// over their update lists, and every divisor is asserted non-zero.
pub fn to_smtlib(c: &Constraint) -> String {
    let f = c.formula();
    let mut divisors = Vec::new();
    let mut nonlinear = false;
    f.for_each_aexp(&mut |a| scan(a, &mut divisors, &mut nonlinear));
    let names = c.names();

    let mut out = String::new();
    out.push_str("(set-option :produce-models true)\n");
    let logic = if nonlinear { "QF_NIA" } else { "QF_LIA" };
    let _ = writeln!(out, "(set-logic {logic})");
    for x in &names {
        let sort = match x.dtype {
            DataType::Int => "Int",
            DataType::Bool => "Bool",
        };
        let _ = writeln!(out, "(declare-const {} {sort})", smt_name(*x));
    }
    for b in f.conjuncts() {
        out.push_str("(assert ");
        bexp(&b, &mut out);
        out.push_str(")\n");
    }
    divisors.sort();
    divisors.dedup();
    for d in divisors {
        out.push_str("(assert (distinct ");
        aexp(&d, &mut out);
        out.push_str(" 0))\n");
    }
    out.push_str("(check-sat)\n");
    if !names.is_empty() {
        out.push_str("(get-value (");
        let list: Vec<String> = names.iter().map(|x| smt_name(*x)).collect();
        out.push_str(&list.join(" "));
        out.push_str("))\n");
    }
    out.push_str("(exit)\n");
    out
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Sexp {
    Atom(String),
    List(Vec<Sexp>),
}

fn parse_sexps(text: &str) -> Option<Vec<Sexp>> {
    let mut stack: Vec<Vec<Sexp>> = vec![Vec::new()];
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        match c {
            '(' => stack.push(Vec::new()),
            ')' => {
                let done = stack.pop()?;
                stack.last_mut()?.push(Sexp::List(done));
            }
            ';' => {
                for c in chars.by_ref() {
                    if c == '\n' {
                        break;
                    }
                }
            }
            '"' => {
                let mut s = String::from('"');
                for c in chars.by_ref() {
                    s.push(c);
                    if c == '"' {
                        break;
                    }
                }
                stack.last_mut()?.push(Sexp::Atom(s));
            }
            c if c.is_whitespace() => {}
            c => {
                let mut s = String::from(c);
                while let Some(&n) = chars.peek() {
                    if n.is_whitespace() || n == '(' || n == ')' {
                        break;
                    }
                    s.push(n);
                    chars.next();
                }
                stack.last_mut()?.push(Sexp::Atom(s));
            }
        }
    }
    (stack.len() == 1).then(|| stack.pop().unwrap())
}

fn value_of(s: &Sexp) -> Option<Value> {
    match s {
        Sexp::Atom(a) if a == "true" => Some(Value::Bool(true)),
        Sexp::Atom(a) if a == "false" => Some(Value::Bool(false)),
        Sexp::Atom(a) => a.parse().ok().map(Value::Int),
        Sexp::List(items) => match items.as_slice() {
            [Sexp::Atom(m), x] if m == "-" => match value_of(x)? {
                Value::Int(n) => Some(Value::Int(-n)),
                Value::Bool(_) => None,
            },
            _ => None,
        },
    }
}

/// Interprets a solver's reply to [`to_smtlib`]'s script.
pub fn parse_response(text: &str, c: &Constraint) -> SatResult {
    let Some(items) = parse_sexps(text) else {
        return SatResult::Unknown("unbalanced solver output".into());
    };
    let verdict = items.iter().find_map(|s| match s {
        Sexp::Atom(a) if matches!(a.as_str(), "sat" | "unsat" | "unknown") => Some(a.as_str()),
        _ => None,
    });
    match verdict {
        Some("unsat") => return SatResult::Unsat,
        Some("sat") => {}
        Some(_) => return SatResult::Unknown("solver answered unknown".into()),
        None => return SatResult::Unknown(format!("no verdict in solver output: {}", text.trim())),
    }
    let names = c.names();
    let mut rho = Evaluation::new();
    for s in &items {
        let Sexp::List(pairs) = s else { continue };
        for p in pairs {
            let Sexp::List(kv) = p else { continue };
            let [Sexp::Atom(k), v] = kv.as_slice() else { continue };
            let Some(x) = names.iter().find(|x| smt_name(**x) == *k) else {
                continue;
            };
            match value_of(v) {
                Some(v) if v.dtype() == x.dtype => rho.set(*x, v),
                _ => return SatResult::Unknown(format!("unreadable value for {k}")),
            }
        }
    }
    if let Some(x) = names.iter().find(|x| rho.get(**x).is_none()) {
        return SatResult::Unknown(format!("model lacks {}", smt_name(*x)));
    }
    SatResult::Sat(complete_model(c, rho))
}

/// Runs the external solver on `c`.
pub fn check_sat_external(c: &Constraint, solver: &ExternalSolver) -> SatResult {
    let script = to_smtlib(c);
    let child = Command::new(&solver.program)
        .args(&solver.args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn();
    let mut child = match child {
        Ok(ch) => ch,
        Err(e) => return SatResult::Unknown(format!("cannot start {}: {e}", solver.program)),
    };
    if let Some(mut stdin) = child.stdin.take() {
        if let Err(e) = stdin.write_all(script.as_bytes()) {
            let _ = child.kill();
            let _ = child.wait();
            return SatResult::Unknown(format!("cannot write to solver: {e}"));
        }
    }
    let mut stdout = child.stdout.take().expect("piped stdout");
    let reader = std::thread::spawn(move || {
        let mut s = String::new();
        stdout.read_to_string(&mut s).map(|_| s)
    });
    let start = Instant::now();
    loop {
        match child.try_wait() {
            Ok(Some(_)) => break,
            Ok(None) if start.elapsed() >= solver.timeout => {
                let _ = child.kill();
                let _ = child.wait();
                return SatResult::Unknown("solver timed out".into());
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(2)),
            Err(e) => return SatResult::Unknown(format!("solver failed: {e}")),
        }
    }
    match reader.join() {
        Ok(Ok(text)) => parse_response(&text, c),
        _ => SatResult::Unknown("unreadable solver output".into()),
    }
}
