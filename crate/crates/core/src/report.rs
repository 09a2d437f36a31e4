//! Rendering of verdicts: a readable text report and a line-delimited
//! structured form that reads back into the same [`Verdict`].
//!
//! Structured lines are tab-separated, key first (tabs shown as spaces):
//!
//! ```text
//! verdict unsafe
//! refuted 1
//! play
//! path 0 1 2
//! transitions 0 1
//! letter tt run
//! ...
//! end
//! value <X3_1> 0
//! concrete run
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::safety::{Play, Verdict};
use crate::solver::{ArrayDef, ArrayRead, Constraint};
use crate::symbolic::{
    parse_aexp, parse_array_sym, parse_bexp, parse_exp, parse_letter, ArrayValue, BExp, Evaluation,
    Exp, GuardedWord, ReadError, SymName, Value,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReportError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Read { line: usize, source: ReadError },
}

fn word_text(letters: &[crate::symbolic::Letter]) -> String {
    let parts: Vec<String> = letters.iter().map(|l| l.to_string()).collect();
    parts.join(" ")
}

fn model_text(rho: &Evaluation) -> String {
    let mut parts: Vec<String> = rho.values.iter().map(|(x, v)| format!("{x} = {v}")).collect();
    for (a, v) in &rho.arrays {
        let mut cells: Vec<String> = v.entries.iter().map(|(i, x)| format!("{i} -> {x}")).collect();
        cells.push(format!("else {}", v.default));
        parts.push(format!("{a} = [{}]", cells.join(", ")));
    }
    if parts.is_empty() {
        "(no symbols)".to_string()
    } else {
        parts.join(", ")
    }
}

fn play_lines(out: &mut String, p: &Play) {
    let _ = writeln!(out, "play ({} letters):", p.len());
    for (g, l) in p.word.guards.iter().zip(&p.word.letters) {
        if g.is_tt() {
            let _ = writeln!(out, "  {l}");
        } else {
            let _ = writeln!(out, "  [{g}] {l}");
        }
    }
    let _ = writeln!(out, "condition: {}", p.constraint);
}

/// The readable report. Identical verdicts give identical text.
pub fn render_text(v: &Verdict) -> String {
    let mut out = String::new();
    match v {
        Verdict::Safe { depth } => {
            let _ = writeln!(out, "verdict: SAFE (no consistent unsafe play within {depth} letters)");
        }
        Verdict::Unsafe {
            play,
            model,
            concrete,
            refuted,
        } => {
            let _ = writeln!(out, "verdict: UNSAFE");
            let _ = writeln!(out, "inconsistent unsafe plays before this one: {refuted}");
            play_lines(&mut out, play);
            let _ = writeln!(out, "model: {}", model_text(model));
            let _ = writeln!(out, "concrete play: {}", word_text(concrete));
        }
        Verdict::Inconclusive { depth, unknowns } => {
            let _ = writeln!(
                out,
                "verdict: INCONCLUSIVE ({} undecided unsafe plays within {depth} letters)",
                unknowns.len()
            );
            for (p, why) in unknowns {
                let _ = writeln!(out, "undecided: {why}");
                play_lines(&mut out, p);
            }
        }
    }
    out
}

fn structured_play(out: &mut String, p: &Play) {
    let join = |xs: &mut dyn Iterator<Item = String>| xs.collect::<Vec<_>>().join(" ");
    out.push_str("play\n");
    let _ = writeln!(out, "path\t{}", join(&mut p.path.iter().map(|s| s.to_string())));
    let _ = writeln!(out, "transitions\t{}", join(&mut p.transitions.iter().map(|s| s.to_string())));
    for (g, l) in p.word.guards.iter().zip(&p.word.letters) {
        let _ = writeln!(out, "letter\t{g}\t{l}");
    }
    let _ = writeln!(out, "condition\t{}", p.condition);
    for b in &p.constraint.conjuncts {
        let _ = writeln!(out, "conjunct\t{b}");
    }
    for d in &p.constraint.array_defs {
        let _ = writeln!(out, "array\t{}\t{}", d.sym, d.init);
        for (i, v) in &d.updates {
            let _ = writeln!(out, "update\t{i}\t{v}");
        }
    }
    for r in &p.constraint.reads {
        let _ = writeln!(out, "read\t{}\t{}\t{}", r.sym, r.index, Exp::name(r.result));
    }
    out.push_str("end\n");
}

/// The structured form; [`parse_structured`] reads it back.
pub fn render_structured(v: &Verdict) -> String {
    let mut out = String::new();
    match v {
        Verdict::Safe { depth } => {
            let _ = writeln!(out, "verdict\tsafe\ndepth\t{depth}");
        }
        Verdict::Unsafe {
            play,
            model,
            concrete,
            refuted,
        } => {
            let _ = writeln!(out, "verdict\tunsafe\nrefuted\t{refuted}");
            structured_play(&mut out, play);
            for (x, val) in &model.values {
                let _ = writeln!(out, "value\t{x}\t{val}");
            }
            for (a, val) in &model.arrays {
                let _ = writeln!(out, "array-value\t{a}\t{}", val.default);
                for (i, x) in &val.entries {
                    let _ = writeln!(out, "cell\t{i}\t{x}");
                }
            }
            for l in concrete {
                let _ = writeln!(out, "concrete\t{l}");
            }
        }
        Verdict::Inconclusive { depth, unknowns } => {
            let _ = writeln!(out, "verdict\tinconclusive\ndepth\t{depth}");
            for (p, why) in unknowns {
                let _ = writeln!(out, "unknown\t{}", why.replace(['\t', '\n'], " "));
                structured_play(&mut out, p);
            }
        }
    }
    out
}

struct Lines<'a> {
    items: Vec<(usize, Vec<&'a str>)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let items = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| (i + 1, l.split('\t').collect()))
            .collect();
        Lines { items, pos: 0 }
    }

    fn peek_key(&self) -> Option<&'a str> {
        self.items.get(self.pos).map(|(_, f)| f[0])
    }

    fn line(&self) -> usize {
        self.items
            .get(self.pos)
            .or(self.items.last())
            .map_or(0, |(l, _)| *l)
    }

    fn fail<T>(&self, message: impl Into<String>) -> Result<T, ReportError> {
        Err(ReportError::Syntax {
            line: self.line(),
            message: message.into(),
        })
    }

    /// The fields after `key` on the next line, which must have `arity` of them.
    fn expect(&mut self, key: &str, arity: usize) -> Result<Vec<&'a str>, ReportError> {
        match self.items.get(self.pos) {
            Some((_, f)) if f[0] == key && f.len() == arity + 1 => {
                self.pos += 1;
                Ok(f[1..].to_vec())
            }
            Some((_, f)) => self.fail(format!("expected `{key}` with {arity} fields, found `{}`", f.join("\t"))),
            None => self.fail(format!("expected `{key}`, found end of input")),
        }
    }

    fn read<T>(&self, r: Result<T, ReadError>) -> Result<T, ReportError> {
        r.map_err(|source| ReportError::Read {
            line: self.pos.checked_sub(1).map_or(0, |i| self.items[i].0),
            source,
        })
    }

    fn number<T: std::str::FromStr>(&self, s: &str) -> Result<T, ReportError> {
        s.parse().or_else(|_| self.fail(format!("not a number: `{s}`")))
    }

    fn value(&self, s: &str) -> Result<Value, ReportError> {
        match s {
            "tt" => Ok(Value::Bool(true)),
            "ff" => Ok(Value::Bool(false)),
            _ => self.number(s).map(Value::Int),
        }
    }

    fn name(&self, s: &str) -> Result<SymName, ReportError> {
        match self.read(parse_exp(s))? {
            Exp::Int(crate::symbolic::AExp::Name(x)) | Exp::Bool(BExp::Name(x)) => Ok(x),
            _ => self.fail(format!("expected a name, found `{s}`")),
        }
    }

    fn numbers<T: std::str::FromStr>(&self, s: &str) -> Result<Vec<T>, ReportError> {
        s.split_whitespace().map(|t| self.number(t)).collect()
    }

    fn play(&mut self) -> Result<Play, ReportError> {
        self.expect("play", 0)?;
        let path = self.expect("path", 1)?;
        let path = self.numbers(path[0])?;
        let transitions = self.expect("transitions", 1)?;
        let transitions = self.numbers(transitions[0])?;
        let mut items = Vec::new();
        while self.peek_key() == Some("letter") {
            let f = self.expect("letter", 2)?;
            let g = self.read(parse_bexp(f[0]))?;
            let l = self.read(parse_letter(f[1]))?;
            items.push((g, l));
        }
        let f = self.expect("condition", 1)?;
        let condition = self.read(parse_bexp(f[0]))?;
        let (guards, letters) = items.into_iter().unzip();
        let word = GuardedWord {
            condition: condition.clone(),
            letters,
            guards,
        };
        let mut constraint = Constraint::new();
        loop {
            match self.peek_key() {
                Some("conjunct") => {
                    let f = self.expect("conjunct", 1)?;
                    constraint.conjuncts.push(self.read(parse_bexp(f[0]))?);
                }
                Some("array") => {
                    let f = self.expect("array", 2)?;
                    let sym = self.read(parse_array_sym(f[0]))?;
                    let init = self.read(parse_exp(f[1]))?;
                    let mut updates = Vec::new();
                    while self.peek_key() == Some("update") {
                        let f = self.expect("update", 2)?;
                        updates.push((self.read(parse_aexp(f[0]))?, self.read(parse_exp(f[1]))?));
                    }
                    constraint.array_defs.push(ArrayDef { sym, init, updates });
                }
                Some("read") => {
                    let f = self.expect("read", 3)?;
                    constraint.reads.push(ArrayRead {
                        sym: self.read(parse_array_sym(f[0]))?,
                        index: self.read(parse_aexp(f[1]))?,
                        result: self.name(f[2])?,
                    });
                }
                _ => break,
            }
        }
        self.expect("end", 0)?;
        Ok(Play {
            word,
            path,
            transitions,
            condition,
            constraint,
        })
    }

    fn model(&mut self) -> Result<Evaluation, ReportError> {
        let mut rho = Evaluation::new();
        while self.peek_key() == Some("value") {
            let f = self.expect("value", 2)?;
            rho.set(self.name(f[0])?, self.value(f[1])?);
        }
        while self.peek_key() == Some("array-value") {
            let f = self.expect("array-value", 2)?;
            let sym = self.read(parse_array_sym(f[0]))?;
            let mut a = ArrayValue {
                default: self.value(f[1])?,
                entries: BTreeMap::new(),
            };
            while self.peek_key() == Some("cell") {
                let f = self.expect("cell", 2)?;
                a.entries.insert(self.number(f[0])?, self.value(f[1])?);
            }
            rho.arrays.insert(sym, a);
        }
        Ok(rho)
    }
}

/// Reads the output of [`render_structured`].
pub fn parse_structured(text: &str) -> Result<Verdict, ReportError> {
    let mut lines = Lines::new(text);
    let kind = lines.expect("verdict", 1)?[0];
    let v = match kind {
        "safe" => {
            let depth = lines.expect("depth", 1)?;
            Verdict::Safe {
                depth: lines.number(depth[0])?,
            }
        }
        "unsafe" => {
            let refuted = lines.expect("refuted", 1)?;
            let refuted = lines.number(refuted[0])?;
            let play = lines.play()?;
            let model = lines.model()?;
            let mut concrete = Vec::new();
            while lines.peek_key() == Some("concrete") {
                let f = lines.expect("concrete", 1)?;
                concrete.push(lines.read(parse_letter(f[0]))?);
            }
            Verdict::Unsafe {
                play,
                model,
                concrete,
                refuted,
            }
        }
        "inconclusive" => {
            let depth = lines.expect("depth", 1)?;
            let depth = lines.number(depth[0])?;
            let mut unknowns = Vec::new();
            while lines.peek_key() == Some("unknown") {
                let why = lines.expect("unknown", 1)?[0].to_string();
                unknowns.push((lines.play()?, why));
            }
            Verdict::Inconclusive { depth, unknowns }
        }
        other => return lines.fail(format!("unknown verdict `{other}`")),
    };
    if lines.peek_key().is_some() {
        return lines.fail("unexpected trailing line");
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::safety::check_safety;
    use crate::semantics::{interpret_judgement, Options};
    use crate::solver::Solver;
    use crate::syntax::load;

    fn verdict(src: &str, solver: &Solver, max_len: usize) -> Verdict {
        let s = interpret_judgement(&load(src).unwrap(), Options::default()).unwrap();
        check_safety(&s, solver, max_len)
    }

    fn round_trip(v: &Verdict) {
        let text = render_structured(v);
        assert_eq!(&parse_structured(&text).unwrap(), v, "{text}");
    }

    #[test]
    fn verdicts_read_back() {
        let b = Solver::default();
        round_trip(&verdict(
            "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com",
            &b,
            12,
        ));
        round_trip(&verdict("|- skip : com", &b, 64));
        round_trip(&verdict(
            "abort : com |- new_int a[3] := 0 in a[1] := 1; if a[1] = 1 then abort : com",
            &b,
            8,
        ));
        round_trip(&verdict(
            "x : expint, abort : com |- if x > 100 then abort : com",
            &Solver::Builtin { bound: 4 },
            8,
        ));
        round_trip(&verdict(
            "x[k] : varint, y : expint, abort : com |- new_int i := 0 in new_int p := y in \
             while (i < k) do { if (x[i] = p) then abort; i := i + 1 } : com",
            &b,
            16,
        ));
    }

    #[test]
    fn text_report_shows_the_counterexample() {
        let v = verdict(
            "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com",
            &Solver::default(),
            12,
        );
        let t = render_text(&v);
        assert!(t.starts_with("verdict: UNSAFE\n"));
        assert!(t.contains("play (12 letters):"));
        assert!(t.contains("!="));
        assert!(t.contains("concrete play: run run^{f} run^{f,1} q^{x}"));
        assert_eq!(t, render_text(&v));
    }

    #[test]
    fn malformed_input_is_rejected() {
        assert!(parse_structured("").is_err());
        assert!(parse_structured("verdict\tmaybe\n").is_err());
        assert!(parse_structured("verdict\tsafe\ndepth\tten\n").is_err());
        assert!(parse_structured("verdict\tsafe\ndepth\t3\nextra\n").is_err());
    }
}
