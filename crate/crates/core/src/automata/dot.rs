use std::collections::BTreeSet;
use std::fmt::Write;

use thiserror::Error;

use super::{SymAutomaton, Transition};
use crate::symbolic::{parse_guarded_letter, ReadError};

fn label_of(t: &Transition) -> String {
    match &t.label {
        Some(l) if t.guard.is_tt() => l.to_string(),
        Some(l) => format!("[{}] {l}", t.guard),
        None => format!("[{}] eps", t.guard),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn unescape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut chars = s.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            if let Some(n) = chars.next() {
                out.push(n);
            }
        } else {
            out.push(c);
        }
    }
    out
}

/// Graphviz rendering; edge labels use the canonical `[guard] letter` syntax.
pub fn to_dot(a: &SymAutomaton) -> String {
    let mut s = String::from("digraph automaton {\n  rankdir=LR;\n  node [shape=circle];\n");
    s.push_str("  __start [shape=point];\n");
    let _ = writeln!(s, "  __start -> s{};", a.initial);
    for q in a.states() {
        let shape = if a.is_final(q) { "doublecircle" } else { "circle" };
        let _ = writeln!(s, "  s{q} [shape={shape}];");
    }
    for t in &a.transitions {
        let _ = writeln!(
            s,
            "  s{} -> s{} [label=\"{}\"];",
            t.src,
            t.dst,
            escape(&label_of(t))
        );
    }
    s.push_str("}\n");
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DotError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: bad label: {source}")]
    Label { line: usize, source: ReadError },
}

fn state_id(tok: &str, line: usize) -> Result<u32, DotError> {
    tok.trim()
        .strip_prefix('s')
        .and_then(|n| n.parse().ok())
        .ok_or_else(|| DotError::Syntax {
            line,
            message: format!("expected a state name, found `{tok}`"),
        })
}

/// Reads back the output of [`to_dot`].
pub fn parse_dot(text: &str) -> Result<SymAutomaton, DotError> {
    let mut initial = None;
    let mut states = BTreeSet::new();
    let mut finals = BTreeSet::new();
    let mut transitions = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = n + 1;
        let l = raw.trim().trim_end_matches(';');
        if l.is_empty()
            || l.starts_with("digraph")
            || l == "}"
            || l.starts_with("rankdir")
            || l.starts_with("node ")
            || l.starts_with("__start [")
        {
            continue;
        }
        if let Some(rest) = l.strip_prefix("__start ->") {
            initial = Some(state_id(rest, line)?);
        } else if let Some((lhs, rest)) = l.split_once(" -> ") {
            let (dst, attrs) = rest.split_once(" [label=\"").ok_or_else(|| DotError::Syntax {
                line,
                message: "missing label".into(),
            })?;
            let label = unescape(attrs.strip_suffix("\"]").ok_or_else(|| DotError::Syntax {
                line,
                message: "unterminated label".into(),
            })?);
            let (guard, letter) = parse_guarded_letter(&label)
                .map_err(|source| DotError::Label { line, source })?;
            let (src, dst) = (state_id(lhs, line)?, state_id(dst, line)?);
            states.extend([src, dst]);
            transitions.push(Transition::new(src, guard, letter, dst));
        } else if let Some((q, attrs)) = l.split_once(" [shape=") {
            let q = state_id(q, line)?;
            states.insert(q);
            if attrs.starts_with("doublecircle") {
                finals.insert(q);
            }
        } else {
            return Err(DotError::Syntax {
                line,
                message: format!("unrecognized statement `{l}`"),
            });
        }
    }
    let initial = initial.ok_or(DotError::Syntax {
        line: 0,
        message: "no initial state".into(),
    })?;
    states.insert(initial);
    let num_states = states.iter().max().map_or(1, |m| m + 1);
    Ok(SymAutomaton {
        num_states,
        initial,
        finals,
        transitions,
    })
}

