use std::collections::BTreeSet;

use crate::automata::enumerate_paths;
use crate::safety::{instantiate, Play};
use crate::semantics::Strategy;
use crate::solver::validate_model;
use crate::symbolic::{Evaluation, Letter, Payload, SymName, Value};
use crate::syntax::DataType;

fn domain(d: DataType, n: usize) -> Vec<Value> {
    match d {
        DataType::Int => (0..n as i128).map(Value::Int).collect(),
        DataType::Bool => vec![Value::Bool(false), Value::Bool(true)],
    }
}

fn in_domain(v: Value, n: usize) -> bool {
    match v {
        Value::Int(i) => (0..n as i128).contains(&i),
        Value::Bool(_) => true,
    }
}

/// Concrete words of the guarded words of `s` with at most `max_len`
/// letters, under every evaluation into `int_n` and the booleans that
/// satisfies the play condition. Words whose payloads or array contents
/// leave `int_n` are dropped.
pub fn gamma(s: &Strategy, n: usize, max_len: usize) -> BTreeSet<Vec<Letter>> {
    let mut out = BTreeSet::new();
    for path in enumerate_paths(&s.automaton, max_len) {
        let play = instantiate(&s.automaton, &path.transitions);
        concretizations(&play, n, &mut out);
    }
    out
}

/// Adds every concretization of `play` over `int_n` to `out`.
pub fn concretizations(play: &Play, n: usize, out: &mut BTreeSet<Vec<Letter>>) {
    let mut names: BTreeSet<SymName> = play.constraint.names();
    for l in play.letters() {
        l.for_each_name(&mut |x| {
            names.insert(x);
        });
    }
    let names: Vec<SymName> = names.into_iter().collect();
    // Each conjunct is checked as soon as its last name is assigned.
    let mut due: Vec<Vec<usize>> = vec![Vec::new(); names.len() + 1];
    for (i, b) in play.constraint.conjuncts.iter().enumerate() {
        let mut last = 0;
        b.for_each_name(&mut |x| {
            let pos = names.binary_search(&x).map(|p| p + 1).unwrap_or(0);
            last = last.max(pos);
        });
        due[last].push(i);
    }
    let mut rho = Evaluation::new();
    assign(play, &names, &due, 0, n, &mut rho, out);
}

fn assign(
    play: &Play,
    names: &[SymName],
    due: &[Vec<usize>],
    depth: usize,
    n: usize,
    rho: &mut Evaluation,
    out: &mut BTreeSet<Vec<Letter>>,
) {
    for &i in &due[depth] {
        if play.constraint.conjuncts[i].eval(rho) != Ok(true) {
            return;
        }
    }
    if depth == names.len() {
        if let Some(w) = concrete_word(play, n, rho) {
            out.insert(w);
        }
        return;
    }
    let x = names[depth];
    for v in domain(x.dtype, n) {
        rho.set(x, v);
        assign(play, names, due, depth + 1, n, rho, out);
    }
    rho.values.remove(&x);
}

fn concrete_word(play: &Play, n: usize, rho: &Evaluation) -> Option<Vec<Letter>> {
    if !validate_model(&play.constraint, rho) {
        return None;
    }
    for d in &play.constraint.array_defs {
        let values = std::iter::once(&d.init).chain(d.updates.iter().map(|(_, v)| v));
        for v in values {
            if !in_domain(v.eval(rho).ok()?, n) {
                return None;
            }
        }
    }
    let w = crate::safety::concretize(play, rho).ok()?;
    let fits = w.iter().all(|l| match l.kind.payload() {
        Some(Payload::Expr(e)) => e.as_literal().is_some_and(|v| in_domain(v, n)),
        _ => true,
    });
    fits.then_some(w)
}

/// Renders a concrete word for listings and diagnostics.
pub fn render_word(w: &[Letter]) -> String {
    let parts: Vec<String> = w.iter().map(|l| l.to_string()).collect();
    if parts.is_empty() {
        "(empty)".to_string()
    } else {
        parts.join(" ")
    }
}
