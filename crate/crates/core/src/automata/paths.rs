use std::collections::BTreeSet;

use super::{StateId, SymAutomaton};
use crate::symbolic::{Exp, GuardStep, Letter, Payload};

/// An accepting path, as indices into the automaton's transitions.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Path {
    pub transitions: Vec<usize>,
}

/// One item of a path's normalized trace.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TraceItem {
    Step(GuardStep),
    Letter(Letter),
}

impl Path {
    pub fn letters<'a>(&'a self, a: &'a SymAutomaton) -> impl Iterator<Item = &'a Letter> + 'a {
        self.transitions
            .iter()
            .filter_map(move |&i| a.transitions[i].label.as_ref())
    }

    pub fn len_letters(&self, a: &SymAutomaton) -> usize {
        self.letters(a).count()
    }

    /// The guard steps and letters in play order. Assumptions are folded and
    /// split into conjuncts, and a binder is written as a fresh name followed
    /// by the letter carrying that name, so paths that differ only in where
    /// ε-guards sit produce equal traces.
    pub fn trace(&self, a: &SymAutomaton) -> Vec<TraceItem> {
        let mut items = Vec::new();
        for &i in &self.transitions {
            let t = &a.transitions[i];
            for s in t.guard.steps() {
                match s {
                    GuardStep::Assume(b) => {
                        let b = b.fold();
                        if !b.is_tt() {
                            items.extend(b.conjuncts().into_iter().map(|c| TraceItem::Step(GuardStep::Assume(c))));
                        }
                    }
                    other => items.push(TraceItem::Step(other.clone())),
                }
            }
            if let Some(l) = &t.label {
                match l.kind.payload() {
                    Some(Payload::Bind(x)) => {
                        items.push(TraceItem::Step(GuardStep::Fresh(*x)));
                        let kind = l.kind.with_payload(Payload::Expr(Exp::name(*x)));
                        items.push(TraceItem::Letter(Letter::tagged(kind, l.tags.clone())));
                    }
                    _ => items.push(TraceItem::Letter(l.clone())),
                }
            }
        }
        items
    }
}

/// All accepting paths with at most `max_letters` letters. Within a run of
/// consecutive ε-moves no state is visited twice.
pub fn enumerate_paths(a: &SymAutomaton, max_letters: usize) -> Vec<Path> {
    let out = a.outgoing();
    let mut result = Vec::new();
    let mut stack = Vec::new();
    let mut eps_run: Vec<StateId> = Vec::new();
    walk(a, &out, a.initial, max_letters, &mut stack, &mut eps_run, &mut result);
    result
}

fn walk(
    a: &SymAutomaton,
    out: &[Vec<usize>],
    s: StateId,
    budget: usize,
    stack: &mut Vec<usize>,
    eps_run: &mut Vec<StateId>,
    result: &mut Vec<Path>,
) {
    if a.is_final(s) {
        result.push(Path {
            transitions: stack.clone(),
        });
    }
    eps_run.push(s);
    for &i in &out[s as usize] {
        let t = &a.transitions[i];
        stack.push(i);
        if t.label.is_none() {
            if !eps_run.contains(&t.dst) {
                walk(a, out, t.dst, budget, stack, eps_run, result);
            }
        } else if budget > 0 {
            let mut fresh_run = Vec::new();
            walk(a, out, t.dst, budget - 1, stack, &mut fresh_run, result);
        }
        stack.pop();
    }
    eps_run.pop();
}

/// The set of normalized traces of accepting paths with at most `max_letters` letters.
pub fn traces(a: &SymAutomaton, max_letters: usize) -> BTreeSet<Vec<TraceItem>> {
    enumerate_paths(a, max_letters)
        .iter()
        .map(|p| p.trace(a))
        .collect()
}

/// The plain words (letters only) of accepting paths up to `max_letters`.
pub fn words(a: &SymAutomaton, max_letters: usize) -> BTreeSet<Vec<Letter>> {
    enumerate_paths(a, max_letters)
        .iter()
        .map(|p| p.letters(a).cloned().collect())
        .collect()
}
