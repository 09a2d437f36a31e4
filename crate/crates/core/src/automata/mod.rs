//! Finite automata over guarded alphabets and their regular operations.

mod compose;
mod dot;
mod epsilon;
mod ops;
mod paths;
mod quotient;
mod simplify;

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

pub use compose::{compose, compose_flat, sync_payloads};
pub use dot::{parse_dot, to_dot, DotError};
pub use epsilon::eliminate_epsilon;
pub use ops::*;
pub use paths::{enumerate_paths, traces, words, Path, TraceItem};
pub use quotient::bisimulation_quotient;

use crate::symbolic::{BExp, Guard, GuardStep, GuardedLetter, Letter, TagAtom};

pub type StateId = u32;

/// A transition `src --<guard, label>--> dst`; `label == None` is an ε-move that keeps its guard.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Transition {
    pub src: StateId,
    pub guard: Guard,
    pub label: Option<Letter>,
    pub dst: StateId,
}

impl Transition {
    pub fn new(src: StateId, guard: Guard, label: Option<Letter>, dst: StateId) -> Self {
        Transition {
            src,
            guard,
            label,
            dst,
        }
    }

    pub fn is_epsilon(&self) -> bool {
        self.label.is_none()
    }

    pub fn guarded_letter(&self) -> Option<GuardedLetter> {
        self.label
            .as_ref()
            .map(|l| GuardedLetter::new(self.guard.clone(), l.clone()))
    }
}

/// `(Q, i, δ, F)` with states numbered `0..num_states`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymAutomaton {
    num_states: u32,
    pub initial: StateId,
    pub finals: BTreeSet<StateId>,
    pub transitions: Vec<Transition>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("cycle of silent transitions through state {0} rebinds symbolic names")]
    BindingEpsilonCycle(StateId),
    #[error("malformed strategy: {0}")]
    Malformed(String),
}

impl Default for SymAutomaton {
    fn default() -> Self {
        Self::new()
    }
}

impl SymAutomaton {
    /// A single non-final initial state.
    pub fn new() -> Self {
        SymAutomaton {
            num_states: 1,
            initial: 0,
            finals: BTreeSet::new(),
            transitions: Vec::new(),
        }
    }

    pub fn num_states(&self) -> usize {
        self.num_states as usize
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> {
        0..self.num_states
    }

    pub fn add_state(&mut self) -> StateId {
        self.num_states += 1;
        self.num_states - 1
    }

    pub fn add_final(&mut self, s: StateId) {
        self.finals.insert(s);
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals.contains(&s)
    }

    pub fn add(&mut self, src: StateId, guard: impl Into<Guard>, label: Option<Letter>, dst: StateId) {
        self.transitions
            .push(Transition::new(src, guard.into(), label, dst));
    }

    /// Adds an unguarded letter transition.
    pub fn add_letter(&mut self, src: StateId, letter: Letter, dst: StateId) {
        self.add(src, Guard::tt(), Some(letter), dst);
    }

    pub fn add_epsilon(&mut self, src: StateId, guard: impl Into<Guard>, dst: StateId) {
        self.add(src, guard, None, dst);
    }

    /// Outgoing transition indices per state.
    pub fn outgoing(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_states()];
        for (i, t) in self.transitions.iter().enumerate() {
            out[t.src as usize].push(i);
        }
        out
    }

    pub fn incoming(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_states()];
        for (i, t) in self.transitions.iter().enumerate() {
            inc[t.dst as usize].push(i);
        }
        inc
    }

    pub fn is_epsilon_free(&self) -> bool {
        self.transitions.iter().all(|t| !t.is_epsilon())
    }

    /// Copies `other` into `self` with fresh state ids, returning the id offset.
    pub(crate) fn embed(&mut self, other: &SymAutomaton) -> u32 {
        let off = self.num_states;
        self.num_states += other.num_states;
        for t in &other.transitions {
            self.transitions.push(Transition::new(
                t.src + off,
                t.guard.clone(),
                t.label.clone(),
                t.dst + off,
            ));
        }
        off
    }

    /// The distinct letters on transitions.
    pub fn letters(&self) -> BTreeSet<Letter> {
        self.transitions
            .iter()
            .filter_map(|t| t.label.clone())
            .collect()
    }

    /// Applies `f` to every letter's tag list.
    pub fn map_tags(&self, f: impl Fn(&[TagAtom]) -> Vec<TagAtom>) -> SymAutomaton {
        let mut a = self.clone();
        for t in &mut a.transitions {
            if let Some(l) = &mut t.label {
                l.tags = f(&l.tags);
            }
        }
        a
    }

    pub fn reachable(&self) -> Vec<bool> {
        let out = self.outgoing();
        let mut seen = vec![false; self.num_states()];
        let mut queue = VecDeque::from([self.initial]);
        seen[self.initial as usize] = true;
        while let Some(s) = queue.pop_front() {
            for &i in &out[s as usize] {
                let d = self.transitions[i].dst;
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    queue.push_back(d);
                }
            }
        }
        seen
    }

    pub fn co_reachable(&self) -> Vec<bool> {
        let inc = self.incoming();
        let mut seen = vec![false; self.num_states()];
        let mut queue: VecDeque<StateId> = self.finals.iter().copied().collect();
        for &f in &self.finals {
            seen[f as usize] = true;
        }
        while let Some(s) = queue.pop_front() {
            for &i in &inc[s as usize] {
                let d = self.transitions[i].src;
                if !seen[d as usize] {
                    seen[d as usize] = true;
                    queue.push_back(d);
                }
            }
        }
        seen
    }

    /// Keeps the states selected by `keep` (the initial state always stays),
    /// renumbering in breadth-first order from the initial state, sorting and
    /// deduplicating transitions.
    pub fn restrict_states(&self, keep: &[bool]) -> SymAutomaton {
        let out = self.outgoing();
        let mut order = vec![u32::MAX; self.num_states()];
        let mut next = 0;
        let mut queue = VecDeque::from([self.initial]);
        order[self.initial as usize] = next;
        next += 1;
        while let Some(s) = queue.pop_front() {
            let mut succ: Vec<&Transition> = out[s as usize]
                .iter()
                .map(|&i| &self.transitions[i])
                .filter(|t| keep[t.dst as usize])
                .collect();
            succ.sort_by(|a, b| (&a.label, &a.guard).cmp(&(&b.label, &b.guard)));
            for t in succ {
                if order[t.dst as usize] == u32::MAX {
                    order[t.dst as usize] = next;
                    next += 1;
                    queue.push_back(t.dst);
                }
            }
        }
        let mut transitions: Vec<Transition> = self
            .transitions
            .iter()
            .filter(|t| order[t.src as usize] != u32::MAX && order[t.dst as usize] != u32::MAX)
            .map(|t| {
                Transition::new(
                    order[t.src as usize],
                    t.guard.clone(),
                    t.label.clone(),
                    order[t.dst as usize],
                )
            })
            .collect();
        transitions.sort();
        transitions.dedup();
        SymAutomaton {
            num_states: next,
            initial: 0,
            finals: self
                .finals
                .iter()
                .filter(|f| order[**f as usize] != u32::MAX)
                .map(|f| order[*f as usize])
                .collect(),
            transitions,
        }
    }

    /// Removes states unreachable from the initial state.
    pub fn prune_unreachable(&self) -> SymAutomaton {
        let keep = vec![true; self.num_states()];
        self.restrict_states(&keep)
    }

    /// Removes states that are unreachable or cannot reach a final state.
    pub fn trim(&self) -> SymAutomaton {
        let keep = self.co_reachable();
        self.restrict_states(&keep)
    }

    /// Folds constants in guards, drops `tt` assumptions, removes transitions
    /// whose guard contains a literally false assumption, and propagates
    /// `Let` definitions into their uses.
    pub fn simplify(&self) -> SymAutomaton {
        let mut a = simplify::propagate_lets(self);
        a.transitions = a
            .transitions
            .iter()
            .filter_map(|t| {
                let guard = simplify_guard(&t.guard)?;
                let label = t.label.as_ref().map(|l| l.map_exps(&|e| e.fold()));
                Some(Transition::new(t.src, guard, label, t.dst))
            })
            .collect();
        a.transitions.sort();
        a.transitions.dedup();
        a
    }
}

/// Simplifies one guard; `None` when it is unsatisfiable on its face.
pub fn simplify_guard(g: &Guard) -> Option<Guard> {
    let mut steps = Vec::new();
    for s in g.steps() {
        match s {
            GuardStep::Assume(b) => match b.fold() {
                BExp::Const(true) => {}
                BExp::Const(false) => return None,
                other => {
                    for c in other.conjuncts() {
                        if !steps.contains(&GuardStep::Assume(c.clone())) {
                            steps.push(GuardStep::Assume(c));
                        }
                    }
                }
            },
            other => steps.push(other.clone()),
        }
    }
    Some(Guard(steps))
}

#[cfg(test)]
mod tests;
