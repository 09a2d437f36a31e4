use std::collections::VecDeque;

use super::play::{instantiate, Play};
use crate::automata::{StateId, SymAutomaton};
use crate::semantics::Strategy;

/// A path prefix ending just after a letter.
#[derive(Debug, Clone)]
struct Prefix {
    state: StateId,
    transitions: Vec<usize>,
    aborted: bool,
}

/// Breadth-first stream of the unsafe plays of an automaton, shortest first.
/// Plays of equal length come in the order of their rendered letters.
pub struct UnsafePlays<'a> {
    a: &'a SymAutomaton,
    out: Vec<Vec<usize>>,
    /// States from which some completion passes an abort move.
    can_abort: Vec<bool>,
    can_finish: Vec<bool>,
    frontier: Vec<Prefix>,
    level: usize,
    max_len: usize,
    ready: VecDeque<Play>,
}

/// The unsafe plays of `s` with at most `max_len` letters.
pub fn unsafe_plays(s: &Strategy, max_len: usize) -> UnsafePlays<'_> {
    UnsafePlays::new(&s.automaton, max_len)
}

impl<'a> UnsafePlays<'a> {
    pub fn new(a: &'a SymAutomaton, max_len: usize) -> Self {
        let out = a.outgoing();
        let can_finish = a.co_reachable();
        let inc = a.incoming();
        let mut can_abort = vec![false; a.num_states()];
        let mut queue = VecDeque::new();
        for t in &a.transitions {
            if t.label.as_ref().is_some_and(|l| l.is_abort())
                && can_finish[t.dst as usize]
                && !can_abort[t.src as usize]
            {
                can_abort[t.src as usize] = true;
                queue.push_back(t.src);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &i in &inc[s as usize] {
                let p = a.transitions[i].src;
                if !can_abort[p as usize] {
                    can_abort[p as usize] = true;
                    queue.push_back(p);
                }
            }
        }
        let start = Prefix {
            state: a.initial,
            transitions: Vec::new(),
            aborted: false,
        };
        let frontier = if can_abort[a.initial as usize] {
            vec![start]
        } else {
            Vec::new()
        };
        UnsafePlays {
            a,
            out,
            can_abort,
            can_finish,
            frontier,
            level: 0,
            max_len,
            ready: VecDeque::new(),
        }
    }

    fn keep(&self, p: &Prefix) -> bool {
        if p.aborted {
            self.can_finish[p.state as usize]
        } else {
            self.can_abort[p.state as usize]
        }
    }

    /// Runs of ε-moves from `s` visiting no state twice, as (end, moves).
    fn epsilon_runs(&self, s: StateId) -> Vec<(StateId, Vec<usize>)> {
        let mut runs = Vec::new();
        let mut stack = vec![(s, Vec::new(), vec![s])];
        while let Some((state, moves, seen)) = stack.pop() {
            for &i in &self.out[state as usize] {
                let t = &self.a.transitions[i];
                if t.label.is_none() && !seen.contains(&t.dst) {
                    let mut m = moves.clone();
                    m.push(i);
                    let mut v = seen.clone();
                    v.push(t.dst);
                    stack.push((t.dst, m, v));
                }
            }
            runs.push((state, moves));
        }
        runs
    }

    fn advance(&mut self) {
        let mut next = Vec::new();
        for p in &self.frontier {
            for (mid, eps) in self.epsilon_runs(p.state) {
                for &i in &self.out[mid as usize] {
                    let t = &self.a.transitions[i];
                    let Some(l) = &t.label else { continue };
                    let mut transitions = p.transitions.clone();
                    transitions.extend(&eps);
                    transitions.push(i);
                    let q = Prefix {
                        state: t.dst,
                        transitions,
                        aborted: p.aborted || l.is_abort(),
                    };
                    if self.keep(&q) {
                        next.push(q);
                    }
                }
            }
        }
        self.level += 1;
        let mut complete = Vec::new();
        for p in next.iter().filter(|p| p.aborted) {
            for (end, eps) in self.epsilon_runs(p.state) {
                if self.a.is_final(end) {
                    let mut t = p.transitions.clone();
                    t.extend(eps);
                    complete.push(instantiate(self.a, &t));
                }
            }
        }
        complete.sort_by_cached_key(|p| (p.plain_text(), p.to_string(), p.transitions.clone()));
        self.ready.extend(complete);
        self.frontier = next;
    }
}

impl Iterator for UnsafePlays<'_> {
    type Item = Play;

    fn next(&mut self) -> Option<Play> {
        loop {
            if let Some(p) = self.ready.pop_front() {
                return Some(p);
            }
            if self.level >= self.max_len || self.frontier.is_empty() {
                return None;
            }
            self.advance();
        }
    }
}
