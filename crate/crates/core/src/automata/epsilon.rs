use std::collections::BTreeSet;

use super::{AutomatonError, StateId, SymAutomaton, Transition};
use crate::symbolic::{Exp, Guard, GuardStep, Letter, Payload};

/// Every simple ε-path from `start`, as (target, conjoined guard). The trivial
/// path is included.
fn epsilon_paths(a: &SymAutomaton, out: &[Vec<usize>], start: StateId) -> Vec<(StateId, Guard)> {
    let mut found = BTreeSet::new();
    let mut on_path = vec![false; a.num_states()];
    fn walk(
        a: &SymAutomaton,
        out: &[Vec<usize>],
        s: StateId,
        guard: &Guard,
        on_path: &mut [bool],
        found: &mut BTreeSet<(StateId, Guard)>,
    ) {
        found.insert((s, guard.clone()));
        on_path[s as usize] = true;
        for &i in &out[s as usize] {
            let t = &a.transitions[i];
            if t.label.is_none() && !on_path[t.dst as usize] {
                walk(a, out, t.dst, &guard.then(&t.guard), on_path, found);
            }
        }
        on_path[s as usize] = false;
    }
    walk(a, out, start, &Guard::tt(), &mut on_path, &mut found);
    found.into_iter().collect()
}

/// Rejects ε-cycles that rebind names: traversing them again would change
/// the meaning of later guards.
fn check_cycles(a: &SymAutomaton, out: &[Vec<usize>]) -> Result<(), AutomatonError> {
    for t in &a.transitions {
        if t.label.is_some() || !t.guard.has_bindings() {
            continue;
        }
        let mut seen = vec![false; a.num_states()];
        let mut stack = vec![t.dst];
        while let Some(s) = stack.pop() {
            if s == t.src {
                return Err(AutomatonError::BindingEpsilonCycle(t.src));
            }
            if std::mem::replace(&mut seen[s as usize], true) {
                continue;
            }
            for &i in &out[s as usize] {
                let u = &a.transitions[i];
                if u.label.is_none() {
                    stack.push(u.dst);
                }
            }
        }
    }
    Ok(())
}

/// A letter's binder turned into an explicit fresh name so that guard steps
/// placed after the letter can still refer to it.
fn expose_binder(guard: &Guard, letter: &Letter, after: &Guard) -> (Guard, Letter) {
    match letter.kind.payload() {
        Some(Payload::Bind(x)) if after.uses(*x) => {
            let mut g = guard.clone();
            g.push(GuardStep::Fresh(*x));
            let kind = letter.kind.with_payload(Payload::Expr(Exp::name(*x)));
            (g, Letter::tagged(kind, letter.tags.clone()))
        }
        _ => (guard.clone(), letter.clone()),
    }
}

/// Removes ε-transitions, moving the guard of every absorbed ε-path onto the
/// next letter. Acceptance through a guarded ε-path becomes a transition into
/// a fresh final sink that carries the path's guard after the last letter. If
/// the initial state itself reaches a final state only through a guarded
/// ε-path, that one ε-transition to the sink is kept.
pub fn eliminate_epsilon(a: &SymAutomaton) -> Result<SymAutomaton, AutomatonError> {
    if a.is_epsilon_free() {
        return Ok(a.clone());
    }
    let out = a.outgoing();
    check_cycles(a, &out)?;
    let paths: Vec<Vec<(StateId, Guard)>> =
        a.states().map(|s| epsilon_paths(a, &out, s)).collect();
    let plain_final: Vec<bool> = paths
        .iter()
        .map(|ps| ps.iter().any(|(q, g)| g.is_tt() && a.is_final(*q)))
        .collect();

    let mut r = SymAutomaton {
        num_states: a.num_states,
        initial: a.initial,
        finals: a.states().filter(|&s| plain_final[s as usize]).collect(),
        transitions: Vec::new(),
    };
    let mut sink = None;
    let mut sink_of = |r: &mut SymAutomaton| {
        *sink.get_or_insert_with(|| {
            let s = r.add_state();
            r.add_final(s);
            s
        })
    };
    for p in a.states() {
        for (q, g0) in &paths[p as usize] {
            for &i in &out[*q as usize] {
                let t = &a.transitions[i];
                let Some(l) = &t.label else { continue };
                let pre = g0.then(&t.guard);
                r.transitions
                    .push(Transition::new(p, pre.clone(), Some(l.clone()), t.dst));
                if plain_final[t.dst as usize] {
                    continue;
                }
                for (f, g1) in &paths[t.dst as usize] {
                    if g1.is_tt() || !a.is_final(*f) {
                        continue;
                    }
                    let (g, l2) = expose_binder(&pre, l, g1);
                    let s = sink_of(&mut r);
                    r.transitions.push(Transition::new(p, g.then(g1), Some(l2), s));
                }
            }
        }
    }
    if !plain_final[a.initial as usize] {
        for (f, g) in &paths[a.initial as usize] {
            if a.is_final(*f) {
                let s = sink_of(&mut r);
                r.add_epsilon(a.initial, g.clone(), s);
            }
        }
    }
    r.transitions.sort();
    r.transitions.dedup();
    Ok(r)
}
