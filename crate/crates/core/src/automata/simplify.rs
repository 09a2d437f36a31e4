use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{SymAutomaton, Transition};
use crate::symbolic::{Exp, Guard, GuardStep, Letter, SymName};

/// `Let` definitions known to hold: the name still denotes the expression.
type Facts = BTreeMap<SymName, Exp>;

fn kill(facts: &mut Facts, x: SymName) {
    facts.remove(&x);
    facts.retain(|_, e| !e.mentions(x));
}

fn rewrite(t: &Transition, facts: &mut Facts) -> (Guard, Option<Letter>) {
    let mut steps = Vec::with_capacity(t.guard.steps().len());
    for s in t.guard.steps() {
        let s = s.subst(&|x| facts.get(&x).cloned());
        if let Some(x) = s.binds() {
            kill(facts, x);
        }
        if let GuardStep::Let(x, e) = &s {
            if !e.mentions(*x) {
                facts.insert(*x, e.clone());
            }
        }
        steps.push(s);
    }
    let label = t
        .label
        .as_ref()
        .map(|l| l.map_exps(&|e| e.subst(&|x| facts.get(&x).cloned())));
    if let Some(x) = label.as_ref().and_then(Letter::binder) {
        kill(facts, x);
    }
    (Guard(steps), label)
}

fn meet(into: &mut Option<Facts>, facts: Facts) -> bool {
    match into {
        None => {
            *into = Some(facts);
            true
        }
        Some(cur) => {
            let before = cur.len();
            cur.retain(|k, v| facts.get(k) == Some(v));
            cur.len() != before
        }
    }
}

/// Replaces uses of `Let`-bound names by their definitions wherever no
/// rebinding can intervene on any path, then drops definitions that are no
/// longer used.
pub(super) fn propagate_lets(a: &SymAutomaton) -> SymAutomaton {
    let out = a.outgoing();
    let mut facts_in: Vec<Option<Facts>> = vec![None; a.num_states()];
    facts_in[a.initial as usize] = Some(Facts::new());
    let mut queue = VecDeque::from([a.initial]);
    while let Some(s) = queue.pop_front() {
        let Some(entry) = facts_in[s as usize].clone() else {
            continue;
        };
        for &i in &out[s as usize] {
            let t = &a.transitions[i];
            let mut f = entry.clone();
            rewrite(t, &mut f);
            if meet(&mut facts_in[t.dst as usize], f) {
                queue.push_back(t.dst);
            }
        }
    }
    let mut r = a.clone();
    for t in &mut r.transitions {
        let Some(mut f) = facts_in[t.src as usize].clone() else {
            continue;
        };
        let (guard, label) = rewrite(t, &mut f);
        t.guard = guard;
        t.label = label;
    }
    drop_dead_lets(&mut r);
    r
}

fn drop_dead_lets(a: &mut SymAutomaton) {
    loop {
        let mut used = BTreeSet::new();
        for t in &a.transitions {
            for s in t.guard.steps() {
                s.for_each_used(&mut |x| {
                    used.insert(x);
                });
            }
            if let Some(l) = &t.label {
                l.for_each_name(&mut |x| {
                    used.insert(x);
                });
            }
        }
        let mut changed = false;
        for t in &mut a.transitions {
            let before = t.guard.0.len();
            t.guard
                .0
                .retain(|s| !matches!(s, GuardStep::Let(x, _) if !used.contains(x)));
            changed |= t.guard.0.len() != before;
        }
        if !changed {
            return;
        }
    }
}
