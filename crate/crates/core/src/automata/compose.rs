use std::collections::{BTreeMap, VecDeque};

use super::{eliminate_epsilon, AutomatonError, StateId, SymAutomaton, Transition};
use crate::symbolic::{Exp, Guard, GuardStep, Letter, Payload, TagAtom};

/// Equates two payloads at a synchronization point. Returns the payload the
/// combined move carries and the guard steps that realize the match.
pub fn sync_payloads(p1: &Payload, p2: &Payload) -> Option<(Payload, Vec<GuardStep>)> {
    match (p1, p2) {
        (Payload::Bind(x), Payload::Expr(e)) | (Payload::Expr(e), Payload::Bind(x)) => {
            if x.dtype != e.dtype() {
                return None;
            }
            Some((Payload::Expr(e.clone()), vec![GuardStep::Let(*x, e.clone())]))
        }
        (Payload::Expr(e1), Payload::Expr(e2)) => {
            if e1.dtype() != e2.dtype() {
                return None;
            }
            let steps = if e1 == e2 {
                Vec::new()
            } else {
                vec![GuardStep::Assume(Exp::equal(e1, e2))]
            };
            Some((Payload::Expr(e1.clone()), steps))
        }
        (Payload::Bind(x), Payload::Bind(y)) => {
            if x.dtype != y.dtype {
                return None;
            }
            if x == y {
                return Some((Payload::Expr(Exp::name(*x)), vec![GuardStep::Fresh(*x)]));
            }
            Some((
                Payload::Expr(Exp::name(*x)),
                vec![GuardStep::Fresh(*x), GuardStep::Let(*y, Exp::name(*x))],
            ))
        }
    }
}

fn strip<'a>(l: &'a Letter, tag: &[TagAtom]) -> Option<&'a [TagAtom]> {
    l.tags.strip_prefix(tag)
}

/// Steps equating two `tag`-tagged letters, or `None` if they cannot synchronize.
fn sync(l1: &Letter, l2: &Letter, tag: &[TagAtom]) -> Option<Vec<GuardStep>> {
    let (r1, r2) = (strip(l1, tag)?, strip(l2, tag)?);
    if r1 != r2 || l1.kind.ctor() != l2.kind.ctor() {
        return None;
    }
    match (l1.kind.payload(), l2.kind.payload()) {
        (None, None) => Some(Vec::new()),
        (Some(p1), Some(p2)) => sync_payloads(p1, p2).map(|(_, steps)| steps),
        _ => None,
    }
}

fn sync_guard(first: &Guard, second: &Guard, steps: Vec<GuardStep>) -> Guard {
    let mut g = first.then(second);
    for s in steps {
        g.push(s);
    }
    g
}

/// Composes `a2` into the `tag`-tagged moves of `a1`.
///
/// States pair a state of `a1` with either nothing (`a2` at rest) or the
/// current state of an active run of `a2`. A `tag`-tagged question of `a1`
/// starts a run of `a2` from its initial state; an answer of `a2` into one of
/// its final states returns to `a1`. Both synchronizations become ε-moves.
pub fn compose(
    a1: &SymAutomaton,
    a2: &SymAutomaton,
    tag: &[TagAtom],
) -> Result<SymAutomaton, AutomatonError> {
    let a2 = if a2.is_epsilon_free() {
        a2.clone()
    } else {
        eliminate_epsilon(a2)?
    };
    let o1 = a1.outgoing();
    let o2 = a2.outgoing();
    let tagged = |l: &Option<Letter>| l.as_ref().is_some_and(|l| strip(l, tag).is_some());

    type Pair = (StateId, Option<StateId>);
    let mut r = SymAutomaton::new();
    let start: Pair = (a1.initial, None);
    let mut ids = BTreeMap::from([(start, 0u32)]);
    let mut queue = VecDeque::from([start]);
    let mut id_of = |p: Pair, r: &mut SymAutomaton, queue: &mut VecDeque<Pair>| {
        *ids.entry(p).or_insert_with(|| {
            queue.push_back(p);
            r.add_state()
        })
    };
    while let Some(pair @ (s1, s2)) = queue.pop_front() {
        let src = id_of(pair, &mut r, &mut queue);
        if s2.is_none() && a1.is_final(s1) {
            r.add_final(src);
        }
        let mut moves: Vec<(Guard, Option<Letter>, Pair)> = Vec::new();
        for &i in &o1[s1 as usize] {
            let t1 = &a1.transitions[i];
            if !tagged(&t1.label) {
                moves.push((t1.guard.clone(), t1.label.clone(), (t1.dst, s2)));
                continue;
            }
            let l1 = t1.label.as_ref().expect("tagged letter");
            match s2 {
                None if l1.is_question() => {
                    for &j in &o2[a2.initial as usize] {
                        let t2 = &a2.transitions[j];
                        let Some(l2) = &t2.label else { continue };
                        if !l2.is_question() {
                            continue;
                        }
                        if let Some(steps) = sync(l1, l2, tag) {
                            let g = sync_guard(&t1.guard, &t2.guard, steps);
                            moves.push((g, None, (t1.dst, Some(t2.dst))));
                        }
                    }
                }
                Some(q2) if !l1.is_question() => {
                    for &j in &o2[q2 as usize] {
                        let t2 = &a2.transitions[j];
                        let Some(l2) = &t2.label else { continue };
                        if l2.is_question() || !a2.is_final(t2.dst) {
                            continue;
                        }
                        if let Some(steps) = sync(l2, l1, tag) {
                            let g = sync_guard(&t1.guard, &t2.guard, steps);
                            moves.push((g, None, (t1.dst, None)));
                        }
                    }
                }
                _ => {}
            }
        }
        if let Some(q2) = s2 {
            for &j in &o2[q2 as usize] {
                let t2 = &a2.transitions[j];
                if !tagged(&t2.label) {
                    moves.push((t2.guard.clone(), t2.label.clone(), (s1, Some(t2.dst))));
                }
            }
        }
        for (g, l, dst) in moves {
            let d = id_of(dst, &mut r, &mut queue);
            r.transitions.push(Transition::new(src, g, l, d));
        }
    }
    Ok(r)
}

/// The flat composition over the disjoint union of both state sets: a
/// question of `a1` jumps into `a2` after its initial move, and any answer of
/// `a2` into a final state returns to every state reached by a matching
/// answer of `a1`.
pub fn compose_flat(
    a1: &SymAutomaton,
    a2: &SymAutomaton,
    tag: &[TagAtom],
) -> Result<SymAutomaton, AutomatonError> {
    let a2 = if a2.is_epsilon_free() {
        a2.clone()
    } else {
        eliminate_epsilon(a2)?
    };
    let tagged = |l: &Option<Letter>| l.as_ref().is_some_and(|l| strip(l, tag).is_some());
    let mut r = SymAutomaton::new();
    let o1 = r.embed(a1);
    let o2 = r.embed(&a2);
    r.initial = a1.initial + o1;
    r.finals = a1.finals.iter().map(|f| f + o1).collect();
    r.transitions.retain(|t| !tagged(&t.label));
    for t1 in &a1.transitions {
        if !tagged(&t1.label) {
            continue;
        }
        let l1 = t1.label.as_ref().expect("tagged letter");
        for t2 in &a2.transitions {
            let Some(l2) = &t2.label else { continue };
            if !tagged(&t2.label) || l1.is_question() != l2.is_question() {
                continue;
            }
            if l1.is_question() && t2.src == a2.initial {
                if let Some(steps) = sync(l1, l2, tag) {
                    let g = sync_guard(&t1.guard, &t2.guard, steps);
                    r.add_epsilon(t1.src + o1, g, t2.dst + o2);
                }
            } else if !l1.is_question() && a2.is_final(t2.dst) {
                if let Some(steps) = sync(l2, l1, tag) {
                    let g = sync_guard(&t1.guard, &t2.guard, steps);
                    r.add_epsilon(t2.src + o2, g, t1.dst + o1);
                }
            }
        }
    }
    Ok(r.prune_unreachable())
}
