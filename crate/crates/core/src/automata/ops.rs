use std::collections::{BTreeMap, VecDeque};

use super::{SymAutomaton, Transition};
use crate::automata::compose::sync_payloads;
use crate::symbolic::{Guard, GuardStep, GuardedLetter, Letter, Payload, TagAtom};

/// Recognizes nothing.
pub fn empty() -> SymAutomaton {
    SymAutomaton::new()
}

/// Recognizes only the empty word.
pub fn epsilon() -> SymAutomaton {
    let mut a = SymAutomaton::new();
    a.add_final(0);
    a
}

pub fn letter(beta: GuardedLetter) -> SymAutomaton {
    let mut a = SymAutomaton::new();
    let f = a.add_state();
    a.add(0, beta.guard, Some(beta.letter), f);
    a.add_final(f);
    a
}

/// A straight-line automaton for a sequence of guarded letters.
pub fn word(letters: impl IntoIterator<Item = GuardedLetter>) -> SymAutomaton {
    let mut a = SymAutomaton::new();
    let mut cur = 0;
    for gl in letters {
        let next = a.add_state();
        a.add(cur, gl.guard, Some(gl.letter), next);
        cur = next;
    }
    a.add_final(cur);
    a
}

pub fn concat(a: &SymAutomaton, b: &SymAutomaton) -> SymAutomaton {
    let mut r = a.clone();
    r.finals.clear();
    let off = r.embed(b);
    for &f in &a.finals {
        r.add_epsilon(f, Guard::tt(), b.initial + off);
    }
    r.finals = b.finals.iter().map(|f| f + off).collect();
    r
}

pub fn union(a: &SymAutomaton, b: &SymAutomaton) -> SymAutomaton {
    let mut r = SymAutomaton::new();
    let oa = r.embed(a);
    let ob = r.embed(b);
    r.add_epsilon(0, Guard::tt(), a.initial + oa);
    r.add_epsilon(0, Guard::tt(), b.initial + ob);
    r.finals = a
        .finals
        .iter()
        .map(|f| f + oa)
        .chain(b.finals.iter().map(|f| f + ob))
        .collect();
    r
}

pub fn star(a: &SymAutomaton) -> SymAutomaton {
    let mut r = SymAutomaton::new();
    let off = r.embed(a);
    r.add_epsilon(0, Guard::tt(), a.initial + off);
    for &f in &a.finals {
        r.add_epsilon(f + off, Guard::tt(), 0);
    }
    r.add_final(0);
    r
}

/// Matches two letters with equal constructors and tags, returning the
/// combined letter and the guard steps equating their payloads.
fn match_letters(l1: &Letter, l2: &Letter) -> Option<(Letter, Vec<GuardStep>)> {
    if l1.tags != l2.tags || l1.kind.ctor() != l2.kind.ctor() {
        return None;
    }
    match (l1.kind.payload(), l2.kind.payload()) {
        (None, None) => Some((l1.clone(), Vec::new())),
        (Some(p1), Some(p2)) if p1 == p2 => Some((l1.clone(), Vec::new())),
        (Some(p1), Some(p2)) => {
            let (payload, steps) = sync_payloads(p1, p2)?;
            let kind = l1.kind.with_payload(payload);
            Some((Letter::tagged(kind, l1.tags.clone()), steps))
        }
        _ => None,
    }
}

/// Builds a product automaton by exploring reachable pairs from `(a.initial, b.initial)`.
fn product(
    a: &SymAutomaton,
    b: &SymAutomaton,
    mut moves: impl FnMut(&SymAutomaton, &SymAutomaton, (u32, u32), &mut Vec<(Guard, Option<Letter>, (u32, u32))>),
) -> SymAutomaton {
    let mut r = SymAutomaton::new();
    let mut ids = BTreeMap::from([((a.initial, b.initial), 0u32)]);
    let mut queue = VecDeque::from([(a.initial, b.initial)]);
    let mut buf = Vec::new();
    while let Some(pair) = queue.pop_front() {
        let src = ids[&pair];
        if a.is_final(pair.0) && b.is_final(pair.1) {
            r.add_final(src);
        }
        buf.clear();
        moves(a, b, pair, &mut buf);
        for (g, l, dst) in buf.drain(..) {
            let d = *ids.entry(dst).or_insert_with(|| {
                queue.push_back(dst);
                r.add_state()
            });
            r.transitions.push(Transition::new(src, g, l, d));
        }
    }
    r
}

/// Product synchronizing on letters with equal constructors and tags; guards
/// of matched letters are conjoined and differing payloads equated.
pub fn intersect(a: &SymAutomaton, b: &SymAutomaton) -> SymAutomaton {
    let oa = a.outgoing();
    let ob = b.outgoing();
    product(a, b, |a, b, (p, q), out| {
        for &i in &oa[p as usize] {
            let t1 = &a.transitions[i];
            match &t1.label {
                None => out.push((t1.guard.clone(), None, (t1.dst, q))),
                Some(l1) => {
                    for &j in &ob[q as usize] {
                        let t2 = &b.transitions[j];
                        let Some(l2) = &t2.label else { continue };
                        if let Some((l, steps)) = match_letters(l1, l2) {
                            let mut g = t1.guard.then(&t2.guard);
                            for s in steps {
                                g.push(s);
                            }
                            out.push((g, Some(l), (t1.dst, t2.dst)));
                        }
                    }
                }
            }
        }
        for &j in &ob[q as usize] {
            let t2 = &b.transitions[j];
            if t2.label.is_none() {
                out.push((t2.guard.clone(), None, (p, t2.dst)));
            }
        }
    })
}

/// Interleaves the words of both automata.
pub fn shuffle(a: &SymAutomaton, b: &SymAutomaton) -> SymAutomaton {
    let oa = a.outgoing();
    let ob = b.outgoing();
    product(a, b, |a, b, (p, q), out| {
        for &i in &oa[p as usize] {
            let t = &a.transitions[i];
            out.push((t.guard.clone(), t.label.clone(), (t.dst, q)));
        }
        for &j in &ob[q as usize] {
            let t = &b.transitions[j];
            out.push((t.guard.clone(), t.label.clone(), (p, t.dst)));
        }
    })
}

/// Prefixes `tag` to letters on transitions leaving the initial state or
/// entering a final state.
pub fn rename(a: &SymAutomaton, tag: &[TagAtom]) -> SymAutomaton {
    let mut r = a.clone();
    for t in &mut r.transitions {
        if t.src != a.initial && !a.is_final(t.dst) {
            continue;
        }
        if let Some(l) = &mut t.label {
            let mut tags = tag.to_vec();
            tags.append(&mut l.tags);
            l.tags = tags;
        }
    }
    r
}

/// Replaces the selected letters by ε-transitions that keep their guards. A
/// hidden binder still introduces an unconstrained name.
pub fn restrict(a: &SymAutomaton, select: impl Fn(&Letter) -> bool) -> SymAutomaton {
    let mut r = a.clone();
    for t in &mut r.transitions {
        let Some(l) = &t.label else { continue };
        if !select(l) {
            continue;
        }
        if let Some(Payload::Bind(x)) = l.kind.payload() {
            t.guard.push(GuardStep::Fresh(*x));
        }
        t.label = None;
    }
    r
}
