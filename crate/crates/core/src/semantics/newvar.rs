use std::collections::BTreeSet;

use super::{isolate_initial, SemanticsError};
use crate::automata::{eliminate_epsilon, intersect, restrict, shuffle, SymAutomaton, Transition};
use crate::syntax::DataType;
use crate::symbolic::{
    ArrSym, Exp, Guard, GuardStep, Letter, MoveCtor, MoveKind, NamePool, Payload, SymName, TagAtom,
};

fn malformed(msg: String) -> SemanticsError {
    SemanticsError::Malformed(msg)
}

/// Prepends `steps` to every transition leaving the (isolated) initial state.
fn initialize(a: &SymAutomaton, steps: &[GuardStep]) -> SymAutomaton {
    let mut r = isolate_initial(a);
    for t in &mut r.transitions {
        if t.src == r.initial {
            let mut g = Guard(steps.to_vec());
            g.0.append(&mut t.guard.0);
            t.guard = g;
        }
    }
    r
}

/// Pairs every question of `owned` with the answers that can follow it,
/// turning each pair into one ε-move whose guard is built by `join`.
fn fuse_pairs(
    a: &SymAutomaton,
    owned: impl Fn(&Letter) -> bool,
    mut join: impl FnMut(&Transition, &Transition) -> Result<Guard, SemanticsError>,
) -> Result<SymAutomaton, SemanticsError> {
    let out = a.outgoing();
    let mut r = a.clone();
    r.transitions.clear();
    for t in &a.transitions {
        let Some(l) = t.label.as_ref().filter(|l| owned(l)) else {
            r.transitions.push(t.clone());
            continue;
        };
        if !l.is_question() {
            continue;
        }
        let mut paired = false;
        for &j in &out[t.dst as usize] {
            let t2 = &a.transitions[j];
            let Some(l2) = t2.label.as_ref() else { continue };
            if !owned(l2) || l2.is_question() || l2.tags != l.tags {
                continue;
            }
            paired = true;
            let g = join(t, t2)?;
            r.transitions.push(Transition::new(t.src, g, None, t2.dst));
        }
        if !paired {
            return Err(malformed(format!("unanswered local move {l}")));
        }
    }
    Ok(r)
}

fn payload(l: &Letter) -> Result<&Payload, SemanticsError> {
    l.kind
        .payload()
        .ok_or_else(|| malformed(format!("move {l} carries no value")))
}

/// Hides the local variable `tag`: the tracker `x` starts at `init`, each
/// `write(e) ok` pair sets it to `e` and each `read v` pair matches `v`
/// against it.
pub fn new_elimination(
    a: &SymAutomaton,
    tag: &str,
    x: SymName,
    init: &Exp,
) -> Result<SymAutomaton, SemanticsError> {
    let owned = |l: &Letter| l.belongs_to(tag);
    let fused = fuse_pairs(a, owned, |q, ans| {
        let (lq, la) = (q.label.as_ref().unwrap(), ans.label.as_ref().unwrap());
        let mut g = q.guard.clone();
        match (lq.kind.ctor(), la.kind.ctor()) {
            (MoveCtor::Write, MoveCtor::Ok) => {
                match payload(lq)? {
                    Payload::Bind(z) => {
                        g.push(GuardStep::Fresh(*z));
                        g.push(GuardStep::Set(x, Exp::name(*z)));
                    }
                    Payload::Expr(e) => g.push(GuardStep::Set(x, e.clone())),
                }
                Ok(g.then(&ans.guard))
            }
            (MoveCtor::Read, MoveCtor::Answer) => {
                let mut g = g.then(&ans.guard);
                match payload(la)? {
                    Payload::Bind(z) => g.push(GuardStep::Let(*z, Exp::name(x))),
                    Payload::Expr(e) => g.push(GuardStep::Assume(Exp::equal(e, &Exp::name(x)))),
                }
                Ok(g)
            }
            _ => Err(malformed(format!("unexpected local moves {lq} {la}"))),
        }
    })?;
    let r = initialize(&fused, &[GuardStep::Set(x, init.clone())]);
    Ok(eliminate_epsilon(&r)?.trim())
}

/// Hides the local array `tag`, tracked by the array symbol `arr`.
pub fn array_new_elimination(
    a: &SymAutomaton,
    tag: &str,
    arr: ArrSym,
    init: &Exp,
    pool: &mut NamePool,
) -> Result<SymAutomaton, SemanticsError> {
    let owned = |l: &Letter| l.belongs_to(tag);
    let fused = fuse_pairs(a, owned, |q, ans| {
        let (lq, la) = (q.label.as_ref().unwrap(), ans.label.as_ref().unwrap());
        let Some(TagAtom::Cell(_, index)) = lq.head_tag() else {
            return Err(malformed(format!("array move {lq} has no cell")));
        };
        let mut g = q.guard.clone();
        match (lq.kind.ctor(), la.kind.ctor()) {
            (MoveCtor::Write, MoveCtor::Ok) => {
                let v = match payload(lq)? {
                    Payload::Bind(z) => {
                        g.push(GuardStep::Fresh(*z));
                        Exp::name(*z)
                    }
                    Payload::Expr(e) => e.clone(),
                };
                g.push(GuardStep::ArrayStore(arr, index.clone(), v));
                Ok(g.then(&ans.guard))
            }
            (MoveCtor::Read, MoveCtor::Answer) => {
                let mut g = g.then(&ans.guard);
                match payload(la)? {
                    Payload::Bind(z) => g.push(GuardStep::ArrayLoad(*z, arr, index.clone())),
                    Payload::Expr(e) => {
                        let t = pool.fresh(e.dtype());
                        g.push(GuardStep::ArrayLoad(t, arr, index.clone()));
                        g.push(GuardStep::Assume(Exp::equal(e, &Exp::name(t))));
                    }
                }
                Ok(g)
            }
            _ => Err(malformed(format!("unexpected local moves {lq} {la}"))),
        }
    })?;
    let r = initialize(&fused, &[GuardStep::ArrayInit(arr, init.clone())]);
    Ok(eliminate_epsilon(&r)?.trim())
}

/// The good-variable behaviour of `tag` holding `init` until written.
pub fn cell_strategy(tag: &str, init: &Exp, pool: &mut NamePool) -> SymAutomaton {
    let me = vec![TagAtom::ident(tag)];
    let l = |k: MoveKind| Letter::tagged(k, me.clone());
    let z = pool.fresh(init.dtype());
    let mut a = SymAutomaton::new();
    let (c0, c1, r0, r1, w) = (a.initial, a.add_state(), a.add_state(), a.add_state(), a.add_state());
    a.add_final(c0);
    a.add_final(c1);
    a.add_letter(c0, l(MoveKind::Read), r0);
    a.add_letter(r0, l(MoveKind::answer(init.clone())), c0);
    a.add_letter(c1, l(MoveKind::Read), r1);
    a.add_letter(r1, l(MoveKind::answer(Exp::name(z))), c1);
    for c in [c0, c1] {
        a.add_letter(c, l(MoveKind::Write(Payload::Bind(z))), w);
    }
    a.add_letter(w, l(MoveKind::Ok), c1);
    a
}

/// Hides `tag` by intersecting with the cell strategy interleaved with the
/// term's other moves, then hiding the variable's moves.
pub fn new_by_intersection(
    a: &SymAutomaton,
    tag: &str,
    init: &Exp,
    pool: &mut NamePool,
) -> Result<SymAutomaton, SemanticsError> {
    let cell = cell_strategy(tag, init, pool);
    let mut others = SymAutomaton::new();
    others.add_final(others.initial);
    let shapes: BTreeSet<(MoveCtor, Vec<TagAtom>, Option<DataType>)> = a
        .letters()
        .into_iter()
        .filter(|l| !l.belongs_to(tag))
        .map(|l| {
            let d = l.kind.payload().map(|p| match p {
                Payload::Bind(z) => z.dtype,
                Payload::Expr(e) => e.dtype(),
            });
            (l.kind.ctor(), l.tags, d)
        })
        .collect();
    for (ctor, tags, d) in shapes {
        let mut p = || Payload::Bind(pool.fresh(d.expect("payload type")));
        let kind = match ctor {
            MoveCtor::Q => MoveKind::Q,
            MoveCtor::Run => MoveKind::Run,
            MoveCtor::Done => MoveKind::Done,
            MoveCtor::Read => MoveKind::Read,
            MoveCtor::Ok => MoveKind::Ok,
            MoveCtor::Write => MoveKind::Write(p()),
            MoveCtor::Answer => MoveKind::Answer(p()),
        };
        others.add_letter(others.initial, Letter::tagged(kind, tags), others.initial);
    }
    let product = intersect(a, &shuffle(&cell, &others)).trim();
    let hidden = restrict(&product, |l| l.belongs_to(tag));
    Ok(eliminate_epsilon(&hidden)?.trim())
}
