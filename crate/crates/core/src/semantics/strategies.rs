use crate::automata::SymAutomaton;
use crate::symbolic::{
    AExp, ArithOp, BExp, Exp, Guard, Letter, MoveKind, NamePool, Payload, Rel, SymName, TagAtom,
};
use crate::syntax::{BaseType, BinOp, DataType, FunType};

fn arg(i: u32) -> Vec<TagAtom> {
    vec![TagAtom::Arg(i)]
}

fn letter(kind: MoveKind, tags: &[TagAtom]) -> Letter {
    Letter::tagged(kind, tags.to_vec())
}

/// Adds a chain of unguarded letters from `from`, returning the last state.
fn chain(a: &mut SymAutomaton, from: u32, letters: impl IntoIterator<Item = Letter>) -> u32 {
    let mut cur = from;
    for l in letters {
        let next = a.add_state();
        a.add_letter(cur, l, next);
        cur = next;
    }
    cur
}

/// Adds `letters` as a path from `from` back to `to`.
fn loop_path(a: &mut SymAutomaton, from: u32, to: u32, letters: Vec<Letter>) {
    let n = letters.len();
    let mut cur = from;
    for (i, l) in letters.into_iter().enumerate() {
        let next = if i + 1 == n { to } else { a.add_state() };
        a.add_letter(cur, l, next);
        cur = next;
    }
}

/// The argument plays `R^{x,i}` as loops on `hub`.
fn argument_loops(a: &mut SymAutomaton, hub: u32, tag: &str, args: &[BaseType], pool: &mut NamePool) {
    for (i, b) in args.iter().enumerate() {
        let i = i as u32 + 1;
        let outer = vec![TagAtom::ident(tag), TagAtom::Arg(i)];
        let inner = arg(i);
        match *b {
            BaseType::Exp(d) => {
                let z = pool.fresh(d);
                loop_path(
                    a,
                    hub,
                    hub,
                    vec![
                        letter(MoveKind::Q, &outer),
                        letter(MoveKind::Q, &inner),
                        letter(MoveKind::bind(z), &inner),
                        letter(MoveKind::answer(Exp::name(z)), &outer),
                    ],
                );
            }
            BaseType::Com => loop_path(
                a,
                hub,
                hub,
                vec![
                    letter(MoveKind::Run, &outer),
                    letter(MoveKind::Run, &inner),
                    letter(MoveKind::Done, &inner),
                    letter(MoveKind::Done, &outer),
                ],
            ),
            BaseType::Var(d) => {
                let z = pool.fresh(d);
                loop_path(
                    a,
                    hub,
                    hub,
                    vec![
                        letter(MoveKind::Read, &outer),
                        letter(MoveKind::Read, &inner),
                        letter(MoveKind::bind(z), &inner),
                        letter(MoveKind::answer(Exp::name(z)), &outer),
                    ],
                );
                let w = pool.fresh(d);
                loop_path(
                    a,
                    hub,
                    hub,
                    vec![
                        letter(MoveKind::Write(Payload::Bind(w)), &outer),
                        letter(MoveKind::Write(Payload::Expr(Exp::name(w))), &inner),
                        letter(MoveKind::Ok, &inner),
                        letter(MoveKind::Ok, &outer),
                    ],
                );
            }
        }
    }
}

/// The copy-cat strategy of a free identifier `tag : ty`. The
/// identifier's own moves carry `tag`, its argument moves `tag,i`, and the
/// copies towards the actual arguments `i`.
pub fn free_identifier(tag: &str, ty: &FunType, pool: &mut NamePool) -> SymAutomaton {
    let mut a = SymAutomaton::new();
    let me = [TagAtom::ident(tag)];
    match ty.result {
        BaseType::Exp(d) => {
            let hub = chain(&mut a, 0, [letter(MoveKind::Q, &[]), letter(MoveKind::Q, &me)]);
            argument_loops(&mut a, hub, tag, &ty.args, pool);
            let x = pool.fresh(d);
            let end = chain(
                &mut a,
                hub,
                [
                    letter(MoveKind::bind(x), &me),
                    letter(MoveKind::answer(Exp::name(x)), &[]),
                ],
            );
            a.add_final(end);
        }
        BaseType::Com => {
            let hub = chain(&mut a, 0, [letter(MoveKind::Run, &[]), letter(MoveKind::Run, &me)]);
            argument_loops(&mut a, hub, tag, &ty.args, pool);
            let end = chain(&mut a, hub, [letter(MoveKind::Done, &me), letter(MoveKind::Done, &[])]);
            a.add_final(end);
        }
        BaseType::Var(d) => {
            let hub = chain(&mut a, 0, [letter(MoveKind::Read, &[]), letter(MoveKind::Read, &me)]);
            argument_loops(&mut a, hub, tag, &ty.args, pool);
            let z = pool.fresh(d);
            let end = chain(
                &mut a,
                hub,
                [
                    letter(MoveKind::bind(z), &me),
                    letter(MoveKind::answer(Exp::name(z)), &[]),
                ],
            );
            a.add_final(end);

            let w = pool.fresh(d);
            let hub = chain(
                &mut a,
                0,
                [
                    letter(MoveKind::Write(Payload::Bind(w)), &[]),
                    letter(MoveKind::Write(Payload::Expr(Exp::name(w))), &me),
                ],
            );
            argument_loops(&mut a, hub, tag, &ty.args, pool);
            let end = chain(&mut a, hub, [letter(MoveKind::Ok, &me), letter(MoveKind::Ok, &[])]);
            a.add_final(end);
        }
    }
    a
}

/// A language construct with a fixed strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Construct {
    Op(BinOp),
    Not,
    Seq,
    If,
    While,
    Assign(DataType),
    Deref(DataType),
}

fn arith(op: BinOp) -> Option<ArithOp> {
    Some(match op {
        BinOp::Add => ArithOp::Add,
        BinOp::Sub => ArithOp::Sub,
        BinOp::Mul => ArithOp::Mul,
        BinOp::Div => ArithOp::Div,
        BinOp::Mod => ArithOp::Mod,
        _ => return None,
    })
}

fn relation(op: BinOp) -> Option<Rel> {
    Some(match op {
        BinOp::Eq => Rel::Eq,
        BinOp::Ne => Rel::Ne,
        BinOp::Lt => Rel::Lt,
        BinOp::Le => Rel::Le,
        BinOp::Gt => Rel::Gt,
        BinOp::Ge => Rel::Ge,
        _ => return None,
    })
}

/// The expression `Z op Z'` answered by the op strategy.
pub fn apply_op(op: BinOp, z1: SymName, z2: SymName) -> Exp {
    if let Some(a) = arith(op) {
        return Exp::Int(AExp::bin(a, AExp::Name(z1), AExp::Name(z2)));
    }
    if let Some(r) = relation(op) {
        return Exp::Bool(BExp::cmp(r, AExp::Name(z1), AExp::Name(z2)));
    }
    let (b1, b2) = (BExp::Name(z1), BExp::Name(z2));
    Exp::Bool(match op {
        BinOp::And => BExp::And(vec![b1, b2]),
        _ => BExp::Or(vec![b1, b2]),
    })
}

fn q(i: u32) -> Letter {
    letter(MoveKind::Q, &arg(i))
}

fn plain(kind: MoveKind) -> Letter {
    Letter::new(kind)
}

/// The strategy of a construct, with argument `i` tagged `i`.
pub fn construct_strategy(c: Construct, pool: &mut NamePool) -> SymAutomaton {
    let mut a = SymAutomaton::new();
    match c {
        Construct::Op(op) => {
            let (d, _) = op.signature();
            let z1 = pool.fresh(d);
            let z2 = pool.fresh(d);
            let end = chain(
                &mut a,
                0,
                [
                    plain(MoveKind::Q),
                    q(1),
                    letter(MoveKind::bind(z1), &arg(1)),
                    q(2),
                    letter(MoveKind::bind(z2), &arg(2)),
                    plain(MoveKind::answer(apply_op(op, z1, z2))),
                ],
            );
            a.add_final(end);
        }
        Construct::Not => {
            let z = pool.fresh(DataType::Bool);
            let end = chain(
                &mut a,
                0,
                [
                    plain(MoveKind::Q),
                    q(1),
                    letter(MoveKind::bind(z), &arg(1)),
                    plain(MoveKind::answer(Exp::Bool(BExp::not(BExp::Name(z))))),
                ],
            );
            a.add_final(end);
        }
        Construct::Seq => {
            let end = chain(
                &mut a,
                0,
                [
                    plain(MoveKind::Run),
                    letter(MoveKind::Run, &arg(1)),
                    letter(MoveKind::Done, &arg(1)),
                    letter(MoveKind::Run, &arg(2)),
                    letter(MoveKind::Done, &arg(2)),
                    plain(MoveKind::Done),
                ],
            );
            a.add_final(end);
        }
        Construct::If => {
            let z = pool.fresh(DataType::Bool);
            let s = chain(&mut a, 0, [plain(MoveKind::Run), q(1), letter(MoveKind::bind(z), &arg(1))]);
            let join = a.add_state();
            for (i, cond) in [(2, BExp::Name(z)), (3, BExp::not(BExp::Name(z)))] {
                let r = a.add_state();
                a.add(s, cond, Some(letter(MoveKind::Run, &arg(i))), r);
                a.add_letter(r, letter(MoveKind::Done, &arg(i)), join);
            }
            let end = chain(&mut a, join, [plain(MoveKind::Done)]);
            a.add_final(end);
        }
        Construct::While => {
            let z = pool.fresh(DataType::Bool);
            let s1 = chain(&mut a, 0, [plain(MoveKind::Run)]);
            let s2 = a.add_state();
            a.add_letter(s1, q(1), s2);
            let s3 = chain(&mut a, s2, [letter(MoveKind::bind(z), &arg(1))]);
            let s4 = a.add_state();
            a.add(s3, BExp::Name(z), Some(letter(MoveKind::Run, &arg(2))), s4);
            let s5 = chain(&mut a, s4, [letter(MoveKind::Done, &arg(2))]);
            a.add_letter(s5, q(1), s2);
            let end = a.add_state();
            a.add(s3, BExp::not(BExp::Name(z)), Some(plain(MoveKind::Done)), end);
            a.add_final(end);
        }
        Construct::Assign(d) => {
            let z = pool.fresh(d);
            let end = chain(
                &mut a,
                0,
                [
                    plain(MoveKind::Run),
                    q(2),
                    letter(MoveKind::bind(z), &arg(2)),
                    letter(MoveKind::Write(Payload::Expr(Exp::name(z))), &arg(1)),
                    letter(MoveKind::Ok, &arg(1)),
                    plain(MoveKind::Done),
                ],
            );
            a.add_final(end);
        }
        Construct::Deref(d) => {
            let z = pool.fresh(d);
            let end = chain(
                &mut a,
                0,
                [
                    plain(MoveKind::Q),
                    letter(MoveKind::Read, &arg(1)),
                    letter(MoveKind::bind(z), &arg(1)),
                    plain(MoveKind::answer(Exp::name(z))),
                ],
            );
            a.add_final(end);
        }
    }
    a
}

/// The `x[-]` strategy: the index is asked as argument 1, then the cell
/// `x[Z]` is accessed under `Z < k`. With `bounds_check`, an index `Z >= k`
/// runs `abort` and still answers.
pub fn array_element(
    tag: &str,
    elem: DataType,
    len: &AExp,
    bounds_check: bool,
    pool: &mut NamePool,
) -> SymAutomaton {
    let mut a = SymAutomaton::new();
    let abort = [TagAtom::ident("abort")];
    let in_bounds = |z: SymName| Guard::assume(BExp::cmp(Rel::Lt, AExp::Name(z), len.clone()));
    let out_of_bounds = |z: SymName| Guard::assume(BExp::cmp(Rel::Ge, AExp::Name(z), len.clone()));

    let z = pool.fresh(DataType::Int);
    let cell = [TagAtom::Cell(tag.to_string(), AExp::Name(z))];
    let s = chain(&mut a, 0, [plain(MoveKind::Read), q(1), letter(MoveKind::bind(z), &arg(1))]);
    let v = pool.fresh(elem);
    let r = a.add_state();
    a.add(s, in_bounds(z), Some(letter(MoveKind::Read, &cell)), r);
    let end = chain(
        &mut a,
        r,
        [letter(MoveKind::bind(v), &cell), plain(MoveKind::answer(Exp::name(v)))],
    );
    a.add_final(end);
    if bounds_check {
        let r = a.add_state();
        a.add(s, out_of_bounds(z), Some(letter(MoveKind::Run, &abort)), r);
        let end = chain(
            &mut a,
            r,
            [
                letter(MoveKind::Done, &abort),
                plain(MoveKind::answer(Exp::literal(crate::symbolic::Value::default_of(elem)))),
            ],
        );
        a.add_final(end);
    }

    let w = pool.fresh(elem);
    let z = pool.fresh(DataType::Int);
    let cell = [TagAtom::Cell(tag.to_string(), AExp::Name(z))];
    let s = chain(
        &mut a,
        0,
        [
            plain(MoveKind::Write(Payload::Bind(w))),
            q(1),
            letter(MoveKind::bind(z), &arg(1)),
        ],
    );
    let r = a.add_state();
    a.add(s, in_bounds(z), Some(letter(MoveKind::Write(Payload::Expr(Exp::name(w))), &cell)), r);
    let end = chain(&mut a, r, [letter(MoveKind::Ok, &cell), plain(MoveKind::Ok)]);
    a.add_final(end);
    if bounds_check {
        let r = a.add_state();
        a.add(s, out_of_bounds(z), Some(letter(MoveKind::Run, &abort)), r);
        let end = chain(&mut a, r, [letter(MoveKind::Done, &abort), plain(MoveKind::Ok)]);
        a.add_final(end);
    }
    a
}
