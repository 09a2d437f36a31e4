//! A concrete interpreter over finite data, built as an abstract machine whose
//! reachable configurations are the states of a finite automaton.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_traits::ToPrimitive;

use super::OracleError;
use crate::symbolic::{AExp, Exp, Letter, MoveKind, Payload, TagAtom, Value};
use crate::syntax::{
    ArrayLen, BaseType, BinOp, Context, DataType, DeclType, FunType, Literal, Term, TermKind,
};

/// A finite automaton over concrete moves.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConcreteAutomaton {
    pub num_states: usize,
    pub initial: usize,
    pub finals: BTreeSet<usize>,
    /// `(source, letter, target)`; `None` is a silent step.
    pub transitions: Vec<(usize, Option<Letter>, usize)>,
}

impl ConcreteAutomaton {
    fn closure(&self, out: &[Vec<usize>], from: &BTreeSet<usize>) -> BTreeSet<usize> {
        let mut seen = from.clone();
        let mut stack: Vec<usize> = from.iter().copied().collect();
        while let Some(s) = stack.pop() {
            for &i in &out[s] {
                let (_, l, d) = &self.transitions[i];
                if l.is_none() && seen.insert(*d) {
                    stack.push(*d);
                }
            }
        }
        seen
    }

    /// Accepted words with at most `max_len` letters.
    pub fn words(&self, max_len: usize) -> BTreeSet<Vec<Letter>> {
        let mut out = vec![Vec::new(); self.num_states];
        for (i, (s, _, _)) in self.transitions.iter().enumerate() {
            out[*s].push(i);
        }
        let mut result = BTreeSet::new();
        let start = self.closure(&out, &BTreeSet::from([self.initial]));
        let mut word = Vec::new();
        self.walk(&out, &start, max_len, &mut word, &mut result);
        result
    }

    /// Depth-first subset construction; each prefix is visited once.
    fn walk(
        &self,
        out: &[Vec<usize>],
        states: &BTreeSet<usize>,
        budget: usize,
        word: &mut Vec<Letter>,
        result: &mut BTreeSet<Vec<Letter>>,
    ) {
        if states.iter().any(|s| self.finals.contains(s)) {
            result.insert(word.clone());
        }
        if budget == 0 {
            return;
        }
        let mut next: BTreeMap<&Letter, BTreeSet<usize>> = BTreeMap::new();
        for &s in states {
            for &i in &out[s] {
                if let (_, Some(l), d) = &self.transitions[i] {
                    next.entry(l).or_default().insert(*d);
                }
            }
        }
        for (l, targets) in next {
            let c = self.closure(out, &targets);
            word.push(l.clone());
            self.walk(out, &c, budget - 1, word, result);
            word.pop();
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum V {
    Unit,
    Int(i128),
    Bool(bool),
}

impl V {
    fn letter_payload(self) -> Payload {
        match self {
            V::Int(v) => Payload::Expr(Exp::literal(Value::Int(v))),
            V::Bool(b) => Payload::Expr(Exp::literal(Value::Bool(b))),
            V::Unit => unreachable!("unit has no payload"),
        }
    }
}

type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Len {
    Fixed(i128),
    /// Chosen once at the start, in `1..n`.
    Chosen(usize),
}

#[derive(Debug, Clone)]
enum Node {
    Const(V),
    Bin(BinOp, NodeId, NodeId),
    Not(NodeId),
    Seq(NodeId, NodeId),
    If(NodeId, NodeId, NodeId),
    While(NodeId, NodeId),
    Assign(NodeId, NodeId),
    Deref(NodeId),
    NewVar { slot: usize, init: V, body: NodeId },
    NewArray { slot: usize, init: V, body: NodeId },
    Local(usize),
    LocalElem { slot: usize, len: i128, index: NodeId },
    /// A free identifier or parameter applied to base-type arguments.
    Call { tags: Vec<TagAtom>, args: Vec<(NodeId, BaseType)>, dtype: Option<DataType> },
    FreeElem { name: String, elem: DataType, len: Len, index: NodeId },
    Length(usize),
}

#[derive(Debug, Clone)]
enum Binding {
    Local(usize),
    LocalArray(usize, i128),
    Free(String, FunType),
    Param(u32, BaseType),
    FreeArray(String, DataType, Len),
    Length(usize),
}

struct Builder {
    nodes: Vec<Node>,
    scope: Vec<(String, Binding)>,
    slots: usize,
}

fn literal(l: &Literal) -> Result<V, OracleError> {
    Ok(match l {
        Literal::Int(i) => V::Int(
            i.to_i128()
                .ok_or_else(|| OracleError::Unsupported(format!("literal {i}")))?,
        ),
        Literal::Bool(b) => V::Bool(*b),
    })
}

fn data_of(b: BaseType) -> Option<DataType> {
    match b {
        BaseType::Exp(d) | BaseType::Var(d) => Some(d),
        BaseType::Com => None,
    }
}

impl Builder {
    fn push(&mut self, n: Node) -> NodeId {
        self.nodes.push(n);
        self.nodes.len() - 1
    }

    fn lookup(&self, x: &str) -> Result<Binding, OracleError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == x)
            .map(|(_, b)| b.clone())
            .ok_or_else(|| OracleError::Unbound(x.to_string()))
    }

    fn build(&mut self, t: &Term) -> Result<NodeId, OracleError> {
        use TermKind::*;
        let node = match t.kind.as_ref() {
            Const(l) => Node::Const(literal(l)?),
            Skip => Node::Const(V::Unit),
            BinOp(op, a, b) => {
                let (a, b) = (self.build(a)?, self.build(b)?);
                Node::Bin(*op, a, b)
            }
            Not(a) => Node::Not(self.build(a)?),
            Seq(a, b) => {
                let (a, b) = (self.build(a)?, self.build(b)?);
                Node::Seq(a, b)
            }
            If(c, a, b) => {
                let (c, a, b) = (self.build(c)?, self.build(a)?, self.build(b)?);
                Node::If(c, a, b)
            }
            While(c, b) => {
                let (c, b) = (self.build(c)?, self.build(b)?);
                Node::While(c, b)
            }
            Assign(v, e) => {
                let (v, e) = (self.build(v)?, self.build(e)?);
                Node::Assign(v, e)
            }
            Deref(v) => Node::Deref(self.build(v)?),
            NewVar { name, init, body, .. } => {
                let slot = self.slots;
                self.slots += 1;
                self.scope.push((name.clone(), Binding::Local(slot)));
                let body = self.build(body);
                self.scope.pop();
                Node::NewVar {
                    slot,
                    init: literal(init)?,
                    body: body?,
                }
            }
            NewArray { name, len, init, body, .. } => {
                let slot = self.slots;
                self.slots += 1;
                let len = i128::from(*len);
                self.scope.push((name.clone(), Binding::LocalArray(slot, len)));
                let body = self.build(body);
                self.scope.pop();
                Node::NewArray {
                    slot,
                    init: literal(init)?,
                    body: body?,
                }
            }
            ArrayElem { name, index } => {
                let index = self.build(index)?;
                match self.lookup(name)? {
                    Binding::LocalArray(slot, len) => Node::LocalElem { slot, len, index },
                    Binding::FreeArray(name, elem, len) => Node::FreeElem { name, elem, len, index },
                    _ => return Err(OracleError::Unsupported(format!("`{name}` is not an array"))),
                }
            }
            Ident(_) | Apply(..) => return self.application(t),
            Lambda { .. } => {
                return Err(OracleError::Unsupported(format!("inner abstraction at {}", t.span)))
            }
        };
        Ok(self.push(node))
    }

    fn application(&mut self, t: &Term) -> Result<NodeId, OracleError> {
        let (head, args) = t.spine();
        let TermKind::Ident(x) = head.kind.as_ref() else {
            return Err(OracleError::Unsupported(format!("application head at {}", head.span)));
        };
        let b = self.lookup(x)?;
        let (tags, ty) = match b {
            Binding::Local(slot) if args.is_empty() => return Ok(self.push(Node::Local(slot))),
            Binding::Length(i) if args.is_empty() => return Ok(self.push(Node::Length(i))),
            Binding::Free(name, ty) => (vec![TagAtom::Ident(name)], ty),
            Binding::Param(i, b) => (vec![TagAtom::Arg(i)], FunType::base(b)),
            _ => return Err(OracleError::Unsupported(format!("use of `{x}` at {}", t.span))),
        };
        if args.len() != ty.args.len() {
            return Err(OracleError::Unsupported(format!("partial application at {}", t.span)));
        }
        let mut built = Vec::new();
        for (a, b) in args.iter().zip(&ty.args) {
            built.push((self.build(a)?, *b));
        }
        Ok(self.push(Node::Call {
            tags,
            args: built,
            dtype: data_of(ty.result),
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Mode {
    Com,
    Exp,
    Read,
    Write(V),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Frame {
    Then(NodeId),
    Branch(NodeId, NodeId, Mode),
    Test(NodeId, NodeId),
    Body(NodeId, NodeId),
    Left(BinOp, NodeId),
    Right(BinOp, V),
    Negate,
    Store(NodeId),
    Release(usize),
    LocalIndex(usize, i128, Mode),
    FreeIndex(NodeId, Mode),
    /// An argument evaluation requested by the environment; its result is
    /// reported with the given tags and the call resumes afterwards.
    Report(Vec<TagAtom>, Mode, NodeId, Mode),
    /// A pending environment answer to a cell access.
    Cell(Vec<TagAtom>, Mode),
    /// A pending `done` of the abort command, after which `V` is returned.
    Abort(V),
    Top(Mode),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Control {
    Eval(NodeId, Mode),
    Return(V),
    /// Waiting inside a call for the environment's next move.
    Called(NodeId, Mode),
    Start,
    Finished,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Cell {
    Scalar(V),
    Array(BTreeMap<i128, V>, V),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Config {
    control: Control,
    stack: Vec<Frame>,
    store: Vec<Option<Cell>>,
    lengths: Vec<i128>,
}

struct Machine<'a> {
    nodes: &'a [Node],
    top: NodeId,
    result: BaseType,
    n: i128,
    bounds_check: bool,
    num_lengths: usize,
}

type Step = (Option<Letter>, Config);

fn tagged(kind: MoveKind, tags: &[TagAtom]) -> Letter {
    Letter::tagged(kind, tags.to_vec())
}

fn with_arg(tags: &[TagAtom], i: usize) -> Vec<TagAtom> {
    let mut t = tags.to_vec();
    t.push(TagAtom::Arg(i as u32 + 1));
    t
}

impl Machine<'_> {
    fn domain(&self, d: DataType) -> Vec<V> {
        match d {
            DataType::Int => (0..self.n).map(V::Int).collect(),
            DataType::Bool => vec![V::Bool(false), V::Bool(true)],
        }
    }

    fn in_domain(&self, v: V) -> bool {
        match v {
            V::Int(i) => (0..self.n).contains(&i),
            _ => true,
        }
    }

    fn question(mode: Mode, tags: &[TagAtom]) -> Letter {
        let kind = match mode {
            Mode::Com => MoveKind::Run,
            Mode::Exp => MoveKind::Q,
            Mode::Read => MoveKind::Read,
            Mode::Write(v) => MoveKind::Write(v.letter_payload()),
        };
        tagged(kind, tags)
    }

    /// The answer move to a question of `mode` carrying result `v`.
    fn answer(mode: Mode, v: V, tags: &[TagAtom]) -> Letter {
        let kind = match mode {
            Mode::Com => MoveKind::Done,
            Mode::Exp | Mode::Read => MoveKind::Answer(v.letter_payload()),
            Mode::Write(_) => MoveKind::Ok,
        };
        tagged(kind, tags)
    }

    fn initial(&self) -> Config {
        Config {
            control: Control::Start,
            stack: Vec::new(),
            store: Vec::new(),
            lengths: Vec::new(),
        }
    }

    fn eval(c: &Config, node: NodeId, mode: Mode) -> Config {
        Config {
            control: Control::Eval(node, mode),
            ..c.clone()
        }
    }

    fn ret(c: &Config, v: V) -> Config {
        Config {
            control: Control::Return(v),
            ..c.clone()
        }
    }

    fn push(c: &Config, f: Frame, node: NodeId, mode: Mode) -> Config {
        let mut c = Self::eval(c, node, mode);
        c.stack.push(f);
        c
    }

    fn steps(&self, c: &Config) -> Vec<Step> {
        match &c.control {
            Control::Finished => Vec::new(),
            Control::Start => self.start(c),
            Control::Eval(node, mode) => self.eval_steps(c, *node, *mode),
            Control::Return(v) => self.return_steps(c, *v),
            Control::Called(node, mode) => self.environment(c, *node, *mode),
        }
    }

    fn start(&self, c: &Config) -> Vec<Step> {
        if c.lengths.len() < self.num_lengths {
            return (1..self.n)
                .map(|k| {
                    let mut d = c.clone();
                    d.lengths.push(k);
                    (None, d)
                })
                .collect();
        }
        let modes: Vec<Mode> = match self.result {
            BaseType::Com => vec![Mode::Com],
            BaseType::Exp(_) => vec![Mode::Exp],
            BaseType::Var(d) => std::iter::once(Mode::Read)
                .chain(self.domain(d).into_iter().map(Mode::Write))
                .collect(),
        };
        modes
            .into_iter()
            .map(|m| {
                let c = Self::push(c, Frame::Top(m), self.top, m);
                (Some(Self::question(m, &[])), c)
            })
            .collect()
    }

    fn eval_steps(&self, c: &Config, node: NodeId, mode: Mode) -> Vec<Step> {
        let silent = |d: Config| vec![(None, d)];
        match &self.nodes[node] {
            Node::Const(v) => silent(Self::ret(c, *v)),
            Node::Bin(op, a, b) => silent(Self::push(c, Frame::Left(*op, *b), *a, Mode::Exp)),
            Node::Not(a) => silent(Self::push(c, Frame::Negate, *a, Mode::Exp)),
            Node::Seq(a, b) => silent(Self::push(c, Frame::Then(*b), *a, Mode::Com)),
            Node::If(k, a, b) => silent(Self::push(c, Frame::Branch(*a, *b, mode), *k, Mode::Exp)),
            Node::While(k, b) => silent(Self::push(c, Frame::Test(*k, *b), *k, Mode::Exp)),
            Node::Assign(v, e) => silent(Self::push(c, Frame::Store(*v), *e, Mode::Exp)),
            Node::Deref(v) => silent(Self::eval(c, *v, Mode::Read)),
            Node::NewVar { slot, init, body } => {
                if !self.in_domain(*init) {
                    return Vec::new();
                }
                let mut d = Self::push(c, Frame::Release(*slot), *body, mode);
                set_cell(&mut d.store, *slot, Cell::Scalar(*init));
                silent(d)
            }
            Node::NewArray { slot, init, body, .. } => {
                if !self.in_domain(*init) {
                    return Vec::new();
                }
                let mut d = Self::push(c, Frame::Release(*slot), *body, mode);
                set_cell(&mut d.store, *slot, Cell::Array(BTreeMap::new(), *init));
                silent(d)
            }
            Node::Local(slot) => {
                let Some(Some(Cell::Scalar(cur))) = c.store.get(*slot) else {
                    return Vec::new();
                };
                match mode {
                    Mode::Exp | Mode::Read => silent(Self::ret(c, *cur)),
                    Mode::Write(v) if self.in_domain(v) => {
                        let mut d = Self::ret(c, V::Unit);
                        set_cell(&mut d.store, *slot, Cell::Scalar(v));
                        silent(d)
                    }
                    _ => Vec::new(),
                }
            }
            Node::LocalElem { slot, len, index } => {
                silent(Self::push(c, Frame::LocalIndex(*slot, *len, mode), *index, Mode::Exp))
            }
            Node::FreeElem { index, .. } => silent(Self::push(c, Frame::FreeIndex(node, mode), *index, Mode::Exp)),
            Node::Length(i) => silent(Self::ret(c, V::Int(c.lengths[*i]))),
            Node::Call { tags, .. } => {
                if let Mode::Write(v) = mode {
                    if !self.in_domain(v) {
                        return Vec::new();
                    }
                }
                let d = Config {
                    control: Control::Called(node, mode),
                    ..c.clone()
                };
                vec![(Some(Self::question(mode, tags)), d)]
            }
        }
    }

    /// The environment's moves inside a call: an argument request or the answer.
    fn environment(&self, c: &Config, node: NodeId, mode: Mode) -> Vec<Step> {
        let Node::Call { tags, args, dtype } = &self.nodes[node] else {
            unreachable!("only calls wait for the environment")
        };
        let mut out = Vec::new();
        let results: Vec<V> = match mode {
            Mode::Com | Mode::Write(_) => vec![V::Unit],
            Mode::Exp | Mode::Read => self.domain(dtype.expect("valued call")),
        };
        for v in results {
            out.push((Some(Self::answer(mode, v, tags)), Self::ret(c, v)));
        }
        for (i, (arg, ty)) in args.iter().enumerate() {
            let arg_tags = with_arg(tags, i);
            let modes: Vec<Mode> = match ty {
                BaseType::Com => vec![Mode::Com],
                BaseType::Exp(_) => vec![Mode::Exp],
                BaseType::Var(d) => std::iter::once(Mode::Read)
                    .chain(self.domain(*d).into_iter().map(Mode::Write))
                    .collect(),
            };
            for m in modes {
                let frame = Frame::Report(arg_tags.clone(), m, node, mode);
                out.push((Some(Self::question(m, &arg_tags)), Self::push(c, frame, *arg, m)));
            }
        }
        out
    }

    fn return_steps(&self, c: &Config, v: V) -> Vec<Step> {
        let mut d = c.clone();
        let Some(frame) = d.stack.pop() else {
            return Vec::new();
        };
        let silent = |d: Config| vec![(None, d)];
        match frame {
            Frame::Then(b) => silent(Self::eval(&d, b, Mode::Com)),
            Frame::Branch(a, b, mode) => match v {
                V::Bool(true) => silent(Self::eval(&d, a, mode)),
                V::Bool(false) => silent(Self::eval(&d, b, mode)),
                _ => Vec::new(),
            },
            Frame::Test(k, b) => match v {
                V::Bool(true) => silent(Self::push(&d, Frame::Body(k, b), b, Mode::Com)),
                V::Bool(false) => silent(Self::ret(&d, V::Unit)),
                _ => Vec::new(),
            },
            Frame::Body(k, b) => silent(Self::push(&d, Frame::Test(k, b), k, Mode::Exp)),
            Frame::Left(op, b) => silent(Self::push(&d, Frame::Right(op, v), b, Mode::Exp)),
            Frame::Right(op, l) => match binop(op, l, v) {
                Some(r) => silent(Self::ret(&d, r)),
                None => Vec::new(),
            },
            Frame::Negate => match v {
                V::Bool(b) => silent(Self::ret(&d, V::Bool(!b))),
                _ => Vec::new(),
            },
            Frame::Store(var) => silent(Self::eval(&d, var, Mode::Write(v))),
            Frame::Release(slot) => {
                d.store[slot] = None;
                silent(Self::ret(&d, v))
            }
            Frame::LocalIndex(slot, len, mode) => {
                let V::Int(z) = v else { return Vec::new() };
                let elem = match init_of(&d.store, slot) {
                    Some(V::Bool(_)) => DataType::Bool,
                    _ => DataType::Int,
                };
                if z >= len {
                    return self.out_of_bounds(&d, mode, elem);
                }
                let Some(Some(Cell::Array(map, init))) = d.store.get(slot).cloned() else {
                    return Vec::new();
                };
                match mode {
                    Mode::Exp | Mode::Read => {
                        let cur = map.get(&z).copied().unwrap_or(init);
                        silent(Self::ret(&d, cur))
                    }
                    Mode::Write(w) if self.in_domain(w) => {
                        let mut map = map;
                        map.insert(z, w);
                        d.store[slot] = Some(Cell::Array(map, init));
                        silent(Self::ret(&d, V::Unit))
                    }
                    _ => Vec::new(),
                }
            }
            Frame::FreeIndex(node, mode) => {
                let Node::FreeElem { name, elem, len, .. } = &self.nodes[node] else {
                    unreachable!("free index frames point at free elements")
                };
                let V::Int(z) = v else { return Vec::new() };
                let len = match len {
                    Len::Fixed(k) => *k,
                    Len::Chosen(i) => d.lengths[*i],
                };
                if z >= len {
                    return self.out_of_bounds(&d, mode, *elem);
                }
                let tags = [TagAtom::Cell(name.clone(), AExp::Lit(z))];
                match mode {
                    Mode::Exp | Mode::Read => self
                        .domain(*elem)
                        .into_iter()
                        .map(|w| {
                            let mut e = Self::ret(&d, w);
                            e.stack.push(Frame::Cell(tags.to_vec(), Mode::Read));
                            (Some(Self::question(Mode::Read, &tags)), e)
                        })
                        .collect(),
                    Mode::Write(w) if self.in_domain(w) => {
                        let mut e = Self::ret(&d, V::Unit);
                        e.stack.push(Frame::Cell(tags.to_vec(), Mode::Write(w)));
                        vec![(Some(Self::question(Mode::Write(w), &tags)), e)]
                    }
                    _ => Vec::new(),
                }
            }
            Frame::Report(tags, m, node, mode) => {
                if !self.in_domain(v) {
                    return Vec::new();
                }
                let letter = Self::answer(m, v, &tags);
                let e = Config {
                    control: Control::Called(node, mode),
                    ..d
                };
                vec![(Some(letter), e)]
            }
            Frame::Cell(tags, m) => vec![(Some(Self::answer(m, v, &tags)), Self::ret(&d, v))],
            Frame::Abort(r) => {
                let abort = [TagAtom::ident("abort")];
                vec![(Some(Self::answer(Mode::Com, V::Unit, &abort)), Self::ret(&d, r))]
            }
            Frame::Top(m) => {
                if !self.in_domain(v) {
                    return Vec::new();
                }
                let e = Config {
                    control: Control::Finished,
                    ..d
                };
                vec![(Some(Self::answer(m, v, &[])), e)]
            }
        }
    }

    /// With bounds checking, runs `abort` and then answers the default value.
    fn out_of_bounds(&self, c: &Config, mode: Mode, elem: DataType) -> Vec<Step> {
        if !self.bounds_check {
            return Vec::new();
        }
        let abort = [TagAtom::ident("abort")];
        let r = match (mode, elem) {
            (Mode::Exp | Mode::Read, DataType::Int) => V::Int(0),
            (Mode::Exp | Mode::Read, DataType::Bool) => V::Bool(false),
            _ => V::Unit,
        };
        let mut e = Self::ret(c, V::Unit);
        e.stack.push(Frame::Abort(r));
        vec![(Some(Self::question(Mode::Com, &abort)), e)]
    }
}

fn init_of(store: &[Option<Cell>], slot: usize) -> Option<V> {
    match store.get(slot) {
        Some(Some(Cell::Array(_, init))) => Some(*init),
        _ => None,
    }
}

fn set_cell(store: &mut Vec<Option<Cell>>, slot: usize, cell: Cell) {
    if store.len() <= slot {
        store.resize(slot + 1, None);
    }
    store[slot] = Some(cell);
}

fn binop(op: BinOp, a: V, b: V) -> Option<V> {
    use BinOp::*;
    Some(match (a, b) {
        (V::Int(x), V::Int(y)) => match op {
            Add => V::Int(x.checked_add(y)?),
            Sub => V::Int(x.checked_sub(y)?),
            Mul => V::Int(x.checked_mul(y)?),
            Div if y == 0 => return None,
            Mod if y == 0 => return None,
            Div => V::Int(x.checked_div_euclid(y)?),
            Mod => V::Int(x.checked_rem_euclid(y)?),
            Eq => V::Bool(x == y),
            Ne => V::Bool(x != y),
            Lt => V::Bool(x < y),
            Le => V::Bool(x <= y),
            Gt => V::Bool(x > y),
            Ge => V::Bool(x >= y),
            And | Or => return None,
        },
        (V::Bool(x), V::Bool(y)) => match op {
            And => V::Bool(x && y),
            Or => V::Bool(x || y),
            Eq => V::Bool(x == y),
            Ne => V::Bool(x != y),
            _ => return None,
        },
        _ => return None,
    })
}

/// Concrete strategy of `ctx |- t : ty` over `int_n = {0, ..., n-1}`.
pub fn interpret_concrete(ctx: &Context, t: &Term, ty: &FunType, n: usize) -> Result<ConcreteAutomaton, OracleError> {
    interpret_concrete_with(ctx, t, ty, n, false)
}

/// As [`interpret_concrete`], optionally aborting on out-of-range array indices.
pub fn interpret_concrete_with(
    ctx: &Context,
    t: &Term,
    ty: &FunType,
    n: usize,
    bounds_check: bool,
) -> Result<ConcreteAutomaton, OracleError> {
    let mut b = Builder {
        nodes: Vec::new(),
        scope: Vec::new(),
        slots: 0,
    };
    let mut num_lengths = 0;
    for d in &ctx.decls {
        match &d.ty {
            DeclType::Fun(f) => b.scope.push((d.name.clone(), Binding::Free(d.name.clone(), f.clone()))),
            DeclType::Array { elem, len } => {
                let len = match len {
                    ArrayLen::Fixed(k) => Len::Fixed(i128::from(*k)),
                    ArrayLen::Symbolic(name) => {
                        let i = num_lengths;
                        num_lengths += 1;
                        if let Some(k) = name {
                            b.scope.push((k.clone(), Binding::Length(i)));
                        }
                        Len::Chosen(i)
                    }
                };
                b.scope.push((d.name.clone(), Binding::FreeArray(d.name.clone(), *elem, len)));
            }
        }
    }
    let mut body = t;
    let mut p = 0;
    while let TermKind::Lambda { param, ty: pty, body: inner } = body.kind.as_ref() {
        p += 1;
        b.scope.push((param.clone(), Binding::Param(p, *pty)));
        body = inner;
    }
    if p as usize != ty.args.len() {
        return Err(OracleError::Unsupported("term of function type without abstractions".into()));
    }
    let top = b.build(body)?;
    let machine = Machine {
        nodes: &b.nodes,
        top,
        result: ty.result,
        n: n as i128,
        bounds_check,
        num_lengths,
    };
    Ok(explore(&machine))
}

fn explore(m: &Machine<'_>) -> ConcreteAutomaton {
    let mut ids: HashMap<Config, usize> = HashMap::new();
    let mut a = ConcreteAutomaton::default();
    let start = m.initial();
    ids.insert(start.clone(), 0);
    a.num_states = 1;
    let mut queue = VecDeque::from([start]);
    while let Some(c) = queue.pop_front() {
        let src = ids[&c];
        if c.control == Control::Finished {
            a.finals.insert(src);
        }
        for (l, d) in m.steps(&c) {
            let dst = match ids.get(&d) {
                Some(&i) => i,
                None => {
                    let i = a.num_states;
                    a.num_states += 1;
                    ids.insert(d.clone(), i);
                    queue.push_back(d);
                    i
                }
            };
            a.transitions.push((src, l, dst));
        }
    }
    a
}
