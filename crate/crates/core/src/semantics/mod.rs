//! Symbolic strategies of terms, built compositionally from the copy-cat
//! strategies of free identifiers and the strategies of the constructs.

mod newvar;
mod strategies;

use std::collections::BTreeSet;

use num_traits::ToPrimitive;
use thiserror::Error;

pub use newvar::{array_new_elimination, cell_strategy, new_by_intersection, new_elimination};
pub use strategies::{apply_op, array_element, construct_strategy, free_identifier, Construct};

use crate::automata::{compose, eliminate_epsilon, rename, word, AutomatonError, SymAutomaton};
use crate::symbolic::{AExp, BExp, Exp, GuardStep, GuardedLetter, Letter, MoveKind, NamePool, Rel, SymName, TagAtom, Value};
use crate::syntax::{
    ArrayLen, BaseType, Context, DataType, DeclType, FunType, Judgement, Literal, Term, TermKind,
};

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error(transparent)]
    Automaton(#[from] AutomatonError),
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("literal {0} is out of range")]
    LiteralRange(String),
    #[error("unsupported term: {0}")]
    Unsupported(String),
    #[error("malformed strategy: {0}")]
    Malformed(String),
}

/// How local variables are hidden.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum NewRoute {
    /// Matching write/ok and read/answer pairs against a tracker name.
    #[default]
    Direct,
    /// Intersecting with the cell strategy and hiding its moves. Local arrays
    /// always use the direct route.
    Intersection,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Adds the `abort` branch for out-of-range array indices.
    pub bounds_check: bool,
    /// Propagates definitions and drops trivial guards in the result.
    pub simplify: bool,
    pub new_route: NewRoute,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            bounds_check: false,
            simplify: true,
            new_route: NewRoute::Direct,
        }
    }
}

/// A term's symbolic strategy.
#[derive(Debug, Clone)]
pub struct Strategy {
    pub automaton: SymAutomaton,
    pub ty: FunType,
    pub ctx: Context,
    /// Names standing for symbolic array lengths, keyed by array identifier.
    pub lengths: Vec<(String, SymName)>,
}

impl Strategy {
    /// Symbolic names every play may mention without binding them.
    pub fn globals(&self) -> Vec<SymName> {
        self.lengths.iter().map(|(_, k)| *k).collect()
    }
}

/// Builds the strategy of a loaded judgement.
pub fn interpret_judgement(j: &Judgement, opts: Options) -> Result<Strategy, SemanticsError> {
    interpret(&j.ctx, &j.term, &j.ty, opts)
}

/// Builds the strategy of `ctx |- t : ty`. The term must be elaborated and
/// β-normal.
pub fn interpret(ctx: &Context, t: &Term, ty: &FunType, opts: Options) -> Result<Strategy, SemanticsError> {
    let mut tr = Translator::new(ctx, t, opts);
    let a = tr.top(t)?;
    let a = if opts.simplify { a.simplify().trim() } else { a };
    Ok(Strategy {
        automaton: a,
        ty: ty.clone(),
        ctx: ctx.clone(),
        lengths: tr.lengths,
    })
}

/// A copy of `a` whose initial state has no incoming transitions.
pub(crate) fn isolate_initial(a: &SymAutomaton) -> SymAutomaton {
    let mut r = a.clone();
    if !a.transitions.iter().any(|t| t.dst == a.initial) {
        return r;
    }
    let s = r.add_state();
    if a.is_final(a.initial) {
        r.add_final(s);
    }
    for t in &a.transitions {
        if t.src == a.initial {
            r.add(s, t.guard.clone(), t.label.clone(), t.dst);
        }
    }
    r.initial = s;
    r.prune_unreachable()
}

pub(crate) fn literal_value(l: &Literal) -> Result<Value, SemanticsError> {
    match l {
        Literal::Bool(b) => Ok(Value::Bool(*b)),
        Literal::Int(n) => n
            .to_i128()
            .map(Value::Int)
            .ok_or_else(|| SemanticsError::LiteralRange(n.to_string())),
    }
}

#[derive(Debug, Clone)]
enum Binding {
    Fun { tag: String, ty: FunType },
    Array { tag: String, elem: DataType, len: AExp },
    Length(SymName),
}

struct Translator {
    opts: Options,
    pool: NamePool,
    scope: Vec<(String, Binding)>,
    taken: BTreeSet<String>,
    lengths: Vec<(String, SymName)>,
}

fn collect_names(t: &Term, out: &mut BTreeSet<String>) {
    use TermKind::*;
    match t.kind.as_ref() {
        Ident(x) => {
            out.insert(x.clone());
        }
        Const(_) | Skip => {}
        BinOp(_, a, b) | Seq(a, b) | While(a, b) | Assign(a, b) | Apply(a, b) => {
            collect_names(a, out);
            collect_names(b, out);
        }
        Not(a) | Deref(a) => collect_names(a, out),
        If(c, a, b) => {
            collect_names(c, out);
            collect_names(a, out);
            collect_names(b, out);
        }
        NewVar { name, body, .. } | NewArray { name, body, .. } | Lambda { param: name, body, .. } => {
            out.insert(name.clone());
            collect_names(body, out);
        }
        ArrayElem { name, index } => {
            out.insert(name.clone());
            collect_names(index, out);
        }
    }
}

fn unsupported(t: &Term, what: &str) -> SemanticsError {
    SemanticsError::Unsupported(format!("{what} at {}", t.span))
}

impl Translator {
    fn new(ctx: &Context, t: &Term, opts: Options) -> Self {
        let mut tr = Translator {
            opts,
            pool: NamePool::new(),
            scope: Vec::new(),
            taken: BTreeSet::from(["abort".to_string()]),
            lengths: Vec::new(),
        };
        collect_names(t, &mut tr.taken);
        for d in &ctx.decls {
            tr.taken.insert(d.name.clone());
        }
        tr.taken.extend(ctx.length_names().map(str::to_string));
        for d in &ctx.decls {
            let b = match &d.ty {
                DeclType::Fun(ty) => Binding::Fun {
                    tag: d.name.clone(),
                    ty: ty.clone(),
                },
                DeclType::Array { elem, len } => {
                    let len = match len {
                        ArrayLen::Fixed(n) => AExp::Lit(*n as i128),
                        ArrayLen::Symbolic(k) => {
                            let x = tr.pool.fresh(DataType::Int);
                            tr.lengths.push((d.name.clone(), x));
                            if let Some(k) = k {
                                tr.scope.push((k.clone(), Binding::Length(x)));
                            }
                            AExp::Name(x)
                        }
                    };
                    Binding::Array {
                        tag: d.name.clone(),
                        elem: *elem,
                        len,
                    }
                }
            };
            tr.scope.push((d.name.clone(), b));
        }
        tr
    }

    fn lookup(&self, name: &str) -> Result<&Binding, SemanticsError> {
        self.scope
            .iter()
            .rev()
            .find(|(n, _)| n == name)
            .map(|(_, b)| b)
            .ok_or_else(|| SemanticsError::Unbound(name.to_string()))
    }

    /// A tag for a local binder that no enclosing identifier uses.
    fn local_tag(&mut self, name: &str) -> String {
        let shadowed = name == "abort" || self.scope.iter().any(|(n, _)| n == name);
        if !shadowed {
            return name.to_string();
        }
        let tag = (2..)
            .map(|i| format!("{name}_{i}"))
            .find(|t| !self.taken.contains(t))
            .expect("tag space exhausted");
        self.taken.insert(tag.clone());
        tag
    }

    fn scoped<R>(&mut self, name: &str, b: Binding, f: impl FnOnce(&mut Self) -> R) -> R {
        self.scope.push((name.to_string(), b));
        let r = f(self);
        self.scope.pop();
        r
    }

    /// Plugs `arg` into the moves of `a` tagged `i`.
    fn plug(&mut self, a: SymAutomaton, i: u32, arg: &SymAutomaton) -> Result<SymAutomaton, SemanticsError> {
        let tag = [TagAtom::Arg(i)];
        let c = compose(&a, &rename(arg, &tag), &tag)?;
        Ok(eliminate_epsilon(&c)?.trim())
    }

    fn construct(&mut self, c: Construct, args: &[&Term]) -> Result<SymAutomaton, SemanticsError> {
        let mut a = construct_strategy(c, &mut self.pool);
        for (i, t) in args.iter().enumerate() {
            let m = self.term(t)?;
            a = self.plug(a, i as u32 + 1, &m)?;
        }
        Ok(a)
    }

    fn var_dtype(&self, t: &Term) -> Result<DataType, SemanticsError> {
        match t.kind.as_ref() {
            TermKind::Ident(_) | TermKind::Apply(..) => {
                let TermKind::Ident(f) = t.spine().0.kind.as_ref() else {
                    return Err(unsupported(t, "application of a non-identifier"));
                };
                match self.lookup(f)? {
                    Binding::Fun {
                        ty: FunType {
                            result: BaseType::Var(d),
                            ..
                        },
                        ..
                    } => Ok(*d),
                    _ => Err(unsupported(t, "not a variable")),
                }
            }
            TermKind::ArrayElem { name, .. } => match self.lookup(name)? {
                Binding::Array { elem, .. } => Ok(*elem),
                _ => Err(unsupported(t, "not an array")),
            },
            _ => Err(unsupported(t, "not a variable")),
        }
    }

    /// The copy-cat of `f` with its first `args` plugged in.
    fn application(&mut self, t: &Term) -> Result<(SymAutomaton, FunType), SemanticsError> {
        let (head, args) = t.spine();
        let TermKind::Ident(f) = head.kind.as_ref() else {
            return Err(unsupported(t, "application of a non-identifier"));
        };
        let (tag, ty) = match self.lookup(f)? {
            Binding::Fun { tag, ty } => (tag.clone(), ty.clone()),
            Binding::Length(k) if args.is_empty() => {
                let k = *k;
                let a = plain_word([MoveKind::Q, MoveKind::answer(Exp::name(k))]);
                return Ok((a, FunType::base(BaseType::Exp(DataType::Int))));
            }
            _ => return Err(unsupported(t, "identifier used as a function")),
        };
        if args.len() > ty.args.len() {
            return Err(unsupported(t, "too many arguments"));
        }
        let mut a = free_identifier(&tag, &ty, &mut self.pool);
        for (i, m) in args.iter().enumerate() {
            let ma = self.term(m)?;
            a = self.plug(a, i as u32 + 1, &ma)?;
        }
        let rest = FunType::new(ty.args[args.len()..].to_vec(), ty.result);
        let n = args.len() as u32;
        if n > 0 && !rest.args.is_empty() {
            a = a.map_tags(|tags| shift_args(tags, |j| j - n));
        }
        Ok((a, rest))
    }

    /// The strategy of a base-typed term.
    fn term(&mut self, t: &Term) -> Result<SymAutomaton, SemanticsError> {
        use TermKind::*;
        match t.kind.as_ref() {
            Const(l) => {
                let v = literal_value(l)?;
                Ok(plain_word([MoveKind::Q, MoveKind::answer(Exp::literal(v))]))
            }
            Skip => Ok(plain_word([MoveKind::Run, MoveKind::Done])),
            Ident(_) | Apply(..) => {
                let (a, rest) = self.application(t)?;
                if !rest.is_base() {
                    return Err(unsupported(t, "partial application below the top level"));
                }
                Ok(a)
            }
            BinOp(op, a, b) => self.construct(Construct::Op(*op), &[a, b]),
            Not(a) => self.construct(Construct::Not, &[a]),
            Seq(a, b) => self.construct(Construct::Seq, &[a, b]),
            If(c, a, b) => self.construct(Construct::If, &[c, a, b]),
            While(c, b) => self.construct(Construct::While, &[c, b]),
            Assign(v, e) => {
                let d = self.var_dtype(v)?;
                self.construct(Construct::Assign(d), &[v, e])
            }
            Deref(v) => {
                let d = self.var_dtype(v)?;
                self.construct(Construct::Deref(d), &[v])
            }
            NewVar { dtype, name, init, body } => {
                let tag = self.local_tag(name);
                let b = Binding::Fun {
                    tag: tag.clone(),
                    ty: FunType::base(BaseType::Var(*dtype)),
                };
                let m = self.scoped(name, b, |tr| tr.term(body))?;
                let v = Exp::literal(literal_value(init)?);
                match self.opts.new_route {
                    NewRoute::Direct => {
                        let x = self.pool.fresh(*dtype);
                        new_elimination(&m, &tag, x, &v)
                    }
                    NewRoute::Intersection => new_by_intersection(&m, &tag, &v, &mut self.pool),
                }
            }
            NewArray { dtype, name, len, init, body } => {
                let tag = self.local_tag(name);
                let b = Binding::Array {
                    tag: tag.clone(),
                    elem: *dtype,
                    len: AExp::Lit(*len as i128),
                };
                let m = self.scoped(name, b, |tr| tr.term(body))?;
                let v = Exp::literal(literal_value(init)?);
                let arr = self.pool.fresh_array(*dtype);
                array_new_elimination(&m, &tag, arr, &v, &mut self.pool)
            }
            ArrayElem { name, index } => {
                let (tag, elem, len) = match self.lookup(name)? {
                    Binding::Array { tag, elem, len } => (tag.clone(), *elem, len.clone()),
                    _ => return Err(unsupported(t, "not an array")),
                };
                let a = array_element(&tag, elem, &len, self.opts.bounds_check, &mut self.pool);
                let i = self.term(index)?;
                self.plug(a, 1, &i)
            }
            Lambda { .. } => Err(unsupported(t, "abstraction below the top level")),
        }
    }

    /// The strategy of the whole term: leading abstractions become argument
    /// positions and symbolic lengths are assumed positive.
    fn top(&mut self, t: &Term) -> Result<SymAutomaton, SemanticsError> {
        let mut params = Vec::new();
        let mut body = t;
        let mut pushed = 0;
        while let TermKind::Lambda { param, ty, body: b } = body.kind.as_ref() {
            let tag = self.local_tag(param);
            self.scope.push((
                param.clone(),
                Binding::Fun {
                    tag: tag.clone(),
                    ty: FunType::base(*ty),
                },
            ));
            pushed += 1;
            params.push(tag);
            body = b;
        }
        let r = match body.kind.as_ref() {
            TermKind::Ident(_) | TermKind::Apply(..) => self.application(body).map(|(a, _)| a),
            _ => self.term(body),
        };
        self.scope.truncate(self.scope.len() - pushed);
        let mut a = r?;
        let p = params.len() as u32;
        if p > 0 {
            a = a.map_tags(|tags| {
                let mut tags = shift_args(tags, |j| j + p);
                if let Some(TagAtom::Ident(x)) = tags.first() {
                    if let Some(i) = params.iter().position(|q| q == x) {
                        tags[0] = TagAtom::Arg(i as u32 + 1);
                    }
                }
                tags
            });
        }
        if !self.lengths.is_empty() {
            a = isolate_initial(&a);
            let positive: Vec<GuardStep> = self
                .lengths
                .iter()
                .map(|(_, k)| GuardStep::Assume(BExp::cmp(Rel::Gt, AExp::Name(*k), AExp::Lit(0))))
                .collect();
            for tr in &mut a.transitions {
                if tr.src == a.initial {
                    let mut g = positive.clone();
                    g.append(&mut tr.guard.0);
                    tr.guard.0 = g;
                }
            }
        }
        Ok(a)
    }
}

fn plain_word(kinds: impl IntoIterator<Item = MoveKind>) -> SymAutomaton {
    word(kinds.into_iter().map(|k| GuardedLetter::plain(Letter::new(k))))
}

fn shift_args(tags: &[TagAtom], f: impl Fn(u32) -> u32) -> Vec<TagAtom> {
    let mut tags = tags.to_vec();
    if let Some(TagAtom::Arg(j)) = tags.first_mut() {
        *j = f(*j);
    }
    tags
}
