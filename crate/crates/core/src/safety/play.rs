use std::collections::HashMap;
use std::fmt;

use crate::automata::{StateId, SymAutomaton};
use crate::solver::{ArrayDef, ArrayRead, Constraint};
use crate::symbolic::{
    AExp, ArrSym, BExp, EvalError, Evaluation, Exp, GuardStep, GuardedWord, Letter, MoveKind, Payload,
    SymName, TagAtom, Value,
};

/// A complete play of a strategy with every binder instantiated to a name of
/// its own, together with its play condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Play {
    pub word: GuardedWord,
    /// States visited, starting at the initial state.
    pub path: Vec<StateId>,
    pub transitions: Vec<usize>,
    pub condition: BExp,
    /// The condition as handed to a solver, with array reads kept apart.
    pub constraint: Constraint,
}

impl Play {
    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.word.letters
    }

    pub fn is_unsafe(&self) -> bool {
        self.word.letters.iter().any(Letter::is_abort)
    }

    /// The letters alone, separated by spaces.
    pub fn plain_text(&self) -> String {
        let parts: Vec<String> = self.word.letters.iter().map(|l| l.to_string()).collect();
        parts.join(" ")
    }
}

impl fmt::Display for Play {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.word)
    }
}

/// Renames binders and trackers to fresh instances as a path is walked.
#[derive(Default)]
struct Instantiator {
    env: HashMap<SymName, Exp>,
    arrays: HashMap<ArrSym, ArrSym>,
    counts: HashMap<(u32, bool), u32>,
    constraint: Constraint,
}

impl Instantiator {
    fn next(&mut self, index: u32, array: bool) -> u32 {
        let n = self.counts.entry((index, array)).or_insert(0);
        *n += 1;
        *n
    }

    fn fresh(&mut self, x: SymName) -> SymName {
        let occ = self.next(x.index, false);
        let y = x.instance(occ);
        self.env.insert(x, Exp::name(y));
        y
    }

    fn fresh_array(&mut self, a: ArrSym) -> ArrSym {
        let occ = self.next(a.index, true);
        let b = a.instance(occ);
        self.arrays.insert(a, b);
        b
    }

    fn current_array(&self, a: ArrSym) -> ArrSym {
        self.arrays.get(&a).copied().unwrap_or(a)
    }

    fn subst(&self, e: &Exp) -> Exp {
        e.subst(&|x| self.env.get(&x).cloned())
    }

    /// Applies one guard step, returning the conjuncts it contributes.
    fn step(&mut self, s: &GuardStep) -> Vec<BExp> {
        let s = s.subst(&|x| self.env.get(&x).cloned());
        match s {
            GuardStep::Assume(b) => {
                let b = b.fold();
                self.constraint.assert(b.clone());
                b.conjuncts()
            }
            GuardStep::Let(x, e) => {
                self.env.insert(x, e);
                Vec::new()
            }
            GuardStep::Set(x, e) => {
                let y = self.fresh(x);
                let b = Exp::equal(&Exp::name(y), &e);
                self.constraint.assert(b.clone());
                vec![b]
            }
            GuardStep::Fresh(x) => {
                self.fresh(x);
                Vec::new()
            }
            GuardStep::ArrayInit(a, v) => {
                let b = self.fresh_array(a);
                self.constraint.array_defs.push(ArrayDef {
                    sym: b,
                    init: v,
                    updates: Vec::new(),
                });
                Vec::new()
            }
            GuardStep::ArrayStore(a, i, v) => {
                let prev = self.current_array(a);
                let (init, mut updates) = match self.constraint.def(prev) {
                    Some(d) => (d.init.clone(), d.updates.clone()),
                    None => (Exp::literal(Value::default_of(a.elem)), Vec::new()),
                };
                updates.push((i, v));
                let b = self.fresh_array(a);
                self.constraint.array_defs.push(ArrayDef { sym: b, init, updates });
                Vec::new()
            }
            GuardStep::ArrayLoad(x, a, i) => {
                let sym = self.current_array(a);
                if self.constraint.def(sym).is_none() {
                    self.constraint.array_defs.push(ArrayDef {
                        sym,
                        init: Exp::literal(Value::default_of(a.elem)),
                        updates: Vec::new(),
                    });
                }
                let y = self.fresh(x);
                let read = ArrayRead { sym, index: i, result: y };
                self.constraint.reads.push(read.clone());
                let single = Constraint {
                    conjuncts: Vec::new(),
                    array_defs: self.constraint.array_defs.clone(),
                    reads: vec![read],
                };
                vec![single.formula()]
            }
        }
    }

    fn letter(&mut self, l: &Letter) -> Letter {
        let l = l.map_exps(&|e| self.subst(e));
        match l.kind.payload() {
            Some(Payload::Bind(x)) => {
                let y = self.fresh(*x);
                Letter::tagged(l.kind.with_payload(Payload::Bind(y)), l.tags.clone())
            }
            _ => l,
        }
    }
}

/// Instantiates the path through `a` given by `transitions`.
pub fn instantiate(a: &SymAutomaton, transitions: &[usize]) -> Play {
    let mut inst = Instantiator::default();
    let mut path = vec![a.initial];
    let mut items: Vec<(Vec<BExp>, Letter)> = Vec::new();
    let mut pending: Vec<BExp> = Vec::new();
    for &i in transitions {
        let t = &a.transitions[i];
        path.push(t.dst);
        for s in t.guard.steps() {
            let parts = inst.step(s);
            pending.extend(parts);
        }
        if let Some(l) = &t.label {
            let l = inst.letter(l);
            items.push((std::mem::take(&mut pending), l));
        }
    }
    if let Some(last) = items.last_mut() {
        last.0.extend(pending);
    }
    let word = GuardedWord::from_letters(items.into_iter().map(|(g, l)| (BExp::and(g), l)));
    Play {
        condition: word.condition.clone(),
        word,
        path,
        transitions: transitions.to_vec(),
        constraint: inst.constraint,
    }
}

/// Replaces every symbolic payload of `letters` by its value under `rho`;
/// names `rho` leaves open take their type's default.
pub(crate) fn concrete_letters(
    letters: &[Letter],
    rho: &Evaluation,
) -> Result<Vec<Letter>, EvalError> {
    let mut rho = rho.clone();
    for l in letters {
        l.for_each_name(&mut |x| {
            if rho.get(x).is_none() {
                rho.set(x, Value::default_of(x.dtype));
            }
        });
    }
    let mut out = Vec::with_capacity(letters.len());
    for l in letters {
        let kind = match &l.kind {
            MoveKind::Write(p) => MoveKind::Write(Payload::Expr(payload_value(p, &rho)?)),
            MoveKind::Answer(p) => MoveKind::Answer(Payload::Expr(payload_value(p, &rho)?)),
            k => k.clone(),
        };
        let mut tags = Vec::with_capacity(l.tags.len());
        for t in &l.tags {
            tags.push(match t {
                TagAtom::Cell(n, i) => {
                    TagAtom::Cell(n.clone(), AExp::Lit(i.eval(&rho)?))
                }
                other => other.clone(),
            });
        }
        out.push(Letter::tagged(kind, tags));
    }
    Ok(out)
}

fn payload_value(p: &Payload, rho: &Evaluation) -> Result<Exp, EvalError> {
    let e = match p {
        Payload::Bind(x) => Exp::name(*x),
        Payload::Expr(e) => e.clone(),
    };
    Ok(Exp::literal(e.eval(rho)?))
}
