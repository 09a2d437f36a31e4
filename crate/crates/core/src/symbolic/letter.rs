use super::expr::{AExp, BExp, Exp};
use super::{ArrSym, SymName};

/// One component of a tag: an identifier, an argument position, or an array cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TagAtom {
    Ident(String),
    Arg(u32),
    Cell(String, AExp),
}

impl TagAtom {
    pub fn ident(name: impl Into<String>) -> Self {
        TagAtom::Ident(name.into())
    }

    /// Identifier the atom refers to, counting array cells as their array.
    pub fn ident_name(&self) -> Option<&str> {
        match self {
            TagAtom::Ident(n) | TagAtom::Cell(n, _) => Some(n),
            TagAtom::Arg(_) => None,
        }
    }
}

/// A move's payload: an input symbol `?X` or an expression.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Payload {
    Bind(SymName),
    Expr(Exp),
}

impl Payload {
    pub fn binder(&self) -> Option<SymName> {
        match self {
            Payload::Bind(x) => Some(*x),
            Payload::Expr(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    Q,
    Run,
    Done,
    Read,
    Ok,
    Write(Payload),
    Answer(Payload),
}

/// Payload-free move constructors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveCtor {
    Q,
    Run,
    Done,
    Read,
    Ok,
    Write,
    Answer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Question,
    Answer,
}

impl MoveCtor {
    pub fn polarity(self) -> Polarity {
        match self {
            MoveCtor::Q | MoveCtor::Run | MoveCtor::Read | MoveCtor::Write => Polarity::Question,
            MoveCtor::Done | MoveCtor::Ok | MoveCtor::Answer => Polarity::Answer,
        }
    }
}

impl MoveKind {
    pub fn ctor(&self) -> MoveCtor {
        match self {
            MoveKind::Q => MoveCtor::Q,
            MoveKind::Run => MoveCtor::Run,
            MoveKind::Done => MoveCtor::Done,
            MoveKind::Read => MoveCtor::Read,
            MoveKind::Ok => MoveCtor::Ok,
            MoveKind::Write(_) => MoveCtor::Write,
            MoveKind::Answer(_) => MoveCtor::Answer,
        }
    }

    pub fn payload(&self) -> Option<&Payload> {
        match self {
            MoveKind::Write(p) | MoveKind::Answer(p) => Some(p),
            _ => None,
        }
    }

    pub fn with_payload(&self, p: Payload) -> MoveKind {
        match self {
            MoveKind::Write(_) => MoveKind::Write(p),
            MoveKind::Answer(_) => MoveKind::Answer(p),
            other => other.clone(),
        }
    }

    pub fn answer(e: Exp) -> Self {
        MoveKind::Answer(Payload::Expr(e))
    }

    pub fn bind(x: SymName) -> Self {
        MoveKind::Answer(Payload::Bind(x))
    }
}

/// A symbolic letter: a move with its tag path, outermost atom first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub kind: MoveKind,
    pub tags: Vec<TagAtom>,
}

pub type SymbolicLetter = Letter;

impl Letter {
    pub fn new(kind: MoveKind) -> Self {
        Letter {
            kind,
            tags: Vec::new(),
        }
    }

    pub fn tagged(kind: MoveKind, tags: Vec<TagAtom>) -> Self {
        Letter { kind, tags }
    }

    pub fn with_tag(mut self, atom: TagAtom) -> Self {
        self.tags.insert(0, atom);
        self
    }

    pub fn binder(&self) -> Option<SymName> {
        self.kind.payload().and_then(Payload::binder)
    }

    pub fn is_question(&self) -> bool {
        self.kind.ctor().polarity() == Polarity::Question
    }

    pub fn head_tag(&self) -> Option<&TagAtom> {
        self.tags.first()
    }

    pub fn has_head(&self, atom: &TagAtom) -> bool {
        self.head_tag() == Some(atom)
    }

    /// True for letters tagged with the identifier `name` (including its array cells).
    pub fn belongs_to(&self, name: &str) -> bool {
        self.head_tag().and_then(TagAtom::ident_name) == Some(name)
    }

    pub fn is_abort(&self) -> bool {
        self.belongs_to("abort")
    }

    pub fn strip_head(&self) -> Letter {
        Letter {
            kind: self.kind.clone(),
            tags: self.tags[1.min(self.tags.len())..].to_vec(),
        }
    }

    pub fn map_exps(&self, f: &impl Fn(&Exp) -> Exp) -> Letter {
        let kind = match &self.kind {
            MoveKind::Write(Payload::Expr(e)) => MoveKind::Write(Payload::Expr(f(e))),
            MoveKind::Answer(Payload::Expr(e)) => MoveKind::Answer(Payload::Expr(f(e))),
            other => other.clone(),
        };
        let tags = self
            .tags
            .iter()
            .map(|t| match t {
                TagAtom::Cell(n, a) => match f(&Exp::Int(a.clone())) {
                    Exp::Int(a) => TagAtom::Cell(n.clone(), a),
                    Exp::Bool(_) => t.clone(),
                },
                other => other.clone(),
            })
            .collect();
        Letter { kind, tags }
    }

    pub fn for_each_name(&self, f: &mut impl FnMut(SymName)) {
        if let Some(p) = self.kind.payload() {
            match p {
                Payload::Bind(x) => f(*x),
                Payload::Expr(e) => e.for_each_name(f),
            }
        }
        for t in &self.tags {
            if let TagAtom::Cell(_, a) = t {
                a.for_each_name(f);
            }
        }
    }
}

/// One step of a transition guard. Steps run in order before the letter is played.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GuardStep {
    /// A condition that must hold.
    Assume(BExp),
    /// Makes the name stand for the expression from here on (no constraint of its own).
    Let(SymName, Exp),
    /// Rebinds a tracker name to a fresh symbol equal to the expression.
    Set(SymName, Exp),
    /// Rebinds the name to an unconstrained fresh symbol.
    Fresh(SymName),
    /// A fresh array function symbol, constant everywhere.
    ArrayInit(ArrSym, Exp),
    /// A fresh version of the array updated at one index.
    ArrayStore(ArrSym, AExp, Exp),
    /// Binds the name to the array's value at the index.
    ArrayLoad(SymName, ArrSym, AExp),
}

impl GuardStep {
    pub fn binds(&self) -> Option<SymName> {
        match self {
            GuardStep::Let(x, _)
            | GuardStep::Set(x, _)
            | GuardStep::Fresh(x)
            | GuardStep::ArrayLoad(x, _, _) => Some(*x),
            _ => None,
        }
    }

    pub fn is_binding(&self) -> bool {
        !matches!(self, GuardStep::Assume(_))
    }

    /// Visits the names the step reads, excluding the one it binds.
    pub fn for_each_used(&self, f: &mut impl FnMut(SymName)) {
        match self {
            GuardStep::Assume(b) => b.for_each_name(f),
            GuardStep::Let(_, e) | GuardStep::Set(_, e) | GuardStep::ArrayInit(_, e) => {
                e.for_each_name(f)
            }
            GuardStep::Fresh(_) => {}
            GuardStep::ArrayStore(_, i, v) => {
                i.for_each_name(f);
                v.for_each_name(f);
            }
            GuardStep::ArrayLoad(_, _, i) => i.for_each_name(f),
        }
    }

    /// Substitutes in the expressions the step reads.
    pub fn subst(&self, s: &impl Fn(SymName) -> Option<Exp>) -> GuardStep {
        match self {
            GuardStep::Assume(b) => GuardStep::Assume(b.subst(s)),
            GuardStep::Let(x, e) => GuardStep::Let(*x, e.subst(s)),
            GuardStep::Set(x, e) => GuardStep::Set(*x, e.subst(s)),
            GuardStep::Fresh(x) => GuardStep::Fresh(*x),
            GuardStep::ArrayInit(a, v) => GuardStep::ArrayInit(*a, v.subst(s)),
            GuardStep::ArrayStore(a, i, v) => GuardStep::ArrayStore(*a, i.subst(s), v.subst(s)),
            GuardStep::ArrayLoad(x, a, i) => GuardStep::ArrayLoad(*x, *a, i.subst(s)),
        }
    }

    pub fn uses(&self, x: SymName) -> bool {
        let mut found = false;
        self.for_each_used(&mut |y| found |= y == x);
        found
    }
}

/// Ordered guard steps of a transition; the empty guard is `tt`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Guard(pub Vec<GuardStep>);

impl Guard {
    pub fn tt() -> Self {
        Guard(Vec::new())
    }

    pub fn assume(b: BExp) -> Self {
        if b.is_tt() {
            Guard::tt()
        } else {
            Guard(vec![GuardStep::Assume(b)])
        }
    }

    pub fn is_tt(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[GuardStep] {
        &self.0
    }

    pub fn then(&self, other: &Guard) -> Guard {
        let mut steps = self.0.clone();
        steps.extend(other.0.iter().cloned());
        Guard(steps)
    }

    pub fn push(&mut self, step: GuardStep) {
        if !matches!(&step, GuardStep::Assume(b) if b.is_tt()) {
            self.0.push(step);
        }
    }

    pub fn uses(&self, x: SymName) -> bool {
        self.0.iter().any(|s| s.uses(x))
    }

    pub fn has_bindings(&self) -> bool {
        self.0.iter().any(GuardStep::is_binding)
    }

    /// Conjunction of the assumptions, for guards without bindings.
    pub fn as_bexp(&self) -> Option<BExp> {
        let mut parts = Vec::new();
        for s in &self.0 {
            match s {
                GuardStep::Assume(b) => parts.push(b.clone()),
                _ => return None,
            }
        }
        Some(BExp::and(parts))
    }
}

impl From<BExp> for Guard {
    fn from(b: BExp) -> Self {
        Guard::assume(b)
    }
}

/// A guarded letter `<b, m>`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GuardedLetter {
    pub guard: Guard,
    pub letter: Letter,
}

impl GuardedLetter {
    pub fn new(guard: impl Into<Guard>, letter: Letter) -> Self {
        GuardedLetter {
            guard: guard.into(),
            letter,
        }
    }

    pub fn plain(letter: Letter) -> Self {
        GuardedLetter {
            guard: Guard::tt(),
            letter,
        }
    }
}

/// A guarded word `<b, w>`: the play condition, the letters and each letter's own guard.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedWord {
    pub condition: BExp,
    pub letters: Vec<Letter>,
    pub guards: Vec<BExp>,
}

impl GuardedWord {
    pub fn from_letters(items: impl IntoIterator<Item = (BExp, Letter)>) -> Self {
        let (guards, letters): (Vec<BExp>, Vec<Letter>) = items.into_iter().unzip();
        GuardedWord {
            condition: BExp::and(guards.iter().cloned()),
            letters,
            guards,
        }
    }

    /// The condition is the ordered conjunction of the letter guards.
    pub fn is_well_formed(&self) -> bool {
        self.letters.len() == self.guards.len()
            && self.condition == BExp::and(self.guards.iter().cloned())
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }
}
