//! Symbolic names, guard and payload expressions, and guarded letters.

mod expr;
mod letter;
mod read;
mod render;

use std::collections::BTreeSet;

pub use expr::*;
pub use letter::*;
pub use read::{parse_aexp, parse_array_sym, parse_bexp, parse_exp, parse_guard, parse_guarded_letter, parse_letter, ReadError};

use crate::syntax::{BaseType, DataType, FunType};

/// A symbolic name `X_index`. `occurrence` is 0 in automata and counts the
/// instantiations of a binder along a play.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymName {
    pub index: u32,
    pub occurrence: u32,
    pub dtype: DataType,
}

impl SymName {
    pub fn new(index: u32, dtype: DataType) -> Self {
        SymName {
            index,
            occurrence: 0,
            dtype,
        }
    }

    pub fn int(index: u32) -> Self {
        Self::new(index, DataType::Int)
    }

    pub fn bool(index: u32) -> Self {
        Self::new(index, DataType::Bool)
    }

    pub fn instance(self, occurrence: u32) -> Self {
        SymName { occurrence, ..self }
    }

    pub fn base(self) -> Self {
        self.instance(0)
    }
}

/// An array function symbol `int -> D`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArrSym {
    pub index: u32,
    pub occurrence: u32,
    pub elem: DataType,
}

impl ArrSym {
    pub fn new(index: u32, elem: DataType) -> Self {
        ArrSym {
            index,
            occurrence: 0,
            elem,
        }
    }

    pub fn instance(self, occurrence: u32) -> Self {
        ArrSym { occurrence, ..self }
    }
}

/// The set `W` of names in use. Indices are shared by both data types and by
/// array symbols, so a rendered index identifies a name uniquely.
#[derive(Debug, Clone, Default)]
pub struct NamePool {
    used: BTreeSet<u32>,
}

impl NamePool {
    pub fn new() -> Self {
        Self::default()
    }

    fn next_index(&mut self) -> u32 {
        let idx = (1..)
            .find(|i| !self.used.contains(i))
            .expect("index space exhausted");
        self.used.insert(idx);
        idx
    }

    pub fn fresh(&mut self, dtype: DataType) -> SymName {
        SymName::new(self.next_index(), dtype)
    }

    pub fn fresh_array(&mut self, elem: DataType) -> ArrSym {
        ArrSym::new(self.next_index(), elem)
    }

    pub fn reserve(&mut self, name: SymName) {
        self.used.insert(name.index);
    }

    pub fn contains(&self, name: SymName) -> bool {
        self.used.contains(&name.index)
    }

    pub fn len(&self) -> usize {
        self.used.len()
    }

    pub fn is_empty(&self) -> bool {
        self.used.is_empty()
    }
}

/// One move constructor of a type's alphabet with its tag path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveShape {
    pub ctor: MoveCtor,
    pub tags: Vec<TagAtom>,
    /// Data type of the payload position, if any.
    pub payload: Option<DataType>,
}

impl MoveShape {
    pub fn polarity(&self) -> Polarity {
        self.ctor.polarity()
    }
}

fn base_moves(b: BaseType, tags: &[TagAtom], out: &mut Vec<MoveShape>) {
    let mut push = |ctor, payload| {
        out.push(MoveShape {
            ctor,
            tags: tags.to_vec(),
            payload,
        })
    };
    match b {
        BaseType::Com => {
            push(MoveCtor::Run, None);
            push(MoveCtor::Done, None);
        }
        BaseType::Exp(d) => {
            push(MoveCtor::Q, None);
            push(MoveCtor::Answer, Some(d));
        }
        BaseType::Var(d) => {
            push(MoveCtor::Read, None);
            push(MoveCtor::Answer, Some(d));
            push(MoveCtor::Write, Some(d));
            push(MoveCtor::Ok, None);
        }
    }
}

/// The move constructors of `A_[[T]]`: the result type's moves untagged and
/// each argument's moves tagged with its position.
pub fn alphabet_of(ty: &FunType) -> Vec<MoveShape> {
    let mut out = Vec::new();
    base_moves(ty.result, &[], &mut out);
    for (i, a) in ty.args.iter().enumerate() {
        base_moves(*a, &[TagAtom::Arg(i as u32 + 1)], &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_takes_minimal_index() {
        let mut pool = NamePool::new();
        assert_eq!(pool.fresh(DataType::Int), SymName::int(1));
        assert_eq!(pool.fresh(DataType::Int), SymName::int(2));
        let mut pool = NamePool::new();
        pool.reserve(SymName::int(1));
        pool.reserve(SymName::int(3));
        assert_eq!(pool.fresh(DataType::Int), SymName::int(2));
        assert_eq!(pool.fresh(DataType::Bool), SymName::bool(4));
    }

    #[test]
    fn alphabets() {
        let com = alphabet_of(&FunType::base(BaseType::Com));
        let ctors: Vec<_> = com.iter().map(|m| (m.ctor, m.polarity())).collect();
        assert_eq!(
            ctors,
            vec![
                (MoveCtor::Run, Polarity::Question),
                (MoveCtor::Done, Polarity::Answer)
            ]
        );
        let exp = alphabet_of(&FunType::base(BaseType::Exp(DataType::Int)));
        assert_eq!(exp[0].ctor, MoveCtor::Q);
        assert_eq!(exp[1].payload, Some(DataType::Int));
        assert_eq!(exp[1].polarity(), Polarity::Answer);
        let f = alphabet_of(&FunType::new(vec![BaseType::Com], BaseType::Com));
        assert_eq!(f.len(), 4);
        assert_eq!(f[2].ctor, MoveCtor::Run);
        assert_eq!(f[2].tags, vec![TagAtom::Arg(1)]);
        assert_eq!(f[3].ctor, MoveCtor::Done);
        let v = alphabet_of(&FunType::base(BaseType::Var(DataType::Bool)));
        assert_eq!(v.len(), 4);
        assert!(v.iter().all(|m| m.payload.is_none() || m.payload == Some(DataType::Bool)));
    }

    #[test]
    fn evaluate_examples() {
        let x = SymName::int(1);
        let y = SymName::int(2);
        let rho = Evaluation::new().with(x, Value::Int(4));
        assert_eq!(AExp::add(AExp::Name(x), AExp::Lit(1)).eval(&rho), Ok(5));

        let rho = Evaluation::new()
            .with(x, Value::Int(1))
            .with(y, Value::Int(2));
        let ne = BExp::cmp(Rel::Ne, AExp::Name(x), AExp::Name(y));
        assert_eq!(ne.eval(&rho), Ok(true));

        let rho = Evaluation::new().with(x, Value::Int(0));
        let b = BExp::and([
            BExp::cmp(Rel::Eq, AExp::Name(x), AExp::Lit(0)),
            BExp::cmp(Rel::Gt, AExp::Name(x), AExp::Lit(0)),
        ]);
        assert_eq!(b.eval(&rho), Ok(false));
    }

    #[test]
    fn evaluation_errors() {
        let x = SymName::int(1);
        let div = AExp::bin(ArithOp::Div, AExp::Lit(3), AExp::Name(x));
        let rho = Evaluation::new().with(x, Value::Int(0));
        assert_eq!(div.eval(&rho), Err(EvalError::DivisionByZero));
        assert_eq!(div.eval(&Evaluation::new()), Err(EvalError::Unbound(x)));
        let big = AExp::bin(ArithOp::Mul, AExp::Lit(i128::MAX), AExp::Lit(2));
        assert_eq!(big.eval(&rho), Err(EvalError::Overflow));
    }

    #[test]
    fn euclidean_division() {
        assert_eq!(ArithOp::Div.apply(-7, 2), Ok(-4));
        assert_eq!(ArithOp::Mod.apply(-7, 2), Ok(1));
        assert_eq!(ArithOp::Div.apply(7, -2), Ok(-3));
        assert_eq!(ArithOp::Mod.apply(7, -2), Ok(1));
    }

    #[test]
    fn conjunctions_flatten() {
        let a = BExp::Name(SymName::bool(1));
        let b = BExp::Name(SymName::bool(2));
        let c = BExp::Name(SymName::bool(3));
        let conj = BExp::and([BExp::and([a.clone(), b.clone()]), BExp::tt(), c.clone()]);
        assert_eq!(conj, BExp::And(vec![a.clone(), b, c]));
        assert_eq!(BExp::and([]), BExp::tt());
        assert_eq!(BExp::and([a.clone()]), a);
    }

    #[test]
    fn guarded_word_condition() {
        let x = SymName::int(1);
        let g = BExp::cmp(Rel::Gt, AExp::Name(x), AExp::Lit(0));
        let w = GuardedWord::from_letters([
            (BExp::tt(), Letter::new(MoveKind::Run)),
            (g.clone(), Letter::new(MoveKind::Done)),
        ]);
        assert!(w.is_well_formed());
        assert_eq!(w.condition, g);
    }

    #[test]
    fn boolean_equality_encoding() {
        let a = SymName::bool(1);
        let b = SymName::bool(2);
        let eq = Exp::equal(&Exp::name(a), &Exp::name(b));
        for (va, vb) in [(false, false), (false, true), (true, false), (true, true)] {
            let rho = Evaluation::new()
                .with(a, Value::Bool(va))
                .with(b, Value::Bool(vb));
            assert_eq!(eq.eval(&rho), Ok(va == vb));
        }
        assert_eq!(
            Exp::equal(&Exp::name(a), &Exp::bool(false)),
            BExp::not(BExp::Name(a))
        );
    }

    #[test]
    fn folding() {
        let x = SymName::int(1);
        let e = AExp::add(AExp::Lit(2), AExp::Lit(3));
        assert_eq!(e.fold(), AExp::Lit(5));
        let b = BExp::and([
            BExp::cmp(Rel::Lt, AExp::Lit(1), AExp::Lit(3)),
            BExp::cmp(Rel::Eq, AExp::Name(x), AExp::Lit(0)),
        ]);
        assert_eq!(b.fold(), BExp::cmp(Rel::Eq, AExp::Name(x), AExp::Lit(0)));
        let dz = AExp::bin(ArithOp::Div, AExp::Lit(1), AExp::Lit(0));
        assert_eq!(dz.fold(), dz);
    }
}
