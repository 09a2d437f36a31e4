use std::collections::BTreeMap;

use thiserror::Error;

use super::{ArrSym, SymName};
use crate::syntax::DataType;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    pub fn negate(self) -> Rel {
        match self {
            Rel::Eq => Rel::Ne,
            Rel::Ne => Rel::Eq,
            Rel::Lt => Rel::Ge,
            Rel::Le => Rel::Gt,
            Rel::Gt => Rel::Le,
            Rel::Ge => Rel::Lt,
        }
    }

    pub fn holds(self, a: i128, b: i128) -> bool {
        match self {
            Rel::Eq => a == b,
            Rel::Ne => a != b,
            Rel::Lt => a < b,
            Rel::Le => a <= b,
            Rel::Gt => a > b,
            Rel::Ge => a >= b,
        }
    }
}

/// Integer expressions `a ::= n | X | a op a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AExp {
    Lit(i128),
    Name(SymName),
    Bin(ArithOp, Box<AExp>, Box<AExp>),
}

/// Boolean expressions. `And`/`Or` hold flattened operand lists.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BExp {
    Const(bool),
    Name(SymName),
    Cmp(Rel, AExp, AExp),
    Not(Box<BExp>),
    And(Vec<BExp>),
    Or(Vec<BExp>),
}

/// A payload expression of either data type.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Exp {
    Int(AExp),
    Bool(BExp),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    Int(i128),
    Bool(bool),
}

impl Value {
    pub fn dtype(self) -> DataType {
        match self {
            Value::Int(_) => DataType::Int,
            Value::Bool(_) => DataType::Bool,
        }
    }

    pub fn default_of(dtype: DataType) -> Value {
        match dtype {
            DataType::Int => Value::Int(0),
            DataType::Bool => Value::Bool(false),
        }
    }
}

/// Contents of an array function symbol: a default plus point updates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayValue {
    pub default: Value,
    pub entries: BTreeMap<i128, Value>,
}

impl ArrayValue {
    pub fn get(&self, index: i128) -> Value {
        self.entries.get(&index).copied().unwrap_or(self.default)
    }
}

/// An assignment of concrete values to symbolic names.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Evaluation {
    pub values: BTreeMap<SymName, Value>,
    pub arrays: BTreeMap<ArrSym, ArrayValue>,
}

impl Evaluation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, name: SymName, value: Value) -> Self {
        self.values.insert(name, value);
        self
    }

    pub fn get(&self, name: SymName) -> Option<Value> {
        self.values.get(&name).copied()
    }

    pub fn set(&mut self, name: SymName, value: Value) {
        self.values.insert(name, value);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("no value for {0}")]
    Unbound(SymName),
    #[error("division by zero")]
    DivisionByZero,
    #[error("integer overflow")]
    Overflow,
    #[error("{0} has a value of the wrong type")]
    TypeMismatch(SymName),
}

fn int_of(rho: &Evaluation, x: SymName) -> Result<i128, EvalError> {
    match rho.get(x) {
        Some(Value::Int(v)) => Ok(v),
        Some(Value::Bool(_)) => Err(EvalError::TypeMismatch(x)),
        None => Err(EvalError::Unbound(x)),
    }
}

fn bool_of(rho: &Evaluation, x: SymName) -> Result<bool, EvalError> {
    match rho.get(x) {
        Some(Value::Bool(v)) => Ok(v),
        Some(Value::Int(_)) => Err(EvalError::TypeMismatch(x)),
        None => Err(EvalError::Unbound(x)),
    }
}

impl ArithOp {
    /// `/` and `%` are Euclidean, as SMT-LIB `div` and `mod`.
    pub fn apply(self, a: i128, b: i128) -> Result<i128, EvalError> {
        let r = match self {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
            ArithOp::Div | ArithOp::Mod if b == 0 => return Err(EvalError::DivisionByZero),
            ArithOp::Div => a.checked_div_euclid(b),
            ArithOp::Mod => a.checked_rem_euclid(b),
        };
        r.ok_or(EvalError::Overflow)
    }
}

impl AExp {
    pub fn lit(v: i128) -> Self {
        AExp::Lit(v)
    }

    pub fn name(x: SymName) -> Self {
        AExp::Name(x)
    }

    pub fn bin(op: ArithOp, a: AExp, b: AExp) -> Self {
        AExp::Bin(op, Box::new(a), Box::new(b))
    }

    pub fn add(a: AExp, b: AExp) -> Self {
        Self::bin(ArithOp::Add, a, b)
    }

    pub fn sub(a: AExp, b: AExp) -> Self {
        Self::bin(ArithOp::Sub, a, b)
    }

    pub fn eval(&self, rho: &Evaluation) -> Result<i128, EvalError> {
        match self {
            AExp::Lit(v) => Ok(*v),
            AExp::Name(x) => int_of(rho, *x),
            AExp::Bin(op, a, b) => op.apply(a.eval(rho)?, b.eval(rho)?),
        }
    }

    pub fn for_each_name(&self, f: &mut impl FnMut(SymName)) {
        match self {
            AExp::Lit(_) => {}
            AExp::Name(x) => f(*x),
            AExp::Bin(_, a, b) => {
                a.for_each_name(f);
                b.for_each_name(f);
            }
        }
    }

    pub fn mentions(&self, x: SymName) -> bool {
        let mut found = false;
        self.for_each_name(&mut |y| found |= y == x);
        found
    }

    pub fn subst(&self, s: &impl Fn(SymName) -> Option<Exp>) -> AExp {
        match self {
            AExp::Lit(_) => self.clone(),
            AExp::Name(x) => match s(*x) {
                Some(Exp::Int(a)) => a,
                _ => self.clone(),
            },
            AExp::Bin(op, a, b) => AExp::bin(*op, a.subst(s), b.subst(s)),
        }
    }

    /// Constant folding. Operations that fail (division by zero, overflow) stay symbolic.
    pub fn fold(&self) -> AExp {
        match self {
            AExp::Bin(op, a, b) => {
                let (a, b) = (a.fold(), b.fold());
                if let (AExp::Lit(x), AExp::Lit(y)) = (&a, &b) {
                    if let Ok(v) = op.apply(*x, *y) {
                        return AExp::Lit(v);
                    }
                }
                match (op, &a, &b) {
                    (ArithOp::Add, AExp::Lit(0), _) => b,
                    (ArithOp::Add | ArithOp::Sub, _, AExp::Lit(0)) => a,
                    (ArithOp::Mul, AExp::Lit(1), _) => b,
                    (ArithOp::Mul | ArithOp::Div, _, AExp::Lit(1)) => a,
                    _ => AExp::bin(*op, a, b),
                }
            }
            _ => self.clone(),
        }
    }
}

impl BExp {
    pub fn tt() -> Self {
        BExp::Const(true)
    }

    pub fn ff() -> Self {
        BExp::Const(false)
    }

    pub fn cmp(rel: Rel, a: AExp, b: AExp) -> Self {
        BExp::Cmp(rel, a, b)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(b: BExp) -> Self {
        match b {
            BExp::Const(v) => BExp::Const(!v),
            BExp::Not(inner) => *inner,
            other => BExp::Not(Box::new(other)),
        }
    }

    /// Flattened conjunction; `tt` operands vanish and the empty conjunction is `tt`.
    pub fn and(parts: impl IntoIterator<Item = BExp>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                BExp::Const(true) => {}
                BExp::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BExp::tt(),
            1 => out.pop().unwrap(),
            _ => BExp::And(out),
        }
    }

    pub fn or(parts: impl IntoIterator<Item = BExp>) -> Self {
        let mut out = Vec::new();
        for p in parts {
            match p {
                BExp::Const(false) => {}
                BExp::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => BExp::ff(),
            1 => out.pop().unwrap(),
            _ => BExp::Or(out),
        }
    }

    pub fn is_tt(&self) -> bool {
        matches!(self, BExp::Const(true))
    }

    /// Top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<BExp> {
        match self {
            BExp::Const(true) => Vec::new(),
            BExp::And(parts) => parts.clone(),
            other => vec![other.clone()],
        }
    }

    pub fn eval(&self, rho: &Evaluation) -> Result<bool, EvalError> {
        match self {
            BExp::Const(v) => Ok(*v),
            BExp::Name(x) => bool_of(rho, *x),
            BExp::Cmp(rel, a, b) => Ok(rel.holds(a.eval(rho)?, b.eval(rho)?)),
            BExp::Not(b) => Ok(!b.eval(rho)?),
            BExp::And(parts) => {
                for p in parts {
                    if !p.eval(rho)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            BExp::Or(parts) => {
                for p in parts {
                    if p.eval(rho)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    pub fn for_each_name(&self, f: &mut impl FnMut(SymName)) {
        match self {
            BExp::Const(_) => {}
            BExp::Name(x) => f(*x),
            BExp::Cmp(_, a, b) => {
                a.for_each_name(f);
                b.for_each_name(f);
            }
            BExp::Not(b) => b.for_each_name(f),
            BExp::And(ps) | BExp::Or(ps) => ps.iter().for_each(|p| p.for_each_name(f)),
        }
    }

    /// Visits the outermost arithmetic operands of comparisons.
    pub fn for_each_aexp(&self, f: &mut impl FnMut(&AExp)) {
        match self {
            BExp::Cmp(_, a, b) => {
                f(a);
                f(b);
            }
            BExp::Not(b) => b.for_each_aexp(f),
            BExp::And(ps) | BExp::Or(ps) => ps.iter().for_each(|p| p.for_each_aexp(f)),
            BExp::Const(_) | BExp::Name(_) => {}
        }
    }

    pub fn mentions(&self, x: SymName) -> bool {
        let mut found = false;
        self.for_each_name(&mut |y| found |= y == x);
        found
    }

    pub fn subst(&self, s: &impl Fn(SymName) -> Option<Exp>) -> BExp {
        match self {
            BExp::Const(_) => self.clone(),
            BExp::Name(x) => match s(*x) {
                Some(Exp::Bool(b)) => b,
                _ => self.clone(),
            },
            BExp::Cmp(rel, a, b) => BExp::Cmp(*rel, a.subst(s), b.subst(s)),
            BExp::Not(b) => BExp::not(b.subst(s)),
            BExp::And(ps) => BExp::and(ps.iter().map(|p| p.subst(s))),
            BExp::Or(ps) => BExp::or(ps.iter().map(|p| p.subst(s))),
        }
    }

    /// Constant folding and removal of neutral operands.
    pub fn fold(&self) -> BExp {
        match self {
            BExp::Cmp(rel, a, b) => {
                let (a, b) = (a.fold(), b.fold());
                match (&a, &b) {
                    (AExp::Lit(x), AExp::Lit(y)) => BExp::Const(rel.holds(*x, *y)),
                    _ if a == b => BExp::Const(matches!(rel, Rel::Eq | Rel::Le | Rel::Ge)),
                    _ => BExp::Cmp(*rel, a, b),
                }
            }
            BExp::Not(b) => match b.fold() {
                BExp::Cmp(rel, a, b) => BExp::Cmp(rel.negate(), a, b),
                other => BExp::not(other),
            },
            BExp::And(ps) => {
                let parts: Vec<BExp> = ps.iter().map(BExp::fold).collect();
                if parts.contains(&BExp::ff()) {
                    BExp::ff()
                } else {
                    BExp::and(parts)
                }
            }
            BExp::Or(ps) => {
                let parts: Vec<BExp> = ps.iter().map(BExp::fold).collect();
                if parts.contains(&BExp::tt()) {
                    BExp::tt()
                } else {
                    BExp::or(parts)
                }
            }
            _ => self.clone(),
        }
    }
}

impl Exp {
    pub fn int(v: i128) -> Self {
        Exp::Int(AExp::Lit(v))
    }

    pub fn bool(v: bool) -> Self {
        Exp::Bool(BExp::Const(v))
    }

    pub fn name(x: SymName) -> Self {
        match x.dtype {
            DataType::Int => Exp::Int(AExp::Name(x)),
            DataType::Bool => Exp::Bool(BExp::Name(x)),
        }
    }

    pub fn literal(v: Value) -> Self {
        match v {
            Value::Int(n) => Exp::int(n),
            Value::Bool(b) => Exp::bool(b),
        }
    }

    pub fn dtype(&self) -> DataType {
        match self {
            Exp::Int(_) => DataType::Int,
            Exp::Bool(_) => DataType::Bool,
        }
    }

    /// The equality `a = b`; booleans are compared as `(a and b) or (not a and not b)`.
    pub fn equal(a: &Exp, b: &Exp) -> BExp {
        match (a, b) {
            (Exp::Int(a), Exp::Int(b)) => BExp::cmp(Rel::Eq, a.clone(), b.clone()),
            (Exp::Bool(a), Exp::Bool(b)) => match (a, b) {
                (BExp::Const(v), other) | (other, BExp::Const(v)) => {
                    if *v {
                        other.clone()
                    } else {
                        BExp::not(other.clone())
                    }
                }
                _ => BExp::or([
                    BExp::and([a.clone(), b.clone()]),
                    BExp::and([BExp::not(a.clone()), BExp::not(b.clone())]),
                ]),
            },
            _ => BExp::ff(),
        }
    }

    pub fn eval(&self, rho: &Evaluation) -> Result<Value, EvalError> {
        match self {
            Exp::Int(a) => a.eval(rho).map(Value::Int),
            Exp::Bool(b) => b.eval(rho).map(Value::Bool),
        }
    }

    pub fn for_each_name(&self, f: &mut impl FnMut(SymName)) {
        match self {
            Exp::Int(a) => a.for_each_name(f),
            Exp::Bool(b) => b.for_each_name(f),
        }
    }

    pub fn mentions(&self, x: SymName) -> bool {
        let mut found = false;
        self.for_each_name(&mut |y| found |= y == x);
        found
    }

    pub fn subst(&self, s: &impl Fn(SymName) -> Option<Exp>) -> Exp {
        match self {
            Exp::Int(a) => Exp::Int(a.subst(s)),
            Exp::Bool(b) => Exp::Bool(b.subst(s)),
        }
    }

    pub fn fold(&self) -> Exp {
        match self {
            Exp::Int(a) => Exp::Int(a.fold()),
            Exp::Bool(b) => Exp::Bool(b.fold()),
        }
    }

    pub fn as_literal(&self) -> Option<Value> {
        match self {
            Exp::Int(AExp::Lit(v)) => Some(Value::Int(*v)),
            Exp::Bool(BExp::Const(v)) => Some(Value::Bool(*v)),
            _ => None,
        }
    }
}
