use std::fmt;

use num_bigint::BigInt;

/// Ground data carried by expressions and variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DataType {
    Int,
    Bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaseType {
    Exp(DataType),
    Com,
    Var(DataType),
}

/// A first-order type `B1 -> ... -> Bk -> B`. Base types have no arguments.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FunType {
    pub args: Vec<BaseType>,
    pub result: BaseType,
}

impl FunType {
    pub fn base(result: BaseType) -> Self {
        FunType {
            args: Vec::new(),
            result,
        }
    }

    pub fn new(args: Vec<BaseType>, result: BaseType) -> Self {
        FunType { args, result }
    }

    pub fn is_base(&self) -> bool {
        self.args.is_empty()
    }

    pub fn as_base(&self) -> Option<BaseType> {
        self.is_base().then_some(self.result)
    }
}

impl From<BaseType> for FunType {
    fn from(b: BaseType) -> Self {
        FunType::base(b)
    }
}

/// Source location, 1-based.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Literal {
    Int(BigInt),
    Bool(bool),
}

impl Literal {
    pub fn dtype(&self) -> DataType {
        match self {
            Literal::Int(_) => DataType::Int,
            Literal::Bool(_) => DataType::Bool,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Mod,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    And,
    Or,
}

impl BinOp {
    pub fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => "+",
            BinOp::Sub => "-",
            BinOp::Mul => "*",
            BinOp::Div => "/",
            BinOp::Mod => "%",
            BinOp::Eq => "=",
            BinOp::Ne => "!=",
            BinOp::Lt => "<",
            BinOp::Le => "<=",
            BinOp::Gt => ">",
            BinOp::Ge => ">=",
            BinOp::And => "and",
            BinOp::Or => "or",
        }
    }

    /// Operand and result data types.
    pub fn signature(self) -> (DataType, DataType) {
        use BinOp::*;
        match self {
            Add | Sub | Mul | Div | Mod => (DataType::Int, DataType::Int),
            Eq | Ne | Lt | Le | Gt | Ge => (DataType::Int, DataType::Bool),
            And | Or => (DataType::Bool, DataType::Bool),
        }
    }
}

/// Declared length of an array identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ArrayLen {
    Fixed(u64),
    /// Unconstrained length; a name makes the length usable as an `expint` in the term.
    Symbolic(Option<String>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DeclType {
    Fun(FunType),
    Array { elem: DataType, len: ArrayLen },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Decl {
    pub name: String,
    pub ty: DeclType,
}

/// Typed free identifiers, in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Context {
    pub decls: Vec<Decl>,
}

impl Context {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn lookup(&self, name: &str) -> Option<&DeclType> {
        self.decls.iter().rev().find(|d| d.name == name).map(|d| &d.ty)
    }

    pub fn with(mut self, name: impl Into<String>, ty: impl Into<FunType>) -> Self {
        self.decls.push(Decl {
            name: name.into(),
            ty: DeclType::Fun(ty.into()),
        });
        self
    }

    pub fn with_array(mut self, name: impl Into<String>, elem: DataType, len: ArrayLen) -> Self {
        self.decls.push(Decl {
            name: name.into(),
            ty: DeclType::Array { elem, len },
        });
        self
    }

    pub fn push(&mut self, decl: Decl) {
        self.decls.push(decl);
    }

    /// Symbolic array lengths that the term may mention by name.
    pub fn length_names(&self) -> impl Iterator<Item = &str> {
        self.decls.iter().filter_map(|d| match &d.ty {
            DeclType::Array {
                len: ArrayLen::Symbolic(Some(k)),
                ..
            } => Some(k.as_str()),
            _ => None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    Ident(String),
    Const(Literal),
    Skip,
    BinOp(BinOp, Term, Term),
    Not(Term),
    Seq(Term, Term),
    If(Term, Term, Term),
    While(Term, Term),
    Assign(Term, Term),
    Deref(Term),
    NewVar {
        dtype: DataType,
        name: String,
        init: Literal,
        body: Term,
    },
    Lambda {
        param: String,
        ty: BaseType,
        body: Term,
    },
    Apply(Term, Term),
    ArrayElem {
        name: String,
        index: Term,
    },
    NewArray {
        dtype: DataType,
        name: String,
        len: u64,
        init: Literal,
        body: Term,
    },
}

/// A term with its source position. Equality ignores positions.
#[derive(Debug, Clone, Eq)]
pub struct Term {
    pub kind: Box<TermKind>,
    pub span: Span,
}

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl std::hash::Hash for Term {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.kind.hash(state)
    }
}

impl From<TermKind> for Term {
    fn from(kind: TermKind) -> Self {
        Term {
            kind: Box::new(kind),
            span: Span::default(),
        }
    }
}

impl Term {
    pub fn at(kind: TermKind, span: Span) -> Self {
        Term {
            kind: Box::new(kind),
            span,
        }
    }

    pub fn ident(name: impl Into<String>) -> Self {
        TermKind::Ident(name.into()).into()
    }

    pub fn int(v: i64) -> Self {
        TermKind::Const(Literal::Int(BigInt::from(v))).into()
    }

    pub fn bool(v: bool) -> Self {
        TermKind::Const(Literal::Bool(v)).into()
    }

    pub fn skip() -> Self {
        TermKind::Skip.into()
    }

    pub fn binop(op: BinOp, a: Term, b: Term) -> Self {
        TermKind::BinOp(op, a, b).into()
    }

    pub fn not(a: Term) -> Self {
        TermKind::Not(a).into()
    }

    pub fn seq(a: Term, b: Term) -> Self {
        TermKind::Seq(a, b).into()
    }

    pub fn cond(c: Term, t: Term, e: Term) -> Self {
        TermKind::If(c, t, e).into()
    }

    pub fn while_(c: Term, body: Term) -> Self {
        TermKind::While(c, body).into()
    }

    pub fn assign(v: Term, e: Term) -> Self {
        TermKind::Assign(v, e).into()
    }

    pub fn deref(v: Term) -> Self {
        TermKind::Deref(v).into()
    }

    pub fn new_var(dtype: DataType, name: impl Into<String>, init: Literal, body: Term) -> Self {
        TermKind::NewVar {
            dtype,
            name: name.into(),
            init,
            body,
        }
        .into()
    }

    pub fn lambda(param: impl Into<String>, ty: BaseType, body: Term) -> Self {
        TermKind::Lambda {
            param: param.into(),
            ty,
            body,
        }
        .into()
    }

    pub fn apply(f: Term, a: Term) -> Self {
        TermKind::Apply(f, a).into()
    }

    pub fn array_elem(name: impl Into<String>, index: Term) -> Self {
        TermKind::ArrayElem {
            name: name.into(),
            index,
        }
        .into()
    }

    pub fn new_array(
        dtype: DataType,
        name: impl Into<String>,
        len: u64,
        init: Literal,
        body: Term,
    ) -> Self {
        TermKind::NewArray {
            dtype,
            name: name.into(),
            len,
            init,
            body,
        }
        .into()
    }

    /// Splits `f a1 ... an` into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut head = self;
        while let TermKind::Apply(f, a) = head.kind.as_ref() {
            args.push(a);
            head = f;
        }
        args.reverse();
        (head, args)
    }
}
