use std::fmt;

use super::ast::*;

const SEQ: u8 = 0;
const STMT: u8 = 1;
const OR: u8 = 2;
const AND: u8 = 3;
const NOT: u8 = 4;
const CMP: u8 = 5;
const ADD: u8 = 6;
const MUL: u8 = 7;
const PREFIX: u8 = 8;
const APP: u8 = 9;
const ATOM: u8 = 10;

impl fmt::Display for DataType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DataType::Int => "int",
            DataType::Bool => "bool",
        })
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseType::Exp(d) => write!(f, "exp{d}"),
            BaseType::Com => f.write_str("com"),
            BaseType::Var(d) => write!(f, "var{d}"),
        }
    }
}

impl fmt::Display for FunType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.args {
            write!(f, "{a} -> ")?;
        }
        write!(f, "{}", self.result)
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Int(n) => write!(f, "{n}"),
            Literal::Bool(true) => f.write_str("true"),
            Literal::Bool(false) => f.write_str("false"),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.decls.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            match &d.ty {
                DeclType::Fun(t) => write!(f, "{} : {t}", d.name)?,
                DeclType::Array { elem, len } => {
                    let len = match len {
                        ArrayLen::Fixed(n) => n.to_string(),
                        ArrayLen::Symbolic(None) => "?".to_string(),
                        ArrayLen::Symbolic(Some(k)) => k.clone(),
                    };
                    write!(f, "{}[{len}] : var{elem}", d.name)?
                }
            }
        }
        Ok(())
    }
}

fn level(t: &Term) -> u8 {
    match t.kind.as_ref() {
        TermKind::Seq(..) => SEQ,
        TermKind::If(..)
        | TermKind::While(..)
        | TermKind::Assign(..)
        | TermKind::NewVar { .. }
        | TermKind::NewArray { .. }
        | TermKind::Lambda { .. } => STMT,
        TermKind::BinOp(op, ..) => match op {
            BinOp::Or => OR,
            BinOp::And => AND,
            BinOp::Eq | BinOp::Ne | BinOp::Lt | BinOp::Le | BinOp::Gt | BinOp::Ge => CMP,
            BinOp::Add | BinOp::Sub => ADD,
            BinOp::Mul | BinOp::Div | BinOp::Mod => MUL,
        },
        TermKind::Not(_) => NOT,
        TermKind::Deref(_) => PREFIX,
        TermKind::Apply(..) => APP,
        TermKind::Const(Literal::Int(n)) if n.sign() == num_bigint::Sign::Minus => STMT,
        _ => ATOM,
    }
}

/// Terms whose trailing body would swallow a following `;`.
fn open_right(t: &Term) -> bool {
    match t.kind.as_ref() {
        TermKind::NewVar { .. } | TermKind::NewArray { .. } | TermKind::Lambda { .. } => true,
        TermKind::If(_, _, e) => open_right(e),
        TermKind::While(_, b) => open_right(b),
        _ => false,
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term, ctx: u8) -> fmt::Result {
    if level(t) < ctx {
        f.write_str("(")?;
        write_term(f, t, SEQ)?;
        return f.write_str(")");
    }
    match t.kind.as_ref() {
        TermKind::Ident(x) => f.write_str(x),
        TermKind::Const(l) => write!(f, "{l}"),
        TermKind::Skip => f.write_str("skip"),
        TermKind::BinOp(op, a, b) => {
            let (la, lb) = match level(t) {
                CMP => (ADD, ADD),
                l => (l, l + 1),
            };
            write_term(f, a, la)?;
            write!(f, " {} ", op.symbol())?;
            write_term(f, b, lb)
        }
        TermKind::Not(a) => {
            f.write_str("not ")?;
            write_term(f, a, NOT)
        }
        TermKind::Seq(a, b) => {
            if level(a) == SEQ || open_right(a) {
                f.write_str("{")?;
                write_term(f, a, SEQ)?;
                f.write_str("}")?;
            } else {
                write_term(f, a, STMT)?;
            }
            f.write_str("; ")?;
            write_term(f, b, SEQ)
        }
        TermKind::If(c, a, b) => {
            f.write_str("if ")?;
            write_term(f, c, OR)?;
            f.write_str(" then ")?;
            write_branch(f, a, true)?;
            f.write_str(" else ")?;
            write_branch(f, b, false)
        }
        TermKind::While(c, b) => {
            f.write_str("while ")?;
            write_term(f, c, OR)?;
            f.write_str(" do ")?;
            write_branch(f, b, false)
        }
        TermKind::Assign(v, e) => {
            write_term(f, v, OR)?;
            f.write_str(" := ")?;
            write_term(f, e, OR)
        }
        TermKind::Deref(v) => {
            f.write_str("!")?;
            write_term(f, v, PREFIX)
        }
        TermKind::NewVar {
            dtype,
            name,
            init,
            body,
        } => {
            write!(f, "new_{dtype} {name} := {init} in ")?;
            write_term(f, body, SEQ)
        }
        TermKind::NewArray {
            dtype,
            name,
            len,
            init,
            body,
        } => {
            write!(f, "new_{dtype} {name}[{len}] := {init} in ")?;
            write_term(f, body, SEQ)
        }
        TermKind::Lambda { param, ty, body } => {
            write!(f, "\\{param} : {ty} . ")?;
            write_term(f, body, SEQ)
        }
        TermKind::Apply(h, a) => {
            write_term(f, h, APP)?;
            f.write_str(" ")?;
            write_term(f, a, ATOM)
        }
        TermKind::ArrayElem { name, index } => {
            write!(f, "{name}[")?;
            write_term(f, index, SEQ)?;
            f.write_str("]")
        }
    }
}

/// Branch bodies of `if`/`while` are statements; a `then` branch must also not be an
/// `if` that could capture the following `else`.
fn write_branch(f: &mut fmt::Formatter<'_>, t: &Term, is_then: bool) -> fmt::Result {
    let needs_braces = level(t) == SEQ || (is_then && open_right(t));
    if needs_braces {
        f.write_str("{")?;
        write_term(f, t, SEQ)?;
        f.write_str("}")
    } else {
        write_term(f, t, STMT)
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, SEQ)
    }
}

/// Renders a full judgement in the concrete input syntax.
pub fn judgement(ctx: &Context, t: &Term, ty: &FunType) -> String {
    if ctx.decls.is_empty() {
        format!("|- {t} : {ty}")
    } else {
        format!("{ctx} |- {t} : {ty}")
    }
}
