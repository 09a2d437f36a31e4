use std::fmt;

use super::expr::*;
use super::letter::*;
use super::{ArrSym, SymName};
use crate::syntax::DataType;

fn name_body(prefix: &str, index: u32, occurrence: u32) -> String {
    if occurrence == 0 {
        format!("{prefix}{index}")
    } else {
        format!("{prefix}{index}_{occurrence}")
    }
}

impl SymName {
    fn body(&self) -> String {
        let prefix = match self.dtype {
            DataType::Int => "X",
            DataType::Bool => "B",
        };
        name_body(prefix, self.index, self.occurrence)
    }

    /// The input-symbol form `?X3`.
    pub fn binder_text(&self) -> String {
        format!("?{}", self.body())
    }
}

impl fmt::Display for SymName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.body())
    }
}

impl ArrSym {
    fn body(&self) -> String {
        let prefix = match self.elem {
            DataType::Int => "A",
            DataType::Bool => "P",
        };
        name_body(prefix, self.index, self.occurrence)
    }
}

impl fmt::Display for ArrSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.body())
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(v) => write!(f, "{v}"),
            Value::Bool(true) => f.write_str("tt"),
            Value::Bool(false) => f.write_str("ff"),
        }
    }
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
            ArithOp::Div => "/",
            ArithOp::Mod => "%",
        }
    }

    fn level(self) -> u8 {
        match self {
            ArithOp::Add | ArithOp::Sub => 1,
            _ => 2,
        }
    }
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

fn write_aexp(f: &mut fmt::Formatter<'_>, a: &AExp, ctx: u8) -> fmt::Result {
    match a {
        AExp::Lit(v) if *v < 0 => write!(f, "({v})"),
        AExp::Lit(v) => write!(f, "{v}"),
        AExp::Name(x) => write!(f, "{x}"),
        AExp::Bin(op, l, r) => {
            let lv = op.level();
            if lv < ctx {
                f.write_str("(")?;
            }
            write_aexp(f, l, lv)?;
            write!(f, " {} ", op.symbol())?;
            write_aexp(f, r, lv + 1)?;
            if lv < ctx {
                f.write_str(")")?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for AExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_aexp(f, self, 0)
    }
}

const B_OR: u8 = 1;
const B_AND: u8 = 2;
const B_NOT: u8 = 3;

fn b_level(b: &BExp) -> u8 {
    match b {
        BExp::Or(_) => B_OR,
        BExp::And(_) => B_AND,
        BExp::Not(_) => B_NOT,
        _ => B_NOT + 1,
    }
}

fn write_bexp(f: &mut fmt::Formatter<'_>, b: &BExp, ctx: u8) -> fmt::Result {
    let lv = b_level(b);
    if lv < ctx {
        f.write_str("(")?;
        write_bexp(f, b, 0)?;
        return f.write_str(")");
    }
    match b {
        BExp::Const(true) => f.write_str("tt"),
        BExp::Const(false) => f.write_str("ff"),
        BExp::Name(x) => write!(f, "{x}"),
        BExp::Cmp(rel, l, r) => {
            write_aexp(f, l, 1)?;
            write!(f, " {} ", rel.symbol())?;
            write_aexp(f, r, 1)
        }
        BExp::Not(inner) => {
            f.write_str("not ")?;
            // Comparisons under `not` are parenthesized for readability.
            if matches!(inner.as_ref(), BExp::Cmp(..)) {
                f.write_str("(")?;
                write_bexp(f, inner, 0)?;
                f.write_str(")")
            } else {
                write_bexp(f, inner, B_NOT)
            }
        }
        BExp::And(ps) | BExp::Or(ps) => {
            let sep = if lv == B_AND { " and " } else { " or " };
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write_bexp(f, p, lv + 1)?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for BExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_bexp(f, self, 0)
    }
}

impl fmt::Display for Exp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exp::Int(a) => write!(f, "{a}"),
            Exp::Bool(b) => write!(f, "{b}"),
        }
    }
}

/// Renders an expression so that it reads as a single token group.
fn atomic(e: &Exp) -> String {
    match e {
        Exp::Int(AExp::Lit(_))
        | Exp::Int(AExp::Name(_)) | Exp::Bool(BExp::Name(_)) | Exp::Bool(BExp::Const(_)) => {
            e.to_string()
        }
        _ => format!("({e})"),
    }
}

impl fmt::Display for TagAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TagAtom::Ident(n) => f.write_str(n),
            TagAtom::Arg(i) => write!(f, "{i}"),
            TagAtom::Cell(n, a) => write!(f, "{n}[{a}]"),
        }
    }
}

fn payload_text(p: &Payload) -> String {
    match p {
        Payload::Bind(x) => x.binder_text(),
        Payload::Expr(e) => atomic(e),
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveKind::Q => f.write_str("q"),
            MoveKind::Run => f.write_str("run"),
            MoveKind::Done => f.write_str("done"),
            MoveKind::Read => f.write_str("read"),
            MoveKind::Ok => f.write_str("ok"),
            MoveKind::Write(Payload::Expr(e)) => write!(f, "write({e})"),
            MoveKind::Write(p) => write!(f, "write({})", payload_text(p)),
            MoveKind::Answer(p) => f.write_str(&payload_text(p)),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        if !self.tags.is_empty() {
            f.write_str("^{")?;
            for (i, t) in self.tags.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{t}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

impl fmt::Display for GuardStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GuardStep::Assume(b) => write_bexp(f, b, B_AND),
            GuardStep::Let(x, e) => write!(f, "{} <- {}", x.binder_text(), atomic(e)),
            GuardStep::Set(x, e) => write!(f, "{} = {}", x.binder_text(), atomic(e)),
            GuardStep::Fresh(x) => f.write_str(&x.binder_text()),
            GuardStep::ArrayInit(a, v) => write!(f, "?{}(*) = {}", a.body(), atomic(v)),
            GuardStep::ArrayStore(a, i, v) => write!(f, "?{}({i}) = {}", a.body(), atomic(v)),
            GuardStep::ArrayLoad(x, a, i) => write!(f, "{} <- {a}({i})", x.binder_text()),
        }
    }
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("tt");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" and ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl fmt::Display for GuardedLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.guard.is_tt() {
            write!(f, "[{}] ", self.guard)?;
        }
        write!(f, "{}", self.letter)
    }
}

impl fmt::Display for GuardedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (g, l)) in self.guards.iter().zip(&self.letters).enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            if g.is_tt() {
                write!(f, "{l}")?;
            } else {
                write!(f, "[{g}] {l}")?;
            }
        }
        Ok(())
    }
}
