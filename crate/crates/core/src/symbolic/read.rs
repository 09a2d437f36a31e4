//! Parser for the canonical text rendering of expressions, guards and letters.

use thiserror::Error;

use super::expr::*;
use super::letter::*;
use super::{ArrSym, SymName};
use crate::syntax::DataType;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot read `{text}` at offset {offset}: {message}")]
pub struct ReadError {
    pub text: String,
    pub offset: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Name(char, u32, u32),
    Binder(char, u32, u32),
    Int(i128),
    Word(String),
    Sym(&'static str),
}

const SYMBOLS: [&str; 20] = [
    "<-", "<=", ">=", "!=", "(", ")", "[", "]", "{", "}", ",", "^", "+", "-", "*", "/", "%", "=",
    "<", ">",
];

fn name_body(chars: &[char], mut i: usize) -> Option<(char, u32, u32, usize)> {
    let prefix = *chars.get(i)?;
    if !matches!(prefix, 'X' | 'B' | 'A' | 'P') {
        return None;
    }
    i += 1;
    let start = i;
    while chars.get(i).is_some_and(char::is_ascii_digit) {
        i += 1;
    }
    if i == start {
        return None;
    }
    let index: u32 = chars[start..i].iter().collect::<String>().parse().ok()?;
    let mut occ = 0;
    if chars.get(i) == Some(&'_') {
        let s = i + 1;
        let mut j = s;
        while chars.get(j).is_some_and(char::is_ascii_digit) {
            j += 1;
        }
        if j == s {
            return None;
        }
        occ = chars[s..j].iter().collect::<String>().parse().ok()?;
        i = j;
    }
    Some((prefix, index, occ, i))
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ReadError> {
    let chars: Vec<char> = text.chars().collect();
    let err = |offset: usize, message: &str| ReadError {
        text: text.to_string(),
        offset,
        message: message.to_string(),
    };
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c == '<' {
            if let Some((p, idx, occ, end)) = name_body(&chars, i + 1) {
                if chars.get(end) == Some(&'>') {
                    out.push((i, Tok::Name(p, idx, occ)));
                    i = end + 1;
                    continue;
                }
            }
        }
        if c == '?' {
            let (p, idx, occ, end) =
                name_body(&chars, i + 1).ok_or_else(|| err(i, "malformed input symbol"))?;
            out.push((i, Tok::Binder(p, idx, occ)));
            i = end;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            let v = s.parse().map_err(|_| err(start, "integer out of range"))?;
            out.push((start, Tok::Int(v)));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Tok::Word(chars[start..i].iter().collect())));
            continue;
        }
        let rest: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        match SYMBOLS.iter().find(|s| rest.starts_with(**s)) {
            Some(s) => {
                out.push((i, Tok::Sym(s)));
                i += s.chars().count();
            }
            None => return Err(err(i, "unexpected character")),
        }
    }
    Ok(out)
}

fn sym_name(p: char, index: u32, occurrence: u32) -> Option<SymName> {
    let dtype = match p {
        'X' => DataType::Int,
        'B' => DataType::Bool,
        _ => return None,
    };
    Some(SymName {
        index,
        occurrence,
        dtype,
    })
}

fn arr_sym(p: char, index: u32, occurrence: u32) -> Option<ArrSym> {
    let elem = match p {
        'A' => DataType::Int,
        'P' => DataType::Bool,
        _ => return None,
    };
    Some(ArrSym {
        index,
        occurrence,
        elem,
    })
}

struct Reader<'a> {
    text: &'a str,
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

type R<T> = Result<T, ReadError>;

impl<'a> Reader<'a> {
    fn new(text: &'a str) -> R<Self> {
        Ok(Reader {
            text,
            toks: tokenize(text)?,
            pos: 0,
        })
    }

    fn err<T>(&self, message: impl Into<String>) -> R<T> {
        let offset = self
            .toks
            .get(self.pos)
            .map(|(o, _)| *o)
            .unwrap_or(self.text.len());
        Err(ReadError {
            text: self.text.to_string(),
            offset,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn peek_at(&self, k: usize) -> Option<&Tok> {
        self.toks.get(self.pos + k).map(|(_, t)| t)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn at_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Tok::Sym(x)) if *x == s)
    }

    fn at_word(&self, w: &str) -> bool {
        matches!(self.peek(), Some(Tok::Word(x)) if x == w)
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if self.at_sym(s) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> R<()> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn finish<T>(&self, v: T) -> R<T> {
        if self.pos < self.toks.len() {
            self.err("trailing input")
        } else {
            Ok(v)
        }
    }

    fn int(&self, e: Exp) -> R<AExp> {
        match e {
            Exp::Int(a) => Ok(a),
            Exp::Bool(_) => self.err("expected an integer expression"),
        }
    }

    fn boolean(&self, e: Exp) -> R<BExp> {
        match e {
            Exp::Bool(b) => Ok(b),
            Exp::Int(_) => self.err("expected a boolean expression"),
        }
    }

    fn exp(&mut self) -> R<Exp> {
        let first = self.and_exp()?;
        if !self.at_word("or") {
            return Ok(first);
        }
        let mut parts = vec![self.boolean(first)?];
        while self.at_word("or") {
            self.pos += 1;
            let e = self.and_exp()?;
            parts.push(self.boolean(e)?);
        }
        Ok(Exp::Bool(BExp::Or(parts)))
    }

    fn and_exp(&mut self) -> R<Exp> {
        let first = self.not_exp()?;
        if !self.at_word("and") {
            return Ok(first);
        }
        let mut parts = vec![self.boolean(first)?];
        while self.at_word("and") {
            self.pos += 1;
            let e = self.not_exp()?;
            parts.push(self.boolean(e)?);
        }
        Ok(Exp::Bool(BExp::And(parts)))
    }

    fn not_exp(&mut self) -> R<Exp> {
        if self.at_word("not") {
            self.pos += 1;
            let e = self.not_exp()?;
            return Ok(Exp::Bool(BExp::Not(Box::new(self.boolean(e)?))));
        }
        self.cmp_exp()
    }

    fn rel(&self) -> Option<Rel> {
        match self.peek() {
            Some(Tok::Sym("=")) => Some(Rel::Eq),
            Some(Tok::Sym("!=")) => Some(Rel::Ne),
            Some(Tok::Sym("<")) => Some(Rel::Lt),
            Some(Tok::Sym("<=")) => Some(Rel::Le),
            Some(Tok::Sym(">")) => Some(Rel::Gt),
            Some(Tok::Sym(">=")) => Some(Rel::Ge),
            _ => None,
        }
    }

    fn cmp_exp(&mut self) -> R<Exp> {
        let l = self.sum()?;
        match self.rel() {
            Some(rel) => {
                self.pos += 1;
                let l = self.int(l)?;
                let r = self.sum()?;
                let r = self.int(r)?;
                Ok(Exp::Bool(BExp::Cmp(rel, l, r)))
            }
            None => Ok(l),
        }
    }

    fn arith_op(&self, ops: &[ArithOp]) -> Option<ArithOp> {
        let op = match self.peek() {
            Some(Tok::Sym("+")) => ArithOp::Add,
            Some(Tok::Sym("-")) => ArithOp::Sub,
            Some(Tok::Sym("*")) => ArithOp::Mul,
            Some(Tok::Sym("/")) => ArithOp::Div,
            Some(Tok::Sym("%")) => ArithOp::Mod,
            _ => return None,
        };
        ops.contains(&op).then_some(op)
    }

    fn sum(&mut self) -> R<Exp> {
        let mut l = self.product()?;
        while let Some(op) = self.arith_op(&[ArithOp::Add, ArithOp::Sub]) {
            self.pos += 1;
            let a = self.int(l)?;
            let r = self.product()?;
            l = Exp::Int(AExp::bin(op, a, self.int(r)?));
        }
        Ok(l)
    }

    fn product(&mut self) -> R<Exp> {
        let mut l = self.atom()?;
        while let Some(op) = self.arith_op(&[ArithOp::Mul, ArithOp::Div, ArithOp::Mod]) {
            self.pos += 1;
            let a = self.int(l)?;
            let r = self.atom()?;
            l = Exp::Int(AExp::bin(op, a, self.int(r)?));
        }
        Ok(l)
    }

    fn atom(&mut self) -> R<Exp> {
        match self.bump() {
            Some(Tok::Int(v)) => Ok(Exp::int(v)),
            Some(Tok::Sym("-")) => match self.bump() {
                Some(Tok::Int(v)) => Ok(Exp::int(-v)),
                _ => {
                    self.pos -= 1;
                    self.err("expected an integer after `-`")
                }
            },
            Some(Tok::Word(w)) if w == "tt" => Ok(Exp::bool(true)),
            Some(Tok::Word(w)) if w == "ff" => Ok(Exp::bool(false)),
            Some(Tok::Name(p, i, o)) => match sym_name(p, i, o) {
                Some(x) => Ok(Exp::name(x)),
                None => {
                    self.pos -= 1;
                    self.err("array symbol used as a value")
                }
            },
            Some(Tok::Sym("(")) => {
                let e = self.exp()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                self.err("expected an expression")
            }
        }
    }

    fn binder_name(&mut self) -> R<SymName> {
        match self.bump() {
            Some(Tok::Binder(p, i, o)) => match sym_name(p, i, o) {
                Some(x) => Ok(x),
                None => {
                    self.pos -= 1;
                    self.err("expected a name")
                }
            },
            _ => {
                self.pos -= 1;
                self.err("expected an input symbol")
            }
        }
    }

    fn payload(&mut self) -> R<Payload> {
        if matches!(self.peek(), Some(Tok::Binder(..))) {
            return Ok(Payload::Bind(self.binder_name()?));
        }
        Ok(Payload::Expr(self.atom()?))
    }

    fn letter(&mut self) -> R<Letter> {
        let word = match self.peek() {
            Some(Tok::Word(w)) => Some(w.clone()),
            _ => None,
        };
        let simple = match word.as_deref() {
            Some("q") => Some(MoveKind::Q),
            Some("run") => Some(MoveKind::Run),
            Some("done") => Some(MoveKind::Done),
            Some("read") => Some(MoveKind::Read),
            Some("ok") => Some(MoveKind::Ok),
            _ => None,
        };
        let kind = if let Some(k) = simple {
            self.pos += 1;
            k
        } else if word.as_deref() == Some("write") {
            self.pos += 1;
            self.expect_sym("(")?;
            let p = if matches!(self.peek(), Some(Tok::Binder(..))) {
                Payload::Bind(self.binder_name()?)
            } else {
                Payload::Expr(self.exp()?)
            };
            self.expect_sym(")")?;
            MoveKind::Write(p)
        } else {
            MoveKind::Answer(self.payload()?)
        };
        let mut tags = Vec::new();
        if self.eat_sym("^") {
            self.expect_sym("{")?;
            loop {
                match self.bump() {
                    Some(Tok::Int(i)) => tags.push(TagAtom::Arg(i as u32)),
                    Some(Tok::Word(w)) => {
                        if self.eat_sym("[") {
                            let e = self.exp()?;
                            let a = self.int(e)?;
                            self.expect_sym("]")?;
                            tags.push(TagAtom::Cell(w, a));
                        } else {
                            tags.push(TagAtom::Ident(w));
                        }
                    }
                    _ => {
                        self.pos -= 1;
                        return self.err("expected a tag");
                    }
                }
                if !self.eat_sym(",") {
                    break;
                }
            }
            self.expect_sym("}")?;
        }
        Ok(Letter { kind, tags })
    }

    fn step(&mut self, out: &mut Vec<GuardStep>) -> R<()> {
        if let Some(Tok::Binder(p, i, o)) = self.peek().cloned() {
            if let Some(a) = arr_sym(p, i, o) {
                self.pos += 1;
                self.expect_sym("(")?;
                let index = if self.eat_sym("*") {
                    None
                } else {
                    let e = self.exp()?;
                    Some(self.int(e)?)
                };
                self.expect_sym(")")?;
                self.expect_sym("=")?;
                let v = self.atom()?;
                out.push(match index {
                    None => GuardStep::ArrayInit(a, v),
                    Some(i) => GuardStep::ArrayStore(a, i, v),
                });
                return Ok(());
            }
            let x = self.binder_name()?;
            if self.eat_sym("=") {
                out.push(GuardStep::Set(x, self.atom()?));
            } else if self.eat_sym("<-") {
                if let Some(Tok::Name(p, i, o)) = self.peek().cloned() {
                    if let Some(a) = arr_sym(p, i, o) {
                        self.pos += 1;
                        self.expect_sym("(")?;
                        let e = self.exp()?;
                        let idx = self.int(e)?;
                        self.expect_sym(")")?;
                        out.push(GuardStep::ArrayLoad(x, a, idx));
                        return Ok(());
                    }
                }
                out.push(GuardStep::Let(x, self.atom()?));
            } else {
                out.push(GuardStep::Fresh(x));
            }
            return Ok(());
        }
        let e = self.not_exp()?;
        let b = self.boolean(e)?;
        if !b.is_tt() {
            out.push(GuardStep::Assume(b));
        }
        Ok(())
    }

    fn guard(&mut self) -> R<Guard> {
        let mut steps = Vec::new();
        self.step(&mut steps)?;
        while self.at_word("and") {
            self.pos += 1;
            self.step(&mut steps)?;
        }
        Ok(Guard(steps))
    }

    fn guarded_letter(&mut self) -> R<(Guard, Option<Letter>)> {
        let guard = if self.eat_sym("[") {
            let g = self.guard()?;
            self.expect_sym("]")?;
            g
        } else {
            Guard::tt()
        };
        if self.at_word("eps") && self.peek_at(1).is_none() {
            self.pos += 1;
            return Ok((guard, None));
        }
        Ok((guard, Some(self.letter()?)))
    }
}

pub fn parse_aexp(text: &str) -> Result<AExp, ReadError> {
    let mut r = Reader::new(text)?;
    let e = r.exp()?;
    let a = r.int(e)?;
    r.finish(a)
}

pub fn parse_bexp(text: &str) -> Result<BExp, ReadError> {
    let mut r = Reader::new(text)?;
    let e = r.exp()?;
    let b = r.boolean(e)?;
    r.finish(b)
}

pub fn parse_exp(text: &str) -> Result<Exp, ReadError> {
    let mut r = Reader::new(text)?;
    let e = r.exp()?;
    r.finish(e)
}

pub fn parse_letter(text: &str) -> Result<Letter, ReadError> {
    let mut r = Reader::new(text)?;
    let l = r.letter()?;
    r.finish(l)
}

pub fn parse_guard(text: &str) -> Result<Guard, ReadError> {
    let mut r = Reader::new(text)?;
    let g = r.guard()?;
    r.finish(g)
}

/// Reads an array symbol such as `<A3>` or `<P2_1>`.
pub fn parse_array_sym(text: &str) -> Result<ArrSym, ReadError> {
    let fail = || ReadError {
        text: text.to_string(),
        offset: 0,
        message: "expected an array symbol".into(),
    };
    let inner = text.trim().strip_prefix('<').and_then(|t| t.strip_suffix('>')).ok_or_else(fail)?;
    let chars: Vec<char> = inner.chars().collect();
    match name_body(&chars, 0) {
        Some((p, index, occ, end)) if end == chars.len() => arr_sym(p, index, occ).ok_or_else(fail),
        _ => Err(fail()),
    }
}

/// Reads `[guard] letter`, `letter`, or `[guard] eps` (an ε label, returned as `None`).
pub fn parse_guarded_letter(text: &str) -> Result<(Guard, Option<Letter>), ReadError> {
    let mut r = Reader::new(text)?;
    let gl = r.guarded_letter()?;
    r.finish(gl)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: u32) -> SymName {
        SymName::int(i)
    }

    #[test]
    fn renders_examples() {
        let ne = BExp::cmp(Rel::Ne, AExp::Name(x(1)), AExp::Name(x(2)));
        assert_eq!(ne.to_string(), "<X1> != <X2>");
        let l = Letter::tagged(MoveKind::Run, vec![TagAtom::ident("abort")]);
        assert_eq!(GuardedLetter::new(ne.clone(), l).to_string(), "[<X1> != <X2>] run^{abort}");
        let l = Letter::tagged(
            MoveKind::Run,
            vec![TagAtom::ident("f"), TagAtom::Arg(1)],
        );
        assert_eq!(GuardedLetter::plain(l).to_string(), "run^{f,1}");
        let l = Letter::tagged(MoveKind::bind(x(3)), vec![TagAtom::ident("x")]);
        assert_eq!(l.to_string(), "?X3^{x}");
        assert_eq!(x(3).instance(2).to_string(), "<X3_2>");
    }

    #[test]
    fn reads_back_letters() {
        for text in [
            "q",
            "run^{f,1}",
            "?X3^{x}",
            "<X3>^{x}",
            "(<X1> + 1)",
            "write(<X1> * 2 - 3)^{1}",
            "write(?X2)",
            "read^{x[<X4>]}",
            "?B2^{1}",
            "tt",
            "(-3)^{y}",
            "(<B1> and not (<X2> < 0))",
        ] {
            let l = parse_letter(text).unwrap();
            assert_eq!(l.to_string(), text);
        }
    }

    #[test]
    fn reads_back_guards() {
        for text in [
            "[<X1> = 0] run",
            "[?X2 = (<X1> + 1) and <X1> < <X3>] q^{N}",
            "[?X2 <- <X5>] done",
            "[?A3(*) = 0 and ?A3(<X1>) = 7 and ?X4 <- <A3>(<X1>)] ok",
            "[(<B1> or <B2>) and not <B3>] eps",
            "[?B7] eps",
        ] {
            let (g, l) = parse_guarded_letter(text).unwrap();
            let rendered = match l {
                Some(l) => GuardedLetter::new(g, l).to_string(),
                None => format!("[{g}] eps"),
            };
            assert_eq!(rendered, text);
        }
    }

    #[test]
    fn rejects_garbage() {
        assert!(parse_letter("run^{").is_err());
        assert!(parse_bexp("<X1> + ").is_err());
        assert!(parse_bexp("<X1> + 1").is_err());
        assert!(parse_aexp("<B1>").is_err());
    }
}
