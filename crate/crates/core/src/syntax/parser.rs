use std::collections::HashSet;

use num_bigint::BigInt;

use super::ast::*;
use super::lexer::{tokenize, Tok, Token};
use super::SyntaxError;

const KEYWORDS: &[&str] = &[
    "skip", "if", "then", "else", "while", "do", "new_int", "new_bool", "in", "true", "false",
    "tt", "ff", "mkvar", "expint", "expbool", "com", "varint", "varbool",
];

pub fn is_keyword(s: &str) -> bool {
    KEYWORDS.contains(&s)
}

/// Parses a judgement `ctx |- term : type`.
pub fn parse_judgement(src: &str) -> Result<(Context, Term, FunType), SyntaxError> {
    let mut p = Parser::new(src)?;
    let ctx = p.context()?;
    p.expect(Tok::Turnstile)?;
    let term = p.seq()?;
    p.expect(Tok::Colon)?;
    let ty = p.fun_type()?;
    p.expect(Tok::Eof)?;
    Ok((ctx, term, ty))
}

/// Parses a bare term.
pub fn parse_term(src: &str) -> Result<Term, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.seq()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

pub fn parse_type(src: &str) -> Result<FunType, SyntaxError> {
    let mut p = Parser::new(src)?;
    let t = p.fun_type()?;
    p.expect(Tok::Eof)?;
    Ok(t)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn new(src: &str) -> Result<Self, SyntaxError> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn span(&self) -> Span {
        self.toks[self.pos].span
    }

    fn advance(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.advance();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, SyntaxError> {
        if self.peek() == &tok {
            Ok(self.advance().span)
        } else {
            Err(self.unexpected(&tok.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> SyntaxError {
        SyntaxError::at(
            self.span(),
            format!("expected {wanted}, found {}", self.peek().describe()),
        )
    }

    fn is_kw(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_kw(&mut self, kw: &str) -> Result<(), SyntaxError> {
        if self.is_kw(kw) {
            self.advance();
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{kw}`")))
        }
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        match self.peek().clone() {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.advance();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    // ---- types and contexts ----

    fn base_type(&mut self) -> Result<BaseType, SyntaxError> {
        let t = match self.peek() {
            Tok::Ident(s) => match s.as_str() {
                "expint" => BaseType::Exp(DataType::Int),
                "expbool" => BaseType::Exp(DataType::Bool),
                "com" => BaseType::Com,
                "varint" => BaseType::Var(DataType::Int),
                "varbool" => BaseType::Var(DataType::Bool),
                _ => return Err(self.unexpected("a base type")),
            },
            _ => return Err(self.unexpected("a base type")),
        };
        self.advance();
        Ok(t)
    }

    fn fun_type(&mut self) -> Result<FunType, SyntaxError> {
        let mut parts = vec![self.base_type()?];
        while self.eat(&Tok::Arrow) {
            parts.push(self.base_type()?);
        }
        let result = parts.pop().expect("non-empty");
        Ok(FunType::new(parts, result))
    }

    fn context(&mut self) -> Result<Context, SyntaxError> {
        let mut ctx = Context::new();
        let mut seen = HashSet::new();
        if self.peek() == &Tok::Turnstile {
            return Ok(ctx);
        }
        loop {
            let span = self.span();
            let name = self.name()?;
            if !seen.insert(name.clone()) {
                return Err(SyntaxError::at(
                    span,
                    format!("duplicate identifier `{name}` in context"),
                ));
            }
            let ty = if self.eat(&Tok::LBracket) {
                let len = match self.peek().clone() {
                    Tok::Int(n) => {
                        self.advance();
                        let len: u64 = n
                            .try_into()
                            .ok()
                            .filter(|&l: &u64| l > 0)
                            .ok_or_else(|| {
                                SyntaxError::at(span, "array length must be a positive integer")
                            })?;
                        ArrayLen::Fixed(len)
                    }
                    Tok::Question => {
                        self.advance();
                        ArrayLen::Symbolic(None)
                    }
                    Tok::Ident(_) => {
                        let kspan = self.span();
                        let k = self.name()?;
                        if !seen.insert(k.clone()) {
                            return Err(SyntaxError::at(
                                kspan,
                                format!("duplicate identifier `{k}` in context"),
                            ));
                        }
                        ArrayLen::Symbolic(Some(k))
                    }
                    _ => return Err(self.unexpected("an array length")),
                };
                self.expect(Tok::RBracket)?;
                self.expect(Tok::Colon)?;
                let tspan = self.span();
                match self.base_type()? {
                    BaseType::Var(elem) => DeclType::Array { elem, len },
                    _ => return Err(SyntaxError::at(tspan, "arrays must have a var type")),
                }
            } else {
                self.expect(Tok::Colon)?;
                DeclType::Fun(self.fun_type()?)
            };
            if name == "abort" && ty != DeclType::Fun(FunType::base(BaseType::Com)) {
                return Err(SyntaxError::at(span, "`abort` must have type com"));
            }
            ctx.push(Decl { name, ty });
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(ctx)
    }

    // ---- terms ----

    fn at_seq_end(&self) -> bool {
        matches!(
            self.peek(),
            Tok::RBrace | Tok::RParen | Tok::RBracket | Tok::Eof | Tok::Colon
        ) || self.is_kw("else")
    }

    pub fn seq(&mut self) -> Result<Term, SyntaxError> {
        let first = self.stmt()?;
        if self.peek() == &Tok::Semi {
            let span = self.advance().span;
            if self.at_seq_end() {
                return Ok(first);
            }
            let rest = self.seq()?;
            return Ok(Term::at(TermKind::Seq(first, rest), span));
        }
        Ok(first)
    }

    fn literal(&mut self) -> Option<Literal> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.advance();
                Some(Literal::Int(n))
            }
            Tok::Minus => {
                if let Tok::Int(n) = self.peek_at(1).clone() {
                    self.advance();
                    self.advance();
                    Some(Literal::Int(-n))
                } else {
                    None
                }
            }
            Tok::Ident(s) if s == "true" || s == "tt" => {
                self.advance();
                Some(Literal::Bool(true))
            }
            Tok::Ident(s) if s == "false" || s == "ff" => {
                self.advance();
                Some(Literal::Bool(false))
            }
            _ => None,
        }
    }

    fn stmt(&mut self) -> Result<Term, SyntaxError> {
        let span = self.span();
        if self.is_kw("mkvar") {
            return Err(SyntaxError::at(span, "unsupported construct `mkvar`"));
        }
        if self.is_kw("if") {
            self.advance();
            let c = self.expr()?;
            self.expect_kw("then")?;
            let t = self.stmt()?;
            let e = if self.is_kw("else") {
                self.advance();
                self.stmt()?
            } else {
                Term::at(TermKind::Skip, span)
            };
            return Ok(Term::at(TermKind::If(c, t, e), span));
        }
        if self.is_kw("while") {
            self.advance();
            let c = self.expr()?;
            self.expect_kw("do")?;
            let body = self.stmt()?;
            return Ok(Term::at(TermKind::While(c, body), span));
        }
        if self.is_kw("new_int") || self.is_kw("new_bool") {
            let dtype = if self.is_kw("new_int") {
                DataType::Int
            } else {
                DataType::Bool
            };
            self.advance();
            let name = self.name()?;
            let len = if self.eat(&Tok::LBracket) {
                let lspan = self.span();
                let len = match self.advance().tok {
                    Tok::Int(n) => n
                        .try_into()
                        .ok()
                        .filter(|&l: &u64| l > 0)
                        .ok_or_else(|| SyntaxError::at(lspan, "local arrays need a positive literal length"))?,
                    _ => return Err(SyntaxError::at(lspan, "local arrays need a positive literal length")),
                };
                self.expect(Tok::RBracket)?;
                Some(len)
            } else {
                None
            };
            self.expect(Tok::ColonEq)?;
            let save = self.pos;
            let lit = self.literal();
            let simple_init = lit.is_some() && self.is_kw("in");
            if !simple_init {
                self.pos = save;
            }
            if let (true, Some(init)) = (simple_init, lit) {
                self.expect_kw("in")?;
                let body = self.seq()?;
                let kind = match len {
                    Some(len) => TermKind::NewArray {
                        dtype,
                        name,
                        len,
                        init,
                        body,
                    },
                    None => TermKind::NewVar {
                        dtype,
                        name,
                        init,
                        body,
                    },
                };
                return Ok(Term::at(kind, span));
            }
            if len.is_some() {
                return Err(SyntaxError::at(span, "local arrays need a literal initial value"));
            }
            // `new x := E in M` abbreviates `new x := default in (x := E; M)`.
            let init_expr = self.expr()?;
            self.expect_kw("in")?;
            let body = self.seq()?;
            let default = match dtype {
                DataType::Int => Literal::Int(BigInt::from(0)),
                DataType::Bool => Literal::Bool(false),
            };
            let assign = Term::at(
                TermKind::Assign(Term::at(TermKind::Ident(name.clone()), span), init_expr),
                span,
            );
            return Ok(Term::at(
                TermKind::NewVar {
                    dtype,
                    name,
                    init: default,
                    body: Term::at(TermKind::Seq(assign, body), span),
                },
                span,
            ));
        }
        if self.peek() == &Tok::Backslash {
            self.advance();
            let param = self.name()?;
            self.expect(Tok::Colon)?;
            let ty = self.base_type()?;
            self.expect(Tok::Dot)?;
            let body = self.seq()?;
            return Ok(Term::at(TermKind::Lambda { param, ty, body }, span));
        }
        let lhs = self.expr()?;
        if self.peek() == &Tok::ColonEq {
            let aspan = self.advance().span;
            let rhs = self.expr()?;
            return Ok(Term::at(TermKind::Assign(lhs, rhs), aspan));
        }
        Ok(lhs)
    }

    fn expr(&mut self) -> Result<Term, SyntaxError> {
        let mut lhs = self.and_expr()?;
        while self.peek() == &Tok::Or {
            let span = self.advance().span;
            let rhs = self.and_expr()?;
            lhs = Term::at(TermKind::BinOp(BinOp::Or, lhs, rhs), span);
        }
        Ok(lhs)
    }

    fn and_expr(&mut self) -> Result<Term, SyntaxError> {
        let mut lhs = self.not_expr()?;
        while self.peek() == &Tok::And {
            let span = self.advance().span;
            let rhs = self.not_expr()?;
            lhs = Term::at(TermKind::BinOp(BinOp::And, lhs, rhs), span);
        }
        Ok(lhs)
    }

    fn not_expr(&mut self) -> Result<Term, SyntaxError> {
        if self.peek() == &Tok::Not {
            let span = self.advance().span;
            let inner = self.not_expr()?;
            return Ok(Term::at(TermKind::Not(inner), span));
        }
        self.cmp_expr()
    }

    fn cmp_expr(&mut self) -> Result<Term, SyntaxError> {
        let lhs = self.add_expr()?;
        let op = match self.peek() {
            Tok::Eq => BinOp::Eq,
            Tok::Ne => BinOp::Ne,
            Tok::Lt => BinOp::Lt,
            Tok::Le => BinOp::Le,
            Tok::Gt => BinOp::Gt,
            Tok::Ge => BinOp::Ge,
            _ => return Ok(lhs),
        };
        let span = self.advance().span;
        let rhs = self.add_expr()?;
        Ok(Term::at(TermKind::BinOp(op, lhs, rhs), span))
    }

    fn add_expr(&mut self) -> Result<Term, SyntaxError> {
        let mut lhs = self.mul_expr()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let span = self.advance().span;
            let rhs = self.mul_expr()?;
            lhs = Term::at(TermKind::BinOp(op, lhs, rhs), span);
        }
    }

    fn mul_expr(&mut self) -> Result<Term, SyntaxError> {
        let mut lhs = self.prefix()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                Tok::Percent => BinOp::Mod,
                _ => return Ok(lhs),
            };
            let span = self.advance().span;
            let rhs = self.prefix()?;
            lhs = Term::at(TermKind::BinOp(op, lhs, rhs), span);
        }
    }

    fn prefix(&mut self) -> Result<Term, SyntaxError> {
        if self.peek() == &Tok::Bang {
            let span = self.advance().span;
            let inner = self.prefix()?;
            return Ok(Term::at(TermKind::Deref(inner), span));
        }
        self.application()
    }

    fn starts_atom(&self) -> bool {
        match self.peek() {
            Tok::Int(_) | Tok::LParen | Tok::LBrace => true,
            Tok::Ident(s) => {
                !is_keyword(s) || matches!(s.as_str(), "skip" | "true" | "false" | "tt" | "ff")
            }
            _ => false,
        }
    }

    fn application(&mut self) -> Result<Term, SyntaxError> {
        let mut head = self.atom()?;
        while self.starts_atom() {
            let span = self.span();
            let arg = self.atom()?;
            head = Term::at(TermKind::Apply(head, arg), span);
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Term, SyntaxError> {
        let span = self.span();
        if let Some(lit) = self.literal() {
            return Ok(Term::at(TermKind::Const(lit), span));
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.advance();
                let t = self.seq()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            Tok::LBrace => {
                self.advance();
                let t = self.seq()?;
                self.expect(Tok::RBrace)?;
                Ok(t)
            }
            Tok::Ident(s) if s == "skip" => {
                self.advance();
                Ok(Term::at(TermKind::Skip, span))
            }
            Tok::Ident(s) if s == "mkvar" => {
                Err(SyntaxError::at(span, "unsupported construct `mkvar`"))
            }
            Tok::Ident(s) if !is_keyword(&s) => {
                self.advance();
                if self.peek() == &Tok::LBracket {
                    self.advance();
                    let index = self.seq()?;
                    self.expect(Tok::RBracket)?;
                    return Ok(Term::at(TermKind::ArrayElem { name: s, index }, span));
                }
                Ok(Term::at(TermKind::Ident(s), span))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}
