//! Abstract syntax, parsing, type checking and β-normalization of IA₂ terms.

mod ast;
mod beta;
mod lexer;
mod parser;
mod pretty;
mod typeck;

pub use ast::*;
pub use beta::{beta_normalize, is_beta_normal, substitute};
pub use parser::{is_keyword, parse_judgement, parse_term, parse_type};
pub use pretty::judgement as render_judgement;
pub use typeck::{elaborate, free_identifiers, typecheck};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn at(span: Span, message: impl Into<String>) -> Self {
        SyntaxError {
            span,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("type error at {span}: {message}")]
pub struct TypeError {
    pub span: Span,
    pub message: String,
}

impl TypeError {
    pub(crate) fn new(span: Span, message: impl Into<String>) -> Self {
        TypeError {
            span,
            message: message.into(),
        }
    }
}

/// A parsed `ctx |- term : type` judgement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Judgement {
    pub ctx: Context,
    pub term: Term,
    pub ty: FunType,
}

#[derive(Debug, Error)]
pub enum FrontendError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Type(#[from] TypeError),
}

pub fn parse(text: &str) -> Result<Judgement, SyntaxError> {
    let (ctx, term, ty) = parse_judgement(text)?;
    Ok(Judgement { ctx, term, ty })
}

/// Parses, elaborates, checks the declared type and β-normalizes.
pub fn load(text: &str) -> Result<Judgement, FrontendError> {
    let j = parse(text)?;
    let (term, ty) = elaborate(&j.ctx, &j.term)?;
    if ty != j.ty {
        return Err(TypeError::new(
            j.term.span,
            format!("declared type {} but term has type {ty}", j.ty),
        )
        .into());
    }
    Ok(Judgement {
        ctx: j.ctx,
        term: beta_normalize(&term),
        ty,
    })
}
