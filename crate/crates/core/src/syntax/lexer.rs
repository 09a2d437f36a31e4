use num_bigint::BigInt;

use super::ast::Span;
use super::SyntaxError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    Turnstile,
    Comma,
    Colon,
    ColonEq,
    Semi,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Backslash,
    Dot,
    Arrow,
    Plus,
    Minus,
    Star,
    Slash,
    Percent,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Bang,
    Not,
    And,
    Or,
    Question,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("{other:?}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1u32, 1u32);

    macro_rules! bump {
        ($n:expr) => {{
            for _ in 0..$n {
                if chars[i] == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
                i += 1;
            }
        }};
    }

    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let next = chars.get(i + 1).copied();
        if c.is_whitespace() {
            bump!(1);
            continue;
        }
        if c == '/' && next == Some('/') {
            while i < chars.len() && chars[i] != '\n' {
                bump!(1);
            }
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                bump!(1);
            }
            let text: String = chars[start..i].iter().collect();
            let n = text.parse::<BigInt>().expect("digits");
            out.push(Token {
                tok: Tok::Int(n),
                span,
            });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
            {
                bump!(1);
            }
            let text: String = chars[start..i].iter().collect();
            let tok = match text.as_str() {
                "not" => Tok::Not,
                "and" => Tok::And,
                "or" => Tok::Or,
                _ => Tok::Ident(text),
            };
            out.push(Token { tok, span });
            continue;
        }
        let two: Option<(Tok, usize)> = match (c, next) {
            ('|', Some('-')) => Some((Tok::Turnstile, 2)),
            ('|', Some('|')) => Some((Tok::Or, 2)),
            ('&', Some('&')) => Some((Tok::And, 2)),
            (':', Some('=')) => Some((Tok::ColonEq, 2)),
            ('-', Some('>')) => Some((Tok::Arrow, 2)),
            ('!', Some('=')) => Some((Tok::Ne, 2)),
            ('<', Some('=')) => Some((Tok::Le, 2)),
            ('>', Some('=')) => Some((Tok::Ge, 2)),
            ('<', Some('>')) => Some((Tok::Ne, 2)),
            _ => None,
        };
        if let Some((tok, n)) = two {
            bump!(n);
            out.push(Token { tok, span });
            continue;
        }
        let tok = match c {
            '⊢' => Tok::Turnstile,
            ',' => Tok::Comma,
            ':' => Tok::Colon,
            ';' => Tok::Semi,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '[' => Tok::LBracket,
            ']' => Tok::RBracket,
            '\\' | 'λ' => Tok::Backslash,
            '.' => Tok::Dot,
            '→' => Tok::Arrow,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '%' => Tok::Percent,
            '=' => Tok::Eq,
            '≠' => Tok::Ne,
            '<' => Tok::Lt,
            '≤' => Tok::Le,
            '>' => Tok::Gt,
            '≥' => Tok::Ge,
            '!' => Tok::Bang,
            '¬' => Tok::Not,
            '∧' => Tok::And,
            '∨' => Tok::Or,
            '?' => Tok::Question,
            other => {
                return Err(SyntaxError::at(
                    span,
                    format!("unexpected character `{other}`"),
                ))
            }
        };
        bump!(1);
        out.push(Token { tok, span });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span { line, col },
    });
    Ok(out)
}
