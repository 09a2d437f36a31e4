//! Finite-data oracle: an independent concrete interpreter and the
//! concretization of symbolic strategies, for comparing the two.

mod concrete;
mod gamma;
#[cfg(test)]
mod tests;

use std::collections::BTreeSet;

use thiserror::Error;

pub use concrete::{interpret_concrete, interpret_concrete_with, ConcreteAutomaton};
pub use gamma::{concretizations, gamma, render_word};

use crate::symbolic::Letter;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("unbound identifier `{0}`")]
    Unbound(String),
    #[error("not supported by the concrete interpreter: {0}")]
    Unsupported(String),
}

/// Words present on exactly one side, up to `max_len` letters.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WordDiff {
    pub only_left: Vec<Vec<Letter>>,
    pub only_right: Vec<Vec<Letter>>,
}

impl WordDiff {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }
}

fn bounded(ws: &BTreeSet<Vec<Letter>>, max_len: usize) -> BTreeSet<&Vec<Letter>> {
    ws.iter().filter(|w| w.len() <= max_len).collect()
}

pub fn language_diff(a: &BTreeSet<Vec<Letter>>, b: &BTreeSet<Vec<Letter>>, max_len: usize) -> WordDiff {
    let (a, b) = (bounded(a, max_len), bounded(b, max_len));
    WordDiff {
        only_left: a.difference(&b).map(|w| (*w).clone()).collect(),
        only_right: b.difference(&a).map(|w| (*w).clone()).collect(),
    }
}

/// Equality of two word sets restricted to words of at most `max_len` letters.
pub fn language_equal(a: &BTreeSet<Vec<Letter>>, b: &BTreeSet<Vec<Letter>>, max_len: usize) -> bool {
    language_diff(a, b, max_len).is_empty()
}
