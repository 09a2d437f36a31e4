//! Safety checking: unsafe plays in shortest-first order, their play
//! conditions, and concrete counterexamples.

mod play;
mod search;
#[cfg(test)]
mod tests;

use thiserror::Error;

pub use play::{instantiate, Play};
pub use search::{unsafe_plays, UnsafePlays};

use crate::semantics::Strategy;
use crate::solver::{validate_model, SatResult, Solver};
use crate::symbolic::{EvalError, Evaluation, Letter, Value};

/// A play with every payload a value and every guard dropped.
pub type ConcreteWord = Vec<Letter>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// No unsafe play of at most `depth` letters is consistent.
    Safe { depth: usize },
    Unsafe {
        play: Play,
        model: Evaluation,
        concrete: ConcreteWord,
        /// Unsafe plays found inconsistent before this one.
        refuted: usize,
    },
    /// Some conditions could not be decided and no consistent play was found.
    Inconclusive {
        depth: usize,
        unknowns: Vec<(Play, String)>,
    },
}

impl Verdict {
    pub fn is_safe(&self) -> bool {
        matches!(self, Verdict::Safe { .. })
    }

    pub fn is_unsafe(&self) -> bool {
        matches!(self, Verdict::Unsafe { .. })
    }

    /// Process exit code: 0 safe, 1 unsafe, 2 inconclusive.
    pub fn exit_code(&self) -> i32 {
        match self {
            Verdict::Safe { .. } => 0,
            Verdict::Unsafe { .. } => 1,
            Verdict::Inconclusive { .. } => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SafetyError {
    #[error("the evaluation does not satisfy the play condition")]
    NotAModel,
    #[error(transparent)]
    Eval(#[from] EvalError),
}

/// The play's word under `rho`, which must satisfy the play condition.
pub fn concretize(p: &Play, rho: &Evaluation) -> Result<ConcreteWord, SafetyError> {
    if !validate_model(&p.constraint, rho) {
        return Err(SafetyError::NotAModel);
    }
    Ok(play::concrete_letters(p.letters(), rho)?)
}

/// Checks the unsafe plays of `s` up to `max_len` letters in order and
/// reports the first consistent one.
pub fn check_safety(s: &Strategy, solver: &Solver, max_len: usize) -> Verdict {
    let mut refuted = 0;
    let mut unknowns = Vec::new();
    for play in unsafe_plays(s, max_len) {
        match solver.check(&play.constraint) {
            SatResult::Unsat => refuted += 1,
            SatResult::Unknown(why) => unknowns.push((play, why)),
            SatResult::Sat(model) => {
                let model = total_model(&play, model);
                match concretize(&play, &model) {
                    Ok(concrete) => {
                        return Verdict::Unsafe {
                            play,
                            model,
                            concrete,
                            refuted,
                        }
                    }
                    Err(e) => unknowns.push((play, format!("model rejected: {e}"))),
                }
            }
        }
    }
    if unknowns.is_empty() {
        Verdict::Safe { depth: max_len }
    } else {
        Verdict::Inconclusive {
            depth: max_len,
            unknowns,
        }
    }
}

/// Extends a model with defaults for the play's names it leaves open.
fn total_model(p: &Play, mut rho: Evaluation) -> Evaluation {
    for l in p.letters() {
        l.for_each_name(&mut |x| {
            if rho.get(x).is_none() {
                rho.set(x, Value::default_of(x.dtype));
            }
        });
    }
    rho
}
