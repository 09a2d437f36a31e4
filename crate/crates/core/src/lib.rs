//! Symbolic game-semantics models for second-order Idealized Algol with safety checking.

pub mod syntax;
pub mod symbolic;
pub mod automata;
pub mod semantics;
pub mod solver;
pub mod safety;
pub mod oracle;
pub mod report;
