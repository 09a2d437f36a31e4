//! Satisfiability of play conditions: a bounded built-in procedure and a
//! bridge to an external SMT-LIB2 solver.

mod builtin;
mod smtlib;
#[cfg(test)]
mod tests;

use std::collections::BTreeSet;
use std::fmt;

pub use builtin::check_sat_builtin;
pub use smtlib::{check_sat_external, parse_response, to_smtlib, ExternalSolver};

use crate::symbolic::{AExp, ArrSym, ArrayValue, BExp, Evaluation, Exp, SymName, Value};

/// An array function symbol given by an initial value and point updates,
/// applied in order (the last update of an index wins).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayDef {
    pub sym: ArrSym,
    pub init: Exp,
    pub updates: Vec<(AExp, Exp)>,
}

/// `result = sym(index)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ArrayRead {
    pub sym: ArrSym,
    pub index: AExp,
    pub result: SymName,
}

/// A conjunction of atoms plus array reads against update chains.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Constraint {
    pub conjuncts: Vec<BExp>,
    pub array_defs: Vec<ArrayDef>,
    pub reads: Vec<ArrayRead>,
}

impl Constraint {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn of(conjuncts: impl IntoIterator<Item = BExp>) -> Self {
        let mut c = Constraint::new();
        for b in conjuncts {
            c.assert(b);
        }
        c
    }

    /// Adds `b`, split into its top-level conjuncts.
    pub fn assert(&mut self, b: BExp) {
        for part in b.conjuncts() {
            if !part.is_tt() {
                self.conjuncts.push(part);
            }
        }
    }

    pub fn def(&self, sym: ArrSym) -> Option<&ArrayDef> {
        self.array_defs.iter().find(|d| d.sym == sym)
    }

    /// Every name the constraint mentions, in order.
    pub fn names(&self) -> BTreeSet<SymName> {
        let mut out = BTreeSet::new();
        let mut add = |x: SymName| {
            out.insert(x);
        };
        for b in &self.conjuncts {
            b.for_each_name(&mut add);
        }
        for d in &self.array_defs {
            d.init.for_each_name(&mut add);
            for (i, v) in &d.updates {
                i.for_each_name(&mut add);
                v.for_each_name(&mut add);
            }
        }
        for r in &self.reads {
            r.index.for_each_name(&mut add);
            add(r.result);
        }
        out
    }

    /// The condition as one formula, with each read unfolded into its
    /// update chain.
    pub fn formula(&self) -> BExp {
        let mut parts = self.conjuncts.clone();
        for r in &self.reads {
            parts.push(self.read_formula(r));
        }
        BExp::and(parts)
    }

    fn read_formula(&self, r: &ArrayRead) -> BExp {
        let result = Exp::name(r.result);
        let Some(d) = self.def(r.sym) else {
            return BExp::tt();
        };
        let mut f = Exp::equal(&result, &d.init);
        for (i, v) in &d.updates {
            let hit = BExp::cmp(crate::symbolic::Rel::Eq, r.index.clone(), i.clone());
            f = BExp::or([
                BExp::and([hit.clone(), Exp::equal(&result, v)]),
                BExp::and([BExp::not(hit), f]),
            ]);
        }
        f
    }

    /// Contents of the array symbols under the values of `rho`.
    pub fn array_values(&self, rho: &Evaluation) -> Option<Vec<(ArrSym, ArrayValue)>> {
        let mut out = Vec::new();
        for d in &self.array_defs {
            let mut a = ArrayValue {
                default: d.init.eval(rho).ok()?,
                entries: Default::default(),
            };
            for (i, v) in &d.updates {
                a.entries.insert(i.eval(rho).ok()?, v.eval(rho).ok()?);
            }
            out.push((d.sym, a));
        }
        Some(out)
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.conjuncts.iter().map(|b| b.to_string()).collect();
        for r in &self.reads {
            parts.push(format!("{} = {}({})", Exp::name(r.result), r.sym, r.index));
        }
        if parts.is_empty() {
            return write!(f, "tt");
        }
        write!(f, "{}", parts.join(" and "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatResult {
    Sat(Evaluation),
    Unsat,
    Unknown(String),
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatResult::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SatResult::Unsat)
    }
}

/// True when `rho` makes every conjunct true and every read agree with its
/// update chain. Models that divide by zero are rejected.
pub fn validate_model(c: &Constraint, rho: &Evaluation) -> bool {
    for b in &c.conjuncts {
        if b.eval(rho) != Ok(true) {
            return false;
        }
    }
    for r in &c.reads {
        let Some(d) = c.def(r.sym) else { return false };
        let Ok(index) = r.index.eval(rho) else {
            return false;
        };
        let mut expected = d.init.eval(rho);
        for (i, v) in &d.updates {
            if i.eval(rho) == Ok(index) {
                expected = v.eval(rho);
            } else if i.eval(rho).is_err() {
                return false;
            }
        }
        match (expected, rho.get(r.result)) {
            (Ok(e), Some(got)) if e == got => {}
            _ => return false,
        }
    }
    true
}

/// Completes `rho` with defaults for unconstrained names and the array contents.
pub(crate) fn complete_model(c: &Constraint, mut rho: Evaluation) -> Evaluation {
    for x in c.names() {
        if rho.get(x).is_none() {
            rho.set(x, Value::default_of(x.dtype));
        }
    }
    if let Some(arrays) = c.array_values(&rho) {
        rho.arrays.extend(arrays);
    }
    rho
}

/// A configured satisfiability backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solver {
    /// The built-in procedure searching integers in `[-bound, bound]`.
    Builtin { bound: i128 },
    External(ExternalSolver),
}

impl Default for Solver {
    fn default() -> Self {
        Solver::Builtin { bound: 64 }
    }
}

impl Solver {
    /// Parses `builtin` or `exec:<command line>`.
    pub fn parse(spec: &str, bound: i128) -> Option<Solver> {
        if spec == "builtin" {
            return Some(Solver::Builtin { bound });
        }
        let cmd = spec.strip_prefix("exec:")?;
        ExternalSolver::from_command_line(cmd).map(Solver::External)
    }

    pub fn check(&self, c: &Constraint) -> SatResult {
        match self {
            Solver::Builtin { bound } => check_sat_builtin(c, *bound),
            Solver::External(s) => check_sat_external(c, s),
        }
    }
}
