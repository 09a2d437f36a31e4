use std::collections::BTreeMap;

use super::{complete_model, validate_model, Constraint, SatResult};
use crate::symbolic::{AExp, ArithOp, BExp, Evaluation, Rel, SymName, Value};
use crate::syntax::DataType;

/// Rounds of bound propagation before giving up on a fixpoint.
const MAX_ROUNDS: usize = 64;

/// `Σ coef·x + k`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct Lin {
    coef: BTreeMap<SymName, i128>,
    k: i128,
}

impl Lin {
    fn constant(k: i128) -> Self {
        Lin {
            coef: BTreeMap::new(),
            k,
        }
    }

    fn scale(mut self, c: i128) -> Option<Self> {
        self.k = self.k.checked_mul(c)?;
        for v in self.coef.values_mut() {
            *v = v.checked_mul(c)?;
        }
        self.coef.retain(|_, v| *v != 0);
        Some(self)
    }

    fn add(mut self, other: &Lin) -> Option<Self> {
        self.k = self.k.checked_add(other.k)?;
        for (x, c) in &other.coef {
            let e = self.coef.entry(*x).or_insert(0);
            *e = e.checked_add(*c)?;
        }
        self.coef.retain(|_, v| *v != 0);
        Some(self)
    }

    fn as_constant(&self) -> Option<i128> {
        self.coef.is_empty().then_some(self.k)
    }
}

fn linear(a: &AExp) -> Option<Lin> {
    match a {
        AExp::Lit(n) => Some(Lin::constant(*n)),
        AExp::Name(x) => Some(Lin {
            coef: BTreeMap::from([(*x, 1)]),
            k: 0,
        }),
        AExp::Bin(op, a, b) => {
            let (a, b) = (linear(a)?, linear(b)?);
            match op {
                ArithOp::Add => a.add(&b),
                ArithOp::Sub => a.add(&b.scale(-1)?),
                ArithOp::Mul => match (a.as_constant(), b.as_constant()) {
                    (Some(c), _) => b.scale(c),
                    (_, Some(c)) => a.scale(c),
                    _ => None,
                },
                ArithOp::Div | ArithOp::Mod => None,
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Interval {
    lo: Option<i128>,
    hi: Option<i128>,
}

impl Interval {
    const FULL: Interval = Interval { lo: None, hi: None };

    fn fixed(&self) -> Option<i128> {
        match (self.lo, self.hi) {
            (Some(l), Some(h)) if l == h => Some(l),
            _ => None,
        }
    }

    fn within(&self, bound: i128) -> bool {
        self.lo.is_some_and(|l| l >= -bound) && self.hi.is_some_and(|h| h <= bound)
    }
}

struct Refuted;

/// Current knowledge about every name.
#[derive(Debug, Clone, Default)]
struct Domains {
    ints: BTreeMap<SymName, Interval>,
    bools: BTreeMap<SymName, Option<bool>>,
}

impl Domains {
    fn of(c: &Constraint) -> Self {
        let mut d = Domains::default();
        for x in c.names() {
            match x.dtype {
                DataType::Int => {
                    d.ints.insert(x, Interval::FULL);
                }
                DataType::Bool => {
                    d.bools.insert(x, None);
                }
            }
        }
        d
    }

    fn raise(&mut self, x: SymName, lo: i128) -> Result<bool, Refuted> {
        let iv = self.ints.get_mut(&x).expect("known name");
        if iv.lo.is_some_and(|l| l >= lo) {
            return Ok(false);
        }
        iv.lo = Some(lo);
        if iv.hi.is_some_and(|h| h < lo) {
            return Err(Refuted);
        }
        Ok(true)
    }

    fn lower(&mut self, x: SymName, hi: i128) -> Result<bool, Refuted> {
        let iv = self.ints.get_mut(&x).expect("known name");
        if iv.hi.is_some_and(|h| h <= hi) {
            return Ok(false);
        }
        iv.hi = Some(hi);
        if iv.lo.is_some_and(|l| l > hi) {
            return Err(Refuted);
        }
        Ok(true)
    }

    fn set_bool(&mut self, x: SymName, v: bool) -> Result<bool, Refuted> {
        let slot = self.bools.get_mut(&x).expect("known name");
        match *slot {
            Some(w) if w == v => Ok(false),
            Some(_) => Err(Refuted),
            None => {
                *slot = Some(v);
                Ok(true)
            }
        }
    }

    /// The values of all fixed names.
    fn partial(&self) -> Evaluation {
        let mut rho = Evaluation::new();
        for (x, iv) in &self.ints {
            if let Some(v) = iv.fixed() {
                rho.set(*x, Value::Int(v));
            }
        }
        for (x, b) in &self.bools {
            if let Some(v) = b {
                rho.set(*x, Value::Bool(*v));
            }
        }
        rho
    }

    /// Smallest possible value of `c·x`.
    fn term_min(&self, x: SymName, c: i128) -> Option<i128> {
        let iv = self.ints[&x];
        if c > 0 {
            iv.lo?.checked_mul(c)
        } else {
            iv.hi?.checked_mul(c)
        }
    }

    /// Narrows the names of `lin <= 0`.
    fn at_most_zero(&mut self, lin: &Lin) -> Result<bool, Refuted> {
        let mins: Vec<(SymName, i128, Option<i128>)> = lin
            .coef
            .iter()
            .map(|(x, c)| (*x, *c, self.term_min(*x, *c)))
            .collect();
        let unbounded = mins.iter().filter(|m| m.2.is_none()).count();
        let known: Option<i128> = mins
            .iter()
            .filter_map(|m| m.2)
            .try_fold(lin.k, |acc, m| acc.checked_add(m));
        let Some(known) = known else { return Ok(false) };
        if unbounded == 0 && known > 0 {
            return Err(Refuted);
        }
        let mut changed = false;
        for (x, c, m) in mins {
            let rest = match (unbounded, m) {
                (0, Some(m)) => known - m,
                (1, None) => known,
                _ => continue,
            };
            // c·x <= -rest
            let Some(bound) = rest.checked_neg() else { continue };
            changed |= if c > 0 {
                self.lower(x, bound.div_euclid(c))?
            } else {
                self.raise(x, -bound.div_euclid(-c))?
            };
        }
        Ok(changed)
    }

    fn not_equal_zero(&mut self, lin: &Lin) -> Result<bool, Refuted> {
        let open: Vec<(SymName, i128)> = lin
            .coef
            .iter()
            .filter(|(x, _)| self.ints[x].fixed().is_none())
            .map(|(x, c)| (*x, *c))
            .collect();
        let Some(fixed_sum) = lin
            .coef
            .iter()
            .filter_map(|(x, c)| self.ints[x].fixed().map(|v| v.checked_mul(*c)))
            .try_fold(lin.k, |acc, t| acc.checked_add(t?))
        else {
            return Ok(false);
        };
        match open.as_slice() {
            [] if fixed_sum == 0 => Err(Refuted),
            [(x, c)] if c.abs() == 1 => {
                let excluded = -fixed_sum * c;
                let iv = self.ints[x];
                if iv.lo == Some(excluded) {
                    self.raise(*x, excluded + 1)
                } else if iv.hi == Some(excluded) {
                    self.lower(*x, excluded - 1)
                } else {
                    Ok(false)
                }
            }
            _ => Ok(false),
        }
    }

    fn relation(&mut self, rel: Rel, a: &AExp, b: &AExp) -> Result<bool, Refuted> {
        let Some(diff) = linear(a).zip(linear(b)).and_then(|(a, b)| a.add(&b.scale(-1)?)) else {
            return Ok(false);
        };
        let neg = || diff.clone().scale(-1);
        let one = Lin::constant(1);
        let r = match rel {
            Rel::Le => self.at_most_zero(&diff)?,
            Rel::Lt => match diff.clone().add(&one) {
                Some(d) => self.at_most_zero(&d)?,
                None => false,
            },
            Rel::Ge => match neg() {
                Some(d) => self.at_most_zero(&d)?,
                None => false,
            },
            Rel::Gt => match neg().and_then(|d| d.add(&one)) {
                Some(d) => self.at_most_zero(&d)?,
                None => false,
            },
            Rel::Eq => {
                let a = self.at_most_zero(&diff)?;
                let b = match neg() {
                    Some(d) => self.at_most_zero(&d)?,
                    None => false,
                };
                a || b
            }
            Rel::Ne => self.not_equal_zero(&diff)?,
        };
        Ok(r)
    }

    fn atom(&mut self, b: &BExp) -> Result<bool, Refuted> {
        match b {
            BExp::Const(true) => Ok(false),
            BExp::Const(false) => Err(Refuted),
            BExp::Name(x) => self.set_bool(*x, true),
            BExp::Not(inner) => match inner.as_ref() {
                BExp::Name(x) => self.set_bool(*x, false),
                BExp::Cmp(rel, a, b) => self.relation(rel.negate(), a, b),
                _ => self.closed(b),
            },
            BExp::Cmp(rel, a, b) => self.relation(*rel, a, b),
            BExp::And(parts) => {
                let mut changed = false;
                for p in parts {
                    changed |= self.atom(p)?;
                }
                Ok(changed)
            }
            BExp::Or(_) => self.closed(b),
        }
    }

    /// Evaluates an atom once all its names are fixed.
    fn closed(&mut self, b: &BExp) -> Result<bool, Refuted> {
        match b.eval(&self.partial()) {
            Ok(false) => Err(Refuted),
            Ok(true) => Ok(false),
            Err(crate::symbolic::EvalError::Unbound(_)) => Ok(false),
            Err(_) => Err(Refuted),
        }
    }

    /// Refutes atoms whose divisor is already known to be zero.
    fn check_divisors(&self, b: &BExp) -> Result<(), Refuted> {
        fn walk(a: &AExp, rho: &Evaluation) -> Result<(), Refuted> {
            if let AExp::Bin(op, x, y) = a {
                if matches!(op, ArithOp::Div | ArithOp::Mod) && y.eval(rho) == Ok(0) {
                    return Err(Refuted);
                }
                walk(x, rho)?;
                walk(y, rho)?;
            }
            Ok(())
        }
        let rho = self.partial();
        let mut r = Ok(());
        b.for_each_aexp(&mut |a| {
            if r.is_ok() {
                r = walk(a, &rho);
            }
        });
        r
    }

    fn propagate(&mut self, atoms: &[BExp]) -> Result<(), Refuted> {
        for _ in 0..MAX_ROUNDS {
            let mut changed = false;
            for a in atoms {
                self.check_divisors(a)?;
                changed |= self.atom(a)?;
                if matches!(a, BExp::Cmp(_, l, r) if linear(l).is_none() || linear(r).is_none()) {
                    self.closed(a)?;
                }
            }
            if !changed {
                break;
            }
        }
        Ok(())
    }
}

/// Integer candidates in order `0, 1, -1, 2, -2, …` within the interval.
fn candidates(iv: Interval, bound: i128) -> impl Iterator<Item = i128> {
    let lo = iv.lo.map_or(-bound, |l| l.max(-bound));
    let hi = iv.hi.map_or(bound, |h| h.min(bound));
    (0..=bound)
        .flat_map(|m| if m == 0 { vec![0] } else { vec![m, -m] })
        .filter(move |v| lo <= *v && *v <= hi)
}

fn search(d: Domains, atoms: &[BExp], bound: i128, c: &Constraint) -> Option<Evaluation> {
    let open_int = d.ints.iter().find(|(_, iv)| iv.fixed().is_none()).map(|(x, iv)| (*x, *iv));
    let open_bool = d.bools.iter().find(|(_, v)| v.is_none()).map(|(x, _)| *x);
    let next = match (open_int, open_bool) {
        (Some((x, _)), Some(y)) if y < x => Err(y),
        (Some(i), _) => Ok(i),
        (None, Some(y)) => Err(y),
        (None, None) => {
            let rho = d.partial();
            return validate_model(c, &rho).then_some(rho);
        }
    };
    match next {
        Ok((x, iv)) => {
            for v in candidates(iv, bound) {
                let mut d2 = d.clone();
                if d2.raise(x, v).is_err() || d2.lower(x, v).is_err() {
                    continue;
                }
                if d2.propagate(atoms).is_ok() {
                    if let Some(rho) = search(d2, atoms, bound, c) {
                        return Some(rho);
                    }
                }
            }
            None
        }
        Err(y) => {
            for v in [false, true] {
                let mut d2 = d.clone();
                if d2.set_bool(y, v).is_ok() && d2.propagate(atoms).is_ok() {
                    if let Some(rho) = search(d2, atoms, bound, c) {
                        return Some(rho);
                    }
                }
            }
            None
        }
    }
}

/// Decides `c` by bound propagation and a search over `[-bound, bound]`.
///
/// `Sat` carries the model that is least in name order with values tried as
/// `0, 1, -1, 2, …`. `Unsat` is reported when propagation refutes the
/// constraint or when propagation confines every name to the box and the
/// search fails; otherwise a failed search gives `Unknown`.
pub fn check_sat_builtin(c: &Constraint, bound: i128) -> SatResult {
    let bound = bound.max(0);
    let f = c.formula().fold();
    let atoms = f.conjuncts();
    let mut d = Domains::of(c);
    if d.propagate(&atoms).is_err() {
        return SatResult::Unsat;
    }
    let exhaustive = d.ints.values().all(|iv| iv.within(bound));
    let mut boxed = d.clone();
    for x in d.ints.keys() {
        if boxed.raise(*x, -bound).is_err() || boxed.lower(*x, bound).is_err() {
            return if exhaustive {
                SatResult::Unsat
            } else {
                SatResult::Unknown(format!("no model with values in [-{bound}, {bound}]"))
            };
        }
    }
    match boxed.propagate(&atoms).ok().and_then(|_| search(boxed, &atoms, bound, c)) {
        Some(rho) => SatResult::Sat(complete_model(c, rho)),
        None if exhaustive => SatResult::Unsat,
        None => SatResult::Unknown(format!("no model with values in [-{bound}, {bound}]")),
    }
}
