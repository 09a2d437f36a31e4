use std::collections::HashSet;

use super::ast::*;
use super::typeck::free_identifiers;

/// Reduces every `(\x. M) N` redex by capture-avoiding substitution.
pub fn beta_normalize(t: &Term) -> Term {
    let span = t.span;
    let kind = match t.kind.as_ref() {
        TermKind::Apply(f, a) => {
            let f = beta_normalize(f);
            let a = beta_normalize(a);
            if let TermKind::Lambda { param, body, .. } = f.kind.as_ref() {
                return beta_normalize(&substitute(body, param, &a));
            }
            TermKind::Apply(f, a)
        }
        _ => map_children(t, beta_normalize),
    };
    Term::at(kind, span)
}

/// True when `t` contains no applied lambda.
pub fn is_beta_normal(t: &Term) -> bool {
    match t.kind.as_ref() {
        TermKind::Apply(f, a) => {
            !matches!(f.kind.as_ref(), TermKind::Lambda { .. })
                && is_beta_normal(f)
                && is_beta_normal(a)
        }
        _ => {
            let mut ok = true;
            for_each_child(t, |c| ok &= is_beta_normal(c));
            ok
        }
    }
}

fn for_each_child(t: &Term, mut f: impl FnMut(&Term)) {
    match t.kind.as_ref() {
        TermKind::Ident(_) | TermKind::Const(_) | TermKind::Skip => {}
        TermKind::BinOp(_, a, b)
        | TermKind::Seq(a, b)
        | TermKind::While(a, b)
        | TermKind::Assign(a, b)
        | TermKind::Apply(a, b) => {
            f(a);
            f(b);
        }
        TermKind::Not(a) | TermKind::Deref(a) => f(a),
        TermKind::If(c, a, b) => {
            f(c);
            f(a);
            f(b);
        }
        TermKind::NewVar { body, .. }
        | TermKind::NewArray { body, .. }
        | TermKind::Lambda { body, .. } => f(body),
        TermKind::ArrayElem { index, .. } => f(index),
    }
}

fn map_children(t: &Term, mut f: impl FnMut(&Term) -> Term) -> TermKind {
    match t.kind.as_ref() {
        TermKind::Ident(_) | TermKind::Const(_) | TermKind::Skip => (*t.kind).clone(),
        TermKind::BinOp(op, a, b) => TermKind::BinOp(*op, f(a), f(b)),
        TermKind::Not(a) => TermKind::Not(f(a)),
        TermKind::Seq(a, b) => TermKind::Seq(f(a), f(b)),
        TermKind::If(c, a, b) => TermKind::If(f(c), f(a), f(b)),
        TermKind::While(c, b) => TermKind::While(f(c), f(b)),
        TermKind::Assign(v, e) => TermKind::Assign(f(v), f(e)),
        TermKind::Deref(v) => TermKind::Deref(f(v)),
        TermKind::NewVar {
            dtype,
            name,
            init,
            body,
        } => TermKind::NewVar {
            dtype: *dtype,
            name: name.clone(),
            init: init.clone(),
            body: f(body),
        },
        TermKind::NewArray {
            dtype,
            name,
            len,
            init,
            body,
        } => TermKind::NewArray {
            dtype: *dtype,
            name: name.clone(),
            len: *len,
            init: init.clone(),
            body: f(body),
        },
        TermKind::Lambda { param, ty, body } => TermKind::Lambda {
            param: param.clone(),
            ty: *ty,
            body: f(body),
        },
        TermKind::Apply(g, a) => TermKind::Apply(f(g), f(a)),
        TermKind::ArrayElem { name, index } => TermKind::ArrayElem {
            name: name.clone(),
            index: f(index),
        },
    }
}

fn all_names(t: &Term, out: &mut HashSet<String>) {
    match t.kind.as_ref() {
        TermKind::Ident(x) => {
            out.insert(x.clone());
        }
        TermKind::NewVar { name, .. }
        | TermKind::NewArray { name, .. }
        | TermKind::Lambda { param: name, .. }
        | TermKind::ArrayElem { name, .. } => {
            out.insert(name.clone());
        }
        _ => {}
    }
    for_each_child(t, |c| all_names(c, out));
}

fn fresh_name(base: &str, avoid: &HashSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}_{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded")
}

/// `t[replacement / x]`, renaming binders that would capture free names of the replacement.
pub fn substitute(t: &Term, x: &str, replacement: &Term) -> Term {
    let fv: HashSet<String> = free_identifiers(replacement).into_iter().collect();
    subst(t, x, replacement, &fv)
}

fn subst(t: &Term, x: &str, n: &Term, fv: &HashSet<String>) -> Term {
    let span = t.span;
    match t.kind.as_ref() {
        TermKind::Ident(y) if y == x => n.clone(),
        TermKind::NewVar { name, .. }
        | TermKind::NewArray { name, .. }
        | TermKind::Lambda { param: name, .. }
            if name == x =>
        {
            t.clone()
        }
        TermKind::NewVar { name, .. }
        | TermKind::NewArray { name, .. }
        | TermKind::Lambda { param: name, .. }
            if fv.contains(name) =>
        {
            let mut avoid = fv.clone();
            all_names(t, &mut avoid);
            avoid.insert(x.to_string());
            let fresh = fresh_name(name, &avoid);
            let renamed = rename_binder(t, &fresh);
            subst(&renamed, x, n, fv)
        }
        _ => Term::at(map_children(t, |c| subst(c, x, n, fv)), span),
    }
}

/// Renames the binder at the root of `t` (and its bound occurrences) to `fresh`.
fn rename_binder(t: &Term, fresh: &str) -> Term {
    let span = t.span;
    let kind = match t.kind.as_ref() {
        TermKind::NewVar {
            dtype,
            name,
            init,
            body,
        } => TermKind::NewVar {
            dtype: *dtype,
            name: fresh.to_string(),
            init: init.clone(),
            body: rename_free(body, name, fresh),
        },
        TermKind::NewArray {
            dtype,
            name,
            len,
            init,
            body,
        } => TermKind::NewArray {
            dtype: *dtype,
            name: fresh.to_string(),
            len: *len,
            init: init.clone(),
            body: rename_free(body, name, fresh),
        },
        TermKind::Lambda { param, ty, body } => TermKind::Lambda {
            param: fresh.to_string(),
            ty: *ty,
            body: rename_free(body, param, fresh),
        },
        other => other.clone(),
    };
    Term::at(kind, span)
}

fn rename_free(t: &Term, from: &str, to: &str) -> Term {
    let span = t.span;
    match t.kind.as_ref() {
        TermKind::Ident(y) if y == from => Term::at(TermKind::Ident(to.to_string()), span),
        TermKind::ArrayElem { name, index } if name == from => Term::at(
            TermKind::ArrayElem {
                name: to.to_string(),
                index: rename_free(index, from, to),
            },
            span,
        ),
        TermKind::NewVar { name, .. }
        | TermKind::NewArray { name, .. }
        | TermKind::Lambda { param: name, .. }
            if name == from =>
        {
            t.clone()
        }
        _ => Term::at(map_children(t, |c| rename_free(c, from, to)), span),
    }
}
