
use super::ast::*;
use super::TypeError;

/// What an identifier denotes while checking a term.
#[derive(Debug, Clone)]
enum Binding {
    Fun(FunType),
    Array(DataType),
    Length,
}

#[derive(Default)]
struct Env {
    scopes: Vec<(String, Binding)>,
}

impl Env {
    fn from_context(ctx: &Context) -> Self {
        let mut env = Env::default();
        for d in &ctx.decls {
            match &d.ty {
                DeclType::Fun(t) => env.scopes.push((d.name.clone(), Binding::Fun(t.clone()))),
                DeclType::Array { elem, len } => {
                    env.scopes.push((d.name.clone(), Binding::Array(*elem)));
                    if let ArrayLen::Symbolic(Some(k)) = len {
                        env.scopes.push((k.clone(), Binding::Length));
                    }
                }
            }
        }
        env
    }

    fn get(&self, name: &str) -> Option<&Binding> {
        self.scopes.iter().rev().find(|(n, _)| n == name).map(|(_, b)| b)
    }

    fn scoped<R>(&mut self, name: &str, b: Binding, f: impl FnOnce(&mut Self) -> R) -> R {
        self.scopes.push((name.to_string(), b));
        let r = f(self);
        self.scopes.pop();
        r
    }
}

/// Returns the type of `t` under `ctx`.
pub fn typecheck(ctx: &Context, t: &Term) -> Result<FunType, TypeError> {
    let mut env = Env::from_context(ctx);
    check(&mut env, t).map(|(_, ty)| ty)
}

/// Type checks `t` and makes implicit dereferences explicit: a variable used where an
/// expression is expected becomes `!x`.
pub fn elaborate(ctx: &Context, t: &Term) -> Result<(Term, FunType), TypeError> {
    let mut env = Env::from_context(ctx);
    check(&mut env, t)
}

fn base_of(t: &Term, ty: &FunType) -> Result<BaseType, TypeError> {
    ty.as_base().ok_or_else(|| {
        TypeError::new(
            t.span,
            format!("expected a base type, found function type {ty}"),
        )
    })
}

/// Coerces a checked term to `exp D`, dereferencing variables.
fn as_exp(t: Term, ty: &FunType, want: DataType) -> Result<Term, TypeError> {
    match base_of(&t, ty)? {
        BaseType::Exp(d) if d == want => Ok(t),
        BaseType::Var(d) if d == want => {
            let span = t.span;
            Ok(Term::at(TermKind::Deref(t), span))
        }
        other => Err(TypeError::new(
            t.span,
            format!("type mismatch: expected exp{want}, found {other}"),
        )),
    }
}

fn expect_com(t: &Term, ty: &FunType) -> Result<(), TypeError> {
    match base_of(t, ty)? {
        BaseType::Com => Ok(()),
        other => Err(TypeError::new(
            t.span,
            format!("type mismatch: expected com, found {other}"),
        )),
    }
}

fn rebuild(span: Span, kind: TermKind) -> Term {
    Term::at(kind, span)
}

fn check(env: &mut Env, t: &Term) -> Result<(Term, FunType), TypeError> {
    let span = t.span;
    let base = |b: BaseType| FunType::base(b);
    match t.kind.as_ref() {
        TermKind::Ident(x) => match env.get(x) {
            Some(Binding::Fun(ty)) => Ok((t.clone(), ty.clone())),
            Some(Binding::Length) => Ok((t.clone(), base(BaseType::Exp(DataType::Int)))),
            Some(Binding::Array(_)) => Err(TypeError::new(
                span,
                format!("array `{x}` must be indexed"),
            )),
            None => Err(TypeError::new(span, format!("unbound identifier `{x}`"))),
        },
        TermKind::Const(l) => Ok((t.clone(), base(BaseType::Exp(l.dtype())))),
        TermKind::Skip => Ok((t.clone(), base(BaseType::Com))),
        TermKind::BinOp(op, a, b) => {
            let (arg, res) = op.signature();
            let (a2, ta) = check(env, a)?;
            let (b2, tb) = check(env, b)?;
            let a2 = as_exp(a2, &ta, arg)?;
            let b2 = as_exp(b2, &tb, arg)?;
            Ok((
                rebuild(span, TermKind::BinOp(*op, a2, b2)),
                base(BaseType::Exp(res)),
            ))
        }
        TermKind::Not(a) => {
            let (a2, ta) = check(env, a)?;
            let a2 = as_exp(a2, &ta, DataType::Bool)?;
            Ok((
                rebuild(span, TermKind::Not(a2)),
                base(BaseType::Exp(DataType::Bool)),
            ))
        }
        TermKind::Seq(a, b) => {
            let (a2, ta) = check(env, a)?;
            expect_com(&a2, &ta)?;
            let (b2, tb) = check(env, b)?;
            expect_com(&b2, &tb)?;
            Ok((rebuild(span, TermKind::Seq(a2, b2)), base(BaseType::Com)))
        }
        TermKind::If(c, a, b) => {
            let (c2, tc) = check(env, c)?;
            let c2 = as_exp(c2, &tc, DataType::Bool)?;
            let (a2, ta) = check(env, a)?;
            expect_com(&a2, &ta)?;
            let (b2, tb) = check(env, b)?;
            expect_com(&b2, &tb)?;
            Ok((rebuild(span, TermKind::If(c2, a2, b2)), base(BaseType::Com)))
        }
        TermKind::While(c, body) => {
            let (c2, tc) = check(env, c)?;
            let c2 = as_exp(c2, &tc, DataType::Bool)?;
            let (b2, tb) = check(env, body)?;
            expect_com(&b2, &tb)?;
            Ok((rebuild(span, TermKind::While(c2, b2)), base(BaseType::Com)))
        }
        TermKind::Assign(v, e) => {
            let (v2, tv) = check(env, v)?;
            let d = match base_of(&v2, &tv)? {
                BaseType::Var(d) => d,
                other => {
                    return Err(TypeError::new(
                        v.span,
                        format!("type mismatch: cannot assign to {other}"),
                    ))
                }
            };
            let (e2, te) = check(env, e)?;
            let e2 = as_exp(e2, &te, d)?;
            Ok((rebuild(span, TermKind::Assign(v2, e2)), base(BaseType::Com)))
        }
        TermKind::Deref(v) => {
            let (v2, tv) = check(env, v)?;
            match base_of(&v2, &tv)? {
                BaseType::Var(d) => Ok((
                    rebuild(span, TermKind::Deref(v2)),
                    base(BaseType::Exp(d)),
                )),
                other => Err(TypeError::new(
                    v.span,
                    format!("type mismatch: cannot dereference {other}"),
                )),
            }
        }
        TermKind::NewVar {
            dtype,
            name,
            init,
            body,
        } => {
            if init.dtype() != *dtype {
                return Err(TypeError::new(
                    span,
                    format!("initial value {init} does not have type {dtype}"),
                ));
            }
            let (b2, tb) = env.scoped(
                name,
                Binding::Fun(base(BaseType::Var(*dtype))),
                |env| check(env, body),
            )?;
            let result = base_of(&b2, &tb)?;
            if matches!(result, BaseType::Var(_)) {
                return Err(TypeError::new(span, "a block cannot have var type"));
            }
            Ok((
                rebuild(
                    span,
                    TermKind::NewVar {
                        dtype: *dtype,
                        name: name.clone(),
                        init: init.clone(),
                        body: b2,
                    },
                ),
                tb,
            ))
        }
        TermKind::NewArray {
            dtype,
            name,
            len,
            init,
            body,
        } => {
            if init.dtype() != *dtype {
                return Err(TypeError::new(
                    span,
                    format!("initial value {init} does not have type {dtype}"),
                ));
            }
            if *len == 0 {
                return Err(TypeError::new(span, "array length must be positive"));
            }
            let (b2, tb) = env.scoped(name, Binding::Array(*dtype), |env| check(env, body))?;
            let result = base_of(&b2, &tb)?;
            if matches!(result, BaseType::Var(_)) {
                return Err(TypeError::new(span, "a block cannot have var type"));
            }
            Ok((
                rebuild(
                    span,
                    TermKind::NewArray {
                        dtype: *dtype,
                        name: name.clone(),
                        len: *len,
                        init: init.clone(),
                        body: b2,
                    },
                ),
                tb,
            ))
        }
        TermKind::Lambda { param, ty, body } => {
            let (b2, tb) = env.scoped(param, Binding::Fun(base(*ty)), |env| check(env, body))?;
            let mut args = vec![*ty];
            args.extend(tb.args.iter().copied());
            Ok((
                rebuild(
                    span,
                    TermKind::Lambda {
                        param: param.clone(),
                        ty: *ty,
                        body: b2,
                    },
                ),
                FunType::new(args, tb.result),
            ))
        }
        TermKind::Apply(fun, arg) => {
            let (f2, tf) = check(env, fun)?;
            let Some((&param, rest)) = tf.args.split_first() else {
                return Err(TypeError::new(
                    span,
                    format!("cannot apply a term of type {tf}"),
                ));
            };
            let (a2, ta) = check(env, arg)?;
            let a2 = match (param, base_of(&a2, &ta)?) {
                (p, b) if p == b => a2,
                (BaseType::Exp(d), BaseType::Var(e)) if d == e => as_exp(a2, &ta, d)?,
                (p, b) => {
                    return Err(TypeError::new(
                        arg.span,
                        format!("type mismatch: argument has type {b}, expected {p}"),
                    ))
                }
            };
            Ok((
                rebuild(span, TermKind::Apply(f2, a2)),
                FunType::new(rest.to_vec(), tf.result),
            ))
        }
        TermKind::ArrayElem { name, index } => {
            let elem = match env.get(name) {
                Some(Binding::Array(d)) => *d,
                Some(_) => {
                    return Err(TypeError::new(span, format!("`{name}` is not an array")))
                }
                None => {
                    return Err(TypeError::new(span, format!("unbound identifier `{name}`")))
                }
            };
            let (i2, ti) = check(env, index)?;
            let i2 = as_exp(i2, &ti, DataType::Int).map_err(|_| {
                TypeError::new(index.span, "array index must have type expint")
            })?;
            Ok((
                rebuild(
                    span,
                    TermKind::ArrayElem {
                        name: name.clone(),
                        index: i2,
                    },
                ),
                base(BaseType::Var(elem)),
            ))
        }
    }
}

/// Collects free identifiers of a term.
pub fn free_identifiers(t: &Term) -> Vec<String> {
    fn go(t: &Term, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let visit = |x: &str, bound: &Vec<String>, out: &mut Vec<String>| {
            if !bound.iter().any(|b| b == x) && !out.iter().any(|o| o == x) {
                out.push(x.to_string());
            }
        };
        match t.kind.as_ref() {
            TermKind::Ident(x) => visit(x, bound, out),
            TermKind::Const(_) | TermKind::Skip => {}
            TermKind::BinOp(_, a, b)
            | TermKind::Seq(a, b)
            | TermKind::While(a, b)
            | TermKind::Assign(a, b)
            | TermKind::Apply(a, b) => {
                go(a, bound, out);
                go(b, bound, out);
            }
            TermKind::Not(a) | TermKind::Deref(a) => go(a, bound, out),
            TermKind::If(c, a, b) => {
                go(c, bound, out);
                go(a, bound, out);
                go(b, bound, out);
            }
            TermKind::NewVar { name, body, .. }
            | TermKind::NewArray { name, body, .. }
            | TermKind::Lambda {
                param: name, body, ..
            } => {
                bound.push(name.clone());
                go(body, bound, out);
                bound.pop();
            }
            TermKind::ArrayElem { name, index } => {
                visit(name, bound, out);
                go(index, bound, out);
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}
