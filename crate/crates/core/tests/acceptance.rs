//! End-to-end acceptance checks. Each criterion writes one PASS/FAIL line to
//! stderr; the test fails if any criterion does.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use symgc::automata::{compose, compose_flat, eliminate_epsilon, rename, traces, words, SymAutomaton};
use symgc::oracle::{gamma, interpret_concrete, language_diff};
use symgc::safety::{check_safety, unsafe_plays, Play, Verdict};
use symgc::semantics::{construct_strategy, free_identifier, interpret_judgement, Construct, Options, Strategy};
use symgc::solver::{validate_model, Constraint, ExternalSolver, SatResult, Solver};
use symgc::symbolic::{parse_bexp, Letter, MoveKind, NamePool, Payload, TagAtom, Value};
use symgc::syntax::{load, parse_type};

const FAST: Duration = Duration::from_secs(1);
const DIFFERENTIAL_BUDGET: Duration = Duration::from_secs(60);
const DIFFERENTIAL_LEN: usize = 20;
const ALGEBRA_LEN: usize = 12;
const RANDOM_CONSTRAINTS: usize = 500;
const SOLVER_BOX: i128 = 8;

const M1: &str = "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com";
const SEARCH: &str = "x[k] : varint, y : expint, abort : com |- new_int i := 0 in new_int p := y in \
                      while (i < k) do { if (x[i] = p) then abort; i := i + 1 } : com";

fn counter(k: i64) -> String {
    format!(
        "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; \
         if (x > {k}) then abort : com"
    )
}

fn strategy_with(src: &str, opts: Options) -> Strategy {
    interpret_judgement(&load(src).unwrap(), opts).unwrap()
}

fn strategy(src: &str) -> Strategy {
    strategy_with(src, Options::default())
}

fn builtin() -> Solver {
    Solver::Builtin { bound: 64 }
}

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn text(w: &[Letter]) -> String {
    w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" ")
}

fn int_payloads(w: &[Letter]) -> Vec<i128> {
    w.iter()
        .filter_map(|l| match l.kind.payload() {
            Some(Payload::Expr(e)) => match e.as_literal() {
                Some(Value::Int(v)) => Some(v),
                _ => None,
            },
            _ => None,
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = strategy(M1);
    let v = check_safety(&s, &builtin(), 12);
    let elapsed = start.elapsed();
    let Verdict::Unsafe { play, model, concrete, .. } = v else {
        return Err(format!("expected unsafe, got {v:?}"));
    };
    ensure(play.len() == 12, || format!("play has {} letters", play.len()))?;
    let cond = play.condition.to_string();
    ensure(cond.contains("!="), || format!("condition `{cond}`"))?;
    ensure(validate_model(&play.constraint, &model), || "model does not validate".into())?;
    let vals = int_payloads(&concrete);
    ensure(vals.len() == 2 && vals[0] != vals[1], || text(&concrete))?;
    ensure(elapsed < FAST, || format!("took {elapsed:?}"))?;
    Ok(format!("condition {cond}, concrete {}", text(&concrete)))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let s = strategy(&counter(0));
    let mut plays = unsafe_plays(&s, 16);
    let first = plays.next().ok_or("no unsafe play")?;
    let second = plays.next().ok_or("one unsafe play")?;
    let names: Vec<String> = first.constraint.names().iter().map(|x| x.to_string()).collect();
    let [x, z] = names.as_slice() else {
        return Err(format!("first condition mentions {names:?}"));
    };
    let shape = |x: &str, z: &str| parse_bexp(&format!("{x} = 0 and {x} >= {z} and {x} > 0")).unwrap();
    ensure(first.condition == shape(x, z) || first.condition == shape(z, x), || {
        format!("first condition `{}`", first.condition)
    })?;
    ensure(builtin().check(&first.constraint).is_unsat(), || "first play not refuted".into())?;
    ensure(builtin().check(&second.constraint).is_sat(), || "second play not satisfiable".into())?;
    let Verdict::Unsafe { concrete, refuted, .. } = check_safety(&s, &builtin(), 16) else {
        return Err("not unsafe".into());
    };
    let elapsed = start.elapsed();
    let t: Vec<String> = concrete.iter().map(|l| l.to_string()).collect();
    let v = int_payloads(&concrete);
    let pattern = t.len() == 8
        && t[0] == "run"
        && t[1] == "q^{N}"
        && t[3] == "q^{N}"
        && t[5..] == ["run^{abort}", "done^{abort}", "done"]
        && v.len() == 2
        && v[0] > 0
        && v[1] <= 1;
    ensure(refuted == 1 && pattern, || format!("refuted {refuted}, concrete {}", t.join(" ")))?;
    ensure(elapsed < FAST, || format!("took {elapsed:?}"))?;
    Ok(format!("concrete {}", t.join(" ")))
}

fn loop_tests(p: &Play) -> usize {
    p.letters().iter().filter(|l| l.kind == MoveKind::Q).count()
}

fn criterion_3() -> Outcome {
    let mut seen = Vec::new();
    for k in 1..=3i64 {
        let s = strategy(&counter(k));
        let mut sat = None;
        for (i, p) in unsafe_plays(&s, 40).enumerate() {
            match builtin().check(&p.constraint) {
                SatResult::Unsat => continue,
                SatResult::Sat(_) => {
                    sat = Some((i, p));
                    break;
                }
                SatResult::Unknown(why) => return Err(format!("k={k}: play {i} undecided: {why}")),
            }
        }
        let (i, p) = sat.ok_or_else(|| format!("k={k}: no satisfiable play"))?;
        let k = k as usize;
        ensure(i == k + 1, || format!("k={k}: first satisfiable play is number {}", i + 1))?;
        ensure(loop_tests(&p) == k + 2, || format!("k={k}: {} loop tests", loop_tests(&p)))?;
        seen.push(format!("k={k}: {i} refuted"));
    }
    Ok(seen.join(", "))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s = strategy(SEARCH);
    let states = s.automaton.num_states();
    ensure(states == 9, || format!("{states} states"))?;
    let Verdict::Unsafe { play, model, .. } = check_safety(&s, &builtin(), 16) else {
        return Err("not unsafe".into());
    };
    let elapsed = start.elapsed();
    ensure(validate_model(&play.constraint, &model), || "model does not validate".into())?;
    let k = s.lengths.first().ok_or("no symbolic length")?.1.to_string();
    let bound_by = |tag: &str| {
        play.letters()
            .iter()
            .find(|l| l.belongs_to(tag) && l.binder().is_some())
            .and_then(Letter::binder)
            .map(|x| x.to_string())
    };
    let y = bound_by("y").ok_or("no input for y")?;
    let z = bound_by("x").ok_or("no read from x")?;
    let conjuncts: Vec<String> = play.constraint.conjuncts.iter().map(|b| b.to_string()).collect();
    let p = conjuncts
        .iter()
        .find_map(|c| c.strip_suffix(&format!(" = {y}")))
        .ok_or_else(|| format!("no P = Y in {conjuncts:?}"))?;
    let has = |c: String| conjuncts.contains(&c);
    ensure(has(format!("{z} = {p}")) || has(format!("{p} = {z}")), || {
        format!("no Z = P in {conjuncts:?}")
    })?;
    ensure(conjuncts.iter().any(|c| c.ends_with(&format!(" < {k}"))), || {
        format!("no I < k in {conjuncts:?}")
    })?;
    ensure(elapsed < FAST, || format!("took {elapsed:?}"))?;
    Ok(format!("9 states, condition {}", play.condition))
}

const DIFFERENTIAL_CORPUS: &[&str] = &[
    M1,
    "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; if (x > 1) then abort : com",
    "|- skip : com",
    "v : varint, c : com |- if !v > 0 then { v := !v - 1; c } else c : com",
    "abort : com |- new_int a[3] := 0 in a[1] := 1; if a[1] + a[0] = 1 then abort : com",
    SEARCH,
    "f : varint -> com, abort : com |- new_int x := 0 in f x; if !x = 1 then abort : com",
    "g : expint -> com -> com, v : varint |- g (!v) (v := !v + 1) : com",
    "|- \\c : com . c; c : com -> com",
    "b : expbool, c : com |- new_bool t := true in t := not b; if !t then c : com",
    "b : expbool, c : com |- while b do c : com",
    "x : expint, y : expint |- x * y % 2 : expint",
];

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for src in DIFFERENTIAL_CORPUS {
        let j = load(src).unwrap();
        let s = interpret_judgement(&j, Options::default()).map_err(|e| format!("{src}: {e}"))?;
        for n in [2, 3] {
            let symbolic = gamma(&s, n, DIFFERENTIAL_LEN);
            let concrete = interpret_concrete(&j.ctx, &j.term, &j.ty, n)
                .map_err(|e| format!("{src}: {e}"))?
                .words(DIFFERENTIAL_LEN);
            let d = language_diff(&symbolic, &concrete, DIFFERENTIAL_LEN);
            ensure(d.is_empty(), || {
                format!("{src} at n={n}: {} only symbolic, {} only concrete", d.only_left.len(), d.only_right.len())
            })?;
            checked += symbolic.len();
        }
    }
    let elapsed = start.elapsed();
    ensure(elapsed < DIFFERENTIAL_BUDGET, || format!("took {elapsed:?}"))?;
    Ok(format!(
        "{} terms, {checked} words, length <= {DIFFERENTIAL_LEN}, {:.1}s",
        DIFFERENTIAL_CORPUS.len(),
        elapsed.as_secs_f64()
    ))
}

/// Pairs `(outer, argument)` composed on argument 1.
fn composition_corpus() -> Vec<(String, SymAutomaton, SymAutomaton)> {
    let raw = Options {
        simplify: false,
        ..Options::default()
    };
    let ident = |ty: &str| free_identifier("f", &parse_type(ty).unwrap(), &mut NamePool::new());
    let arg = |src: &str| strategy_with(src, raw).automaton;
    let mut out = vec![
        (
            "f applied to a guarded abort".to_string(),
            ident("com -> com"),
            arg("abort : com, x : expint, y : expint |- if x != y then abort : com"),
        ),
        (
            "f applied to a sum".to_string(),
            ident("expint -> expint"),
            arg("x : expint |- x + 1 : expint"),
        ),
        (
            "f applied to an assignment".to_string(),
            ident("com -> com"),
            arg("v : varint |- v := !v + 1 : com"),
        ),
        (
            "f applied to a loop".to_string(),
            ident("com -> com"),
            arg("b : expbool, c : com |- while b do c : com"),
        ),
    ];
    for (name, c) in [
        ("sequencing", Construct::Seq),
        ("conditional", Construct::If),
        ("loop", Construct::While),
    ] {
        let first = match c {
            Construct::Seq => arg("c : com |- c : com"),
            _ => arg("b : expbool |- b : expbool"),
        };
        out.push((format!("{name} on its first argument"), construct_strategy(c, &mut NamePool::new()), first));
    }
    out
}

fn criterion_6() -> Outcome {
    let mut checked = 0;
    for src in DIFFERENTIAL_CORPUS {
        let s = strategy_with(
            src,
            Options {
                simplify: false,
                ..Options::default()
            },
        );
        let a = &s.automaton;
        let reference = traces(a, ALGEBRA_LEN);
        let e = eliminate_epsilon(a).map_err(|e| format!("{src}: {e}"))?;
        ensure(e.is_epsilon_free(), || format!("{src}: ε moves remain"))?;
        ensure(traces(&e, ALGEBRA_LEN) == reference, || format!("{src}: ε-elimination changed the language"))?;
        ensure(traces(&a.trim(), ALGEBRA_LEN) == reference, || format!("{src}: pruning changed the language"))?;
        ensure(traces(&a.prune_unreachable(), ALGEBRA_LEN) == reference, || {
            format!("{src}: pruning changed the language")
        })?;
        checked += 1;
    }
    let tag = [TagAtom::Arg(1)];
    for (name, outer, inner) in composition_corpus() {
        let inner = rename(&inner, &tag);
        let p = compose(&outer, &inner, &tag).map_err(|e| format!("{name}: {e}"))?;
        let f = compose_flat(&outer, &inner, &tag).map_err(|e| format!("{name}: {e}"))?;
        let synced = |a: &SymAutomaton| a.letters().iter().any(|l| l.head_tag() == Some(&TagAtom::Arg(1)));
        ensure(!synced(&p) && !synced(&f), || format!("{name}: synchronized tags remain"))?;
        let p = eliminate_epsilon(&p).map_err(|e| format!("{name}: {e}"))?.trim();
        let f = eliminate_epsilon(&f).map_err(|e| format!("{name}: {e}"))?.trim();
        ensure(traces(&p, ALGEBRA_LEN) == traces(&f, ALGEBRA_LEN), || {
            format!("{name}: product and flat composition differ")
        })?;
        checked += 1;
    }
    Ok(format!("{checked} automata, length <= {ALGEBRA_LEN}"))
}

fn random_constraint(rng: &mut StdRng) -> Constraint {
    let vars = rng.gen_range(1..=3);
    let name = |i: usize| format!("<X{}>", i + 1);
    let mut conjuncts = Vec::new();
    for i in 0..vars {
        conjuncts.push(format!("{} >= -{SOLVER_BOX}", name(i)));
        conjuncts.push(format!("{} <= {SOLVER_BOX}", name(i)));
    }
    for _ in 0..rng.gen_range(1..=4) {
        let mut terms = Vec::new();
        for i in 0..vars {
            let c: i32 = rng.gen_range(-3..=3);
            if c != 0 {
                terms.push(format!("{c} * {}", name(i)));
            }
        }
        if terms.is_empty() {
            terms.push(name(0));
        }
        let rel = ["=", "!=", "<", "<=", ">", ">="][rng.gen_range(0..6)];
        let rhs: i32 = rng.gen_range(-10..=10);
        let atom = format!("{} {rel} {rhs}", terms.join(" + "));
        conjuncts.push(if rng.gen_bool(0.1) { format!("not ({atom})") } else { atom });
    }
    Constraint::of(conjuncts.iter().map(|c| parse_bexp(c).unwrap()))
}

fn z3_available() -> bool {
    Command::new("z3").arg("-version").output().is_ok_and(|o| o.status.success())
}

fn criterion_7() -> Outcome {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let b = Solver::Builtin { bound: SOLVER_BOX };
    let external = z3_available().then(|| Solver::External(ExternalSolver::new("z3", vec!["-in".to_string()])));
    let mut tally = BTreeMap::new();
    for i in 0..RANDOM_CONSTRAINTS {
        let c = random_constraint(&mut rng);
        let r = b.check(&c);
        match &r {
            SatResult::Sat(m) => ensure(validate_model(&c, m), || format!("builtin model fails on `{c}`"))?,
            SatResult::Unsat => {}
            SatResult::Unknown(why) => return Err(format!("builtin undecided on boxed `{c}`: {why}")),
        }
        *tally.entry(if r.is_sat() { "sat" } else { "unsat" }).or_insert(0) += 1;
        if let Some(ext) = &external {
            let e = ext.check(&c);
            if let SatResult::Sat(m) = &e {
                ensure(validate_model(&c, m), || format!("external model fails on `{c}`"))?;
            }
            ensure(e.is_sat() == r.is_sat() && e.is_unsat() == r.is_unsat(), || {
                format!("constraint {i} `{c}`: builtin {r:?}, external {e:?}")
            })?;
        }
    }
    let who = if external.is_some() { "builtin and z3 agree" } else { "builtin only, z3 not found" };
    Ok(format!(
        "{who} on {RANDOM_CONSTRAINTS} constraints ({} sat, {} unsat)",
        tally.get("sat").unwrap_or(&0),
        tally.get("unsat").unwrap_or(&0)
    ))
}

/// Pending questions per tag never go negative and end at zero.
fn balanced(w: &[Letter]) -> bool {
    let mut open: BTreeMap<&[TagAtom], i32> = BTreeMap::new();
    for l in w {
        let n = open.entry(l.tags.as_slice()).or_insert(0);
        *n += if l.is_question() { 1 } else { -1 };
        if *n < 0 {
            return false;
        }
    }
    open.values().all(|n| *n == 0)
}

fn criterion_8() -> Outcome {
    let a = free_identifier("f", &parse_type("expint -> expint").unwrap(), &mut NamePool::new());
    let ws = words(&a, ALGEBRA_LEN);
    let shape = |w: &Vec<Letter>| {
        w.iter()
            .map(|l| match l.binder() {
                Some(_) => format!("?^{:?}", l.tags),
                None => match l.kind.payload() {
                    Some(_) => format!("!^{:?}", l.tags),
                    None => l.to_string(),
                },
            })
            .collect::<Vec<_>>()
    };
    let twice = ws.iter().find(|w| {
        let s = shape(w);
        w.len() == 12 && s.iter().filter(|m| m.as_str() == "q^{f,1}").count() == 2
    });
    let twice = twice.ok_or("no play evaluating the argument twice")?;
    let letters: Vec<_> = twice.iter().collect();
    let answers_copy = letters.windows(2).all(|p| match (p[0].binder(), p[1].kind.payload()) {
        (Some(x), Some(Payload::Expr(e))) => e.to_string() == x.to_string(),
        _ => true,
    });
    ensure(answers_copy, || format!("answers are not copied in {}", text(twice)))?;
    let bad = ws.iter().find(|w| !balanced(w));
    ensure(bad.is_none(), || format!("unbalanced word {}", text(bad.unwrap())))?;
    Ok(format!("{} accepted, {} words checked", text(twice), ws.len()))
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 8] = [
        ("M1 counterexample", criterion_1),
        ("M2 refutes then finds", criterion_2),
        ("raised thresholds", criterion_3),
        ("linear search", criterion_4),
        ("differential suite", criterion_5),
        ("automata algebra", criterion_6),
        ("solver agreement", criterion_7),
        ("free identifier", criterion_8),
    ];
    let mut failed = Vec::new();
    let mut err = std::io::stderr();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let line = match run() {
            Ok(detail) => format!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(why) => {
                failed.push(i + 1);
                format!("criterion {}: FAIL {name}: {why}", i + 1)
            }
        };
        let _ = writeln!(err, "{line}");
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
