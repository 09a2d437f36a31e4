use super::*;
use crate::semantics::{interpret_judgement, Options};
use crate::symbolic::{parse_bexp, MoveKind, Payload};
use crate::syntax::load;

const M1: &str = "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com";

fn counter(k: i64) -> String {
    format!(
        "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; \
         if (x > {k}) then abort : com"
    )
}

fn strategy(src: &str) -> Strategy {
    interpret_judgement(&load(src).unwrap(), Options::default()).unwrap()
}

fn builtin() -> Solver {
    Solver::Builtin { bound: 64 }
}

fn values(w: &[Letter]) -> Vec<i128> {
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

#[test]
fn first_play_of_m1_guards_abort_with_inequality() {
    let s = strategy(M1);
    let p = unsafe_plays(&s, 12).next().unwrap();
    assert_eq!(p.len(), 12);
    assert!(p.word.is_well_formed());
    assert_eq!(p.constraint.conjuncts.len(), 1);
    let c = p.condition.to_string();
    assert!(c.contains("!="), "{c}");
    assert_eq!(p.path.len(), p.transitions.len() + 1);
    assert!(s.automaton.is_final(*p.path.last().unwrap()));
}

#[test]
fn m1_is_unsafe_with_a_valid_model() {
    let s = strategy(M1);
    let Verdict::Unsafe { play, model, concrete, refuted } = check_safety(&s, &builtin(), 12) else {
        panic!()
    };
    assert_eq!(refuted, 0);
    assert!(validate_model(&play.constraint, &model));
    assert_eq!(concrete.len(), 12);
    assert!(concrete.iter().any(Letter::is_abort));
    let v = values(&concrete);
    assert_eq!(v.len(), 2);
    assert_ne!(v[0], v[1]);
}

#[test]
fn concretize_uses_the_given_values() {
    let s = strategy(M1);
    let p = unsafe_plays(&s, 12).next().unwrap();
    let mut names = p.constraint.names().into_iter();
    let (x, y) = (names.next().unwrap(), names.next().unwrap());
    let rho = Evaluation::new().with(x, Value::Int(1)).with(y, Value::Int(2));
    let w = concretize(&p, &rho).unwrap();
    let text: Vec<String> = w.iter().map(|l| l.to_string()).collect();
    assert_eq!(
        text.join(" "),
        "run run^{f} run^{f,1} q^{x} 1^{x} q^{y} 2^{y} run^{abort} done^{abort} done^{f,1} done^{f} done"
    );
    let same = Evaluation::new().with(x, Value::Int(1)).with(y, Value::Int(1));
    assert_eq!(concretize(&p, &same), Err(SafetyError::NotAModel));
}

#[test]
fn guard_free_play_concretizes_to_itself() {
    let s = strategy("abort : com |- abort : com");
    let p = unsafe_plays(&s, 4).next().unwrap();
    let w = concretize(&p, &Evaluation::new()).unwrap();
    assert_eq!(w, p.letters());
}

#[test]
fn counter_plays_follow_the_loop() {
    let s = strategy(&counter(0));
    let mut plays = unsafe_plays(&s, 16);
    let first = plays.next().unwrap();
    let second = plays.next().unwrap();
    assert_eq!(first.constraint.names().len(), 2);
    let crate::symbolic::BExp::Cmp(_, x, z) = &first.constraint.conjuncts[1] else { panic!() };
    let (x, z) = (x.to_string(), z.to_string());
    let expected = parse_bexp(&format!("{x} = 0 and {x} >= {z} and {x} > 0")).unwrap();
    assert_eq!(first.condition, expected);
    assert_eq!(builtin().check(&first.constraint), SatResult::Unsat);
    assert_eq!(second.constraint.conjuncts.len(), 5);
    assert!(builtin().check(&second.constraint).is_sat());
    assert!(second.len() > first.len());
}

#[test]
fn counter_counterexample_runs_the_body_once() {
    let s = strategy(&counter(0));
    let Verdict::Unsafe { concrete, refuted, .. } = check_safety(&s, &builtin(), 16) else {
        panic!()
    };
    assert_eq!(refuted, 1);
    let text: Vec<String> = concrete.iter().map(|l| l.to_string()).collect();
    assert_eq!(text.len(), 8);
    assert_eq!(text[0], "run");
    assert_eq!(&text[5..], ["run^{abort}", "done^{abort}", "done"]);
    let v = values(&concrete);
    assert!(v[0] > 0 && v[1] <= 1);
}

#[test]
fn raised_threshold_refutes_more_plays() {
    for k in 1..=3 {
        let s = strategy(&counter(k));
        let Verdict::Unsafe { concrete, refuted, .. } = check_safety(&s, &builtin(), 32) else {
            panic!()
        };
        assert_eq!(refuted, k as usize + 1);
        let questions = concrete.iter().filter(|l| l.kind == MoveKind::Q).count();
        assert_eq!(questions, k as usize + 2);
    }
}

#[test]
fn plays_come_shortest_first_with_fresh_names() {
    let s = strategy(&counter(2));
    let mut last = 0;
    for p in unsafe_plays(&s, 20) {
        assert!(p.len() >= last);
        last = p.len();
        let mut bound = Vec::new();
        for l in p.letters() {
            if let Some(x) = l.binder() {
                assert!(!bound.contains(&x));
                bound.push(x);
            }
        }
        assert!(p.is_unsafe());
    }
    assert!(last > 0);
}

#[test]
fn abort_free_term_is_safe() {
    let s = strategy("c : com |- c; c : com");
    assert_eq!(unsafe_plays(&s, 10).count(), 0);
    assert_eq!(check_safety(&s, &builtin(), 10), Verdict::Safe { depth: 10 });
}

#[test]
fn inconsistent_abort_is_safe() {
    let s = strategy("x : expint, abort : com |- new_int v := x in if !v != !v then abort : com");
    assert_eq!(check_safety(&s, &builtin(), 10), Verdict::Safe { depth: 10 });
    let s = strategy("x : expint, abort : com |- if x != x then abort : com");
    assert!(check_safety(&s, &builtin(), 10).is_unsafe());
}

#[test]
fn bound_is_relative_to_depth() {
    let s = strategy(&counter(3));
    assert_eq!(check_safety(&s, &builtin(), 10), Verdict::Safe { depth: 10 });
    assert!(check_safety(&s, &builtin(), 20).is_unsafe());
}

#[test]
fn undecided_conditions_are_inconclusive() {
    let s = strategy("x : expint, abort : com |- if x > 100 then abort : com");
    let v = check_safety(&s, &Solver::Builtin { bound: 8 }, 10);
    assert!(matches!(v, Verdict::Inconclusive { ref unknowns, .. } if unknowns.len() == 1));
    assert_eq!(v.exit_code(), 2);
    assert!(check_safety(&s, &Solver::Builtin { bound: 200 }, 10).is_unsafe());
}

#[test]
fn linear_search_finds_the_element() {
    let s = strategy(
        "x[k] : varint, y : expint, abort : com |- new_int i := 0 in new_int p := y in \
         while (i < k) do { if (x[i] = p) then abort; i := i + 1 } : com",
    );
    let Verdict::Unsafe { play, model, .. } = check_safety(&s, &builtin(), 16) else {
        panic!()
    };
    assert!(validate_model(&play.constraint, &model));
    let c = play.constraint.to_string();
    assert!(c.contains('<'), "{c}");
}

#[test]
fn local_array_contents_reach_the_condition() {
    let s = strategy("abort : com |- new_int a[3] := 0 in a[1] := 5; if a[1] = 5 then abort : com");
    let Verdict::Unsafe { play, .. } = check_safety(&s, &builtin(), 6) else { panic!() };
    assert!(!play.constraint.array_defs.is_empty());
    let s = strategy("abort : com |- new_int a[3] := 0 in a[1] := 5; if a[1] = 4 then abort : com");
    assert!(check_safety(&s, &builtin(), 6).is_safe());
}
