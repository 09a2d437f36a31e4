use proptest::prelude::*;
use symgc::report::{parse_structured, render_structured};
use symgc::safety::{check_safety, Verdict};
use symgc::semantics::{interpret_judgement, Options};
use symgc::solver::Solver;
use symgc::syntax::{load, render_judgement};

const CTX: &str = "x : expint, y : expint, v : varint, b : expbool, c : com, abort : com";

fn int_exp() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0..6i32).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
        Just("!v".to_string()),
    ];
    leaf.prop_recursive(3, 12, 2, |e| {
        (e.clone(), prop_oneof![Just("+"), Just("-"), Just("*")], e).prop_map(|(a, op, b)| format!("({a} {op} {b})"))
    })
}

fn small_int_exp() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0..6i32).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("y".to_string()),
    ];
    leaf.prop_recursive(2, 5, 2, |e| {
        (e.clone(), prop_oneof![Just("+"), Just("-"), Just("*")], e).prop_map(|(a, op, b)| format!("({a} {op} {b})"))
    })
}

fn bool_exp() -> impl Strategy<Value = String> {
    let cmp = (int_exp(), prop_oneof![Just("<"), Just("="), Just(">="), Just("!=")], int_exp())
        .prop_map(|(a, r, b)| format!("{a} {r} {b}"));
    let leaf = prop_oneof![Just("b".to_string()), Just("true".to_string()), cmp];
    leaf.prop_recursive(2, 6, 2, |e| {
        prop_oneof![
            e.clone().prop_map(|a| format!("not ({a})")),
            (e.clone(), prop_oneof![Just("and"), Just("or")], e).prop_map(|(a, op, b)| format!("({a} {op} {b})")),
        ]
    })
}

fn command() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("skip".to_string()),
        Just("c".to_string()),
        Just("abort".to_string()),
        int_exp().prop_map(|e| format!("v := {e}")),
    ];
    leaf.prop_recursive(3, 10, 3, |c| {
        prop_oneof![
            (c.clone(), c.clone()).prop_map(|(a, b)| format!("{{ {a}; {b} }}")),
            (bool_exp(), c.clone(), c.clone()).prop_map(|(g, a, b)| format!("if {g} then {{ {a} }} else {{ {b} }}")),
            (bool_exp(), c.clone()).prop_map(|(g, a)| format!("if {g} then {{ {a} }}")),
            (int_exp(), c).prop_map(|(e, a)| format!("new_int l := {e} in {{ l := !l + 1; {a} }}")),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_is_a_fixed_point(cmd in command()) {
        let j = load(&format!("{CTX} |- {cmd} : com")).unwrap();
        let once = render_judgement(&j.ctx, &j.term, &j.ty);
        let again = load(&once).unwrap();
        prop_assert_eq!(render_judgement(&again.ctx, &again.term, &again.ty), once);
    }

    #[test]
    fn guarded_abort_matches_brute_force(e in small_int_exp(), k in -6i64..6) {
        let src = format!("x : expint, y : expint, abort : com |- if {e} > {k} then abort : com");
        let s = interpret_judgement(&load(&src).unwrap(), Options::default()).unwrap();
        let v = check_safety(&s, &Solver::Builtin { bound: 16 }, 24);
        // Every occurrence of a free expression is a separate read.
        let reads = e.matches(['x', 'y']).count() as u32;
        let witness = (0..5i64.pow(reads)).any(|mut code| {
            let vals: Vec<i64> = (0..reads).map(|_| { let d = code % 5 - 2; code /= 5; d }).collect();
            eval(&e, &vals) > k
        });
        if witness {
            prop_assert!(v.is_unsafe(), "{}: {:?}", src, v);
        }
        if let Verdict::Unsafe { concrete, .. } = &v {
            prop_assert!(concrete.iter().any(|l| l.is_abort()));
        }
    }

    #[test]
    fn structured_reports_read_back(cmd in command()) {
        let j = load(&format!("{CTX} |- {cmd} : com")).unwrap();
        let s = interpret_judgement(&j, Options::default()).unwrap();
        let v = check_safety(&s, &Solver::Builtin { bound: 8 }, 10);
        let text = render_structured(&v);
        prop_assert_eq!(parse_structured(&text).unwrap(), v);
    }
}

/// Evaluates a generated expression, which is fully parenthesized, giving
/// the reads of `x` and `y` the values in `reads` in order.
fn eval(src: &str, reads: &[i64]) -> i64 {
    fn go(t: &[u8], i: &mut usize, reads: &mut std::slice::Iter<'_, i64>) -> i64 {
        match t[*i] {
            b'(' => {
                *i += 1;
                let a = go(t, i, reads);
                let op = t[*i + 1];
                *i += 3;
                let b = go(t, i, reads);
                *i += 1;
                match op {
                    b'+' => a + b,
                    b'-' => a - b,
                    _ => a * b,
                }
            }
            b'x' | b'y' => {
                *i += 1;
                *reads.next().unwrap()
            }
            _ => {
                let start = *i;
                while *i < t.len() && t[*i].is_ascii_digit() {
                    *i += 1;
                }
                std::str::from_utf8(&t[start..*i]).unwrap().parse().unwrap()
            }
        }
    }
    go(src.as_bytes(), &mut 0, &mut reads.iter())
}
