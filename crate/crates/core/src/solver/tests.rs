use proptest::prelude::*;

use super::*;
use crate::symbolic::{parse_bexp, ArrSym, Rel};
use crate::syntax::DataType;

fn x(i: u32) -> SymName {
    SymName::int(i)
}

fn c(src: &[&str]) -> Constraint {
    Constraint::of(src.iter().map(|s| parse_bexp(s).unwrap()))
}

fn builtin(c: &Constraint) -> SatResult {
    check_sat_builtin(c, 64)
}

fn z3() -> Option<ExternalSolver> {
    let s = ExternalSolver::new("z3", vec!["-in".into()]);
    check_sat_external(&Constraint::new(), &s).is_sat().then_some(s)
}

#[test]
fn disequality_is_satisfiable() {
    let k = c(&["<X1> != <X2>"]);
    let SatResult::Sat(rho) = builtin(&k) else { panic!() };
    assert!(validate_model(&k, &rho));
    assert_eq!(rho.get(x(1)), Some(Value::Int(0)));
    assert_eq!(rho.get(x(2)), Some(Value::Int(1)));
}

#[test]
fn first_counter_play_is_refuted() {
    assert_eq!(builtin(&c(&["<X1> = 0", "<X1> >= <X2>", "<X1> > 0"])), SatResult::Unsat);
}

#[test]
fn second_counter_play_has_a_model() {
    let k = c(&["<X1> = 0", "<X1> < <X2>", "<X3> = <X1> + 1", "<X3> >= <X4>", "<X3> > 0"]);
    let SatResult::Sat(rho) = builtin(&k) else { panic!() };
    assert!(validate_model(&k, &rho));
    let expected = Evaluation::new()
        .with(x(1), Value::Int(0))
        .with(x(2), Value::Int(1))
        .with(x(3), Value::Int(1))
        .with(x(4), Value::Int(0));
    assert!(validate_model(&k, &expected));
}

#[test]
fn validation_rejects_wrong_models() {
    let k = c(&["<X1> != <X2>"]);
    let zero = Evaluation::new().with(x(1), Value::Int(0)).with(x(2), Value::Int(0));
    assert!(!validate_model(&k, &zero));
    assert!(validate_model(&Constraint::new(), &zero));
}

#[test]
fn trivial_constraint_has_empty_model() {
    assert_eq!(builtin(&Constraint::new()), SatResult::Sat(Evaluation::new()));
}

#[test]
fn division_by_zero_is_not_a_model() {
    let k = c(&["<X1> / <X2> = 1"]);
    let SatResult::Sat(rho) = builtin(&k) else { panic!() };
    assert_ne!(rho.get(x(2)), Some(Value::Int(0)));
    assert!(builtin(&c(&["<X2> = 0", "<X1> / <X2> = 1"])).is_unsat());
    assert!(to_smtlib(&k).contains("(assert (distinct X2 0))"));
}

#[test]
fn propagation_through_definitions() {
    // Loop unrolled twice against threshold 3: X3 = 2 cannot exceed 3.
    let k = c(&["<X1> = 0", "<X2> = <X1> + 1", "<X3> = <X2> + 1", "<X3> >= <X4>", "<X3> > 3"]);
    assert!(builtin(&k).is_unsat());
}

#[test]
fn out_of_box_models_are_unknown() {
    let k = c(&["<X1> > 100"]);
    assert!(matches!(check_sat_builtin(&k, 8), SatResult::Unknown(_)));
    assert!(check_sat_builtin(&k, 200).is_sat());
}

#[test]
fn booleans_are_enumerated() {
    let k = c(&["<B1> or <B2>", "not <B1>"]);
    let SatResult::Sat(rho) = builtin(&k) else { panic!() };
    assert_eq!(rho.get(SymName::bool(2)), Some(Value::Bool(true)));
}

fn array_example() -> Constraint {
    let a = ArrSym::new(5, DataType::Int);
    let mut k = Constraint::new();
    k.array_defs.push(ArrayDef {
        sym: a,
        init: Exp::int(0),
        updates: vec![(AExp::Lit(1), Exp::int(7))],
    });
    k.reads.push(ArrayRead {
        sym: a,
        index: AExp::Lit(1),
        result: x(1),
    });
    k.reads.push(ArrayRead {
        sym: a,
        index: AExp::Name(x(2)),
        result: x(3),
    });
    k.assert(BExp::cmp(Rel::Ne, AExp::Name(x(2)), AExp::Lit(1)));
    k
}

#[test]
fn reads_follow_the_update_chain() {
    let k = array_example();
    let SatResult::Sat(rho) = builtin(&k) else { panic!() };
    assert_eq!(rho.get(x(1)), Some(Value::Int(7)));
    assert_eq!(rho.get(x(3)), Some(Value::Int(0)));
    assert!(validate_model(&k, &rho));
    let arr = &rho.arrays[&ArrSym::new(5, DataType::Int)];
    assert_eq!(arr.get(1), Value::Int(7));
}

#[test]
fn script_declares_and_asserts() {
    let s = to_smtlib(&c(&["<X1> != <X2>"]));
    assert!(s.contains("(declare-const X1 Int)\n(declare-const X2 Int)\n"));
    assert!(s.contains("(assert (distinct X1 X2))"));
    assert!(s.contains("(check-sat)\n(get-value (X1 X2))"));
    assert_eq!(s, to_smtlib(&c(&["<X1> != <X2>"])));
}

#[test]
fn responses_are_parsed() {
    let k = c(&["<X1> != <X2>"]);
    let r = parse_response("sat\n((X1 (- 3)) (X2 2))\n", &k);
    let SatResult::Sat(rho) = r else { panic!() };
    assert_eq!(rho.get(x(1)), Some(Value::Int(-3)));
    assert_eq!(parse_response("unsat\n(error \"model is not available\")", &k), SatResult::Unsat);
    assert!(matches!(parse_response("garbage (", &k), SatResult::Unknown(_)));
    assert!(matches!(parse_response("sat\n((X1 1))", &k), SatResult::Unknown(_)));
}

#[test]
fn missing_solver_is_unknown() {
    let s = ExternalSolver::new("/nonexistent/solver", vec![]);
    assert!(matches!(check_sat_external(&Constraint::new(), &s), SatResult::Unknown(_)));
}

#[test]
fn external_solver_agrees_on_examples() {
    let Some(s) = z3() else { return };
    let k = c(&["<X1> != <X2>"]);
    let SatResult::Sat(rho) = check_sat_external(&k, &s) else { panic!() };
    assert!(validate_model(&k, &rho));
    assert!(check_sat_external(&c(&["<X1> = 0", "<X1> >= <X2>", "<X1> > 0"]), &s).is_unsat());
    let k = array_example();
    let SatResult::Sat(rho) = check_sat_external(&k, &s) else { panic!() };
    assert!(validate_model(&k, &rho));
}

#[test]
fn solver_spec_parses() {
    assert_eq!(Solver::parse("builtin", 8), Some(Solver::Builtin { bound: 8 }));
    let Some(Solver::External(e)) = Solver::parse("exec:z3 -in", 8) else { panic!() };
    assert_eq!((e.program.as_str(), e.args.as_slice()), ("z3", &["-in".to_string()][..]));
    assert_eq!(Solver::parse("yices", 8), None);
}

fn atom() -> impl Strategy<Value = BExp> {
    let term = prop_oneof![
        (1u32..4).prop_map(|i| AExp::Name(x(i))),
        (-6i128..7).prop_map(AExp::Lit),
    ];
    let rel = prop_oneof![
        Just(Rel::Eq),
        Just(Rel::Ne),
        Just(Rel::Lt),
        Just(Rel::Le),
        Just(Rel::Gt),
        Just(Rel::Ge)
    ];
    (rel, term.clone(), term.clone(), term).prop_map(|(r, a, b, k)| BExp::cmp(r, AExp::add(a, k), b))
}

proptest! {
    #[test]
    fn sat_models_validate(atoms in prop::collection::vec(atom(), 0..5)) {
        let k = Constraint::of(atoms);
        if let SatResult::Sat(rho) = check_sat_builtin(&k, 8) {
            prop_assert!(validate_model(&k, &rho));
        }
    }

    #[test]
    fn larger_box_keeps_models(atoms in prop::collection::vec(atom(), 0..5)) {
        let k = Constraint::of(atoms);
        if check_sat_builtin(&k, 4).is_sat() {
            prop_assert!(check_sat_builtin(&k, 9).is_sat());
        }
    }

    #[test]
    fn unsat_means_no_small_model(atoms in prop::collection::vec(atom(), 0..4)) {
        let k = Constraint::of(atoms);
        if check_sat_builtin(&k, 8).is_unsat() {
            for a in -6..=6 {
                for b in -6..=6 {
                    for c in -6..=6 {
                        let rho = Evaluation::new()
                            .with(x(1), Value::Int(a))
                            .with(x(2), Value::Int(b))
                            .with(x(3), Value::Int(c));
                        prop_assert!(!validate_model(&k, &rho));
                    }
                }
            }
        }
    }
}
