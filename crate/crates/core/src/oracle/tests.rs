use super::*;
use crate::semantics::{interpret_judgement, Options};
use crate::syntax::load;

fn both(src: &str, n: usize, max_len: usize) -> (BTreeSet<Vec<Letter>>, BTreeSet<Vec<Letter>>) {
    let j = load(src).unwrap();
    let s = interpret_judgement(&j, Options::default()).unwrap();
    let c = interpret_concrete(&j.ctx, &j.term, &j.ty, n).unwrap();
    (gamma(&s, n, max_len), c.words(max_len))
}

fn rendered(ws: &BTreeSet<Vec<Letter>>) -> BTreeSet<String> {
    ws.iter().map(|w| render_word(w)).collect()
}

fn agree(src: &str, n: usize, max_len: usize) {
    let (g, c) = both(src, n, max_len);
    let d = language_diff(&g, &c, max_len);
    assert!(
        d.is_empty(),
        "{src} (n = {n}):\n only symbolic: {:?}\n only concrete: {:?}",
        d.only_left.iter().map(|w| render_word(w)).collect::<Vec<_>>(),
        d.only_right.iter().map(|w| render_word(w)).collect::<Vec<_>>()
    );
    assert!(!g.is_empty(), "{src} (n = {n}) has no words");
}

#[test]
fn boolean_identifier_copies_its_value() {
    let (g, c) = both("x : expbool |- x : expbool", 2, 6);
    let expected: BTreeSet<String> = ["q q^{x} ff^{x} ff", "q q^{x} tt^{x} tt"].iter().map(|s| s.to_string()).collect();
    assert_eq!(rendered(&g), expected);
    assert_eq!(rendered(&c), expected);
}

#[test]
fn skip_ignores_the_domain() {
    for n in 1..4 {
        let (g, c) = both("|- skip : com", n, 4);
        assert_eq!(rendered(&g), rendered(&c));
        assert_eq!(rendered(&g).into_iter().collect::<Vec<_>>(), ["run done"]);
    }
}

#[test]
fn constant_outside_the_domain_is_dropped() {
    let (g, c) = both("|- 5 : expint", 6, 4);
    assert_eq!(rendered(&c).into_iter().collect::<Vec<_>>(), ["q 5"]);
    assert_eq!(g, c);
    let (g, c) = both("|- 5 : expint", 3, 4);
    assert!(g.is_empty() && c.is_empty());
}

#[test]
fn inequality_guard_matches_concrete_branching() {
    let src = "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com";
    let (g, c) = both(src, 2, 12);
    assert!(language_equal(&g, &c, 12));
    let r = rendered(&c);
    assert!(r.contains("run run^{f} done^{f} done"));
    assert!(r.contains(
        "run run^{f} run^{f,1} q^{x} 0^{x} q^{y} 1^{y} run^{abort} done^{abort} done^{f,1} done^{f} done"
    ));
    assert!(!r.contains(
        "run run^{f} run^{f,1} q^{x} 1^{x} q^{y} 1^{y} run^{abort} done^{abort} done^{f,1} done^{f} done"
    ));
}

#[test]
fn local_cell_reaches_abort() {
    let src = "abort : com |- new_int x := 0 in x := 1; if !x = 1 then abort : com";
    let j = load(src).unwrap();
    let c = interpret_concrete(&j.ctx, &j.term, &j.ty, 2).unwrap();
    assert!(rendered(&c.words(4)).contains("run run^{abort} done^{abort} done"));
    agree(src, 2, 6);
}

#[test]
fn identical_sets_are_equal() {
    let (g, _) = both("x : expint |- x + 1 : expint", 3, 6);
    assert!(language_equal(&g, &g, 6));
}

#[test]
fn small_corpus_agrees() {
    for src in [
        "x : expint |- x + 1 : expint",
        "c : com, v : varint |- c; v := !v + 1 : com",
        "b : expbool, c : com |- while b do c : com",
        "f : expint -> expint, x : expint |- f (x + 1) : expint",
        "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; if (x > 0) then abort : com",
    ] {
        agree(src, 2, 12);
        agree(src, 3, 12);
    }
}

#[test]
fn wide_corpus_agrees() {
    for src in [
        "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com",
        "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; if (x > 1) then abort : com",
        "v : varint, c : com |- if !v > 0 then { v := !v - 1; c } else c : com",
        "abort : com |- new_int a[3] := 0 in a[1] := 1; if a[1] + a[0] = 1 then abort : com",
        "x[k] : varint, y : expint, abort : com |- new_int i := 0 in new_int p := y in \
         while (i < k) do { if (x[i] = p) then abort; i := i + 1 } : com",
        "f : varint -> com, abort : com |- new_int x := 0 in f x; if !x = 1 then abort : com",
        "g : expint -> com -> com, v : varint |- g (!v) (v := !v + 1) : com",
        "|- \\c : com . c; c : com -> com",
        "b : expbool, c : com |- new_bool t := true in t := not b; if !t then c : com",
        "x : expint, y : expint |- x * y % 2 : expint",
    ] {
        for n in [2, 3] {
            agree(src, n, 14);
        }
    }
}


#[test]
fn symbolic_counterexamples_are_concrete_plays() {
    use crate::safety::{check_safety, Verdict};
    use crate::solver::Solver;
    for src in [
        "f : com -> com, abort : com, x : expint, y : expint |- f (if x != y then abort) : com",
        "N : expint, abort : com |- new_int x := 0 in while (x < N) do x := x + 1; if (x > 1) then abort : com",
    ] {
        let j = load(src).unwrap();
        let s = interpret_judgement(&j, Options::default()).unwrap();
        let Verdict::Unsafe { concrete, .. } = check_safety(&s, &Solver::default(), 16) else {
            panic!("{src}")
        };
        let c = interpret_concrete(&j.ctx, &j.term, &j.ty, 4).unwrap();
        assert!(c.words(concrete.len()).contains(&concrete), "{src}");
    }
}
