use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::*;
use crate::symbolic::{parse_guard, parse_letter, GuardedLetter, Letter, TagAtom};

fn l(s: &str) -> Letter {
    parse_letter(s).unwrap()
}

fn gl(guard: &str, letter: &str) -> GuardedLetter {
    GuardedLetter::new(parse_guard(guard).unwrap(), l(letter))
}

fn w(ls: &[&str]) -> SymAutomaton {
    word(ls.iter().map(|s| GuardedLetter::plain(l(s))))
}

fn word_set(a: &SymAutomaton, n: usize) -> BTreeSet<String> {
    words(a, n)
        .into_iter()
        .map(|w| w.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(" "))
        .collect()
}

/// Traces as multisets: trailing acceptance guards move in front of the last letter.
fn bags(a: &SymAutomaton, n: usize) -> BTreeSet<Vec<TraceItem>> {
    traces(a, n)
        .into_iter()
        .map(|mut t| {
            t.sort();
            t
        })
        .collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

#[test]
fn constants() {
    assert_eq!(word_set(&letter(gl("tt", "q")), 4), set(&["q"]));
    assert!(word_set(&empty(), 4).is_empty());
    assert_eq!(word_set(&epsilon(), 4), set(&[""]));
    let e = enumerate_paths(&epsilon(), 4);
    assert_eq!(e.len(), 1);
    assert!(e[0].trace(&epsilon()).is_empty());
}

#[test]
fn regular_operations() {
    let rd = concat(&letter(gl("tt", "run")), &letter(gl("tt", "done")));
    assert_eq!(word_set(&rd, 4), set(&["run done"]));

    let s = star(&letter(gl("<X1> > 0", "q")));
    let ts = traces(&s, 3);
    assert_eq!(ts.len(), 4);
    for t in &ts {
        let letters = t.iter().filter(|i| matches!(i, TraceItem::Letter(_))).count();
        assert_eq!(t.len(), 2 * letters);
    }

    let u = union(&epsilon(), &letter(gl("tt", "q")));
    assert_eq!(word_set(&u, 4), set(&["", "q"]));
}

#[test]
fn intersection() {
    let a = union(&w(&["run", "done"]), &w(&["q", "0"]));
    assert_eq!(traces(&intersect(&a, &a), 6), traces(&a, 6));
    let none = intersect(&letter(gl("tt", "run")), &letter(gl("tt", "done")));
    assert!(words(&none, 4).is_empty());

    let g = intersect(&letter(gl("<X1> > 0", "q")), &letter(gl("<X2> < 3", "q")));
    let p = enumerate_paths(&g, 2);
    assert_eq!(p.len(), 1);
    assert_eq!(g.transitions[p[0].transitions[0]].guard.to_string(), "<X1> > 0 and <X2> < 3");
}

#[test]
fn interleaving() {
    let a = w(&["run", "done"]);
    assert_eq!(traces(&shuffle(&a, &epsilon()), 6), traces(&a, 6));
    let ab = shuffle(&w(&["q"]), &w(&["run"]));
    assert_eq!(word_set(&ab, 4), set(&["q run", "run q"]));
    let b = w(&["q", "5"]);
    assert!(shuffle(&a, &b).num_states() <= a.num_states() * b.num_states());
}

#[test]
fn renaming() {
    let r = rename(&w(&["run", "done"]), &[TagAtom::Arg(1)]);
    assert_eq!(word_set(&r, 4), set(&["run^{1} done^{1}"]));
    let e = rename(&w(&["q", "q^{x}", "?X1^{x}", "<X1>"]), &[TagAtom::Arg(2)]);
    assert_eq!(word_set(&e, 5), set(&["q^{2} q^{x} ?X1^{x} <X1>^{2}"]));
}

#[test]
fn restriction() {
    let a = w(&["run", "read^{x}", "?X1^{x}", "done"]);
    assert_eq!(restrict(&a, |_| false), a);
    let hidden = restrict(&a, |l| l.belongs_to("x"));
    assert_eq!(word_set(&hidden, 4), set(&["run done"]));
    let t = traces(&hidden, 4).into_iter().next().unwrap();
    assert!(t.contains(&TraceItem::Step(GuardStep::Fresh(crate::symbolic::SymName::int(1)))));

    let b = restrict(&letter(gl("<X1> > 0", "q")), |_| true);
    let e = eliminate_epsilon(&b).unwrap();
    let p = enumerate_paths(&e, 0);
    assert_eq!(p.len(), 1);
    assert_eq!(p[0].letters(&e).count(), 0);
    assert_eq!(e.transitions[p[0].transitions[0]].guard.to_string(), "<X1> > 0");
}

#[test]
fn single_absorption() {
    let mut a = SymAutomaton::new();
    let s = a.add_state();
    let f = a.add_state();
    a.add_letter(0, l("run^{x}"), s);
    a.add_epsilon(s, parse_guard("<X1> > 0").unwrap(), f);
    a.add_final(f);
    let e = eliminate_epsilon(&a).unwrap();
    assert!(e.is_epsilon_free());
    let paths = enumerate_paths(&e, 2);
    assert_eq!(paths.len(), 1);
    let t = &e.transitions[paths[0].transitions[0]];
    assert_eq!(GuardedLetter::new(t.guard.clone(), t.label.clone().unwrap()).to_string(), "[<X1> > 0] run^{x}");
    assert_eq!(bags(&e, 4), bags(&a, 4));
}

#[test]
fn trailing_guard_keeps_binder_visible() {
    let mut a = SymAutomaton::new();
    let s = a.add_state();
    let f = a.add_state();
    a.add_letter(0, l("?X1^{x}"), s);
    a.add_epsilon(s, parse_guard("<X1> > 0").unwrap(), f);
    a.add_final(f);
    let e = eliminate_epsilon(&a).unwrap();
    assert_eq!(bags(&e, 4), bags(&a, 4));
    let t = e.transitions.iter().find(|t| e.is_final(t.dst)).unwrap();
    assert_eq!(t.guard.to_string(), "?X1 and <X1> > 0");
}

#[test]
fn binding_epsilon_cycle_rejected() {
    let mut a = SymAutomaton::new();
    let s = a.add_state();
    a.add_letter(0, l("run"), s);
    a.add_epsilon(s, parse_guard("?X1").unwrap(), s);
    a.add_letter(s, l("done"), 0);
    a.add_final(0);
    assert_eq!(eliminate_epsilon(&a), Err(AutomatonError::BindingEpsilonCycle(s)));

    let mut b = SymAutomaton::new();
    b.add_epsilon(0, parse_guard("<X1> > 0").unwrap(), 0);
    b.add_letter(0, l("q"), 0);
    b.add_final(0);
    assert!(eliminate_epsilon(&b).is_ok());
}

/// Accepted words of length `n` by subset simulation with ε-closure.
fn closure_words(a: &SymAutomaton, alphabet: &[Letter], n: usize) -> BTreeSet<Vec<Letter>> {
    let closure = |set: BTreeSet<StateId>| {
        let mut set = set;
        loop {
            let more: BTreeSet<StateId> = a
                .transitions
                .iter()
                .filter(|t| t.label.is_none() && set.contains(&t.src))
                .map(|t| t.dst)
                .collect();
            if more.is_subset(&set) {
                return set;
            }
            set.extend(more);
        }
    };
    let mut result = BTreeSet::new();
    let mut frontier = vec![(Vec::new(), closure(BTreeSet::from([a.initial])))];
    for _ in 0..=n {
        let mut next = Vec::new();
        for (w, states) in frontier {
            if states.iter().any(|s| a.is_final(*s)) {
                result.insert(w.clone());
            }
            for x in alphabet {
                let succ: BTreeSet<StateId> = a
                    .transitions
                    .iter()
                    .filter(|t| t.label.as_ref() == Some(x) && states.contains(&t.src))
                    .map(|t| t.dst)
                    .collect();
                if !succ.is_empty() {
                    let mut w2 = w.clone();
                    w2.push(x.clone());
                    next.push((w2, closure(succ)));
                }
            }
        }
        frontier = next;
    }
    result
}

#[test]
fn guard_free_elimination_matches_epsilon_closure() {
    let mut rng = StdRng::seed_from_u64(7);
    let alphabet = [l("run^{x}"), l("done^{x}")];
    for _ in 0..5 {
        let mut a = SymAutomaton::new();
        for _ in 1..6 {
            a.add_state();
        }
        for _ in 0..12 {
            let (s, d) = (rng.gen_range(0..6), rng.gen_range(0..6));
            let label = match rng.gen_range(0..3) {
                0 => None,
                k => Some(alphabet[k - 1].clone()),
            };
            a.add(s, Guard::tt(), label, d);
        }
        a.add_final(rng.gen_range(0..6));
        let e = eliminate_epsilon(&a).unwrap();
        assert!(e.is_epsilon_free());
        assert_eq!(words(&e, 5), closure_words(&a, &alphabet, 5));
        assert_eq!(traces(&e, 5), traces(&a, 5));
    }
}

#[test]
fn pruning() {
    let a = w(&["run", "done"]);
    assert_eq!(a.prune_unreachable(), a);
    let mut b = a.clone();
    let iso = b.add_state();
    b.add_letter(iso, l("q"), iso);
    let p = b.prune_unreachable();
    assert_eq!(p.num_states(), 3);
    assert_eq!(traces(&p, 6), traces(&b, 6));
}

/// The `;` strategy with both arguments tagged.
fn seq_strategy() -> SymAutomaton {
    w(&["run", "run^{1}", "done^{1}", "run^{2}", "done^{2}", "done"])
}

#[test]
fn skip_then_skip() {
    let skip = w(&["run", "done"]);
    let one = compose(&seq_strategy(), &rename(&skip, &[TagAtom::Arg(1)]), &[TagAtom::Arg(1)]).unwrap();
    let two = compose(&one, &rename(&skip, &[TagAtom::Arg(2)]), &[TagAtom::Arg(2)]).unwrap();
    let r = eliminate_epsilon(&two).unwrap().trim();
    assert_eq!(word_set(&r, 6), set(&["run done"]));
    assert!(r
        .letters()
        .iter()
        .all(|l| !matches!(l.head_tag(), Some(TagAtom::Arg(_)))));
}

#[test]
fn assignment_of_constant_folds_into_payload() {
    let assign = w(&["run", "q^{2}", "?X1^{2}", "write(<X1>)^{1}", "ok^{1}", "done"]);
    let one = rename(&w(&["q", "1"]), &[TagAtom::Arg(2)]);
    let c = compose(&assign, &one, &[TagAtom::Arg(2)]).unwrap();
    let r = eliminate_epsilon(&c).unwrap().trim().simplify();
    assert_eq!(word_set(&r, 6), set(&["run write(1)^{1} ok^{1} done"]));
    assert!(r.transitions.iter().all(|t| t.guard.is_tt()));
}

#[test]
fn composition_with_guarded_argument() {
    // f may call its argument repeatedly; the argument checks x against y.
    let f = {
        let mut a = SymAutomaton::new();
        let s1 = a.add_state();
        let s2 = a.add_state();
        let s3 = a.add_state();
        let s4 = a.add_state();
        a.add_letter(0, l("run"), s1);
        a.add_letter(s1, l("run^{f}"), s2);
        a.add_letter(s2, l("run^{f,1}"), s3);
        a.add_letter(s3, l("run^{1}"), s4);
        a.add_letter(s4, l("done^{1}"), s4 + 1);
        let s5 = a.add_state();
        a.add_letter(s5, l("done^{f,1}"), s2);
        let s6 = a.add_state();
        let s7 = a.add_state();
        a.add_letter(s2, l("done^{f}"), s6);
        a.add_letter(s6, l("done"), s7);
        a.add_final(s7);
        a
    };
    let arg = {
        let mut a = SymAutomaton::new();
        let s: Vec<_> = (0..3).map(|_| a.add_state()).collect();
        a.add_letter(0, l("run"), s[0]);
        a.add_letter(s[0], l("q^{x}"), s[1]);
        a.add_letter(s[1], l("?X1^{x}"), s[2]);
        let s3 = a.add_state();
        let s4 = a.add_state();
        a.add_letter(s[2], l("q^{y}"), s3);
        a.add_letter(s3, l("?X2^{y}"), s4);
        let ab1 = a.add_state();
        let ab2 = a.add_state();
        let fin = a.add_state();
        a.add(s4, parse_guard("<X1> != <X2>").unwrap(), Some(l("run^{abort}")), ab1);
        a.add_letter(ab1, l("done^{abort}"), ab2);
        a.add_letter(ab2, l("done"), fin);
        a.add(s4, parse_guard("<X1> = <X2>").unwrap(), Some(l("done")), fin);
        a.add_final(fin);
        a
    };
    let tag = [TagAtom::Arg(1)];
    let product = compose(&f, &rename(&arg, &tag), &tag).unwrap();
    let flat = compose_flat(&f, &rename(&arg, &tag), &tag).unwrap();
    let p = eliminate_epsilon(&product).unwrap().trim();
    let q = eliminate_epsilon(&flat).unwrap().trim();
    assert_eq!(traces(&p, 12), traces(&q, 12));
    let ws = word_set(&p, 12);
    assert!(ws.contains("run run^{f} done^{f} done"));
    assert!(ws.contains(
        "run run^{f} run^{f,1} q^{x} ?X1^{x} q^{y} ?X2^{y} run^{abort} done^{abort} done^{f,1} done^{f} done"
    ));
    assert!(p.letters().iter().all(|l| l.head_tag() != Some(&TagAtom::Arg(1))));
}

#[test]
fn flat_composition_conflates_return_points() {
    // Two call sites return to different continuations.
    let a1 = w(&["run", "run^{1}", "done^{1}", "q", "run^{1}", "done^{1}", "done"]);
    let a2 = rename(&w(&["run", "done"]), &[TagAtom::Arg(1)]);
    let tag = [TagAtom::Arg(1)];
    let p = eliminate_epsilon(&compose(&a1, &a2, &tag).unwrap()).unwrap().trim();
    let f = eliminate_epsilon(&compose_flat(&a1, &a2, &tag).unwrap()).unwrap().trim();
    assert_eq!(word_set(&p, 8), set(&["run q done"]));
    assert!(word_set(&f, 8).contains("run done"));
}

#[test]
fn dot_round_trip() {
    let mut a = w(&["run", "q^{x}", "?X1^{x}", "done"]);
    a.transitions[3].guard = parse_guard("<X1> > 0 and ?X2 <- (<X1> + 1)").unwrap();
    a.add_epsilon(1, parse_guard("<X1> = 2").unwrap(), 2);
    a.transitions.sort();
    let text = to_dot(&a);
    assert!(text.contains("doublecircle"));
    let b = parse_dot(&text).unwrap();
    assert_eq!(b, a);
    assert_eq!(to_dot(&b), text);
}

#[test]
fn quotient_merges_equal_branches() {
    let a = union(&w(&["run", "done"]), &w(&["run", "done"]));
    let e = eliminate_epsilon(&a).unwrap().trim();
    let q = bisimulation_quotient(&e);
    assert_eq!(q.num_states(), 3);
    assert_eq!(traces(&q, 4), traces(&e, 4));
}

#[test]
fn simplify_drops_false_guards() {
    let mut a = SymAutomaton::new();
    let f = a.add_state();
    a.add(0, parse_guard("1 > 2").unwrap(), Some(l("q")), f);
    a.add(0, parse_guard("1 < 2 and <X1> = 0").unwrap(), Some(l("run")), f);
    a.add_final(f);
    let s = a.simplify();
    assert_eq!(s.transitions.len(), 1);
    assert_eq!(s.transitions[0].guard.to_string(), "<X1> = 0");
}
