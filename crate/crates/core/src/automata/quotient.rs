use std::collections::{BTreeMap, BTreeSet};

use super::{SymAutomaton, Transition};
use crate::symbolic::{Guard, Letter};

/// Merges strongly bisimilar states: states with the same finality whose
/// transitions carry the same guards and labels into equivalent states.
pub fn bisimulation_quotient(a: &SymAutomaton) -> SymAutomaton {
    let out = a.outgoing();
    let mut block: Vec<u32> = a.states().map(|s| a.is_final(s) as u32).collect();
    loop {
        type Sig<'a> = (u32, BTreeSet<(&'a Guard, &'a Option<Letter>, u32)>);
        let mut ids: BTreeMap<Sig, u32> = BTreeMap::new();
        let next: Vec<u32> = a
            .states()
            .map(|s| {
                let moves = out[s as usize]
                    .iter()
                    .map(|&i| {
                        let t = &a.transitions[i];
                        (&t.guard, &t.label, block[t.dst as usize])
                    })
                    .collect();
                let n = ids.len() as u32;
                *ids.entry((block[s as usize], moves)).or_insert(n)
            })
            .collect();
        let stable = ids.len() == block.iter().collect::<BTreeSet<_>>().len();
        block = next;
        if stable {
            break;
        }
    }
    let mut r = SymAutomaton {
        num_states: block.iter().max().map_or(1, |m| m + 1),
        initial: block[a.initial as usize],
        finals: a.finals.iter().map(|&f| block[f as usize]).collect(),
        transitions: a
            .transitions
            .iter()
            .map(|t| {
                Transition::new(
                    block[t.src as usize],
                    t.guard.clone(),
                    t.label.clone(),
                    block[t.dst as usize],
                )
            })
            .collect(),
    };
    r.transitions.sort();
    r.transitions.dedup();
    r.prune_unreachable()
}
