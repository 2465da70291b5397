// SPDX-License-Identifier: Apache-2.0
//! Partially ordered NFAs: residual merging and depth-bounded witness search.

use serde::Serialize;

use crate::automata::{
    common_alphabet, determinize, explore_product, minimize, shortest_word, Automaton, Dfa,
    State, Word, DEFAULT_PRODUCT_CAP,
};
use crate::classify::{depth, is_partially_ordered};
use crate::error::{Error, Result};

/// Default cap on subset construction when comparing residuals.
pub const RESIDUAL_CAP: usize = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MergeKind {
    /// Neither state reaches the other.
    Incomparable,
    /// One state reaches the other; its outgoing transitions were dropped
    /// before merging.
    Comparable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MergeEvent {
    pub kind: MergeKind,
    /// State ids at the time of the merge.
    pub pair: (State, State),
    /// Id of the merged state in the automaton right after the merge.
    pub result: State,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MergeTrace {
    pub events: Vec<MergeEvent>,
}

fn residual_dfa(a: &Automaton, q: State, cap: usize) -> Result<Dfa> {
    Ok(minimize(&determinize(&a.with_initials(&[q])?, cap)?))
}

/// `L(_q1 A) = L(_q2 A)`, compared through minimal DFAs.
pub fn residual_equal(a: &Automaton, q1: State, q2: State, cap: usize) -> Result<bool> {
    if q1 == q2 {
        return Ok(true);
    }
    Ok(residual_dfa(a, q1, cap)? == residual_dfa(a, q2, cap)?)
}

/// Drops states that are unreachable or cannot reach a final state. An empty
/// language becomes a single rejecting state.
fn trim(a: &Automaton) -> Result<Automaton> {
    let r = a.reachable();
    let c = a.coreachable();
    let keep: Vec<bool> = r.iter().zip(&c).map(|(&x, &y)| x && y).collect();
    if !a.initials().iter().any(|&q| keep[q]) {
        let mut out = Automaton::trivial(a.alphabet().clone(), false);
        if let Some(name) = a.name() {
            out = out.with_name(name);
        }
        return Ok(out);
    }
    a.retain_states(&keep)
}

/// Merges `drop` into `keep` (`keep < drop`): the union of outgoing edges,
/// in-edges redirected, initial or final if either was.
fn merge(a: &Automaton, keep: State, drop: State) -> Result<Automaton> {
    let n = a.state_count();
    let map = |q: State| {
        let q = if q == drop { keep } else { q };
        if q > drop {
            q - 1
        } else {
            q
        }
    };
    let mut b = Automaton::builder(a.alphabet().clone(), n - 1);
    for (p, x, q) in a.edges() {
        b.add_edge(map(p), x, map(q));
    }
    for &q in a.initials() {
        b.add_initial(map(q));
    }
    for q in a.finals() {
        b.add_accepting(map(q));
    }
    let mut out = b.build()?;
    if let Some(name) = a.name() {
        out = out.with_name(name);
    }
    Ok(out)
}

fn strip_outgoing(a: &Automaton, q: State) -> Result<Automaton> {
    let mut b = Automaton::builder(a.alphabet().clone(), a.state_count());
    for (p, x, r) in a.edges() {
        if p != q {
            b.add_edge(p, x, r);
        }
    }
    for &i in a.initials() {
        b.add_initial(i);
    }
    for f in a.finals() {
        b.add_accepting(f);
    }
    b.build()
}

/// Next residual-equal pair: lowest indices first, incomparable pairs before
/// comparable ones.
fn find_pair(a: &Automaton, cap: usize) -> Result<Option<(MergeKind, State, State)>> {
    let n = a.state_count();
    let residuals = (0..n)
        .map(|q| residual_dfa(a, q, cap))
        .collect::<Result<Vec<_>>>()?;
    let reach = a.reachability_matrix();
    let mut comparable = None;
    for i in 0..n {
        for j in i + 1..n {
            if residuals[i] != residuals[j] {
                continue;
            }
            if !reach[i][j] && !reach[j][i] {
                return Ok(Some((MergeKind::Incomparable, i, j)));
            }
            if comparable.is_none() {
                comparable = Some((MergeKind::Comparable, i, j));
            }
        }
    }
    Ok(comparable)
}

/// Applies the two residual merges until all residuals are distinct, then
/// trims. The result accepts the same language and is partially ordered; it
/// is not claimed to be a minimum poNFA.
pub fn ponfa_merge_minimize(a: &Automaton) -> Result<(Automaton, MergeTrace)> {
    if !is_partially_ordered(a) {
        return Err(Error::NotPartiallyOrdered);
    }
    let mut cur = trim(a)?;
    let mut trace = MergeTrace::default();
    while let Some((kind, i, j)) = find_pair(&cur, RESIDUAL_CAP)? {
        let reach = cur.reachability_matrix();
        let base = match kind {
            MergeKind::Incomparable => cur.clone(),
            // the state that reaches the other loses its outgoing edges
            MergeKind::Comparable if reach[i][j] => strip_outgoing(&cur, i)?,
            MergeKind::Comparable => strip_outgoing(&cur, j)?,
        };
        cur = merge(&base, i, j)?;
        trace.events.push(MergeEvent {
            kind,
            pair: (i, j),
            result: i,
        });
        debug_assert!(is_partially_ordered(&cur));
    }
    let out = trim(&cur)?;
    Ok((out, trace))
}

/// Per-automaton witness length bound: the depth of a partially ordered
/// automaton, otherwise the state count of a deterministic one.
pub fn automaton_bound(a: &Automaton) -> Result<usize> {
    if is_partially_ordered(a) {
        depth(a)
    } else if a.is_deterministic() {
        Ok(a.state_count())
    } else {
        Err(Error::PromiseViolation(
            "automaton is neither partially ordered nor deterministic".into(),
        ))
    }
}

/// Sum of [`automaton_bound`] over the list.
pub fn witness_bound(list: &[Automaton]) -> Result<usize> {
    common_alphabet(list)?;
    list.iter().map(automaton_bound).sum()
}

/// Shortest common word of length at most [`witness_bound`]. `None` means
/// empty only when every language is in the level the bound assumes.
pub fn bounded_witness_ine(list: &[Automaton], cap: usize) -> Result<Option<Word>> {
    let bound = witness_bound(list)?;
    let p = explore_product(list, Some(bound), cap)?;
    Ok(shortest_word(&p))
}

/// [`bounded_witness_ine`] with the default product cap.
pub fn bounded_witness(list: &[Automaton]) -> Result<Option<Word>> {
    bounded_witness_ine(list, DEFAULT_PRODUCT_CAP)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{equivalent, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    #[test]
    fn residual_examples() {
        // 0 -a-> 1, 0 -b-> 2, 1 and 2 final sinks, 3 non-final sink
        let a = Automaton::builder(ab(), 4)
            .initial(0)
            .accepting(1)
            .accepting(2)
            .edge(0, 0, 1)
            .edge(0, 1, 2)
            .edge_all(1, 1)
            .edge_all(2, 2)
            .edge_all(3, 3)
            .build()
            .unwrap();
        assert!(residual_equal(&a, 0, 0, 100).unwrap());
        assert!(residual_equal(&a, 1, 2, 100).unwrap());
        assert!(!residual_equal(&a, 1, 3, 100).unwrap());
    }

    #[test]
    fn identical_sinks_merge() {
        let a = Automaton::builder(ab(), 3)
            .initial(0)
            .accepting(1)
            .accepting(2)
            .edge(0, 0, 1)
            .edge(0, 1, 2)
            .edge_all(1, 1)
            .edge_all(2, 2)
            .build()
            .unwrap();
        let (m, trace) = ponfa_merge_minimize(&a).unwrap();
        assert_eq!(m.state_count(), 2);
        assert_eq!(trace.events.len(), 1);
        assert_eq!(trace.events[0].kind, MergeKind::Incomparable);
        assert_eq!(trace.events[0].pair, (1, 2));
        assert!(equivalent(&a, &m, 1000).unwrap());
    }

    #[test]
    fn comparable_merge_on_a_path() {
        // 0 -a-> 1 -a-> 2, where 1 and 2 both accept a*
        let a = Automaton::builder(ab(), 3)
            .initial(0)
            .accepting(1)
            .accepting(2)
            .edge(0, 0, 1)
            .edge(1, 0, 2)
            .edge(1, 0, 1)
            .edge(2, 0, 2)
            .build()
            .unwrap();
        let (m, trace) = ponfa_merge_minimize(&a).unwrap();
        assert_eq!(trace.events[0].kind, MergeKind::Comparable);
        assert_eq!(m.state_count(), 2);
        assert!(is_partially_ordered(&m));
        assert!(equivalent(&a, &m, 1000).unwrap());
    }

    #[test]
    fn distinct_residuals_are_left_alone() {
        let a = Automaton::from_word(ab(), &[0, 1]).unwrap();
        let (m, trace) = ponfa_merge_minimize(&a).unwrap();
        assert!(trace.events.is_empty());
        assert_eq!(m, a);
    }

    #[test]
    fn cycles_are_rejected() {
        let a = Automaton::builder(ab(), 2)
            .initial(0)
            .edge(0, 0, 1)
            .edge(1, 0, 0)
            .build()
            .unwrap();
        assert!(matches!(ponfa_merge_minimize(&a), Err(Error::NotPartiallyOrdered)));
    }

    #[test]
    fn bounds() {
        let w = Automaton::from_word(ab(), &[0, 1]).unwrap();
        let w3 = Automaton::from_word(ab(), &[0, 1, 1]).unwrap();
        assert_eq!(witness_bound(&[w.clone(), w3]).unwrap(), 5);
        let parity = Automaton::builder(Alphabet::from_chars("a").unwrap(), 2)
            .initial(0)
            .accepting(0)
            .edge(0, 0, 1)
            .edge(1, 0, 0)
            .build()
            .unwrap();
        assert_eq!(witness_bound(&[parity]).unwrap(), 2);
        let empty = Automaton::trivial(ab(), false);
        assert_eq!(bounded_witness(&[empty]).unwrap(), None);
        assert_eq!(bounded_witness(&[w]).unwrap(), Some(vec![0, 1]));
    }
}
