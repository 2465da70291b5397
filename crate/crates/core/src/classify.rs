// SPDX-License-Identifier: Apache-2.0
//! Structural properties of automata and the promise level they suggest.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::automata::{
    complement, determinize, is_finite, minimize, Automaton, Dfa, State, DEFAULT_DETERMINIZE_CAP,
};
use crate::error::{Error, Result};

/// Default cap on the size of an enumerated transition monoid.
pub const DEFAULT_MONOID_CAP: usize = 1_000_000;

/// True iff the reachability preorder is a partial order: the only cycles
/// are self-loops.
pub fn is_partially_ordered(aut: &Automaton) -> bool {
    topological_order(aut).is_some()
}

/// Successor lists without self-loops.
fn strict_successors(aut: &Automaton) -> Vec<Vec<State>> {
    (0..aut.state_count())
        .map(|p| {
            let mut v: Vec<State> = aut
                .alphabet()
                .letters()
                .flat_map(|a| aut.successors(p, a).iter().copied())
                .filter(|&q| q != p)
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect()
}

/// Kahn's algorithm on the self-loop-free state graph.
fn topological_order(aut: &Automaton) -> Option<Vec<State>> {
    let succ = strict_successors(aut);
    let n = aut.state_count();
    let mut indegree = vec![0usize; n];
    for qs in &succ {
        for &q in qs {
            indegree[q] += 1;
        }
    }
    let mut queue: VecDeque<State> = (0..n).filter(|&q| indegree[q] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(p) = queue.pop_front() {
        order.push(p);
        for &q in &succ[p] {
            indegree[q] -= 1;
            if indegree[q] == 0 {
                queue.push_back(q);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Length in transitions of the longest self-loop-free path starting in an
/// initial state.
pub fn depth(aut: &Automaton) -> Result<usize> {
    let order = topological_order(aut).ok_or(Error::NotPartiallyOrdered)?;
    let succ = strict_successors(aut);
    let mut longest = vec![0usize; aut.state_count()];
    for &p in order.iter().rev() {
        longest[p] = succ[p].iter().map(|&q| longest[q] + 1).max().unwrap_or(0);
    }
    Ok(aut.initials().iter().map(|&q| longest[q]).max().unwrap_or(0))
}

/// For every state and pair of letters `a, b`, the states `δ(q, a)` and
/// `δ(q, b)` can be sent to a common state by one word over `{a, b}`.
pub fn is_confluent(d: &Dfa) -> bool {
    let n = d.state_count();
    let k = d.alphabet().len();
    for a in 0..k {
        for b in a + 1..k {
            // pairs (p, r) from which some word over {a, b} reaches the diagonal
            let mut good = vec![false; n * n];
            let mut preds: Vec<Vec<usize>> = vec![Vec::new(); n * n];
            for p in 0..n {
                for r in 0..n {
                    for c in [a, b] {
                        let next = d.next(p, c) * n + d.next(r, c);
                        preds[next].push(p * n + r);
                    }
                }
            }
            let mut queue: VecDeque<usize> = (0..n).map(|p| p * n + p).collect();
            for &i in &queue {
                good[i] = true;
            }
            while let Some(i) = queue.pop_front() {
                for &j in &preds[i] {
                    if !good[j] {
                        good[j] = true;
                        queue.push_back(j);
                    }
                }
            }
            if (0..n).any(|q| !good[d.next(q, a) * n + d.next(q, b)]) {
                return false;
            }
        }
    }
    true
}

/// Letter maps commute pointwise. The check is only meaningful on a minimal
/// DFA, so other inputs are rejected.
pub fn is_commutative(d: &Dfa) -> Result<bool> {
    if minimize(d).state_count() != d.state_count() {
        return Err(Error::NotMinimal);
    }
    Ok(letters_commute(d))
}

pub(crate) fn letters_commute(d: &Dfa) -> bool {
    let k = d.alphabet().len();
    (0..d.state_count()).all(|q| {
        (0..k).all(|a| (a + 1..k).all(|b| d.run_from(q, &[a, b]) == d.run_from(q, &[b, a])))
    })
}

/// Enumerates the transition monoid generated by the letter maps. Returns
/// `None` when it has more than `cap` elements.
pub fn transition_monoid(d: &Dfa, cap: usize) -> Option<Vec<Vec<State>>> {
    let identity: Vec<State> = (0..d.state_count()).collect();
    let gens: Vec<Vec<State>> = d.alphabet().letters().map(|a| d.letter_map(a)).collect();
    let mut seen: HashSet<Vec<State>> = HashSet::from([identity.clone()]);
    let mut elems = vec![identity];
    let mut head = 0;
    while head < elems.len() {
        for g in &gens {
            let next: Vec<State> = elems[head].iter().map(|&q| g[q]).collect();
            if seen.insert(next.clone()) {
                if elems.len() >= cap {
                    return None;
                }
                elems.push(next);
            }
        }
        head += 1;
    }
    Some(elems)
}

/// No element of the transition monoid generates a nontrivial group:
/// `m^(k+1) = m^k` for some `k`. `None` when the monoid exceeds `cap`.
pub fn is_aperiodic(d: &Dfa, cap: usize) -> Option<bool> {
    let n = d.state_count();
    let monoid = transition_monoid(d, cap)?;
    Some(monoid.iter().all(|m| {
        // m^n lies in the cyclic part of m's powers
        let mut power = m.clone();
        for _ in 1..n.max(1) {
            power = power.iter().map(|&q| m[q]).collect();
        }
        let next: Vec<State> = power.iter().map(|&q| m[q]).collect();
        next == power
    }))
}

/// `L ⧢ Σ* ⊆ L`, decided as emptiness of the automaton with all self-loops
/// added intersected with the complement.
pub fn is_shuffle_ideal(d: &Dfa) -> bool {
    let up = d.with_all_self_loops();
    let comp = complement(d);
    let n = comp.state_count();
    let mut seen = vec![false; up.state_count() * n];
    let mut queue = VecDeque::new();
    for &p in up.initials() {
        let i = p * n + comp.initial();
        seen[i] = true;
        queue.push_back((p, comp.initial()));
    }
    while let Some((p, r)) = queue.pop_front() {
        if up.is_final(p) && comp.is_final(r) {
            return false;
        }
        for a in up.alphabet().letters() {
            let r2 = comp.next(r, a);
            for &p2 in up.successors(p, a) {
                let i = p2 * n + r2;
                if !seen[i] {
                    seen[i] = true;
                    queue.push_back((p2, r2));
                }
            }
        }
    }
    true
}

/// The minimal DFA is partially ordered and confluent.
pub fn is_piecewise_testable(d: &Dfa) -> bool {
    let m = minimize(d);
    is_partially_ordered(&m) && is_confluent(&m)
}

/// Coarsest promise level the classifier can certify.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Level {
    St0,
    StHalf,
    Dd0,
    St1Pt,
    Unknown,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::St0 => "ST0",
            Level::StHalf => "ST_HALF",
            Level::Dd0 => "DD0",
            Level::St1Pt => "ST1_PT",
            Level::Unknown => "UNKNOWN",
        })
    }
}

/// Structural flags of a language, computed on its minimal DFA.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassReport {
    pub partially_ordered: bool,
    pub confluent: bool,
    pub commutative: bool,
    pub finite: bool,
    pub cofinite: bool,
    pub aperiodic: Option<bool>,
    pub shuffle_ideal: bool,
    pub piecewise_testable: bool,
    pub suggested_level: Level,
    /// Whether the input automaton itself (not its minimal DFA) is
    /// partially ordered.
    pub input_partially_ordered: bool,
    pub minimal_dfa_states: usize,
}

impl fmt::Display for ClassReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let aperiodic = match self.aperiodic {
            Some(b) => b.to_string(),
            None => "unknown".to_string(),
        };
        writeln!(f, "partially_ordered={}", self.partially_ordered)?;
        writeln!(f, "confluent={}", self.confluent)?;
        writeln!(f, "commutative={}", self.commutative)?;
        writeln!(f, "finite={}", self.finite)?;
        writeln!(f, "cofinite={}", self.cofinite)?;
        writeln!(f, "aperiodic={aperiodic}")?;
        writeln!(f, "shuffle_ideal={}", self.shuffle_ideal)?;
        writeln!(f, "piecewise_testable={}", self.piecewise_testable)?;
        writeln!(f, "input_partially_ordered={}", self.input_partially_ordered)?;
        writeln!(f, "minimal_dfa_states={}", self.minimal_dfa_states)?;
        writeln!(f, "suggested_level={}", self.suggested_level)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassifyOptions {
    pub determinize_cap: usize,
    pub monoid_cap: usize,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            determinize_cap: DEFAULT_DETERMINIZE_CAP,
            monoid_cap: DEFAULT_MONOID_CAP,
        }
    }
}

pub fn classify(aut: &Automaton) -> Result<ClassReport> {
    classify_with(aut, &ClassifyOptions::default())
}

pub fn classify_with(aut: &Automaton, opts: &ClassifyOptions) -> Result<ClassReport> {
    let m = minimize(&determinize(aut, opts.determinize_cap)?);
    Ok(report_for_minimal(&m, is_partially_ordered(aut), opts.monoid_cap))
}

fn report_for_minimal(m: &Dfa, input_po: bool, monoid_cap: usize) -> ClassReport {
    let partially_ordered = is_partially_ordered(m);
    let confluent = is_confluent(m);
    let finite = is_finite(m);
    let cofinite = is_finite(&complement(m));
    let shuffle_ideal = is_shuffle_ideal(m);
    let piecewise_testable = partially_ordered && confluent;
    let trivial = m.state_count() == 1;
    let suggested_level = if trivial {
        Level::St0
    } else if shuffle_ideal {
        Level::StHalf
    } else if finite || cofinite {
        Level::Dd0
    } else if piecewise_testable {
        Level::St1Pt
    } else {
        Level::Unknown
    };
    ClassReport {
        partially_ordered,
        confluent,
        commutative: letters_commute(m),
        finite,
        cofinite,
        aperiodic: is_aperiodic(m, monoid_cap),
        shuffle_ideal,
        piecewise_testable,
        suggested_level,
        input_partially_ordered: input_po,
        minimal_dfa_states: m.state_count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{words_up_to, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn unary() -> Alphabet {
        Alphabet::from_chars("a").unwrap()
    }

    fn parity() -> Dfa {
        Dfa::from_table(unary(), &[vec![1], vec![0]], 0, &[true, false]).unwrap()
    }

    fn min_dfa(a: &Automaton) -> Dfa {
        minimize(&determinize(a, 1000).unwrap())
    }

    fn word_ab() -> Automaton {
        Automaton::from_word(ab(), &[0, 1]).unwrap()
    }

    #[test]
    fn partial_order() {
        let chain = Automaton::builder(ab(), 3)
            .initial(0)
            .edge_all(0, 0)
            .edge(0, 0, 1)
            .edge_all(1, 1)
            .edge(1, 1, 2)
            .build()
            .unwrap();
        assert!(is_partially_ordered(&chain));
        assert_eq!(depth(&chain).unwrap(), 2);
        assert!(!is_partially_ordered(&parity()));
        assert_eq!(depth(&parity()), Err(Error::NotPartiallyOrdered));
        assert_eq!(depth(&Automaton::trivial(ab(), true)).unwrap(), 0);
    }

    #[test]
    fn confluence() {
        assert!(is_confluent(&min_dfa(&Automaton::trivial(ab(), true))));
        assert!(is_confluent(&min_dfa(&Automaton::contains_letter(ab(), 0).unwrap())));
    }

    #[test]
    fn complete_dfa_for_word_ab_is_confluent() {
        // branches rejoin in the sink: (δ(0,a), δ(0,b)) = (1, sink) -a-> (sink, sink)
        assert!(is_confluent(&min_dfa(&word_ab())));
    }

    #[test]
    fn diverging_cycles_are_not_confluent() {
        // a and b lead to two distinct absorbing states
        let d = Dfa::from_table(ab(), &[vec![1, 2], vec![1, 1], vec![2, 2]], 0, &[false, true, false])
            .unwrap();
        assert!(!is_confluent(&d));
    }

    #[test]
    fn commutativity() {
        assert!(is_commutative(&parity()).unwrap());
        assert!(!is_commutative(&min_dfa(&word_ab())).unwrap());
        let redundant =
            Dfa::from_table(unary(), &[vec![1], vec![1]], 0, &[true, true]).unwrap();
        assert_eq!(is_commutative(&redundant), Err(Error::NotMinimal));
    }

    #[test]
    fn aperiodicity() {
        assert_eq!(is_aperiodic(&parity(), 100), Some(false));
        let sink = Dfa::from_table(ab(), &[vec![1, 1], vec![1, 1]], 0, &[false, true]).unwrap();
        assert_eq!(is_aperiodic(&sink, 100), Some(true));
        let contains_a = min_dfa(&Automaton::contains_letter(ab(), 0).unwrap());
        assert_eq!(is_aperiodic(&contains_a, 100), Some(true));
        assert_eq!(is_aperiodic(&contains_a, 1), None);
    }

    #[test]
    fn shuffle_ideals() {
        assert!(is_shuffle_ideal(&min_dfa(&Automaton::contains_letter(ab(), 0).unwrap())));
        let just_a = Automaton::from_word(ab(), &[0]).unwrap();
        assert!(!is_shuffle_ideal(&min_dfa(&just_a)));
        assert!(is_shuffle_ideal(&min_dfa(&Automaton::trivial(ab(), false))));
    }

    #[test]
    fn piecewise_testability() {
        assert!(is_piecewise_testable(&min_dfa(&word_ab())));
        let even = Dfa::from_table(unary(), &[vec![1], vec![0]], 0, &[true, false]).unwrap();
        assert!(!is_piecewise_testable(&even));
    }

    #[test]
    fn classify_levels() {
        let r = classify(&Automaton::trivial(ab(), true)).unwrap();
        assert_eq!(r.suggested_level, Level::St0);
        assert!(r.shuffle_ideal && r.cofinite && !r.finite);
        let r = classify(&Automaton::contains_letter(ab(), 0).unwrap()).unwrap();
        assert_eq!(r.suggested_level, Level::StHalf);
        let r = classify(&word_ab()).unwrap();
        assert_eq!(r.suggested_level, Level::Dd0);
        assert!(r.finite && r.piecewise_testable);
        let r = classify(&parity()).unwrap();
        assert_eq!(r.suggested_level, Level::Unknown);
        assert_eq!(r.aperiodic, Some(false));
    }

    #[test]
    fn report_prints_key_value_lines() {
        let r = classify(&Automaton::trivial(ab(), true)).unwrap();
        let text = r.to_string();
        assert!(text.contains("cofinite=true\n"));
        assert!(text.ends_with("suggested_level=ST0\n"));
    }

    #[test]
    fn commutativity_matches_transpositions() {
        for a in [word_ab(), Automaton::contains_letter(ab(), 1).unwrap()] {
            let d = min_dfa(&a);
            let brute = words_up_to(2, 5).all(|w| {
                (0..w.len().saturating_sub(1)).all(|i| {
                    let mut v = w.clone();
                    v.swap(i, i + 1);
                    d.accepts(&w).unwrap() == d.accepts(&v).unwrap()
                })
            });
            assert_eq!(is_commutative(&d).unwrap(), brute);
        }
    }
}
