// SPDX-License-Identifier: Apache-2.0
//! Breadth-first searches: shortest words, products, finiteness.

use std::cell::Cell;
use std::collections::{HashMap, VecDeque};

use super::{common_alphabet, complement, determinize, Automaton, State, Word};
use crate::error::{Error, Result};

/// Default cap on the number of product states explored.
pub const DEFAULT_PRODUCT_CAP: usize = 1 << 20;

thread_local! {
    static PRODUCT_INVOCATIONS: Cell<usize> = const { Cell::new(0) };
}

/// Number of product explorations started on the current thread.
pub fn product_invocations() -> usize {
    PRODUCT_INVOCATIONS.with(Cell::get)
}

/// Lexicographically least among the shortest accepted words, or `None` if
/// the language is empty.
///
/// Backward distances to a final state fix the length; the word is then
/// extended greedily with the least letter that keeps a shortest completion.
pub fn shortest_word(aut: &Automaton) -> Option<Word> {
    let dist = distance_to_final(aut);
    let len = aut.initials().iter().filter_map(|&q| dist[q]).min()?;
    let mut current = aut.initials().to_vec();
    let mut word = Vec::with_capacity(len);
    for remaining in (0..len).rev() {
        let (a, next) = aut
            .alphabet()
            .letters()
            .map(|a| (a, aut.step(&current, a)))
            .find(|(_, next)| next.iter().any(|&q| dist[q] == Some(remaining)))
            .expect("a shortest completion exists");
        word.push(a);
        current = next;
    }
    Some(word)
}

fn distance_to_final(aut: &Automaton) -> Vec<Option<usize>> {
    let preds = aut.predecessors();
    let mut dist = vec![None; aut.state_count()];
    let mut queue = VecDeque::new();
    for q in aut.finals() {
        dist[q] = Some(0);
        queue.push_back(q);
    }
    while let Some(q) = queue.pop_front() {
        let d = dist[q].expect("queued states have a distance");
        for &p in &preds[q] {
            if dist[p].is_none() {
                dist[p] = Some(d + 1);
                queue.push_back(p);
            }
        }
    }
    dist
}

/// Explores the synchronous product of `automata` breadth-first from the
/// initial tuples, expanding tuples up to depth `max_depth` (all reachable
/// tuples when `None`). The result is an automaton whose states are the
/// explored tuples; words of length at most `max_depth` are accepted by it iff
/// they are accepted by every input.
pub fn explore_product(
    automata: &[Automaton],
    max_depth: Option<usize>,
    cap: usize,
) -> Result<Automaton> {
    let alphabet = common_alphabet(automata)?.clone();
    PRODUCT_INVOCATIONS.with(|c| c.set(c.get() + 1));
    let mut index: HashMap<Vec<State>, State> = HashMap::new();
    let mut tuples: Vec<Vec<State>> = Vec::new();
    let mut depth: Vec<usize> = Vec::new();
    let mut edges = Vec::new();

    let mut starts: Vec<Vec<State>> = vec![Vec::new()];
    for aut in automata {
        starts = starts
            .into_iter()
            .flat_map(|t| {
                aut.initials().iter().map(move |&q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
    }
    let mut queue = VecDeque::new();
    for t in starts {
        if tuples.len() >= cap {
            return Err(Error::CapExceeded {
                what: "product exploration",
                cap,
            });
        }
        index.insert(t.clone(), tuples.len());
        queue.push_back(tuples.len());
        tuples.push(t);
        depth.push(0);
    }
    while let Some(i) = queue.pop_front() {
        if max_depth.is_some_and(|m| depth[i] >= m) {
            continue;
        }
        for a in alphabet.letters() {
            let mut succs: Vec<Vec<State>> = vec![Vec::new()];
            for (aut, &q) in automata.iter().zip(&tuples[i]) {
                let options = aut.successors(q, a);
                if options.is_empty() {
                    succs.clear();
                    break;
                }
                succs = succs
                    .into_iter()
                    .flat_map(|t| {
                        options.iter().map(move |&r| {
                            let mut t = t.clone();
                            t.push(r);
                            t
                        })
                    })
                    .collect();
            }
            for t in succs {
                let j = match index.get(&t) {
                    Some(&j) => j,
                    None => {
                        if tuples.len() >= cap {
                            return Err(Error::CapExceeded {
                                what: "product exploration",
                                cap,
                            });
                        }
                        let j = tuples.len();
                        index.insert(t.clone(), j);
                        tuples.push(t);
                        depth.push(depth[i] + 1);
                        queue.push_back(j);
                        j
                    }
                };
                edges.push((i, a, j));
            }
        }
    }
    let start_count = automata
        .iter()
        .map(|a| a.initials().len())
        .product::<usize>();
    let mut b = Automaton::builder(alphabet, tuples.len());
    for i in 0..start_count {
        b.add_initial(i);
    }
    for (p, a, q) in edges {
        b.add_edge(p, a, q);
    }
    for (i, t) in tuples.iter().enumerate() {
        if automata.iter().zip(t).all(|(aut, &q)| aut.is_final(q)) {
            b.add_accepting(i);
        }
    }
    b.build()
}

/// Reachable synchronous product; its language is the intersection.
pub fn product(automata: &[Automaton], cap: usize) -> Result<Automaton> {
    let mut p = explore_product(automata, None, cap)?;
    if automata.len() == 1 {
        if let Some(name) = automata[0].name() {
            p = p.with_name(name);
        }
    }
    Ok(p)
}

/// Reference decision procedure: the least shortest word in the intersection.
pub fn ine_oracle(automata: &[Automaton], cap: usize) -> Result<Option<Word>> {
    Ok(shortest_word(&product(automata, cap)?))
}

/// Trim part: states both reachable and co-reachable.
fn useful_states(aut: &Automaton) -> Vec<bool> {
    let r = aut.reachable();
    let c = aut.coreachable();
    r.iter().zip(&c).map(|(&x, &y)| x && y).collect()
}

/// Longest path (in transitions) from an initial to a final state through
/// useful states, or `None` if such paths are unbounded or absent.
fn longest_useful_path(aut: &Automaton) -> std::result::Result<Option<usize>, ()> {
    let useful = useful_states(aut);
    let n = aut.state_count();
    let succs: Vec<Vec<State>> = (0..n)
        .map(|p| {
            let mut v: Vec<State> = aut
                .alphabet()
                .letters()
                .flat_map(|a| aut.successors(p, a).iter().copied())
                .filter(|&q| useful[q])
                .collect();
            v.sort_unstable();
            v.dedup();
            v
        })
        .collect();
    // longest[q]: longest path from q to a final state inside the trim part
    let mut longest: Vec<Option<usize>> = vec![None; n];
    // 0 unvisited, 1 on stack, 2 done
    let mut mark = vec![0u8; n];
    for s in (0..n).filter(|&s| useful[s]) {
        if mark[s] != 0 {
            continue;
        }
        mark[s] = 1;
        let mut stack: Vec<(State, usize)> = vec![(s, 0)];
        while let Some(top) = stack.len().checked_sub(1) {
            let (p, i) = stack[top];
            if i < succs[p].len() {
                stack[top].1 += 1;
                let q = succs[p][i];
                match mark[q] {
                    0 => {
                        mark[q] = 1;
                        stack.push((q, 0));
                    }
                    1 => return Err(()),
                    _ => {}
                }
            } else {
                let best = succs[p].iter().filter_map(|&q| longest[q].map(|l| l + 1)).max();
                longest[p] = if aut.is_final(p) {
                    Some(best.unwrap_or(0))
                } else {
                    best
                };
                mark[p] = 2;
                stack.pop();
            }
        }
    }
    Ok(aut.initials().iter().filter_map(|&q| longest[q]).max())
}

/// True iff the language is finite, i.e. no cycle lies on a path from an
/// initial to a final state.
pub fn is_finite(aut: &Automaton) -> bool {
    longest_useful_path(aut).is_ok()
}

/// Length of the longest accepted word. `None` when the language is infinite
/// or empty.
pub fn longest_word_length(aut: &Automaton) -> Option<usize> {
    longest_useful_path(aut).ok().flatten()
}

pub fn is_cofinite(aut: &Automaton, cap: usize) -> Result<bool> {
    Ok(is_finite(&complement(&determinize(aut, cap)?)))
}

/// Length of the longest word rejected by `aut`. `None` when every word is
/// accepted or the rejected set is infinite.
pub fn complement_longest_word(aut: &Automaton, cap: usize) -> Result<Option<usize>> {
    Ok(longest_word_length(&complement(&determinize(aut, cap)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{words_up_to, Alphabet};

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn star(letter: usize) -> Automaton {
        Automaton::builder(ab(), 1)
            .initial(0)
            .accepting(0)
            .edge(0, letter, 0)
            .build()
            .unwrap()
    }

    #[test]
    fn shortest_word_of_empty_language_is_none() {
        assert_eq!(shortest_word(&Automaton::trivial(ab(), false)), None);
    }

    #[test]
    fn shortest_word_contains_a() {
        let a = Automaton::contains_letter(ab(), 0).unwrap();
        assert_eq!(shortest_word(&a), Some(vec![0]));
    }

    #[test]
    fn shortest_word_tie_break_is_lexicographic() {
        // accepts {ba, ab}; least is "ab"
        let a = Automaton::builder(ab(), 5)
            .initial(0)
            .edge(0, 1, 1)
            .edge(1, 0, 2)
            .edge(0, 0, 3)
            .edge(3, 1, 4)
            .accepting(2)
            .accepting(4)
            .build()
            .unwrap();
        assert_eq!(shortest_word(&a), Some(vec![0, 1]));
    }

    #[test]
    fn product_of_single_automaton_is_equivalent() {
        let a = Automaton::contains_letter(ab(), 1).unwrap();
        let p = product(std::slice::from_ref(&a), 100).unwrap();
        for w in words_up_to(2, 5) {
            assert_eq!(p.accepts(&w).unwrap(), a.accepts(&w).unwrap());
        }
    }

    #[test]
    fn product_of_a_star_and_b_star_is_epsilon() {
        let p = product(&[star(0), star(1)], 100).unwrap();
        for w in words_up_to(2, 4) {
            assert_eq!(p.accepts(&w).unwrap(), w.is_empty());
        }
        assert_eq!(ine_oracle(&[star(0), star(1)], 100).unwrap(), Some(vec![]));
    }

    #[test]
    fn product_of_contains_a_and_b_has_shortest_length_two() {
        let a = Automaton::contains_letter(ab(), 0).unwrap();
        let b = Automaton::contains_letter(ab(), 1).unwrap();
        let w = ine_oracle(&[a, b], 100).unwrap().unwrap();
        assert_eq!(w, vec![0, 1]);
    }

    #[test]
    fn mismatched_alphabets_are_rejected() {
        let a = Automaton::trivial(ab(), true);
        let b = Automaton::trivial(Alphabet::from_chars("ba").unwrap(), true);
        assert_eq!(product(&[a, b], 100), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn product_cap_is_enforced() {
        let a = Automaton::contains_letter(ab(), 0).unwrap();
        assert!(matches!(
            product(&[a.clone(), a], 1),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn finiteness() {
        assert!(!is_finite(&star(0)));
        assert_eq!(longest_word_length(&star(0)), None);
        // {ab, ba}
        let a = Automaton::builder(ab(), 4)
            .initial(0)
            .edge(0, 0, 1)
            .edge(1, 1, 3)
            .edge(0, 1, 2)
            .edge(2, 0, 3)
            .accepting(3)
            .build()
            .unwrap();
        assert!(is_finite(&a));
        assert_eq!(longest_word_length(&a), Some(2));
        // a cycle that cannot reach a final state does not matter
        let b = Automaton::builder(ab(), 3)
            .initial(0)
            .edge(0, 0, 1)
            .edge(0, 1, 2)
            .edge(2, 1, 2)
            .accepting(1)
            .build()
            .unwrap();
        assert!(is_finite(&b));
        assert_eq!(longest_word_length(&b), Some(1));
    }

    #[test]
    fn chain_of_five_states_has_bounded_words() {
        let mut b = Automaton::builder(ab(), 5).initial(0).accepting(4);
        for i in 0..4 {
            b.add_edge_all(i, i + 1);
        }
        let a = b.build().unwrap();
        assert!(is_finite(&a));
        assert_eq!(longest_word_length(&a), Some(4));
    }

    #[test]
    fn cofiniteness() {
        assert!(is_cofinite(&Automaton::trivial(ab(), true), 100).unwrap());
        let w = Automaton::from_word(ab(), &[0, 1]).unwrap();
        assert!(!is_cofinite(&w, 100).unwrap());
        // all words except "ab"
        let d = complement(&determinize(&w, 100).unwrap());
        assert!(is_cofinite(&d, 100).unwrap());
        assert_eq!(complement_longest_word(&d, 100).unwrap(), Some(2));
    }
}
