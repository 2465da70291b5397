// SPDX-License-Identifier: Apache-2.0
//! Seeded random automata and instances for testing and benchmarking.
//!
//! Every family is built to lie in its class by construction, except
//! piecewise testable DFAs, which are drawn by rejection.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::automata::{complement, determinize, minimize, Alphabet, Automaton, Dfa, State};
use crate::classify::is_piecewise_testable;
use crate::generators::{CnfFormula, Graph, TransformationSystem};
use crate::ine::{IneInstance, Promise};

/// Size limits for random instances.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub max_states: usize,
    pub max_letters: usize,
    pub max_automata: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_states: 6,
            max_letters: 3,
            max_automata: 3,
        }
    }
}

/// The alphabet made of the first `k` lowercase letters.
pub fn letters(k: usize) -> Alphabet {
    assert!((1..=26).contains(&k), "alphabet size must be in 1..=26");
    let s: String = (b'a'..b'a' + k as u8).map(char::from).collect();
    Alphabet::from_chars(&s).expect("distinct letters")
}

/// Each transition present with probability `density`; state 0 is initial,
/// every other state is initial with probability 0.1 and final with
/// probability 0.4.
pub fn random_nfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize, density: f64) -> Automaton {
    let mut b = Automaton::builder(alphabet.clone(), states).initial(0);
    for p in 0..states {
        if p > 0 && rng.gen_bool(0.1) {
            b.add_initial(p);
        }
        if rng.gen_bool(0.4) {
            b.add_accepting(p);
        }
        for a in alphabet.letters() {
            for q in 0..states {
                if rng.gen_bool(density) {
                    b.add_edge(p, a, q);
                }
            }
        }
    }
    b.build().expect("valid by construction")
}

/// Complete DFA with uniformly random transitions.
pub fn random_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    let table: Vec<Vec<State>> = (0..states)
        .map(|_| alphabet.letters().map(|_| rng.gen_range(0..states)).collect())
        .collect();
    let finals: Vec<bool> = (0..states).map(|_| rng.gen_bool(0.4)).collect();
    Dfa::from_table(alphabet.clone(), &table, 0, &finals).expect("valid by construction")
}

/// Partially ordered NFA with initial state 0: every edge goes to the same
/// or a larger state.
pub fn random_ponfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Automaton {
    let mut b = Automaton::builder(alphabet.clone(), states).initial(0);
    for p in 0..states {
        if rng.gen_bool(0.4) {
            b.add_accepting(p);
        }
        for a in alphabet.letters() {
            if rng.gen_bool(0.4) {
                b.add_edge(p, a, p);
            }
            for q in p + 1..states {
                if rng.gen_bool(0.25) {
                    b.add_edge(p, a, q);
                }
            }
        }
    }
    b.build().expect("valid by construction")
}

/// Complete partially ordered DFA: each move stays or jumps forward.
pub fn random_po_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    let table: Vec<Vec<State>> = (0..states)
        .map(|p| {
            alphabet
                .letters()
                .map(|_| {
                    if p + 1 == states || rng.gen_bool(0.5) {
                        p
                    } else {
                        rng.gen_range(p + 1..states)
                    }
                })
                .collect()
        })
        .collect();
    let finals: Vec<bool> = (0..states).map(|_| rng.gen_bool(0.4)).collect();
    Dfa::from_table(alphabet.clone(), &table, 0, &finals).expect("valid by construction")
}

/// DFA whose only cycle is a rejecting sink, so the language is finite.
pub fn random_finite_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    let states = states.max(1);
    let sink = states - 1;
    let table: Vec<Vec<State>> = (0..states)
        .map(|p| {
            alphabet
                .letters()
                .map(|_| {
                    if p == sink || rng.gen_bool(0.3) {
                        sink
                    } else {
                        rng.gen_range(p + 1..states)
                    }
                })
                .collect()
        })
        .collect();
    let finals: Vec<bool> = (0..states).map(|p| p != sink && rng.gen_bool(0.5)).collect();
    Dfa::from_table(alphabet.clone(), &table, 0, &finals).expect("valid by construction")
}

pub fn random_cofinite_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    complement(&random_finite_dfa(rng, alphabet, states))
}

/// NFA with a self-loop on every letter at every state, hence a shuffle
/// ideal.
pub fn random_shuffle_ideal_nfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Automaton {
    random_nfa(rng, alphabet, states, 0.25).with_all_self_loops()
}

/// Minimal DFA of a random shuffle ideal.
pub fn random_shuffle_ideal_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    let a = random_shuffle_ideal_nfa(rng, alphabet, states);
    minimize(&determinize(&a, 1 << 16).expect("small automaton"))
}

/// Piecewise testable DFA with at most `states` states, drawn by rejection
/// from partially ordered DFAs. Falls back to the subword language of a
/// random word.
pub fn random_pt_dfa<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Dfa {
    for _ in 0..200 {
        let d = minimize(&random_po_dfa(rng, alphabet, states));
        if is_piecewise_testable(&d) {
            return d;
        }
    }
    // Σ* u_1 Σ* … u_k Σ* for a random word u of length states - 1
    let len = states.saturating_sub(1);
    let u: Vec<usize> = (0..len).map(|_| rng.gen_range(0..alphabet.len())).collect();
    let table: Vec<Vec<State>> = (0..=len)
        .map(|p| {
            alphabet
                .letters()
                .map(|a| if p < len && u[p] == a { p + 1 } else { p })
                .collect()
        })
        .collect();
    let finals: Vec<bool> = (0..=len).map(|p| p == len).collect();
    Dfa::from_table(alphabet.clone(), &table, 0, &finals).expect("valid by construction")
}

/// Splits a state budget into per-letter counter sizes whose product stays
/// within the budget.
fn counter_sizes<R: Rng>(rng: &mut R, k: usize, budget: usize) -> Vec<usize> {
    let mut sizes = vec![1; k];
    let mut order: Vec<usize> = (0..k).collect();
    order.shuffle(rng);
    let mut product = 1;
    for &a in &order {
        let max = budget / product;
        let s = rng.gen_range(1..=max.max(1));
        sizes[a] = s;
        product *= s;
    }
    sizes
}

/// Product of one counter per letter with a random final set. Counters are
/// thresholds when `star_free`, otherwise tail-and-cycle. The letter maps
/// commute, so the language is commutative.
pub fn random_commutative_dfa<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    budget: usize,
    star_free: bool,
) -> Dfa {
    let k = alphabet.len();
    let sizes = counter_sizes(rng, k, budget);
    // per-letter successor within the counter
    let nexts: Vec<Vec<usize>> = sizes
        .iter()
        .map(|&s| {
            let back = if star_free || s == 1 {
                s - 1
            } else {
                rng.gen_range(0..s)
            };
            (0..s).map(|i| if i + 1 < s { i + 1 } else { back }).collect()
        })
        .collect();
    let total: usize = sizes.iter().product();
    let encode = |digits: &[usize]| digits.iter().zip(&sizes).fold(0, |acc, (&d, &s)| acc * s + d);
    let decode = |mut x: usize| {
        let mut digits = vec![0; k];
        for a in (0..k).rev() {
            digits[a] = x % sizes[a];
            x /= sizes[a];
        }
        digits
    };
    let table: Vec<Vec<State>> = (0..total)
        .map(|x| {
            let d = decode(x);
            (0..k)
                .map(|a| {
                    let mut e = d.clone();
                    e[a] = nexts[a][d[a]];
                    encode(&e)
                })
                .collect()
        })
        .collect();
    let finals: Vec<bool> = (0..total).map(|_| rng.gen_bool(0.4)).collect();
    Dfa::from_table(alphabet.clone(), &table, 0, &finals).expect("valid by construction")
}

/// Commutative NFA: one commutative DFA, or the union of two.
pub fn random_commutative_nfa<R: Rng>(
    rng: &mut R,
    alphabet: &Alphabet,
    budget: usize,
    star_free: bool,
) -> Automaton {
    if budget >= 2 && rng.gen_bool(0.5) {
        let half = budget / 2;
        let x = random_commutative_dfa(rng, alphabet, half, star_free).into_automaton();
        let y = random_commutative_dfa(rng, alphabet, budget - half, star_free).into_automaton();
        Automaton::disjoint_union(&[x, y]).expect("same alphabet")
    } else {
        random_commutative_dfa(rng, alphabet, budget, star_free).into_automaton()
    }
}

/// Language `∅` or `Σ*` over a random automaton of the given size.
pub fn random_trivial<R: Rng>(rng: &mut R, alphabet: &Alphabet, states: usize) -> Automaton {
    let base = random_nfa(rng, alphabet, states.max(1), 0.3);
    if rng.gen_bool(0.5) {
        // no final states
        let mut b = Automaton::builder(alphabet.clone(), base.state_count());
        for (p, a, q) in base.edges() {
            b.add_edge(p, a, q);
        }
        for &q in base.initials() {
            b.add_initial(q);
        }
        b.build().expect("valid by construction")
    } else {
        // state 0 accepts everything
        let mut b = Automaton::builder(alphabet.clone(), base.state_count())
            .accepting(0)
            .edge_all(0, 0);
        for (p, a, q) in base.edges() {
            b.add_edge(p, a, q);
        }
        for &q in base.initials() {
            b.add_initial(q);
        }
        for q in base.finals() {
            b.add_accepting(q);
        }
        b.build().expect("valid by construction")
    }
}

/// One automaton in the class of `promise`.
pub fn random_member<R: Rng>(rng: &mut R, promise: Promise, alphabet: &Alphabet, max_states: usize) -> Automaton {
    let n = rng.gen_range(1..=max_states.max(1));
    match promise {
        Promise::St0 => random_trivial(rng, alphabet, n),
        Promise::StHalf => {
            if rng.gen_bool(0.5) {
                random_shuffle_ideal_nfa(rng, alphabet, n)
            } else {
                let d = random_shuffle_ideal_dfa(rng, alphabet, n);
                if d.state_count() <= max_states {
                    d.into_automaton()
                } else {
                    random_shuffle_ideal_nfa(rng, alphabet, n)
                }
            }
        }
        Promise::Dd0 => {
            if rng.gen_bool(0.5) {
                random_finite_dfa(rng, alphabet, n).into_automaton()
            } else {
                random_cofinite_dfa(rng, alphabet, n).into_automaton()
            }
        }
        Promise::St1 => random_pt_dfa(rng, alphabet, n).into_automaton(),
        Promise::St32 => {
            if rng.gen_bool(0.5) {
                random_ponfa(rng, alphabet, n)
            } else {
                random_po_dfa(rng, alphabet, n).into_automaton()
            }
        }
        Promise::Commutative => random_commutative_nfa(rng, alphabet, n, false),
        Promise::CommutativeSf => {
            if rng.gen_bool(0.5) {
                random_commutative_dfa(rng, alphabet, n, true).into_automaton()
            } else {
                random_commutative_nfa(rng, alphabet, n, true)
            }
        }
        Promise::None => random_nfa(rng, alphabet, n, 0.3),
    }
}

/// Instance of one to `shape.max_automata` automata in the promised class.
pub fn random_instance<R: Rng>(rng: &mut R, promise: Promise, shape: &Shape) -> IneInstance {
    let k = rng.gen_range(1..=shape.max_letters);
    let alphabet = letters(k);
    let m = rng.gen_range(1..=shape.max_automata);
    let list = (0..m)
        .map(|_| random_member(rng, promise, &alphabet, shape.max_states))
        .collect();
    IneInstance::new(list, promise).expect("common alphabet")
}

/// Random undirected simple graph, edges as `(u, v)` with `u < v`.
pub fn random_graph<R: Rng>(rng: &mut R, vertices: usize, edge_probability: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..vertices {
        for v in u + 1..vertices {
            if rng.gen_bool(edge_probability) {
                edges.push((u, v));
            }
        }
    }
    Graph::new(vertices, edges).expect("valid by construction")
}

/// Random DAG whose edges go from smaller to larger vertices.
pub fn random_dag<R: Rng>(rng: &mut R, vertices: usize, edge_probability: f64) -> Graph {
    random_graph(rng, vertices, edge_probability)
}

/// Random DAG where every vertex has at most one out-edge.
pub fn random_functional_dag<R: Rng>(rng: &mut R, vertices: usize) -> Graph {
    let mut edges = Vec::new();
    for u in 0..vertices.saturating_sub(1) {
        if rng.gen_bool(0.7) {
            edges.push((u, rng.gen_range(u + 1..vertices)));
        }
    }
    Graph::new(vertices, edges).expect("valid by construction")
}

/// Random formula with `clauses` clauses of three literals over distinct
/// variables (fewer when there are fewer variables).
pub fn random_3cnf<R: Rng>(rng: &mut R, variables: usize, clauses: usize) -> CnfFormula {
    let vars: Vec<i32> = (1..=variables as i32).collect();
    let cs = (0..clauses)
        .map(|_| {
            vars.choose_multiple(rng, 3.min(variables))
                .map(|&v| if rng.gen_bool(0.5) { v } else { -v })
                .collect()
        })
        .collect();
    CnfFormula::new(variables, cs).expect("valid by construction")
}

pub fn random_transformation_system<R: Rng>(
    rng: &mut R,
    domain: usize,
    generators: usize,
) -> TransformationSystem {
    let map = |rng: &mut R| (0..domain).map(|_| rng.gen_range(0..domain)).collect::<Vec<_>>();
    let gens = (0..generators).map(|_| map(rng)).collect();
    let target = map(rng);
    TransformationSystem::new(domain, gens, target).expect("valid by construction")
}
