// SPDX-License-Identifier: Apache-2.0
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use subreg::automata::{
    complement, determinize, equivalent, ine_oracle, minimize, parse_automaton, shortest_word,
    words_up_to, Automaton,
};
use subreg::classify::{classify, is_partially_ordered};
use subreg::ine::{solve, Promise, SolveOptions};
use subreg::ponfa::ponfa_merge_minimize;
use subreg::random::{letters, random_instance, random_nfa, random_ponfa, Shape};
use subreg::unary::{semilinear_intersect, semilinear_member, unary_lengths};
use subreg::{Progression, Semilinear64};

const CAP: usize = 100_000;

/// The same automaton with state `q` renamed to `n - 1 - q`.
fn reversed_states(a: &Automaton) -> Automaton {
    let n = a.state_count();
    let mut b = Automaton::builder(a.alphabet().clone(), n);
    for &q in a.initials() {
        b.add_initial(n - 1 - q);
    }
    for q in a.finals() {
        b.add_accepting(n - 1 - q);
    }
    for (p, x, q) in a.edges() {
        b.add_edge(n - 1 - p, x, n - 1 - q);
    }
    b.build().unwrap()
}

fn nfa(seed: u64, k: usize, n: usize) -> Automaton {
    random_nfa(&mut ChaCha8Rng::seed_from_u64(seed), &letters(k), n, 0.35)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn text_format_round_trips(seed in any::<u64>(), k in 1usize..4, n in 1usize..7) {
        let a = nfa(seed, k, n);
        prop_assert_eq!(parse_automaton(&a.to_string()).unwrap(), a);
    }

    #[test]
    fn determinize_preserves_words(seed in any::<u64>(), k in 1usize..3, n in 1usize..6) {
        let a = nfa(seed, k, n);
        let d = determinize(&a, CAP).unwrap();
        let m = minimize(&d);
        let c = complement(&m);
        for w in words_up_to(k, 6) {
            let x = a.accepts(&w).unwrap();
            prop_assert_eq!(d.accepts(&w).unwrap(), x);
            prop_assert_eq!(m.accepts(&w).unwrap(), x);
            prop_assert_eq!(c.accepts(&w).unwrap(), !x);
        }
    }

    #[test]
    fn minimal_dfas_are_canonical(seed in any::<u64>(), k in 1usize..3, n in 1usize..6) {
        let a = nfa(seed, k, n);
        let reversed_order = reversed_states(&a);
        let m1 = minimize(&determinize(&a, CAP).unwrap());
        let m2 = minimize(&determinize(&reversed_order, CAP).unwrap());
        prop_assert_eq!(m1, m2);
    }

    #[test]
    fn shortest_word_is_accepted_and_shortest(seed in any::<u64>(), k in 1usize..3, n in 1usize..6) {
        let a = nfa(seed, k, n);
        match shortest_word(&a) {
            Some(w) => {
                prop_assert!(a.accepts(&w).unwrap());
                for v in words_up_to(k, w.len().saturating_sub(1)) {
                    if v.len() < w.len() {
                        prop_assert!(!a.accepts(&v).unwrap());
                    }
                }
            }
            None => prop_assert!(words_up_to(k, 5).all(|v| !a.accepts(&v).unwrap())),
        }
    }

    #[test]
    fn dispatcher_matches_oracle(seed in any::<u64>(), p in 0usize..8) {
        let promise = Promise::ALL[p];
        let inst = random_instance(&mut ChaCha8Rng::seed_from_u64(seed), promise, &Shape::default());
        let expected = ine_oracle(inst.automata(), CAP).unwrap().is_some();
        let r = solve(&inst, &SolveOptions::default()).unwrap();
        prop_assert_eq!(r.nonempty, expected);
        if let Some(w) = r.witness {
            prop_assert!(inst.automata().iter().all(|a| a.accepts(&w).unwrap()));
        }
    }

    #[test]
    fn merging_keeps_the_language(seed in any::<u64>(), k in 1usize..3, n in 1usize..7) {
        let a = random_ponfa(&mut ChaCha8Rng::seed_from_u64(seed), &letters(k), n);
        let (m, _) = ponfa_merge_minimize(&a).unwrap();
        prop_assert!(is_partially_ordered(&m));
        prop_assert!(m.state_count() <= a.state_count().max(1));
        prop_assert!(equivalent(&a, &m, CAP).unwrap());
    }

    #[test]
    fn classification_ignores_presentation(seed in any::<u64>(), k in 1usize..3, n in 1usize..6) {
        let a = nfa(seed, k, n);
        let d = determinize(&a, CAP).unwrap().into_automaton();
        let (ra, rd) = (classify(&a).unwrap(), classify(&d).unwrap());
        prop_assert_eq!(ra.commutative, rd.commutative);
        prop_assert_eq!(ra.shuffle_ideal, rd.shuffle_ideal);
        prop_assert_eq!(ra.finite, rd.finite);
        prop_assert_eq!(ra.suggested_level, rd.suggested_level);
    }

    #[test]
    fn unary_lengths_describe_the_language(seed in any::<u64>(), n in 1usize..7) {
        let a = nfa(seed, 1, n);
        let set = unary_lengths(&a, CAP).unwrap();
        for len in 0..40u64 {
            let word = vec![0; len as usize];
            prop_assert_eq!(set.contains(len), a.accepts(&word).unwrap());
        }
    }

    #[test]
    fn intersection_is_pointwise(
        o1 in 0u64..12, p1 in 1u64..7, o2 in 0u64..12, p2 in 1u64..7,
        f1 in proptest::collection::vec(0u64..20, 0..4),
        f2 in proptest::collection::vec(0u64..20, 0..4),
    ) {
        let x = Semilinear64::new(f1, [Progression::new(o1, p1).unwrap()]);
        let y = Semilinear64::new(f2, [Progression::new(o2, p2).unwrap()]);
        let z = semilinear_intersect(&x, &y);
        for n in 0..(4 * p1 * p2 + 40) {
            prop_assert_eq!(
                semilinear_member(&z, n),
                semilinear_member(&x, n) && semilinear_member(&y, n)
            );
        }
    }
}
