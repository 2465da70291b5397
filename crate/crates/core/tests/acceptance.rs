// SPDX-License-Identifier: Apache-2.0
//! Acceptance suite. Prints one PASS/FAIL line per check and exits non-zero
//! if any check fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use subreg::automata::{
    determinize, equivalent, ine_oracle, is_cofinite, is_finite, minimize, shortest_word,
    words_of_length, words_up_to, Automaton, Dfa, Word,
};
use subreg::classify::{is_commutative, is_partially_ordered, is_shuffle_ideal};
use subreg::commutative::orbit_size;
use subreg::generators::{
    gap1_to_dfa, gap2_to_nfa, in_l, in_m, in_m_double_prime, l_nfa, m_nfa, monoid_membership,
    monoid_to_ine, mpp_nfa, phi_encode, sat_to_commutative_ine, separation_report,
    vertex_cover_to_ine, zimin,
};
use subreg::ine::{alternative_strategies, solve, Promise, SolveOptions};
use subreg::ponfa::{ponfa_merge_minimize, residual_equal};
use subreg::random::{
    letters, random_3cnf, random_commutative_dfa, random_dag, random_functional_dag,
    random_graph, random_instance, random_nfa, random_ponfa, random_shuffle_ideal_dfa,
    random_transformation_system, Shape,
};
use subreg::unary::{progression_threshold, semilinear_intersect, unary_lengths};
use subreg::{Progression, Result as SubregResult};

const CAP: usize = 1 << 20;

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lift<T>(r: SubregResult<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn within(start: Instant, limit: Duration) -> Check {
    let took = start.elapsed();
    ensure(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn zimin_separation() -> Check {
    let start = Instant::now();
    for n in 1..=10 {
        let u = lift(zimin(n))?;
        ensure(u.len() == (1 << n) - 1, || format!("|u_{n}| = {}", u.len()))?;
        let ones = u.iter().filter(|&&x| x == 0).count();
        ensure(ones == 1 << (n - 1), || format!("u_{n} has {ones} ones"))?;
        let m = lift(m_nfa(n))?;
        ensure(m.state_count() == n + 4, || format!("m_nfa({n}) has {} states", m.state_count()))?;
        ensure(lift(m.accepts(&u))?, || format!("m_nfa({n}) rejects u_{n}"))?;
        let mut deletions = 0;
        for p in (0..u.len()).filter(|&p| u[p] == 0) {
            let mut v = u.clone();
            v.remove(p);
            ensure(!lift(m.accepts(&v))?, || format!("m_nfa({n}) accepts deletion at {p}"))?;
            deletions += 1;
        }
        ensure(deletions == 1 << (n - 1), || "deletion count".into())?;
        let r = lift(separation_report(n))?;
        ensure(r.deletions_rejected == deletions, || "report disagrees".into())?;
    }
    within(start, Duration::from_secs(10))
}

fn cofiniteness() -> Check {
    for n in 1..=3 {
        let mpp = lift(mpp_nfa(n))?;
        for w in words_of_length(n, 1 << n) {
            ensure(lift(in_m_double_prime(&w, n))?, || format!("{w:?} not in M''_{n}"))?;
            ensure(lift(mpp.accepts(&w))?, || format!("mpp_nfa({n}) rejects {w:?}"))?;
        }
        ensure(lift(is_cofinite(&lift(m_nfa(n))?, CAP))?, || format!("m_nfa({n}) not cofinite"))?;
    }
    Ok(())
}

fn encoding_coherence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        let l = lift(l_nfa(n))?;
        ensure(l.state_count() <= n * (2 * n + 5), || {
            format!("l_nfa({n}) has {} states", l.state_count())
        })?;
        let agree = |v: &Word| -> Check {
            ensure(lift(l.accepts(v))? == lift(in_l(v, n))?, || format!("n={n}: disagreement on {v:?}"))
        };
        if n <= 2 {
            for v in words_up_to(2, 12) {
                agree(&v)?;
            }
        } else {
            for _ in 0..10_000 {
                let len = rng.gen_range(0..=24);
                let v: Word = (0..len).map(|_| rng.gen_range(0..2)).collect();
                agree(&v)?;
            }
        }
        for w in words_up_to(n, 1 << n) {
            let v = lift(phi_encode(&w, n))?;
            ensure(lift(l.accepts(&v))? == lift(in_m(&w, n))?, || format!("n={n}: encoding of {w:?}"))?;
        }
    }
    Ok(())
}

/// Strategies that apply to an instance of the given class besides the
/// dispatcher's own choice.
fn solver_oracle_agreement() -> Check {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let shape = Shape::default();
    for promise in Promise::ALL {
        for i in 0..500 {
            let inst = random_instance(&mut rng, promise, &shape);
            let expected = lift(ine_oracle(inst.automata(), CAP))?.is_some();
            let mut strategies = vec![None];
            strategies.extend(alternative_strategies(&inst).into_iter().map(Some));
            for strategy in strategies {
                let opts = SolveOptions {
                    strategy,
                    ..Default::default()
                };
                let r = solve(&inst, &opts).map_err(|e| format!("{promise} #{i} {strategy:?}: {e}"))?;
                ensure(r.nonempty == expected, || {
                    format!("{promise} #{i}: {} says {}, oracle {}", r.strategy, r.nonempty, expected)
                })?;
                if let Some(w) = &r.witness {
                    for a in inst.automata() {
                        ensure(lift(a.accepts(w))?, || format!("{promise} #{i}: bad witness"))?;
                    }
                }
            }
        }
    }
    within(start, Duration::from_secs(60))
}

fn shuffle_ideal_law() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for i in 0..200 {
        let k = rng.gen_range(1..=3);
        let alphabet = letters(k);
        let m = rng.gen_range(1..=3);
        let list: Vec<Automaton> = (0..m)
            .map(|_| {
                let n = rng.gen_range(1..=5);
                random_shuffle_ideal_dfa(&mut rng, &alphabet, n).into_automaton()
            })
            .collect();
        let all_nonempty = list.iter().all(|a| shortest_word(a).is_some());
        let inter = lift(ine_oracle(&list, CAP))?.is_some();
        ensure(inter == all_nonempty, || format!("instance {i}: intersection law"))?;
        let block: Word = alphabet.letters().collect();
        for a in &list {
            let nonempty = shortest_word(a).map(|w| w.len());
            let probe = block.repeat(nonempty.unwrap_or(0));
            ensure(lift(a.accepts(&probe))? == nonempty.is_some(), || format!("instance {i}: probe"))?;
        }
    }
    Ok(())
}

fn vertex_cover_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for n in 1..=6 {
        for _ in 0..10 {
            let g = random_graph(&mut rng, n, 0.5);
            let min_cover = g.min_vertex_cover().len();
            for k in 0..=n {
                let inst = lift(vertex_cover_to_ine(&g, k))?;
                let (edges, grid) = inst.automata().split_at(g.edges().len());
                for a in edges {
                    ensure(is_shuffle_ideal(&lift(determinize(a, CAP))?), || "edge gadget".into())?;
                }
                ensure(is_finite(&grid[0]), || "grid not finite".into())?;
                let r = lift(solve(&inst, &SolveOptions::default()))?;
                let oracle = lift(ine_oracle(inst.automata(), CAP))?;
                let expected = min_cover <= k;
                ensure(r.nonempty == expected && oracle.is_some() == expected, || {
                    format!("n={n} k={k} edges={:?}: verdict {}", g.edges(), r.nonempty)
                })?;
                if let Some(w) = r.witness {
                    ensure(w.len() == n, || "witness length".into())?;
                    let ones = w.iter().filter(|&&x| x == 1).count();
                    let covers = g.edges().iter().all(|&(u, v)| w[u] == 1 || w[v] == 1);
                    ensure(ones <= k && covers, || format!("witness {w:?} is not a cover"))?;
                }
            }
        }
    }
    Ok(())
}

fn sat_reduction() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..100 {
        let vars = rng.gen_range(1..=5);
        let clauses = rng.gen_range(1..=4 * vars + 2);
        let f = random_3cnf(&mut rng, vars, clauses);
        let inst = lift(sat_to_commutative_ine(&f))?;
        for a in inst.automata() {
            let m = minimize(&lift(determinize(a, CAP))?);
            ensure(lift(is_commutative(&m))?, || format!("formula {i}: gadget not commutative"))?;
        }
        let r = lift(solve(&inst, &SolveOptions::default()))?;
        ensure(r.nonempty == f.is_satisfiable(), || format!("formula {i}: {f}"))?;
    }
    Ok(())
}

fn saturation_laws() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut corpus: Vec<Dfa> = Vec::new();
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        corpus.push(minimize(&random_commutative_dfa(&mut rng, &letters(k), 8, true)));
    }
    for _ in 0..20 {
        let f = random_3cnf(&mut rng, 3, 3);
        for a in lift(sat_to_commutative_ine(&f))?.automata() {
            corpus.push(minimize(&lift(determinize(a, CAP))?));
        }
    }
    for d in &corpus {
        for a in d.alphabet().letters() {
            let n = orbit_size(d, a);
            let q = d.run_from(d.initial(), &vec![a; n - 1]);
            ensure(d.next(q, a) == q, || format!("no fixed point on letter {a} in\n{}", d.automaton()))?;
        }
    }
    for _ in 0..200 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=8);
        let a = random_ponfa(&mut rng, &letters(k), n);
        for mask in 0u32..1 << n {
            let s: Vec<usize> = (0..n).filter(|&q| mask >> q & 1 == 1).collect();
            for x in a.alphabet().letters() {
                let p = a.run(&s, &vec![x; n]);
                let p1 = a.run(&s, &vec![x; n + 1]);
                ensure(p == p1, || format!("subset {s:?} does not stabilise on letter {x}"))?;
            }
        }
    }
    Ok(())
}

fn unary_arithmetic() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let unary = letters(1);
    let mut sets = Vec::new();
    for i in 0..100 {
        let n = rng.gen_range(1..=6);
        let a = random_nfa(&mut rng, &unary, n, 0.3);
        let s = lift(unary_lengths(&a, CAP))?;
        let size = lift(determinize(&a, CAP))?.state_count();
        for len in 0..=2 * size {
            ensure(s.contains(len as u64) == lift(a.accepts(&vec![0; len]))?, || {
                format!("automaton {i}: length {len} for {s}")
            })?;
        }
        sets.push(s);
    }
    for pair in sets.windows(2) {
        let (x, y) = (&pair[0], &pair[1]);
        let z = semilinear_intersect(x, y);
        let lcm = num_integer::lcm(x.period_lcm(), y.period_lcm());
        let offsets = x
            .progressions()
            .iter()
            .chain(y.progressions())
            .map(Progression::offset)
            .chain(x.finite_part().iter().copied())
            .chain(y.finite_part().iter().copied())
            .max()
            .unwrap_or(0);
        for m in 0..=offsets + 4 * lcm {
            ensure(z.contains(m) == (x.contains(m) && y.contains(m)), || {
                format!("{x} ∩ {y} at {m}")
            })?;
        }
    }
    let mut cofinite_cases = 0;
    for _ in 0..500 {
        let count = rng.gen_range(1..=4);
        let progs: Vec<Progression> = (0..count)
            .map(|_| Progression::new(rng.gen_range(0..10), rng.gen_range(1..=4)).expect("period ≥ 1"))
            .collect();
        let t_max = progs.iter().map(Progression::offset).max().expect("nonempty");
        let lcm = progs.iter().fold(1, |acc, p| num_integer::lcm(acc, p.period()));
        let covered = (t_max..=t_max + 2 * lcm).all(|m| progs.iter().any(|p| p.contains(m)));
        let got = progression_threshold(&progs, &[], 0);
        if covered {
            cofinite_cases += 1;
            ensure(got == Some(t_max), || format!("{progs:?}: got {got:?}, expected {t_max}"))?;
        } else {
            ensure(got.is_none(), || format!("{progs:?}: got {got:?} on a non-cofinite union"))?;
        }
    }
    ensure(cofinite_cases > 0, || "no cofinite samples".into())
}

fn ponfa_merging() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut over_bound = Vec::new();
    for i in 0..200 {
        let k = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=8);
        let a = random_ponfa(&mut rng, &letters(k), n);
        let (m, _) = lift(ponfa_merge_minimize(&a))?;
        ensure(is_partially_ordered(&m), || format!("poNFA {i}: output not partially ordered"))?;
        ensure(lift(equivalent(&a, &m, CAP))?, || format!("poNFA {i}: language changed"))?;
        for p in 0..m.state_count() {
            for q in p + 1..m.state_count() {
                ensure(!lift(residual_equal(&m, p, q, CAP))?, || {
                    format!("poNFA {i}: states {p} and {q} share a residual")
                })?;
            }
        }
        let dfa_states = minimize(&lift(determinize(&a, CAP))?).state_count();
        if m.state_count() > dfa_states {
            over_bound.push((i, m.state_count(), dfa_states));
        }
    }
    ensure(over_bound.is_empty(), || {
        format!(
            "{} of 200 outputs exceed the minimal DFA size, first (instance, poNFA, DFA) = {:?}",
            over_bound.len(),
            over_bound[0]
        )
    })
}

fn monoid_bridge() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..200 {
        let q = rng.gen_range(1..=4);
        let m = rng.gen_range(1..=3);
        let ts = random_transformation_system(&mut rng, q, m);
        let member = lift(monoid_membership(&ts, CAP))?;
        let inst = lift(monoid_to_ine(&ts))?;
        let oracle = lift(ine_oracle(inst.automata(), CAP))?.is_some();
        let solved = lift(solve(&inst, &SolveOptions::default()))?.nonempty;
        ensure(member == oracle && member == solved, || {
            format!("system {i}: closure {member}, intersection {oracle}/{solved}\n{ts}")
        })?;
    }
    Ok(())
}

fn gap_reductions() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for i in 0..100 {
        let n = rng.gen_range(2..=8);
        let s = rng.gen_range(0..n);
        let t = rng.gen_range(0..n);
        let g = random_dag(&mut rng, n, 0.3);
        let a = lift(gap2_to_nfa(&g, s, t))?;
        ensure(shortest_word(&a).is_some() == g.reaches(s, t), || format!("dag {i}: gap2 verdict"))?;
        ensure(is_shuffle_ideal(&lift(determinize(&a, CAP))?), || format!("dag {i}: not a shuffle ideal"))?;
        let h = random_functional_dag(&mut rng, n);
        let d = lift(gap1_to_dfa(&h, s, t))?;
        ensure(shortest_word(&d).is_some() == h.reaches(s, t), || format!("dag {i}: gap1 verdict"))?;
    }
    Ok(())
}

type Named = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let checks: [Named; 12] = [
        ("Zimin words and the M_n automaton", zimin_separation),
        ("cofiniteness of M_n", cofiniteness),
        ("L_n automaton matches its definition", encoding_coherence),
        ("specialized solvers agree with the oracle", solver_oracle_agreement),
        ("shuffle ideal intersection law", shuffle_ideal_law),
        ("vertex cover reduction", vertex_cover_reduction),
        ("SAT reduction", sat_reduction),
        ("saturation of counters and subsets", saturation_laws),
        ("unary semilinear arithmetic", unary_arithmetic),
        ("poNFA residual merging", ponfa_merging),
        ("transformation monoid bridge", monoid_bridge),
        ("graph reachability reductions", gap_reductions),
    ];
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({took:.2}s)", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({took:.2}s): {e}", i + 1);
            }
        }
    }
    println!("{} passed, {failed} failed", checks.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
