// SPDX-License-Identifier: Apache-2.0
//! Intersection non-emptiness for commutative languages.
//!
//! A commutative language is closed under permuting letters, so it suffices
//! to test the sorted words `a_1^n_1 ⋯ a_k^n_k`. The solvers differ in how
//! they bound the exponents.

use std::collections::{HashMap, HashSet};

use serde::Serialize;

use crate::automata::{
    common_alphabet, determinize, minimize, Alphabet, Automaton, Dfa, Letter, State, Word,
    DEFAULT_DETERMINIZE_CAP,
};
use crate::classify::{is_partially_ordered, letters_commute};
use crate::error::{Error, Result};
use crate::unary::{star_free_threshold, unary_lengths, SemilinearSet};

/// Default cap on the number of exponent vectors tested.
pub const DEFAULT_GRID_CAP: usize = 10_000_000;
/// Default cap on boundary tuples explored by [`commutative_nfa_ine`].
pub const DEFAULT_TUPLE_CAP: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CommutativeOptions {
    /// Check commutativity (and the star-free fixed point where the
    /// algorithm needs it) before solving.
    pub verify: bool,
    pub determinize_cap: usize,
    pub grid_cap: usize,
    pub tuple_cap: usize,
}

impl Default for CommutativeOptions {
    fn default() -> Self {
        CommutativeOptions {
            verify: true,
            determinize_cap: DEFAULT_DETERMINIZE_CAP,
            grid_cap: DEFAULT_GRID_CAP,
            tuple_cap: DEFAULT_TUPLE_CAP,
        }
    }
}

/// Per-letter exponent bounds; `overall` is their maximum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationBounds {
    pub per_letter: Vec<usize>,
    pub overall: usize,
}

/// The word `a_1^exponents[0] ⋯ a_k^exponents[k-1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CanonicalWord {
    pub exponents: Vec<usize>,
}

impl CanonicalWord {
    pub fn to_word(&self) -> Word {
        self.exponents
            .iter()
            .enumerate()
            .flat_map(|(a, &n)| std::iter::repeat_n(a, n))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.exponents.iter().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sorted rearrangement of `word` over `k` letters.
    pub fn of_word(word: &[Letter], k: usize) -> CanonicalWord {
        let mut exponents = vec![0; k];
        for &a in word {
            exponents[a] += 1;
        }
        CanonicalWord { exponents }
    }
}

/// `|{δ(q0, a^n) : n ≥ 0}|`.
pub fn orbit_size(d: &Dfa, a: Letter) -> usize {
    let mut seen = vec![false; d.state_count()];
    let mut q = d.initial();
    let mut count = 0;
    while !seen[q] {
        seen[q] = true;
        count += 1;
        q = d.next(q, a);
    }
    count
}

pub fn dfa_saturation_bounds(list: &[Dfa]) -> Result<SaturationBounds> {
    let alphabet = dfa_alphabet(list)?;
    let per_letter: Vec<usize> = alphabet
        .letters()
        .map(|a| list.iter().map(|d| orbit_size(d, a)).max().unwrap_or(1))
        .collect();
    let overall = per_letter.iter().copied().max().unwrap_or(1);
    Ok(SaturationBounds {
        per_letter,
        overall,
    })
}

fn dfa_alphabet(list: &[Dfa]) -> Result<&Alphabet> {
    let first = list.first().ok_or(Error::EmptyInstance)?;
    if list.iter().any(|d| d.alphabet() != first.alphabet()) {
        return Err(Error::AlphabetMismatch);
    }
    Ok(first.alphabet())
}

fn grid_size(bounds: &[usize], cap: usize) -> Result<usize> {
    bounds
        .iter()
        .try_fold(1usize, |acc, &b| acc.checked_mul(b + 1).filter(|&s| s <= cap))
        .ok_or(Error::CapExceeded {
            what: "exponent grid",
            cap,
        })
}

/// Depth-first walk over exponent vectors in lexicographic order, carrying
/// the simulation state of every automaton. `step(state, letter)` advances a
/// state, `accept` tests a full tuple.
fn search_grid<S: Clone>(
    bounds: &[usize],
    start: Vec<S>,
    step: &dyn Fn(usize, &S, Letter) -> S,
    dead: &dyn Fn(usize, &S) -> bool,
    accept: &dyn Fn(&[S]) -> bool,
) -> Option<CanonicalWord> {
    fn go<S: Clone>(
        letter: usize,
        bounds: &[usize],
        states: Vec<S>,
        exps: &mut Vec<usize>,
        step: &dyn Fn(usize, &S, Letter) -> S,
        dead: &dyn Fn(usize, &S) -> bool,
        accept: &dyn Fn(&[S]) -> bool,
    ) -> bool {
        if states.iter().enumerate().any(|(i, s)| dead(i, s)) {
            return false;
        }
        if letter == bounds.len() {
            return accept(&states);
        }
        let mut cur = states;
        for n in 0..=bounds[letter] {
            exps.push(n);
            if go(letter + 1, bounds, cur.clone(), exps, step, dead, accept) {
                return true;
            }
            exps.pop();
            cur = cur
                .iter()
                .enumerate()
                .map(|(i, s)| step(i, s, letter))
                .collect();
        }
        false
    }
    let mut exps = Vec::with_capacity(bounds.len());
    go(0, bounds, start, &mut exps, step, dead, accept).then_some(CanonicalWord { exponents: exps })
}

/// Saturation for minimal commutative star-free DFAs: exponent `n_a` only
/// matters up to the orbit size `N_a`, so the grid `0..=N_a` is complete.
///
/// Inputs are minimized first. With `verify`, non-commuting letter maps or a
/// missing fixed point `δ(q0, a^(N_a-1)) = δ(q0, a^N_a)` are reported as
/// promise violations.
pub fn commutative_dfa_ine(list: &[Dfa], opts: &CommutativeOptions) -> Result<Option<CanonicalWord>> {
    dfa_alphabet(list)?;
    let mins: Vec<Dfa> = list.iter().map(minimize).collect();
    if opts.verify {
        for (i, m) in mins.iter().enumerate() {
            if !letters_commute(m) {
                return Err(Error::PromiseViolation(format!("automaton {i} is not commutative")));
            }
            for a in m.alphabet().letters() {
                let n = orbit_size(m, a);
                let q = m.run_from(m.initial(), &vec![a; n - 1]);
                if m.next(q, a) != q {
                    return Err(Error::PromiseViolation(format!(
                        "automaton {i} cycles on letter `{}`; the language is not star-free",
                        m.alphabet().symbol(a)
                    )));
                }
            }
        }
    }
    let bounds = dfa_saturation_bounds(&mins)?;
    grid_size(&bounds.per_letter, opts.grid_cap)?;
    let start: Vec<State> = mins.iter().map(|m| m.initial()).collect();
    Ok(search_grid(
        &bounds.per_letter,
        start,
        &|i, &q, a| mins[i].next(q, a),
        &|_, _| false,
        &|qs| qs.iter().zip(&mins).all(|(&q, m)| m.is_final(q)),
    ))
}

fn verify_commutative(list: &[Automaton], opts: &CommutativeOptions) -> Result<()> {
    for (i, a) in list.iter().enumerate() {
        let m = minimize(&determinize(a, opts.determinize_cap)?);
        if !letters_commute(&m) {
            return Err(Error::PromiseViolation(format!("automaton {i} is not commutative")));
        }
    }
    Ok(())
}

fn simulate_grid(
    list: &[Automaton],
    bounds: &[usize],
    opts: &CommutativeOptions,
) -> Result<Option<CanonicalWord>> {
    grid_size(bounds, opts.grid_cap)?;
    let start: Vec<Vec<State>> = list.iter().map(|a| a.initials().to_vec()).collect();
    Ok(search_grid(
        bounds,
        start,
        &|i, s: &Vec<State>, a| list[i].step(s, a),
        &|_, s| s.is_empty(),
        &|sets| {
            sets.iter()
                .zip(list)
                .all(|(s, a)| s.iter().any(|&q| a.is_final(q)))
        },
    ))
}

/// Saturation for partially ordered NFAs: along a single letter the subset
/// reached stabilizes after `|Q|` steps, so exponents `0..=max |Q_i|` suffice.
pub fn commutative_ponfa_ine(
    list: &[Automaton],
    opts: &CommutativeOptions,
) -> Result<Option<CanonicalWord>> {
    let alphabet = common_alphabet(list)?;
    if list.iter().any(|a| !is_partially_ordered(a)) {
        return Err(Error::NotPartiallyOrdered);
    }
    if opts.verify {
        verify_commutative(list, opts)?;
    }
    let n = list.iter().map(Automaton::state_count).max().unwrap_or(0);
    simulate_grid(list, &vec![n; alphabet.len()], opts)
}

/// Exponent bound for totally star-free commutative NFAs: the largest unary
/// star-free threshold over every letter and pair of states.
pub fn totally_star_free_bound(aut: &Automaton, cap: usize) -> Result<usize> {
    let n = aut.state_count();
    let mut bound = 0;
    for a in aut.alphabet().letters() {
        let unary = aut.restrict_to_letter(a);
        for q in 0..n {
            for p in 0..n {
                let b = unary.with_initials_and_finals(&[q], &[p])?;
                match star_free_threshold(&b, cap)? {
                    Some(t) => bound = bound.max(t),
                    None => {
                        return Err(Error::PromiseViolation(format!(
                            "lengths of `{}`-paths from {q} to {p} are not star-free",
                            aut.alphabet().symbol(a)
                        )))
                    }
                }
            }
        }
    }
    Ok(bound)
}

/// Grid search with the bound of [`totally_star_free_bound`].
pub fn totally_star_free_ine(
    list: &[Automaton],
    opts: &CommutativeOptions,
) -> Result<Option<CanonicalWord>> {
    let alphabet = common_alphabet(list)?;
    let mut n = 0;
    for a in list {
        n = n.max(totally_star_free_bound(a, opts.determinize_cap)?);
    }
    if opts.verify {
        verify_commutative(list, opts)?;
    }
    simulate_grid(list, &vec![n; alphabet.len()], opts)
}

/// Unary length sets of `letter`-paths between states, computed on demand.
struct PathLengths<'a> {
    list: &'a [Automaton],
    unary: Vec<Vec<Automaton>>,
    cache: HashMap<(usize, Letter, State, State), SemilinearSet<u64>>,
    cap: usize,
}

impl PathLengths<'_> {
    fn get(&mut self, i: usize, a: Letter, p: State, q: State) -> Result<&SemilinearSet<u64>> {
        let key = (i, a, p, q);
        if !self.cache.contains_key(&key) {
            let b = self.unary[i][a].with_initials_and_finals(&[p], &[q])?;
            let s = unary_lengths(&b, self.cap)?;
            self.cache.insert(key, s);
        }
        Ok(&self.cache[&key])
    }

    /// States reachable from `p` reading only `a`.
    fn targets(&self, i: usize, a: Letter, p: State) -> Vec<State> {
        let u = &self.unary[i][a];
        let mut seen = vec![false; u.state_count()];
        seen[p] = true;
        let mut stack = vec![p];
        while let Some(s) = stack.pop() {
            for &t in u.successors(s, 0) {
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        (0..u.state_count()).filter(|&t| seen[t]).collect()
    }
}

/// General commutative NFAs, not necessarily star-free. A sorted word
/// `a_1^k_1 ⋯ a_r^k_r` is accepted by all automata iff there are boundary
/// tuples `q^0 → q^1 → ⋯ → q^r` (initial to final) such that in each phase
/// `j` some common length `k_j` labels an `a_j`-path in every automaton.
/// Boundary tuples are enumerated depth-first; each phase is a unary
/// intersection problem.
pub fn commutative_nfa_ine(list: &[Automaton], opts: &CommutativeOptions) -> Result<Option<Word>> {
    let alphabet = common_alphabet(list)?;
    if opts.verify {
        verify_commutative(list, opts)?;
    }
    let r = alphabet.len();
    let mut paths = PathLengths {
        list,
        unary: list
            .iter()
            .map(|a| alphabet.letters().map(|l| a.restrict_to_letter(l)).collect())
            .collect(),
        cache: HashMap::new(),
        cap: opts.determinize_cap,
    };
    let mut failed = HashSet::new();
    let mut explored = 0usize;
    let mut starts: Vec<Vec<State>> = vec![Vec::new()];
    for a in list {
        starts = starts
            .into_iter()
            .flat_map(|t| {
                a.initials().iter().map(move |&q| {
                    let mut t = t.clone();
                    t.push(q);
                    t
                })
            })
            .collect();
    }
    for start in starts {
        let mut lengths = Vec::with_capacity(r);
        if phase(0, &start, &mut paths, &mut failed, &mut explored, opts.tuple_cap, &mut lengths)? {
            let word = lengths
                .iter()
                .enumerate()
                .flat_map(|(a, &k)| std::iter::repeat_n(a, k as usize))
                .collect();
            return Ok(Some(word));
        }
    }
    Ok(None)
}

fn phase(
    j: usize,
    from: &[State],
    paths: &mut PathLengths<'_>,
    failed: &mut HashSet<(usize, Vec<State>)>,
    explored: &mut usize,
    cap: usize,
    lengths: &mut Vec<u64>,
) -> Result<bool> {
    let list = paths.list;
    let r = list[0].alphabet().len();
    if failed.contains(&(j, from.to_vec())) {
        return Ok(false);
    }
    let last = j + 1 == r;
    let candidates: Vec<Vec<State>> = from
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            paths
                .targets(i, j, p)
                .into_iter()
                .filter(|&q| !last || list[i].is_final(q))
                .collect()
        })
        .collect();
    // enumerate target tuples, intersecting length sets as we go
    let m = list.len();
    let mut idx = vec![0usize; m];
    let mut partial: Vec<SemilinearSet<u64>> = Vec::with_capacity(m);
    let mut depth = 0usize;
    loop {
        if depth == m {
            *explored += 1;
            if *explored > cap {
                return Err(Error::CapExceeded {
                    what: "boundary tuple enumeration",
                    cap,
                });
            }
            let target: Vec<State> = (0..m).map(|i| candidates[i][idx[i]]).collect();
            let k = partial[m - 1].min().expect("nonempty by construction");
            lengths.push(k);
            if last || phase(j + 1, &target, paths, failed, explored, cap, lengths)? {
                return Ok(true);
            }
            lengths.pop();
            depth -= 1;
            partial.pop();
            idx[depth] += 1;
            continue;
        }
        if idx[depth] >= candidates[depth].len() {
            if depth == 0 {
                break;
            }
            idx[depth] = 0;
            depth -= 1;
            partial.pop();
            idx[depth] += 1;
            continue;
        }
        let q = candidates[depth][idx[depth]];
        let s = paths.get(depth, j, from[depth], q)?.clone();
        let s = match partial.last() {
            Some(prev) => prev.intersect(&s),
            None => s,
        };
        if s.is_empty() {
            idx[depth] += 1;
            continue;
        }
        partial.push(s);
        depth += 1;
    }
    failed.insert((j, from.to_vec()));
    Ok(false)
}
