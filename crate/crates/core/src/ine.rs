// SPDX-License-Identifier: Apache-2.0
//! Intersection non-emptiness: promises, level-specific solvers and the
//! dispatcher.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::automata::{
    common_alphabet, complement_longest_word, determinize, ine_oracle, is_cofinite, is_finite,
    minimize, shortest_word, Automaton, Dfa, Letter, State, Word, DEFAULT_DETERMINIZE_CAP,
    DEFAULT_PRODUCT_CAP,
};
use crate::classify::{
    classify_with, is_aperiodic, is_partially_ordered, is_piecewise_testable, is_shuffle_ideal,
    letters_commute, ClassifyOptions, Level, DEFAULT_MONOID_CAP,
};
use crate::commutative::{
    commutative_dfa_ine, commutative_nfa_ine, commutative_ponfa_ine, totally_star_free_ine,
    CommutativeOptions, DEFAULT_GRID_CAP, DEFAULT_TUPLE_CAP,
};
use crate::error::{Error, Result};
use crate::ponfa::bounded_witness_ine;

/// Language class every automaton of an instance is promised to belong to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Promise {
    St0,
    StHalf,
    Dd0,
    St1,
    St32,
    Commutative,
    CommutativeSf,
    None,
}

impl Promise {
    pub const ALL: [Promise; 8] = [
        Promise::St0,
        Promise::StHalf,
        Promise::Dd0,
        Promise::St1,
        Promise::St32,
        Promise::Commutative,
        Promise::CommutativeSf,
        Promise::None,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Promise::St0 => "st0",
            Promise::StHalf => "st-half",
            Promise::Dd0 => "dd0",
            Promise::St1 => "st1",
            Promise::St32 => "st32",
            Promise::Commutative => "commutative",
            Promise::CommutativeSf => "commutative-sf",
            Promise::None => "none",
        }
    }
}

impl fmt::Display for Promise {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Promise {
    type Err = Error;

    fn from_str(s: &str) -> Result<Promise> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Promise::ALL
            .into_iter()
            .find(|p| p.label() == norm)
            .ok_or_else(|| Error::Invalid(format!("unknown promise `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    St0,
    StHalf,
    Dd0,
    Monoid,
    CommutativeNfa,
    /// Saturation on minimal commutative star-free DFAs.
    Commutative,
    CommutativePonfa,
    Tsf,
    PonfaBounded,
    Oracle,
    /// The oracle, used because no specialized procedure applies.
    Generic,
}

impl Strategy {
    pub const ALL: [Strategy; 11] = [
        Strategy::St0,
        Strategy::StHalf,
        Strategy::Dd0,
        Strategy::Monoid,
        Strategy::CommutativeNfa,
        Strategy::Commutative,
        Strategy::CommutativePonfa,
        Strategy::Tsf,
        Strategy::PonfaBounded,
        Strategy::Oracle,
        Strategy::Generic,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Strategy::St0 => "st0",
            Strategy::StHalf => "st-half",
            Strategy::Dd0 => "dd0",
            Strategy::Monoid => "monoid",
            Strategy::CommutativeNfa => "commutative-nfa",
            Strategy::Commutative => "commutative",
            Strategy::CommutativePonfa => "commutative-ponfa",
            Strategy::Tsf => "tsf",
            Strategy::PonfaBounded => "ponfa-bounded",
            Strategy::Oracle => "oracle",
            Strategy::Generic => "generic",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Strategy> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Strategy::ALL
            .into_iter()
            .find(|p| p.label() == norm)
            .ok_or_else(|| Error::Invalid(format!("unknown strategy `{s}`")))
    }
}

/// Automata over one alphabet together with a promise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IneInstance {
    automata: Vec<Automaton>,
    promise: Promise,
}

impl IneInstance {
    pub fn new(automata: Vec<Automaton>, promise: Promise) -> Result<IneInstance> {
        common_alphabet(&automata)?;
        Ok(IneInstance { automata, promise })
    }

    pub fn automata(&self) -> &[Automaton] {
        &self.automata
    }

    pub fn promise(&self) -> Promise {
        self.promise
    }

    pub fn with_promise(mut self, promise: Promise) -> IneInstance {
        self.promise = promise;
        self
    }

    pub fn into_automata(self) -> Vec<Automaton> {
        self.automata
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IneResult {
    pub nonempty: bool,
    pub witness: Option<Word>,
    pub strategy: Strategy,
    /// Whether the promise was verified before solving.
    pub promise_checked: bool,
}

impl IneResult {
    fn from_witness(witness: Option<Word>, strategy: Strategy) -> IneResult {
        IneResult {
            nonempty: witness.is_some(),
            witness,
            strategy,
            promise_checked: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub determinize_cap: usize,
    pub product_cap: usize,
    pub monoid_cap: usize,
    pub grid_cap: usize,
    pub tuple_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            determinize_cap: DEFAULT_DETERMINIZE_CAP,
            product_cap: DEFAULT_PRODUCT_CAP,
            monoid_cap: DEFAULT_MONOID_CAP,
            grid_cap: DEFAULT_GRID_CAP,
            tuple_cap: DEFAULT_TUPLE_CAP,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SolveOptions {
    pub limits: Limits,
    /// Extra checks: the membership probe for shuffle ideals, and an oracle
    /// cross-check of every empty verdict elsewhere.
    pub certify: bool,
    pub verify_promise: bool,
    /// Overrides the strategy chosen from the promise.
    pub strategy: Option<Strategy>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            limits: Limits::default(),
            certify: false,
            verify_promise: true,
            strategy: None,
        }
    }
}

impl Limits {
    fn commutative(&self, verify: bool) -> CommutativeOptions {
        CommutativeOptions {
            verify,
            determinize_cap: self.determinize_cap,
            grid_cap: self.grid_cap,
            tuple_cap: self.tuple_cap,
        }
    }
}

fn minimal(a: &Automaton, cap: usize) -> Result<Dfa> {
    Ok(minimize(&determinize(a, cap)?))
}

fn violation(i: usize, what: &str) -> Error {
    Error::PromiseViolation(format!("automaton {i} is not {what}"))
}

/// Checks the promise on every automaton. Returns `false` for promises that
/// cannot be checked on the given input (level 3/2 for non-poNFAs).
pub fn verify_promise(list: &[Automaton], promise: Promise, limits: &Limits) -> Result<bool> {
    let cap = limits.determinize_cap;
    for (i, a) in list.iter().enumerate() {
        match promise {
            Promise::None => {}
            Promise::St0 => {
                if minimal(a, cap)?.state_count() != 1 {
                    return Err(violation(i, "empty or universal"));
                }
            }
            Promise::StHalf => {
                if !is_shuffle_ideal(&minimal(a, cap)?) {
                    return Err(violation(i, "a shuffle ideal"));
                }
            }
            Promise::Dd0 => {
                let m = minimal(a, cap)?;
                if !is_finite(&m) && !is_cofinite(&m, cap)? {
                    return Err(violation(i, "finite or cofinite"));
                }
            }
            Promise::St1 => {
                if !is_piecewise_testable(&minimal(a, cap)?) {
                    return Err(violation(i, "piecewise testable"));
                }
            }
            Promise::St32 => {
                if !is_partially_ordered(a) {
                    return Ok(false);
                }
            }
            Promise::Commutative => {
                if !letters_commute(&minimal(a, cap)?) {
                    return Err(violation(i, "commutative"));
                }
            }
            Promise::CommutativeSf => {
                let m = minimal(a, cap)?;
                if !letters_commute(&m) {
                    return Err(violation(i, "commutative"));
                }
                match is_aperiodic(&m, limits.monoid_cap) {
                    Some(true) => {}
                    Some(false) => return Err(violation(i, "star-free")),
                    None => {
                        return Err(Error::CapExceeded {
                            what: "transition monoid",
                            cap: limits.monoid_cap,
                        })
                    }
                }
            }
        }
    }
    Ok(true)
}

/// Every language is `∅` or `Σ*`: nonempty iff every automaton accepts ε.
pub fn solve_st0(list: &[Automaton]) -> Result<IneResult> {
    common_alphabet(list)?;
    let all = list
        .iter()
        .all(|a| a.initials().iter().any(|&q| a.is_final(q)));
    Ok(IneResult::from_witness(all.then(Vec::new), Strategy::St0))
}

/// Shuffle ideals: the intersection is nonempty iff every language is, and
/// the concatenation of one word from each is a common word. No product is
/// built. With `certify`, each automaton must also accept
/// `(a_1⋯a_k)^ℓ_i` where `ℓ_i` is its shortest word length.
pub fn solve_st_half(list: &[Automaton], certify: bool) -> Result<IneResult> {
    let alphabet = common_alphabet(list)?;
    let mut witness = Vec::new();
    for (i, a) in list.iter().enumerate() {
        let Some(w) = shortest_word(a) else {
            return Ok(IneResult::from_witness(None, Strategy::StHalf));
        };
        if certify {
            let block: Word = alphabet.letters().collect();
            let probe: Word = block.repeat(w.len());
            if !a.accepts(&probe)? {
                return Err(Error::PromiseViolation(format!(
                    "automaton {i} rejects the probe word of length {}; not a shuffle ideal",
                    probe.len()
                )));
            }
        }
        witness.extend(w);
    }
    Ok(IneResult::from_witness(Some(witness), Strategy::StHalf))
}

/// Accepted words of a finite language in shortlex order, at most `cap`.
fn finite_words(a: &Automaton, cap: usize) -> Result<Vec<Word>> {
    let mut out = Vec::new();
    let mut level: Vec<(Word, Vec<State>)> = vec![(Vec::new(), a.initials().to_vec())];
    let useful = {
        let c = a.coreachable();
        move |s: &[State]| s.iter().any(|&q| c[q])
    };
    while !level.is_empty() {
        let mut next = Vec::new();
        for (w, s) in level {
            if s.iter().any(|&q| a.is_final(q)) {
                out.push(w.clone());
                if out.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "finite language enumeration",
                        cap,
                    });
                }
            }
            for x in a.alphabet().letters() {
                let t = a.step(&s, x);
                if useful(&t) {
                    let mut v = w.clone();
                    v.push(x);
                    next.push((v, t));
                }
            }
        }
        level = next;
    }
    Ok(out)
}

/// Finite or cofinite languages. If all are cofinite, `a_1^(B+1)` is common
/// where `B` bounds every rejected word (ε when nothing is rejected).
/// Otherwise the words of one finite language are tested in shortlex order.
pub fn solve_dd0(list: &[Automaton], limits: &Limits) -> Result<IneResult> {
    let alphabet = common_alphabet(list)?;
    let cap = limits.determinize_cap;
    let mut finite_one = None;
    let mut bound: Option<usize> = None;
    for (i, a) in list.iter().enumerate() {
        let m = minimal(a, cap)?;
        if is_finite(&m) {
            finite_one.get_or_insert(i);
        } else if is_cofinite(&m, cap)? {
            if let Some(b) = complement_longest_word(&m, cap)? {
                bound = Some(bound.map_or(b, |x| x.max(b)));
            }
        } else {
            return Err(violation(i, "finite or cofinite"));
        }
    }
    let witness = match finite_one {
        None => {
            let len = bound.map_or(0, |b| b + 1);
            let first = alphabet.letters().next().expect("alphabets are nonempty");
            Some(vec![first; len])
        }
        Some(i) => {
            let mut found = None;
            for w in finite_words(minimal(&list[i], cap)?.automaton(), limits.product_cap)? {
                if accepted_by_all(list, &w)? {
                    found = Some(w);
                    break;
                }
            }
            found
        }
    };
    Ok(IneResult::from_witness(witness, Strategy::Dd0))
}

fn accepted_by_all(list: &[Automaton], w: &[Letter]) -> Result<bool> {
    for a in list {
        if !a.accepts(w)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// DFAs: enumerate the transition monoid of the disjoint union from the
/// identity and look for an element sending every initial state to a final
/// state of its automaton. Breadth-first order makes the witness the least
/// shortest common word.
pub fn solve_via_monoid(list: &[Automaton], cap: usize) -> Result<IneResult> {
    let alphabet = common_alphabet(list)?;
    let dfas = list
        .iter()
        .map(|a| Dfa::from_automaton(a.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut offsets = Vec::with_capacity(dfas.len());
    let mut total = 0;
    for d in &dfas {
        offsets.push(total);
        total += d.state_count();
    }
    // generator maps on the union
    let gens: Vec<Vec<State>> = alphabet
        .letters()
        .map(|x| {
            dfas.iter()
                .zip(&offsets)
                .flat_map(|(d, &off)| (0..d.state_count()).map(move |q| d.next(q, x) + off))
                .collect()
        })
        .collect();
    let good = |t: &[State]| {
        dfas.iter()
            .zip(&offsets)
            .all(|(d, &off)| d.is_final(t[d.initial() + off] - off))
    };
    let identity: Vec<State> = (0..total).collect();
    let mut parent: HashMap<Vec<State>, Option<(Vec<State>, Letter)>> = HashMap::new();
    parent.insert(identity.clone(), None);
    let mut queue = VecDeque::from([identity]);
    let mut hit = None;
    while let Some(t) = queue.pop_front() {
        if good(&t) {
            hit = Some(t);
            break;
        }
        for (x, g) in gens.iter().enumerate() {
            // t then x
            let u: Vec<State> = t.iter().map(|&q| g[q]).collect();
            if !parent.contains_key(&u) {
                if parent.len() >= cap {
                    return Err(Error::CapExceeded {
                        what: "transition monoid",
                        cap,
                    });
                }
                parent.insert(u.clone(), Some((t.clone(), x)));
                queue.push_back(u);
            }
        }
    }
    let witness = hit.map(|mut t| {
        let mut w = Vec::new();
        while let Some(Some((p, x))) = parent.get(&t) {
            w.push(*x);
            t = p.clone();
        }
        w.reverse();
        w
    });
    Ok(IneResult::from_witness(witness, Strategy::Monoid))
}

fn all_deterministic(list: &[Automaton]) -> bool {
    list.iter().all(Automaton::is_deterministic)
}

/// Strategies other than the default that are sound for the instance's
/// promise and input shape; used to cross-check verdicts.
pub fn alternative_strategies(inst: &IneInstance) -> Vec<Strategy> {
    let list = inst.automata();
    let dfas = all_deterministic(list);
    let po = list.iter().all(is_partially_ordered);
    let mut out = Vec::new();
    if dfas {
        out.push(Strategy::Monoid);
    }
    match inst.promise() {
        Promise::St1 | Promise::St32 if po || dfas => out.push(Strategy::PonfaBounded),
        Promise::Commutative => out.push(Strategy::CommutativeNfa),
        Promise::CommutativeSf => {
            out.extend([Strategy::CommutativeNfa, Strategy::Commutative, Strategy::Tsf]);
            if po {
                out.push(Strategy::CommutativePonfa);
            }
        }
        _ => {}
    }
    out
}

fn default_strategy(inst: &IneInstance, limits: &Limits) -> Result<Strategy> {
    let list = inst.automata();
    let po_or_dfa = list
        .iter()
        .all(|a| is_partially_ordered(a) || a.is_deterministic());
    Ok(match inst.promise() {
        Promise::St0 => Strategy::St0,
        Promise::StHalf => Strategy::StHalf,
        Promise::Dd0 => Strategy::Dd0,
        Promise::St1 | Promise::St32 if po_or_dfa => Strategy::PonfaBounded,
        Promise::St1 | Promise::St32 => Strategy::Generic,
        Promise::Commutative => Strategy::CommutativeNfa,
        Promise::CommutativeSf if all_deterministic(list) => Strategy::Commutative,
        Promise::CommutativeSf if list.iter().all(is_partially_ordered) => {
            Strategy::CommutativePonfa
        }
        Promise::CommutativeSf => Strategy::Tsf,
        Promise::None => {
            let opts = ClassifyOptions {
                determinize_cap: limits.determinize_cap,
                monoid_cap: limits.monoid_cap,
            };
            let reports = list
                .iter()
                .map(|a| classify_with(a, &opts))
                .collect::<Result<Vec<_>>>()?;
            if reports.iter().all(|r| r.suggested_level == Level::St0) {
                Strategy::St0
            } else if reports.iter().all(|r| r.shuffle_ideal) {
                Strategy::StHalf
            } else if reports.iter().all(|r| r.finite || r.cofinite) {
                Strategy::Dd0
            } else {
                Strategy::Oracle
            }
        }
    })
}

fn run_strategy(list: &[Automaton], strategy: Strategy, opts: &SolveOptions) -> Result<IneResult> {
    let limits = &opts.limits;
    // commutative solvers re-check their own preconditions only when the
    // promise has not been verified already
    let comm = limits.commutative(!opts.verify_promise);
    match strategy {
        Strategy::St0 => solve_st0(list),
        Strategy::StHalf => solve_st_half(list, opts.certify),
        Strategy::Dd0 => solve_dd0(list, limits),
        Strategy::Monoid => solve_via_monoid(list, limits.monoid_cap),
        Strategy::CommutativeNfa => Ok(IneResult::from_witness(
            commutative_nfa_ine(list, &comm)?,
            strategy,
        )),
        Strategy::Commutative => {
            let dfas = list
                .iter()
                .map(|a| {
                    if a.is_deterministic() {
                        Dfa::from_automaton(a.clone())
                    } else {
                        determinize(a, limits.determinize_cap)
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            let w = commutative_dfa_ine(&dfas, &comm)?;
            Ok(IneResult::from_witness(w.map(|c| c.to_word()), strategy))
        }
        Strategy::CommutativePonfa => {
            let w = commutative_ponfa_ine(list, &comm)?;
            Ok(IneResult::from_witness(w.map(|c| c.to_word()), strategy))
        }
        Strategy::Tsf => match totally_star_free_ine(list, &comm) {
            Ok(w) => Ok(IneResult::from_witness(w.map(|c| c.to_word()), strategy)),
            // star-free but not letter-wise star-free: saturate the DFAs
            Err(Error::PromiseViolation(_)) if opts.verify_promise => {
                run_strategy(list, Strategy::Commutative, opts)
            }
            Err(e) => Err(e),
        },
        Strategy::PonfaBounded => Ok(IneResult::from_witness(
            bounded_witness_ine(list, limits.product_cap)?,
            strategy,
        )),
        Strategy::Oracle | Strategy::Generic => Ok(IneResult::from_witness(
            ine_oracle(list, limits.product_cap)?,
            strategy,
        )),
    }
}

/// Picks a strategy from the promise (or from classification when there is
/// none), verifies the promise if asked, solves, and checks the witness.
pub fn solve(inst: &IneInstance, opts: &SolveOptions) -> Result<IneResult> {
    let list = inst.automata();
    let checked = if opts.verify_promise {
        verify_promise(list, inst.promise(), &opts.limits)?
    } else {
        false
    };
    let strategy = match opts.strategy {
        Some(s) => s,
        None => default_strategy(inst, &opts.limits)?,
    };
    let mut result = run_strategy(list, strategy, opts)?;
    result.promise_checked = checked && inst.promise() != Promise::None;
    if let Some(w) = &result.witness {
        for (i, a) in list.iter().enumerate() {
            if !a.accepts(w)? {
                return Err(Error::PromiseViolation(format!(
                    "witness from strategy {strategy} is rejected by automaton {i}"
                )));
            }
        }
    } else if opts.certify && !matches!(strategy, Strategy::Oracle | Strategy::Generic) {
        if let Some(w) = ine_oracle(list, opts.limits.product_cap)? {
            return Err(Error::PromiseViolation(format!(
                "strategy {strategy} reported empty but a common word of length {} exists",
                w.len()
            )));
        }
    }
    Ok(result)
}

/// [`solve`] with default options.
pub fn solve_default(inst: &IneInstance) -> Result<IneResult> {
    solve(inst, &SolveOptions::default())
}
