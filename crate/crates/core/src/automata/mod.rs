// SPDX-License-Identifier: Apache-2.0
//! Finite automata over an ordered alphabet.
//!
//! An [`Automaton`] is a nondeterministic automaton without ε-transitions and
//! with a set of initial states. States are the integers `0..state_count` and
//! letters are indices into the [`Alphabet`]. The alphabet order is meaningful:
//! it fixes the lexicographic order used for witnesses and canonical words.
//!
//! Deterministic automata are wrapped in [`Dfa`], which guarantees a single
//! initial state and a total transition function.

mod dfa;
mod format;
mod search;

pub use dfa::{complement, determinize, equivalent, minimize, Dfa, DEFAULT_DETERMINIZE_CAP};
pub use format::{parse_automata, parse_automaton};
pub use search::{
    complement_longest_word, explore_product, ine_oracle, is_cofinite, is_finite,
    longest_word_length, product, product_invocations, shortest_word, DEFAULT_PRODUCT_CAP,
};

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

pub type State = usize;
pub type Letter = usize;
/// A word as a sequence of letter indices.
pub type Word = Vec<Letter>;

/// Ordered set of distinct printable symbols. Symbols may not contain
/// whitespace, `#` or `:`, which the text format reserves.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Alphabet {
    symbols: Vec<String>,
}

impl Alphabet {
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        let mut seen = BTreeSet::new();
        for s in &symbols {
            if s.is_empty()
                || s
                    .chars()
                    .any(|c| c.is_whitespace() || c.is_control() || c == '#' || c == ':')
            {
                return Err(Error::InvalidSymbol(s.clone()));
            }
            if !seen.insert(s.as_str()) {
                return Err(Error::DuplicateSymbol(s.clone()));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// The alphabet `{1, 2, ..., n}` with symbols written in decimal.
    pub fn numeric(n: usize) -> Result<Self> {
        Alphabet::new((1..=n).map(|i| i.to_string()))
    }

    /// Alphabet whose symbols are the characters of `chars`.
    pub fn from_chars(chars: &str) -> Result<Self> {
        Alphabet::new(chars.chars().map(String::from))
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    /// Always false; alphabets are nonempty by construction.
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn symbol(&self, letter: Letter) -> &str {
        &self.symbols[letter]
    }

    pub fn index_of(&self, symbol: &str) -> Option<Letter> {
        self.symbols.iter().position(|s| s == symbol)
    }

    pub fn letters(&self) -> std::ops::Range<Letter> {
        0..self.symbols.len()
    }

    fn single_char_symbols(&self) -> bool {
        self.symbols.iter().all(|s| s.chars().count() == 1)
    }

    /// Renders a word. Symbols are concatenated when every symbol is a single
    /// character and separated by spaces otherwise.
    pub fn format_word(&self, word: &[Letter]) -> String {
        let parts = word.iter().map(|&l| self.symbols[l].as_str());
        if self.single_char_symbols() {
            parts.collect()
        } else {
            parts.collect::<Vec<_>>().join(" ")
        }
    }

    /// Inverse of [`Alphabet::format_word`].
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let lookup = |s: &str| {
            self.index_of(s)
                .ok_or_else(|| Error::Invalid(format!("unknown symbol `{s}`")))
        };
        if self.single_char_symbols() {
            text.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| lookup(&c.to_string()))
                .collect()
        } else {
            text.split_whitespace().map(lookup).collect()
        }
    }

    pub fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|&&l| l >= self.len()) {
            Some(&letter) => Err(Error::LetterOutOfRange {
                letter,
                size: self.len(),
            }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbols.join(" "))
    }
}

/// Nondeterministic finite automaton with a set of initial states.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    alphabet: Alphabet,
    // delta[state][letter], sorted and deduplicated
    delta: Vec<Vec<Vec<State>>>,
    initials: Vec<State>,
    finals: Vec<bool>,
    name: Option<String>,
}

/// Collects states and transitions before validating them into an [`Automaton`].
#[derive(Clone, Debug)]
pub struct AutomatonBuilder {
    alphabet: Alphabet,
    state_count: usize,
    edges: Vec<(State, Letter, State)>,
    initials: Vec<State>,
    finals: Vec<State>,
    name: Option<String>,
}

impl AutomatonBuilder {
    pub fn initial(mut self, q: State) -> Self {
        self.initials.push(q);
        self
    }

    pub fn accepting(mut self, q: State) -> Self {
        self.finals.push(q);
        self
    }

    pub fn edge(mut self, p: State, a: Letter, q: State) -> Self {
        self.edges.push((p, a, q));
        self
    }

    /// Adds `p -> q` on every letter.
    pub fn edge_all(mut self, p: State, q: State) -> Self {
        for a in self.alphabet.letters() {
            self.edges.push((p, a, q));
        }
        self
    }

    pub fn name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn add_initial(&mut self, q: State) {
        self.initials.push(q);
    }

    pub fn add_accepting(&mut self, q: State) {
        self.finals.push(q);
    }

    pub fn add_edge(&mut self, p: State, a: Letter, q: State) {
        self.edges.push((p, a, q));
    }

    pub fn add_edge_all(&mut self, p: State, q: State) {
        for a in self.alphabet.letters() {
            self.edges.push((p, a, q));
        }
    }

    /// Appends a fresh state and returns its index.
    pub fn add_state(&mut self) -> State {
        self.state_count += 1;
        self.state_count - 1
    }

    pub fn state_count(&self) -> usize {
        self.state_count
    }

    pub fn build(self) -> Result<Automaton> {
        let n = self.state_count;
        let k = self.alphabet.len();
        let check = |q: State| {
            if q < n {
                Ok(())
            } else {
                Err(Error::StateOutOfRange { state: q, count: n })
            }
        };
        let mut delta = vec![vec![Vec::new(); k]; n];
        for &(p, a, q) in &self.edges {
            check(p)?;
            check(q)?;
            if a >= k {
                return Err(Error::LetterOutOfRange { letter: a, size: k });
            }
            delta[p][a].push(q);
        }
        for row in &mut delta {
            for succ in row.iter_mut() {
                succ.sort_unstable();
                succ.dedup();
            }
        }
        let mut initials = self.initials;
        for &q in &initials {
            check(q)?;
        }
        initials.sort_unstable();
        initials.dedup();
        if initials.is_empty() {
            return Err(Error::NoInitialState);
        }
        let mut finals = vec![false; n];
        for &q in &self.finals {
            check(q)?;
            finals[q] = true;
        }
        Ok(Automaton {
            alphabet: self.alphabet,
            delta,
            initials,
            finals,
            name: self.name,
        })
    }
}

impl Automaton {
    pub fn builder(alphabet: Alphabet, state_count: usize) -> AutomatonBuilder {
        AutomatonBuilder {
            alphabet,
            state_count,
            edges: Vec::new(),
            initials: Vec::new(),
            finals: Vec::new(),
            name: None,
        }
    }

    /// One-state automaton accepting `Σ*` (if `accepting`) or `∅`.
    pub fn trivial(alphabet: Alphabet, accepting: bool) -> Automaton {
        let mut b = Automaton::builder(alphabet, 1).initial(0).edge_all(0, 0);
        if accepting {
            b.add_accepting(0);
        }
        b.build().expect("trivial automaton is well formed")
    }

    /// Automaton accepting exactly the given word.
    pub fn from_word(alphabet: Alphabet, word: &[Letter]) -> Result<Automaton> {
        alphabet.check_word(word)?;
        let mut b = Automaton::builder(alphabet, word.len() + 1)
            .initial(0)
            .accepting(word.len());
        for (i, &a) in word.iter().enumerate() {
            b.add_edge(i, a, i + 1);
        }
        b.build()
    }

    /// Automaton for `Σ* a Σ*`.
    pub fn contains_letter(alphabet: Alphabet, a: Letter) -> Result<Automaton> {
        Automaton::builder(alphabet, 2)
            .initial(0)
            .accepting(1)
            .edge_all(0, 0)
            .edge(0, a, 1)
            .edge_all(1, 1)
            .build()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn state_count(&self) -> usize {
        self.delta.len()
    }

    pub fn initials(&self) -> &[State] {
        &self.initials
    }

    pub fn is_final(&self, q: State) -> bool {
        self.finals[q]
    }

    pub fn finals(&self) -> impl Iterator<Item = State> + '_ {
        self.finals
            .iter()
            .enumerate()
            .filter_map(|(q, &f)| f.then_some(q))
    }

    pub fn final_flags(&self) -> &[bool] {
        &self.finals
    }

    pub fn successors(&self, q: State, a: Letter) -> &[State] {
        &self.delta[q][a]
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// All transitions `(p, a, q)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (State, Letter, State)> + '_ {
        self.delta.iter().enumerate().flat_map(|(p, row)| {
            row.iter()
                .enumerate()
                .flat_map(move |(a, succ)| succ.iter().map(move |&q| (p, a, q)))
        })
    }

    pub fn transition_count(&self) -> usize {
        self.delta.iter().flatten().map(Vec::len).sum()
    }

    /// Successor set of a sorted state set.
    pub fn step(&self, set: &[State], a: Letter) -> Vec<State> {
        let mut out: Vec<State> = set
            .iter()
            .flat_map(|&q| self.delta[q][a].iter().copied())
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn run(&self, set: &[State], word: &[Letter]) -> Vec<State> {
        word.iter()
            .fold(set.to_vec(), |cur, &a| self.step(&cur, a))
    }

    pub fn accepts(&self, word: &[Letter]) -> Result<bool> {
        self.alphabet.check_word(word)?;
        Ok(self
            .run(&self.initials, word)
            .iter()
            .any(|&q| self.finals[q]))
    }

    /// True when there is one initial state and at most one successor per
    /// state and letter.
    pub fn is_deterministic(&self) -> bool {
        self.initials.len() == 1 && self.delta.iter().flatten().all(|s| s.len() <= 1)
    }

    pub fn is_complete(&self) -> bool {
        self.delta.iter().flatten().all(|s| !s.is_empty())
    }

    /// States reachable from some initial state.
    pub fn reachable(&self) -> Vec<bool> {
        let mut seen = vec![false; self.state_count()];
        let mut stack = self.initials.clone();
        for &q in &stack {
            seen[q] = true;
        }
        while let Some(p) = stack.pop() {
            for succ in &self.delta[p] {
                for &q in succ {
                    if !seen[q] {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        seen
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let preds = self.predecessors();
        let mut seen = self.finals.clone();
        let mut stack: Vec<State> = self.finals().collect();
        while let Some(q) = stack.pop() {
            for &p in &preds[q] {
                if !seen[p] {
                    seen[p] = true;
                    stack.push(p);
                }
            }
        }
        seen
    }

    /// `preds[q]` lists every `p` with a transition `p -> q` (any letter).
    pub fn predecessors(&self) -> Vec<Vec<State>> {
        let mut preds = vec![Vec::new(); self.state_count()];
        for (p, _, q) in self.edges() {
            preds[q].push(p);
        }
        for v in &mut preds {
            v.sort_unstable();
            v.dedup();
        }
        preds
    }

    /// `reach[p][q]` iff `q` is reachable from `p` (reflexive).
    pub fn reachability_matrix(&self) -> Vec<Vec<bool>> {
        let n = self.state_count();
        (0..n)
            .map(|s| {
                let mut seen = vec![false; n];
                seen[s] = true;
                let mut stack = vec![s];
                while let Some(p) = stack.pop() {
                    for succ in &self.delta[p] {
                        for &q in succ {
                            if !seen[q] {
                                seen[q] = true;
                                stack.push(q);
                            }
                        }
                    }
                }
                seen
            })
            .collect()
    }

    /// Same transitions with a different initial set.
    pub fn with_initials(&self, initials: &[State]) -> Result<Automaton> {
        self.rebuild(initials, None)
    }

    /// Same transitions with different initial and final sets.
    pub fn with_initials_and_finals(
        &self,
        initials: &[State],
        finals: &[State],
    ) -> Result<Automaton> {
        self.rebuild(initials, Some(finals))
    }

    fn rebuild(&self, initials: &[State], finals: Option<&[State]>) -> Result<Automaton> {
        let n = self.state_count();
        let mut init = initials.to_vec();
        init.sort_unstable();
        init.dedup();
        if init.is_empty() {
            return Err(Error::NoInitialState);
        }
        if let Some(&q) = init.iter().find(|&&q| q >= n) {
            return Err(Error::StateOutOfRange { state: q, count: n });
        }
        let finals = match finals {
            Some(fs) => {
                let mut flags = vec![false; n];
                for &q in fs {
                    if q >= n {
                        return Err(Error::StateOutOfRange { state: q, count: n });
                    }
                    flags[q] = true;
                }
                flags
            }
            None => self.finals.clone(),
        };
        Ok(Automaton {
            alphabet: self.alphabet.clone(),
            delta: self.delta.clone(),
            initials: init,
            finals,
            name: None,
        })
    }

    /// Unary automaton over `{a}` keeping only the `a`-transitions.
    pub fn restrict_to_letter(&self, a: Letter) -> Automaton {
        let alphabet = Alphabet::new([self.alphabet.symbol(a).to_string()])
            .expect("single symbol alphabet");
        Automaton {
            alphabet,
            delta: self.delta.iter().map(|row| vec![row[a].clone()]).collect(),
            initials: self.initials.clone(),
            finals: self.finals.clone(),
            name: None,
        }
    }

    /// Adds a self-loop on every letter at every state. The result accepts
    /// `L ⧢ Σ*`, the upward closure of `L` under letter insertion.
    pub fn with_all_self_loops(&self) -> Automaton {
        let mut out = self.clone();
        for (q, row) in out.delta.iter_mut().enumerate() {
            for succ in row.iter_mut() {
                if let Err(pos) = succ.binary_search(&q) {
                    succ.insert(pos, q);
                }
            }
        }
        out.name = None;
        out
    }

    /// Removes the states not marked in `keep`, renumbering the rest in order.
    /// Fails if no initial state survives.
    pub fn retain_states(&self, keep: &[bool]) -> Result<Automaton> {
        let mut map = vec![usize::MAX; self.state_count()];
        let mut next = 0;
        for q in 0..self.state_count() {
            if keep[q] {
                map[q] = next;
                next += 1;
            }
        }
        let mut b = Automaton::builder(self.alphabet.clone(), next);
        for (p, a, q) in self.edges() {
            if keep[p] && keep[q] {
                b.add_edge(map[p], a, map[q]);
            }
        }
        for &q in &self.initials {
            if keep[q] {
                b.add_initial(map[q]);
            }
        }
        for q in self.finals() {
            if keep[q] {
                b.add_accepting(map[q]);
            }
        }
        let mut out = b.build()?;
        out.name = self.name.clone();
        Ok(out)
    }

    /// Disjoint union; the language is the union of the languages.
    pub fn disjoint_union(parts: &[Automaton]) -> Result<Automaton> {
        let first = parts.first().ok_or(Error::EmptyInstance)?;
        let total: usize = parts.iter().map(Automaton::state_count).sum();
        let mut b = Automaton::builder(first.alphabet.clone(), total);
        let mut offset = 0;
        for part in parts {
            if part.alphabet != first.alphabet {
                return Err(Error::AlphabetMismatch);
            }
            for (p, a, q) in part.edges() {
                b.add_edge(p + offset, a, q + offset);
            }
            for &q in part.initials() {
                b.add_initial(q + offset);
            }
            for q in part.finals() {
                b.add_accepting(q + offset);
            }
            offset += part.state_count();
        }
        b.build()
    }

    /// Re-expresses the automaton over `alphabet`, matching letters by symbol.
    /// Used to align automata whose alphabets list symbols in different orders.
    pub fn relabel(&self, alphabet: Alphabet) -> Result<Automaton> {
        let mut map = HashMap::new();
        for (i, s) in self.alphabet.symbols().iter().enumerate() {
            let j = alphabet
                .index_of(s)
                .ok_or(Error::AlphabetMismatch)?;
            map.insert(i, j);
        }
        let mut b = Automaton::builder(alphabet, self.state_count());
        for (p, a, q) in self.edges() {
            b.add_edge(p, map[&a], q);
        }
        for &q in &self.initials {
            b.add_initial(q);
        }
        for q in self.finals() {
            b.add_accepting(q);
        }
        let mut out = b.build()?;
        out.name = self.name.clone();
        Ok(out)
    }
}

/// Checks that a list of automata is nonempty and shares one alphabet.
pub fn common_alphabet(automata: &[Automaton]) -> Result<&Alphabet> {
    let first = automata.first().ok_or(Error::EmptyInstance)?;
    if automata.iter().any(|a| a.alphabet != first.alphabet) {
        return Err(Error::AlphabetMismatch);
    }
    Ok(&first.alphabet)
}

/// All words over `k` letters of length exactly `len`, in lexicographic order.
pub fn words_of_length(k: usize, len: usize) -> impl Iterator<Item = Word> {
    let total = k.checked_pow(len as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut code| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = code % k;
            code /= k;
        }
        w
    })
}

/// All words over `k` letters of length at most `max_len`, in shortlex order.
pub fn words_up_to(k: usize, max_len: usize) -> impl Iterator<Item = Word> {
    (0..=max_len).flat_map(move |len| words_of_length(k, len))
}
