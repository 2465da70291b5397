// SPDX-License-Identifier: Apache-2.0
use std::collections::{HashMap, VecDeque};
use std::ops::Deref;

use super::{Alphabet, Automaton, Letter, State};
use crate::error::{Error, Result};

/// Default cap on the number of subset states built by [`determinize`].
pub const DEFAULT_DETERMINIZE_CAP: usize = 1 << 20;

/// A deterministic, total automaton.
///
/// Dereferences to the underlying [`Automaton`], so every structural query on
/// automata also applies to DFAs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dfa {
    aut: Automaton,
}

impl Deref for Dfa {
    type Target = Automaton;

    fn deref(&self) -> &Automaton {
        &self.aut
    }
}

impl Dfa {
    /// Wraps a deterministic automaton, completing missing transitions with a
    /// fresh non-final sink.
    pub fn from_automaton(aut: Automaton) -> Result<Dfa> {
        if aut.initials().len() != 1 {
            return Err(Error::NotDeterministic(format!(
                "{} initial states",
                aut.initials().len()
            )));
        }
        if let Some((q, a)) = (0..aut.state_count())
            .flat_map(|q| aut.alphabet().letters().map(move |a| (q, a)))
            .find(|&(q, a)| aut.successors(q, a).len() > 1)
        {
            return Err(Error::NotDeterministic(format!(
                "state {q} has several successors on `{}`",
                aut.alphabet().symbol(a)
            )));
        }
        if aut.is_complete() {
            return Ok(Dfa { aut });
        }
        let sink = aut.state_count();
        let mut b = Automaton::builder(aut.alphabet().clone(), sink + 1).initial(aut.initials()[0]);
        for (p, a, q) in aut.edges() {
            b.add_edge(p, a, q);
        }
        for q in 0..sink {
            for a in aut.alphabet().letters() {
                if aut.successors(q, a).is_empty() {
                    b.add_edge(q, a, sink);
                }
            }
        }
        b.add_edge_all(sink, sink);
        for q in aut.finals() {
            b.add_accepting(q);
        }
        let mut completed = b.build()?;
        if let Some(name) = aut.name() {
            completed = completed.with_name(name);
        }
        Ok(Dfa { aut: completed })
    }

    /// Builds a DFA from a full transition table `table[state][letter]`.
    pub fn from_table(
        alphabet: Alphabet,
        table: &[Vec<State>],
        initial: State,
        finals: &[bool],
    ) -> Result<Dfa> {
        let mut b = Automaton::builder(alphabet, table.len()).initial(initial);
        for (p, row) in table.iter().enumerate() {
            for (a, &q) in row.iter().enumerate() {
                b.add_edge(p, a, q);
            }
            if finals.get(p).copied().unwrap_or(false) {
                b.add_accepting(p);
            }
        }
        let aut = b.build()?;
        if !aut.is_complete() {
            return Err(Error::NotDeterministic("incomplete transition table".into()));
        }
        Dfa::from_automaton(aut)
    }

    pub fn automaton(&self) -> &Automaton {
        &self.aut
    }

    pub fn into_automaton(self) -> Automaton {
        self.aut
    }

    pub fn initial(&self) -> State {
        self.aut.initials()[0]
    }

    pub fn next(&self, q: State, a: Letter) -> State {
        self.aut.successors(q, a)[0]
    }

    pub fn run_from(&self, q: State, word: &[Letter]) -> State {
        word.iter().fold(q, |q, &a| self.next(q, a))
    }

    /// The map `q -> δ(q, a)`.
    pub fn letter_map(&self, a: Letter) -> Vec<State> {
        (0..self.state_count()).map(|q| self.next(q, a)).collect()
    }

    pub fn table(&self) -> Vec<Vec<State>> {
        (0..self.state_count())
            .map(|q| self.alphabet().letters().map(|a| self.next(q, a)).collect())
            .collect()
    }

    /// Keeps the reachable part and renumbers states in breadth-first order
    /// from the initial state, visiting letters in alphabet order. Minimal
    /// DFAs of equal languages have equal canonical forms.
    pub fn canonical(&self) -> Dfa {
        let n = self.state_count();
        let mut order = Vec::with_capacity(n);
        let mut index = vec![usize::MAX; n];
        index[self.initial()] = 0;
        order.push(self.initial());
        let mut head = 0;
        while head < order.len() {
            let p = order[head];
            head += 1;
            for a in self.alphabet().letters() {
                let q = self.next(p, a);
                if index[q] == usize::MAX {
                    index[q] = order.len();
                    order.push(q);
                }
            }
        }
        let table: Vec<Vec<State>> = order
            .iter()
            .map(|&p| {
                self.alphabet()
                    .letters()
                    .map(|a| index[self.next(p, a)])
                    .collect()
            })
            .collect();
        let finals: Vec<bool> = order.iter().map(|&p| self.is_final(p)).collect();
        let mut out = Dfa::from_table(self.alphabet().clone(), &table, 0, &finals)
            .expect("canonical table is total");
        if let Some(name) = self.name() {
            out.aut = out.aut.with_name(name);
        }
        out
    }
}

/// Subset construction. Subsets are numbered in breadth-first discovery order;
/// the empty subset becomes the sink when it is reachable.
pub fn determinize(aut: &Automaton, cap: usize) -> Result<Dfa> {
    let k = aut.alphabet().len();
    let mut index: HashMap<Vec<State>, State> = HashMap::new();
    let mut subsets: Vec<Vec<State>> = Vec::new();
    let mut table: Vec<Vec<State>> = Vec::new();
    let start = aut.initials().to_vec();
    index.insert(start.clone(), 0);
    subsets.push(start);
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let mut row = Vec::with_capacity(k);
        for a in 0..k {
            let next = aut.step(&subsets[i], a);
            let j = match index.get(&next) {
                Some(&j) => j,
                None => {
                    if subsets.len() >= cap {
                        return Err(Error::CapExceeded {
                            what: "subset construction",
                            cap,
                        });
                    }
                    let j = subsets.len();
                    index.insert(next.clone(), j);
                    subsets.push(next);
                    queue.push_back(j);
                    j
                }
            };
            row.push(j);
        }
        if table.len() <= i {
            table.resize(i + 1, Vec::new());
        }
        table[i] = row;
    }
    let finals: Vec<bool> = subsets
        .iter()
        .map(|s| s.iter().any(|&q| aut.is_final(q)))
        .collect();
    let mut dfa = Dfa::from_table(aut.alphabet().clone(), &table, 0, &finals)?;
    if let Some(name) = aut.name() {
        dfa.aut = dfa.aut.with_name(name);
    }
    Ok(dfa)
}

/// Moore partition refinement on the reachable part. The result is in
/// [`Dfa::canonical`] form, so two minimal DFAs are isomorphic iff equal.
pub fn minimize(dfa: &Dfa) -> Dfa {
    let d = dfa.canonical();
    let n = d.state_count();
    let k = d.alphabet().len();
    let mut class: Vec<usize> = (0..n).map(|q| usize::from(d.is_final(q))).collect();
    let mut class_count = class.iter().copied().max().map_or(0, |m| m + 1);
    loop {
        let mut sigs: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut next = vec![0; n];
        for q in 0..n {
            let mut sig = Vec::with_capacity(k + 1);
            sig.push(class[q]);
            sig.extend((0..k).map(|a| class[d.next(q, a)]));
            let len = sigs.len();
            next[q] = *sigs.entry(sig).or_insert(len);
        }
        let count = sigs.len();
        class = next;
        if count == class_count {
            break;
        }
        class_count = count;
    }
    let mut table = vec![vec![0; k]; class_count];
    let mut finals = vec![false; class_count];
    for q in 0..n {
        for a in 0..k {
            table[class[q]][a] = class[d.next(q, a)];
        }
        finals[class[q]] = d.is_final(q);
    }
    let mut out = Dfa::from_table(d.alphabet().clone(), &table, class[d.initial()], &finals)
        .expect("quotient table is total")
        .canonical();
    if let Some(name) = dfa.name() {
        out.aut = out.aut.with_name(name);
    }
    out
}

/// Same transitions with final and non-final states swapped.
pub fn complement(dfa: &Dfa) -> Dfa {
    let finals: Vec<bool> = (0..dfa.state_count()).map(|q| !dfa.is_final(q)).collect();
    Dfa::from_table(dfa.alphabet().clone(), &dfa.table(), dfa.initial(), &finals)
        .expect("complement of a total DFA is total")
}

/// Language equality of two automata over the same alphabet, decided by
/// comparing canonical minimal DFAs.
pub fn equivalent(a: &Automaton, b: &Automaton, cap: usize) -> Result<bool> {
    if a.alphabet() != b.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let ma = minimize(&determinize(a, cap)?);
    let mb = minimize(&determinize(b, cap)?);
    Ok(ma.table() == mb.table() && same_finals(&ma, &mb))
}

fn same_finals(a: &Dfa, b: &Dfa) -> bool {
    a.final_flags() == b.final_flags()
}
