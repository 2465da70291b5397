// SPDX-License-Identifier: Apache-2.0
//! Transformation monoid membership and its reduction to intersection
//! non-emptiness.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::automata::{Alphabet, Automaton, State};
use crate::error::{Error, Result};
use crate::ine::{IneInstance, Promise};

/// Generators and a target, all total maps on `0..domain_size`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformationSystem {
    domain_size: usize,
    generators: Vec<Vec<State>>,
    target: Vec<State>,
}

impl TransformationSystem {
    pub fn new(
        domain_size: usize,
        generators: Vec<Vec<State>>,
        target: Vec<State>,
    ) -> Result<TransformationSystem> {
        if domain_size == 0 {
            return Err(Error::Invalid("domain must be nonempty".into()));
        }
        if generators.is_empty() {
            return Err(Error::Invalid("at least one generator is required".into()));
        }
        for map in generators.iter().chain(std::iter::once(&target)) {
            if map.len() != domain_size {
                return Err(Error::Invalid(format!(
                    "map {map:?} does not have {domain_size} entries"
                )));
            }
            if let Some(&q) = map.iter().find(|&&q| q >= domain_size) {
                return Err(Error::StateOutOfRange {
                    state: q,
                    count: domain_size,
                });
            }
        }
        Ok(TransformationSystem {
            domain_size,
            generators,
            target,
        })
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn generators(&self) -> &[Vec<State>] {
        &self.generators
    }

    pub fn target(&self) -> &[State] {
        &self.target
    }

    /// Parses `domain: N`, one `gen: …` line per generator and a
    /// `target: …` line; maps list the images of `0..N`.
    pub fn parse(text: &str) -> Result<TransformationSystem> {
        let mut domain = None;
        let mut gens = Vec::new();
        let mut target = None;
        let map = |line_no: usize, s: &str| -> Result<Vec<State>> {
            s.split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(line_no, format!("bad state `{t}`"))))
                .collect()
        };
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("domain:") {
                domain = Some(
                    rest.trim()
                        .parse()
                        .map_err(|_| Error::parse(line_no, "expected a domain size"))?,
                );
            } else if let Some(rest) = line.strip_prefix("gen:") {
                gens.push(map(line_no, rest)?);
            } else if let Some(rest) = line.strip_prefix("target:") {
                target = Some(map(line_no, rest)?);
            } else {
                return Err(Error::parse(line_no, "expected `domain:`, `gen:` or `target:`"));
            }
        }
        let domain = domain.ok_or_else(|| Error::parse(1, "missing `domain:` line"))?;
        let target = target.ok_or_else(|| Error::parse(1, "missing `target:` line"))?;
        TransformationSystem::new(domain, gens, target)
    }

    fn letter_names(&self) -> Vec<String> {
        let m = self.generators.len();
        if m <= 26 {
            (0..m).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
        } else {
            (1..=m).map(|i| format!("g{i}")).collect()
        }
    }
}

impl fmt::Display for TransformationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |m: &[State]| m.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
        writeln!(f, "domain: {}", self.domain_size)?;
        for g in &self.generators {
            writeln!(f, "gen: {}", join(g))?;
        }
        writeln!(f, "target: {}", join(&self.target))
    }
}

/// One DFA per domain element `q`, sharing the generator transitions, with
/// initial state `q` and final state `t(q)`. A common word is exactly a
/// product of generators equal to the target.
pub fn monoid_to_ine(ts: &TransformationSystem) -> Result<IneInstance> {
    let alphabet = Alphabet::new(ts.letter_names())?;
    let n = ts.domain_size;
    let list = (0..n)
        .map(|q| {
            let mut b = Automaton::builder(alphabet.clone(), n)
                .initial(q)
                .accepting(ts.target[q]);
            for (x, g) in ts.generators.iter().enumerate() {
                for (p, &q) in g.iter().enumerate() {
                    b.add_edge(p, x, q);
                }
            }
            b.build().map(|a| a.with_name(format!("from_{q}")))
        })
        .collect::<Result<Vec<_>>>()?;
    IneInstance::new(list, Promise::None)
}

/// Whether the target lies in the monoid generated by the generators. The
/// identity counts as generated, by the empty product.
pub fn monoid_membership(ts: &TransformationSystem, cap: usize) -> Result<bool> {
    let identity: Vec<State> = (0..ts.domain_size).collect();
    let mut seen = HashSet::from([identity.clone()]);
    let mut queue = VecDeque::from([identity]);
    while let Some(t) = queue.pop_front() {
        if t == ts.target {
            return Ok(true);
        }
        for g in &ts.generators {
            let u: Vec<State> = t.iter().map(|&q| g[q]).collect();
            if seen.insert(u.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded {
                        what: "monoid closure",
                        cap,
                    });
                }
                queue.push_back(u);
            }
        }
    }
    Ok(false)
}
