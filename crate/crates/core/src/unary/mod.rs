// SPDX-License-Identifier: Apache-2.0
//! Unary automata as semilinear length sets.

mod semilinear;

pub use semilinear::{
    progression_threshold, semilinear_intersect, semilinear_member, Natural, Progression,
    SemilinearSet,
};

use log::warn;
use serde::Serialize;

use crate::automata::{common_alphabet, determinize, Automaton};
use crate::error::{Error, Result};

/// Accept bits of a unary DFA in tail-and-cycle shape: lengths `0..T` are the
/// tail, then lengths repeat with period `cycle.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TailCycle {
    pub tail: Vec<bool>,
    pub cycle: Vec<bool>,
}

impl TailCycle {
    /// Reads the shape off the subset automaton, which for one letter is a
    /// path that closes into a single cycle.
    pub fn of(aut: &Automaton, cap: usize) -> Result<TailCycle> {
        require_unary(aut)?;
        let d = determinize(aut, cap)?;
        let mut first_visit = vec![usize::MAX; d.state_count()];
        let mut bits = Vec::new();
        let mut q = d.initial();
        while first_visit[q] == usize::MAX {
            first_visit[q] = bits.len();
            bits.push(d.is_final(q));
            q = d.next(q, 0);
        }
        let cycle = bits.split_off(first_visit[q]);
        Ok(TailCycle { tail: bits, cycle })
    }

    pub fn accepts_length(&self, n: usize) -> bool {
        match self.tail.get(n) {
            Some(&b) => b,
            None => self.cycle[(n - self.tail.len()) % self.cycle.len()],
        }
    }
}

fn require_unary(aut: &Automaton) -> Result<()> {
    if aut.alphabet().len() != 1 {
        return Err(Error::Invalid(format!(
            "expected a unary automaton, alphabet has {} letters",
            aut.alphabet().len()
        )));
    }
    Ok(())
}

/// The set `{n : a^n ∈ L(aut)}`.
pub fn unary_lengths(aut: &Automaton, cap: usize) -> Result<SemilinearSet<u64>> {
    Ok(lengths_of(&TailCycle::of(aut, cap)?))
}

pub fn lengths_of(tc: &TailCycle) -> SemilinearSet<u64> {
    let t = tc.tail.len() as u64;
    let c = tc.cycle.len() as u64;
    let finite = (0..t).filter(|&i| tc.tail[i as usize]);
    let progs = (0..c)
        .filter(|&i| tc.cycle[i as usize])
        .map(|i| Progression::new(t + i, c).expect("cycle is nonempty"));
    SemilinearSet::new(finite.collect::<Vec<_>>(), progs.collect::<Vec<_>>())
}

/// Smallest `N` such that `a^N ∈ L` decides `a^(N+k) ∈ L` for every `k`.
/// `None` when the cycle mixes accepting and rejecting positions, in which
/// case the language is not star-free.
pub fn star_free_threshold(aut: &Automaton, cap: usize) -> Result<Option<usize>> {
    let tc = TailCycle::of(aut, cap)?;
    let n = aut.state_count();
    if tc.tail.len() > n * n {
        warn!(
            "unary tail of length {} exceeds the quadratic bound {} for {} states",
            tc.tail.len(),
            n * n,
            n
        );
    }
    Ok(threshold_of(&tc))
}

pub fn threshold_of(tc: &TailCycle) -> Option<usize> {
    let c = tc.cycle[0];
    if tc.cycle.iter().any(|&b| b != c) {
        return None;
    }
    Some(tc.tail.iter().rposition(|&b| b != c).map_or(0, |i| i + 1))
}

/// Least length accepted by every automaton in `list`.
pub fn unary_ine(list: &[Automaton], cap: usize) -> Result<Option<u64>> {
    common_alphabet(list)?;
    let mut acc: Option<SemilinearSet<u64>> = None;
    for aut in list {
        let s = unary_lengths(aut, cap)?;
        let next = match acc {
            None => s,
            Some(prev) => prev.intersect(&s),
        };
        if next.is_empty() {
            return Ok(None);
        }
        acc = Some(next);
    }
    Ok(acc.and_then(|s| s.min()))
}
