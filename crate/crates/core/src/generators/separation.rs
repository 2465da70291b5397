// SPDX-License-Identifier: Apache-2.0
//! The languages `M_n` over `{1, …, n}` and their binary encodings `L_n`,
//! with Zimin words as the hard inputs for partially ordered automata.
//!
//! Letters of `{1, …, n}` are the indices of [`Alphabet::numeric`], so
//! index `i` stands for the number `i + 1`.

use serde::Serialize;

use crate::automata::{Alphabet, Automaton, Letter, Word};
use crate::error::{Error, Result};

/// The Zimin word `u_j` with `u_1 = 1` and `u_j = u_{j-1} j u_{j-1}`.
pub fn zimin(j: usize) -> Result<Word> {
    if !(1..=20).contains(&j) {
        return Err(Error::Invalid(format!("Zimin index {j} is outside 1..=20")));
    }
    let mut u = vec![0];
    for k in 1..j {
        let prev = u.clone();
        u.push(k);
        u.extend(prev);
    }
    Ok(u)
}

fn check_letters(w: &[Letter], n: usize) -> Result<()> {
    match w.iter().find(|&&x| x >= n) {
        Some(&letter) => Err(Error::LetterOutOfRange { letter, size: n }),
        None => Ok(()),
    }
}

/// Two occurrences of some letter `i` with only letters smaller than `i`
/// between them.
pub fn in_m_double_prime(w: &[Letter], n: usize) -> Result<bool> {
    check_letters(w, n)?;
    for (p, &i) in w.iter().enumerate() {
        for &x in &w[p + 1..] {
            if x == i {
                return Ok(true);
            }
            if x > i {
                break;
            }
        }
    }
    Ok(false)
}

/// Odd length, or in `M''_n`.
pub fn in_m(w: &[Letter], n: usize) -> Result<bool> {
    Ok(w.len() % 2 == 1 || in_m_double_prime(w, n)?)
}

/// Block encoding `i ↦ a^i b^(n-i)` over the alphabet `ab`.
pub fn phi_encode(w: &[Letter], n: usize) -> Result<Word> {
    check_letters(w, n)?;
    let mut out = Vec::with_capacity(w.len() * n);
    for &x in w {
        let v = x + 1;
        out.extend(std::iter::repeat_n(0, v));
        out.extend(std::iter::repeat_n(1, n - v));
    }
    Ok(out)
}

/// Inverse of [`phi_encode`], or `None` if `v` is not a proper encoding.
pub fn phi_decode(v: &[Letter], n: usize) -> Option<Word> {
    if n == 0 || !v.len().is_multiple_of(n) {
        return None;
    }
    v.chunks(n)
        .map(|block| {
            let a = block.iter().take_while(|&&x| x == 0).count();
            (a >= 1 && block[a..].iter().all(|&x| x == 1)).then(|| a - 1)
        })
        .collect()
}

/// Words over `ab` that are not proper encodings, or encode a word of `M_n`.
pub fn in_l(v: &[Letter], n: usize) -> Result<bool> {
    check_letters(v, 2)?;
    match phi_decode(v, n) {
        None => Ok(true),
        Some(w) => in_m(&w, n),
    }
}

fn numeric(n: usize) -> Result<Alphabet> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    Alphabet::numeric(n)
}

/// Adds the `n + 2` states of the guess-and-check automaton for `M''_n`
/// starting at `base`: `q_I = base`, `q_i = base + i`, `q_F = base + n + 1`.
fn add_mpp(b: &mut crate::automata::AutomatonBuilder, n: usize, base: usize) {
    let qi = base;
    let qf = base + n + 1;
    b.add_initial(qi);
    b.add_accepting(qf);
    b.add_edge_all(qi, qi);
    b.add_edge_all(qf, qf);
    for i in 1..=n {
        let x = i - 1;
        b.add_edge(qi, x, base + i);
        for y in 0..x {
            b.add_edge(base + i, y, base + i);
        }
        b.add_edge(base + i, x, qf);
    }
}

/// NFA with `n + 2` states for `M''_n`.
pub fn mpp_nfa(n: usize) -> Result<Automaton> {
    let mut b = Automaton::builder(numeric(n)?, n + 2);
    add_mpp(&mut b, n, 0);
    Ok(b.build()?.with_name(format!("mpp_{n}")))
}

/// NFA with `n + 4` states for `M_n`: a two-state odd-length checker
/// next to [`mpp_nfa`].
pub fn m_nfa(n: usize) -> Result<Automaton> {
    let mut b = Automaton::builder(numeric(n)?, n + 4)
        .initial(0)
        .accepting(1)
        .edge_all(0, 1)
        .edge_all(1, 0);
    add_mpp(&mut b, n, 2);
    Ok(b.build()?.with_name(format!("m_{n}")))
}

const A: Letter = 0;
const B: Letter = 1;

/// DFA with `4n - 1` states accepting non-encodings and encodings of odd
/// length words. It tracks the position in the current block, whether the
/// `b` part has started, and the parity of completed blocks.
fn add_encoding_checker(b: &mut crate::automata::AutomatonBuilder, n: usize) {
    let start_even = b.add_state();
    let start_odd = b.add_state();
    let bad = b.add_state();
    b.add_initial(start_even);
    b.add_accepting(start_odd);
    b.add_accepting(bad);
    b.add_edge_all(bad, bad);
    // mid[parity][phase][p - 1] for block positions 1..n-1
    let mut mid = [[vec![], vec![]], [vec![], vec![]]];
    for parity in mid.iter_mut() {
        for phase in parity.iter_mut() {
            for _ in 1..n {
                let s = b.add_state();
                b.add_accepting(s);
                phase.push(s);
            }
        }
    }
    let start = [start_even, start_odd];
    // state after reading position p (1..=n) of a block with the given phase
    let after = |parity: usize, phase: usize, p: usize| {
        if p == n {
            start[1 - parity]
        } else {
            mid[parity][phase][p - 1]
        }
    };
    for parity in 0..2 {
        b.add_edge(start[parity], A, after(parity, 0, 1));
        b.add_edge(start[parity], B, bad);
        for p in 1..n {
            let in_a = mid[parity][0][p - 1];
            let in_b = mid[parity][1][p - 1];
            b.add_edge(in_a, A, after(parity, 0, p + 1));
            b.add_edge(in_a, B, after(parity, 1, p + 1));
            b.add_edge(in_b, A, bad);
            b.add_edge(in_b, B, after(parity, 1, p + 1));
        }
    }
}

/// The guess-and-check automaton with every transition on a letter `i`
/// replaced by a path reading `a^i b^(n-i)`.
fn add_encoded_mpp(b: &mut crate::automata::AutomatonBuilder, n: usize) {
    let qi = b.add_state();
    b.add_initial(qi);
    let qf = b.add_state();
    b.add_accepting(qf);
    b.add_edge_all(qf, qf);
    // q_I skips whole blocks of any n letters
    let mut prev = qi;
    for _ in 1..n {
        let s = b.add_state();
        b.add_edge_all(prev, s);
        prev = s;
    }
    b.add_edge_all(prev, qi);
    let q: Vec<usize> = (0..n).map(|_| b.add_state()).collect();
    // entry blocks q_I -> q_i: shared a-chain c_1..c_{n-1}, then b's
    let c: Vec<usize> = (1..n).map(|_| b.add_state()).collect();
    let a_after = |i: usize| if i == 0 { qi } else { c[i - 1] };
    for i in 1..n {
        b.add_edge(a_after(i - 1), A, c[i - 1]);
        // after i a's, read n - i b's to reach q_i
        let mut cur = c[i - 1];
        for _ in 0..n - i - 1 {
            let d = b.add_state();
            b.add_edge(cur, B, d);
            cur = d;
        }
        b.add_edge(cur, B, q[i - 1]);
    }
    b.add_edge(a_after(n - 1), A, q[n - 1]);
    // exit tail: T_p means p letters of an exit block read, only b's remain
    let t: Vec<usize> = (1..n).map(|_| b.add_state()).collect();
    for p in 1..n {
        let next = if p + 1 == n { qf } else { t[p] };
        b.add_edge(t[p - 1], B, next);
    }
    let exit_after_a = |i: usize| if i == n { qf } else { t[i - 1] };
    for i in 1..=n {
        let home = q[i - 1];
        if i == 1 {
            b.add_edge(home, A, exit_after_a(1));
            continue;
        }
        // loop blocks a^j b^(n-j) for 1 ≤ j < i, and the exit block a^i b^(n-i)
        let pa: Vec<usize> = (1..i).map(|_| b.add_state()).collect();
        let lb: Vec<usize> = (2..n).map(|_| b.add_state()).collect();
        let b_at = |pos: usize| if pos == n { home } else { lb[pos - 2] };
        b.add_edge(home, A, pa[0]);
        for p in 1..i {
            let next_a = if p + 1 < i { pa[p] } else { exit_after_a(i) };
            b.add_edge(pa[p - 1], A, next_a);
            b.add_edge(pa[p - 1], B, b_at(p + 1));
        }
        for pos in 2..n {
            b.add_edge(lb[pos - 2], B, b_at(pos + 1));
        }
    }
}

/// NFA over `ab` for `L_n` with at most `n(2n + 5)` states.
pub fn l_nfa(n: usize) -> Result<Automaton> {
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    let mut b = Automaton::builder(Alphabet::from_chars("ab")?, 0);
    add_encoding_checker(&mut b, n);
    add_encoded_mpp(&mut b, n);
    Ok(b.build()?.with_name(format!("l_{n}")))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub n: usize,
    pub zimin_length: usize,
    pub ones: usize,
    pub m_nfa_states: usize,
    pub accepted: bool,
    /// Number of single-`1` deletions tried; all were rejected.
    pub deletions_rejected: usize,
    /// Run states a poNFA for `M_n` needs on the Zimin word: `2^(n-1) + 1`.
    pub ponfa_lower_bound: u64,
}

/// Checks the Zimin facts behind the size gap between NFAs and poNFAs for
/// `M_n`. Any failed check is reported as an error.
pub fn separation_report(n: usize) -> Result<SeparationReport> {
    if !(1..=12).contains(&n) {
        return Err(Error::Invalid(format!("n = {n} is outside 1..=12")));
    }
    let u = zimin(n)?;
    let m = m_nfa(n)?;
    let fail = |what: &str| Err(Error::Invalid(format!("separation check failed for n = {n}: {what}")));
    if u.len() != (1 << n) - 1 {
        return fail("Zimin length");
    }
    let ones: Vec<usize> = (0..u.len()).filter(|&p| u[p] == 0).collect();
    if ones.len() != 1 << (n - 1) {
        return fail("number of ones");
    }
    if m.state_count() != n + 4 {
        return fail("state count");
    }
    if !m.accepts(&u)? {
        return fail("Zimin word rejected");
    }
    for &p in &ones {
        let mut v = u.clone();
        v.remove(p);
        if m.accepts(&v)? {
            return fail("a deletion was accepted");
        }
    }
    Ok(SeparationReport {
        n,
        zimin_length: u.len(),
        ones: ones.len(),
        m_nfa_states: m.state_count(),
        accepted: true,
        deletions_rejected: ones.len(),
        ponfa_lower_bound: (1u64 << (n - 1)) + 1,
    })
}
