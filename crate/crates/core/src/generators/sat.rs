// SPDX-License-Identifier: Apache-2.0
//! CNF formulas and the reduction to commutative intersection
//! non-emptiness.

use std::fmt;

use serde::Serialize;

use crate::automata::{Alphabet, Automaton, Dfa, Letter, Word};
use crate::error::{Error, Result};
use crate::ine::{IneInstance, Promise};

/// A CNF formula with DIMACS-style literals: `v` for variable `v`, `-v` for
/// its negation, variables numbered from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    variable_count: usize,
    clauses: Vec<Vec<i32>>,
}

impl CnfFormula {
    /// Clauses must have one to three literals over variables
    /// `1..=variable_count`.
    pub fn new(variable_count: usize, clauses: Vec<Vec<i32>>) -> Result<CnfFormula> {
        for c in &clauses {
            if c.is_empty() || c.len() > 3 {
                return Err(Error::Invalid(format!(
                    "clause {c:?} must have between one and three literals"
                )));
            }
            if let Some(&l) = c
                .iter()
                .find(|&&l| l == 0 || l.unsigned_abs() as usize > variable_count)
            {
                return Err(Error::Invalid(format!("literal {l} is out of range")));
            }
        }
        Ok(CnfFormula {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Vec<i32>] {
        &self.clauses
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| {
            c.iter()
                .any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }

    /// A satisfying assignment by exhaustive search.
    pub fn brute_force_solve(&self) -> Option<Vec<bool>> {
        let n = self.variable_count;
        assert!(n < 32, "too many variables for exhaustive search");
        (0u32..1 << n)
            .map(|mask| (0..n).map(|v| mask >> v & 1 == 1).collect::<Vec<_>>())
            .find(|a| self.evaluate(a))
    }

    pub fn is_satisfiable(&self) -> bool {
        self.brute_force_solve().is_some()
    }

    /// Reads DIMACS CNF: `c` comment lines, a `p cnf V C` header, clauses
    /// terminated by `0`. A line starting with `%` ends the input.
    pub fn parse_dimacs(text: &str) -> Result<CnfFormula> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if line.starts_with('%') {
                break;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let parsed = match parts[..] {
                    ["cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                    _ => None,
                };
                header = Some(parsed.ok_or_else(|| Error::parse(line_no, "malformed `p cnf` header"))?);
                continue;
            }
            if header.is_none() {
                return Err(Error::parse(line_no, "clause before the `p cnf` header"));
            }
            for tok in line.split_whitespace() {
                let l: i32 = tok
                    .parse()
                    .map_err(|_| Error::parse(line_no, format!("bad literal `{tok}`")))?;
                if l == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(l);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let (vars, count) = header.ok_or_else(|| Error::parse(1, "missing `p cnf` header"))?;
        if clauses.len() != count {
            log::warn!("header announces {count} clauses, found {}", clauses.len());
        }
        CnfFormula::new(vars, clauses)
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p cnf {} {}", self.variable_count, self.clauses.len())?;
        for c in &self.clauses {
            for l in c {
                write!(f, "{l} ")?;
            }
            writeln!(f, "0")?;
        }
        Ok(())
    }
}

/// Alphabet `x1 … xn ~x1 … ~xn`.
pub fn literal_alphabet(n: usize) -> Result<Alphabet> {
    Alphabet::new(
        (1..=n)
            .map(|v| format!("x{v}"))
            .chain((1..=n).map(|v| format!("~x{v}"))),
    )
}

/// Letter of a DIMACS literal in [`literal_alphabet`].
pub fn literal_letter(n: usize, lit: i32) -> Letter {
    let v = lit.unsigned_abs() as usize - 1;
    if lit > 0 {
        v
    } else {
        n + v
    }
}

/// Assignment read off a word: a variable is true iff its positive letter
/// occurs.
pub fn assignment_of(n: usize, word: &[Letter]) -> Vec<bool> {
    let mut a = vec![false; n];
    for &x in word {
        if x < n {
            a[x] = true;
        }
    }
    a
}

/// Words containing some literal of the clause.
fn clause_dfa(alphabet: &Alphabet, n: usize, clause: &[i32]) -> Result<Dfa> {
    let lits: Vec<Letter> = clause.iter().map(|&l| literal_letter(n, l)).collect();
    let mut b = Automaton::builder(alphabet.clone(), 2)
        .initial(0)
        .accepting(1)
        .edge_all(1, 1);
    for x in alphabet.letters() {
        b.add_edge(0, x, if lits.contains(&x) { 1 } else { 0 });
    }
    Dfa::from_automaton(b.build()?)
}

/// Words not containing both `x_v` and `~x_v`.
fn variable_dfa(alphabet: &Alphabet, n: usize, v: usize) -> Result<Dfa> {
    let (pos, neg) = (v, n + v);
    // 0 neither seen, 1 positive seen, 2 negative seen, 3 both
    let mut b = Automaton::builder(alphabet.clone(), 4)
        .initial(0)
        .accepting(0)
        .accepting(1)
        .accepting(2)
        .edge_all(3, 3);
    for x in alphabet.letters() {
        let (t0, t1, t2) = if x == pos {
            (1, 1, 3)
        } else if x == neg {
            (2, 3, 2)
        } else {
            (0, 1, 2)
        };
        b.add_edge(0, x, t0);
        b.add_edge(1, x, t1);
        b.add_edge(2, x, t2);
    }
    Dfa::from_automaton(b.build()?)
}

/// One DFA per clause and one per variable; every language is commutative
/// and star-free, and the intersection is nonempty iff the formula is
/// satisfiable.
pub fn sat_to_commutative_ine(f: &CnfFormula) -> Result<IneInstance> {
    let n = f.variable_count;
    if n == 0 {
        return Err(Error::Invalid("formula has no variables".into()));
    }
    let alphabet = literal_alphabet(n)?;
    let mut list = Vec::new();
    for (i, c) in f.clauses.iter().enumerate() {
        list.push(clause_dfa(&alphabet, n, c)?.into_automaton().with_name(format!("clause_{i}")));
    }
    for v in 0..n {
        list.push(
            variable_dfa(&alphabet, n, v)?
                .into_automaton()
                .with_name(format!("var_{}", v + 1)),
        );
    }
    IneInstance::new(list, Promise::CommutativeSf)
}

/// The word listing the literal of each variable under `assignment`.
pub fn assignment_word(assignment: &[bool]) -> Word {
    let n = assignment.len();
    (0..n)
        .map(|v| if assignment[v] { v } else { n + v })
        .collect()
}
