// SPDX-License-Identifier: Apache-2.0
//! Line-based text format.
//!
//! ```text
//! # optional comment
//! name: contains-a
//! alphabet: a b
//! states: 2
//! initial: 0
//! final: 1
//! 0 a 1
//! 0 a 0
//! 0 b 0
//! 1 a 1
//! 1 b 1
//! ```
//!
//! `name:` is optional. A file may hold several automata; each starts with a
//! `name:` or `alphabet:` line. Printing with `Display` gives the canonical
//! form: header lines in the order above, transitions sorted.

use std::fmt;

use super::{Alphabet, Automaton, State};
use crate::error::{Error, Result};

impl fmt::Display for Automaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.name() {
            writeln!(f, "name: {name}")?;
        }
        writeln!(f, "alphabet: {}", self.alphabet())?;
        writeln!(f, "states: {}", self.state_count())?;
        writeln!(f, "initial: {}", join(self.initials().iter().copied()))?;
        writeln!(f, "final: {}", join(self.finals()))?;
        for (p, a, q) in self.edges() {
            writeln!(f, "{p} {} {q}", self.alphabet().symbol(a))?;
        }
        Ok(())
    }
}

fn join(states: impl Iterator<Item = State>) -> String {
    states
        .map(|q| q.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Default)]
struct Section {
    first_line: usize,
    name: Option<String>,
    alphabet: Option<Alphabet>,
    states: Option<usize>,
    initials: Option<Vec<State>>,
    finals: Option<Vec<State>>,
    edges: Vec<(usize, State, String, State)>,
}

impl Section {
    fn is_blank(&self) -> bool {
        self.name.is_none()
            && self.alphabet.is_none()
            && self.states.is_none()
            && self.initials.is_none()
            && self.finals.is_none()
            && self.edges.is_empty()
    }

    fn finish(self) -> Result<Automaton> {
        let line = self.first_line;
        let alphabet = self
            .alphabet
            .ok_or_else(|| Error::parse(line, "missing `alphabet:` line"))?;
        let n = self
            .states
            .ok_or_else(|| Error::parse(line, "missing `states:` line"))?;
        let initials = self
            .initials
            .ok_or_else(|| Error::parse(line, "missing `initial:` line"))?;
        let mut b = Automaton::builder(alphabet.clone(), n);
        for q in initials {
            b.add_initial(q);
        }
        for q in self.finals.unwrap_or_default() {
            b.add_accepting(q);
        }
        for (lineno, p, sym, q) in self.edges {
            let a = alphabet
                .index_of(&sym)
                .ok_or_else(|| Error::parse(lineno, format!("unknown symbol `{sym}`")))?;
            if p >= n || q >= n {
                return Err(Error::parse(lineno, format!("state out of range (states: {n})")));
            }
            b.add_edge(p, a, q);
        }
        if let Some(name) = self.name {
            b = b.name(name);
        }
        b.build().map_err(|e| match e {
            Error::StateOutOfRange { .. } | Error::NoInitialState => Error::parse(line, e.to_string()),
            other => other,
        })
    }
}

fn parse_states(lineno: usize, text: &str) -> Result<Vec<State>> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<State>()
                .map_err(|_| Error::parse(lineno, format!("bad state `{t}`")))
        })
        .collect()
}

/// Parses every automaton in `text`.
pub fn parse_automata(text: &str) -> Result<Vec<Automaton>> {
    let mut out = Vec::new();
    let mut cur = Section::default();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, rest)) = line.split_once(':') {
            let rest = rest.trim();
            let key = key.trim();
            let starts_section = match key {
                "name" => true,
                "alphabet" => cur.alphabet.is_some(),
                _ => false,
            };
            if starts_section && !cur.is_blank() {
                out.push(std::mem::take(&mut cur).finish()?);
            }
            if cur.is_blank() {
                cur.first_line = lineno;
            }
            match key {
                "name" => cur.name = Some(rest.to_string()),
                "alphabet" => {
                    cur.alphabet = Some(
                        Alphabet::new(rest.split_whitespace())
                            .map_err(|e| Error::parse(lineno, e.to_string()))?,
                    )
                }
                "states" => {
                    cur.states = Some(
                        rest.parse()
                            .map_err(|_| Error::parse(lineno, format!("bad state count `{rest}`")))?,
                    )
                }
                "initial" => cur.initials = Some(parse_states(lineno, rest)?),
                "final" => cur.finals = Some(parse_states(lineno, rest)?),
                other => return Err(Error::parse(lineno, format!("unknown header `{other}`"))),
            }
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::parse(lineno, "expected `source symbol target`"));
        }
        if cur.alphabet.is_none() {
            return Err(Error::parse(lineno, "transition before `alphabet:` line"));
        }
        let p = parts[0]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad state `{}`", parts[0])))?;
        let q = parts[2]
            .parse()
            .map_err(|_| Error::parse(lineno, format!("bad state `{}`", parts[2])))?;
        cur.edges.push((lineno, p, parts[1].to_string(), q));
    }
    if !cur.is_blank() {
        out.push(cur.finish()?);
    }
    Ok(out)
}

/// Parses text holding exactly one automaton.
pub fn parse_automaton(text: &str) -> Result<Automaton> {
    let mut all = parse_automata(text)?;
    match all.len() {
        1 => Ok(all.pop().expect("one element")),
        0 => Err(Error::parse(1, "no automaton found")),
        n => Err(Error::parse(1, format!("expected one automaton, found {n}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "\
# contains a
alphabet: a b
states: 2
initial: 0
final: 1

0 b 0
0 a 1   # switch
0 a 0
1 a 1
1 b 1
";

    #[test]
    fn parses_sample() {
        let a = parse_automaton(SAMPLE).unwrap();
        assert_eq!(a.state_count(), 2);
        assert_eq!(a.transition_count(), 5);
        assert!(a.accepts(&[1, 0, 1]).unwrap());
        assert!(!a.accepts(&[1, 1]).unwrap());
    }

    #[test]
    fn print_parse_round_trip() {
        let a = parse_automaton(SAMPLE).unwrap().with_name("contains-a");
        let printed = a.to_string();
        let back = parse_automaton(&printed).unwrap();
        assert_eq!(back, a);
        assert_eq!(back.to_string(), printed);
    }

    #[test]
    fn multiple_sections() {
        let text = format!("{SAMPLE}\n{SAMPLE}");
        assert_eq!(parse_automata(&text).unwrap().len(), 2);
        assert!(parse_automaton(&text).is_err());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_automaton("alphabet: a\nstates: 1\ninitial: 0\n0 b 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err:?}");
        let err = parse_automaton("alphabet: a\nstates: 1\ninitial: 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
        let err = parse_automaton("alphabet: a\nstates: 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err:?}");
    }
}
