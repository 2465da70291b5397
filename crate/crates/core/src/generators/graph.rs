// SPDX-License-Identifier: Apache-2.0
//! Graphs, reachability reductions to unary automata, and the vertex-cover
//! reduction.

use std::fmt;

use serde::Serialize;

use crate::automata::{Alphabet, Automaton, Dfa};
use crate::error::{Error, Result};
use crate::ine::{IneInstance, Promise};

/// A graph on vertices `0..vertex_count`. Edges are directed for the
/// reachability reductions and read as undirected by the vertex-cover one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Graph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Graph> {
        for &(p, q) in &edges {
            if p >= vertex_count || q >= vertex_count {
                return Err(Error::StateOutOfRange {
                    state: p.max(q),
                    count: vertex_count,
                });
            }
        }
        Ok(Graph {
            vertex_count,
            edges,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(p, _)| p == v).count()
    }

    /// Directed reachability (reflexive).
    pub fn reaches(&self, s: usize, t: usize) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![s];
        seen[s] = true;
        while let Some(p) = stack.pop() {
            if p == t {
                return true;
            }
            for &(x, y) in &self.edges {
                if x == p && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// Number of edges on a shortest directed path, if any.
    pub fn distance(&self, s: usize, t: usize) -> Option<usize> {
        let mut dist = vec![None; self.vertex_count];
        dist[s] = Some(0);
        let mut queue = std::collections::VecDeque::from([s]);
        while let Some(p) = queue.pop_front() {
            let d = dist[p].expect("queued");
            for &(x, y) in &self.edges {
                if x == p && dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist[t]
    }

    /// Whether some set of at most `k` vertices touches every edge, by
    /// exhaustive search.
    pub fn has_vertex_cover(&self, k: usize) -> bool {
        self.min_vertex_cover().len() <= k
    }

    /// A smallest vertex cover, found by trying subsets in order of size.
    /// Meant for small graphs.
    pub fn min_vertex_cover(&self) -> Vec<usize> {
        let n = self.vertex_count;
        assert!(n < usize::BITS as usize, "graph too large for exhaustive search");
        let mut best: Option<u64> = None;
        for mask in 0u64..(1u64 << n) {
            let covers = self
                .edges
                .iter()
                .all(|&(p, q)| mask >> p & 1 == 1 || mask >> q & 1 == 1);
            if covers && best.is_none_or(|b| mask.count_ones() < b.count_ones()) {
                best = Some(mask);
            }
        }
        let mask = best.expect("the full vertex set is a cover");
        (0..n).filter(|&v| mask >> v & 1 == 1).collect()
    }

    /// Parses `vertices: N` followed by one `p q` edge per line. `#` starts a
    /// comment.
    pub fn parse(text: &str) -> Result<Graph> {
        let mut vertex_count = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix("vertices:") {
                let n = rest
                    .trim()
                    .parse()
                    .map_err(|_| Error::parse(line_no, "expected a vertex count"))?;
                vertex_count = Some(n);
                continue;
            }
            if vertex_count.is_none() {
                return Err(Error::parse(line_no, "edge before the `vertices:` header"));
            }
            let nums: Vec<usize> = line
                .split_whitespace()
                .map(str::parse)
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::parse(line_no, "expected two vertex numbers"))?;
            match nums[..] {
                [p, q] => edges.push((p, q)),
                _ => return Err(Error::parse(line_no, "expected two vertex numbers")),
            }
        }
        let n = vertex_count.ok_or_else(|| Error::parse(1, "missing `vertices:` header"))?;
        Graph::new(n, edges)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices: {}", self.vertex_count)?;
        for &(p, q) in &self.edges {
            writeln!(f, "{p} {q}")?;
        }
        Ok(())
    }
}

fn unary() -> Alphabet {
    Alphabet::from_chars("a").expect("valid alphabet")
}

fn check_vertex(g: &Graph, v: usize) -> Result<()> {
    if v >= g.vertex_count {
        return Err(Error::StateOutOfRange {
            state: v,
            count: g.vertex_count,
        });
    }
    Ok(())
}

/// Unary NFA with `δ(i, a) = {j : (i, j) ∈ E} ∪ {i}`, initial `s`, final `t`.
/// Every edge must go from a smaller to a larger vertex.
pub fn gap2_to_nfa(g: &Graph, s: usize, t: usize) -> Result<Automaton> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    if let Some(&(p, q)) = g.edges.iter().find(|&&(p, q)| p >= q) {
        return Err(Error::Invalid(format!(
            "edge {p} -> {q} does not go to a larger vertex"
        )));
    }
    let mut b = Automaton::builder(unary(), g.vertex_count)
        .initial(s)
        .accepting(t);
    for v in 0..g.vertex_count {
        b.add_edge(v, 0, v);
    }
    for &(p, q) in &g.edges {
        b.add_edge(p, 0, q);
    }
    b.build()
}

/// Unary DFA following the unique out-edge of each vertex; `t` loops on
/// itself in place of its out-edge, and missing moves go to a rejecting
/// sink. Vertices may have at most one out-edge.
pub fn gap1_to_dfa(g: &Graph, s: usize, t: usize) -> Result<Dfa> {
    check_vertex(g, s)?;
    check_vertex(g, t)?;
    if let Some(v) = (0..g.vertex_count).find(|&v| g.out_degree(v) > 1) {
        return Err(Error::Invalid(format!("vertex {v} has more than one out-edge")));
    }
    let mut b = Automaton::builder(unary(), g.vertex_count)
        .initial(s)
        .accepting(t)
        .edge(t, 0, t);
    for &(p, q) in &g.edges {
        if p != t {
            b.add_edge(p, 0, q);
        }
    }
    Dfa::from_automaton(b.build()?)
}

fn binary() -> Alphabet {
    Alphabet::from_chars("01").expect("valid alphabet")
}

/// Two-chain DFA for the edge `{u, v}` over `n` vertices: accepts the length-`n`
/// words with a `1` at position `u` or `v`, and every word longer than `n`.
pub fn edge_dfa(n: usize, u: usize, v: usize) -> Result<Dfa> {
    let (i1, i2) = (u.min(v), u.max(v));
    if i2 >= n {
        return Err(Error::StateOutOfRange { state: i2, count: n });
    }
    // q^j = j for 0 ≤ j ≤ n+1, q'^j = n + 2 + (j - i1 - 1) for i1+1 ≤ j ≤ n
    let main = |j: usize| j;
    let side = |j: usize| n + 2 + (j - i1 - 1);
    let count = n + 2 + (n - i1);
    let mut b = Automaton::builder(binary(), count)
        .initial(main(0))
        .accepting(main(n + 1))
        .accepting(side(n))
        .edge_all(main(n + 1), main(n + 1))
        .edge_all(side(n), side(n));
    for j in 0..=n {
        if j == i1 || j == i2 {
            b.add_edge(main(j), 0, main(j + 1));
            b.add_edge(main(j), 1, side(j + 1));
        } else {
            b.add_edge_all(main(j), main(j + 1));
        }
    }
    for j in i1 + 1..n {
        b.add_edge_all(side(j), side(j + 1));
    }
    let name = format!("edge_{u}_{v}");
    Dfa::from_automaton(b.build()?.with_name(name))
}

/// Grid DFA accepting the words of length exactly `n` with at most `k` ones.
pub fn grid_dfa(n: usize, k: usize) -> Result<Dfa> {
    let id = |i: usize, j: usize| i * (k + 2) + j;
    let mut b = Automaton::builder(binary(), (n + 2) * (k + 2)).initial(id(0, 0));
    for i in 0..=n + 1 {
        for j in 0..=k + 1 {
            if i == n + 1 || j == k + 1 {
                b.add_edge_all(id(i, j), id(i, j));
            } else {
                b.add_edge(id(i, j), 0, id(i + 1, j));
                b.add_edge(id(i, j), 1, id(i + 1, j + 1));
            }
        }
    }
    for j in 0..=k {
        b.add_accepting(id(n, j));
    }
    Dfa::from_automaton(b.build()?.with_name(format!("length_{n}_at_most_{k}")))
}

/// One [`edge_dfa`] per edge plus [`grid_dfa`]; the intersection is nonempty
/// iff the graph has a vertex cover of size at most `k`. Common words are
/// exactly the length-`n` indicator words of such covers.
pub fn vertex_cover_to_ine(g: &Graph, k: usize) -> Result<IneInstance> {
    let n = g.vertex_count;
    let mut list = Vec::with_capacity(g.edges.len() + 1);
    for &(u, v) in &g.edges {
        list.push(edge_dfa(n, u, v)?.into_automaton());
    }
    list.push(grid_dfa(n, k)?.into_automaton());
    IneInstance::new(list, Promise::St1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{ine_oracle, is_finite, shortest_word, words_of_length};
    use crate::classify::is_shuffle_ideal;

    fn triangle() -> Graph {
        Graph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn parse_and_print() {
        let g = Graph::parse("# path\nvertices: 3\n0 1\n1 2 # tail\n").unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(Graph::parse(&g.to_string()).unwrap(), g);
        assert!(Graph::parse("0 1\n").is_err());
        assert!(Graph::parse("vertices: 2\n0 5\n").is_err());
        assert!(Graph::parse("vertices: 2\n0\n").is_err());
    }

    #[test]
    fn gap2_examples() {
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let a = gap2_to_nfa(&path, 0, 2).unwrap();
        assert_eq!(shortest_word(&a), Some(vec![0, 0]));
        assert!(is_shuffle_ideal(&crate::automata::determinize(&a, 100).unwrap()));
        assert_eq!(shortest_word(&gap2_to_nfa(&path, 1, 1).unwrap()), Some(vec![]));
        let split = Graph::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(shortest_word(&gap2_to_nfa(&split, 0, 2).unwrap()), None);
        let back = Graph::new(2, vec![(1, 0)]).unwrap();
        assert!(gap2_to_nfa(&back, 0, 1).is_err());
    }

    #[test]
    fn gap1_examples() {
        let path = Graph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let d = gap1_to_dfa(&path, 0, 2).unwrap();
        assert!(!d.accepts(&[0]).unwrap());
        assert!(d.accepts(&[0, 0]).unwrap());
        assert!(d.accepts(&[0; 7]).unwrap());
        let split = Graph::new(3, vec![(0, 1)]).unwrap();
        assert_eq!(shortest_word(&gap1_to_dfa(&split, 0, 2).unwrap()), None);
        let fork = Graph::new(3, vec![(0, 1), (0, 2)]).unwrap();
        assert!(gap1_to_dfa(&fork, 0, 2).is_err());
    }

    #[test]
    fn edge_gadget_language() {
        let n = 4;
        for (u, v) in [(0, 1), (1, 3), (2, 2)] {
            let d = edge_dfa(n, u, v).unwrap();
            for len in 0..=n + 2 {
                for w in words_of_length(2, len) {
                    let expected = len > n || (len == n && (w[u] == 1 || w[v] == 1));
                    assert_eq!(d.accepts(&w).unwrap(), expected, "{u}-{v} on {w:?}");
                }
            }
            assert!(is_shuffle_ideal(&d));
        }
    }

    #[test]
    fn grid_language() {
        let d = grid_dfa(3, 1).unwrap();
        assert_eq!(d.state_count(), 5 * 3);
        assert!(is_finite(&d));
        for len in 0..=5 {
            for w in words_of_length(2, len) {
                let ones = w.iter().filter(|&&x| x == 1).count();
                assert_eq!(d.accepts(&w).unwrap(), len == 3 && ones <= 1);
            }
        }
    }

    #[test]
    fn triangle_covers() {
        let inst = vertex_cover_to_ine(&triangle(), 2).unwrap();
        let w = ine_oracle(inst.automata(), 10_000).unwrap().unwrap();
        assert_eq!(w.len(), 3);
        assert_eq!(w.iter().filter(|&&x| x == 1).count(), 2);
        let inst = vertex_cover_to_ine(&triangle(), 1).unwrap();
        assert_eq!(ine_oracle(inst.automata(), 10_000).unwrap(), None);
        assert_eq!(triangle().min_vertex_cover().len(), 2);
    }

    #[test]
    fn single_edge_witnesses() {
        let g = Graph::new(2, vec![(0, 1)]).unwrap();
        let inst = vertex_cover_to_ine(&g, 1).unwrap();
        let common: Vec<Vec<usize>> = words_of_length(2, 2)
            .filter(|w| inst.automata().iter().all(|a| a.accepts(w).unwrap()))
            .collect();
        assert_eq!(common, vec![vec![0, 1], vec![1, 0]]);
    }
}
