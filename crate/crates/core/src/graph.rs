//! Finite simple graphs.
//!
//! Adjacency is kept as sorted neighbour lists, which is what the triangle
//! counter and the graphon embedding both want. The text format is the usual
//! edge list: a header line `n m` followed by `m` lines `u v` with 0-based
//! vertex indices.

use std::fmt::Write as _;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    adjacency: Vec<Vec<usize>>,
    edges: usize,
}

impl SimpleGraph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Self {
            adjacency: vec![Vec::new(); n],
            edges: 0,
        }
    }

    pub fn complete(n: usize) -> Self {
        let adjacency = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).collect())
            .collect();
        Self {
            adjacency,
            edges: n * n.saturating_sub(1) / 2,
        }
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Invalid(format!(
                "cycle needs at least 3 vertices, got {n}"
            )));
        }
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    /// Path on `n` vertices.
    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("path edges are valid")
    }

    /// Builds a graph from an edge list. Duplicate edges are merged; self-loops
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Invalid(format!(
                    "edge ({u}, {v}) out of range for {n} vertices"
                )));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        let mut count = 0;
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
            count += list.len();
        }
        Ok(Self {
            adjacency,
            edges: count / 2,
        })
    }

    /// Builds a graph from sorted, duplicate-free neighbour lists produced by
    /// the samplers. Only the upper triangle (`j > i`) of each row is given.
    pub(crate) fn from_upper_rows(rows: Vec<Vec<usize>>) -> Self {
        let n = rows.len();
        let mut adjacency = vec![Vec::new(); n];
        let mut edges = 0;
        for (i, row) in rows.iter().enumerate() {
            for &j in row {
                adjacency[i].push(j);
                adjacency[j].push(i);
                edges += 1;
            }
        }
        // Lower neighbours of a vertex are pushed in increasing order of the
        // source row and precede all upper neighbours, so lists stay sorted.
        Self { adjacency, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adjacency.len() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.vertex_count(), self.edge_count());
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }

    /// Parses the `n m` / `u v` edge-list format. Blank lines and lines
    /// starting with `#` are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("missing `n m` header".into()))?;
        let (n, m) = parse_pair(header)?;
        let mut edges = Vec::with_capacity(m);
        for line in lines.by_ref().take(m) {
            edges.push(parse_pair(line)?);
        }
        if edges.len() != m {
            return Err(Error::Parse(format!(
                "header announces {m} edges but {} were found",
                edges.len()
            )));
        }
        if lines.next().is_some() {
            return Err(Error::Parse(format!("more than {m} edge lines")));
        }
        Self::from_edges(n, edges)
    }
}

fn parse_pair(line: &str) -> Result<(usize, usize)> {
    let mut it = line.split_whitespace();
    let mut next = || -> Result<usize> {
        it.next()
            .ok_or_else(|| Error::Parse(format!("expected two integers in `{line}`")))?
            .parse::<usize>()
            .map_err(|e| Error::Parse(format!("`{line}`: {e}")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(Error::Parse(format!("trailing tokens in `{line}`")));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_cycle() {
        let k4 = SimpleGraph::complete(4);
        assert_eq!(k4.edge_count(), 6);
        assert!(k4.has_edge(0, 3));
        assert!(!k4.has_edge(2, 2));
        let c5 = SimpleGraph::cycle(5).unwrap();
        assert_eq!(c5.edge_count(), 5);
        assert_eq!(c5.neighbors(0), &[1, 4]);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert!(matches!(
            SimpleGraph::from_edges(3, [(1, 1)]),
            Err(Error::Invalid(_))
        ));
        assert!(matches!(
            SimpleGraph::from_edges(3, [(0, 3)]),
            Err(Error::Invalid(_))
        ));
    }

    #[test]
    fn duplicates_merge() {
        let g = SimpleGraph::from_edges(3, [(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn edge_list_text_roundtrip() {
        let g = SimpleGraph::from_edges(5, [(0, 1), (3, 4), (1, 3)]).unwrap();
        let text = g.to_edge_list_text();
        assert!(text.starts_with("5 3\n"));
        assert_eq!(SimpleGraph::parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(SimpleGraph::parse_edge_list("").is_err());
        assert!(SimpleGraph::parse_edge_list("3 2\n0 1\n").is_err());
        assert!(SimpleGraph::parse_edge_list("3 1\n0 x\n").is_err());
        assert!(SimpleGraph::parse_edge_list("3 1\n0 1\n1 2\n").is_err());
    }
}
