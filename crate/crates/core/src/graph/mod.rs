//! Simple undirected graphs and everything the pipeline needs from them.

mod cut;
mod enumerate;
mod families;
mod io;
mod iso;
mod refine;
mod rewire;

pub use cut::{bits_from_str, bits_to_string, cut_index, cut_value, reconstruct_from_cuts};
pub use enumerate::all_graphs;
pub use families::{generate, FamilySpec, NamedGraph};
pub use io::{from_edge_list, to_edge_list};
pub use iso::is_isomorphic;
pub use refine::{color_refinement, wl_equivalent};
pub use rewire::rewire_degree_preserving;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Adjacency row: one bit per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct BitRow(Vec<u64>);

impl BitRow {
    fn new(n: usize) -> Self {
        BitRow(vec![0; n.div_ceil(64)])
    }

    #[inline]
    pub(crate) fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn set(&mut self, i: usize, on: bool) {
        if on {
            self.0[i / 64] |= 1 << (i % 64);
        } else {
            self.0[i / 64] &= !(1 << (i % 64));
        }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.0
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

/// A simple undirected graph on vertices `0..n`.
///
/// Edges are stored as a sorted list of `(u, v)` pairs with `u < v`, alongside
/// one adjacency bit-row per vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "GraphRepr", into = "GraphRepr")]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<BitRow>,
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphRepr> for Graph {
    type Error = crate::Error;

    fn try_from(r: GraphRepr) -> Result<Self> {
        Graph::from_edges(r.n, r.edges.iter().map(|e| (e[0], e[1])))
    }
}

impl From<Graph> for GraphRepr {
    fn from(g: Graph) -> Self {
        GraphRepr {
            n: g.n,
            edges: g.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            edges: Vec::new(),
            adj: (0..n).map(|_| BitRow::new(n)).collect(),
        }
    }

    /// Build from an edge list. Self-loops, duplicates (in either orientation)
    /// and out-of-range endpoints are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(invalid("edges", format!("edge ({u}, {v}) has an endpoint >= n = {n}")));
            }
            if u == v {
                return Err(invalid("edges", format!("self-loop at vertex {u}")));
            }
            if g.has_edge(u, v) {
                return Err(invalid("edges", format!("duplicate edge ({u}, {v})")));
            }
            g.adj[u].set(v, true);
            g.adj[v].set(u, true);
            g.edges.push((u.min(v), u.max(v)));
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Degrees sorted in non-increasing order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d = self.degrees();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// Neighbours of `v` in ascending order.
    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let row = &self.adj[v];
        row.0.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let t = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + t)
            })
        })
    }

    pub(crate) fn row(&self, v: usize) -> &BitRow {
        &self.adj[v]
    }

    /// Adjacency of `v` as a single mask. Only valid for `n <= 64`.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.adj[v].0.first().copied().unwrap_or(0)
    }

    /// Relabel: vertex `v` becomes `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(crate::Error::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || std::mem::replace(&mut seen[p], true) {
                return Err(invalid("perm", "not a permutation"));
            }
        }
        Graph::from_edges(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Copy of `self` with one extra edge.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph> {
        Graph::from_edges(self.n, self.edges.iter().copied().chain([(u, v)]))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for w in self.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.n
    }

    /// Disjoint union; `other`'s vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.n;
        Graph::from_edges(
            self.n + other.n,
            self.edges
                .iter()
                .copied()
                .chain(other.edges.iter().map(|&(u, v)| (u + off, v + off))),
        )
        .expect("union of valid graphs is valid")
    }

    /// Swap edges `(a, b), (c, d)` for `(a, d), (c, b)`. Caller guarantees the
    /// result stays simple.
    pub(crate) fn swap_edges(&mut self, (a, b): (usize, usize), (c, d): (usize, usize)) {
        for (u, v, on) in [(a, b, false), (c, d, false), (a, d, true), (c, b, true)] {
            self.adj[u].set(v, on);
            self.adj[v].set(u, on);
        }
        self.edges
            .retain(|&e| e != (a.min(b), a.max(b)) && e != (c.min(d), c.max(d)));
        self.edges.push((a.min(d), a.max(d)));
        self.edges.push((c.min(b), c.max(b)));
        self.edges.sort_unstable();
    }

    /// Short stable digest of the edge list, used to tag serialized outputs.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let hash = Sha256::digest(to_edge_list(self).as_bytes());
        hex::encode(&hash[..8])
    }
}
