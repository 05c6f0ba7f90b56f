//! Cai–Fürer–Immerman expansion of a base graph.
//!
//! Each base vertex `v` of degree `d` becomes a gadget: two edge vertices
//! `e^(0), e^(1)` per incident edge plus one inner vertex per even-weight
//! label `s ∈ {0,1}^d`, joined to `e_i^(s_i)` for every incident edge `i`.
//! Each base edge `uv` becomes the bridges `e_u^(b) – e_v^(b)`; the twisted
//! graph crosses the two bridges of one chosen edge.
//!
//! Numbering is fixed so that serialized instances and circuits are
//! reproducible:
//!
//! - incident edges of a base vertex are ordered by ascending neighbour id, and
//!   bit `i` of an inner label refers to the `i`-th of them;
//! - all edge vertices come first, grouped by base vertex, then by incident
//!   edge, then by bit;
//! - inner vertices follow, grouped by base vertex, labels in ascending value.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum VertexRole {
    /// `e^(bit)` of the base edge `{base_vertex, neighbor}`, on `base_vertex`'s side.
    EdgeVertex {
        base_vertex: usize,
        neighbor: usize,
        bit: u8,
    },
    /// Inner vertex with even-weight label; bit `i` refers to the `i`-th
    /// incident edge in ascending neighbour order.
    Inner { base_vertex: usize, label: u64 },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CfiPair {
    pub base: Graph,
    pub twist_edge: (usize, usize),
    pub untwisted: Graph,
    pub twisted: Graph,
    pub roles: Vec<VertexRole>,
}

fn gadget_size(deg: usize) -> Result<usize> {
    if deg == 0 {
        return Err(invalid("base", "isolated vertex"));
    }
    1usize
        .checked_shl(deg as u32 - 1)
        .filter(|_| deg < usize::BITS as usize)
        .map(|inner| inner + 2 * deg)
        .ok_or_else(|| invalid("base", format!("degree {deg} too large for a CFI gadget")))
}

/// Vertex count of the CFI graphs of `base`: `Σ_v 2^(deg v − 1) + 2 deg v`.
pub fn cfi_size(base: &Graph) -> Result<usize> {
    (0..base.n())
        .map(|v| match base.degree(v) {
            0 => Err(Error::IsolatedVertex(v)),
            d => gadget_size(d),
        })
        .sum()
}

/// Build the untwisted/twisted pair. `twist` defaults to the lexicographically
/// smallest base edge.
pub fn build_cfi(base: &Graph, twist: Option<(usize, usize)>) -> Result<CfiPair> {
    if let Some(v) = (0..base.n()).find(|&v| base.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    if base.n() == 0 {
        return Err(invalid("base", "base graph has no vertices"));
    }
    if !base.is_connected() {
        return Err(Error::DisconnectedBase);
    }
    let twist_edge = match twist {
        Some((u, v)) if u < base.n() && v < base.n() && base.has_edge(u, v) => (u.min(v), u.max(v)),
        Some(e) => return Err(invalid("twist_edge", format!("{e:?} is not an edge of the base graph"))),
        None => base.edges()[0],
    };

    let incident: Vec<Vec<usize>> = (0..base.n()).map(|v| base.neighbors(v).collect()).collect();
    let mut roles = Vec::with_capacity(cfi_size(base)?);

    // edge_vertex[v][i] = id of e^(0) for v's i-th incident edge; e^(1) is +1
    let mut edge_vertex: Vec<Vec<usize>> = Vec::with_capacity(base.n());
    for (v, nbrs) in incident.iter().enumerate() {
        let mut ids = Vec::with_capacity(nbrs.len());
        for &u in nbrs {
            ids.push(roles.len());
            for bit in 0..2 {
                roles.push(VertexRole::EdgeVertex {
                    base_vertex: v,
                    neighbor: u,
                    bit,
                });
            }
        }
        edge_vertex.push(ids);
    }

    let mut gadget_edges = Vec::new();
    for (v, nbrs) in incident.iter().enumerate() {
        let d = nbrs.len();
        for label in (0u64..1 << d).filter(|s| s.count_ones() % 2 == 0) {
            let id = roles.len();
            roles.push(VertexRole::Inner { base_vertex: v, label });
            for (i, &ev) in edge_vertex[v].iter().enumerate() {
                gadget_edges.push((id, ev + (label >> i & 1) as usize));
            }
        }
    }

    let slot = |v: usize, u: usize| incident[v].binary_search(&u).expect("u is a neighbour of v");
    let bridges = |twisted: bool| -> Vec<(usize, usize)> {
        base.edges()
            .iter()
            .flat_map(|&(u, v)| {
                let eu = edge_vertex[u][slot(u, v)];
                let ev = edge_vertex[v][slot(v, u)];
                let cross = twisted && (u, v) == twist_edge;
                [0, 1].map(|b| (eu + b, ev + if cross { 1 - b } else { b }))
            })
            .collect()
    };
    let n = roles.len();
    let untwisted = Graph::from_edges(n, gadget_edges.iter().copied().chain(bridges(false)))?;
    let twisted = Graph::from_edges(n, gadget_edges.iter().copied().chain(bridges(true)))?;
    Ok(CfiPair {
        base: base.clone(),
        twist_edge,
        untwisted,
        twisted,
        roles,
    })
}
