use std::collections::HashMap;

use super::{is_isomorphic, Graph};

/// One representative of every isomorphism class of graphs on exactly `n`
/// vertices.
///
/// Built incrementally: every graph on `n` vertices is some graph on `n - 1`
/// vertices plus a new vertex joined to a subset of the old ones. Duplicates
/// are rejected with the isomorphism oracle inside buckets of equal local
/// degree invariants.
pub fn all_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= 10, "exhaustive enumeration is only practical for small n");
    let mut level = vec![Graph::empty(0)];
    for k in 1..=n {
        let mut buckets: HashMap<Vec<(usize, Vec<usize>)>, Vec<Graph>> = HashMap::new();
        let mut out = Vec::new();
        for g in &level {
            for mask in 0u32..1 << (k - 1) {
                let new = k - 1;
                let edges = g
                    .edges()
                    .iter()
                    .copied()
                    .chain((0..new).filter(|&u| mask >> u & 1 == 1).map(|u| (u, new)));
                let cand = Graph::from_edges(k, edges).expect("extension stays simple");
                let bucket = buckets.entry(invariant(&cand)).or_default();
                if bucket.iter().any(|h| is_isomorphic(h, &cand)) {
                    continue;
                }
                bucket.push(cand.clone());
                out.push(cand);
            }
        }
        level = out;
    }
    level
}

fn invariant(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    let mut inv: Vec<(usize, Vec<usize>)> = (0..g.n())
        .map(|v| {
            let mut nd: Vec<usize> = g.neighbors(v).map(|w| g.degree(w)).collect();
            nd.sort_unstable();
            (g.degree(v), nd)
        })
        .collect();
    inv.sort_unstable();
    inv
}
