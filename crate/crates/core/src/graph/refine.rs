//! 1-dimensional Weisfeiler–Leman colour refinement.

use std::collections::BTreeMap;

use super::Graph;

/// Stable colouring of `g`, starting from the uniform colouring.
///
/// Colour ids are ranks of refinement signatures, so they are canonical: two
/// vertices (in any graphs refined together as one disjoint union) share a
/// colour iff refinement cannot tell them apart.
pub fn color_refinement(g: &Graph) -> Vec<u32> {
    let mut colors = vec![0u32; g.n()];
    let mut classes = 1;
    loop {
        let sigs: Vec<(u32, Vec<u32>)> = (0..g.n())
            .map(|v| {
                let mut nb: Vec<u32> = g.neighbors(v).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut ids: BTreeMap<&(u32, Vec<u32>), u32> = sigs.iter().map(|s| (s, 0)).collect();
        for (i, id) in ids.values_mut().enumerate() {
            *id = i as u32;
        }
        let next: Vec<u32> = sigs.iter().map(|s| ids[s]).collect();
        let count = ids.len();
        colors = next;
        if count == classes {
            return colors;
        }
        classes = count;
    }
}

/// Whether colour refinement assigns `g` and `h` the same colour histogram.
pub fn wl_equivalent(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() {
        return false;
    }
    let colors = color_refinement(&g.disjoint_union(h));
    let hist = |c: &[u32]| {
        let mut m = BTreeMap::new();
        for &x in c {
            *m.entry(x).or_insert(0usize) += 1;
        }
        m
    };
    hist(&colors[..g.n()]) == hist(&colors[g.n()..])
}
