//! Exact isomorphism test by backtracking.
//!
//! Candidates are pruned by joint colour refinement (an isomorphism must map
//! each vertex to one of the same stable colour) and by adjacency consistency
//! with every vertex already mapped. Intended for graphs up to ~20 vertices;
//! regular, highly symmetric inputs are the slow case.

use super::{color_refinement, Graph};

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() || g.degree_sequence() != h.degree_sequence() {
        return false;
    }
    if n == 0 {
        return true;
    }
    let colors = color_refinement(&g.disjoint_union(h));
    let (cg, ch) = colors.split_at(n);
    let mut a = cg.to_vec();
    let mut b = ch.to_vec();
    a.sort_unstable();
    b.sort_unstable();
    if a != b {
        return false;
    }

    // Visit g's vertices smallest colour class first, then breadth-first so
    // each new vertex is adjacent to something already mapped.
    let mut class_size = std::collections::HashMap::new();
    for &c in cg {
        *class_size.entry(c).or_insert(0usize) += 1;
    }
    let order = search_order(g, |v| (class_size[&cg[v]], std::cmp::Reverse(g.degree(v))));

    let mut state = Search {
        g,
        h,
        cg,
        ch,
        order: &order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
    };
    state.extend(0)
}

fn search_order<K: Ord>(g: &Graph, key: impl Fn(usize) -> K) -> Vec<usize> {
    let n = g.n();
    let mut placed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let start = (0..n).filter(|&v| !placed[v]).min_by_key(|&v| key(v)).unwrap();
        placed[start] = true;
        order.push(start);
        let mut head = order.len() - 1;
        while head < order.len() {
            let v = order[head];
            head += 1;
            let mut next: Vec<usize> = g.neighbors(v).filter(|&w| !placed[w]).collect();
            next.sort_by_key(|&w| key(w));
            for w in next {
                placed[w] = true;
                order.push(w);
            }
        }
    }
    order
}

struct Search<'a> {
    g: &'a Graph,
    h: &'a Graph,
    cg: &'a [u32],
    ch: &'a [u32],
    order: &'a [usize],
    map: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let v = self.order[depth];
        for w in 0..self.h.n() {
            if self.used[w] || self.cg[v] != self.ch[w] || !self.consistent(v, w, depth) {
                continue;
            }
            self.map[v] = w;
            self.used[w] = true;
            if self.extend(depth + 1) {
                return true;
            }
            self.used[w] = false;
            self.map[v] = usize::MAX;
        }
        false
    }

    fn consistent(&self, v: usize, w: usize, depth: usize) -> bool {
        self.order[..depth]
            .iter()
            .all(|&u| self.g.has_edge(u, v) == self.h.has_edge(self.map[u], w))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec, NamedGraph};

    fn named(name: NamedGraph) -> Graph {
        generate(&FamilySpec::Named { name }).unwrap()
    }

    #[test]
    fn relabeled_path_is_isomorphic() {
        let p4 = generate(&FamilySpec::Path { n: 4 }).unwrap();
        let q = p4.permute(&[2, 0, 3, 1]).unwrap();
        assert_ne!(p4, q);
        assert!(is_isomorphic(&p4, &q));
    }

    #[test]
    fn cycle_versus_two_triangles() {
        let c6 = generate(&FamilySpec::Cycle { n: 6 }).unwrap();
        let tt = Graph::from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert!(!is_isomorphic(&c6, &tt));
    }

    #[test]
    fn srg_and_regular_pairs_are_distinct() {
        assert!(!is_isomorphic(
            &named(NamedGraph::Shrikhande),
            &named(NamedGraph::Rook4x4)
        ));
        assert!(!is_isomorphic(&named(NamedGraph::Petersen), &named(NamedGraph::Prism5)));
        assert!(!is_isomorphic(
            &named(NamedGraph::Cube),
            &named(NamedGraph::Circulant8_1_4)
        ));
        assert!(!is_isomorphic(
            &named(NamedGraph::LineK24),
            &named(NamedGraph::Circulant8_1_2)
        ));
        let r = named(NamedGraph::Rook4x4);
        let perm: Vec<usize> = (0..16).map(|i| (i * 5 + 3) % 16).collect();
        assert!(is_isomorphic(&r, &r.permute(&perm).unwrap()));
    }

    #[test]
    fn ladders() {
        let t = generate(&FamilySpec::TwistedLadder { n: 12, twisted: true }).unwrap();
        let u = generate(&FamilySpec::TwistedLadder { n: 12, twisted: false }).unwrap();
        assert!(!is_isomorphic(&t, &u));
        let a = generate(&FamilySpec::ChordedCycle { n: 12, k: 3 }).unwrap();
        let b = generate(&FamilySpec::ChordedCycle { n: 12, k: 9 }).unwrap();
        let c = generate(&FamilySpec::ChordedCycle { n: 12, k: 4 }).unwrap();
        assert!(is_isomorphic(&a, &b));
        assert!(!is_isomorphic(&a, &c));
    }

    #[test]
    fn empty_graphs() {
        assert!(is_isomorphic(&Graph::empty(0), &Graph::empty(0)));
        assert!(is_isomorphic(&Graph::empty(4), &Graph::empty(4)));
        assert!(!is_isomorphic(&Graph::empty(4), &Graph::empty(3)));
    }
}
