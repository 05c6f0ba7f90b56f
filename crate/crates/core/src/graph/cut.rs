use super::Graph;
use crate::error::{Error, Result};

/// Number of edges whose endpoints fall on opposite sides of `s`
/// (`s[v]` is the side of vertex `v`).
pub fn cut_value(g: &Graph, s: &[bool]) -> Result<usize> {
    if s.len() != g.n() {
        return Err(Error::LengthMismatch {
            expected: g.n(),
            got: s.len(),
        });
    }
    // Each crossing edge is counted once, from its endpoint on side 1.
    let mut side = vec![0u64; g.n().div_ceil(64)];
    for (v, &b) in s.iter().enumerate() {
        if b {
            side[v / 64] |= 1 << (v % 64);
        }
    }
    Ok((0..g.n())
        .filter(|&v| s[v])
        .map(|v| {
            g.row(v)
                .words()
                .iter()
                .zip(&side)
                .map(|(a, s)| (a & !s).count_ones() as usize)
                .sum::<usize>()
        })
        .sum())
}

/// Cut value at basis index `x`, where bit `v` of `x` is the side of vertex `v`.
/// Requires `n <= 64`.
pub fn cut_index(g: &Graph, x: u64) -> usize {
    (0..g.n())
        .filter(|&v| x >> v & 1 == 1)
        .map(|v| (g.neighbor_mask(v) & !x).count_ones() as usize)
        .sum()
}

/// Recover a graph from its cut function.
///
/// The cut function is a multilinear polynomial whose `s_u s_v` coefficient is
/// `-2` exactly when `uv` is an edge, so
/// `cut(e_u) + cut(e_v) - cut(e_u + e_v) - cut(0)` is `2` on edges and `0`
/// elsewhere. Only bitstrings of Hamming weight at most two are queried.
pub fn reconstruct_from_cuts(n: usize, mut cut: impl FnMut(&[bool]) -> i64) -> Result<Graph> {
    let mut s = vec![false; n];
    let base = cut(&s);
    let single: Vec<i64> = (0..n)
        .map(|u| {
            s[u] = true;
            let c = cut(&s);
            s[u] = false;
            c
        })
        .collect();
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            s[u] = true;
            s[v] = true;
            let pair = cut(&s);
            s[u] = false;
            s[v] = false;
            match single[u] + single[v] - pair - base {
                0 => {}
                2 => edges.push((u, v)),
                value => return Err(Error::InconsistentOracle { u, v, value }),
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Parse a bitstring with qubit 0 as the rightmost character.
pub fn bits_from_str(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .rev()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(Error::Parse(format!("bad bit character {other:?}"))),
        })
        .collect()
}

/// Render `x` as an `n`-character bitstring, qubit 0 rightmost.
pub fn bits_to_string(x: u64, n: usize) -> String {
    (0..n).rev().map(|i| if x >> i & 1 == 1 { '1' } else { '0' }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate, FamilySpec};

    fn k3() -> Graph {
        generate(&FamilySpec::Complete { n: 3 }).unwrap()
    }

    #[test]
    fn cut_examples() {
        let p4 = generate(&FamilySpec::Path { n: 4 }).unwrap();
        assert_eq!(cut_value(&k3(), &bits_from_str("000").unwrap()).unwrap(), 0);
        assert_eq!(cut_value(&k3(), &bits_from_str("010").unwrap()).unwrap(), 2);
        assert_eq!(cut_value(&p4, &bits_from_str("0101").unwrap()).unwrap(), 3);
        assert!(matches!(
            cut_value(&k3(), &[true]),
            Err(Error::LengthMismatch { expected: 3, got: 1 })
        ));
    }

    #[test]
    fn cut_index_matches_cut_value() {
        let g = generate(&FamilySpec::Er { n: 7, p: 0.5, seed: 3 }).unwrap();
        for x in 0..1u64 << 7 {
            let s: Vec<bool> = (0..7).map(|i| x >> i & 1 == 1).collect();
            assert_eq!(cut_index(&g, x), cut_value(&g, &s).unwrap());
        }
    }

    #[test]
    fn reconstruct_examples() {
        let g = k3();
        let back = reconstruct_from_cuts(3, |s| cut_value(&g, s).unwrap() as i64).unwrap();
        assert_eq!(back, g);
        let e = Graph::empty(5);
        let back = reconstruct_from_cuts(5, |s| cut_value(&e, s).unwrap() as i64).unwrap();
        assert_eq!(back.edge_count(), 0);
    }

    #[test]
    fn reconstruct_rejects_non_cut_oracle() {
        // Squared Hamming weight has pair coefficient +2, never produced by a cut.
        let err = reconstruct_from_cuts(3, |s| {
            let w = s.iter().filter(|&&b| b).count() as i64;
            w * w
        })
        .unwrap_err();
        assert!(matches!(err, Error::InconsistentOracle { value: -2, .. }));
    }

    #[test]
    fn bitstring_rendering() {
        assert_eq!(bits_to_string(0b0010, 4), "0010");
        assert_eq!(bits_from_str("0010").unwrap(), vec![false, true, false, false]);
        assert!(bits_from_str("01x").is_err());
    }
}
