//! Generators for every graph family used by the experiments.

use std::fmt;
use std::str::FromStr;

use rand::seq::IndexedRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{invalid, Error, Result};
use crate::rng;

/// Named graphs with fixed canonical labelings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NamedGraph {
    /// 3-regular on 10 vertices.
    Petersen,
    /// Cayley graph on Z4 x Z4 with connection set ±(1,0), ±(0,1), ±(1,1).
    Shrikhande,
    /// 4x4 rook's graph, K4 □ K4.
    Rook4x4,
    /// 3-cube Q3.
    Cube,
    /// Line graph of K_{2,4}.
    LineK24,
    /// Pentagonal prism C5 □ K2; 3-regular partner of Petersen.
    Prism5,
    /// Circulant C8(1,4); 3-regular partner of the cube.
    Circulant8_1_4,
    /// Circulant C8(1,2); 4-regular partner of L(K_{2,4}).
    Circulant8_1_2,
}

impl NamedGraph {
    pub const ALL: [NamedGraph; 8] = [
        NamedGraph::Petersen,
        NamedGraph::Shrikhande,
        NamedGraph::Rook4x4,
        NamedGraph::Cube,
        NamedGraph::LineK24,
        NamedGraph::Prism5,
        NamedGraph::Circulant8_1_4,
        NamedGraph::Circulant8_1_2,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NamedGraph::Petersen => "petersen",
            NamedGraph::Shrikhande => "shrikhande",
            NamedGraph::Rook4x4 => "rook4x4",
            NamedGraph::Cube => "cube",
            NamedGraph::LineK24 => "line_k24",
            NamedGraph::Prism5 => "prism5",
            NamedGraph::Circulant8_1_4 => "circulant8_1_4",
            NamedGraph::Circulant8_1_2 => "circulant8_1_2",
        }
    }

    fn build(self) -> Graph {
        let edges: Vec<(usize, usize)> = match self {
            NamedGraph::Petersen => (0..5)
                .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 2) % 5)])
                .collect(),
            NamedGraph::Shrikhande => {
                let id = |a: usize, b: usize| (a % 4) * 4 + b % 4;
                (0..4)
                    .flat_map(|a| (0..4).map(move |b| (a, b)))
                    .flat_map(|(a, b)| [(1, 0), (0, 1), (1, 1)].map(|(da, db)| (id(a, b), id(a + da, b + db))))
                    .collect()
            }
            NamedGraph::Rook4x4 => pairs(16).filter(|&(u, v)| u / 4 == v / 4 || u % 4 == v % 4).collect(),
            NamedGraph::Cube => pairs(8).filter(|&(u, v)| (u ^ v).count_ones() == 1).collect(),
            NamedGraph::LineK24 => {
                // vertex 4i + j is the edge (a_i, b_j) of K_{2,4}
                pairs(8).filter(|&(x, y)| x / 4 == y / 4 || x % 4 == y % 4).collect()
            }
            NamedGraph::Prism5 => (0..5)
                .flat_map(|i| [(i, (i + 1) % 5), (i, i + 5), (5 + i, 5 + (i + 1) % 5)])
                .collect(),
            NamedGraph::Circulant8_1_4 => circulant(8, &[1, 4]),
            NamedGraph::Circulant8_1_2 => circulant(8, &[1, 2]),
        };
        let n = match self {
            NamedGraph::Petersen | NamedGraph::Prism5 => 10,
            NamedGraph::Shrikhande | NamedGraph::Rook4x4 => 16,
            _ => 8,
        };
        Graph::from_edges(n, edges).expect("named graph definitions are simple")
    }
}

impl FromStr for NamedGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        NamedGraph::ALL
            .into_iter()
            .find(|g| g.as_str() == s)
            .ok_or_else(|| invalid("name", format!("unknown named graph {s:?}")))
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |u| (u + 1..n).map(move |v| (u, v)))
}

fn circulant(n: usize, jumps: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| jumps.iter().map(move |&j| (i.min((i + j) % n), i.max((i + j) % n))))
        .collect();
    e.sort_unstable();
    e.dedup();
    e
}

/// A graph family member. Deterministic families are fully determined by
/// their sizes; `Er` and `Ba` carry their seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum FamilySpec {
    Path {
        n: usize,
    },
    Cycle {
        n: usize,
    },
    /// Cycle on `n - 1` vertices plus one pendant vertex; `n` vertices total.
    Pan {
        n: usize,
    },
    /// `K_{1, n-1}`; `n` vertices total.
    Star {
        n: usize,
    },
    Complete {
        n: usize,
    },
    /// `K_n` with the edge `(0, 1)` removed.
    CompleteMinusEdge {
        n: usize,
    },
    CompleteBipartite {
        a: usize,
        b: usize,
    },
    Er {
        n: usize,
        p: f64,
        seed: u64,
    },
    Ba {
        n: usize,
        m: usize,
        seed: u64,
    },
    /// Centroid 0 joined to `pendants` leaves and to a path covering the
    /// remaining vertices. With `pendant_edge`, leaves 1 and 2 are also joined.
    Broom {
        n: usize,
        pendants: usize,
        #[serde(default)]
        pendant_edge: bool,
    },
    /// `C_n` plus the chord `(0, k)`.
    ChordedCycle {
        n: usize,
        k: usize,
    },
    /// `C_n` plus chords `(0, 2)` and `(k, k + 2 mod n)`.
    InscribedTriangleCycle {
        n: usize,
        k: usize,
    },
    /// Circular ladder on `n` vertices (`n / 2` rungs); with `twisted`, rungs
    /// 0 and 1 are crossed.
    TwistedLadder {
        n: usize,
        #[serde(default = "yes")]
        twisted: bool,
    },
    Named {
        name: NamedGraph,
    },
}

fn yes() -> bool {
    true
}

/// Build the family member described by `spec`.
pub fn generate(spec: &FamilySpec) -> Result<Graph> {
    use FamilySpec::*;
    let need = |ok: bool, field: &'static str, why: &str| if ok { Ok(()) } else { Err(invalid(field, why)) };
    match *spec {
        Path { n } => {
            need(n >= 1, "n", "path needs at least 1 vertex")?;
            Graph::from_edges(n, (1..n).map(|i| (i - 1, i)))
        }
        Cycle { n } => {
            need(n >= 3, "n", "cycle needs at least 3 vertices")?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
        }
        Pan { n } => {
            need(n >= 4, "n", "pan needs at least 4 vertices")?;
            let c = n - 1;
            Graph::from_edges(n, (0..c).map(|i| (i, (i + 1) % c)).chain([(0, c)]))
        }
        Star { n } => {
            need(n >= 2, "n", "star needs at least 2 vertices")?;
            Graph::from_edges(n, (1..n).map(|i| (0, i)))
        }
        Complete { n } => {
            need(n >= 1, "n", "complete graph needs at least 1 vertex")?;
            Graph::from_edges(n, pairs(n))
        }
        CompleteMinusEdge { n } => {
            need(n >= 2, "n", "needs at least 2 vertices")?;
            Graph::from_edges(n, pairs(n).filter(|&e| e != (0, 1)))
        }
        CompleteBipartite { a, b } => {
            need(a >= 1, "a", "both sides need at least 1 vertex")?;
            need(b >= 1, "b", "both sides need at least 1 vertex")?;
            Graph::from_edges(a + b, (0..a).flat_map(|i| (a..a + b).map(move |j| (i, j))))
        }
        Er { n, p, seed } => {
            need(n >= 1, "n", "needs at least 1 vertex")?;
            need((0.0..=1.0).contains(&p), "p", "probability must lie in [0, 1]")?;
            let mut rng = rng::seeded(seed);
            let edges: Vec<_> = pairs(n).filter(|_| rng.random::<f64>() < p).collect();
            Graph::from_edges(n, edges)
        }
        Ba { n, m, seed } => {
            need(m >= 1, "m", "attachment count must be at least 1")?;
            need(m < n, "m", "attachment count must be below n")?;
            barabasi_albert(n, m, seed)
        }
        Broom {
            n,
            pendants,
            pendant_edge,
        } => {
            need(pendants >= 1, "pendants", "need at least one pendant")?;
            need(n > pendants, "n", "n must exceed the pendant count")?;
            need(!pendant_edge || pendants >= 2, "pendant_edge", "needs two pendants")?;
            let mut edges: Vec<_> = (1..=pendants).map(|i| (0, i)).collect();
            let mut prev = 0;
            for v in pendants + 1..n {
                edges.push((prev, v));
                prev = v;
            }
            if pendant_edge {
                edges.push((1, 2));
            }
            Graph::from_edges(n, edges)
        }
        ChordedCycle { n, k } => {
            need(n >= 4, "n", "chorded cycle needs at least 4 vertices")?;
            need((2..=n - 2).contains(&k), "k", "chord (0, k) needs 2 <= k <= n - 2")?;
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)).chain([(0, k)]))
        }
        InscribedTriangleCycle { n, k } => {
            need(n >= 6, "n", "needs at least 6 vertices")?;
            need((1..n).contains(&k), "k", "second chord (k, k + 2) needs 1 <= k < n")?;
            let extra = [(0, 2), (k, (k + 2) % n)];
            Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)).chain(extra))
        }
        TwistedLadder { n, twisted } => {
            need(n >= 6 && n % 2 == 0, "n", "circular ladder needs an even n >= 6")?;
            let m = n / 2;
            let ring = (0..m).flat_map(|i| [(i, (i + 1) % m), (m + i, m + (i + 1) % m)]);
            let rungs = (0..m).map(|i| match (twisted, i) {
                (true, 0) => (0, m + 1),
                (true, 1) => (1, m),
                _ => (i, m + i),
            });
            Graph::from_edges(n, ring.chain(rungs))
        }
        Named { name } => Ok(name.build()),
    }
}

/// Preferential attachment: start from the star on `m + 1` vertices, then
/// each new vertex attaches to `m` distinct existing vertices sampled in
/// proportion to degree.
fn barabasi_albert(n: usize, m: usize, seed: u64) -> Result<Graph> {
    let mut rng = rng::seeded(seed);
    let mut edges: Vec<(usize, usize)> = (1..=m).map(|i| (0, i)).collect();
    // every endpoint occurrence, so uniform picks are degree-weighted
    let mut ends: Vec<usize> = edges.iter().flat_map(|&(u, v)| [u, v]).collect();
    for v in m + 1..n {
        let mut targets: Vec<usize> = Vec::with_capacity(m);
        while targets.len() < m {
            let t = *ends.choose(&mut rng).expect("non-empty");
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        for t in targets {
            edges.push((t, v));
            ends.extend([t, v]);
        }
    }
    Graph::from_edges(n, edges)
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use FamilySpec::*;
        match self {
            Path { n } => write!(f, "path:{n}"),
            Cycle { n } => write!(f, "cycle:{n}"),
            Pan { n } => write!(f, "pan:{n}"),
            Star { n } => write!(f, "star:{n}"),
            Complete { n } => write!(f, "complete:{n}"),
            CompleteMinusEdge { n } => write!(f, "complete_minus_edge:{n}"),
            CompleteBipartite { a, b } => write!(f, "bipartite:{a},{b}"),
            Er { n, p, seed } => write!(f, "er:{n},{p},{seed}"),
            Ba { n, m, seed } => write!(f, "ba:{n},{m},{seed}"),
            Broom {
                n,
                pendants,
                pendant_edge: false,
            } => write!(f, "broom:{n},{pendants}"),
            Broom {
                n,
                pendants,
                pendant_edge: true,
            } => write!(f, "broom_edge:{n},{pendants}"),
            ChordedCycle { n, k } => write!(f, "chorded_cycle:{n},{k}"),
            InscribedTriangleCycle { n, k } => write!(f, "inscribed_triangle_cycle:{n},{k}"),
            TwistedLadder { n, twisted: true } => write!(f, "twisted_ladder:{n}"),
            TwistedLadder { n, twisted: false } => write!(f, "ladder:{n}"),
            Named { name } => f.write_str(name.as_str()),
        }
    }
}

impl FromStr for FamilySpec {
    type Err = Error;

    /// Parses the `family:args` form produced by `Display`, e.g. `path:6`,
    /// `bipartite:2,3`, `er:12,0.35,7` or a bare named graph like `petersen`.
    fn from_str(s: &str) -> Result<Self> {
        use FamilySpec::*;
        let (tag, args) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<&str> = if args.is_empty() {
            vec![]
        } else {
            args.split(',').collect()
        };
        let arg = |i: usize| -> Result<&str> {
            args.get(i)
                .copied()
                .ok_or_else(|| Error::Parse(format!("{tag}: missing argument {}", i + 1)))
        };
        let int =
            |i: usize| -> Result<usize> { arg(i)?.trim().parse().map_err(|e| Error::Parse(format!("{tag}: {e}"))) };
        let seed =
            |i: usize| -> Result<u64> { arg(i)?.trim().parse().map_err(|e| Error::Parse(format!("{tag}: {e}"))) };
        Ok(match tag {
            "path" => Path { n: int(0)? },
            "cycle" => Cycle { n: int(0)? },
            "pan" => Pan { n: int(0)? },
            "star" => Star { n: int(0)? },
            "complete" => Complete { n: int(0)? },
            "complete_minus_edge" => CompleteMinusEdge { n: int(0)? },
            "bipartite" => CompleteBipartite { a: int(0)?, b: int(1)? },
            "er" => Er {
                n: int(0)?,
                p: arg(1)?.trim().parse().map_err(|e| Error::Parse(format!("er: {e}")))?,
                seed: seed(2)?,
            },
            "ba" => Ba {
                n: int(0)?,
                m: int(1)?,
                seed: seed(2)?,
            },
            "broom" => Broom {
                n: int(0)?,
                pendants: int(1)?,
                pendant_edge: false,
            },
            "broom_edge" => Broom {
                n: int(0)?,
                pendants: int(1)?,
                pendant_edge: true,
            },
            "chorded_cycle" => ChordedCycle { n: int(0)?, k: int(1)? },
            "inscribed_triangle_cycle" => InscribedTriangleCycle { n: int(0)?, k: int(1)? },
            "twisted_ladder" => TwistedLadder {
                n: int(0)?,
                twisted: true,
            },
            "ladder" => TwistedLadder {
                n: int(0)?,
                twisted: false,
            },
            name => Named { name: name.parse()? },
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: FamilySpec) -> Graph {
        generate(&spec).unwrap()
    }

    /// (lambda, mu) if `g` is strongly regular, counted directly.
    fn srg_params(g: &Graph) -> Option<(usize, usize, usize, usize)> {
        let k = g.degree(0);
        if g.degrees().iter().any(|&d| d != k) {
            return None;
        }
        let (mut lambda, mut mu) = (None, None);
        for (u, v) in pairs(g.n()) {
            let common = g.neighbors(u).filter(|&w| g.has_edge(v, w)).count();
            let slot = if g.has_edge(u, v) { &mut lambda } else { &mut mu };
            match *slot {
                None => *slot = Some(common),
                Some(c) if c != common => return None,
                _ => {}
            }
        }
        Some((g.n(), k, lambda?, mu?))
    }

    #[test]
    fn path_six() {
        let p = g(FamilySpec::Path { n: 6 });
        assert_eq!(p.edge_count(), 5);
        assert_eq!(p.degrees(), vec![1, 2, 2, 2, 2, 1]);
    }

    #[test]
    fn broom_17_2() {
        let b = g(FamilySpec::Broom {
            n: 17,
            pendants: 2,
            pendant_edge: false,
        });
        assert_eq!(b.n(), 17);
        assert_eq!(b.edge_count(), 16);
        assert!(b.is_connected());
        assert_eq!(b.degree(0), 3);
        assert_eq!(b.degree(1), 1);
        assert_eq!(b.degree(2), 1);
        // the path hangs off the centroid: 14 vertices, ending in a leaf
        assert_eq!(b.degree(16), 1);
        assert!((3..16).all(|v| b.degree(v) == 2));
        let v = g(FamilySpec::Broom {
            n: 17,
            pendants: 2,
            pendant_edge: true,
        });
        assert_eq!(v.edge_count(), 17);
        assert!(v.has_edge(1, 2));
    }

    #[test]
    fn named_graphs_are_regular_as_published() {
        let p = g(FamilySpec::Named {
            name: NamedGraph::Petersen,
        });
        assert_eq!(p.n(), 10);
        assert!(p.degrees().iter().all(|&d| d == 3));
        assert_eq!(srg_params(&p), Some((10, 3, 0, 1)));
        for name in [NamedGraph::Shrikhande, NamedGraph::Rook4x4] {
            let s = g(FamilySpec::Named { name });
            assert_eq!(s.edge_count(), 48);
            assert_eq!(srg_params(&s), Some((16, 6, 2, 2)), "{name:?}");
        }
        let q3 = g(FamilySpec::Named { name: NamedGraph::Cube });
        assert_eq!((q3.n(), q3.edge_count()), (8, 12));
        let l = g(FamilySpec::Named {
            name: NamedGraph::LineK24,
        });
        assert!(l.degrees().iter().all(|&d| d == 4));
        for (name, n, d) in [
            (NamedGraph::Prism5, 10, 3),
            (NamedGraph::Circulant8_1_4, 8, 3),
            (NamedGraph::Circulant8_1_2, 8, 4),
        ] {
            let h = g(FamilySpec::Named { name });
            assert_eq!(h.n(), n);
            assert!(h.degrees().iter().all(|&x| x == d), "{name:?}");
        }
    }

    #[test]
    fn er_is_seed_reproducible() {
        let a = g(FamilySpec::Er {
            n: 12,
            p: 0.35,
            seed: 11,
        });
        let b = g(FamilySpec::Er {
            n: 12,
            p: 0.35,
            seed: 11,
        });
        let c = g(FamilySpec::Er {
            n: 12,
            p: 0.35,
            seed: 12,
        });
        assert_eq!(a, b);
        assert_ne!(a.edges(), c.edges());
    }

    #[test]
    fn ba_shape() {
        let b = g(FamilySpec::Ba { n: 12, m: 2, seed: 1 });
        assert_eq!(b.edge_count(), 2 + 2 * (12 - 3));
        assert!(b.is_connected());
        assert_eq!(b, g(FamilySpec::Ba { n: 12, m: 2, seed: 1 }));
    }

    #[test]
    fn table_families() {
        assert_eq!(g(FamilySpec::Pan { n: 4 }).degree_sequence(), vec![3, 2, 2, 1]);
        assert_eq!(g(FamilySpec::Star { n: 4 }).degree_sequence(), vec![3, 1, 1, 1]);
        assert_eq!(g(FamilySpec::CompleteMinusEdge { n: 4 }).edge_count(), 5);
        assert_eq!(g(FamilySpec::CompleteBipartite { a: 3, b: 4 }).edge_count(), 12);
        let l = g(FamilySpec::TwistedLadder { n: 12, twisted: true });
        let u = g(FamilySpec::TwistedLadder { n: 12, twisted: false });
        assert_eq!(l.degree_sequence(), u.degree_sequence());
        assert!(l.degrees().iter().all(|&d| d == 3));
        let t = g(FamilySpec::InscribedTriangleCycle { n: 12, k: 4 });
        assert_eq!(t.edge_count(), 14);
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        let field = |s: FamilySpec| match generate(&s) {
            Err(Error::InvalidParameter { field, .. }) => field,
            other => panic!("expected invalid parameter, got {other:?}"),
        };
        assert_eq!(field(FamilySpec::Er { n: 5, p: 1.5, seed: 0 }), "p");
        assert_eq!(field(FamilySpec::Ba { n: 5, m: 5, seed: 0 }), "m");
        assert_eq!(field(FamilySpec::Cycle { n: 2 }), "n");
        assert_eq!(field(FamilySpec::TwistedLadder { n: 15, twisted: true }), "n");
        assert_eq!(field(FamilySpec::ChordedCycle { n: 8, k: 1 }), "k");
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in [
            "path:6",
            "bipartite:3,4",
            "er:12,0.35,7",
            "broom_edge:17,2",
            "petersen",
            "ladder:12",
        ] {
            let spec: FamilySpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("path".parse::<FamilySpec>().is_err());
        assert!("nonsense:3".parse::<FamilySpec>().is_err());
    }
}
