use rand::Rng;

use super::{is_isomorphic, Graph};
use crate::error::{invalid, Error, Result};
use crate::rng;

/// Degree-preserving rewiring by double edge swaps.
///
/// Each attempt proposes one swap `(a, b), (c, d) -> (a, d), (c, b)` on the
/// running graph; proposals that would create a loop or a multi-edge are
/// rejected. After every accepted swap the running graph is compared with `g`
/// and returned as soon as it is non-isomorphic.
pub fn rewire_degree_preserving(g: &Graph, attempts: usize, seed: u64) -> Result<Graph> {
    if g.edge_count() < 2 {
        return Err(invalid("g", "rewiring needs at least 2 edges"));
    }
    let mut rng = rng::seeded(seed);
    let mut cur = g.clone();
    for _ in 0..attempts {
        let m = cur.edge_count();
        let i = rng.random_range(0..m);
        let j = rng.random_range(0..m - 1);
        let j = if j >= i { j + 1 } else { j };
        let (a, b) = cur.edges()[i];
        let (mut c, mut d) = cur.edges()[j];
        if rng.random::<bool>() {
            std::mem::swap(&mut c, &mut d);
        }
        if a == d || c == b || cur.has_edge(a, d) || cur.has_edge(c, b) {
            continue;
        }
        cur.swap_edges((a, b), (c, d));
        if !is_isomorphic(&cur, g) {
            return Ok(cur);
        }
    }
    Err(Error::ExhaustedAttempts { attempts })
}
