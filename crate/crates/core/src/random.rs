//! Seeded random finite presentations, for property tests and the
//! acceptance suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{ColorId, FiniteEdge, IndexPair, Presentation, Vertex};

/// A connected finite presentation of degree `k` with `1..=max_vertices`
/// vertices over `{a, b}`. A random spanning tree is grown first, a few extra
/// edges are added where both ends have room, and each vertex's leftover
/// degree is spread over its self count and its outgoing indices.
pub fn random_finite(seed: u64, k: u32, max_vertices: usize) -> Presentation {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(1..=max_vertices.max(1));
    let mut room = vec![k; n];
    let mut edges: Vec<FiniteEdge> = Vec::new();
    for v in 1..n {
        let open: Vec<usize> = (0..v).filter(|&u| room[u] > 0).collect();
        // k >= 2 keeps a leaf of the tree so far open
        let u = open[rng.gen_range(0..open.len())];
        room[u] -= 1;
        room[v] -= 1;
        edges.push(FiniteEdge {
            u,
            v,
            pair: IndexPair::new(1, 1),
        });
    }
    for _ in 0..rng.gen_range(0..=n) {
        let (u, v) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if u != v && room[u] > 0 && room[v] > 0 {
            room[u] -= 1;
            room[v] -= 1;
            edges.push(FiniteEdge {
                u,
                v,
                pair: IndexPair::new(1, 1),
            });
        }
    }
    let mut selfs = vec![0u32; n];
    for x in 0..n {
        let incident: Vec<usize> = (0..edges.len())
            .filter(|&i| edges[i].u == x || edges[i].v == x)
            .collect();
        for _ in 0..room[x] {
            let choice = rng.gen_range(0..=incident.len());
            if choice == incident.len() {
                selfs[x] += 1;
            } else {
                let e = &mut edges[incident[choice]];
                if e.u == x {
                    e.pair.fwd += 1;
                } else {
                    e.pair.bwd += 1;
                }
            }
        }
    }
    let vertices = selfs
        .into_iter()
        .map(|s| Vertex::new(ColorId(rng.gen_range(0..2)), s))
        .collect();
    Presentation::finite(k, vec!["a".into(), "b".into()], vertices, edges)
        .expect("generator respects degree regularity")
}
