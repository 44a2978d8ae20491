#![allow(dead_code)]

use dqssa::{Graph, InfectionProbability, NodeId, SeedSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erdős–Rényi style graph with at most `max_edges` edges.
pub fn random_graph(seed: u64, n: usize, density: f64, max_edges: usize) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(density) {
                edges.push((u, v));
            }
        }
    }
    // random subset when over budget
    while edges.len() > max_edges {
        let i = rng.random_range(0..edges.len());
        edges.swap_remove(i);
    }
    Graph::from_edges(format!("er-{seed}"), n, edges).unwrap()
}

pub fn seeds(g: &Graph, nodes: &[usize]) -> SeedSet {
    SeedSet::new(g, nodes.iter().map(|&v| NodeId(v))).unwrap()
}

pub fn prob(p: f64) -> InfectionProbability {
    InfectionProbability::new(p).unwrap()
}

/// Best LIE over every pair of distinct nodes.
pub fn brute_force_best_pair(g: &Graph, p: InfectionProbability) -> f64 {
    let mut best = f64::NEG_INFINITY;
    for a in 0..g.n() {
        for b in a + 1..g.n() {
            let s = seeds(g, &[a, b]);
            best = best.max(dqssa::lie(g, &s, p).unwrap());
        }
    }
    best
}

/// Four triangles; triangles 0-1 and 2-3 are joined by a single edge.
pub fn triangle_pairs() -> Graph {
    let mut edges = Vec::new();
    for t in 0..4 {
        let b = 3 * t;
        edges.extend([(b, b + 1), (b + 1, b + 2), (b, b + 2)]);
    }
    edges.extend([(2, 3), (8, 9)]);
    Graph::from_edges("triangle-pairs", 12, edges).unwrap()
}
