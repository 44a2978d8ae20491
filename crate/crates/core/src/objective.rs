//! Local Influence Estimator (LIE), the fitness maximized by every swarm.
//!
//! For a seed set `S` with one-hop frontier `N¹(S)`:
//!
//! ```text
//! LIE(S) = |S| + Σ_{u ∈ N¹(S)} [1 − (1−p)^{c_u}] · (1 + p · d_u)
//! ```
//!
//! where `c_u` counts the seeds adjacent to `u` and `d_u` counts the
//! neighbors of `u` outside `S ∪ N¹(S)`. The first factor is the exact
//! probability that `u` is activated by at least one seed under independent
//! trials; the second adds the expected one-step spread beyond the frontier.

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};

/// A set of distinct seed nodes, kept sorted by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct SeedSet {
    nodes: Vec<NodeId>,
}

impl SeedSet {
    /// Validates distinctness and range against `g`.
    pub fn new(g: &Graph, nodes: impl IntoIterator<Item = NodeId>) -> Result<Self> {
        let mut nodes: Vec<NodeId> = nodes.into_iter().collect();
        for &v in &nodes {
            g.check_node(v)?;
        }
        nodes.sort_unstable();
        if let Some(w) = nodes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSeed(w[0].0));
        }
        Ok(Self { nodes })
    }

    /// Caller guarantees distinct in-range nodes.
    pub(crate) fn from_distinct(mut nodes: Vec<NodeId>) -> Self {
        nodes.sort_unstable();
        debug_assert!(nodes.windows(2).all(|w| w[0] < w[1]));
        Self { nodes }
    }

    pub fn nodes(&self) -> &[NodeId] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, v: NodeId) -> bool {
        self.nodes.binary_search(&v).is_ok()
    }
}

/// Per-edge activation probability, `0 < p ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct InfectionProbability(f64);

impl InfectionProbability {
    pub fn new(p: f64) -> Result<Self> {
        if p > 0.0 && p <= 1.0 {
            Ok(Self(p))
        } else {
            Err(invalid("p", format!("{p} not in (0, 1]")))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for InfectionProbability {
    fn default() -> Self {
        Self(0.1)
    }
}

/// LIE of `seeds` on `g`.
pub fn lie(g: &Graph, seeds: &SeedSet, p: InfectionProbability) -> Result<f64> {
    for &v in seeds.nodes() {
        g.check_node(v)?;
    }
    Ok(LieScratch::new(g.n()).evaluate(g, seeds.nodes(), p))
}

/// Reusable buffers for repeated LIE evaluations on one graph.
#[derive(Debug, Clone)]
pub struct LieScratch {
    // stamp-tagged marks avoid clearing between evaluations
    stamp: u32,
    seed_mark: Vec<u32>,
    frontier_mark: Vec<u32>,
    seed_hits: Vec<u32>,
    frontier: Vec<NodeId>,
}

impl LieScratch {
    pub fn new(n: usize) -> Self {
        Self {
            stamp: 0,
            seed_mark: vec![0; n],
            frontier_mark: vec![0; n],
            seed_hits: vec![0; n],
            frontier: Vec::new(),
        }
    }

    /// Evaluates LIE for distinct, in-range `seeds`.
    pub fn evaluate(&mut self, g: &Graph, seeds: &[NodeId], p: InfectionProbability) -> f64 {
        if self.seed_mark.len() != g.n() {
            *self = Self::new(g.n());
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.seed_mark.fill(0);
            self.frontier_mark.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;

        for &s in seeds {
            self.seed_mark[s.0] = stamp;
        }
        self.frontier.clear();
        for &s in seeds {
            for &u in g.neighbors(s) {
                if self.seed_mark[u.0] == stamp {
                    continue;
                }
                if self.frontier_mark[u.0] != stamp {
                    self.frontier_mark[u.0] = stamp;
                    self.seed_hits[u.0] = 0;
                    self.frontier.push(u);
                }
                self.seed_hits[u.0] += 1;
            }
        }

        let p = p.get();
        let miss = 1.0 - p;
        let mut total = seeds.len() as f64;
        for &u in &self.frontier {
            let activation = 1.0 - miss.powi(self.seed_hits[u.0] as i32);
            let beyond = g
                .neighbors(u)
                .iter()
                .filter(|w| self.seed_mark[w.0] != stamp && self.frontier_mark[w.0] != stamp)
                .count();
            total += activation * (1.0 + p * beyond as f64);
        }
        total
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: f64) -> InfectionProbability {
        InfectionProbability::new(x).unwrap()
    }

    #[test]
    fn empty_set_scores_zero() {
        let g = Graph::from_edges("path", 3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(lie(&g, &SeedSet::default(), p(0.1)).unwrap(), 0.0);
    }

    #[test]
    fn star_center() {
        let g = Graph::from_edges("star", 5, (1..5).map(|i| (0, i))).unwrap();
        let s = SeedSet::new(&g, [NodeId(0)]).unwrap();
        assert!((lie(&g, &s, p(0.1)).unwrap() - 1.4).abs() < 1e-12);
    }

    #[test]
    fn path_end() {
        let g = Graph::from_edges("path", 3, [(0, 1), (1, 2)]).unwrap();
        let s = SeedSet::new(&g, [NodeId(0)]).unwrap();
        assert!((lie(&g, &s, p(0.1)).unwrap() - 1.11).abs() < 1e-12);
    }

    #[test]
    fn multiple_seed_hits_use_exact_aggregation() {
        // both ends of a path seed the middle: 2 + (1 - 0.9^2)
        let g = Graph::from_edges("path", 3, [(0, 1), (1, 2)]).unwrap();
        let s = SeedSet::new(&g, [NodeId(0), NodeId(2)]).unwrap();
        assert!((lie(&g, &s, p(0.1)).unwrap() - 2.19).abs() < 1e-12);
    }

    #[test]
    fn validation() {
        let g = Graph::from_edges("path", 3, [(0, 1), (1, 2)]).unwrap();
        assert!(SeedSet::new(&g, [NodeId(0), NodeId(0)]).is_err());
        assert!(SeedSet::new(&g, [NodeId(3)]).is_err());
        assert!(InfectionProbability::new(0.0).is_err());
        assert!(InfectionProbability::new(1.5).is_err());
        assert!(InfectionProbability::new(1.0).is_ok());
    }

    #[test]
    fn scratch_reuse_matches_fresh() {
        let g =
            Graph::from_edges("g", 6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (0, 5)]).unwrap();
        let mut scratch = LieScratch::new(g.n());
        for a in 0..6 {
            for b in a + 1..6 {
                let s = SeedSet::new(&g, [NodeId(a), NodeId(b)]).unwrap();
                let fresh = lie(&g, &s, p(0.3)).unwrap();
                assert_eq!(scratch.evaluate(&g, s.nodes(), p(0.3)), fresh);
            }
        }
    }
}
