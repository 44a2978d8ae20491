//! Louvain community detection and the budgeting step that turns a
//! partition into a ranked candidate pool.

use std::collections::HashMap;
use std::io::{self, Write};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};

/// Node to community assignment with contiguous labels.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    assignment: Vec<usize>,
    num_communities: usize,
    modularity: f64,
}

impl Partition {
    /// Builds a partition from arbitrary labels, relabelling them to
    /// `0..num_communities` in order of first appearance. The modularity is
    /// computed on `g` (0 for an edgeless graph).
    pub fn from_labels(g: &Graph, labels: &[usize]) -> Result<Self> {
        if labels.len() != g.n() {
            return Err(invalid(
                "labels",
                format!("{} labels for {} nodes", labels.len(), g.n()),
            ));
        }
        let assignment = relabel(labels);
        let num_communities = assignment.iter().max().map_or(0, |&c| c + 1);
        let modularity = if g.m() == 0 {
            0.0
        } else {
            modularity(g, &assignment)?
        };
        Ok(Self {
            assignment,
            num_communities,
            modularity,
        })
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    #[inline]
    pub fn community_of(&self, v: NodeId) -> usize {
        self.assignment[v.0]
    }

    pub fn num_communities(&self) -> usize {
        self.num_communities
    }

    pub fn modularity(&self) -> f64 {
        self.modularity
    }

    /// Members of each community, ascending by node index.
    pub fn communities(&self) -> Vec<Vec<NodeId>> {
        let mut out = vec![Vec::new(); self.num_communities];
        for (v, &c) in self.assignment.iter().enumerate() {
            out[c].push(NodeId(v));
        }
        out
    }

    /// One line per node: `original_id community_label`.
    pub fn write_dump<W: Write>(&self, g: &Graph, mut out: W) -> io::Result<()> {
        for v in g.nodes() {
            writeln!(out, "{} {}", g.original_id(v), self.community_of(v))?;
        }
        out.flush()
    }
}

fn relabel(labels: &[usize]) -> Vec<usize> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|&l| {
            let next = map.len();
            *map.entry(l).or_insert(next)
        })
        .collect()
}

/// Newman-Girvan modularity `Σ_c [e_c/m − (d_c/2m)²]`.
pub fn modularity(g: &Graph, assignment: &[usize]) -> Result<f64> {
    modularity_with_resolution(g, assignment, 1.0)
}

pub fn modularity_with_resolution(g: &Graph, assignment: &[usize], resolution: f64) -> Result<f64> {
    if g.m() == 0 {
        return Err(Error::NoEdges);
    }
    if assignment.len() != g.n() {
        return Err(invalid(
            "assignment",
            format!("{} labels for {} nodes", assignment.len(), g.n()),
        ));
    }
    let communities = assignment.iter().max().map_or(0, |&c| c + 1);
    let mut internal = vec![0.0f64; communities];
    let mut degree = vec![0.0f64; communities];
    for (u, v) in g.edges() {
        if assignment[u.0] == assignment[v.0] {
            internal[assignment[u.0]] += 1.0;
        }
    }
    for v in g.nodes() {
        degree[assignment[v.0]] += g.neighbors(v).len() as f64;
    }
    let m = g.m() as f64;
    Ok(internal
        .iter()
        .zip(&degree)
        .map(|(&e, &d)| e / m - resolution * (d / (2.0 * m)).powi(2))
        .sum())
}

/// Outcome of a Louvain run with the modularity reached after each pass.
#[derive(Debug, Clone)]
pub struct LouvainOutcome {
    pub partition: Partition,
    /// Modularity of the original graph's assignment after each
    /// local-moving plus aggregation pass, starting with the singleton
    /// partition.
    pub pass_modularity: Vec<f64>,
}

/// Louvain community detection with a seeded node-visiting order.
pub fn louvain(g: &Graph, resolution: f64, rng_seed: u64) -> Result<Partition> {
    louvain_with_history(g, resolution, rng_seed).map(|o| o.partition)
}

pub fn louvain_with_history(g: &Graph, resolution: f64, rng_seed: u64) -> Result<LouvainOutcome> {
    if g.n() == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    if !(resolution > 0.0 && resolution.is_finite()) {
        return Err(invalid(
            "resolution",
            format!("{resolution} must be positive"),
        ));
    }
    let singletons: Vec<usize> = (0..g.n()).collect();
    if g.m() == 0 {
        return Ok(LouvainOutcome {
            partition: Partition::from_labels(g, &singletons)?,
            pass_modularity: vec![0.0],
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut level = WeightedGraph::from_graph(g);
    // community of each original node
    let mut membership = singletons;
    let mut history = vec![modularity_with_resolution(g, &membership, resolution)?];

    loop {
        let (local, moved) = level.local_moving(resolution, &mut rng);
        if !moved {
            break;
        }
        let local = relabel(&local);
        for c in membership.iter_mut() {
            *c = local[*c];
        }
        history.push(modularity_with_resolution(g, &membership, resolution)?);
        level = level.aggregate(&local);
    }

    Ok(LouvainOutcome {
        partition: Partition::from_labels(g, &membership)?,
        pass_modularity: history,
    })
}

/// Weighted graph used across Louvain levels. `self_weight[i]` counts the
/// internal weight of node `i` twice, as it contributes to its degree.
struct WeightedGraph {
    adjacency: Vec<Vec<(usize, f64)>>,
    self_weight: Vec<f64>,
    degree: Vec<f64>,
    total: f64,
}

impl WeightedGraph {
    fn from_graph(g: &Graph) -> Self {
        let adjacency: Vec<Vec<(usize, f64)>> = g
            .nodes()
            .map(|v| g.neighbors(v).iter().map(|u| (u.0, 1.0)).collect())
            .collect();
        let degree: Vec<f64> = adjacency.iter().map(|a| a.len() as f64).collect();
        Self {
            total: degree.iter().sum(),
            self_weight: vec![0.0; g.n()],
            adjacency,
            degree,
        }
    }

    fn len(&self) -> usize {
        self.adjacency.len()
    }

    /// Repeated sweeps moving single nodes to the neighboring community with
    /// the largest strictly positive gain. Returns the community of each node
    /// and whether any node moved.
    fn local_moving(&self, resolution: f64, rng: &mut ChaCha8Rng) -> (Vec<usize>, bool) {
        let n = self.len();
        let mut community: Vec<usize> = (0..n).collect();
        let mut tot = self.degree.clone();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);

        let mut link = vec![0.0f64; n];
        let mut touched: Vec<usize> = Vec::new();
        let mut any_move = false;
        loop {
            let mut moved = false;
            for &i in &order {
                let ki = self.degree[i];
                let own = community[i];
                for &(j, w) in &self.adjacency[i] {
                    let c = community[j];
                    if link[c] == 0.0 {
                        touched.push(c);
                    }
                    link[c] += w;
                }
                tot[own] -= ki;
                let gain = |c: usize, w: f64| w - resolution * tot[c] * ki / self.total;

                let stay = gain(own, link[own]);
                let mut best = own;
                let mut best_gain = stay;
                for &c in &touched {
                    let g = gain(c, link[c]);
                    if g > best_gain {
                        best = c;
                        best_gain = g;
                    }
                }
                // only strictly positive improvements move a node
                if best != own && best_gain - stay <= 1e-12 {
                    best = own;
                }
                tot[best] += ki;
                if best != own {
                    community[i] = best;
                    moved = true;
                    any_move = true;
                }
                for c in touched.drain(..) {
                    link[c] = 0.0;
                }
            }
            if !moved {
                break;
            }
        }
        (community, any_move)
    }

    fn aggregate(&self, community: &[usize]) -> Self {
        let k = community.iter().max().map_or(0, |&c| c + 1);
        let mut self_weight = vec![0.0f64; k];
        let mut degree = vec![0.0f64; k];
        let mut links: Vec<HashMap<usize, f64>> = vec![HashMap::new(); k];
        for i in 0..self.len() {
            let ci = community[i];
            self_weight[ci] += self.self_weight[i];
            degree[ci] += self.degree[i];
            for &(j, w) in &self.adjacency[i] {
                let cj = community[j];
                if ci == cj {
                    self_weight[ci] += w;
                } else {
                    *links[ci].entry(cj).or_insert(0.0) += w;
                }
            }
        }
        let adjacency = links
            .into_iter()
            .map(|m| {
                let mut v: Vec<(usize, f64)> = m.into_iter().collect();
                v.sort_unstable_by_key(|&(c, _)| c);
                v
            })
            .collect();
        Self {
            adjacency,
            self_weight,
            degree,
            total: self.total,
        }
    }
}

/// Candidate nodes ranked by descending budget value.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidatePool {
    ranked: Vec<NodeId>,
    budget: Vec<f64>,
}

impl CandidatePool {
    /// Wraps an explicit ranking. `budget[i]` belongs to `ranked[i]` and must
    /// be non-increasing; nodes must be distinct.
    pub fn new(ranked: Vec<NodeId>, budget: Vec<f64>) -> Result<Self> {
        if ranked.len() != budget.len() {
            return Err(invalid("budget", "length differs from ranking"));
        }
        if ranked.is_empty() {
            return Err(invalid("ranked", "candidate pool is empty"));
        }
        let mut sorted = ranked.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateSeed(w[0].0));
        }
        if budget.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid("budget", "values must be non-increasing"));
        }
        Ok(Self { ranked, budget })
    }

    pub fn ranked(&self) -> &[NodeId] {
        &self.ranked
    }

    pub fn budget(&self) -> &[f64] {
        &self.budget
    }

    pub fn len(&self) -> usize {
        self.ranked.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranked.is_empty()
    }
}

/// Budget value used to rank candidates: the node's degree.
#[inline]
fn budget_of(g: &Graph, v: NodeId) -> f64 {
    g.neighbors(v).len() as f64
}

/// Selects `min(n, ceil(pool_factor·k))` candidates with size-proportional
/// quotas per community, then reconciles the total against the global
/// budget ranking.
pub fn build_candidate_pool(
    g: &Graph,
    partition: &Partition,
    k: usize,
    pool_factor: f64,
) -> Result<CandidatePool> {
    let n = g.n();
    if k == 0 {
        return Err(invalid("k", "must be at least 1"));
    }
    if k > n {
        return Err(Error::SeedSetTooLarge { k, available: n });
    }
    if !(pool_factor >= 1.0 && pool_factor.is_finite()) {
        return Err(invalid(
            "pool_factor",
            format!("{pool_factor} must be >= 1"),
        ));
    }
    if partition.assignment().len() != n {
        return Err(invalid("partition", "does not match graph"));
    }
    let pool_size = ((pool_factor * k as f64).ceil() as usize).min(n);

    // budget descending, then smaller index
    let by_rank =
        |a: &NodeId, b: &NodeId| budget_of(g, *b).total_cmp(&budget_of(g, *a)).then(a.cmp(b));

    let mut selected = vec![false; n];
    let mut protected = vec![false; n];
    let mut count = 0usize;
    for mut members in partition.communities() {
        members.sort_by(by_rank);
        let share = pool_size as f64 * members.len() as f64 / n as f64;
        let quota = (share.round() as usize).max(1).min(members.len());
        for (i, v) in members.into_iter().take(quota).enumerate() {
            selected[v.0] = true;
            protected[v.0] = i == 0;
            count += 1;
        }
    }

    let mut global: Vec<NodeId> = g.nodes().collect();
    global.sort_by(by_rank);

    if count > pool_size {
        // drop the lowest-ranked surplus, community heads last
        for pass_protected in [false, true] {
            for &v in global.iter().rev() {
                if count == pool_size {
                    break;
                }
                if selected[v.0] && protected[v.0] == pass_protected {
                    selected[v.0] = false;
                    count -= 1;
                }
            }
        }
    } else {
        for &v in &global {
            if count == pool_size {
                break;
            }
            if !selected[v.0] {
                selected[v.0] = true;
                count += 1;
            }
        }
    }

    let ranked: Vec<NodeId> = global.into_iter().filter(|v| selected[v.0]).collect();
    let budget = ranked.iter().map(|&v| budget_of(g, v)).collect();
    CandidatePool::new(ranked, budget)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn two_triangles() -> Graph {
        Graph::from_edges("2k3", 6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    fn k(n: usize) -> Graph {
        let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
        Graph::from_edges("k", n, edges).unwrap()
    }

    #[test]
    fn modularity_of_two_triangles() {
        let g = two_triangles();
        assert!((modularity(&g, &[0, 0, 0, 1, 1, 1]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(modularity(&g, &[0; 6]).unwrap(), 0.0);
    }

    #[test]
    fn single_community_scores_zero() {
        let g = k(5);
        assert!(modularity(&g, &[0; 5]).unwrap().abs() < 1e-15);
    }

    #[test]
    fn modularity_needs_edges() {
        let g = Graph::from_edges("e", 3, []).unwrap();
        assert!(matches!(modularity(&g, &[0, 1, 2]), Err(Error::NoEdges)));
    }

    #[test]
    fn louvain_splits_two_triangles() {
        let p = louvain(&two_triangles(), 1.0, 7).unwrap();
        assert_eq!(p.num_communities(), 2);
        assert_eq!(p.assignment(), &[0, 0, 0, 1, 1, 1]);
        assert!((p.modularity() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn louvain_single_edge_merges() {
        // K2: {u},{v} scores -0.5, {u,v} scores 0
        let g = Graph::from_edges("k2", 2, [(0, 1)]).unwrap();
        assert!((modularity(&g, &[0, 1]).unwrap() + 0.5).abs() < 1e-15);
        let p = louvain(&g, 1.0, 1).unwrap();
        assert_eq!(p.num_communities(), 1);
        assert_eq!(p.modularity(), 0.0);
    }

    #[test]
    fn louvain_complete_graph_is_one_community() {
        for seed in 0..5 {
            let p = louvain(&k(5), 1.0, seed).unwrap();
            assert_eq!(p.num_communities(), 1);
            assert!(p.modularity().abs() < 1e-12);
        }
    }

    #[test]
    fn louvain_rejects_bad_resolution() {
        assert!(louvain(&two_triangles(), 0.0, 0).is_err());
    }

    #[test]
    fn louvain_edgeless_graph_keeps_singletons() {
        let g = Graph::from_edges("e", 3, []).unwrap();
        let p = louvain(&g, 1.0, 0).unwrap();
        assert_eq!(p.num_communities(), 3);
    }

    #[test]
    fn partition_dump_uses_original_ids() {
        let g = two_triangles();
        let p = louvain(&g, 1.0, 0).unwrap();
        let mut buf = Vec::new();
        p.write_dump(&g, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 6);
        assert!(text.starts_with("0 0\n"));
    }

    #[test]
    fn pool_star_center_first() {
        let g = Graph::from_edges("star", 5, (1..5).map(|i| (0, i))).unwrap();
        let p = Partition::from_labels(&g, &[0; 5]).unwrap();
        let pool = build_candidate_pool(&g, &p, 1, 3.0).unwrap();
        assert_eq!(pool.len(), 3);
        assert_eq!(pool.ranked()[0], NodeId(0));
    }

    #[test]
    fn pool_quotas_two_triangles() {
        let g = two_triangles();
        let p = louvain(&g, 1.0, 3).unwrap();
        let pool = build_candidate_pool(&g, &p, 2, 3.0).unwrap();
        assert_eq!(pool.len(), 6);
        let first = pool.ranked().iter().filter(|v| v.0 < 3).count();
        assert_eq!(first, 3);
    }

    #[test]
    fn pool_k_equals_n_takes_everything() {
        let g = two_triangles();
        let p = louvain(&g, 1.0, 3).unwrap();
        let pool = build_candidate_pool(&g, &p, 6, 1.0).unwrap();
        assert_eq!(pool.len(), 6);
        assert!(build_candidate_pool(&g, &p, 7, 1.0).is_err());
        assert!(build_candidate_pool(&g, &p, 2, 0.5).is_err());
    }

    #[test]
    fn pool_reconciles_surplus() {
        // 4 singleton-ish communities each claim a quota of 1, pool_size 2
        let g = Graph::from_edges("pairs", 8, [(0, 1), (2, 3), (4, 5), (6, 7), (0, 2)]).unwrap();
        let p = Partition::from_labels(&g, &[0, 0, 1, 1, 2, 2, 3, 3]).unwrap();
        let pool = build_candidate_pool(&g, &p, 1, 2.0).unwrap();
        assert_eq!(pool.len(), 2);
        assert_eq!(pool.ranked(), &[NodeId(0), NodeId(2)]);
    }

    #[test]
    fn candidate_pool_validation() {
        assert!(CandidatePool::new(vec![NodeId(0), NodeId(0)], vec![1.0, 1.0]).is_err());
        assert!(CandidatePool::new(vec![NodeId(0), NodeId(1)], vec![1.0, 2.0]).is_err());
        assert!(CandidatePool::new(vec![NodeId(1), NodeId(0)], vec![2.0, 2.0]).is_ok());
    }
}
