//! Centrality baselines: PageRank, H-index, k-shell based extended
//! neighbourhood coreness and a gateway-weighted local rank.

use std::fmt;
use std::io::{self, Write};

use log::warn;

use crate::community::Partition;
use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::objective::SeedSet;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CentralityMethod {
    HIndex,
    GatewayLocalRank,
    PageRank,
    ExtendedCoreness,
}

impl CentralityMethod {
    pub const ALL: [CentralityMethod; 4] = [
        CentralityMethod::HIndex,
        CentralityMethod::GatewayLocalRank,
        CentralityMethod::PageRank,
        CentralityMethod::ExtendedCoreness,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CentralityMethod::HIndex => "HI",
            CentralityMethod::GatewayLocalRank => "GLR",
            CentralityMethod::PageRank => "PR",
            CentralityMethod::ExtendedCoreness => "ENC",
        }
    }
}

impl fmt::Display for CentralityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for CentralityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_uppercase();
        let found = match s.as_str() {
            "HI" | "H-INDEX" | "HINDEX" => CentralityMethod::HIndex,
            "GLR" => CentralityMethod::GatewayLocalRank,
            "PR" | "PAGERANK" => CentralityMethod::PageRank,
            "ENC" => CentralityMethod::ExtendedCoreness,
            _ => {
                return Err(invalid(
                    "method",
                    format!("unknown centrality method {s:?}"),
                ))
            }
        };
        Ok(found)
    }
}

/// One score per node.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreVector {
    pub method: CentralityMethod,
    pub scores: Vec<f64>,
    /// False when an iterative method stopped at its iteration cap.
    pub converged: bool,
}

impl ScoreVector {
    fn exact(method: CentralityMethod, scores: Vec<f64>) -> Self {
        Self {
            method,
            scores,
            converged: true,
        }
    }

    pub fn score(&self, v: NodeId) -> f64 {
        self.scores[v.0]
    }

    /// CSV with header `original_id,score`.
    pub fn write_csv<W: Write>(&self, g: &Graph, mut out: W) -> io::Result<()> {
        writeln!(out, "original_id,score")?;
        for v in g.nodes() {
            writeln!(out, "{},{}", g.original_id(v), self.scores[v.0])?;
        }
        out.flush()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PageRankParams {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for PageRankParams {
    fn default() -> Self {
        Self {
            damping: 0.85,
            tolerance: 1e-10,
            max_iterations: 200,
        }
    }
}

/// Power iteration on the random walk of the undirected graph with uniform
/// teleportation. Degree-zero nodes spread their mass uniformly.
pub fn pagerank(g: &Graph, params: PageRankParams) -> Result<ScoreVector> {
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    if !(0.0..=1.0).contains(&params.damping) {
        return Err(invalid(
            "damping",
            format!("{} not in [0, 1]", params.damping),
        ));
    }
    let d = params.damping;
    let uniform = 1.0 / n as f64;
    let mut rank = vec![uniform; n];
    let mut next = vec![0.0; n];
    let mut converged = false;

    for _ in 0..params.max_iterations {
        let dangling: f64 = g
            .nodes()
            .filter(|&v| g.neighbors(v).is_empty())
            .map(|v| rank[v.0])
            .sum();
        let base = (1.0 - d) * uniform + d * dangling * uniform;
        for v in g.nodes() {
            let inflow: f64 = g
                .neighbors(v)
                .iter()
                .map(|u| rank[u.0] / g.neighbors(*u).len() as f64)
                .sum();
            next[v.0] = base + d * inflow;
        }
        // renormalize away accumulated rounding so the sum stays at 1
        let total: f64 = next.iter().sum();
        next.iter_mut().for_each(|x| *x /= total);
        let change: f64 = rank.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        std::mem::swap(&mut rank, &mut next);
        if change < params.tolerance {
            converged = true;
            break;
        }
    }
    if !converged {
        warn!(
            "{}: pagerank did not converge in {} iterations",
            g.name(),
            params.max_iterations
        );
    }
    Ok(ScoreVector {
        method: CentralityMethod::PageRank,
        scores: rank,
        converged,
    })
}

/// Largest `h` such that the node has at least `h` neighbors of degree `≥ h`.
pub fn h_index(g: &Graph) -> ScoreVector {
    let mut buf = Vec::new();
    let scores = g
        .nodes()
        .map(|v| {
            buf.clear();
            buf.extend(g.neighbors(v).iter().map(|u| g.neighbors(*u).len()));
            h_of(&mut buf) as f64
        })
        .collect();
    ScoreVector::exact(CentralityMethod::HIndex, scores)
}

fn h_of(values: &mut [usize]) -> usize {
    values.sort_unstable_by(|a, b| b.cmp(a));
    values
        .iter()
        .enumerate()
        .take_while(|&(i, &d)| d > i)
        .count()
}

/// k-shell index of every node by bucket peeling.
pub fn k_shell(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut degree: Vec<usize> = g.nodes().map(|v| g.neighbors(v).len()).collect();
    let max_degree = degree.iter().copied().max().unwrap_or(0);

    // nodes sorted by degree with bucket starts, as in Batagelj-Zaversnik
    let mut bin = vec![0usize; max_degree + 1];
    for &d in &degree {
        bin[d] += 1;
    }
    let mut start = 0;
    for b in bin.iter_mut() {
        let count = *b;
        *b = start;
        start += count;
    }
    let mut order = vec![0usize; n];
    let mut position = vec![0usize; n];
    for v in 0..n {
        position[v] = bin[degree[v]];
        order[position[v]] = v;
        bin[degree[v]] += 1;
    }
    for d in (1..=max_degree).rev() {
        bin[d] = bin[d - 1];
    }
    bin[0] = 0;

    for i in 0..n {
        let v = order[i];
        for &u in g.neighbors(NodeId(v)) {
            let u = u.0;
            if degree[u] > degree[v] {
                let du = degree[u];
                let pu = position[u];
                let pw = bin[du];
                let w = order[pw];
                if u != w {
                    order.swap(pu, pw);
                    position[u] = pw;
                    position[w] = pu;
                }
                bin[du] += 1;
                degree[u] -= 1;
            }
        }
    }
    degree
}

/// Extended neighbourhood coreness: `Σ_{u ∈ N(v)} Σ_{w ∈ N(u)} ks(w)`.
pub fn enc(g: &Graph) -> ScoreVector {
    let shell = k_shell(g);
    let coreness: Vec<f64> = g
        .nodes()
        .map(|v| g.neighbors(v).iter().map(|u| shell[u.0] as f64).sum())
        .collect();
    let scores = g
        .nodes()
        .map(|v| g.neighbors(v).iter().map(|u| coreness[u.0]).sum())
        .collect();
    ScoreVector::exact(CentralityMethod::ExtendedCoreness, scores)
}

/// Bridging weight applied by [`glr`] to cross-community neighbors.
pub const DEFAULT_GATEWAY_WEIGHT: f64 = 2.0;

/// `degree(v) + γ · |{u ∈ N(v) : community(u) ≠ community(v)}|`.
pub fn glr(g: &Graph, partition: &Partition, gamma: f64) -> Result<ScoreVector> {
    if partition.assignment().len() != g.n() {
        return Err(invalid("partition", "does not match graph"));
    }
    let scores = g
        .nodes()
        .map(|v| {
            let own = partition.community_of(v);
            let bridges = g
                .neighbors(v)
                .iter()
                .filter(|&&u| partition.community_of(u) != own)
                .count();
            g.neighbors(v).len() as f64 + gamma * bridges as f64
        })
        .collect();
    Ok(ScoreVector::exact(
        CentralityMethod::GatewayLocalRank,
        scores,
    ))
}

/// The `k` best-scoring nodes; ties go to the smaller original identifier.
pub fn top_k_seeds(g: &Graph, scores: &ScoreVector, k: usize) -> Result<SeedSet> {
    if k > g.n() {
        return Err(Error::SeedSetTooLarge {
            k,
            available: g.n(),
        });
    }
    if scores.scores.len() != g.n() {
        return Err(invalid("scores", "length does not match graph"));
    }
    let mut nodes: Vec<NodeId> = g.nodes().collect();
    nodes.sort_by(|a, b| {
        scores.scores[b.0]
            .total_cmp(&scores.scores[a.0])
            .then(g.original_id(*a).cmp(&g.original_id(*b)))
    });
    nodes.truncate(k);
    SeedSet::new(g, nodes)
}
