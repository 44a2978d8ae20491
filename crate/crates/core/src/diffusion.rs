//! Independent Cascade simulation, the Final Infected Scale estimate and an
//! exact live-edge enumeration for small graphs.
//!
//! Each activation attempt `u -> v` succeeds when a uniform variate keyed by
//! the run and the arc falls below `p`. Within one run every arc has a fixed
//! variate, so raising `p` or adding seeds can only enlarge the infected set
//! when the same run key is reused.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};
use crate::objective::SeedSet;

/// Live-edge enumeration refuses graphs with more edges than this.
pub const EXACT_EDGE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionConfig {
    /// Activation probability in `[0, 1]`.
    pub p: f64,
    pub num_simulations: usize,
    pub rng_seed: u64,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        Self {
            p: 0.1,
            num_simulations: 10_000,
            rng_seed: 0,
        }
    }
}

impl DiffusionConfig {
    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        if self.num_simulations == 0 {
            return Err(invalid("num_simulations", "must be at least 1"));
        }
        Ok(())
    }
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(invalid("p", format!("{p} not in [0, 1]")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffusionResult {
    /// Mean fraction of nodes infected.
    pub fis_mean: f64,
    /// Unbiased sample variance of the per-run infected fraction.
    pub fis_variance: f64,
    pub samples: usize,
    pub elapsed: Duration,
}

impl DiffusionResult {
    /// Standard error of `fis_mean`.
    pub fn std_error(&self) -> f64 {
        (self.fis_variance / self.samples as f64).sqrt()
    }
}

#[inline]
fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[inline]
fn arc_uniform(run_key: u64, arc: usize) -> f64 {
    let h = splitmix64(run_key ^ splitmix64(arc as u64));
    (h >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Reusable buffers for cascade runs on one graph.
#[derive(Debug, Clone)]
pub struct Cascade {
    active: Vec<u32>,
    stamp: u32,
    queue: Vec<NodeId>,
}

impl Cascade {
    pub fn new(n: usize) -> Self {
        Self {
            active: vec![0; n],
            stamp: 0,
            queue: Vec::new(),
        }
    }

    /// Runs one cascade and returns the number of infected nodes; the
    /// infected nodes themselves are left in [`Cascade::infected`].
    pub fn run(&mut self, g: &Graph, seeds: &[NodeId], p: f64, run_key: u64) -> usize {
        if self.active.len() != g.n() {
            *self = Self::new(g.n());
        }
        self.stamp = self.stamp.wrapping_add(1);
        if self.stamp == 0 {
            self.active.fill(0);
            self.stamp = 1;
        }
        let stamp = self.stamp;
        self.queue.clear();
        for &s in seeds {
            if self.active[s.0] != stamp {
                self.active[s.0] = stamp;
                self.queue.push(s);
            }
        }
        let mut head = 0;
        while head < self.queue.len() {
            let u = self.queue[head];
            head += 1;
            let base = g.arc_offset(u);
            for (i, &v) in g.neighbors(u).iter().enumerate() {
                if self.active[v.0] != stamp && arc_uniform(run_key, base + i) < p {
                    self.active[v.0] = stamp;
                    self.queue.push(v);
                }
            }
        }
        self.queue.len()
    }

    /// Nodes infected by the last [`Cascade::run`], in activation order.
    pub fn infected(&self) -> &[NodeId] {
        &self.queue
    }
}

/// One Independent Cascade run; returns every infected node, seeds
/// included, sorted by index.
pub fn ic_single_run<R: Rng + ?Sized>(
    g: &Graph,
    seeds: &SeedSet,
    p: f64,
    rng: &mut R,
) -> Result<Vec<NodeId>> {
    check_probability(p)?;
    for &s in seeds.nodes() {
        g.check_node(s)?;
    }
    let mut cascade = Cascade::new(g.n());
    cascade.run(g, seeds.nodes(), p, rng.random());
    let mut infected = cascade.infected().to_vec();
    infected.sort_unstable();
    Ok(infected)
}

/// Key of run `r` under `master_seed`: the first word of ChaCha stream `r`.
pub fn run_key(master_seed: u64, run: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(run);
    rng.random()
}

/// Monte Carlo estimate of the Final Infected Scale.
///
/// Runs are independent and execute in parallel; per-run counts are folded
/// in run order so the result does not depend on scheduling.
pub fn fis(g: &Graph, seeds: &SeedSet, config: &DiffusionConfig) -> Result<DiffusionResult> {
    config.validate()?;
    for &s in seeds.nodes() {
        g.check_node(s)?;
    }
    if g.n() == 0 {
        return Err(Error::EmptyGraph(g.name().to_owned()));
    }
    let started = Instant::now();
    let runs = config.num_simulations;
    let counts: Vec<usize> = (0..runs)
        .into_par_iter()
        .map_init(
            || Cascade::new(g.n()),
            |cascade, r| {
                cascade.run(
                    g,
                    seeds.nodes(),
                    config.p,
                    run_key(config.rng_seed, r as u64),
                )
            },
        )
        .collect();

    let n = g.n() as f64;
    let infected: u64 = counts.iter().map(|&c| c as u64).sum();
    let mean = infected as f64 / (n * runs as f64);
    let variance = if runs > 1 {
        counts
            .iter()
            .map(|&c| (c as f64 / n - mean).powi(2))
            .sum::<f64>()
            / (runs - 1) as f64
    } else {
        0.0
    };
    Ok(DiffusionResult {
        fis_mean: mean,
        fis_variance: variance,
        samples: runs,
        elapsed: started.elapsed(),
    })
}

/// Expected infected fraction by enumerating all `2^m` live-edge subsets.
pub fn exact_expected_spread(g: &Graph, seeds: &SeedSet, p: f64) -> Result<f64> {
    check_probability(p)?;
    for &s in seeds.nodes() {
        g.check_node(s)?;
    }
    let m = g.m();
    if m > EXACT_EDGE_LIMIT {
        return Err(Error::TooManyEdges {
            m,
            limit: EXACT_EDGE_LIMIT,
        });
    }
    let n = g.n();
    let edges: Vec<(usize, usize)> = g.edges().map(|(u, v)| (u.0, v.0)).collect();
    let mut parent: Vec<usize> = Vec::with_capacity(n);
    let mut expected = 0.0;
    for mask in 0u32..(1u32 << m) {
        let live = mask.count_ones() as i32;
        let weight = p.powi(live) * (1.0 - p).powi(m as i32 - live);
        if weight == 0.0 {
            continue;
        }
        parent.clear();
        parent.extend(0..n);
        for (e, &(u, v)) in edges.iter().enumerate() {
            if mask >> e & 1 == 1 {
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                parent[ru] = rv;
            }
        }
        let mut hit = vec![false; n];
        for &s in seeds.nodes() {
            let r = find(&mut parent, s.0);
            hit[r] = true;
        }
        let reached = (0..n).filter(|&v| hit[find(&mut parent, v)]).count();
        expected += weight * reached as f64;
    }
    Ok(expected / n as f64)
}

fn find(parent: &mut [usize], mut v: usize) -> usize {
    while parent[v] != v {
        parent[v] = parent[parent[v]];
        v = parent[v];
    }
    v
}
