//! Influence maximization with a discretized, quantum-inspired salp swarm.
//!
//! The pipeline detects communities with Louvain, budgets a ranked pool of
//! candidate seeds, searches the pool with a swarm optimizer guided by the
//! Local Influence Estimator, and scores the chosen seeds with Independent
//! Cascade simulation. Centrality rankings are provided as baselines.

pub mod centrality;
pub mod community;
pub mod diffusion;
pub mod error;
pub mod graph;
pub mod objective;
pub mod swarm;

pub use community::{build_candidate_pool, louvain, modularity, CandidatePool, Partition};
pub use diffusion::{exact_expected_spread, fis, DiffusionConfig, DiffusionResult};
pub use error::{Error, Result};
pub use graph::{load_edge_list, DatasetDescriptor, Graph, IdBase, NodeId};
pub use objective::{lie, InfectionProbability, SeedSet};
pub use swarm::{optimize, Algorithm, SwarmConfig};
