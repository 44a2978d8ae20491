//! Continuous swarm engines, the quantum layer and the discretized
//! optimizers built from them.
//!
//! Every optimizer searches a `k`-dimensional box `[0, pool_size − 1]^k`.
//! A position is decoded into a seed set by rounding each coordinate to an
//! index into the ranked candidate pool (see [`discretize`]).

mod bat;
mod discrete;
mod optimizer;
mod pso;
mod quantum;
mod ssa;

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use rand::Rng;

pub use bat::{bat_move, BatParams};
pub use discrete::discretize;
pub use optimizer::{initial_state, optimize, Fitness, Optimized};
pub use pso::{pso_velocity, PsoParams};
pub use quantum::{
    elite_opposition_step, mutation_step, quantum_mutation, quantum_mutation_branch,
    reverse_learning, MutationBranch, OppositionForm,
};
pub use ssa::{follower_update, leader_coefficient, ssa_update};

use crate::error::{invalid, Result};
use crate::objective::SeedSet;

/// Per-dimension search bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct Bounds {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl Bounds {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(invalid("bounds", "lower and upper differ in length"));
        }
        if lower
            .iter()
            .zip(&upper)
            .any(|(l, u)| l.is_nan() || u.is_nan() || l > u)
        {
            return Err(invalid("bounds", "lower bound above upper bound"));
        }
        Ok(Self { lower, upper })
    }

    /// The same interval on every dimension.
    pub fn uniform(dim: usize, lower: f64, upper: f64) -> Result<Self> {
        Self::new(vec![lower; dim], vec![upper; dim])
    }

    /// `[0, pool_size − 1]` on each of `k` dimensions.
    pub fn for_pool(k: usize, pool_size: usize) -> Result<Self> {
        Self::uniform(k, 0.0, pool_size.saturating_sub(1) as f64)
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    #[inline]
    pub fn lower(&self, j: usize) -> f64 {
        self.lower[j]
    }

    #[inline]
    pub fn upper(&self, j: usize) -> f64 {
        self.upper[j]
    }

    #[inline]
    pub fn width(&self, j: usize) -> f64 {
        self.upper[j] - self.lower[j]
    }

    #[inline]
    pub fn clamp_coord(&self, j: usize, x: f64) -> f64 {
        x.clamp(self.lower[j], self.upper[j])
    }

    pub fn clamp(&self, x: &mut Position) {
        for (j, c) in x.coords.iter_mut().enumerate() {
            *c = c.clamp(self.lower[j], self.upper[j]);
        }
    }

    pub fn contains(&self, x: &Position) -> bool {
        x.coords.len() == self.dim()
            && x.coords
                .iter()
                .enumerate()
                .all(|(j, &c)| self.lower[j] <= c && c <= self.upper[j])
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Position {
        let coords = (0..self.dim())
            .map(|j| self.lower[j] + rng.random::<f64>() * self.width(j))
            .collect();
        Position { coords }
    }
}

/// A point in the continuous search space.
#[derive(Debug, Clone, PartialEq)]
pub struct Position {
    pub coords: Vec<f64>,
}

impl Position {
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl From<Vec<f64>> for Position {
    fn from(coords: Vec<f64>) -> Self {
        Self { coords }
    }
}

/// The five discretized optimizers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dqssa,
    Dqpso,
    Dqba,
    Dpso,
    Dba,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BaseUpdate {
    Salp,
    Particle,
    Bat,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Dqssa,
        Algorithm::Dqba,
        Algorithm::Dqpso,
        Algorithm::Dba,
        Algorithm::Dpso,
    ];

    pub fn base(self) -> BaseUpdate {
        match self {
            Algorithm::Dqssa => BaseUpdate::Salp,
            Algorithm::Dqpso | Algorithm::Dpso => BaseUpdate::Particle,
            Algorithm::Dqba | Algorithm::Dba => BaseUpdate::Bat,
        }
    }

    /// Whether the elite-opposition and quantum-mutation layer runs.
    pub fn is_quantum(self) -> bool {
        matches!(self, Algorithm::Dqssa | Algorithm::Dqpso | Algorithm::Dqba)
    }

    /// The quantum counterpart of a plain discrete optimizer.
    pub fn quantum_wrap(self) -> Option<Algorithm> {
        match self {
            Algorithm::Dpso => Some(Algorithm::Dqpso),
            Algorithm::Dba => Some(Algorithm::Dqba),
            _ => None,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Algorithm::Dqssa => "DQSSA",
            Algorithm::Dqpso => "DQPSO",
            Algorithm::Dqba => "DQBA",
            Algorithm::Dpso => "DPSO",
            Algorithm::Dba => "DBA",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label().eq_ignore_ascii_case(s))
            .ok_or_else(|| invalid("algorithm", format!("unknown swarm algorithm {s:?}")))
    }
}

/// Elite opposition and quantum mutation settings.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumParams {
    /// Mutation strength σ in (0, 1].
    pub sigma: f64,
    /// Fraction of the population (by fitness) given an opposite point.
    pub elite_fraction: f64,
    /// Fraction of the population mutated each iteration.
    pub mutation_fraction: f64,
    pub opposition: OppositionForm,
}

impl Default for QuantumParams {
    fn default() -> Self {
        Self {
            sigma: 0.1,
            elite_fraction: 0.25,
            mutation_fraction: 0.2,
            opposition: OppositionForm::Printed,
        }
    }
}

impl QuantumParams {
    pub fn elite_count(&self, population: usize) -> usize {
        (self.elite_fraction * population as f64).ceil() as usize
    }

    pub fn mutation_count(&self, population: usize) -> usize {
        (self.mutation_fraction * population as f64).ceil() as usize
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmConfig {
    pub algorithm: Algorithm,
    pub population_size: usize,
    pub max_iterations: usize,
    pub k: usize,
    pub p: crate::objective::InfectionProbability,
    pub rng_seed: u64,
    pub quantum: QuantumParams,
    pub pso: PsoParams,
    pub bat: BatParams,
}

impl SwarmConfig {
    pub fn new(algorithm: Algorithm, k: usize) -> Self {
        Self {
            algorithm,
            population_size: 20,
            max_iterations: 100,
            k,
            p: Default::default(),
            rng_seed: 0,
            quantum: QuantumParams::default(),
            pso: PsoParams::default(),
            bat: BatParams::default(),
        }
    }

    pub fn validate(&self, pool_size: usize) -> Result<()> {
        if self.population_size < 2 {
            return Err(invalid("population_size", "must be at least 2"));
        }
        if self.max_iterations < 1 {
            return Err(invalid("max_iterations", "must be at least 1"));
        }
        if self.k < 1 || self.k > pool_size {
            return Err(crate::error::Error::SeedSetTooLarge {
                k: self.k,
                available: pool_size,
            });
        }
        let q = &self.quantum;
        if !(q.sigma > 0.0 && q.sigma <= 1.0) {
            return Err(invalid("sigma", format!("{} not in (0, 1]", q.sigma)));
        }
        for (name, f) in [
            ("elite_fraction", q.elite_fraction),
            ("mutation_fraction", q.mutation_fraction),
        ] {
            if !(0.0..=1.0).contains(&f) {
                return Err(invalid(name, format!("{f} not in [0, 1]")));
            }
        }
        self.pso.validate()?;
        self.bat.validate()
    }
}

/// Best solution seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct FoodSource {
    pub position: Position,
    pub fitness: f64,
    pub seeds: SeedSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwarmState {
    pub positions: Vec<Position>,
    pub fitness: Vec<f64>,
    pub food: FoodSource,
    pub iteration: usize,
}

impl SwarmState {
    /// Replaces the food source when `fitness` strictly improves on it.
    pub fn offer(&mut self, position: &Position, fitness: f64, seeds: &SeedSet) -> bool {
        if fitness > self.food.fitness {
            self.food = FoodSource {
                position: position.clone(),
                fitness,
                seeds: seeds.clone(),
            };
            true
        } else {
            false
        }
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry {
    pub iteration: usize,
    pub best_lie: f64,
    /// Wall-clock time spent in this iteration.
    pub elapsed_ms: f64,
    /// Cumulative LIE evaluations after this iteration.
    pub evaluations: u64,
}

/// Per-iteration record of an optimizer run. Entry 0 is the initial
/// population.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    pub entries: Vec<TraceEntry>,
}

impl Trace {
    pub fn best_fitness(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.best_lie).collect()
    }

    pub fn evaluations(&self) -> Vec<u64> {
        self.entries.iter().map(|e| e.evaluations).collect()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "iteration,best_lie,elapsed_ms")?;
        for e in &self.entries {
            writeln!(out, "{},{},{}", e.iteration, e.best_lie, e.elapsed_ms)?;
        }
        out.flush()
    }
}
