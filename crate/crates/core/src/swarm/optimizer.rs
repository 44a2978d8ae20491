use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::bat::BatColony;
use super::pso::ParticleMemory;
use super::quantum::{elite_opposition_step, mutation_step};
use super::{
    ssa, BaseUpdate, Bounds, FoodSource, Position, SwarmConfig, SwarmState, Trace, TraceEntry,
};
use crate::community::CandidatePool;
use crate::error::Result;
use crate::graph::Graph;
use crate::objective::{InfectionProbability, LieScratch, SeedSet};

/// Decodes positions and scores them with LIE, counting evaluations.
pub struct Fitness<'a> {
    graph: &'a Graph,
    pool: &'a CandidatePool,
    p: InfectionProbability,
    scratch: LieScratch,
    evaluations: u64,
}

impl<'a> Fitness<'a> {
    pub fn new(graph: &'a Graph, pool: &'a CandidatePool, p: InfectionProbability) -> Self {
        Self {
            graph,
            pool,
            p,
            scratch: LieScratch::new(graph.n()),
            evaluations: 0,
        }
    }

    pub fn evaluate(&mut self, x: &Position) -> (f64, SeedSet) {
        // pool size is checked against k before any evaluation
        let seeds = super::discretize(x, self.pool).expect("pool holds at least k nodes");
        self.evaluations += 1;
        let score = self.scratch.evaluate(self.graph, seeds.nodes(), self.p);
        (score, seeds)
    }

    /// Re-scores every individual and offers each to the food source.
    pub fn evaluate_population(&mut self, state: &mut SwarmState) {
        for i in 0..state.len() {
            let (score, seeds) = self.evaluate(&state.positions[i]);
            state.fitness[i] = score;
            let position = state.positions[i].clone();
            state.offer(&position, score, &seeds);
        }
    }

    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }
}

/// Result of [`optimize`].
#[derive(Debug, Clone)]
pub struct Optimized {
    pub seeds: SeedSet,
    pub fitness: f64,
    pub trace: Trace,
}

enum Engine {
    Salp,
    Particle(ParticleMemory),
    Bat(BatColony),
}

/// Random initial population; the food source is its first best member.
pub fn initial_state(
    fitness: &mut Fitness<'_>,
    bounds: &Bounds,
    population: usize,
    rng: &mut ChaCha8Rng,
) -> SwarmState {
    let positions: Vec<Position> = (0..population).map(|_| bounds.sample(rng)).collect();
    let (score, seeds) = fitness.evaluate(&positions[0]);
    let mut state = SwarmState {
        fitness: vec![f64::NEG_INFINITY; population],
        food: FoodSource {
            position: positions[0].clone(),
            fitness: score,
            seeds,
        },
        positions,
        iteration: 0,
    };
    state.fitness[0] = score;
    for i in 1..population {
        let (score, seeds) = fitness.evaluate(&state.positions[i]);
        state.fitness[i] = score;
        let position = state.positions[i].clone();
        state.offer(&position, score, &seeds);
    }
    state
}

/// Runs the configured optimizer for `max_iterations` iterations over the
/// candidate pool and returns the best seed set ever decoded.
///
/// One iteration is the base update (salp, particle or bat) with evaluation
/// of the moved population, then, for the quantum variants, elite
/// opposition followed by quantum mutation of a random subset. The base
/// update and the quantum layer draw from separate random streams derived
/// from `rng_seed`.
pub fn optimize(g: &Graph, pool: &CandidatePool, config: &SwarmConfig) -> Result<Optimized> {
    config.validate(pool.len())?;
    let bounds = Bounds::for_pool(config.k, pool.len())?;
    let mut fitness = Fitness::new(g, pool, config.p);

    let mut base_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    let mut quantum_rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
    quantum_rng.set_stream(1);

    let started = Instant::now();
    let mut state = initial_state(&mut fitness, &bounds, config.population_size, &mut base_rng);
    let mut engine = match config.algorithm.base() {
        BaseUpdate::Salp => Engine::Salp,
        BaseUpdate::Particle => Engine::Particle(ParticleMemory::new(&state)),
        BaseUpdate::Bat => Engine::Bat(BatColony::new(&state, &config.bat)),
    };
    let mut trace = Trace::default();
    trace.entries.push(TraceEntry {
        iteration: 0,
        best_lie: state.food.fitness,
        elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        evaluations: fitness.evaluations(),
    });

    let total = config.max_iterations;
    for t in 1..=total {
        let tick = Instant::now();
        match &mut engine {
            Engine::Salp => ssa::step(&mut state, &mut fitness, &bounds, t, total, &mut base_rng),
            Engine::Particle(memory) => memory.step(
                &mut state,
                &mut fitness,
                &bounds,
                &config.pso,
                &mut base_rng,
            ),
            Engine::Bat(colony) => colony.step(
                &mut state,
                &mut fitness,
                &bounds,
                &config.bat,
                t,
                &mut base_rng,
            ),
        }
        if config.algorithm.is_quantum() {
            elite_opposition_step(
                &mut state,
                &mut fitness,
                &bounds,
                &config.quantum,
                &mut quantum_rng,
            );
            mutation_step(
                &mut state,
                &mut fitness,
                &bounds,
                &config.quantum,
                &mut quantum_rng,
            );
        }
        state.iteration = t;
        trace.entries.push(TraceEntry {
            iteration: t,
            best_lie: state.food.fitness,
            elapsed_ms: tick.elapsed().as_secs_f64() * 1e3,
            evaluations: fitness.evaluations(),
        });
    }

    Ok(Optimized {
        seeds: state.food.seeds,
        fitness: state.food.fitness,
        trace,
    })
}
