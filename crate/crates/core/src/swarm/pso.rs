use rand::Rng;

use super::optimizer::Fitness;
use super::{Bounds, Position, SwarmState};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
    /// Velocity limit as a fraction of the bound width.
    pub max_velocity: f64,
}

impl Default for PsoParams {
    fn default() -> Self {
        Self {
            inertia: 0.8,
            cognitive: 2.0,
            social: 2.0,
            max_velocity: 0.5,
        }
    }
}

impl PsoParams {
    pub(super) fn validate(&self) -> Result<()> {
        if !(self.max_velocity > 0.0 && self.max_velocity <= 0.5) {
            return Err(invalid("max_velocity", "must be in (0, 0.5]"));
        }
        if [self.inertia, self.cognitive, self.social]
            .iter()
            .any(|c| !c.is_finite() || *c < 0.0)
        {
            return Err(invalid(
                "pso",
                "coefficients must be finite and non-negative",
            ));
        }
        Ok(())
    }
}

/// One coordinate of the velocity update
/// `w·v + c1·r1·(pbest − x) + c2·r2·(gbest − x)`, clamped to `±limit`.
#[allow(clippy::too_many_arguments)]
#[inline]
pub fn pso_velocity(
    params: &PsoParams,
    v: f64,
    x: f64,
    pbest: f64,
    gbest: f64,
    r1: f64,
    r2: f64,
    limit: f64,
) -> f64 {
    let raw =
        params.inertia * v + params.cognitive * r1 * (pbest - x) + params.social * r2 * (gbest - x);
    raw.clamp(-limit, limit)
}

#[derive(Debug, Clone)]
pub(super) struct ParticleMemory {
    velocity: Vec<Vec<f64>>,
    best: Vec<Position>,
    best_fitness: Vec<f64>,
}

impl ParticleMemory {
    pub(super) fn new(state: &SwarmState) -> Self {
        Self {
            velocity: vec![vec![0.0; state.food.position.dim()]; state.len()],
            best: state.positions.clone(),
            best_fitness: state.fitness.clone(),
        }
    }

    fn absorb(&mut self, state: &SwarmState) {
        for i in 0..state.len() {
            if state.fitness[i] > self.best_fitness[i] {
                self.best_fitness[i] = state.fitness[i];
                self.best[i] = state.positions[i].clone();
            }
        }
    }

    pub(super) fn step<R: Rng + ?Sized>(
        &mut self,
        state: &mut SwarmState,
        fitness: &mut Fitness<'_>,
        bounds: &Bounds,
        params: &PsoParams,
        rng: &mut R,
    ) {
        // pick up improvements made outside this engine
        self.absorb(state);
        let gbest = state.food.position.coords.clone();
        for i in 0..state.len() {
            let x = &mut state.positions[i].coords;
            let v = &mut self.velocity[i];
            let pbest = &self.best[i].coords;
            for j in 0..x.len() {
                let r1: f64 = rng.random();
                let r2: f64 = rng.random();
                let limit = params.max_velocity * bounds.width(j);
                v[j] = pso_velocity(params, v[j], x[j], pbest[j], gbest[j], r1, r2, limit);
                x[j] = bounds.clamp_coord(j, x[j] + v[j]);
            }
        }
        fitness.evaluate_population(state);
        self.absorb(state);
    }
}
