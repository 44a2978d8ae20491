use rand::Rng;

use super::optimizer::Fitness;
use super::{Bounds, Position, SwarmState};
use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct BatParams {
    pub min_frequency: f64,
    pub max_frequency: f64,
    /// Initial loudness `A`.
    pub loudness: f64,
    /// Asymptotic pulse rate `r`.
    pub pulse_rate: f64,
    /// Loudness decay `α`.
    pub alpha: f64,
    /// Pulse-rate growth `γ`.
    pub gamma: f64,
    /// Local walk half-width as a fraction of the bound width.
    pub walk_scale: f64,
    /// Velocity limit as a fraction of the bound width.
    pub max_velocity: f64,
}

impl Default for BatParams {
    fn default() -> Self {
        Self {
            min_frequency: 0.0,
            max_frequency: 2.0,
            loudness: 0.9,
            pulse_rate: 0.5,
            alpha: 0.9,
            gamma: 0.9,
            walk_scale: 0.05,
            max_velocity: 0.5,
        }
    }
}

impl BatParams {
    pub(super) fn validate(&self) -> Result<()> {
        if self.min_frequency.is_nan()
            || self.max_frequency.is_nan()
            || self.min_frequency > self.max_frequency
        {
            return Err(invalid("frequency", "min above max"));
        }
        if !(0.0..=1.0).contains(&self.pulse_rate) || !(0.0..=1.0).contains(&self.loudness) {
            return Err(invalid("bat", "loudness and pulse rate must lie in [0, 1]"));
        }
        if !(self.max_velocity > 0.0 && self.max_velocity <= 0.5) {
            return Err(invalid("max_velocity", "must be in (0, 0.5]"));
        }
        Ok(())
    }
}

/// Frequency-tuned move: `v ← v + (x − gbest)·f`, `x ← x + v`, with the
/// velocity clamped to `±max_velocity·width` and the position to `bounds`.
pub fn bat_move(
    x: &Position,
    velocity: &mut [f64],
    gbest: &Position,
    frequency: f64,
    max_velocity: f64,
    bounds: &Bounds,
) -> Position {
    let coords = x
        .coords
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let limit = max_velocity * bounds.width(j);
            velocity[j] = (velocity[j] + (xj - gbest.coords[j]) * frequency).clamp(-limit, limit);
            bounds.clamp_coord(j, xj + velocity[j])
        })
        .collect();
    Position { coords }
}

#[derive(Debug, Clone)]
pub(super) struct BatColony {
    velocity: Vec<Vec<f64>>,
    loudness: Vec<f64>,
    pulse: Vec<f64>,
}

impl BatColony {
    pub(super) fn new(state: &SwarmState, params: &BatParams) -> Self {
        Self {
            velocity: vec![vec![0.0; state.food.position.dim()]; state.len()],
            loudness: vec![params.loudness; state.len()],
            pulse: vec![0.0; state.len()],
        }
    }

    pub(super) fn step<R: Rng + ?Sized>(
        &mut self,
        state: &mut SwarmState,
        fitness: &mut Fitness<'_>,
        bounds: &Bounds,
        params: &BatParams,
        t: usize,
        rng: &mut R,
    ) {
        let mean_loudness = self.loudness.iter().sum::<f64>() / self.loudness.len() as f64;
        for i in 0..state.len() {
            let beta: f64 = rng.random();
            let f = params.min_frequency + (params.max_frequency - params.min_frequency) * beta;
            let gbest = state.food.position.clone();
            let mut candidate = bat_move(
                &state.positions[i],
                &mut self.velocity[i],
                &gbest,
                f,
                params.max_velocity,
                bounds,
            );
            if rng.random::<f64>() > self.pulse[i] {
                // local walk around the incumbent
                for (j, c) in candidate.coords.iter_mut().enumerate() {
                    let eps = rng.random_range(-1.0..=1.0);
                    let walk = eps * mean_loudness * params.walk_scale * bounds.width(j);
                    *c = bounds.clamp_coord(j, gbest.coords[j] + walk);
                }
            }
            let (score, seeds) = fitness.evaluate(&candidate);
            state.offer(&candidate, score, &seeds);
            if score > state.fitness[i] && rng.random::<f64>() < self.loudness[i] {
                state.positions[i] = candidate;
                state.fitness[i] = score;
                self.loudness[i] *= params.alpha;
                self.pulse[i] = params.pulse_rate * (1.0 - (-params.gamma * t as f64).exp());
            }
        }
    }
}
