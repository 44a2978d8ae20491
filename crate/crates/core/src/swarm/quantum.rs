//! Reverse learning (opposition) and quantum mutation.

use rand::seq::index;
use rand::Rng;

use super::optimizer::Fitness;
use super::{Bounds, Position, QuantumParams, SwarmState};

/// Which opposite point reverse learning produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OppositionForm {
    /// `μ·(ub − lb) − x`
    #[default]
    Printed,
    /// `μ·(ub + lb) − x`
    Classic,
}

/// Opposite point of `x` scaled by `mu`, clamped to the bounds.
pub fn reverse_learning(x: &Position, bounds: &Bounds, mu: f64, form: OppositionForm) -> Position {
    let coords = x
        .coords
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let (lb, ub) = (bounds.lower(j), bounds.upper(j));
            let raw = match form {
                OppositionForm::Printed => mu * (ub - lb) - xj,
                OppositionForm::Classic => mu * (ub + lb) - xj,
            };
            bounds.clamp_coord(j, raw)
        })
        .collect();
    Position { coords }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MutationBranch {
    /// `x + σ·(ub − x)`
    TowardUpper,
    /// `x + σ·(x − lb)`
    AwayFromLower,
}

/// Quantum mutation with the branch fixed for every dimension.
pub fn quantum_mutation_branch(
    x: &Position,
    bounds: &Bounds,
    sigma: f64,
    branch: MutationBranch,
) -> Position {
    let coords = x
        .coords
        .iter()
        .enumerate()
        .map(|(j, &xj)| mutate_coord(bounds, j, xj, sigma, branch))
        .collect();
    Position { coords }
}

/// Quantum mutation choosing a branch per dimension with probability ½.
pub fn quantum_mutation<R: Rng + ?Sized>(
    x: &Position,
    bounds: &Bounds,
    sigma: f64,
    rng: &mut R,
) -> Position {
    let coords = x
        .coords
        .iter()
        .enumerate()
        .map(|(j, &xj)| {
            let branch = if rng.random_bool(0.5) {
                MutationBranch::TowardUpper
            } else {
                MutationBranch::AwayFromLower
            };
            mutate_coord(bounds, j, xj, sigma, branch)
        })
        .collect();
    Position { coords }
}

#[inline]
fn mutate_coord(bounds: &Bounds, j: usize, x: f64, sigma: f64, branch: MutationBranch) -> f64 {
    let raw = match branch {
        MutationBranch::TowardUpper => x + sigma * (bounds.upper(j) - x),
        MutationBranch::AwayFromLower => x + sigma * (x - bounds.lower(j)),
    };
    bounds.clamp_coord(j, raw)
}

/// Gives the top `⌈N·elite_fraction⌉` individuals an opposite point and keeps
/// whichever of the pair scores higher. Returns the number of evaluations.
pub fn elite_opposition_step<R: Rng + ?Sized>(
    state: &mut SwarmState,
    fitness: &mut Fitness<'_>,
    bounds: &Bounds,
    params: &QuantumParams,
    rng: &mut R,
) -> usize {
    let elite = params.elite_count(state.len()).min(state.len());
    if elite == 0 {
        return 0;
    }
    let mut order: Vec<usize> = (0..state.len()).collect();
    // stable: ties keep index order
    order.sort_by(|&a, &b| state.fitness[b].total_cmp(&state.fitness[a]));
    for &i in &order[..elite] {
        // μ in (0, 1]
        let mu = 1.0 - rng.random::<f64>();
        let opposite = reverse_learning(&state.positions[i], bounds, mu, params.opposition);
        let (score, seeds) = fitness.evaluate(&opposite);
        if score > state.fitness[i] {
            state.offer(&opposite, score, &seeds);
            state.positions[i] = opposite;
            state.fitness[i] = score;
        }
    }
    elite
}

/// Mutates a random `⌈N·mutation_fraction⌉` subset in place. Mutated
/// individuals replace their originals unconditionally. Returns the number
/// of evaluations.
pub fn mutation_step<R: Rng + ?Sized>(
    state: &mut SwarmState,
    fitness: &mut Fitness<'_>,
    bounds: &Bounds,
    params: &QuantumParams,
    rng: &mut R,
) -> usize {
    let count = params.mutation_count(state.len()).min(state.len());
    if count == 0 {
        return 0;
    }
    let mut chosen = index::sample(rng, state.len(), count).into_vec();
    chosen.sort_unstable();
    for i in chosen {
        let mutated = quantum_mutation(&state.positions[i], bounds, params.sigma, rng);
        let (score, seeds) = fitness.evaluate(&mutated);
        state.offer(&mutated, score, &seeds);
        state.positions[i] = mutated;
        state.fitness[i] = score;
    }
    count
}
