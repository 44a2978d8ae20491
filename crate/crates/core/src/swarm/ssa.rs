//! Salp chain update.
//!
//! The first `⌈N/2⌉` salps lead: each coordinate is placed around the food
//! source at distance `c1·((ub − lb)·c2 + lb)`, on the side chosen by `c3`.
//! The remaining salps follow the one ahead of them by moving to the
//! midpoint.

use rand::Rng;

use super::optimizer::Fitness;
use super::{Bounds, SwarmState};

/// `c1 = 2·exp(−(4t/T)²)`; shrinks leader excursions as `t → T`.
pub fn leader_coefficient(t: usize, max_iterations: usize) -> f64 {
    let ratio = 4.0 * t as f64 / max_iterations as f64;
    2.0 * (-ratio * ratio).exp()
}

#[inline]
pub fn follower_update(current: f64, ahead: f64) -> f64 {
    (current + ahead) / 2.0
}

/// Moves every salp for iteration `t` (1-based) and clamps to `bounds`.
/// Fitness values are left stale.
pub fn ssa_update<R: Rng + ?Sized>(
    state: &mut SwarmState,
    bounds: &Bounds,
    t: usize,
    max_iterations: usize,
    rng: &mut R,
) {
    let n = state.len();
    let leaders = n.div_ceil(2);
    let c1 = leader_coefficient(t, max_iterations);
    let food = state.food.position.coords.clone();

    for i in 0..n {
        if i < leaders {
            let x = &mut state.positions[i].coords;
            for (j, xj) in x.iter_mut().enumerate() {
                let c2: f64 = rng.random();
                let c3: f64 = rng.random();
                let step = c1 * (bounds.width(j) * c2 + bounds.lower(j));
                *xj = if c3 < 0.5 {
                    food[j] + step
                } else {
                    food[j] - step
                };
            }
        } else {
            let (ahead, rest) = state.positions.split_at_mut(i);
            let ahead = &ahead[i - 1].coords;
            for (xj, &aj) in rest[0].coords.iter_mut().zip(ahead) {
                *xj = follower_update(*xj, aj);
            }
        }
        bounds.clamp(&mut state.positions[i]);
    }
}

/// Salp update followed by evaluation of the whole chain.
pub(super) fn step<R: Rng + ?Sized>(
    state: &mut SwarmState,
    fitness: &mut Fitness<'_>,
    bounds: &Bounds,
    t: usize,
    max_iterations: usize,
    rng: &mut R,
) {
    ssa_update(state, bounds, t, max_iterations, rng);
    fitness.evaluate_population(state);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn follower_midpoint() {
        assert_eq!(follower_update(4.0, 2.0), 3.0);
    }

    #[test]
    fn coefficient_limits() {
        assert!((leader_coefficient(0, 10) - 2.0).abs() < 1e-15);
        let end = leader_coefficient(10, 10);
        assert!((end - 2.0 * (-16.0f64).exp()).abs() < 1e-18);
        assert!(end < 1e-6);
    }
}
