use crate::community::CandidatePool;
use crate::error::{Error, Result};
use crate::objective::SeedSet;

use super::Position;

/// Maps a continuous position onto `x.dim()` distinct pool members.
///
/// Each coordinate is rounded and clamped to an index into the ranked pool.
/// A node picked by an earlier dimension is replaced by the highest-ranked
/// pool node not already picked by any dimension.
pub fn discretize(x: &Position, pool: &CandidatePool) -> Result<SeedSet> {
    let k = x.dim();
    let size = pool.len();
    if size < k {
        return Err(Error::SeedSetTooLarge { k, available: size });
    }
    let last = (size - 1) as f64;
    let indices: Vec<usize> = x
        .coords
        .iter()
        .map(|&c| {
            let c = if c.is_nan() { 0.0 } else { c };
            c.round().clamp(0.0, last) as usize
        })
        .collect();

    let mut used = vec![false; size];
    for &i in &indices {
        used[i] = true;
    }
    let mut taken = vec![false; size];
    let mut next_free = 0usize;
    let mut chosen = Vec::with_capacity(k);
    for &i in &indices {
        let slot = if taken[i] {
            while used[next_free] {
                next_free += 1;
            }
            used[next_free] = true;
            next_free
        } else {
            i
        };
        taken[slot] = true;
        chosen.push(pool.ranked()[slot]);
    }
    Ok(SeedSet::from_distinct(chosen))
}
