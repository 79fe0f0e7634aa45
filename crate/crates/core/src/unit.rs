//! Exact covers for unit-fraction ranges.
//!
//! A minimum 1-cover needs only vertices and edge midpoints as candidates,
//! and a `1/b`-cover of `G` is a 1-cover of the `b`-subdivision read back
//! onto `G`.

use std::time::Instant;

use crate::error::{CoverError, Result};
use crate::graph::{subdivide, Graph};
use crate::rational::Rational;
use crate::setcover::{min_cover_exact, Budget, SolveResult};
use crate::transform::map_cover_from_subdivision;
use crate::verify::require_cover;

/// Minimum 1-cover.
pub fn one_cover_min(g: &Graph, budget: &Budget) -> Result<SolveResult> {
    min_cover_exact(g, &Rational::one(), budget)
}

/// Minimum `1/b`-cover through the `b`-subdivision.
pub fn unit_fraction_cover(g: &Graph, b: usize, budget: &Budget) -> Result<SolveResult> {
    if b == 0 {
        return Err(CoverError::InvalidDelta(Rational::zero()));
    }
    let start = Instant::now();
    let sub = subdivide(g, b)?;
    let on_sub = one_cover_min(&sub.graph, budget)?;
    let cover = map_cover_from_subdivision(&sub, &on_sub.cover);
    require_cover(g, &cover, &Rational::new(1, b as i64))?;
    Ok(SolveResult {
        size: cover.len(),
        cover,
        optimal: on_sub.optimal,
        nodes_explored: on_sub.nodes_explored,
        elapsed: start.elapsed(),
    })
}
