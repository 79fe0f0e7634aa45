//! Exact δ-covering of forests by a bottom-up greedy.
//!
//! Each tree is rooted at its least vertex and processed leaves-first. A
//! subtree reports either the depth of its deepest uncovered point (a demand
//! that something at or above the subtree root has to meet) or how far above
//! the subtree root its placed points still reach. Points are placed as high
//! as the demand allows.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{CoverError, Result};
use crate::graph::Graph;
use crate::point::{Cover, Point};
use crate::rational::Rational;
use crate::setcover::SolveResult;
use crate::verify::require_cover;

#[derive(Clone, Debug)]
enum Front {
    Demand(Rational),
    Reach(Rational),
}

/// Moves a front from `child` up the edge to `parent`, placing points on the
/// edge when the demand cannot travel further.
fn climb(mut front: Front, child: usize, parent: usize, delta: &Rational, out: &mut Vec<Point>) -> Front {
    let mut pos = Rational::zero();
    loop {
        let left = Rational::one() - &pos;
        front = match front {
            Front::Demand(d) => {
                if &d + &left <= *delta {
                    return Front::Demand(d + left);
                }
                pos = &pos + (delta - &d);
                out.push(Point::on_edge(child, parent, pos.clone()));
                Front::Reach(delta.clone())
            }
            Front::Reach(r) => {
                if r >= left {
                    return Front::Reach(r - left);
                }
                pos = pos + r;
                Front::Demand(Rational::zero())
            }
        };
    }
}

fn merge(fronts: Vec<Front>) -> Front {
    let mut demand: Option<Rational> = None;
    let mut reach: Option<Rational> = None;
    for f in fronts {
        match f {
            Front::Demand(d) => demand = Some(demand.map_or(d.clone(), |m| m.max(d))),
            Front::Reach(r) => reach = Some(reach.map_or(r.clone(), |m| m.max(r))),
        }
    }
    match (demand, reach) {
        (None, None) => Front::Demand(Rational::zero()),
        (None, Some(r)) => Front::Reach(r),
        (Some(d), Some(r)) if r >= d => Front::Reach(r),
        (Some(d), _) => Front::Demand(d),
    }
}

/// Minimum δ-cover of a forest.
pub fn tree_cover(g: &Graph, delta: &Rational) -> Result<SolveResult> {
    if !delta.is_positive() {
        return Err(CoverError::InvalidDelta(delta.clone()));
    }
    if !g.is_forest() {
        return Err(CoverError::Routing("tree_cover needs a forest".into()));
    }
    let start = Instant::now();
    let n = g.vertex_count();
    let mut points = Vec::new();
    let mut seen = vec![false; n];
    let mut parent = vec![usize::MAX; n];
    for root in 0..n {
        if seen[root] {
            continue;
        }
        let mut order = Vec::new();
        let mut queue = VecDeque::from([root]);
        seen[root] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in g.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        let mut pending: Vec<Vec<Front>> = vec![Vec::new(); n];
        for &v in order.iter().rev() {
            let front = merge(std::mem::take(&mut pending[v]));
            if v == root {
                if let Front::Demand(_) = front {
                    points.push(Point::Vertex(root));
                }
            } else {
                let up = climb(front, v, parent[v], delta, &mut points);
                pending[parent[v]].push(up);
            }
        }
    }
    let cover: Cover = points.into_iter().collect();
    require_cover(g, &cover, delta)?;
    Ok(SolveResult {
        size: cover.len(),
        cover,
        optimal: true,
        nodes_explored: 0,
        elapsed: start.elapsed(),
    })
}
