//! Moving covers between a graph and its `x`-subdivision.
//!
//! The position bijection sends `p(u, v, λ)` on an original edge to the point
//! at distance `x·λ` from `u` along the replacing path. Distances scale by
//! exactly `x`, so δ-covers of `G` and (xδ)-covers of `G_x` correspond.

use crate::graph::Subdivision;
use crate::point::{Cover, Point};
use crate::rational::Rational;

/// Maps a point of the subdivided graph back onto the original graph.
pub fn point_from_subdivision(sub: &Subdivision, p: &Point) -> Point {
    let x = sub.factor as i64;
    match p {
        Point::Vertex(w) if *w < sub.original_vertices => Point::Vertex(*w),
        Point::Vertex(w) => {
            let (e, j) = sub.locate_vertex(*w).expect("interior path vertex");
            let path = &sub.paths[e];
            Point::on_edge(path[0], path[sub.factor], Rational::new(j as i64, x))
        }
        Point::Interior { u: a, v: b, lambda } => {
            let (e, j) = sub.locate_edge(*a, *b);
            let path = &sub.paths[e];
            let off = if *a == path[j] { lambda.clone() } else { Rational::one() - lambda };
            let pos = (Rational::from_integer(j as i64) + off) / Rational::from_integer(x);
            Point::on_edge(path[0], path[sub.factor], pos)
        }
    }
}

/// Maps a point of the original graph into the subdivided graph.
pub fn point_to_subdivision(sub: &Subdivision, p: &Point) -> Point {
    match p {
        Point::Vertex(w) => Point::Vertex(*w),
        Point::Interior { u, v, lambda } => {
            let e = sub
                .paths
                .iter()
                .position(|path| path[0] == *u && path[sub.factor] == *v)
                .expect("edge of the original graph");
            let t = lambda.scale(sub.factor as i64);
            let j = t.floor();
            let j: usize = j.try_into().expect("offset fits");
            let frac = t - Rational::from_integer(j as i64);
            let path = &sub.paths[e];
            if frac.is_zero() {
                Point::Vertex(path[j])
            } else {
                Point::on_edge(path[j], path[j + 1], frac)
            }
        }
    }
}

/// The back-map of the subdivision reduction: original vertices are kept and
/// every other point becomes `p(u, v, λ/x)` on its original edge.
pub fn map_cover_from_subdivision(sub: &Subdivision, s_x: &Cover) -> Cover {
    s_x.iter().map(|p| point_from_subdivision(sub, p)).collect()
}

/// Inverse of [`map_cover_from_subdivision`].
pub fn lift_cover_to_subdivision(sub: &Subdivision, s: &Cover) -> Cover {
    s.iter().map(|p| point_to_subdivision(sub, p)).collect()
}
