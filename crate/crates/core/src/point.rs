//! Points of the continuum `P(G)` and finite point sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{CoverError, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::rational::Rational;

/// A location on a graph: a vertex, or the point at distance `lambda` from
/// `u` on edge `{u, v}`.
///
/// Interior points are always stored with `u < v` and `0 < lambda < 1`, so
/// `p(u,v,l)` and `p(v,u,1-l)` compare equal.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Point {
    Vertex(usize),
    Interior { u: usize, v: usize, lambda: Rational },
}

impl Point {
    pub fn vertex(v: usize) -> Self {
        Point::Vertex(v)
    }

    /// `p(a, b, lambda)` in canonical form. Panics when `lambda` is outside
    /// `[0, 1]` or `a == b`.
    pub fn on_edge(a: usize, b: usize, lambda: Rational) -> Self {
        assert!(a != b, "p(u,v,λ) needs two distinct endpoints");
        assert!(
            !lambda.is_negative() && lambda <= Rational::one(),
            "λ = {lambda} outside [0,1]"
        );
        if lambda.is_zero() {
            return Point::Vertex(a);
        }
        if lambda == Rational::one() {
            return Point::Vertex(b);
        }
        if a < b {
            Point::Interior { u: a, v: b, lambda }
        } else {
            Point::Interior { u: b, v: a, lambda: Rational::one() - lambda }
        }
    }

    pub fn is_vertex(&self) -> bool {
        matches!(self, Point::Vertex(_))
    }

    /// Edge `(u, v)` with `u < v` when the point is interior.
    pub fn edge(&self) -> Option<(usize, usize)> {
        match self {
            Point::Vertex(_) => None,
            Point::Interior { u, v, .. } => Some((*u, *v)),
        }
    }

    /// Distance from this point to `a`, when the point lies on an edge
    /// incident to `a` or is `a` itself.
    pub fn offset_from(&self, a: usize) -> Option<Rational> {
        match self {
            Point::Vertex(w) if *w == a => Some(Rational::zero()),
            Point::Vertex(_) => None,
            Point::Interior { u, v, lambda } => {
                if *u == a {
                    Some(lambda.clone())
                } else if *v == a {
                    Some(Rational::one() - lambda)
                } else {
                    None
                }
            }
        }
    }

    /// True when the point lies on the closed edge `{a, b}`.
    pub fn lies_on(&self, a: usize, b: usize) -> bool {
        match self {
            Point::Vertex(w) => *w == a || *w == b,
            Point::Interior { u, v, .. } => (*u, *v) == (a.min(b), a.max(b)),
        }
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        match self {
            Point::Vertex(w) if *w < g.vertex_count() => Ok(()),
            Point::Vertex(w) => Err(CoverError::InvalidPoint(format!("vertex {w} not in graph"))),
            Point::Interior { u, v, lambda } => {
                if !g.has_edge(*u, *v) {
                    return Err(CoverError::InvalidPoint(format!("no edge {{{u},{v}}} in graph")));
                }
                if !lambda.is_positive() || *lambda >= Rational::one() {
                    return Err(CoverError::InvalidPoint(format!("interior λ = {lambda} not in (0,1)")));
                }
                Ok(())
            }
        }
    }

    /// `(vertex, offset)` pairs through which shortest paths leave the point.
    fn exits(&self) -> Vec<(usize, Rational)> {
        match self {
            Point::Vertex(w) => vec![(*w, Rational::zero())],
            Point::Interior { u, v, lambda } => {
                vec![(*u, lambda.clone()), (*v, Rational::one() - lambda)]
            }
        }
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Vertex(w) => write!(f, "v{w}"),
            Point::Interior { u, v, lambda } => write!(f, "p({u},{v},{lambda})"),
        }
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Shortest-path distance between two points, `None` across components.
pub fn point_distance(g: &Graph, p: &Point, q: &Point) -> Result<Option<Rational>> {
    p.validate(g)?;
    q.validate(g)?;
    Ok(distance_unchecked(g, p, q))
}

pub(crate) fn distance_unchecked(g: &Graph, p: &Point, q: &Point) -> Option<Rational> {
    let mut best: Option<Rational> = None;
    if let (
        Point::Interior { u: a, v: b, lambda: lp },
        Point::Interior { u: c, v: d, lambda: lq },
    ) = (p, q)
    {
        if (a, b) == (c, d) {
            best = Some((lp - lq).abs());
        }
    }
    for (x, ox) in p.exits() {
        for (y, oy) in q.exits() {
            let d = g.raw_dist(x, y);
            if d == UNREACHABLE {
                continue;
            }
            let total = &ox + &oy + Rational::from_integer(i64::from(d));
            if best.as_ref().is_none_or(|b| total < *b) {
                best = Some(total);
            }
        }
    }
    best
}

/// A finite set of points, deduplicated after normalization.
#[derive(Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cover {
    points: BTreeSet<Point>,
}

impl Cover {
    pub fn new() -> Self {
        Cover::default()
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        vertices.into_iter().map(Point::Vertex).collect()
    }

    pub fn insert(&mut self, p: Point) -> bool {
        self.points.insert(p)
    }

    pub fn remove(&mut self, p: &Point) -> bool {
        self.points.remove(p)
    }

    pub fn contains(&self, p: &Point) -> bool {
        self.points.contains(p)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point> {
        self.points.iter()
    }

    pub fn extend<I: IntoIterator<Item = Point>>(&mut self, it: I) {
        self.points.extend(it);
    }

    /// Points lying on the closed edge `{a, b}`, vertices included.
    pub fn on_edge(&self, a: usize, b: usize) -> Vec<&Point> {
        self.points.iter().filter(|p| p.lies_on(a, b)).collect()
    }

    pub fn validate(&self, g: &Graph) -> Result<()> {
        self.points.iter().try_for_each(|p| p.validate(g))
    }

    /// Relabels vertices through `map` (new id -> old id).
    pub fn relabel(&self, map: &[usize]) -> Cover {
        self.points
            .iter()
            .map(|p| match p {
                Point::Vertex(w) => Point::Vertex(map[*w]),
                Point::Interior { u, v, lambda } => Point::on_edge(map[*u], map[*v], lambda.clone()),
            })
            .collect()
    }
}

impl FromIterator<Point> for Cover {
    fn from_iter<I: IntoIterator<Item = Point>>(iter: I) -> Self {
        Cover { points: iter.into_iter().collect() }
    }
}

impl IntoIterator for Cover {
    type Item = Point;
    type IntoIter = std::collections::btree_set::IntoIter<Point>;
    fn into_iter(self) -> Self::IntoIter {
        self.points.into_iter()
    }
}

impl fmt::Debug for Cover {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.points.iter()).finish()
    }
}
