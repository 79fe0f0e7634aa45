//! Exact decision procedure for δ-covers.
//!
//! Every edge is checked by taking the union of the closed balls of all cover
//! points restricted to that edge, as rational intervals over `[0, 1]`
//! measured from the lesser endpoint.

use num_rational::Ratio;
use num_traits::{One, Signed};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{CoverError, Result};
use crate::graph::Graph;
use crate::point::{distance_unchecked, Cover, Point};
use crate::rational::Rational;

/// Closed sub-intervals of one edge, sorted and pairwise disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntervalSet {
    pub edge: usize,
    pub intervals: Vec<(Rational, Rational)>,
}

impl IntervalSet {
    /// Union of arbitrary closed intervals; touching intervals merge.
    pub fn from_unsorted(edge: usize, mut raw: Vec<(Rational, Rational)>) -> Self {
        raw.sort();
        let mut intervals: Vec<(Rational, Rational)> = Vec::with_capacity(raw.len());
        for (lo, hi) in raw {
            match intervals.last_mut() {
                Some((_, last_hi)) if lo <= *last_hi => {
                    if hi > *last_hi {
                        *last_hi = hi;
                    }
                }
                _ => intervals.push((lo, hi)),
            }
        }
        IntervalSet { edge, intervals }
    }

    pub fn covers_unit(&self) -> bool {
        matches!(self.intervals.as_slice(), [(lo, hi)] if lo.is_zero() && *hi == Rational::one())
    }

    pub fn contains(&self, t: &Rational) -> bool {
        self.intervals.iter().any(|(lo, hi)| lo <= t && t <= hi)
    }

    /// Maximal uncovered parts of `[0, 1]` as `(lo, hi)`. Ends that coincide
    /// with a covered interval are themselves covered.
    pub fn gaps(&self) -> Vec<(Rational, Rational)> {
        let mut out = Vec::new();
        let mut cursor: Option<Rational> = None; // right end of coverage so far
        for (lo, hi) in &self.intervals {
            let start = cursor.clone().unwrap_or_else(Rational::zero);
            if cursor.is_none() && lo.is_positive() || cursor.is_some() && *lo > start {
                out.push((start, lo.clone()));
            }
            cursor = Some(hi.clone());
        }
        match cursor {
            None => out.push((Rational::zero(), Rational::one())),
            Some(end) if end < Rational::one() => out.push((end, Rational::one())),
            _ => {}
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_cover: bool,
    pub witness: Option<Point>,
    /// `(edge id, lo, hi)` for every maximal uncovered interval.
    pub per_edge_gaps: Vec<(usize, Rational, Rational)>,
    /// Isolated vertices not in the cover.
    pub uncovered_vertices: Vec<usize>,
}

/// Closed-ball coverage of edge `edge_id` by the points of `s`.
pub fn edge_coverage_intervals(g: &Graph, edge_id: usize, s: &Cover, delta: &Rational) -> IntervalSet {
    let (u, v) = g.edge(edge_id);
    let one = Rational::one();
    let mut raw = Vec::new();
    let (pu, pv) = (Point::Vertex(u), Point::Vertex(v));
    for q in s.iter() {
        if let Some(du) = distance_unchecked(g, q, &pu) {
            let reach = delta - &du;
            if !reach.is_negative() {
                raw.push((Rational::zero(), reach.min(one.clone())));
            }
        }
        if let Some(dv) = distance_unchecked(g, q, &pv) {
            let reach = delta - &dv;
            if !reach.is_negative() {
                raw.push(((&one - &reach).max(Rational::zero()), one.clone()));
            }
        }
        if let Point::Interior { u: a, v: b, lambda } = q {
            if (*a, *b) == (u, v) {
                let lo = (lambda - delta).max(Rational::zero());
                let hi = (lambda + delta).min(one.clone());
                raw.push((lo, hi));
            }
        }
    }
    IntervalSet::from_unsorted(edge_id, raw)
}

/// Decides whether `s` is a δ-cover of `g`. On failure the witness is the
/// midpoint of the first uncovered gap (edges in canonical order).
pub fn is_delta_cover(g: &Graph, s: &Cover, delta: &Rational) -> VerifyReport {
    let mut per_edge_gaps = Vec::new();
    let mut witness = None;
    for e in 0..g.edge_count() {
        let cov = edge_coverage_intervals(g, e, s, delta);
        for (lo, hi) in cov.gaps() {
            if witness.is_none() {
                let (u, v) = g.edge(e);
                let mid = (&lo + &hi) / Rational::from_integer(2);
                witness = Some(Point::on_edge(u, v, mid));
            }
            per_edge_gaps.push((e, lo, hi));
        }
    }
    let uncovered_vertices: Vec<usize> = (0..g.vertex_count())
        .filter(|&w| g.degree(w) == 0 && !s.contains(&Point::Vertex(w)))
        .collect();
    if witness.is_none() {
        witness = uncovered_vertices.first().map(|&w| Point::Vertex(w));
    }
    VerifyReport {
        is_cover: witness.is_none(),
        witness,
        per_edge_gaps,
        uncovered_vertices,
    }
}

/// Like [`is_delta_cover`] but as a `Result`, for pipelines.
pub fn require_cover(g: &Graph, s: &Cover, delta: &Rational) -> Result<()> {
    let report = is_delta_cover(g, s, delta);
    match report.witness {
        None => Ok(()),
        Some(w) => Err(CoverError::NotACover { delta: delta.clone(), witness: w.to_string() }),
    }
}

/// All points `p(u, v, x/(4b))`, `x = 0..=4b`, over all edges, plus every
/// vertex. Vertices come first, then edges in canonical order.
pub fn discretized_universe(g: &Graph, b: u64) -> Vec<Point> {
    assert!(b >= 1);
    let steps = 4 * b as i64;
    let mut out: Vec<Point> = (0..g.vertex_count()).map(Point::Vertex).collect();
    for &(u, v) in g.edges() {
        for x in 1..steps {
            out.push(Point::on_edge(u, v, Rational::new(x, steps)));
        }
    }
    out
}

/// Replaces, on every edge carrying two or more cover points other than
/// exactly its endpoints, those points by the two endpoints. Requires
/// `delta >= 1/2` and a valid δ-cover.
pub fn normalize_neat(g: &Graph, s: &Cover, delta: &Rational) -> Result<Cover> {
    if *delta < Rational::half() {
        return Err(CoverError::DeltaOutOfRange {
            delta: delta.clone(),
            interval: "[1/2, ∞)".into(),
        });
    }
    require_cover(g, s, delta)?;
    let mut out = s.clone();
    loop {
        let mut changed = false;
        for &(u, v) in g.edges() {
            let on: Vec<Point> = out.on_edge(u, v).into_iter().cloned().collect();
            let endpoints_only = on.iter().all(Point::is_vertex);
            if on.len() >= 2 && !endpoints_only {
                for p in &on {
                    out.remove(p);
                }
                out.insert(Point::Vertex(u));
                out.insert(Point::Vertex(v));
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    if out.len() > s.len() {
        return Err(CoverError::Internal("neat normalization grew the cover".into()));
    }
    require_cover(g, &out, delta).map_err(|e| CoverError::Internal(format!("neat normalization: {e}")))?;
    Ok(out)
}

/// True when `s` satisfies the neat property.
pub fn is_neat(g: &Graph, s: &Cover) -> bool {
    g.edges().iter().all(|&(u, v)| {
        let on = s.on_edge(u, v);
        on.len() < 2 || on.iter().all(|p| p.is_vertex())
    })
}

/// Outcome of [`probe_cover`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub probes: usize,
    /// Probes on which the distance test and the interval test disagree.
    pub disagreements: Vec<Point>,
    /// Probes farther than δ from every cover point.
    pub uncovered: usize,
}

/// Machine-size fraction for the probe fast path.
type Small = Ratio<i128>;

/// Bound on numerators and denominators admitted to the fast path, so sums
/// of two values with probe positions stay far inside `i128`.
const SMALL_LIMIT: i64 = 1 << 31;

fn small(x: &Rational) -> Option<Small> {
    let (n, d) = (x.numer_i64()?, x.denom_i64()?);
    (n.abs() <= SMALL_LIMIT && d <= SMALL_LIMIT).then(|| Small::new(n.into(), d.into()))
}

/// A cover point as seen by the probes.
struct Anchor {
    /// Distance to each vertex, `None` when unreachable.
    to_vertex: Vec<Option<Small>>,
    /// Edge and position when the point is interior.
    on: Option<(usize, usize, Small)>,
}

/// Cover points with their distances to every vertex precomputed, so a
/// probe costs a few additions per point.
struct Anchors {
    delta: Small,
    points: Vec<Anchor>,
}

impl Anchors {
    fn new(g: &Graph, s: &Cover, delta: &Rational) -> Option<Self> {
        let delta = small(delta)?;
        let mut points = Vec::with_capacity(s.len());
        for q in s.iter() {
            let mut to_vertex = Vec::with_capacity(g.vertex_count());
            for w in 0..g.vertex_count() {
                to_vertex.push(match distance_unchecked(g, q, &Point::Vertex(w)) {
                    Some(d) => Some(small(&d)?),
                    None => None,
                });
            }
            let on = match q {
                Point::Interior { u, v, lambda } => Some((*u, *v, small(lambda)?)),
                Point::Vertex(_) => None,
            };
            points.push(Anchor { to_vertex, on });
        }
        Some(Anchors { delta, points })
    }

    /// Whether `p(u, v, λ)` lies within δ of some cover point; `u < v`.
    fn reaches(&self, u: usize, v: usize, lambda: Small) -> bool {
        let rest = Small::one() - lambda;
        self.points.iter().any(|q| {
            let along = q.on.is_some_and(|(a, b, l)| (a, b) == (u, v) && (l - lambda).abs() <= self.delta);
            along
                || q.to_vertex[u].is_some_and(|d| d + lambda <= self.delta)
                || q.to_vertex[v].is_some_and(|d| d + rest <= self.delta)
        })
    }
}

/// Samples random points of `g` and decides each one twice: by its distance
/// to the nearest cover point and by membership in the edge intervals. Half
/// of the probes use denominators that are multiples of `4b` for `δ = a/b`,
/// where ball boundaries fall. Isolated vertices are sampled alongside the
/// edges.
pub fn probe_cover(g: &Graph, s: &Cover, delta: &Rational, probes: usize, seed: u64) -> ProbeReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ProbeReport { probes: 0, disagreements: Vec::new(), uncovered: 0 };
    let isolated: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) == 0).collect();
    let pieces = g.edge_count() + isolated.len();
    if pieces == 0 {
        return report;
    }
    let coverage: Vec<IntervalSet> = (0..g.edge_count()).map(|e| edge_coverage_intervals(g, e, s, delta)).collect();
    let anchors = Anchors::new(g, s, delta);
    let exact_reach = |p: &Point| s.iter().filter_map(|q| distance_unchecked(g, p, q)).any(|d| d <= *delta);
    let fine = 4 * delta.denom_i64().unwrap_or(1).clamp(1, 1 << 20);
    for i in 0..probes {
        let piece = rng.gen_range(0..pieces);
        let denom = if i % 2 == 0 { fine * rng.gen_range(1..=3) } else { rng.gen_range(1..=10_000) };
        let num = rng.gen_range(0..=denom);
        let (p, by_distance, by_interval) = match piece.checked_sub(g.edge_count()) {
            Some(j) => {
                let p = Point::Vertex(isolated[j]);
                let by_interval = s.iter().any(|q| *q == p);
                let by_distance = exact_reach(&p);
                (p, by_distance, by_interval)
            }
            None => {
                let (u, v) = g.edge(piece);
                let lambda = Rational::new(num, denom);
                let p = Point::on_edge(u, v, lambda.clone());
                let by_distance = match &anchors {
                    Some(a) => a.reaches(u, v, Small::new(num.into(), denom.into())),
                    None => exact_reach(&p),
                };
                (p, by_distance, coverage[piece].contains(&lambda))
            }
        };
        if by_distance != by_interval {
            report.disagreements.push(p);
        }
        report.uncovered += !by_distance as usize;
        report.probes += 1;
    }
    report
}
