//! Approximation algorithms for every δ-range, and the dispatcher that picks
//! one per connected component.
//!
//! | δ                         | algorithm                         | factor            |
//! |---------------------------|-----------------------------------|-------------------|
//! | forest component          | [`tree_cover`]                    | 1                 |
//! | `1/b`                     | subdivision + exact 1-cover       | 1                 |
//! | `[3/2, ∞)`                | greedy set cover                  | `H(|U|)`          |
//! | `(1, 3/2)`                | minimum 1-cover                   | 3/2, 5/3 or 2     |
//! | `[3/4, 1)`                | all vertices                      | 2                 |
//! | `[2/3, 3/4)`              | leaf-level construction           | 3/2               |
//! | `(1/2, 2/3)`              | all vertices                      | `(x+1)/x`         |
//! | `(1/(2k+2), 1/(2k+1))`    | vertices + `k` points per edge    | `1+1/(kΔ′+1)`     |
//! | `(1/(2k+1), 1/(2k))`      | exact `1/(2k+1)`-cover            | see [`cover_small_delta_odd`] |

use std::fmt;

use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};

use crate::error::{CoverError, Result};
use crate::graph::Graph;
use crate::matching::{gallai_edmonds, vc_2approx};
use crate::point::{Cover, Point};
use crate::rational::Rational;
use crate::setcover::{greedy_cover, min_cover_exact, Budget, SolveResult};
use crate::tree::tree_cover;
use crate::unit::{one_cover_min, unit_fraction_cover};
use crate::verify::{is_delta_cover, require_cover};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Regime {
    Exact,
    LargeDelta,
    OneCover2,
    OneCover5_3,
    OneCover3_2,
    VertexSetX(u32),
    LeafLevel,
    VertexSet34To1,
    SmallEven(u32),
    SmallOdd(u32),
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regime::Exact => write!(f, "exact"),
            Regime::LargeDelta => write!(f, "large_delta"),
            Regime::OneCover2 => write!(f, "one_cover_2"),
            Regime::OneCover5_3 => write!(f, "one_cover_5_3"),
            Regime::OneCover3_2 => write!(f, "one_cover_3_2"),
            Regime::VertexSetX(x) => write!(f, "vertex_set_x({x})"),
            Regime::LeafLevel => write!(f, "leaf_level"),
            Regime::VertexSet34To1 => write!(f, "vertex_set_34_1"),
            Regime::SmallEven(k) => write!(f, "small_even({k})"),
            Regime::SmallOdd(k) => write!(f, "small_odd({k})"),
        }
    }
}

impl Serialize for Regime {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Outcome for one connected component, vertex ids of the input graph.
#[derive(Clone, Debug, Serialize)]
pub struct ComponentReport {
    pub vertices: Vec<usize>,
    pub regime: Regime,
    pub claimed_factor: Rational,
    pub size: usize,
    /// Slack term of the odd small-δ bound, when that regime applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub cover: Cover,
    /// Largest factor over the components; bounds the ratio of the union.
    pub claimed_factor: Rational,
    /// Regime of the component with the largest factor.
    pub regime: Regime,
    /// `2|E| / |V|` of the whole input.
    pub avg_degree: Rational,
    pub components: Vec<ComponentReport>,
}

impl RatioReport {
    pub fn size(&self) -> usize {
        self.cover.len()
    }
}

/// Levels around the leaves of a graph. `l1` and `l2` may overlap.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct LevelPartition {
    pub l0: Vec<usize>,
    pub l1: Vec<usize>,
    pub l2: Vec<usize>,
    /// `(leaf, neighbor)` tuples.
    pub e01: Vec<(usize, usize)>,
    /// Edges with both ends in `l1`, as edge ids.
    pub e11: Vec<usize>,
    /// `(u1, u2)` tuples with `u1 ∈ l1`, `u2 ∈ l2`.
    pub e12: Vec<(usize, usize)>,
    /// `V \ (l0 ∪ l1)`.
    pub w: Vec<usize>,
}

impl LevelPartition {
    pub fn new(g: &Graph) -> Self {
        let n = g.vertex_count();
        let l0: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 1).collect();
        let at_distance = |i: u32| -> Vec<usize> {
            (0..n)
                .filter(|&v| l0.iter().any(|&leaf| g.vertex_dist(leaf, v) == Some(i)))
                .collect()
        };
        let l1 = at_distance(1);
        let l2 = at_distance(2);
        let e01 = l0.iter().flat_map(|&u| g.neighbors(u).iter().map(move |&w| (u, w))).collect();
        let e11 = (0..g.edge_count())
            .filter(|&e| {
                let (u, v) = g.edge(e);
                l1.binary_search(&u).is_ok() && l1.binary_search(&v).is_ok()
            })
            .collect();
        let mut e12 = Vec::new();
        for &(u, v) in g.edges() {
            for (a, b) in [(u, v), (v, u)] {
                if l1.binary_search(&a).is_ok() && l2.binary_search(&b).is_ok() {
                    e12.push((a, b));
                }
            }
        }
        e12.sort_unstable();
        let w = (0..n)
            .filter(|v| l0.binary_search(v).is_err() && l1.binary_search(v).is_err())
            .collect();
        LevelPartition { l0, l1, l2, e01, e11, e12, w }
    }
}

struct Part {
    cover: Cover,
    regime: Regime,
    factor: Rational,
    epsilon: Option<Rational>,
}

impl Part {
    fn exact(cover: Cover) -> Self {
        Part { cover, regime: Regime::Exact, factor: Rational::one(), epsilon: None }
    }
}

fn require_optimal(res: SolveResult) -> Result<Cover> {
    if res.optimal {
        Ok(res.cover)
    } else {
        Err(CoverError::BudgetExhausted { best: res.size })
    }
}

/// Runs `solve` on every connected component and unions the results.
fn per_component<F>(g: &Graph, delta: &Rational, mut solve: F) -> Result<RatioReport>
where
    F: FnMut(&Graph) -> Result<Part>,
{
    if !delta.is_positive() {
        return Err(CoverError::InvalidDelta(delta.clone()));
    }
    let mut cover = Cover::new();
    let mut components = Vec::new();
    let mut top: Option<(Rational, Regime)> = None;
    for vertices in g.components() {
        let (sub, map) = g.induced(&vertices);
        let part = solve(&sub)?;
        require_cover(&sub, &part.cover, delta)?;
        let lifted = part.cover.relabel(&map);
        if top.as_ref().is_none_or(|(f, _)| part.factor > *f) {
            top = Some((part.factor.clone(), part.regime));
        }
        components.push(ComponentReport {
            vertices,
            regime: part.regime,
            claimed_factor: part.factor,
            size: lifted.len(),
            epsilon: part.epsilon,
        });
        cover.extend(lifted);
    }
    let (claimed_factor, regime) = top.unwrap_or((Rational::one(), Regime::Exact));
    let avg_degree = if g.vertex_count() == 0 { Rational::zero() } else { g.average_degree() };
    Ok(RatioReport { cover, claimed_factor, regime, avg_degree, components })
}

fn out_of_range(delta: &Rational, interval: &str) -> CoverError {
    CoverError::DeltaOutOfRange { delta: delta.clone(), interval: interval.to_string() }
}

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn small_int(v: num_bigint::BigInt) -> u32 {
    v.to_u32().expect("small-δ parameter fits in u32")
}

/// Approximate δ-cover with the algorithm matching δ, per component.
pub fn approx_cover(g: &Graph, delta: &Rational, budget: &Budget) -> Result<RatioReport> {
    per_component(g, delta, |c| dispatch(c, delta, budget))
}

fn dispatch(c: &Graph, delta: &Rational, budget: &Budget) -> Result<Part> {
    if c.is_forest() {
        return Ok(Part::exact(tree_cover(c, delta)?.cover));
    }
    if delta.is_unit_fraction() {
        if *delta == Rational::half() {
            return Ok(Part::exact(Cover::from_vertices(0..c.vertex_count())));
        }
        let b: usize = delta.denom_i64().and_then(|b| usize::try_from(b).ok()).ok_or_else(|| out_of_range(delta, "1/b with b < 2^63"))?;
        return Ok(Part::exact(require_optimal(unit_fraction_cover(c, b, budget)?)?));
    }
    if *delta >= r(3, 2) {
        return large_delta_part(c, delta);
    }
    if *delta > Rational::one() {
        return one_cover_part(c, delta, budget);
    }
    if *delta >= r(3, 4) {
        return Ok(vertex_part(c, Regime::VertexSet34To1, Rational::from_integer(2)));
    }
    if *delta >= r(2, 3) {
        return leaf_level_part(c);
    }
    if *delta > Rational::half() {
        return vertex_set_part(c, delta, budget);
    }
    let m = delta.recip().floor();
    let k = small_int(m.clone() / 2);
    if m.bit(0) {
        small_even_part(c, k, delta)
    } else {
        small_odd_part(c, k, budget)
    }
}

fn vertex_part(c: &Graph, regime: Regime, factor: Rational) -> Part {
    Part { cover: Cover::from_vertices(0..c.vertex_count()), regime, factor, epsilon: None }
}

fn large_delta_part(c: &Graph, delta: &Rational) -> Result<Part> {
    let (res, universe) = greedy_cover(c, delta)?;
    Ok(Part {
        cover: res.cover,
        regime: Regime::LargeDelta,
        factor: Rational::harmonic(universe as u64),
        epsilon: None,
    })
}

fn one_cover_part(c: &Graph, delta: &Rational, budget: &Budget) -> Result<Part> {
    let (regime, factor) = if *delta >= r(5, 4) {
        (Regime::OneCover2, Rational::from_integer(2))
    } else if *delta >= r(7, 6) {
        (Regime::OneCover5_3, r(5, 3))
    } else {
        (Regime::OneCover3_2, r(3, 2))
    };
    Ok(Part { cover: require_optimal(one_cover_min(c, budget)?)?, regime, factor, epsilon: None })
}

/// The integer `x ≥ 2` with `δ ∈ [(x+1)/(2x+1), x/(2x−1))`.
pub fn vertex_set_parameter(delta: &Rational) -> Option<u32> {
    if *delta <= Rational::half() || *delta >= r(2, 3) {
        return None;
    }
    let bound = (Rational::one() - delta) / (delta.scale(2) - Rational::one());
    Some(small_int(bound.ceil()).max(2))
}

fn vertex_set_part(c: &Graph, delta: &Rational, budget: &Budget) -> Result<Part> {
    let x = vertex_set_parameter(delta).ok_or_else(|| out_of_range(delta, "(1/2, 2/3)"))?;
    let factor = r(i64::from(x) + 1, i64::from(x));
    let regime = Regime::VertexSetX(x);
    if c.is_forest() {
        return Ok(Part::exact(tree_cover(c, delta)?.cover));
    }
    if c.edge_count() < x as usize {
        let cover = require_optimal(min_cover_exact(c, delta, budget)?)?;
        return Ok(Part { cover, regime, factor, epsilon: None });
    }
    Ok(vertex_part(c, regime, factor))
}

/// Leaf-level 2/3-cover of a connected non-tree graph.
fn leaf_level_part(c: &Graph) -> Result<Part> {
    if c.is_forest() {
        return Err(CoverError::Routing("leaf-level algorithm needs a non-tree component".into()));
    }
    let levels = LevelPartition::new(c);
    let mut cover: Cover = levels
        .e01
        .iter()
        .map(|&(leaf, hub)| Point::on_edge(leaf, hub, r(2, 3)))
        .collect();
    let (core, map) = c.edge_induced(&levels.e11);
    cover.extend(vc_2approx(&core).into_iter().map(|v| Point::Vertex(map[v])));
    cover.extend(levels.w.iter().map(|&v| Point::Vertex(v)));
    require_cover(c, &cover, &r(2, 3))?;
    Ok(Part { cover, regime: Regime::LeafLevel, factor: r(3, 2), epsilon: None })
}

fn small_even_part(c: &Graph, k: u32, delta: &Rational) -> Result<Part> {
    if c.is_forest() {
        return Err(CoverError::Routing("small-δ vertex construction needs a non-tree component".into()));
    }
    let kk = i64::from(k);
    let mut cover = Cover::from_vertices(0..c.vertex_count());
    for &(u, v) in c.edges() {
        for j in 1..=kk {
            let pos = Rational::half() + delta.scale(2 * j - kk - 1);
            cover.insert(Point::on_edge(u, v, pos));
        }
    }
    let factor = Rational::one() + (c.average_degree().scale(kk) + Rational::one()).recip();
    Ok(Part { cover, regime: Regime::SmallEven(k), factor, epsilon: None })
}

fn small_odd_part(c: &Graph, k: u32, budget: &Budget) -> Result<Part> {
    let kk = i64::from(k);
    let res = require_optimal(unit_fraction_cover(c, 2 * k as usize + 1, budget)?)?;
    let one = require_optimal(one_cover_min(c, budget)?)?;
    let limit = k as usize * c.edge_count() + one.len();
    if res.len() > limit {
        return Err(CoverError::Internal(format!(
            "1/{}-cover of size {} exceeds k|E| + cov_1 = {limit}",
            2 * k + 1,
            res.len()
        )));
    }
    let n = c.vertex_count() as i64;
    let c3 = gallai_edmonds(c).c_ge3 as i64;
    let epsilon = r(n + c3, n + c3 - 1) - Rational::one();
    let by_degree = Rational::one() + r(4, 3 * kk) / c.average_degree();
    let by_size = Rational::one() + r(1, 2 * kk) + epsilon.clone();
    Ok(Part {
        cover: res,
        regime: Regime::SmallOdd(k),
        factor: by_degree.min(by_size),
        epsilon: Some(epsilon),
    })
}

/// Minimum 1-cover used as a δ-cover for `δ ∈ (1, 3/2)`.
pub fn cover_via_one_cover(g: &Graph, delta: &Rational, budget: &Budget) -> Result<RatioReport> {
    if *delta <= Rational::one() || *delta >= r(3, 2) {
        return Err(out_of_range(delta, "(1, 3/2)"));
    }
    per_component(g, delta, |c| one_cover_part(c, delta, budget))
}

/// Vertex-set algorithm for `δ ∈ (1/2, 2/3)`: trees exactly, components with
/// fewer than `x` edges by brute force, otherwise all vertices.
pub fn cover_vertex_set(g: &Graph, delta: &Rational, budget: &Budget) -> Result<RatioReport> {
    vertex_set_parameter(delta).ok_or_else(|| out_of_range(delta, "(1/2, 2/3)"))?;
    per_component(g, delta, |c| vertex_set_part(c, delta, budget))
}

/// Leaf-level algorithm for `δ ∈ [2/3, 3/4)`. Every component must contain a
/// cycle.
pub fn cover_leaf_level(g: &Graph, delta: &Rational) -> Result<RatioReport> {
    if *delta < r(2, 3) || *delta >= r(3, 4) {
        return Err(out_of_range(delta, "[2/3, 3/4)"));
    }
    per_component(g, delta, leaf_level_part)
}

/// Vertices plus `k` evenly spaced centered points per edge, for
/// `δ ∈ (1/(2k+2), 1/(2k+1))`. Every component must contain a cycle.
pub fn cover_small_delta_even(g: &Graph, k: u32, delta: &Rational) -> Result<RatioReport> {
    let kk = i64::from(k);
    if k == 0 || *delta <= r(1, 2 * kk + 2) || *delta >= r(1, 2 * kk + 1) {
        return Err(out_of_range(delta, &format!("(1/{}, 1/{})", 2 * kk + 2, 2 * kk + 1)));
    }
    per_component(g, delta, |c| small_even_part(c, k, delta))
}

/// Exact `1/(2k+1)`-cover, for `δ ∈ (1/(2k+1), 1/(2k))`. Its factor is
/// `min{1 + 4/(3kΔ′), 1 + 1/(2k) + ε}` with `ε = (n+c)/(n+c−1) − 1`, `c` the
/// number of odd D-components with at least three vertices.
pub fn cover_small_delta_odd(g: &Graph, k: u32, delta: &Rational, budget: &Budget) -> Result<RatioReport> {
    let kk = i64::from(k);
    if k == 0 || *delta <= r(1, 2 * kk + 1) || *delta >= r(1, 2 * kk) {
        return Err(out_of_range(delta, &format!("(1/{}, 1/{})", 2 * kk + 1, 2 * kk)));
    }
    per_component(g, delta, |c| {
        if c.is_forest() {
            Ok(Part::exact(tree_cover(c, delta)?.cover))
        } else {
            small_odd_part(c, k, budget)
        }
    })
}

/// Distance from `a` of a point on the closed edge `{a, b}`.
fn position(p: &Point, a: usize, b: usize) -> Rational {
    match p {
        Point::Vertex(w) if *w == b => Rational::one(),
        _ => p.offset_from(a).expect("point lies on the edge"),
    }
}

/// Maps a `δ/(2δ+1)`-cover to a δ-cover with one point fewer on every edge
/// carrying at least two points.
///
/// The `k ≥ 2` points on the closed edge `{u, v}` become `k − 1` points at
/// `λ₁ = μ(2δ+1)`, `λᵢ₊₁ = λᵢ + 2δ`, where `μ` is the distance of the nearest
/// point to `u`. The endpoint nearer to the edge's points is used as `u`, and
/// positions past the far endpoint are clamped onto it.
pub fn translate_cover_up(g: &Graph, s_prime: &Cover, delta: &Rational) -> Result<Cover> {
    if !delta.is_positive() {
        return Err(CoverError::InvalidDelta(delta.clone()));
    }
    let shrunk = delta / (delta.scale(2) + Rational::one());
    let report = is_delta_cover(g, s_prime, &shrunk);
    if !report.is_cover {
        return Err(CoverError::NotACover {
            delta: shrunk,
            witness: report.witness.map(|p| p.to_string()).unwrap_or_default(),
        });
    }
    let step = delta.scale(2);
    let stretch = delta.scale(2) + Rational::one();
    let mut out = Cover::new();
    for &(a, b) in g.edges() {
        let on_edge = s_prime.on_edge(a, b);
        if on_edge.len() < 2 {
            continue;
        }
        let from_a = on_edge.iter().map(|p| position(p, a, b)).min().unwrap();
        let from_b = on_edge.iter().map(|p| position(p, b, a)).min().unwrap();
        let (u, v, mu) = if from_b < from_a { (b, a, from_b) } else { (a, b, from_a) };
        let mut lambda = mu * &stretch;
        for _ in 1..on_edge.len() {
            let pos = lambda.clone().min(Rational::one());
            out.insert(Point::on_edge(u, v, pos));
            lambda = lambda + &step;
        }
    }
    // an isolated vertex is its own point in any cover
    out.extend((0..g.vertex_count()).filter(|&v| g.degree(v) == 0).map(Point::Vertex));
    let report = is_delta_cover(g, &out, delta);
    if !report.is_cover {
        return Err(CoverError::Internal(format!(
            "translated cover misses {}",
            report.witness.map(|p| p.to_string()).unwrap_or_default()
        )));
    }
    Ok(out)
}
