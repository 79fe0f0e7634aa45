//! Discretization of δ-covering to finite Set Cover, with an exact
//! branch-and-bound solver and the greedy logarithmic approximation.
//!
//! For `δ = a/b` an optimal cover exists among points whose distance to the
//! nearest vertex is a multiple of `1/(2b)` (the candidates), and such a
//! cover is valid iff it covers every point on the `1/(4b)` grid (the
//! universe). All distances inside the instance are computed exactly in
//! integer units of `1/(4b)`.

use std::time::{Duration, Instant};

use microlp::{ComparisonOp, OptimizationDirection, Problem};
use serde::{Serialize, Serializer};

use crate::bitset::BitSet;
use crate::error::{CoverError, Result};
use crate::graph::{Graph, UNREACHABLE};
use crate::point::{Cover, Point};
use crate::rational::Rational;
use crate::verify::{discretized_universe, is_delta_cover};

/// Node and wall-clock limits for exact searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    pub max_nodes: u64,
    pub max_time: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { max_nodes: 10_000_000, max_time: Some(Duration::from_secs(60)) }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Budget { max_nodes, max_time: None }
    }

    pub fn unlimited() -> Self {
        Budget { max_nodes: u64::MAX, max_time: None }
    }
}

fn as_millis<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64() * 1e3)
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveResult {
    pub cover: Cover,
    pub size: usize,
    /// Set only when an exact search ran to completion.
    pub optimal: bool,
    pub nodes_explored: u64,
    #[serde(rename = "elapsed_ms", serialize_with = "as_millis")]
    pub elapsed: Duration,
}

/// Universe of `4b`-simple points, `2b`-simple candidates and, for every
/// candidate, the sorted universe indices within distance δ.
#[derive(Clone, Debug)]
pub struct SetCoverInstance {
    pub delta: Rational,
    pub b: u64,
    pub universe: Vec<Point>,
    pub candidates: Vec<Point>,
    pub coverage: Vec<Vec<usize>>,
}

/// A point on the `1/scale` grid: a vertex or `(edge, x)` at `x/scale` from
/// the lesser endpoint, `0 < x < scale`.
#[derive(Clone, Copy, Debug)]
enum GridPoint {
    Vertex(usize),
    OnEdge(usize, i64),
}

fn grid_exits(g: &Graph, p: GridPoint, scale: i64) -> ([(usize, i64); 2], usize) {
    match p {
        GridPoint::Vertex(w) => ([(w, 0), (w, 0)], 1),
        GridPoint::OnEdge(e, x) => {
            let (u, v) = g.edge(e);
            ([(u, x), (v, scale - x)], 2)
        }
    }
}

fn grid_distance(g: &Graph, p: GridPoint, q: GridPoint, scale: i64) -> Option<i64> {
    let mut best = None::<i64>;
    if let (GridPoint::OnEdge(e1, x1), GridPoint::OnEdge(e2, x2)) = (p, q) {
        if e1 == e2 {
            best = Some((x1 - x2).abs());
        }
    }
    let (pe, pn) = grid_exits(g, p, scale);
    let (qe, qn) = grid_exits(g, q, scale);
    for &(a, oa) in &pe[..pn] {
        for &(c, oc) in &qe[..qn] {
            let d = g.raw_dist(a, c);
            if d == UNREACHABLE {
                continue;
            }
            let t = oa + oc + i64::from(d) * scale;
            best = Some(best.map_or(t, |b| b.min(t)));
        }
    }
    best
}

fn grid_point(g: &Graph, p: GridPoint, scale: i64) -> Point {
    match p {
        GridPoint::Vertex(w) => Point::Vertex(w),
        GridPoint::OnEdge(e, x) => {
            let (u, v) = g.edge(e);
            Point::on_edge(u, v, Rational::new(x, scale))
        }
    }
}

fn grid(g: &Graph, scale: i64, step: i64) -> Vec<GridPoint> {
    let mut out: Vec<GridPoint> = (0..g.vertex_count()).map(GridPoint::Vertex).collect();
    for e in 0..g.edge_count() {
        let mut x = step;
        while x < scale {
            out.push(GridPoint::OnEdge(e, x));
            x += step;
        }
    }
    out
}

fn delta_parts(delta: &Rational) -> Result<(i64, i64)> {
    if !delta.is_positive() {
        return Err(CoverError::InvalidDelta(delta.clone()));
    }
    match (delta.numer_i64(), delta.denom_i64()) {
        (Some(a), Some(b)) if b <= 1 << 20 && a <= 1 << 20 => Ok((a, b)),
        _ => Err(CoverError::InvalidDelta(delta.clone())),
    }
}

/// All `2b`-simple points for `δ = a/b`: vertices, then for every edge the
/// positions `x/(2b)`, `0 < x < 2b`.
pub fn candidate_points(g: &Graph, delta: &Rational) -> Result<Vec<Point>> {
    let (_, b) = delta_parts(delta)?;
    let scale = 2 * b;
    Ok(grid(g, scale, 1).into_iter().map(|p| grid_point(g, p, scale)).collect())
}

/// Builds the equivalent Set Cover instance for `δ` on `g`.
pub fn build_set_cover(g: &Graph, delta: &Rational) -> Result<SetCoverInstance> {
    let (a, b) = delta_parts(delta)?;
    let scale = 4 * b;
    let reach = 4 * a;
    let uni = grid(g, scale, 1);
    let cand = grid(g, scale, 2);
    let coverage: Vec<Vec<usize>> = cand
        .iter()
        .map(|&c| {
            uni.iter()
                .enumerate()
                .filter(|&(_, &p)| grid_distance(g, c, p, scale).is_some_and(|d| d <= reach))
                .map(|(i, _)| i)
                .collect()
        })
        .collect();
    let universe = uni.iter().map(|&p| grid_point(g, p, scale)).collect::<Vec<_>>();
    debug_assert_eq!(universe.len(), discretized_universe(g, b as u64).len());
    Ok(SetCoverInstance {
        delta: delta.clone(),
        b: b as u64,
        universe,
        candidates: cand.iter().map(|&p| grid_point(g, p, scale)).collect(),
        coverage,
    })
}

/// Exact minimum-cardinality subfamily covering the universe.
///
/// Branches on the uncovered element with the fewest remaining candidates;
/// the incumbent starts from the greedy solution. Exceeding the budget
/// returns the best cover found with `optimal = false`.
pub fn solve_exact(inst: &SetCoverInstance, budget: &Budget) -> Result<SolveResult> {
    let start = Instant::now();
    let res = exact_set_cover(inst.universe.len(), &inst.coverage, budget)
        .ok_or_else(|| CoverError::Internal("set cover instance is infeasible".into()))?;
    let cover: Cover = res.chosen.iter().map(|&c| inst.candidates[c].clone()).collect();
    Ok(SolveResult {
        size: cover.len(),
        cover,
        optimal: res.optimal,
        nodes_explored: res.nodes,
        elapsed: start.elapsed(),
    })
}

/// Classic greedy: repeatedly take the candidate covering most uncovered
/// universe points, lowest index on ties.
pub fn solve_greedy(inst: &SetCoverInstance) -> Result<SolveResult> {
    let start = Instant::now();
    let chosen = greedy_set_cover(inst.universe.len(), &inst.coverage)
        .ok_or_else(|| CoverError::Internal("set cover instance is infeasible".into()))?;
    let cover: Cover = chosen.iter().map(|&c| inst.candidates[c].clone()).collect();
    Ok(SolveResult {
        size: cover.len(),
        cover,
        optimal: false,
        nodes_explored: 0,
        elapsed: start.elapsed(),
    })
}

/// Minimum δ-cover through the Set Cover discretization, verified before it
/// is returned.
pub fn min_cover_exact(g: &Graph, delta: &Rational, budget: &Budget) -> Result<SolveResult> {
    let inst = build_set_cover(g, delta)?;
    let res = solve_exact(&inst, budget)?;
    let report = is_delta_cover(g, &res.cover, delta);
    if !report.is_cover {
        return Err(CoverError::Internal(format!(
            "exact solver returned a non-cover (uncovered {:?})",
            report.witness
        )));
    }
    Ok(res)
}

/// Greedy δ-cover through the same discretization.
pub fn greedy_cover(g: &Graph, delta: &Rational) -> Result<(SolveResult, usize)> {
    let inst = build_set_cover(g, delta)?;
    let res = solve_greedy(&inst)?;
    let report = is_delta_cover(g, &res.cover, delta);
    if !report.is_cover {
        return Err(CoverError::Internal(format!(
            "greedy returned a non-cover (uncovered {:?})",
            report.witness
        )));
    }
    Ok((res, inst.universe.len()))
}

pub(crate) fn greedy_set_cover(ne: usize, sets: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut covered = vec![false; ne];
    let mut left = ne;
    let mut chosen = Vec::new();
    while left > 0 {
        let (best, gain) = sets
            .iter()
            .enumerate()
            .map(|(i, s)| (i, s.iter().filter(|&&e| !covered[e]).count()))
            .fold((usize::MAX, 0), |acc, (i, g)| if g > acc.1 { (i, g) } else { acc });
        if gain == 0 {
            return None;
        }
        for &e in &sets[best] {
            if !covered[e] {
                covered[e] = true;
                left -= 1;
            }
        }
        chosen.push(best);
    }
    Some(chosen)
}

pub(crate) struct ExactOutcome {
    pub chosen: Vec<usize>,
    pub optimal: bool,
    pub nodes: u64,
}

/// Exact minimum set cover over elements `0..ne`. Returns `None` when some
/// element is in no set.
pub(crate) fn exact_set_cover(ne: usize, sets: &[Vec<usize>], budget: &Budget) -> Option<ExactOutcome> {
    let nc = sets.len();
    let mut cov = vec![BitSet::new(ne); nc];
    let mut cands_of = vec![BitSet::new(nc); ne];
    for (c, s) in sets.iter().enumerate() {
        for &e in s {
            cov[c].insert(e);
            cands_of[e].insert(c);
        }
    }
    let (mut chosen, active_e, active_c) = reduce(&cov, &cands_of)?;

    let elems: Vec<usize> = active_e.iter().collect();
    let cands: Vec<usize> = active_c.iter().collect();
    let deadline = budget.max_time.map(|t| Instant::now() + t);
    let mut nodes = 0u64;
    let mut optimal = true;

    for (comp_elems, comp_cands) in split_components(&elems, &cands, &cov) {
        let sub_sets: Vec<Vec<usize>> = comp_cands
            .iter()
            .map(|&c| {
                comp_elems
                    .iter()
                    .enumerate()
                    .filter(|&(_, &e)| cov[c].contains(e))
                    .map(|(i, _)| i)
                    .collect()
            })
            .collect();
        let mut search = Search::new(comp_elems.len(), &sub_sets, budget.max_nodes.saturating_sub(nodes), deadline);
        search.run(&sub_sets);
        nodes += search.nodes;
        optimal &= !search.aborted;
        chosen.extend(search.best_sol.iter().map(|&i| comp_cands[i]));
    }
    Some(ExactOutcome { chosen, optimal, nodes })
}

/// Root reductions: forced candidates, dominated candidates, dominated
/// elements. Returns the forced picks and the surviving elements/candidates.
fn reduce(cov: &[BitSet], cands_of: &[BitSet]) -> Option<(Vec<usize>, BitSet, BitSet)> {
    let ne = cands_of.len();
    let nc = cov.len();
    let mut ae = BitSet::full(ne);
    let mut ac = BitSet::full(nc);
    let mut forced = Vec::new();
    loop {
        let mut changed = false;
        for (e, holders) in cands_of.iter().enumerate() {
            if !ae.contains(e) {
                continue;
            }
            match holders.and_count(&ac) {
                0 => return None,
                1 => {
                    let c = holders.iter().find(|&c| ac.contains(c)).unwrap();
                    forced.push(c);
                    ae.difference_with(&cov[c]);
                    ac.remove(c);
                    changed = true;
                }
                _ => {}
            }
        }
        let cs: Vec<usize> = ac.iter().collect();
        for &c1 in &cs {
            if cov[c1].and_count(&ae) == 0 {
                ac.remove(c1);
                changed = true;
                continue;
            }
            for &c2 in &cs {
                if c1 == c2 || !ac.contains(c2) {
                    continue;
                }
                if cov[c1].masked_subset(&cov[c2], &ae) && (c2 < c1 || !cov[c1].masked_eq(&cov[c2], &ae)) {
                    ac.remove(c1);
                    changed = true;
                    break;
                }
            }
        }
        let es: Vec<usize> = ae.iter().collect();
        for &e2 in &es {
            for &e1 in &es {
                if e1 == e2 || !ae.contains(e1) {
                    continue;
                }
                // covering e1 always covers e2
                if cands_of[e1].masked_subset(&cands_of[e2], &ac)
                    && (e1 < e2 || !cands_of[e1].masked_eq(&cands_of[e2], &ac))
                {
                    ae.remove(e2);
                    changed = true;
                    break;
                }
            }
        }
        if !changed {
            return Some((forced, ae, ac));
        }
    }
}

/// Groups elements connected through shared candidates.
fn split_components(elems: &[usize], cands: &[usize], cov: &[BitSet]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut parent: Vec<usize> = (0..elems.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nxt = p[y];
            p[y] = r;
            y = nxt;
        }
        r
    }
    let mut touched: Vec<Vec<usize>> = Vec::with_capacity(cands.len());
    for &c in cands {
        let members: Vec<usize> = elems
            .iter()
            .enumerate()
            .filter(|&(_, &e)| cov[c].contains(e))
            .map(|(i, _)| i)
            .collect();
        for w in members.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        touched.push(members);
    }
    let mut groups: Vec<(usize, Vec<usize>, Vec<usize>)> = Vec::new();
    for (i, &e) in elems.iter().enumerate() {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(e),
            None => groups.push((r, vec![e], Vec::new())),
        }
    }
    for (ci, members) in touched.iter().enumerate() {
        if let Some(&first) = members.first() {
            let r = find(&mut parent, first);
            groups.iter_mut().find(|g| g.0 == r).unwrap().2.push(cands[ci]);
        }
    }
    groups.into_iter().map(|(_, e, c)| (e, c)).collect()
}

/// Feasible solution of the LP dual `max Σ y_e` subject to
/// `Σ_{e∈S} y_e ≤ 1`, solved in floating point and then scaled down until no
/// set sum exceeds 1, so bounds derived from it stay valid whatever the
/// solver's rounding. Restricted to any subset of elements it stays feasible
/// for the corresponding subproblem.
fn lp_dual(ne: usize, sets: &[Vec<usize>]) -> Option<Vec<f64>> {
    let mut lp = Problem::new(OptimizationDirection::Maximize);
    let ys: Vec<_> = (0..ne).map(|_| lp.add_var(1.0, (0.0, 1.0))).collect();
    for s in sets {
        let terms: Vec<_> = s.iter().map(|&e| (ys[e], 1.0)).collect();
        lp.add_constraint(terms.as_slice(), ComparisonOp::Le, 1.0);
    }
    let sol = lp.solve().ok()?.into_solution().ok()?;
    let y: Vec<f64> = ys.iter().map(|&v| sol.var_value_raw(v).clamp(0.0, 1.0)).collect();
    let worst = sets
        .iter()
        .map(|s| s.iter().map(|&e| y[e]).sum::<f64>())
        .fold(1.0, f64::max);
    Some(y.into_iter().map(|v| v / worst).collect())
}

/// Rounds a fractional lower bound up, with slack for float error.
fn ceil_bound(x: f64) -> usize {
    (x - 1e-6).ceil().max(0.0) as usize
}

struct Search {
    cov: Vec<BitSet>,
    cands_of: Vec<BitSet>,
    /// Elements by ascending candidate count, for the packing bound.
    order: Vec<usize>,
    best: usize,
    best_sol: Vec<usize>,
    stack: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    deadline: Option<Instant>,
    aborted: bool,
    /// Proven lower bound for the whole instance; reaching it ends the search.
    floor: usize,
    /// Root LP dual values, all zero when the LP was not solved.
    dual: Vec<f64>,
}

impl Search {
    fn new(ne: usize, sets: &[Vec<usize>], max_nodes: u64, deadline: Option<Instant>) -> Self {
        let nc = sets.len();
        let mut cov = vec![BitSet::new(ne); nc];
        let mut cands_of = vec![BitSet::new(nc); ne];
        for (c, s) in sets.iter().enumerate() {
            for &e in s {
                cov[c].insert(e);
                cands_of[e].insert(c);
            }
        }
        let mut order: Vec<usize> = (0..ne).collect();
        order.sort_by_key(|&e| (cands_of[e].count(), e));
        let best_sol = greedy_set_cover(ne, sets).expect("reduced instance is feasible");
        Search {
            cov,
            cands_of,
            order,
            best: best_sol.len(),
            best_sol,
            stack: Vec::new(),
            nodes: 0,
            max_nodes,
            deadline,
            aborted: false,
            floor: 0,
            dual: vec![0.0; ne],
        }
    }

    fn run(&mut self, sets: &[Vec<usize>]) {
        let ne = self.cands_of.len();
        let nc = self.cov.len();
        if ne == 0 {
            self.best_sol.clear();
            return;
        }
        let full_e = BitSet::full(ne);
        let full_c = BitSet::full(nc);
        self.floor = self.packing_bound(&full_e, &full_c);
        if self.best > self.floor {
            if let Some(y) = lp_dual(ne, sets) {
                self.floor = self.floor.max(ceil_bound(y.iter().sum()));
                self.dual = y;
            }
        }
        if self.best <= self.floor {
            return;
        }
        self.search(&BitSet::full(ne), &BitSet::full(nc));
    }

    fn packing_bound(&self, uncovered: &BitSet, allowed: &BitSet) -> usize {
        let mut used = BitSet::new(allowed.len());
        let mut lb = 0;
        for &e in &self.order {
            if uncovered.contains(e) && !self.cands_of[e].intersects(&used) {
                lb += 1;
                used.masked_union_with(&self.cands_of[e], allowed);
            }
        }
        lb
    }

    fn search(&mut self, uncovered: &BitSet, allowed: &BitSet) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes
            || (self.nodes & 1023 == 0 && self.deadline.is_some_and(|d| Instant::now() > d))
        {
            self.aborted = true;
            return;
        }
        let depth = self.stack.len();
        if uncovered.is_empty() {
            if depth < self.best {
                self.best = depth;
                self.best_sol = self.stack.clone();
            }
            return;
        }
        if depth + 1 >= self.best {
            return;
        }

        let mut pivot = usize::MAX;
        let mut pivot_count = usize::MAX;
        for e in uncovered.iter() {
            let cnt = self.cands_of[e].and_count(allowed);
            if cnt == 0 {
                return;
            }
            if cnt < pivot_count {
                pivot = e;
                pivot_count = cnt;
                if cnt == 1 {
                    break;
                }
            }
        }

        let mut gain = vec![0usize; self.cov.len()];
        for c in allowed.iter() {
            gain[c] = self.cov[c].and_count(uncovered);
        }
        // element e gets weight 1 / (largest gain of a set holding e)
        let mut dual = 0.0f64;
        for e in uncovered.iter() {
            let best_gain = self.cands_of[e].iter().filter(|&c| allowed.contains(c)).map(|c| gain[c]).max().unwrap_or(0);
            if best_gain == 0 {
                return;
            }
            dual += 1.0 / best_gain as f64;
        }
        let root_dual: f64 = uncovered.iter().map(|e| self.dual[e]).sum();
        let lb = self.packing_bound(uncovered, allowed).max(ceil_bound(dual)).max(ceil_bound(root_dual));
        if depth + lb >= self.best {
            return;
        }

        let options: Vec<usize> = self.cands_of[pivot].iter().filter(|&c| allowed.contains(c)).collect();
        let mut branches: Vec<(usize, usize)> = Vec::with_capacity(options.len());
        for &c in &options {
            let dominated = options.iter().any(|&d| {
                d != c
                    && self.cov[c].masked_subset(&self.cov[d], uncovered)
                    && (d < c || !self.cov[c].masked_eq(&self.cov[d], uncovered))
            });
            // any completion using c costs at least the dual value plus
            // c's reduced cost
            let covered: f64 = self.cov[c].iter().filter(|&e| uncovered.contains(e)).map(|e| self.dual[e]).sum();
            let with_c = ceil_bound(root_dual + 1.0 - covered);
            if !dominated && depth + with_c < self.best {
                branches.push((c, self.cov[c].and_count(uncovered)));
            }
        }
        branches.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

        let mut allowed_here = allowed.clone();
        for (c, _) in branches {
            allowed_here.remove(c);
            let mut next = uncovered.clone();
            next.difference_with(&self.cov[c]);
            self.stack.push(c);
            self.search(&next, &allowed_here);
            self.stack.pop();
            if self.aborted || depth + 1 >= self.best || self.best <= self.floor {
                return;
            }
        }
    }
}
