//! Maximum matchings, the Gallai–Edmonds decomposition and the
//! matching-based vertex cover approximation.

use std::collections::VecDeque;

use serde::Serialize;

use crate::graph::Graph;

const NONE: usize = usize::MAX;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Matching {
    /// Matched edges `(u, v)` with `u < v`, sorted.
    pub pairs: Vec<(usize, usize)>,
    #[serde(skip)]
    mate: Vec<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    pub fn mate(&self, v: usize) -> Option<usize> {
        match self.mate[v] {
            NONE => None,
            m => Some(m),
        }
    }

    /// Edges exist in `g` and are pairwise vertex-disjoint.
    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut seen = vec![false; g.vertex_count()];
        self.pairs.iter().all(|&(u, v)| {
            let ok = g.has_edge(u, v) && !seen[u] && !seen[v];
            seen[u] = true;
            seen[v] = true;
            ok
        })
    }

    fn from_mates(mate: Vec<usize>) -> Self {
        let pairs = mate
            .iter()
            .enumerate()
            .filter(|&(v, &m)| m != NONE && v < m)
            .map(|(v, &m)| (v, m))
            .collect();
        Matching { pairs, mate }
    }
}

/// Maximum-cardinality matching (Edmonds' blossom algorithm, `O(n³)`).
pub fn max_matching(g: &Graph) -> Matching {
    Blossom::new(g).run()
}

struct Blossom<'a> {
    g: &'a Graph,
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: VecDeque<usize>,
}

impl<'a> Blossom<'a> {
    fn new(g: &'a Graph) -> Self {
        let n = g.vertex_count();
        Blossom {
            g,
            mate: vec![NONE; n],
            parent: vec![NONE; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
            queue: VecDeque::new(),
        }
    }

    fn run(mut self) -> Matching {
        let n = self.g.vertex_count();
        for &(u, v) in self.g.edges() {
            if self.mate[u] == NONE && self.mate[v] == NONE {
                self.mate[u] = v;
                self.mate[v] = u;
            }
        }
        for root in 0..n {
            if self.mate[root] != NONE {
                continue;
            }
            if let Some(end) = self.find_path(root) {
                let mut v = end;
                while v != NONE {
                    let pv = self.parent[v];
                    let next = self.mate[pv];
                    self.mate[v] = pv;
                    self.mate[pv] = v;
                    v = next;
                }
            }
        }
        Matching::from_mates(self.mate)
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut on_path = vec![false; self.g.vertex_count()];
        loop {
            a = self.base[a];
            on_path[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if on_path[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.g.vertex_count();
        self.used.fill(false);
        self.parent.fill(NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in self.g.neighbors(v) {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.fill(false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }
}

/// Gallai–Edmonds partition of the vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeDecomposition {
    /// Vertices missed by some maximum matching.
    pub d: Vec<usize>,
    /// `N(D) \ D`.
    pub a: Vec<usize>,
    /// Everything else.
    pub c: Vec<usize>,
    /// Connected components of `G[D]`, as sorted vertex lists.
    pub d_components: Vec<Vec<usize>>,
    /// Number of D-components with at least three vertices.
    pub c_ge3: usize,
    pub matching_size: usize,
}

fn matching_without(g: &Graph, removed: usize) -> usize {
    let keep: Vec<usize> = (0..g.vertex_count()).filter(|&v| v != removed).collect();
    max_matching(&g.induced(&keep).0).size()
}

/// True when deleting any single vertex leaves a perfect matching.
pub fn is_factor_critical(g: &Graph) -> bool {
    let n = g.vertex_count();
    n % 2 == 1 && (0..n).all(|v| matching_without(g, v) == (n - 1) / 2)
}

/// Computes `D = {v : ν(G − v) = ν(G)}` by one matching run per vertex, then
/// `A` and `C`, and checks the structural guarantees of the decomposition.
pub fn gallai_edmonds(g: &Graph) -> GeDecomposition {
    let n = g.vertex_count();
    let nu = max_matching(g).size();
    let in_d: Vec<bool> = (0..n).map(|v| matching_without(g, v) == nu).collect();
    let d: Vec<usize> = (0..n).filter(|&v| in_d[v]).collect();
    let a: Vec<usize> = (0..n)
        .filter(|&v| !in_d[v] && g.neighbors(v).iter().any(|&w| in_d[w]))
        .collect();
    let c: Vec<usize> = (0..n).filter(|&v| !in_d[v] && a.binary_search(&v).is_err()).collect();

    let (gd, map) = g.induced(&d);
    let d_components: Vec<Vec<usize>> = gd
        .components()
        .into_iter()
        .map(|comp| comp.into_iter().map(|i| map[i]).collect())
        .collect();
    let c_ge3 = d_components.iter().filter(|comp| comp.len() >= 3).count();

    for comp in &d_components {
        assert!(
            is_factor_critical(&g.induced(comp).0),
            "D-component {comp:?} is not factor-critical"
        );
    }
    assert_eq!(
        2 * max_matching(&g.induced(&c).0).size(),
        c.len(),
        "G[C] has no perfect matching"
    );

    GeDecomposition { d, a, c, d_components, c_ge3, matching_size: nu }
}

/// Both endpoints of a greedy maximal matching, scanning edges in canonical
/// order. Covers every edge with at most twice the optimum.
pub fn vc_2approx(g: &Graph) -> Vec<usize> {
    let mut taken = vec![false; g.vertex_count()];
    for &(u, v) in g.edges() {
        if !taken[u] && !taken[v] {
            taken[u] = true;
            taken[v] = true;
        }
    }
    (0..g.vertex_count()).filter(|&v| taken[v]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn matching_examples() {
        assert_eq!(max_matching(&complete(3)).size(), 1);
        assert_eq!(max_matching(&cycle(4)).size(), 2);
        let m = max_matching(&petersen());
        assert_eq!(m.size(), 5);
        assert!(m.is_valid_in(&petersen()));
    }

    #[test]
    fn blossom_needed() {
        // a 5-cycle with a pendant on a cycle vertex and another hanging off it
        let g = Graph::new(7, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (2, 6)]).unwrap();
        assert_eq!(max_matching(&g).size(), 3);
    }

    #[test]
    fn ge_examples() {
        let ge = gallai_edmonds(&complete(3));
        assert_eq!((ge.d.len(), ge.a.len(), ge.c.len(), ge.c_ge3), (3, 0, 0, 1));

        let ge = gallai_edmonds(&cycle(4));
        assert_eq!((ge.d.len(), ge.a.len(), ge.c.len(), ge.c_ge3), (0, 0, 4, 0));

        let ge = gallai_edmonds(&path(2));
        assert_eq!(ge.d, vec![0, 2]);
        assert_eq!(ge.a, vec![1]);
        assert!(ge.c.is_empty());
        assert_eq!(ge.c_ge3, 0);
    }

    #[test]
    fn vertex_cover_examples() {
        assert_eq!(vc_2approx(&path(1)), vec![0, 1]);
        assert_eq!(vc_2approx(&complete(3)).len(), 2);
        let g = cycle(4);
        let x = vc_2approx(&g);
        assert!(x.len() <= 4);
        assert!(g.edges().iter().all(|&(u, v)| x.contains(&u) || x.contains(&v)));
    }
}
