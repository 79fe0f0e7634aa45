//! Simple undirected unit-edge graphs and the structural transforms used on them.

use std::collections::{HashMap, VecDeque};

use crate::error::{CoverError, Result};

/// Marker for vertex pairs in different components.
pub const UNREACHABLE: u32 = u32::MAX;

/// A simple undirected graph whose edges all have unit length.
///
/// Edges are stored once as `(u, v)` with `u < v`, sorted. The all-pairs hop
/// distance matrix is computed on construction.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
    edge_ids: HashMap<(usize, usize), usize>,
    dist: Vec<Vec<u32>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph on vertices `0..n`. Loops, duplicates (in either
    /// orientation) and out-of-range endpoints are rejected; the error names
    /// the index of the offending pair.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self> {
        let mut edges = Vec::with_capacity(edge_list.len());
        let mut seen = HashMap::with_capacity(edge_list.len());
        for (i, &(a, b)) in edge_list.iter().enumerate() {
            if a >= n || b >= n {
                return Err(CoverError::InvalidGraph(format!(
                    "edge #{i} ({a},{b}) references a vertex outside 0..{n}"
                )));
            }
            if a == b {
                return Err(CoverError::InvalidGraph(format!("edge #{i} is a loop at {a}")));
            }
            let key = (a.min(b), a.max(b));
            if let Some(first) = seen.insert(key, i) {
                return Err(CoverError::InvalidGraph(format!(
                    "edge #{i} ({a},{b}) duplicates edge #{first}"
                )));
            }
            edges.push(key);
        }
        edges.sort_unstable();
        let mut adjacency = vec![Vec::new(); n];
        let mut edge_ids = HashMap::with_capacity(edges.len());
        for (id, &(u, v)) in edges.iter().enumerate() {
            adjacency[u].push(v);
            adjacency[v].push(u);
            edge_ids.insert((u, v), id);
        }
        for nbrs in &mut adjacency {
            nbrs.sort_unstable();
        }
        let dist = all_pairs_bfs(n, &adjacency);
        Ok(Graph { n, edges, adjacency, edge_ids, dist })
    }

    /// Builds a graph whose vertex count is one more than the largest id used.
    pub fn from_edges(edge_list: &[(usize, usize)]) -> Result<Self> {
        let n = edge_list.iter().map(|&(a, b)| a.max(b) + 1).max().unwrap_or(0);
        Graph::new(n, edge_list)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Edge id of `{a, b}` in either orientation.
    pub fn edge_id(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_ids.get(&(a.min(b), a.max(b))).copied()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_id(a, b).is_some()
    }

    /// Hop distance, or `None` across components.
    pub fn vertex_dist(&self, a: usize, b: usize) -> Option<u32> {
        match self.dist[a][b] {
            UNREACHABLE => None,
            d => Some(d),
        }
    }

    pub(crate) fn raw_dist(&self, a: usize, b: usize) -> u32 {
        self.dist[a][b]
    }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members: Vec<usize> = (0..self.n)
                .filter(|&v| self.dist[s][v] != UNREACHABLE)
                .collect();
            members.sort_unstable();
            for &v in &members {
                comp[v] = id;
            }
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.dist[0].iter().all(|&d| d != UNREACHABLE)
    }

    /// True when every component is a tree.
    pub fn is_forest(&self) -> bool {
        self.edges.len() + self.components().len() == self.n
    }

    /// Subgraph induced by `vertices`, renumbered in the given order. The
    /// returned vector maps new ids back to old ones.
    pub fn induced(&self, vertices: &[usize]) -> (Graph, Vec<usize>) {
        let mut new_id = HashMap::with_capacity(vertices.len());
        for (i, &v) in vertices.iter().enumerate() {
            new_id.insert(v, i);
        }
        let edges: Vec<(usize, usize)> = self
            .edges
            .iter()
            .filter_map(|&(u, v)| Some((*new_id.get(&u)?, *new_id.get(&v)?)))
            .collect();
        let g = Graph::new(vertices.len(), &edges).expect("induced subgraph of a simple graph");
        (g, vertices.to_vec())
    }

    /// Subgraph formed by a set of edge ids and their endpoints.
    pub fn edge_induced(&self, edge_ids: &[usize]) -> (Graph, Vec<usize>) {
        let mut verts: Vec<usize> = edge_ids
            .iter()
            .flat_map(|&e| {
                let (u, v) = self.edges[e];
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let pos: HashMap<usize, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edges: Vec<(usize, usize)> = edge_ids
            .iter()
            .map(|&e| {
                let (u, v) = self.edges[e];
                (pos[&u], pos[&v])
            })
            .collect();
        let g = Graph::new(verts.len(), &edges).expect("edge-induced subgraph of a simple graph");
        (g, verts)
    }

    /// Average degree `2|E| / |V|` as an exact fraction.
    pub fn average_degree(&self) -> crate::rational::Rational {
        if self.n == 0 {
            return crate::rational::Rational::zero();
        }
        crate::rational::Rational::new(2 * self.edges.len() as i64, self.n as i64)
    }
}

fn all_pairs_bfs(n: usize, adjacency: &[Vec<usize>]) -> Vec<Vec<u32>> {
    let mut dist = vec![vec![UNREACHABLE; n]; n];
    let mut queue = VecDeque::new();
    for (s, row) in dist.iter_mut().enumerate() {
        row[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = row[u];
            for &w in &adjacency[u] {
                if row[w] == UNREACHABLE {
                    row[w] = du + 1;
                    queue.push_back(w);
                }
            }
        }
    }
    dist
}

/// The `x`-subdivision of a graph together with the position bijection.
///
/// Original vertices keep their ids. The interior vertex at offset `j`
/// (`1 <= j < x`) of original edge `e = (u, v)` is `n + e*(x-1) + j - 1`,
/// counting offsets from the lesser endpoint `u`.
#[derive(Clone, Debug)]
pub struct Subdivision {
    pub graph: Graph,
    pub factor: usize,
    pub original_vertices: usize,
    /// For every original edge, the vertex sequence of its path from `u` to `v`.
    pub paths: Vec<Vec<usize>>,
    edge_origin: Vec<(usize, usize)>,
}

impl Subdivision {
    /// Original edge and offset for a vertex of the subdivided graph, or
    /// `None` for an original vertex.
    pub fn locate_vertex(&self, w: usize) -> Option<(usize, usize)> {
        if w < self.original_vertices {
            return None;
        }
        let k = self.factor - 1;
        let rel = w - self.original_vertices;
        Some((rel / k, rel % k + 1))
    }

    /// Original edge and the offset of the endpoint nearer the original
    /// lesser vertex, for an edge `{a, b}` of the subdivided graph.
    pub fn locate_edge(&self, a: usize, b: usize) -> (usize, usize) {
        let id = self.graph.edge_id(a, b).expect("edge of the subdivided graph");
        self.edge_origin[id]
    }
}

/// Replaces every edge by a path of `x` unit edges.
pub fn subdivide(g: &Graph, x: usize) -> Result<Subdivision> {
    if x == 0 {
        return Err(CoverError::InvalidGraph("subdivision factor must be at least 1".into()));
    }
    let n = g.vertex_count();
    let k = x - 1;
    let total = n + k * g.edge_count();
    let mut edges = Vec::with_capacity(x * g.edge_count());
    let mut paths = Vec::with_capacity(g.edge_count());
    for (e, &(u, v)) in g.edges().iter().enumerate() {
        let mut path = Vec::with_capacity(x + 1);
        path.push(u);
        for j in 1..x {
            path.push(n + e * k + j - 1);
        }
        path.push(v);
        for w in path.windows(2) {
            edges.push((w[0], w[1]));
        }
        paths.push(path);
    }
    let graph = Graph::new(total, &edges)?;
    let mut edge_origin = vec![(0, 0); graph.edge_count()];
    for (e, path) in paths.iter().enumerate() {
        for (j, w) in path.windows(2).enumerate() {
            edge_origin[graph.edge_id(w[0], w[1]).unwrap()] = (e, j);
        }
    }
    Ok(Subdivision { graph, factor: x, original_vertices: n, paths, edge_origin })
}

/// The wreath product `G wr K2`: vertex `(v, c)` has id `2v + c`.
pub fn wreath_k2(g: &Graph) -> Graph {
    let n = g.vertex_count();
    let mut edges = Vec::with_capacity(4 * g.edge_count() + n);
    for v in 0..n {
        edges.push((2 * v, 2 * v + 1));
    }
    for &(u, v) in g.edges() {
        for cu in 0..2 {
            for cv in 0..2 {
                edges.push((2 * u + cu, 2 * v + cv));
            }
        }
    }
    Graph::new(2 * n, &edges).expect("wreath product is simple")
}

/// Convenience constructors for small named graphs.
pub mod named {
    use super::Graph;

    pub fn path(edges: usize) -> Graph {
        let list: Vec<_> = (0..edges).map(|i| (i, i + 1)).collect();
        Graph::new(edges + 1, &list).unwrap()
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let list: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &list).unwrap()
    }

    pub fn complete(n: usize) -> Graph {
        let mut list = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                list.push((a, b));
            }
        }
        Graph::new(n, &list).unwrap()
    }

    /// `K_{1,k}` with center 0.
    pub fn star(k: usize) -> Graph {
        let list: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::new(k + 1, &list).unwrap()
    }

    pub fn petersen() -> Graph {
        let mut list = Vec::new();
        for i in 0..5 {
            list.push((i, (i + 1) % 5));
            list.push((i, i + 5));
            list.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::new(10, &list).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::named::*;
    use super::*;

    #[test]
    fn single_edge() {
        let g = Graph::from_edges(&[(0, 1)]).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.vertex_dist(0, 1), Some(1));
    }

    #[test]
    fn triangle_distances() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 0)]).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(g.vertex_dist(a, b), Some(u32::from(a != b)));
            }
        }
        assert_eq!(g.edges(), &[(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn four_cycle_opposite_distance() {
        let g = Graph::from_edges(&[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(g.vertex_dist(0, 2), Some(2));
        assert_eq!(g.vertex_dist(1, 3), Some(2));
        assert_eq!(g.vertex_dist(3, 3), Some(0));
    }

    #[test]
    fn rejects_bad_edges() {
        let loop_err = Graph::new(3, &[(0, 1), (2, 2)]).unwrap_err().to_string();
        assert!(loop_err.contains("edge #1"), "{loop_err}");
        let dup = Graph::new(3, &[(0, 1), (1, 0)]).unwrap_err().to_string();
        assert!(dup.contains("duplicates edge #0"), "{dup}");
        let range = Graph::new(2, &[(0, 2)]).unwrap_err().to_string();
        assert!(range.contains("outside"), "{range}");
    }

    #[test]
    fn disconnected_distance() {
        let g = Graph::new(4, &[(0, 1), (2, 3)]).unwrap();
        assert_eq!(g.vertex_dist(0, 3), None);
        assert_eq!(g.components(), vec![vec![0, 1], vec![2, 3]]);
        assert!(g.is_forest());
        assert!(!g.is_connected());
    }

    #[test]
    fn subdivision_sizes() {
        let k2 = path(1);
        let s = subdivide(&k2, 3).unwrap();
        assert_eq!(s.graph.vertex_count(), 4);
        assert_eq!(s.graph.edge_count(), 3);

        let k3 = complete(3);
        let s = subdivide(&k3, 2).unwrap();
        assert_eq!(s.graph.vertex_count(), 6);
        assert!(s.graph.neighbors_all_degree(2));

        let c4 = cycle(4);
        let s = subdivide(&c4, 3).unwrap();
        assert_eq!(s.graph.vertex_count(), 12);
        assert_eq!(s.graph.edge_count(), 12);
        assert!(s.graph.is_connected());
        assert!(s.graph.neighbors_all_degree(2));
    }

    #[test]
    fn subdivision_locations() {
        let s = subdivide(&cycle(4), 3).unwrap();
        for (e, path) in s.paths.iter().enumerate() {
            for (j, &w) in path.iter().enumerate() {
                if j > 0 && j < 3 {
                    assert_eq!(s.locate_vertex(w), Some((e, j)));
                }
            }
            for j in 0..3 {
                assert_eq!(s.locate_edge(path[j], path[j + 1]), (e, j));
                assert_eq!(s.locate_edge(path[j + 1], path[j]), (e, j));
            }
        }
    }

    #[test]
    fn wreath_products() {
        let k4 = wreath_k2(&path(1));
        assert_eq!(k4.vertex_count(), 4);
        assert_eq!(k4.edge_count(), 6);
        let single = wreath_k2(&Graph::new(1, &[]).unwrap());
        assert_eq!(single.vertex_count(), 2);
        assert_eq!(single.edge_count(), 1);
        let c4 = wreath_k2(&cycle(4));
        assert_eq!(c4.vertex_count(), 8);
        assert_eq!(c4.edge_count(), 20);
    }

    impl Graph {
        fn neighbors_all_degree(&self, d: usize) -> bool {
            (0..self.vertex_count()).all(|v| self.degree(v) == d)
        }
    }
}
