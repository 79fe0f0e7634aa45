#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use deltacover::{Graph, Point, Rational};
use proptest::prelude::*;

pub fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

/// Connected graph on `2..=max_n` vertices: a random spanning tree plus a
/// random subset of the remaining pairs.
pub fn connected_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        let parents: Vec<_> = (1..n).map(|i| 0..i).collect();
        let extra = proptest::collection::vec(proptest::bool::weighted(0.3), n * (n - 1) / 2);
        (Just(n), parents, extra)
    })
    .prop_map(|(n, parents, extra)| {
        let mut edges = BTreeSet::new();
        for (i, p) in parents.into_iter().enumerate() {
            edges.insert((p, i + 1));
        }
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                if extra[k] {
                    edges.insert((u, v));
                }
                k += 1;
            }
        }
        Graph::new(n, &edges.into_iter().collect::<Vec<_>>()).unwrap()
    })
}

pub fn tree(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n)
        .prop_flat_map(|n| (1..n).map(|i| 0..i).collect::<Vec<_>>())
        .prop_map(|parents| {
            let edges: Vec<(usize, usize)> = parents.into_iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            Graph::new(edges.len() + 1, &edges).unwrap()
        })
}

/// Any graph on `1..=max_n` vertices.
pub fn any_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(n, bits)| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        edges.push((u, v));
                    }
                    k += 1;
                }
            }
            Graph::new(n, &edges).unwrap()
        })
}

/// Points on `g` with positions of denominator at most 6.
pub fn points_on(g: &Graph, count: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Point>> {
    let edges = g.edges().to_vec();
    let n = g.vertex_count();
    proptest::collection::vec((0..edges.len().max(1), 1i64..=6, 0i64..=6, 0..n), count).prop_map(
        move |raw| {
            raw.into_iter()
                .map(|(e, den, num, w)| {
                    if edges.is_empty() {
                        Point::Vertex(w)
                    } else {
                        let (u, v) = edges[e];
                        Point::on_edge(u, v, r(num.min(den), den))
                    }
                })
                .collect()
        },
    )
}

/// Distance oracle by brute force: every edge is cut into `scale` pieces and
/// points become grid vertices, then BFS. Points must sit on the grid.
pub struct FineGrid {
    scale: i64,
    adj: Vec<Vec<usize>>,
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl FineGrid {
    pub fn new(g: &Graph, scale: i64) -> Self {
        let n = g.vertex_count();
        let k = (scale - 1) as usize;
        let total = n + g.edge_count() * k;
        let mut adj = vec![Vec::new(); total];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let mut prev = u;
            for j in 0..k {
                let w = n + e * k + j;
                adj[prev].push(w);
                adj[w].push(prev);
                prev = w;
            }
            adj[prev].push(v);
            adj[v].push(prev);
        }
        FineGrid { scale, adj, n, edges: g.edges().to_vec() }
    }

    pub fn node(&self, p: &Point) -> usize {
        match p {
            Point::Vertex(w) => *w,
            Point::Interior { u, v, lambda } => {
                let e = self.edges.iter().position(|&ed| ed == (*u, *v)).expect("edge");
                let steps = (lambda.clone() * Rational::from_integer(self.scale)).numer_i64().unwrap();
                assert!(lambda.clone() * Rational::from_integer(self.scale) == Rational::from_integer(steps), "off grid");
                self.n + e * (self.scale as usize - 1) + steps as usize - 1
            }
        }
    }

    pub fn bfs(&self, from: usize) -> Vec<Option<u64>> {
        let mut dist = vec![None; self.adj.len()];
        dist[from] = Some(0);
        let mut q = VecDeque::from([from]);
        while let Some(x) = q.pop_front() {
            let d = dist[x].unwrap();
            for &y in &self.adj[x] {
                if dist[y].is_none() {
                    dist[y] = Some(d + 1);
                    q.push_back(y);
                }
            }
        }
        dist
    }

    pub fn distance(&self, p: &Point, q: &Point) -> Option<Rational> {
        self.bfs(self.node(p))[self.node(q)].map(|d| r(d as i64, self.scale))
    }
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &(a, b) in edges {
            let y = if a == x { b } else if b == x { a } else { continue };
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// All connected graphs on `n` vertices up to isomorphism, by canonical
/// (minimum over relabelings) edge bitmasks.
pub fn connected_graphs(n: usize) -> Vec<Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let index = |u: usize, v: usize| pairs.iter().position(|&p| p == (u.min(v), u.max(v))).unwrap();
    let perms = permutations(n);
    let images: Vec<Vec<usize>> =
        perms.iter().map(|p| pairs.iter().map(|&(u, v)| index(p[u], p[v])).collect()).collect();
    let mut canon = BTreeSet::new();
    for mask in 0u32..1 << pairs.len() {
        let edges: Vec<(usize, usize)> =
            (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
        if n > 1 && !is_connected(n, &edges) {
            continue;
        }
        let best = images
            .iter()
            .map(|img| (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).fold(0u32, |m, i| m | 1 << img[i]))
            .min()
            .unwrap();
        canon.insert(best);
    }
    canon
        .into_iter()
        .map(|mask| {
            let edges: Vec<(usize, usize)> =
                (0..pairs.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pairs[i]).collect();
            Graph::new(n, &edges).unwrap()
        })
        .collect()
}

/// Smallest vertex cover by enumeration.
pub fn brute_vertex_cover(g: &Graph) -> usize {
    let n = g.vertex_count();
    (0u32..1 << n)
        .filter(|&s| g.edges().iter().all(|&(u, v)| s >> u & 1 == 1 || s >> v & 1 == 1))
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

/// Largest matching by enumeration over edge subsets.
pub fn brute_matching(g: &Graph) -> usize {
    fn go(edges: &[(usize, usize)], used: u32) -> usize {
        match edges.split_first() {
            None => 0,
            Some((&(u, v), rest)) => {
                let skip = go(rest, used);
                if used >> u & 1 == 0 && used >> v & 1 == 0 {
                    skip.max(1 + go(rest, used | 1 << u | 1 << v))
                } else {
                    skip
                }
            }
        }
    }
    go(g.edges(), 0)
}
