//! Instance families with known or constructed cover sizes.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CoverError, Result};
use crate::graph::{wreath_k2, Graph};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    TrianglesCenter,
    TrianglesPaths,
    StarSubdivision,
    DsReduction,
    UgcGadget,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::TrianglesCenter => "triangles_center",
            Family::TrianglesPaths => "triangles_paths",
            Family::StarSubdivision => "star_subdivision",
            Family::DsReduction => "ds_reduction",
            Family::UgcGadget => "ugc_gadget",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "triangles_center" => Ok(Family::TrianglesCenter),
            "triangles_paths" => Ok(Family::TrianglesPaths),
            "star_subdivision" => Ok(Family::StarSubdivision),
            "ds_reduction" => Ok(Family::DsReduction),
            "ugc_gadget" => Ok(Family::UgcGadget),
            other => Err(CoverError::Parse { line: 0, message: format!("unknown family {other:?}") }),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ValueLabel {
    /// Minimum cover size.
    Optimal,
    /// Size of an explicit cover; an upper bound on the optimum.
    ConstructedUpper,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownValue {
    pub delta: Rational,
    pub label: ValueLabel,
    pub size: usize,
    pub provenance: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyInstance {
    #[serde(skip)]
    pub graph: Graph,
    pub family: Family,
    pub params: FamilyParams,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub known_values: Vec<KnownValue>,
    /// Free-form remarks, e.g. the source graph of a reduction.
    pub notes: Vec<String>,
}

impl FamilyInstance {
    fn new(graph: Graph, family: Family, params: FamilyParams) -> Self {
        FamilyInstance {
            vertex_count: graph.vertex_count(),
            edge_count: graph.edge_count(),
            graph,
            family,
            params,
            known_values: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn known(mut self, delta: Rational, label: ValueLabel, size: usize, provenance: &str) -> Self {
        self.known_values.push(KnownValue { delta, label, size, provenance: provenance.to_string() });
        self
    }

    pub fn known_value(&self, delta: &Rational) -> Option<&KnownValue> {
        self.known_values.iter().find(|kv| kv.delta == *delta)
    }
}

/// Incremental edge-list builder; vertices are numbered in creation order.
#[derive(Default)]
struct Builder {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Builder {
    fn from_graph(g: &Graph) -> Self {
        Builder { n: g.vertex_count(), edges: g.edges().to_vec() }
    }

    fn vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.edges.push((a, b));
    }

    /// Appends a path of `len` new edges starting at `from`; returns its end.
    fn path_from(&mut self, from: usize, len: usize) -> usize {
        let mut last = from;
        for _ in 0..len {
            let next = self.vertex();
            self.edge(last, next);
            last = next;
        }
        last
    }

    /// Adds a new triangle; returns its three corners.
    fn triangle(&mut self) -> [usize; 3] {
        let t = [self.vertex(), self.vertex(), self.vertex()];
        self.edge(t[0], t[1]);
        self.edge(t[1], t[2]);
        self.edge(t[0], t[2]);
        t
    }

    fn build(self) -> Graph {
        Graph::new(self.n, &self.edges).expect("generator emits a simple graph")
    }
}

fn r(a: i64, b: i64) -> Rational {
    Rational::new(a, b)
}

fn invalid(message: String) -> CoverError {
    CoverError::InvalidGraph(message)
}

/// `k` triangles, one corner of each joined to a center vertex (id 0).
pub fn gen_triangles_center(k: usize) -> Result<FamilyInstance> {
    if k < 3 {
        return Err(invalid(format!("triangles_center needs k >= 3, got {k}")));
    }
    Ok(triangles_with_connectors(k, 1, ConnectorVariant::OnePerTriangle, Family::TrianglesCenter))
}

/// How triangles are tied to the center vertex in [`gen_triangles_paths`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectorVariant {
    /// Every triangle corner gets its own connector path.
    EachCorner,
    /// One corner per triangle is connected.
    OnePerTriangle,
}

impl FromStr for ConnectorVariant {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "each_corner" => Ok(ConnectorVariant::EachCorner),
            "one_per_triangle" => Ok(ConnectorVariant::OnePerTriangle),
            other => Err(CoverError::Parse { line: 0, message: format!("unknown connector variant {other:?}") }),
        }
    }
}

fn triangles_with_connectors(k: usize, path_len: usize, variant: ConnectorVariant, family: Family) -> FamilyInstance {
    let mut b = Builder::default();
    let center = b.vertex();
    for _ in 0..k {
        let t = b.triangle();
        let corners: &[usize] = match variant {
            ConnectorVariant::EachCorner => &t,
            ConnectorVariant::OnePerTriangle => &t[..1],
        };
        for &corner in corners {
            let end = b.path_from(corner, path_len - 1);
            b.edge(end, center);
        }
    }
    let params = FamilyParams {
        k: Some(k),
        ell: (family == Family::TrianglesPaths).then_some(path_len),
        variant: (family == Family::TrianglesPaths).then(|| {
            match variant {
                ConnectorVariant::EachCorner => "each_corner",
                ConnectorVariant::OnePerTriangle => "one_per_triangle",
            }
            .to_string()
        }),
        ..FamilyParams::default()
    };
    let inst = FamilyInstance::new(b.build(), family, params);
    match (path_len, variant) {
        (1, ConnectorVariant::OnePerTriangle) => inst
            .known(
                r(5, 4),
                ValueLabel::Optimal,
                k + 1,
                "center vertex plus the midpoint of each edge opposite the attached corner",
            )
            .known(r(1, 1), ValueLabel::Optimal, 2 * k, "a single point cannot 1-cover a triangle"),
        (3, ConnectorVariant::EachCorner) => inst
            .known(
                r(7, 6),
                ValueLabel::Optimal,
                3 * k + 1,
                "center vertex plus, per corner, the point at distance δ - 1/2 on its connector",
            )
            .known(r(1, 1), ValueLabel::Optimal, 5 * k, "five points per triangle with its connectors"),
        (3, ConnectorVariant::OnePerTriangle) => {
            let mut inst = inst;
            inst.notes.push(
                "exact solver gives opt(9/8) = 2k+1 and opt(1) = 3k for k = 3, 4; not recorded as known values".into(),
            );
            inst
        }
        _ => inst,
    }
}

/// Triangles tied to a center by connector paths of `path_len` edges.
pub fn gen_triangles_paths(k: usize, path_len: usize, variant: ConnectorVariant) -> Result<FamilyInstance> {
    if k < 3 {
        return Err(invalid(format!("triangles_paths needs k >= 3, got {k}")));
    }
    if path_len != 1 && path_len != 3 {
        return Err(invalid(format!("triangles_paths supports connector length 1 or 3, got {path_len}")));
    }
    Ok(triangles_with_connectors(k, path_len, variant, Family::TrianglesPaths))
}

/// The star `K_{1,k}` with every edge replaced by a path of `x + 1` edges.
/// The center is vertex 0.
pub fn gen_star_subdivision(x: usize, k: usize) -> Result<FamilyInstance> {
    if x < 2 || k < 1 {
        return Err(invalid(format!("star_subdivision needs x >= 2 and k >= 1, got x={x}, k={k}")));
    }
    let mut b = Builder::default();
    let center = b.vertex();
    for _ in 0..k {
        b.path_from(center, x + 1);
    }
    let params = FamilyParams { k: Some(k), x: Some(x), ..FamilyParams::default() };
    let xi = x as i64;
    let mut inst = FamilyInstance::new(b.build(), Family::StarSubdivision, params).known(
        r(xi + 1, 2 * xi + 1),
        ValueLabel::ConstructedUpper,
        1 + k * x,
        "center plus the points at distance 2δi from it on every arm",
    );
    let formula = x * (k + 1) + 1;
    if formula != inst.vertex_count {
        inst.notes.push(format!(
            "built vertex count {} differs from the closed form x(k+1)+1 = {formula}",
            inst.vertex_count
        ));
    }
    Ok(inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DsVariant {
    /// A path of `ell - 1` edges hanging off every vertex.
    Path,
    /// A path of `ell - 2` edges ending in a triangle at every vertex.
    PathTriangle,
    /// `G wr K2`.
    Wreath,
}

impl fmt::Display for DsVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DsVariant::Path => "path",
            DsVariant::PathTriangle => "path_triangle",
            DsVariant::Wreath => "wreath",
        })
    }
}

impl FromStr for DsVariant {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(DsVariant::Path),
            "path_triangle" => Ok(DsVariant::PathTriangle),
            "wreath" => Ok(DsVariant::Wreath),
            other => Err(CoverError::Parse { line: 0, message: format!("unknown reduction variant {other:?}") }),
        }
    }
}

/// Smallest vertex set meeting every closed neighborhood, by enumeration.
/// `None` above 20 vertices.
pub fn domination_number(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    if n > 20 {
        return None;
    }
    let closed: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(1u32 << v, |m, &w| m | 1 << w))
        .collect();
    (0u32..1 << n)
        .filter(|&set| closed.iter().all(|&nb| nb & set != 0))
        .map(|set| set.count_ones() as usize)
        .min()
}

/// Smallest vertex cover, by enumeration. `None` above 20 vertices.
pub fn vertex_cover_number(g: &Graph) -> Option<usize> {
    let n = g.vertex_count();
    if n > 20 {
        return None;
    }
    (0u32..1 << n)
        .filter(|&set| g.edges().iter().all(|&(u, v)| set >> u & 1 == 1 || set >> v & 1 == 1))
        .map(|set| set.count_ones() as usize)
        .min()
}

/// Graph of a Dominating Set reduction applied to `g`. When `g` is small the
/// domination number is recorded as the optimum at the range the reduction
/// targets.
pub fn gen_ds_reduction(g: &Graph, ell: usize, variant: DsVariant) -> Result<FamilyInstance> {
    if variant != DsVariant::Wreath && ell < 2 {
        return Err(invalid(format!("path reductions need ell >= 2, got {ell}")));
    }
    let n = g.vertex_count();
    let (graph, delta) = match variant {
        DsVariant::Path => {
            let mut b = Builder::from_graph(g);
            for v in 0..n {
                b.path_from(v, ell - 1);
            }
            (b.build(), Rational::from_integer(ell as i64))
        }
        DsVariant::PathTriangle => {
            let mut b = Builder::from_graph(g);
            for v in 0..n {
                let end = b.path_from(v, ell - 2);
                let (p, q) = (b.vertex(), b.vertex());
                b.edge(end, p);
                b.edge(end, q);
                b.edge(p, q);
            }
            (b.build(), r(2 * ell as i64 + 1, 2))
        }
        DsVariant::Wreath => (wreath_k2(g), r(3, 2)),
    };
    let params = FamilyParams {
        ell: (variant != DsVariant::Wreath).then_some(ell),
        variant: Some(variant.to_string()),
        ..FamilyParams::default()
    };
    let mut inst = FamilyInstance::new(graph, Family::DsReduction, params);
    inst.notes.push(format!("source graph: n={n}, edges={:?}", g.edges()));
    if g.is_connected() && n >= 2 {
        if let Some(gamma) = domination_number(g) {
            inst = inst.known(delta, ValueLabel::Optimal, gamma, "equals the domination number of the source graph");
        }
    }
    Ok(inst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UgcVariant {
    /// Path `u1..ux` hanging off every vertex.
    A,
    /// As `A`, with every path end joined to one shared apex.
    B,
    /// As `A`, with a triangle closed at every path end.
    C,
}

impl FromStr for UgcVariant {
    type Err = CoverError;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a" => Ok(UgcVariant::A),
            "b" => Ok(UgcVariant::B),
            "c" => Ok(UgcVariant::C),
            other => Err(CoverError::Parse { line: 0, message: format!("unknown gadget variant {other:?}") }),
        }
    }
}

/// Vertex Cover gadget attached to every vertex of `g`.
pub fn gen_ugc_gadget(g: &Graph, x: usize, variant: UgcVariant) -> Result<FamilyInstance> {
    if x < 1 {
        return Err(invalid("gadget needs x >= 1".into()));
    }
    let n = g.vertex_count();
    let mut b = Builder::from_graph(g);
    let ends: Vec<usize> = (0..n).map(|v| b.path_from(v, x)).collect();
    match variant {
        UgcVariant::A => {}
        UgcVariant::B => {
            let apex = b.vertex();
            for &end in &ends {
                b.edge(end, apex);
            }
        }
        UgcVariant::C => {
            for &end in &ends {
                let (p, q) = (b.vertex(), b.vertex());
                b.edge(end, p);
                b.edge(end, q);
                b.edge(p, q);
            }
        }
    }
    let params = FamilyParams {
        x: Some(x),
        variant: Some(format!("{variant:?}").to_lowercase()),
        ..FamilyParams::default()
    };
    let mut inst = FamilyInstance::new(b.build(), Family::UgcGadget, params);
    if variant == UgcVariant::A {
        if let Some(vc) = vertex_cover_number(g) {
            let xi = x as i64;
            inst = inst.known(
                r(xi + 1, 2 * xi + 1),
                ValueLabel::Optimal,
                x * n + vc,
                "x points per attached path plus a minimum vertex cover of the source graph",
            );
        }
    }
    Ok(inst)
}
