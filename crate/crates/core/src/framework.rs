//! Framework data model: graph, point configuration, validation and
//! degree-of-freedom bookkeeping.
//!
//! Vertex indices are 0-based in memory. Everything that reaches a user
//! (display strings, serialized reports, framework files) is 1-based.

use std::fmt;

use nalgebra::DMatrix;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrixlab::kernel::{numerical_rank, RankRule};

/// An unordered bar `{a, b}`, stored with `a < b` once validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Self {
        if a <= b {
            Edge { a, b }
        } else {
            Edge { a: b, b: a }
        }
    }

    /// Builds an edge from 1-based indices as they appear in files.
    pub fn one_based(a: usize, b: usize) -> Self {
        Edge::new(a.wrapping_sub(1), b.wrapping_sub(1))
    }

    pub fn other(&self, v: usize) -> Option<usize> {
        if v == self.a {
            Some(self.b)
        } else if v == self.b {
            Some(self.a)
        } else {
            None
        }
    }

    pub fn contains(&self, v: usize) -> bool {
        self.a == v || self.b == v
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{{{},{}}}",
            self.a.wrapping_add(1),
            self.b.wrapping_add(1)
        )
    }
}

impl Serialize for Edge {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.a + 1, self.b + 1].serialize(s)
    }
}

/// A coordinate slot `(vertex, axis)`; its column in the rigidity matrix is
/// `vertex * d + axis`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dof {
    pub vertex: usize,
    pub axis: usize,
}

impl Dof {
    pub fn from_index(index: usize, d: usize) -> Self {
        Dof {
            vertex: index / d,
            axis: index % d,
        }
    }

    pub fn index(&self, d: usize) -> usize {
        self.vertex * d + self.axis
    }
}

const AXES: [&str; 3] = ["x", "y", "z"];

impl fmt::Display for Dof {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match AXES.get(self.axis) {
            Some(name) => write!(f, "({},{})", self.vertex + 1, name),
            None => write!(f, "({},{})", self.vertex + 1, self.axis + 1),
        }
    }
}

impl Serialize for Dof {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.vertex + 1, self.axis + 1].serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph without checking it; see [`validate_framework`].
    pub fn new(n: usize, edges: Vec<Edge>) -> Self {
        Graph { n, edges }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// The same vertex set with the listed edges removed, order preserved.
    pub fn without_edges(&self, dropped: &[usize]) -> Graph {
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(i, _)| !dropped.contains(i))
            .map(|(_, e)| *e)
            .collect();
        Graph { n: self.n, edges }
    }
}

/// `n` points in `R^d`, stored flat so that slot `i*d + k` is `(p_i)_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    d: usize,
    coords: Vec<f64>,
}

impl Configuration {
    pub fn from_points(d: usize, points: &[Vec<f64>]) -> Result<Self> {
        let mut coords = Vec::with_capacity(points.len() * d);
        for (vertex, p) in points.iter().enumerate() {
            if p.len() != d {
                return Err(Error::RaggedPoints {
                    vertex: vertex + 1,
                    got: p.len(),
                    expected: d,
                });
            }
            coords.extend_from_slice(p);
        }
        Ok(Configuration { d, coords })
    }

    /// Wraps a flat coordinate vector. Panics if its length is not a multiple of `d`.
    pub fn from_flat(d: usize, coords: Vec<f64>) -> Self {
        assert!(
            d > 0 && coords.len().is_multiple_of(d),
            "flat coordinates do not divide into d={d}"
        );
        Configuration { d, coords }
    }

    pub fn dimension(&self) -> usize {
        self.d
    }

    pub fn point_count(&self) -> usize {
        self.coords.len().checked_div(self.d).unwrap_or(0)
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.d..(i + 1) * self.d]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        self.coords
            .chunks(self.d.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    /// Diameter of the axis-aligned bounding box; 1 for a single point.
    pub fn scale(&self) -> f64 {
        let n = self.point_count();
        if n == 0 {
            return 1.0;
        }
        let mut sq = 0.0;
        for k in 0..self.d {
            let (lo, hi) = (0..n)
                .map(|i| self.coords[i * self.d + k])
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| {
                    (lo.min(x), hi.max(x))
                });
            sq += (hi - lo) * (hi - lo);
        }
        if sq > 0.0 {
            sq.sqrt()
        } else {
            1.0
        }
    }

    /// Uniformly rescaled copy.
    pub fn scaled(&self, factor: f64) -> Configuration {
        Configuration {
            d: self.d,
            coords: self.coords.iter().map(|x| x * factor).collect(),
        }
    }

    /// Dimension of the affine span, using the same rank rule as kernels.
    pub fn affine_span(&self) -> usize {
        let n = self.point_count();
        if n <= 1 || self.d == 0 {
            return 0;
        }
        let centered = DMatrix::from_fn(n - 1, self.d, |r, k| {
            self.coords[(r + 1) * self.d + k] - self.coords[k]
        });
        numerical_rank(&centered, RankRule::Standard)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Framework {
    pub graph: Graph,
    pub config: Configuration,
}

impl Framework {
    pub fn new(graph: Graph, config: Configuration) -> Self {
        Framework { graph, config }
    }

    pub fn dimension(&self) -> usize {
        self.config.dimension()
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// Total number of coordinates, `n·d`.
    pub fn coordinate_count(&self) -> usize {
        self.graph.vertex_count() * self.config.dimension()
    }

    pub fn with_config(&self, config: Configuration) -> Framework {
        Framework {
            graph: self.graph.clone(),
            config,
        }
    }

    /// Errors with every violation when the framework is not valid.
    pub fn ensure_valid(&self) -> Result<()> {
        let violations = validate_framework(self);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidFramework(violations))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    DimensionZero,
    TooFewVertices {
        n: usize,
    },
    SelfLoop {
        vertex: usize,
    },
    VertexOutOfRange {
        edge: usize,
        vertex: usize,
        n: usize,
    },
    DuplicateEdge {
        a: usize,
        b: usize,
    },
    PointCountMismatch {
        vertices: usize,
        points: usize,
    },
    TooFewPoints {
        n: usize,
        d: usize,
    },
    NonFiniteCoordinate {
        vertex: usize,
    },
    SpanDeficient {
        span: usize,
        d: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionZero => write!(f, "dimension must be at least 1"),
            Violation::TooFewVertices { n } => write!(f, "graph has {n} vertices, need at least 2"),
            Violation::SelfLoop { vertex } => write!(f, "self-loop at vertex {vertex}"),
            Violation::VertexOutOfRange { edge, vertex, n } => {
                write!(f, "edge {edge} references vertex {vertex} outside 1..={n}")
            }
            Violation::DuplicateEdge { a, b } => write!(f, "duplicate edge {{{a},{b}}}"),
            Violation::PointCountMismatch { vertices, points } => {
                write!(
                    f,
                    "graph has {vertices} vertices but {points} points were given"
                )
            }
            Violation::TooFewPoints { n, d } => {
                write!(
                    f,
                    "{n} points cannot span dimension {d}, need at least {}",
                    d + 1
                )
            }
            Violation::NonFiniteCoordinate { vertex } => {
                write!(f, "vertex {vertex} has a non-finite coordinate")
            }
            Violation::SpanDeficient { span, d } => write!(f, "affine span dimension {span} < {d}"),
        }
    }
}

/// Every invariant violation of the framework; empty iff valid.
///
/// Indices inside violations are 1-based.
pub fn validate_framework(f: &Framework) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = f.graph.vertex_count();
    let d = f.config.dimension();
    if d == 0 {
        out.push(Violation::DimensionZero);
    }
    if n < 2 {
        out.push(Violation::TooFewVertices { n });
    }

    let mut seen = std::collections::HashSet::new();
    for (idx, e) in f.graph.edges().iter().enumerate() {
        let mut in_range = true;
        for v in [e.a, e.b] {
            if v >= n {
                in_range = false;
                out.push(Violation::VertexOutOfRange {
                    edge: idx + 1,
                    vertex: v.wrapping_add(1),
                    n,
                });
            }
        }
        if e.a == e.b {
            out.push(Violation::SelfLoop {
                vertex: e.a.wrapping_add(1),
            });
        } else if in_range && !seen.insert(Edge::new(e.a, e.b)) {
            out.push(Violation::DuplicateEdge {
                a: e.a + 1,
                b: e.b + 1,
            });
        }
    }

    if d == 0 {
        return out;
    }
    let points = f.config.point_count();
    if points != n {
        out.push(Violation::PointCountMismatch {
            vertices: n,
            points,
        });
    }
    if points < d + 1 {
        out.push(Violation::TooFewPoints { n: points, d });
    }
    let mut finite = true;
    for i in 0..points {
        if f.config.point(i).iter().any(|x| !x.is_finite()) {
            finite = false;
            out.push(Violation::NonFiniteCoordinate { vertex: i + 1 });
        }
    }
    if finite && points >= 1 {
        let span = f.config.affine_span();
        if span < d {
            out.push(Violation::SpanDeficient { span, d });
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DofClass {
    Isostatic,
    Hyperstatic(usize),
    Hypostatic(usize),
}

impl fmt::Display for DofClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DofClass::Isostatic => write!(f, "isostatic"),
            DofClass::Hyperstatic(k) => write!(f, "hyperstatic({k})"),
            DofClass::Hypostatic(k) => write!(f, "hypostatic({k})"),
        }
    }
}

impl Serialize for DofClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DofProfile {
    /// Edge count.
    pub m: usize,
    /// Total coordinate count `n·d`.
    pub nd: usize,
    /// Dimension of the trivial motions, `binom(d+1, 2)`.
    pub trivial: usize,
    pub class: DofClass,
}

impl DofProfile {
    /// `nd − D`, the number of unpinned coordinates.
    pub fn free(&self) -> usize {
        self.nd - self.trivial
    }
}

/// `binom(d+1, 2)`: `d` translations plus `d(d−1)/2` rotations.
pub fn trivial_dimension(d: usize) -> usize {
    d * (d + 1) / 2
}

pub fn dof_profile(f: &Framework) -> DofProfile {
    let d = f.dimension();
    let m = f.graph.edge_count();
    let nd = f.coordinate_count();
    let trivial = trivial_dimension(d);
    let free = nd.saturating_sub(trivial);
    let class = match m.cmp(&free) {
        std::cmp::Ordering::Equal => DofClass::Isostatic,
        std::cmp::Ordering::Greater => DofClass::Hyperstatic(m - free),
        std::cmp::Ordering::Less => DofClass::Hypostatic(free - m),
    };
    DofProfile {
        m,
        nd,
        trivial,
        class,
    }
}

/// `N(i)` for every vertex, each list sorted ascending (0-based).
pub fn neighbor_sets(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); g.vertex_count()];
    for e in g.edges() {
        out[e.a].push(e.b);
        out[e.b].push(e.a);
    }
    for list in &mut out {
        list.sort_unstable();
        list.dedup();
    }
    out
}
