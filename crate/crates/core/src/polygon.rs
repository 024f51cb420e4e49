//! Triangulations of a convex n-gon with vertices labelled `1..=n` in cyclic
//! order, diagonal flips, and the flip graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap on `n` for flip-graph enumeration (Catalan(10) = 16796 states).
pub const DEFAULT_FLIP_GRAPH_BOUND: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("a polygon needs at least 3 vertices, got {0}")]
    TooSmall(usize),
    #[error("vertex {vertex} is outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("edge endpoints must be distinct, got {0}-{0}")]
    Degenerate(usize),
    #[error("{0} is not a diagonal of the polygon")]
    NotADiagonal(Edge),
    #[error("{0} is not a diagonal of this triangulation")]
    NotInTriangulation(Edge),
    #[error("diagonals {0} and {1} cross")]
    Crossing(Edge, Edge),
    #[error("expected {expected} diagonals, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("flip graph for n = {n} exceeds the enumeration bound {bound}")]
    AboveBound { n: usize, bound: usize },
}

/// An unordered pair of distinct vertices, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[usize; 2]", try_from = "[usize; 2]")]
pub struct Edge {
    lo: usize,
    hi: usize,
}

impl Edge {
    pub fn new(a: usize, b: usize) -> Result<Self, PolygonError> {
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Ok(Edge { lo: a, hi: b }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: b, hi: a }),
            std::cmp::Ordering::Equal => Err(PolygonError::Degenerate(a)),
        }
    }

    /// Panicking constructor for literals known to be valid.
    pub fn of(a: usize, b: usize) -> Self {
        Self::new(a, b).expect("distinct endpoints")
    }

    pub fn lo(&self) -> usize {
        self.lo
    }

    pub fn hi(&self) -> usize {
        self.hi
    }

    pub fn is_boundary(&self, n: usize) -> bool {
        self.hi - self.lo == 1 || (self.lo == 1 && self.hi == n)
    }

    /// Strict interleaving of endpoints around the polygon.
    pub fn crosses(&self, other: &Edge) -> bool {
        let (a, b, c, d) = (self.lo, self.hi, other.lo, other.hi);
        (a < c && c < b && b < d) || (c < a && a < d && d < b)
    }

    pub fn contains(&self, v: usize) -> bool {
        self.lo == v || self.hi == v
    }
}

impl From<Edge> for [usize; 2] {
    fn from(e: Edge) -> Self {
        [e.lo, e.hi]
    }
}

impl TryFrom<[usize; 2]> for Edge {
    type Error = PolygonError;
    fn try_from(v: [usize; 2]) -> Result<Self, Self::Error> {
        Edge::new(v[0], v[1])
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// A maximal set of pairwise non-crossing diagonals of a convex n-gon.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "TriangulationRepr", into = "TriangulationRepr")]
pub struct Triangulation {
    n: usize,
    diagonals: BTreeSet<Edge>,
}

#[derive(Serialize, Deserialize)]
struct TriangulationRepr {
    n: usize,
    diagonals: Vec<Edge>,
}

impl TryFrom<TriangulationRepr> for Triangulation {
    type Error = PolygonError;
    fn try_from(r: TriangulationRepr) -> Result<Self, Self::Error> {
        Triangulation::new(r.n, r.diagonals)
    }
}

impl From<Triangulation> for TriangulationRepr {
    fn from(t: Triangulation) -> Self {
        TriangulationRepr { n: t.n, diagonals: t.diagonals.into_iter().collect() }
    }
}

impl Triangulation {
    pub fn new(n: usize, diagonals: impl IntoIterator<Item = Edge>) -> Result<Self, PolygonError> {
        if n < 3 {
            return Err(PolygonError::TooSmall(n));
        }
        let diagonals: BTreeSet<Edge> = diagonals.into_iter().collect();
        for d in &diagonals {
            if d.hi > n || d.lo < 1 {
                let vertex = if d.hi > n { d.hi } else { d.lo };
                return Err(PolygonError::VertexOutOfRange { vertex, n });
            }
            if d.is_boundary(n) {
                return Err(PolygonError::NotADiagonal(*d));
            }
        }
        if diagonals.len() != n - 3 {
            return Err(PolygonError::WrongCount { expected: n - 3, got: diagonals.len() });
        }
        for (i, a) in diagonals.iter().enumerate() {
            for b in diagonals.iter().skip(i + 1) {
                if a.crosses(b) {
                    return Err(PolygonError::Crossing(*a, *b));
                }
            }
        }
        Ok(Triangulation { n, diagonals })
    }

    /// All diagonals incident to `apex`.
    pub fn fan(n: usize, apex: usize) -> Result<Self, PolygonError> {
        if n < 3 {
            return Err(PolygonError::TooSmall(n));
        }
        if apex < 1 || apex > n {
            return Err(PolygonError::VertexOutOfRange { vertex: apex, n });
        }
        let diagonals = (1..=n)
            .filter(|&v| v != apex)
            .map(|v| Edge::of(apex, v))
            .filter(|e| !e.is_boundary(n));
        Ok(Triangulation { n, diagonals: diagonals.collect() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn diagonals(&self) -> &BTreeSet<Edge> {
        &self.diagonals
    }

    pub fn boundary_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (1..=self.n).map(move |i| Edge::of(i, i % self.n + 1))
    }

    /// Boundary edges followed by diagonals, in edge order.
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.boundary_edges().chain(self.diagonals.iter().copied()).collect()
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        e.hi <= self.n && (e.is_boundary(self.n) || self.diagonals.contains(e))
    }

    fn has(&self, a: usize, b: usize) -> bool {
        a != b && self.has_edge(&Edge::of(a, b))
    }

    /// The quadrilateral formed by the two triangles adjacent to diagonal
    /// `d`, as sorted vertices `(p, q, r, s)`.
    pub fn quad_of(&self, d: &Edge) -> Result<[usize; 4], PolygonError> {
        if !self.diagonals.contains(d) {
            return Err(PolygonError::NotInTriangulation(*d));
        }
        let (p, r) = (d.lo, d.hi);
        let inner = (p + 1..r)
            .find(|&w| self.has(p, w) && self.has(w, r))
            .expect("a triangle on the inner side");
        let outer = (1..p)
            .chain(r + 1..=self.n)
            .find(|&w| self.has(p, w) && self.has(w, r))
            .expect("a triangle on the outer side");
        let mut quad = [p, inner, r, outer];
        quad.sort_unstable();
        Ok(quad)
    }

    /// Replaces `d` by the other diagonal of its quadrilateral.
    pub fn flip(&self, d: &Edge) -> Result<(Triangulation, Edge), PolygonError> {
        let [p, q, r, s] = self.quad_of(d)?;
        let other = if *d == Edge::of(p, r) { Edge::of(q, s) } else { Edge::of(p, r) };
        let mut diagonals = self.diagonals.clone();
        diagonals.remove(d);
        diagonals.insert(other);
        Ok((Triangulation { n: self.n, diagonals }, other))
    }

    /// For a sorted quadruple `p<q<r<s` whose sides are all edges and which
    /// contains one of its diagonals, returns `(present, other)`.
    pub fn quad_flip(&self, quad: [usize; 4]) -> Option<(Edge, Edge)> {
        let [p, q, r, s] = quad;
        if s > self.n || !(p < q && q < r && r < s) || p < 1 {
            return None;
        }
        let sides = [(p, q), (q, r), (r, s), (p, s)];
        if !sides.iter().all(|&(a, b)| self.has(a, b)) {
            return None;
        }
        let (pr, qs) = (Edge::of(p, r), Edge::of(q, s));
        match (self.diagonals.contains(&pr), self.diagonals.contains(&qs)) {
            (true, false) => Some((pr, qs)),
            (false, true) => Some((qs, pr)),
            _ => None,
        }
    }

    /// Triangles as sorted vertex triples, in lexicographic order.
    pub fn triangles(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        let mut out = Vec::with_capacity(n - 2);
        for i in 1..=n {
            for j in i + 1..=n {
                if !self.has(i, j) {
                    continue;
                }
                for k in j + 1..=n {
                    if self.has(j, k) && self.has(i, k) {
                        out.push([i, j, k]);
                    }
                }
            }
        }
        out
    }

    /// Compact key such as `1-3,1-4`.
    pub fn key(&self) -> String {
        self.diagonals.iter().map(Edge::to_string).collect::<Vec<_>>().join(",")
    }
}

/// Triangulations of an n-gon connected by single flips.
#[derive(Debug, Clone)]
pub struct FlipGraph {
    n: usize,
    vertices: Vec<Triangulation>,
    adjacency: Vec<Vec<usize>>,
}

#[derive(Serialize)]
struct FlipGraphVertexJson<'a> {
    diagonals: Vec<Edge>,
    key: String,
    neighbors: &'a [usize],
}

#[derive(Serialize)]
struct FlipGraphJson<'a> {
    n: usize,
    vertices: Vec<FlipGraphVertexJson<'a>>,
}

impl FlipGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vertices sorted by diagonal set.
    pub fn vertices(&self) -> &[Triangulation] {
        &self.vertices
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn order(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn index_of(&self, t: &Triangulation) -> Option<usize> {
        self.vertices.binary_search(t).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return true;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for &w in &self.adjacency[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn to_dot(&self) -> String {
        let mut out = format!("graph flipgraph_{} {{\n", self.n);
        for t in &self.vertices {
            out.push_str(&format!("  \"{}\";\n", t.key()));
        }
        for (i, nbrs) in self.adjacency.iter().enumerate() {
            for &j in nbrs.iter().filter(|&&j| j > i) {
                out.push_str(&format!("  \"{}\" -- \"{}\";\n", self.vertices[i].key(), self.vertices[j].key()));
            }
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let vertices = self
            .vertices
            .iter()
            .zip(&self.adjacency)
            .map(|(t, nbrs)| FlipGraphVertexJson {
                diagonals: t.diagonals.iter().copied().collect(),
                key: t.key(),
                neighbors: nbrs,
            })
            .collect();
        serde_json::to_value(FlipGraphJson { n: self.n, vertices }).expect("serializable")
    }
}

/// Enumerates the flip graph by breadth-first search from the apex-1 fan.
pub fn flip_graph(n: usize) -> Result<FlipGraph, PolygonError> {
    flip_graph_bounded(n, DEFAULT_FLIP_GRAPH_BOUND)
}

pub fn flip_graph_bounded(n: usize, bound: usize) -> Result<FlipGraph, PolygonError> {
    if n > bound {
        return Err(PolygonError::AboveBound { n, bound });
    }
    let start = Triangulation::fan(n, 1)?;
    let mut seen: BTreeMap<Triangulation, Vec<Triangulation>> = BTreeMap::new();
    let mut queue = VecDeque::from([start]);
    while let Some(t) = queue.pop_front() {
        if seen.contains_key(&t) {
            continue;
        }
        let nbrs: Vec<Triangulation> = t
            .diagonals
            .iter()
            .map(|d| t.flip(d).expect("diagonal of t").0)
            .collect();
        for u in &nbrs {
            if !seen.contains_key(u) {
                queue.push_back(u.clone());
            }
        }
        seen.insert(t, nbrs);
    }
    let vertices: Vec<Triangulation> = seen.keys().cloned().collect();
    let adjacency = seen
        .values()
        .map(|nbrs| {
            let mut idx: Vec<usize> = nbrs
                .iter()
                .map(|u| vertices.binary_search(u).expect("enumerated"))
                .collect();
            idx.sort_unstable();
            idx
        })
        .collect();
    Ok(FlipGraph { n, vertices, adjacency })
}
