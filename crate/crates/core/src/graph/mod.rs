//! Simple undirected graphs with stable vertex identities.
//!
//! Vertex ids are never reused: deleting a vertex retires its id, and
//! [`Graph::split_vertex`] mints fresh ids above every id seen so far. This
//! keeps rule traces replayable and lets solutions be mapped back onto the
//! original input.

mod io;

pub use io::{parse_graph, write_edge_list, GraphFormat, ParseError};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(VertexId),
    #[error("vertex {0} is not in the graph")]
    MissingVertex(VertexId),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
    #[error("contract violation: {0}")]
    Contract(String),
}

/// An undirected edge stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[VertexId; 2]", try_from = "[VertexId; 2]")]
pub struct Edge {
    lo: VertexId,
    hi: VertexId,
}

impl Edge {
    /// Panics on `u == v`; use [`Edge::try_new`] for untrusted input.
    pub fn new(u: VertexId, v: VertexId) -> Self {
        Self::try_new(u, v).expect("edge endpoints must differ")
    }

    pub fn try_new(u: VertexId, v: VertexId) -> Result<Self, GraphError> {
        match u.cmp(&v) {
            std::cmp::Ordering::Less => Ok(Edge { lo: u, hi: v }),
            std::cmp::Ordering::Greater => Ok(Edge { lo: v, hi: u }),
            std::cmp::Ordering::Equal => Err(GraphError::SelfLoop(u)),
        }
    }

    pub fn lo(self) -> VertexId {
        self.lo
    }

    pub fn hi(self) -> VertexId {
        self.hi
    }

    pub fn endpoints(self) -> [VertexId; 2] {
        [self.lo, self.hi]
    }

    pub fn contains(self, v: VertexId) -> bool {
        self.lo == v || self.hi == v
    }

    /// The endpoint that is not `v`. `v` must be an endpoint.
    pub fn other(self, v: VertexId) -> VertexId {
        debug_assert!(self.contains(v));
        if self.lo == v {
            self.hi
        } else {
            self.lo
        }
    }
}

impl From<Edge> for [VertexId; 2] {
    fn from(e: Edge) -> Self {
        e.endpoints()
    }
}

impl TryFrom<[VertexId; 2]> for Edge {
    type Error = GraphError;

    fn try_from([u, v]: [VertexId; 2]) -> Result<Self, Self::Error> {
        Edge::try_new(u, v)
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Three distinct vertices in increasing order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "[VertexId; 3]", try_from = "[VertexId; 3]")]
pub struct Triangle([VertexId; 3]);

impl Triangle {
    pub fn new(a: VertexId, b: VertexId, c: VertexId) -> Self {
        Self::try_new(a, b, c).expect("triangle vertices must be distinct")
    }

    pub fn try_new(a: VertexId, b: VertexId, c: VertexId) -> Result<Self, GraphError> {
        let mut vs = [a, b, c];
        vs.sort_unstable();
        if vs[0] == vs[1] || vs[1] == vs[2] {
            return Err(GraphError::Contract(format!(
                "triangle needs three distinct vertices, got {a},{b},{c}"
            )));
        }
        Ok(Triangle(vs))
    }

    /// The triangle formed by `e` and the vertex `apex`.
    pub fn from_edge(e: Edge, apex: VertexId) -> Self {
        Triangle::new(e.lo, e.hi, apex)
    }

    pub fn vertices(self) -> [VertexId; 3] {
        self.0
    }

    pub fn edges(self) -> [Edge; 3] {
        let [a, b, c] = self.0;
        [Edge { lo: a, hi: b }, Edge { lo: a, hi: c }, Edge { lo: b, hi: c }]
    }

    pub fn contains_vertex(self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn contains_edge(self, e: Edge) -> bool {
        self.contains_vertex(e.lo) && self.contains_vertex(e.hi)
    }

    /// The vertex of the triangle not on `e`. `e` must be an edge of the triangle.
    pub fn apex(self, e: Edge) -> VertexId {
        debug_assert!(self.contains_edge(e));
        *self
            .0
            .iter()
            .find(|&&v| !e.contains(v))
            .expect("edge belongs to triangle")
    }

    /// Number of shared vertices.
    pub fn shared_vertices(self, other: Triangle) -> usize {
        self.0.iter().filter(|v| other.contains_vertex(**v)).count()
    }
}

impl From<Triangle> for [VertexId; 3] {
    fn from(t: Triangle) -> Self {
        t.0
    }
}

impl TryFrom<[VertexId; 3]> for Triangle {
    type Error = GraphError;

    fn try_from([a, b, c]: [VertexId; 3]) -> Result<Self, Self::Error> {
        Triangle::try_new(a, b, c)
    }
}

impl fmt::Display for Triangle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.0;
        write!(f, "{a}-{b}-{c}")
    }
}

/// Which of the two dual problems an instance asks about.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemVariant {
    /// Are there at least `k` edge-disjoint triangles?
    Etp,
    /// Can at most `k` edge deletions destroy every triangle?
    Etc,
}

impl fmt::Display for ProblemVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProblemVariant::Etp => f.write_str("etp"),
            ProblemVariant::Etc => f.write_str("etc"),
        }
    }
}

/// A graph together with the parameter. `k` may go negative while rules
/// decrement it; the terminal rule interprets that.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Instance {
    pub graph: Graph,
    pub k: i64,
    pub variant: ProblemVariant,
}

impl Instance {
    pub fn new(graph: Graph, k: i64, variant: ProblemVariant) -> Self {
        Instance { graph, k, variant }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
    edge_count: usize,
    next_id: VertexId,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list; duplicate edges collapse.
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Complete graph on `0..n`.
    pub fn complete(n: VertexId) -> Self {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("distinct endpoints");
            }
        }
        g
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.edge_count
    }

    pub fn has_no_edges(&self) -> bool {
        self.edge_count == 0
    }

    /// Smallest id that has never been used by this graph.
    pub fn next_id(&self) -> VertexId {
        self.next_id
    }

    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        self.next_id = self.next_id.max(v + 1);
        let fresh = !self.adj.contains_key(&v);
        self.adj.entry(v).or_default();
        fresh
    }

    /// Adds `uv`, creating missing endpoints. Returns whether the edge is new.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        let e = Edge::try_new(u, v)?;
        self.add_vertex(u);
        self.add_vertex(v);
        let fresh = self.adj.get_mut(&e.lo).expect("added").insert(e.hi);
        if fresh {
            self.adj.get_mut(&e.hi).expect("added").insert(e.lo);
            self.edge_count += 1;
        }
        Ok(fresh)
    }

    pub fn remove_edge(&mut self, e: Edge) -> bool {
        let removed = self
            .adj
            .get_mut(&e.lo)
            .map(|ns| ns.remove(&e.hi))
            .unwrap_or(false);
        if removed {
            self.adj.get_mut(&e.hi).expect("symmetric").remove(&e.lo);
            self.edge_count -= 1;
        }
        removed
    }

    /// Removes `v` and its incident edges, returning the removed edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Vec<Edge> {
        let Some(ns) = self.adj.remove(&v) else {
            return Vec::new();
        };
        let mut removed = Vec::with_capacity(ns.len());
        for u in ns {
            self.adj.get_mut(&u).expect("symmetric").remove(&v);
            removed.push(Edge::new(u, v));
        }
        self.edge_count -= removed.len();
        removed.sort_unstable();
        removed
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, e: Edge) -> bool {
        self.adj.get(&e.lo).is_some_and(|ns| ns.contains(&e.hi))
    }

    pub fn adjacent(&self, u: VertexId, v: VertexId) -> bool {
        u != v && self.adj.get(&u).is_some_and(|ns| ns.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    /// Neighbors of `v` in increasing order; empty for unknown vertices.
    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|ns| ns.iter().copied())
    }

    pub fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    /// All edges in canonical lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj.iter().flat_map(|(&u, ns)| {
            ns.range(u + 1..).map(move |&v| Edge { lo: u, hi: v })
        })
    }

    pub fn incident_edges(&self, v: VertexId) -> impl Iterator<Item = Edge> + '_ {
        self.neighbors(v).map(move |u| Edge::new(u, v))
    }

    /// Common neighbors of `u` and `v` in increasing order.
    pub fn common_neighbors(&self, u: VertexId, v: VertexId) -> Vec<VertexId> {
        match (self.adj.get(&u), self.adj.get(&v)) {
            (Some(a), Some(b)) => {
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                small.iter().copied().filter(|w| large.contains(w)).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Every triangle exactly once, in lexicographic order.
    ///
    /// Each triangle is discovered from its lowest-ranked vertex under the
    /// (degree, id) order, intersecting the forward neighborhoods.
    pub fn triangles(&self) -> Vec<Triangle> {
        let rank = |v: VertexId| (self.degree(v), v);
        let forward: BTreeMap<VertexId, BTreeSet<VertexId>> = self
            .adj
            .iter()
            .map(|(&u, ns)| {
                let fw = ns.iter().copied().filter(|&w| rank(w) > rank(u)).collect();
                (u, fw)
            })
            .collect();
        let mut out = Vec::new();
        for (&u, fu) in &forward {
            for &v in fu {
                let fv = &forward[&v];
                let (small, large) = if fu.len() <= fv.len() { (fu, fv) } else { (fv, fu) };
                for &w in small {
                    if large.contains(&w) {
                        out.push(Triangle::new(u, v, w));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// Triangles containing `e`, ordered by apex.
    pub fn triangles_through_edge(&self, e: Edge) -> Vec<Triangle> {
        self.common_neighbors(e.lo, e.hi)
            .into_iter()
            .map(|w| Triangle::from_edge(e, w))
            .collect()
    }

    pub fn in_some_triangle(&self, e: Edge) -> bool {
        match (self.adj.get(&e.lo), self.adj.get(&e.hi)) {
            (Some(a), Some(b)) => {
                let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
                small.iter().any(|w| large.contains(w))
            }
            _ => false,
        }
    }

    pub fn is_triangle(&self, t: Triangle) -> bool {
        t.edges().iter().all(|&e| self.has_edge(e))
    }

    /// Whether `v` spans `e`, i.e. `v` together with `e` forms a triangle.
    pub fn spans(&self, v: VertexId, e: Edge) -> Result<bool, GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::MissingVertex(v));
        }
        if !self.has_edge(e) {
            return Err(GraphError::MissingEdge(e));
        }
        if e.contains(v) {
            return Err(GraphError::Contract(format!(
                "vertex {v} is an endpoint of {e}"
            )));
        }
        Ok(self.adjacent(v, e.lo) && self.adjacent(v, e.hi))
    }

    /// Edges spanned by `v`: edges between two neighbors of `v`.
    pub fn spanned_edges(&self, v: VertexId) -> Vec<Edge> {
        let Some(ns) = self.adj.get(&v) else {
            return Vec::new();
        };
        let mut out = Vec::new();
        for &a in ns {
            for b in self.adj[&a].range(a + 1..) {
                if ns.contains(b) {
                    out.push(Edge { lo: a, hi: *b });
                }
            }
        }
        out
    }

    /// Replaces `v` by two fresh vertices: the first takes the edges in
    /// `part_one`, the second those in `part_two`. The two parts must
    /// partition the edges incident to `v` and both be nonempty.
    pub fn split_vertex(
        &mut self,
        v: VertexId,
        part_one: &[Edge],
        part_two: &[Edge],
    ) -> Result<(VertexId, VertexId), GraphError> {
        if !self.has_vertex(v) {
            return Err(GraphError::MissingVertex(v));
        }
        if part_one.is_empty() || part_two.is_empty() {
            return Err(GraphError::Contract(format!(
                "split of {v} needs two nonempty parts"
            )));
        }
        let one: BTreeSet<Edge> = part_one.iter().copied().collect();
        let two: BTreeSet<Edge> = part_two.iter().copied().collect();
        if one.len() != part_one.len() || two.len() != part_two.len() || !one.is_disjoint(&two) {
            return Err(GraphError::Contract(format!(
                "split parts of {v} overlap"
            )));
        }
        let incident: BTreeSet<Edge> = self.incident_edges(v).collect();
        let union: BTreeSet<Edge> = one.union(&two).copied().collect();
        if union != incident {
            return Err(GraphError::Contract(format!(
                "split parts of {v} do not partition its incident edges"
            )));
        }

        let first = self.next_id;
        let second = self.next_id + 1;
        self.remove_vertex(v);
        self.add_vertex(first);
        self.add_vertex(second);
        for e in &one {
            self.add_edge(first, e.other(v))?;
        }
        for e in &two {
            self.add_edge(second, e.other(v))?;
        }
        Ok((first, second))
    }

    /// Relabels vertices to `0..n` in id order; returns the graph and the
    /// old id of each new index.
    pub fn compacted(&self) -> (Graph, Vec<VertexId>) {
        let order: Vec<VertexId> = self.vertices().collect();
        let index: BTreeMap<VertexId, VertexId> = order
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i as VertexId))
            .collect();
        let mut g = Graph::new();
        for i in 0..order.len() {
            g.add_vertex(i as VertexId);
        }
        for e in self.edges() {
            g.add_edge(index[&e.lo], index[&e.hi]).expect("distinct");
        }
        (g, order)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::from_edges([(1, 2), (2, 3), (1, 3)]).unwrap()
    }

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(edges).unwrap()
    }

    fn brute_triangles(g: &Graph) -> Vec<Triangle> {
        let vs: Vec<_> = g.vertices().collect();
        let mut out = Vec::new();
        for (i, &a) in vs.iter().enumerate() {
            for (j, &b) in vs.iter().enumerate().skip(i + 1) {
                for &c in vs.iter().skip(j + 1) {
                    if g.adjacent(a, b) && g.adjacent(a, c) && g.adjacent(b, c) {
                        out.push(Triangle::new(a, b, c));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn triangle_samples() {
        assert_eq!(k3().triangles(), vec![Triangle::new(1, 2, 3)]);
        assert_eq!(Graph::complete(4).triangles().len(), 4);
        assert_eq!(petersen().m(), 15);
        assert!(petersen().triangles().is_empty());
    }

    #[test]
    fn spans_definition() {
        let g = k3();
        assert_eq!(g.spans(1, Edge::new(2, 3)), Ok(true));
        let path = Graph::from_edges([(1, 2), (2, 3)]).unwrap();
        assert_eq!(path.spans(1, Edge::new(2, 3)), Ok(false));
        let k4 = Graph::complete(4);
        assert_eq!(k4.spans(3, Edge::new(0, 1)), Ok(true));
        assert!(matches!(
            g.spans(2, Edge::new(2, 3)),
            Err(GraphError::Contract(_))
        ));
    }

    #[test]
    fn triangles_through_edge_samples() {
        let k4 = Graph::complete(4);
        assert_eq!(
            k4.triangles_through_edge(Edge::new(0, 1)),
            vec![Triangle::new(0, 1, 2), Triangle::new(0, 1, 3)]
        );
        let c5 = Graph::from_edges((0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        for e in c5.edges() {
            assert!(c5.triangles_through_edge(e).is_empty());
        }
        assert_eq!(
            k3().triangles_through_edge(Edge::new(1, 2)),
            vec![Triangle::new(1, 2, 3)]
        );
    }

    #[test]
    fn split_bowtie_into_two_triangles() {
        // v=0 shared by triangles 0-1-2 and 0-3-4.
        let mut g = Graph::from_edges([(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]).unwrap();
        let (a, b) = g
            .split_vertex(0, &[Edge::new(0, 1), Edge::new(0, 2)], &[Edge::new(0, 3), Edge::new(0, 4)])
            .unwrap();
        assert_eq!((a, b), (5, 6));
        assert_eq!(g.n(), 6);
        assert_eq!(g.m(), 6);
        assert_eq!(
            g.triangles(),
            vec![Triangle::new(1, 2, 5), Triangle::new(3, 4, 6)]
        );
    }

    #[test]
    fn split_inside_a_triangle_keeps_edge_count() {
        let mut g = k3();
        let (a, b) = g
            .split_vertex(3, &[Edge::new(1, 3)], &[Edge::new(2, 3)])
            .unwrap();
        assert_eq!(g.m(), 3);
        assert!(g.adjacent(1, a) && g.adjacent(2, b) && g.adjacent(1, 2));
        assert!(g.triangles().is_empty());
    }

    #[test]
    fn split_contract_violations() {
        let mut g = k3();
        let before = g.clone();
        assert!(matches!(
            g.split_vertex(3, &[], &[Edge::new(1, 3), Edge::new(2, 3)]),
            Err(GraphError::Contract(_))
        ));
        assert!(matches!(
            g.split_vertex(3, &[Edge::new(1, 3)], &[Edge::new(1, 3)]),
            Err(GraphError::Contract(_))
        ));
        assert!(matches!(
            g.split_vertex(3, &[Edge::new(1, 3)], &[Edge::new(1, 2)]),
            Err(GraphError::Contract(_))
        ));
        assert_eq!(g, before);
    }

    #[test]
    fn ids_are_not_reused() {
        let mut g = k3();
        g.remove_vertex(3);
        assert_eq!(g.next_id(), 4);
        g.add_edge(1, 9).unwrap();
        assert_eq!(g.next_id(), 10);
    }

    #[test]
    fn spanned_edges_match_spans() {
        let g = Graph::complete(5);
        for v in g.vertices() {
            let spanned = g.spanned_edges(v);
            let expected: Vec<_> = g
                .edges()
                .filter(|e| !e.contains(v) && g.spans(v, *e).unwrap())
                .collect();
            assert_eq!(spanned, expected);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        pub(super) fn arb_graph(max_n: u32) -> impl Strategy<Value = Graph> {
            (2..=max_n).prop_flat_map(|n| {
                proptest::collection::vec((0..n, 0..n), 0..(n as usize * 4)).prop_map(move |pairs| {
                    let mut g = Graph::new();
                    for v in 0..n {
                        g.add_vertex(v);
                    }
                    for (u, v) in pairs {
                        if u != v {
                            g.add_edge(u, v).unwrap();
                        }
                    }
                    g
                })
            })
        }

        proptest! {
            #[test]
            fn enumeration_matches_brute_force(g in arb_graph(30)) {
                prop_assert_eq!(g.triangles(), brute_triangles(&g));
            }

            #[test]
            fn spans_iff_triangle_listed(g in arb_graph(12)) {
                let tris: BTreeSet<_> = g.triangles().into_iter().collect();
                for v in g.vertices() {
                    for e in g.edges().filter(|e| !e.contains(v)) {
                        let t = Triangle::from_edge(e, v);
                        prop_assert_eq!(g.spans(v, e).unwrap(), tris.contains(&t));
                    }
                }
            }

            #[test]
            fn adjacency_is_symmetric(g in arb_graph(20)) {
                let mut count = 0;
                for v in g.vertices() {
                    for u in g.neighbors(v) {
                        prop_assert!(g.adjacent(u, v));
                        count += 1;
                    }
                }
                prop_assert_eq!(count, 2 * g.m());
                prop_assert_eq!(g.edges().count(), g.m());
            }

            #[test]
            fn triangle_preserving_split_is_bijective(g in arb_graph(12), pick in 0usize..12) {
                let vs: Vec<_> = g.vertices().collect();
                let v = vs[pick % vs.len()];
                // Split along the connected components of the neighborhood so
                // that no triangle mixes the two parts.
                let ns: Vec<_> = g.neighbors(v).collect();
                prop_assume!(ns.len() >= 2);
                let mut comp = vec![ns[0]];
                let mut stack = vec![ns[0]];
                while let Some(x) = stack.pop() {
                    for &y in &ns {
                        if !comp.contains(&y) && g.adjacent(x, y) {
                            comp.push(y);
                            stack.push(y);
                        }
                    }
                }
                prop_assume!(comp.len() < ns.len());
                let (one, two): (Vec<_>, Vec<_>) =
                    g.incident_edges(v).partition(|e| comp.contains(&e.other(v)));
                let mut h = g.clone();
                let (a, b) = h.split_vertex(v, &one, &two).unwrap();
                prop_assert_eq!(h.m(), g.m());
                prop_assert_eq!(h.n(), g.n() + 1);
                let back: BTreeSet<_> = h
                    .triangles()
                    .into_iter()
                    .map(|t| {
                        let [x, y, z] = t.vertices().map(|u| if u == a || u == b { v } else { u });
                        Triangle::new(x, y, z)
                    })
                    .collect();
                let orig: BTreeSet<_> = g.triangles().into_iter().collect();
                prop_assert_eq!(back, orig);
            }
        }
    }
}
