//! The working edge-disjoint triangle packing and the structures derived
//! from it: free vertices, labeled edges, the excellent / pretty-good / bad
//! classification and triangle components.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

use crate::graph::{Edge, Graph, Triangle, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingError {
    #[error("triangle {0} is not present in the graph")]
    NotInGraph(Triangle),
    #[error("triangles {0} and {1} share an edge")]
    Overlap(Triangle, Triangle),
}

/// Pairwise edge-disjoint triangles with an edge → owner index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TrianglePacking {
    triangles: BTreeSet<Triangle>,
    edge_index: HashMap<Edge, Triangle>,
}

impl TrianglePacking {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a packing, checking that every triangle exists in `g` and that
    /// no two share an edge.
    pub fn from_triangles<I>(g: &Graph, triangles: I) -> Result<Self, PackingError>
    where
        I: IntoIterator<Item = Triangle>,
    {
        let mut s = TrianglePacking::new();
        for t in triangles {
            if !g.is_triangle(t) {
                return Err(PackingError::NotInGraph(t));
            }
            s.try_insert(t)?;
        }
        Ok(s)
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Triangles in lexicographic order.
    pub fn triangles(&self) -> impl Iterator<Item = Triangle> + '_ {
        self.triangles.iter().copied()
    }

    pub fn contains(&self, t: Triangle) -> bool {
        self.triangles.contains(&t)
    }

    pub fn owner(&self, e: Edge) -> Option<Triangle> {
        self.edge_index.get(&e).copied()
    }

    /// Whether `e` belongs to E(S).
    pub fn covers(&self, e: Edge) -> bool {
        self.edge_index.contains_key(&e)
    }

    pub fn is_free(&self, t: Triangle) -> bool {
        t.edges().iter().all(|e| !self.covers(*e))
    }

    pub fn try_insert(&mut self, t: Triangle) -> Result<(), PackingError> {
        if let Some(other) = t.edges().iter().find_map(|e| self.owner(*e)) {
            return Err(PackingError::Overlap(other, t));
        }
        for e in t.edges() {
            self.edge_index.insert(e, t);
        }
        self.triangles.insert(t);
        Ok(())
    }

    pub fn remove(&mut self, t: Triangle) -> bool {
        if !self.triangles.remove(&t) {
            return false;
        }
        for e in t.edges() {
            self.edge_index.remove(&e);
        }
        true
    }

    /// V(S).
    pub fn vertices(&self) -> BTreeSet<VertexId> {
        self.triangles.iter().flat_map(|t| t.vertices()).collect()
    }

    /// E(S) in canonical order.
    pub fn edges(&self) -> BTreeSet<Edge> {
        self.edge_index.keys().copied().collect()
    }

    /// Triangles of `S` through each vertex.
    pub fn vertex_index(&self) -> BTreeMap<VertexId, Vec<Triangle>> {
        let mut idx: BTreeMap<VertexId, Vec<Triangle>> = BTreeMap::new();
        for t in &self.triangles {
            for v in t.vertices() {
                idx.entry(v).or_default().push(*t);
            }
        }
        idx
    }

    /// Whether some triangle of `g` has all three edges outside E(S).
    pub fn is_maximal(&self, g: &Graph) -> bool {
        g.triangles().into_iter().all(|t| !self.is_free(t))
    }

    pub fn validate(&self, g: &Graph) -> Result<(), PackingError> {
        TrianglePacking::from_triangles(g, self.triangles()).map(|_| ())
    }
}

/// Greedy maximal packing in lexicographic triangle order.
pub fn greedy_maximal_packing(g: &Graph) -> TrianglePacking {
    remaximalize(g, TrianglePacking::new())
}

/// Extends `s` to a maximal packing without removing any of its triangles.
pub fn remaximalize(g: &Graph, mut s: TrianglePacking) -> TrianglePacking {
    for t in g.triangles() {
        if s.is_free(t) {
            s.try_insert(t).expect("free triangle");
        }
    }
    s
}

/// F = V ∖ V(S).
pub fn free_vertices(g: &Graph, s: &TrianglePacking) -> BTreeSet<VertexId> {
    let covered = s.vertices();
    g.vertices().filter(|v| !covered.contains(v)).collect()
}

/// Edges of E(S) spanned by at least one vertex outside V(S).
pub fn labeled_edges(g: &Graph, s: &TrianglePacking) -> BTreeSet<Edge> {
    let covered = s.vertices();
    s.edges()
        .into_iter()
        .filter(|e| {
            g.common_neighbors(e.lo(), e.hi())
                .iter()
                .any(|w| !covered.contains(w))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TriangleClass {
    Excellent,
    PrettyGood,
    Bad,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TriangleClassification {
    pub labeled: BTreeSet<Edge>,
    /// S1: good triangles whose unlabeled edges lie in no triangle of G − L.
    pub excellent: BTreeSet<Triangle>,
    /// S2: the remaining good triangles.
    pub pretty_good: BTreeSet<Triangle>,
    /// S3: triangles without a labeled edge.
    pub bad: BTreeSet<Triangle>,
    /// V(S1) ∖ (V(L) ∪ V(S2) ∪ V(S3)).
    pub v1: BTreeSet<VertexId>,
    /// V(S2) ∖ V(L).
    pub v2: BTreeSet<VertexId>,
    /// Triangles of S carrying two or more labeled edges. Always empty on a
    /// reduced instance.
    pub multi_labeled: Vec<(Triangle, Vec<Edge>)>,
}

impl TriangleClassification {
    pub fn k1(&self) -> usize {
        self.excellent.len()
    }

    pub fn k2(&self) -> usize {
        self.pretty_good.len()
    }

    pub fn k3(&self) -> usize {
        self.bad.len()
    }

    pub fn class_of(&self, t: Triangle) -> Option<TriangleClass> {
        if self.excellent.contains(&t) {
            Some(TriangleClass::Excellent)
        } else if self.pretty_good.contains(&t) {
            Some(TriangleClass::PrettyGood)
        } else if self.bad.contains(&t) {
            Some(TriangleClass::Bad)
        } else {
            None
        }
    }

    /// The labeled edges of a good triangle.
    pub fn labeled_of(&self, t: Triangle) -> Vec<Edge> {
        t.edges()
            .into_iter()
            .filter(|e| self.labeled.contains(e))
            .collect()
    }
}

/// Whether `e` lies in a triangle avoiding every edge of `removed`.
fn in_triangle_avoiding(g: &Graph, e: Edge, removed: &BTreeSet<Edge>) -> bool {
    if removed.contains(&e) {
        return false;
    }
    g.common_neighbors(e.lo(), e.hi()).into_iter().any(|w| {
        !removed.contains(&Edge::new(w, e.lo())) && !removed.contains(&Edge::new(w, e.hi()))
    })
}

pub fn classify_triangles(
    g: &Graph,
    s: &TrianglePacking,
    labeled: &BTreeSet<Edge>,
) -> TriangleClassification {
    let mut c = TriangleClassification {
        labeled: labeled.clone(),
        ..Default::default()
    };
    for t in s.triangles() {
        let (marked, unmarked): (Vec<Edge>, Vec<Edge>) =
            t.edges().into_iter().partition(|e| labeled.contains(e));
        if marked.is_empty() {
            c.bad.insert(t);
            continue;
        }
        if marked.len() >= 2 {
            c.multi_labeled.push((t, marked));
        }
        if unmarked.iter().any(|e| in_triangle_avoiding(g, *e, labeled)) {
            c.pretty_good.insert(t);
        } else {
            c.excellent.insert(t);
        }
    }

    let labeled_vertices: BTreeSet<VertexId> =
        labeled.iter().flat_map(|e| e.endpoints()).collect();
    let collect = |set: &BTreeSet<Triangle>| -> BTreeSet<VertexId> {
        set.iter().flat_map(|t| t.vertices()).collect()
    };
    let vs1 = collect(&c.excellent);
    let vs2 = collect(&c.pretty_good);
    let vs3 = collect(&c.bad);
    c.v1 = vs1
        .into_iter()
        .filter(|v| !labeled_vertices.contains(v) && !vs2.contains(v) && !vs3.contains(v))
        .collect();
    c.v2 = vs2
        .into_iter()
        .filter(|v| !labeled_vertices.contains(v))
        .collect();
    c
}

/// Connected components of the graph (V(S), E(S)).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComponentIndex {
    of: BTreeMap<VertexId, usize>,
    members: Vec<BTreeSet<VertexId>>,
    triangles: Vec<Vec<Triangle>>,
}

impl ComponentIndex {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Component id of `v`, or `None` for vertices outside V(S).
    pub fn component_of(&self, v: VertexId) -> Option<usize> {
        self.of.get(&v).copied()
    }

    /// C(v) as a vertex set.
    pub fn members(&self, id: usize) -> &BTreeSet<VertexId> {
        &self.members[id]
    }

    pub fn triangles_in(&self, id: usize) -> &[Triangle] {
        &self.triangles[id]
    }

    pub fn same_component(&self, u: VertexId, v: VertexId) -> bool {
        matches!((self.component_of(u), self.component_of(v)), (Some(a), Some(b)) if a == b)
    }
}

/// Component ids are assigned in order of each component's smallest vertex.
pub fn triangle_components(s: &TrianglePacking) -> ComponentIndex {
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    fn find(parent: &mut BTreeMap<VertexId, VertexId>, v: VertexId) -> VertexId {
        let p = parent[&v];
        if p == v {
            return v;
        }
        let root = find(parent, p);
        parent.insert(v, root);
        root
    }
    for t in s.triangles() {
        for v in t.vertices() {
            parent.entry(v).or_insert(v);
        }
        let [a, b, c] = t.vertices();
        for (x, y) in [(a, b), (a, c)] {
            let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
            if rx != ry {
                parent.insert(rx.max(ry), rx.min(ry));
            }
        }
    }

    let mut index = ComponentIndex::default();
    let mut root_id: BTreeMap<VertexId, usize> = BTreeMap::new();
    let vertices: Vec<VertexId> = parent.keys().copied().collect();
    for v in vertices {
        let r = find(&mut parent, v);
        let id = *root_id.entry(r).or_insert_with(|| {
            index.members.push(BTreeSet::new());
            index.triangles.push(Vec::new());
            index.members.len() - 1
        });
        index.of.insert(v, id);
        index.members[id].insert(v);
    }
    for t in s.triangles() {
        let id = index.of[&t.vertices()[0]];
        index.triangles[id].push(t);
    }
    index
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(edges: &[(VertexId, VertexId)]) -> Graph {
        Graph::from_edges(edges.iter().copied()).unwrap()
    }

    fn two_k3() -> Graph {
        g(&[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    }

    #[test]
    fn greedy_samples() {
        assert_eq!(greedy_maximal_packing(&Graph::complete(3)).len(), 1);
        assert_eq!(greedy_maximal_packing(&Graph::complete(4)).len(), 1);
        assert_eq!(greedy_maximal_packing(&two_k3()).len(), 2);
    }

    #[test]
    fn remaximalize_samples() {
        let k3 = Graph::complete(3);
        let s = greedy_maximal_packing(&k3);
        assert_eq!(remaximalize(&k3, s.clone()), s);
        assert_eq!(remaximalize(&k3, TrianglePacking::new()).len(), 1);
        let two = two_k3();
        let one = TrianglePacking::from_triangles(&two, [Triangle::new(3, 4, 5)]).unwrap();
        let full = remaximalize(&two, one);
        assert_eq!(full.len(), 2);
        assert!(full.contains(Triangle::new(3, 4, 5)));
    }

    #[test]
    fn overlap_is_rejected() {
        let k4 = Graph::complete(4);
        let err = TrianglePacking::from_triangles(&k4, [Triangle::new(0, 1, 2), Triangle::new(0, 1, 3)]);
        assert!(matches!(err, Err(PackingError::Overlap(..))));
        let err = TrianglePacking::from_triangles(&two_k3(), [Triangle::new(0, 1, 3)]);
        assert!(matches!(err, Err(PackingError::NotInGraph(_))));
    }

    #[test]
    fn labeled_edge_samples() {
        // x=3 adjacent to a=0, b=1.
        let pendant = g(&[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)]);
        let s = TrianglePacking::from_triangles(&pendant, [Triangle::new(0, 1, 2)]).unwrap();
        assert_eq!(labeled_edges(&pendant, &s), BTreeSet::from([Edge::new(0, 1)]));

        let two = two_k3();
        assert!(labeled_edges(&two, &greedy_maximal_packing(&two)).is_empty());

        let k4 = Graph::complete(4);
        let s = TrianglePacking::from_triangles(&k4, [Triangle::new(0, 1, 2)]).unwrap();
        assert_eq!(
            labeled_edges(&k4, &s),
            BTreeSet::from([Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)])
        );
    }

    #[test]
    fn classification_samples() {
        let two = two_k3();
        let s = greedy_maximal_packing(&two);
        let c = classify_triangles(&two, &s, &labeled_edges(&two, &s));
        assert_eq!((c.k1(), c.k2(), c.k3()), (0, 0, 2));

        // uvw = 0,1,2 with q=3 spanning uv.
        let base = g(&[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)]);
        let s = TrianglePacking::from_triangles(&base, [Triangle::new(0, 1, 2)]).unwrap();
        let c = classify_triangles(&base, &s, &labeled_edges(&base, &s));
        assert_eq!(c.excellent, BTreeSet::from([Triangle::new(0, 1, 2)]));
        assert!(c.multi_labeled.is_empty());
        assert_eq!(c.v1, BTreeSet::from([2]));

        // Add triangle 0-2-4 so that uw lies in a triangle of G - L.
        let more = g(&[(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (0, 4), (2, 4)]);
        let s = TrianglePacking::from_triangles(&more, [Triangle::new(0, 1, 2)]).unwrap();
        let labeled = BTreeSet::from([Edge::new(0, 1)]);
        let c = classify_triangles(&more, &s, &labeled);
        assert_eq!(c.pretty_good, BTreeSet::from([Triangle::new(0, 1, 2)]));
        assert_eq!(c.v2, BTreeSet::from([2]));
    }

    #[test]
    fn multi_labeled_is_flagged_not_fatal() {
        let k4 = Graph::complete(4);
        let s = TrianglePacking::from_triangles(&k4, [Triangle::new(0, 1, 2)]).unwrap();
        let c = classify_triangles(&k4, &s, &labeled_edges(&k4, &s));
        assert_eq!(c.multi_labeled.len(), 1);
        assert_eq!(c.k1() + c.k2() + c.k3(), 1);
    }

    #[test]
    fn component_samples() {
        let two = two_k3();
        let comps = triangle_components(&greedy_maximal_packing(&two));
        assert_eq!(comps.len(), 2);
        assert!(!comps.same_component(0, 3));

        let bowtie = g(&[(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4)]);
        let comps = triangle_components(&greedy_maximal_packing(&bowtie));
        assert_eq!(comps.len(), 1);
        assert_eq!(comps.members(0).len(), 5);
        assert_eq!(comps.triangles_in(0).len(), 2);

        assert!(triangle_components(&TrianglePacking::new()).is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_graph() -> impl Strategy<Value = Graph> {
            (3u32..=14).prop_flat_map(|n| {
                proptest::collection::vec(proptest::bool::weighted(0.45), (n * (n - 1) / 2) as usize)
                    .prop_map(move |bits| {
                        let mut g = Graph::new();
                        let mut i = 0;
                        for u in 0..n {
                            g.add_vertex(u);
                            for v in u + 1..n {
                                if bits[i] {
                                    g.add_edge(u, v).unwrap();
                                }
                                i += 1;
                            }
                        }
                        g
                    })
            })
        }

        proptest! {
            #[test]
            fn greedy_is_valid_and_maximal(g in arb_graph()) {
                let s = greedy_maximal_packing(&g);
                prop_assert!(s.validate(&g).is_ok());
                prop_assert!(s.is_maximal(&g));
            }

            #[test]
            fn classification_partitions_packing(g in arb_graph()) {
                let s = greedy_maximal_packing(&g);
                let l = labeled_edges(&g, &s);
                let c = classify_triangles(&g, &s, &l);
                prop_assert_eq!(c.k1() + c.k2() + c.k3(), s.len());
                let labeled_vs: BTreeSet<_> = l.iter().flat_map(|e| e.endpoints()).collect();
                prop_assert!(c.v1.is_disjoint(&c.v2));
                prop_assert!(c.v1.is_disjoint(&labeled_vs));
                prop_assert!(c.v2.is_disjoint(&labeled_vs));
            }

            #[test]
            fn components_follow_packing_edges(g in arb_graph()) {
                let s = greedy_maximal_packing(&g);
                let comps = triangle_components(&s);
                for t in s.triangles() {
                    let [a, b, c] = t.vertices();
                    prop_assert!(comps.same_component(a, b) && comps.same_component(a, c));
                }
                let total: usize = (0..comps.len()).map(|i| comps.members(i).len()).sum();
                prop_assert_eq!(total, s.vertices().len());
            }
        }
    }
}
