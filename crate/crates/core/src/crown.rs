//! Fat-head crown decompositions.
//!
//! A decomposition `(C, H, X)` of `G` consists of an independent crown `C`,
//! the head `H` of all edges spanned by `C`, and the rest `X = V ∖ C`, such
//! that `C` has no neighbor in `X ∖ V(H)` and a witness packing matches
//! every head edge to its own crown vertex.
//!
//! Detection works on the bipartite span graph between candidate crown
//! vertices and candidate head edges. With a maximum matching in hand:
//!
//! * if some left vertex is unmatched, the left/right vertices reachable
//!   from the unmatched ones by alternating paths form a crown and its head;
//! * otherwise the matching saturates the left side, and a set `C` is a
//!   crown exactly when the matching maps `C` onto `N(C)`. The smallest such
//!   set containing a given vertex is its closure under "add the partner of
//!   every right neighbor", so trying each vertex decides existence.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError, Instance, Triangle, VertexId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CrownError {
    #[error("crown candidate set intersects the head edge endpoints at vertex {0}")]
    Overlap(VertexId),
    #[error("crown failed verification: {0}")]
    Invalid(CrownViolation),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Bipartite graph between candidate crown vertices and candidate head edges;
/// `w` is adjacent to `e` iff `w` spans `e`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SpanBipartiteGraph {
    left: Vec<VertexId>,
    right: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl SpanBipartiteGraph {
    /// Assembles a bipartite graph from explicit incidence lists, mostly for
    /// tests. `adj[i]` lists right indices adjacent to `left[i]`.
    pub fn from_parts(left: Vec<VertexId>, right: Vec<Edge>, adj: Vec<Vec<usize>>) -> Self {
        assert_eq!(left.len(), adj.len());
        let adj = adj
            .into_iter()
            .map(|mut ns| {
                assert!(ns.iter().all(|&r| r < right.len()));
                ns.sort_unstable();
                ns.dedup();
                ns
            })
            .collect();
        SpanBipartiteGraph { left, right, adj }
    }

    pub fn left(&self) -> &[VertexId] {
        &self.left
    }

    pub fn right(&self) -> &[Edge] {
        &self.right
    }

    pub fn neighbors(&self, left: usize) -> &[usize] {
        &self.adj[left]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }
}

/// Builds the span graph for crowns `C ⊆ A` with heads `H ⊆ B`.
///
/// A vertex of `A` is kept on the left only if it has no neighbor in `A`,
/// every edge it spans lies in `B`, every neighbor lies on one of those
/// edges, and it spans at least one. Any vertex failing one of these cannot
/// belong to a crown whose head is inside `B`.
pub fn build_span_bipartite(
    g: &Graph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<Edge>,
) -> Result<SpanBipartiteGraph, CrownError> {
    if let Some(v) = b.iter().flat_map(|e| e.endpoints()).find(|v| a.contains(v)) {
        return Err(CrownError::Overlap(v));
    }

    let mut kept: Vec<(VertexId, Vec<Edge>)> = Vec::new();
    for &w in a {
        if !g.has_vertex(w) || g.neighbors(w).any(|u| a.contains(&u)) {
            continue;
        }
        let spanned = g.spanned_edges(w);
        if spanned.is_empty() || !spanned.iter().all(|e| b.contains(e)) {
            continue;
        }
        let touched: BTreeSet<VertexId> = spanned.iter().flat_map(|e| e.endpoints()).collect();
        if g.neighbors(w).any(|u| !touched.contains(&u)) {
            continue;
        }
        kept.push((w, spanned));
    }

    let right: Vec<Edge> = kept
        .iter()
        .flat_map(|(_, es)| es.iter().copied())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let left = kept.iter().map(|(w, _)| *w).collect();
    let adj = kept
        .iter()
        .map(|(_, es)| {
            es.iter()
                .map(|e| right.binary_search(e).expect("collected"))
                .collect()
        })
        .collect();
    Ok(SpanBipartiteGraph { left, right, adj })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    left_mate: Vec<Option<usize>>,
    right_mate: Vec<Option<usize>>,
}

impl Matching {
    pub fn empty(b: &SpanBipartiteGraph) -> Self {
        Matching {
            left_mate: vec![None; b.left.len()],
            right_mate: vec![None; b.right.len()],
        }
    }

    pub fn len(&self) -> usize {
        self.left_mate.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn left_mate(&self, l: usize) -> Option<usize> {
        self.left_mate[l]
    }

    pub fn right_mate(&self, r: usize) -> Option<usize> {
        self.right_mate[r]
    }

    /// Matched (left, right) index pairs in left order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.left_mate
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
            .collect()
    }
}

/// Maximum-cardinality matching by Hopcroft–Karp phases.
pub fn max_matching(b: &SpanBipartiteGraph) -> Matching {
    const INF: usize = usize::MAX;
    let n = b.left.len();
    let mut m = Matching::empty(b);
    let mut dist = vec![INF; n];

    loop {
        // Layer the left side by alternating BFS from free left vertices.
        let mut queue = VecDeque::new();
        for (l, d) in dist.iter_mut().enumerate() {
            if m.left_mate[l].is_none() {
                *d = 0;
                queue.push_back(l);
            } else {
                *d = INF;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &b.adj[l] {
                match m.right_mate[r] {
                    None => found = true,
                    Some(l2) if dist[l2] == INF => {
                        dist[l2] = dist[l] + 1;
                        queue.push_back(l2);
                    }
                    Some(_) => {}
                }
            }
        }
        if !found {
            return m;
        }

        fn augment(
            l: usize,
            b: &SpanBipartiteGraph,
            m: &mut Matching,
            dist: &mut [usize],
        ) -> bool {
            for &r in &b.adj[l] {
                let ok = match m.right_mate[r] {
                    None => true,
                    Some(l2) => dist[l2] == dist[l] + 1 && augment(l2, b, m, dist),
                };
                if ok {
                    m.left_mate[l] = Some(r);
                    m.right_mate[r] = Some(l);
                    return true;
                }
            }
            dist[l] = usize::MAX;
            false
        }

        for l in 0..n {
            if m.left_mate[l].is_none() {
                augment(l, b, &mut m, &mut dist);
            }
        }
    }
}

/// A fat-head crown decomposition. The rest `X` is implicit: every vertex
/// of the graph outside `crown`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FatHeadCrown {
    pub crown: BTreeSet<VertexId>,
    pub head: BTreeSet<Edge>,
    /// One (crown vertex, head edge) pair per head edge.
    pub witness: Vec<(VertexId, Edge)>,
}

impl FatHeadCrown {
    /// X = V ∖ C.
    pub fn rest(&self, g: &Graph) -> BTreeSet<VertexId> {
        g.vertices().filter(|v| !self.crown.contains(v)).collect()
    }

    pub fn witness_triangles(&self) -> Vec<Triangle> {
        self.witness
            .iter()
            .map(|&(c, e)| Triangle::from_edge(e, c))
            .collect()
    }
}

/// Extracts a crown from a maximum matching, or `None` when the span graph
/// admits none.
pub fn extract_crown(b: &SpanBipartiteGraph, m: &Matching) -> Option<FatHeadCrown> {
    let unmatched: Vec<usize> = (0..b.left.len())
        .filter(|&l| m.left_mate(l).is_none())
        .collect();

    let (crown_idx, head_idx) = if !unmatched.is_empty() {
        alternating_closure(b, m, &unmatched)
    } else {
        (0..b.left.len()).find_map(|l| saturated_closure(b, m, l))?
    };

    let crown = crown_idx.iter().map(|&l| b.left[l]).collect();
    let head = head_idx.iter().map(|&r| b.right[r]).collect();
    let witness = head_idx
        .iter()
        .map(|&r| {
            let l = m.right_mate(r).expect("head edges are matched");
            (b.left[l], b.right[r])
        })
        .collect();
    Some(FatHeadCrown {
        crown,
        head,
        witness,
    })
}

/// Left/right indices reachable from `seeds` via alternating paths.
fn alternating_closure(
    b: &SpanBipartiteGraph,
    m: &Matching,
    seeds: &[usize],
) -> (BTreeSet<usize>, BTreeSet<usize>) {
    let mut left: BTreeSet<usize> = seeds.iter().copied().collect();
    let mut right = BTreeSet::new();
    let mut queue: VecDeque<usize> = seeds.iter().copied().collect();
    while let Some(l) = queue.pop_front() {
        for &r in &b.adj[l] {
            if right.insert(r) {
                // A free right vertex here would be an augmenting path.
                let l2 = m.right_mate(r).expect("matching is maximum");
                if left.insert(l2) {
                    queue.push_back(l2);
                }
            }
        }
    }
    (left, right)
}

/// Smallest set containing `start` closed under taking the partner of every
/// right neighbor; `None` if a right neighbor is unmatched.
fn saturated_closure(
    b: &SpanBipartiteGraph,
    m: &Matching,
    start: usize,
) -> Option<(BTreeSet<usize>, BTreeSet<usize>)> {
    let mut left = BTreeSet::from([start]);
    let mut right = BTreeSet::new();
    let mut queue = VecDeque::from([start]);
    while let Some(l) = queue.pop_front() {
        for &r in &b.adj[l] {
            if right.insert(r) {
                let l2 = m.right_mate(r)?;
                if left.insert(l2) {
                    queue.push_back(l2);
                }
            }
        }
    }
    Some((left, right))
}

/// Builds the span graph, matches, extracts, recomputes the head as the full
/// span set of the crown, and verifies. Returns only verified crowns.
pub fn find_crown(
    g: &Graph,
    a: &BTreeSet<VertexId>,
    b: &BTreeSet<Edge>,
) -> Result<Option<FatHeadCrown>, CrownError> {
    let bip = build_span_bipartite(g, a, b)?;
    let m = max_matching(&bip);
    let Some(mut fc) = extract_crown(&bip, &m) else {
        return Ok(None);
    };
    fc.head = fc
        .crown
        .iter()
        .flat_map(|&c| g.spanned_edges(c))
        .collect();
    debug_assert!(fc.head.is_subset(b));
    Ok(verify_crown(g, &fc).then_some(fc))
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum CrownViolation {
    #[error("crown is empty")]
    EmptyCrown,
    #[error("head is empty")]
    EmptyHead,
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(VertexId),
    #[error("crown vertices {0} and {1} are adjacent")]
    NotIndependent(VertexId, VertexId),
    #[error("head differs from the edges spanned by the crown")]
    HeadMismatch,
    #[error("crown vertex {0} is adjacent to {1}, outside the head")]
    LeaksOutside(VertexId, VertexId),
    #[error("witness has {got} triangles for {want} head edges")]
    WitnessSize { got: usize, want: usize },
    #[error("witness pair ({0}, {1}) is not a crown/head triangle")]
    BadWitness(VertexId, Edge),
    #[error("head edge {0} is witnessed twice")]
    RepeatedHead(Edge),
    #[error("witness triangles share edge {0}")]
    WitnessOverlap(Edge),
}

/// Checks the four defining properties, plus nonempty crown and head.
pub fn check_crown(g: &Graph, fc: &FatHeadCrown) -> Result<(), CrownViolation> {
    if fc.crown.is_empty() {
        return Err(CrownViolation::EmptyCrown);
    }
    if fc.head.is_empty() {
        return Err(CrownViolation::EmptyHead);
    }
    for &c in &fc.crown {
        if !g.has_vertex(c) {
            return Err(CrownViolation::UnknownVertex(c));
        }
        if let Some(u) = g.neighbors(c).find(|u| fc.crown.contains(u)) {
            return Err(CrownViolation::NotIndependent(c, u));
        }
    }

    let spanned: BTreeSet<Edge> = fc.crown.iter().flat_map(|&c| g.spanned_edges(c)).collect();
    if spanned != fc.head {
        return Err(CrownViolation::HeadMismatch);
    }

    let head_vertices: BTreeSet<VertexId> = fc.head.iter().flat_map(|e| e.endpoints()).collect();
    for &c in &fc.crown {
        if let Some(u) = g.neighbors(c).find(|u| !head_vertices.contains(u)) {
            return Err(CrownViolation::LeaksOutside(c, u));
        }
    }

    if fc.witness.len() != fc.head.len() {
        return Err(CrownViolation::WitnessSize {
            got: fc.witness.len(),
            want: fc.head.len(),
        });
    }
    let mut used_heads = BTreeSet::new();
    let mut used_edges = BTreeSet::new();
    for &(c, e) in &fc.witness {
        if !fc.crown.contains(&c) || !fc.head.contains(&e) || !g.spans(c, e).unwrap_or(false) {
            return Err(CrownViolation::BadWitness(c, e));
        }
        let t = Triangle::from_edge(e, c);
        let crown_hits = t.vertices().iter().filter(|v| fc.crown.contains(v)).count();
        let head_hits = t.edges().iter().filter(|x| fc.head.contains(x)).count();
        if crown_hits != 1 || head_hits != 1 {
            return Err(CrownViolation::BadWitness(c, e));
        }
        if !used_heads.insert(e) {
            return Err(CrownViolation::RepeatedHead(e));
        }
        for x in t.edges() {
            if !used_edges.insert(x) {
                return Err(CrownViolation::WitnessOverlap(x));
            }
        }
    }
    Ok(())
}

pub fn verify_crown(g: &Graph, fc: &FatHeadCrown) -> bool {
    check_crown(g, fc).is_ok()
}

/// Deletes `C` and `H` and lowers `k` by `|H|`.
pub fn apply_crown(inst: &Instance, fc: &FatHeadCrown) -> Result<Instance, CrownError> {
    check_crown(&inst.graph, fc).map_err(CrownError::Invalid)?;
    let mut out = inst.clone();
    for &c in &fc.crown {
        out.graph.remove_vertex(c);
    }
    for &e in &fc.head {
        out.graph.remove_edge(e);
    }
    out.k -= fc.head.len() as i64;
    Ok(out)
}
