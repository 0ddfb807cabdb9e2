//! Rules driven by the working packing: R5–R9.
//!
//! Because `S` is maximal, every triangle edge-disjoint from `S` minus some
//! triangles `T` must use an edge of `T`. So replacement candidates are
//! enumerated from the edges of `T` and their common neighbors, and finding
//! `|T| + 1` pairwise disjoint candidates is enough for R6/R7: refilling to
//! maximality afterwards picks up any more.
//!
//! Two packed triangles sharing no vertex already cover six vertices, so R8
//! only considers pairs that meet in a vertex. R7 looks at the same pairs:
//! for a vertex-disjoint pair no candidate uses edges of both, so three
//! disjoint candidates would put two on one triangle, and R6 runs first.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use crate::crown::find_crown;
use crate::graph::{Edge, Graph, Instance, ProblemVariant, Triangle, VertexId};
use crate::packing::{free_vertices, labeled_edges, remaximalize, PackingError, TrianglePacking};

use super::{RuleEvent, Verdict};

/// A packing move: take `removed` out of `S` and put `added` in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Swap {
    pub removed: Vec<Triangle>,
    pub added: Vec<Triangle>,
}

impl Swap {
    pub fn apply(&self, s: &TrianglePacking) -> Result<TrianglePacking, PackingError> {
        let mut out = s.clone();
        for &t in &self.removed {
            out.remove(t);
        }
        for &t in &self.added {
            out.try_insert(t)?;
        }
        Ok(out)
    }
}

/// R5.
pub fn rule_threshold(inst: &Instance, s: &TrianglePacking) -> Option<Verdict> {
    if (s.len() as i64) > inst.k {
        Some(match inst.variant {
            ProblemVariant::Etp => Verdict::Yes,
            ProblemVariant::Etc => Verdict::No,
        })
    } else {
        None
    }
}

/// Triangles of `g` through an edge of `keys` whose other edges are free
/// or belong to `keys`, with apex accepted by `apex_ok`.
fn candidates(
    g: &Graph,
    s: &TrianglePacking,
    keys: &[Triangle],
    apex_ok: impl Fn(VertexId) -> bool,
) -> Vec<Triangle> {
    let usable = |e: Edge| s.owner(e).is_none_or(|t| keys.contains(&t));
    let mut out = BTreeSet::new();
    for t in keys {
        for e in t.edges() {
            for w in g.common_neighbors(e.lo(), e.hi()) {
                if !apex_ok(w) {
                    continue;
                }
                let c = Triangle::from_edge(e, w);
                if c.edges().iter().all(|&f| usable(f)) {
                    out.insert(c);
                }
            }
        }
    }
    out.into_iter().collect()
}

/// First `size` pairwise edge-disjoint triangles of `cands` in
/// lexicographic order of index tuples.
fn disjoint_subset(cands: &[Triangle], size: usize) -> Option<Vec<Triangle>> {
    fn go(
        cands: &[Triangle],
        from: usize,
        size: usize,
        used: &mut HashSet<Edge>,
        chosen: &mut Vec<Triangle>,
    ) -> bool {
        if chosen.len() == size {
            return true;
        }
        for i in from..cands.len() {
            if cands.len() - i < size - chosen.len() {
                break;
            }
            let es = cands[i].edges();
            if es.iter().any(|e| used.contains(e)) {
                continue;
            }
            used.extend(es);
            chosen.push(cands[i]);
            if go(cands, i + 1, size, used, chosen) {
                return true;
            }
            chosen.pop();
            for e in es {
                used.remove(&e);
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(size);
    go(cands, 0, size, &mut HashSet::new(), &mut chosen).then_some(chosen)
}

/// Pairs of packed triangles sharing a vertex, each pair once, in
/// lexicographic order.
fn touching_pairs(s: &TrianglePacking) -> Vec<(Triangle, Triangle)> {
    let index: BTreeMap<VertexId, Vec<Triangle>> = s.vertex_index();
    let mut pairs = BTreeSet::new();
    for ts in index.values() {
        for (i, &a) in ts.iter().enumerate() {
            for &b in &ts[i + 1..] {
                pairs.insert(if a < b { (a, b) } else { (b, a) });
            }
        }
    }
    pairs.into_iter().collect()
}

/// R6: one packed triangle whose edges, together with unpacked edges,
/// carry two edge-disjoint triangles.
pub fn find_augment_one(g: &Graph, s: &TrianglePacking) -> Option<Swap> {
    s.triangles().find_map(|t| {
        let cands = candidates(g, s, &[t], |_| true);
        disjoint_subset(&cands, 2).map(|added| Swap {
            removed: vec![t],
            added,
        })
    })
}

/// R7: two packed triangles replaceable by three. Complete only once
/// R6 is inapplicable.
pub fn find_augment_two(g: &Graph, s: &TrianglePacking) -> Option<Swap> {
    touching_pairs(s).into_iter().find_map(|(a, b)| {
        let cands = candidates(g, s, &[a, b], |_| true);
        disjoint_subset(&cands, 3).map(|added| Swap {
            removed: vec![a, b],
            added,
        })
    })
}

/// R8: two packed triangles replaceable by two vertex-disjoint triangles,
/// each with its apex free or on the pair.
pub fn find_revertex(g: &Graph, s: &TrianglePacking) -> Option<Swap> {
    let free = free_vertices(g, s);
    touching_pairs(s).into_iter().find_map(|(a, b)| {
        let on_pair = |w: VertexId| a.contains_vertex(w) || b.contains_vertex(w);
        let cands = candidates(g, s, &[a, b], |w| free.contains(&w) || on_pair(w));
        for (i, &x) in cands.iter().enumerate() {
            for &y in &cands[i + 1..] {
                if x.shared_vertices(y) == 0 {
                    return Some(Swap {
                        removed: vec![a, b],
                        added: vec![x, y],
                    });
                }
            }
        }
        None
    })
}

fn apply_swap(g: &Graph, s: &TrianglePacking, swap: Option<Swap>) -> Option<TrianglePacking> {
    let out = swap?.apply(s).expect("swap keeps the packing disjoint");
    Some(remaximalize(g, out))
}

pub fn rule_augment_one(g: &Graph, s: &TrianglePacking) -> Option<TrianglePacking> {
    apply_swap(g, s, find_augment_one(g, s))
}

pub fn rule_augment_two(g: &Graph, s: &TrianglePacking) -> Option<TrianglePacking> {
    apply_swap(g, s, find_augment_two(g, s))
}

pub fn rule_revertex(g: &Graph, s: &TrianglePacking) -> Option<TrianglePacking> {
    apply_swap(g, s, find_revertex(g, s))
}

/// R9: a fat-head crown with its crown outside `V(L)` and head inside `L`.
pub fn find_crown_reduction(g: &Graph, s: &TrianglePacking) -> Option<RuleEvent> {
    let labeled = labeled_edges(g, s);
    let touched: BTreeSet<VertexId> = labeled.iter().flat_map(|e| e.endpoints()).collect();
    let a: BTreeSet<VertexId> = g.vertices().filter(|v| !touched.contains(v)).collect();
    let fc = find_crown(g, &a, &labeled).expect("crown inputs are disjoint")?;
    Some(RuleEvent::Crown {
        crown: fc.crown.iter().copied().collect(),
        head: fc.head.iter().copied().collect(),
        witness: fc.witness_triangles(),
        k_delta: fc.head.len() as i64,
    })
}

pub fn rule_crown_reduce(inst: &Instance, s: &TrianglePacking) -> Option<Instance> {
    let ev = find_crown_reduction(&inst.graph, s)?;
    let mut out = inst.clone();
    super::apply_graph_event(&mut out, &ev).expect("detected crown applies");
    Some(out)
}
