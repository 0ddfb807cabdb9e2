//! Rules that look only at the graph: R1–R4.

use std::collections::{BTreeSet, VecDeque};

use crate::graph::{Edge, Graph, Instance, ProblemVariant, VertexId};

use super::{apply_graph_event, clique_k_delta, RuleEvent, Verdict};

/// R1. "Empty" means edgeless; isolated vertices carry no triangles.
pub fn rule_terminal(inst: &Instance) -> Option<Verdict> {
    let empty = inst.graph.has_no_edges();
    match inst.variant {
        ProblemVariant::Etp if inst.k <= 0 => Some(Verdict::Yes),
        ProblemVariant::Etp if empty => Some(Verdict::No),
        ProblemVariant::Etc if inst.k < 0 => Some(Verdict::No),
        ProblemVariant::Etc if empty => Some(Verdict::Yes),
        _ => None,
    }
}

fn in_no_triangle(g: &Graph, v: VertexId) -> bool {
    g.incident_edges(v).all(|e| !g.in_some_triangle(e))
}

/// R2. Deletes the smallest non-isolated vertex in no triangle, else the
/// smallest edge in no triangle, and sweeps every isolated vertex left
/// behind. With nothing else to do, sweeps the isolated vertices alone.
pub fn find_prune(g: &Graph) -> Option<RuleEvent> {
    let mut edges: Vec<Edge> = Vec::new();
    if let Some(v) = g.vertices().find(|&v| g.degree(v) > 0 && in_no_triangle(g, v)) {
        edges.extend(g.incident_edges(v));
    } else if let Some(e) = g.edges().find(|&e| !g.in_some_triangle(e)) {
        edges.push(e);
    }
    let touched: BTreeSet<VertexId> = edges.iter().flat_map(|e| e.endpoints()).collect();
    let vertices: Vec<VertexId> = g
        .vertices()
        .filter(|&v| {
            let lost = edges.iter().filter(|e| e.contains(v)).count();
            g.degree(v) == lost && (lost > 0 || !touched.contains(&v))
        })
        .collect();
    if edges.is_empty() && vertices.is_empty() {
        return None;
    }
    Some(RuleEvent::Prune { vertices, edges })
}

pub fn rule_prune(inst: &Instance) -> Option<Instance> {
    apply(inst, find_prune(&inst.graph)?)
}

/// R3. A K4 `{a,b,c,d}` none of whose edges lies in a triangle with a
/// fifth vertex. Such a K4 is exactly a set of six edges each with exactly
/// two common neighbors, both inside the quadruple.
pub fn find_clique_removal(g: &Graph, variant: ProblemVariant) -> Option<RuleEvent> {
    for e in g.edges() {
        let cn = g.common_neighbors(e.lo(), e.hi());
        let [w, x] = cn[..] else { continue };
        if !g.adjacent(w, x) {
            continue;
        }
        let mut quad = [e.lo(), e.hi(), w, x];
        quad.sort_unstable();
        let closed = (0..4).all(|i| {
            (i + 1..4).all(|j| g.common_neighbors(quad[i], quad[j]).len() == 2)
        });
        if closed {
            return Some(RuleEvent::CliqueRemoval {
                clique: quad,
                k_delta: clique_k_delta(variant),
            });
        }
    }
    None
}

pub fn rule_k4(inst: &Instance) -> Option<Instance> {
    apply(inst, find_clique_removal(&inst.graph, inst.variant)?)
}

/// Neighbors of `v` reachable from `start` in `G[N(v)]`.
fn link_component(g: &Graph, v: VertexId, start: VertexId) -> BTreeSet<VertexId> {
    let nv = g.neighbor_set(v).expect("vertex present");
    let mut seen = BTreeSet::from([start]);
    let mut queue = VecDeque::from([start]);
    while let Some(a) = queue.pop_front() {
        for b in g.neighbors(a) {
            if nv.contains(&b) && seen.insert(b) {
                queue.push_back(b);
            }
        }
    }
    seen
}

/// R4. The smallest vertex whose neighborhood induces a disconnected graph;
/// the first part is the component of its smallest neighbor.
pub fn find_split(g: &Graph) -> Option<RuleEvent> {
    for v in g.vertices() {
        let Some(start) = g.neighbors(v).next() else {
            continue;
        };
        let part = link_component(g, v, start);
        if part.len() == g.degree(v) {
            continue;
        }
        let rest: Vec<VertexId> = g.neighbors(v).filter(|u| !part.contains(u)).collect();
        let first = g.next_id();
        return Some(RuleEvent::Split {
            vertex: v,
            first,
            second: first + 1,
            first_neighbors: part.into_iter().collect(),
            second_neighbors: rest,
        });
    }
    None
}

pub fn rule_split(inst: &Instance) -> Option<Instance> {
    apply(inst, find_split(&inst.graph)?)
}

fn apply(inst: &Instance, ev: RuleEvent) -> Option<Instance> {
    let mut out = inst.clone();
    apply_graph_event(&mut out, &ev).expect("detected events apply cleanly");
    Some(out)
}
