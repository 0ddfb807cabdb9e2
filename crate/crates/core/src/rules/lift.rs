//! Replaying traces and carrying solutions back to the original instance.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{Edge, Instance, ProblemVariant, Triangle, VertexId};
use crate::oracle::{Solution, SolutionError};

use super::{apply_graph_event, KernelOutcome, RuleEvent, Verdict};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ReplayError {
    #[error("trace deletes missing vertex {0}")]
    MissingVertex(VertexId),
    #[error("trace deletes missing edge {0}")]
    MissingEdge(Edge),
    #[error("trace does not match the instance: {0}")]
    Mismatch(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LiftError {
    #[error("kernel answered `no`; there is nothing to lift")]
    NoInstance,
    #[error("solution is invalid for the reduced instance: {0}")]
    InvalidReduced(SolutionError),
    #[error("lifted solution is invalid for the original instance: {0}")]
    InvalidLifted(SolutionError),
}

/// Applies the graph-changing events of `trace` to `original` in order.
pub fn replay(original: &Instance, trace: &[RuleEvent]) -> Result<Instance, ReplayError> {
    let mut cur = original.clone();
    for ev in trace {
        apply_graph_event(&mut cur, ev)?;
    }
    Ok(cur)
}

fn rename(v: VertexId, map: &HashMap<VertexId, VertexId>) -> VertexId {
    map.get(&v).copied().unwrap_or(v)
}

/// Turns a solution of `outcome.instance` into one of `original`, walking
/// the trace backwards: crowns contribute their witness triangles (ETP) or
/// head edges (ETC), removed cliques one triangle or two disjoint edges,
/// and split vertices are merged back.
pub fn lift_solution(
    original: &Instance,
    outcome: &KernelOutcome,
    reduced: &Solution,
) -> Result<Solution, LiftError> {
    if outcome.verdict == Verdict::No {
        return Err(LiftError::NoInstance);
    }
    reduced
        .validate(&outcome.instance)
        .map_err(LiftError::InvalidReduced)?;

    let (mut triangles, mut edges) = match reduced {
        Solution::Packing(ts) => (ts.clone(), Vec::new()),
        Solution::Cover(es) => (Vec::new(), es.clone()),
    };
    let etp = original.variant == ProblemVariant::Etp;

    for ev in outcome.trace.iter().rev() {
        match ev {
            RuleEvent::Crown { head, witness, .. } => {
                if etp {
                    triangles.extend(witness.iter().copied());
                } else {
                    edges.extend(head.iter().copied());
                }
            }
            RuleEvent::CliqueRemoval { clique: [a, b, c, d], .. } => {
                if etp {
                    triangles.push(Triangle::new(*a, *b, *c));
                } else {
                    edges.push(Edge::new(*a, *b));
                    edges.push(Edge::new(*c, *d));
                }
            }
            RuleEvent::Split {
                vertex,
                first,
                second,
                ..
            } => {
                let map = HashMap::from([(*first, *vertex), (*second, *vertex)]);
                for t in &mut triangles {
                    let [a, b, c] = t.vertices();
                    *t = Triangle::new(rename(a, &map), rename(b, &map), rename(c, &map));
                }
                for e in &mut edges {
                    *e = Edge::new(rename(e.lo(), &map), rename(e.hi(), &map));
                }
            }
            _ => {}
        }
    }

    let lifted = if etp {
        Solution::Packing(triangles)
    } else {
        Solution::Cover(edges)
    };
    lifted.validate(original).map_err(LiftError::InvalidLifted)?;
    Ok(lifted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle;
    use crate::rules::kernelize;

    fn bowtie_with_k4() -> Graph {
        Graph::from_edges([
            (0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4),
            (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (7, 8),
        ])
        .unwrap()
    }

    #[test]
    fn lifts_through_splits_and_cliques() {
        let g = bowtie_with_k4();
        for (variant, k) in [(ProblemVariant::Etp, 3), (ProblemVariant::Etc, 4)] {
            let original = Instance::new(g.clone(), k, variant);
            let out = kernelize(&original);
            // Two disjoint triangles at k = 2 are already a kernel.
            assert_eq!(out.verdict, Verdict::Reduced);
            assert_eq!(out.instance.k, 2);
            let reduced = oracle::decide_with_witness(&out.instance).unwrap().unwrap();
            let lifted = lift_solution(&original, &out, &reduced).unwrap();
            lifted.validate(&original).unwrap();
        }
    }

    #[test]
    fn rejects_bad_reduced_solutions() {
        let original = Instance::new(Graph::complete(5), 2, ProblemVariant::Etc);
        let mut out = kernelize(&original);
        out.verdict = Verdict::Reduced;
        let bogus = Solution::Cover(vec![]);
        if !out.instance.graph.has_no_edges() {
            assert!(matches!(
                lift_solution(&original, &out, &bogus),
                Err(LiftError::InvalidReduced(_))
            ));
        }
    }

    #[test]
    fn replay_rejects_foreign_traces() {
        let g = bowtie_with_k4();
        let out = kernelize(&Instance::new(g, 3, ProblemVariant::Etp));
        let other = Instance::new(Graph::complete(3), 1, ProblemVariant::Etp);
        assert!(replay(&other, &out.trace).is_err());
    }
}
