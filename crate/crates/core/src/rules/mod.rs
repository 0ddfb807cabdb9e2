//! The nine reduction rules and the fixpoint driver.
//!
//! | rule | effect |
//! |------|--------|
//! | R1 | verdict from `k` and emptiness |
//! | R2 | delete a vertex or edge in no triangle |
//! | R3 | delete an isolated-in-triangles K4, lower `k` |
//! | R4 | split a vertex whose incident edges fall apart into two groups |
//! | R5 | verdict from a packing larger than `k` |
//! | R6 | trade one packed triangle for two |
//! | R7 | trade two packed triangles for three |
//! | R8 | trade two packed triangles for two covering more vertices |
//! | R9 | delete a fat-head crown and its head, lower `k` |
//!
//! Rules are tried in that order. Any graph change restarts at R1 and
//! rebuilds the packing from scratch; a packing change (R6–R8) refills the
//! packing to maximality and restarts at R5.

mod lift;
mod packed;
mod simple;

pub use lift::{lift_solution, replay, LiftError, ReplayError};
pub use packed::{
    find_augment_one, find_augment_two, find_crown_reduction, find_revertex, rule_augment_one,
    rule_augment_two, rule_crown_reduce, rule_revertex, rule_threshold, Swap,
};
pub use simple::{
    find_clique_removal, find_prune, find_split, rule_k4, rule_prune, rule_split, rule_terminal,
};

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Instance, ProblemVariant, Triangle, VertexId};
use crate::packing::{greedy_maximal_packing, remaximalize, TrianglePacking};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RuleId {
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    R9,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::R1,
        RuleId::R2,
        RuleId::R3,
        RuleId::R4,
        RuleId::R5,
        RuleId::R6,
        RuleId::R7,
        RuleId::R8,
        RuleId::R9,
    ];
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    /// No rule applies; the instance is a kernel.
    Reduced,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Yes => f.write_str("yes"),
            Verdict::No => f.write_str("no"),
            Verdict::Reduced => f.write_str("reduced"),
        }
    }
}

/// One rule application, with enough detail to replay it on the graph and
/// to lift solutions back through it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule")]
pub enum RuleEvent {
    #[serde(rename = "R1")]
    Terminal { verdict: Verdict },
    #[serde(rename = "R2")]
    Prune {
        vertices: Vec<VertexId>,
        edges: Vec<Edge>,
    },
    #[serde(rename = "R3")]
    CliqueRemoval { clique: [VertexId; 4], k_delta: i64 },
    #[serde(rename = "R4")]
    Split {
        vertex: VertexId,
        first: VertexId,
        second: VertexId,
        first_neighbors: Vec<VertexId>,
        second_neighbors: Vec<VertexId>,
    },
    #[serde(rename = "R5")]
    Threshold { packing_size: usize, verdict: Verdict },
    #[serde(rename = "R6")]
    AugmentOne {
        removed: Vec<Triangle>,
        added: Vec<Triangle>,
        refill: Vec<Triangle>,
    },
    #[serde(rename = "R7")]
    AugmentTwo {
        removed: Vec<Triangle>,
        added: Vec<Triangle>,
        refill: Vec<Triangle>,
    },
    #[serde(rename = "R8")]
    Revertex {
        removed: Vec<Triangle>,
        added: Vec<Triangle>,
        refill: Vec<Triangle>,
    },
    #[serde(rename = "R9")]
    Crown {
        crown: Vec<VertexId>,
        head: Vec<Edge>,
        witness: Vec<Triangle>,
        k_delta: i64,
    },
}

impl RuleEvent {
    pub fn rule(&self) -> RuleId {
        match self {
            RuleEvent::Terminal { .. } => RuleId::R1,
            RuleEvent::Prune { .. } => RuleId::R2,
            RuleEvent::CliqueRemoval { .. } => RuleId::R3,
            RuleEvent::Split { .. } => RuleId::R4,
            RuleEvent::Threshold { .. } => RuleId::R5,
            RuleEvent::AugmentOne { .. } => RuleId::R6,
            RuleEvent::AugmentTwo { .. } => RuleId::R7,
            RuleEvent::Revertex { .. } => RuleId::R8,
            RuleEvent::Crown { .. } => RuleId::R9,
        }
    }

    pub fn k_delta(&self) -> i64 {
        match self {
            RuleEvent::CliqueRemoval { k_delta, .. } | RuleEvent::Crown { k_delta, .. } => *k_delta,
            _ => 0,
        }
    }

    pub fn changes_graph(&self) -> bool {
        matches!(
            self,
            RuleEvent::Prune { .. }
                | RuleEvent::CliqueRemoval { .. }
                | RuleEvent::Split { .. }
                | RuleEvent::Crown { .. }
        )
    }
}

/// Applications per rule.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RuleCounters(BTreeMap<RuleId, usize>);

impl RuleCounters {
    pub fn get(&self, rule: RuleId) -> usize {
        self.0.get(&rule).copied().unwrap_or(0)
    }

    fn bump(&mut self, rule: RuleId) {
        *self.0.entry(rule).or_default() += 1;
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

/// Deliberate rule bugs for mutation-testing the verification harness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// R3 deletes the clique without lowering `k`.
    CliqueKeepsParameter,
    /// R9 lowers `k` by one more than the head size.
    CrownOvercharges,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct KernelConfig {
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KernelOutcome {
    pub verdict: Verdict,
    /// The instance when the driver stopped: the kernel for `Reduced`, the
    /// instance on which R1 or R5 fired otherwise.
    pub instance: Instance,
    /// Maximal packing of `instance.graph` (empty if R1 fired before one
    /// was built).
    pub packing: TrianglePacking,
    pub trace: Vec<RuleEvent>,
    pub counters: RuleCounters,
}

impl KernelOutcome {
    pub fn trace_json(&self) -> String {
        trace_to_json(&self.trace)
    }
}

pub fn trace_to_json(trace: &[RuleEvent]) -> String {
    serde_json::to_string_pretty(trace).expect("events serialize")
}

pub fn trace_from_json(text: &str) -> Result<Vec<RuleEvent>, serde_json::Error> {
    serde_json::from_str(text)
}

/// Applies a graph-changing event to `inst`. Packing events are ignored.
pub(crate) fn apply_graph_event(inst: &mut Instance, ev: &RuleEvent) -> Result<(), ReplayError> {
    let g = &mut inst.graph;
    match ev {
        RuleEvent::Prune { vertices, edges } => {
            for &e in edges {
                if !g.remove_edge(e) {
                    return Err(ReplayError::MissingEdge(e));
                }
            }
            for &v in vertices {
                if !g.has_vertex(v) {
                    return Err(ReplayError::MissingVertex(v));
                }
                if g.degree(v) != 0 {
                    return Err(ReplayError::Mismatch(format!(
                        "pruned vertex {v} still has edges"
                    )));
                }
                g.remove_vertex(v);
            }
        }
        RuleEvent::CliqueRemoval { clique, k_delta } => {
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    let e = Edge::try_new(a, b).map_err(|e| ReplayError::Mismatch(e.to_string()))?;
                    if !g.remove_edge(e) {
                        return Err(ReplayError::MissingEdge(e));
                    }
                }
            }
            inst.k -= k_delta;
        }
        RuleEvent::Split {
            vertex,
            first,
            second,
            first_neighbors,
            second_neighbors,
        } => {
            let one: Vec<Edge> = first_neighbors.iter().map(|&u| Edge::new(u, *vertex)).collect();
            let two: Vec<Edge> = second_neighbors.iter().map(|&u| Edge::new(u, *vertex)).collect();
            let minted = g
                .split_vertex(*vertex, &one, &two)
                .map_err(|e| ReplayError::Mismatch(e.to_string()))?;
            if minted != (*first, *second) {
                return Err(ReplayError::Mismatch(format!(
                    "split of {vertex} minted {minted:?}, trace says ({first}, {second})"
                )));
            }
        }
        RuleEvent::Crown {
            crown,
            head,
            k_delta,
            ..
        } => {
            for &c in crown {
                if !g.has_vertex(c) {
                    return Err(ReplayError::MissingVertex(c));
                }
                g.remove_vertex(c);
            }
            for &e in head {
                if !g.remove_edge(e) {
                    return Err(ReplayError::MissingEdge(e));
                }
            }
            inst.k -= k_delta;
        }
        RuleEvent::Terminal { .. }
        | RuleEvent::Threshold { .. }
        | RuleEvent::AugmentOne { .. }
        | RuleEvent::AugmentTwo { .. }
        | RuleEvent::Revertex { .. } => {}
    }
    Ok(())
}

fn swap_event(rule: RuleId, swap: Swap, refill: Vec<Triangle>) -> RuleEvent {
    let Swap { removed, added } = swap;
    match rule {
        RuleId::R6 => RuleEvent::AugmentOne { removed, added, refill },
        RuleId::R7 => RuleEvent::AugmentTwo { removed, added, refill },
        RuleId::R8 => RuleEvent::Revertex { removed, added, refill },
        _ => unreachable!("only R6-R8 swap triangles"),
    }
}

/// Runs the rules to a verdict or a fixpoint.
pub fn kernelize(inst: &Instance) -> KernelOutcome {
    kernelize_with(inst, &KernelConfig::default())
}

pub fn kernelize_with(inst: &Instance, config: &KernelConfig) -> KernelOutcome {
    let mut cur = inst.clone();
    let mut trace = Vec::new();
    let mut counters = RuleCounters::default();

    let mut record = |cur: &mut Instance, ev: RuleEvent, trace: &mut Vec<RuleEvent>| {
        apply_graph_event(cur, &ev).expect("driver events apply cleanly");
        counters.bump(ev.rule());
        trace.push(ev);
    };

    loop {
        if let Some(verdict) = rule_terminal(&cur) {
            record(&mut cur, RuleEvent::Terminal { verdict }, &mut trace);
            return finish(verdict, cur, TrianglePacking::new(), trace, counters);
        }
        if let Some(ev) = find_prune(&cur.graph) {
            record(&mut cur, ev, &mut trace);
            continue;
        }
        if let Some(mut ev) = find_clique_removal(&cur.graph, cur.variant) {
            if config.fault == Some(Fault::CliqueKeepsParameter) {
                if let RuleEvent::CliqueRemoval { k_delta, .. } = &mut ev {
                    *k_delta = 0;
                }
            }
            record(&mut cur, ev, &mut trace);
            continue;
        }
        if let Some(ev) = find_split(&cur.graph) {
            record(&mut cur, ev, &mut trace);
            continue;
        }

        let mut s = greedy_maximal_packing(&cur.graph);
        loop {
            if let Some(verdict) = rule_threshold(&cur, &s) {
                record(
                    &mut cur,
                    RuleEvent::Threshold {
                        packing_size: s.len(),
                        verdict,
                    },
                    &mut trace,
                );
                return finish(verdict, cur, s, trace, counters);
            }
            let found = find_augment_one(&cur.graph, &s)
                .map(|sw| (RuleId::R6, sw))
                .or_else(|| find_augment_two(&cur.graph, &s).map(|sw| (RuleId::R7, sw)))
                .or_else(|| find_revertex(&cur.graph, &s).map(|sw| (RuleId::R8, sw)));
            let Some((rule, swap)) = found else {
                break;
            };
            let swapped = swap.apply(&s).expect("swap keeps the packing disjoint");
            let refilled = remaximalize(&cur.graph, swapped.clone());
            let refill: Vec<Triangle> = refilled
                .triangles()
                .filter(|t| !swapped.contains(*t))
                .collect();
            s = refilled;
            record(&mut cur, swap_event(rule, swap, refill), &mut trace);
        }

        if let Some(mut ev) = find_crown_reduction(&cur.graph, &s) {
            if config.fault == Some(Fault::CrownOvercharges) {
                if let RuleEvent::Crown { k_delta, .. } = &mut ev {
                    *k_delta += 1;
                }
            }
            record(&mut cur, ev, &mut trace);
            continue;
        }
        return finish(Verdict::Reduced, cur, s, trace, counters);
    }
}

fn finish(
    verdict: Verdict,
    instance: Instance,
    packing: TrianglePacking,
    trace: Vec<RuleEvent>,
    counters: RuleCounters,
) -> KernelOutcome {
    KernelOutcome {
        verdict,
        instance,
        packing,
        trace,
        counters,
    }
}

/// The first rule among R1–R9 that applies to `inst`, taking R5–R9 with
/// respect to `s`. `None` certifies that the instance is reduced.
pub fn first_applicable(inst: &Instance, s: &TrianglePacking) -> Option<RuleId> {
    let g = &inst.graph;
    if rule_terminal(inst).is_some() {
        Some(RuleId::R1)
    } else if find_prune(g).is_some() {
        Some(RuleId::R2)
    } else if find_clique_removal(g, inst.variant).is_some() {
        Some(RuleId::R3)
    } else if find_split(g).is_some() {
        Some(RuleId::R4)
    } else if rule_threshold(inst, s).is_some() {
        Some(RuleId::R5)
    } else if find_augment_one(g, s).is_some() {
        Some(RuleId::R6)
    } else if find_augment_two(g, s).is_some() {
        Some(RuleId::R7)
    } else if find_revertex(g, s).is_some() {
        Some(RuleId::R8)
    } else if find_crown_reduction(g, s).is_some() {
        Some(RuleId::R9)
    } else {
        None
    }
}

/// The `k` decrement of R3 for each variant.
pub fn clique_k_delta(variant: ProblemVariant) -> i64 {
    match variant {
        ProblemVariant::Etp => 1,
        ProblemVariant::Etc => 2,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::oracle::{self, Solution};

    fn inst(g: Graph, k: i64, variant: ProblemVariant) -> Instance {
        Instance::new(g, k, variant)
    }

    #[test]
    fn k4_examples() {
        let out = kernelize(&inst(Graph::complete(4), 1, ProblemVariant::Etp));
        assert_eq!(out.verdict, Verdict::Yes);
        assert_eq!(out.counters.get(RuleId::R3), 1);

        let out = kernelize(&inst(Graph::complete(4), 1, ProblemVariant::Etc));
        assert_eq!(out.verdict, Verdict::No);
        assert!(!oracle::decide(&inst(Graph::complete(4), 1, ProblemVariant::Etc)).unwrap());

        let out = kernelize(&inst(Graph::complete(4), 2, ProblemVariant::Etc));
        assert_eq!(out.verdict, Verdict::Yes);
    }

    #[test]
    fn reduced_outcome_is_a_fixpoint() {
        // Two triangles sharing a vertex, with a pendant triangle hung on
        // each packed edge, do not reduce to a verdict for large k.
        let g = Graph::from_edges([
            (0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4),
            (0, 5), (1, 5), (0, 6), (1, 6), (0, 7), (1, 7),
        ])
        .unwrap();
        for variant in [ProblemVariant::Etp, ProblemVariant::Etc] {
            let out = kernelize(&inst(g.clone(), 5, variant));
            if out.verdict == Verdict::Reduced {
                assert_eq!(first_applicable(&out.instance, &out.packing), None);
                let again = kernelize(&out.instance);
                assert_eq!(again.verdict, Verdict::Reduced);
                assert!(again.trace.iter().all(|e| !e.changes_graph()));
            }
        }
    }

    #[test]
    fn trace_json_round_trips() {
        let g = Graph::from_edges([(0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4), (4, 5)]).unwrap();
        let out = kernelize(&inst(g, 3, ProblemVariant::Etp));
        let text = out.trace_json();
        assert_eq!(trace_from_json(&text).unwrap(), out.trace);
        assert!(text.contains("\"rule\": \"R2\""));
    }

    #[test]
    fn trace_replays_to_the_kernel() {
        let g = Graph::from_edges([
            (0, 1), (0, 2), (1, 2), (0, 3), (0, 4), (3, 4),
            (5, 6), (5, 7), (5, 8), (6, 7), (6, 8), (7, 8), (8, 9),
        ])
        .unwrap();
        for variant in [ProblemVariant::Etp, ProblemVariant::Etc] {
            let original = inst(g.clone(), 4, variant);
            let out = kernelize(&original);
            let replayed = replay(&original, &out.trace).unwrap();
            assert_eq!(replayed, out.instance);
        }
    }

    #[test]
    fn faults_change_the_answer() {
        let original = inst(Graph::complete(4), 1, ProblemVariant::Etp);
        let config = KernelConfig {
            fault: Some(Fault::CliqueKeepsParameter),
        };
        assert_eq!(kernelize_with(&original, &config).verdict, Verdict::No);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_instance(max_n: u32) -> impl Strategy<Value = Instance> {
            (3..=max_n, 1u32..=9, any::<bool>()).prop_flat_map(|(n, density, etp)| {
                let pairs = (n * (n - 1) / 2) as usize;
                let variant = if etp { ProblemVariant::Etp } else { ProblemVariant::Etc };
                (
                    proptest::collection::vec(proptest::bool::weighted(density as f64 / 10.0), pairs),
                    0..=i64::from(n),
                )
                    .prop_map(move |(bits, k)| {
                        let mut g = Graph::new();
                        let mut bit = bits.into_iter();
                        for u in 0..n {
                            g.add_vertex(u);
                            for v in 0..u {
                                if bit.next().unwrap() {
                                    g.add_edge(u, v).unwrap();
                                }
                            }
                        }
                        Instance::new(g, k, variant)
                    })
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(400))]

            #[test]
            fn verdicts_agree_with_the_oracle(inst in arb_instance(9)) {
                let out = kernelize(&inst);
                let truth = oracle::decide(&inst).unwrap();
                match out.verdict {
                    Verdict::Yes => prop_assert!(truth),
                    Verdict::No => prop_assert!(!truth),
                    Verdict::Reduced => {
                        prop_assert_eq!(oracle::decide(&out.instance).unwrap(), truth);
                        prop_assert!(out.instance.graph.n() as i64 <= 3 * out.instance.k);
                    }
                }
            }

            #[test]
            fn trace_replays_and_kernel_is_a_fixpoint(inst in arb_instance(10)) {
                let out = kernelize(&inst);
                prop_assert_eq!(&replay(&inst, &out.trace).unwrap(), &out.instance);
                let json = out.trace_json();
                prop_assert_eq!(&trace_from_json(&json).unwrap(), &out.trace);
                if out.verdict == Verdict::Reduced {
                    prop_assert!(out.packing.is_maximal(&out.instance.graph));
                    prop_assert_eq!(first_applicable(&out.instance, &out.packing), None);
                }
            }

            #[test]
            fn solutions_lift(inst in arb_instance(9)) {
                let out = kernelize(&inst);
                if out.verdict == Verdict::No {
                    return Ok(());
                }
                let reduced = match out.verdict {
                    Verdict::Reduced => oracle::decide_with_witness(&out.instance).unwrap(),
                    _ => oracle::decide_with_witness(&out.instance)
                        .unwrap()
                        .or(Some(Solution::empty_for(inst.variant))),
                };
                if let Some(sol) = reduced {
                    let lifted = lift_solution(&inst, &out, &sol);
                    prop_assert!(lifted.is_ok(), "{:?}", lifted);
                }
            }
        }
    }
}
