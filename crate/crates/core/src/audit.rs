//! Certifies `n ≤ 3|S|` on a reduced instance by moving integer charges.
//!
//! Every labeled edge and every bad triangle starts with 3; the steps move
//! units onto vertices until each vertex holds at least 1. Each structural
//! fact the redistribution depends on is checked as it is used, so a bug in
//! the rules or the crown detector shows up as a failed check with a
//! witness rather than as a wrong bound.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::graph::{Edge, Graph, Instance, Triangle, VertexId};
use crate::packing::{
    classify_triangles, free_vertices, labeled_edges, triangle_components, ComponentIndex,
    TriangleClassification, TrianglePacking,
};
use crate::rules::{KernelOutcome, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Check {
    /// No packed triangle has two labeled edges.
    OneLabeledEdgePerTriangle,
    /// After step 2, each triangle component has at most one zero vertex.
    ComponentZeros,
    /// After step 2, components containing a bad triangle have no zero vertex.
    BadComponentsFunded,
    /// After step 2, a zero vertex in a component with a pretty-good
    /// triangle lies in V2.
    PrettyGoodZeroInV2,
    /// Every step-3 pattern has exactly one spanner of its two labeled
    /// edges in (F ∪ V1) ∖ C(v).
    UniqueOutsideSpanner,
    /// After step 3, V2 is funded and every zero vertex lies in F ∪ V1.
    ZerosInFreeOrV1,
    /// F′ ∪ V1′ is independent.
    ZeroSetIndependent,
    /// F′ spans only edges of L′.
    FreeZerosSpanLive,
    /// V1′ spans only edges of L′.
    V1ZerosSpanLive,
    /// |F′ ∪ V1′| ≤ |L′|.
    ZeroSetFitsLive,
    /// Total charge is the same after every step.
    ChargeConserved,
    /// Initial charge equals 3|S|.
    TotalMatchesPacking,
    NonNegative,
    /// After step 4, every vertex holds at least 1.
    AllVerticesCharged,
    /// n ≤ 3|S| ≤ 3k.
    VertexBound,
}

impl Check {
    pub const ALL: [Check; 15] = [
        Check::OneLabeledEdgePerTriangle,
        Check::ComponentZeros,
        Check::BadComponentsFunded,
        Check::PrettyGoodZeroInV2,
        Check::UniqueOutsideSpanner,
        Check::ZerosInFreeOrV1,
        Check::ZeroSetIndependent,
        Check::FreeZerosSpanLive,
        Check::V1ZerosSpanLive,
        Check::ZeroSetFitsLive,
        Check::ChargeConserved,
        Check::TotalMatchesPacking,
        Check::NonNegative,
        Check::AllVerticesCharged,
        Check::VertexBound,
    ];

    pub fn name(self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.as_str().map(str::to_owned))
            .unwrap_or_default()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub witnesses: Vec<String>,
}

/// Charges on vertices, edges and triangles, plus the sets they are
/// computed from.
#[derive(Clone, Debug)]
pub struct ChargeState {
    pub vertex_value: BTreeMap<VertexId, i64>,
    pub edge_value: BTreeMap<Edge, i64>,
    pub triangle_value: BTreeMap<Triangle, i64>,
    pub classification: TriangleClassification,
    pub components: ComponentIndex,
    pub free: BTreeSet<VertexId>,
    /// Zero vertices of F after step 3.
    pub free_zero: BTreeSet<VertexId>,
    /// Zero vertices of V1 after step 3.
    pub v1_zero: BTreeSet<VertexId>,
    /// Labeled edges still holding 1 after step 3.
    pub live: BTreeSet<Edge>,
    /// Total charge after init and each step, in order.
    pub totals: Vec<i64>,
    checks: BTreeMap<Check, CheckOutcome>,
}

impl ChargeState {
    pub fn total(&self) -> i64 {
        self.vertex_value.values().sum::<i64>()
            + self.edge_value.values().sum::<i64>()
            + self.triangle_value.values().sum::<i64>()
    }

    pub fn value(&self, v: VertexId) -> i64 {
        self.vertex_value.get(&v).copied().unwrap_or(0)
    }

    fn record(&mut self, check: Check, witness: Option<String>) {
        let entry = self.checks.entry(check).or_insert(CheckOutcome {
            passed: true,
            witnesses: Vec::new(),
        });
        if let Some(w) = witness {
            entry.passed = false;
            entry.witnesses.push(w);
        }
    }

    fn pass(&mut self, check: Check) {
        self.record(check, None);
    }

    fn fail(&mut self, check: Check, witness: String) {
        self.record(check, Some(witness));
    }

    fn add(&mut self, v: VertexId, delta: i64) {
        *self.vertex_value.entry(v).or_insert(0) += delta;
    }

    fn move_edge_to_vertex(&mut self, e: Edge, v: VertexId) {
        *self.edge_value.get_mut(&e).expect("charged edge") -= 1;
        self.add(v, 1);
    }

    fn snapshot_total(&mut self) {
        let t = self.total();
        self.totals.push(t);
    }
}

/// Value 3 on each labeled edge and each bad triangle, 0 elsewhere.
pub fn init_charges(g: &Graph, s: &TrianglePacking, classification: TriangleClassification) -> ChargeState {
    let mut cs = ChargeState {
        vertex_value: g.vertices().map(|v| (v, 0)).collect(),
        edge_value: classification.labeled.iter().map(|&e| (e, 3)).collect(),
        triangle_value: classification.bad.iter().map(|&t| (t, 3)).collect(),
        components: triangle_components(s),
        free: free_vertices(g, s),
        free_zero: BTreeSet::new(),
        v1_zero: BTreeSet::new(),
        live: BTreeSet::new(),
        totals: Vec::new(),
        checks: BTreeMap::new(),
        classification,
    };
    cs.pass(Check::OneLabeledEdgePerTriangle);
    for (t, es) in cs.classification.multi_labeled.clone() {
        let list: Vec<String> = es.iter().map(|e| e.to_string()).collect();
        cs.fail(
            Check::OneLabeledEdgePerTriangle,
            format!("triangle {t} has labeled edges {}", list.join(", ")),
        );
    }
    cs.pass(Check::TotalMatchesPacking);
    let expected = 3 * s.len() as i64;
    if cs.total() != expected {
        let got = cs.total();
        cs.fail(
            Check::TotalMatchesPacking,
            format!("initial charge {got}, expected {expected}"),
        );
    }
    cs.snapshot_total();
    cs
}

/// Each labeled edge gives 1 to each endpoint; each bad triangle gives 1
/// to each vertex.
pub fn step1(mut cs: ChargeState) -> ChargeState {
    let labeled: Vec<Edge> = cs.classification.labeled.iter().copied().collect();
    for e in labeled {
        *cs.edge_value.get_mut(&e).expect("labeled edge") -= 2;
        cs.add(e.lo(), 1);
        cs.add(e.hi(), 1);
    }
    let bad: Vec<Triangle> = cs.classification.bad.iter().copied().collect();
    for t in bad {
        *cs.triangle_value.get_mut(&t).expect("bad triangle") -= 3;
        for v in t.vertices() {
            cs.add(v, 1);
        }
    }
    cs.snapshot_total();
    cs
}

/// Within each triangle component, moves 1 from the smallest vertex holding
/// at least 2 to the smallest zero vertex, preferring V1 recipients, until
/// no donor or no recipient remains. Then checks the component properties.
pub fn step2(mut cs: ChargeState) -> ChargeState {
    for id in 0..cs.components.len() {
        let members: Vec<VertexId> = cs.components.members(id).iter().copied().collect();
        loop {
            let donor = members.iter().copied().find(|&v| cs.value(v) >= 2);
            let zeros = || members.iter().copied().filter(|&v| cs.value(v) == 0);
            let recipient = zeros()
                .find(|v| cs.classification.v1.contains(v))
                .or_else(|| zeros().next());
            let (Some(d), Some(r)) = (donor, recipient) else {
                break;
            };
            cs.add(d, -1);
            cs.add(r, 1);
        }
    }

    cs.pass(Check::ComponentZeros);
    cs.pass(Check::BadComponentsFunded);
    cs.pass(Check::PrettyGoodZeroInV2);
    for id in 0..cs.components.len() {
        let zeros: Vec<VertexId> = cs
            .components
            .members(id)
            .iter()
            .copied()
            .filter(|&v| cs.value(v) == 0)
            .collect();
        if zeros.len() > 1 {
            cs.fail(
                Check::ComponentZeros,
                format!("component {id} has zero vertices {zeros:?}"),
            );
        }
        let triangles = cs.components.triangles_in(id);
        let has_bad = triangles.iter().any(|t| cs.classification.bad.contains(t));
        let has_pretty = triangles.iter().any(|t| cs.classification.pretty_good.contains(t));
        if has_bad && !zeros.is_empty() {
            cs.fail(
                Check::BadComponentsFunded,
                format!("component {id} has a bad triangle and zero vertices {zeros:?}"),
            );
        }
        if has_pretty {
            for &z in &zeros {
                if !cs.classification.v2.contains(&z) {
                    cs.fail(
                        Check::PrettyGoodZeroInV2,
                        format!("component {id}: zero vertex {z} is not in V2"),
                    );
                }
            }
        }
    }
    cs.snapshot_total();
    cs
}

/// A pair of pretty-good triangles `vuw`, `vxy` meeting at `v`, with
/// labeled edges `uv`, `vx` and an edge `wy`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pattern {
    v: VertexId,
    uv: Edge,
    vx: Edge,
}

fn patterns(g: &Graph, cs: &ChargeState) -> Vec<Pattern> {
    let mut by_vertex: BTreeMap<VertexId, Vec<Triangle>> = BTreeMap::new();
    for &t in &cs.classification.pretty_good {
        for v in t.vertices() {
            by_vertex.entry(v).or_default().push(t);
        }
    }
    let mut out = Vec::new();
    for (&v, ts) in &by_vertex {
        for &t1 in ts {
            for &t2 in ts {
                if t1 == t2 {
                    continue;
                }
                for uv in cs.classification.labeled_of(t1) {
                    for vx in cs.classification.labeled_of(t2) {
                        if !uv.contains(v) || !vx.contains(v) {
                            continue;
                        }
                        let (w, y) = (t1.apex(uv), t2.apex(vx));
                        if w != y && g.adjacent(w, y) {
                            out.push(Pattern { v, uv, vx });
                        }
                    }
                }
            }
        }
    }
    out
}

/// For each pattern in order: `vx` gives 1 to the single outside spanner if
/// that spanner is still at 0, and `uv` gives 1 to the zero vertex of `C(v)`
/// if there is one and no other F ∪ V1 spanner of `uv` would be left at 0.
/// An edge gives at most once.
pub fn step3(g: &Graph, mut cs: ChargeState) -> ChargeState {
    cs.pass(Check::UniqueOutsideSpanner);
    for p in patterns(g, &cs) {
        let comp = cs.components.component_of(p.v).expect("packed vertex");
        let members = cs.components.members(comp).clone();
        let outside = |z: &VertexId| {
            (cs.free.contains(z) || cs.classification.v1.contains(z)) && !members.contains(z)
        };
        let spanners: BTreeSet<VertexId> = [p.uv, p.vx]
            .iter()
            .flat_map(|e| g.common_neighbors(e.lo(), e.hi()))
            .filter(|z| outside(z))
            .collect();
        if spanners.len() != 1 {
            cs.fail(
                Check::UniqueOutsideSpanner,
                format!(
                    "edges {} and {} at vertex {} have outside spanners {:?}",
                    p.uv, p.vx, p.v, spanners
                ),
            );
            continue;
        }
        let q = *spanners.first().expect("one spanner");
        if cs.value(q) == 0 && cs.edge_value[&p.vx] == 1 {
            cs.move_edge_to_vertex(p.vx, q);
        }
        let zero = members.iter().copied().find(|&z| cs.value(z) == 0);
        if let Some(z) = zero {
            let stranded = g.common_neighbors(p.uv.lo(), p.uv.hi()).into_iter().any(|s| {
                s != z
                    && (cs.free.contains(&s) || cs.classification.v1.contains(&s))
                    && cs.value(s) == 0
            });
            if cs.edge_value[&p.uv] == 1 && !stranded {
                cs.move_edge_to_vertex(p.uv, z);
            }
        }
    }
    cs.snapshot_total();
    cs
}

/// Derives F′, V1′, L′, checks the facts the final transfer relies on,
/// gives each zero vertex 1 from the first live edge still charged, and
/// checks the bound.
pub fn step4_and_report(g: &Graph, s: &TrianglePacking, mut cs: ChargeState) -> AuditReport {
    let zeros: Vec<VertexId> = g.vertices().filter(|&v| cs.value(v) == 0).collect();
    cs.free_zero = zeros.iter().copied().filter(|v| cs.free.contains(v)).collect();
    cs.v1_zero = zeros
        .iter()
        .copied()
        .filter(|v| cs.classification.v1.contains(v))
        .collect();
    cs.live = cs
        .classification
        .labeled
        .iter()
        .copied()
        .filter(|e| cs.edge_value[e] >= 1)
        .collect();

    cs.pass(Check::ZerosInFreeOrV1);
    for &z in &zeros {
        if !cs.free_zero.contains(&z) && !cs.v1_zero.contains(&z) {
            let role = if cs.classification.v2.contains(&z) { "V2 " } else { "" };
            cs.fail(Check::ZerosInFreeOrV1, format!("{role}vertex {z} holds 0"));
        }
    }

    let zero_set: BTreeSet<VertexId> = cs.free_zero.union(&cs.v1_zero).copied().collect();
    cs.pass(Check::ZeroSetIndependent);
    for &z in &zero_set {
        for u in g.neighbors(z).filter(|&u| u > z && zero_set.contains(&u)) {
            cs.fail(Check::ZeroSetIndependent, format!("edge {}", Edge::new(z, u)));
        }
    }

    for (check, set) in [
        (Check::FreeZerosSpanLive, cs.free_zero.clone()),
        (Check::V1ZerosSpanLive, cs.v1_zero.clone()),
    ] {
        cs.pass(check);
        for z in set {
            for e in g.spanned_edges(z) {
                if !cs.live.contains(&e) {
                    cs.fail(check, format!("vertex {z} spans {e} outside L′"));
                }
            }
        }
    }

    cs.pass(Check::ZeroSetFitsLive);
    if zero_set.len() > cs.live.len() {
        cs.fail(
            Check::ZeroSetFitsLive,
            format!("|F′ ∪ V1′| = {} > |L′| = {}", zero_set.len(), cs.live.len()),
        );
    }

    let live: Vec<Edge> = cs.live.iter().copied().collect();
    for &z in &zero_set {
        if let Some(&e) = live.iter().find(|e| cs.edge_value[e] >= 1) {
            cs.move_edge_to_vertex(e, z);
        }
    }
    cs.snapshot_total();

    cs.pass(Check::ChargeConserved);
    if cs.totals.windows(2).any(|w| w[0] != w[1]) {
        let totals = cs.totals.clone();
        cs.fail(Check::ChargeConserved, format!("totals by step {totals:?}"));
    }

    cs.pass(Check::NonNegative);
    let negative: Vec<String> = cs
        .vertex_value
        .iter()
        .filter(|(_, &x)| x < 0)
        .map(|(v, x)| format!("vertex {v} holds {x}"))
        .chain(
            cs.edge_value
                .iter()
                .filter(|(_, &x)| x < 0)
                .map(|(e, x)| format!("edge {e} holds {x}")),
        )
        .chain(
            cs.triangle_value
                .iter()
                .filter(|(_, &x)| x < 0)
                .map(|(t, x)| format!("triangle {t} holds {x}")),
        )
        .collect();
    for w in negative {
        cs.fail(Check::NonNegative, w);
    }

    cs.pass(Check::AllVerticesCharged);
    let uncharged: Vec<VertexId> = g.vertices().filter(|&v| cs.value(v) < 1).collect();
    for v in uncharged {
        cs.fail(Check::AllVerticesCharged, format!("vertex {v}"));
    }

    cs.pass(Check::VertexBound);
    let (n, bound) = (g.n(), 3 * s.len());
    if n > bound {
        cs.fail(Check::VertexBound, format!("n = {n} > 3|S| = {bound}"));
    }

    let c = &cs.classification;
    let counters = AuditCounters {
        n,
        m: g.m(),
        k: None,
        packing_size: s.len(),
        k1: c.k1(),
        k2: c.k2(),
        k3: c.k3(),
        labeled: c.labeled.len(),
        free: cs.free.len(),
        free_zero: cs.free_zero.len(),
        v1_zero: cs.v1_zero.len(),
        live: cs.live.len(),
    };
    let min_vertex_value = g.vertices().map(|v| cs.value(v)).min().unwrap_or(0);
    let passed = cs.checks.values().all(|o| o.passed);
    AuditReport {
        passed,
        checks: cs.checks,
        counters,
        totals: cs.totals,
        min_vertex_value,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditCounters {
    pub n: usize,
    pub m: usize,
    pub k: Option<i64>,
    pub packing_size: usize,
    pub k1: usize,
    pub k2: usize,
    pub k3: usize,
    pub labeled: usize,
    pub free: usize,
    pub free_zero: usize,
    pub v1_zero: usize,
    pub live: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditReport {
    pub passed: bool,
    pub checks: BTreeMap<Check, CheckOutcome>,
    pub counters: AuditCounters,
    pub totals: Vec<i64>,
    pub min_vertex_value: i64,
}

impl AuditReport {
    pub fn failures(&self) -> impl Iterator<Item = (Check, &CheckOutcome)> {
        self.checks.iter().filter(|(_, o)| !o.passed).map(|(c, o)| (*c, o))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs all four steps on `(g, s)`. `s` must be a maximal packing of `g`.
pub fn audit_packing(g: &Graph, s: &TrianglePacking) -> AuditReport {
    let labeled = labeled_edges(g, s);
    let classification = classify_triangles(g, s, &labeled);
    let cs = init_charges(g, s, classification);
    let cs = step1(cs);
    let cs = step2(cs);
    let cs = step3(g, cs);
    step4_and_report(g, s, cs)
}

/// Audits an instance with its packing and additionally checks `|S| ≤ k`.
pub fn audit(inst: &Instance, s: &TrianglePacking) -> AuditReport {
    let mut report = audit_packing(&inst.graph, s);
    report.counters.k = Some(inst.k);
    if s.len() as i64 > inst.k {
        let entry = report.checks.entry(Check::VertexBound).or_default();
        entry.passed = false;
        entry
            .witnesses
            .push(format!("|S| = {} > k = {}", s.len(), inst.k));
        report.passed = false;
    }
    report
}

/// Audits the kernel of a `Reduced` outcome; `None` if the driver stopped
/// on a verdict.
pub fn audit_outcome(outcome: &KernelOutcome) -> Option<AuditReport> {
    (outcome.verdict == Verdict::Reduced).then(|| audit(&outcome.instance, &outcome.packing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::ProblemVariant;
    use crate::packing::greedy_maximal_packing;
    use crate::rules::kernelize;

    fn state(g: &Graph) -> (TrianglePacking, ChargeState) {
        let s = greedy_maximal_packing(g);
        let labeled = labeled_edges(g, &s);
        let cls = classify_triangles(g, &s, &labeled);
        let cs = init_charges(g, &s, cls);
        (s, cs)
    }

    fn two_disjoint_triangles() -> Graph {
        Graph::from_edges([(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap()
    }

    #[test]
    fn single_bad_triangle() {
        let g = Graph::complete(3);
        let (s, cs) = state(&g);
        assert_eq!(cs.total(), 3);
        assert_eq!(cs.triangle_value[&Triangle::new(0, 1, 2)], 3);
        let cs = step1(cs);
        assert!((0..3).all(|v| cs.value(v) == 1));
        let report = step4_and_report(&g, &s, step3(&g, step2(cs)));
        assert!(report.passed, "{}", report.to_json());
        assert_eq!(report.counters.n, 3);
    }

    #[test]
    fn two_bad_triangles_total_six() {
        let g = two_disjoint_triangles();
        let (s, cs) = state(&g);
        assert_eq!(cs.total(), 6);
        let report = audit(&Instance::new(g, 2, ProblemVariant::Etp), &s);
        assert!(report.passed, "{}", report.to_json());
        assert_eq!(report.counters.n, 6);
    }

    #[test]
    fn excellent_triangle_step1() {
        // 0-1-2 packed, 3 spans 01 only.
        let g = Graph::from_edges([(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)]).unwrap();
        let s = TrianglePacking::from_triangles(&g, [Triangle::new(0, 1, 2)]).unwrap();
        let labeled = labeled_edges(&g, &s);
        let cls = classify_triangles(&g, &s, &labeled);
        assert_eq!(cls.k1(), 1);
        let cs = init_charges(&g, &s, cls);
        assert_eq!(cs.edge_value[&Edge::new(0, 1)], 3);
        assert_eq!(cs.total(), 3);
        let cs = step1(cs);
        assert_eq!((cs.value(0), cs.value(1), cs.value(2)), (1, 1, 0));
        assert_eq!(cs.edge_value[&Edge::new(0, 1)], 1);
    }

    #[test]
    fn step2_moves_from_rich_to_zero() {
        let g = Graph::complete(3);
        let (_, mut cs) = state(&g);
        cs.triangle_value.clear();
        cs.vertex_value = BTreeMap::from([(0, 2), (1, 0), (2, 1)]);
        let cs = step2(cs);
        assert_eq!((cs.value(0), cs.value(1), cs.value(2)), (1, 1, 1));

        let (_, mut cs) = state(&g);
        cs.triangle_value.clear();
        cs.vertex_value = BTreeMap::from([(0, 1), (1, 1), (2, 0)]);
        let cs = step2(cs);
        assert_eq!((cs.value(0), cs.value(1), cs.value(2)), (1, 1, 0));
        assert!(cs.checks[&Check::ComponentZeros].passed);
    }

    #[test]
    fn step3_detects_a_second_outside_spanner() {
        // Pretty-good triangles 0-1-2 and 0-3-4 meet at 0 with labeled edges
        // 01 and 03 and the edge 2-4. Vertex 5 spans 01, vertex 6 spans 03.
        let g = Graph::from_edges([
            (0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (2, 4),
            (0, 5), (1, 5), (0, 6), (3, 6),
        ])
        .unwrap();
        let s = TrianglePacking::from_triangles(&g, [Triangle::new(0, 1, 2), Triangle::new(0, 3, 4)]).unwrap();
        let labeled = labeled_edges(&g, &s);
        let cls = classify_triangles(&g, &s, &labeled);
        assert_eq!(cls.k2(), 2);
        let cs = step3(&g, step2(step1(init_charges(&g, &s, cls))));
        assert!(!cs.checks[&Check::UniqueOutsideSpanner].passed);
    }

    #[test]
    fn step3_pattern_with_one_spanner_moves_charge() {
        // As above but 5 spans both 01 and 03.
        let g = Graph::from_edges([
            (0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4), (2, 4),
            (0, 5), (1, 5), (3, 5),
        ])
        .unwrap();
        let s = TrianglePacking::from_triangles(&g, [Triangle::new(0, 1, 2), Triangle::new(0, 3, 4)]).unwrap();
        let labeled = labeled_edges(&g, &s);
        let cls = classify_triangles(&g, &s, &labeled);
        let cs = step2(step1(init_charges(&g, &s, cls)));
        assert_eq!(cs.value(5), 0);
        let zero_before: Vec<_> = (0..5).filter(|&v| cs.value(v) == 0).collect();
        let cs = step3(&g, cs);
        assert!(cs.checks[&Check::UniqueOutsideSpanner].passed);
        assert_eq!(cs.value(5), 1);
        for z in zero_before {
            assert_eq!(cs.value(z), 1);
        }
        assert_eq!(cs.totals.windows(2).filter(|w| w[0] != w[1]).count(), 0);
    }

    #[test]
    fn kernels_pass_the_audit() {
        let g = two_disjoint_triangles();
        let out = kernelize(&Instance::new(g, 2, ProblemVariant::Etc));
        assert_eq!(out.verdict, Verdict::Reduced);
        let report = audit_outcome(&out).unwrap();
        assert!(report.passed, "{}", report.to_json());
        assert!(audit_outcome(&kernelize(&Instance::new(Graph::complete(3), 0, ProblemVariant::Etp))).is_none());
    }

    #[test]
    fn report_names_checks_in_kebab_case() {
        assert_eq!(Check::OneLabeledEdgePerTriangle.name(), "one-labeled-edge-per-triangle");
        let report = audit_packing(&Graph::complete(3), &greedy_maximal_packing(&Graph::complete(3)));
        assert!(report.to_json().contains("\"vertex-bound\""));
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_instance() -> impl Strategy<Value = Instance> {
            (4u32..=14, 1u32..=8, any::<bool>()).prop_flat_map(|(n, density, etp)| {
                let pairs = (n * (n - 1) / 2) as usize;
                let variant = if etp { ProblemVariant::Etp } else { ProblemVariant::Etc };
                (
                    proptest::collection::vec(proptest::bool::weighted(density as f64 / 10.0), pairs),
                    1..=i64::from(n),
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
            #![proptest_config(ProptestConfig::with_cases(500))]

            #[test]
            fn every_kernel_passes(inst in arb_instance()) {
                let out = kernelize(&inst);
                if let Some(report) = audit_outcome(&out) {
                    prop_assert!(report.passed, "{}", report.to_json());
                    prop_assert!(report.min_vertex_value >= 1);
                }
            }
        }
    }
}
