//! Seeded instance generators.
//!
//! All randomness comes from a ChaCha8 stream seeded with `seed`, so a
//! given [`GenSpec`] yields the same graph on every platform. Vertex labels
//! are shuffled after construction so gadgets are not contiguous id ranges.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GenKind {
    /// G(n, p).
    ErdosRenyi,
    /// `count` vertex-disjoint triangles on at least `3 count` vertices,
    /// plus G(n, noise) edges.
    PlantedPacking,
    /// `count` disjoint K4s plus G(n, noise) edges.
    K4Gadgets,
    /// `count` copies of a triangle `abc` with `t` extra vertices spanning
    /// `ab`, plus G(n, noise) edges.
    CrownGadgets,
    /// `count` bowties and windmills (triangles sharing one hub), chained
    /// through shared vertices, plus G(n, noise) edges.
    SplittableMix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenSpec {
    pub kind: GenKind,
    /// Vertex count for `erdos_renyi`; a lower bound for the gadget kinds.
    #[serde(default)]
    pub n: u32,
    /// Edge probability for `erdos_renyi`.
    #[serde(default)]
    pub p: f64,
    /// Gadget count.
    #[serde(default = "one")]
    pub count: u32,
    /// Probability of each extra random edge for the gadget kinds.
    #[serde(default)]
    pub noise: f64,
    /// Spanners per crown gadget.
    #[serde(default = "two")]
    pub t: u32,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> u32 {
    1
}

fn two() -> u32 {
    2
}

impl GenSpec {
    pub fn new(kind: GenKind, seed: u64) -> Self {
        GenSpec {
            kind,
            n: 0,
            p: 0.0,
            count: 1,
            noise: 0.0,
            t: 2,
            seed,
        }
    }

    pub fn erdos_renyi(n: u32, p: f64, seed: u64) -> Self {
        GenSpec {
            n,
            p,
            ..GenSpec::new(GenKind::ErdosRenyi, seed)
        }
    }

    pub fn gadgets(kind: GenKind, count: u32, noise: f64, seed: u64) -> Self {
        GenSpec {
            count,
            noise,
            ..GenSpec::new(kind, seed)
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        GenSpec {
            seed,
            ..self.clone()
        }
    }

    fn validate(&self) -> Result<(), GenError> {
        let prob = |name: &str, x: f64| {
            if (0.0..=1.0).contains(&x) {
                Ok(())
            } else {
                Err(GenError::Invalid(format!("{name} = {x} is not a probability")))
            }
        };
        prob("p", self.p)?;
        prob("noise", self.noise)?;
        match self.kind {
            GenKind::ErdosRenyi if self.n == 0 => Err(GenError::Invalid("n must be positive".into())),
            GenKind::ErdosRenyi => Ok(()),
            _ if self.count == 0 => Err(GenError::Invalid("count must be positive".into())),
            GenKind::CrownGadgets if self.t == 0 => Err(GenError::Invalid("t must be positive".into())),
            _ if self.count > 10_000 => Err(GenError::Invalid("count above 10000".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Invalid(String),
}

/// Builds edges on ids `0..` as it goes; `finish` pads to `n`, adds noise
/// and relabels.
struct Builder {
    edges: Vec<(VertexId, VertexId)>,
    next: VertexId,
}

impl Builder {
    fn new() -> Self {
        Builder {
            edges: Vec::new(),
            next: 0,
        }
    }

    fn fresh(&mut self) -> VertexId {
        self.next += 1;
        self.next - 1
    }

    fn triangle(&mut self, a: VertexId, b: VertexId, c: VertexId) {
        self.edges.extend([(a, b), (a, c), (b, c)]);
    }

    fn finish(mut self, n: u32, noise: f64, rng: &mut ChaCha8Rng) -> Graph {
        let n = n.max(self.next);
        if noise > 0.0 {
            for u in 0..n {
                for v in u + 1..n {
                    if rng.random_bool(noise) {
                        self.edges.push((u, v));
                    }
                }
            }
        }
        let mut label: Vec<VertexId> = (0..n).collect();
        label.shuffle(rng);
        let mut g = Graph::new();
        for &v in &label {
            g.add_vertex(v);
        }
        for (u, v) in self.edges {
            g.add_edge(label[u as usize], label[v as usize])
                .expect("builder never emits self-loops");
        }
        g
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph, GenError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut b = Builder::new();
    match spec.kind {
        GenKind::ErdosRenyi => return Ok(b.finish(spec.n, spec.p, &mut rng)),
        GenKind::PlantedPacking => {
            for _ in 0..spec.count {
                let (x, y, z) = (b.fresh(), b.fresh(), b.fresh());
                b.triangle(x, y, z);
            }
        }
        GenKind::K4Gadgets => {
            for _ in 0..spec.count {
                let q: Vec<VertexId> = (0..4).map(|_| b.fresh()).collect();
                for i in 0..4 {
                    for j in i + 1..4 {
                        b.edges.push((q[i], q[j]));
                    }
                }
            }
        }
        GenKind::CrownGadgets => {
            for _ in 0..spec.count {
                let (x, y, z) = (b.fresh(), b.fresh(), b.fresh());
                b.triangle(x, y, z);
                for _ in 0..spec.t {
                    let w = b.fresh();
                    b.edges.extend([(x, w), (y, w)]);
                }
            }
        }
        GenKind::SplittableMix => {
            let mut hub = b.fresh();
            for _ in 0..spec.count {
                let blades = if rng.random_bool(0.5) { 2 } else { rng.random_range(3..=5) };
                let mut last = hub;
                for _ in 0..blades {
                    let (x, y) = (b.fresh(), b.fresh());
                    b.triangle(hub, x, y);
                    last = y;
                }
                // The next gadget hangs off a blade tip, keeping the mix
                // connected but splittable at every hub.
                hub = last;
            }
        }
    }
    Ok(b.finish(spec.n, spec.noise, &mut rng))
}

/// `instances` graphs with seeds `seed, seed + 1, …`.
pub fn generate_corpus(spec: &GenSpec, instances: usize) -> Result<Vec<Graph>, GenError> {
    (0..instances as u64)
        .map(|i| generate(&spec.with_seed(spec.seed.wrapping_add(i))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{Instance, ProblemVariant};
    use crate::graph::write_edge_list;
    use crate::oracle::solve_etp_exact;
    use crate::rules::{kernelize, RuleId};

    #[test]
    fn erdos_renyi_is_deterministic() {
        let spec = GenSpec::erdos_renyi(10, 0.5, 7);
        let a = write_edge_list(&generate(&spec).unwrap());
        let b = write_edge_list(&generate(&spec).unwrap());
        assert_eq!(a, b);
        let c = write_edge_list(&generate(&spec.with_seed(8)).unwrap());
        assert_ne!(a, c);
        assert_eq!(generate(&spec).unwrap().n(), 10);
    }

    #[test]
    fn planted_packing_has_its_triangles() {
        for seed in 0..5 {
            let g = generate(&GenSpec::gadgets(GenKind::PlantedPacking, 3, 0.0, seed)).unwrap();
            assert!(solve_etp_exact(&g).unwrap().optimum >= 3);
            let g = generate(&GenSpec::gadgets(GenKind::PlantedPacking, 3, 0.3, seed)).unwrap();
            assert!(solve_etp_exact(&g).unwrap().optimum >= 3);
        }
    }

    #[test]
    fn crown_gadgets_trigger_the_crown_rule() {
        for seed in 0..5 {
            let g = generate(&GenSpec::gadgets(GenKind::CrownGadgets, 1, 0.0, seed)).unwrap();
            assert_eq!(g.n(), 5);
            let out = kernelize(&Instance::new(g, 3, ProblemVariant::Etp));
            assert!(out.counters.get(RuleId::R9) >= 1, "{:?}", out.trace);
        }
    }

    #[test]
    fn splittable_mix_triggers_splits() {
        let g = generate(&GenSpec::gadgets(GenKind::SplittableMix, 3, 0.0, 1)).unwrap();
        let out = kernelize(&Instance::new(g, 20, ProblemVariant::Etp));
        assert!(out.counters.get(RuleId::R4) >= 1);
    }

    #[test]
    fn k4_gadgets_trigger_clique_removal() {
        let g = generate(&GenSpec::gadgets(GenKind::K4Gadgets, 2, 0.0, 3)).unwrap();
        let out = kernelize(&Instance::new(g, 2, ProblemVariant::Etp));
        assert_eq!(out.counters.get(RuleId::R3), 2);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate(&GenSpec::erdos_renyi(5, 1.5, 0)).is_err());
        assert!(generate(&GenSpec::erdos_renyi(0, 0.5, 0)).is_err());
        assert!(generate(&GenSpec::gadgets(GenKind::K4Gadgets, 0, 0.0, 0)).is_err());
    }

    #[test]
    fn spec_reads_from_json() {
        let spec: GenSpec = serde_json::from_str(r#"{"kind": "crown_gadgets", "count": 2, "seed": 9}"#).unwrap();
        assert_eq!(spec.t, 2);
        assert_eq!(spec.kind, GenKind::CrownGadgets);
        assert!(serde_json::from_str::<GenSpec>(r#"{"kind": "erdos_renyi", "q": 1}"#).is_err());
    }

    #[test]
    fn corpus_seeds_advance() {
        let spec = GenSpec::erdos_renyi(8, 0.4, 100);
        let corpus = generate_corpus(&spec, 3).unwrap();
        assert_eq!(corpus[1], generate(&spec.with_seed(101)).unwrap());
    }
}
