//! Fixed benchmark inputs, shared so numbers stay comparable across runs.

use trikernel::gen::{generate, GenKind, GenSpec};
use trikernel::Graph;

/// `(label, graph)` pairs covering dense random graphs and each gadget kind.
pub fn fixtures(n: u32) -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for p in [0.1, 0.3] {
        let g = generate(&GenSpec::erdos_renyi(n, p, 1)).expect("valid spec");
        out.push((format!("er-{n}-{p}"), g));
    }
    for (name, kind) in [
        ("planted", GenKind::PlantedPacking),
        ("crown", GenKind::CrownGadgets),
        ("mix", GenKind::SplittableMix),
    ] {
        let spec = GenSpec {
            n,
            ..GenSpec::gadgets(kind, n / 6, 0.02, 1)
        };
        out.push((format!("{name}-{n}"), generate(&spec).expect("valid spec")));
    }
    out
}
