//! Exact solvers for desk-scale instances, used as ground truth.
//!
//! Both solvers relabel the graph densely and represent edge sets as `u128`
//! masks, so graphs with more than 128 edges are refused outright.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Edge, Graph, Instance, ProblemVariant, Triangle, VertexId};

pub const MAX_EDGES: usize = 128;
pub const MAX_TRIANGLES: usize = 600;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance over oracle budget: {edges} edges (max {MAX_EDGES}), {triangles} triangles (max {MAX_TRIANGLES})")]
    OverBudget { edges: usize, triangles: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolutionError {
    #[error("triangle {0} is not in the graph")]
    MissingTriangle(Triangle),
    #[error("edge {0} is in the packing twice")]
    SharedEdge(Edge),
    #[error("edge {0} is not in the graph")]
    MissingEdge(Edge),
    #[error("edge {0} is in the cover twice")]
    DuplicateEdge(Edge),
    #[error("triangle {0} survives the cover")]
    Uncovered(Triangle),
    #[error("solution of size {size} does not meet k = {k}")]
    WrongSize { size: usize, k: i64 },
    #[error("solution kind does not match the problem variant")]
    WrongKind,
}

/// A certificate for a yes-instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solution {
    Packing(Vec<Triangle>),
    Cover(Vec<Edge>),
}

impl Solution {
    pub fn len(&self) -> usize {
        match self {
            Solution::Packing(ts) => ts.len(),
            Solution::Cover(es) => es.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn empty_for(variant: ProblemVariant) -> Self {
        match variant {
            ProblemVariant::Etp => Solution::Packing(Vec::new()),
            ProblemVariant::Etc => Solution::Cover(Vec::new()),
        }
    }

    /// Validates against `inst`: at least `k` edge-disjoint triangles, or at
    /// most `k` edges whose deletion leaves no triangle.
    pub fn validate(&self, inst: &Instance) -> Result<(), SolutionError> {
        match (self, inst.variant) {
            (Solution::Packing(ts), ProblemVariant::Etp) => {
                check_packing(&inst.graph, ts)?;
                if (ts.len() as i64) < inst.k {
                    return Err(SolutionError::WrongSize { size: ts.len(), k: inst.k });
                }
                Ok(())
            }
            (Solution::Cover(es), ProblemVariant::Etc) => {
                check_cover(&inst.graph, es)?;
                if es.len() as i64 > inst.k {
                    return Err(SolutionError::WrongSize { size: es.len(), k: inst.k });
                }
                Ok(())
            }
            _ => Err(SolutionError::WrongKind),
        }
    }
}

/// Pairwise edge-disjoint triangles of `g`.
pub fn check_packing(g: &Graph, triangles: &[Triangle]) -> Result<(), SolutionError> {
    let mut used = BTreeSet::new();
    for &t in triangles {
        if !g.is_triangle(t) {
            return Err(SolutionError::MissingTriangle(t));
        }
        for e in t.edges() {
            if !used.insert(e) {
                return Err(SolutionError::SharedEdge(e));
            }
        }
    }
    Ok(())
}

/// Distinct edges of `g` whose removal leaves `g` triangle-free.
pub fn check_cover(g: &Graph, edges: &[Edge]) -> Result<(), SolutionError> {
    let mut set = BTreeSet::new();
    for &e in edges {
        if !g.has_edge(e) {
            return Err(SolutionError::MissingEdge(e));
        }
        if !set.insert(e) {
            return Err(SolutionError::DuplicateEdge(e));
        }
    }
    match g
        .triangles()
        .into_iter()
        .find(|t| t.edges().iter().all(|e| !set.contains(e)))
    {
        Some(t) => Err(SolutionError::Uncovered(t)),
        None => Ok(()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleResult<W> {
    pub optimum: usize,
    pub witness: W,
}

/// Dense relabelling: edges as bit positions, triangles as masks.
struct Indexed {
    edges: Vec<Edge>,
    ends: Vec<(usize, usize)>,
    n: usize,
    tri: Vec<Triangle>,
    tri_mask: Vec<u128>,
    tris_by_edge: Vec<Vec<usize>>,
}

impl Indexed {
    fn new(g: &Graph) -> Result<Self, OracleError> {
        let triangles = g.triangles();
        if g.m() > MAX_EDGES || triangles.len() > MAX_TRIANGLES {
            return Err(OracleError::OverBudget {
                edges: g.m(),
                triangles: triangles.len(),
            });
        }
        let vertices: Vec<VertexId> = g.vertices().collect();
        let vidx = |v: VertexId| vertices.binary_search(&v).expect("vertex");
        let edges: Vec<Edge> = g.edges().collect();
        let eidx = |e: Edge| edges.binary_search(&e).expect("edge");
        let ends = edges.iter().map(|e| (vidx(e.lo()), vidx(e.hi()))).collect();
        let mut tris_by_edge = vec![Vec::new(); edges.len()];
        let tri_mask = triangles
            .iter()
            .enumerate()
            .map(|(i, t)| {
                t.edges().iter().fold(0u128, |acc, &e| {
                    let b = eidx(e);
                    tris_by_edge[b].push(i);
                    acc | 1 << b
                })
            })
            .collect();
        Ok(Indexed {
            edges,
            ends,
            n: vertices.len(),
            tri: triangles,
            tri_mask,
            tris_by_edge,
        })
    }

    fn full_mask(&self) -> u128 {
        if self.edges.len() == 128 {
            u128::MAX
        } else {
            (1u128 << self.edges.len()) - 1
        }
    }
}

fn bits(mut mask: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

struct PackingSearch<'a> {
    ix: &'a Indexed,
    best: Vec<usize>,
    current: Vec<usize>,
    stop_at: usize,
    degree: Vec<u32>,
}

impl PackingSearch<'_> {
    fn run(&mut self, avail: u128) {
        if self.best.len() >= self.stop_at {
            return;
        }
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        let mut useful = 0u128;
        for &tm in &self.ix.tri_mask {
            if tm & avail == tm {
                useful |= tm;
            }
        }
        if useful == 0 {
            return;
        }
        let by_edges = useful.count_ones() as usize / 3;
        self.degree.iter_mut().for_each(|d| *d = 0);
        for b in bits(useful) {
            let (u, v) = self.ix.ends[b];
            self.degree[u] += 1;
            self.degree[v] += 1;
        }
        let by_vertices = self.degree.iter().map(|d| (*d / 2) as usize).sum::<usize>() / 3;
        let bound = self.current.len() + by_edges.min(by_vertices);
        if bound <= self.best.len() {
            return;
        }

        // Branch on the useful edge with the fewest live triangles.
        let (edge, live) = bits(useful)
            .map(|b| {
                let live: Vec<usize> = self.ix.tris_by_edge[b]
                    .iter()
                    .copied()
                    .filter(|&t| self.ix.tri_mask[t] & avail == self.ix.tri_mask[t])
                    .collect();
                (b, live)
            })
            .min_by_key(|(_, live)| live.len())
            .expect("useful is nonempty");
        for t in live {
            self.current.push(t);
            self.run(avail & !self.ix.tri_mask[t]);
            self.current.pop();
        }
        self.run(avail & !(1u128 << edge));
    }
}

fn packing_search(g: &Graph, stop_at: usize) -> Result<OracleResult<Vec<Triangle>>, OracleError> {
    let ix = Indexed::new(g)?;
    let mut search = PackingSearch {
        ix: &ix,
        best: Vec::new(),
        current: Vec::new(),
        stop_at,
        degree: vec![0; ix.n],
    };
    search.run(ix.full_mask());
    let mut witness: Vec<Triangle> = search.best.iter().map(|&t| ix.tri[t]).collect();
    witness.sort_unstable();
    Ok(OracleResult {
        optimum: witness.len(),
        witness,
    })
}

/// Maximum edge-disjoint triangle packing.
pub fn solve_etp_exact(g: &Graph) -> Result<OracleResult<Vec<Triangle>>, OracleError> {
    packing_search(g, usize::MAX)
}

/// A packing of at least `k` triangles, if one exists.
pub fn etp_packing_at_least(g: &Graph, k: usize) -> Result<Option<Vec<Triangle>>, OracleError> {
    let r = packing_search(g, k)?;
    Ok((r.optimum >= k).then(|| {
        let mut w = r.witness;
        w.truncate(k);
        w
    }))
}

struct CoverSearch<'a> {
    ix: &'a Indexed,
    /// Size of the best cover found, or the exclusive size cap.
    best_len: usize,
    best: Option<u128>,
    first_only: bool,
}

impl CoverSearch<'_> {
    fn run(&mut self, deleted: u128, kept: u128) {
        if self.first_only && self.best.is_some() {
            return;
        }
        let depth = deleted.count_ones() as usize;
        let open: Vec<usize> = (0..self.ix.tri_mask.len())
            .filter(|&t| self.ix.tri_mask[t] & deleted == 0)
            .collect();
        if open.is_empty() {
            if depth < self.best_len {
                self.best_len = depth;
                self.best = Some(deleted);
            }
            return;
        }
        // Lower bound: open triangles whose deletable edges are pairwise
        // disjoint each need their own deletion.
        let mut claimed = 0u128;
        let mut lower = 0;
        let mut pick: Option<(usize, u32)> = None;
        for &t in &open {
            let free = self.ix.tri_mask[t] & !kept;
            if free == 0 {
                return;
            }
            if free & claimed == 0 {
                claimed |= free;
                lower += 1;
            }
            let c = free.count_ones();
            if pick.is_none_or(|(_, best)| c < best) {
                pick = Some((t, c));
            }
        }
        if depth + lower >= self.best_len {
            return;
        }
        let (t, _) = pick.expect("open is nonempty");
        let mut locked = kept;
        for b in bits(self.ix.tri_mask[t] & !kept) {
            self.run(deleted | 1u128 << b, locked);
            locked |= 1u128 << b;
        }
    }
}

fn cover_from_mask(ix: &Indexed, mask: u128) -> Vec<Edge> {
    bits(mask).map(|b| ix.edges[b]).collect()
}

/// Minimum set of edges whose deletion leaves `g` triangle-free.
pub fn solve_etc_exact(g: &Graph) -> Result<OracleResult<Vec<Edge>>, OracleError> {
    let ix = Indexed::new(g)?;
    // Initial upper bound: delete one edge of each triangle still standing.
    let mut greedy = 0u128;
    for &tm in &ix.tri_mask {
        if tm & greedy == 0 {
            greedy |= 1u128 << tm.trailing_zeros();
        }
    }
    let mut search = CoverSearch {
        ix: &ix,
        best_len: greedy.count_ones() as usize,
        best: Some(greedy),
        first_only: false,
    };
    search.run(0, 0);
    let witness = cover_from_mask(&ix, search.best.expect("greedy cover"));
    Ok(OracleResult {
        optimum: witness.len(),
        witness,
    })
}

/// A cover of at most `k` edges, if one exists.
pub fn etc_cover_within(g: &Graph, k: i64) -> Result<Option<Vec<Edge>>, OracleError> {
    let ix = Indexed::new(g)?;
    if k < 0 {
        return Ok(None);
    }
    let mut search = CoverSearch {
        ix: &ix,
        best_len: k as usize + 1,
        best: None,
        first_only: true,
    };
    search.run(0, 0);
    Ok(search.best.map(|m| cover_from_mask(&ix, m)))
}

/// Decides the instance, returning a certificate for yes-instances.
pub fn decide_with_witness(inst: &Instance) -> Result<Option<Solution>, OracleError> {
    match inst.variant {
        ProblemVariant::Etp => {
            if inst.k <= 0 {
                Indexed::new(&inst.graph)?;
                return Ok(Some(Solution::Packing(Vec::new())));
            }
            Ok(etp_packing_at_least(&inst.graph, inst.k as usize)?.map(Solution::Packing))
        }
        ProblemVariant::Etc => Ok(etc_cover_within(&inst.graph, inst.k)?.map(Solution::Cover)),
    }
}

pub fn decide(inst: &Instance) -> Result<bool, OracleError> {
    decide_with_witness(inst).map(|w| w.is_some())
}
