//! Instance generators: grids, random layered DAGs, and the Unary Bin Packing
//! reduction together with its width-4 path decomposition.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{ArcWeightedDigraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    Invalid(String),
}

/// `(w+1) × (h+1)` lattice with unit arcs east and south, from the top-left
/// corner to the bottom-right one.
pub fn gen_grid(w: usize, h: usize) -> Result<ArcWeightedDigraph, GenError> {
    if w == 0 || h == 0 {
        return Err(GenError::Invalid("grid dimensions must be positive".into()));
    }
    let cols = w + 1;
    let id = |row: usize, col: usize| row * cols + col + 1;
    let mut arcs = Vec::new();
    for row in 0..=h {
        for col in 0..=w {
            if col < w {
                arcs.push((id(row, col), id(row, col + 1)));
            }
            if row < h {
                arcs.push((id(row, col), id(row + 1, col)));
            }
        }
    }
    let n = cols * (h + 1);
    Ok(ArcWeightedDigraph::unit(n, 1, n, arcs).expect("grid is well formed"))
}

/// `s → layer 1 → … → layer L → t` with each arc between consecutive layers
/// present with probability `arc_prob`. Resampled until `t` is reachable.
pub fn gen_layered(layers: usize, width: usize, arc_prob: f64, seed: u64) -> Result<ArcWeightedDigraph, GenError> {
    if layers == 0 || width == 0 {
        return Err(GenError::Invalid("layers and width must be positive".into()));
    }
    if !(arc_prob > 0.0 && arc_prob <= 1.0) {
        return Err(GenError::Invalid(format!("arc probability {arc_prob} not in (0, 1]")));
    }
    let n = layers * width + 2;
    let s = 1;
    let t = n;
    let vertex = |layer: usize, slot: usize| 2 + layer * width + slot;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut arcs = Vec::new();
        let mut reach = vec![false; n + 1];
        reach[s] = true;
        for slot in 0..width {
            if rng.gen_bool(arc_prob) {
                arcs.push((s, vertex(0, slot)));
                reach[vertex(0, slot)] = true;
            }
        }
        for layer in 0..layers - 1 {
            for a in 0..width {
                for b in 0..width {
                    if rng.gen_bool(arc_prob) {
                        let (u, v) = (vertex(layer, a), vertex(layer + 1, b));
                        arcs.push((u, v));
                        reach[v] |= reach[u];
                    }
                }
            }
        }
        for slot in 0..width {
            if rng.gen_bool(arc_prob) {
                let u = vertex(layers - 1, slot);
                arcs.push((u, t));
                reach[t] |= reach[u];
            }
        }
        if reach[t] {
            return Ok(ArcWeightedDigraph::unit(n, s, t, arcs).expect("layered graph is well formed"));
        }
    }
}

/// Unary Bin Packing: split `items` into `bins` groups that each sum to
/// `capacity`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BinPackingInstance {
    pub items: Vec<u64>,
    pub bins: usize,
    pub capacity: u64,
}

impl BinPackingInstance {
    pub fn new(items: Vec<u64>, bins: usize, capacity: u64) -> Self {
        Self { items, bins, capacity }
    }

    fn check(&self) -> Result<(), GenError> {
        if self.bins < 2 {
            return Err(GenError::Invalid(format!("need k >= 2 bins, got {}", self.bins)));
        }
        if self.items.is_empty() || self.items.contains(&0) {
            return Err(GenError::Invalid("items must be a nonempty list of positive integers".into()));
        }
        let total: u64 = self.items.iter().sum();
        if total != self.bins as u64 * self.capacity {
            return Err(GenError::Invalid(format!(
                "item sum {total} differs from k*M = {}",
                self.bins as u64 * self.capacity
            )));
        }
        if let Some(big) = self.items.iter().find(|&&a| a > self.capacity) {
            return Err(GenError::Invalid(format!("item {big} exceeds capacity {}", self.capacity)));
        }
        Ok(())
    }
}

/// Exhaustive feasibility check: assigns items to bins by backtracking, with
/// symmetric empty bins tried once.
pub fn bin_packing_feasible(inst: &BinPackingInstance) -> bool {
    fn place(items: &[u64], loads: &mut [u64], cap: u64) -> bool {
        let Some((&a, rest)) = items.split_first() else {
            return loads.iter().all(|&l| l == cap);
        };
        let mut tried_empty = false;
        for b in 0..loads.len() {
            if loads[b] + a > cap {
                continue;
            }
            if loads[b] == 0 {
                if tried_empty {
                    continue;
                }
                tried_empty = true;
            }
            loads[b] += a;
            if place(rest, loads, cap) {
                return true;
            }
            loads[b] -= a;
        }
        false
    }
    let total: u64 = inst.items.iter().sum();
    if inst.bins == 0 || total != inst.bins as u64 * inst.capacity {
        return false;
    }
    let mut items = inst.items.clone();
    items.sort_unstable_by(|a, b| b.cmp(a));
    place(&items, &mut vec![0; inst.bins], inst.capacity)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedMeta {
    /// Length (arc count) of every s–t path.
    pub ell: u64,
    /// Capacity after normalization.
    pub capacity: u64,
    /// Number of items after normalization.
    pub items: usize,
    pub doubled: bool,
    /// Items equal to the capacity were removed by adding one unit item per
    /// bin and moving to capacity `2M + 1`.
    pub padded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub graph: ArcWeightedDigraph,
    pub ask_k: usize,
    pub ask_d: usize,
    pub meta: GeneratedMeta,
    pub decomposition: Option<Vec<Vec<VertexId>>>,
}

/// Sidecar JSON written next to a generated graph file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sidecar {
    pub ask_k: usize,
    pub ask_d: usize,
    pub ell: u64,
    pub doubled: bool,
    pub decomposition: Vec<Vec<VertexId>>,
}

impl GeneratedInstance {
    pub fn sidecar(&self) -> Sidecar {
        Sidecar {
            ask_k: self.ask_k,
            ask_d: self.ask_d,
            ell: self.meta.ell,
            doubled: self.meta.doubled,
            decomposition: self.decomposition.clone().unwrap_or_default(),
        }
    }
}

/// Normalizes so that every item satisfies `a_i < M` and `M - a_i - 2 >= 0`.
fn normalize(inst: &BinPackingInstance) -> (Vec<u64>, u64, bool, bool) {
    let mut items = inst.items.clone();
    let mut cap = inst.capacity;
    let padded = items.contains(&cap);
    if padded {
        // Each bin of capacity 2M+1 must take exactly one of the k unit items
        // (the doubled items are even), so feasibility is unchanged.
        items.iter_mut().for_each(|a| *a *= 2);
        items.extend(std::iter::repeat_n(1, inst.bins));
        cap = 2 * cap + 1;
    }
    let doubled = items.iter().any(|&a| a + 2 > cap);
    if doubled {
        items.iter_mut().for_each(|a| *a *= 2);
        cap *= 2;
    }
    (items, cap, doubled, padded)
}

struct Builder {
    n: usize,
    arcs: Vec<(VertexId, VertexId)>,
    bags: Vec<Vec<VertexId>>,
}

impl Builder {
    fn vertex(&mut self) -> VertexId {
        self.n += 1;
        self.n
    }

    /// Vertices of a directed path with `len` arcs.
    fn chain(&mut self, len: u64) -> Vec<VertexId> {
        (0..=len).map(|_| self.vertex()).collect()
    }

    fn link_chain(&mut self, chain: &[VertexId]) {
        for w in chain.windows(2) {
            self.arcs.push((w[0], w[1]));
        }
    }

    /// Bags `{x_1,x_2}, {x_2,x_3}, …` of a path, each extended by `hubs`.
    fn chain_bags(&mut self, chain: &[VertexId], hubs: &[VertexId]) {
        let with = |core: &[VertexId]| {
            let mut bag: Vec<VertexId> = core.iter().chain(hubs).copied().collect();
            bag.sort_unstable();
            bag
        };
        if chain.len() == 1 {
            self.bags.push(with(chain));
        }
        for w in chain.windows(2) {
            self.bags.push(with(w));
        }
    }
}

/// Builds the reduction graph. Asking for `2k` paths pairwise at distance
/// `2ℓ − 2M` is a YES instance exactly when the items pack.
pub fn gen_binpack(inst: &BinPackingInstance) -> Result<GeneratedInstance, GenError> {
    inst.check()?;
    let k = inst.bins;
    let (items, m, doubled, padded) = normalize(inst);
    let n_items = items.len();
    let mut b = Builder {
        n: 0,
        arcs: Vec::new(),
        bags: Vec::new(),
    };

    // D_1: 2k-2 blocks H, each with k parallel (M-2)-arc paths between hubs.
    let s = b.vertex();
    let mut hub = s;
    for _ in 0..2 * k - 2 {
        let chains: Vec<Vec<VertexId>> = (0..k).map(|_| b.chain(m - 2)).collect();
        let next = b.vertex();
        for c in &chains {
            b.arcs.push((hub, c[0]));
            b.link_chain(c);
            b.arcs.push((*c.last().unwrap(), next));
            b.chain_bags(c, &[hub, next]);
        }
        hub = next;
    }

    // D_2: one gadget H'_i per item, starting at r = p_1.
    for &a in &items {
        let p = hub;
        let chains: Vec<Vec<VertexId>> = (0..2 * k - 2).map(|_| b.chain(m - 2)).collect();
        let branch = b.chain(a - 1);
        let left = b.chain(m - a - 2);
        let right = b.chain(m - a - 2);
        let q = b.vertex();
        let fork = *branch.last().unwrap();
        let hubs = [p, q, fork];
        for c in &chains {
            b.arcs.push((p, c[0]));
            b.link_chain(c);
            b.arcs.push((*c.last().unwrap(), q));
            b.chain_bags(c, &hubs);
        }
        b.arcs.push((p, branch[0]));
        b.link_chain(&branch);
        if branch.len() > 1 {
            b.chain_bags(&branch[..branch.len() - 1], &hubs);
        }
        for side in [&left, &right] {
            b.arcs.push((fork, side[0]));
            b.link_chain(side);
            b.arcs.push((*side.last().unwrap(), q));
            b.chain_bags(side, &hubs);
        }
        hub = q;
    }
    let t = hub;

    let ell = (n_items as u64 + 2 * k as u64 - 2) * m;
    let graph = ArcWeightedDigraph::unit(b.n, s, t, b.arcs).expect("reduction graph is well formed");
    Ok(GeneratedInstance {
        graph,
        ask_k: 2 * k,
        ask_d: (2 * ell - 2 * m) as usize,
        meta: GeneratedMeta {
            ell,
            capacity: m,
            items: n_items,
            doubled,
            padded,
        },
        decomposition: Some(b.bags),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub valid: bool,
    /// Largest bag size minus one.
    pub width: usize,
    pub violation: Option<String>,
}

/// Checks a path decomposition of the underlying undirected graph.
pub fn validate_path_decomposition(g: &ArcWeightedDigraph, bags: &[Vec<VertexId>]) -> DecompositionReport {
    let width = bags.iter().map(Vec::len).max().unwrap_or(0).saturating_sub(1);
    let report = |violation: Option<String>| DecompositionReport {
        valid: violation.is_none(),
        width,
        violation,
    };
    let mut runs: BTreeMap<VertexId, (usize, usize, usize)> = BTreeMap::new();
    for (i, bag) in bags.iter().enumerate() {
        let mut seen = bag.clone();
        seen.sort_unstable();
        seen.dedup();
        for &v in &seen {
            if v == 0 || v > g.vertex_count() {
                return report(Some(format!("bag {} holds unknown vertex {v}", i + 1)));
            }
            let e = runs.entry(v).or_insert((i, i, 0));
            e.1 = i;
            e.2 += 1;
        }
    }
    for v in 1..=g.vertex_count() {
        match runs.get(&v) {
            None => return report(Some(format!("vertex {v} is in no bag"))),
            Some(&(first, last, count)) if last - first + 1 != count => {
                return report(Some(format!("bags holding vertex {v} are not contiguous")));
            }
            _ => {}
        }
    }
    for a in g.arcs() {
        let (lo_t, hi_t, _) = runs[&a.tail];
        let (lo_h, hi_h, _) = runs[&a.head];
        if lo_t.max(lo_h) > hi_t.min(hi_h) {
            return report(Some(format!("arc {} ({},{}) is in no bag", a.id, a.tail, a.head)));
        }
    }
    report(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_sp_dag;
    use num_bigint::BigUint;

    /// Shortest and longest s–t arc counts of an acyclic unit graph.
    fn path_length_range(g: &ArcWeightedDigraph) -> (u64, u64) {
        let dag = build_sp_dag(g).unwrap();
        let mut lo = vec![u64::MAX; dag.vertex_count()];
        let mut hi = vec![0u64; dag.vertex_count()];
        lo[0] = 0;
        for v in 1..dag.vertex_count() {
            for &e in dag.in_arcs(v) {
                let u = dag.arc(e).tail;
                lo[v] = lo[v].min(lo[u] + 1);
                hi[v] = hi[v].max(hi[u] + 1);
            }
        }
        (lo[dag.sink()], hi[dag.sink()])
    }

    #[test]
    fn grids() {
        let g = gen_grid(1, 1).unwrap();
        assert_eq!((g.vertex_count(), g.arc_count()), (4, 4));
        let dag = build_sp_dag(&g).unwrap();
        assert_eq!(dag.count_paths(), BigUint::from(2u32));
        let g = gen_grid(2, 2).unwrap();
        assert_eq!(build_sp_dag(&g).unwrap().count_paths(), BigUint::from(6u32));
        for (w, h) in [(1, 3), (3, 2), (4, 4)] {
            let g = gen_grid(w, h).unwrap();
            assert_eq!(path_length_range(&g), ((w + h) as u64, (w + h) as u64));
            assert_eq!(build_sp_dag(&g).unwrap().arc_count(), g.arc_count());
        }
        assert!(gen_grid(0, 2).is_err());
    }

    #[test]
    fn layered_graphs() {
        let g = gen_layered(4, 1, 0.5, 3).unwrap();
        assert_eq!(build_sp_dag(&g).unwrap().count_paths(), BigUint::from(1u32));
        assert_eq!(gen_layered(3, 3, 0.5, 7).unwrap(), gen_layered(3, 3, 0.5, 7).unwrap());
        assert!(gen_layered(3, 3, 0.0, 7).is_err());
        assert!(gen_layered(0, 3, 0.5, 7).is_err());
    }

    #[test]
    fn binpack_arithmetic() {
        let two = gen_binpack(&BinPackingInstance::new(vec![1, 1, 1, 1], 2, 2)).unwrap();
        assert!(two.meta.doubled && !two.meta.padded);
        assert_eq!((two.meta.capacity, two.meta.ell), (4, 24));
        assert_eq!((two.ask_k, two.ask_d), (4, 40));

        let three = gen_binpack(&BinPackingInstance::new(vec![2, 2, 2], 2, 3)).unwrap();
        assert!(three.meta.doubled);
        assert_eq!((three.meta.capacity, three.meta.ell, three.ask_d), (6, 30, 48));

        // Items equal to M are padded: {4,4,1,1} with M = 5, then doubled.
        let full = gen_binpack(&BinPackingInstance::new(vec![2, 2], 2, 2)).unwrap();
        assert!(full.meta.padded && full.meta.doubled);
        assert_eq!((full.meta.capacity, full.meta.items, full.meta.ell), (10, 4, 60));
        assert_eq!((full.ask_k, full.ask_d), (4, 100));
    }

    #[test]
    fn binpack_structure() {
        for (items, k, m) in [(vec![1, 1, 1, 1], 2, 2), (vec![2, 2, 2], 2, 3), (vec![1, 2, 3], 2, 3), (vec![1, 1, 1], 3, 1 + 0)] {
            let inst = BinPackingInstance::new(items.clone(), k, m);
            let Ok(gen) = gen_binpack(&inst) else {
                assert!(inst.check().is_err());
                continue;
            };
            let (lo, hi) = path_length_range(&gen.graph);
            assert_eq!((lo, hi), (gen.meta.ell, gen.meta.ell), "{items:?}");
            let dag = build_sp_dag(&gen.graph).unwrap();
            assert_eq!(dag.arc_count(), gen.graph.arc_count());
            assert_eq!(dag.vertex_count(), gen.graph.vertex_count());
            // k^(2k-2) choices in D_1, 2k per gadget in D_2.
            let expected = BigUint::from(k as u64).pow(2 * k as u32 - 2)
                * BigUint::from(2 * k as u64).pow(gen.meta.items as u32);
            assert_eq!(dag.count_paths(), expected);
            let report = validate_path_decomposition(&gen.graph, gen.decomposition.as_ref().unwrap());
            assert!(report.valid, "{:?}", report.violation);
            assert!(report.width <= 4);
        }
    }

    #[test]
    fn binpack_rejects_bad_instances() {
        assert!(gen_binpack(&BinPackingInstance::new(vec![1, 1], 1, 2)).is_err());
        assert!(gen_binpack(&BinPackingInstance::new(vec![1, 2], 2, 2)).is_err());
        assert!(gen_binpack(&BinPackingInstance::new(vec![3, 1], 2, 2)).is_err());
        assert!(gen_binpack(&BinPackingInstance::new(vec![0, 4], 2, 2)).is_err());
    }

    #[test]
    fn feasibility_oracle() {
        assert!(bin_packing_feasible(&BinPackingInstance::new(vec![2, 2], 2, 2)));
        assert!(bin_packing_feasible(&BinPackingInstance::new(vec![1, 1, 1, 1], 2, 2)));
        assert!(!bin_packing_feasible(&BinPackingInstance::new(vec![2, 2, 2], 2, 3)));
        assert!(bin_packing_feasible(&BinPackingInstance::new(vec![1, 2, 3], 2, 3)));
        assert!(!bin_packing_feasible(&BinPackingInstance::new(vec![4, 1, 1], 2, 3)));
    }

    #[test]
    fn decomposition_validation() {
        let diamond = ArcWeightedDigraph::unit(4, 1, 4, [(1, 2), (1, 3), (2, 4), (3, 4)]).unwrap();
        let r = validate_path_decomposition(&diamond, &[vec![1, 2, 3, 4]]);
        assert!(r.valid);
        assert_eq!(r.width, 3);
        let r = validate_path_decomposition(&diamond, &[vec![1, 2, 3], vec![2, 3], vec![1, 2, 3, 4]]);
        assert!(!r.valid);
        assert!(r.violation.unwrap().contains("vertex 1"));
        let r = validate_path_decomposition(&diamond, &[vec![1, 2, 3], vec![2, 3, 4]]);
        assert!(r.valid);
        assert_eq!(r.width, 2);
        let r = validate_path_decomposition(&diamond, &[vec![1, 2], vec![3, 4]]);
        assert!(!r.valid);
        let r = validate_path_decomposition(&diamond, &[vec![1, 2, 3]]);
        assert!(r.violation.unwrap().contains("vertex 4 is in no bag"));
    }
}
