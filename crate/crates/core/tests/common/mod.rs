#![allow(dead_code)]

use dsp_core::generators::gen_layered;
use dsp_core::graph::{build_sp_dag, ArcWeightedDigraph, Path, SpDag};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Layered DAG with at most 12 vertices, shape drawn from `seed`.
pub fn small_layered(seed: u64) -> ArcWeightedDigraph {
    let mut r = rng(seed ^ 0x5eed);
    let layers = r.gen_range(1..=5);
    let width = r.gen_range(1..=(10 / layers).min(4));
    let prob = [0.4, 0.6, 0.8][r.gen_range(0..3)];
    gen_layered(layers, width, prob, seed).unwrap()
}

/// Random digraph on at most `max_n` vertices with weights in {1, 1.5, 2, 3},
/// parallel arcs and backward arcs allowed. Resampled until t is reachable.
pub fn small_weighted(seed: u64, max_n: usize) -> ArcWeightedDigraph {
    let mut r = rng(seed ^ 0xfeed);
    loop {
        let n = r.gen_range(2..=max_n);
        let m = r.gen_range(n - 1..=3 * n);
        let arcs: Vec<(usize, usize, u64)> = (0..m)
            .map(|_| {
                let u = r.gen_range(1..=n);
                let mut v = r.gen_range(1..=n);
                while v == u {
                    v = r.gen_range(1..=n);
                }
                (u, v, [1_000_000, 1_500_000, 2_000_000, 3_000_000][r.gen_range(0..4)])
            })
            .collect();
        let g = ArcWeightedDigraph::new(n, 1, n, arcs).unwrap();
        if build_sp_dag(&g).is_ok() {
            return g;
        }
    }
}

/// Either family, alternating by seed.
pub fn small_graph(seed: u64) -> ArcWeightedDigraph {
    if seed % 2 == 0 {
        small_layered(seed)
    } else {
        small_weighted(seed, 12)
    }
}

/// Uniform random walk from s; every DAG vertex reaches t.
pub fn random_path(dag: &SpDag, r: &mut ChaCha8Rng) -> Path {
    let mut v = dag.source();
    let mut arcs = Vec::new();
    while v != dag.sink() {
        let &e = dag.out_arcs(v).choose(r).expect("every vertex reaches t");
        arcs.push(dag.arc(e).id);
        v = dag.arc(e).head;
    }
    Path::new(arcs)
}
