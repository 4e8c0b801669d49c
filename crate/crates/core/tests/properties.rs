mod common;

use std::collections::BTreeSet;

use common::{random_path, rng, small_graph, small_layered, small_weighted};
use dsp_core::colorcode::{ball_search, BallConfig};
use dsp_core::farthest::farthest_path;
use dsp_core::graph::{build_sp_dag, hamming_distance, ArcWeightedDigraph, Path};
use dsp_core::oracle::{
    brute_ball, brute_farthest, brute_max_min, brute_solve, enumerate_st_paths, minimal_bypass_decomposition,
};
use dsp_core::solver::{greedy_phase, solve, threshold, verify_certificate, Decision, SolveConfig, SolveMode};
use proptest::prelude::*;

const BUDGET: usize = 100_000;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}

fn d(a: u64, b: u64) -> u32 {
    (a ^ b).count_ones()
}

/// Every minimum-weight simple s–t path of `g`, by DFS over the raw arcs.
fn raw_shortest_paths(g: &ArcWeightedDigraph) -> BTreeSet<Vec<usize>> {
    fn walk(
        g: &ArcWeightedDigraph,
        v: usize,
        weight: u64,
        seen: &mut Vec<bool>,
        arcs: &mut Vec<usize>,
        out: &mut Vec<(u64, Vec<usize>)>,
    ) {
        if v == g.target() {
            out.push((weight, arcs.clone()));
            return;
        }
        for a in g.arcs() {
            if a.tail != v || seen[a.head] {
                continue;
            }
            seen[a.head] = true;
            arcs.push(a.id);
            walk(g, a.head, weight + a.weight, seen, arcs, out);
            arcs.pop();
            seen[a.head] = false;
        }
    }
    let mut seen = vec![false; g.vertex_count() + 1];
    seen[g.source()] = true;
    let mut out = Vec::new();
    walk(g, g.source(), 0, &mut seen, &mut Vec::new(), &mut out);
    let best = out.iter().map(|(w, _)| *w).min().unwrap();
    out.into_iter()
        .filter(|(w, _)| *w == best)
        .map(|(_, mut arcs)| {
            arcs.sort_unstable();
            arcs
        })
        .collect()
}

proptest! {
    #![proptest_config(config(2_000))]

    #[test]
    fn triangle_inequality(x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        prop_assert!(d(x, z) <= d(x, y) + d(y, z));
    }

    #[test]
    fn partition_identity(w in any::<u64>(), x in any::<u64>(), y in any::<u64>(), z in any::<u64>()) {
        let (x, z) = (x & !w, z & !y);
        let lhs = d(w | x, y | z) as i64;
        let rhs = d(w, y) as i64 + d(x, y) as i64 + d(w, z) as i64 + d(x, z) as i64
            - (w | x).count_ones() as i64
            - (y | z).count_ones() as i64;
        prop_assert_eq!(lhs, rhs);
    }
}

proptest! {
    #![proptest_config(config(150))]

    #[test]
    fn preprocessing_keeps_exactly_the_shortest_paths(seed in 0u64..1_000_000) {
        let g = small_weighted(seed, 9);
        let dag = build_sp_dag(&g).unwrap();
        let catalog = enumerate_st_paths(&dag, BUDGET);
        prop_assert!(!catalog.truncated);
        let got: BTreeSet<Vec<usize>> = catalog.paths.iter().map(|p| p.arcs().to_vec()).map(|mut a| { a.sort_unstable(); a }).collect();
        prop_assert_eq!(got.len(), catalog.paths.len());
        prop_assert_eq!(got, raw_shortest_paths(&g));
        prop_assert_eq!(catalog.count, (catalog.paths.len() as u64).into());
    }

    #[test]
    fn farthest_matches_oracle(seed in 0u64..1_000_000, r in 0usize..=3, q in 0u32..=6) {
        let g = small_graph(seed);
        let dag = build_sp_dag(&g).unwrap();
        let mut rand = rng(seed);
        let refs: Vec<Path> = (0..r).map(|_| random_path(&dag, &mut rand)).collect();
        let fast = farthest_path(&dag, &refs, q);
        let slow = brute_farthest(&dag, &refs, q as usize, BUDGET).unwrap();
        prop_assert_eq!(fast.is_some(), slow.is_some());
        if let Some(p) = fast {
            prop_assert!(dag.is_st_path(&p));
            prop_assert!(refs.iter().all(|x| hamming_distance(&p, x) >= q as usize));
        }
        if q > 0 && farthest_path(&dag, &refs, q - 1).is_none() {
            prop_assert!(farthest_path(&dag, &refs, q).is_none());
        }
    }

    #[test]
    fn ball_search_matches_oracle(seed in 0u64..1_000_000, q in 0usize..=5, r in 1usize..=3, dd in 0usize..=4) {
        let g = small_graph(seed);
        let dag = build_sp_dag(&g).unwrap();
        let center = random_path(&dag, &mut rng(seed));
        let got = ball_search(&dag, &center, q, r, dd, &BallConfig::default()).unwrap();
        let want = brute_ball(&dag, &center, q, r, dd, BUDGET).unwrap();
        prop_assert!(got.certified);
        prop_assert_eq!(got.paths.is_some(), want.is_some());
        if let Some(paths) = got.paths {
            prop_assert_eq!(paths.len(), r);
            for (i, p) in paths.iter().enumerate() {
                prop_assert!(dag.is_st_path(p));
                prop_assert!(hamming_distance(p, &center) <= q);
                for o in &paths[i + 1..] {
                    prop_assert!(hamming_distance(p, o) >= dd);
                }
            }
        }
    }

    #[test]
    fn solve_matches_oracle(seed in 0u64..1_000_000, k in 1usize..=3, dd in 0usize..=4) {
        let g = small_graph(seed);
        let dag = build_sp_dag(&g).unwrap();
        let want = brute_solve(&dag, k, dd, BUDGET).unwrap();
        for mode in [SolveMode::Fpt, SolveMode::Hybrid] {
            let cfg = SolveConfig { mode, ..SolveConfig::default() };
            let cert = solve(&g, k, dd, &cfg).unwrap();
            prop_assert_eq!(cert.decision == Decision::Yes, want.is_some(), "{:?}", mode);
            prop_assert_ne!(cert.decision, Decision::ProbabilisticNo);
            if cert.is_yes() {
                prop_assert!(verify_certificate(&g, &cert, k, dd).unwrap().ok());
            }
        }
    }

    #[test]
    fn max_min_is_the_decision_threshold(seed in 0u64..1_000_000, k in 2usize..=3) {
        let g = small_layered(seed);
        let dag = build_sp_dag(&g).unwrap();
        let best = brute_max_min(&dag, k, BUDGET).unwrap();
        for dd in 0..=8 {
            let yes = brute_solve(&dag, k, dd, BUDGET).unwrap().is_some();
            let expected = match best {
                Some(b) => dd <= b,
                None => dd == 0,
            };
            prop_assert_eq!(yes, expected, "d = {}", dd);
        }
    }
}

#[test]
fn greedy_balls_partition_the_paths() {
    let cfg = SolveConfig::default();
    let mut incomplete = 0;
    for seed in 0..300u64 {
        let dag = build_sp_dag(&small_graph(seed)).unwrap();
        let catalog = enumerate_st_paths(&dag, BUDGET);
        for k in 2..=3usize {
            for dd in 1..=4usize {
                let greedy = greedy_phase(&dag, k, dd, &cfg);
                let centers = &greedy.paths;
                for (j, pj) in centers.iter().enumerate() {
                    for pi in &centers[..j] {
                        let need = threshold(3, k - (j + 1), dd);
                        assert!(hamming_distance(pi, pj) as u64 >= need);
                    }
                }
                if greedy.complete {
                    continue;
                }
                incomplete += 1;
                let q = threshold(3, k - centers.len() - 1, dd);
                let owner = |p: &Path| -> usize {
                    let inside: Vec<usize> =
                        (0..centers.len()).filter(|&i| (hamming_distance(p, &centers[i]) as u64) < q).collect();
                    assert_eq!(inside.len(), 1, "seed {seed} k {k} d {dd}");
                    inside[0]
                };
                let owners: Vec<usize> = catalog.paths.iter().map(owner).collect();
                for (a, pa) in catalog.paths.iter().enumerate() {
                    for (b, pb) in catalog.paths.iter().enumerate().skip(a + 1) {
                        if owners[a] != owners[b] {
                            assert!(hamming_distance(pa, pb) >= dd);
                        }
                    }
                }
            }
        }
    }
    assert!(incomplete > 100);
}

#[test]
fn bypass_correspondence_over_all_pairs() {
    let mut graphs_checked = 0;
    for seed in 0..200u64 {
        let g = small_graph(seed);
        let dag = build_sp_dag(&g).unwrap();
        let catalog = enumerate_st_paths(&dag, 20);
        if catalog.truncated {
            continue;
        }
        graphs_checked += 1;
        let paths = &catalog.paths;
        let center = &paths[0];
        let bypass = |p: &Path| -> Vec<usize> { center.symmetric_difference(p) };
        for a in paths {
            let parts = minimal_bypass_decomposition(&dag, center, a).unwrap();
            let mut union: Vec<usize> = parts.iter().flat_map(|c| c.arcs.iter().copied()).collect();
            union.sort_unstable();
            let len = union.len();
            union.dedup();
            assert_eq!(len, union.len(), "components overlap");
            assert_eq!(union, bypass(a));
            for w in parts.windows(2) {
                assert!(w[0].window.1 <= w[1].window.0);
            }
            for b in paths {
                let lhs = a.symmetric_difference(b);
                let ba: BTreeSet<usize> = bypass(a).into_iter().collect();
                let bb: BTreeSet<usize> = bypass(b).into_iter().collect();
                let rhs: Vec<usize> = ba.symmetric_difference(&bb).copied().collect();
                assert_eq!(lhs, rhs);
            }
        }
    }
    assert!(graphs_checked >= 50);
}

#[test]
fn catalog_is_deterministic_and_counted() {
    for seed in 0..50u64 {
        let dag = build_sp_dag(&small_graph(seed)).unwrap();
        let a = enumerate_st_paths(&dag, BUDGET);
        let b = enumerate_st_paths(&dag, BUDGET);
        assert_eq!(a.paths, b.paths);
        assert_eq!(a.count, dag.count_paths());
        let truncated = enumerate_st_paths(&dag, 1);
        assert_eq!(truncated.paths.len(), 1);
        assert_eq!(truncated.truncated, a.paths.len() > 1);
        assert_eq!(truncated.paths[0], a.paths[0]);
    }
}
