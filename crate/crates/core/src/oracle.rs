//! Exact brute-force references over the explicit catalog of s–t paths.

use num_bigint::BigUint;
use thiserror::Error;

use crate::colorcode::BypassComponent;
use crate::graph::{hamming_distance, ArcId, Path, SpDag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("instance too large for oracle: more than {budget} s-t paths ({count} in total)")]
    TooLarge { budget: usize, count: BigUint },
    #[error("{0} is not an s-t path of the DAG")]
    NotAnStPath(&'static str),
}

/// All s–t paths of a DAG in lexicographic arc-id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathCatalog {
    pub paths: Vec<Path>,
    /// Number of s–t paths, from a counting DP; never truncated.
    pub count: BigUint,
    pub truncated: bool,
}

impl PathCatalog {
    fn complete(self, budget: usize) -> Result<Self, OracleError> {
        if self.truncated {
            return Err(OracleError::TooLarge {
                budget,
                count: self.count,
            });
        }
        Ok(self)
    }
}

/// Depth-first enumeration following out-arcs in increasing arc id; stops
/// after `budget` paths.
pub fn enumerate_st_paths(dag: &SpDag, budget: usize) -> PathCatalog {
    let count = dag.count_paths();
    let mut paths = Vec::new();
    let mut truncated = false;
    // Stack of (vertex, index of next out-arc to try).
    let mut stack: Vec<(usize, usize)> = vec![(dag.source(), 0)];
    let mut arcs: Vec<ArcId> = Vec::new();
    while let Some(&mut (v, ref mut next)) = stack.last_mut() {
        if v == dag.sink() {
            if paths.len() == budget {
                truncated = true;
                break;
            }
            paths.push(Path::new(arcs.clone()));
            stack.pop();
            arcs.pop();
            continue;
        }
        let out = dag.out_arcs(v);
        if *next < out.len() {
            let e = out[*next];
            *next += 1;
            arcs.push(dag.arc(e).id);
            stack.push((dag.arc(e).head, 0));
        } else {
            stack.pop();
            arcs.pop();
        }
    }
    PathCatalog {
        paths,
        count,
        truncated,
    }
}

/// Fixed-width bitset over catalog indices.
#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Self(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] & (1 << (i % 64)) != 0
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn and(&self, other: &Bits) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }
}

/// Finds `k` pairwise-adjacent vertices, where `adjacent(i, j)` is symmetric.
///
/// Branch and bound: vertices are tried in decreasing degree, and a branch is
/// cut when the clique plus a greedy coloring bound of the candidates cannot
/// reach `k`. The result is sorted.
pub fn find_k_clique(n: usize, k: usize, adjacent: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let mut adj: Vec<Bits> = (0..n).map(|_| Bits::new(n)).collect();
    for i in 0..n {
        for j in i + 1..n {
            if adjacent(i, j) {
                adj[i].set(j);
                adj[j].set(i);
            }
        }
    }
    let degree: Vec<usize> = adj.iter().map(Bits::count).collect();
    let mut order: Vec<usize> = (0..n).filter(|&v| degree[v] + 1 >= k).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    let mut candidates = Bits::new(n);
    for &v in &order {
        candidates.set(v);
    }

    fn color_bound(adj: &[Bits], cand: &[usize]) -> usize {
        // Greedy sequential coloring; its class count bounds the clique size.
        let mut classes: Vec<Vec<usize>> = Vec::new();
        for &v in cand {
            match classes.iter_mut().find(|cl| cl.iter().all(|&u| !adj[v].get(u))) {
                Some(cl) => cl.push(v),
                None => classes.push(vec![v]),
            }
        }
        classes.len()
    }

    fn expand(
        adj: &[Bits],
        order: &[usize],
        k: usize,
        clique: &mut Vec<usize>,
        cand: &Bits,
    ) -> bool {
        if clique.len() == k {
            return true;
        }
        let list: Vec<usize> = order.iter().copied().filter(|&v| cand.get(v)).collect();
        if clique.len() + list.len() < k || clique.len() + color_bound(adj, &list) < k {
            return false;
        }
        let mut remaining = cand.clone();
        for (pos, &v) in list.iter().enumerate() {
            if clique.len() + (list.len() - pos) < k {
                return false;
            }
            clique.push(v);
            let next = remaining.and(&adj[v]);
            if expand(adj, order, k, clique, &next) {
                return true;
            }
            clique.pop();
            remaining.0[v / 64] &= !(1 << (v % 64));
        }
        false
    }

    let mut clique = Vec::with_capacity(k);
    if expand(&adj, &order, k, &mut clique, &candidates) {
        clique.sort_unstable();
        Some(clique)
    } else {
        None
    }
}

fn pick_dissimilar(paths: &[&Path], k: usize, d: usize) -> Option<Vec<Path>> {
    if k == 0 {
        return Some(Vec::new());
    }
    let first = paths.first()?;
    if d == 0 {
        return Some(vec![(*first).clone(); k]);
    }
    if k > paths.len() {
        return None;
    }
    let clique = find_k_clique(paths.len(), k, |i, j| hamming_distance(paths[i], paths[j]) >= d)?;
    Some(clique.into_iter().map(|i| paths[i].clone()).collect())
}

/// Decides the instance by explicit search: `k` catalog paths with pairwise
/// distance at least `d`, or `None`.
pub fn brute_solve(dag: &SpDag, k: usize, d: usize, budget: usize) -> Result<Option<Vec<Path>>, OracleError> {
    let catalog = enumerate_st_paths(dag, budget).complete(budget)?;
    let refs: Vec<&Path> = catalog.paths.iter().collect();
    Ok(pick_dissimilar(&refs, k, d))
}

/// Largest `δ` such that `k` distinct paths are pairwise at distance `>= δ`.
/// `None` when `k < 2` or there are fewer than `k` paths.
pub fn brute_max_min(dag: &SpDag, k: usize, budget: usize) -> Result<Option<usize>, OracleError> {
    let catalog = enumerate_st_paths(dag, budget).complete(budget)?;
    let paths = &catalog.paths;
    if k < 2 || k > paths.len() {
        return Ok(None);
    }
    let n = paths.len();
    let mut dist = vec![vec![0usize; n]; n];
    let mut values = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let h = hamming_distance(&paths[i], &paths[j]);
            dist[i][j] = h;
            dist[j][i] = h;
            values.push(h);
        }
    }
    values.sort_unstable();
    values.dedup();
    // Feasibility is monotone in the threshold; binary search the values.
    let feasible = |delta: usize| find_k_clique(n, k, |i, j| dist[i][j] >= delta).is_some();
    let (mut lo, mut hi) = (0usize, values.len());
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if feasible(values[mid]) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(values[lo]))
}

/// First catalog path at distance at least `q` from every reference.
pub fn brute_farthest(dag: &SpDag, refs: &[Path], q: usize, budget: usize) -> Result<Option<Path>, OracleError> {
    let catalog = enumerate_st_paths(dag, budget).complete(budget)?;
    Ok(catalog
        .paths
        .into_iter()
        .find(|p| refs.iter().all(|r| hamming_distance(p, r) >= q)))
}

/// `r` paths within distance `q` of `center`, pairwise at distance `>= d`.
pub fn brute_ball(
    dag: &SpDag,
    center: &Path,
    q: usize,
    r: usize,
    d: usize,
    budget: usize,
) -> Result<Option<Vec<Path>>, OracleError> {
    if !dag.is_st_path(center) {
        return Err(OracleError::NotAnStPath("center"));
    }
    let catalog = enumerate_st_paths(dag, budget).complete(budget)?;
    let ball: Vec<&Path> = catalog
        .paths
        .iter()
        .filter(|p| hamming_distance(p, center) <= q)
        .collect();
    if d == 0 && r > 0 {
        return Ok(Some(vec![center.clone(); r]));
    }
    Ok(pick_dissimilar(&ball, r, d))
}

/// Splits `center △ other` into minimal bypasses by walking `other` and
/// cutting at every vertex it shares with `center`.
pub fn minimal_bypass_decomposition(
    dag: &SpDag,
    center: &Path,
    other: &Path,
) -> Result<Vec<BypassComponent>, OracleError> {
    let cverts = dag
        .path_vertices(center)
        .map_err(|_| OracleError::NotAnStPath("center"))?;
    let overts = dag
        .path_vertices(other)
        .map_err(|_| OracleError::NotAnStPath("other"))?;
    let mut at = vec![None; dag.vertex_count()];
    for (i, &v) in cverts.iter().enumerate() {
        at[v] = Some(i);
    }

    let mut components = Vec::new();
    let mut last_sync = 0usize; // index on `other`
    for (oi, &v) in overts.iter().enumerate().skip(1) {
        let Some(ci) = at[v] else { continue };
        let ci_prev = at[overts[last_sync]].expect("sync vertices lie on the center");
        let detour = &other.arcs()[last_sync..oi];
        let window = &center.arcs()[ci_prev..ci];
        if detour != window {
            let mut arcs: Vec<ArcId> = detour.iter().chain(window).copied().collect();
            arcs.sort_unstable();
            components.push(BypassComponent {
                window: (ci_prev, ci),
                arcs,
            });
        }
        last_sync = oi;
    }
    Ok(components)
}
