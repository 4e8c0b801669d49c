//! The end-to-end pipeline: greedy farthest paths, ball partition, and one
//! ball search per part of every composition of `k`.

use std::collections::HashMap;
use std::time::Instant;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::colorcode::{ball_search, BallConfig, ColorError, FamilyMode};
use crate::farthest::farthest_path;
use crate::graph::{build_sp_dag, hamming_distance, ArcWeightedDigraph, GraphError, Path, SpDag};
use crate::oracle::{brute_solve, OracleError};

#[derive(Debug, Error)]
pub enum SolveError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("internal error: produced certificate failed verification: {0}")]
    Unverified(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMode {
    Fpt,
    Oracle,
    Hybrid,
}

impl SolveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SolveMode::Fpt => "fpt",
            SolveMode::Oracle => "oracle",
            SolveMode::Hybrid => "hybrid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveConfig {
    pub mode: SolveMode,
    pub family: FamilyMode,
    pub seed: u64,
    /// Colorings per ball search in seeded mode.
    pub coloring_budget: usize,
    /// Largest path catalog the oracle will enumerate.
    pub enumeration_budget: usize,
    /// Base of the greedy thresholds `base^(k-i) · d`.
    pub threshold_base: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        Self {
            mode: SolveMode::Hybrid,
            family: FamilyMode::ExhaustiveVerified,
            seed: 0,
            coloring_budget: 64,
            enumeration_budget: 100_000,
            threshold_base: 3,
        }
    }
}

impl SolveConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.coloring_budget == 0 || self.enumeration_budget == 0 {
            return Err(SolveError::Config("budgets must be positive".into()));
        }
        if self.threshold_base < 3 {
            return Err(SolveError::Config("threshold base must be at least 3".into()));
        }
        Ok(())
    }

    fn ball_config(&self) -> BallConfig {
        BallConfig {
            family: self.family,
            seed: self.seed,
            coloring_budget: self.coloring_budget,
        }
    }
}

/// `base^exp · d`, saturating.
pub fn threshold(base: u64, exp: usize, d: usize) -> u64 {
    base.saturating_pow(exp.min(u32::MAX as usize) as u32)
        .saturating_mul(d as u64)
}

fn as_radius(x: u64) -> usize {
    usize::try_from(x).unwrap_or(usize::MAX)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub paths: Vec<Path>,
    pub complete: bool,
}

/// Picks `P_1` as the first path, then each `P_i` at distance at least
/// `base^(k-i) · d` from all earlier ones, stopping at the first failure.
pub fn greedy_phase(dag: &SpDag, k: usize, d: usize, cfg: &SolveConfig) -> GreedyOutcome {
    let mut paths: Vec<Path> = Vec::with_capacity(k);
    if k == 0 {
        return GreedyOutcome { paths, complete: true };
    }
    paths.push(dag.first_path());
    for i in 2..=k {
        let q = threshold(cfg.threshold_base, k - i, d);
        let q = u32::try_from(q).unwrap_or(u32::MAX);
        match farthest_path(dag, &paths, q) {
            Some(p) => paths.push(p),
            None => break,
        }
    }
    for j in 1..paths.len() {
        let need = threshold(cfg.threshold_base, k - (j + 1), d);
        for i in 0..j {
            assert!(
                hamming_distance(&paths[i], &paths[j]) as u64 >= need,
                "greedy invariant violated between paths {} and {}",
                i + 1,
                j + 1
            );
        }
    }
    GreedyOutcome {
        complete: paths.len() == k,
        paths,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decision {
    Yes,
    No,
    ProbabilisticNo,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    pub greedy_paths: usize,
    pub compositions_tried: usize,
    pub elapsed_ms: u64,
}

/// Solver output in its JSON form. A `yes` certificate carries `k` paths and
/// their pairwise distance matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub decision: Decision,
    pub k: usize,
    pub d: usize,
    pub paths: Vec<Path>,
    pub pairwise: Vec<Vec<usize>>,
    pub mode: String,
    pub seed: u64,
    pub graph_hash: String,
    pub stats: SolveStats,
}

impl Certificate {
    fn new(decision: Decision, k: usize, d: usize, paths: Vec<Path>, g: &ArcWeightedDigraph, cfg: &SolveConfig) -> Self {
        let pairwise = pairwise_matrix(&paths);
        Self {
            decision,
            k,
            d,
            paths,
            pairwise,
            mode: cfg.mode.as_str().to_string(),
            seed: cfg.seed,
            graph_hash: g.content_hash(),
            stats: SolveStats::default(),
        }
    }

    pub fn is_yes(&self) -> bool {
        self.decision == Decision::Yes
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

pub fn pairwise_matrix(paths: &[Path]) -> Vec<Vec<usize>> {
    paths
        .iter()
        .map(|p| paths.iter().map(|o| hamming_distance(p, o)).collect())
        .collect()
}

/// Yields compositions of `total` into `parts` nonnegative parts in
/// lexicographic order.
pub fn compositions(total: usize, parts: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut cur: Option<Vec<usize>> = match parts {
        0 if total == 0 => Some(Vec::new()),
        0 => None,
        _ => {
            let mut v = vec![0; parts];
            v[parts - 1] = total;
            Some(v)
        }
    };
    std::iter::from_fn(move || {
        let out = cur.clone()?;
        // Next: find the rightmost position i < last that can grow, i.e. with
        // something to take from the suffix.
        let n = out.len();
        let mut next = None;
        if n >= 2 {
            let mut suffix: usize = out[n - 1];
            for i in (0..n - 1).rev() {
                if suffix > 0 {
                    let mut v = out.clone();
                    v[i] += 1;
                    for x in v.iter_mut().skip(i + 1) {
                        *x = 0;
                    }
                    v[n - 1] = suffix - 1;
                    next = Some(v);
                    break;
                }
                suffix += out[i];
            }
        }
        cur = next;
        Some(out)
    })
}

/// Decides the instance and returns a verified certificate (or a NO answer).
pub fn solve(g: &ArcWeightedDigraph, k: usize, d: usize, cfg: &SolveConfig) -> Result<Certificate, SolveError> {
    cfg.validate()?;
    let started = Instant::now();
    let dag = build_sp_dag(g)?;
    let (decision, paths, mut stats) = decide(&dag, k, d, cfg)?;
    stats.elapsed_ms = started.elapsed().as_millis() as u64;
    let mut cert = Certificate::new(decision, k, d, paths, g, cfg);
    cert.stats = stats;
    if cert.is_yes() {
        let report = verify_certificate(g, &cert, k, d).map_err(|e| SolveError::Unverified(e.to_string()))?;
        if let Some(v) = report.violation {
            return Err(SolveError::Unverified(v));
        }
    }
    Ok(cert)
}

fn decide(dag: &SpDag, k: usize, d: usize, cfg: &SolveConfig) -> Result<(Decision, Vec<Path>, SolveStats), SolveError> {
    let mut stats = SolveStats::default();
    if k == 0 {
        return Ok((Decision::Yes, Vec::new(), stats));
    }
    let use_oracle = match cfg.mode {
        SolveMode::Oracle => true,
        SolveMode::Fpt => false,
        SolveMode::Hybrid => dag.count_paths() <= BigUint::from(cfg.enumeration_budget),
    };
    if use_oracle {
        return Ok(match brute_solve(dag, k, d, cfg.enumeration_budget)? {
            Some(paths) => (Decision::Yes, paths, stats),
            None => (Decision::No, Vec::new(), stats),
        });
    }

    let greedy = greedy_phase(dag, k, d, cfg);
    stats.greedy_paths = greedy.paths.len();
    if greedy.complete {
        return Ok((Decision::Yes, greedy.paths, stats));
    }
    // d >= 1 here: with d = 0 every threshold is 0 and the greedy phase completes.
    let centers = greedy.paths;
    let kk = centers.len();
    let q = threshold(cfg.threshold_base, k - kk - 1, d);
    let radius = as_radius(q - 1);
    let ball_cfg = cfg.ball_config();

    let mut found: HashMap<(usize, usize), Vec<Path>> = HashMap::new();
    // Smallest r known to fail per ball; feasibility is monotone in r.
    let mut fails_from: Vec<usize> = vec![usize::MAX; kk];
    let mut certified = true;
    for comp in compositions(k, kk) {
        stats.compositions_tried += 1;
        let mut ok = true;
        for (ball, &r) in comp.iter().enumerate() {
            if r == 0 || found.contains_key(&(ball, r)) {
                continue;
            }
            if r >= fails_from[ball] {
                ok = false;
                break;
            }
            let res = ball_search(dag, &centers[ball], radius, r, d, &ball_cfg)?;
            certified &= res.certified;
            match res.paths {
                Some(paths) => {
                    found.insert((ball, r), paths);
                }
                None => {
                    fails_from[ball] = r;
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let paths = comp
                .iter()
                .enumerate()
                .filter(|(_, &r)| r > 0)
                .flat_map(|(ball, &r)| found[&(ball, r)].iter().cloned())
                .collect();
            return Ok((Decision::Yes, paths, stats));
        }
    }
    let decision = if certified { Decision::No } else { Decision::ProbabilisticNo };
    Ok((decision, Vec::new(), stats))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("malformed certificate: {0}")]
    Malformed(String),
    #[error("graph has no s-t path")]
    NoPath,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verification {
    /// First violated condition, if any.
    pub violation: Option<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.violation.is_none()
    }
}

/// Re-checks a YES certificate against the graph: `k` shortest s–t paths,
/// pairwise at distance at least `d`.
pub fn verify_certificate(
    g: &ArcWeightedDigraph,
    cert: &Certificate,
    k: usize,
    d: usize,
) -> Result<Verification, VerifyError> {
    let n = cert.paths.len();
    if cert.pairwise.len() != n || cert.pairwise.iter().any(|row| row.len() != n) {
        return Err(VerifyError::Malformed(format!(
            "pairwise matrix is not {n}x{n}"
        )));
    }
    if cert.decision == Decision::Yes && n != cert.k {
        return Err(VerifyError::Malformed(format!(
            "claims k = {} but lists {n} paths",
            cert.k
        )));
    }
    let fail = |msg: String| Ok(Verification { violation: Some(msg) });
    if cert.decision != Decision::Yes {
        return fail("certificate does not claim a solution".into());
    }
    if n != k {
        return fail(format!("expected {k} paths, certificate has {n}"));
    }
    if cert.graph_hash != g.content_hash() {
        return fail("graph hash does not match the input graph".into());
    }
    let dag = build_sp_dag(g).map_err(|_| VerifyError::NoPath)?;
    for (i, p) in cert.paths.iter().enumerate() {
        if !dag.is_st_path(p) {
            return fail(format!("path {} not a shortest path", i + 1));
        }
    }
    for i in 0..n {
        for j in 0..n {
            let actual = hamming_distance(&cert.paths[i], &cert.paths[j]);
            if cert.pairwise[i][j] != actual {
                return fail(format!(
                    "pairwise entry ({},{}) is {} but the distance is {actual}",
                    i + 1,
                    j + 1,
                    cert.pairwise[i][j]
                ));
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if cert.pairwise[i][j] < d {
                return fail(format!(
                    "pair ({},{}) distance {} < {d}",
                    i + 1,
                    j + 1,
                    cert.pairwise[i][j]
                ));
            }
        }
    }
    Ok(Verification { violation: None })
}
