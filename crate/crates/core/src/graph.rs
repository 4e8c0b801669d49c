//! Input graph model, the `.dsp` text format, shortest-path DAG preprocessing
//! and Hamming distance between paths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt::{self, Write as _};
use std::io::BufRead;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

/// Vertex identifier as it appears in the input (1-based).
pub type VertexId = usize;
/// Arc identifier; arcs are numbered 0..m-1 in file order.
pub type ArcId = usize;

/// Decimal weights are stored as integers scaled by this factor.
pub const WEIGHT_SCALE: u64 = 1_000_000;
const WEIGHT_DECIMALS: usize = 6;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid graph: {0}")]
    Invalid(String),
    #[error("no shortest path exists: t is unreachable from s")]
    NoShortestPath,
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn parse_err(line: usize, message: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Arc {
    pub id: ArcId,
    pub tail: VertexId,
    pub head: VertexId,
    /// Weight scaled by [`WEIGHT_SCALE`].
    pub weight: u64,
}

/// Arc-weighted digraph with terminals. Parallel arcs are allowed and are
/// told apart by their ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcWeightedDigraph {
    n: usize,
    arcs: Vec<Arc>,
    s: VertexId,
    t: VertexId,
}

impl ArcWeightedDigraph {
    /// Builds a graph from `(tail, head, scaled_weight)` triples; arc ids follow
    /// the order of `arcs`.
    pub fn new(
        n: usize,
        s: VertexId,
        t: VertexId,
        arcs: impl IntoIterator<Item = (VertexId, VertexId, u64)>,
    ) -> Result<Self, GraphError> {
        let in_range = |v: VertexId| (1..=n).contains(&v);
        if !in_range(s) || !in_range(t) {
            return Err(GraphError::Invalid(format!(
                "terminals s={s}, t={t} must lie in 1..={n}"
            )));
        }
        let mut out = Vec::new();
        for (id, (tail, head, weight)) in arcs.into_iter().enumerate() {
            if !in_range(tail) || !in_range(head) {
                return Err(GraphError::Invalid(format!(
                    "arc {id} ({tail},{head}) has an endpoint outside 1..={n}"
                )));
            }
            if weight == 0 {
                return Err(GraphError::Invalid(format!("arc {id} has non-positive weight")));
            }
            out.push(Arc {
                id,
                tail,
                head,
                weight,
            });
        }
        Ok(Self {
            n,
            arcs: out,
            s,
            t,
        })
    }

    /// Unit-weight graph (every weight equals 1.0).
    pub fn unit(
        n: usize,
        s: VertexId,
        t: VertexId,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self, GraphError> {
        Self::new(n, s, t, arcs.into_iter().map(|(u, v)| (u, v, WEIGHT_SCALE)))
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn arc(&self, id: ArcId) -> Option<&Arc> {
        self.arcs.get(id)
    }

    pub fn source(&self) -> VertexId {
        self.s
    }

    pub fn target(&self) -> VertexId {
        self.t
    }

    /// Serializes to the line-oriented `.dsp` format.
    pub fn to_dsp_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "p dsp {} {}", self.n, self.arcs.len());
        let _ = writeln!(out, "s {}", self.s);
        let _ = writeln!(out, "t {}", self.t);
        for a in &self.arcs {
            let _ = writeln!(out, "a {} {} {}", a.tail, a.head, format_weight(a.weight));
        }
        out
    }

    /// Hex SHA-256 of the canonical `.dsp` serialization.
    pub fn content_hash(&self) -> String {
        hex::encode(Sha256::digest(self.to_dsp_string().as_bytes()))
    }
}

impl fmt::Display for ArcWeightedDigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_dsp_string())
    }
}

impl FromStr for ArcWeightedDigraph {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_graph(s.as_bytes())
    }
}

/// Formats a scaled weight as a minimal decimal string.
pub fn format_weight(scaled: u64) -> String {
    let int = scaled / WEIGHT_SCALE;
    let frac = scaled % WEIGHT_SCALE;
    if frac == 0 {
        return int.to_string();
    }
    let digits = format!("{frac:0width$}", width = WEIGHT_DECIMALS);
    format!("{int}.{}", digits.trim_end_matches('0'))
}

/// Parses a positive decimal with at most six fractional digits into a scaled
/// integer. Returns `Ok(0)` for a zero weight so callers can report it.
pub fn parse_weight(text: &str) -> Result<u64, String> {
    if text.starts_with('-') {
        return Err(format!("non-positive weight {text:?}"));
    }
    let (int_part, frac_part) = match text.split_once('.') {
        Some((_, "")) => return Err(format!("malformed weight {text:?}")),
        Some((i, f)) => (i, f),
        None => (text, ""),
    };
    let all_digits = |s: &str| s.bytes().all(|b| b.is_ascii_digit());
    if (int_part.is_empty() && frac_part.is_empty()) || !all_digits(int_part) || !all_digits(frac_part) {
        return Err(format!("malformed weight {text:?}"));
    }
    if frac_part.len() > WEIGHT_DECIMALS {
        return Err(format!(
            "weight {text:?} has more than {WEIGHT_DECIMALS} fractional digits"
        ));
    }
    let int: u64 = if int_part.is_empty() {
        0
    } else {
        int_part
            .parse()
            .map_err(|_| format!("weight {text:?} is out of range"))?
    };
    let mut frac: u64 = 0;
    for (i, b) in frac_part.bytes().enumerate() {
        frac += u64::from(b - b'0') * 10u64.pow((WEIGHT_DECIMALS - 1 - i) as u32);
    }
    int.checked_mul(WEIGHT_SCALE)
        .and_then(|v| v.checked_add(frac))
        .ok_or_else(|| format!("weight {text:?} is out of range"))
}

/// Reads a graph in `.dsp` format.
pub fn parse_graph(input: impl BufRead) -> Result<ArcWeightedDigraph, GraphError> {
    let mut header: Option<(usize, usize)> = None;
    let mut s = None;
    let mut t = None;
    let mut arcs = Vec::new();
    let mut last_line = 0;

    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let parse_vertex = |tok: &str, n: usize| -> Result<VertexId, GraphError> {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(lineno, format!("malformed vertex id {tok:?}")))?;
            if v == 0 || v > n {
                return Err(parse_err(
                    lineno,
                    format!("vertex id {v} out of range 1..={n}"),
                ));
            }
            Ok(v)
        };
        match tokens[0] {
            "p" => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate header"));
                }
                if tokens.len() != 4 || tokens[1] != "dsp" {
                    return Err(parse_err(lineno, "malformed header, expected `p dsp <n> <m>`"));
                }
                let n = tokens[2]
                    .parse()
                    .map_err(|_| parse_err(lineno, "malformed vertex count"))?;
                let m = tokens[3]
                    .parse()
                    .map_err(|_| parse_err(lineno, "malformed arc count"))?;
                header = Some((n, m));
            }
            kind @ ("s" | "t") => {
                let (n, _) = header.ok_or_else(|| parse_err(lineno, "terminal before header"))?;
                if tokens.len() != 2 {
                    return Err(parse_err(lineno, format!("malformed `{kind}` line")));
                }
                let v = parse_vertex(tokens[1], n)?;
                let slot = if kind == "s" { &mut s } else { &mut t };
                if slot.replace(v).is_some() {
                    return Err(parse_err(lineno, format!("duplicate `{kind}` line")));
                }
            }
            "a" => {
                let (n, m) = header.ok_or_else(|| parse_err(lineno, "arc before header"))?;
                if tokens.len() != 4 {
                    return Err(parse_err(lineno, "malformed arc, expected `a <tail> <head> <weight>`"));
                }
                let tail = parse_vertex(tokens[1], n)?;
                let head = parse_vertex(tokens[2], n)?;
                let weight = parse_weight(tokens[3]).map_err(|msg| parse_err(lineno, msg))?;
                if weight == 0 {
                    return Err(parse_err(lineno, format!("non-positive weight {:?}", tokens[3])));
                }
                if arcs.len() == m {
                    return Err(parse_err(lineno, format!("more than {m} arcs")));
                }
                arcs.push((tail, head, weight));
            }
            other => return Err(parse_err(lineno, format!("unknown line type {other:?}"))),
        }
    }

    let end = last_line + 1;
    let (n, m) = header.ok_or_else(|| parse_err(end, "missing header"))?;
    if arcs.len() != m {
        return Err(parse_err(end, format!("header declares {m} arcs, found {}", arcs.len())));
    }
    let s = s.ok_or_else(|| parse_err(end, "missing `s` line"))?;
    let t = t.ok_or_else(|| parse_err(end, "missing `t` line"))?;
    ArcWeightedDigraph::new(n, s, t, arcs)
}

/// An s–t path (or prefix) given by its arc ids in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "Vec<ArcId>", into = "Vec<ArcId>")]
pub struct Path {
    arcs: Vec<ArcId>,
    sorted: Vec<ArcId>,
}

impl Path {
    pub fn new(arcs: Vec<ArcId>) -> Self {
        let mut sorted = arcs.clone();
        sorted.sort_unstable();
        Self { arcs, sorted }
    }

    pub fn empty() -> Self {
        Self::new(Vec::new())
    }

    pub fn arcs(&self) -> &[ArcId] {
        &self.arcs
    }

    /// Arc ids in increasing order.
    pub fn arc_set(&self) -> &[ArcId] {
        &self.sorted
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn contains(&self, arc: ArcId) -> bool {
        self.sorted.binary_search(&arc).is_ok()
    }

    /// Arc ids of `self △ other`, sorted.
    pub fn symmetric_difference(&self, other: &Path) -> Vec<ArcId> {
        sym_diff(&self.sorted, &other.sorted)
    }
}

impl From<Vec<ArcId>> for Path {
    fn from(arcs: Vec<ArcId>) -> Self {
        Path::new(arcs)
    }
}

impl From<Path> for Vec<ArcId> {
    fn from(p: Path) -> Self {
        p.arcs
    }
}

/// `|A(p) △ A(q)|`.
pub fn hamming_distance(p: &Path, q: &Path) -> usize {
    sym_diff_len(p.arc_set(), q.arc_set())
}

/// Size of the symmetric difference of two sorted, duplicate-free slices.
pub fn sym_diff_len(a: &[ArcId], b: &[ArcId]) -> usize {
    let (mut i, mut j, mut common) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                common += 1;
                i += 1;
                j += 1;
            }
        }
    }
    a.len() + b.len() - 2 * common
}

/// Symmetric difference of two sorted, duplicate-free slices.
pub fn sym_diff(a: &[ArcId], b: &[ArcId]) -> Vec<ArcId> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DagArc {
    /// Id of the arc in the input graph.
    pub id: ArcId,
    /// Topological position of the tail.
    pub tail: usize,
    /// Topological position of the head.
    pub head: usize,
    pub weight: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("arc {0} is not in the shortest-path DAG")]
    UnknownArc(ArcId),
    #[error("path does not start at s")]
    WrongStart,
    #[error("path does not end at t")]
    WrongEnd,
    #[error("arcs {0} and {1} are not consecutive")]
    Disconnected(ArcId, ArcId),
}

/// Shortest-path DAG: only arcs on some shortest s–t path survive.
///
/// Vertices are renumbered by topological position, so `0` is `s`, the last
/// position is `t`, and `A_i` (arcs whose head is among the first `i`
/// vertices) is a prefix condition on `DagArc::head`.
#[derive(Debug, Clone)]
pub struct SpDag {
    original: Vec<VertexId>,
    dist: Vec<u64>,
    arcs: Vec<DagArc>,
    in_arcs: Vec<Vec<usize>>,
    out_arcs: Vec<Vec<usize>>,
    local_of: Vec<Option<usize>>,
}

impl SpDag {
    pub fn vertex_count(&self) -> usize {
        self.original.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Surviving arcs ordered by arc id.
    pub fn arcs(&self) -> &[DagArc] {
        &self.arcs
    }

    pub fn arc(&self, local: usize) -> &DagArc {
        &self.arcs[local]
    }

    /// Index into [`SpDag::arcs`] for an input arc id, if it survived.
    pub fn local_index(&self, id: ArcId) -> Option<usize> {
        self.local_of.get(id).copied().flatten()
    }

    pub fn arc_by_id(&self, id: ArcId) -> Option<&DagArc> {
        self.local_index(id).map(|i| &self.arcs[i])
    }

    /// Incoming arcs of a vertex (local indices, increasing arc id).
    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    /// Outgoing arcs of a vertex (local indices, increasing arc id).
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn source(&self) -> usize {
        0
    }

    pub fn sink(&self) -> usize {
        self.original.len() - 1
    }

    /// Shortest distance from `s` (scaled).
    pub fn dist(&self, v: usize) -> u64 {
        self.dist[v]
    }

    /// Original vertex id of a topological position.
    pub fn original_vertex(&self, v: usize) -> VertexId {
        self.original[v]
    }

    /// Checks that `path` is an s–t path of this DAG and returns its vertex
    /// positions (length `path.len() + 1`).
    pub fn path_vertices(&self, path: &Path) -> Result<Vec<usize>, PathError> {
        let mut verts = vec![self.source()];
        let mut prev: Option<ArcId> = None;
        for &id in path.arcs() {
            let arc = self.arc_by_id(id).ok_or(PathError::UnknownArc(id))?;
            let cur = *verts.last().unwrap();
            if arc.tail != cur {
                return Err(match prev {
                    None => PathError::WrongStart,
                    Some(p) => PathError::Disconnected(p, id),
                });
            }
            verts.push(arc.head);
            prev = Some(id);
        }
        if *verts.last().unwrap() != self.sink() {
            return Err(PathError::WrongEnd);
        }
        Ok(verts)
    }

    pub fn is_st_path(&self, path: &Path) -> bool {
        self.path_vertices(path).is_ok()
    }

    /// Path with the lexicographically smallest arc-id sequence.
    pub fn first_path(&self) -> Path {
        let mut v = self.source();
        let mut arcs = Vec::new();
        while v != self.sink() {
            let e = self.out_arcs[v][0];
            arcs.push(self.arcs[e].id);
            v = self.arcs[e].head;
        }
        Path::new(arcs)
    }

    /// Number of s–t paths, counted by dynamic programming.
    pub fn count_paths(&self) -> BigUint {
        let mut count = vec![BigUint::from(0u32); self.vertex_count()];
        count[0] = BigUint::from(1u32);
        for v in 1..self.vertex_count() {
            let mut c = BigUint::from(0u32);
            for &e in &self.in_arcs[v] {
                c += &count[self.arcs[e].tail];
            }
            count[v] = c;
        }
        count[self.sink()].clone()
    }

    /// Total weight of an s–t path, or `None` if it is not a path of this DAG.
    pub fn path_weight(&self, path: &Path) -> Option<u64> {
        self.path_vertices(path).ok()?;
        Some(
            path.arcs()
                .iter()
                .map(|&id| self.arc_by_id(id).unwrap().weight)
                .sum(),
        )
    }
}

/// Removes every arc and vertex that is not on a shortest s–t path.
pub fn build_sp_dag(g: &ArcWeightedDigraph) -> Result<SpDag, GraphError> {
    let n = g.vertex_count();
    let mut out_adj = vec![Vec::new(); n + 1];
    for a in g.arcs() {
        out_adj[a.tail].push(a.id);
    }

    let mut dist = vec![u64::MAX; n + 1];
    dist[g.source()] = 0;
    let mut heap = BinaryHeap::new();
    heap.push(Reverse((0u64, g.source())));
    while let Some(Reverse((d, u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &id in &out_adj[u] {
            let a = g.arcs()[id];
            let nd = d.saturating_add(a.weight);
            if nd < dist[a.head] {
                dist[a.head] = nd;
                heap.push(Reverse((nd, a.head)));
            }
        }
    }
    if dist[g.target()] == u64::MAX {
        return Err(GraphError::NoShortestPath);
    }

    let tight = |a: &Arc| dist[a.tail] != u64::MAX && dist[a.head] == dist[a.tail] + a.weight;

    // Vertices that reach t along tight arcs.
    let mut in_adj = vec![Vec::new(); n + 1];
    for a in g.arcs().iter().filter(|a| tight(a)) {
        in_adj[a.head].push(a.tail);
    }
    let mut reaches_t = vec![false; n + 1];
    reaches_t[g.target()] = true;
    let mut stack = vec![g.target()];
    while let Some(v) = stack.pop() {
        for &u in &in_adj[v] {
            if !reaches_t[u] {
                reaches_t[u] = true;
                stack.push(u);
            }
        }
    }

    let mut keep: Vec<VertexId> = (1..=n)
        .filter(|&v| reaches_t[v] && dist[v] != u64::MAX && dist[v] <= dist[g.target()])
        .collect();
    // Positive weights make dist strictly increase along tight arcs.
    keep.sort_by_key(|&v| (dist[v], v));
    let mut pos = vec![usize::MAX; n + 1];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }

    let mut arcs = Vec::new();
    let mut local_of = vec![None; g.arc_count()];
    for a in g.arcs() {
        if tight(a) && reaches_t[a.head] && pos[a.tail] != usize::MAX {
            local_of[a.id] = Some(arcs.len());
            arcs.push(DagArc {
                id: a.id,
                tail: pos[a.tail],
                head: pos[a.head],
                weight: a.weight,
            });
        }
    }
    let nv = keep.len();
    let mut in_arcs = vec![Vec::new(); nv];
    let mut out_arcs = vec![Vec::new(); nv];
    for (i, a) in arcs.iter().enumerate() {
        in_arcs[a.head].push(i);
        out_arcs[a.tail].push(i);
    }
    let dag = SpDag {
        original: keep.clone(),
        dist: keep.iter().map(|&v| dist[v]).collect(),
        arcs,
        in_arcs,
        out_arcs,
        local_of,
    };
    debug_assert_eq!(dag.original_vertex(0), g.source());
    debug_assert_eq!(dag.original_vertex(dag.sink()), g.target());
    Ok(dag)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const DIAMOND: &str = "p dsp 4 4\ns 1\nt 4\na 1 2 1\na 1 3 1\na 2 4 1\na 3 4 1\n";

    #[test]
    fn parses_minimal_file() {
        let g: ArcWeightedDigraph = "p dsp 2 1\ns 1\nt 2\na 1 2 1.0\n".parse().unwrap();
        assert_eq!(g.arc_count(), 1);
        assert_eq!(g.arcs()[0].weight, 1_000_000);
    }

    #[test]
    fn parses_diamond_with_comments() {
        let text = format!("# diamond\n{DIAMOND}# trailing\n");
        let g: ArcWeightedDigraph = text.parse().unwrap();
        assert_eq!(g.vertex_count(), 4);
        assert_eq!(g.arc_count(), 4);
        assert_eq!((g.source(), g.target()), (1, 4));
    }

    #[test]
    fn rejects_zero_weight() {
        let err = "p dsp 2 1\ns 1\nt 2\na 1 2 0\n"
            .parse::<ArcWeightedDigraph>()
            .unwrap_err();
        match err {
            GraphError::Parse { line, message } => {
                assert_eq!(line, 4);
                assert!(message.contains("non-positive"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        let err = "p dsp 2 1\ns 1\nt 2\na 1 2 -1.5\n"
            .parse::<ArcWeightedDigraph>()
            .unwrap_err();
        assert!(err.to_string().contains("non-positive"), "{err}");
    }

    #[test]
    fn rejects_structural_errors() {
        let cases = [
            ("p dsp 2 1\np dsp 2 1\n", 2, "duplicate header"),
            ("p dsp 2 1\ns 1\nt 3\na 1 2 1\n", 3, "out of range"),
            ("p dsp 2 1\ns 1\nt 2\na 1 2\n", 4, "malformed arc"),
            ("p dsp 2 1\ns 1\nt 2\na 1 2 1.0000001\n", 4, "fractional"),
            ("a 1 2 1\n", 1, "before header"),
            ("p dsp 2 2\ns 1\nt 2\na 1 2 1\n", 5, "declares 2 arcs"),
            ("p dsp 2 1\ns 1\ns 1\n", 3, "duplicate `s`"),
        ];
        for (text, want_line, needle) in cases {
            match text.parse::<ArcWeightedDigraph>() {
                Err(GraphError::Parse { line, message }) => {
                    assert_eq!(line, want_line, "{text:?}: {message}");
                    assert!(message.contains(needle), "{text:?}: {message}");
                }
                other => panic!("{text:?}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn weight_text_round_trip() {
        for (text, scaled) in [("1", 1_000_000), ("0.5", 500_000), ("2.000001", 2_000_001), (".25", 250_000)] {
            assert_eq!(parse_weight(text).unwrap(), scaled);
        }
        assert_eq!(format_weight(1_500_000), "1.5");
        assert_eq!(format_weight(3_000_000), "3");
        let g: ArcWeightedDigraph = "p dsp 3 2\ns 1\nt 3\na 1 2 0.125\na 2 3 7\n".parse().unwrap();
        let again: ArcWeightedDigraph = g.to_dsp_string().parse().unwrap();
        assert_eq!(g, again);
        assert_eq!(g.content_hash(), again.content_hash());
    }

    #[test]
    fn triangle_loses_long_arc() {
        // s=1, a=2, t=3: s→a (1), a→t (1), s→t (3)
        let g: ArcWeightedDigraph = "p dsp 3 3\ns 1\nt 3\na 1 2 1\na 2 3 1\na 1 3 3\n".parse().unwrap();
        let dag = build_sp_dag(&g).unwrap();
        let ids: Vec<ArcId> = dag.arcs().iter().map(|a| a.id).collect();
        assert_eq!(ids, vec![0, 1]);
        assert_eq!(dag.dist(dag.sink()), 2 * WEIGHT_SCALE);
    }

    #[test]
    fn diamond_survives_intact() {
        let g: ArcWeightedDigraph = DIAMOND.parse().unwrap();
        let dag = build_sp_dag(&g).unwrap();
        assert_eq!(dag.arc_count(), 4);
        assert_eq!(dag.vertex_count(), 4);
        for a in dag.arcs() {
            assert_eq!(dag.dist(a.head), dag.dist(a.tail) + a.weight);
        }
        assert_eq!(dag.count_paths(), BigUint::from(2u32));
        assert_eq!(dag.first_path().arcs(), &[0, 2]);
    }

    #[test]
    fn unreachable_target_is_an_error() {
        let g: ArcWeightedDigraph = "p dsp 3 1\ns 1\nt 3\na 1 2 1\n".parse().unwrap();
        assert!(matches!(build_sp_dag(&g), Err(GraphError::NoShortestPath)));
    }

    #[test]
    fn dead_ends_and_back_arcs_are_removed() {
        // 1→2→4 shortest; 2→3 dead end; 4→1 back arc.
        let g: ArcWeightedDigraph =
            "p dsp 4 4\ns 1\nt 4\na 1 2 1\na 2 4 1\na 2 3 1\na 4 1 1\n".parse().unwrap();
        let dag = build_sp_dag(&g).unwrap();
        assert_eq!(dag.vertex_count(), 3);
        assert_eq!(dag.arcs().iter().map(|a| a.id).collect::<Vec<_>>(), vec![0, 1]);
    }

    #[test]
    fn hamming_examples() {
        let upper = Path::new(vec![0, 2]);
        let lower = Path::new(vec![1, 3]);
        assert_eq!(hamming_distance(&upper, &upper), 0);
        assert_eq!(hamming_distance(&upper, &lower), 4);
        assert_eq!(hamming_distance(&Path::new(vec![5, 6]), &Path::new(vec![7, 8])), 4);
        assert_eq!(upper.symmetric_difference(&lower), vec![0, 1, 2, 3]);
    }

    #[test]
    fn path_validation() {
        let dag = build_sp_dag(&DIAMOND.parse().unwrap()).unwrap();
        assert!(dag.is_st_path(&Path::new(vec![0, 2])));
        assert_eq!(dag.path_vertices(&Path::new(vec![0])), Err(PathError::WrongEnd));
        assert_eq!(
            dag.path_vertices(&Path::new(vec![0, 3])),
            Err(PathError::Disconnected(0, 3))
        );
        assert_eq!(dag.path_vertices(&Path::new(vec![2])), Err(PathError::WrongStart));
        assert_eq!(dag.path_vertices(&Path::new(vec![9])), Err(PathError::UnknownArc(9)));
    }

    #[test]
    fn parallel_arcs_are_distinct_paths() {
        let g: ArcWeightedDigraph = "p dsp 2 2\ns 1\nt 2\na 1 2 1\na 1 2 1\n".parse().unwrap();
        let dag = build_sp_dag(&g).unwrap();
        assert_eq!(dag.count_paths(), BigUint::from(2u32));
    }

    #[test]
    fn source_equals_target() {
        let g: ArcWeightedDigraph = "p dsp 2 1\ns 1\nt 1\na 1 2 1\n".parse().unwrap();
        let dag = build_sp_dag(&g).unwrap();
        assert_eq!(dag.vertex_count(), 1);
        assert!(dag.first_path().is_empty());
        assert_eq!(dag.count_paths(), BigUint::from(1u32));
    }
}
