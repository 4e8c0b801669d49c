//! Farthest-path dynamic program: find an s–t path at Hamming distance at
//! least `q` from every one of `r` reference paths.
//!
//! States are `(vertex, demand)` where the demand vector records, per
//! reference path `P_k`, how much distance to `P_k ∩ A_j` the s–v prefix still
//! has to provide. Demands are capped at `q` and clamped at zero: a demand
//! that is overshot by one arc is satisfied, not violated.

use std::collections::HashMap;

use thiserror::Error;

use crate::graph::{ArcId, Path, SpDag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FarthestError {
    #[error("arc {0} is not in the shortest-path DAG")]
    UnknownArc(ArcId),
}

/// Per-reference remaining distance demand, each component in `0..=q`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DemandVector(pub Vec<u32>);

impl DemandVector {
    pub fn uniform(r: usize, q: u32) -> Self {
        Self(vec![q; r])
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&g| g == 0)
    }

    /// `max(self - label, 0)` componentwise.
    pub fn discharge(&self, label: &ArcLabel) -> Self {
        Self(
            self.0
                .iter()
                .zip(&label.0)
                .map(|(&g, &l)| g.saturating_sub(l))
                .collect(),
        )
    }
}

/// Contribution of one arc to each reference distance:
/// component `k` is `|(P_k ∩ (A_j \ A_i)) △ {e}|` for `e = (v_i, v_j)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArcLabel(pub Vec<u32>);

/// Prefix counts of reference arcs by head position plus membership bits.
struct RefIndex {
    /// `prefix[k][h]` = number of arcs of `P_k` whose head is at position `< h`.
    prefix: Vec<Vec<u32>>,
    /// `member[k][local]` = arc `local` lies on `P_k`.
    member: Vec<Vec<bool>>,
}

impl RefIndex {
    fn new(dag: &SpDag, refs: &[Path]) -> Self {
        let n = dag.vertex_count();
        let mut prefix = Vec::with_capacity(refs.len());
        let mut member = Vec::with_capacity(refs.len());
        for p in refs {
            let mut at_head = vec![0u32; n];
            let mut bits = vec![false; dag.arc_count()];
            for &id in p.arcs() {
                if let Some(local) = dag.local_index(id) {
                    at_head[dag.arc(local).head] += 1;
                    bits[local] = true;
                }
            }
            let mut pre = vec![0u32; n + 1];
            for h in 0..n {
                pre[h + 1] = pre[h] + at_head[h];
            }
            prefix.push(pre);
            member.push(bits);
        }
        Self { prefix, member }
    }

    fn label(&self, dag: &SpDag, local: usize) -> ArcLabel {
        let arc = dag.arc(local);
        // Window A_j \ A_i: heads at positions tail+1 ..= head.
        ArcLabel(
            self.prefix
                .iter()
                .zip(&self.member)
                .map(|(pre, bits)| {
                    let window = pre[arc.head + 1] - pre[arc.tail + 1];
                    if bits[local] {
                        window - 1
                    } else {
                        window + 1
                    }
                })
                .collect(),
        )
    }
}

/// Label vector `L(e)` of the arc with id `e`.
pub fn arc_label_vector(dag: &SpDag, refs: &[Path], e: ArcId) -> Result<ArcLabel, FarthestError> {
    let local = dag.local_index(e).ok_or(FarthestError::UnknownArc(e))?;
    Ok(RefIndex::new(dag, refs).label(dag, local))
}

#[derive(Clone, PartialEq, Eq, Hash)]
enum StateKey {
    Packed(u128),
    Wide(usize, Vec<u32>),
}

struct FarthestDp<'a> {
    dag: &'a SpDag,
    labels: Vec<ArcLabel>,
    radix: Option<u128>,
    memo: HashMap<StateKey, bool>,
}

impl<'a> FarthestDp<'a> {
    fn new(dag: &'a SpDag, refs: &[Path], q: u32) -> Self {
        let index = RefIndex::new(dag, refs);
        let labels = (0..dag.arc_count()).map(|e| index.label(dag, e)).collect();
        let radix = u128::from(q)
            .checked_add(1)
            .and_then(|b| b.checked_pow(refs.len() as u32))
            .and_then(|span| span.checked_mul(dag.vertex_count() as u128))
            .map(|_| u128::from(q) + 1);
        Self {
            dag,
            labels,
            radix,
            memo: HashMap::new(),
        }
    }

    fn key(&self, v: usize, gamma: &DemandVector) -> StateKey {
        match self.radix {
            Some(base) => {
                let mut code: u128 = 0;
                for &g in &gamma.0 {
                    code = code * base + u128::from(g);
                }
                StateKey::Packed(code * self.dag.vertex_count() as u128 + v as u128)
            }
            None => StateKey::Wide(v, gamma.0.clone()),
        }
    }

    /// Evaluates `path(v, gamma)` with an explicit stack. Incoming arcs are
    /// tried in increasing arc id and evaluation stops at the first success,
    /// so the memo holds exactly the decisions traceback needs.
    fn eval(&mut self, v: usize, gamma: DemandVector) -> bool {
        struct Frame {
            v: usize,
            gamma: DemandVector,
            next: usize,
        }
        let root = self.key(v, &gamma);
        if let Some(&known) = self.memo.get(&root) {
            return known;
        }
        let mut stack = vec![Frame { v, gamma, next: 0 }];
        while let Some(top) = stack.last_mut() {
            if top.v == self.dag.source() {
                let value = top.gamma.is_zero();
                let key = self.key(top.v, &top.gamma);
                self.memo.insert(key, value);
                stack.pop();
                continue;
            }
            let incoming = self.dag.in_arcs(top.v);
            let mut resolved = None;
            let mut descend = None;
            while top.next < incoming.len() {
                let e = incoming[top.next];
                let child = top.gamma.discharge(&self.labels[e]);
                let tail = self.dag.arc(e).tail;
                match self.memo.get(&self.key(tail, &child)) {
                    Some(true) => {
                        resolved = Some(true);
                        break;
                    }
                    Some(false) => top.next += 1,
                    None => {
                        descend = Some(Frame {
                            v: tail,
                            gamma: child,
                            next: 0,
                        });
                        break;
                    }
                }
            }
            if let Some(child) = descend {
                stack.push(child);
                continue;
            }
            let value = resolved.unwrap_or(false);
            let key = self.key(top.v, &top.gamma);
            self.memo.insert(key, value);
            stack.pop();
        }
        self.memo[&root]
    }

    fn traceback(&mut self, q: u32, r: usize) -> Option<Path> {
        let mut v = self.dag.sink();
        let mut gamma = DemandVector::uniform(r, q);
        if !self.eval(v, gamma.clone()) {
            return None;
        }
        let mut rev = Vec::new();
        while v != self.dag.source() {
            let dag = self.dag;
            let chosen = dag.in_arcs(v).iter().copied().find_map(|e| {
                let child = gamma.discharge(&self.labels[e]);
                let tail = dag.arc(e).tail;
                self.eval(tail, child.clone()).then_some((e, tail, child))
            })?;
            rev.push(dag.arc(chosen.0).id);
            v = chosen.1;
            gamma = chosen.2;
        }
        rev.reverse();
        Some(Path::new(rev))
    }
}

/// Finds a path `P` with `|P △ P_k| >= q` for every reference `P_k`, or `None`.
///
/// With no references this is the lexicographically smallest path. Otherwise
/// traceback from `t` picks the smallest arc id whose predecessor state is
/// feasible.
pub fn farthest_path(dag: &SpDag, refs: &[Path], q: u32) -> Option<Path> {
    if refs.is_empty() {
        return Some(dag.first_path());
    }
    // |P △ P_k| <= |P| + |P_k| and every path has fewer than n arcs.
    let longest_ref = refs.iter().map(Path::len).max().unwrap_or(0);
    if q as usize > dag.vertex_count().saturating_sub(1) + longest_ref {
        return None;
    }
    let mut dp = FarthestDp::new(dag, refs, q);
    let path = dp.traceback(q, refs.len())?;
    #[cfg(debug_assertions)]
    check_telescoping(dag, refs, &path, &dp.labels);
    Some(path)
}

/// Checks `|P △ (P_k ∩ A_j)| = |P' △ (P_k ∩ A_i)| + L(e)_k` along every prefix.
#[cfg(debug_assertions)]
fn check_telescoping(dag: &SpDag, refs: &[Path], path: &Path, labels: &[ArcLabel]) {
    use crate::graph::sym_diff_len;

    let restricted = |p: &Path, upto: usize| -> Vec<ArcId> {
        p.arc_set()
            .iter()
            .copied()
            .filter(|&id| dag.arc_by_id(id).is_some_and(|a| a.head <= upto))
            .collect()
    };
    let mut prefix: Vec<ArcId> = Vec::new();
    let mut before = vec![0usize; refs.len()];
    for &id in path.arcs() {
        let local = dag.local_index(id).expect("traceback arc in dag");
        let head = dag.arc(local).head;
        prefix.push(id);
        let mut sorted = prefix.clone();
        sorted.sort_unstable();
        for (k, reference) in refs.iter().enumerate() {
            let now = sym_diff_len(&sorted, &restricted(reference, head));
            assert_eq!(
                now,
                before[k] + labels[local].0[k] as usize,
                "telescoping identity broken at arc {id} for reference {k}"
            );
            before[k] = now;
        }
    }
}
