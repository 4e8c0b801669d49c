//! Color coding for the ball search: perfect hash families, colorful bypass
//! tables, and the search for `r` pairwise-far paths close to a center path.
//!
//! A *bypass* of the center `P` is `P △ P'` for another s–t path `P'`. Each
//! bypass splits into minimal components: a window `P[i, i']` of the center
//! together with an internally vertex-disjoint detour from `v_i` to `v_{i'}`.
//! Under an arc coloring that is injective on the relevant arcs, a bypass is
//! summarized by its color set, and `|C △ C'|` lower-bounds the distance of
//! the two paths the color sets came from.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;
use thiserror::Error;

use crate::graph::{hamming_distance, ArcId, Path, SpDag};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ColorError {
    #[error("invalid hash family parameters: {0}")]
    InvalidParameters(String),
    #[error("exhaustive family for m={m}, s={s} did not converge within {candidates} candidates")]
    NoConvergence { m: usize, s: usize, candidates: usize },
    #[error("center is not an s-t path of the DAG")]
    BadCenter,
    #[error("color set {0} is not realizable")]
    NotRealizable(ColorSet),
}

/// Set of colors drawn from `1..=palette`.
///
/// Ordered by cardinality first, then by numeric value of the bit pattern.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct ColorSet {
    // Bit c-1 stands for color c; trailing zero words are trimmed.
    words: SmallVec<[u64; 2]>,
}

impl ColorSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_colors(colors: impl IntoIterator<Item = u32>) -> Self {
        let mut set = Self::empty();
        for c in colors {
            set.insert(c);
        }
        set
    }

    pub fn insert(&mut self, color: u32) {
        assert!(color >= 1, "colors start at 1");
        let bit = (color - 1) as usize;
        let word = bit / 64;
        if self.words.len() <= word {
            self.words.resize(word + 1, 0);
        }
        self.words[word] |= 1 << (bit % 64);
    }

    pub fn contains(&self, color: u32) -> bool {
        if color == 0 {
            return false;
        }
        let bit = (color - 1) as usize;
        self.words
            .get(bit / 64)
            .is_some_and(|w| w & (1 << (bit % 64)) != 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_disjoint(&self, other: &ColorSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &ColorSet) -> ColorSet {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w |= s;
        }
        ColorSet { words }
    }

    pub fn sym_diff_len(&self, other: &ColorSet) -> usize {
        let n = self.words.len().max(other.words.len());
        (0..n)
            .map(|i| {
                let a = self.words.get(i).copied().unwrap_or(0);
                let b = other.words.get(i).copied().unwrap_or(0);
                (a ^ b).count_ones() as usize
            })
            .sum()
    }

    pub fn colors(&self) -> impl Iterator<Item = u32> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w & (1u64 << b) != 0)
                .map(move |b| (wi * 64 + b + 1) as u32)
        })
    }
}

impl Ord for ColorSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.words.len().cmp(&other.words.len()))
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for ColorSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, c) in self.colors().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ColorSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Arc coloring over a universe `0..m` with colors in `1..=palette`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<u32>,
    palette: u32,
}

impl Coloring {
    pub fn new(colors: Vec<u32>, palette: u32) -> Result<Self, ColorError> {
        if let Some(bad) = colors.iter().find(|&&c| c == 0 || c > palette) {
            return Err(ColorError::InvalidParameters(format!(
                "color {bad} outside 1..={palette}"
            )));
        }
        Ok(Self { colors, palette })
    }

    /// Injective coloring `i ↦ i + 1`.
    pub fn identity(m: usize) -> Self {
        Self {
            colors: (1..=m as u32).collect(),
            palette: m as u32,
        }
    }

    fn seeded(m: usize, palette: u32, seed: u64, index: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        Self {
            colors: (0..m).map(|_| rng.gen_range(1..=palette)).collect(),
            palette,
        }
    }

    pub fn color(&self, element: usize) -> u32 {
        self.colors[element]
    }

    pub fn colors(&self) -> &[u32] {
        &self.colors
    }

    pub fn palette(&self) -> u32 {
        self.palette
    }

    pub fn universe(&self) -> usize {
        self.colors.len()
    }

    /// True when no two elements of `subset` share a color.
    pub fn is_rainbow_on(&self, subset: impl IntoIterator<Item = usize>) -> bool {
        let mut seen = ColorSet::empty();
        for e in subset {
            let c = self.colors[e];
            if seen.contains(c) {
                return false;
            }
            seen.insert(c);
        }
        true
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyMode {
    /// Accumulate seeded colorings until every `s`-subset is rainbow under some
    /// member, then check that exhaustively.
    ExhaustiveVerified,
    /// A fixed budget of seeded colorings; perfection is not guaranteed.
    SeededMonteCarlo,
}

/// Largest universe for which exhaustive verification is attempted.
pub const EXHAUSTIVE_MAX_UNIVERSE: usize = 16;
/// Largest subset size for which exhaustive verification is attempted.
pub const EXHAUSTIVE_MAX_SUBSET: usize = 5;
const MAX_CANDIDATES: usize = 1_000_000;
const CANDIDATES_PER_ROUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HashFamily {
    pub members: Vec<Coloring>,
    pub universe: usize,
    pub colors: usize,
    pub mode: FamilyMode,
    pub seed: u64,
}

impl HashFamily {
    /// Checks every `colors`-subset of the universe against the members.
    pub fn verify_perfect(&self) -> bool {
        let mut ok = true;
        for_each_subset(self.universe, self.colors, |subset| {
            if !self.members.iter().any(|f| f.is_rainbow_on(subset.iter().copied())) {
                ok = false;
            }
            ok
        });
        ok
    }
}

/// Calls `visit` on every `size`-subset of `0..m` in lexicographic order until
/// it returns false.
fn for_each_subset(m: usize, size: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if size > m {
        return;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let mut i = size;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if idx[i] < m - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Builds an `(m, s)`-perfect hash family (exhaustive mode) or `budget` seeded
/// colorings with `s` colors.
pub fn build_hash_family(
    m: usize,
    s: usize,
    mode: FamilyMode,
    seed: u64,
    budget: usize,
) -> Result<HashFamily, ColorError> {
    if s == 0 || s > m {
        return Err(ColorError::InvalidParameters(format!("need 1 <= s <= m, got m={m}, s={s}")));
    }
    let palette = s as u32;
    let members = match mode {
        FamilyMode::SeededMonteCarlo => {
            if budget == 0 {
                return Err(ColorError::InvalidParameters("budget must be positive".into()));
            }
            (0..budget as u64)
                .map(|i| Coloring::seeded(m, palette, seed, i))
                .collect()
        }
        FamilyMode::ExhaustiveVerified => {
            if m > EXHAUSTIVE_MAX_UNIVERSE || s > EXHAUSTIVE_MAX_SUBSET {
                return Err(ColorError::InvalidParameters(format!(
                    "exhaustive mode needs m <= {EXHAUSTIVE_MAX_UNIVERSE} and s <= {EXHAUSTIVE_MAX_SUBSET}, got m={m}, s={s}"
                )));
            }
            greedy_cover(m, s, seed)?
        }
    };
    let family = HashFamily {
        members,
        universe: m,
        colors: s,
        mode,
        seed,
    };
    if mode == FamilyMode::ExhaustiveVerified && !family.verify_perfect() {
        return Err(ColorError::NoConvergence {
            m,
            s,
            candidates: MAX_CANDIDATES,
        });
    }
    Ok(family)
}

/// Greedy set cover over all `s`-subsets: each round draws a batch of seeded
/// colorings and keeps the one that makes the most uncovered subsets rainbow.
fn greedy_cover(m: usize, s: usize, seed: u64) -> Result<Vec<Coloring>, ColorError> {
    let palette = s as u32;
    let mut uncovered: Vec<u32> = Vec::new();
    for_each_subset(m, s, |sub| {
        uncovered.push(sub.iter().fold(0u32, |acc, &e| acc | 1 << e));
        true
    });
    let rainbow = |f: &Coloring, mask: u32| {
        let mut seen = 0u32;
        let mut bits = mask;
        while bits != 0 {
            let e = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let c = 1u32 << (f.colors[e] - 1);
            if seen & c != 0 {
                return false;
            }
            seen |= c;
        }
        true
    };

    let mut members = Vec::new();
    let mut drawn = 0usize;
    while !uncovered.is_empty() {
        if drawn >= MAX_CANDIDATES {
            return Err(ColorError::NoConvergence {
                m,
                s,
                candidates: drawn,
            });
        }
        let mut best: Option<(usize, Coloring)> = None;
        for _ in 0..CANDIDATES_PER_ROUND {
            let f = Coloring::seeded(m, palette, seed, drawn as u64);
            drawn += 1;
            let gain = uncovered.iter().filter(|&&mask| rainbow(&f, mask)).count();
            if gain > best.as_ref().map_or(0, |b| b.0) {
                best = Some((gain, f));
            }
        }
        if let Some((_, f)) = best {
            uncovered.retain(|&mask| !rainbow(&f, mask));
            members.push(f);
        }
    }
    Ok(members)
}

type FamilyKey = (usize, usize, u64);

/// Exhaustive families are pure functions of `(m, s, seed)`; cache them.
fn cached_exhaustive_family(m: usize, s: usize, seed: u64) -> Result<Arc<HashFamily>, ColorError> {
    static CACHE: OnceLock<Mutex<HashMap<FamilyKey, Arc<HashFamily>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(f) = cache.lock().unwrap().get(&(m, s, seed)) {
        return Ok(Arc::clone(f));
    }
    let family = Arc::new(build_hash_family(m, s, FamilyMode::ExhaustiveVerified, seed, 0)?);
    cache
        .lock()
        .unwrap()
        .entry((m, s, seed))
        .or_insert_with(|| Arc::clone(&family));
    Ok(family)
}

/// One minimal component of a bypass: the center window `P[i, i']` (vertex
/// positions along the center) and the arcs of window plus detour.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BypassComponent {
    pub window: (usize, usize),
    /// Sorted arc ids.
    pub arcs: Vec<ArcId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bypass {
    /// Sorted arc ids of `center △ other`.
    pub arc_set: Vec<ArcId>,
    /// Minimal components ordered by window.
    pub components: Vec<BypassComponent>,
}

impl Bypass {
    pub fn windows(&self) -> Vec<(usize, usize)> {
        self.components.iter().map(|c| c.window).collect()
    }
}

/// Center path with positional lookups.
struct Center<'a> {
    dag: &'a SpDag,
    /// Local arc indices along the center.
    arcs: Vec<usize>,
    /// Vertex positions along the center.
    verts: Vec<usize>,
    /// `at[v]` = index of DAG vertex `v` on the center.
    at: Vec<Option<usize>>,
    on_center: Vec<bool>,
}

impl<'a> Center<'a> {
    fn new(dag: &'a SpDag, center: &Path) -> Result<Self, ColorError> {
        let verts = dag.path_vertices(center).map_err(|_| ColorError::BadCenter)?;
        let arcs: Vec<usize> = center
            .arcs()
            .iter()
            .map(|&id| dag.local_index(id).unwrap())
            .collect();
        let mut at = vec![None; dag.vertex_count()];
        for (i, &v) in verts.iter().enumerate() {
            at[v] = Some(i);
        }
        let mut on_center = vec![false; dag.arc_count()];
        for &e in &arcs {
            on_center[e] = true;
        }
        Ok(Self {
            dag,
            arcs,
            verts,
            at,
            on_center,
        })
    }
}

/// `mbp(i, i', C)` for all windows: each realizable color set of a minimal
/// bypass maps to the detour (local arc indices, in order) that realizes it.
#[derive(Debug, Clone, Default)]
pub struct MinimalBypassTable {
    entries: BTreeMap<(usize, usize), BTreeMap<ColorSet, Vec<usize>>>,
    radius: usize,
}

impl MinimalBypassTable {
    /// Whether a minimal `C`-colorful bypass with window `P[i, i']` exists.
    /// Indices are 0-based vertex positions along the center.
    pub fn get(&self, i: usize, i2: usize, colors: &ColorSet) -> bool {
        self.entries
            .get(&(i, i2))
            .is_some_and(|m| m.contains_key(colors))
    }

    pub fn window(&self, i: usize, i2: usize) -> impl Iterator<Item = &ColorSet> {
        self.entries.get(&(i, i2)).into_iter().flat_map(|m| m.keys())
    }

    pub fn radius(&self) -> usize {
        self.radius
    }
}

/// Builds the minimal-bypass table. A detour from `v_i` may only pass through
/// vertices off the center; the window endpoints themselves stay. Only color
/// sets with at most `q` colors are recorded.
pub fn minimal_bypass_table(
    dag: &SpDag,
    center: &Path,
    coloring: &Coloring,
    q: usize,
) -> Result<MinimalBypassTable, ColorError> {
    let c = Center::new(dag, center)?;
    Ok(build_mbp(&c, coloring, q))
}

fn build_mbp(c: &Center<'_>, f: &Coloring, q: usize) -> MinimalBypassTable {
    let dag = c.dag;
    let len = c.verts.len();
    let mut entries: BTreeMap<(usize, usize), BTreeMap<ColorSet, Vec<usize>>> = BTreeMap::new();
    if q < 2 {
        // A minimal bypass has a window arc and a detour arc.
        return MinimalBypassTable { entries, radius: q };
    }
    for i in 0..len.saturating_sub(1) {
        let start = c.verts[i];
        // Colorful detours from v_i through off-center vertices; each state
        // remembers the arc it was reached by.
        let mut reach: BTreeMap<usize, BTreeMap<ColorSet, (usize, ColorSet)>> = BTreeMap::new();
        reach.entry(start).or_default().insert(ColorSet::empty(), (usize::MAX, ColorSet::empty()));
        // Arrivals at center vertices after v_i.
        let mut arrivals: BTreeMap<usize, BTreeMap<ColorSet, (usize, ColorSet)>> = BTreeMap::new();

        // Topological positions increase along arcs, so a sweep in position
        // order settles every vertex before it is extended.
        let last = *c.verts.last().unwrap();
        for v in start..=last {
            if v != start && c.at[v].is_some() {
                continue;
            }
            let Some(states) = reach.get(&v).cloned() else {
                continue;
            };
            for &e in dag.out_arcs(v) {
                if c.on_center[e] {
                    continue;
                }
                let head = dag.arc(e).head;
                let color = f.color(e);
                let target = match c.at[head] {
                    Some(j) if j > i => arrivals.entry(j).or_default(),
                    Some(_) => continue,
                    None => reach.entry(head).or_default(),
                };
                for set in states.keys() {
                    // The window contributes at least one color.
                    if set.contains(color) || set.len() + 2 > q {
                        continue;
                    }
                    let mut next = set.clone();
                    next.insert(color);
                    target.entry(next).or_insert((e, set.clone()));
                }
            }
        }

        let mut window_colors = ColorSet::empty();
        for j in i + 1..len {
            let color = f.color(c.arcs[j - 1]);
            if window_colors.contains(color) {
                break;
            }
            window_colors.insert(color);
            if window_colors.len() + 1 > q {
                break;
            }
            let Some(found) = arrivals.get(&j) else {
                continue;
            };
            let mut table = BTreeMap::new();
            for detour_colors in found.keys() {
                if !detour_colors.is_disjoint(&window_colors)
                    || detour_colors.len() + window_colors.len() > q
                {
                    continue;
                }
                let detour = trace_detour(dag, &reach, found, detour_colors, start);
                table.insert(detour_colors.union(&window_colors), detour);
            }
            if !table.is_empty() {
                entries.insert((i, j), table);
            }
        }
    }
    MinimalBypassTable { entries, radius: q }
}

fn trace_detour(
    dag: &SpDag,
    reach: &BTreeMap<usize, BTreeMap<ColorSet, (usize, ColorSet)>>,
    arrival: &BTreeMap<ColorSet, (usize, ColorSet)>,
    colors: &ColorSet,
    start: usize,
) -> Vec<usize> {
    let mut rev = Vec::new();
    let (mut e, mut set) = arrival[colors].clone();
    loop {
        rev.push(e);
        let tail = dag.arc(e).tail;
        if tail == start && set.is_empty() {
            break;
        }
        let (pe, ps) = reach[&tail][&set].clone();
        e = pe;
        set = ps;
    }
    rev.reverse();
    rev
}

#[derive(Debug, Clone)]
enum BpWitness {
    Empty,
    /// Rightmost minimal component has window `(j, end)` and colors `last`;
    /// the rest is realized at `bp(j, rest)`.
    Extend {
        j: usize,
        end: usize,
        rest: ColorSet,
        last: ColorSet,
    },
}

/// `bp(i, C)`: whether a `C`-colorful bypass meets the center only inside
/// `P[0, i]`, with a witness for traceback.
#[derive(Debug, Clone)]
pub struct BypassTable {
    rows: Vec<BTreeMap<ColorSet, BpWitness>>,
    mbp: MinimalBypassTable,
    center: Path,
}

impl BypassTable {
    pub fn get(&self, i: usize, colors: &ColorSet) -> bool {
        self.rows.get(i).is_some_and(|row| row.contains_key(colors))
    }

    /// Color sets `C` with `bp(last, C)`, in (cardinality, value) order.
    pub fn realizable_sets(&self) -> Vec<ColorSet> {
        self.rows.last().map(|row| row.keys().cloned().collect()).unwrap_or_default()
    }

    pub fn minimal(&self) -> &MinimalBypassTable {
        &self.mbp
    }

    pub fn center(&self) -> &Path {
        &self.center
    }
}

/// Combines minimal bypasses left to right into `bp`.
pub fn bypass_table(
    dag: &SpDag,
    center: &Path,
    coloring: &Coloring,
    q: usize,
) -> Result<BypassTable, ColorError> {
    let c = Center::new(dag, center)?;
    let mbp = build_mbp(&c, coloring, q);
    Ok(build_bp(&c, mbp, center.clone(), q))
}

fn build_bp(c: &Center<'_>, mbp: MinimalBypassTable, center: Path, q: usize) -> BypassTable {
    let len = c.verts.len();
    let mut rows: Vec<BTreeMap<ColorSet, BpWitness>> = Vec::with_capacity(len);
    let mut first = BTreeMap::new();
    first.insert(ColorSet::empty(), BpWitness::Empty);
    rows.push(first);
    for i in 1..len {
        let mut row = rows[i - 1].clone();
        for j in 0..i {
            let Some(minimal) = mbp.entries.get(&(j, i)) else {
                continue;
            };
            for rest in rows[j].keys() {
                for last in minimal.keys() {
                    if rest.len() + last.len() > q || !rest.is_disjoint(last) {
                        continue;
                    }
                    row.entry(rest.union(last)).or_insert_with(|| BpWitness::Extend {
                        j,
                        end: i,
                        rest: rest.clone(),
                        last: last.clone(),
                    });
                }
            }
        }
        rows.push(row);
    }
    BypassTable { rows, mbp, center }
}

/// Picks `r` realizable sets with pairwise `|C_i △ C_j| >= d`. Sets may repeat
/// (only matters when `d == 0`).
pub fn select_dissimilar_color_sets(
    realizables: &[ColorSet],
    r: usize,
    d: usize,
) -> Option<Vec<ColorSet>> {
    fn extend(
        sets: &[ColorSet],
        r: usize,
        d: usize,
        from: usize,
        chosen: &mut Vec<usize>,
    ) -> bool {
        if chosen.len() == r {
            return true;
        }
        for i in from..sets.len() {
            if chosen.iter().all(|&j| sets[j].sym_diff_len(&sets[i]) >= d) {
                chosen.push(i);
                if extend(sets, r, d, i, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
    let mut chosen = Vec::with_capacity(r);
    extend(realizables, r, d, 0, &mut chosen)
        .then(|| chosen.into_iter().map(|i| realizables[i].clone()).collect())
}

/// Traces `bp(last, C)` back to a bypass and returns `center △ B`.
pub fn reconstruct_path(
    dag: &SpDag,
    table: &BypassTable,
    colors: &ColorSet,
) -> Result<(Path, Bypass), ColorError> {
    let c = Center::new(dag, &table.center)?;
    let last = table.rows.len() - 1;
    let Some(mut witness) = table.rows[last].get(colors) else {
        return Err(ColorError::NotRealizable(colors.clone()));
    };
    let mut parts: Vec<((usize, usize), &Vec<usize>)> = Vec::new();
    while let BpWitness::Extend { j, end, rest, last } = witness {
        let detour = &table.mbp.entries[&(*j, *end)][last];
        parts.push(((*j, *end), detour));
        witness = &table.rows[*j][rest];
    }
    parts.reverse();

    let mut arcs = Vec::new();
    let mut components = Vec::new();
    let mut pos = 0;
    for ((i, i2), detour) in parts {
        arcs.extend(c.arcs[pos..i].iter().map(|&e| dag.arc(e).id));
        arcs.extend(detour.iter().map(|&e| dag.arc(e).id));
        let mut comp: Vec<ArcId> = c.arcs[i..i2]
            .iter()
            .chain(detour.iter())
            .map(|&e| dag.arc(e).id)
            .collect();
        comp.sort_unstable();
        components.push(BypassComponent {
            window: (i, i2),
            arcs: comp,
        });
        pos = i2;
    }
    arcs.extend(c.arcs[pos..].iter().map(|&e| dag.arc(e).id));
    let path = Path::new(arcs);
    debug_assert!(dag.is_st_path(&path));
    let arc_set = path.symmetric_difference(&table.center);
    debug_assert_eq!(arc_set.len(), colors.len());
    Ok((
        path,
        Bypass {
            arc_set,
            components,
        },
    ))
}

/// How the ball search chooses its colorings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BallConfig {
    pub family: FamilyMode,
    pub seed: u64,
    /// Number of colorings in seeded mode.
    pub coloring_budget: usize,
}

impl Default for BallConfig {
    fn default() -> Self {
        Self {
            family: FamilyMode::ExhaustiveVerified,
            seed: 0,
            coloring_budget: 64,
        }
    }
}

/// Outcome of a ball search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallResult {
    pub paths: Option<Vec<Path>>,
    /// False when a negative answer rests on a family not known to be perfect.
    pub certified: bool,
    pub colorings_tried: usize,
}

/// The colorings a ball search runs over, plus whether they are known to be
/// injective on every arc set of size `q·r`.
fn colorings_for(m: usize, palette: u64, cfg: &BallConfig) -> Result<(Vec<Coloring>, bool), ColorError> {
    if palette >= m as u64 {
        // Colors 1..=m fit in the palette and are injective everywhere.
        return Ok((vec![Coloring::identity(m)], true));
    }
    let s = palette as usize;
    match cfg.family {
        FamilyMode::ExhaustiveVerified => {
            if m <= EXHAUSTIVE_MAX_UNIVERSE && s <= EXHAUSTIVE_MAX_SUBSET {
                let family = cached_exhaustive_family(m, s, cfg.seed)?;
                Ok((family.members.clone(), true))
            } else {
                // Outside the verifiable range an injective coloring with a
                // wider palette keeps the answer exact.
                Ok((vec![Coloring::identity(m)], true))
            }
        }
        FamilyMode::SeededMonteCarlo => {
            let family = build_hash_family(m, s, FamilyMode::SeededMonteCarlo, cfg.seed, cfg.coloring_budget)?;
            Ok((family.members, false))
        }
    }
}

/// Searches for `r` paths within distance `q` of `center` that are pairwise at
/// distance at least `d`.
pub fn ball_search(
    dag: &SpDag,
    center: &Path,
    q: usize,
    r: usize,
    d: usize,
    cfg: &BallConfig,
) -> Result<BallResult, ColorError> {
    let c = Center::new(dag, center)?;
    let done = |paths: Option<Vec<Path>>, certified: bool, tried: usize| BallResult {
        paths,
        certified,
        colorings_tried: tried,
    };
    if r == 0 {
        return Ok(done(Some(Vec::new()), true, 0));
    }
    if d == 0 {
        return Ok(done(Some(vec![center.clone(); r]), true, 0));
    }
    if q == 0 || r == 1 {
        let paths = (r == 1).then(|| vec![center.clone()]);
        return Ok(done(paths, true, 0));
    }

    let palette = (q as u64).saturating_mul(r as u64);
    let (members, certified) = colorings_for(dag.arc_count(), palette, cfg)?;

    // Members are independent; the lowest successful index wins.
    let found = members.par_iter().enumerate().find_map_first(|(idx, f)| {
        let mbp = build_mbp(&c, f, q);
        let table = build_bp(&c, mbp, center.clone(), q);
        let realizable = table.realizable_sets();
        let chosen = select_dissimilar_color_sets(&realizable, r, d)?;
        let paths: Vec<Path> = chosen
            .iter()
            .map(|set| reconstruct_path(dag, &table, set).map(|(p, _)| p))
            .collect::<Result<_, _>>()
            .ok()?;
        for i in 0..r {
            for j in i + 1..r {
                assert!(
                    hamming_distance(&paths[i], &paths[j]) >= chosen[i].sym_diff_len(&chosen[j]),
                    "path distance below color-set distance"
                );
            }
        }
        Some((idx, paths))
    });

    match found {
        Some((idx, paths)) => {
            for (i, p) in paths.iter().enumerate() {
                assert!(dag.is_st_path(p));
                assert!(hamming_distance(center, p) <= q);
                for other in &paths[i + 1..] {
                    assert!(hamming_distance(p, other) >= d);
                }
            }
            Ok(done(Some(paths), true, idx + 1))
        }
        None => Ok(done(None, certified, members.len())),
    }
}
