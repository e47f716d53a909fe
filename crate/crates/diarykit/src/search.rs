//! Depth-first enumeration and counting of diaries for a target graph,
//! big Ramsey degree computation, and memoized anticlique counting.
//!
//! The search walks the abstract front states of module [`state`](crate::state),
//! pruning with three sound rules: splits are capped at `n − 1`, emitted
//! leaves plus live branches never exceed `n` (every live branch must still
//! produce a leaf), and after each leaf emission the partial leaf graph must
//! embed into the target as an induced subgraph with every live branch's
//! pinned adjacency row still realizable. Completed fronts with `n` leaves
//! then carry a graph isomorphic to the target by construction.
//!
//! Counting event sequences counts diaries: distinct parameter choices at a
//! level produce distinct next fronts, so no isomorph rejection is needed.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::thread;

use num_bigint::BigUint;
use thiserror::Error;

use crate::diary::{Diary, EventKind, EventRecord};
use crate::graphs::{self, GraphError, SmallGraph};
use crate::state::{EventSpec, FrontState, StateError};
use crate::words::{self, Letter, Word};

// ===== Limits and results =====

/// Resource limits and knobs for a search run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchLimits {
    /// Hard cap on the level (events applied along one path). The default
    /// from [`depth_cap_bound`] is provably never binding.
    pub depth_cap: u32,
    /// Optional cap on total event applications across the whole search.
    pub node_cap: Option<u64>,
    /// Worker threads for counting; `0` and `1` both mean sequential.
    pub workers: usize,
    /// Largest admissible target vertex count.
    pub max_vertices: usize,
    /// Emit periodic progress lines on stderr.
    pub progress: bool,
}

impl SearchLimits {
    /// Limits sized for targets with up to `n` vertices.
    pub fn for_target_size(n: usize) -> SearchLimits {
        SearchLimits {
            depth_cap: depth_cap_bound(n),
            node_cap: None,
            workers: 1,
            max_vertices: n.max(1),
            progress: false,
        }
    }
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits::for_target_size(4)
    }
}

/// An event-count bound no diary for a target with `n` vertices can exceed:
/// splits (≤ n−1) + leaves (≤ n) + per-branch New1/New2 (branches counted
/// as split-tree nodes, ≤ 2n−1) + pairwise New11/New22 + triple New111.
pub fn depth_cap_bound(n: usize) -> u32 {
    if n == 0 {
        return 1;
    }
    let m = 2 * n - 1;
    let pairs = m * m.saturating_sub(1) / 2;
    let triples = m * m.saturating_sub(1) * m.saturating_sub(2) / 6;
    ((n - 1) + n + 2 * m + 2 * pairs + triples) as u32
}

/// Outcome of a counting run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    /// Number of diaries coding a graph isomorphic to the target.
    pub diary_count: BigUint,
    /// Order of the automorphism group of the target.
    pub aut: u64,
    /// The big Ramsey degree: `diary_count × aut`.
    pub degree: BigUint,
    /// Event applications explored by the search.
    pub nodes_explored: u64,
}

/// A materialized diary together with the event sequence that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumeratedDiary {
    pub diary: Diary,
    pub events: Vec<EventRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("the target graph is not K4-free; no diary codes it")]
    NotK4Free,
    #[error("the target graph has {n} vertices, above the configured maximum of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("anticlique counting needs a size of at least 1")]
    EmptyAnticlique,
    #[error("depth cap {cap} reached after {nodes} nodes; the search was truncated")]
    DepthCapExceeded { cap: u32, nodes: u64 },
    #[error("node cap {cap} exhausted; the search was truncated")]
    NodeCapExceeded { cap: u64 },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    State(#[from] StateError),
}

// ===== Budget bookkeeping =====

const PROGRESS_EVERY: u64 = 10_000_000;

/// Shared node budget: one tick per event application, across all workers.
struct Budget<'a> {
    nodes: &'a AtomicU64,
    node_cap: Option<u64>,
    progress: bool,
}

impl Budget<'_> {
    fn tick(&self, level: usize) -> Result<(), SearchError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if self.progress && n % PROGRESS_EVERY == 0 {
            eprintln!("[diarykit] explored {n} nodes (at level {level})");
        }
        match self.node_cap {
            Some(cap) if n > cap => Err(SearchError::NodeCapExceeded { cap }),
            _ => Ok(()),
        }
    }

    fn total(&self) -> u64 {
        self.nodes.load(Ordering::Relaxed)
    }
}

// ===== Target-directed pruning =====

/// Immutable per-search context, shareable across workers.
struct Ctx<'a> {
    /// Target adjacency rows as bitmasks.
    rows: Vec<u16>,
    n: usize,
    depth_cap: u32,
    budget: Budget<'a>,
}

impl Ctx<'_> {
    fn new<'a>(g: &SmallGraph, limits: &SearchLimits, nodes: &'a AtomicU64) -> Ctx<'a> {
        let rows = (0..g.n())
            .map(|v| {
                (0..g.n())
                    .filter(|&u| g.has_edge(u, v))
                    .fold(0u16, |m, u| m | (1 << u))
            })
            .collect();
        Ctx {
            rows,
            n: g.n(),
            depth_cap: limits.depth_cap,
            budget: Budget {
                nodes,
                node_cap: limits.node_cap,
                progress: limits.progress,
            },
        }
    }

    /// Splitting is admissible only while another branch can still leaf.
    fn admits(&self, state: &FrontState, event: EventSpec) -> bool {
        match event {
            EventSpec::Splitting { .. } => {
                state.split_count() + 1 <= self.n.saturating_sub(1)
                    && state.branch_count() + state.leaf_count() + 1 <= self.n
            }
            _ => true,
        }
    }

    /// Can the emitted leaves embed into the target as an induced subgraph,
    /// with every live branch's pinned adjacency row realizable by at least
    /// one so-far-unused target vertex?
    fn embeds(&self, state: &FrontState) -> bool {
        let k = state.leaf_count();
        if k > self.n {
            return false;
        }
        let mut image = [0usize; 16];
        self.assign(state, 0, k, 0, &mut image)
    }

    fn assign(
        &self,
        state: &FrontState,
        i: usize,
        k: usize,
        used: u16,
        image: &mut [usize; 16],
    ) -> bool {
        if i == k {
            return (0..state.branch_count()).all(|b| {
                let pinned = state.leaf_adjacency_mask(b);
                (0..self.n).any(|c| {
                    used >> c & 1 == 0 && self.row_matches(c, pinned, k, image)
                })
            });
        }
        let want = state.leaf_row(i);
        for c in 0..self.n {
            if used >> c & 1 == 1 || !self.row_matches(c, want, i, image) {
                continue;
            }
            image[i] = c;
            if self.assign(state, i + 1, k, used | (1 << c), image) {
                return true;
            }
        }
        false
    }

    /// Does target vertex `c` reproduce adjacency mask `want` over the
    /// already-placed leaves `image[..placed]`?
    fn row_matches(&self, c: usize, want: u16, placed: usize, image: &[usize; 16]) -> bool {
        (0..placed).all(|j| (self.rows[c] >> image[j]) & 1 == (want >> j) & 1)
    }

    fn check_depth(&self, state: &FrontState) -> Result<(), SearchError> {
        if state.level() >= self.depth_cap as usize && state.branch_count() > 0 {
            return Err(SearchError::DepthCapExceeded {
                cap: self.depth_cap,
                nodes: self.budget.total(),
            });
        }
        Ok(())
    }
}

// ===== Counting =====

fn zero() -> BigUint {
    BigUint::from(0u32)
}

fn dfs_count(state: FrontState, ctx: &Ctx) -> Result<BigUint, SearchError> {
    if state.branch_count() == 0 {
        return Ok(BigUint::from(u32::from(state.leaf_count() == ctx.n)));
    }
    if state.branch_count() + state.leaf_count() > ctx.n {
        return Ok(zero());
    }
    ctx.check_depth(&state)?;
    let mut total = zero();
    for event in state.legal_events() {
        if !ctx.admits(&state, event) {
            continue;
        }
        ctx.budget.tick(state.level())?;
        let next = state.apply(event)?;
        if matches!(event, EventSpec::Leaf { .. }) && !ctx.embeds(&next) {
            continue;
        }
        total += dfs_count(next, ctx)?;
    }
    Ok(total)
}

/// Expands the initial state breadth-first until there are at least
/// `want` open states (or the space is exhausted), tallying completions.
fn expand_frontier(
    ctx: &Ctx,
    want: usize,
) -> Result<(Vec<FrontState>, BigUint), SearchError> {
    let mut frontier = vec![FrontState::initial()];
    let mut done = zero();
    while !frontier.is_empty() && frontier.len() < want {
        let mut next = Vec::with_capacity(frontier.len() * 4);
        for state in &frontier {
            if state.branch_count() == 0 {
                if state.leaf_count() == ctx.n {
                    done += 1u32;
                }
                continue;
            }
            if state.branch_count() + state.leaf_count() > ctx.n {
                continue;
            }
            ctx.check_depth(state)?;
            for event in state.legal_events() {
                if !ctx.admits(state, event) {
                    continue;
                }
                ctx.budget.tick(state.level())?;
                let child = state.apply(event)?;
                if matches!(event, EventSpec::Leaf { .. }) && !ctx.embeds(&child) {
                    continue;
                }
                next.push(child);
            }
        }
        frontier = next;
    }
    Ok((frontier, done))
}

fn count_parallel(ctx: &Ctx, workers: usize) -> Result<BigUint, SearchError> {
    let (frontier, mut total) = expand_frontier(ctx, workers * 32)?;
    let chunks: Vec<Vec<FrontState>> = {
        let mut cs = vec![Vec::new(); workers];
        for (i, st) in frontier.into_iter().enumerate() {
            cs[i % workers].push(st);
        }
        cs
    };
    let results: Vec<Result<BigUint, SearchError>> = thread::scope(|scope| {
        let handles: Vec<_> = chunks
            .into_iter()
            .map(|chunk| {
                scope.spawn(move || {
                    let mut sum = zero();
                    for st in chunk {
                        sum += dfs_count(st, ctx)?;
                    }
                    Ok(sum)
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("search worker panicked"))
            .collect()
    });
    for r in results {
        total += r?;
    }
    Ok(total)
}

fn check_target(g: &SmallGraph, limits: &SearchLimits) -> Result<(), SearchError> {
    if g.n() > limits.max_vertices {
        return Err(SearchError::TooManyVertices { n: g.n(), max: limits.max_vertices });
    }
    Ok(())
}

/// Counts the diaries coding a graph isomorphic to `g` and derives the big
/// Ramsey degree `diary_count × |Aut(g)|`. A target containing a K4 yields
/// zero counts rather than an error. Totals are identical for any worker
/// count.
pub fn count_diaries(g: &SmallGraph, limits: &SearchLimits) -> Result<CountResult, SearchError> {
    check_target(g, limits)?;
    let aut = graphs::aut_order(g)?;
    let nodes = AtomicU64::new(0);
    if !graphs::is_k4_free(g) {
        return Ok(CountResult {
            diary_count: zero(),
            aut,
            degree: zero(),
            nodes_explored: 0,
        });
    }
    let ctx = Ctx::new(g, limits, &nodes);
    let diary_count = if limits.workers > 1 {
        count_parallel(&ctx, limits.workers)?
    } else {
        dfs_count(FrontState::initial(), &ctx)?
    };
    let degree = &diary_count * BigUint::from(aut);
    Ok(CountResult { diary_count, aut, degree, nodes_explored: nodes.into_inner() })
}

// ===== Enumeration with materialized words =====

/// Extends an explicit front (tree-ordered, equal-length words) by one
/// event, mirroring the abstract transition on the real words. The returned
/// front is again tree-ordered; for `Leaf` the emitted word is dropped.
pub fn apply_event_to_words(front: &[Word], event: EventSpec) -> Result<Vec<Word>, StateError> {
    let b = front.len();
    for &i in event.participants().iter() {
        if i as usize >= b {
            return Err(StateError::BadIndex { index: i, branch_count: b as u8 });
        }
    }
    if !event.participants().windows(2).all(|p| p[0] < p[1]) {
        return Err(StateError::BadParticipants);
    }
    let extend_marked = |marked: &[u8], letter: Letter| -> Vec<Word> {
        front
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if marked.contains(&(i as u8)) {
                    z.extended(letter)
                } else {
                    z.extended(Letter::Zero)
                }
            })
            .collect()
    };
    Ok(match event {
        EventSpec::Splitting { w } => {
            let mut out = Vec::with_capacity(b + 1);
            for (i, z) in front.iter().enumerate() {
                out.push(z.extended(Letter::Zero));
                if i as u8 == w {
                    out.push(z.extended(Letter::One));
                }
            }
            out
        }
        EventSpec::New1 { w } => extend_marked(&[w], Letter::One),
        EventSpec::New2 { w } => extend_marked(&[w], Letter::Two),
        EventSpec::New11 { v, w } => extend_marked(&[v, w], Letter::One),
        EventSpec::New22 { v, w } => extend_marked(&[v, w], Letter::Two),
        EventSpec::New111 { u, v, w } => extend_marked(&[u, v, w], Letter::One),
        EventSpec::Leaf { w } => {
            let leaf = &front[w as usize];
            front
                .iter()
                .enumerate()
                .filter(|(i, _)| *i as u8 != w)
                .map(|(_, z)| {
                    let is_perp =
                        words::perp(z, leaf).expect("front words are distinct, equal length");
                    z.extended(if is_perp { Letter::Zero } else { Letter::One })
                })
                .collect()
        }
    })
}

/// Maps an abstract event to the diary-level record over the actual front.
fn record_for(front: &[Word], level: usize, event: EventSpec) -> EventRecord {
    let kind = match event {
        EventSpec::Splitting { .. } => EventKind::Splitting,
        EventSpec::New1 { .. } => EventKind::New1,
        EventSpec::New2 { .. } => EventKind::New2,
        EventSpec::New11 { .. } => EventKind::New11,
        EventSpec::New22 { .. } => EventKind::New22,
        EventSpec::New111 { .. } => EventKind::New111,
        EventSpec::Leaf { .. } => EventKind::Leaf,
    };
    let participants =
        event.participants().iter().map(|&i| front[i as usize].clone()).collect();
    EventRecord { level, kind, participants }
}

struct EnumState {
    front: Vec<Word>,
    leaves: Vec<Word>,
    events: Vec<EventRecord>,
    out: Vec<EnumeratedDiary>,
}

fn dfs_enumerate(state: FrontState, ctx: &Ctx, en: &mut EnumState) -> Result<(), SearchError> {
    if state.branch_count() == 0 {
        if state.leaf_count() == ctx.n {
            en.out.push(EnumeratedDiary {
                diary: Diary::new(en.leaves.iter().cloned()),
                events: en.events.clone(),
            });
        }
        return Ok(());
    }
    if state.branch_count() + state.leaf_count() > ctx.n {
        return Ok(());
    }
    ctx.check_depth(&state)?;
    for event in state.legal_events() {
        if !ctx.admits(&state, event) {
            continue;
        }
        ctx.budget.tick(state.level())?;
        let next = state.apply(event)?;
        if matches!(event, EventSpec::Leaf { .. }) && !ctx.embeds(&next) {
            continue;
        }
        let next_front = apply_event_to_words(&en.front, event)?;
        let emitted = match event {
            EventSpec::Leaf { w } => Some(en.front[w as usize].clone()),
            _ => None,
        };
        en.events.push(record_for(&en.front, state.level(), event));
        let saved = std::mem::replace(&mut en.front, next_front);
        if let Some(leaf) = emitted.clone() {
            en.leaves.push(leaf);
        }
        let result = dfs_enumerate(next, ctx, en);
        if emitted.is_some() {
            en.leaves.pop();
        }
        en.front = saved;
        en.events.pop();
        result?;
    }
    Ok(())
}

/// Enumerates every diary coding a graph isomorphic to `g`, with the event
/// sequence that produced it. Sequential and deterministic: results are in
/// lexicographic event-sequence order.
pub fn enumerate_diaries_with_events(
    g: &SmallGraph,
    limits: &SearchLimits,
) -> Result<Vec<EnumeratedDiary>, SearchError> {
    check_target(g, limits)?;
    if !graphs::is_k4_free(g) {
        return Err(SearchError::NotK4Free);
    }
    let nodes = AtomicU64::new(0);
    let ctx = Ctx::new(g, limits, &nodes);
    let mut en = EnumState {
        front: vec![Word::empty()],
        leaves: Vec::new(),
        events: Vec::new(),
        out: Vec::new(),
    };
    dfs_enumerate(FrontState::initial(), &ctx, &mut en)?;
    Ok(en.out)
}

/// Enumerates every diary coding a graph isomorphic to `g`.
pub fn enumerate_diaries(
    g: &SmallGraph,
    limits: &SearchLimits,
) -> Result<Vec<Diary>, SearchError> {
    Ok(enumerate_diaries_with_events(g, limits)?
        .into_iter()
        .map(|e| e.diary)
        .collect())
}

// ===== Memoized anticlique counting =====

/// Canonical memo key: the lexicographic minimum, over branch permutations,
/// of the packed per-branch has1/has2 bits, pair has11/has22 bits and
/// triple bits, followed by the branch count and remaining leaf quota.
/// Level and leaf adjacency are excluded: anticlique runs never populate
/// leaf adjacency, and legality does not depend on the level.
fn anticlique_key(state: &FrontState, rem: usize) -> Vec<u8> {
    let b = state.branch_count();
    let mut best: Option<Vec<u8>> = None;
    graphs::for_each_permutation(b, |perm| {
        let mut bits: Vec<bool> = Vec::with_capacity(2 * b + b * b + b * b * b / 6);
        for &orig in perm {
            bits.push(state.has1(orig));
            bits.push(state.has2(orig));
        }
        for i in 0..b {
            for j in (i + 1)..b {
                bits.push(state.has11(perm[i], perm[j]));
                bits.push(state.has22(perm[i], perm[j]));
            }
        }
        for i in 0..b {
            for j in (i + 1)..b {
                for k in (j + 1)..b {
                    bits.push(state.has111(perm[i], perm[j], perm[k]));
                }
            }
        }
        let mut bytes = vec![0u8; bits.len().div_ceil(8)];
        for (i, bit) in bits.iter().enumerate() {
            if *bit {
                bytes[i / 8] |= 1 << (7 - i % 8);
            }
        }
        if best.as_ref().map_or(true, |cur| bytes < *cur) {
            best = Some(bytes);
        }
    });
    let mut key = best.unwrap_or_default();
    key.push(b as u8);
    key.push(rem as u8);
    key
}

fn anticlique_rec(
    state: FrontState,
    rem: usize,
    memo: &mut HashMap<Vec<u8>, BigUint>,
    budget: &Budget<'_>,
) -> Result<BigUint, SearchError> {
    if state.branch_count() == 0 {
        return Ok(BigUint::from(u32::from(rem == 0)));
    }
    if state.branch_count() > rem {
        return Ok(zero());
    }
    let key = anticlique_key(&state, rem);
    if let Some(hit) = memo.get(&key) {
        return Ok(hit.clone());
    }
    let mut total = zero();
    for event in state.legal_events() {
        let is_leaf = match event {
            EventSpec::Splitting { .. } => {
                if state.branch_count() + 1 > rem {
                    continue;
                }
                false
            }
            // An anticlique never gains an edge, so a leaf may only be
            // emitted while every other branch is perpendicular to it.
            EventSpec::Leaf { w } => {
                let w = w as usize;
                let all_perp =
                    (0..state.branch_count()).all(|z| z == w || state.perp(z, w));
                if !all_perp {
                    continue;
                }
                true
            }
            _ => false,
        };
        budget.tick(state.level())?;
        let next = state.apply(event)?;
        total += anticlique_rec(next, rem - usize::from(is_leaf), memo, budget)?;
    }
    memo.insert(key, total.clone());
    Ok(total)
}

/// Counts the diaries coding the `n`-vertex anticlique by memoized DFS.
/// Equal to `count_diaries(empty(n)).diary_count`, but exponentially
/// cheaper: anticlique legality depends only on the branch flags up to
/// permutation, so the state space collapses to a few hundred classes.
/// The depth cap is not consulted (levels are not part of the memo key);
/// the node cap is honored.
pub fn count_anticlique_memoized(
    n: usize,
    limits: &SearchLimits,
) -> Result<BigUint, SearchError> {
    if n == 0 {
        return Err(SearchError::EmptyAnticlique);
    }
    if n > limits.max_vertices {
        return Err(SearchError::TooManyVertices { n, max: limits.max_vertices });
    }
    let nodes = AtomicU64::new(0);
    let budget =
        Budget { nodes: &nodes, node_cap: limits.node_cap, progress: limits.progress };
    let mut memo = HashMap::new();
    anticlique_rec(FrontState::initial(), n, &mut memo, &budget)
}
