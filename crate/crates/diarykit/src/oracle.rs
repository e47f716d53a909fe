//! Independent naive enumerator over explicit word fronts.
//!
//! This module certifies the abstract engine on tiny instances. It shares
//! no predicate or transition code with module [`state`](crate::state): the
//! seven clauses are re-read from the definition and evaluated by direct
//! letter scans over explicit words, so a semantic bug would have to be
//! implemented twice, independently, to escape the equivalence checks.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use thiserror::Error;

use crate::diary::{self, Diary};
use crate::graphs::{self, SmallGraph};
use crate::search::{self, SearchError, SearchLimits};
use crate::words::{Letter, Word};

/// Limits for a naive run. Explicit fronts explode combinatorially; two
/// leaves is the intended working range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_leaves: usize,
    pub depth_cap: u32,
}

impl OracleConfig {
    pub fn for_max_leaves(n: usize) -> OracleConfig {
        OracleConfig { max_leaves: n, depth_cap: search::depth_cap_bound(n) }
    }
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig::for_max_leaves(2)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("oracle depth cap {cap} reached with live fronts; enumeration truncated")]
    DepthCapExceeded { cap: u32 },
    #[error("target has {n} vertices but the oracle is limited to {max} leaves")]
    TargetTooLarge { n: usize, max: usize },
    #[error("internal consistency error: {reason}")]
    Internal { reason: String },
    #[error(transparent)]
    Search(#[from] SearchError),
}

/// Outcome of [`cross_check`]: the two enumerations as sets, with the
/// differences when they disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheckReport {
    pub matches: bool,
    pub oracle_count: usize,
    pub engine_count: usize,
    /// Word-sets only the naive oracle produced.
    pub only_oracle: Vec<Diary>,
    /// Word-sets only the abstract engine produced.
    pub only_engine: Vec<Diary>,
}

// ===== Direct letter-scan predicates =====
//
// Deliberately re-implemented over raw letter slices; see module doc.

fn has(w: &Word, l: Letter) -> bool {
    w.letters().iter().any(|&x| x == l)
}

fn shared(u: &Word, v: &Word, l: Letter) -> bool {
    u.letters().iter().zip(v.letters()).any(|(&a, &b)| a == l && b == l)
}

fn shared3(u: &Word, v: &Word, w: &Word, l: Letter) -> bool {
    u.letters()
        .iter()
        .zip(v.letters())
        .zip(w.letters())
        .any(|((&a, &b), &c)| a == l && b == l && c == l)
}

fn operp(u: &Word, v: &Word) -> bool {
    !has(u, Letter::One) || !has(v, Letter::One) || shared(u, v, Letter::Two)
}

/// Is `z` above emitted leaf `l`, i.e. did it extend by 1 when `l` left?
fn above(z: &Word, l: &Word) -> bool {
    z.get(l.len()) == Some(Letter::One)
}

// ===== Successor generation: the seven clauses, literally =====

fn extend_front(front: &[Word], marked: &[usize], letter: Letter) -> Vec<Word> {
    let mut next: Vec<Word> = front
        .iter()
        .enumerate()
        .map(|(i, z)| z.extended(if marked.contains(&i) { letter } else { Letter::Zero }))
        .collect();
    next.sort();
    next
}

fn leaf_conditions(front: &[Word], emitted: &[Word], w: &Word) -> bool {
    if !has(w, Letter::Two) {
        return false;
    }
    let p: Vec<&Word> = front.iter().filter(|z| *z != w && !operp(z, w)).collect();
    // (a) every pair in P already shares a 1.
    for (i, u) in p.iter().enumerate() {
        for v in &p[i + 1..] {
            if !shared(u, v, Letter::One) {
                return false;
            }
        }
    }
    // (b) pairwise non-perpendicular triples in P already share a triple 1.
    for (i, u) in p.iter().enumerate() {
        for (j, v) in p.iter().enumerate().skip(i + 1) {
            for x in &p[j + 1..] {
                if !operp(u, v)
                    && !operp(u, x)
                    && !operp(v, x)
                    && !shared3(u, v, x, Letter::One)
                {
                    return false;
                }
            }
        }
    }
    // (c) members of P above a common emitted leaf with w already have a 2.
    for u in &p {
        if emitted.iter().any(|l| above(w, l) && above(u, l)) && !has(u, Letter::Two) {
            return false;
        }
    }
    // (d) pairs in P sharing a triple 1 with w, or above a common emitted
    // leaf with w, already share a 2.
    for (i, u) in p.iter().enumerate() {
        for v in &p[i + 1..] {
            let common_leaf =
                emitted.iter().any(|l| above(w, l) && above(u, l) && above(v, l));
            if (shared3(u, v, w, Letter::One) || common_leaf) && !shared(u, v, Letter::Two) {
                return false;
            }
        }
    }
    true
}

/// Every front reachable from `front` by one clause, paired with the
/// emitted leaf when the clause was Leaf.
fn naive_successors(front: &[Word], emitted: &[Word]) -> Vec<(Vec<Word>, Option<Word>)> {
    let mut out = Vec::new();
    let one = |w: &Word| has(w, Letter::One);
    let two = |w: &Word| has(w, Letter::Two);
    for (i, w) in front.iter().enumerate() {
        // Splitting: everything extends by 0, w additionally spawns a 1-child.
        let mut next: Vec<Word> = front.iter().map(|z| z.extended(Letter::Zero)).collect();
        next.push(w.extended(Letter::One));
        next.sort();
        out.push((next, None));
        // New 1.
        if !one(w) {
            out.push((extend_front(front, &[i], Letter::One), None));
        }
        // New 2.
        if one(w) && !two(w) {
            out.push((extend_front(front, &[i], Letter::Two), None));
        }
    }
    for (i, v) in front.iter().enumerate() {
        for (j, w) in front.iter().enumerate().skip(i + 1) {
            // New 11.
            if one(v) && one(w) && !shared(v, w, Letter::One) {
                out.push((extend_front(front, &[i, j], Letter::One), None));
            }
            // New 22, with its side condition over the rest of the front.
            let side = front.iter().all(|u| {
                u == v
                    || u == w
                    || !(shared(u, v, Letter::One) && shared(u, w, Letter::One))
                    || shared3(u, v, w, Letter::One)
            });
            if two(v)
                && two(w)
                && shared(v, w, Letter::One)
                && !shared(v, w, Letter::Two)
                && side
            {
                out.push((extend_front(front, &[i, j], Letter::Two), None));
            }
        }
    }
    for (i, u) in front.iter().enumerate() {
        for (j, v) in front.iter().enumerate().skip(i + 1) {
            for (k, w) in front.iter().enumerate().skip(j + 1) {
                // New 111.
                if shared(u, v, Letter::One)
                    && shared(u, w, Letter::One)
                    && shared(v, w, Letter::One)
                    && !shared(u, v, Letter::Two)
                    && !shared(u, w, Letter::Two)
                    && !shared(v, w, Letter::Two)
                    && !shared3(u, v, w, Letter::One)
                {
                    out.push((extend_front(front, &[i, j, k], Letter::One), None));
                }
            }
        }
    }
    for w in front {
        // Leaf.
        if leaf_conditions(front, emitted, w) {
            let mut next: Vec<Word> = front
                .iter()
                .filter(|z| *z != w)
                .map(|z| z.extended(if operp(z, w) { Letter::Zero } else { Letter::One }))
                .collect();
            next.sort();
            out.push((next, Some(w.clone())));
        }
    }
    out
}

/// Breadth-first enumeration of every diary with at most `max_leaves`
/// leaves, over explicit word fronts. Every collected diary is re-checked
/// with [`diary::validate`]; results come sorted.
pub fn naive_enumerate(cfg: &OracleConfig) -> Result<Vec<Diary>, OracleError> {
    let mut queue: VecDeque<(Vec<Word>, Vec<Word>)> =
        VecDeque::from([(vec![Word::empty()], Vec::new())]);
    let mut collected: BTreeSet<Diary> = BTreeSet::new();
    while let Some((front, emitted)) = queue.pop_front() {
        if front.is_empty() {
            let d = Diary::new(emitted.iter().cloned());
            let report = diary::validate(&d);
            if !report.is_valid() {
                return Err(OracleError::Internal {
                    reason: format!(
                        "naively produced diary {d:?} fails validation: {}",
                        report.failure().expect("invalid").reason
                    ),
                });
            }
            if !collected.insert(d.clone()) {
                return Err(OracleError::Internal {
                    reason: format!("diary {d:?} produced twice"),
                });
            }
            continue;
        }
        let level = front[0].len();
        if level >= cfg.depth_cap as usize {
            return Err(OracleError::DepthCapExceeded { cap: cfg.depth_cap });
        }
        let successors = naive_successors(&front, &emitted);
        let distinct: BTreeSet<&Vec<Word>> = successors.iter().map(|(f, _)| f).collect();
        if distinct.len() != successors.len() {
            return Err(OracleError::Internal {
                reason: format!("two clauses produced the same next front above {front:?}"),
            });
        }
        for (next, leaf) in successors {
            let mut next_emitted = emitted.clone();
            if let Some(l) = leaf {
                next_emitted.push(l);
            }
            // Every live branch still owes a leaf.
            if next.len() + next_emitted.len() > cfg.max_leaves {
                continue;
            }
            queue.push_back((next, next_emitted));
        }
    }
    Ok(collected.into_iter().collect())
}

/// Buckets diaries by the isomorphism class of their extracted graph,
/// keyed by the class's canonical form.
pub fn classify_by_graph(
    diaries: &[Diary],
) -> Result<BTreeMap<Vec<u8>, (SmallGraph, usize)>, OracleError> {
    let mut buckets: BTreeMap<Vec<u8>, (SmallGraph, usize)> = BTreeMap::new();
    for d in diaries {
        let g = diary::extract_graph(d)
            .map_err(|e| OracleError::Internal { reason: e.to_string() })?;
        let key = graphs::canonical_form(&g)
            .map_err(|e| OracleError::Internal { reason: e.to_string() })?;
        buckets.entry(key).and_modify(|(_, c)| *c += 1).or_insert((g, 1));
    }
    Ok(buckets)
}

/// Compares the naive enumeration, restricted to the isomorphism class of
/// `g`, against the abstract engine's enumeration and count — as sets of
/// word-sets, not just cardinalities.
pub fn cross_check(g: &SmallGraph, cfg: &OracleConfig) -> Result<CrossCheckReport, OracleError> {
    if g.n() > cfg.max_leaves {
        return Err(OracleError::TargetTooLarge { n: g.n(), max: cfg.max_leaves });
    }
    let mut oracle_side: BTreeSet<Diary> = BTreeSet::new();
    for d in naive_enumerate(cfg)? {
        let h = diary::extract_graph(&d)
            .map_err(|e| OracleError::Internal { reason: e.to_string() })?;
        let same = graphs::is_isomorphic(&h, g)
            .map_err(|e| OracleError::Internal { reason: e.to_string() })?;
        if same {
            oracle_side.insert(d);
        }
    }
    let limits = SearchLimits::for_target_size(g.n());
    let engine_side: BTreeSet<Diary> =
        search::enumerate_diaries(g, &limits)?.into_iter().collect();
    let counted = search::count_diaries(g, &limits)?.diary_count;
    let only_oracle: Vec<Diary> = oracle_side.difference(&engine_side).cloned().collect();
    let only_engine: Vec<Diary> = engine_side.difference(&oracle_side).cloned().collect();
    let matches = only_oracle.is_empty()
        && only_engine.is_empty()
        && counted == num_bigint::BigUint::from(engine_side.len());
    Ok(CrossCheckReport {
        matches,
        oracle_count: oracle_side.len(),
        engine_count: engine_side.len(),
        only_oracle,
        only_engine,
    })
}
