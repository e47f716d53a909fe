//! Diaries as explicit word sets: validation, event classification, graph
//! extraction and DOT export.
//!
//! A diary is an antichain of words whose prefix-closure fronts evolve by
//! exactly one event per level, from the singleton front at level 0 down to
//! the empty front one past the longest word. [`classify_level`] recovers
//! the event between two consecutive fronts by literally testing all seven
//! clauses; [`validate`] runs that over the whole diary.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::SmallGraph;
use crate::words::{
    self, pred_one, pred_oneone, pred_oneoneone, pred_two, pred_twotwo, Letter, Word,
};

/// A set of words intended to form a diary. Construction does not validate;
/// use [`validate`].
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Diary {
    words: BTreeSet<Word>,
}

impl Diary {
    pub fn new(words: impl IntoIterator<Item = Word>) -> Diary {
        Diary { words: words.into_iter().collect() }
    }

    /// Convenience constructor from string literals.
    pub fn from_strs<'a>(
        words: impl IntoIterator<Item = &'a str>,
    ) -> Result<Diary, words::WordError> {
        let mut set = BTreeSet::new();
        for s in words {
            set.insert(s.parse()?);
        }
        Ok(Diary { words: set })
    }

    pub fn words(&self) -> &BTreeSet<Word> {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl fmt::Debug for Diary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.words.iter()).finish()
    }
}

/// The seven event kinds of the diary definition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum EventKind {
    Splitting,
    New1,
    New2,
    New11,
    New22,
    New111,
    Leaf,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EventKind::Splitting => "Splitting",
            EventKind::New1 => "New1",
            EventKind::New2 => "New2",
            EventKind::New11 => "New11",
            EventKind::New22 => "New22",
            EventKind::New111 => "New111",
            EventKind::Leaf => "Leaf",
        };
        f.write_str(s)
    }
}

/// One classified level of a diary: which event took the front at `level`
/// to the front at `level + 1`, and the words that participated.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct EventRecord {
    pub level: usize,
    pub kind: EventKind,
    /// Participating front words, in tree (lexicographic) order.
    pub participants: Vec<Word>,
}

impl fmt::Display for EventRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "level {}: {}(", self.level, self.kind)?;
        for (i, p) in self.participants.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            if p.is_empty() {
                write!(f, "ε")?;
            } else {
                write!(f, "{p}")?;
            }
        }
        write!(f, ")")
    }
}

/// Why a pair of consecutive fronts fails to classify.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("fronts are malformed: {reason}")]
    Structure { reason: String },
    #[error("no event clause matches{}", nearest_suffix(.nearest))]
    NoMatch { nearest: Option<String> },
    #[error("internal consistency error: {count} clauses match the same front pair")]
    Ambiguous { count: usize },
}

fn nearest_suffix(nearest: &Option<String>) -> String {
    match nearest {
        Some(n) => format!(" (nearest: {n})"),
        None => String::new(),
    }
}

/// Validation outcome: either the full event sequence or the first failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum ValidationReport {
    Valid { events: Vec<EventRecord> },
    Invalid { failure: ValidationFailure },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationFailure {
    /// Level of the failing front pair; `None` for structural failures
    /// (empty diary, antichain violation).
    pub level: Option<usize>,
    pub reason: String,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationReport::Valid { .. })
    }

    pub fn events(&self) -> Option<&[EventRecord]> {
        match self {
            ValidationReport::Valid { events } => Some(events),
            ValidationReport::Invalid { .. } => None,
        }
    }

    pub fn failure(&self) -> Option<&ValidationFailure> {
        match self {
            ValidationReport::Valid { .. } => None,
            ValidationReport::Invalid { failure } => Some(failure),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiaryError {
    #[error("two diary words share length {len}; members of a valid diary have pairwise distinct lengths")]
    EqualLengths { len: usize },
    #[error("cannot export an invalid diary: {reason}")]
    InvalidDiary { reason: String },
}

// ===== Level classification =====

/// Every (kind, participants) candidate over `front`, with its extension.
/// Participants are in tree order; the extension is the next front as a set.
fn candidates(front: &[Word]) -> Vec<(EventKind, Vec<Word>, BTreeSet<Word>)> {
    let mut out = Vec::new();
    let extend_all =
        |except: &[&Word], letter: Letter, chosen: &[&Word]| -> BTreeSet<Word> {
            let mut set: BTreeSet<Word> = front
                .iter()
                .filter(|z| !except.contains(z))
                .map(|z| z.extended(Letter::Zero))
                .collect();
            for c in chosen {
                set.insert(c.extended(letter));
            }
            set
        };
    for w in front {
        // Splitting keeps the 0-child of w alongside the new 1-child.
        let mut set: BTreeSet<Word> =
            front.iter().map(|z| z.extended(Letter::Zero)).collect();
        set.insert(w.extended(Letter::One));
        out.push((EventKind::Splitting, vec![w.clone()], set));
    }
    for w in front {
        out.push((
            EventKind::New1,
            vec![w.clone()],
            extend_all(&[w], Letter::One, &[w]),
        ));
        out.push((
            EventKind::New2,
            vec![w.clone()],
            extend_all(&[w], Letter::Two, &[w]),
        ));
    }
    for (i, v) in front.iter().enumerate() {
        for w in &front[i + 1..] {
            out.push((
                EventKind::New11,
                vec![v.clone(), w.clone()],
                extend_all(&[v, w], Letter::One, &[v, w]),
            ));
            out.push((
                EventKind::New22,
                vec![v.clone(), w.clone()],
                extend_all(&[v, w], Letter::Two, &[v, w]),
            ));
        }
    }
    for (i, u) in front.iter().enumerate() {
        for (j, v) in front.iter().enumerate().skip(i + 1) {
            for w in &front[j + 1..] {
                out.push((
                    EventKind::New111,
                    vec![u.clone(), v.clone(), w.clone()],
                    extend_all(&[u, v, w], Letter::One, &[u, v, w]),
                ));
            }
        }
    }
    for w in front {
        let mut set = BTreeSet::new();
        for z in front.iter().filter(|z| *z != w) {
            let letter = if words::perp(z, w).expect("front words are distinct, equal length")
            {
                Letter::Zero
            } else {
                Letter::One
            };
            set.insert(z.extended(letter));
        }
        out.push((EventKind::Leaf, vec![w.clone()], set));
    }
    out
}

/// Checks the preconditions of `kind` for `participants` over `front`;
/// `earlier_leaves` are the diary members shorter than the current level
/// (needed by the leaf clause). Returns an error description on failure.
fn preconditions(
    kind: EventKind,
    participants: &[Word],
    front: &[Word],
    earlier_leaves: &[Word],
) -> Result<(), String> {
    let oneone = |u: &Word, v: &Word| {
        pred_oneone(u, v).expect("front words are distinct, equal length")
    };
    let twotwo = |u: &Word, v: &Word| {
        pred_twotwo(u, v).expect("front words are distinct, equal length")
    };
    let oneoneone = |u: &Word, v: &Word, w: &Word| {
        pred_oneoneone(u, v, w).expect("front words are distinct, equal length")
    };
    let perp =
        |u: &Word, v: &Word| words::perp(u, v).expect("front words are distinct, equal length");
    match kind {
        EventKind::Splitting => Ok(()),
        EventKind::New1 => {
            let w = &participants[0];
            if pred_one(w) {
                return Err(format!("new 1 requires no earlier 1 on {w:?}"));
            }
            Ok(())
        }
        EventKind::New2 => {
            let w = &participants[0];
            if !pred_one(w) {
                return Err(format!("new 2 requires an earlier 1 on {w:?}"));
            }
            if pred_two(w) {
                return Err(format!("new 2 requires no earlier 2 on {w:?}"));
            }
            Ok(())
        }
        EventKind::New11 => {
            let (v, w) = (&participants[0], &participants[1]);
            if !pred_one(v) || !pred_one(w) {
                return Err("new 11 requires an earlier 1 on both words".into());
            }
            if oneone(v, w) {
                return Err(format!("new 11 requires no earlier shared 1 of {v:?}, {w:?}"));
            }
            Ok(())
        }
        EventKind::New22 => {
            let (v, w) = (&participants[0], &participants[1]);
            if !pred_two(v) || !pred_two(w) {
                return Err("new 22 requires an earlier 2 on both words".into());
            }
            if !oneone(v, w) {
                return Err(format!("new 22 requires an earlier shared 1 of {v:?}, {w:?}"));
            }
            if twotwo(v, w) {
                return Err(format!("new 22 requires no earlier shared 2 of {v:?}, {w:?}"));
            }
            for u in front.iter().filter(|u| *u != v && *u != w) {
                if oneone(u, v) && oneone(u, w) && !oneoneone(u, v, w) {
                    return Err(format!(
                        "new 22 of {v:?}, {w:?} would also create a first shared 111 with {u:?}"
                    ));
                }
            }
            Ok(())
        }
        EventKind::New111 => {
            let (u, v, w) = (&participants[0], &participants[1], &participants[2]);
            for (a, b) in [(u, v), (u, w), (v, w)] {
                if !oneone(a, b) {
                    return Err(format!("new 111 requires an earlier shared 1 of {a:?}, {b:?}"));
                }
                if twotwo(a, b) {
                    return Err(format!("new 111 requires no shared 2 of {a:?}, {b:?}"));
                }
            }
            if oneoneone(u, v, w) {
                return Err("new 111 requires no earlier shared 111".into());
            }
            Ok(())
        }
        EventKind::Leaf => {
            let w = &participants[0];
            if !pred_two(w) {
                return Err(format!("a leaf word must contain a 2, {w:?} does not"));
            }
            let p: Vec<&Word> = front.iter().filter(|z| *z != w && !perp(z, w)).collect();
            for (i, u) in p.iter().enumerate() {
                for v in &p[i + 1..] {
                    if !oneone(u, v) {
                        return Err(format!(
                            "leaf would create a first shared 1 of {u:?}, {v:?} (no new 11)"
                        ));
                    }
                }
            }
            for (i, u) in p.iter().enumerate() {
                for (j, v) in p.iter().enumerate().skip(i + 1) {
                    for x in &p[j + 1..] {
                        if !perp(u, v) && !perp(v, x) && !perp(u, x) && !oneoneone(u, v, x) {
                            return Err(format!(
                                "leaf would create a first shared 111 of {u:?}, {v:?}, {x:?} (no new 111)"
                            ));
                        }
                    }
                }
            }
            let above = |z: &Word, leaf: &Word| z.get(leaf.len()) == Some(Letter::One);
            for u in &p {
                for leaf in earlier_leaves {
                    if above(w, leaf) && above(u, leaf) && !pred_two(u) {
                        return Err(format!(
                            "leaf would create a first 2 on {u:?}, which shares leaf {leaf:?} with {w:?} (no new 2)"
                        ));
                    }
                }
            }
            for (i, u) in p.iter().enumerate() {
                for v in &p[i + 1..] {
                    if oneoneone(u, v, w) && !twotwo(u, v) {
                        return Err(format!(
                            "leaf would create a first shared 2 of {u:?}, {v:?} (shared 111 with the leaf; no new 22)"
                        ));
                    }
                    for leaf in earlier_leaves {
                        if above(w, leaf) && above(u, leaf) && above(v, leaf) && !twotwo(u, v) {
                            return Err(format!(
                                "leaf would create a first shared 2 of {u:?}, {v:?} (both share leaf {leaf:?} with {w:?}; no new 22)"
                            ));
                        }
                    }
                }
            }
            Ok(())
        }
    }
}

/// Classifies the event between two consecutive fronts.
///
/// All seven clauses over all participant choices are tested literally:
/// exactly one must produce `front_next` with its preconditions satisfied.
/// `earlier_leaves` are the diary members shorter than the current level,
/// which the leaf clause consults.
pub fn classify_level(
    front: &[Word],
    front_next: &[Word],
    earlier_leaves: &[Word],
) -> Result<EventRecord, ClassifyError> {
    if front.is_empty() {
        return Err(ClassifyError::Structure { reason: "the current front is empty".into() });
    }
    let level = front[0].len();
    if front.iter().any(|w| w.len() != level) {
        return Err(ClassifyError::Structure {
            reason: "current front words have unequal lengths".into(),
        });
    }
    if front_next.iter().any(|w| w.len() != level + 1) {
        return Err(ClassifyError::Structure {
            reason: "next front words do not all sit one level deeper".into(),
        });
    }
    let front_set: BTreeSet<&Word> = front.iter().collect();
    if front_set.len() != front.len() {
        return Err(ClassifyError::Structure { reason: "duplicate words in the front".into() });
    }
    for x in front_next {
        let parent = x.prefix(level);
        if !front_set.contains(&parent) {
            return Err(ClassifyError::Structure {
                reason: format!("word {x:?} has no parent in the current front"),
            });
        }
    }
    let target: BTreeSet<Word> = front_next.iter().cloned().collect();
    if target.len() != front_next.len() {
        return Err(ClassifyError::Structure { reason: "duplicate words in the next front".into() });
    }
    let mut matches = Vec::new();
    let mut nearest: Option<String> = None;
    for (kind, participants, extension) in candidates(front) {
        if extension != target {
            continue;
        }
        match preconditions(kind, &participants, front, earlier_leaves) {
            Ok(()) => matches.push(EventRecord { level, kind, participants }),
            Err(reason) => {
                let described = format!("{kind} extension fits, but {reason}");
                if nearest.is_none() {
                    nearest = Some(described);
                }
            }
        }
    }
    match matches.len() {
        0 => Err(ClassifyError::NoMatch { nearest }),
        1 => Ok(matches.pop().expect("one element")),
        n => Err(ClassifyError::Ambiguous { count: n }),
    }
}

// ===== Validation =====

/// Replays a diary level by level, classifying every front pair until the
/// front empties. Any structural defect or unclassifiable level is reported
/// with its level and reason.
pub fn validate(diary: &Diary) -> ValidationReport {
    if diary.is_empty() {
        return ValidationReport::Invalid {
            failure: ValidationFailure {
                level: None,
                reason: "a diary must contain at least one word".into(),
            },
        };
    }
    let members: Vec<&Word> = diary.words.iter().collect();
    for (i, u) in members.iter().enumerate() {
        for v in &members[i + 1..] {
            if u.is_proper_prefix_of(v) || v.is_proper_prefix_of(u) {
                return ValidationReport::Invalid {
                    failure: ValidationFailure {
                        level: None,
                        reason: format!(
                            "not an antichain: {u:?} and {v:?} are prefix-comparable"
                        ),
                    },
                };
            }
        }
    }
    let closure = words::prefix_closure(diary.words.iter());
    let max_len = diary.words.iter().map(Word::len).max().expect("non-empty");
    let mut leaves_by_len: BTreeMap<usize, Word> = BTreeMap::new();
    for w in &diary.words {
        leaves_by_len.insert(w.len(), w.clone());
    }
    let mut events = Vec::with_capacity(max_len + 1);
    for level in 0..=max_len {
        let front = words::level_slice(&closure, level);
        let front_next = words::level_slice(&closure, level + 1);
        let earlier: Vec<Word> = diary
            .words
            .iter()
            .filter(|w| w.len() < level)
            .cloned()
            .collect();
        match classify_level(&front, &front_next, &earlier) {
            Ok(record) => events.push(record),
            Err(err) => {
                return ValidationReport::Invalid {
                    failure: ValidationFailure { level: Some(level), reason: err.to_string() },
                };
            }
        }
    }
    ValidationReport::Valid { events }
}

// ===== Graph extraction =====

/// The graph a diary codes: vertices are the members ordered by length, and
/// a longer word is adjacent to a shorter one iff it carries letter 1 at the
/// shorter word's length.
pub fn extract_graph(diary: &Diary) -> Result<SmallGraph, DiaryError> {
    let mut vs: Vec<&Word> = diary.words.iter().collect();
    vs.sort_by_key(|w| w.len());
    for pair in vs.windows(2) {
        if pair[0].len() == pair[1].len() {
            return Err(DiaryError::EqualLengths { len: pair[0].len() });
        }
    }
    let mut g = SmallGraph::new(vs.len());
    for (i, u) in vs.iter().enumerate() {
        for (j, v) in vs.iter().enumerate().skip(i + 1) {
            if v.get(u.len()) == Some(Letter::One) {
                g.add_edge(i, j).expect("indices are in range");
            }
        }
    }
    Ok(g)
}

// ===== DOT export =====

/// Renders the prefix tree of a valid diary as a DOT digraph: one node per
/// closure word, solid edges labelled by the appended letter, leaf words
/// double-circled, and one comment per level naming the classified event.
pub fn to_dot(diary: &Diary) -> Result<String, DiaryError> {
    let report = validate(diary);
    let events = match &report {
        ValidationReport::Valid { events } => events,
        ValidationReport::Invalid { failure } => {
            return Err(DiaryError::InvalidDiary { reason: failure.reason.clone() });
        }
    };
    let closure = words::prefix_closure(diary.words.iter());
    let node_id = |w: &Word| format!("\"n{w}\"");
    let node_label = |w: &Word| if w.is_empty() { "ε".to_string() } else { w.to_string() };
    let mut out = String::from("digraph diary {\n");
    out.push_str("  rankdir=TB;\n  node [shape=circle, fontsize=10];\n");
    for event in events {
        out.push_str(&format!("  // {event}\n"));
    }
    for w in &closure {
        let shape = if diary.words.contains(w) { ", shape=doublecircle" } else { "" };
        out.push_str(&format!("  {} [label=\"{}\"{}];\n", node_id(w), node_label(w), shape));
    }
    for w in &closure {
        if w.is_empty() {
            continue;
        }
        let parent = w.prefix(w.len() - 1);
        let letter = w.get(w.len() - 1).expect("non-empty word").as_char();
        out.push_str(&format!(
            "  {} -> {} [label=\"{}\"];\n",
            node_id(&parent),
            node_id(w),
            letter
        ));
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(words: &[&str]) -> Diary {
        Diary::from_strs(words.iter().copied()).unwrap()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn diary_serde_round_trip() {
        let diary = d(&["12", "011"]);
        let json = serde_json::to_string(&diary).unwrap();
        assert_eq!(json, "{\"words\":[\"011\",\"12\"]}");
        assert_eq!(serde_json::from_str::<Diary>(&json).unwrap(), diary);
    }

    #[test]
    fn the_single_leaf_diary_validates() {
        let report = validate(&d(&["12"]));
        let events = report.events().expect("valid").to_vec();
        assert_eq!(
            events.iter().map(|e| e.kind).collect::<Vec<_>>(),
            vec![EventKind::New1, EventKind::New2, EventKind::Leaf]
        );
        assert_eq!(events[0].participants, vec![w("")]);
        assert_eq!(events[1].participants, vec![w("1")]);
        assert_eq!(events[2].participants, vec![w("12")]);
    }

    #[test]
    fn invalid_diaries_are_rejected() {
        // Empty.
        assert!(!validate(&Diary::default()).is_valid());
        // Not an antichain.
        let report = validate(&d(&["1", "12"]));
        assert!(report.failure().unwrap().reason.contains("antichain"));
        // {""}: the empty word has no 2, so the leaf clause fails at level 0.
        let report = validate(&d(&[""]));
        assert_eq!(report.failure().unwrap().level, Some(0));
        // {"1"}: New1 then a leaf without a 2.
        assert!(!validate(&d(&["1"])).is_valid());
        // {"2"}: a first 2 requires an earlier 1.
        let report = validate(&d(&["2"]));
        assert!(!report.is_valid());
        // {"10"}: the level-1 front extends by 0 only, which no event does.
        assert!(!validate(&d(&["10"])).is_valid());
    }

    #[test]
    fn classify_rejects_malformed_fronts() {
        assert!(matches!(
            classify_level(&[], &[], &[]),
            Err(ClassifyError::Structure { .. })
        ));
        assert!(matches!(
            classify_level(&[w("0"), w("10")], &[], &[]),
            Err(ClassifyError::Structure { .. })
        ));
        assert!(matches!(
            classify_level(&[w("0")], &[w("10")], &[]),
            Err(ClassifyError::Structure { .. })
        ));
    }

    #[test]
    fn classify_names_near_misses() {
        // "1" -> "11" looks like New1 but the word already has a 1.
        let err = classify_level(&[w("1")], &[w("11")], &[]).unwrap_err();
        match err {
            ClassifyError::NoMatch { nearest: Some(reason) } => {
                assert!(reason.contains("New1"), "{reason}");
            }
            other => panic!("expected a near-miss, got {other:?}"),
        }
    }

    #[test]
    fn splitting_classifies() {
        let record = classify_level(&[w("")], &[w("0"), w("1")], &[]).unwrap();
        assert_eq!(record.kind, EventKind::Splitting);
        assert_eq!(record.participants, vec![w("")]);
        assert_eq!(record.level, 0);
    }

    #[test]
    fn extraction_and_equal_length_error() {
        let g = extract_graph(&d(&["12", "011"])).unwrap();
        // "011" has letter 1 at position 2 = len("12"), so they are adjacent.
        assert_eq!(g.n(), 2);
        assert_eq!(g.edges(), vec![(0, 1)]);

        let g = extract_graph(&d(&["12", "010"])).unwrap();
        assert_eq!(g.edges(), vec![]);

        assert_eq!(
            extract_graph(&d(&["12", "21"])),
            Err(DiaryError::EqualLengths { len: 2 })
        );
    }

    #[test]
    fn dot_export_mentions_structure() {
        let dot = to_dot(&d(&["12"])).unwrap();
        assert!(dot.contains("digraph diary"));
        assert!(dot.contains("\"n\" [label=\"ε\"]"));
        assert!(dot.contains("\"n12\" [label=\"12\", shape=doublecircle]"));
        assert!(dot.contains("\"n1\" -> \"n12\" [label=\"2\"]"));
        assert!(dot.contains("// level 0: New1(ε)"));
        assert!(to_dot(&d(&["10"])).is_err());
    }

    #[test]
    fn two_leaf_diary_round_trip() {
        // An adjacent pair: split, give each branch its own 1, emit the left
        // leaf, and let the survivor pass over it with a 1 before its own 2.
        let diary = d(&["012", "10012"]);
        let report = validate(&diary);
        assert!(report.is_valid(), "{report:?}");
        let kinds: Vec<EventKind> =
            report.events().unwrap().iter().map(|e| e.kind).collect();
        assert_eq!(
            kinds,
            vec![
                EventKind::Splitting,
                EventKind::New1,
                EventKind::New2,
                EventKind::Leaf,
                EventKind::New2,
                EventKind::Leaf,
            ]
        );
        let g = extract_graph(&diary).unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn non_adjacent_pair_validates() {
        // A perp survivor (no 1 yet) passes over the emitted leaf with a 0.
        let diary = d(&["12", "00012"]);
        assert!(validate(&diary).is_valid());
        let g = extract_graph(&diary).unwrap();
        assert_eq!(g.edge_count(), 0);
    }
}
