//! Words over the alphabet `{0, 1, 2}` and the predicates the diary events
//! are phrased in.
//!
//! All binary and ternary predicates are defined only for *distinct* words of
//! *equal* length; violating either is a usage error and is reported rather
//! than defaulted. The predicates ask for a shared position carrying a given
//! letter:
//!
//! * `pred_one(u)`      - some position of `u` is `1`
//! * `pred_two(u)`      - some position of `u` is `2`
//! * `pred_oneone(u,v)` - some position is `1` in both
//! * `pred_twotwo(u,v)` - some position is `2` in both
//! * `pred_oneoneone(u,v,w)` - some position is `1` in all three
//! * `perp(u,v)`        - `!pred_one(u) || !pred_one(v) || pred_twotwo(u,v)`

use std::fmt;
use std::str::FromStr;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graphs::SmallGraph;

/// One letter of the diary alphabet.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
#[repr(u8)]
pub enum Letter {
    Zero = 0,
    One = 1,
    Two = 2,
}

impl Letter {
    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            '0' => Some(Letter::Zero),
            '1' => Some(Letter::One),
            '2' => Some(Letter::Two),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::Zero => '0',
            Letter::One => '1',
            Letter::Two => '2',
        }
    }
}

/// Errors for word parsing and predicate argument validation.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WordError {
    #[error("invalid letter {found:?} at position {pos} (alphabet is 0, 1, 2)")]
    BadLetter { found: char, pos: usize },
    #[error("predicate arguments must have equal length, got {left} and {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("predicate arguments must be distinct words")]
    NotDistinct,
}

/// A finite word over `{0, 1, 2}`.
///
/// Words order lexicographically with prefixes first, so equal-length words
/// sort in tree order. Serialized form is the plain string, e.g. `"102"`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: impl Into<Vec<Letter>>) -> Word {
        Word(letters.into())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    /// Letter at position `i`; out-of-range access is an error, never a
    /// default.
    pub fn get(&self, i: usize) -> Option<Letter> {
        self.0.get(i).copied()
    }

    /// New word with `letter` appended.
    pub fn extended(&self, letter: Letter) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.extend_from_slice(&self.0);
        v.push(letter);
        Word(v)
    }

    /// Prefix of length `len` (caller must keep `len <= self.len()`).
    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn is_proper_prefix_of(&self, other: &Word) -> bool {
        self.len() < other.len() && other.0[..self.len()] == self.0[..]
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use fmt::Write;
        for l in &self.0 {
            f.write_char(l.as_char())?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

impl FromStr for Word {
    type Err = WordError;

    fn from_str(s: &str) -> Result<Word, WordError> {
        let mut letters = Vec::with_capacity(s.len());
        for (pos, c) in s.chars().enumerate() {
            letters.push(Letter::from_char(c).ok_or(WordError::BadLetter { found: c, pos })?);
        }
        Ok(Word(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

// ===== Predicates =====

fn check_pair(u: &Word, v: &Word) -> Result<(), WordError> {
    if u.len() != v.len() {
        return Err(WordError::LengthMismatch { left: u.len(), right: v.len() });
    }
    if u == v {
        return Err(WordError::NotDistinct);
    }
    Ok(())
}

/// Some position of `u` is the letter `1`.
pub fn pred_one(u: &Word) -> bool {
    u.0.contains(&Letter::One)
}

/// Some position of `u` is the letter `2`.
pub fn pred_two(u: &Word) -> bool {
    u.0.contains(&Letter::Two)
}

/// Some shared position of two distinct equal-length words is `1` in both.
pub fn pred_oneone(u: &Word, v: &Word) -> Result<bool, WordError> {
    check_pair(u, v)?;
    Ok(u.0.iter().zip(&v.0).any(|(a, b)| *a == Letter::One && *b == Letter::One))
}

/// Some shared position of two distinct equal-length words is `2` in both.
pub fn pred_twotwo(u: &Word, v: &Word) -> Result<bool, WordError> {
    check_pair(u, v)?;
    Ok(u.0.iter().zip(&v.0).any(|(a, b)| *a == Letter::Two && *b == Letter::Two))
}

/// Some shared position of three pairwise-distinct equal-length words is `1`
/// in all three.
pub fn pred_oneoneone(u: &Word, v: &Word, w: &Word) -> Result<bool, WordError> {
    check_pair(u, v)?;
    check_pair(u, w)?;
    check_pair(v, w)?;
    Ok(u.0
        .iter()
        .zip(&v.0)
        .zip(&w.0)
        .any(|((a, b), c)| *a == Letter::One && *b == Letter::One && *c == Letter::One))
}

/// Perpendicularity: `u` and `v` cannot both reach a shared `1` history,
/// i.e. one of them has no `1`, or they already share a `2`.
pub fn perp(u: &Word, v: &Word) -> Result<bool, WordError> {
    Ok(!pred_one(u) || !pred_one(v) || pred_twotwo(u, v)?)
}

// ===== Prefix structure =====

/// All prefixes of all members of `words`, including each member itself and
/// (when `words` is non-empty) the empty word.
pub fn prefix_closure<'a>(words: impl IntoIterator<Item = &'a Word>) -> Vec<Word> {
    let mut out: Vec<Word> = Vec::new();
    for w in words {
        for len in 0..=w.len() {
            out.push(w.prefix(len));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The members of `closure` of length exactly `level`, in sorted (tree)
/// order.
pub fn level_slice(closure: &[Word], level: usize) -> Vec<Word> {
    closure.iter().filter(|w| w.len() == level).cloned().collect()
}

// ===== Word-to-type construction =====

/// The type graph of a word: the finite graph a word on the coding tree
/// corresponds to, with one distinguished "type" vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeGraph {
    pub graph: SmallGraph,
    /// Index of the distinguished type vertex (always the last vertex).
    pub type_vertex: usize,
}

/// Builds the type graph of `w`.
///
/// Reading `w` left to right with a running vertex index `i`, a letter `0`
/// contributes one vertex not joined to the type vertex `t`, a letter `1`
/// one vertex joined to `t`, and a letter `2` two adjacent vertices both
/// joined to `t`. The ordinary vertices therefore number
/// `w.len() + (count of letter 2)`, and `t` is the final vertex.
pub fn word_to_type(w: &Word) -> TypeGraph {
    let twos = w.0.iter().filter(|&&l| l == Letter::Two).count();
    let ordinary = w.len() + twos;
    let t = ordinary;
    let mut g = SmallGraph::new(ordinary + 1);
    let mut i = 0usize;
    for &letter in &w.0 {
        match letter {
            Letter::Zero => {
                i += 1;
            }
            Letter::One => {
                g.add_edge(i, t).expect("type edges are valid");
                i += 1;
            }
            Letter::Two => {
                g.add_edge(i, i + 1).expect("gadget edge is valid");
                g.add_edge(i, t).expect("type edges are valid");
                g.add_edge(i + 1, t).expect("type edges are valid");
                i += 2;
            }
        }
    }
    debug_assert_eq!(i, ordinary);
    TypeGraph { graph: g, type_vertex: t }
}
