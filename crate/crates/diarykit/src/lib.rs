//! Enumeration and counting of K4-free diaries, and big Ramsey degrees of
//! finite K4-free graphs in the K4-free Henson graph.
//!
//! A diary is a finite antichain of words over `{0,1,2}` whose prefix-closure
//! fronts evolve by exactly one of seven events per level until the front
//! empties; its leaves, read in length order, code a K4-free graph. The big
//! Ramsey degree of a finite K4-free graph G equals the number of diaries
//! coding a copy of G times the order of G's automorphism group.
//!
//! Module map:
//!
//! - [`words`]: the letter alphabet, words, tree order and the shared-letter
//!   predicates (1, 2, 11, 22, 111, perpendicularity).
//! - [`graphs`]: small graphs with exact isomorphism, automorphism counting,
//!   K4-freeness, graph6 parsing and the CLI spec grammar.
//! - [`diary`]: explicit word-set diaries — event classification between
//!   consecutive fronts, validation, graph extraction, DOT export.
//! - [`state`]: the packed abstract front state and the seven event
//!   transitions, the engine under enumeration and counting.
//! - [`search`]: pruned depth-first enumeration/counting for a target graph,
//!   big Ramsey degrees, and the memoized anticlique counter.
//! - [`oracle`]: an independent naive enumerator over explicit words used to
//!   certify the engine on tiny instances.
//! - [`seq`]: tangent numbers (the corresponding degree sequence for cliques
//!   in the random graph), via the boustrophedon recurrence.
//!
//! ```
//! use diarykit::{graphs, search::{count_diaries, SearchLimits}};
//!
//! let k2 = graphs::clique(2);
//! let result = count_diaries(&k2, &SearchLimits::for_target_size(2)).unwrap();
//! assert_eq!(result.diary_count.to_string(), "36");
//! assert_eq!(result.degree.to_string(), "72");
//! ```

pub mod diary;
pub mod graphs;
pub mod oracle;
pub mod search;
pub mod seq;
pub mod state;
pub mod words;
