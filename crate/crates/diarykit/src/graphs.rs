//! Small simple graphs: construction, parsing, isomorphism, automorphisms.
//!
//! Targets handled by the search are tiny (a handful of vertices), so the
//! isomorphism machinery is deliberately brute force: `canonical_form` takes
//! the lexicographic minimum of the adjacency upper triangle over all vertex
//! permutations. That is exact and fast up to [`CANON_MAX_VERTICES`]; beyond
//! that the routines refuse to run rather than silently degrade.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap for the brute-force canonicalization / automorphism routines.
pub const CANON_MAX_VERTICES: usize = 10;

/// Largest vertex count representable (graph6 short form, one u64 row).
pub const MAX_VERTICES: usize = 62;

/// Errors for graph construction and the exact isomorphism routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {v} out of range for a graph on {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },
    #[error("self-loop at vertex {v} is not allowed")]
    SelfLoop { v: usize },
    #[error("graph on {n} vertices exceeds the limit of {max} for this operation")]
    TooLarge { n: usize, max: usize },
}

/// Errors for [`parse_spec`], with byte positions into the spec text.
#[derive(Debug, Error)]
pub enum SpecParseError {
    #[error("unknown graph form {found:?} at position {pos} (expected clique, empty, path, complement, g6 or json)")]
    UnknownForm { found: String, pos: usize },
    #[error("invalid count {found:?} at position {pos}")]
    BadCount { found: String, pos: usize },
    #[error("missing argument after {form:?} at position {pos}")]
    MissingArgument { form: String, pos: usize },
    #[error("invalid graph6 text at position {pos}: {reason}")]
    BadGraph6 { pos: usize, reason: String },
    #[error("cannot read graph file {path:?}: {reason}")]
    File { path: String, reason: String },
    #[error("invalid graph JSON in {path:?}: {reason}")]
    BadJson { path: String, reason: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// An undirected simple graph on at most [`MAX_VERTICES`] vertices, stored as
/// one adjacency bitmask per vertex.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SmallGraph {
    n: usize,
    rows: Vec<u64>,
}

impl SmallGraph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph too large: {n} > {MAX_VERTICES}");
        SmallGraph { n, rows: vec![0; n] }
    }

    /// Builds a graph from an edge list, rejecting loops and bad indices.
    pub fn with_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = SmallGraph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange { v: u, n: self.n });
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange { v, n: self.n });
        }
        if u == v {
            return Err(GraphError::SelfLoop { v });
        }
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
        Ok(())
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        debug_assert!(u < self.n && v < self.n);
        u != v && (self.rows[u] >> v) & 1 == 1
    }

    /// Neighbourhood of `v` as a bitmask.
    pub fn row(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    /// All edges as `(u, v)` pairs with `u < v`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.has_edge(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }
}

impl fmt::Debug for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SmallGraph(n={}, edges={:?})", self.n, self.edges())
    }
}

impl fmt::Display for SmallGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&describe(self))
    }
}

// ===== Constructors =====

/// Complete graph on `n` vertices.
pub fn clique(n: usize) -> SmallGraph {
    let mut g = SmallGraph::new(n);
    for u in 0..n {
        for v in (u + 1)..n {
            g.add_edge(u, v).expect("clique edges are valid");
        }
    }
    g
}

/// Edgeless graph on `n` vertices.
pub fn empty(n: usize) -> SmallGraph {
    SmallGraph::new(n)
}

/// Path with `edges` edges (`edges + 1` vertices): 0 - 1 - ... - edges.
pub fn path(edges: usize) -> SmallGraph {
    let mut g = SmallGraph::new(edges + 1);
    for v in 0..edges {
        g.add_edge(v, v + 1).expect("path edges are valid");
    }
    g
}

/// The path with two edges on three vertices.
pub fn path2() -> SmallGraph {
    path(2)
}

/// Complement graph (same vertices, inverted adjacency).
pub fn complement(g: &SmallGraph) -> SmallGraph {
    let mut c = SmallGraph::new(g.n);
    for u in 0..g.n {
        for v in (u + 1)..g.n {
            if !g.has_edge(u, v) {
                c.add_edge(u, v).expect("complement edges are valid");
            }
        }
    }
    c
}

// ===== Isomorphism, automorphisms, canonical form =====

/// Calls `f` with every permutation of `0..n` (Heap's algorithm).
pub(crate) fn for_each_permutation(n: usize, mut f: impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    f(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            f(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Row-major upper-triangle bit string of `g` relabelled by `perm`
/// (`perm[i]` is the original vertex placed at position `i`).
fn triangle_bits(g: &SmallGraph, perm: &[usize]) -> Vec<bool> {
    let n = g.n;
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            bits.push(g.has_edge(perm[i], perm[j]));
        }
    }
    bits
}

fn check_canon_size(g: &SmallGraph) -> Result<(), GraphError> {
    if g.n > CANON_MAX_VERTICES {
        return Err(GraphError::TooLarge { n: g.n, max: CANON_MAX_VERTICES });
    }
    Ok(())
}

/// Canonical byte form: vertex count, then the lexicographically minimal
/// upper-triangle bit string over all vertex permutations, packed MSB-first.
/// Two graphs have equal canonical forms iff they are isomorphic.
pub fn canonical_form(g: &SmallGraph) -> Result<Vec<u8>, GraphError> {
    check_canon_size(g)?;
    let mut best: Option<Vec<bool>> = None;
    for_each_permutation(g.n, |perm| {
        let bits = triangle_bits(g, perm);
        match &best {
            Some(b) if *b <= bits => {}
            _ => best = Some(bits),
        }
    });
    let bits = best.unwrap_or_default();
    let mut out = vec![g.n as u8];
    let mut acc = 0u8;
    for (i, &b) in bits.iter().enumerate() {
        acc = (acc << 1) | b as u8;
        if i % 8 == 7 {
            out.push(acc);
            acc = 0;
        }
    }
    if bits.len() % 8 != 0 {
        acc <<= 8 - bits.len() % 8;
        out.push(acc);
    }
    Ok(out)
}

/// Exact isomorphism test via canonical-form equality.
pub fn is_isomorphic(g: &SmallGraph, h: &SmallGraph) -> Result<bool, GraphError> {
    if g.n != h.n {
        check_canon_size(g)?;
        check_canon_size(h)?;
        return Ok(false);
    }
    Ok(canonical_form(g)? == canonical_form(h)?)
}

/// Order of the automorphism group (number of adjacency-preserving
/// permutations), counted by brute force.
pub fn aut_order(g: &SmallGraph) -> Result<u64, GraphError> {
    check_canon_size(g)?;
    let mut count = 0u64;
    for_each_permutation(g.n, |perm| {
        let ok = (0..g.n).all(|i| {
            ((i + 1)..g.n).all(|j| g.has_edge(i, j) == g.has_edge(perm[i], perm[j]))
        });
        if ok {
            count += 1;
        }
    });
    Ok(count)
}

/// True iff `g` contains no four pairwise-adjacent vertices.
pub fn is_k4_free(g: &SmallGraph) -> bool {
    let n = g.n;
    for a in 0..n {
        for b in (a + 1)..n {
            if !g.has_edge(a, b) {
                continue;
            }
            for c in (b + 1)..n {
                if !(g.has_edge(a, c) && g.has_edge(b, c)) {
                    continue;
                }
                for d in (c + 1)..n {
                    if g.has_edge(a, d) && g.has_edge(b, d) && g.has_edge(c, d) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

// ===== graph6 =====

/// Decodes graph6 text (short form, `n <= 62`).
pub fn from_graph6(text: &str) -> Result<SmallGraph, SpecParseError> {
    let bytes = text.as_bytes();
    if bytes.is_empty() {
        return Err(SpecParseError::BadGraph6 { pos: 0, reason: "empty text".into() });
    }
    let c0 = bytes[0];
    if !(63..=125).contains(&c0) {
        return Err(SpecParseError::BadGraph6 {
            pos: 0,
            reason: format!("header byte {c0} outside 63..=125 (n > 62 unsupported)"),
        });
    }
    let n = (c0 - 63) as usize;
    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() != 1 + nbytes {
        return Err(SpecParseError::BadGraph6 {
            pos: bytes.len().min(1 + nbytes),
            reason: format!("expected {} data bytes for n={n}, found {}", nbytes, bytes.len() - 1),
        });
    }
    let mut g = SmallGraph::new(n);
    let mut bit_idx = 0usize;
    // Upper triangle in column-major order: (0,1), (0,2), (1,2), (0,3), ...
    'outer: for j in 1..n {
        for i in 0..j {
            let byte = bytes[1 + bit_idx / 6];
            if !(63..=126).contains(&byte) {
                return Err(SpecParseError::BadGraph6 {
                    pos: 1 + bit_idx / 6,
                    reason: format!("data byte {byte} outside 63..=126"),
                });
            }
            let bit = (byte - 63) >> (5 - bit_idx % 6) & 1;
            if bit == 1 {
                g.add_edge(i, j)?;
            }
            bit_idx += 1;
            if bit_idx == nbits {
                break 'outer;
            }
        }
    }
    // Padding bits of the final byte must be zero.
    if nbits % 6 != 0 {
        let last = bytes[1 + nbytes - 1] - 63;
        let pad = 6 - nbits % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(SpecParseError::BadGraph6 {
                pos: nbytes,
                reason: "nonzero padding bits".into(),
            });
        }
    }
    Ok(g)
}

/// Encodes `g` as graph6 text (short form).
pub fn to_graph6(g: &SmallGraph) -> String {
    let n = g.n;
    let mut out = vec![63 + n as u8];
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(63 + acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(63 + (acc << (6 - filled)));
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

// ===== Spec grammar =====

#[derive(Deserialize, Serialize)]
struct GraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
}

/// Parses a graph spec:
/// `clique:N | empty:N | path:N | complement:<spec> | g6:<text> | json:<path>`.
pub fn parse_spec(text: &str) -> Result<SmallGraph, SpecParseError> {
    parse_spec_at(text, 0)
}

fn parse_spec_at(text: &str, pos: usize) -> Result<SmallGraph, SpecParseError> {
    let (form, rest, rest_pos) = match text.find(':') {
        Some(idx) => (&text[..idx], &text[idx + 1..], pos + idx + 1),
        None => {
            return Err(SpecParseError::UnknownForm { found: text.into(), pos });
        }
    };
    let need_arg = |rest: &str| -> Result<(), SpecParseError> {
        if rest.is_empty() {
            Err(SpecParseError::MissingArgument { form: form.into(), pos: rest_pos })
        } else {
            Ok(())
        }
    };
    let parse_count = |rest: &str| -> Result<usize, SpecParseError> {
        need_arg(rest)?;
        let n: usize = rest
            .parse()
            .map_err(|_| SpecParseError::BadCount { found: rest.into(), pos: rest_pos })?;
        if n > MAX_VERTICES {
            return Err(SpecParseError::BadCount { found: rest.into(), pos: rest_pos });
        }
        Ok(n)
    };
    match form {
        "clique" => Ok(clique(parse_count(rest)?)),
        "empty" => Ok(empty(parse_count(rest)?)),
        "path" => {
            let edges = parse_count(rest)?;
            if edges + 1 > MAX_VERTICES {
                return Err(SpecParseError::BadCount { found: rest.into(), pos: rest_pos });
            }
            Ok(path(edges))
        }
        "complement" => {
            need_arg(rest)?;
            Ok(complement(&parse_spec_at(rest, rest_pos)?))
        }
        "g6" => {
            need_arg(rest)?;
            from_graph6(rest).map_err(|e| match e {
                SpecParseError::BadGraph6 { pos: p, reason } => {
                    SpecParseError::BadGraph6 { pos: rest_pos + p, reason }
                }
                other => other,
            })
        }
        "json" => {
            need_arg(rest)?;
            let raw = std::fs::read_to_string(Path::new(rest)).map_err(|e| {
                SpecParseError::File { path: rest.into(), reason: e.to_string() }
            })?;
            let parsed: GraphJson = serde_json::from_str(&raw).map_err(|e| {
                SpecParseError::BadJson { path: rest.into(), reason: e.to_string() }
            })?;
            if parsed.n > MAX_VERTICES {
                return Err(SpecParseError::BadJson {
                    path: rest.into(),
                    reason: format!("n={} exceeds the limit of {}", parsed.n, MAX_VERTICES),
                });
            }
            Ok(SmallGraph::with_edges(parsed.n, &parsed.edges)?)
        }
        _ => Err(SpecParseError::UnknownForm { found: form.into(), pos }),
    }
}

/// Human-readable name for `g`, preferring the spec grammar
/// (`clique:n`, `empty:n`, `path:k`, complements thereof), falling back to
/// `g6:` text for anything unrecognized.
pub fn describe(g: &SmallGraph) -> String {
    fn base_name(g: &SmallGraph) -> Option<String> {
        let n = g.n;
        let m = g.edge_count();
        if m == n * n.saturating_sub(1) / 2 {
            return Some(format!("clique:{n}"));
        }
        if m == 0 {
            return Some(format!("empty:{n}"));
        }
        if n >= 2 && m == n - 1 && n <= CANON_MAX_VERTICES {
            if let Ok(true) = is_isomorphic(g, &path(n - 1)) {
                return Some(format!("path:{}", n - 1));
            }
        }
        None
    }
    if let Some(name) = base_name(g) {
        return name;
    }
    if let Some(name) = base_name(&complement(g)) {
        return format!("complement:{name}");
    }
    format!("g6:{}", to_graph6(g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_have_expected_edges() {
        assert_eq!(clique(3).edges(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(empty(3).edges(), vec![]);
        assert_eq!(path2().edges(), vec![(0, 1), (1, 2)]);
        assert_eq!(complement(&path2()).edges(), vec![(0, 2)]);
        assert_eq!(clique(0).n(), 0);
    }

    #[test]
    fn edge_validation() {
        assert_eq!(
            SmallGraph::with_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange { v: 2, n: 2 })
        );
        assert_eq!(SmallGraph::with_edges(2, &[(1, 1)]), Err(GraphError::SelfLoop { v: 1 }));
    }

    #[test]
    fn aut_orders() {
        assert_eq!(aut_order(&clique(1)).unwrap(), 1);
        assert_eq!(aut_order(&clique(2)).unwrap(), 2);
        assert_eq!(aut_order(&empty(2)).unwrap(), 2);
        assert_eq!(aut_order(&clique(3)).unwrap(), 6);
        assert_eq!(aut_order(&empty(3)).unwrap(), 6);
        assert_eq!(aut_order(&path2()).unwrap(), 2);
        assert_eq!(aut_order(&complement(&path2())).unwrap(), 2);
        assert_eq!(aut_order(&path(3)).unwrap(), 2);
    }

    #[test]
    fn size_cap_is_enforced() {
        let big = empty(11);
        assert_eq!(aut_order(&big), Err(GraphError::TooLarge { n: 11, max: 10 }));
        assert_eq!(canonical_form(&big), Err(GraphError::TooLarge { n: 11, max: 10 }));
        assert!(is_isomorphic(&big, &empty(11)).is_err());
        // Different sizes are fine as long as both are within the cap.
        assert_eq!(is_isomorphic(&empty(2), &empty(3)).unwrap(), false);
    }

    #[test]
    fn isomorphism_basics() {
        let g = SmallGraph::with_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = SmallGraph::with_edges(3, &[(0, 2), (1, 2)]).unwrap();
        assert!(is_isomorphic(&g, &h).unwrap());
        assert!(!is_isomorphic(&g, &clique(3)).unwrap());
        assert_eq!(canonical_form(&clique(1)).unwrap(), vec![1]);
    }

    #[test]
    fn k4_freeness() {
        assert!(is_k4_free(&clique(3)));
        assert!(!is_k4_free(&clique(4)));
        assert!(!is_k4_free(&clique(5)));
        assert!(is_k4_free(&complement(&clique(4))));
        // K4 plus an isolated vertex, embedded away from position 0.
        let g = SmallGraph::with_edges(
            5,
            &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        assert!(!is_k4_free(&g));
    }

    #[test]
    fn graph6_round_trip() {
        for g in [clique(4), empty(5), path(4), complement(&path(3))] {
            let text = to_graph6(&g);
            let back = from_graph6(&text).unwrap();
            assert_eq!(g, back, "round trip through {text:?}");
        }
        // Known encoding: the 5-cycle is "DUW" in graph6? Spot-check via decode.
        let c5 = from_graph6("DUW").unwrap();
        assert_eq!(c5.n(), 5);
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.edges().iter().all(|&(u, v)| u != v));
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(matches!(from_graph6(""), Err(SpecParseError::BadGraph6 { pos: 0, .. })));
        assert!(matches!(from_graph6("D"), Err(SpecParseError::BadGraph6 { .. })));
        assert!(matches!(from_graph6("~AA"), Err(SpecParseError::BadGraph6 { pos: 0, .. })));
    }

    #[test]
    fn spec_grammar() {
        assert_eq!(parse_spec("clique:3").unwrap(), clique(3));
        assert_eq!(parse_spec("empty:2").unwrap(), empty(2));
        assert_eq!(parse_spec("path:2").unwrap(), path2());
        assert_eq!(parse_spec("complement:path:2").unwrap(), complement(&path2()));
        assert_eq!(parse_spec("complement:complement:clique:3").unwrap(), clique(3));
        let g6 = format!("g6:{}", to_graph6(&path2()));
        assert_eq!(parse_spec(&g6).unwrap(), path2());
    }

    #[test]
    fn spec_grammar_errors_carry_positions() {
        assert!(matches!(
            parse_spec("clique"),
            Err(SpecParseError::UnknownForm { pos: 0, .. })
        ));
        assert!(matches!(
            parse_spec("blob:3"),
            Err(SpecParseError::UnknownForm { pos: 0, .. })
        ));
        assert!(matches!(
            parse_spec("clique:x"),
            Err(SpecParseError::BadCount { pos: 7, .. })
        ));
        assert!(matches!(
            parse_spec("complement:"),
            Err(SpecParseError::MissingArgument { pos: 11, .. })
        ));
        assert!(matches!(
            parse_spec("complement:blob:1"),
            Err(SpecParseError::UnknownForm { pos: 11, .. })
        ));
        assert!(matches!(
            parse_spec("json:/no/such/file.json"),
            Err(SpecParseError::File { .. })
        ));
    }

    #[test]
    fn describe_round_trips_through_parse() {
        for g in [clique(3), empty(4), path2(), complement(&path2()), path(3)] {
            let name = describe(&g);
            let back = parse_spec(&name).unwrap();
            assert!(is_isomorphic(&g, &back).unwrap(), "{name}");
        }
        assert_eq!(describe(&clique(1)), "clique:1");
        assert_eq!(describe(&clique(2)), "clique:2");
        assert_eq!(describe(&empty(2)), "empty:2");
    }
}
