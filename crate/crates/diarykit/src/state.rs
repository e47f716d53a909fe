//! Abstract front state for diary search.
//!
//! A diary is reconstructible from the sequence of events applied to the
//! evolving front, and event legality never inspects the letters of the
//! front words themselves - only which existential predicates they already
//! satisfy. This module therefore replaces the explicit words by bit flags:
//!
//! * per branch: `has1`, `has2`, and the set of already-emitted leaves the
//!   branch sits above (`leaf_adjacency`);
//! * per unordered branch pair: `has11`, `has22`;
//! * per unordered branch triple: `has111`;
//! * the adjacency graph among emitted leaves.
//!
//! All flags are monotone: events only ever turn them on. Branch indices are
//! positional; a split inserts the two children adjacently (preserving tree
//! order) and a leaf removes its branch, shifting later indices down.
//!
//! The state is a small `Copy` value so the search can fan out without
//! allocation. Capacities are fixed at [`MAX_BRANCHES`] live branches and
//! [`MAX_LEAVES`] emitted leaves, far beyond what bounded-leaf searches
//! reach.

use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::graphs::SmallGraph;

/// Maximum number of simultaneously live branches.
pub const MAX_BRANCHES: usize = 8;
/// Maximum number of emitted leaves.
pub const MAX_LEAVES: usize = 16;

/// One diary event, naming participating branches by front index.
/// Multi-branch events keep their indices strictly increasing; the
/// participant sets are unordered in the underlying definition.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub enum EventSpec {
    /// Branch `w` splits: every branch extends by 0, `w` also spawns a
    /// 1-child inserted directly after it.
    Splitting { w: u8 },
    /// Branch `w` (without a 1) receives letter 1.
    New1 { w: u8 },
    /// Branch `w` (with a 1, without a 2) receives letter 2.
    New2 { w: u8 },
    /// Branches `v < w` receive a first shared 1.
    New11 { v: u8, w: u8 },
    /// Branches `v < w` receive a first shared 2.
    New22 { v: u8, w: u8 },
    /// Branches `u < v < w` receive a first triply-shared 1.
    New111 { u: u8, v: u8, w: u8 },
    /// Branch `w` is emitted as a leaf; surviving branches extend by 1
    /// (non-perpendicular to `w`) or 0 (perpendicular).
    Leaf { w: u8 },
}

impl EventSpec {
    /// Branch indices named by the event, in stored order.
    pub fn participants(&self) -> Vec<u8> {
        match *self {
            EventSpec::Splitting { w }
            | EventSpec::New1 { w }
            | EventSpec::New2 { w }
            | EventSpec::Leaf { w } => vec![w],
            EventSpec::New11 { v, w } | EventSpec::New22 { v, w } => vec![v, w],
            EventSpec::New111 { u, v, w } => vec![u, v, w],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("event {event:?} is not legal in this state")]
    IllegalEvent { event: EventSpec },
    #[error("branch index {index} out of range (front has {branch_count} branches)")]
    BadIndex { index: u8, branch_count: u8 },
    #[error("event participants must be distinct, ascending branch indices")]
    BadParticipants,
    #[error("splitting would exceed the capacity of {max} live branches")]
    BranchCapacity { max: usize },
    #[error("leaf emission would exceed the capacity of {max} leaves")]
    LeafCapacity { max: usize },
}

/// Read-only view of one branch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BranchInfo {
    pub has1: bool,
    pub has2: bool,
    /// Indices of emitted leaves this branch sits above (i.e. leaves every
    /// future leaf of this branch will be adjacent to), ascending.
    pub leaf_adjacency: Vec<usize>,
}

/// Rank of the unordered triple `i < j < k` in the combinatorial number
/// system; fits in a u64 bit index for up to 8 branches.
#[inline(always)]
fn triple_bit(i: usize, j: usize, k: usize) -> u64 {
    debug_assert!(i < j && j < k && k < MAX_BRANCHES);
    let c2 = j * (j - 1) / 2;
    let c3 = k * (k - 1) * (k - 2) / 6;
    1u64 << (c3 + c2 + i)
}

/// Abstract state of the front after some number of levels.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct FrontState {
    level: u32,
    branch_count: u8,
    split_count: u8,
    leaf_count: u8,
    has1: u8,
    has2: u8,
    /// Symmetric adjacency rows over branch indices; diagonal stays zero.
    pair11: [u8; MAX_BRANCHES],
    pair22: [u8; MAX_BRANCHES],
    /// Bit per unordered branch triple, see [`triple_bit`].
    triple111: u64,
    /// Per branch, mask over emitted leaf indices.
    leaf_adj: [u16; MAX_BRANCHES],
    /// Per emitted leaf, mask over strictly earlier leaf indices.
    leaf_graph: [u16; MAX_LEAVES],
}

impl FrontState {
    /// The state of the singleton front `{empty word}` at level 0.
    pub fn initial() -> FrontState {
        FrontState {
            level: 0,
            branch_count: 1,
            split_count: 0,
            leaf_count: 0,
            has1: 0,
            has2: 0,
            pair11: [0; MAX_BRANCHES],
            pair22: [0; MAX_BRANCHES],
            triple111: 0,
            leaf_adj: [0; MAX_BRANCHES],
            leaf_graph: [0; MAX_LEAVES],
        }
    }

    pub fn level(&self) -> usize {
        self.level as usize
    }

    pub fn branch_count(&self) -> usize {
        self.branch_count as usize
    }

    pub fn split_count(&self) -> usize {
        self.split_count as usize
    }

    pub fn leaf_count(&self) -> usize {
        self.leaf_count as usize
    }

    #[inline(always)]
    fn check(&self, i: usize) {
        assert!(i < self.branch_count(), "branch index {i} out of range");
    }

    pub fn has1(&self, i: usize) -> bool {
        self.check(i);
        (self.has1 >> i) & 1 == 1
    }

    pub fn has2(&self, i: usize) -> bool {
        self.check(i);
        (self.has2 >> i) & 1 == 1
    }

    pub fn has11(&self, i: usize, j: usize) -> bool {
        self.check(i);
        self.check(j);
        assert!(i != j, "pair flags need distinct branches");
        (self.pair11[i] >> j) & 1 == 1
    }

    pub fn has22(&self, i: usize, j: usize) -> bool {
        self.check(i);
        self.check(j);
        assert!(i != j, "pair flags need distinct branches");
        (self.pair22[i] >> j) & 1 == 1
    }

    pub fn has111(&self, i: usize, j: usize, k: usize) -> bool {
        self.check(i);
        self.check(j);
        self.check(k);
        let (a, b, c) = sort3(i, j, k);
        assert!(a < b && b < c, "triple flags need distinct branches");
        self.triple111 & triple_bit(a, b, c) != 0
    }

    /// Perpendicularity on flags: branches that can never again share a
    /// first 1 (one of them has no 1, or they already share a 2).
    pub fn perp(&self, i: usize, j: usize) -> bool {
        !self.has1(i) || !self.has1(j) || self.has22(i, j)
    }

    pub fn branch(&self, i: usize) -> BranchInfo {
        self.check(i);
        BranchInfo {
            has1: self.has1(i),
            has2: self.has2(i),
            leaf_adjacency: mask_indices(self.leaf_adj[i]),
        }
    }

    /// Mask over emitted leaves the branch sits above.
    pub fn leaf_adjacency_mask(&self, i: usize) -> u16 {
        self.check(i);
        self.leaf_adj[i]
    }

    /// Adjacency mask of emitted leaf `j` over earlier leaves.
    pub fn leaf_row(&self, j: usize) -> u16 {
        assert!(j < self.leaf_count(), "leaf index {j} out of range");
        self.leaf_graph[j]
    }

    /// The graph among emitted leaves, vertices in emission order.
    pub fn leaf_graph(&self) -> SmallGraph {
        let n = self.leaf_count();
        let mut g = SmallGraph::new(n);
        for j in 0..n {
            for i in mask_indices(self.leaf_graph[j]) {
                g.add_edge(i, j).expect("leaf rows index earlier leaves");
            }
        }
        g
    }

    // ===== Event legality =====

    /// The non-perpendicular companions of `w` (the branches that would
    /// extend by 1 if `w` were emitted now).
    fn companions(&self, w: usize) -> u8 {
        let mut mask = 0u8;
        for z in 0..self.branch_count() {
            if z != w && self.has1(z) && self.has1(w) && !self.has22(z, w) {
                mask |= 1 << z;
            }
        }
        mask
    }

    fn leaf_conditions_hold(&self, w: usize) -> bool {
        if !self.has2(w) {
            return false;
        }
        let p: Vec<usize> = mask_indices_u8(self.companions(w));
        // (a) no new 11: all companion pairs already share a 1.
        for (ai, &u) in p.iter().enumerate() {
            for &v in &p[ai + 1..] {
                if !self.has11(u, v) {
                    return false;
                }
            }
        }
        // (b) no new 111: pairwise non-perpendicular companion triples
        // already share a triple 1.
        for (ai, &u) in p.iter().enumerate() {
            for (bi, &v) in p.iter().enumerate().skip(ai + 1) {
                for &x in &p[bi + 1..] {
                    let pairwise_nonperp =
                        !self.has22(u, v) && !self.has22(v, x) && !self.has22(u, x);
                    if pairwise_nonperp && !self.has111(u, v, x) {
                        return false;
                    }
                }
            }
        }
        // (c) no new 2: a companion above a shared leaf with w must already
        // have a 2.
        for &u in &p {
            if self.leaf_adj[w] & self.leaf_adj[u] != 0 && !self.has2(u) {
                return false;
            }
        }
        // (d) no new 22: companions sharing a triple 1 with w, or sitting
        // above a common leaf with w, must already share a 2.
        for (ai, &u) in p.iter().enumerate() {
            for &v in &p[ai + 1..] {
                if self.has111(u, v, w) && !self.has22(u, v) {
                    return false;
                }
                if self.leaf_adj[w] & self.leaf_adj[u] & self.leaf_adj[v] != 0
                    && !self.has22(u, v)
                {
                    return false;
                }
            }
        }
        true
    }

    fn new22_side_condition(&self, v: usize, w: usize) -> bool {
        // A first shared 2 may only appear when every branch already joined
        // to both by shared 1s has a triple 1 with them.
        (0..self.branch_count()).all(|u| {
            u == v
                || u == w
                || !(self.has11(u, v) && self.has11(u, w))
                || self.has111(u, v, w)
        })
    }

    /// Checks `event` against the seven clause preconditions.
    pub fn is_legal(&self, event: EventSpec) -> bool {
        let b = self.branch_count();
        let ok = |i: u8| (i as usize) < b;
        match event {
            EventSpec::Splitting { w } => ok(w),
            EventSpec::New1 { w } => ok(w) && !self.has1(w as usize),
            EventSpec::New2 { w } => {
                ok(w) && self.has1(w as usize) && !self.has2(w as usize)
            }
            EventSpec::New11 { v, w } => {
                v < w
                    && ok(w)
                    && self.has1(v as usize)
                    && self.has1(w as usize)
                    && !self.has11(v as usize, w as usize)
            }
            EventSpec::New22 { v, w } => {
                v < w
                    && ok(w)
                    && self.has2(v as usize)
                    && self.has2(w as usize)
                    && self.has11(v as usize, w as usize)
                    && !self.has22(v as usize, w as usize)
                    && self.new22_side_condition(v as usize, w as usize)
            }
            EventSpec::New111 { u, v, w } => {
                u < v
                    && v < w
                    && ok(w)
                    && self.has11(u as usize, v as usize)
                    && self.has11(u as usize, w as usize)
                    && self.has11(v as usize, w as usize)
                    && !self.has22(u as usize, v as usize)
                    && !self.has22(u as usize, w as usize)
                    && !self.has22(v as usize, w as usize)
                    && !self.has111(u as usize, v as usize, w as usize)
            }
            EventSpec::Leaf { w } => ok(w) && self.leaf_conditions_hold(w as usize),
        }
    }

    /// Every event legal in this state, in a fixed deterministic order
    /// (splits, then the five flag events, then leaves, each by ascending
    /// participant indices).
    pub fn legal_events(&self) -> Vec<EventSpec> {
        let b = self.branch_count();
        let mut out = Vec::new();
        for w in 0..b as u8 {
            out.push(EventSpec::Splitting { w });
        }
        for w in 0..b as u8 {
            if !self.has1(w as usize) {
                out.push(EventSpec::New1 { w });
            }
        }
        for w in 0..b as u8 {
            if self.has1(w as usize) && !self.has2(w as usize) {
                out.push(EventSpec::New2 { w });
            }
        }
        for v in 0..b as u8 {
            for w in (v + 1)..b as u8 {
                let e = EventSpec::New11 { v, w };
                if self.is_legal(e) {
                    out.push(e);
                }
            }
        }
        for v in 0..b as u8 {
            for w in (v + 1)..b as u8 {
                let e = EventSpec::New22 { v, w };
                if self.is_legal(e) {
                    out.push(e);
                }
            }
        }
        for u in 0..b as u8 {
            for v in (u + 1)..b as u8 {
                for w in (v + 1)..b as u8 {
                    let e = EventSpec::New111 { u, v, w };
                    if self.is_legal(e) {
                        out.push(e);
                    }
                }
            }
        }
        for w in 0..b as u8 {
            let e = EventSpec::Leaf { w };
            if self.is_legal(e) {
                out.push(e);
            }
        }
        out
    }

    // ===== Event application =====

    /// Applies a legal event, producing the state one level deeper.
    pub fn apply(&self, event: EventSpec) -> Result<FrontState, StateError> {
        let b = self.branch_count();
        for &i in event.participants().iter() {
            if i as usize >= b {
                return Err(StateError::BadIndex { index: i, branch_count: b as u8 });
            }
        }
        let ascending = event.participants().windows(2).all(|p| p[0] < p[1]);
        if !ascending {
            return Err(StateError::BadParticipants);
        }
        if !self.is_legal(event) {
            return Err(StateError::IllegalEvent { event });
        }
        match event {
            EventSpec::Splitting { w } => {
                if b + 1 > MAX_BRANCHES {
                    return Err(StateError::BranchCapacity { max: MAX_BRANCHES });
                }
                Ok(self.apply_split(w as usize))
            }
            EventSpec::New1 { w } => {
                let mut s = self.bump();
                s.has1 |= 1 << w;
                Ok(s)
            }
            EventSpec::New2 { w } => {
                let mut s = self.bump();
                s.has2 |= 1 << w;
                Ok(s)
            }
            EventSpec::New11 { v, w } => {
                let mut s = self.bump();
                s.set_pair11(v as usize, w as usize);
                Ok(s)
            }
            EventSpec::New22 { v, w } => {
                let mut s = self.bump();
                s.set_pair22(v as usize, w as usize);
                Ok(s)
            }
            EventSpec::New111 { u, v, w } => {
                let mut s = self.bump();
                s.triple111 |= triple_bit(u as usize, v as usize, w as usize);
                Ok(s)
            }
            EventSpec::Leaf { w } => {
                if self.leaf_count() + 1 > MAX_LEAVES {
                    return Err(StateError::LeafCapacity { max: MAX_LEAVES });
                }
                Ok(self.apply_leaf(w as usize))
            }
        }
    }

    fn bump(&self) -> FrontState {
        let mut s = *self;
        s.level += 1;
        s
    }

    fn set_pair11(&mut self, i: usize, j: usize) {
        self.pair11[i] |= 1 << j;
        self.pair11[j] |= 1 << i;
    }

    fn set_pair22(&mut self, i: usize, j: usize) {
        self.pair22[i] |= 1 << j;
        self.pair22[j] |= 1 << i;
    }

    fn apply_split(&self, p: usize) -> FrontState {
        let ob = self.branch_count();
        let nb = ob + 1;
        // New index -> old index: the children of p sit at p and p + 1.
        let old_of = |ni: usize| -> usize {
            if ni <= p {
                ni
            } else if ni == p + 1 {
                p
            } else {
                ni - 1
            }
        };
        let mut s = FrontState {
            level: self.level + 1,
            branch_count: nb as u8,
            split_count: self.split_count + 1,
            leaf_count: self.leaf_count,
            has1: 0,
            has2: 0,
            pair11: [0; MAX_BRANCHES],
            pair22: [0; MAX_BRANCHES],
            triple111: 0,
            leaf_adj: [0; MAX_BRANCHES],
            leaf_graph: self.leaf_graph,
        };
        for ni in 0..nb {
            let oi = old_of(ni);
            if (self.has1 >> oi) & 1 == 1 {
                s.has1 |= 1 << ni;
            }
            if (self.has2 >> oi) & 1 == 1 {
                s.has2 |= 1 << ni;
            }
            s.leaf_adj[ni] = self.leaf_adj[oi];
        }
        // The 1-child records its fresh letter 1.
        s.has1 |= 1 << (p + 1);
        for ni in 0..nb {
            for nj in (ni + 1)..nb {
                let (oi, oj) = (old_of(ni), old_of(nj));
                if oi == oj {
                    // The twin pair inherits w's own history: a shared 1
                    // iff w had a 1, a shared 2 iff w had a 2.
                    if (self.has1 >> p) & 1 == 1 {
                        s.set_pair11(ni, nj);
                    }
                    if (self.has2 >> p) & 1 == 1 {
                        s.set_pair22(ni, nj);
                    }
                } else {
                    if (self.pair11[oi] >> oj) & 1 == 1 {
                        s.set_pair11(ni, nj);
                    }
                    if (self.pair22[oi] >> oj) & 1 == 1 {
                        s.set_pair22(ni, nj);
                    }
                }
            }
        }
        for ni in 0..nb {
            for nj in (ni + 1)..nb {
                for nk in (nj + 1)..nb {
                    let (oi, oj, ok) = (old_of(ni), old_of(nj), old_of(nk));
                    let set = if oi == oj || oj == ok {
                        // Twin pair plus one other branch u: a common triple
                        // 1 below the split is exactly a shared 1 of w and u.
                        let u = if oi == oj { ok } else { oi };
                        (self.pair11[p] >> u) & 1 == 1
                    } else {
                        self.triple111 & triple_bit(oi, oj, ok) != 0
                    };
                    if set {
                        s.triple111 |= triple_bit(ni, nj, nk);
                    }
                }
            }
        }
        s
    }

    fn apply_leaf(&self, w: usize) -> FrontState {
        let ob = self.branch_count();
        let nb = ob - 1;
        let companions = self.companions(w);
        let leaf_index = self.leaf_count();
        // Old index -> new index (skipping w).
        let new_of = |oi: usize| -> usize { if oi < w { oi } else { oi - 1 } };
        let mut s = FrontState {
            level: self.level + 1,
            branch_count: nb as u8,
            split_count: self.split_count,
            leaf_count: self.leaf_count + 1,
            has1: 0,
            has2: 0,
            pair11: [0; MAX_BRANCHES],
            pair22: [0; MAX_BRANCHES],
            triple111: 0,
            leaf_adj: [0; MAX_BRANCHES],
            leaf_graph: self.leaf_graph,
        };
        // The new leaf is adjacent to exactly the earlier leaves w sat above.
        s.leaf_graph[leaf_index] = self.leaf_adj[w];
        let is_comp = |oi: usize| (companions >> oi) & 1 == 1;
        for oi in 0..ob {
            if oi == w {
                continue;
            }
            let ni = new_of(oi);
            if (self.has1 >> oi) & 1 == 1 {
                s.has1 |= 1 << ni;
            }
            if (self.has2 >> oi) & 1 == 1 {
                s.has2 |= 1 << ni;
            }
            s.leaf_adj[ni] = self.leaf_adj[oi];
            if is_comp(oi) {
                // This branch extends by 1, so its future leaves are
                // adjacent to the leaf emitted now.
                s.leaf_adj[ni] |= 1 << leaf_index;
            }
        }
        for oi in 0..ob {
            if oi == w {
                continue;
            }
            for oj in (oi + 1)..ob {
                if oj == w {
                    continue;
                }
                // Companions all receive letter 1 at this level; by leaf
                // condition (a) their pair flags are already set, so this
                // only rewrites existing bits.
                if (self.pair11[oi] >> oj) & 1 == 1 || (is_comp(oi) && is_comp(oj)) {
                    s.set_pair11(new_of(oi), new_of(oj));
                }
                if (self.pair22[oi] >> oj) & 1 == 1 {
                    s.set_pair22(new_of(oi), new_of(oj));
                }
            }
        }
        for oi in 0..ob {
            if oi == w {
                continue;
            }
            for oj in (oi + 1)..ob {
                if oj == w {
                    continue;
                }
                for ok in (oj + 1)..ob {
                    if ok == w {
                        continue;
                    }
                    // Triples wholly inside the companion set gain a shared
                    // 1 at this level. Leaf condition (b) only covers the
                    // pairwise non-perpendicular ones, so triples containing
                    // a perpendicular pair can genuinely flip here.
                    let old = self.triple111 & triple_bit(oi, oj, ok) != 0;
                    if old || (is_comp(oi) && is_comp(oj) && is_comp(ok)) {
                        s.triple111 |= triple_bit(new_of(oi), new_of(oj), new_of(ok));
                    }
                }
            }
        }
        s
    }

    /// Diagnostic JSON dump with all flag matrices spelled out.
    pub fn debug_dump(&self) -> serde_json::Value {
        let b = self.branch_count();
        let branches: Vec<BranchInfo> = (0..b).map(|i| self.branch(i)).collect();
        let matrix = |rows: &[u8; MAX_BRANCHES]| -> Vec<Vec<bool>> {
            (0..b)
                .map(|i| (0..b).map(|j| (rows[i] >> j) & 1 == 1).collect())
                .collect()
        };
        let mut triples = Vec::new();
        for i in 0..b {
            for j in (i + 1)..b {
                for k in (j + 1)..b {
                    if self.has111(i, j, k) {
                        triples.push(vec![i, j, k]);
                    }
                }
            }
        }
        let leaf_graph = self.leaf_graph();
        json!({
            "level": self.level,
            "split_count": self.split_count,
            "branches": branches,
            "pair11": matrix(&self.pair11),
            "pair22": matrix(&self.pair22),
            "triple111": triples,
            "leaf_graph": {
                "n": leaf_graph.n(),
                "edges": leaf_graph.edges(),
            },
        })
    }
}

fn sort3(i: usize, j: usize, k: usize) -> (usize, usize, usize) {
    let mut v = [i, j, k];
    v.sort_unstable();
    (v[0], v[1], v[2])
}

fn mask_indices(mask: u16) -> Vec<usize> {
    (0..16).filter(|i| (mask >> i) & 1 == 1).collect()
}

fn mask_indices_u8(mask: u8) -> Vec<usize> {
    (0..8).filter(|i| (mask >> i) & 1 == 1).collect()
}
