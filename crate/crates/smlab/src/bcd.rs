//! Bipartite chord diagrams and their dispersion.
//!
//! A diagram is stored purely combinatorially: a counterclockwise cyclic
//! sequence of endpoint tokens in which every chord appears exactly twice
//! and same-class chords never interleave. Nodes are T-Q crossings. For an
//! ordered pair of nodes on a Q-chord, orienting the chord from the first
//! to the second node induces a left direction on every T-chord crossing
//! it; the pair is good when the two left neighbors land on one Q-chord or
//! both on the boundary, bad otherwise. Dispersion is the weighted count
//! of bad pairs.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BcdError {
    #[error("line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
    #[error("chord {0} appears {1} times, expected exactly 2")]
    BadMultiplicity(String, usize),
    #[error("chords {0} and {1} of the same class interleave")]
    SameClassCrossing(String, String),
    #[error("unknown chord {0}")]
    UnknownChord(String),
    #[error("expected a {0}-class chord")]
    WrongClass(char),
    #[error("nodes lie on different Q-chords")]
    DifferentQChords,
    #[error("invalid weight profile")]
    BadProfile,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum ChordClass {
    T,
    Q,
}

/// A chord handle: class plus 0-based index within the class.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Chord {
    pub class: ChordClass,
    pub index: usize,
}

impl Chord {
    pub fn t(index: usize) -> Chord {
        Chord {
            class: ChordClass::T,
            index,
        }
    }

    pub fn q(index: usize) -> Chord {
        Chord {
            class: ChordClass::Q,
            index,
        }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.class {
            ChordClass::T => write!(f, "T{}", self.index + 1),
            ChordClass::Q => write!(f, "Q{}", self.index + 1),
        }
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A crossing of a T-chord and a Q-chord.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Node {
    pub t: usize,
    pub q: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairClass {
    Good,
    Bad,
}

/// Weight profile: alpha_1 <= .. <= alpha_K = 1. The default ramp is
/// (1/K, 2/K, .., 1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightProfile {
    pub alpha: Vec<Rational64>,
}

impl WeightProfile {
    pub fn ramp(k: u32) -> WeightProfile {
        let k = k.max(1) as i64;
        WeightProfile {
            alpha: (1..=k).map(|l| Rational64::new(l, k)).collect(),
        }
    }

    pub fn new(alpha: Vec<Rational64>) -> Result<WeightProfile, BcdError> {
        if alpha.is_empty()
            || *alpha.last().unwrap() != Rational64::from_integer(1)
            || alpha[0] <= Rational64::zero()
            || alpha.windows(2).any(|w| w[0] > w[1])
        {
            return Err(BcdError::BadProfile);
        }
        Ok(WeightProfile { alpha })
    }

    pub fn k(&self) -> usize {
        self.alpha.len()
    }

    fn weight(&self, nodes_to_left_inclusive: usize) -> Rational64 {
        let l = nodes_to_left_inclusive.min(self.k());
        self.alpha[l - 1]
    }
}

#[derive(Clone)]
pub struct Bcd {
    boundary: Vec<Chord>,
    t_labels: Vec<String>,
    q_labels: Vec<String>,
    t_pos: Vec<(usize, usize)>,
    q_pos: Vec<(usize, usize)>,
}

/// Structural equality: the boundary label sequences coincide. Internal
/// chord indices depend on construction order and are not part of the
/// diagram's identity.
impl PartialEq for Bcd {
    fn eq(&self, other: &Bcd) -> bool {
        self.boundary.len() == other.boundary.len()
            && self
                .boundary
                .iter()
                .zip(other.boundary.iter())
                .all(|(a, b)| self.label(*a) == other.label(*b))
    }
}

impl Eq for Bcd {}

impl fmt::Debug for Bcd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Bcd[")?;
        for (i, c) in self.boundary.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.label(*c))?;
        }
        write!(f, "]")
    }
}

impl Bcd {
    /// Builds and validates a diagram from its boundary tokens. Labels
    /// default to T1..Tr / Q1..Qq in order of first appearance.
    pub fn from_boundary(tokens: Vec<Chord>) -> Result<Bcd, BcdError> {
        let t_count = tokens
            .iter()
            .filter(|c| c.class == ChordClass::T)
            .map(|c| c.index + 1)
            .max()
            .unwrap_or(0);
        let q_count = tokens
            .iter()
            .filter(|c| c.class == ChordClass::Q)
            .map(|c| c.index + 1)
            .max()
            .unwrap_or(0);
        let t_labels = (1..=t_count).map(|i| format!("T{i}")).collect();
        let q_labels = (1..=q_count).map(|i| format!("Q{i}")).collect();
        Bcd::with_labels(tokens, t_labels, q_labels)
    }

    fn with_labels(
        tokens: Vec<Chord>,
        t_labels: Vec<String>,
        q_labels: Vec<String>,
    ) -> Result<Bcd, BcdError> {
        let mut t_seen: Vec<Vec<usize>> = vec![Vec::new(); t_labels.len()];
        let mut q_seen: Vec<Vec<usize>> = vec![Vec::new(); q_labels.len()];
        for (pos, c) in tokens.iter().enumerate() {
            let store = match c.class {
                ChordClass::T => &mut t_seen,
                ChordClass::Q => &mut q_seen,
            };
            if c.index >= store.len() {
                return Err(BcdError::UnknownChord(c.to_string()));
            }
            store[c.index].push(pos);
        }
        let mut t_pos = Vec::with_capacity(t_seen.len());
        for (i, positions) in t_seen.iter().enumerate() {
            if positions.len() != 2 {
                return Err(BcdError::BadMultiplicity(
                    t_labels[i].clone(),
                    positions.len(),
                ));
            }
            t_pos.push((positions[0], positions[1]));
        }
        let mut q_pos = Vec::with_capacity(q_seen.len());
        for (i, positions) in q_seen.iter().enumerate() {
            if positions.len() != 2 {
                return Err(BcdError::BadMultiplicity(
                    q_labels[i].clone(),
                    positions.len(),
                ));
            }
            q_pos.push((positions[0], positions[1]));
        }
        let bcd = Bcd {
            boundary: tokens,
            t_labels,
            q_labels,
            t_pos,
            q_pos,
        };
        // same-class chords must be noncrossing: linear parenthesis
        // matching per class detects any interleaving pair
        for class in [ChordClass::T, ChordClass::Q] {
            let mut stack: Vec<Chord> = Vec::new();
            let mut open: HashMap<usize, bool> = HashMap::new();
            for c in bcd.boundary.iter().filter(|c| c.class == class) {
                if *open.get(&c.index).unwrap_or(&false) {
                    match stack.pop() {
                        Some(top) if top.index == c.index => {}
                        Some(top) => {
                            return Err(BcdError::SameClassCrossing(
                                bcd.label(top).to_owned(),
                                bcd.label(*c).to_owned(),
                            ))
                        }
                        None => unreachable!("multiplicity checked above"),
                    }
                } else {
                    open.insert(c.index, true);
                    stack.push(*c);
                }
            }
        }
        Ok(bcd)
    }

    pub fn t_count(&self) -> usize {
        self.t_pos.len()
    }

    pub fn q_count(&self) -> usize {
        self.q_pos.len()
    }

    pub fn boundary(&self) -> &[Chord] {
        &self.boundary
    }

    pub fn label(&self, c: Chord) -> &str {
        match c.class {
            ChordClass::T => &self.t_labels[c.index],
            ChordClass::Q => &self.q_labels[c.index],
        }
    }

    /// Looks a chord up by its label, e.g. `"Q3"`.
    pub fn chord_by_label(&self, label: &str) -> Option<Chord> {
        if let Some(i) = self.t_labels.iter().position(|l| l == label) {
            return Some(Chord::t(i));
        }
        self.q_labels
            .iter()
            .position(|l| l == label)
            .map(Chord::q)
    }

    /// Node of the T- and Q-chords with the given labels, when they cross.
    pub fn node_by_labels(&self, t_label: &str, q_label: &str) -> Option<Node> {
        let t = self.chord_by_label(t_label)?;
        let q = self.chord_by_label(q_label)?;
        if t.class != ChordClass::T || q.class != ChordClass::Q {
            return None;
        }
        if self.crosses(t, q).ok()? {
            Some(Node {
                t: t.index,
                q: q.index,
            })
        } else {
            None
        }
    }

    fn positions(&self, c: Chord) -> Result<(usize, usize), BcdError> {
        match c.class {
            ChordClass::T => self.t_pos.get(c.index).copied(),
            ChordClass::Q => self.q_pos.get(c.index).copied(),
        }
        .ok_or_else(|| BcdError::UnknownChord(c.to_string()))
    }

    /// True iff the endpoints of the two chords interleave on the cyclic
    /// boundary.
    pub fn crosses(&self, c1: Chord, c2: Chord) -> Result<bool, BcdError> {
        let (a1, a2) = self.positions(c1)?;
        let (b1, b2) = self.positions(c2)?;
        Ok((a1 < b1 && b1 < a2 && a2 < b2) || (b1 < a1 && a1 < b2 && b2 < a2))
    }

    /// Crossings of `c` in the order they occur along the chord starting
    /// at the given endpoint (0 = the endpoint at the smaller boundary
    /// position). Same-class chords never cross, so the crossing order
    /// equals the boundary order of the crossing chords' endpoints on the
    /// arc from the start endpoint to the other one.
    pub fn nodes_on(&self, c: Chord, from_endpoint: u8) -> Result<Vec<Node>, BcdError> {
        let (p1, p2) = self.positions(c)?;
        let (start, end) = if from_endpoint == 0 { (p1, p2) } else { (p2, p1) };
        let n = self.boundary.len();
        let mut nodes = Vec::new();
        let mut pos = (start + 1) % n;
        while pos != end {
            let other = self.boundary[pos];
            if other.class != c.class && self.crosses(c, other)? {
                // a crossing chord has exactly one endpoint on this arc
                let node = match c.class {
                    ChordClass::T => Node {
                        t: c.index,
                        q: other.index,
                    },
                    ChordClass::Q => Node {
                        t: other.index,
                        q: c.index,
                    },
                };
                nodes.push(node);
            }
            pos = (pos + 1) % n;
        }
        Ok(nodes)
    }

    fn in_open_arc(&self, p: usize, from: usize, to: usize) -> bool {
        let n = self.boundary.len();
        p != from && p != to && (p + n - from) % n < (to + n - from) % n
    }

    /// Precomputed node orders: for each T-chord the node list from its
    /// endpoint 0, with index maps.
    fn node_index(&self) -> Result<NodeIndex, BcdError> {
        let mut t_order = Vec::with_capacity(self.t_count());
        let mut t_rank: HashMap<Node, usize> = HashMap::new();
        for t in 0..self.t_count() {
            let order = self.nodes_on(Chord::t(t), 0)?;
            for (i, node) in order.iter().enumerate() {
                t_rank.insert(*node, i);
            }
            t_order.push(order);
        }
        let mut q_order = Vec::with_capacity(self.q_count());
        for q in 0..self.q_count() {
            q_order.push(self.nodes_on(Chord::q(q), 0)?);
        }
        Ok(NodeIndex {
            t_order,
            t_rank,
            q_order,
        })
    }

    /// Left neighbor data of a node for a directed Q-chord whose left arc
    /// is the open counterclockwise arc (head_pos, tail_pos).
    fn left_neighbor(
        &self,
        idx: &NodeIndex,
        node: Node,
        head_pos: usize,
        tail_pos: usize,
    ) -> (Option<Node>, usize) {
        let (e0, e1) = self.t_pos[node.t];
        let rank = idx.t_rank[&node];
        let order = &idx.t_order[node.t];
        let left_is_e0 = self.in_open_arc(e0, head_pos, tail_pos);
        debug_assert!(left_is_e0 || self.in_open_arc(e1, head_pos, tail_pos));
        if left_is_e0 {
            // walking from endpoint 0; nodes to the left = smaller ranks
            let neighbor = if rank == 0 { None } else { Some(order[rank - 1]) };
            (neighbor, rank + 1)
        } else {
            let neighbor = if rank + 1 == order.len() {
                None
            } else {
                Some(order[rank + 1])
            };
            (neighbor, order.len() - rank)
        }
    }

    fn pair_geometry(
        &self,
        idx: &NodeIndex,
        o1: Node,
        o2: Node,
    ) -> Result<((Option<Node>, usize), (Option<Node>, usize)), BcdError> {
        if o1.q != o2.q || o1 == o2 {
            return Err(BcdError::DifferentQChords);
        }
        let order = &idx.q_order[o1.q];
        let i1 = order.iter().position(|n| *n == o1);
        let i2 = order.iter().position(|n| *n == o2);
        let (i1, i2) = match (i1, i2) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(BcdError::DifferentQChords),
        };
        let (p0, p1) = self.q_pos[o1.q];
        // order lists nodes from endpoint 0; o1 before o2 means the
        // direction o1 -> o2 points at endpoint 1
        let (head, tail) = if i1 < i2 { (p1, p0) } else { (p0, p1) };
        Ok((
            self.left_neighbor(idx, o1, head, tail),
            self.left_neighbor(idx, o2, head, tail),
        ))
    }

    fn classify(&self, n1: Option<Node>, n2: Option<Node>) -> PairClass {
        match (n1, n2) {
            (None, None) => PairClass::Good,
            (Some(a), Some(b)) if a.q == b.q => PairClass::Good,
            _ => PairClass::Bad,
        }
    }

    /// Classifies an ordered pair of nodes on one Q-chord.
    pub fn classify_pair(&self, o1: Node, o2: Node) -> Result<PairClass, BcdError> {
        let idx = self.node_index()?;
        let ((n1, _), (n2, _)) = self.pair_geometry(&idx, o1, o2)?;
        Ok(self.classify(n1, n2))
    }

    /// Weight of a node in the direction induced by the ordered pair
    /// containing it: alpha_min(K, nodes to the left including itself).
    pub fn node_weight(
        &self,
        o1: Node,
        o2: Node,
        profile: &WeightProfile,
    ) -> Result<(Rational64, Rational64), BcdError> {
        let idx = self.node_index()?;
        let ((_, l1), (_, l2)) = self.pair_geometry(&idx, o1, o2)?;
        Ok((profile.weight(l1), profile.weight(l2)))
    }

    /// The alpha-dispersion: over every Q-chord and every ordered pair of
    /// its nodes, bad pairs contribute the product of the two node weights
    /// taken in the pair direction.
    pub fn dispersion(&self, profile: &WeightProfile) -> Result<Rational64, BcdError> {
        let idx = self.node_index()?;
        let mut total = Rational64::zero();
        for q in 0..self.q_count() {
            let order = idx.q_order[q].clone();
            let m = order.len();
            let (p0, p1) = self.q_pos[q];
            for i1 in 0..m {
                for i2 in 0..m {
                    if i1 == i2 {
                        continue;
                    }
                    let (head, tail) = if i1 < i2 { (p1, p0) } else { (p0, p1) };
                    let (n1, l1) = self.left_neighbor(&idx, order[i1], head, tail);
                    let (n2, l2) = self.left_neighbor(&idx, order[i2], head, tail);
                    if self.classify(n1, n2) == PairClass::Bad {
                        total += profile.weight(l1) * profile.weight(l2);
                    }
                }
            }
        }
        Ok(total)
    }

    /// Number of bad ordered pairs (the dispersion at K = 1).
    pub fn bad_pair_count(&self) -> Result<u64, BcdError> {
        let d = self.dispersion(&WeightProfile::ramp(1))?;
        Ok(*d.numer() as u64)
    }

    /// Removes both endpoints of a chord; remaining chords of that class
    /// shift down to stay densely indexed, labels follow.
    pub fn delete_chord(&self, c: Chord) -> Result<Bcd, BcdError> {
        self.positions(c)?;
        let tokens: Vec<Chord> = self
            .boundary
            .iter()
            .filter(|x| **x != c)
            .map(|x| {
                if x.class == c.class && x.index > c.index {
                    Chord {
                        class: x.class,
                        index: x.index - 1,
                    }
                } else {
                    *x
                }
            })
            .collect();
        let strip = |labels: &[String]| {
            labels
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != c.index)
                .map(|(_, l)| l.clone())
                .collect::<Vec<_>>()
        };
        let (t_labels, q_labels) = match c.class {
            ChordClass::T => (strip(&self.t_labels), self.q_labels.clone()),
            ChordClass::Q => (self.t_labels.clone(), strip(&self.q_labels)),
        };
        Bcd::with_labels(tokens, t_labels, q_labels)
    }

    /// True iff every chord crossing `c_prime` also crosses `c` (both
    /// Q-chords).
    pub fn is_close(&self, c_prime: Chord, c: Chord) -> Result<bool, BcdError> {
        if c_prime.class != ChordClass::Q || c.class != ChordClass::Q {
            return Err(BcdError::WrongClass('Q'));
        }
        self.positions(c_prime)?;
        self.positions(c)?;
        for t in 0..self.t_count() {
            if self.crosses(Chord::t(t), c_prime)? && !self.crosses(Chord::t(t), c)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True iff the crossing point of chords `x` and `y` (which must
    /// cross) lies in the closed half-disc cut off by Q-chord `c` whose
    /// boundary arc runs counterclockwise from `arc_from` to `arc_to`
    /// (the endpoints of `c`).
    fn crossing_in_half_disc(
        &self,
        x: Chord,
        y: Chord,
        c: Chord,
        arc_from: usize,
        arc_to: usize,
    ) -> Result<bool, BcdError> {
        let inside = |ch: Chord| -> Result<(bool, bool), BcdError> {
            let (p, q) = self.positions(ch)?;
            Ok((
                self.in_open_arc(p, arc_from, arc_to),
                self.in_open_arc(q, arc_from, arc_to),
            ))
        };
        let (x1, x2) = inside(x)?;
        let (y1, y2) = inside(y)?;
        let x_in = x1 && x2;
        let y_in = y1 && y2;
        let x_crosses_c = self.crosses(x, c)?;
        let y_crosses_c = self.crosses(y, c)?;
        if x_in && y_in {
            return Ok(true);
        }
        if x_in && y_crosses_c {
            return Ok(true);
        }
        if y_in && x_crosses_c {
            return Ok(true);
        }
        if x_crosses_c && y_crosses_c {
            // both truncated at c: compare in the sub-disc boundary made of
            // the arc followed by the nodes on c walked back from arc_to
            let n = self.boundary.len();
            let on_c = self.nodes_on(
                c,
                if self.positions(c)?.0 == arc_to { 0 } else { 1 },
            )?;
            let rank_of = |ch: Chord| -> Result<(usize, usize), BcdError> {
                let (p, q) = self.positions(ch)?;
                let arc_rank = if self.in_open_arc(p, arc_from, arc_to) {
                    (p + n - arc_from) % n
                } else {
                    (q + n - arc_from) % n
                };
                let node = match (ch.class, c.class) {
                    (ChordClass::T, ChordClass::Q) => Node {
                        t: ch.index,
                        q: c.index,
                    },
                    (ChordClass::Q, ChordClass::Q) => {
                        return Err(BcdError::WrongClass('T'));
                    }
                    _ => Node {
                        t: c.index,
                        q: ch.index,
                    },
                };
                let node_rank = on_c
                    .iter()
                    .position(|m| *m == node)
                    .expect("chord crosses c");
                Ok((arc_rank, n + node_rank))
            };
            let (xa, xb) = rank_of(x)?;
            let (ya, yb) = rank_of(y)?;
            let (xa, xb) = (xa.min(xb), xa.max(xb));
            return Ok((xa < ya && ya < xb) != (xa < yb && yb < xb));
        }
        Ok(false)
    }

    /// Count of nodes in the closed half-disc of `c` (arc given by its
    /// endpoints) lying on T-chord `t`.
    fn half_disc_nodes_on_t(
        &self,
        t: usize,
        c: Chord,
        arc_from: usize,
        arc_to: usize,
    ) -> Result<usize, BcdError> {
        let tc = Chord::t(t);
        let mut count = 0usize;
        if self.crosses(tc, c)? {
            count += 1; // the node on c itself lies on the half-disc boundary
        }
        for q in 0..self.q_count() {
            let qc = Chord::q(q);
            if qc == c || !self.crosses(tc, qc)? {
                continue;
            }
            if self.crossing_in_half_disc(tc, qc, c, arc_from, arc_to)? {
                count += 1;
            }
        }
        Ok(count)
    }

    /// Checks the hypotheses of the close-chord deletion estimate for the
    /// ordered chord pair (c_prime close to c): returns node counts and
    /// the guaranteed dispersion drop when every T-chord carries at most K
    /// nodes in the half-disc containing c_prime.
    pub fn close_drop_bound(
        &self,
        c_prime: Chord,
        c: Chord,
        profile: &WeightProfile,
    ) -> Result<Option<CloseDrop>, BcdError> {
        if c_prime == c || !self.is_close(c_prime, c)? {
            return Ok(None);
        }
        let (cp0, _) = self.positions(c_prime)?;
        let (c0, c1) = self.positions(c)?;
        // the half-disc containing c_prime: both its endpoints sit in one arc
        let (arc_from, arc_to) = if self.in_open_arc(cp0, c0, c1) {
            (c0, c1)
        } else {
            (c1, c0)
        };
        let k = profile.k();
        for t in 0..self.t_count() {
            if self.half_disc_nodes_on_t(t, c, arc_from, arc_to)? > k {
                return Ok(None);
            }
        }
        let l = self.nodes_on(c, 0)?.len() as u64;
        let l_prime = self.nodes_on(c_prime, 0)?.len() as u64;
        let bound = Rational64::new(
            (l_prime * (l - l_prime)) as i64,
            (k * k) as i64,
        );
        Ok(Some(CloseDrop {
            nodes_on_c: l,
            nodes_on_c_prime: l_prime,
            bound,
        }))
    }

    /// The full h x b grid: h T-chords all crossing b Q-chords.
    pub fn grid(h: usize, b: usize) -> Bcd {
        let mut tokens = Vec::with_capacity(2 * (h + b));
        for i in (0..b).rev() {
            tokens.push(Chord::q(i));
        }
        for j in 0..h {
            tokens.push(Chord::t(j));
        }
        for i in 0..b {
            tokens.push(Chord::q(i));
        }
        for j in (0..h).rev() {
            tokens.push(Chord::t(j));
        }
        Bcd::from_boundary(tokens).expect("grid is a valid diagram")
    }

    /// True iff the boundary is exactly the canonical grid layout for its
    /// chord counts. O(boundary) check used to shortcut dispersion on
    /// machine-generated band grids, where every T-chord crosses every
    /// Q-chord and all left neighbors agree.
    pub fn is_canonical_grid(&self) -> bool {
        if self.t_count() == 0 && self.q_count() == 0 {
            return self.boundary.is_empty();
        }
        self.boundary == Bcd::grid(self.t_count(), self.q_count()).boundary
    }

    /// Dispersion with a structural shortcut for canonical grids (always
    /// zero there; cross-checked against the generic path in the tests).
    pub fn dispersion_grid_aware(&self, profile: &WeightProfile) -> Result<Rational64, BcdError> {
        if self.is_canonical_grid() {
            return Ok(Rational64::zero());
        }
        self.dispersion(profile)
    }

    /// Rotates the cyclic boundary by `shift` positions.
    pub fn rotated(&self, shift: usize) -> Bcd {
        let n = self.boundary.len();
        if n == 0 {
            return self.clone();
        }
        let tokens: Vec<Chord> = (0..n)
            .map(|i| self.boundary[(i + shift) % n])
            .collect();
        Bcd::with_labels(tokens, self.t_labels.clone(), self.q_labels.clone())
            .expect("rotation preserves validity")
    }

    /// Mirror image: the boundary read clockwise.
    pub fn reflected(&self) -> Bcd {
        let tokens: Vec<Chord> = self.boundary.iter().rev().copied().collect();
        Bcd::with_labels(tokens, self.t_labels.clone(), self.q_labels.clone())
            .expect("reflection preserves validity")
    }

    /// Parses the text file format: `bcd v1`, an optional `K <int>` line,
    /// then the boundary tokens `T<i>`/`Q<i>` in counterclockwise order.
    pub fn parse(text: &str) -> Result<(Bcd, Option<u32>), BcdError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (line_no, header) = lines.next().ok_or(BcdError::Parse {
            line: 1,
            col: 1,
            msg: "empty file".into(),
        })?;
        if header != "bcd v1" {
            return Err(BcdError::Parse {
                line: line_no,
                col: 1,
                msg: format!("expected 'bcd v1', found '{header}'"),
            });
        }
        let mut k = None;
        let (line_no, body) = lines.next().ok_or(BcdError::Parse {
            line: line_no,
            col: 1,
            msg: "missing boundary line".into(),
        })?;
        let (line_no, body) = if let Some(rest) = body.strip_prefix("K ") {
            let parsed = rest.trim().parse::<u32>().map_err(|_| BcdError::Parse {
                line: line_no,
                col: 3,
                msg: format!("bad K value '{}'", rest.trim()),
            })?;
            if parsed == 0 {
                return Err(BcdError::Parse {
                    line: line_no,
                    col: 3,
                    msg: "K must be positive".into(),
                });
            }
            k = Some(parsed);
            lines.next().ok_or(BcdError::Parse {
                line: line_no,
                col: 1,
                msg: "missing boundary line".into(),
            })?
        } else {
            (line_no, body)
        };

        let mut tokens = Vec::new();
        let mut labels: HashMap<String, Chord> = HashMap::new();
        let mut t_labels = Vec::new();
        let mut q_labels = Vec::new();
        let mut col = 1usize;
        for raw in body.split_whitespace() {
            let col_here = body.find(raw).map(|i| i + 1).unwrap_or(col);
            col = col_here;
            let class = match raw.chars().next() {
                Some('T') => ChordClass::T,
                Some('Q') => ChordClass::Q,
                _ => {
                    return Err(BcdError::Parse {
                        line: line_no,
                        col: col_here,
                        msg: format!("token '{raw}' must start with T or Q"),
                    })
                }
            };
            if raw[1..].parse::<usize>().is_err() {
                return Err(BcdError::Parse {
                    line: line_no,
                    col: col_here,
                    msg: format!("token '{raw}' has no numeric index"),
                });
            }
            let chord = *labels.entry(raw.to_owned()).or_insert_with(|| {
                let index = match class {
                    ChordClass::T => {
                        t_labels.push(raw.to_owned());
                        t_labels.len() - 1
                    }
                    ChordClass::Q => {
                        q_labels.push(raw.to_owned());
                        q_labels.len() - 1
                    }
                };
                Chord { class, index }
            });
            if chord.class != class {
                return Err(BcdError::Parse {
                    line: line_no,
                    col: col_here,
                    msg: format!("token '{raw}' changes class"),
                });
            }
            tokens.push(chord);
        }
        let bcd =
            Bcd::with_labels(tokens, t_labels, q_labels).map_err(|e| match e {
                BcdError::Parse { .. } => e,
                other => BcdError::Parse {
                    line: line_no,
                    col: 1,
                    msg: other.to_string(),
                },
            })?;
        Ok((bcd, k))
    }

    pub fn to_text(&self, k: Option<u32>) -> String {
        let mut out = String::from("bcd v1\n");
        if let Some(k) = k {
            out.push_str(&format!("K {k}\n"));
        }
        let tokens: Vec<&str> = self.boundary.iter().map(|c| self.label(*c)).collect();
        out.push_str(&tokens.join(" "));
        out.push('\n');
        out
    }

    /// Deterministic random diagram: a uniform noncrossing matching per
    /// class, interleaved uniformly among the boundary positions. The
    /// construction preserves same-class noncrossing, so validation always
    /// passes.
    pub fn random(rng: &mut impl Rng, t_count: usize, q_count: usize) -> Bcd {
        let total = 2 * (t_count + q_count);
        let mut is_t: Vec<bool> = vec![false; total];
        let mut positions: Vec<usize> = (0..total).collect();
        positions.shuffle(rng);
        for &p in positions.iter().take(2 * t_count) {
            is_t[p] = true;
        }
        let t_pattern = random_noncrossing(rng, t_count);
        let q_pattern = random_noncrossing(rng, q_count);
        let mut tokens = vec![Chord::t(0); total];
        let t_slots: Vec<usize> = (0..total).filter(|&p| is_t[p]).collect();
        let q_slots: Vec<usize> = (0..total).filter(|&p| !is_t[p]).collect();
        for (slot, &chord_idx) in t_slots.iter().zip(t_pattern.iter()) {
            tokens[*slot] = Chord::t(chord_idx);
        }
        for (slot, &chord_idx) in q_slots.iter().zip(q_pattern.iter()) {
            tokens[*slot] = Chord::q(chord_idx);
        }
        // relabel densely in order of first appearance
        let mut remap_t: HashMap<usize, usize> = HashMap::new();
        let mut remap_q: HashMap<usize, usize> = HashMap::new();
        let tokens: Vec<Chord> = tokens
            .into_iter()
            .map(|c| match c.class {
                ChordClass::T => {
                    let next = remap_t.len();
                    Chord::t(*remap_t.entry(c.index).or_insert(next))
                }
                ChordClass::Q => {
                    let next = remap_q.len();
                    Chord::q(*remap_q.entry(c.index).or_insert(next))
                }
            })
            .collect();
        Bcd::from_boundary(tokens).expect("random construction is valid")
    }
}

/// Result of a qualifying close-chord instance check.
#[derive(Clone, Copy, Debug)]
pub struct CloseDrop {
    pub nodes_on_c: u64,
    pub nodes_on_c_prime: u64,
    pub bound: Rational64,
}

struct NodeIndex {
    t_order: Vec<Vec<Node>>,
    t_rank: HashMap<Node, usize>,
    q_order: Vec<Vec<Node>>,
}

/// Seeded random diagram.
pub fn random_bcd(seed: u64, t_count: usize, q_count: usize) -> Bcd {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Bcd::random(&mut rng, t_count, q_count)
}

/// Uniform random noncrossing chord pattern over 2m points, returned as a
/// sequence of chord indices (each appearing twice), indices assigned in
/// order of first appearance. Point 0 pairs with point 2k-1 with
/// probability proportional to Catalan(k-1) * Catalan(m-k).
fn random_noncrossing(rng: &mut impl Rng, m: usize) -> Vec<usize> {
    fn catalan(n: usize) -> u128 {
        let mut c = vec![0u128; n + 1];
        c[0] = 1;
        for i in 1..=n {
            for j in 0..i {
                c[i] += c[j] * c[i - 1 - j];
            }
        }
        c[n]
    }
    fn fill(
        rng: &mut impl Rng,
        slots: &mut [Option<usize>],
        next_id: &mut usize,
        cat: &[u128],
    ) {
        let n = slots.len();
        if n == 0 {
            return;
        }
        let m = n / 2;
        let total: u128 = (1..=m).map(|k| cat[k - 1] * cat[m - k]).sum();
        let mut pick = rng.gen_range(0..total);
        let mut k = 1;
        for kk in 1..=m {
            let w = cat[kk - 1] * cat[m - kk];
            if pick < w {
                k = kk;
                break;
            }
            pick -= w;
        }
        let id = *next_id;
        *next_id += 1;
        slots[0] = Some(id);
        slots[2 * k - 1] = Some(id);
        let (inner, rest) = slots[1..].split_at_mut(2 * k - 2);
        fill(rng, inner, next_id, cat);
        fill(rng, &mut rest[1..], next_id, cat);
    }
    let cat: Vec<u128> = {
        let mut v = Vec::with_capacity(m + 1);
        for i in 0..=m {
            v.push(catalan(i));
        }
        v
    };
    let mut slots = vec![None; 2 * m];
    let mut next_id = 0;
    fill(rng, &mut slots, &mut next_id, &cat);
    slots.into_iter().map(|s| s.expect("all slots filled")).collect()
}
