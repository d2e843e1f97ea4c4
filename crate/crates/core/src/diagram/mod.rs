//! Canonical basis diagrams and their concatenation.

pub(crate) mod network;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalars::{Monomial, ParamMode};
use network::{Item, Network, Target};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Density {
    Dense,
    Dilute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Boundaries {
    Zero,
    OneTop,
    Two,
}

impl Boundaries {
    pub fn count(self) -> u8 {
        match self {
            Boundaries::Zero => 0,
            Boundaries::OneTop => 1,
            Boundaries::Two => 2,
        }
    }

    pub fn from_count(c: u8) -> Result<Self> {
        match c {
            0 => Ok(Boundaries::Zero),
            1 => Ok(Boundaries::OneTop),
            2 => Ok(Boundaries::Two),
            _ => Err(Error::Parse(format!("boundary count {c} not in 0..=2"))),
        }
    }

    pub fn has_top(self) -> bool {
        self != Boundaries::Zero
    }

    pub fn has_bottom(self) -> bool {
        self == Boundaries::Two
    }
}

/// Algebra family: density and number of boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variant {
    pub density: Density,
    pub boundaries: Boundaries,
}

impl Variant {
    pub const TL: Variant = Variant { density: Density::Dense, boundaries: Boundaries::Zero };
    pub const GH1: Variant = Variant { density: Density::Dense, boundaries: Boundaries::OneTop };
    pub const GH2: Variant = Variant { density: Density::Dense, boundaries: Boundaries::Two };
    pub const DTL: Variant = Variant { density: Density::Dilute, boundaries: Boundaries::Zero };
    pub const DGH1: Variant = Variant { density: Density::Dilute, boundaries: Boundaries::OneTop };
    pub const DGH2: Variant = Variant { density: Density::Dilute, boundaries: Boundaries::Two };

    pub const ALL: [Variant; 6] = [Self::TL, Self::GH1, Self::GH2, Self::DTL, Self::DGH1, Self::DGH2];

    pub fn is_dilute(self) -> bool {
        self.density == Density::Dilute
    }

    pub fn name(self) -> &'static str {
        match (self.density, self.boundaries) {
            (Density::Dense, Boundaries::Zero) => "tl",
            (Density::Dense, Boundaries::OneTop) => "gh1",
            (Density::Dense, Boundaries::Two) => "gh2",
            (Density::Dilute, Boundaries::Zero) => "dtl",
            (Density::Dilute, Boundaries::OneTop) => "dgh1",
            (Density::Dilute, Boundaries::Two) => "dgh2",
        }
    }

    pub fn with_density(self, density: Density) -> Variant {
        Variant { density, ..self }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.to_ascii_lowercase();
        Variant::ALL
            .iter()
            .copied()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown variant {s:?}")))
    }
}

/// A string endpoint; indices are zero-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Endpoint {
    L(usize),
    R(usize),
    T(usize),
    B(usize),
}

impl Endpoint {
    pub fn is_node(self) -> bool {
        matches!(self, Endpoint::L(_) | Endpoint::R(_))
    }

    fn node_index(self, n: usize) -> Option<usize> {
        match self {
            Endpoint::L(i) => Some(i),
            Endpoint::R(i) => Some(n + i),
            _ => None,
        }
    }

    fn of_node(node: usize, n: usize) -> Endpoint {
        if node < n {
            Endpoint::L(node)
        } else {
            Endpoint::R(node - n)
        }
    }
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Endpoint::L(i) => write!(f, "L{}", i + 1),
            Endpoint::R(i) => write!(f, "R{}", i + 1),
            Endpoint::T(i) => write!(f, "T{}", i + 1),
            Endpoint::B(i) => write!(f, "B{}", i + 1),
        }
    }
}

impl FromStr for Endpoint {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad endpoint {s:?}"));
        let mut chars = s.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let idx: usize = chars.as_str().parse().map_err(|_| bad())?;
        if idx == 0 {
            return Err(bad());
        }
        let i = idx - 1;
        match kind {
            'L' => Ok(Endpoint::L(i)),
            'R' => Ok(Endpoint::R(i)),
            'T' => Ok(Endpoint::T(i)),
            'B' => Ok(Endpoint::B(i)),
            _ => Err(bad()),
        }
    }
}

/// What a node is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Link {
    Empty,
    Node(u8),
    Top,
    Bottom,
}

/// Uncanonicalized diagram data with explicit boundary slots and ghost counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawDiagram {
    pub n: usize,
    pub variant: Variant,
    pub strings: Vec<(Endpoint, Endpoint)>,
    pub empty: Vec<Endpoint>,
    pub top_ghosts: Vec<u32>,
    pub bottom_ghosts: Vec<u32>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ViolationCode {
    NoStrands,
    OutOfRange,
    NodeReused,
    NodeUncovered,
    EmptyInDense,
    SelfLoop,
    BoundaryArc,
    TopBottomString,
    MissingBoundary,
    SlotGap,
    Crossing,
    GhostLength,
    TopParity,
    BottomParity,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub code: ViolationCode,
    pub detail: String,
}

fn violation(code: ViolationCode, detail: impl Into<String>) -> Violation {
    Violation { code, detail: detail.into() }
}

/// Whether chords on a circle, given as position pairs, are pairwise noncrossing.
pub(crate) fn first_crossing(chords: &[(usize, usize)]) -> Option<(usize, usize)> {
    let norm: Vec<(usize, usize)> = chords.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    for i in 0..norm.len() {
        for j in i + 1..norm.len() {
            let (a, b) = norm[i];
            let (c, d) = norm[j];
            if (a < c && c < b && b < d) || (c < a && a < d && d < b) {
                return Some((i, j));
            }
        }
    }
    None
}

/// Positions of endpoints in the cyclic order
/// [L1..Ln, bottom slots left to right, Rn..R1, top slots right to left].
pub(crate) fn cyclic_position(e: Endpoint, n: usize, n_bottom: usize, n_top: usize) -> usize {
    match e {
        Endpoint::L(i) => i,
        Endpoint::B(s) => n + s,
        Endpoint::R(i) => n + n_bottom + (n - 1 - i),
        Endpoint::T(s) => 2 * n + n_bottom + (n_top - 1 - s),
    }
}

impl RawDiagram {
    /// Every violated basis rule.
    pub fn validate(&self) -> Vec<Violation> {
        use ViolationCode::*;
        let mut out = Vec::new();
        let n = self.n;
        if n == 0 {
            out.push(violation(NoStrands, "n must be at least 1"));
            return out;
        }
        let mut covered = vec![0u32; 2 * n];
        let mut tops = Vec::new();
        let mut bottoms = Vec::new();
        let in_range = |e: Endpoint| match e {
            Endpoint::L(i) | Endpoint::R(i) => i < n,
            _ => true,
        };
        for &(a, b) in &self.strings {
            if !in_range(a) || !in_range(b) {
                out.push(violation(OutOfRange, format!("{a}-{b}")));
                continue;
            }
            if a == b {
                out.push(violation(SelfLoop, format!("{a}")));
            }
            match (a, b) {
                (Endpoint::T(_), Endpoint::T(_)) | (Endpoint::B(_), Endpoint::B(_)) => {
                    out.push(violation(BoundaryArc, format!("{a}-{b}")))
                }
                (Endpoint::T(_), Endpoint::B(_)) | (Endpoint::B(_), Endpoint::T(_)) => {
                    out.push(violation(TopBottomString, format!("{a}-{b}")))
                }
                _ => {}
            }
            for e in [a, b] {
                match e {
                    Endpoint::T(s) => {
                        if !self.variant.boundaries.has_top() {
                            out.push(violation(MissingBoundary, format!("{e}")));
                        }
                        tops.push(s);
                    }
                    Endpoint::B(s) => {
                        if !self.variant.boundaries.has_bottom() {
                            out.push(violation(MissingBoundary, format!("{e}")));
                        }
                        bottoms.push(s);
                    }
                    _ => covered[e.node_index(n).unwrap()] += 1,
                }
            }
        }
        for &e in &self.empty {
            if !in_range(e) || !e.is_node() {
                out.push(violation(OutOfRange, format!("empty {e}")));
                continue;
            }
            if self.variant.density == Density::Dense {
                out.push(violation(EmptyInDense, format!("{e}")));
            }
            covered[e.node_index(n).unwrap()] += 1;
        }
        for (k, &c) in covered.iter().enumerate() {
            let e = Endpoint::of_node(k, n);
            if c == 0 {
                out.push(violation(NodeUncovered, format!("{e}")));
            } else if c > 1 {
                out.push(violation(NodeReused, format!("{e}")));
            }
        }
        for (name, slots) in [("top", &mut tops), ("bottom", &mut bottoms)] {
            slots.sort();
            if slots.iter().enumerate().any(|(i, &s)| s != i) {
                out.push(violation(SlotGap, format!("{name} slots {slots:?}")));
            }
        }
        let (nt, nb) = (tops.len(), bottoms.len());
        if out.iter().all(|v| v.code != SlotGap && v.code != OutOfRange) {
            let chords: Vec<(usize, usize)> = self
                .strings
                .iter()
                .map(|&(a, b)| (cyclic_position(a, n, nb, nt), cyclic_position(b, n, nb, nt)))
                .collect();
            if let Some((i, j)) = first_crossing(&chords) {
                let (a, b) = self.strings[i];
                let (c, d) = self.strings[j];
                out.push(violation(Crossing, format!("{a}-{b} crosses {c}-{d}")));
            }
        }
        let expect_top = nt + 1;
        let expect_bottom = nb + 1;
        if self.top_ghosts.len() != expect_top {
            out.push(violation(
                GhostLength,
                format!("top has {} domains, expected {expect_top}", self.top_ghosts.len()),
            ));
        }
        if self.bottom_ghosts.len() != expect_bottom {
            out.push(violation(
                GhostLength,
                format!("bottom has {} domains, expected {expect_bottom}", self.bottom_ghosts.len()),
            ));
        }
        let tg: u64 = self.top_ghosts.iter().map(|&g| g as u64).sum();
        let bg: u64 = self.bottom_ghosts.iter().map(|&g| g as u64).sum();
        if !(nt as u64 + tg).is_multiple_of(2) {
            out.push(violation(TopParity, format!("{nt} attachments and {tg} ghosts")));
        }
        if !(nb as u64 + bg).is_multiple_of(2) {
            out.push(violation(BottomParity, format!("{nb} attachments and {bg} ghosts")));
        }
        if !self.variant.boundaries.has_top() && tg > 0 {
            out.push(violation(MissingBoundary, "ghosts on an absent top boundary"));
        }
        if !self.variant.boundaries.has_bottom() && bg > 0 {
            out.push(violation(MissingBoundary, "ghosts on an absent bottom boundary"));
        }
        out
    }

    /// Reduce ghost counts mod 2 and build the canonical diagram.
    pub fn canonicalize(&self) -> Result<Diagram> {
        let v = self.validate();
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }
        let n = self.n;
        let mut links = vec![Link::Empty; 2 * n];
        for &(a, b) in &self.strings {
            let set = |links: &mut Vec<Link>, x: Endpoint, y: Endpoint| {
                if let Some(k) = x.node_index(n) {
                    links[k] = match y {
                        Endpoint::T(_) => Link::Top,
                        Endpoint::B(_) => Link::Bottom,
                        _ => Link::Node(y.node_index(n).unwrap() as u8),
                    };
                }
            };
            set(&mut links, a, b);
            set(&mut links, b, a);
        }
        let bits = |g: &[u32]| g.iter().enumerate().fold(0u64, |acc, (i, &c)| acc | (((c % 2) as u64) << i));
        Ok(Diagram { n, variant: self.variant, links, top: bits(&self.top_ghosts), bottom: bits(&self.bottom_ghosts) })
    }
}

/// A canonical basis diagram.
///
/// Nodes are indexed `0..n` for the left side (top to bottom) and `n..2n` for
/// the right side. Boundary slots are implied by planarity: the top boundary
/// carries left nodes in increasing order followed by right nodes in
/// decreasing order; the bottom boundary carries left nodes in decreasing
/// order followed by right nodes in increasing order. Ghost bit `k` belongs to
/// domain `k`, counted from the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Diagram {
    n: usize,
    variant: Variant,
    links: Vec<Link>,
    top: u64,
    bottom: u64,
}

/// Result of concatenating two diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionOutcome {
    pub weight: Monomial,
    pub annihilated: bool,
    pub result: Option<Diagram>,
}

impl Diagram {
    /// Build from links and ghost bits, checking every basis rule.
    pub fn from_parts(n: usize, variant: Variant, links: Vec<Link>, top: u64, bottom: u64) -> Result<Diagram> {
        let d = Diagram { n, variant, links, top, bottom };
        if d.links.len() != 2 * n {
            return Err(Error::Mismatch(format!("expected {} links", 2 * n)));
        }
        for (k, l) in d.links.iter().enumerate() {
            if let Link::Node(j) = *l {
                if j as usize >= 2 * n || d.links[j as usize] != Link::Node(k as u8) || j as usize == k {
                    return Err(Error::Mismatch(format!("node {k} has an inconsistent partner")));
                }
            }
        }
        let v = d.to_raw().validate();
        let extra = (d.top >> (d.top_count() + 1)) | (d.bottom >> (d.bottom_count() + 1));
        if !v.is_empty() {
            return Err(Error::Invalid(v));
        }
        if extra != 0 {
            return Err(Error::Mismatch("ghost bits beyond the last domain".into()));
        }
        Ok(d)
    }

    pub(crate) fn from_parts_unchecked(n: usize, variant: Variant, links: Vec<Link>, top: u64, bottom: u64) -> Diagram {
        let d = Diagram { n, variant, links, top, bottom };
        debug_assert!(d.to_raw().validate().is_empty(), "invalid diagram {d:?}");
        d
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn links(&self) -> &[Link] {
        &self.links
    }

    pub fn link(&self, node: usize) -> Link {
        self.links[node]
    }

    pub fn top_bits(&self) -> u64 {
        self.top
    }

    pub fn bottom_bits(&self) -> u64 {
        self.bottom
    }

    pub fn top_ghosts(&self) -> Vec<u32> {
        (0..=self.top_count()).map(|i| ((self.top >> i) & 1) as u32).collect()
    }

    pub fn bottom_ghosts(&self) -> Vec<u32> {
        (0..=self.bottom_count()).map(|i| ((self.bottom >> i) & 1) as u32).collect()
    }

    pub fn top_count(&self) -> usize {
        self.links.iter().filter(|l| **l == Link::Top).count()
    }

    pub fn bottom_count(&self) -> usize {
        self.links.iter().filter(|l| **l == Link::Bottom).count()
    }

    /// Number of strings joining a left node to a right node.
    pub fn throughlines(&self) -> usize {
        (0..self.n).filter(|&i| matches!(self.links[i], Link::Node(j) if j as usize >= self.n)).count()
    }

    pub fn string_count(&self) -> usize {
        let mut c = 0;
        for (k, l) in self.links.iter().enumerate() {
            match *l {
                Link::Node(j) if (j as usize) > k => c += 1,
                Link::Top | Link::Bottom => c += 1,
                _ => {}
            }
        }
        c
    }

    pub fn has_ghosts(&self) -> bool {
        self.top != 0 || self.bottom != 0
    }

    /// Nodes attached to the top boundary, left to right.
    pub fn top_order(&self) -> Vec<usize> {
        let n = self.n;
        let mut v: Vec<usize> = (0..n).filter(|&i| self.links[i] == Link::Top).collect();
        v.extend((n..2 * n).rev().filter(|&i| self.links[i] == Link::Top));
        v
    }

    /// Nodes attached to the bottom boundary, left to right.
    pub fn bottom_order(&self) -> Vec<usize> {
        let n = self.n;
        let mut v: Vec<usize> = (0..n).rev().filter(|&i| self.links[i] == Link::Bottom).collect();
        v.extend((n..2 * n).filter(|&i| self.links[i] == Link::Bottom));
        v
    }

    pub fn to_raw(&self) -> RawDiagram {
        let n = self.n;
        let top = self.top_order();
        let bottom = self.bottom_order();
        let mut strings = Vec::new();
        let mut empty = Vec::new();
        for k in 0..2 * n {
            let e = Endpoint::of_node(k, n);
            match self.links[k] {
                Link::Empty => empty.push(e),
                Link::Node(j) if (j as usize) > k => strings.push((e, Endpoint::of_node(j as usize, n))),
                Link::Node(_) => {}
                Link::Top => strings.push((e, Endpoint::T(top.iter().position(|&x| x == k).unwrap()))),
                Link::Bottom => strings.push((e, Endpoint::B(bottom.iter().position(|&x| x == k).unwrap()))),
            }
        }
        let nb = bottom.len();
        let nt = top.len();
        let pos = |e: Endpoint| cyclic_position(e, n, nb, nt);
        for s in strings.iter_mut() {
            if pos(s.1) < pos(s.0) {
                *s = (s.1, s.0);
            }
        }
        strings.sort_by_key(|s| pos(s.0));
        empty.sort_by_key(|&e| pos(e));
        RawDiagram {
            n,
            variant: self.variant,
            strings,
            empty,
            top_ghosts: self.top_ghosts(),
            bottom_ghosts: self.bottom_ghosts(),
        }
    }

    /// The all-horizontal diagram (dense) or one term of the dilute identity.
    pub fn horizontal(n: usize, variant: Variant, present: &[bool]) -> Diagram {
        let mut links = vec![Link::Empty; 2 * n];
        for i in 0..n {
            if present[i] {
                links[i] = Link::Node((n + i) as u8);
                links[n + i] = Link::Node(i as u8);
            }
        }
        Diagram::from_parts_unchecked(n, variant, links, 0, 0)
    }

    /// Reflection about a vertical line.
    pub fn reflect(&self) -> Diagram {
        let n = self.n;
        let swap = |k: usize| if k < n { k + n } else { k - n };
        let mut links = vec![Link::Empty; 2 * n];
        for k in 0..2 * n {
            links[swap(k)] = match self.links[k] {
                Link::Node(j) => Link::Node(swap(j as usize) as u8),
                l => l,
            };
        }
        Diagram {
            n,
            variant: self.variant,
            links,
            top: reverse_bits(self.top, self.top_count() + 1),
            bottom: reverse_bits(self.bottom, self.bottom_count() + 1),
        }
    }

    /// Concatenate `self` on the left of `other` and reduce.
    pub fn concat(&self, other: &Diagram, mode: ParamMode) -> Result<ContractionOutcome> {
        if self.n != other.n || self.variant != other.variant {
            return Err(Error::Mismatch(format!("{}{} vs {}{}", self.variant, self.n, other.variant, other.n)));
        }
        Ok(self.concat_unchecked(other, mode))
    }

    pub(crate) fn concat_unchecked(&self, other: &Diagram, mode: ParamMode) -> ContractionOutcome {
        let n = self.n;
        let net = self.concat_network(other);
        let red = net.reduce(2 * n, mode, false);
        if red.annihilated {
            return ContractionOutcome { weight: Monomial::one(), annihilated: true, result: None };
        }
        let links: Vec<Link> = red
            .targets
            .iter()
            .map(|t| match t {
                None => Link::Empty,
                Some(Target::Node(j)) => Link::Node(*j as u8),
                Some(Target::Top) => Link::Top,
                Some(Target::Bottom) => Link::Bottom,
            })
            .collect();
        let d = Diagram::from_parts_unchecked(n, self.variant, links, red.top_ghosts, red.bottom_ghosts);
        debug_assert_eq!(d.top_order(), red.top_nodes);
        debug_assert_eq!(d.bottom_order(), red.bottom_nodes);
        ContractionOutcome { weight: red.weight, annihilated: false, result: Some(d) }
    }

    fn concat_network(&self, other: &Diagram) -> Network {
        let n = self.n;
        // Points: self nodes at 0..2n, other nodes at 2n..4n.
        let mut net = Network::new(4 * n);
        for (base, d) in [(0, self), (2 * n, other)] {
            for k in 0..2 * n {
                match d.links[k] {
                    Link::Node(j) if (j as usize) > k => net.join(base + k, base + j as usize),
                    Link::Empty | Link::Node(_) => {}
                    Link::Top | Link::Bottom => net.touch(base + k),
                }
            }
        }
        for i in 0..n {
            if self.links[i] != Link::Empty {
                net.mark_outer(i, i);
            }
            let (a, b) = (n + i, 2 * n + i);
            match (self.links[n + i] == Link::Empty, other.links[i] == Link::Empty) {
                (false, false) => net.join(a, b),
                (true, true) => {}
                _ => net.annihilate(),
            }
            if other.links[n + i] != Link::Empty {
                net.mark_outer(3 * n + i, n + i);
            }
        }
        for (base, d) in [(0, self), (2 * n, other)] {
            push_boundary(&mut net.top, base, &d.top_order(), d.top);
            push_boundary(&mut net.bottom, base, &d.bottom_order(), d.bottom);
        }
        net
    }
}

pub(crate) fn push_boundary(items: &mut Vec<Item>, base: usize, order: &[usize], bits: u64) {
    for (k, &node) in order.iter().enumerate() {
        if (bits >> k) & 1 == 1 {
            items.push(Item::Ghost);
        }
        items.push(Item::Attach(base + node));
    }
    if (bits >> order.len()) & 1 == 1 {
        items.push(Item::Ghost);
    }
}

pub(crate) fn reverse_bits(bits: u64, len: usize) -> u64 {
    let mut r = 0;
    for i in 0..len {
        if (bits >> i) & 1 == 1 {
            r |= 1 << (len - 1 - i);
        }
    }
    r
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let raw = self.to_raw();
        let strings: Vec<String> = raw.strings.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}{}[{}", self.variant, self.n, strings.join(" "))?;
        if !raw.empty.is_empty() {
            let e: Vec<String> = raw.empty.iter().map(|e| e.to_string()).collect();
            write!(f, " | empty {}", e.join(" "))?;
        }
        if self.variant.boundaries.has_top() {
            write!(f, " | top {:?}", raw.top_ghosts)?;
        }
        if self.variant.boundaries.has_bottom() {
            write!(f, " | bottom {:?}", raw.bottom_ghosts)?;
        }
        f.write_str("]")
    }
}
