//! Reduction of planar pseudo-diagrams.
//!
//! A network is a set of string half-edges (points) glued into components by
//! union-find. Components end at outer nodes or at boundary attachments.
//! Reduction removes loops and boundary arcs, records the parameters they
//! carry, deposits ghosts where arcs are removed, and reports the surviving
//! connectivity.

use crate::scalars::{arc_param, ArcKind, Monomial, ParamId, ParamMode};

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] as usize != x {
            let p = self.parent[x] as usize;
            self.parent[x] = self.parent[p];
            x = p;
        }
        x
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            self.parent[ra] = rb as u32;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Item {
    Ghost,
    Attach(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Outer(usize),
    Top(usize),
    Bottom(usize),
}

/// Where an outer node ends up after reduction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Target {
    Node(usize),
    Top,
    Bottom,
}

#[derive(Clone, Debug)]
pub(crate) struct Network {
    uf: UnionFind,
    used: Vec<bool>,
    outer: Vec<Option<usize>>,
    pub top: Vec<Item>,
    pub bottom: Vec<Item>,
    annihilated: bool,
}

#[derive(Clone, Debug)]
pub(crate) struct Reduced {
    pub weight: Monomial,
    pub annihilated: bool,
    /// Per outer node, its partner; `None` for empty nodes.
    pub targets: Vec<Option<Target>>,
    pub top_ghosts: u64,
    pub bottom_ghosts: u64,
    /// Outer nodes attached to the top boundary, in left-to-right order.
    pub top_nodes: Vec<usize>,
    pub bottom_nodes: Vec<usize>,
    /// Top-bottom strings kept rather than removed.
    pub verticals: usize,
}

impl Network {
    pub fn new(points: usize) -> Self {
        Network {
            uf: UnionFind::new(points),
            used: vec![false; points],
            outer: vec![None; points],
            top: Vec::new(),
            bottom: Vec::new(),
            annihilated: false,
        }
    }

    /// A string segment joining two points.
    pub fn join(&mut self, a: usize, b: usize) {
        self.used[a] = true;
        self.used[b] = true;
        self.uf.union(a, b);
    }

    pub fn touch(&mut self, a: usize) {
        self.used[a] = true;
    }

    pub fn mark_outer(&mut self, p: usize, node: usize) {
        self.used[p] = true;
        self.outer[p] = Some(node);
    }

    pub fn annihilate(&mut self) {
        self.annihilated = true;
    }

    /// Reduce to connectivity plus weight.
    ///
    /// With `keep_vertical`, top-bottom strings survive instead of being
    /// replaced by a parameter.
    pub fn reduce(mut self, outer_nodes: usize, mode: ParamMode, keep_vertical: bool) -> Reduced {
        let mut reduced = Reduced {
            weight: Monomial::one(),
            annihilated: self.annihilated,
            targets: vec![None; outer_nodes],
            top_ghosts: 0,
            bottom_ghosts: 0,
            top_nodes: Vec::new(),
            bottom_nodes: Vec::new(),
            verticals: 0,
        };
        if self.annihilated {
            return reduced;
        }
        let n = self.used.len();
        // ends[root] holds up to two ends.
        let mut ends: Vec<[Option<End>; 2]> = vec![[None, None]; n];
        let mut push = |uf: &mut UnionFind, p: usize, e: End| {
            let r = uf.find(p);
            let slot = &mut ends[r];
            if slot[0].is_none() {
                slot[0] = Some(e);
            } else {
                debug_assert!(slot[1].is_none(), "component with more than two ends");
                slot[1] = Some(e);
            }
        };
        for p in 0..n {
            if let Some(node) = self.outer[p] {
                push(&mut self.uf, p, End::Outer(node));
            }
        }
        let top_parity = parities(&self.top);
        let bottom_parity = parities(&self.bottom);
        for (i, it) in self.top.iter().enumerate() {
            if let Item::Attach(p) = *it {
                push(&mut self.uf, p, End::Top(i));
            }
        }
        for (i, it) in self.bottom.iter().enumerate() {
            if let Item::Attach(p) = *it {
                push(&mut self.uf, p, End::Bottom(i));
            }
        }
        let mut top_alive = vec![false; self.top.len()];
        let mut bottom_alive = vec![false; self.bottom.len()];
        let mut top_owner = vec![usize::MAX; self.top.len()];
        let mut bottom_owner = vec![usize::MAX; self.bottom.len()];
        let mut seen = vec![false; n];
        for p in 0..n {
            if !self.used[p] {
                continue;
            }
            let r = self.uf.find(p);
            if seen[r] {
                continue;
            }
            seen[r] = true;
            match ends[r] {
                [None, None] => reduced.weight.bump(ParamId::Beta),
                [Some(a), Some(b)] => {
                    let (a, b) = order_ends(a, b);
                    match (a, b) {
                        (End::Outer(x), End::Outer(y)) => {
                            reduced.targets[x] = Some(Target::Node(y));
                            reduced.targets[y] = Some(Target::Node(x));
                        }
                        (End::Outer(x), End::Top(i)) => {
                            reduced.targets[x] = Some(Target::Top);
                            top_alive[i] = true;
                            top_owner[i] = x;
                        }
                        (End::Outer(x), End::Bottom(i)) => {
                            reduced.targets[x] = Some(Target::Bottom);
                            bottom_alive[i] = true;
                            bottom_owner[i] = x;
                        }
                        (End::Top(i), End::Top(j)) => {
                            let (i, j) = (i.min(j), i.max(j));
                            reduced.weight.bump(arc_param(mode, ArcKind::TopTop, top_parity[i], top_parity[j]));
                        }
                        (End::Bottom(i), End::Bottom(j)) => {
                            let (i, j) = (i.min(j), i.max(j));
                            reduced.weight.bump(arc_param(
                                mode,
                                ArcKind::BottomBottom,
                                bottom_parity[i],
                                bottom_parity[j],
                            ));
                        }
                        (End::Top(i), End::Bottom(j)) => {
                            if keep_vertical {
                                top_alive[i] = true;
                                bottom_alive[j] = true;
                                reduced.verticals += 1;
                            } else {
                                reduced.weight.bump(arc_param(
                                    mode,
                                    ArcKind::TopBottom,
                                    top_parity[i],
                                    bottom_parity[j],
                                ));
                            }
                        }
                        _ => unreachable!("ends are ordered"),
                    }
                }
                _ => {
                    // A string with a loose end: it met an empty node.
                    reduced.annihilated = true;
                    return reduced;
                }
            }
        }
        let (tg, tn) = surviving(&self.top, &top_alive, &top_owner);
        let (bg, bn) = surviving(&self.bottom, &bottom_alive, &bottom_owner);
        reduced.top_ghosts = tg;
        reduced.bottom_ghosts = bg;
        reduced.top_nodes = tn;
        reduced.bottom_nodes = bn;
        reduced
    }
}

fn rank(e: End) -> u8 {
    match e {
        End::Outer(_) => 0,
        End::Top(_) => 1,
        End::Bottom(_) => 2,
    }
}

fn order_ends(a: End, b: End) -> (End, End) {
    if rank(a) <= rank(b) {
        (a, b)
    } else {
        (b, a)
    }
}

/// Oddness of each item's position when items are numbered from 1.
fn parities(items: &[Item]) -> Vec<bool> {
    (0..items.len()).map(|i| i % 2 == 0).collect()
}

/// Ghost bits of the reduced boundary and the owners of surviving attachments.
///
/// Removed attachments turn into ghosts; surviving attachments that belong to
/// a vertical string have no owner and are reported as `usize::MAX`.
fn surviving(items: &[Item], alive: &[bool], owner: &[usize]) -> (u64, Vec<usize>) {
    let mut bits = 0u64;
    let mut domain = 0;
    let mut nodes = Vec::new();
    for (i, it) in items.iter().enumerate() {
        match it {
            Item::Ghost => bits ^= 1 << domain,
            Item::Attach(_) if alive[i] => {
                nodes.push(owner[i]);
                domain += 1;
            }
            Item::Attach(_) => bits ^= 1 << domain,
        }
    }
    (bits, nodes)
}
