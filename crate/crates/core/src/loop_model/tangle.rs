//! Planar tangles of weighted tiles and their contraction into algebra elements.
//!
//! A tangle has numbered points (string midpoints on tile edges). Every point
//! is shared by exactly two owners: two tiles, or one tile and an outer node of
//! the target algebra. Each tile slot offers weighted alternatives; an
//! alternative joins some of its points, attaches some to a boundary, and
//! leaves the rest empty. A configuration whose neighbouring tiles disagree on
//! whether a shared point is occupied contributes nothing.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::algebra::Element;
use crate::diagram::network::{Item, Network, Target};
use crate::diagram::{Diagram, Link, Variant};
use crate::error::{Error, Result};
use crate::scalars::{Coefficient, ParamBinding, ParamMode};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryItem {
    Ghost,
    Attach(usize),
}

/// One weighted way of filling a tile slot.
#[derive(Clone, Debug)]
pub struct Alternative {
    pub weight: Complex64,
    pub joins: Vec<(usize, usize)>,
    /// Items this tile puts on its boundary, left to right.
    pub items: Vec<BoundaryItem>,
}

impl Alternative {
    pub fn new(weight: Complex64, joins: Vec<(usize, usize)>, items: Vec<BoundaryItem>) -> Self {
        Alternative { weight, joins, items }
    }

    fn occupies(&self, p: usize) -> bool {
        self.joins.iter().any(|&(a, b)| a == p || b == p) || self.items.contains(&BoundaryItem::Attach(p))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Bulk,
    /// Ordered position along the top boundary.
    Top(usize),
    Bottom(usize),
}

#[derive(Clone, Debug)]
pub struct Slot {
    pub points: Vec<usize>,
    pub side: Side,
    pub alternatives: Vec<Alternative>,
}

#[derive(Clone, Debug)]
pub struct Tangle {
    pub n: usize,
    pub variant: Variant,
    pub points: usize,
    /// Point wired to each outer node, indexed by node (left 0..n, right n..2n).
    pub outer: Vec<usize>,
    pub slots: Vec<Slot>,
}

/// Occupancy of each alternative at each of its slot's points.
struct Prepared {
    occ: Vec<Vec<Vec<bool>>>,
    /// For each slot and local point, the other owning slot (if a tile) and its local index.
    partner: Vec<Vec<Option<(usize, usize)>>>,
}

impl Tangle {
    pub fn configuration_count(&self) -> u128 {
        self.slots.iter().map(|s| s.alternatives.len() as u128).product()
    }

    fn prepare(&self) -> Result<Prepared> {
        let mut owners: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.points];
        for (si, s) in self.slots.iter().enumerate() {
            for (li, &p) in s.points.iter().enumerate() {
                owners[p].push((si, li));
            }
        }
        let mut outer_count = vec![0; self.points];
        for &p in &self.outer {
            outer_count[p] += 1;
        }
        for p in 0..self.points {
            if owners[p].len() + outer_count[p] != 2 {
                return Err(Error::Unsupported(format!(
                    "tangle point {p} has {} owners",
                    owners[p].len() + outer_count[p]
                )));
            }
        }
        let partner = self
            .slots
            .iter()
            .enumerate()
            .map(|(si, s)| s.points.iter().map(|&p| owners[p].iter().copied().find(|&(o, _)| o != si)).collect())
            .collect();
        let occ = self
            .slots
            .iter()
            .map(|s| s.alternatives.iter().map(|a| s.points.iter().map(|&p| a.occupies(p)).collect()).collect())
            .collect();
        Ok(Prepared { occ, partner })
    }

    /// Sum over every consistent configuration.
    pub fn contract(&self, mode: ParamMode, env: &ParamBinding, budget: u128) -> Result<Element<Complex64>> {
        let needed = self.configuration_count();
        if needed > budget {
            return Err(Error::Budget { needed, budget });
        }
        let prep = self.prepare()?;
        let first = self.slots.first().map(|s| s.alternatives.len()).unwrap_or(1);
        let parts: Vec<Element<Complex64>> = (0..first)
            .into_par_iter()
            .map(|a0| {
                let mut acc = Element::zero(self.n, self.variant);
                let mut choice = vec![usize::MAX; self.slots.len()];
                if self.slots.is_empty() {
                    self.emit(&choice, mode, env, &mut acc);
                } else if self.consistent(&prep, &choice, 0, a0) {
                    choice[0] = a0;
                    self.descend(&prep, &mut choice, 1, mode, env, &mut acc);
                }
                acc
            })
            .collect();
        let mut out = Element::zero(self.n, self.variant);
        for p in parts {
            for (d, c) in p.terms() {
                out.add_term(d.clone(), *c);
            }
        }
        Ok(out)
    }

    fn consistent(&self, prep: &Prepared, choice: &[usize], si: usize, ai: usize) -> bool {
        for (li, partner) in prep.partner[si].iter().enumerate() {
            if let Some((o, lo)) = *partner {
                if choice[o] != usize::MAX && prep.occ[o][choice[o]][lo] != prep.occ[si][ai][li] {
                    return false;
                }
            }
        }
        true
    }

    fn descend(
        &self,
        prep: &Prepared,
        choice: &mut Vec<usize>,
        si: usize,
        mode: ParamMode,
        env: &ParamBinding,
        acc: &mut Element<Complex64>,
    ) {
        if si == self.slots.len() {
            self.emit(choice, mode, env, acc);
            return;
        }
        for ai in 0..self.slots[si].alternatives.len() {
            if self.slots[si].alternatives[ai].weight == Complex64::new(0.0, 0.0) {
                continue;
            }
            if self.consistent(prep, choice, si, ai) {
                choice[si] = ai;
                self.descend(prep, choice, si + 1, mode, env, acc);
                choice[si] = usize::MAX;
            }
        }
    }

    fn emit(&self, choice: &[usize], mode: ParamMode, env: &ParamBinding, acc: &mut Element<Complex64>) {
        let mut weight = Complex64::new(1.0, 0.0);
        let mut net = Network::new(self.points);
        let mut occupied = vec![false; self.points];
        let mut top: Vec<(usize, &Vec<BoundaryItem>)> = Vec::new();
        let mut bottom: Vec<(usize, &Vec<BoundaryItem>)> = Vec::new();
        for (s, &ai) in self.slots.iter().zip(choice) {
            let alt = &s.alternatives[ai];
            weight *= alt.weight;
            for &(a, b) in &alt.joins {
                net.join(a, b);
                occupied[a] = true;
                occupied[b] = true;
            }
            for it in &alt.items {
                if let BoundaryItem::Attach(p) = *it {
                    net.touch(p);
                    occupied[p] = true;
                }
            }
            match s.side {
                Side::Top(k) => top.push((k, &alt.items)),
                Side::Bottom(k) => bottom.push((k, &alt.items)),
                Side::Bulk => {}
            }
        }
        for (node, &p) in self.outer.iter().enumerate() {
            if occupied[p] {
                net.mark_outer(p, node);
            }
        }
        let flatten = |mut v: Vec<(usize, &Vec<BoundaryItem>)>| -> Vec<Item> {
            v.sort_by_key(|x| x.0);
            v.into_iter()
                .flat_map(|(_, items)| {
                    items.iter().map(|it| match *it {
                        BoundaryItem::Ghost => Item::Ghost,
                        BoundaryItem::Attach(p) => Item::Attach(p),
                    })
                })
                .collect()
        };
        net.top = flatten(top);
        net.bottom = flatten(bottom);
        let red = net.reduce(2 * self.n, mode, false);
        if red.annihilated {
            return;
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
        let d = Diagram::from_parts_unchecked(self.n, self.variant, links, red.top_ghosts, red.bottom_ghosts);
        debug_assert_eq!(d.top_order(), red.top_nodes, "tangle outer nodes out of planar order");
        debug_assert_eq!(d.bottom_order(), red.bottom_nodes, "tangle outer nodes out of planar order");
        let c = weight * <Complex64 as Coefficient>::weight(&red.weight, env);
        acc.add_term(d, c);
    }
}

/// Incremental builder for tangles.
#[derive(Default)]
pub struct TangleBuilder {
    points: usize,
    slots: Vec<Slot>,
}

impl TangleBuilder {
    pub fn new() -> Self {
        TangleBuilder::default()
    }

    pub fn point(&mut self) -> usize {
        self.points += 1;
        self.points - 1
    }

    pub fn points<const K: usize>(&mut self) -> [usize; K] {
        std::array::from_fn(|_| self.point())
    }

    pub fn slot(&mut self, points: Vec<usize>, side: Side, alternatives: Vec<Alternative>) {
        self.slots.push(Slot { points, side, alternatives });
    }

    pub fn finish(self, n: usize, variant: Variant, outer: Vec<usize>) -> Tangle {
        Tangle { n, variant, points: self.points, outer, slots: self.slots }
    }
}
