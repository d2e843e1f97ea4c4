//! Maps between the algebras: inclusions, the vertical-string map from
//! two-boundary TL diagrams, the dashed (dilute) embedding and strand addition.

use crate::algebra::Element;
use crate::diagram::network::{Network, Target};
use crate::diagram::{
    cyclic_position, first_crossing, Boundaries, Density, Diagram, Endpoint, Link, RawDiagram, Variant,
};
use crate::error::{Error, Result};
use crate::scalars::{arc_param, ArcKind, Coefficient, Monomial, ParamId, ParamMode, Poly};

/// One attachment on a boundary of a two-boundary TL diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attachment {
    Node(usize),
    Vertical,
}

/// A dense two-boundary diagram that may contain top-to-bottom strings and has no ghosts.
///
/// The k-th vertical on the top boundary joins the k-th vertical on the bottom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwoBoundaryTLDiagram {
    n: usize,
    links: Vec<Link>,
    top: Vec<Attachment>,
    bottom: Vec<Attachment>,
}

impl TwoBoundaryTLDiagram {
    /// Build from a string list; slots on each boundary are ordinal, left to right.
    pub fn from_strings(n: usize, strings: &[(Endpoint, Endpoint)]) -> Result<Self> {
        if n == 0 {
            return Err(Error::Unsupported("n must be at least 1".into()));
        }
        let nt = strings.iter().flat_map(|(a, b)| [a, b]).filter(|e| matches!(e, Endpoint::T(_))).count();
        let nb = strings.iter().flat_map(|(a, b)| [a, b]).filter(|e| matches!(e, Endpoint::B(_))).count();
        let mut links = vec![None; 2 * n];
        let mut top = vec![None; nt];
        let mut bottom = vec![None; nb];
        let node = |e: Endpoint| match e {
            Endpoint::L(i) if i < n => Ok(Some(i)),
            Endpoint::R(i) if i < n => Ok(Some(n + i)),
            Endpoint::L(_) | Endpoint::R(_) => Err(Error::Parse(format!("{e} out of range"))),
            _ => Ok(None),
        };
        let place = |slots: &mut Vec<Option<Attachment>>, s: usize, a: Attachment| {
            if s >= slots.len() || slots[s].is_some() {
                return Err(Error::Parse(format!("bad boundary slot {}", s + 1)));
            }
            slots[s] = Some(a);
            Ok(())
        };
        for &(a, b) in strings {
            match (node(a)?, node(b)?) {
                (Some(x), Some(y)) => {
                    if x == y {
                        return Err(Error::Parse(format!("{a} joined to itself")));
                    }
                    for (p, q) in [(x, y), (y, x)] {
                        if links[p].is_some() {
                            return Err(Error::Parse(format!("node {p} reused")));
                        }
                        links[p] = Some(Link::Node(q as u8));
                    }
                }
                (Some(x), None) | (None, Some(x)) => {
                    let other = if node(a)?.is_some() { b } else { a };
                    if links[x].is_some() {
                        return Err(Error::Parse(format!("node {x} reused")));
                    }
                    match other {
                        Endpoint::T(s) => {
                            links[x] = Some(Link::Top);
                            place(&mut top, s, Attachment::Node(x))?;
                        }
                        Endpoint::B(s) => {
                            links[x] = Some(Link::Bottom);
                            place(&mut bottom, s, Attachment::Node(x))?;
                        }
                        _ => unreachable!(),
                    }
                }
                (None, None) => match (a, b) {
                    (Endpoint::T(s), Endpoint::B(t)) | (Endpoint::B(t), Endpoint::T(s)) => {
                        place(&mut top, s, Attachment::Vertical)?;
                        place(&mut bottom, t, Attachment::Vertical)?;
                    }
                    _ => return Err(Error::Parse(format!("{a}-{b} is a boundary arc"))),
                },
            }
        }
        let links: Vec<Link> = links
            .into_iter()
            .enumerate()
            .map(|(k, l)| l.ok_or_else(|| Error::Parse(format!("node {k} uncovered"))))
            .collect::<Result<_>>()?;
        let top: Vec<Attachment> =
            top.into_iter().map(|a| a.ok_or_else(|| Error::Parse("top slot gap".into()))).collect::<Result<_>>()?;
        let bottom: Vec<Attachment> = bottom
            .into_iter()
            .map(|a| a.ok_or_else(|| Error::Parse("bottom slot gap".into())))
            .collect::<Result<_>>()?;
        if !top.len().is_multiple_of(2) || !bottom.len().is_multiple_of(2) {
            return Err(Error::Parse("each boundary needs an even number of strings".into()));
        }
        let chords: Vec<(usize, usize)> =
            strings.iter().map(|&(a, b)| (cyclic_position(a, n, nb, nt), cyclic_position(b, n, nb, nt))).collect();
        if first_crossing(&chords).is_some() {
            return Err(Error::Parse("strings cross".into()));
        }
        // Node attachments must agree with the planar order of each boundary.
        let d = TwoBoundaryTLDiagram { n, links, top, bottom };
        let t_nodes: Vec<usize> =
            d.top.iter().filter_map(|a| if let Attachment::Node(k) = a { Some(*k) } else { None }).collect();
        let b_nodes: Vec<usize> =
            d.bottom.iter().filter_map(|a| if let Attachment::Node(k) = a { Some(*k) } else { None }).collect();
        let probe = Diagram::from_parts_unchecked_relaxed(n, &d.links);
        if probe.0 != t_nodes || probe.1 != b_nodes {
            return Err(Error::Parse("boundary slots out of planar order".into()));
        }
        Ok(d)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn verticals(&self) -> usize {
        self.top.iter().filter(|a| **a == Attachment::Vertical).count()
    }

    pub fn top(&self) -> &[Attachment] {
        &self.top
    }

    pub fn bottom(&self) -> &[Attachment] {
        &self.bottom
    }

    /// Reinterpret a ghost-free two-boundary diagram.
    pub fn from_diagram(d: &Diagram) -> Result<Self> {
        if d.variant() != Variant::GH2 || d.has_ghosts() {
            return Err(Error::Mismatch("expected a ghost-free dense two-boundary diagram".into()));
        }
        Ok(TwoBoundaryTLDiagram {
            n: d.n(),
            links: d.links().to_vec(),
            top: d.top_order().into_iter().map(Attachment::Node).collect(),
            bottom: d.bottom_order().into_iter().map(Attachment::Node).collect(),
        })
    }

    pub fn strings(&self) -> Vec<(Endpoint, Endpoint)> {
        let n = self.n;
        let mut out = Vec::new();
        let node = |k: usize| if k < n { Endpoint::L(k) } else { Endpoint::R(k - n) };
        for k in 0..2 * n {
            if let Link::Node(j) = self.links[k] {
                if j as usize > k {
                    out.push((node(k), node(j as usize)));
                }
            }
        }
        let mut verticals_top = Vec::new();
        for (s, a) in self.top.iter().enumerate() {
            match a {
                Attachment::Node(k) => out.push((node(*k), Endpoint::T(s))),
                Attachment::Vertical => verticals_top.push(s),
            }
        }
        let mut vb = 0;
        for (s, a) in self.bottom.iter().enumerate() {
            match a {
                Attachment::Node(k) => out.push((node(*k), Endpoint::B(s))),
                Attachment::Vertical => {
                    out.push((Endpoint::T(verticals_top[vb]), Endpoint::B(s)));
                    vb += 1;
                }
            }
        }
        out
    }

    fn push_side(
        &self,
        items: &mut Vec<crate::diagram::network::Item>,
        base: usize,
        side: &[Attachment],
        vpoints: &[usize],
    ) {
        let mut v = 0;
        for a in side {
            match a {
                Attachment::Node(k) => items.push(crate::diagram::network::Item::Attach(base + k)),
                Attachment::Vertical => {
                    items.push(crate::diagram::network::Item::Attach(vpoints[v]));
                    v += 1;
                }
            }
        }
    }

    /// Product in the two-boundary TL algebra; vertical strings survive.
    pub fn mul(&self, o: &Self) -> Result<(Monomial, Self)> {
        if self.n != o.n {
            return Err(Error::Mismatch("different sizes".into()));
        }
        let n = self.n;
        let (va, vb) = (self.verticals(), o.verticals());
        let mut net = Network::new(4 * n + va + vb);
        let vpoints_a: Vec<usize> = (0..va).map(|k| 4 * n + k).collect();
        let vpoints_b: Vec<usize> = (0..vb).map(|k| 4 * n + va + k).collect();
        for &p in vpoints_a.iter().chain(&vpoints_b) {
            net.touch(p);
        }
        for (base, d) in [(0, self), (2 * n, o)] {
            for k in 0..2 * n {
                match d.links[k] {
                    Link::Node(j) if (j as usize) > k => net.join(base + k, base + j as usize),
                    Link::Top | Link::Bottom => net.touch(base + k),
                    _ => {}
                }
            }
        }
        for i in 0..n {
            net.mark_outer(i, i);
            net.join(n + i, 2 * n + i);
            net.mark_outer(3 * n + i, n + i);
        }
        let (mut top, mut bottom) = (Vec::new(), Vec::new());
        self.push_side(&mut top, 0, &self.top, &vpoints_a);
        o.push_side(&mut top, 2 * n, &o.top, &vpoints_b);
        self.push_side(&mut bottom, 0, &self.bottom, &vpoints_a);
        o.push_side(&mut bottom, 2 * n, &o.bottom, &vpoints_b);
        net.top = top;
        net.bottom = bottom;
        let red = net.reduce(2 * n, ParamMode::Standard, true);
        let links: Vec<Link> = red
            .targets
            .iter()
            .map(|t| match t {
                Some(Target::Node(j)) => Link::Node(*j as u8),
                Some(Target::Top) => Link::Top,
                Some(Target::Bottom) => Link::Bottom,
                None => unreachable!("dense products cover every node"),
            })
            .collect();
        let conv = |v: &[usize]| {
            v.iter().map(|&k| if k == usize::MAX { Attachment::Vertical } else { Attachment::Node(k) }).collect()
        };
        debug_assert_eq!(red.top_ghosts, 0);
        debug_assert_eq!(red.bottom_ghosts, 0);
        Ok((red.weight, TwoBoundaryTLDiagram { n, links, top: conv(&red.top_nodes), bottom: conv(&red.bottom_nodes) }))
    }
}

impl Diagram {
    /// Planar boundary orders implied by a link vector, without validation.
    pub(crate) fn from_parts_unchecked_relaxed(n: usize, links: &[Link]) -> (Vec<usize>, Vec<usize>) {
        let mut top: Vec<usize> = (0..n).filter(|&i| links[i] == Link::Top).collect();
        top.extend((n..2 * n).rev().filter(|&i| links[i] == Link::Top));
        let mut bottom: Vec<usize> = (0..n).rev().filter(|&i| links[i] == Link::Bottom).collect();
        bottom.extend((n..2 * n).filter(|&i| links[i] == Link::Bottom));
        (top, bottom)
    }
}

/// Replace each vertical string by its parameter, leaving a ghost at each end.
pub fn psi(d: &TwoBoundaryTLDiagram, mode: ParamMode) -> Element<Poly> {
    let n = d.n;
    let mut weight = Monomial::one();
    let tpos: Vec<usize> = (0..d.top.len()).filter(|&i| d.top[i] == Attachment::Vertical).collect();
    let bpos: Vec<usize> = (0..d.bottom.len()).filter(|&i| d.bottom[i] == Attachment::Vertical).collect();
    for (&i, &j) in tpos.iter().zip(&bpos) {
        weight.bump(arc_param(mode, ArcKind::TopBottom, i % 2 == 0, j % 2 == 0));
    }
    let bits = |side: &[Attachment]| {
        let mut b = 0u64;
        let mut dom = 0;
        for a in side {
            match a {
                Attachment::Node(_) => dom += 1,
                Attachment::Vertical => b ^= 1 << dom,
            }
        }
        b
    };
    let out = Diagram::from_parts(n, Variant::GH2, d.links.clone(), bits(&d.top), bits(&d.bottom))
        .expect("vertical removal yields a basis diagram");
    Element::term(out, Poly::monomial(weight))
}

/// Reinterpret an element inside a larger algebra with the same diagrams.
pub fn include<C: Coefficient>(a: &Element<C>, target: Variant) -> Result<Element<C>> {
    let src = a.variant();
    let ok = (src.density <= target.density) && (src.boundaries.count() <= target.boundaries.count());
    if !ok {
        return Err(Error::Mismatch(format!("{src} is not contained in {target}")));
    }
    let mut out = Element::zero(a.n(), target);
    for (d, c) in a.terms() {
        let e = Diagram::from_parts(d.n(), target, d.links().to_vec(), d.top_bits(), d.bottom_bits())?;
        out.add_term(e, c.clone());
    }
    Ok(out)
}

/// Turn every string of a dense element into a dashed string.
///
/// A dashed string is the sum of the string and its absence; an absent
/// boundary string leaves a ghost where it was attached.
pub fn dilute_embed<C: Coefficient>(a: &Element<C>) -> Result<Element<C>> {
    let src = a.variant();
    if src.is_dilute() {
        return Err(Error::Mismatch("source must be dense".into()));
    }
    let target = src.with_density(Density::Dilute);
    let mut out = Element::zero(a.n(), target);
    for (d, c) in a.terms() {
        for e in dashed_expansion(d, target) {
            out.add_term(e, c.clone());
        }
    }
    Ok(out)
}

fn dashed_expansion(d: &Diagram, target: Variant) -> Vec<Diagram> {
    let raw = d.to_raw();
    let m = raw.strings.len();
    let mut out = Vec::with_capacity(1 << m);
    for mask in 0..(1u64 << m) {
        let keep: Vec<bool> = (0..m).map(|k| (mask >> k) & 1 == 1).collect();
        out.push(subset(&raw, &keep, target));
    }
    out
}

fn subset(raw: &RawDiagram, keep: &[bool], target: Variant) -> Diagram {
    let n = raw.n;
    let mut strings = Vec::new();
    let mut empty = Vec::new();
    let mut gone_top = vec![false; raw.top_ghosts.len() - 1];
    let mut gone_bottom = vec![false; raw.bottom_ghosts.len() - 1];
    for (k, &(a, b)) in raw.strings.iter().enumerate() {
        if keep[k] {
            strings.push((a, b));
            continue;
        }
        for e in [a, b] {
            match e {
                Endpoint::T(s) => gone_top[s] = true,
                Endpoint::B(s) => gone_bottom[s] = true,
                _ => empty.push(e),
            }
        }
    }
    let regroup = |ghosts: &[u32], gone: &[bool]| {
        let mut out = vec![ghosts[0]];
        let mut remap = Vec::new();
        for (s, &g) in gone.iter().enumerate() {
            if g {
                *out.last_mut().unwrap() += 1 + ghosts[s + 1];
                remap.push(None);
            } else {
                remap.push(Some(out.len() - 1));
                out.push(ghosts[s + 1]);
            }
        }
        (out, remap)
    };
    let (tg, tmap) = regroup(&raw.top_ghosts, &gone_top);
    let (bg, bmap) = regroup(&raw.bottom_ghosts, &gone_bottom);
    let fix = |e: Endpoint| match e {
        Endpoint::T(s) => Endpoint::T(tmap[s].unwrap()),
        Endpoint::B(s) => Endpoint::B(bmap[s].unwrap()),
        _ => e,
    };
    let strings = strings.into_iter().map(|(a, b)| (fix(a), fix(b))).collect();
    let _ = n;
    RawDiagram { n: raw.n, variant: target, strings, empty, top_ghosts: tg, bottom_ghosts: bg }
        .canonicalize()
        .expect("dashed expansion keeps basis rules")
}

/// Shift every parameter down by one: the dilute algebra's `p` stands for the dense `p + 1`.
pub fn shift_down(p: &Poly) -> Poly {
    p.substitute(|q| Poly::var(q) - Poly::one())
}

pub fn shift_element(a: &Element<Poly>) -> Element<Poly> {
    a.map_coeffs(shift_down)
}

/// Add a string joining the new last nodes; dashed in the dilute case.
pub fn add_strand<C: Coefficient>(a: &Element<C>) -> Result<Element<C>> {
    let v = a.variant();
    if v.boundaries == Boundaries::Two {
        return Err(Error::Unsupported("strand addition needs at most one boundary".into()));
    }
    let n = a.n();
    let mut out = Element::zero(n + 1, v);
    for (d, c) in a.terms() {
        let shift = |l: Link| match l {
            Link::Node(j) if (j as usize) >= n => Link::Node(j + 1),
            l => l,
        };
        let mut links: Vec<Link> = (0..n).map(|i| shift(d.link(i))).collect();
        links.push(Link::Empty);
        links.extend((n..2 * n).map(|i| shift(d.link(i))));
        links.push(Link::Empty);
        let mut choices = vec![true];
        if v.is_dilute() {
            choices.push(false);
        }
        for present in choices {
            let mut l = links.clone();
            if present {
                l[n] = Link::Node((2 * n + 1) as u8);
                l[2 * n + 1] = Link::Node(n as u8);
            }
            out.add_term(Diagram::from_parts(n + 1, v, l, d.top_bits(), d.bottom_bits())?, c.clone());
        }
    }
    Ok(out)
}

/// The standard parameters, each as its own variable.
pub fn standard_params() -> [ParamId; 9] {
    use ParamId::*;
    [Beta, Alpha1, Alpha2, Alpha3, Gamma12, Gamma3, Delta1, Delta2, Delta3]
}

/// Every two-boundary TL diagram on `n` nodes with at most `max_vertical` vertical strings.
pub fn enumerate_tl2(n: usize, max_vertical: usize) -> Vec<TwoBoundaryTLDiagram> {
    // Walk the cyclic order with the top and bottom boundaries as extra points.
    let mut out = Vec::new();
    for d in crate::enumeration::all_diagrams(n, Variant::GH2) {
        if d.has_ghosts() {
            continue;
        }
        let base = TwoBoundaryTLDiagram::from_diagram(&d).expect("ghost-free");
        for v in 0..=max_vertical {
            // Insert v verticals at every admissible pair of top and bottom positions.
            insert_verticals(&base, v, &mut out);
        }
    }
    out.sort();
    out.dedup();
    out
}

fn insert_verticals(base: &TwoBoundaryTLDiagram, v: usize, out: &mut Vec<TwoBoundaryTLDiagram>) {
    if v == 0 {
        out.push(base.clone());
        return;
    }
    // Verticals sit in the region between the last top-attached left node and the
    // first top-attached right node, and likewise at the bottom.
    let n = base.n;
    let t_split = base.top.iter().take_while(|a| matches!(a, Attachment::Node(k) if *k < n)).count();
    let b_split = base.bottom.iter().take_while(|a| matches!(a, Attachment::Node(k) if *k < n)).count();
    // A vertical separates left from right, so no string may join the halves.
    if (0..n).any(|i| matches!(base.links[i], Link::Node(j) if (j as usize) >= n)) {
        return;
    }
    let mut d = base.clone();
    for _ in 0..v {
        d.top.insert(t_split, Attachment::Vertical);
        d.bottom.insert(b_split, Attachment::Vertical);
    }
    if d.top.len().is_multiple_of(2) && d.bottom.len().is_multiple_of(2) {
        out.push(d);
    }
}
