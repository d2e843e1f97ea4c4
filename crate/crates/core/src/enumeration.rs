//! Half-diagrams, dimension formulas and the cut/glue bijection.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::diagram::{Diagram, Link, Variant};
use crate::error::{Error, Result};

/// What a node of a half-diagram is attached to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum HalfLink {
    Empty,
    Node(u8),
    Defect,
    Top,
    Bottom,
}

/// The left half of a diagram after cutting every throughline.
///
/// Ghost bits follow the same domain convention as [`Diagram`]; the last
/// domain of each boundary is the one facing the cut and is fixed so that
/// each boundary has even parity on its own.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfDiagram {
    n: usize,
    variant: Variant,
    links: Vec<HalfLink>,
    top: u64,
    bottom: u64,
}

impl HalfDiagram {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn links(&self) -> &[HalfLink] {
        &self.links
    }

    pub fn defects(&self) -> usize {
        self.links.iter().filter(|l| **l == HalfLink::Defect).count()
    }

    pub fn link_count(&self) -> usize {
        self.links.iter().filter(|l| matches!(l, HalfLink::Node(_))).count() / 2
    }

    pub fn top_count(&self) -> usize {
        self.links.iter().filter(|l| **l == HalfLink::Top).count()
    }

    pub fn bottom_count(&self) -> usize {
        self.links.iter().filter(|l| **l == HalfLink::Bottom).count()
    }

    pub fn top_bits(&self) -> u64 {
        self.top
    }

    pub fn bottom_bits(&self) -> u64 {
        self.bottom
    }
}

impl std::fmt::Display for HalfDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .links
            .iter()
            .map(|l| match l {
                HalfLink::Empty => "o".to_string(),
                HalfLink::Node(j) => format!("{}", *j as usize + 1),
                HalfLink::Defect => "|".to_string(),
                HalfLink::Top => "T".to_string(),
                HalfLink::Bottom => "B".to_string(),
            })
            .collect();
        write!(f, "{}{}<{}", self.variant, self.n, parts.join(" "))?;
        if self.variant.boundaries.has_top() {
            write!(f, " t{:b}", self.top)?;
        }
        if self.variant.boundaries.has_bottom() {
            write!(f, " b{:b}", self.bottom)?;
        }
        f.write_str(">")
    }
}

fn parity_fix(bits: u64, count: usize) -> u64 {
    let p = (bits.count_ones() as usize + count) % 2;
    bits | ((p as u64) << count)
}

/// Every half-diagram with `d` defects, sorted.
pub fn enumerate_half(n: usize, d: usize, variant: Variant) -> Vec<HalfDiagram> {
    let mut shapes = Vec::new();
    let mut links = vec![HalfLink::Empty; n];
    shape_rec(0, n, d, variant, Phase::Top, &mut Vec::new(), &mut links, &mut shapes);
    let mut out = Vec::new();
    for links in shapes {
        let nt = links.iter().filter(|l| **l == HalfLink::Top).count();
        let nb = links.iter().filter(|l| **l == HalfLink::Bottom).count();
        for tb in 0..(1u64 << nt) {
            for bb in 0..(1u64 << nb) {
                out.push(HalfDiagram {
                    n,
                    variant,
                    links: links.clone(),
                    top: if variant.boundaries.has_top() { parity_fix(tb, nt) } else { 0 },
                    bottom: if variant.boundaries.has_bottom() { parity_fix(bb, nb) } else { 0 },
                });
            }
        }
    }
    out.sort();
    out
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Phase {
    Top,
    Mid,
    Bottom,
}

#[allow(clippy::too_many_arguments)]
fn shape_rec(
    i: usize,
    n: usize,
    d_left: usize,
    variant: Variant,
    phase: Phase,
    stack: &mut Vec<usize>,
    links: &mut Vec<HalfLink>,
    out: &mut Vec<Vec<HalfLink>>,
) {
    if i == n {
        if stack.is_empty() && d_left == 0 {
            out.push(links.clone());
        }
        return;
    }
    // Prune: every open link and every remaining defect needs a node.
    if stack.len() + d_left > n - i {
        return;
    }
    if variant.is_dilute() {
        links[i] = HalfLink::Empty;
        shape_rec(i + 1, n, d_left, variant, phase, stack, links, out);
    }
    if let Some(&j) = stack.last() {
        stack.pop();
        links[i] = HalfLink::Node(j as u8);
        links[j] = HalfLink::Node(i as u8);
        shape_rec(i + 1, n, d_left, variant, phase, stack, links, out);
        links[j] = HalfLink::Empty;
        stack.push(j);
    }
    stack.push(i);
    links[i] = HalfLink::Empty;
    shape_rec(i + 1, n, d_left, variant, phase, stack, links, out);
    stack.pop();
    if stack.is_empty() {
        if phase == Phase::Top && variant.boundaries.has_top() {
            links[i] = HalfLink::Top;
            shape_rec(i + 1, n, d_left, variant, Phase::Top, stack, links, out);
        }
        if phase <= Phase::Mid && d_left > 0 {
            links[i] = HalfLink::Defect;
            shape_rec(i + 1, n, d_left - 1, variant, Phase::Mid, stack, links, out);
        }
        if variant.boundaries.has_bottom() {
            links[i] = HalfLink::Bottom;
            shape_rec(i + 1, n, d_left, variant, Phase::Bottom, stack, links, out);
        }
    }
    links[i] = HalfLink::Empty;
}

fn binom(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut r = BigUint::one();
    for i in 0..k {
        r = r * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    r
}

/// Noncrossing arrangements of `n` nodes with `j` links, unmatched nodes outside every link.
fn ballot(n: usize, j: usize) -> BigUint {
    if 2 * j > n {
        return BigUint::zero();
    }
    let a = binom(n, j);
    if j == 0 {
        return a;
    }
    a - binom(n, j - 1)
}

/// Number of half-diagrams with `d` defects, by the closed formula.
pub fn half_count_formula(n: usize, d: usize, variant: Variant) -> BigUint {
    let mut total = BigUint::zero();
    let vmax = if variant.is_dilute() { n } else { 0 };
    for v in 0..=vmax {
        let m = n - v;
        let mut inner = BigUint::zero();
        for j in 0..=m / 2 {
            if 2 * j + d > m {
                break;
            }
            let k = m - 2 * j - d;
            let boundary = match variant.boundaries.count() {
                0 => BigUint::from((k == 0) as u32),
                1 => BigUint::one() << k,
                _ => (BigUint::one() << k) * BigUint::from(k + 1),
            };
            inner += boundary * ballot(m, j);
        }
        total += binom(n, v) * inner;
    }
    total
}

/// Half-diagram count at fixed defects and links, one term of the sum.
pub fn half_count_term(n: usize, d: usize, j: usize, variant: Variant) -> BigUint {
    debug_assert!(!variant.is_dilute());
    if 2 * j + d > n {
        return BigUint::zero();
    }
    let k = n - 2 * j - d;
    let boundary = match variant.boundaries.count() {
        0 => BigUint::from((k == 0) as u32),
        1 => BigUint::one() << k,
        _ => (BigUint::one() << k) * BigUint::from(k + 1),
    };
    boundary * ballot(n, j)
}

/// Dimension of the algebra: the sum over defects of squared half-diagram counts.
pub fn dim_formula(n: usize, variant: Variant) -> BigUint {
    (0..=n).map(|d| half_count_formula(n, d, variant).pow(2)).sum()
}

/// Glue `x` on the left to the reflection of `y` on the right.
pub fn glue(x: &HalfDiagram, y: &HalfDiagram) -> Result<Diagram> {
    if x.n != y.n || x.variant != y.variant {
        return Err(Error::Mismatch("half-diagrams from different algebras".into()));
    }
    if x.defects() != y.defects() {
        return Err(Error::Mismatch(format!("defects {} vs {}", x.defects(), y.defects())));
    }
    let n = x.n;
    let mut links = vec![Link::Empty; 2 * n];
    let xd: Vec<usize> = (0..n).filter(|&i| x.links[i] == HalfLink::Defect).collect();
    let yd: Vec<usize> = (0..n).filter(|&i| y.links[i] == HalfLink::Defect).collect();
    for (side, h) in [(0, x), (n, y)] {
        for i in 0..n {
            links[side + i] = match h.links[i] {
                HalfLink::Empty => Link::Empty,
                HalfLink::Node(j) => Link::Node((side + j as usize) as u8),
                HalfLink::Defect => Link::Empty,
                HalfLink::Top => Link::Top,
                HalfLink::Bottom => Link::Bottom,
            };
        }
    }
    for (&a, &b) in xd.iter().zip(&yd) {
        links[a] = Link::Node((n + b) as u8);
        links[n + b] = Link::Node(a as u8);
    }
    let top = merge_bits(x.top, x.top_count(), y.top, y.top_count());
    let bottom = merge_bits(x.bottom, x.bottom_count(), y.bottom, y.bottom_count());
    Diagram::from_parts(n, x.variant, links, top, bottom)
}

fn merge_bits(xb: u64, xc: usize, yb: u64, yc: usize) -> u64 {
    let low = xb & ((1u64 << xc) - 1);
    let shared = ((xb >> xc) ^ (yb >> yc)) & 1;
    let mut r = low | (shared << xc);
    for k in 0..yc {
        // y's domain k sits at full domain xc + yc - k.
        r |= ((yb >> k) & 1) << (xc + yc - k);
    }
    r
}

/// The left half of a diagram.
pub fn left_half(z: &Diagram) -> HalfDiagram {
    let n = z.n();
    let links: Vec<HalfLink> = (0..n)
        .map(|i| match z.link(i) {
            Link::Empty => HalfLink::Empty,
            Link::Node(j) if (j as usize) < n => HalfLink::Node(j),
            Link::Node(_) => HalfLink::Defect,
            Link::Top => HalfLink::Top,
            Link::Bottom => HalfLink::Bottom,
        })
        .collect();
    let nt = links.iter().filter(|l| **l == HalfLink::Top).count();
    let nb = links.iter().filter(|l| **l == HalfLink::Bottom).count();
    let v = z.variant();
    let top = if v.boundaries.has_top() { parity_fix(z.top_bits() & ((1u64 << nt) - 1), nt) } else { 0 };
    let bottom = if v.boundaries.has_bottom() { parity_fix(z.bottom_bits() & ((1u64 << nb) - 1), nb) } else { 0 };
    HalfDiagram { n, variant: v, links, top, bottom }
}

/// Split a diagram into its left half and its reflected right half.
pub fn cut(z: &Diagram) -> (HalfDiagram, HalfDiagram) {
    (left_half(z), left_half(&z.reflect()))
}

/// All half-diagrams grouped by defect count, index `d`.
pub fn half_tables(n: usize, variant: Variant) -> Vec<Vec<HalfDiagram>> {
    (0..=n).map(|d| enumerate_half(n, d, variant)).collect()
}

/// Streams every basis diagram, defects descending, then by half pair.
pub struct DiagramIter {
    tables: Vec<Vec<HalfDiagram>>,
    d: usize,
    i: usize,
    j: usize,
    done: bool,
}

impl Iterator for DiagramIter {
    type Item = Diagram;
    fn next(&mut self) -> Option<Diagram> {
        loop {
            if self.done {
                return None;
            }
            let t = &self.tables[self.d];
            if self.i < t.len() {
                let out = glue(&t[self.i], &t[self.j]).expect("halves with equal defects glue");
                self.j += 1;
                if self.j == t.len() {
                    self.j = 0;
                    self.i += 1;
                }
                return Some(out);
            }
            if self.d == 0 {
                self.done = true;
            } else {
                self.d -= 1;
                self.i = 0;
                self.j = 0;
            }
        }
    }
}

/// Every basis diagram, provided the dimension fits in `budget`.
pub fn enumerate_diagrams(n: usize, variant: Variant, budget: u128) -> Result<DiagramIter> {
    if n == 0 {
        return Err(Error::Unsupported("n must be at least 1".into()));
    }
    let dim = dim_formula(n, variant);
    let needed = dim.to_u128().unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::Budget { needed, budget });
    }
    let tables = half_tables(n, variant);
    Ok(DiagramIter { d: n, tables, i: 0, j: 0, done: false })
}

/// Collect every basis diagram into a vector.
pub fn all_diagrams(n: usize, variant: Variant) -> Vec<Diagram> {
    enumerate_diagrams(n, variant, u128::MAX).map(|it| it.collect()).unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_node_counts() {
        assert_eq!(enumerate_half(1, 1, Variant::TL).len(), 1);
        assert_eq!(enumerate_half(1, 0, Variant::TL).len(), 0);
        assert_eq!(enumerate_half(1, 0, Variant::GH2).len(), 4);
    }

    #[test]
    fn half_counts_match_formula() {
        for v in Variant::ALL {
            for n in 1..=5 {
                for d in 0..=n {
                    let c = enumerate_half(n, d, v).len();
                    assert_eq!(BigUint::from(c), half_count_formula(n, d, v), "{v} n={n} d={d}");
                }
            }
        }
    }

    #[test]
    fn link_graded_counts_match_terms() {
        for v in [Variant::TL, Variant::GH1, Variant::GH2] {
            for n in 1..=6 {
                for d in 0..=n {
                    let halves = enumerate_half(n, d, v);
                    for j in 0..=n / 2 {
                        let c = halves.iter().filter(|h| h.link_count() == j).count();
                        assert_eq!(BigUint::from(c), half_count_term(n, d, j, v), "{v} n={n} d={d} j={j}");
                    }
                }
            }
        }
    }

    #[test]
    fn plain_dimensions() {
        let catalan = [1u32, 2, 5, 14, 42, 132];
        for (i, c) in catalan.iter().enumerate() {
            assert_eq!(dim_formula(i + 1, Variant::TL), BigUint::from(*c));
        }
        // Motzkin numbers at even index.
        let motzkin = [2u32, 9, 51, 323];
        for (i, m) in motzkin.iter().enumerate() {
            assert_eq!(dim_formula(i + 1, Variant::DTL), BigUint::from(*m));
        }
    }

    #[test]
    fn identity_halves() {
        for v in Variant::ALL {
            let id = Diagram::horizontal(3, v, &[true; 3]);
            let (x, y) = cut(&id);
            assert_eq!(x.defects(), 3);
            assert_eq!(x, y);
            assert_eq!(glue(&x, &y).unwrap(), id);
        }
    }

    #[test]
    fn budget_is_enforced() {
        match enumerate_diagrams(5, Variant::GH2, 1000) {
            Err(Error::Budget { needed, budget }) => {
                assert_eq!(needed, 135866);
                assert_eq!(budget, 1000);
            }
            _ => panic!("expected budget error"),
        }
    }
}
