//! Local relations of the loop models and the transfer tangle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{ArcParams, BoundaryOperator};
use super::faces::{crossing_point, face, face_weights, triangle, TriangleShape};
use super::tangle::{Side, Tangle, TangleBuilder};
use crate::algebra::Element;
use crate::diagram::Variant;
use crate::error::{Error, Result};
use crate::scalars::{ParamBinding, ParamMode, Spectral};

type C = Complex64;

/// Default configuration budget for a single contraction.
pub const DEFAULT_BUDGET: u128 = 50_000_000;

fn density_variant(spec: Spectral, dense: Variant, dilute: Variant) -> Variant {
    match spec {
        Spectral::Dense { .. } => dense,
        Spectral::Dilute { .. } => dilute,
    }
}

fn bulk_env(spec: Spectral) -> ParamBinding {
    ParamBinding::with_spectral(spec)
}

fn contract(t: &Tangle, mode: ParamMode, env: &ParamBinding) -> Result<Element<C>> {
    t.contract(mode, env, DEFAULT_BUDGET)
}

/// Both sides of the Yang–Baxter equation on three strands.
pub fn ybe_sides(spec: Spectral, u: C, v: C) -> Result<(Element<C>, Element<C>)> {
    let var = density_variant(spec, Variant::TL, Variant::DTL);
    let env = bulk_env(spec);

    let mut b = TangleBuilder::new();
    let [nw, ne, se, sw, t, r1, mid, r2, bt] = b.points::<9>();
    b.slot(vec![nw, ne, se, sw], Side::Bulk, face(spec, u - v, [nw, ne, se, sw])?);
    b.slot(vec![ne, t, r1, mid], Side::Bulk, face(spec, v, [ne, t, r1, mid])?);
    b.slot(vec![se, mid, r2, bt], Side::Bulk, face(spec, u, [se, mid, r2, bt])?);
    let lhs = b.finish(3, var, vec![nw, sw, bt, t, r1, r2]);

    let mut b = TangleBuilder::new();
    let [l1, t, nw, mid, l2, sw, bt, ne, se] = b.points::<9>();
    b.slot(vec![l1, t, nw, mid], Side::Bulk, face(spec, u, [l1, t, nw, mid])?);
    b.slot(vec![l2, mid, sw, bt], Side::Bulk, face(spec, v, [l2, mid, sw, bt])?);
    b.slot(vec![nw, ne, se, sw], Side::Bulk, face(spec, u - v, [nw, ne, se, sw])?);
    let rhs = b.finish(3, var, vec![l1, l2, bt, t, ne, se]);

    Ok((contract(&lhs, ParamMode::Standard, &env)?, contract(&rhs, ParamMode::Standard, &env)?))
}

pub fn check_ybe(spec: Spectral, u: C, v: C) -> Result<f64> {
    let (l, r) = ybe_sides(spec, u, v)?;
    Ok(l.relative_residual(&r))
}

fn single_face(spec: Spectral, u: C, order: [usize; 4]) -> Result<Element<C>> {
    let var = density_variant(spec, Variant::TL, Variant::DTL);
    let mut b = TangleBuilder::new();
    let p = b.points::<4>();
    let frame = order.map(|k| p[k]);
    b.slot(p.to_vec(), Side::Bulk, face(spec, u, frame)?);
    // Outer: L1 = nw, L2 = sw, R1 = ne, R2 = se.
    let t = b.finish(2, var, vec![p[0], p[3], p[1], p[2]]);
    contract(&t, ParamMode::Standard, &bulk_env(spec))
}

/// Largest residual between a face and its rotations by a quarter, half and
/// three-quarter turn at the crossed spectral parameter.
pub fn check_crossing(spec: Spectral, u: C) -> Result<f64> {
    let x = C::new(crossing_point(spec), 0.0);
    // Physical points indexed nw = 0, ne = 1, se = 2, sw = 3.
    let base = single_face(spec, u, [0, 1, 2, 3])?;
    let quarter = single_face(spec, x - u, [3, 0, 1, 2])?;
    let half = single_face(spec, u, [2, 3, 0, 1])?;
    let three = single_face(spec, x - u, [1, 2, 3, 0])?;
    Ok([quarter, half, three].iter().map(|r| base.relative_residual(r)).fold(0.0, f64::max))
}

/// The scalar the inversion product is a multiple of the identity by.
pub fn inversion_factor(spec: Spectral, u: C) -> Result<C> {
    Ok(match spec {
        Spectral::Dense { lambda } => {
            let s = lambda.sin();
            (C::new(lambda, 0.0) - u).sin() * (C::new(lambda, 0.0) + u).sin() / (s * s)
        }
        Spectral::Dilute { .. } => face_weights(spec, u)?[4] * face_weights(spec, -u)?[4],
    })
}

pub fn inversion_product(spec: Spectral, u: C) -> Result<Element<C>> {
    let var = density_variant(spec, Variant::TL, Variant::DTL);
    let mut b = TangleBuilder::new();
    let [nw1, ne1, se1, sw1, ne2, se2] = b.points::<6>();
    b.slot(vec![nw1, ne1, se1, sw1], Side::Bulk, face(spec, u, [nw1, ne1, se1, sw1])?);
    b.slot(vec![ne1, ne2, se2, se1], Side::Bulk, face(spec, -u, [ne1, ne2, se2, se1])?);
    let t = b.finish(2, var, vec![nw1, sw1, ne2, se2]);
    contract(&t, ParamMode::Standard, &bulk_env(spec))
}

pub fn check_inversion(spec: Spectral, u: C) -> Result<f64> {
    let var = density_variant(spec, Variant::TL, Variant::DTL);
    let lhs = inversion_product(spec, u)?;
    let rhs = Element::<C>::identity(2, var).scale(&inversion_factor(spec, u)?);
    Ok(lhs.relative_residual(&rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundarySide {
    Top,
    Bottom,
}

impl BoundarySide {
    fn side(self, k: usize) -> Side {
        match self {
            BoundarySide::Top => Side::Top(k),
            BoundarySide::Bottom => Side::Bottom(k),
        }
    }

    /// Outer wiring for two strands; the bottom picture is the top one reflected
    /// about a horizontal line.
    fn outer(self, l1: usize, l2: usize, r1: usize, r2: usize) -> Vec<usize> {
        match self {
            BoundarySide::Top => vec![l1, l2, r1, r2],
            BoundarySide::Bottom => vec![l2, l1, r2, r1],
        }
    }

    pub fn arc_params(self, env: &ParamBinding, mode: ParamMode) -> Result<ArcParams> {
        match self {
            BoundarySide::Top => ArcParams::top(env, mode),
            BoundarySide::Bottom => ArcParams::bottom(env, mode),
        }
    }

    fn variant(self, spec: Spectral) -> Variant {
        match self {
            BoundarySide::Top => density_variant(spec, Variant::GH1, Variant::DGH1),
            BoundarySide::Bottom => density_variant(spec, Variant::GH2, Variant::DGH2),
        }
    }
}

/// Tile weights for the two triangles of a boundary relation.
pub type TriangleWeights = Vec<(TriangleShape, C)>;

/// Both sides of the boundary Yang–Baxter equation with explicit triangle weights.
#[allow(clippy::too_many_arguments)]
pub fn bybe_sides_with(
    spec: Spectral,
    side: BoundarySide,
    tri_u: &TriangleWeights,
    tri_v: &TriangleWeights,
    u: C,
    v: C,
    env: &ParamBinding,
    mode: ParamMode,
) -> Result<(Element<C>, Element<C>)> {
    let var = side.variant(spec);

    let mut b = TangleBuilder::new();
    let [nw1, ne1, se1, sw1, nw2, ne2, se2, x] = b.points::<8>();
    b.slot(vec![nw1, ne1, se1, sw1], Side::Bulk, face(spec, u - v, [nw1, ne1, se1, sw1])?);
    b.slot(vec![ne1, nw2], side.side(0), triangle(tri_u, [ne1, nw2]));
    b.slot(vec![nw2, ne2, se2, se1], Side::Bulk, face(spec, u + v, [nw2, ne2, se2, se1])?);
    b.slot(vec![ne2, x], side.side(1), triangle(tri_v, [ne2, x]));
    let lhs = b.finish(2, var, side.outer(nw1, sw1, x, se2));

    let mut b = TangleBuilder::new();
    let [y, nwa, nea, sea, swa, nwb, neb, seb] = b.points::<8>();
    b.slot(vec![y, nwa], side.side(0), triangle(tri_v, [y, nwa]));
    b.slot(vec![nwa, nea, sea, swa], Side::Bulk, face(spec, u + v, [nwa, nea, sea, swa])?);
    b.slot(vec![nea, nwb], side.side(1), triangle(tri_u, [nea, nwb]));
    b.slot(vec![nwb, neb, seb, sea], Side::Bulk, face(spec, u - v, [nwb, neb, seb, sea])?);
    let rhs = b.finish(2, var, side.outer(y, swa, neb, seb));

    Ok((contract(&lhs, mode, env)?, contract(&rhs, mode, env)?))
}

pub fn bybe_sides(
    spec: Spectral,
    side: BoundarySide,
    op: &BoundaryOperator,
    u: C,
    v: C,
    env: &ParamBinding,
    mode: ParamMode,
) -> Result<(Element<C>, Element<C>)> {
    let a = side.arc_params(env, mode)?;
    let tu = op.shape_weights(spec, u, &a)?;
    let tv = op.shape_weights(spec, v, &a)?;
    bybe_sides_with(spec, side, &tu, &tv, u, v, env, mode)
}

pub fn check_bybe(
    spec: Spectral,
    side: BoundarySide,
    op: &BoundaryOperator,
    u: C,
    v: C,
    env: &ParamBinding,
    mode: ParamMode,
) -> Result<f64> {
    let (l, r) = bybe_sides(spec, side, op, u, v, env, mode)?;
    Ok(l.relative_residual(&r))
}

/// Spectral and orientation choices of the double row.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Layout {
    /// Whether each column, the top triangle and the bottom triangle use the crossed parameter.
    pub crossed: [bool; 4],
    /// Whether the top and bottom triangle legs are read right to left.
    pub reversed: [bool; 2],
}

pub const LAYOUT: Layout = Layout { crossed: [true, false, true, false], reversed: [false, false] };

/// The double-row transfer tangle on `n` strands.
///
/// Row `r` holds two faces; with [`LAYOUT`] the left one is at the crossed
/// parameter and the right one at `u` in the square frame of [`face`], the top
/// triangle is at the crossed parameter and the bottom one at `u`.
pub fn transfer_tangle(
    spec: Spectral,
    n: usize,
    u: C,
    top: &BoundaryOperator,
    bottom: &BoundaryOperator,
    env: &ParamBinding,
    mode: ParamMode,
) -> Result<Tangle> {
    transfer_tangle_with(spec, n, u, top, bottom, env, mode, LAYOUT)
}

#[allow(clippy::too_many_arguments)]
pub fn transfer_tangle_with(
    spec: Spectral,
    n: usize,
    u: C,
    top: &BoundaryOperator,
    bottom: &BoundaryOperator,
    env: &ParamBinding,
    mode: ParamMode,
    layout: Layout,
) -> Result<Tangle> {
    if n == 0 {
        return Err(Error::Unsupported("transfer tangle needs at least one strand".into()));
    }
    let var = density_variant(spec, Variant::GH2, Variant::DGH2);
    let x = C::new(crossing_point(spec), 0.0);
    let at = |k: usize| if layout.crossed[k] { x - u } else { u };
    let legs = |h: [usize; 2], rev: bool| if rev { [h[1], h[0]] } else { h };
    let mut b = TangleBuilder::new();
    let left: Vec<usize> = (0..n).map(|_| b.point()).collect();
    let right: Vec<usize> = (0..n).map(|_| b.point()).collect();
    let mid: Vec<usize> = (0..n).map(|_| b.point()).collect();
    let h: Vec<[usize; 2]> = (0..=n).map(|_| b.points::<2>()).collect();

    let top_w = top.shape_weights(spec, at(2), &ArcParams::top(env, mode)?)?;
    b.slot(h[0].to_vec(), Side::Top(0), triangle(&top_w, legs(h[0], layout.reversed[0])));
    for r in 0..n {
        let (t, d) = (h[r], h[r + 1]);
        let p = [left[r], t[0], mid[r], d[0]];
        b.slot(p.to_vec(), Side::Bulk, face(spec, at(0), p)?);
        let p = [mid[r], t[1], right[r], d[1]];
        b.slot(p.to_vec(), Side::Bulk, face(spec, at(1), p)?);
    }
    let bottom_w = bottom.shape_weights(spec, at(3), &ArcParams::bottom(env, mode)?)?;
    b.slot(h[n].to_vec(), Side::Bottom(0), triangle(&bottom_w, legs(h[n], layout.reversed[1])));

    let outer = left.iter().chain(right.iter()).copied().collect();
    Ok(b.finish(n, var, outer))
}

#[allow(clippy::too_many_arguments)]
pub fn transfer(
    spec: Spectral,
    n: usize,
    u: C,
    top: &BoundaryOperator,
    bottom: &BoundaryOperator,
    env: &ParamBinding,
    mode: ParamMode,
    budget: u128,
) -> Result<Element<C>> {
    transfer_tangle(spec, n, u, top, bottom, env, mode)?.contract(mode, env, budget)
}

/// `max |T(u)T(v) − T(v)T(u)|`, relative to the larger product.
#[allow(clippy::too_many_arguments)]
pub fn commutation_residual(
    spec: Spectral,
    n: usize,
    u: C,
    v: C,
    top: &BoundaryOperator,
    bottom: &BoundaryOperator,
    env: &ParamBinding,
    mode: ParamMode,
    budget: u128,
) -> Result<f64> {
    let tu = transfer(spec, n, u, top, bottom, env, mode, budget)?;
    let tv = transfer(spec, n, v, top, bottom, env, mode, budget)?;
    let uv = tu.mul(&tv, mode, env)?;
    let vu = tv.mul(&tu, mode, env)?;
    Ok(uv.relative_residual(&vu))
}
