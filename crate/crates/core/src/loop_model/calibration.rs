//! Which boundary tile each triangle coefficient multiplies.
//!
//! The labelling is found by search: every assignment of the four two-leg
//! ghost patterns (and, for the dilute model, the four one-leg shapes) to the
//! coefficient slots is tried against a reference solution family, and the
//! assignments with vanishing boundary Yang–Baxter residual survive.

use std::collections::HashMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::boundary::{ArcParams, BoundaryOperator, Labels};
use super::faces::TriangleShape;
use super::relations::{bybe_sides_with, BoundarySide};
use super::sampling::Sampler;
use crate::algebra::Element;
use crate::diagram::Diagram;
use crate::error::Result;
use crate::scalars::{ParamMode, Spectral};

type C = Complex64;

const fn both(left: bool, middle: bool, right: bool) -> TriangleShape {
    TriangleShape::Both { left, middle, right }
}

const fn single(leg_b: bool, ghost_right: bool) -> TriangleShape {
    TriangleShape::Single { leg_b, ghost_right }
}

/// The frozen labelling; `tests/data/tile_labels.json` holds the search output it came from.
pub const CALIBRATED: Labels = Labels {
    both: [both(false, false, false), both(true, true, false), both(true, false, true), both(false, true, true)],
    single: [single(false, false), single(false, true), single(true, true), single(true, false)],
};

fn permutations(items: [TriangleShape; 4]) -> Vec<[TriangleShape; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let idx = [a, b, c, d];
                    let mut seen = [false; 4];
                    if idx.iter().all(|&i| !std::mem::replace(&mut seen[i], true)) {
                        out.push(idx.map(|i| items[i]));
                    }
                }
            }
        }
    }
    out
}

/// Both sides of one boundary relation expanded over the tile pair in the two triangles.
struct Expansion {
    shapes: Vec<TriangleShape>,
    dim: usize,
    lhs: Vec<Vec<Vec<C>>>,
    rhs: Vec<Vec<Vec<C>>>,
    ku: Vec<C>,
    kv: Vec<C>,
}

impl Expansion {
    #[allow(clippy::too_many_arguments)]
    fn build(sampler: &mut Sampler, spec: Spectral, family: &str, mode: ParamMode) -> Result<Self> {
        let env = sampler.binding(spec);
        let side = BoundarySide::Top;
        let fam = sampler.family(family, spec, &env, side, mode)?;
        let (u, v) = sampler.pair();
        let alphas = ArcParams::top(&env, mode)?;
        let op = BoundaryOperator::new(fam);
        let ku = op.coefficients(spec, u, &alphas)?;
        let kv = op.coefficients(spec, v, &alphas)?;
        let mut shapes = vec![TriangleShape::Arc];
        if fam.is_dilute() {
            shapes.push(TriangleShape::Empty);
        }
        shapes.extend(TriangleShape::both_patterns());
        if fam.is_dilute() {
            shapes.extend(TriangleShape::single_patterns());
        }
        let mut index: HashMap<Diagram, usize> = HashMap::new();
        let mut raw = Vec::new();
        for &si in &shapes {
            let mut row = Vec::new();
            for &sj in &shapes {
                let (l, r) = bybe_sides_with(
                    spec,
                    side,
                    &vec![(si, C::new(1.0, 0.0))],
                    &vec![(sj, C::new(1.0, 0.0))],
                    u,
                    v,
                    &env,
                    mode,
                )?;
                for e in [&l, &r] {
                    for (d, _) in e.terms() {
                        let k = index.len();
                        index.entry(d.clone()).or_insert(k);
                    }
                }
                row.push((l, r));
            }
            raw.push(row);
        }
        let dim = index.len();
        let dense = |e: &Element<C>| {
            let mut v = vec![C::new(0.0, 0.0); dim];
            for (d, c) in e.terms() {
                v[index[d]] = *c;
            }
            v
        };
        let lhs = raw.iter().map(|row| row.iter().map(|(l, _)| dense(l)).collect()).collect();
        let rhs = raw.iter().map(|row| row.iter().map(|(_, r)| dense(r)).collect()).collect();
        Ok(Expansion { shapes, dim, lhs, rhs, ku, kv })
    }

    fn residual(&self, labels: &Labels, dilute: bool) -> f64 {
        let pos = |s: TriangleShape| self.shapes.iter().position(|&x| x == s).expect("shape present");
        let place = |k: &[C]| {
            let mut w = vec![C::new(0.0, 0.0); self.shapes.len()];
            w[pos(TriangleShape::Arc)] = k[0];
            let off = if dilute {
                w[pos(TriangleShape::Empty)] = k[1];
                for (s, c) in labels.single.iter().zip(&k[6..10]) {
                    w[pos(*s)] = *c;
                }
                2
            } else {
                1
            };
            for (s, c) in labels.both.iter().zip(&k[off..off + 4]) {
                w[pos(*s)] = *c;
            }
            w
        };
        let (wu, wv) = (place(&self.ku), place(&self.kv));
        let mut l = vec![C::new(0.0, 0.0); self.dim];
        let mut r = vec![C::new(0.0, 0.0); self.dim];
        for (i, a) in wu.iter().enumerate() {
            for (j, b) in wv.iter().enumerate() {
                let c = a * b;
                if c.norm() == 0.0 {
                    continue;
                }
                for (k, (x, y)) in l.iter_mut().zip(r.iter_mut()).enumerate() {
                    *x += c * self.lhs[i][j][k];
                    *y += c * self.rhs[i][j][k];
                }
            }
        }
        let scale = l.iter().chain(&r).map(|x| x.norm()).fold(0.0, f64::max);
        let diff = l.iter().zip(&r).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }
}

/// Assignments that survive the search, in a stable order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CalibrationReport {
    pub tolerance: f64,
    pub samples: usize,
    /// Survivors of the reference family alone.
    pub dense_reference: usize,
    pub dilute_reference: usize,
    /// Survivors of every family.
    pub dense: Vec<[String; 4]>,
    pub dilute: Vec<[[String; 4]; 2]>,
}

fn expansions(sampler: &mut Sampler, dilute: bool, family: &str, samples: usize) -> Result<Vec<Expansion>> {
    let mut out = Vec::new();
    for mode in [ParamMode::Standard, ParamMode::Generalised] {
        for _ in 0..samples {
            let spec = if dilute { sampler.dilute() } else { sampler.dense() };
            out.push(Expansion::build(sampler, spec, family, mode)?);
        }
    }
    Ok(out)
}

fn survivors(
    sampler: &mut Sampler,
    candidates: Vec<Labels>,
    dilute: bool,
    family: &str,
    samples: usize,
    tol: f64,
) -> Result<Vec<Labels>> {
    let exp = expansions(sampler, dilute, family, samples)?;
    Ok(candidates.into_iter().filter(|l| exp.iter().all(|e| e.residual(l, dilute) < tol)).collect())
}

/// Try every labelling against the reference family (dense solution II, dilute
/// solution I), then narrow the survivors with the remaining families.
///
/// Returns the dense and dilute survivors and a summary.
pub fn calibrate(seed: u64, samples: usize, tolerance: f64) -> Result<(Vec<Labels>, Vec<Labels>, CalibrationReport)> {
    let mut sampler = Sampler::new(seed);
    let both_perms = permutations(TriangleShape::both_patterns());
    let single_perms = permutations(TriangleShape::single_patterns());

    let all_dense: Vec<Labels> = both_perms.iter().map(|&b| Labels { both: b, single: CALIBRATED.single }).collect();
    let mut dense = survivors(&mut sampler, all_dense, false, "dense-II", samples, tolerance)?;
    let dense_reference = dense.len();
    dense = survivors(&mut sampler, dense, false, "dense-I", samples, tolerance)?;

    let all_dilute: Vec<Labels> =
        both_perms.iter().flat_map(|&b| single_perms.iter().map(move |&s| Labels { both: b, single: s })).collect();
    let mut dilute = survivors(&mut sampler, all_dilute, true, "dilute-I", samples, tolerance)?;
    let dilute_reference = dilute.len();
    for fam in ["dilute-II", "dilute-III", "dilute-IV", "dilute-V"] {
        dilute = survivors(&mut sampler, dilute, true, fam, samples, tolerance)?;
    }

    let codes = |a: &[TriangleShape; 4]| a.map(|s| s.code());
    let report = CalibrationReport {
        tolerance,
        samples,
        dense_reference,
        dilute_reference,
        dense: dense.iter().map(|l| codes(&l.both)).collect(),
        dilute: dilute.iter().map(|l| [codes(&l.both), codes(&l.single)]).collect(),
    };
    Ok((dense, dilute, report))
}
