//! Boundary triangle coefficients: the solution families and their constraints.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::faces::TriangleShape;
use crate::error::{Error, Result};
use crate::scalars::{ParamBinding, ParamId, ParamMode, Spectral};

type C = Complex64;

fn c(x: f64) -> C {
    C::new(x, 0.0)
}

/// `P(σ, τ; θ) = 2στ cos θ + (σ² − τ²) sin θ`.
pub fn p_form(sigma: C, tau: C, theta: f64) -> C {
    2.0 * sigma * tau * theta.cos() + (sigma * sigma - tau * tau) * theta.sin()
}

/// Boundary-arc parameters seen by one boundary, `[α1, α2, α3, α4]`.
///
/// In standard mode the fourth entry repeats the third.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcParams(pub [C; 4]);

impl ArcParams {
    pub fn top(env: &ParamBinding, mode: ParamMode) -> Result<Self> {
        Self::read(env, mode, [ParamId::Alpha1, ParamId::Alpha2, ParamId::Alpha3, ParamId::Alpha4])
    }

    pub fn bottom(env: &ParamBinding, mode: ParamMode) -> Result<Self> {
        Self::read(env, mode, [ParamId::Delta1, ParamId::Delta2, ParamId::Delta3, ParamId::Delta4])
    }

    fn read(env: &ParamBinding, mode: ParamMode, ids: [ParamId; 4]) -> Result<Self> {
        let a3 = env.get(ids[2])?;
        let a4 = match mode {
            ParamMode::Standard => a3,
            ParamMode::Generalised => env.get(ids[3])?,
        };
        Ok(ArcParams([env.get(ids[0])?, env.get(ids[1])?, a3, a4]))
    }

    /// `A1 = α1² + α2² − 2 α3 α4`.
    pub fn a1(&self) -> C {
        let [a1, a2, a3, a4] = self.0;
        a1 * a1 + a2 * a2 - 2.0 * a3 * a4
    }

    /// `A2 = α1 α2 − α3 α4`.
    pub fn a2(&self) -> C {
        let [a1, a2, a3, a4] = self.0;
        a1 * a2 - a3 * a4
    }
}

/// A solution family with its free parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family")]
pub enum Family {
    #[serde(rename = "dense-I")]
    DenseI { kappa: C, c: [C; 4] },
    #[serde(rename = "dense-II")]
    DenseII { kappa: C },
    #[serde(rename = "dilute-I")]
    DiluteI { mu: C, nu: C },
    #[serde(rename = "dilute-II")]
    DiluteII { mu: C, nu: C },
    #[serde(rename = "dilute-III")]
    DiluteIII { sigma: C, tau: C },
    #[serde(rename = "dilute-IV")]
    DiluteIV { mu: C, nu: C, sigma: C, tau: C },
    #[serde(rename = "dilute-V")]
    DiluteV { c2: C, c3: C, sigma: C, tau: C },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::DenseI { .. } => "dense-I",
            Family::DenseII { .. } => "dense-II",
            Family::DiluteI { .. } => "dilute-I",
            Family::DiluteII { .. } => "dilute-II",
            Family::DiluteIII { .. } => "dilute-III",
            Family::DiluteIV { .. } => "dilute-IV",
            Family::DiluteV { .. } => "dilute-V",
        }
    }

    pub fn is_dilute(&self) -> bool {
        !matches!(self, Family::DenseI { .. } | Family::DenseII { .. })
    }

    /// Residual of the family's side condition; zero when it has none.
    pub fn constraint_residual(&self, alphas: &ArcParams, spec: Spectral) -> C {
        match (*self, spec) {
            (Family::DenseI { c, .. }, _) => c[0] * c[2] - c[1] * c[3],
            (Family::DiluteIII { sigma, tau }, Spectral::Dilute { phi }) => {
                alphas.a1() * p_form(sigma, tau, phi) + alphas.a2() * p_form(sigma, tau, -3.0 * phi)
            }
            (Family::DiluteV { sigma, tau, .. }, Spectral::Dilute { phi }) => {
                let (p1, p3) = (p_form(sigma, tau, phi), p_form(sigma, tau, -3.0 * phi));
                alphas.a1() * p1 * p3 + alphas.a2() * (p1 * p1 + p3 * p3)
            }
            _ => c(0.0),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Scalar profile multiplying every coefficient; the relations are homogeneous in it.
pub type Profile = Arc<dyn Fn(C) -> C + Send + Sync>;

/// A boundary operator: a family, its profile, and the coefficient-to-tile labelling.
#[derive(Clone)]
pub struct BoundaryOperator {
    pub family: Family,
    pub profile: Option<Profile>,
    pub labels: Labels,
}

impl fmt::Debug for BoundaryOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryOperator").field("family", &self.family).field("labels", &self.labels).finish()
    }
}

/// Which tile each `b_k` multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Labels {
    pub both: [TriangleShape; 4],
    pub single: [TriangleShape; 4],
}

impl Default for Labels {
    fn default() -> Self {
        super::calibration::CALIBRATED
    }
}

impl BoundaryOperator {
    pub fn new(family: Family) -> Self {
        BoundaryOperator { family, profile: None, labels: Labels::default() }
    }

    pub fn with_labels(mut self, labels: Labels) -> Self {
        self.labels = labels;
        self
    }

    pub fn with_profile(mut self, p: Profile) -> Self {
        self.profile = Some(p);
        self
    }

    /// Dense `[a, b1..b4]` or dilute `[a1, a2, b1..b8]`.
    pub fn coefficients(&self, spec: Spectral, u: C, alphas: &ArcParams) -> Result<Vec<C>> {
        let b = self.profile.as_ref().map(|p| p(u)).unwrap_or(c(1.0));
        let s2u = (2.0 * u).sin();
        if s2u.norm() < 1e-12 {
            return Err(Error::Singular(format!("sin(2u) = 0 at u = {u}")));
        }
        let [a1, a2, a3, a4] = alphas.0;
        let out = match (self.family, spec) {
            (Family::DenseI { kappa, c: k }, Spectral::Dense { lambda }) => {
                let sl = lambda.sin();
                let x = k[0] * a1 + k[2] * a2 + k[1] * a4 + k[3] * a3;
                let y = k[2] * a1 + k[0] * a2 + k[1] * a4 + k[3] * a3;
                let a = b / (2.0 * s2u * sl) * (kappa + x * (2.0 * u).cos() - y * (2.0 * u - lambda).cos());
                vec![a, k[0] * b, k[1] * b, k[2] * b, k[3] * b]
            }
            (Family::DenseII { kappa }, Spectral::Dense { lambda }) => {
                let sl = lambda.sin();
                let a = b / (2.0 * s2u * sl)
                    * (kappa - alphas.a1() * (2.0 * u).cos() + alphas.a2() * (2.0 * u - lambda).cos());
                vec![a, -a1 * b, a3 * b, -a2 * b, a4 * b]
            }
            (Family::DiluteI { mu, nu }, Spectral::Dilute { phi }) => {
                let f = mu * nu * (a1 + a2) + mu * mu * a3 + nu * nu * a4;
                let den = 2.0 * s2u * (2.0 * phi).sin();
                let g = (2.0 * (u - phi)).cos() - phi.cos();
                let x1 = (u - phi / 2.0).sin() * g * f + 4.0 * phi.cos() * (u - 1.5 * phi).sin();
                let x2 = (u + phi / 2.0).sin() * g * f + 4.0 * phi.cos() * (u + 1.5 * phi).sin();
                let s = (u - phi / 2.0).sin();
                vec![
                    -b / den * x1,
                    b / den * x2,
                    mu * nu * b * s,
                    nu * nu * b * s,
                    mu * nu * b * s,
                    mu * mu * b * s,
                    nu * b,
                    mu * b,
                    mu * b,
                    nu * b,
                ]
            }
            (Family::DiluteII { mu, nu }, Spectral::Dilute { phi }) => {
                let f = mu * nu * (a1 + a2) + mu * mu * a3 + nu * nu * a4;
                let den = 2.0 * s2u * (2.0 * phi).sin();
                let g = (2.0 * (u - phi)).cos() + phi.cos();
                let x1 = (u - phi / 2.0).cos() * g * f - 4.0 * phi.cos() * (u - 1.5 * phi).cos();
                let x2 = (u + phi / 2.0).cos() * g * f - 4.0 * phi.cos() * (u + 1.5 * phi).cos();
                let s = (u - phi / 2.0).cos();
                vec![
                    -b / den * x1,
                    -b / den * x2,
                    mu * nu * b * s,
                    nu * nu * b * s,
                    mu * nu * b * s,
                    mu * mu * b * s,
                    nu * b,
                    mu * b,
                    -mu * b,
                    -nu * b,
                ]
            }
            (Family::DiluteIII { sigma, tau }, Spectral::Dilute { phi }) => {
                let common = sigma * (u - phi).cos() + tau * (u - phi).sin();
                let p3 = p_form(sigma, tau, -3.0 * phi);
                let aa = alphas.a1();
                vec![
                    b / s2u * aa * (sigma * u.cos() + tau * u.sin()) * common,
                    b / s2u * aa * (sigma * u.cos() - tau * u.sin()) * common,
                    a1 * b * p3,
                    -a3 * b * p3,
                    a2 * b * p3,
                    -a4 * b * p3,
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                ]
            }
            (Family::DiluteIV { mu, nu, sigma, tau }, Spectral::Dilute { phi }) => {
                let f = mu * nu * (a1 + a2) + mu * mu * a3 + nu * nu * a4;
                let common = sigma * (u - phi).cos() + tau * (u - phi).sin();
                let (p1, p3) = (p_form(sigma, tau, phi), p_form(sigma, tau, -3.0 * phi));
                let x = (nu * a2 + mu * a3) * p1 + (nu * a1 + mu * a3) * p3;
                let y = (mu * a1 + nu * a4) * p1 + (mu * a2 + nu * a4) * p3;
                vec![
                    b / s2u * (a1 - a2) * f * (sigma * u.cos() + tau * u.sin()) * common,
                    b / s2u * (a1 - a2) * f * (sigma * u.cos() - tau * u.sin()) * common,
                    mu * b * x,
                    nu * b * x,
                    -nu * b * y,
                    -mu * b * y,
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                ]
            }
            (Family::DiluteV { c2, c3, sigma, tau }, Spectral::Dilute { phi }) => {
                let c2p = (2.0 * phi).cos();
                let common = sigma * (u - phi).cos() + tau * (u - phi).sin();
                let (p1, p3, pm) = (p_form(sigma, tau, phi), p_form(sigma, tau, -3.0 * phi), p_form(sigma, tau, -phi));
                let g = (c2 * a1 + c3 * a3) * p3 + (c2 * a2 + c3 * a3) * p1;
                let pre = b / (4.0 * s2u * c2p * c2p) * (a1 - a2) * g;
                let h = a1 * p3 + a2 * p1;
                vec![
                    pre * (sigma * u.cos() + tau * u.sin()) * common,
                    pre * (sigma * u.cos() - tau * u.sin()) * common,
                    c2 * b / (2.0 * c2p) * pm * h,
                    -c2 * a3 * b * pm * pm,
                    -c3 * a3 * b * pm * pm,
                    c3 * b / (2.0 * c2p) * pm * h,
                    c(0.0),
                    c(0.0),
                    c(0.0),
                    c(0.0),
                ]
            }
            (f, s) => return Err(Error::Mismatch(format!("family {f} does not fit spectral constant {s:?}"))),
        };
        Ok(out)
    }

    /// Tile weights at `u`, pairing each coefficient with its tile.
    pub fn shape_weights(&self, spec: Spectral, u: C, alphas: &ArcParams) -> Result<Vec<(TriangleShape, C)>> {
        let k = self.coefficients(spec, u, alphas)?;
        let l = &self.labels;
        Ok(if self.family.is_dilute() {
            let mut v = vec![(TriangleShape::Arc, k[0]), (TriangleShape::Empty, k[1])];
            v.extend(l.both.iter().copied().zip(k[2..6].iter().copied()));
            v.extend(l.single.iter().copied().zip(k[6..10].iter().copied()));
            v
        } else {
            let mut v = vec![(TriangleShape::Arc, k[0])];
            v.extend(l.both.iter().copied().zip(k[1..5].iter().copied()));
            v
        })
    }
}

/// Roots `σ` of the family's side condition for a given `τ`.
///
/// Solution III gives a quadratic, solution V a quartic. A vanishing leading
/// coefficient drops the degree; an identically zero condition returns no roots
/// and reports `identically_zero`.
#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintRoots {
    pub roots: Vec<C>,
    pub identically_zero: bool,
    pub max_residual: f64,
}

pub fn solve_constraint(family: &str, alphas: &ArcParams, phi: f64, tau: C) -> Result<ConstraintRoots> {
    if tau.norm() < 1e-300 {
        return Err(Error::Singular("tau must be nonzero".into()));
    }
    // P(σ, τ; θ) as a polynomial in σ, low degree first.
    let p = |theta: f64| vec![-tau * tau * theta.sin(), 2.0 * tau * theta.cos(), c(theta.sin())];
    let (a1, a2) = (alphas.a1(), alphas.a2());
    let poly = match family {
        "dilute-III" | "III" => poly_add(&poly_scale(&p(phi), a1), &poly_scale(&p(-3.0 * phi), a2)),
        "dilute-V" | "V" => {
            let (p1, p3) = (p(phi), p(-3.0 * phi));
            poly_add(
                &poly_scale(&poly_mul(&p1, &p3), a1),
                &poly_scale(&poly_add(&poly_mul(&p1, &p1), &poly_mul(&p3, &p3)), a2),
            )
        }
        _ => return Err(Error::Unsupported(format!("no side condition for family {family}"))),
    };
    let scale = poly.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut poly = poly;
    while poly.last().is_some_and(|x| x.norm() <= 1e-13 * scale.max(1e-300)) {
        poly.pop();
    }
    if poly.is_empty() || scale == 0.0 {
        return Ok(ConstraintRoots { roots: Vec::new(), identically_zero: true, max_residual: 0.0 });
    }
    let roots = roots_of(&poly);
    let eval = |s: C| {
        let fam = match family {
            "dilute-III" | "III" => Family::DiluteIII { sigma: s, tau },
            _ => Family::DiluteV { c2: c(0.0), c3: c(0.0), sigma: s, tau },
        };
        fam.constraint_residual(alphas, Spectral::Dilute { phi }).norm() / scale
    };
    let max_residual = roots.iter().map(|&r| eval(r)).fold(0.0, f64::max);
    Ok(ConstraintRoots { roots, identically_zero: false, max_residual })
}

fn poly_add(a: &[C], b: &[C]) -> Vec<C> {
    (0..a.len().max(b.len()))
        .map(|i| a.get(i).copied().unwrap_or(c(0.0)) + b.get(i).copied().unwrap_or(c(0.0)))
        .collect()
}

fn poly_scale(a: &[C], s: C) -> Vec<C> {
    a.iter().map(|x| x * s).collect()
}

fn poly_mul(a: &[C], b: &[C]) -> Vec<C> {
    let mut r = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    r
}

fn horner(p: &[C], x: C) -> C {
    p.iter().rev().fold(c(0.0), |acc, k| acc * x + k)
}

/// All complex roots: Durand–Kerner, then Newton polishing.
fn roots_of(p: &[C]) -> Vec<C> {
    let deg = p.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = p[deg];
    let monic: Vec<C> = p.iter().map(|x| x / lead).collect();
    if deg == 1 {
        return vec![-monic[0]];
    }
    if deg == 2 {
        let disc = (monic[1] * monic[1] - 4.0 * monic[0]).sqrt();
        return vec![(-monic[1] + disc) / 2.0, (-monic[1] - disc) / 2.0];
    }
    let radius = 1.0 + monic[..deg].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let mut z: Vec<C> =
        (0..deg).map(|k| C::from_polar(radius, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / deg as f64)).collect();
    for _ in 0..500 {
        let mut delta: f64 = 0.0;
        for i in 0..deg {
            let mut den = c(1.0);
            for j in 0..deg {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    let dp: Vec<C> = (1..=deg).map(|k| monic[k] * k as f64).collect();
    for r in z.iter_mut() {
        for _ in 0..5 {
            let d = horner(&dp, *r);
            if d.norm() == 0.0 {
                break;
            }
            *r -= horner(&monic, *r) / d;
        }
    }
    z
}
