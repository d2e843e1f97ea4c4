//! Seeded sampling of generic spectral points, parameters and solution families.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::boundary::{solve_constraint, ArcParams, Family};
use super::relations::BoundarySide;
use crate::error::{Error, Result};
use crate::scalars::{ParamBinding, ParamId, ParamMode, Spectral};

type C = Complex64;

/// Distance kept from every singular locus.
pub const MARGIN: f64 = 0.05;

pub struct Sampler {
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn real(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    pub fn complex(&mut self, radius: f64) -> C {
        C::new(self.real(-radius, radius), self.real(-radius, radius))
    }

    /// `λ` with `|sin λ|` and `|sin 2λ|` bounded away from zero.
    pub fn dense(&mut self) -> Spectral {
        loop {
            let lambda = self.real(0.2, 2.9);
            if lambda.sin().abs() > MARGIN && (2.0 * lambda).sin().abs() > MARGIN {
                return Spectral::Dense { lambda };
            }
        }
    }

    /// `φ` with `|sin 2φ|`, `|cos 2φ|` and `|sin 3φ|` bounded away from zero.
    pub fn dilute(&mut self) -> Spectral {
        loop {
            let phi = self.real(0.1, 1.4);
            let ok = [(2.0 * phi).sin(), (2.0 * phi).cos(), (3.0 * phi).sin(), (4.0 * phi).sin(), phi.cos()]
                .iter()
                .all(|x| x.abs() > MARGIN);
            if ok {
                return Spectral::Dilute { phi };
            }
        }
    }

    pub fn spectral_like(&mut self, spec: Spectral) -> Spectral {
        match spec {
            Spectral::Dense { .. } => self.dense(),
            Spectral::Dilute { .. } => self.dilute(),
        }
    }

    /// A spectral parameter with a small imaginary part, away from the zeros of `sin 2u`.
    pub fn point(&mut self) -> C {
        loop {
            let u = C::new(self.real(0.1, 1.4), self.real(-0.3, 0.3));
            if (2.0 * u).sin().norm() > MARGIN {
                return u;
            }
        }
    }

    /// Two points with `sin 2u`, `sin 2v`, `sin(u ± v)` all nonsingular.
    pub fn pair(&mut self) -> (C, C) {
        loop {
            let (u, v) = (self.point(), self.point());
            if (u - v).sin().norm() > MARGIN && (u + v).sin().norm() > MARGIN {
                return (u, v);
            }
        }
    }

    /// Random values for every parameter, with `β` fixed by the spectral constant.
    pub fn binding(&mut self, spec: Spectral) -> ParamBinding {
        let mut env = ParamBinding::with_spectral(spec);
        for p in ParamId::ALL {
            if p != ParamId::Beta {
                let z = C::new(self.real(0.3, 1.5), self.real(-0.5, 0.5));
                env.set(p, if self.rng.gen_bool(0.5) { z } else { -z });
            }
        }
        env
    }

    /// A member of the named family with random free parameters.
    ///
    /// Constrained families take `σ` from a root of their side condition.
    pub fn family(
        &mut self,
        name: &str,
        spec: Spectral,
        env: &ParamBinding,
        side: BoundarySide,
        mode: ParamMode,
    ) -> Result<Family> {
        let r = |s: &mut Self| s.complex(1.0);
        Ok(match name {
            "dense-I" => {
                let (c1, c2, c4) = (r(self), r(self), r(self));
                Family::DenseI { kappa: r(self), c: [c1, c2, c2 * c4 / c1, c4] }
            }
            "dense-II" => Family::DenseII { kappa: r(self) },
            "dilute-I" => Family::DiluteI { mu: r(self), nu: r(self) },
            "dilute-II" => Family::DiluteII { mu: r(self), nu: r(self) },
            "dilute-IV" => Family::DiluteIV { mu: r(self), nu: r(self), sigma: r(self), tau: r(self) },
            "dilute-III" | "dilute-V" => {
                let phi = match spec {
                    Spectral::Dilute { phi } => phi,
                    Spectral::Dense { .. } => return Err(Error::Mismatch(format!("{name} needs a dilute model"))),
                };
                let alphas: ArcParams = side.arc_params(env, mode)?;
                let tau = r(self);
                let roots = solve_constraint(name, &alphas, phi, tau)?;
                let sigma = if roots.identically_zero {
                    r(self)
                } else {
                    roots.roots[self.rng.gen_range(0..roots.roots.len())]
                };
                if name == "dilute-III" {
                    Family::DiluteIII { sigma, tau }
                } else {
                    Family::DiluteV { c2: r(self), c3: r(self), sigma, tau }
                }
            }
            _ => return Err(Error::Parse(format!("unknown solution family {name}"))),
        })
    }
}

pub const DENSE_FAMILIES: [&str; 2] = ["dense-I", "dense-II"];
pub const DILUTE_FAMILIES: [&str; 5] = ["dilute-I", "dilute-II", "dilute-III", "dilute-IV", "dilute-V"];
