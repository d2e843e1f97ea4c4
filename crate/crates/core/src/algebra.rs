//! Algebra elements: finite linear combinations of basis diagrams.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::diagram::{Diagram, Variant};
use crate::error::{Error, Result};
use crate::scalars::{Coefficient, ParamMode, Poly};

#[derive(Clone, Debug)]
pub struct Element<C: Coefficient> {
    n: usize,
    variant: Variant,
    terms: HashMap<Diagram, C>,
}

impl<C: Coefficient> PartialEq for Element<C> {
    fn eq(&self, o: &Self) -> bool {
        self.n == o.n && self.variant == o.variant && self.terms == o.terms
    }
}

impl<C: Coefficient> Element<C> {
    pub fn zero(n: usize, variant: Variant) -> Self {
        Element { n, variant, terms: HashMap::new() }
    }

    pub fn basis(d: Diagram) -> Self {
        Element::term(d, C::one())
    }

    pub fn term(d: Diagram, c: C) -> Self {
        let mut e = Element::zero(d.n(), d.variant());
        e.add_term(d, c);
        e
    }

    /// Dense: the all-horizontal diagram. Dilute: the sum over every choice of
    /// present or absent horizontal strings.
    pub fn identity(n: usize, variant: Variant) -> Self {
        let mut e = Element::zero(n, variant);
        if variant.is_dilute() {
            for mask in 0..(1u32 << n) {
                let present: Vec<bool> = (0..n).map(|i| (mask >> i) & 1 == 1).collect();
                e.add_term(Diagram::horizontal(n, variant, &present), C::one());
            }
        } else {
            e.add_term(Diagram::horizontal(n, variant, &vec![true; n]), C::one());
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &Diagram) -> C {
        self.terms.get(d).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Diagram, &C)> {
        self.terms.iter()
    }

    /// Terms in canonical (sorted) order.
    pub fn sorted_terms(&self) -> Vec<(&Diagram, &C)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.cmp(b.0));
        v
    }

    pub fn add_term(&mut self, d: Diagram, c: C) {
        debug_assert_eq!((d.n(), d.variant()), (self.n, self.variant));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&d) {
            Some(slot) => {
                slot.add_assign(&c);
                if slot.is_zero() {
                    self.terms.remove(&d);
                }
            }
            None => {
                self.terms.insert(d, c);
            }
        }
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.n != o.n || self.variant != o.variant {
            return Err(Error::Mismatch(format!("{}{} vs {}{}", self.variant, self.n, o.variant, o.n)));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        let mut r = self.clone();
        for (d, c) in &o.terms {
            r.add_term(d.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.add(&o.scale(&C::one().neg()))
    }

    pub fn scale(&self, s: &C) -> Self {
        let mut r = Element::zero(self.n, self.variant);
        for (d, c) in &self.terms {
            r.add_term(d.clone(), c.mul(s));
        }
        r
    }

    /// Bilinear extension of diagram concatenation.
    pub fn mul(&self, o: &Self, mode: ParamMode, env: &C::Env) -> Result<Self> {
        self.check_same(o)?;
        Ok(self.mul_unchecked(o, mode, env))
    }

    fn mul_unchecked(&self, o: &Self, mode: ParamMode, env: &C::Env) -> Self {
        let left: Vec<(&Diagram, &C)> = self.terms.iter().collect();
        let right: Vec<(&Diagram, &C)> = o.terms.iter().collect();
        let partial = |chunk: &[(&Diagram, &C)]| {
            let mut acc = Element::zero(self.n, self.variant);
            for (x, cx) in chunk {
                for (y, cy) in &right {
                    let out = x.concat_unchecked(y, mode);
                    if let Some(d) = out.result {
                        let w = C::weight(&out.weight, env);
                        acc.add_term(d, cx.mul(cy).mul(&w));
                    }
                }
            }
            acc
        };
        if left.len() * right.len() < 4096 {
            return partial(&left);
        }
        left.par_chunks(16).map(partial).reduce(
            || Element::zero(self.n, self.variant),
            |mut a, b| {
                for (d, c) in b.terms {
                    a.add_term(d, c);
                }
                a
            },
        )
    }

    /// Anti-involution extended linearly.
    pub fn reflect(&self) -> Self {
        let mut r = Element::zero(self.n, self.variant);
        for (d, c) in &self.terms {
            r.add_term(d.reflect(), c.clone());
        }
        r
    }

    pub fn map_coeffs<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Element<D> {
        let mut r = Element::zero(self.n, self.variant);
        for (d, c) in &self.terms {
            r.add_term(d.clone(), f(c));
        }
        r
    }
}

impl Element<Complex64> {
    pub fn max_abs(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference, scaled by the largest coefficient on either side.
    pub fn relative_residual(&self, o: &Self) -> f64 {
        let diff = match self.sub(o) {
            Ok(d) => d,
            Err(_) => return f64::INFINITY,
        };
        let scale = self.max_abs().max(o.max_abs());
        if scale == 0.0 {
            return 0.0;
        }
        diff.max_abs() / scale
    }

    /// Drop coefficients with magnitude below `tol`.
    pub fn prune(&self, tol: f64) -> Self {
        let mut r = Element::zero(self.n, self.variant);
        for (d, c) in &self.terms {
            if c.norm() > tol {
                r.add_term(d.clone(), *c);
            }
        }
        r
    }
}

impl Element<Poly> {
    pub fn evaluate(&self, env: &crate::scalars::ParamBinding) -> Result<Element<Complex64>> {
        let mut r = Element::zero(self.n, self.variant);
        for (d, c) in &self.terms {
            r.add_term(d.clone(), c.evaluate(env)?);
        }
        Ok(r)
    }
}
