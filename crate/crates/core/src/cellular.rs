//! Cell datum and checks of the three cellularity axioms.
//!
//! Cells are indexed by defect count; `M(λ)` is the half-diagram table for λ
//! defects and `C(S, T)` glues `S` to the reflection of `T`.

use std::collections::{BTreeMap, HashSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::Element;
use crate::diagram::{Diagram, Variant};
use crate::enumeration::{all_diagrams, cut, dim_formula, glue, half_tables, HalfDiagram};
use crate::error::Result;
use crate::scalars::{ParamMode, Poly};

pub struct CellDatum {
    n: usize,
    variant: Variant,
    cells: Vec<Vec<HalfDiagram>>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AxiomReport {
    pub axiom: u8,
    pub variant: String,
    pub n: usize,
    pub checked: usize,
    pub failures: usize,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
}

impl AxiomReport {
    fn new(axiom: u8, d: &CellDatum, checked: usize, failures: Vec<String>) -> Self {
        AxiomReport {
            axiom,
            variant: d.variant.to_string(),
            n: d.n,
            checked,
            failures: failures.len(),
            pass: failures.is_empty(),
            first_failure: failures.into_iter().next(),
        }
    }
}

impl CellDatum {
    pub fn new(n: usize, variant: Variant) -> Self {
        CellDatum { n, variant, cells: half_tables(n, variant) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// `M(λ)`.
    pub fn cell(&self, lambda: usize) -> &[HalfDiagram] {
        &self.cells[lambda]
    }

    pub fn c(&self, lambda: usize, s: usize, t: usize) -> Diagram {
        glue(&self.cells[lambda][s], &self.cells[lambda][t]).expect("same cell")
    }

    pub fn pair_count(&self) -> usize {
        self.cells.iter().map(|m| m.len() * m.len()).sum()
    }

    /// `C` is injective and its image is the diagram basis.
    pub fn check_axiom1(&self) -> AxiomReport {
        let mut seen = HashSet::new();
        let mut failures = Vec::new();
        for lambda in 0..=self.n {
            let m = self.cells[lambda].len();
            for s in 0..m {
                for t in 0..m {
                    let z = self.c(lambda, s, t);
                    if z.throughlines() != lambda {
                        failures.push(format!("C({lambda}; {s}, {t}) has {} throughlines", z.throughlines()));
                    }
                    if !seen.insert(z.clone()) {
                        failures.push(format!("collision at {z}"));
                    }
                }
            }
        }
        let pairs = self.pair_count();
        if dim_formula(self.n, self.variant) != pairs.into() {
            failures.push(format!("{pairs} pairs against dimension {}", dim_formula(self.n, self.variant)));
        }
        let basis: HashSet<Diagram> = all_diagrams(self.n, self.variant).into_iter().collect();
        if basis != seen {
            failures.push("image differs from the diagram basis".into());
        }
        AxiomReport::new(1, self, pairs, failures)
    }

    /// Reflection swaps the two halves and reverses products.
    pub fn check_axiom2(&self, mode: ParamMode) -> AxiomReport {
        let mut failures = Vec::new();
        let mut checked = 0;
        for lambda in 0..=self.n {
            let m = self.cells[lambda].len();
            for s in 0..m {
                for t in 0..m {
                    checked += 1;
                    if self.c(lambda, s, t).reflect() != self.c(lambda, t, s) {
                        failures.push(format!("reflection of C({lambda}; {s}, {t})"));
                    }
                }
            }
        }
        // Anti-involution on a deterministic sample of products.
        let basis = all_diagrams(self.n, self.variant);
        let step = (basis.len() / 40).max(1);
        let sample: Vec<&Diagram> = basis.iter().step_by(step).collect();
        for x in &sample {
            for y in &sample {
                let xy = x.concat(y, mode).expect("same algebra");
                let yx = y.reflect().concat(&x.reflect(), mode).expect("same algebra");
                if xy.weight != yx.weight
                    || xy.annihilated != yx.annihilated
                    || xy.result.as_ref().map(Diagram::reflect) != yx.result
                {
                    failures.push(format!("(xy)* != y*x* for {x} and {y}"));
                }
            }
        }
        AxiomReport::new(2, self, checked, failures)
    }

    /// `a C(S, T)` modulo fewer throughlines has coefficients over `S'` that do not depend on `T`.
    pub fn check_axiom3(&self, multipliers: &[Element<Poly>], mode: ParamMode) -> AxiomReport {
        let results: Vec<(usize, Vec<String>)> = (0..=self.n)
            .into_par_iter()
            .map(|lambda| {
                let mut failures = Vec::new();
                let mut checked = 0;
                let m = self.cells[lambda].len();
                for (ai, a) in multipliers.iter().enumerate() {
                    for s in 0..m {
                        let mut reference: Option<BTreeMap<HalfDiagram, Poly>> = None;
                        for t in 0..m {
                            checked += 1;
                            let rhs = Element::basis(self.c(lambda, s, t));
                            let prod = a.mul(&rhs, mode, &()).expect("same algebra");
                            let mut row = BTreeMap::new();
                            for (z, coef) in prod.terms() {
                                if z.throughlines() < lambda {
                                    continue;
                                }
                                let (left, right) = cut(z);
                                if right != self.cells[lambda][t] || z.throughlines() != lambda {
                                    failures
                                        .push(format!("multiplier {ai} moved the right half of C({lambda}; {s}, {t})"));
                                    continue;
                                }
                                row.entry(left).or_insert_with(Poly::zero).add_assign_ref(coef);
                            }
                            row.retain(|_, c| !c.is_zero());
                            match &reference {
                                None => reference = Some(row),
                                Some(r) if *r != row => failures.push(format!(
                                    "multiplier {ai}: coefficients of C({lambda}; {s}, {t}) depend on T"
                                )),
                                _ => {}
                            }
                        }
                    }
                }
                (checked, failures)
            })
            .collect();
        let checked = results.iter().map(|r| r.0).sum();
        let failures = results.into_iter().flat_map(|r| r.1).collect();
        AxiomReport::new(3, self, checked, failures)
    }

    /// Every basis diagram, each as a multiplier.
    pub fn basis_multipliers(&self) -> Vec<Element<Poly>> {
        all_diagrams(self.n, self.variant).into_iter().map(Element::basis).collect()
    }

    /// A seeded sample of basis diagrams plus random sums of them.
    pub fn sampled_multipliers(&self, count: usize, seed: u64) -> Vec<Element<Poly>> {
        let basis = all_diagrams(self.n, self.variant);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out: Vec<Element<Poly>> = Vec::with_capacity(count);
        for k in 0..count {
            if k % 5 == 4 {
                let mut e = Element::zero(self.n, self.variant);
                for (c, d) in basis.choose_multiple(&mut rng, 3).enumerate() {
                    e.add_term(d.clone(), Poly::constant((c + 1) as i64));
                }
                out.push(e);
            } else {
                out.push(Element::basis(basis.choose(&mut rng).expect("nonempty basis").clone()));
            }
        }
        out
    }

    pub fn check_all(&self, multipliers: &[Element<Poly>], mode: ParamMode) -> Result<Vec<AxiomReport>> {
        Ok(vec![self.check_axiom1(), self.check_axiom2(mode), self.check_axiom3(multipliers, mode)])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tl2_cells() {
        let d = CellDatum::new(2, Variant::TL);
        assert_eq!(d.pair_count(), 2);
        assert!(d.check_axiom1().pass);
    }

    #[test]
    fn identity_multiplier_is_the_indicator() {
        let d = CellDatum::new(2, Variant::GH1);
        let id = vec![Element::identity(2, Variant::GH1)];
        let r = d.check_axiom3(&id, ParamMode::Standard);
        assert!(r.pass, "{r:?}");
        for lambda in 0..=2 {
            for s in 0..d.cell(lambda).len() {
                let z = d.c(lambda, s, 0);
                let p = id[0].mul(&Element::basis(z.clone()), ParamMode::Standard, &()).unwrap();
                assert_eq!(p, Element::basis(z));
            }
        }
    }

    #[test]
    fn symmetric_pairs_are_fixed_by_reflection() {
        let d = CellDatum::new(2, Variant::GH2);
        for lambda in 0..=2 {
            for s in 0..d.cell(lambda).len() {
                let z = d.c(lambda, s, s);
                assert_eq!(z.reflect(), z);
            }
        }
    }
}
