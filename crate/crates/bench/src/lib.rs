//! Fixtures shared by the benchmarks.

use ghost_algebra::enumeration::all_diagrams;
use ghost_algebra::{Element, Poly, Variant};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Seeded pairs of basis elements of one algebra.
pub fn basis_pairs(n: usize, variant: Variant, count: usize, seed: u64) -> Vec<(Element<Poly>, Element<Poly>)> {
    let pool = all_diagrams(n, variant);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut pick = || Element::basis(pool.choose(&mut rng).expect("non-empty basis").clone());
            (pick(), pick())
        })
        .collect()
}

/// A dense element: the sum of the first `terms` basis diagrams with coefficient one.
pub fn wide_element(n: usize, variant: Variant, terms: usize) -> Element<Poly> {
    let mut e = Element::zero(n, variant);
    for d in all_diagrams(n, variant).into_iter().take(terms) {
        e.add_term(d, Poly::one());
    }
    e
}
