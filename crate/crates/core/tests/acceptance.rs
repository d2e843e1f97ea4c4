//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use ghost_algebra::cellular::CellDatum;
use ghost_algebra::enumeration::{all_diagrams, cut, dim_formula, enumerate_diagrams, glue};
use ghost_algebra::loop_model::calibration::CALIBRATED;
use ghost_algebra::loop_model::relations::{bybe_sides_with, DEFAULT_BUDGET};
use ghost_algebra::loop_model::sampling::{DENSE_FAMILIES, DILUTE_FAMILIES};
use ghost_algebra::loop_model::*;
use ghost_algebra::morphisms::{add_strand, dilute_embed, enumerate_tl2, psi, shift_element};
use ghost_algebra::{Diagram, Element, Monomial, ParamId, ParamMode, Poly, RawDiagram, Variant};
use num_bigint::BigUint;
use num_complex::Complex64 as C;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Check = (&'static str, Box<dyn Fn() -> Outcome>);

const POINTS: usize = 20;
const TOL: f64 = 1e-9;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

// Reference dimension table, rows n = 1..10, columns Gh1, Gh2, dGh1, dGh2.
const DIMENSIONS: [[u64; 4]; 10] = [
    [5, 17, 10, 26],
    [30, 186, 117, 521],
    [185, 1_813, 1_407, 9_355],
    [1_150, 16_102, 17_083, 156_947],
    [7_170, 135_866, 208_284, 2_514_932],
    [44_760, 1_099_276, 2_544_751, 38_968_815],
    [279_585, 8_639_133, 31_125_138, 588_475_298],
    [1_746_870, 66_258_526, 380_928_795, 8_706_799_523],
    [10_916_150, 498_701_470, 4_663_705_782, 126_690_947_758],
    [68_219_860, 3_693_607_300, 57_109_857_519, 1_818_028_127_339],
];

const GHOSTS: [Variant; 4] = [Variant::GH1, Variant::GH2, Variant::DGH1, Variant::DGH2];

fn dimension_table() -> Outcome {
    let start = Instant::now();
    for (row, n) in DIMENSIONS.iter().zip(1..) {
        for (&want, v) in row.iter().zip(GHOSTS) {
            let got = dim_formula(n, v);
            ensure(got == BigUint::from(want), || format!("{v} n={n}: {got} != {want}"))?;
        }
    }
    within(start, Duration::from_secs(1))?;
    Ok(format!("40 entries in {:.2?}", start.elapsed()))
}

const ENUMERATED: [(Variant, usize); 4] =
    [(Variant::GH1, 5), (Variant::GH2, 4), (Variant::DGH1, 4), (Variant::DGH2, 3)];

fn enumeration_matches_formula() -> Outcome {
    let start = Instant::now();
    let mut total = 0usize;
    for (v, max) in ENUMERATED {
        let mut last = 0usize;
        for n in 1..=max {
            let mut seen = std::collections::HashSet::new();
            for d in enumerate_diagrams(n, v, u128::MAX).map_err(|e| e.to_string())? {
                ensure(d.to_raw().validate().is_empty(), || format!("{v} n={n}: invalid {d}"))?;
                ensure(seen.insert(d), || format!("{v} n={n}: duplicate"))?;
            }
            ensure(BigUint::from(seen.len()) == dim_formula(n, v), || format!("{v} n={n}: count {}", seen.len()))?;
            last = seen.len();
            total += last;
        }
        let want = match v {
            Variant::GH1 => 7_170,
            Variant::GH2 => 16_102,
            Variant::DGH1 => 17_083,
            _ => 9_355,
        };
        ensure(last == want, || format!("{v} n={max}: {last} diagrams, expected {want}"))?;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{total} diagrams in {:.2?}", start.elapsed()))
}

fn diagram(n: usize, variant: Variant, strings: &str, empty: &str, top: &[u32], bottom: &[u32]) -> Diagram {
    let ends = |s: &str| s.split_whitespace().map(|e| e.parse().unwrap()).collect::<Vec<_>>();
    RawDiagram {
        n,
        variant,
        strings: strings
            .split_whitespace()
            .map(|p| {
                let (a, b) = p.split_once('-').unwrap();
                (a.parse().unwrap(), b.parse().unwrap())
            })
            .collect(),
        empty: ends(empty),
        top_ghosts: top.to_vec(),
        bottom_ghosts: bottom.to_vec(),
    }
    .canonicalize()
    .unwrap()
}

fn monomial(ps: &[ParamId]) -> Monomial {
    let mut m = Monomial::one();
    for &p in ps {
        m.bump(p);
    }
    m
}

fn worked_products() -> Outcome {
    use ParamId::*;
    let g2 = Variant::GH2;
    let d2 = Variant::DGH2;
    let cases = [
        (
            diagram(
                8,
                g2,
                "L1-T1 L2-L3 L4-T2 L5-L8 L6-L7 R1-T4 R2-T3 R3-B1 R4-R5 R6-B2 R7-R8",
                "",
                &[0; 5],
                &[1, 0, 1],
            ),
            diagram(8, g2, "L1-L2 L3-T1 L4-L5 L6-T2 L7-R8 L8-B1 R1-T3 R2-R5 R3-R4 R6-R7", "", &[1, 1, 0, 1], &[0, 1]),
            Some((
                monomial(&[Beta, Alpha1, Gamma12, Gamma3]),
                diagram(
                    8,
                    g2,
                    "L1-T1 L2-L3 L4-T2 L5-L8 L6-L7 R1-T3 R2-R5 R3-R4 R6-R7 R8-B1",
                    "",
                    &[0, 0, 0, 1],
                    &[0, 1],
                ),
            )),
        ),
        (
            diagram(
                8,
                g2,
                "L1-L2 L3-T1 L4-R3 L5-L6 L7-L8 R1-T3 R2-T2 R4-R5 R6-B1 R7-B2 R8-B3",
                "",
                &[1, 0, 0, 0],
                &[1, 0, 0, 0],
            ),
            diagram(
                8,
                g2,
                "L1-T1 L2-T2 L3-R1 L4-R2 L5-R7 L6-B3 L7-B2 L8-B1 R3-R4 R5-R6 R8-B4",
                "",
                &[0, 1, 1],
                &[0, 0, 1, 0, 1],
            ),
            Some((
                monomial(&[Alpha2, Alpha3, Delta1, Delta2, Delta3]),
                diagram(8, g2, "L1-L2 L3-T1 L4-R1 L5-L6 L7-L8 R2-R7 R3-R4 R5-R6 R8-B1", "", &[1, 0], &[0, 1]),
            )),
        ),
        (
            diagram(5, d2, "L1-T1 L3-R5 L4-L5 R2-T2 R3-R4", "L2 R1", &[0, 0, 0], &[0]),
            diagram(5, d2, "L2-L4 L5-R1 R2-B1 R3-R4", "L1 L3 R5", &[0], &[1, 0]),
            None,
        ),
        (
            diagram(5, d2, "L1-L2 L4-R2 R1-T1 R3-B1 R5-B2", "L3 L5 R4", &[0, 1], &[1, 0, 1]),
            diagram(5, d2, "L1-L2 L3-B2 L5-B1 R1-T1 R2-R3 R5-B3", "L4 R4", &[1, 0], &[0, 1, 0, 0]),
            Some((
                monomial(&[Delta2, Delta3]),
                diagram(5, d2, "L1-L2 L4-T1 R1-T2 R2-R3 R5-B1", "L3 L5 R4", &[0, 0, 0], &[1, 0]),
            )),
        ),
    ];
    for (k, (x, y, want)) in cases.into_iter().enumerate() {
        let out = x.concat(&y, ParamMode::Standard).map_err(|e| e.to_string())?;
        let prod =
            Element::<Poly>::basis(x).mul(&Element::basis(y), ParamMode::Standard, &()).map_err(|e| e.to_string())?;
        match want {
            None => {
                ensure(out.annihilated && out.result.is_none(), || format!("product {} should vanish", k + 1))?;
                ensure(prod.is_zero(), || format!("product {} element not zero", k + 1))?;
            }
            Some((w, d)) => {
                ensure(!out.annihilated && out.weight == w, || format!("product {}: weight {:?}", k + 1, out.weight))?;
                ensure(out.result.as_ref() == Some(&d), || format!("product {}: wrong diagram", k + 1))?;
                ensure(prod == Element::term(d, Poly::monomial(w)), || format!("product {}: element", k + 1))?;
            }
        }
    }
    Ok("4 products bit-exact".into())
}

fn associativity() -> Outcome {
    let mut cases = vec![];
    for v in [Variant::TL, Variant::DTL, Variant::GH1, Variant::GH2, Variant::DGH1] {
        cases.push((v, 2));
        cases.push((v, 3));
    }
    cases.push((Variant::DGH2, 2));
    let triples = 10_000;
    for (k, &(v, n)) in cases.iter().enumerate() {
        let pool = all_diagrams(n, v);
        let mut rng = ChaCha8Rng::seed_from_u64(400 + k as u64);
        for mode in [ParamMode::Standard, ParamMode::Generalised] {
            for _ in 0..triples {
                let [x, y, z] = [(); 3].map(|_| Element::<Poly>::basis(pool.choose(&mut rng).unwrap().clone()));
                let m = |a: &Element<Poly>, b: &Element<Poly>| a.mul(b, mode, &()).unwrap();
                let l = m(&m(&x, &y), &z);
                let r = m(&x, &m(&y, &z));
                ensure(l == r, || format!("{v} n={n} {mode:?}: {x:?} {y:?} {z:?}"))?;
            }
        }
    }
    Ok(format!("{triples} triples x {} algebras x 2 modes", cases.len()))
}

fn cut_glue_round_trip() -> Outcome {
    let mut total = 0usize;
    for (v, max) in ENUMERATED {
        for n in 1..=max {
            for d in enumerate_diagrams(n, v, u128::MAX).map_err(|e| e.to_string())? {
                let (x, y) = cut(&d);
                let back = glue(&x, &y).map_err(|e| e.to_string())?;
                ensure(back == d, || format!("{v} n={n}: {d} -> {back}"))?;
                total += 1;
            }
        }
    }
    Ok(format!("{total} diagrams"))
}

fn cellularity() -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    for (n, v) in [(2, Variant::GH2), (2, Variant::DGH2), (3, Variant::GH1)] {
        let d = CellDatum::new(n, v);
        for r in d.check_all(&d.basis_multipliers(), ParamMode::Standard).map_err(|e| e.to_string())? {
            ensure(r.pass, || format!("{v} n={n} axiom {}: {:?}", r.axiom, r.first_failure))?;
            checked += r.checked;
        }
    }
    within(start, Duration::from_secs(300))?;
    Ok(format!("{checked} checks in {:.2?}", start.elapsed()))
}

fn local_relations(dilute: bool, seed: u64) -> Outcome {
    let mut s = Sampler::new(seed);
    let mut worst = [0.0f64; 3];
    for _ in 0..POINTS {
        let spec = if dilute { s.dilute() } else { s.dense() };
        let (u, v) = s.pair();
        let r = [
            check_ybe(spec, u, v).map_err(|e| e.to_string())?,
            check_crossing(spec, u).map_err(|e| e.to_string())?,
            check_inversion(spec, u).map_err(|e| e.to_string())?,
        ];
        for (w, x) in worst.iter_mut().zip(r) {
            *w = w.max(x);
        }
    }
    ensure(worst.iter().all(|&w| w < TOL), || {
        format!("ybe {:e}, crossing {:e}, inversion {:e}", worst[0], worst[1], worst[2])
    })?;
    Ok(format!("ybe {:.1e}, crossing {:.1e}, inversion {:.1e}", worst[0], worst[1], worst[2]))
}

fn boundary_families(names: &[&str], dilute: bool, mode: ParamMode, seed: u64) -> Result<Vec<String>, String> {
    let mut s = Sampler::new(seed);
    let mut report = vec![];
    for name in names {
        let mut worst = 0.0f64;
        for side in [BoundarySide::Top, BoundarySide::Bottom] {
            for _ in 0..POINTS {
                let spec = if dilute { s.dilute() } else { s.dense() };
                let env = s.binding(spec);
                let op = BoundaryOperator::new(s.family(name, spec, &env, side, mode).map_err(|e| e.to_string())?);
                let (u, v) = s.pair();
                worst = worst.max(check_bybe(spec, side, &op, u, v, &env, mode).map_err(|e| e.to_string())?);
            }
        }
        ensure(worst < TOL, || format!("{name}: {worst:e}"))?;
        report.push(format!("{name} {worst:.1e}"));
    }
    Ok(report)
}

// Dense solution II with one tile coefficient shifted away from the solution.
fn perturbed_control(mode: ParamMode, seed: u64) -> Result<String, String> {
    let mut s = Sampler::new(seed);
    let mut least = f64::INFINITY;
    for side in [BoundarySide::Top, BoundarySide::Bottom] {
        for _ in 0..POINTS {
            let spec = s.dense();
            let env = s.binding(spec);
            let op = BoundaryOperator::new(s.family("dense-II", spec, &env, side, mode).map_err(|e| e.to_string())?);
            let (u, v) = s.pair();
            let a = side.arc_params(&env, mode).map_err(|e| e.to_string())?;
            let bump = |mut w: Vec<(TriangleShape, C)>| {
                w.iter_mut().find(|x| x.0 == CALIBRATED.both[0]).unwrap().1 += 0.5;
                w
            };
            let tu = bump(op.shape_weights(spec, u, &a).map_err(|e| e.to_string())?);
            let tv = bump(op.shape_weights(spec, v, &a).map_err(|e| e.to_string())?);
            let (l, r) = bybe_sides_with(spec, side, &tu, &tv, u, v, &env, mode).map_err(|e| e.to_string())?;
            least = least.min(l.relative_residual(&r));
        }
    }
    ensure(least > 1e-3, || format!("perturbed residual {least:e}"))?;
    Ok(format!("perturbed min {least:.1e}"))
}

fn dense_boundary(mode: ParamMode, seed: u64) -> Outcome {
    let mut r = boundary_families(&DENSE_FAMILIES, false, mode, seed)?;
    r.push(perturbed_control(mode, seed + 1)?);
    Ok(r.join(", "))
}

fn dilute_boundary(mode: ParamMode, seed: u64) -> Outcome {
    Ok(boundary_families(&DILUTE_FAMILIES, true, mode, seed)?.join(", "))
}

fn commutation() -> Outcome {
    let start = Instant::now();
    let mut s = Sampler::new(1100);
    let mut worst = 0.0f64;
    let mut count = 0;
    let cases: [(&[&str], bool, usize); 3] =
        [(&DENSE_FAMILIES, false, 2), (&DENSE_FAMILIES, false, 3), (&DILUTE_FAMILIES, true, 2)];
    for (names, dilute, n) in cases {
        for k in 0..10 {
            let spec = if dilute { s.dilute() } else { s.dense() };
            let env = s.binding(spec);
            let fam = |s: &mut Sampler, name: &str, side| {
                s.family(name, spec, &env, side, ParamMode::Standard)
                    .map(BoundaryOperator::new)
                    .map_err(|e| e.to_string())
            };
            // Each pair uses a different top family and a different bottom family.
            let top = fam(&mut s, names[k % names.len()], BoundarySide::Top)?;
            let bottom = fam(&mut s, names[(k + 1) % names.len()], BoundarySide::Bottom)?;
            let (u, v) = s.pair();
            let r = commutation_residual(spec, n, u, v, &top, &bottom, &env, ParamMode::Standard, DEFAULT_BUDGET)
                .map_err(|e| e.to_string())?;
            ensure(r < 1e-8, || format!("n={n} {} / {}: {r:e}", top.family.name(), bottom.family.name()))?;
            worst = worst.max(r);
            count += 1;
        }
    }
    within(start, Duration::from_secs(600))?;
    Ok(format!("{count} pairs, max {worst:.1e}, {:.2?}", start.elapsed()))
}

fn morphisms() -> Outcome {
    let basis = |d: &Diagram| Element::<Poly>::basis(d.clone());
    let std = ParamMode::Standard;
    let pool = all_diagrams(2, Variant::GH2);
    let mut rng = ChaCha8Rng::seed_from_u64(1200);
    for _ in 0..500 {
        let x = basis(pool.choose(&mut rng).unwrap());
        let y = basis(pool.choose(&mut rng).unwrap());
        let lhs = dilute_embed(&x.mul(&y, std, &()).unwrap()).unwrap();
        let rhs = shift_element(&dilute_embed(&x).unwrap().mul(&dilute_embed(&y).unwrap(), std, &()).unwrap());
        ensure(lhs == rhs, || format!("dilute_embed: {x:?} {y:?}"))?;
    }

    let mut tl2 = enumerate_tl2(2, 2);
    tl2.shuffle(&mut ChaCha8Rng::seed_from_u64(7));
    let sample = &tl2[..20];
    for x in sample {
        for y in sample {
            let (w, xy) = x.mul(y).map_err(|e| e.to_string())?;
            let lhs = psi(&xy, std).scale(&Poly::monomial(w));
            let rhs = psi(x, std).mul(&psi(y, std), std, &()).unwrap();
            ensure(lhs == rhs, || format!("psi: {x:?} {y:?}"))?;
        }
    }

    let pool = all_diagrams(2, Variant::DGH1);
    for _ in 0..200 {
        let x = basis(pool.choose(&mut rng).unwrap());
        let y = basis(pool.choose(&mut rng).unwrap());
        let lhs = add_strand(&x.mul(&y, std, &()).unwrap()).unwrap();
        let rhs = add_strand(&x).unwrap().mul(&add_strand(&y).unwrap(), std, &()).unwrap();
        ensure(lhs == rhs, || format!("add_strand: {x:?} {y:?}"))?;
    }
    Ok("embed 500, psi 400, add_strand 200".into())
}

fn generalised() -> Outcome {
    let g = ParamMode::Generalised;
    Ok(format!("{}; {}", dense_boundary(g, 1310)?, dilute_boundary(g, 1320)?))
}

fn main() {
    let criteria: Vec<Check> = vec![
        ("dimension table n=1..10", Box::new(dimension_table)),
        ("enumeration equals formula", Box::new(enumeration_matches_formula)),
        ("worked products", Box::new(worked_products)),
        ("associativity", Box::new(associativity)),
        ("cut/glue round trip", Box::new(cut_glue_round_trip)),
        ("cellularity", Box::new(cellularity)),
        ("dense local relations", Box::new(|| local_relations(false, 700))),
        ("dense boundary relation", Box::new(|| dense_boundary(ParamMode::Standard, 800))),
        ("dilute local relations", Box::new(|| local_relations(true, 900))),
        ("dilute boundary relation", Box::new(|| dilute_boundary(ParamMode::Standard, 1000))),
        ("transfer commutation", Box::new(commutation)),
        ("morphisms", Box::new(morphisms)),
        ("generalised parameters", Box::new(generalised)),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| Err("panicked".into()));
        match res {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", k + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
