use std::path::Path;

use ghost_algebra::cellular::CellDatum;
use ghost_algebra::enumeration::{dim_formula, enumerate_diagrams};
use ghost_algebra::json::{diagram_to_json, element_from_json, element_to_json};
use ghost_algebra::loop_model::relations::DEFAULT_BUDGET;
use ghost_algebra::loop_model::sampling::{DENSE_FAMILIES, DILUTE_FAMILIES};
use ghost_algebra::loop_model::{
    check_bybe, check_crossing, check_inversion, check_ybe, commutation_residual, transfer as contract_transfer,
    BoundaryOperator, BoundarySide, Family, Sampler,
};
use ghost_algebra::morphisms::{add_strand, dilute_embed, include, psi, shift_element, TwoBoundaryTLDiagram};
use ghost_algebra::{Element, Endpoint, ParamBinding, ParamMode, Poly, Spectral, Variant};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::config::{read_json, Config};
use crate::{
    Arith, DimsArgs, Failure, Format, MapKind, Model, Output, Relation, Report, SideArg, TransferArgs, VerifyArgs,
};

type Result<T> = std::result::Result<T, Failure>;

/// Reference dimensions for n = 1..10, columns gh1, gh2, dgh1, dgh2.
const TABLE2: [[u64; 4]; 10] = [
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

const TABLE2_VARIANTS: [Variant; 4] = [Variant::GH1, Variant::GH2, Variant::DGH1, Variant::DGH2];

fn variant(s: &str) -> Result<Variant> {
    s.parse().map_err(|_| Failure::usage(format!("unknown variant {s:?}")))
}

fn mode_name(m: ParamMode) -> &'static str {
    match m {
        ParamMode::Standard => "standard",
        ParamMode::Generalised => "generalised",
    }
}

fn n_range(s: &str) -> Result<(usize, usize)> {
    let bad = || Failure::usage(format!("bad n range {s:?}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn big_json(x: &num_bigint::BigUint) -> Value {
    x.to_u64().map(Value::from).unwrap_or_else(|| Value::String(x.to_string()))
}

pub fn dims(cfg: &Config, a: &DimsArgs) -> Result<Report> {
    let (lo, hi) = n_range(&a.n)?;
    let variants = if a.variant.is_empty() {
        TABLE2_VARIANTS.to_vec()
    } else {
        a.variant.iter().map(|v| variant(v)).collect::<Result<Vec<_>>>()?
    };
    let mut rows = vec![];
    let mut mismatches = vec![];
    let mut compared = 0;
    for n in lo..=hi {
        let mut cells = serde_json::Map::new();
        for &v in &variants {
            let d = dim_formula(n, v);
            if let (true, Some(col)) = (a.check_table2 && n <= 10, TABLE2_VARIANTS.iter().position(|&t| t == v)) {
                compared += 1;
                if d.to_u64() != Some(TABLE2[n - 1][col]) {
                    mismatches.push(
                        json!({ "n": n, "variant": v.name(), "formula": big_json(&d), "table": TABLE2[n - 1][col] }),
                    );
                }
            }
            cells.insert(v.name().into(), big_json(&d));
        }
        rows.push((n, cells));
    }

    let mut enumerated = vec![];
    if a.enumerate_verify {
        let budget = cfg.budget_or(1_000_000);
        for &(n, _) in &rows {
            for &v in &variants {
                let count = enumerate_diagrams(n, v, budget)?.count();
                let formula = dim_formula(n, v);
                enumerated.push((n, v, count, formula.to_usize() == Some(count), formula));
            }
        }
    }

    let table_pass = mismatches.is_empty();
    let enum_pass = enumerated.iter().all(|e| e.3);
    let pass = table_pass && enum_pass;
    let body = match a.format {
        Format::Json => {
            let mut v = json!({
                "variants": variants.iter().map(|v| v.name()).collect::<Vec<_>>(),
                "rows": rows.iter().map(|(n, c)| json!({ "n": n, "dims": c })).collect::<Vec<_>>(),
            });
            if a.check_table2 {
                v["table2"] = json!({ "compared": compared, "mismatches": mismatches, "pass": table_pass });
            }
            if a.enumerate_verify {
                v["enumerated"] = enumerated
                    .iter()
                    .map(|(n, var, count, ok, f)| {
                        json!({ "n": n, "variant": var.name(), "count": count, "formula": big_json(f), "pass": ok })
                    })
                    .collect();
            }
            Output::Json(v)
        }
        Format::Text => {
            let mut s = format!("{:>3}", "n");
            for v in &variants {
                s += &format!(" {:>18}", v.name());
            }
            s.push('\n');
            for (n, cells) in &rows {
                s += &format!("{n:>3}");
                for v in &variants {
                    s += &format!(" {:>18}", cells[v.name()].to_string().trim_matches('"'));
                }
                s.push('\n');
            }
            if a.check_table2 {
                let verdict = if table_pass { "PASS" } else { "FAIL" };
                s += &format!("table2: {verdict} ({compared} compared, {} mismatched)\n", mismatches.len());
            }
            for (n, v, count, ok, f) in &enumerated {
                let verdict = if *ok { "PASS" } else { "FAIL" };
                s += &format!("enumerate {v} n={n}: {verdict} ({count} enumerated, formula {f})\n");
            }
            Output::Text(s)
        }
    };
    Ok(Report { body, pass })
}

pub fn enumerate(cfg: &Config, v: &str, n: usize) -> Result<Report> {
    let v = variant(v)?;
    let diagrams: Vec<Value> =
        enumerate_diagrams(n, v, cfg.budget_or(1_000_000))?.map(|d| diagram_to_json(&d)).collect();
    Ok(Report::json(json!({ "variant": v.name(), "n": n, "count": diagrams.len(), "diagrams": diagrams }), true))
}

fn numeric_element(v: &Value, env: &ParamBinding) -> Result<Element<Complex64>> {
    if v.get("mode").and_then(Value::as_str) == Some("numeric") {
        Ok(element_from_json::<Complex64>(v)?)
    } else {
        Ok(element_from_json::<Poly>(v)?.evaluate(env)?)
    }
}

pub fn mul(cfg: &Config, a: &Path, b: &Path, arith: Arith) -> Result<Report> {
    let (va, vb) = (read_json(a)?, read_json(b)?);
    let out = match arith {
        Arith::Exact => {
            if cfg.params.as_ref().is_some_and(|p| p.spectral.is_some()) {
                return Err(Failure::usage("exact mode forbids spectral constants"));
            }
            let x = element_from_json::<Poly>(&va)?;
            let y = element_from_json::<Poly>(&vb)?;
            element_to_json(&x.mul(&y, cfg.mode, &())?)
        }
        Arith::Numeric => {
            let p = cfg.params.as_ref().ok_or_else(|| Failure::usage("numeric mode needs --params"))?;
            let env = p.binding()?;
            let missing: Vec<_> = cfg.mode.legal().iter().filter(|q| env.get(**q).is_err()).map(|q| q.name()).collect();
            if !missing.is_empty() {
                return Err(Failure::usage(format!(
                    "numeric mode needs every parameter; missing {}",
                    missing.join(", ")
                )));
            }
            let x = numeric_element(&va, &env)?;
            let y = numeric_element(&vb, &env)?;
            element_to_json(&x.mul(&y, cfg.mode, &env)?)
        }
    };
    Ok(Report::json(out, true))
}

#[derive(Deserialize)]
struct Tl2Json {
    n: usize,
    strings: Vec<[String; 2]>,
}

pub fn map(cfg: &Config, kind: MapKind, input: &Path, target: Option<&str>, shift: bool) -> Result<Report> {
    let v = read_json(input)?;
    let out: Element<Poly> = match kind {
        MapKind::Psi => {
            let t: Tl2Json = serde_json::from_value(v).map_err(|e| Failure::usage(e.to_string()))?;
            let strings = t
                .strings
                .iter()
                .map(|[a, b]| Ok((a.parse::<Endpoint>()?, b.parse::<Endpoint>()?)))
                .collect::<ghost_algebra::Result<Vec<_>>>()?;
            psi(&TwoBoundaryTLDiagram::from_strings(t.n, &strings)?, cfg.mode)
        }
        MapKind::Embed => {
            let e = dilute_embed(&element_from_json::<Poly>(&v)?)?;
            if shift {
                shift_element(&e)
            } else {
                e
            }
        }
        MapKind::AddStrand => add_strand(&element_from_json::<Poly>(&v)?)?,
        MapKind::Include => {
            let t = variant(target.ok_or_else(|| Failure::usage("include needs --target"))?)?;
            include(&element_from_json::<Poly>(&v)?, t)?
        }
    };
    Ok(Report::json(element_to_json(&out), true))
}

pub fn cellular_check(cfg: &Config, v: &str, n: usize, sampled: Option<usize>) -> Result<Report> {
    let v = variant(v)?;
    let dim = dim_formula(n, v).to_u128().unwrap_or(u128::MAX);
    let budget = cfg.budget_or(2_000);
    if dim > budget {
        return Err(ghost_algebra::Error::Budget { needed: dim, budget }.into());
    }
    let d = CellDatum::new(n, v);
    let mult = match sampled {
        Some(k) => d.sampled_multipliers(k, cfg.seed),
        None => d.basis_multipliers(),
    };
    let reports = d.check_all(&mult, cfg.mode)?;
    let pass = reports.iter().all(|r| r.pass);
    let body = json!({
        "variant": v.name(),
        "n": n,
        "paramMode": mode_name(cfg.mode),
        "multipliers": sampled.map(Value::from).unwrap_or_else(|| "basis".into()),
        "seed": cfg.seed,
        "axioms": reports,
        "pass": pass,
    });
    Ok(Report::json(body, pass))
}

fn model_families(m: Model) -> &'static [&'static str] {
    match m {
        Model::Dense => &DENSE_FAMILIES,
        Model::Dilute => &DILUTE_FAMILIES,
    }
}

fn family_name(m: Model, s: &str) -> Result<&'static str> {
    let fams = model_families(m);
    let prefix = match m {
        Model::Dense => "dense-",
        Model::Dilute => "dilute-",
    };
    let full = if s.contains('-') { s.to_string() } else { format!("{prefix}{s}") };
    fams.iter().find(|f| f.eq_ignore_ascii_case(&full)).copied().ok_or_else(|| {
        Failure::usage(format!(
            "unknown {} family {s:?}; expected one of {}",
            prefix.trim_end_matches('-'),
            fams.join(", ")
        ))
    })
}

fn spectral_json(s: Spectral) -> Value {
    match s {
        Spectral::Dense { lambda } => json!({ "lambda": lambda }),
        Spectral::Dilute { phi } => json!({ "phi": phi }),
    }
}

fn complex_json(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

/// Draws spectral constants and parameter bindings, honouring `--params`.
struct Draw<'a> {
    cfg: &'a Config,
    model: Model,
    sampler: Sampler,
}

impl<'a> Draw<'a> {
    fn new(cfg: &'a Config, model: Model) -> Result<Self> {
        if let Some(s) = cfg.params.as_ref().and_then(|p| p.spectral) {
            let ok =
                matches!((s, model), (Spectral::Dense { .. }, Model::Dense) | (Spectral::Dilute { .. }, Model::Dilute));
            if !ok {
                return Err(Failure::usage("the spectral constant in --params does not match --mode"));
            }
        }
        Ok(Draw { cfg, model, sampler: Sampler::new(cfg.seed) })
    }

    fn spectral(&mut self) -> Spectral {
        match (self.cfg.params.as_ref().and_then(|p| p.spectral), self.model) {
            (Some(s), _) => s,
            (None, Model::Dense) => self.sampler.dense(),
            (None, Model::Dilute) => self.sampler.dilute(),
        }
    }

    fn binding(&mut self, spec: Spectral) -> ParamBinding {
        let mut b = self.sampler.binding(spec);
        if let Some(p) = &self.cfg.params {
            p.overlay(&mut b);
        }
        b
    }

    fn family(
        &mut self,
        name: &str,
        spec: Spectral,
        env: &ParamBinding,
        side: BoundarySide,
    ) -> Result<BoundaryOperator> {
        Ok(BoundaryOperator::new(self.sampler.family(name, spec, env, side, self.cfg.mode)?))
    }
}

pub fn verify(cfg: &Config, a: &VerifyArgs) -> Result<Report> {
    if a.samples == 0 {
        return Err(Failure::usage("--samples must be positive"));
    }
    let mut draw = Draw::new(cfg, a.mode)?;
    let families: Vec<&str> = match &a.family {
        Some(f) => vec![family_name(a.mode, f)?],
        None => model_families(a.mode).to_vec(),
    };
    let bottom_family = a.bottom_family.as_deref().map(|f| family_name(a.mode, f)).transpose()?;
    let sides = match a.side {
        Some(SideArg::Top) => vec![BoundarySide::Top],
        Some(SideArg::Bottom) => vec![BoundarySide::Bottom],
        None => vec![BoundarySide::Top, BoundarySide::Bottom],
    };
    let tol = cfg.tol_or(if a.relation == Relation::Commute { 1e-8 } else { 1e-9 });
    let mut cases = vec![];
    match a.relation {
        Relation::Ybe | Relation::Crossing | Relation::Inversion => {
            let mut worst = 0.0f64;
            for _ in 0..a.samples {
                let spec = draw.spectral();
                let (u, v) = draw.sampler.pair();
                let r = match a.relation {
                    Relation::Ybe => check_ybe(spec, u, v)?,
                    Relation::Crossing => check_crossing(spec, u)?,
                    _ => check_inversion(spec, u)?,
                };
                worst = worst.max(r);
            }
            cases.push(json!({ "maxResidual": worst }));
        }
        Relation::Bybe => {
            for name in &families {
                for &side in &sides {
                    let mut worst = 0.0f64;
                    for _ in 0..a.samples {
                        let spec = draw.spectral();
                        let env = draw.binding(spec);
                        let op = draw.family(name, spec, &env, side)?;
                        let (u, v) = draw.sampler.pair();
                        worst = worst.max(check_bybe(spec, side, &op, u, v, &env, cfg.mode)?);
                    }
                    cases.push(json!({ "family": name, "side": side, "maxResidual": worst }));
                }
            }
        }
        Relation::Commute => {
            let budget = cfg.budget_or(DEFAULT_BUDGET);
            for k in 0..a.samples {
                let top_name = families[k % families.len()];
                let bottom_name = bottom_family.unwrap_or(if a.family.is_some() {
                    top_name
                } else {
                    families[(k + 1) % families.len()]
                });
                let spec = draw.spectral();
                let env = draw.binding(spec);
                let top = draw.family(top_name, spec, &env, BoundarySide::Top)?;
                let bottom = draw.family(bottom_name, spec, &env, BoundarySide::Bottom)?;
                let (u, v) = draw.sampler.pair();
                let r = commutation_residual(spec, a.n, u, v, &top, &bottom, &env, cfg.mode, budget)?;
                cases.push(json!({ "top": top_name, "bottom": bottom_name, "maxResidual": r }));
            }
        }
    }
    let worst = cases.iter().filter_map(|c| c["maxResidual"].as_f64()).fold(0.0, f64::max);
    let pass = worst < tol;
    let mut body = json!({
        "relation": a.relation,
        "model": a.mode,
        "paramMode": mode_name(cfg.mode),
        "seed": cfg.seed,
        "samples": a.samples,
        "tol": tol,
        "maxResidual": worst,
        "pass": pass,
        "cases": cases,
    });
    if a.relation == Relation::Commute {
        body["n"] = a.n.into();
    }
    Ok(Report::json(body, pass))
}

#[derive(Deserialize)]
struct FamiliesJson {
    top: Family,
    bottom: Family,
}

fn parse_point(s: &str) -> Result<Complex64> {
    let bad = || Failure::usage(format!("bad spectral parameter {s:?}; expected re or re,im"));
    let mut parts = s.split(',').map(|x| x.trim().parse::<f64>().map_err(|_| bad()));
    let re = parts.next().ok_or_else(bad)??;
    let im = parts.next().transpose()?.unwrap_or(0.0);
    if parts.next().is_some() {
        return Err(bad());
    }
    Ok(Complex64::new(re, im))
}

pub fn transfer(cfg: &Config, a: &TransferArgs) -> Result<Report> {
    let mut draw = Draw::new(cfg, a.mode)?;
    let spec = draw.spectral();
    let env = draw.binding(spec);
    let (top, bottom) = match &a.families {
        Some(path) => {
            let f: FamiliesJson =
                serde_json::from_value(read_json(path)?).map_err(|e| Failure::usage(e.to_string()))?;
            for fam in [f.top, f.bottom] {
                if fam.is_dilute() != (a.mode == Model::Dilute) {
                    return Err(Failure::usage(format!("family {fam} does not belong to this model")));
                }
            }
            (BoundaryOperator::new(f.top), BoundaryOperator::new(f.bottom))
        }
        None => {
            let default = model_families(a.mode)[if a.mode == Model::Dense { 1 } else { 0 }];
            let top_name = a.family.as_deref().map(|f| family_name(a.mode, f)).transpose()?.unwrap_or(default);
            let bottom_name =
                a.bottom_family.as_deref().map(|f| family_name(a.mode, f)).transpose()?.unwrap_or(top_name);
            (
                draw.family(top_name, spec, &env, BoundarySide::Top)?,
                draw.family(bottom_name, spec, &env, BoundarySide::Bottom)?,
            )
        }
    };
    let u = match &a.u {
        Some(s) => parse_point(s)?,
        None => draw.sampler.point(),
    };
    let t = contract_transfer(spec, a.n, u, &top, &bottom, &env, cfg.mode, cfg.budget_or(DEFAULT_BUDGET))?;
    let constraint = |op: &BoundaryOperator, side: BoundarySide| -> Result<f64> {
        Ok(op.family.constraint_residual(&side.arc_params(&env, cfg.mode)?, spec).norm())
    };
    let body = json!({
        "seed": cfg.seed,
        "model": a.mode,
        "paramMode": mode_name(cfg.mode),
        "spectral": spectral_json(spec),
        "u": complex_json(u),
        "top": top.family,
        "bottom": bottom.family,
        "constraintResidual": { "top": constraint(&top, BoundarySide::Top)?, "bottom": constraint(&bottom, BoundarySide::Bottom)? },
        "params": env.bound().map(|(p, v)| (p.name().to_string(), complex_json(v))).collect::<serde_json::Map<_, _>>(),
        "element": element_to_json(&t),
    });
    Ok(Report::json(body, true))
}
