//! JSON forms of diagrams, elements and scalars.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::Element;
use crate::diagram::{Boundaries, Density, Diagram, Endpoint, RawDiagram, Variant};
use crate::error::{Error, Result};
use crate::scalars::{Coefficient, Poly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DiagramJson {
    pub n: usize,
    pub density: String,
    pub boundaries: u8,
    pub strings: Vec<[String; 2]>,
    #[serde(default)]
    pub empty: Vec<String>,
    #[serde(default)]
    pub top_ghosts: Vec<u32>,
    #[serde(default)]
    pub bottom_ghosts: Vec<u32>,
}

fn density_name(d: Density) -> &'static str {
    match d {
        Density::Dense => "dense",
        Density::Dilute => "dilute",
    }
}

fn parse_density(s: &str) -> Result<Density> {
    match s {
        "dense" => Ok(Density::Dense),
        "dilute" => Ok(Density::Dilute),
        _ => Err(Error::Parse(format!("unknown density {s:?}"))),
    }
}

impl DiagramJson {
    pub fn from_diagram(d: &Diagram) -> Self {
        let raw = d.to_raw();
        DiagramJson {
            n: raw.n,
            density: density_name(raw.variant.density).into(),
            boundaries: raw.variant.boundaries.count(),
            strings: raw.strings.iter().map(|(a, b)| [a.to_string(), b.to_string()]).collect(),
            empty: raw.empty.iter().map(|e| e.to_string()).collect(),
            top_ghosts: raw.top_ghosts,
            bottom_ghosts: raw.bottom_ghosts,
        }
    }

    pub fn to_raw(&self) -> Result<RawDiagram> {
        let variant =
            Variant { density: parse_density(&self.density)?, boundaries: Boundaries::from_count(self.boundaries)? };
        let strings = self
            .strings
            .iter()
            .map(|[a, b]| Ok((a.parse::<Endpoint>()?, b.parse::<Endpoint>()?)))
            .collect::<Result<Vec<_>>>()?;
        let empty = self.empty.iter().map(|e| e.parse::<Endpoint>()).collect::<Result<Vec<_>>>()?;
        let default_ghosts = |v: &Vec<u32>, count: usize| if v.is_empty() { vec![0; count + 1] } else { v.clone() };
        let nt = strings.iter().flat_map(|(a, b)| [*a, *b]).filter(|e| matches!(e, Endpoint::T(_))).count();
        let nb = strings.iter().flat_map(|(a, b)| [*a, *b]).filter(|e| matches!(e, Endpoint::B(_))).count();
        Ok(RawDiagram {
            n: self.n,
            variant,
            strings,
            empty,
            top_ghosts: default_ghosts(&self.top_ghosts, nt),
            bottom_ghosts: default_ghosts(&self.bottom_ghosts, nb),
        })
    }

    pub fn to_diagram(&self) -> Result<Diagram> {
        self.to_raw()?.canonicalize()
    }
}

pub fn diagram_to_json(d: &Diagram) -> Value {
    serde_json::to_value(DiagramJson::from_diagram(d)).expect("diagram json")
}

pub fn diagram_from_json(v: &Value) -> Result<Diagram> {
    let dj: DiagramJson = serde_json::from_value(v.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    dj.to_diagram()
}

/// Coefficients that have a JSON form.
pub trait JsonCoeff: Coefficient {
    const MODE: &'static str;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl JsonCoeff for Poly {
    const MODE: &'static str = "exact";
    fn to_json(&self) -> Value {
        Poly::to_json(self)
    }
    fn from_json(v: &Value) -> Result<Self> {
        Poly::from_json(v)
    }
}

impl JsonCoeff for Complex64 {
    const MODE: &'static str = "numeric";
    fn to_json(&self) -> Value {
        json!({ "re": self.re, "im": self.im })
    }
    fn from_json(v: &Value) -> Result<Self> {
        if let Some(x) = v.as_f64() {
            return Ok(Complex64::new(x, 0.0));
        }
        let re = v.get("re").and_then(Value::as_f64).ok_or_else(|| Error::Parse("numeric coeff needs re".into()))?;
        let im = v.get("im").and_then(Value::as_f64).unwrap_or(0.0);
        Ok(Complex64::new(re, im))
    }
}

/// Canonical JSON: terms sorted by diagram.
pub fn element_to_json<C: JsonCoeff>(e: &Element<C>) -> Value {
    let terms: Vec<Value> = e
        .sorted_terms()
        .into_iter()
        .map(|(d, c)| json!({ "diagram": diagram_to_json(d), "coeff": c.to_json() }))
        .collect();
    json!({
        "n": e.n(),
        "density": density_name(e.variant().density),
        "boundaries": e.variant().boundaries.count(),
        "mode": C::MODE,
        "terms": terms,
    })
}

/// Accepts an element object or a bare diagram (coefficient one).
pub fn element_from_json<C: JsonCoeff>(v: &Value) -> Result<Element<C>> {
    if v.get("strings").is_some() {
        return Ok(Element::basis(diagram_from_json(v)?));
    }
    let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::Parse("element needs n".into()))? as usize;
    let density = parse_density(v.get("density").and_then(Value::as_str).unwrap_or("dense"))?;
    let boundaries = Boundaries::from_count(v.get("boundaries").and_then(Value::as_u64).unwrap_or(0) as u8)?;
    let variant = Variant { density, boundaries };
    if let Some(m) = v.get("mode").and_then(Value::as_str) {
        if m != C::MODE {
            return Err(Error::ModeMismatch);
        }
    }
    let mut e = Element::zero(n, variant);
    let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| Error::Parse("element needs terms".into()))?;
    for t in terms {
        let d = diagram_from_json(t.get("diagram").ok_or_else(|| Error::Parse("term needs diagram".into()))?)?;
        if d.n() != n || d.variant() != variant {
            return Err(Error::Mismatch("term diagram does not match element".into()));
        }
        let c = match t.get("coeff") {
            Some(c) => C::from_json(c)?,
            None => C::one(),
        };
        e.add_term(d, c);
    }
    Ok(e)
}
