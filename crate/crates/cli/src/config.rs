//! Run configuration: defaults from a config file, overridden by flags.

use std::path::{Path, PathBuf};

use ghost_algebra::{ParamBinding, ParamId, ParamMode, Spectral};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{Map, Value};

use crate::Failure;

pub const CONFIG_ENV: &str = "GHOST_CONFIG";

/// Contents of a config file. Every field is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub budget: Option<u128>,
    pub generalised: Option<bool>,
    /// Inline parameter object or a path to one, relative to the config file.
    pub params: Option<Value>,
}

#[derive(Debug, Clone)]
pub struct Config {
    pub seed: u64,
    pub tol: Option<f64>,
    pub budget: Option<u128>,
    pub mode: ParamMode,
    pub params: Option<Params>,
    pub out: Option<PathBuf>,
}

impl Config {
    pub fn budget_or(&self, default: u128) -> u128 {
        self.budget.unwrap_or(default)
    }

    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

/// Parameter values read from JSON, with an optional spectral constant.
#[derive(Debug, Clone, Default)]
pub struct Params {
    pub values: Vec<(ParamId, Complex64)>,
    pub spectral: Option<Spectral>,
}

fn number(key: &str, v: &Value) -> Result<Complex64, Failure> {
    if let Some(x) = v.as_f64() {
        return Ok(Complex64::new(x, 0.0));
    }
    let part = |k| v.get(k).and_then(Value::as_f64);
    match (part("re"), part("im")) {
        (Some(re), im) => Ok(Complex64::new(re, im.unwrap_or(0.0))),
        _ => Err(Failure::usage(format!("{key}: expected a number or {{re, im}}"))),
    }
}

fn real(key: &str, v: &Value) -> Result<f64, Failure> {
    v.as_f64().ok_or_else(|| Failure::usage(format!("{key}: expected a real number")))
}

impl Params {
    pub fn from_map(m: &Map<String, Value>) -> Result<Self, Failure> {
        let mut p = Params::default();
        for (k, v) in m {
            match k.as_str() {
                "lambda" => p.set_spectral(Spectral::Dense { lambda: real(k, v)? })?,
                "phi" => p.set_spectral(Spectral::Dilute { phi: real(k, v)? })?,
                _ => {
                    let id: ParamId = k.parse().map_err(|_| Failure::usage(format!("unknown parameter {k:?}")))?;
                    p.values.push((id, number(k, v)?));
                }
            }
        }
        Ok(p)
    }

    fn set_spectral(&mut self, s: Spectral) -> Result<(), Failure> {
        if self.spectral.replace(s).is_some() {
            return Err(Failure::usage("give at most one of lambda and phi"));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self, Failure> {
        match read_json(path)? {
            Value::Object(m) => Params::from_map(&m),
            _ => Err(Failure::usage(format!("{}: parameters must be a JSON object", path.display()))),
        }
    }

    /// Binding with these values; beta follows the spectral constant when one is given.
    pub fn binding(&self) -> Result<ParamBinding, Failure> {
        let mut b = self.spectral.map(ParamBinding::with_spectral).unwrap_or_default();
        self.overlay(&mut b);
        if !b.is_consistent() {
            return Err(Failure::usage("beta disagrees with the spectral constant"));
        }
        Ok(b)
    }

    /// Write these values over an existing binding.
    pub fn overlay(&self, b: &mut ParamBinding) {
        for &(p, v) in &self.values {
            b.set(p, v);
        }
    }
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

pub struct Overrides<'a> {
    pub config: Option<&'a Path>,
    pub seed: Option<u64>,
    pub tol: Option<f64>,
    pub budget: Option<u128>,
    pub generalised: bool,
    pub params: Option<&'a Path>,
    pub out: Option<PathBuf>,
}

pub fn resolve(o: Overrides) -> Result<Config, Failure> {
    let (file, base) = match o.config {
        Some(path) => {
            let fc: FileConfig = serde_json::from_value(read_json(path)?)
                .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            (fc, path.parent().map(Path::to_path_buf).unwrap_or_default())
        }
        None => (FileConfig::default(), PathBuf::new()),
    };
    let params = match (o.params, &file.params) {
        (Some(p), _) => Some(Params::load(p)?),
        (None, Some(Value::String(p))) => Some(Params::load(&base.join(p))?),
        (None, Some(Value::Object(m))) => Some(Params::from_map(m)?),
        (None, Some(_)) => return Err(Failure::usage("config params must be a path or an object")),
        (None, None) => None,
    };
    let generalised = o.generalised || file.generalised.unwrap_or(false);
    Ok(Config {
        seed: o.seed.or(file.seed).unwrap_or(0),
        tol: o.tol.or(file.tol),
        budget: o.budget.or(file.budget),
        mode: if generalised { ParamMode::Generalised } else { ParamMode::Standard },
        params,
        out: o.out,
    })
}
