//! Coefficient rings: exact polynomials over the rationals in the loop and
//! boundary parameters, and complex numbers with bound parameter values.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const PARAM_COUNT: usize = 14;

/// Loop and boundary-arc parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ParamId {
    Beta,
    Alpha1,
    Alpha2,
    Alpha3,
    Alpha4,
    Gamma1,
    Gamma2,
    Gamma3,
    Gamma4,
    Gamma12,
    Delta1,
    Delta2,
    Delta3,
    Delta4,
}

impl ParamId {
    pub const ALL: [ParamId; PARAM_COUNT] = [
        ParamId::Beta,
        ParamId::Alpha1,
        ParamId::Alpha2,
        ParamId::Alpha3,
        ParamId::Alpha4,
        ParamId::Gamma1,
        ParamId::Gamma2,
        ParamId::Gamma3,
        ParamId::Gamma4,
        ParamId::Gamma12,
        ParamId::Delta1,
        ParamId::Delta2,
        ParamId::Delta3,
        ParamId::Delta4,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ParamId::Beta => "beta",
            ParamId::Alpha1 => "alpha1",
            ParamId::Alpha2 => "alpha2",
            ParamId::Alpha3 => "alpha3",
            ParamId::Alpha4 => "alpha4",
            ParamId::Gamma1 => "gamma1",
            ParamId::Gamma2 => "gamma2",
            ParamId::Gamma3 => "gamma3",
            ParamId::Gamma4 => "gamma4",
            ParamId::Gamma12 => "gamma12",
            ParamId::Delta1 => "delta1",
            ParamId::Delta2 => "delta2",
            ParamId::Delta3 => "delta3",
            ParamId::Delta4 => "delta4",
        }
    }

    /// Swap top-boundary and bottom-boundary arc parameters.
    pub fn swap_boundary(self) -> ParamId {
        match self {
            ParamId::Alpha1 => ParamId::Delta1,
            ParamId::Alpha2 => ParamId::Delta2,
            ParamId::Alpha3 => ParamId::Delta3,
            ParamId::Alpha4 => ParamId::Delta4,
            ParamId::Delta1 => ParamId::Alpha1,
            ParamId::Delta2 => ParamId::Alpha2,
            ParamId::Delta3 => ParamId::Alpha3,
            ParamId::Delta4 => ParamId::Alpha4,
            p => p,
        }
    }

    /// Image under the map that collapses the generalised parameters onto the standard ones.
    pub fn collapse(self) -> ParamId {
        match self {
            ParamId::Alpha4 => ParamId::Alpha3,
            ParamId::Delta4 => ParamId::Delta3,
            ParamId::Gamma1 | ParamId::Gamma2 => ParamId::Gamma12,
            ParamId::Gamma4 => ParamId::Gamma3,
            p => p,
        }
    }
}

impl fmt::Display for ParamId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParamId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ParamId::ALL
            .iter()
            .copied()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown parameter {s:?}")))
    }
}

/// Which family of boundary-arc parameters is in use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum ParamMode {
    /// Nine parameters: beta, alpha1..3, gamma12, gamma3, delta1..3.
    #[default]
    Standard,
    /// Thirteen parameters: beta, alpha1..4, gamma1..4, delta1..4.
    Generalised,
}

impl ParamMode {
    pub fn legal(self) -> &'static [ParamId] {
        use ParamId::*;
        match self {
            ParamMode::Standard => &[Beta, Alpha1, Alpha2, Alpha3, Gamma3, Gamma12, Delta1, Delta2, Delta3],
            ParamMode::Generalised => {
                &[Beta, Alpha1, Alpha2, Alpha3, Alpha4, Gamma1, Gamma2, Gamma3, Gamma4, Delta1, Delta2, Delta3, Delta4]
            }
        }
    }

    pub fn is_legal(self, p: ParamId) -> bool {
        self.legal().contains(&p)
    }
}

/// Which boundaries an arc joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArcKind {
    TopTop,
    BottomBottom,
    TopBottom,
}

/// Parameter carried by a boundary arc, given the parities of its endpoints.
///
/// For same-boundary arcs the endpoints are (left, right); for a top-bottom
/// arc they are (top, bottom).
pub fn arc_param(mode: ParamMode, kind: ArcKind, first_odd: bool, second_odd: bool) -> ParamId {
    use ParamId::*;
    match kind {
        ArcKind::TopTop | ArcKind::BottomBottom => {
            let top = kind == ArcKind::TopTop;
            let p = match (first_odd, second_odd, mode) {
                (true, false, _) => 1,
                (false, true, _) => 2,
                (true, true, _) => 3,
                (false, false, ParamMode::Standard) => 3,
                (false, false, ParamMode::Generalised) => 4,
            };
            match (top, p) {
                (true, 1) => Alpha1,
                (true, 2) => Alpha2,
                (true, 3) => Alpha3,
                (true, _) => Alpha4,
                (false, 1) => Delta1,
                (false, 2) => Delta2,
                (false, 3) => Delta3,
                (false, _) => Delta4,
            }
        }
        ArcKind::TopBottom => match mode {
            ParamMode::Standard => {
                if first_odd == second_odd {
                    Gamma3
                } else {
                    Gamma12
                }
            }
            ParamMode::Generalised => match (first_odd, second_odd) {
                (true, false) => Gamma1,
                (false, true) => Gamma2,
                (true, true) => Gamma3,
                (false, false) => Gamma4,
            },
        },
    }
}

/// Product of parameter powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial([u16; PARAM_COUNT]);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn var(p: ParamId) -> Self {
        let mut m = Monomial::default();
        m.0[p.index()] = 1;
        m
    }

    pub fn exponent(&self, p: ParamId) -> u32 {
        self.0[p.index()] as u32
    }

    pub fn bump(&mut self, p: ParamId) {
        self.0[p.index()] += 1;
    }

    pub fn set_exponent(&mut self, p: ParamId, e: u32) {
        self.0[p.index()] = e as u16;
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        let mut r = *self;
        for (a, b) in r.0.iter_mut().zip(o.0.iter()) {
            *a += *b;
        }
        r
    }

    /// Nonzero (param, exponent) pairs in declaration order.
    pub fn factors(&self) -> impl Iterator<Item = (ParamId, u32)> + '_ {
        ParamId::ALL.iter().copied().filter(|p| self.0[p.index()] > 0).map(|p| (p, self.0[p.index()] as u32))
    }

    pub fn map_params(&self, f: impl Fn(ParamId) -> ParamId) -> Monomial {
        let mut r = Monomial::one();
        for (p, e) in self.factors() {
            let q = f(p);
            r.0[q.index()] += e as u16;
        }
        r
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut names: Vec<(&str, u32)> = self.factors().map(|(p, e)| (p.name(), e)).collect();
        names.sort();
        let parts: Vec<String> =
            names.into_iter().map(|(n, e)| if e == 1 { n.to_string() } else { format!("{n}^{e}") }).collect();
        f.write_str(&parts.join("*"))
    }
}

/// Sparse polynomial with rational coefficients; the zero polynomial is the empty map.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, BigRational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly::default()
    }

    pub fn one() -> Self {
        Poly::monomial(Monomial::one())
    }

    pub fn constant(c: i64) -> Self {
        Poly::term(Monomial::one(), BigRational::from_integer(c.into()))
    }

    pub fn var(p: ParamId) -> Self {
        Poly::monomial(Monomial::var(p))
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(m, BigRational::one())
    }

    pub fn term(m: Monomial, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Poly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m).or_insert_with(BigRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn add_assign_ref(&mut self, o: &Poly) {
        for (m, c) in &o.terms {
            self.add_term(*m, c.clone());
        }
    }

    pub fn scale(&self, c: &BigRational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly { terms: self.terms.iter().map(|(m, a)| (*m, a * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly { terms: self.terms.iter().map(|(k, a)| (k.mul(m), a.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// Replace every parameter by a polynomial.
    pub fn substitute(&self, f: impl Fn(ParamId) -> Poly) -> Poly {
        let images: Vec<Poly> = ParamId::ALL.iter().map(|&p| f(p)).collect();
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::term(Monomial::one(), c.clone());
            for (p, e) in m.factors() {
                t = &t * &images[p.index()].pow(e);
            }
            r.add_assign_ref(&t);
        }
        r
    }

    pub fn map_params(&self, f: impl Fn(ParamId) -> ParamId) -> Poly {
        let mut r = Poly::zero();
        for (m, c) in &self.terms {
            r.add_term(m.map_params(&f), c.clone());
        }
        r
    }

    pub fn params(&self) -> Vec<ParamId> {
        let mut v: Vec<ParamId> = self.terms.keys().flat_map(|m| m.factors().map(|(p, _)| p)).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn evaluate(&self, env: &ParamBinding) -> Result<Complex64> {
        let mut s = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let c = c.to_f64().unwrap_or(f64::NAN);
            s += env.monomial(m)? * c;
        }
        Ok(s)
    }

    /// Terms in display order: higher degree first, then by exponent vector.
    fn ordered(&self) -> Vec<(&Monomial, &BigRational)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| b.0.degree().cmp(&a.0.degree()).then(b.0.cmp(a.0)));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .ordered()
            .into_iter()
            .map(|(m, c)| {
                let exps: serde_json::Map<String, serde_json::Value> =
                    m.factors().map(|(p, e)| (p.name().to_string(), serde_json::Value::from(e))).collect();
                serde_json::json!({ "coeff": rational_string(c), "exps": exps })
            })
            .collect();
        serde_json::Value::Array(terms)
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Poly> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("polynomial must be a list".into()))?;
        let mut r = Poly::zero();
        for t in arr {
            let c = t
                .get("coeff")
                .and_then(|c| c.as_str())
                .ok_or_else(|| Error::Parse("term needs a string coeff".into()))?;
            let c = parse_rational(c)?;
            let mut m = Monomial::one();
            if let Some(exps) = t.get("exps") {
                let exps = exps.as_object().ok_or_else(|| Error::Parse("exps must be an object".into()))?;
                for (k, e) in exps {
                    let p: ParamId = k.parse()?;
                    let e = e.as_u64().ok_or_else(|| Error::Parse("exponent must be a non-negative integer".into()))?;
                    m.set_exponent(p, m.exponent(p) + e as u32);
                }
            }
            r.add_term(m, c);
        }
        Ok(r)
    }
}

fn rational_string(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.ordered().into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{}", rational_string(&a))?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rational_string(&a))?;
            }
        }
        Ok(())
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_ref(o);
        r
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let mut r = self.clone();
        r.add_assign_ref(&-o);
        r
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        let mut r = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                r.add_term(m1.mul(m2), c1 * c2);
            }
        }
        r
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr<Poly> for Poly {
            type Output = Poly;
            fn $f(self, o: Poly) -> Poly { $tr::$f(&self, &o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

/// Spectral constant fixing beta for a loop model.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Spectral {
    /// Crossing parameter of the dense model, beta = 2 cos(lambda).
    Dense { lambda: f64 },
    /// Crossing parameter of the dilute model, beta = -2 cos(4 phi).
    Dilute { phi: f64 },
}

impl Spectral {
    pub fn beta(&self) -> f64 {
        match *self {
            Spectral::Dense { lambda } => 2.0 * lambda.cos(),
            Spectral::Dilute { phi } => -2.0 * (4.0 * phi).cos(),
        }
    }
}

/// Complex values for parameters, with an optional spectral constant.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ParamBinding {
    values: [Option<Complex64>; PARAM_COUNT],
    spectral: Option<Spectral>,
}

impl ParamBinding {
    pub fn new() -> Self {
        ParamBinding::default()
    }

    /// Binding with beta fixed by the spectral constant.
    pub fn with_spectral(s: Spectral) -> Self {
        let mut b = ParamBinding::new();
        b.spectral = Some(s);
        b.values[ParamId::Beta.index()] = Some(Complex64::new(s.beta(), 0.0));
        b
    }

    pub fn spectral(&self) -> Option<Spectral> {
        self.spectral
    }

    pub fn set(&mut self, p: ParamId, v: impl Into<Complex64>) -> &mut Self {
        self.values[p.index()] = Some(v.into());
        self
    }

    pub fn with(mut self, p: ParamId, v: impl Into<Complex64>) -> Self {
        self.set(p, v);
        self
    }

    pub fn get(&self, p: ParamId) -> Result<Complex64> {
        self.values[p.index()].ok_or(Error::Unbound(p))
    }

    /// Value or NaN, for hot loops where coverage was checked up front.
    pub fn value_or_nan(&self, p: ParamId) -> Complex64 {
        self.values[p.index()].unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    pub fn covers(&self, params: &[ParamId]) -> Result<()> {
        for &p in params {
            self.get(p)?;
        }
        Ok(())
    }

    /// Spectral constant and beta agree to 1e-12.
    pub fn is_consistent(&self) -> bool {
        match (self.spectral, self.values[0]) {
            (Some(s), Some(b)) => (b - Complex64::new(s.beta(), 0.0)).norm() < 1e-12,
            (Some(_), None) => false,
            _ => true,
        }
    }

    pub fn monomial(&self, m: &Monomial) -> Result<Complex64> {
        let mut r = Complex64::new(1.0, 0.0);
        for (p, e) in m.factors() {
            r *= self.get(p)?.powu(e);
        }
        Ok(r)
    }

    /// Same values with top and bottom boundary parameters exchanged.
    pub fn swap_boundaries(&self) -> ParamBinding {
        let mut r = self.clone();
        for p in ParamId::ALL {
            r.values[p.swap_boundary().index()] = self.values[p.index()];
        }
        r
    }

    pub fn bound(&self) -> impl Iterator<Item = (ParamId, Complex64)> + '_ {
        ParamId::ALL.iter().filter_map(move |&p| self.values[p.index()].map(|v| (p, v)))
    }
}

/// A coefficient ring usable by algebra elements.
pub trait Coefficient: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    /// Data needed to turn a parameter monomial into a coefficient.
    type Env: Sync;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add_assign(&mut self, o: &Self);
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn weight(m: &Monomial, env: &Self::Env) -> Self;
}

impl Coefficient for Poly {
    type Env = ();
    fn zero() -> Self {
        Poly::zero()
    }
    fn one() -> Self {
        Poly::one()
    }
    fn is_zero(&self) -> bool {
        Poly::is_zero(self)
    }
    fn add_assign(&mut self, o: &Self) {
        self.add_assign_ref(o)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(m: &Monomial, _: &()) -> Self {
        Poly::monomial(*m)
    }
}

impl Coefficient for Complex64 {
    type Env = ParamBinding;
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn add_assign(&mut self, o: &Self) {
        *self += o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(m: &Monomial, env: &ParamBinding) -> Self {
        let mut r = Complex64::new(1.0, 0.0);
        for (p, e) in m.factors() {
            r *= env.value_or_nan(p).powu(e);
        }
        r
    }
}

/// A coefficient in either ring, with mode checking.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Poly),
    Numeric(Complex64),
}

impl Scalar {
    pub fn add(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a + b)),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => Ok(Scalar::Numeric(a + b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Result<Scalar> {
        match (self, o) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Ok(Scalar::Exact(a * b)),
            (Scalar::Numeric(a), Scalar::Numeric(b)) => Ok(Scalar::Numeric(a * b)),
            _ => Err(Error::ModeMismatch),
        }
    }

    pub fn evaluate(&self, env: &ParamBinding) -> Result<Complex64> {
        match self {
            Scalar::Exact(p) => p.evaluate(env),
            Scalar::Numeric(_) => Err(Error::ModeMismatch),
        }
    }
}

/// Approximate equality with absolute tolerance.
pub fn approx_eq(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use ParamId::*;

    fn v(p: ParamId) -> Poly {
        Poly::var(p)
    }

    #[test]
    fn additive_identity_and_merge() {
        let x = &v(Beta) * &v(Alpha1);
        assert_eq!(&Poly::zero() + &x, x);
        assert_eq!(&x + &x, &Poly::constant(2) * &x);
        assert_eq!(x.to_string(), "alpha1*beta");
    }

    #[test]
    fn difference_of_powers() {
        let b = v(Beta);
        let s = &(&(&b * &b) - &b) + &b;
        assert_eq!(s, &b * &b);
        let env = ParamBinding::new().with(Beta, 3.0);
        assert_eq!(s.evaluate(&env).unwrap(), Complex64::new(9.0, 0.0));
    }

    #[test]
    fn evaluation_of_products() {
        let b = v(Beta);
        let p = &(&b + &Poly::one()) * &(&b - &Poly::one());
        let env = ParamBinding::new().with(Beta, 2.0);
        assert_eq!(p.evaluate(&env).unwrap(), Complex64::new(3.0, 0.0));
        let m = &v(Beta) * &v(Gamma3);
        let env = env.with(Gamma3, 5.0);
        assert_eq!(m.evaluate(&env).unwrap(), Complex64::new(10.0, 0.0));
        assert_eq!(Poly::zero().evaluate(&env).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn unbound_parameter_is_an_error() {
        let e = v(Delta2).evaluate(&ParamBinding::new());
        assert!(matches!(e, Err(Error::Unbound(Delta2))));
    }

    #[test]
    fn canonical_text_form() {
        let p = &(&Poly::constant(2) * &(&v(Alpha1) * &v(Beta))) + &Poly::one();
        assert_eq!(p.to_string(), "2*alpha1*beta + 1");
        let q = &Poly::constant(-1) * &v(Gamma12);
        assert_eq!(q.to_string(), "-gamma12");
    }

    #[test]
    fn json_round_trip() {
        let p =
            &(&Poly::term(Monomial::var(Alpha2), BigRational::new(3.into(), 4.into())) * &v(Beta)) - &Poly::constant(7);
        let j = p.to_json();
        assert_eq!(Poly::from_json(&j).unwrap(), p);
    }

    #[test]
    fn substitution_shifts_parameters() {
        let b = v(Beta);
        let p = &b * &b;
        let shifted = p.substitute(|q| &Poly::var(q) + &Poly::one());
        assert_eq!(shifted, &(&(&b * &b) + &(&Poly::constant(2) * &b)) + &Poly::one());
    }

    #[test]
    fn arc_parameter_table() {
        let s = ParamMode::Standard;
        let g = ParamMode::Generalised;
        assert_eq!(arc_param(s, ArcKind::TopTop, true, false), Alpha1);
        assert_eq!(arc_param(s, ArcKind::TopTop, false, true), Alpha2);
        assert_eq!(arc_param(s, ArcKind::TopTop, true, true), Alpha3);
        assert_eq!(arc_param(s, ArcKind::TopTop, false, false), Alpha3);
        assert_eq!(arc_param(s, ArcKind::BottomBottom, true, false), Delta1);
        assert_eq!(arc_param(s, ArcKind::BottomBottom, false, true), Delta2);
        assert_eq!(arc_param(s, ArcKind::BottomBottom, true, true), Delta3);
        assert_eq!(arc_param(s, ArcKind::BottomBottom, false, false), Delta3);
        assert_eq!(arc_param(s, ArcKind::TopBottom, true, false), Gamma12);
        assert_eq!(arc_param(s, ArcKind::TopBottom, false, true), Gamma12);
        assert_eq!(arc_param(s, ArcKind::TopBottom, true, true), Gamma3);
        assert_eq!(arc_param(s, ArcKind::TopBottom, false, false), Gamma3);
        assert_eq!(arc_param(g, ArcKind::TopTop, false, false), Alpha4);
        assert_eq!(arc_param(g, ArcKind::BottomBottom, false, false), Delta4);
        assert_eq!(arc_param(g, ArcKind::TopBottom, true, false), Gamma1);
        assert_eq!(arc_param(g, ArcKind::TopBottom, false, true), Gamma2);
        assert_eq!(arc_param(g, ArcKind::TopBottom, true, true), Gamma3);
        assert_eq!(arc_param(g, ArcKind::TopBottom, false, false), Gamma4);
        for kind in [ArcKind::TopTop, ArcKind::BottomBottom, ArcKind::TopBottom] {
            for a in [true, false] {
                for b in [true, false] {
                    let p = arc_param(g, kind, a, b);
                    assert!(g.is_legal(p));
                    assert_eq!(p.collapse(), arc_param(s, kind, a, b));
                }
            }
        }
    }

    #[test]
    fn spectral_binding_sets_beta() {
        let b = ParamBinding::with_spectral(Spectral::Dilute { phi: 0.3 });
        assert!(b.is_consistent());
        assert!((b.get(Beta).unwrap().re + 2.0 * (1.2f64).cos()).abs() < 1e-15);
    }

    #[test]
    fn mixed_modes_rejected() {
        let a = Scalar::Exact(Poly::one());
        let b = Scalar::Numeric(Complex64::new(1.0, 0.0));
        assert!(matches!(a.add(&b), Err(Error::ModeMismatch)));
        assert!(matches!(a.mul(&b), Err(Error::ModeMismatch)));
    }
}
