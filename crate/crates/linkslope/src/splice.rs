//! Correction terms for splicing two colored links: the defect function, the slope-dependent
//! signature and nullity corrections, and the cyclic order sign on slope triples.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::charspec::{Character, Coord};
use crate::error::{Error, Result};
use crate::slope::SlopeValue;

const REAL_TOL: f64 = 1e-9;

/// A point of the circle `ℝ ∪ {∞}`. The point at infinity carries no sign.
#[derive(Clone, Copy, Debug)]
pub enum ExtReal {
    Rational(Rational64),
    Real(f64),
    Infinity,
}

impl ExtReal {
    pub fn int(n: i64) -> ExtReal {
        ExtReal::Rational(Rational64::from_integer(n))
    }

    pub fn ratio(n: i64, d: i64) -> ExtReal {
        ExtReal::Rational(Rational64::new(n, d))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtReal::Infinity)
    }

    pub fn to_f64(&self) -> f64 {
        match *self {
            ExtReal::Rational(r) => *r.numer() as f64 / *r.denom() as f64,
            ExtReal::Real(x) => x,
            ExtReal::Infinity => f64::INFINITY,
        }
    }

    pub fn recip(&self) -> ExtReal {
        match *self {
            ExtReal::Infinity => ExtReal::int(0),
            _ if self.sg() == 0 => ExtReal::Infinity,
            ExtReal::Rational(r) => ExtReal::Rational(r.recip()),
            ExtReal::Real(x) => ExtReal::Real(1.0 / x),
        }
    }

    /// Difference on the circle; `∞ − ∞` is taken to be `0`.
    pub fn sub(&self, o: &ExtReal) -> ExtReal {
        match (*self, *o) {
            (ExtReal::Infinity, ExtReal::Infinity) => ExtReal::int(0),
            (ExtReal::Infinity, _) | (_, ExtReal::Infinity) => ExtReal::Infinity,
            (ExtReal::Rational(a), ExtReal::Rational(b)) => ExtReal::Rational(a - b),
            (a, b) => ExtReal::Real(a.to_f64() - b.to_f64()),
        }
    }

    /// Sign with `sg 0 = sg ∞ = 0`.
    pub fn sg(&self) -> i32 {
        match *self {
            ExtReal::Infinity => 0,
            ExtReal::Rational(r) => r.signum().to_integer() as i32,
            ExtReal::Real(x) if x.abs() <= REAL_TOL => 0,
            ExtReal::Real(x) => x.signum() as i32,
        }
    }

    /// Equality on the circle, exact for rationals and within a relative tolerance otherwise.
    pub fn same(&self, o: &ExtReal) -> bool {
        match (*self, *o) {
            (ExtReal::Infinity, ExtReal::Infinity) => true,
            (ExtReal::Infinity, _) | (_, ExtReal::Infinity) => false,
            (ExtReal::Rational(a), ExtReal::Rational(b)) => a == b,
            (a, b) => {
                let (x, y) = (a.to_f64(), b.to_f64());
                (x - y).abs() <= REAL_TOL * x.abs().max(y.abs()).max(1.0)
            }
        }
    }

    /// A real slope value; complex values must have negligible imaginary part.
    pub fn from_slope(v: &SlopeValue) -> Result<ExtReal> {
        match v {
            SlopeValue::Infinity => Ok(ExtReal::Infinity),
            SlopeValue::Finite(z) if z.im.abs() <= 1e-8 * z.norm().max(1.0) => Ok(ExtReal::Real(z.re)),
            SlopeValue::Finite(z) => Err(Error::domain(format!("slope {z} is not real"))),
            SlopeValue::Undefined(r) => Err(Error::domain(format!("slope undefined: {r}"))),
        }
    }
}

impl PartialEq for ExtReal {
    fn eq(&self, o: &ExtReal) -> bool {
        self.same(o)
    }
}

impl fmt::Display for ExtReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtReal::Rational(r) => write!(f, "{r}"),
            ExtReal::Real(x) => write!(f, "{}", x + 0.0),
            ExtReal::Infinity => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtReal {
    type Err = Error;

    /// Accepts `inf`, `∞`, an integer, `p/q`, or a decimal.
    fn from_str(s: &str) -> Result<ExtReal> {
        let t = s.trim();
        if matches!(t, "inf" | "∞" | "infinity" | "-inf" | "+inf") {
            return Ok(ExtReal::Infinity);
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| Error::parse(format!("bad numerator in `{t}`")))?;
            let q: i64 = q.trim().parse().map_err(|_| Error::parse(format!("bad denominator in `{t}`")))?;
            return Ok(if q == 0 { ExtReal::Infinity } else { ExtReal::ratio(p, q) });
        }
        if let Ok(n) = t.parse::<i64>() {
            return Ok(ExtReal::int(n));
        }
        let x: f64 = t.parse().map_err(|_| Error::parse(format!("`{t}` is not an extended real")))?;
        Ok(if x.is_infinite() { ExtReal::Infinity } else { ExtReal::Real(x) })
    }
}

impl Serialize for ExtReal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ExtReal::Real(x) => s.serialize_f64(*x),
            ExtReal::Rational(r) if r.is_integer() => s.serialize_i64(r.to_integer()),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for ExtReal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<ExtReal, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Float(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Int(n) => Ok(ExtReal::int(n)),
            Raw::Float(x) => Ok(ExtReal::Real(x)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// A value of `Log: S¹ → [0, 1)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LogValue {
    Exact(Rational64),
    Approx(f64),
}

impl LogValue {
    pub fn to_f64(&self) -> f64 {
        match *self {
            LogValue::Exact(r) => *r.numer() as f64 / *r.denom() as f64,
            LogValue::Approx(x) => x,
        }
    }
}

/// `Log ω ∈ [0, 1)`, exact on roots of unity.
pub fn log_frac(w: &Coord) -> Result<LogValue> {
    if !w.is_unitary() {
        return Err(Error::domain(format!("{w} is not on the unit circle")));
    }
    Ok(match *w {
        Coord::ExactRoot { n, d } => LogValue::Exact(Rational64::new(n as i64, d as i64)),
        Coord::Numeric(z) => {
            let x = z.arg() / std::f64::consts::TAU;
            let x = if x < 0.0 { x + 1.0 } else { x };
            LogValue::Approx(if x >= 1.0 - 1e-15 { 0.0 } else { x })
        }
    })
}

/// `ind(x) = ⌊x⌋ − ⌊−x⌋`: `2x` on integers and `2⌊x⌋ + 1` otherwise.
pub fn ind(x: Rational64) -> i64 {
    x.floor().to_integer() - (-x).floor().to_integer()
}

/// `ind` of a floating-point value; values within `1e-9` of an integer are treated as that integer.
pub fn ind_f64(x: f64) -> i64 {
    let r = x.round();
    if (x - r).abs() <= REAL_TOL {
        2 * r as i64
    } else {
        let f = x.floor() as i64;
        2 * f + 1
    }
}

fn ind_log(v: LogValue) -> i64 {
    match v {
        LogValue::Exact(r) => ind(r),
        LogValue::Approx(x) => ind_f64(x),
    }
}

/// `δ_λ(ω) = ind(Σ λᵢ Log ωᵢ) − Σ λᵢ ind(Log ωᵢ)`.
pub fn defect(lambda: &[i64], w: &Character) -> Result<i64> {
    if lambda.len() != w.len() {
        return Err(Error::domain(format!("{} linking numbers for {} coordinates", lambda.len(), w.len())));
    }
    let logs: Vec<LogValue> = w.coords.iter().map(log_frac).collect::<Result<_>>()?;
    let weighted = lambda.iter().zip(&logs).filter(|(l, _)| **l != 0);
    let mut exact = Some(Rational64::zero());
    let mut approx = 0.0;
    let mut separate = 0;
    for (&l, &v) in weighted {
        approx += l as f64 * v.to_f64();
        exact = match (exact, v) {
            (Some(acc), LogValue::Exact(r)) => Some(acc + r * l),
            _ => None,
        };
        separate += l * ind_log(v);
    }
    let total = match exact {
        Some(r) => ind(r),
        None => ind_f64(approx),
    };
    Ok(total - separate)
}

/// `υ = ω^λ`, the value of the character on the distinguished component.
pub fn upsilon(lambda: &[i64], w: &Character) -> Result<Coord> {
    w.power_product(lambda)
}

/// `Δσ(κ′, κ″) = sg κ′ − sg(1/κ′ − κ″)`.
pub fn delta_sigma(k1: &ExtReal, k2: &ExtReal) -> i32 {
    k1.sg() - k1.recip().sub(k2).sg()
}

/// `Δη(κ′, κ″) = [κ′ ≠ ∞] + [κ″ ≠ ∞] + [κ″ = 1/κ′] − 1`.
pub fn delta_eta(k1: &ExtReal, k2: &ExtReal) -> i32 {
    !k1.is_infinite() as i32 + !k2.is_infinite() as i32 + k2.same(&k1.recip()) as i32 - 1
}

fn sg_cmp(a: &ExtReal, b: &ExtReal) -> i32 {
    // sign of b − a for finite values
    b.sub(a).sg()
}

/// The cyclic order sign `sg[(κ₀−κ₁)(κ₁−κ₂)(κ₂−κ₀)]`, with `sgn(∞, κ₁, κ₂) = sg(κ₂ − κ₁)`.
pub fn sgn_triple(k0: &ExtReal, k1: &ExtReal, k2: &ExtReal) -> i32 {
    if k0.same(k1) || k1.same(k2) || k2.same(k0) {
        return 0;
    }
    match (k0.is_infinite(), k1.is_infinite(), k2.is_infinite()) {
        (true, _, _) => sg_cmp(k1, k2),
        (_, true, _) => sg_cmp(k2, k0),
        (_, _, true) => sg_cmp(k0, k1),
        _ => {
            let d = [k0.sub(k1).sg(), k1.sub(k2).sg(), k2.sub(k0).sg()];
            d.iter().product()
        }
    }
}

/// The pairing `a∘b` on `ℂ²` with basis `(m, l)`, `m∘l = −1`, `l∘m = 1`, `m∘m = l∘l = 0`,
/// linear in `a` and conjugate-linear in `b`.
pub fn pairing(a: [Complex64; 2], b: [Complex64; 2]) -> Complex64 {
    -a[0] * b[1].conj() + a[1] * b[0].conj()
}

/// The slope `−a_m / a_l` of an isotropic vector `a_m m + a_l l`.
pub fn slope_of_vector(a: [Complex64; 2]) -> Result<ExtReal> {
    check_isotropic(a)?;
    if a[1].norm() <= REAL_TOL * a[0].norm() {
        return Ok(ExtReal::Infinity);
    }
    ExtReal::from_slope(&SlopeValue::Finite(-a[0] / a[1]))
}

fn check_isotropic(a: [Complex64; 2]) -> Result<()> {
    let n = a[0].norm_sqr() + a[1].norm_sqr();
    if n == 0.0 {
        return Err(Error::domain("zero vector"));
    }
    if pairing(a, a).norm() > 1e-9 * n {
        return Err(Error::domain(format!("vector ({}, {}) is not isotropic", a[0], a[1])));
    }
    Ok(())
}

/// `sg[(a₀∘a₁)(a₁∘a₂)(a₂∘a₀)]` for isotropic vectors.
pub fn sgn_from_vectors(a0: [Complex64; 2], a1: [Complex64; 2], a2: [Complex64; 2]) -> Result<i32> {
    for a in [a0, a1, a2] {
        check_isotropic(a)?;
    }
    let p = pairing(a0, a1) * pairing(a1, a2) * pairing(a2, a0);
    let scale: f64 = [a0, a1, a2].iter().map(|a| a[0].norm_sqr() + a[1].norm_sqr()).product();
    if p.re.abs() <= 1e-9 * scale {
        return Ok(0);
    }
    Ok(p.re.signum() as i32)
}

/// One side of a splice.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpliceSide {
    /// `σ_{K∪L}(υ_other, ω)` off the exceptional locus, `σ_L(ω)` on it.
    pub sigma: i64,
    pub eta: i64,
    /// `δ_λ(ω)`.
    pub defect: i64,
    #[serde(default)]
    pub slope: Option<ExtReal>,
    /// `υ = ω^λ` as `[re, im]`.
    #[serde(default)]
    pub upsilon: Option<[f64; 2]>,
    pub admissible: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SpliceInput {
    pub first: SpliceSide,
    pub second: SpliceSide,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpliceBranch {
    /// At least one of `υ′, υ″` differs from 1.
    Generic,
    /// `υ′ = υ″ = 1`; the slopes enter through `Δσ` and `Δη`.
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpliceOutput {
    pub branch: SpliceBranch,
    pub sigma: i64,
    pub eta: i64,
    pub defect_product: i64,
    pub delta_sigma: Option<i32>,
    pub delta_eta: Option<i32>,
}

fn check_side(name: &str, s: &SpliceSide) -> Result<()> {
    if let Some([re, im]) = s.upsilon {
        let u = Complex64::new(re, im);
        if (u.norm() - 1.0).abs() > 1e-9 {
            return Err(Error::domain(format!("{name}: υ = {u} is not unitary")));
        }
        let is_one = (u - 1.0).norm() <= 1e-9;
        if is_one != s.admissible {
            return Err(Error::domain(format!(
                "{name}: υ = {u} contradicts admissible = {}",
                s.admissible
            )));
        }
    }
    if s.eta < 0 {
        return Err(Error::domain(format!("{name}: negative nullity")));
    }
    Ok(())
}

/// Combines the two sides into the signature and nullity of the splice.
pub fn splice_assemble(input: &SpliceInput) -> Result<SpliceOutput> {
    check_side("first", &input.first)?;
    check_side("second", &input.second)?;
    let (a, b) = (&input.first, &input.second);
    let defect_product = a.defect * b.defect;
    let base_sigma = a.sigma + b.sigma + defect_product;
    let base_eta = a.eta + b.eta;
    if !(a.admissible && b.admissible) {
        return Ok(SpliceOutput {
            branch: SpliceBranch::Generic,
            sigma: base_sigma,
            eta: base_eta,
            defect_product,
            delta_sigma: None,
            delta_eta: None,
        });
    }
    let (Some(k1), Some(k2)) = (a.slope, b.slope) else {
        return Err(Error::domain("both characters are admissible, so both slopes are required"));
    };
    let ds = delta_sigma(&k1, &k2);
    let de = delta_eta(&k1, &k2);
    Ok(SpliceOutput {
        branch: SpliceBranch::Exceptional,
        sigma: base_sigma + ds as i64,
        eta: base_eta + de as i64,
        defect_product,
        delta_sigma: Some(ds),
        delta_eta: Some(de),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> ExtReal {
        s.parse().unwrap()
    }

    #[test]
    fn log_and_index() {
        assert_eq!(log_frac(&Coord::one()).unwrap(), LogValue::Exact(Rational64::zero()));
        assert_eq!(log_frac(&Coord::parse("-1").unwrap()).unwrap(), LogValue::Exact(Rational64::new(1, 2)));
        assert_eq!(log_frac(&Coord::root(2, 3).unwrap()).unwrap(), LogValue::Exact(Rational64::new(2, 3)));
        assert_eq!(ind(Rational64::zero()), 0);
        assert_eq!(ind(Rational64::new(1, 2)), 1);
        assert_eq!(ind(Rational64::new(6, 5)), 3);
        assert_eq!(ind_f64(1.2), 3);
        assert_eq!(ind_f64(2.0 - 1e-12), 4);
    }

    #[test]
    fn defect_examples() {
        let w = Character::parse("root:3/5, root:3/5").unwrap();
        assert_eq!(defect(&[0, 0], &w).unwrap(), 0);
        assert_eq!(defect(&[1, 1], &w).unwrap(), 1);
        assert_eq!(defect(&[1], &Character::parse("root:1/2").unwrap()).unwrap(), 0);
        let z = Character::parse("c:0.6,0.8, c:-0.6,0.8").unwrap();
        let e = Character::parse("root:1/5, root:2/5").unwrap();
        assert_eq!(defect(&[1, 1], &z).unwrap(), -1);
        assert_eq!(defect(&[2, -1], &e).unwrap(), -1);
    }

    #[test]
    fn upsilon_examples() {
        let i = Character::parse("root:1/4, root:1/4").unwrap();
        assert_eq!(upsilon(&[1, 2], &i).unwrap(), Coord::root(3, 4).unwrap());
        assert!(upsilon(&[3], &Character::parse("root:1/3").unwrap()).unwrap().is_one());
        assert!(upsilon(&[0, 0], &i).unwrap().is_one());
    }

    #[test]
    fn corrections() {
        assert_eq!(delta_sigma(&x("1"), &x("1")), 1);
        assert_eq!(delta_sigma(&x("inf"), &x("inf")), 0);
        assert_eq!(delta_sigma(&x("2"), &x("3")), 2);
        assert_eq!(delta_eta(&x("inf"), &x("inf")), -1);
        assert_eq!(delta_eta(&x("1"), &x("1")), 2);
        assert_eq!(delta_eta(&x("0"), &x("0")), 1);
        assert_eq!(delta_eta(&x("-1/2"), &x("-2")), 2);
    }

    #[test]
    fn triples() {
        assert_eq!(sgn_triple(&x("0"), &x("1"), &x("2")), 1);
        assert_eq!(sgn_triple(&x("inf"), &x("1"), &x("2")), 1);
        assert_eq!(sgn_triple(&x("1"), &x("inf"), &x("2")), -1);
        assert_eq!(sgn_triple(&x("1"), &x("1"), &x("2")), 0);
        assert_eq!(sgn_triple(&x("inf"), &x("inf"), &x("2")), 0);
    }

    #[test]
    fn vectors() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let m = [c(1.0), c(0.0)];
        let l = [c(0.0), c(1.0)];
        let ml = [c(1.0), c(1.0)];
        assert_eq!(slope_of_vector(m).unwrap(), ExtReal::Infinity);
        assert_eq!(slope_of_vector(l).unwrap(), ExtReal::int(0));
        let s = sgn_from_vectors(m, l, ml).unwrap();
        assert_eq!(s, sgn_triple(&ExtReal::Infinity, &ExtReal::int(0), &ExtReal::int(-1)));
        assert_eq!(sgn_from_vectors(m, l, m).unwrap(), 0);
        assert_eq!(sgn_from_vectors(l, m, ml).unwrap(), -s);
        assert!(sgn_from_vectors(m, [c(1.0), Complex64::new(0.0, 1.0)], l).is_err());
    }

    #[test]
    fn assemble_branches() {
        let side = |sigma, eta, defect, slope: &str, admissible| SpliceSide {
            sigma,
            eta,
            defect,
            slope: Some(x(slope)),
            upsilon: None,
            admissible,
        };
        let out = splice_assemble(&SpliceInput { first: side(1, 0, 1, "2", false), second: side(-2, 1, 1, "3", true) }).unwrap();
        assert_eq!((out.branch, out.sigma, out.eta), (SpliceBranch::Generic, 0, 1));
        let out = splice_assemble(&SpliceInput { first: side(0, 1, 0, "inf", true), second: side(0, 1, 2, "inf", true) }).unwrap();
        assert_eq!((out.branch, out.sigma, out.eta), (SpliceBranch::Exceptional, 0, 1));
        let out = splice_assemble(&SpliceInput { first: side(3, 0, 1, "0", true), second: side(1, 0, 1, "0", true) }).unwrap();
        assert_eq!(out.sigma, 5);
        let mut bad = SpliceInput { first: side(0, 0, 0, "0", true), second: side(0, 0, 0, "0", true) };
        bad.first.slope = None;
        assert!(splice_assemble(&bad).is_err());
        bad.first.upsilon = Some([-1.0, 0.0]);
        assert!(splice_assemble(&bad).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"first":{"sigma":1,"eta":0,"defect":0,"slope":1,"admissible":true},
                       "second":{"sigma":0,"eta":0,"defect":0,"slope":"1/1","upsilon":[1,0],"admissible":true}}"#;
        let input: SpliceInput = serde_json::from_str(text).unwrap();
        let out = splice_assemble(&input).unwrap();
        assert_eq!((out.delta_sigma, out.delta_eta), (Some(1), Some(2)));
        let back = serde_json::to_string(&input).unwrap();
        let again: SpliceInput = serde_json::from_str(&back).unwrap();
        assert_eq!(splice_assemble(&again).unwrap(), out);
    }
}
