//! Characters of the colored link group, specialization of Laurent matrices at
//! characters (exact cyclotomic or floating point), and kernel classification,
//! including a symbolic backend over the rational function field.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::cyclotomic::{Cyc, CycField, DEFAULT_MAX_CONDUCTOR};
use crate::error::{Error, Result};
use crate::laurent::MultiLaurent;
use crate::linalg::{
    det_bareiss, kernel_pair_exact, kernel_pair_numeric, rank_exact, submatrix, unit_pivot_reduce, LMatrix,
    PairKernel, RankPolicy,
};

/// One coordinate of a character.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Coord {
    /// `exp(2πi·n/d)` with `0 ≤ n < d` and `gcd(n, d) = 1`.
    ExactRoot { n: u32, d: u32 },
    Numeric(Complex64),
}

impl Coord {
    pub fn root(n: i64, d: u32) -> Result<Coord> {
        if d == 0 {
            return Err(Error::domain("root of unity with denominator 0"));
        }
        let n = n.rem_euclid(d as i64) as u32;
        let g = n.gcd(&d).max(1);
        let (n, d) = if n == 0 { (0, 1) } else { (n / g, d / g) };
        Ok(Coord::ExactRoot { n, d })
    }

    pub fn numeric(z: Complex64) -> Result<Coord> {
        if z.norm() == 0.0 || !z.re.is_finite() || !z.im.is_finite() {
            return Err(Error::domain("character coordinates must be finite and nonzero"));
        }
        Ok(Coord::Numeric(z))
    }

    pub fn one() -> Coord {
        Coord::ExactRoot { n: 0, d: 1 }
    }

    pub fn to_complex(&self) -> Complex64 {
        match *self {
            Coord::ExactRoot { n, d } => Complex64::from_polar(1.0, std::f64::consts::TAU * n as f64 / d as f64),
            Coord::Numeric(z) => z,
        }
    }

    pub fn is_one(&self) -> bool {
        match *self {
            Coord::ExactRoot { n, .. } => n == 0,
            Coord::Numeric(z) => (z - 1.0).norm() < 1e-12,
        }
    }

    pub fn is_unitary(&self) -> bool {
        match *self {
            Coord::ExactRoot { .. } => true,
            Coord::Numeric(z) => (z.norm() - 1.0).abs() < 1e-12,
        }
    }

    pub fn inverse(&self) -> Coord {
        match *self {
            Coord::ExactRoot { n, d } => Coord::root(-(n as i64), d).unwrap(),
            Coord::Numeric(z) => Coord::Numeric(z.inv()),
        }
    }

    pub fn conj(&self) -> Coord {
        match *self {
            Coord::ExactRoot { .. } => self.inverse(),
            Coord::Numeric(z) => Coord::Numeric(z.conj()),
        }
    }

    /// `self^k`.
    pub fn pow(&self, k: i64) -> Coord {
        match *self {
            Coord::ExactRoot { n, d } => Coord::root((n as i64 * k).rem_euclid(d as i64), d).unwrap(),
            Coord::Numeric(z) => Coord::Numeric(z.powi(k as i32)),
        }
    }

    /// The square root `e^{iθ/2}` for `θ ∈ [0, 2π)`, so the imaginary part is nonnegative.
    pub fn sqrt(&self) -> Coord {
        match *self {
            Coord::ExactRoot { n, d } => Coord::root(n as i64, 2 * d).unwrap(),
            Coord::Numeric(z) => {
                let mut arg = z.arg();
                if arg < 0.0 {
                    arg += std::f64::consts::TAU;
                }
                Coord::Numeric(Complex64::from_polar(z.norm().sqrt(), arg / 2.0))
            }
        }
    }

    /// `Log ω ∈ [0,1)` as an exact fraction, when exact.
    pub fn log_fraction(&self) -> Option<BigRational> {
        match *self {
            Coord::ExactRoot { n, d } => Some(BigRational::new(BigInt::from(n), BigInt::from(d))),
            Coord::Numeric(_) => None,
        }
    }

    /// Parses `root:n/d`, `c:re,im`, or a plain integer ±1.
    pub fn parse(text: &str) -> Result<Coord> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix("root:") {
            let (n, d) = rest.split_once('/').unwrap_or((rest, "1"));
            let n: i64 = n.trim().parse().map_err(|_| Error::parse(format!("bad root numerator in `{t}`")))?;
            let d: u32 = d.trim().parse().map_err(|_| Error::parse(format!("bad root denominator in `{t}`")))?;
            return Coord::root(n, d);
        }
        if let Some(rest) = t.strip_prefix("c:") {
            let (re, im) = rest.split_once(',').ok_or_else(|| Error::parse(format!("`{t}` needs re,im")))?;
            let re: f64 = re.trim().parse().map_err(|_| Error::parse(format!("bad real part in `{t}`")))?;
            let im: f64 = im.trim().parse().map_err(|_| Error::parse(format!("bad imaginary part in `{t}`")))?;
            return Coord::numeric(Complex64::new(re, im));
        }
        match t {
            "1" => Ok(Coord::one()),
            "-1" => Coord::root(1, 2),
            _ => Err(Error::parse(format!("unrecognized character coordinate `{t}`"))),
        }
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coord::ExactRoot { n, d } => write!(f, "root:{n}/{d}"),
            Coord::Numeric(z) => write!(f, "c:{},{}", z.re, z.im),
        }
    }
}

/// A character given by its values on the colors `1..=μ`.
#[derive(Clone, Debug, PartialEq)]
pub struct Character {
    pub coords: Vec<Coord>,
}

impl Character {
    pub fn new(coords: Vec<Coord>) -> Character {
        Character { coords }
    }

    /// Comma-separated coordinates; a `c:re,im` entry consumes the following item as its imaginary part.
    pub fn parse(text: &str) -> Result<Character> {
        let items: Vec<&str> = text.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).collect();
        let mut coords = Vec::new();
        let mut i = 0;
        while i < items.len() {
            if items[i].starts_with("c:") {
                let im = items.get(i + 1).ok_or_else(|| Error::parse("numeric coordinate missing imaginary part"))?;
                coords.push(Coord::parse(&format!("{},{}", items[i], im))?);
                i += 2;
            } else {
                coords.push(Coord::parse(items[i])?);
                i += 1;
            }
        }
        Ok(Character { coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_unitary(&self) -> bool {
        self.coords.iter().all(|c| c.is_unitary())
    }

    /// No coordinate equals 1.
    pub fn is_nonvanishing(&self) -> bool {
        self.coords.iter().all(|c| !c.is_one())
    }

    /// `ω^λ = Π ωᵢ^{λᵢ}`.
    pub fn power_product(&self, lambda: &[i64]) -> Result<Coord> {
        if lambda.len() != self.coords.len() {
            return Err(Error::structural("linking vector and character differ in length"));
        }
        let mut exact = Some((BigRational::zero(), true));
        let mut z = Complex64::new(1.0, 0.0);
        for (c, &l) in self.coords.iter().zip(lambda) {
            z *= c.to_complex().powi(l as i32);
            match (c.log_fraction(), exact.as_mut()) {
                (Some(f), Some((acc, _))) => *acc += f * BigRational::from_integer(BigInt::from(l)),
                (None, _) if l != 0 => exact = None,
                _ => {}
            }
        }
        match exact {
            Some((acc, _)) => {
                let frac = &acc - acc.floor();
                let d: u32 = frac.denom().try_into().map_err(|_| Error::domain("root denominator too large"))?;
                let n: i64 = frac.numer().try_into().unwrap_or(0);
                Coord::root(n, d)
            }
            None => Coord::numeric(z),
        }
    }

    /// `ω^λ = 1`.
    pub fn is_admissible(&self, lambda: &[i64]) -> Result<bool> {
        Ok(match self.power_product(lambda)? {
            Coord::ExactRoot { n, .. } => n == 0,
            Coord::Numeric(z) => (z - 1.0).norm() < 1e-9,
        })
    }

    pub fn inverse(&self) -> Character {
        Character { coords: self.coords.iter().map(|c| c.inverse()).collect() }
    }

    pub fn conj(&self) -> Character {
        Character { coords: self.coords.iter().map(|c| c.conj()).collect() }
    }

    pub fn sqrt(&self) -> Character {
        Character { coords: self.coords.iter().map(|c| c.sqrt()).collect() }
    }

    /// Evaluation point for a ring whose variable 0 is `t` (set to 1) and variables `1..=μ` the colors.
    pub fn point_with_t_one(&self) -> Vec<Coord> {
        let mut p = vec![Coord::one()];
        p.extend(self.coords.iter().copied());
        p
    }

    pub fn to_spec(&self) -> String {
        self.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// The conductor `lcm(d)` when every coordinate is an exact root of unity and the lcm is at most `max`.
pub fn exact_conductor(point: &[Coord], max: u32) -> Option<u32> {
    let mut l: u32 = 1;
    for c in point {
        match c {
            Coord::ExactRoot { d, .. } => {
                l = l.lcm(d);
                if l > max {
                    return None;
                }
            }
            Coord::Numeric(_) => return None,
        }
    }
    Some(l)
}

/// Exponents of `ζ_N` for each coordinate.
fn zeta_exponents(point: &[Coord], conductor: u32) -> Vec<i64> {
    point
        .iter()
        .map(|c| match *c {
            Coord::ExactRoot { n, d } => n as i64 * (conductor / d) as i64,
            Coord::Numeric(_) => unreachable!("exact path only"),
        })
        .collect()
}

/// Entrywise numeric evaluation.
pub fn specialize_numeric(m: &[Vec<MultiLaurent>], point: &[Coord]) -> Result<Vec<Vec<Complex64>>> {
    let z: Vec<Complex64> = point.iter().map(|c| c.to_complex()).collect();
    m.iter().map(|row| row.iter().map(|p| p.eval_complex(&z)).collect()).collect()
}

/// Entrywise exact evaluation in `ℚ(ζ_N)`.
pub fn specialize_exact(m: &[Vec<MultiLaurent>], point: &[Coord], field: &Arc<CycField>) -> Vec<Vec<Cyc>> {
    let exps = zeta_exponents(point, field.conductor());
    m.iter().map(|row| row.iter().map(|p| Cyc::eval_laurent(field, p, &exps)).collect()).collect()
}

/// A specialized scalar: exact cyclotomic or floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(Cyc),
    Numeric(Complex64),
}

impl Value {
    pub fn to_complex(&self) -> Complex64 {
        match self {
            Value::Exact(c) => c.to_complex(),
            Value::Numeric(z) => *z,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(c) => c.is_zero(),
            Value::Numeric(z) => z.norm() == 0.0,
        }
    }

    pub fn exact(&self) -> Option<&Cyc> {
        match self {
            Value::Exact(c) => Some(c),
            Value::Numeric(_) => None,
        }
    }
}

/// Classifies `{(a,b) : a·v₁ + b·v₂ ∈ rowspan(image)}` at a point. Uses the exact cyclotomic
/// path when every coordinate is a root of unity of order dividing at most `max_conductor`,
/// otherwise floating point with the gap rule of `policy`.
pub fn kernel_of_pair(
    image: &[Vec<MultiLaurent>],
    v1: &[MultiLaurent],
    v2: &[MultiLaurent],
    point: &[Coord],
    policy: RankPolicy,
    max_conductor: u32,
) -> Result<PairKernel<Value>> {
    let stacked: Vec<Vec<MultiLaurent>> = vec![v1.to_vec(), v2.to_vec()];
    if let Some(n) = exact_conductor(point, max_conductor) {
        let field = CycField::get(n);
        let img = specialize_exact(image, point, &field);
        let v = specialize_exact(&stacked, point, &field);
        if v[0].is_empty() {
            return Ok(PairKernel::TwoDim);
        }
        return Ok(match kernel_pair_exact(&v[0], &v[1], &img) {
            PairKernel::ZeroDim => PairKernel::ZeroDim,
            PairKernel::TwoDim => PairKernel::TwoDim,
            PairKernel::Line(a, b) => PairKernel::Line(Value::Exact(a), Value::Exact(b)),
        });
    }
    let img = specialize_numeric(image, point)?;
    let v = specialize_numeric(&stacked, point)?;
    if v[0].is_empty() {
        return Ok(PairKernel::TwoDim);
    }
    let moduli: Vec<f64> = point.iter().map(|c| c.to_complex().norm()).collect();
    let scale = image.iter().chain(&stacked).flatten().map(|p| p.eval_magnitude(&moduli)).fold(0.0, f64::max);
    Ok(match kernel_pair_numeric(&v[0], &v[1], &img, policy, scale)? {
        PairKernel::ZeroDim => PairKernel::ZeroDim,
        PairKernel::TwoDim => PairKernel::TwoDim,
        PairKernel::Line(a, b) => PairKernel::Line(Value::Numeric(a), Value::Numeric(b)),
    })
}

/// A reduced fraction of Laurent polynomials. The denominator is a primitive polynomial
/// with nonnegative exponents and positive leading coefficient, or 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    pub num: MultiLaurent,
    pub den: MultiLaurent,
}

impl RationalFunction {
    pub fn new(num: MultiLaurent, den: MultiLaurent) -> Result<RationalFunction> {
        if den.is_zero() {
            return Err(Error::domain("zero denominator"));
        }
        let nv = num.nvars();
        if num.is_zero() {
            return Ok(RationalFunction { num, den: MultiLaurent::one(nv) });
        }
        let g = num.gcd(&den).core;
        let num = num.div_exact(&g).expect("gcd divides numerator");
        let den = den.div_exact(&g).expect("gcd divides denominator");
        // move the unit part of the denominator into the numerator
        let u = den.unit_normalize();
        let mut unit = MultiLaurent::monomial(
            nv,
            u.monomial_shift.iter().map(|x| -x).collect(),
            u.content.recip() * BigRational::from_integer(BigInt::from(u.sign)),
        );
        if unit.is_zero() {
            unit = MultiLaurent::one(nv);
        }
        Ok(RationalFunction { num: &num * &unit, den: u.core })
    }

    pub fn from_poly(p: MultiLaurent) -> RationalFunction {
        let nv = p.nvars();
        RationalFunction { num: p, den: MultiLaurent::one(nv) }
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        let d = self.den.eval_complex(point)?;
        if d.norm() == 0.0 {
            return Err(Error::domain("rational function evaluated on its pole"));
        }
        Ok(self.num.eval_complex(point)? / d)
    }

    /// Exact value in `ℚ(ζ_N)`, or `None` on a pole.
    pub fn eval_exact(&self, point: &[Coord], field: &Arc<CycField>) -> Option<Cyc> {
        let exps = zeta_exponents(point, field.conductor());
        let d = Cyc::eval_laurent(field, &self.den, &exps);
        if d.is_zero() {
            return None;
        }
        Some(Cyc::eval_laurent(field, &self.num, &exps).div(&d))
    }

    pub fn to_text(&self) -> String {
        if self.den.is_one() {
            return self.num.to_text();
        }
        format!("({})/({})", self.num.to_text(), self.den.to_text())
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Ranks of the image and of the image extended by `v₁`, `v₂`, both.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Ranks {
    r0: usize,
    r1: usize,
    r2: usize,
    r12: usize,
}

fn eval_rational_matrix(m: &[Vec<MultiLaurent>], point: &[BigRational]) -> Vec<Vec<BigRational>> {
    m.iter().map(|row| row.iter().map(|p| p.eval_rational(point).expect("nonzero point")).collect()).collect()
}

fn ranks_at(image: &[Vec<BigRational>], v1: &[BigRational], v2: &[BigRational]) -> Ranks {
    let with = |extra: &[&[BigRational]]| {
        let mut m = image.to_vec();
        for e in extra {
            m.push(e.to_vec());
        }
        rank_exact(&m)
    };
    Ranks { r0: rank_exact(image), r1: with(&[v1]), r2: with(&[v2]), r12: with(&[v1, v2]) }
}

fn random_point(nvars: usize, rng: &mut StdRng) -> Vec<BigRational> {
    (0..nvars)
        .map(|_| {
            let n: i64 = rng.gen_range(2..=97) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let d: i64 = rng.gen_range(1..=13);
            BigRational::new(BigInt::from(n), BigInt::from(d))
        })
        .collect()
}

/// Picks, greedily in index order, a maximal set of rows independent at the point.
fn independent_rows(m: &[Vec<BigRational>]) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut acc: Vec<Vec<BigRational>> = Vec::new();
    for (i, r) in m.iter().enumerate() {
        acc.push(r.clone());
        if rank_exact(&acc) > chosen.len() {
            chosen.push(i);
        } else {
            acc.pop();
        }
    }
    chosen
}

/// Symbolic classification over the fraction field: `Line(−c, 1)` with `c` a reduced rational
/// function when `v₂ ≡ c·v₁` generically, `Line(1, 0)` when `v₁` lies in the image.
/// Generic ranks are found at several random rational points (`seed` fixes them).
pub fn symbolic_kernel_of_pair(
    image: &[Vec<MultiLaurent>],
    v1: &[MultiLaurent],
    v2: &[MultiLaurent],
    nvars: usize,
    seed: u64,
) -> Result<PairKernel<RationalFunction>> {
    let ncols = v1.len();
    let red = unit_pivot_reduce(image.to_vec(), vec![v1.to_vec(), v2.to_vec()], ncols);
    let (a, w1, w2) = (red.rows, red.extra[0].clone(), red.extra[1].clone());
    let one = RationalFunction::from_poly(MultiLaurent::one(nvars));
    let zero = RationalFunction::from_poly(MultiLaurent::zero(nvars));
    if red.ncols == 0 {
        return Ok(PairKernel::TwoDim);
    }
    let mut rng = StdRng::seed_from_u64(seed);
    let mut best: Option<(Ranks, Vec<BigRational>)> = None;
    for _ in 0..3 {
        let pt = random_point(nvars, &mut rng);
        let r = ranks_at(
            &eval_rational_matrix(&a, &pt),
            &eval_rational_matrix(std::slice::from_ref(&w1), &pt)[0],
            &eval_rational_matrix(std::slice::from_ref(&w2), &pt)[0],
        );
        let better = match &best {
            None => true,
            Some((b, _)) => (r.r0, r.r12, r.r1, r.r2) > (b.r0, b.r12, b.r1, b.r2),
        };
        if better {
            best = Some((r, pt));
        }
    }
    let (r, pt) = best.expect("at least one sample");
    match r.r12 - r.r0 {
        0 => return Ok(PairKernel::TwoDim),
        2 => return Ok(PairKernel::ZeroDim),
        _ => {}
    }
    if r.r1 == r.r0 {
        return Ok(PairKernel::Line(one, zero));
    }
    if r.r2 == r.r0 {
        return Ok(PairKernel::Line(zero, one));
    }
    let at = eval_rational_matrix(&a, &pt);
    let basis = independent_rows(&at);
    let mut stacked_at: Vec<Vec<BigRational>> = basis.iter().map(|&i| at[i].clone()).collect();
    stacked_at.push(eval_rational_matrix(std::slice::from_ref(&w1), &pt)[0].clone());
    // columns independent for [B; v₁]: rows of the transpose
    let transpose: Vec<Vec<BigRational>> =
        (0..red.ncols).map(|j| stacked_at.iter().map(|row| row[j].clone()).collect()).collect();
    let cols = independent_rows(&transpose);
    debug_assert_eq!(cols.len(), basis.len() + 1);
    let mut rows_m: LMatrix = basis.iter().map(|&i| a[i].clone()).collect();
    rows_m.push(w1.clone());
    let mut rows_l: LMatrix = basis.iter().map(|&i| a[i].clone()).collect();
    rows_l.push(w2.clone());
    let all_rows: Vec<usize> = (0..rows_m.len()).collect();
    let dm = det_bareiss(&submatrix(&rows_m, &all_rows, &cols), nvars);
    let dl = det_bareiss(&submatrix(&rows_l, &all_rows, &cols), nvars);
    let c = RationalFunction::new(dl, dm)?;
    let minus_c = RationalFunction { num: -c.num.clone(), den: c.den.clone() };
    Ok(PairKernel::Line(minus_c, one))
}

/// Default exact-path bound, re-exported for callers that only see this module.
pub const MAX_CONDUCTOR: u32 = DEFAULT_MAX_CONDUCTOR;

/// Real part test helper for finite values: `|Im z| ≤ tol·max(1,|z|)`.
pub fn is_real_within(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol * z.norm().max(1.0)
}

/// Sign of a real rational, as −1, 0, 1.
pub fn rational_sign(r: &BigRational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nonvanishing_and_admissible() {
        let c = Character::parse("root:1/2,root:1/4").unwrap();
        assert!(c.is_nonvanishing());
        assert!(!Character::parse("1,-1").unwrap().is_nonvanishing());
        assert!(!Character::parse("root:0/1").unwrap().is_nonvanishing());
        assert!(Character::parse("root:1/3").unwrap().is_admissible(&[3]).unwrap());
        let w = Character::parse("root:1/4,root:1/4").unwrap();
        assert!(!w.is_admissible(&[1, 2]).unwrap());
        assert_eq!(w.power_product(&[1, 2]).unwrap(), Coord::root(3, 4).unwrap());
        assert!(w.is_admissible(&[0, 0]).unwrap());
    }

    #[test]
    fn numeric_coordinates_parse() {
        let c = Character::parse("c:0.6,0.8, root:1/3").unwrap();
        assert_eq!(c.len(), 2);
        assert!(c.is_unitary());
        assert!(matches!(c.coords[0], Coord::Numeric(_)));
    }

    #[test]
    fn square_root_branch() {
        let r = Coord::root(1, 2).unwrap().sqrt();
        assert_eq!(r, Coord::root(1, 4).unwrap());
        let z = Coord::Numeric(Complex64::new(0.0, -1.0)).sqrt().to_complex();
        assert!(z.im > 0.0);
        assert!((z * z - Complex64::new(0.0, -1.0)).norm() < 1e-12);
    }

    #[test]
    fn identity_and_zero_specialize() {
        let id = vec![
            vec![MultiLaurent::one(2), MultiLaurent::zero(2)],
            vec![MultiLaurent::zero(2), MultiLaurent::one(2)],
        ];
        let pt = Character::parse("root:1/5").unwrap().point_with_t_one();
        let s = specialize_numeric(&id, &pt).unwrap();
        assert_eq!(s[0][0], Complex64::new(1.0, 0.0));
        assert_eq!(s[0][1], Complex64::new(0.0, 0.0));
        let f = CycField::get(5);
        let e = specialize_exact(&id, &pt, &f);
        assert!(e[1][1].is_one() && e[1][0].is_zero());
    }

    #[test]
    fn rational_function_reduces() {
        let p = |s: &str| MultiLaurent::parse(s, 2).unwrap();
        let f = RationalFunction::new(p("t1^2 - 1"), p("2*t1 - 2")).unwrap();
        assert_eq!(f.num, p("1/2*t1 + 1/2"));
        assert!(f.is_polynomial());
        let g = RationalFunction::new(p("1"), p("-3*t1^2")).unwrap();
        assert_eq!(g.num, p("-1/3*t1^-2"));
    }
}
