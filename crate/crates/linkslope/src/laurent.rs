//! Sparse multivariate Laurent polynomials with exact rational coefficients.
//!
//! Variable 0 is conventionally the distinguished variable `t`; variable `i > 0`
//! prints as `t{i}`. Terms live in a `BTreeMap` keyed by exponent vectors, so
//! iteration order (and therefore every printed form) is deterministic.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Exponent = Vec<i32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiLaurent {
    nvars: usize,
    terms: BTreeMap<Exponent, BigRational>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Graded-lex comparison: total degree first, then lexicographic.
fn grlex_cmp(a: &[i32], b: &[i32]) -> std::cmp::Ordering {
    let da: i64 = a.iter().map(|&x| x as i64).sum();
    let db: i64 = b.iter().map(|&x| x as i64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl MultiLaurent {
    pub fn zero(nvars: usize) -> Self {
        MultiLaurent { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, BigRational::one())
    }

    pub fn constant(nvars: usize, c: BigRational) -> Self {
        Self::monomial(nvars, vec![0; nvars], c)
    }

    pub fn from_int(nvars: usize, c: i64) -> Self {
        Self::constant(nvars, q(c))
    }

    pub fn monomial(nvars: usize, exp: Exponent, c: BigRational) -> Self {
        assert_eq!(exp.len(), nvars, "exponent length must equal the variable count");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        MultiLaurent { nvars, terms }
    }

    /// The monomial `t_var^power`.
    pub fn var_pow(nvars: usize, var: usize, power: i32) -> Self {
        let mut e = vec![0; nvars];
        e[var] = power;
        Self::monomial(nvars, e, BigRational::one())
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        Self::var_pow(nvars, var, 1)
    }

    /// Builds a polynomial from `(coefficient, exponent)` pairs, merging repeats.
    pub fn from_terms(nvars: usize, items: impl IntoIterator<Item = (BigRational, Exponent)>) -> Self {
        let mut p = Self::zero(nvars);
        for (c, e) in items {
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponent, BigRational> {
        &self.terms
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

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.terms.iter().all(|(e, c)| c.is_one() && e.iter().all(|&x| x == 0))
    }

    /// True for a single term, i.e. a unit of the Laurent ring over the rationals.
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms.get(&vec![0; self.nvars]).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn coeff(&self, e: &[i32]) -> BigRational {
        self.terms.get(e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_term(&mut self, e: Exponent, c: BigRational) {
        assert_eq!(e.len(), self.nvars);
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::structural(format!(
                "variable count mismatch: {} vs {}",
                self.nvars, other.nvars
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        Ok(r)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut r = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                r.add_term(e, ca * cb);
            }
        }
        Ok(r)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiLaurent {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    /// Multiplies by the monomial `t^shift`.
    pub fn shift(&self, shift: &[i32]) -> Self {
        MultiLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().zip(shift).map(|(a, b)| a + b).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(self.nvars);
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// The bar involution: every `t_i` becomes `t_i^{-1}`.
    pub fn involute(&self) -> Self {
        MultiLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| -x).collect(), c.clone()))
                .collect(),
        }
    }

    pub fn partial_derivative(&self, var: usize) -> Self {
        assert!(var < self.nvars, "variable index out of range");
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            if k != 0 {
                let mut e2 = e.clone();
                e2[var] -= 1;
                r.add_term(e2, c * q(k as i64));
            }
        }
        r
    }

    /// Replaces every `t_i^k` by `t_i^{k·factor}`.
    pub fn scale_exponents(&self, factor: i32) -> Self {
        MultiLaurent {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| x * factor).collect(), c.clone()))
                .collect(),
        }
    }

    /// Monomial substitution `t_i ↦ Π_j u_j^{m[i][j]}` into a ring with `new_nvars` variables.
    pub fn substitute_monomial(&self, m: &[Vec<i32>], new_nvars: usize) -> Self {
        assert_eq!(m.len(), self.nvars);
        let mut r = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_nvars];
            for (i, &k) in e.iter().enumerate() {
                for (j, &mij) in m[i].iter().enumerate() {
                    ne[j] += k * mij;
                }
            }
            r.add_term(ne, c.clone());
        }
        r
    }

    /// Sets variable `var` to 1, keeping the variable count.
    pub fn set_var_one(&self, var: usize) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2[var] = 0;
            r.add_term(e2, c.clone());
        }
        r
    }

    /// Drops or reorders variables: variable `i` of the result is variable `keep[i]` of `self`.
    /// Variables not listed must not occur.
    pub fn project_vars(&self, keep: &[usize]) -> Self {
        let mut r = Self::zero(keep.len());
        for (e, c) in &self.terms {
            r.add_term(keep.iter().map(|&k| e[k]).collect(), c.clone());
        }
        r
    }

    /// Embeds into a ring with more variables: variable `i` goes to `target[i]`.
    pub fn embed(&self, new_nvars: usize, target: &[usize]) -> Self {
        let mut r = Self::zero(new_nvars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; new_nvars];
            for (i, &k) in e.iter().enumerate() {
                ne[target[i]] += k;
            }
            r.add_term(ne, c.clone());
        }
        r
    }

    pub fn min_exponents(&self) -> Exponent {
        let mut m = vec![i32::MAX; self.nvars];
        for e in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).min(b);
            }
        }
        if self.terms.is_empty() {
            vec![0; self.nvars]
        } else {
            m
        }
    }

    pub fn max_exponents(&self) -> Exponent {
        let mut m = vec![i32::MIN; self.nvars];
        for e in self.terms.keys() {
            for (a, &b) in m.iter_mut().zip(e) {
                *a = (*a).max(b);
            }
        }
        if self.terms.is_empty() {
            vec![0; self.nvars]
        } else {
            m
        }
    }

    /// Shifts so that every variable has minimal exponent 0.
    pub fn to_polynomial(&self) -> (Self, Exponent) {
        let m = self.min_exponents();
        let neg: Vec<i32> = m.iter().map(|x| -x).collect();
        (self.shift(&neg), m)
    }

    pub fn leading_term_grlex(&self) -> Option<(&Exponent, &BigRational)> {
        self.terms.iter().max_by(|a, b| grlex_cmp(a.0, b.0))
    }

    /// Sum of coefficients (value at the all-ones point).
    pub fn coefficient_sum(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn eval_complex(&self, point: &[Complex64]) -> Result<Complex64> {
        if point.len() != self.nvars {
            return Err(Error::structural("evaluation point has the wrong length"));
        }
        if point.iter().any(|z| z.norm() == 0.0) {
            return Err(Error::domain("Laurent monomials are undefined at 0"));
        }
        let mut s = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut m = Complex64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (z, &k) in point.iter().zip(e) {
                if k != 0 {
                    m *= z.powi(k);
                }
            }
            s += m;
        }
        Ok(s)
    }

    /// `Σ |c|·|z^e|`, the size of the value before any cancellation between terms.
    pub fn eval_magnitude(&self, moduli: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let m: f64 = moduli.iter().zip(e).map(|(r, &k)| r.powi(k)).product();
                c.to_f64().unwrap_or(f64::INFINITY).abs() * m
            })
            .sum()
    }

    pub fn eval_rational(&self, point: &[BigRational]) -> Result<BigRational> {
        if point.len() != self.nvars {
            return Err(Error::structural("evaluation point has the wrong length"));
        }
        if point.iter().any(|z| z.is_zero()) {
            return Err(Error::domain("Laurent monomials are undefined at 0"));
        }
        let mut s = BigRational::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (z, &k) in point.iter().zip(e) {
                if k > 0 {
                    m *= num_traits::pow(z.clone(), k as usize);
                } else if k < 0 {
                    m /= num_traits::pow(z.clone(), (-k) as usize);
                }
            }
            s += m;
        }
        Ok(s)
    }

    /// Partial evaluation of one variable at a rational value.
    pub fn eval_var_rational(&self, var: usize, value: &BigRational) -> Self {
        let mut r = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[var];
            let f = if k >= 0 {
                num_traits::pow(value.clone(), k as usize)
            } else {
                num_traits::pow(value.clone(), (-k) as usize).recip()
            };
            let mut e2 = e.clone();
            e2[var] = 0;
            r.add_term(e2, c * f);
        }
        r
    }

    /// Coefficients with respect to one variable; each coefficient has that variable's exponent 0.
    pub fn coeffs_in_var(&self, var: usize) -> BTreeMap<i32, MultiLaurent> {
        let mut out: BTreeMap<i32, MultiLaurent> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            let k = e2[var];
            e2[var] = 0;
            out.entry(k).or_insert_with(|| MultiLaurent::zero(self.nvars)).add_term(e2, c.clone());
        }
        out
    }

    fn degree_in(&self, var: usize) -> i32 {
        self.terms.keys().map(|e| e[var]).max().unwrap_or(i32::MIN)
    }

    /// Rational content: positive rational `c` with `self / c` having coprime integer coefficients.
    pub fn rational_content(&self) -> BigRational {
        let mut num = BigInt::zero();
        let mut den = BigInt::one();
        for c in self.terms.values() {
            num = num.gcd(c.numer());
            den = den.lcm(c.denom());
        }
        if num.is_zero() {
            BigRational::one()
        } else {
            BigRational::new(num, den)
        }
    }

    /// Divides by the rational content.
    pub fn primitive_rational(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.rational_content().recip())
    }

    /// Exact division in the Laurent ring; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        assert_eq!(self.nvars, divisor.nvars);
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(self.nvars));
        }
        if divisor.is_monomial() {
            let (e, c) = divisor.terms.iter().next().unwrap();
            let neg: Vec<i32> = e.iter().map(|x| -x).collect();
            return Some(self.shift(&neg).scale(&c.recip()));
        }
        let lo: Vec<i32> = self
            .min_exponents()
            .iter()
            .zip(divisor.min_exponents())
            .map(|(a, b)| a - b)
            .collect();
        let hi: Vec<i32> = self
            .max_exponents()
            .iter()
            .zip(divisor.max_exponents())
            .map(|(a, b)| a - b)
            .collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return None;
        }
        let (de, dc) = divisor.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quo = Self::zero(self.nvars);
        while let Some((re, rc)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let me: Vec<i32> = re.iter().zip(&de).map(|(a, b)| a - b).collect();
            if me.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return None;
            }
            let mc = rc / &dc;
            let m = Self::monomial(self.nvars, me, mc);
            rem = &rem - &(&m * divisor);
            quo = &quo + &m;
        }
        Some(quo)
    }

    /// Canonical representative modulo `±` monomials and rational scalars.
    pub fn unit_normalize(&self) -> UnitNormalForm {
        UnitNormalForm::canonical(self)
    }

    /// Greatest common divisor up to units, in unit-normal form.
    pub fn gcd(&self, other: &Self) -> UnitNormalForm {
        assert_eq!(self.nvars, other.nvars);
        let (a, _) = self.to_polynomial();
        let (b, _) = other.to_polynomial();
        let g = poly_gcd(&a, &b);
        g.unit_normalize()
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    pub fn parse(text: &str, nvars: usize) -> Result<Self> {
        parse_poly(text, nvars)
    }
}

fn main_var(a: &MultiLaurent, b: &MultiLaurent) -> Option<usize> {
    (0..a.nvars).rev().find(|&v| a.degree_in(v) > 0 || b.degree_in(v) > 0)
}

fn content_in(a: &MultiLaurent, var: usize) -> MultiLaurent {
    let mut g = MultiLaurent::zero(a.nvars);
    for c in a.coeffs_in_var(var).values() {
        g = poly_gcd(&g, c);
        if g.is_constant() && !g.is_zero() {
            return MultiLaurent::one(a.nvars);
        }
    }
    g
}

fn primitive_part_in(a: &MultiLaurent, var: usize) -> MultiLaurent {
    if a.is_zero() {
        return a.clone();
    }
    let c = content_in(a, var);
    a.div_exact(&c).expect("content divides its polynomial").primitive_rational()
}

/// Pseudo-remainder with respect to `var`.
fn prem(a: &MultiLaurent, b: &MultiLaurent, var: usize) -> MultiLaurent {
    let db = b.degree_in(var);
    let bc = b.coeffs_in_var(var);
    let lcb = bc[&db].clone();
    let mut r = a.clone();
    while !r.is_zero() && r.degree_in(var) >= db {
        let dr = r.degree_in(var);
        let lcr = r.coeffs_in_var(var)[&dr].clone();
        let m = &lcr * &MultiLaurent::var_pow(a.nvars, var, dr - db);
        r = &(&lcb * &r) - &(&m * b);
        r = r.primitive_rational();
    }
    r
}

/// gcd of ordinary polynomials (non-negative exponents), up to a rational scalar.
fn poly_gcd(a: &MultiLaurent, b: &MultiLaurent) -> MultiLaurent {
    if a.is_zero() {
        return b.primitive_rational();
    }
    if b.is_zero() {
        return a.primitive_rational();
    }
    let Some(v) = main_var(a, b) else {
        return MultiLaurent::one(a.nvars);
    };
    let ca = content_in(a, v);
    let cb = content_in(b, v);
    let c = poly_gcd(&ca, &cb);
    let mut p = a.div_exact(&ca).unwrap().primitive_rational();
    let mut r = b.div_exact(&cb).unwrap().primitive_rational();
    if p.degree_in(v) < r.degree_in(v) {
        std::mem::swap(&mut p, &mut r);
    }
    while !r.is_zero() {
        if r.degree_in(v) == 0 {
            p = MultiLaurent::one(a.nvars);
            break;
        }
        let rem = prem(&p, &r, v);
        p = r;
        r = if rem.is_zero() { rem } else { primitive_part_in(&rem, v) };
    }
    let g = primitive_part_in(&p, v);
    (&c * &g).primitive_rational()
}

/// A polynomial written as `sign · content · t^monomial_shift · core`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnitNormalForm {
    pub core: MultiLaurent,
    pub sign: i8,
    pub monomial_shift: Exponent,
    /// Positive rational factor removed to make `core` integral and primitive.
    pub content: BigRational,
    /// Set when symmetric centering was requested and succeeded.
    pub symmetric: bool,
}

impl UnitNormalForm {
    /// Shift minimal exponents to 0, make integral and primitive, positive grlex-leading coefficient.
    pub fn canonical(p: &MultiLaurent) -> Self {
        if p.is_zero() {
            return UnitNormalForm {
                core: p.clone(),
                sign: 1,
                monomial_shift: vec![0; p.nvars],
                content: BigRational::one(),
                symmetric: false,
            };
        }
        let (poly, shift) = p.to_polynomial();
        Self::finish(poly, shift, false)
    }

    fn finish(poly: MultiLaurent, shift: Exponent, symmetric: bool) -> Self {
        let content = poly.rational_content();
        let mut core = poly.scale(&content.recip());
        let mut sign = 1;
        if core.leading_term_grlex().map(|(_, c)| c.is_negative()).unwrap_or(false) {
            core = -core;
            sign = -1;
        }
        UnitNormalForm { core, sign, monomial_shift: shift, content, symmetric }
    }

    /// Centers exponents so that `involute(core) = ±core` when possible.
    /// Returns the canonical form (with `symmetric = false`) when no centering exists.
    pub fn symmetric(p: &MultiLaurent) -> Self {
        if p.is_zero() {
            return Self::canonical(p);
        }
        let lo = p.min_exponents();
        let hi = p.max_exponents();
        if lo.iter().zip(&hi).any(|(a, b)| (a + b) % 2 != 0) {
            return Self::canonical(p);
        }
        let shift: Vec<i32> = lo.iter().zip(&hi).map(|(a, b)| (a + b) / 2).collect();
        let neg: Vec<i32> = shift.iter().map(|x| -x).collect();
        let centered = p.shift(&neg);
        let inv = centered.involute();
        if inv != centered && inv != -centered.clone() {
            return Self::canonical(p);
        }
        Self::finish(centered, shift, true)
    }

    /// Reassembles `sign · content · t^shift · core`.
    pub fn value(&self) -> MultiLaurent {
        let mut v = self.core.shift(&self.monomial_shift).scale(&self.content);
        if self.sign < 0 {
            v = -v;
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.core.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.core.is_one()
    }
}

// ---- operator plumbing ----

impl<'a> Add<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, rhs: &MultiLaurent) -> MultiLaurent {
        self.checked_add(rhs).expect("variable count mismatch")
    }
}
impl<'a> Sub<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, rhs: &MultiLaurent) -> MultiLaurent {
        self.checked_sub(rhs).expect("variable count mismatch")
    }
}
impl<'a> Mul<&'a MultiLaurent> for &'a MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, rhs: &MultiLaurent) -> MultiLaurent {
        self.checked_mul(rhs).expect("variable count mismatch")
    }
}
impl Add for MultiLaurent {
    type Output = MultiLaurent;
    fn add(self, rhs: MultiLaurent) -> MultiLaurent {
        &self + &rhs
    }
}
impl Sub for MultiLaurent {
    type Output = MultiLaurent;
    fn sub(self, rhs: MultiLaurent) -> MultiLaurent {
        &self - &rhs
    }
}
impl Mul for MultiLaurent {
    type Output = MultiLaurent;
    fn mul(self, rhs: MultiLaurent) -> MultiLaurent {
        &self * &rhs
    }
}
impl Neg for MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        MultiLaurent {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}
impl Neg for &MultiLaurent {
    type Output = MultiLaurent;
    fn neg(self) -> MultiLaurent {
        -(self.clone())
    }
}

// ---- text format ----

fn var_name(i: usize) -> String {
    if i == 0 {
        "t".to_string()
    } else {
        format!("t{i}")
    }
}

impl fmt::Display for MultiLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut items: Vec<(&Exponent, &BigRational)> = self.terms.iter().collect();
        items.sort_by(|a, b| grlex_cmp(b.0, a.0));
        for (k, (e, c)) in items.into_iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let is_const = e.iter().all(|&x| x == 0);
            if !a.is_one() || is_const {
                factors.push(a.to_string());
            }
            for (i, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(var_name(i)),
                    _ => factors.push(format!("{}^{}", var_name(i), x)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

fn parse_var(name: &str, nvars: usize) -> Result<usize> {
    let idx = if name == "t" || name == "t0" {
        0
    } else if let Some(rest) = name.strip_prefix('t') {
        rest.parse::<usize>().map_err(|_| Error::parse(format!("unknown variable `{name}`")))?
    } else {
        return Err(Error::parse(format!("unknown variable `{name}`")));
    };
    if idx >= nvars {
        return Err(Error::parse(format!("variable `{name}` out of range for {nvars} variables")));
    }
    Ok(idx)
}

fn parse_poly(text: &str, nvars: usize) -> Result<MultiLaurent> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(Error::parse("empty polynomial"));
    }
    let mut out = MultiLaurent::zero(nvars);
    // split into signed terms, ignoring signs that follow '^'
    let bytes: Vec<char> = s.chars().collect();
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, &ch) in bytes.iter().enumerate() {
        if (ch == '+' || ch == '-') && (i == 0 || bytes[i - 1] != '^') {
            if !cur.is_empty() {
                terms.push((neg, std::mem::take(&mut cur)));
            } else if i != 0 {
                return Err(Error::parse(format!("dangling sign at position {i}")));
            }
            neg = ch == '-';
        } else {
            cur.push(ch);
        }
    }
    if cur.is_empty() {
        return Err(Error::parse("polynomial ends with a sign"));
    }
    terms.push((neg, cur));
    for (neg, body) in terms {
        let mut coeff = BigRational::one();
        let mut e = vec![0; nvars];
        for factor in body.split('*') {
            if factor.is_empty() {
                return Err(Error::parse(format!("empty factor in `{body}`")));
            }
            if factor.starts_with(|c: char| c.is_ascii_digit()) {
                let v: BigRational = if let Some((n, d)) = factor.split_once('/') {
                    let n: BigInt = n.parse().map_err(|_| Error::parse(format!("bad number `{factor}`")))?;
                    let d: BigInt = d.parse().map_err(|_| Error::parse(format!("bad number `{factor}`")))?;
                    if d.is_zero() {
                        return Err(Error::parse("zero denominator"));
                    }
                    BigRational::new(n, d)
                } else {
                    BigRational::from_integer(
                        factor.parse().map_err(|_| Error::parse(format!("bad number `{factor}`")))?,
                    )
                };
                coeff *= v;
            } else {
                let (name, pw) = match factor.split_once('^') {
                    Some((n, p)) => (
                        n,
                        p.parse::<i32>().map_err(|_| Error::parse(format!("bad exponent in `{factor}`")))?,
                    ),
                    None => (factor, 1),
                };
                e[parse_var(name, nvars)?] += pw;
            }
        }
        if neg {
            coeff = -coeff;
        }
        out.add_term(e, coeff);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, n: usize) -> MultiLaurent {
        MultiLaurent::parse(s, n).unwrap()
    }

    #[test]
    fn product_of_bar_pair() {
        let a = p("t1 - 1", 2);
        assert_eq!(&a * &a.involute(), p("2 - t1 - t1^-1", 2));
    }

    #[test]
    fn mixed_product_expands() {
        let a = p("t - t^-1", 2);
        let b = p("t1 - t1^-1", 2);
        assert_eq!(&a * &b, p("t*t1 - t*t1^-1 - t^-1*t1 + t^-1*t1^-1", 2));
        assert_eq!(&a + &MultiLaurent::zero(2), a);
    }

    #[test]
    fn involution_examples() {
        assert_eq!(p("t1", 2).involute(), p("t1^-1", 2));
        assert_eq!(p("t^2*t1 + 3", 2).involute(), p("t^-2*t1^-1 + 3", 2));
        let s = p("2 - t1 - t1^-1", 2);
        assert_eq!(s.involute(), s);
    }

    #[test]
    fn derivatives() {
        assert_eq!(p("t^2", 1).partial_derivative(0), p("2*t", 1));
        assert_eq!(p("t^-1", 1).partial_derivative(0), p("-t^-2", 1));
        let w = p("t*t1 - t*t1^-1 - t^-1*t1 + t^-1*t1^-1", 2).partial_derivative(0).set_var_one(0);
        assert_eq!(w, p("2*t1 - 2*t1^-1", 2));
    }

    #[test]
    fn evaluation() {
        let w = p("2 - t1 - t1^-1", 1 + 1);
        let v = w.eval_complex(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]).unwrap();
        assert!((v - Complex64::new(4.0, 0.0)).norm() < 1e-12);
        let s = p("t1 + t1^-1", 2).eval_complex(&[Complex64::new(1.0, 0.0), Complex64::i()]).unwrap();
        assert!(s.norm() < 1e-12);
        assert!(w.eval_complex(&[Complex64::new(0.0, 0.0), Complex64::i()]).is_err());
        assert_eq!(p("3*t - 5*t1^2 + 1/2", 2).coefficient_sum(), BigRational::new(BigInt::from(-3), BigInt::from(2)));
    }

    #[test]
    fn gcd_examples() {
        let g = p("t^2 - 1", 1).gcd(&p("t - 1", 1));
        assert_eq!(g.core, p("t - 1", 1));
        let x = &p("t - 1", 2) * &p("t1 - 1", 2);
        let y = &p("t - 1", 2) * &p("t1 + 1", 2);
        assert_eq!(x.gcd(&y).core, p("t - 1", 2));
        let z = p("3*t^-2 - 6*t^-1", 1);
        assert_eq!(z.gcd(&MultiLaurent::zero(1)).core, p("2*t - 1", 1));
        assert!(MultiLaurent::zero(2).gcd(&MultiLaurent::zero(2)).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = p("t - 1", 2);
        let b = p("t*t1 + t1^-3 - 2", 2);
        let c = &a * &b;
        assert_eq!(c.div_exact(&a).unwrap(), b);
        assert!(p("t + 1", 2).div_exact(&p("t - 1", 2)).is_none());
    }

    #[test]
    fn normal_forms() {
        let n = p("-t1^3*t1 + t1^3", 2).unit_normalize();
        assert_eq!(n.core, p("t1 - 1", 2));
        assert_eq!(n.value(), p("-t1^4 + t1^3", 2));
        let s = UnitNormalForm::symmetric(&(&p("t - 1", 2) * &p("t1 - 1", 2)).scale_exponents(2));
        assert!(s.symmetric);
        assert!(s.core.involute() == s.core || s.core.involute() == -s.core.clone());
        assert!(MultiLaurent::zero(1).unit_normalize().is_zero());
    }

    #[test]
    fn text_round_trip() {
        for s in ["2 - t1 - t1^-1", "-3/4*t^2*t1^-1 + t2", "0", "t^-5"] {
            let a = MultiLaurent::parse(s, 3).unwrap();
            let b = MultiLaurent::parse(&a.to_string(), 3).unwrap();
            assert_eq!(a, b);
        }
        assert!(MultiLaurent::parse("t7", 2).is_err());
        assert!(MultiLaurent::parse("t +", 2).is_err());
    }
}
