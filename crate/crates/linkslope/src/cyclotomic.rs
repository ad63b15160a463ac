//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is a coordinate vector over the power basis `1, ζ, …, ζ^{φ(N)−1}`.
//! Powers of `ζ` beyond the basis are reduced through a precomputed table, so
//! multiplication is a bucketed convolution followed by one table lookup per
//! overflow bucket.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::laurent::MultiLaurent;

/// Largest conductor handled by the exact path.
pub const DEFAULT_MAX_CONDUCTOR: u32 = 120;

pub struct CycField {
    n: u32,
    deg: usize,
    /// `pow[j]` is `ζ^j` in the power basis, for `0 ≤ j < n`.
    pow: Vec<Vec<BigRational>>,
    /// Coefficients of the monic minimal polynomial, lowest degree first.
    minpoly: Vec<BigRational>,
}

impl fmt::Debug for CycField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.n)
    }
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let q = cyclotomic_poly(d);
            p = poly_div_int(&p, &q);
        }
    }
    p
}

fn poly_div_int(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let da = a.len() - 1;
    let mut quo = vec![0i64; da - db + 1];
    for k in (0..=da - db).rev() {
        let c = r[k + db] / b[db];
        quo[k] = c;
        for (j, &bj) in b.iter().enumerate() {
            r[k + j] -= c * bj;
        }
    }
    quo
}

fn field_cache() -> &'static Mutex<HashMap<u32, Arc<CycField>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CycField>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

impl CycField {
    /// The (shared, cached) field `Q(ζ_n)`.
    pub fn get(n: u32) -> Arc<CycField> {
        assert!(n >= 1);
        let mut cache = field_cache().lock().unwrap();
        cache.entry(n).or_insert_with(|| Arc::new(CycField::build(n))).clone()
    }

    fn build(n: u32) -> CycField {
        let phi: Vec<BigRational> = cyclotomic_poly(n)
            .into_iter()
            .map(|c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let deg = phi.len() - 1;
        let mut pow = Vec::with_capacity(n as usize);
        let mut cur = vec![BigRational::zero(); deg];
        cur[0] = BigRational::one();
        for _ in 0..n {
            pow.push(cur.clone());
            // multiply by ζ: shift up, then reduce the overflow coefficient
            let top = cur[deg - 1].clone();
            let mut next = vec![BigRational::zero(); deg];
            for k in (1..deg).rev() {
                next[k] = cur[k - 1].clone();
            }
            if !top.is_zero() {
                for (k, nk) in next.iter_mut().enumerate() {
                    *nk -= &top * &phi[k];
                }
            }
            cur = next;
        }
        CycField { n, deg, pow, minpoly: phi }
    }

    pub fn conductor(&self) -> u32 {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.deg
    }
}

#[derive(Clone)]
pub struct Cyc {
    field: Arc<CycField>,
    c: Vec<BigRational>,
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        if self.field.n == other.field.n {
            return self.c == other.c;
        }
        let common = CycField::get(num_integer::lcm(self.field.n, other.field.n));
        self.embed(&common) == other.embed(&common)
    }
}

impl fmt::Debug for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for Cyc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            parts.push(match k {
                0 => format!("{c}"),
                1 => format!("{c}*z"),
                _ => format!("{c}*z^{k}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{} (z = zeta_{})", parts.join(" + "), self.field.n)
        }
    }
}

impl Cyc {
    pub fn zero(field: &Arc<CycField>) -> Cyc {
        Cyc { field: field.clone(), c: vec![BigRational::zero(); field.deg] }
    }

    pub fn one(field: &Arc<CycField>) -> Cyc {
        Self::from_rational(field, BigRational::one())
    }

    pub fn from_rational(field: &Arc<CycField>, v: BigRational) -> Cyc {
        let mut z = Self::zero(field);
        z.c[0] = v;
        z
    }

    pub fn from_int(field: &Arc<CycField>, v: i64) -> Cyc {
        Self::from_rational(field, BigRational::from_integer(BigInt::from(v)))
    }

    /// `ζ^k` for any integer `k`.
    pub fn zeta_pow(field: &Arc<CycField>, k: i64) -> Cyc {
        let n = field.n as i64;
        Cyc { field: field.clone(), c: field.pow[k.rem_euclid(n) as usize].clone() }
    }

    /// The same number in `ℚ(ζ_M)` for a multiple `M` of the conductor.
    ///
    /// # Panics
    /// When the target conductor is not a multiple of this one.
    pub fn embed(&self, field: &Arc<CycField>) -> Cyc {
        assert_eq!(field.n % self.field.n, 0, "ℚ(ζ_{}) does not contain ζ_{}", field.n, self.field.n);
        let step = (field.n / self.field.n) as i64;
        let mut out = Cyc::zero(field);
        for (k, c) in self.c.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            out = out.add(&Cyc::zeta_pow(field, k as i64 * step).scale(c));
        }
        out
    }

    pub fn field(&self) -> &Arc<CycField> {
        &self.field
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|x| x.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1..].iter().all(|x| x.is_zero())
    }

    pub fn add(&self, o: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Cyc) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect() }
    }

    pub fn neg(&self) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| -a).collect() }
    }

    pub fn scale(&self, r: &BigRational) -> Cyc {
        Cyc { field: self.field.clone(), c: self.c.iter().map(|a| a * r).collect() }
    }

    fn from_buckets(field: &Arc<CycField>, buckets: Vec<BigRational>) -> Cyc {
        let d = field.deg;
        let mut out = vec![BigRational::zero(); d];
        for (k, b) in buckets.into_iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            if k < d {
                out[k] += b;
            } else {
                for (o, p) in out.iter_mut().zip(&field.pow[k]) {
                    if !p.is_zero() {
                        *o += &b * p;
                    }
                }
            }
        }
        Cyc { field: field.clone(), c: out }
    }

    pub fn mul(&self, o: &Cyc) -> Cyc {
        let n = self.field.n as usize;
        let mut buckets = vec![BigRational::zero(); n];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    buckets[(i + j) % n] += a * b;
                }
            }
        }
        Self::from_buckets(&self.field, buckets)
    }

    /// Multiplicative inverse by the extended Euclidean algorithm against the minimal polynomial.
    pub fn inv(&self) -> Cyc {
        assert!(!self.is_zero(), "inverse of zero in a cyclotomic field");
        let (mut r0, mut r1) = (self.field.minpoly.clone(), trim(self.c.clone()));
        let (mut s0, mut s1) = (vec![BigRational::zero()], vec![BigRational::one()]);
        while r1.len() > 1 {
            let (quo, rem) = upoly_divrem(&r0, &r1);
            let s2 = upoly_sub(&s0, &upoly_mul(&quo, &s1));
            r0 = std::mem::replace(&mut r1, rem);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant: s1 * self ≡ r1
        let c = r1[0].clone();
        let mut out = vec![BigRational::zero(); self.field.deg];
        let s1 = upoly_reduce(&s1, &self.field.minpoly);
        for (k, v) in s1.into_iter().enumerate() {
            out[k] = v / &c;
        }
        Cyc { field: self.field.clone(), c: out }
    }

    pub fn div(&self, o: &Cyc) -> Cyc {
        self.mul(&o.inv())
    }

    /// Complex conjugation, `ζ ↦ ζ^{-1}`.
    pub fn conj(&self) -> Cyc {
        let n = self.field.n as usize;
        let mut buckets = vec![BigRational::zero(); n];
        for (k, a) in self.c.iter().enumerate() {
            buckets[(n - k) % n] += a;
        }
        Self::from_buckets(&self.field, buckets)
    }

    pub fn is_real(&self) -> bool {
        *self == self.conj()
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.field.n as f64;
        let mut s = Complex64::new(0.0, 0.0);
        for (k, a) in self.c.iter().enumerate() {
            if !a.is_zero() {
                let th = 2.0 * std::f64::consts::PI * k as f64 / n;
                s += Complex64::from_polar(a.to_f64().unwrap_or(f64::NAN), th);
            }
        }
        s
    }

    /// The rational value when the element lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.c[1..].iter().all(|x| x.is_zero()) {
            Some(self.c[0].clone())
        } else {
            None
        }
    }

    /// Evaluates a Laurent polynomial at `t_i = ζ^{exps[i]}`.
    pub fn eval_laurent(field: &Arc<CycField>, p: &MultiLaurent, exps: &[i64]) -> Cyc {
        let n = field.n as i64;
        let mut buckets = vec![BigRational::zero(); field.n as usize];
        for (e, c) in p.terms() {
            let k: i64 = e.iter().zip(exps).map(|(&a, &b)| a as i64 * b).sum();
            buckets[k.rem_euclid(n) as usize] += c;
        }
        Self::from_buckets(field, buckets)
    }

    /// Writes a real element as a polynomial in `c = ζ + ζ^{-1}` of least degree.
    /// Returns coefficients lowest degree first, or `None` if the element is not real.
    pub fn in_real_generator(&self) -> Option<Vec<BigRational>> {
        if !self.is_real() {
            return None;
        }
        let f = &self.field;
        let g = Cyc::zeta_pow(f, 1).add(&Cyc::zeta_pow(f, -1));
        let mut basis = vec![Cyc::one(f)];
        for deg in 0..=f.deg {
            if deg > 0 {
                let next = basis[deg - 1].mul(&g);
                basis.push(next);
            }
            if let Some(sol) = solve_rational_combination(&basis, self) {
                return Some(sol);
            }
        }
        None
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().map(|x| x.is_zero()).unwrap_or(false) {
        v.pop();
    }
    if v.is_empty() {
        v.push(BigRational::zero());
    }
    v
}

fn upoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(r)
}

fn upoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut r = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        r[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        r[i] -= y;
    }
    trim(r)
}

fn upoly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let mut quo = vec![BigRational::zero(); r.len() - db];
    for k in (0..quo.len()).rev() {
        let c = &r[k + db] / &lead;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                r[k + j] -= &c * bj;
            }
        }
        quo[k] = c;
    }
    r.truncate(db.max(1));
    (trim(quo), trim(r))
}

fn upoly_reduce(a: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    upoly_divrem(a, m).1
}

/// Solves `Σ x_k basis[k] = target` over `Q`, if possible.
fn solve_rational_combination(basis: &[Cyc], target: &Cyc) -> Option<Vec<BigRational>> {
    let d = target.field.deg;
    let k = basis.len();
    // augmented matrix: d rows, k + 1 columns
    let mut m: Vec<Vec<BigRational>> = (0..d)
        .map(|i| {
            let mut row: Vec<BigRational> = basis.iter().map(|b| b.c[i].clone()).collect();
            row.push(target.c[i].clone());
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..d).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != r && !m[i][col].is_zero() {
                let f = m[i][col].clone();
                for j in 0..=k {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    if (r..d).any(|i| !m[i][k].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); k];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = m[row][k].clone();
    }
    Some(x)
}

/// Formats a polynomial in `c = ξ + ξ^{-1}` with rational coefficients.
pub fn format_real_generator(coeffs: &[BigRational], name: &str) -> String {
    let mut parts: Vec<String> = Vec::new();
    for (k, a) in coeffs.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        let mag = a.abs();
        let sgn = if a.is_negative() { "-" } else { "+" };
        let body = match k {
            0 => format!("{mag}"),
            1 if mag.is_one() => name.to_string(),
            1 => format!("{mag}*{name}"),
            _ if mag.is_one() => format!("{name}^{k}"),
            _ => format!("{mag}*{name}^{k}"),
        };
        parts.push(format!("{sgn} {body}"));
    }
    if parts.is_empty() {
        return "0".to_string();
    }
    let joined = parts.join(" ");
    joined.strip_prefix("+ ").map(|s| s.to_string()).unwrap_or_else(|| format!("-{}", &joined[2..]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_across_conductors() {
        let (f2, f4, f6) = (CycField::get(2), CycField::get(4), CycField::get(6));
        assert_eq!(Cyc::zeta_pow(&f2, 1), Cyc::from_int(&f4, -1));
        assert_eq!(Cyc::zeta_pow(&f4, 2), Cyc::zeta_pow(&f6, 3));
        assert_ne!(Cyc::zeta_pow(&f4, 1), Cyc::zeta_pow(&f6, 1));
        let w = Cyc::zeta_pow(&f6, 1).add(&Cyc::zeta_pow(&f6, -1));
        assert_eq!(w, Cyc::one(&f4));
    }

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(CycField::get(120).degree(), 32);
    }

    #[test]
    fn field_laws() {
        let f = CycField::get(15);
        let a = Cyc::zeta_pow(&f, 1).add(&Cyc::from_int(&f, 3));
        let b = Cyc::zeta_pow(&f, 7).sub(&Cyc::zeta_pow(&f, 2));
        assert!(a.mul(&a.inv()).is_one());
        assert!(b.mul(&b.inv()).is_one());
        assert_eq!(a.mul(&b), b.mul(&a));
        assert_eq!(Cyc::zeta_pow(&f, 15), Cyc::one(&f));
        assert_eq!(Cyc::zeta_pow(&f, 4).mul(&Cyc::zeta_pow(&f, 13)), Cyc::zeta_pow(&f, 2));
        let z = a.to_complex();
        let w = a.conj().to_complex();
        assert!((z.conj() - w).norm() < 1e-12);
    }

    #[test]
    fn real_generator_expression() {
        let f = CycField::get(5);
        let g = Cyc::zeta_pow(&f, 1).add(&Cyc::zeta_pow(&f, -1));
        let x = Cyc::from_int(&f, 3).sub(&g).scale(&BigRational::new(1.into(), 5.into()));
        let e = x.in_real_generator().unwrap();
        assert_eq!(e.len(), 2);
        assert_eq!(format_real_generator(&e, "c"), "3/5 - 1/5*c");
        assert!(Cyc::zeta_pow(&f, 1).in_real_generator().is_none());
    }
}
