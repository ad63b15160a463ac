//! Closed braids relative to their axis: reduced Burau matrices (row-vector convention),
//! the projection `⟨α, β⟩`, and the inverse slopes `β_r` at the roots of unity `ξ_r`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;

use crate::cyclotomic::{format_real_generator, Cyc, CycField};
use crate::diagram::BraidWord;
use crate::error::{Error, Result};
use crate::laurent::MultiLaurent;
use crate::linalg::{kernel_pair_exact, LMatrix, PairKernel};
use crate::slope::SlopeValue;

/// Entries of the generator matrix for `σ_i^{±1}`, as `(row, col, coefficient, t-exponent)`.
/// Rows are images of basis vectors: `e_{i−1} ↦ e_{i−1} + t·e_i`, `e_i ↦ −t·e_i`, `e_{i+1} ↦ e_i + e_{i+1}`.
fn generator_entries(i: usize, n: usize, inverse: bool) -> Vec<(usize, usize, i64, i32)> {
    let m = n - 1;
    let k = i - 1;
    let mut out: Vec<(usize, usize, i64, i32)> = (0..m).filter(|&j| j != k).map(|j| (j, j, 1, 0)).collect();
    if inverse {
        out.push((k, k, -1, -1));
        if k >= 1 {
            out.push((k - 1, k, 1, 0));
        }
        if k + 1 < m {
            out.push((k + 1, k, 1, -1));
        }
    } else {
        out.push((k, k, -1, 1));
        if k >= 1 {
            out.push((k - 1, k, 1, 1));
        }
        if k + 1 < m {
            out.push((k + 1, k, 1, 0));
        }
    }
    out
}

fn laurent_generator(i: usize, n: usize, inverse: bool) -> LMatrix {
    let m = n - 1;
    let mut g = vec![vec![MultiLaurent::zero(1); m]; m];
    for (r, c, coef, e) in generator_entries(i, n, inverse) {
        g[r][c] = MultiLaurent::monomial(1, vec![e], BigRational::from_integer(BigInt::from(coef)));
    }
    g
}

fn laurent_mul(a: &LMatrix, b: &LMatrix) -> LMatrix {
    let n = a.len();
    let k = b.first().map(|r| r.len()).unwrap_or(0);
    (0..n)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let mut s = MultiLaurent::zero(1);
                    for (l, bl) in b.iter().enumerate() {
                        if !a[i][l].is_zero() && !bl[j].is_zero() {
                            s = &s + &(&a[i][l] * &bl[j]);
                        }
                    }
                    s
                })
                .collect()
        })
        .collect()
}

fn laurent_vec_mul(v: &[MultiLaurent], m: &LMatrix) -> Vec<MultiLaurent> {
    let k = m.first().map(|r| r.len()).unwrap_or(0);
    (0..k)
        .map(|j| {
            let mut s = MultiLaurent::zero(1);
            for (l, x) in v.iter().enumerate() {
                if !x.is_zero() && !m[l][j].is_zero() {
                    s = &s + &(x * &m[l][j]);
                }
            }
            s
        })
        .collect()
}

/// The reduced Burau matrix of a braid, acting on row vectors.
pub fn reduced_burau(beta: &BraidWord) -> LMatrix {
    let m = beta.n.saturating_sub(1);
    let mut b: LMatrix =
        (0..m).map(|i| (0..m).map(|j| if i == j { MultiLaurent::one(1) } else { MultiLaurent::zero(1) }).collect()).collect();
    for &g in &beta.letters {
        b = laurent_mul(&b, &laurent_generator(g.unsigned_abs() as usize, beta.n, g < 0));
    }
    b
}

/// `⟨α_a, σ_i⟩`: `t·e_i` when `a = i`, `−e_i` when `a = i + 1`, zero otherwise.
fn base_projection(a: usize, i: usize) -> Vec<(usize, i64, i32)> {
    if a == i {
        vec![(i - 1, 1, 1)]
    } else if a == i + 1 {
        vec![(i - 1, -1, 0)]
    } else {
        Vec::new()
    }
}

/// `⟨α, σ_i⟩` for `α = α_{a₁}α_{a₂}⋯`, using `⟨α′α″, σ⟩ = ⟨α′, σ⟩ + t^{deg α′}⟨α″, σ⟩`.
fn letter_projection(alpha: &[usize], i: usize, n: usize) -> Vec<MultiLaurent> {
    let mut v = vec![MultiLaurent::zero(1); n - 1];
    for (deg, &a) in alpha.iter().enumerate() {
        for (k, c, e) in base_projection(a, i) {
            v[k] = &v[k] + &MultiLaurent::monomial(1, vec![e + deg as i32], BigRational::from_integer(BigInt::from(c)));
        }
    }
    v
}

/// `⟨α, β⟩ = (αβ)·α⁻¹ ∈ Λ^{n−1}`, by the recursion `⟨α, β′β″⟩ = ⟨α, β′⟩β″ + ⟨α, β″⟩`
/// and `⟨α, σ⁻¹⟩ = −⟨α, σ⟩σ⁻¹`. `alpha` lists the indices (1-based) of a product of `α_i`.
pub fn projection(alpha: &[usize], beta: &BraidWord) -> Result<Vec<MultiLaurent>> {
    let n = beta.n;
    if n < 2 {
        return Ok(Vec::new());
    }
    if alpha.iter().any(|&a| a == 0 || a > n) {
        return Err(Error::domain("α generators are numbered 1..=n"));
    }
    let mut p = vec![MultiLaurent::zero(1); n - 1];
    for &g in &beta.letters {
        let i = g.unsigned_abs() as usize;
        let m = laurent_generator(i, n, g < 0);
        let mut q = letter_projection(alpha, i, n);
        if g < 0 {
            q = laurent_vec_mul(&q, &m).into_iter().map(|x| -x).collect();
        }
        p = laurent_vec_mul(&p, &m).into_iter().zip(q).map(|(a, b)| &a + &b).collect();
    }
    Ok(p)
}

/// The field `ℚ(ξ)` for `ξ = ξ_r = e^{2πir/n}`, with `ξ = ζ_N^k` for `N = n/gcd(n,r)`.
struct RootContext {
    field: Arc<CycField>,
    k: i64,
}

impl RootContext {
    fn new(n: usize, r: usize) -> Result<RootContext> {
        if r == 0 || r >= n {
            return Err(Error::domain(format!("r must satisfy 0 < r < n (got r = {r}, n = {n})")));
        }
        let g = n.gcd(&r);
        Ok(RootContext { field: CycField::get((n / g) as u32), k: (r / g) as i64 })
    }

    fn xi_pow(&self, e: i64) -> Cyc {
        Cyc::zeta_pow(&self.field, self.k * e)
    }

    fn eval(&self, p: &MultiLaurent) -> Cyc {
        Cyc::eval_laurent(&self.field, p, &[self.k])
    }

    /// Coefficients of `v` as a polynomial in `ξ + ξ⁻¹`, when `v` is real.
    fn in_xi_generator(&self, v: &Cyc) -> Option<Vec<BigRational>> {
        let n = self.field.conductor() as i64;
        // undo ζ ↦ ζ^k, express in ζ + ζ⁻¹, then the same polynomial works in ξ + ξ⁻¹
        let kinv = (1..=n.max(1)).find(|&j| (j * self.k).rem_euclid(n) == 1 % n).unwrap_or(1);
        let as_poly = MultiLaurent::from_terms(
            1,
            v.coords().iter().enumerate().map(|(j, c)| (c.clone(), vec![j as i32])),
        );
        Cyc::eval_laurent(&self.field, &as_poly, &[kinv]).in_real_generator()
    }
}

/// `l = Σ_{1≤i≤j≤n−1} ξ^j e_i`, exactly.
pub fn axis_longitude(n: usize, r: usize) -> Result<Vec<Cyc>> {
    let ctx = RootContext::new(n, r)?;
    Ok(longitude_in(&ctx, n))
}

fn longitude_in(ctx: &RootContext, n: usize) -> Vec<Cyc> {
    (1..n)
        .map(|i| (i..n).fold(Cyc::zero(&ctx.field), |acc, j| acc.add(&ctx.xi_pow(j as i64))))
        .collect()
}

/// `m = ⟨α, β⟩(ξ_r)/(ξ_r^d − 1)` with `d = deg α`.
pub fn axis_meridian(beta: &BraidWord, r: usize, alpha: &[usize]) -> Result<Vec<Cyc>> {
    let ctx = RootContext::new(beta.n, r)?;
    meridian_in(&ctx, beta, alpha)
}

fn meridian_in(ctx: &RootContext, beta: &BraidWord, alpha: &[usize]) -> Result<Vec<Cyc>> {
    let denom = ctx.xi_pow(alpha.len() as i64).sub(&Cyc::one(&ctx.field));
    if denom.is_zero() {
        return Err(Error::domain("ξ^d = 1 for this α; choose another α"));
    }
    let dinv = denom.inv();
    Ok(projection(alpha, beta)?.iter().map(|p| ctx.eval(p).mul(&dinv)).collect())
}

/// Burau matrix specialized at `ξ_r`.
fn burau_at(ctx: &RootContext, beta: &BraidWord) -> Vec<Vec<Cyc>> {
    reduced_burau(beta).iter().map(|row| row.iter().map(|p| ctx.eval(p)).collect()).collect()
}

/// `β_r` with its exact value when finite.
#[derive(Clone, Debug, Serialize)]
pub struct BetaOutcome {
    pub r: usize,
    pub value: SlopeValue,
    /// Exact value as a polynomial in `c = ξ_r + ξ_r⁻¹`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    #[serde(skip)]
    pub coefficients: Option<Vec<BigRational>>,
}

/// `β_r(β) = −b/a` for the relation `a·m + b·l = 0` in `ℂ^{n−1}/Im(B(ξ_r) − 1)`, using `α = α₁`.
pub fn beta_r(beta: &BraidWord, r: usize) -> Result<BetaOutcome> {
    beta_r_with_alpha(beta, r, &[1])
}

pub fn beta_r_with_alpha(beta: &BraidWord, r: usize, alpha: &[usize]) -> Result<BetaOutcome> {
    let n = beta.n;
    let ctx = RootContext::new(n, r)?;
    let b = burau_at(&ctx, beta);
    let image: Vec<Vec<Cyc>> = b
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter().enumerate().map(|(j, x)| if i == j { x.sub(&Cyc::one(&ctx.field)) } else { x.clone() }).collect()
        })
        .collect();
    let m = meridian_in(&ctx, beta, alpha)?;
    let l = longitude_in(&ctx, n);
    let (value, exact) = match kernel_pair_exact(&m, &l, &image) {
        PairKernel::ZeroDim => (SlopeValue::Undefined("no relation between m and l".into()), None),
        PairKernel::TwoDim => (SlopeValue::Undefined("m and l both vanish".into()), None),
        PairKernel::Line(a, bb) => {
            if a.is_zero() {
                (SlopeValue::Infinity, None)
            } else {
                let v = bb.div(&a).neg();
                if !v.is_real() {
                    return Err(Error::structural(format!("β_{r} is not real: {v}")));
                }
                (SlopeValue::Finite(v.to_complex()), Some(v))
            }
        }
    };
    let coefficients = exact.as_ref().and_then(|v| ctx.in_xi_generator(v));
    Ok(BetaOutcome {
        r,
        value,
        exact: coefficients.as_ref().map(|c| format_real_generator(c, "c")),
        coefficients,
    })
}

/// `β_r` for every `r = 1, …, n−1`.
pub fn beta_all(beta: &BraidWord) -> Result<Vec<BetaOutcome>> {
    (1..beta.n).map(|r| beta_r(beta, r)).collect()
}

/// Rational value of an outcome, if it is one.
pub fn as_rational(o: &BetaOutcome) -> Option<BigRational> {
    let c = o.coefficients.as_ref()?;
    if c.iter().skip(1).all(|x| x.is_zero()) {
        Some(c.first().cloned().unwrap_or_else(BigRational::zero))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn w(n: usize, l: &[i32]) -> BraidWord {
        BraidWord::new(n, l.to_vec()).unwrap()
    }

    #[test]
    fn generator_and_relation() {
        let b = reduced_burau(&w(2, &[1]));
        assert_eq!(b[0][0], MultiLaurent::parse("-t", 1).unwrap());
        assert_eq!(reduced_burau(&w(3, &[1, 2, 1])), reduced_burau(&w(3, &[2, 1, 2])));
        let id = reduced_burau(&w(4, &[2, -2, 3, 1, -1, -3]));
        for (i, row) in id.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                assert_eq!(x.is_one(), i == j);
                assert!(i == j || x.is_zero());
            }
        }
    }

    #[test]
    fn projection_base_cases() {
        let p = projection(&[1], &w(3, &[1])).unwrap();
        assert_eq!(p[0], MultiLaurent::var(1, 0));
        assert!(p[1].is_zero());
        assert!(projection(&[1], &w(3, &[2])).unwrap().iter().all(|x| x.is_zero()));
        let q = projection(&[1], &w(2, &[-1])).unwrap();
        assert!(q[0].is_one());
    }

    #[test]
    fn longitude_and_meridian_values() {
        let l = axis_longitude(2, 1).unwrap();
        assert_eq!(l[0], Cyc::from_int(l[0].field(), -1));
        let m = axis_meridian(&w(2, &[1]), 1, &[1]).unwrap();
        assert_eq!(m[0].as_rational(), Some(rational(1, 2)));
        assert!(axis_meridian(&w(3, &[]), 1, &[1]).unwrap().iter().all(|x| x.is_zero()));
    }

    #[test]
    fn torus_braids() {
        for n in 2..=4usize {
            let cox: Vec<i32> = (1..n as i32).collect();
            for p in [-2i64, 1, 3] {
                let b = w(n, &cox).pow(p as i32);
                for r in 1..n {
                    let o = beta_r(&b, r).unwrap();
                    assert_eq!(as_rational(&o), Some(rational(-p, n as i64)), "n={n} p={p} r={r}");
                }
            }
        }
    }

    #[test]
    fn infinite_example() {
        for r in 1..3 {
            assert_eq!(beta_r(&w(3, &[-2, 1]), r).unwrap().value, SlopeValue::Infinity);
        }
    }
}
