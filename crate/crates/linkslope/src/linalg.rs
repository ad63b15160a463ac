//! Linear algebra over exact fields, Laurent matrices, and a numeric SVD path.

use std::fmt::Debug;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::cyclotomic::Cyc;
use crate::error::{Error, Result};
use crate::laurent::{MultiLaurent, UnitNormalForm};

/// Exact field elements. The element itself carries whatever context (such as the
/// cyclotomic field) is needed to build constants.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_el(&self) -> bool;
    fn add_el(&self, o: &Self) -> Self;
    fn sub_el(&self, o: &Self) -> Self;
    fn mul_el(&self, o: &Self) -> Self;
    fn inv_el(&self) -> Self;
    fn neg_el(&self) -> Self {
        self.zero_like().sub_el(self)
    }
}

impl Scalar for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn add_el(&self, o: &Self) -> Self {
        self + o
    }
    fn sub_el(&self, o: &Self) -> Self {
        self - o
    }
    fn mul_el(&self, o: &Self) -> Self {
        self * o
    }
    fn inv_el(&self) -> Self {
        self.recip()
    }
    fn neg_el(&self) -> Self {
        -self
    }
}

impl Scalar for Cyc {
    fn zero_like(&self) -> Self {
        Cyc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        Cyc::one(self.field())
    }
    fn is_zero_el(&self) -> bool {
        self.is_zero()
    }
    fn add_el(&self, o: &Self) -> Self {
        self.add(o)
    }
    fn sub_el(&self, o: &Self) -> Self {
        self.sub(o)
    }
    fn mul_el(&self, o: &Self) -> Self {
        self.mul(o)
    }
    fn inv_el(&self) -> Self {
        self.inv()
    }
    fn neg_el(&self) -> Self {
        self.neg()
    }
}

/// Row echelon data: reduced basis rows and their pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon<F> {
    pub rows: Vec<Vec<F>>,
    pub pivots: Vec<usize>,
}

impl<F: Scalar> Echelon<F> {
    /// Reduced row echelon form of the row span of `rows`.
    pub fn new(rows: &[Vec<F>]) -> Echelon<F> {
        let mut basis: Vec<Vec<F>> = Vec::new();
        let mut pivots: Vec<usize> = Vec::new();
        for r in rows {
            let mut v = Self::reduce_with(&basis, &pivots, r);
            let Some(p) = v.iter().position(|x| !x.is_zero_el()) else { continue };
            let inv = v[p].inv_el();
            for x in v.iter_mut() {
                *x = x.mul_el(&inv);
            }
            // keep earlier rows fully reduced against the new pivot
            for b in basis.iter_mut() {
                if !b[p].is_zero_el() {
                    let f = b[p].clone();
                    for (bj, vj) in b.iter_mut().zip(&v) {
                        if !vj.is_zero_el() {
                            *bj = bj.sub_el(&f.mul_el(vj));
                        }
                    }
                }
            }
            basis.push(v);
            pivots.push(p);
        }
        Echelon { rows: basis, pivots }
    }

    fn reduce_with(basis: &[Vec<F>], pivots: &[usize], v: &[F]) -> Vec<F> {
        let mut v = v.to_vec();
        for (b, &p) in basis.iter().zip(pivots) {
            if !v[p].is_zero_el() {
                let f = v[p].clone();
                for (vj, bj) in v.iter_mut().zip(b) {
                    if !bj.is_zero_el() {
                        *vj = vj.sub_el(&f.mul_el(bj));
                    }
                }
            }
        }
        v
    }

    /// Residue of `v` modulo the row span.
    pub fn reduce(&self, v: &[F]) -> Vec<F> {
        Self::reduce_with(&self.rows, &self.pivots, v)
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub fn rank_exact<F: Scalar>(rows: &[Vec<F>]) -> usize {
    Echelon::new(rows).rank()
}

/// Classification of `{(a,b) : a·v₁ + b·v₂ ∈ span}`.
#[derive(Clone, Debug, PartialEq)]
pub enum PairKernel<F> {
    ZeroDim,
    Line(F, F),
    TwoDim,
}

/// Exact classification of the kernel of `(a,b) ↦ a·v₁ + b·v₂` modulo the row span of `image`.
pub fn kernel_pair_exact<F: Scalar>(v1: &[F], v2: &[F], image: &[Vec<F>]) -> PairKernel<F> {
    let ech = Echelon::new(image);
    let r1 = ech.reduce(v1);
    let r2 = ech.reduce(v2);
    let z1 = r1.iter().all(|x| x.is_zero_el());
    let z2 = r2.iter().all(|x| x.is_zero_el());
    let one = v1.first().or(v2.first()).map(|x| x.one_like());
    match (z1, z2) {
        (true, true) => PairKernel::TwoDim,
        (true, false) => {
            let o = one.unwrap();
            PairKernel::Line(o.clone(), o.zero_like())
        }
        (false, true) => {
            let o = one.unwrap();
            PairKernel::Line(o.zero_like(), o)
        }
        (false, false) => {
            // r2 = c·r1 ?
            let p = r1.iter().position(|x| !x.is_zero_el()).unwrap();
            let c = r2[p].mul_el(&r1[p].inv_el());
            let prop = r1.iter().zip(&r2).all(|(a, b)| b.sub_el(&c.mul_el(a)).is_zero_el());
            if prop {
                PairKernel::Line(c.neg_el(), c.one_like())
            } else {
                PairKernel::ZeroDim
            }
        }
    }
}

/// Inverse of a square matrix over an exact field, or `None` if singular.
pub fn invert_exact<F: Scalar>(m: &[Vec<F>]) -> Option<Vec<Vec<F>>> {
    let n = m.len();
    if n == 0 {
        return Some(Vec::new());
    }
    let zero = m[0][0].zero_like();
    let one = m[0][0].one_like();
    let mut a: Vec<Vec<F>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            for j in 0..n {
                row.push(if i == j { one.clone() } else { zero.clone() });
            }
            row
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero_el())?;
        a.swap(c, p);
        let inv = a[c][c].inv_el();
        for x in a[c].iter_mut() {
            *x = x.mul_el(&inv);
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero_el() {
                let f = a[i][c].clone();
                let pivot_row = a[c].clone();
                for (x, y) in a[i].iter_mut().zip(&pivot_row) {
                    *x = x.sub_el(&f.mul_el(y));
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul_exact<F: Scalar>(a: &[Vec<F>], b: &[Vec<F>]) -> Vec<Vec<F>> {
    let zero = a[0][0].zero_like();
    let m = b[0].len();
    a.iter()
        .map(|row| {
            (0..m)
                .map(|j| {
                    row.iter()
                        .zip(b)
                        .fold(zero.clone(), |acc, (x, brow)| acc.add_el(&x.mul_el(&brow[j])))
                })
                .collect()
        })
        .collect()
}

pub fn vec_mat_exact<F: Scalar>(v: &[F], m: &[Vec<F>]) -> Vec<F> {
    let zero = v[0].zero_like();
    (0..m[0].len())
        .map(|j| v.iter().zip(m).fold(zero.clone(), |acc, (x, row)| acc.add_el(&x.mul_el(&row[j]))))
        .collect()
}

// ---------------------------------------------------------------------------
// Laurent matrices

pub type LMatrix = Vec<Vec<MultiLaurent>>;

fn monomial_inverse(m: &MultiLaurent) -> MultiLaurent {
    let (e, c) = m.terms().iter().next().expect("monomial");
    MultiLaurent::monomial(m.nvars(), e.iter().map(|x| -x).collect(), c.recip())
}

/// Result of eliminating unit pivots from a Laurent matrix.
#[derive(Clone, Debug)]
pub struct UnitReduced {
    pub rows: LMatrix,
    /// Extra row vectors carried through the same column operations.
    pub extra: LMatrix,
    /// Number of (row, column) pairs removed.
    pub eliminated: usize,
    pub ncols: usize,
}

/// Repeatedly picks a single-term entry (a unit of the Laurent ring), clears its
/// column from all other rows and from the `extra` vectors, and deletes that row
/// and column. The cokernel, the images of the extra vectors in it, and the
/// Fitting ideals (shifted by the number of eliminations) are unchanged.
pub fn unit_pivot_reduce(rows: LMatrix, extra: LMatrix, ncols: usize) -> UnitReduced {
    let mut rows = rows;
    let mut extra = extra;
    let mut cols: Vec<usize> = (0..ncols).collect();
    let mut eliminated = 0;
    loop {
        // choose the unit pivot whose column has the fewest nonzeros, then the shortest row
        let mut best: Option<(usize, usize, usize, usize)> = None;
        for (i, r) in rows.iter().enumerate() {
            let row_nnz = r.iter().filter(|x| !x.is_zero()).count();
            for (jj, x) in r.iter().enumerate() {
                if x.is_monomial() {
                    let col_nnz = rows.iter().filter(|rr| !rr[jj].is_zero()).count();
                    let key = (col_nnz, row_nnz);
                    if best.map(|b| key < (b.2, b.3)).unwrap_or(true) {
                        best = Some((i, jj, col_nnz, row_nnz));
                    }
                }
            }
        }
        let Some((pi, pj, _, _)) = best else { break };
        let pivot_row = rows.remove(pi);
        let pinv = monomial_inverse(&pivot_row[pj]);
        let clear = |r: &mut Vec<MultiLaurent>| {
            if r[pj].is_zero() {
                return;
            }
            let f = &r[pj] * &pinv;
            for (x, y) in r.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        };
        for r in rows.iter_mut() {
            clear(r);
        }
        for r in extra.iter_mut() {
            clear(r);
        }
        for r in rows.iter_mut().chain(extra.iter_mut()) {
            r.remove(pj);
        }
        cols.remove(pj);
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
        eliminated += 1;
    }
    UnitReduced { rows, extra, eliminated, ncols: cols.len() }
}

/// Determinant by fraction-free (Bareiss) elimination with exact Laurent division.
pub fn det_bareiss(m: &LMatrix, nvars: usize) -> MultiLaurent {
    let n = m.len();
    if n == 0 {
        return MultiLaurent::one(nvars);
    }
    let mut a = m.clone();
    let mut sign = false;
    let mut prev = MultiLaurent::one(nvars);
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i][k].is_zero()) else {
                return MultiLaurent::zero(nvars);
            };
            a.swap(k, p);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num.div_exact(&prev).expect("Bareiss division is exact");
            }
            a[i][k] = MultiLaurent::zero(nvars);
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

pub fn submatrix(m: &LMatrix, rows: &[usize], cols: &[usize]) -> LMatrix {
    rows.iter().map(|&i| cols.iter().map(|&j| m[i][j].clone()).collect()).collect()
}

/// gcd in `ℤ[t^±]` of all `size × size` minors, in unit-normal form: `core` is the primitive
/// part and `content` the gcd of the minors' integer contents. Size 0 gives 1.
pub fn minors_gcd(m: &LMatrix, ncols: usize, size: usize, nvars: usize) -> UnitNormalForm {
    if size == 0 {
        return MultiLaurent::one(nvars).unit_normalize();
    }
    if size > m.len() || size > ncols {
        return MultiLaurent::zero(nvars).unit_normalize();
    }
    let row_sets = combinations(m.len(), size);
    let col_sets = combinations(ncols, size);
    let pairs: Vec<(&Vec<usize>, &Vec<usize>)> =
        row_sets.iter().flat_map(|r| col_sets.iter().map(move |c| (r, c))).collect();
    let dets: Vec<MultiLaurent> =
        crate::par::map(&pairs, |(r, c)| det_bareiss(&submatrix(m, r, c), nvars));
    let mut g = MultiLaurent::zero(nvars);
    let mut content = BigInt::zero();
    for d in dets.iter().filter(|d| !d.is_zero()) {
        content = content.gcd(d.unit_normalize().content.numer());
        if !g.is_one() {
            g = g.gcd(d).core;
        }
    }
    let mut u = g.unit_normalize();
    if !content.is_zero() {
        u.content = BigRational::from_integer(content);
    }
    u
}

// ---------------------------------------------------------------------------
// Numeric path

/// Relative tolerance and singular-value gap used by numeric rank decisions.
#[derive(Clone, Copy, Debug)]
pub struct RankPolicy {
    pub tol: f64,
    pub min_gap: f64,
}

impl Default for RankPolicy {
    fn default() -> Self {
        RankPolicy { tol: 1e-9, min_gap: 1e3 }
    }
}

pub fn to_dmatrix(rows: &[Vec<Complex64>], ncols: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

/// Numeric rank with a mandatory gap between kept and dropped singular values.
///
/// `scale` is the magnitude of the entries before cancellation; singular values below
/// `policy.tol · max(σ₀, scale)` count as zero, so a matrix that cancels to rounding noise
/// has rank 0.
pub fn numeric_rank(rows: &[Vec<Complex64>], ncols: usize, policy: RankPolicy, scale: f64) -> Result<usize> {
    if rows.is_empty() || ncols == 0 {
        return Ok(0);
    }
    let s = to_dmatrix(rows, ncols).singular_values();
    let mut sv: Vec<f64> = s.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    rank_from_singular_values(&sv, policy, scale)
}

pub fn rank_from_singular_values(sv: &[f64], policy: RankPolicy, scale: f64) -> Result<usize> {
    let s0 = sv.first().copied().unwrap_or(0.0);
    if s0 == 0.0 {
        return Ok(0);
    }
    let cutoff = policy.tol * s0.max(scale);
    let r = sv.iter().filter(|&&x| x > cutoff).count();
    let gap = if r == 0 {
        cutoff / s0
    } else if r == sv.len() {
        sv[r - 1] / cutoff
    } else if sv[r] == 0.0 {
        f64::INFINITY
    } else {
        sv[r - 1] / sv[r]
    };
    if gap < policy.min_gap {
        return Err(Error::IndeterminateRank { gap, cutoff });
    }
    Ok(r)
}

/// Orthonormal basis (as rows) of the row span, using the SVD.
fn row_space_basis(rows: &[Vec<Complex64>], ncols: usize, rank: usize) -> Vec<Vec<Complex64>> {
    if rank == 0 {
        return Vec::new();
    }
    let svd = to_dmatrix(rows, ncols).svd(false, true);
    let vt = svd.v_t.expect("requested V^H");
    let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].partial_cmp(&svd.singular_values[a]).unwrap());
    order[..rank].iter().map(|&i| (0..ncols).map(|j| vt[(i, j)]).collect()).collect()
}

fn residue(basis: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let mut r = v.to_vec();
    for b in basis {
        let c: Complex64 = v.iter().zip(b).map(|(x, y)| x * y.conj()).sum();
        for (rj, bj) in r.iter_mut().zip(b) {
            *rj -= c * bj;
        }
    }
    r
}

/// Numeric classification of `{(a,b) : a·v₁ + b·v₂ ∈ rowspan(image)}`.
/// A line is returned normalized so that its larger coordinate has modulus 1.
pub fn kernel_pair_numeric(
    v1: &[Complex64],
    v2: &[Complex64],
    image: &[Vec<Complex64>],
    policy: RankPolicy,
    scale: f64,
) -> Result<PairKernel<Complex64>> {
    let n = v1.len();
    let with = |extra: &[&[Complex64]]| {
        let mut m: Vec<Vec<Complex64>> = image.to_vec();
        for e in extra {
            m.push(e.to_vec());
        }
        m
    };
    let r0 = numeric_rank(image, n, policy, scale)?;
    let r1 = numeric_rank(&with(&[v1]), n, policy, scale)?;
    let r2 = numeric_rank(&with(&[v2]), n, policy, scale)?;
    let r12 = numeric_rank(&with(&[v1, v2]), n, policy, scale)?;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    Ok(match r12 - r0 {
        0 => PairKernel::TwoDim,
        2 => PairKernel::ZeroDim,
        _ => {
            if r1 == r0 {
                PairKernel::Line(one, zero)
            } else if r2 == r0 {
                PairKernel::Line(zero, one)
            } else {
                let basis = row_space_basis(image, n, r0);
                let a = residue(&basis, v1);
                let b = residue(&basis, v2);
                let num: Complex64 = a.iter().zip(&b).map(|(x, y)| x.conj() * y).sum();
                let den: Complex64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().into();
                let c = num / den;
                // a·v1 + b·v2 ∈ span with (a, b) = (−c, 1)
                let (x, y) = (-c, one);
                let s = x.norm().max(1.0);
                PairKernel::Line(x / s, y / s)
            }
        }
    })
}
