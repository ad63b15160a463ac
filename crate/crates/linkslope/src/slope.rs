//! The slope `(K/L)(ω)` of a colored link: the line `a·m + b·l` in the kernel of the
//! peripheral map into twisted homology, reported as `−a/b`.

use std::collections::BTreeSet;
use std::fmt;

use num_complex::Complex64;
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::charspec::{
    exact_conductor, kernel_of_pair, symbolic_kernel_of_pair, Character, Coord, RationalFunction, Value,
    MAX_CONDUCTOR,
};
use crate::cyclotomic::{format_real_generator, Cyc};
use crate::diagram::PdCode;
use crate::error::{Error, Result};
use crate::laurent::MultiLaurent;
use crate::linalg::{unit_pivot_reduce, LMatrix, PairKernel, RankPolicy};
use crate::presentation::GroupPresentation;

/// `ℂ ∪ {∞}` plus an undefined marker for kernels that are not a line.
#[derive(Clone, Debug, PartialEq)]
pub enum SlopeValue {
    Finite(Complex64),
    Infinity,
    Undefined(String),
}

impl SlopeValue {
    pub fn is_finite(&self) -> bool {
        matches!(self, SlopeValue::Finite(_))
    }

    pub fn finite(&self) -> Option<Complex64> {
        match self {
            SlopeValue::Finite(z) => Some(*z),
            _ => None,
        }
    }

    /// Equality up to a relative tolerance on finite values.
    pub fn approx_eq(&self, other: &SlopeValue, tol: f64) -> bool {
        match (self, other) {
            (SlopeValue::Finite(a), SlopeValue::Finite(b)) => (a - b).norm() <= tol * a.norm().max(b.norm()).max(1.0),
            (SlopeValue::Infinity, SlopeValue::Infinity) => true,
            (SlopeValue::Undefined(_), SlopeValue::Undefined(_)) => true,
            _ => false,
        }
    }

    /// `1/κ` with `1/0 = ∞` and `1/∞ = 0`.
    pub fn recip(&self) -> SlopeValue {
        match self {
            SlopeValue::Finite(z) if z.norm() == 0.0 => SlopeValue::Infinity,
            SlopeValue::Finite(z) => SlopeValue::Finite(z.inv()),
            SlopeValue::Infinity => SlopeValue::Finite(Complex64::new(0.0, 0.0)),
            u => u.clone(),
        }
    }
}

impl fmt::Display for SlopeValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlopeValue::Finite(z) if z.im.abs() <= 1e-12 * z.norm().max(1.0) => write!(f, "{}", z.re + 0.0),
            SlopeValue::Finite(z) => write!(f, "{}{:+}i", z.re, z.im),
            SlopeValue::Infinity => f.write_str("infinity"),
            SlopeValue::Undefined(r) => write!(f, "undefined ({r})"),
        }
    }
}

impl Serialize for SlopeValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SlopeValue::Infinity => s.serialize_str("infinity"),
            SlopeValue::Finite(z) => {
                let mut m = s.serialize_map(Some(1))?;
                // adding 0.0 turns -0.0 into 0.0
                m.serialize_entry("finite", &[z.re + 0.0, z.im + 0.0])?;
                m.end()
            }
            SlopeValue::Undefined(r) => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("undefined", r)?;
                m.end()
            }
        }
    }
}

/// Kernel-to-slope conversion `(a, b) ↦ −a/b`.
fn slope_of_kernel(k: PairKernel<Value>) -> (SlopeValue, Option<Cyc>) {
    match k {
        PairKernel::ZeroDim => (SlopeValue::Undefined("kernel is zero".into()), None),
        PairKernel::TwoDim => (SlopeValue::Undefined("kernel is two-dimensional".into()), None),
        PairKernel::Line(a, b) => {
            if b.is_zero() {
                return (SlopeValue::Infinity, None);
            }
            match (&a, &b) {
                (Value::Exact(x), Value::Exact(y)) => {
                    let v = x.div(y).neg();
                    (SlopeValue::Finite(v.to_complex()), Some(v))
                }
                _ => (SlopeValue::Finite(-a.to_complex() / b.to_complex()), None),
            }
        }
    }
}

/// Options shared by slope computations.
#[derive(Clone, Copy, Debug)]
pub struct SlopeOptions {
    pub policy: RankPolicy,
    /// Largest cyclotomic conductor handled exactly.
    pub max_conductor: u32,
    /// Recompute at `ω⁻¹` and require agreement.
    pub dual_check: bool,
}

impl Default for SlopeOptions {
    fn default() -> Self {
        SlopeOptions { policy: RankPolicy::default(), max_conductor: MAX_CONDUCTOR, dual_check: true }
    }
}

/// A presentation with tagged `meridian` and `longitude` of the distinguished component,
/// already specialized at `t = 1` and reduced by unit pivots.
#[derive(Clone, Debug)]
pub struct SlopeProblem {
    pub presentation: GroupPresentation,
    /// `λᵢ = lk(K, Lᵢ)` summed over the components of color `i`, for `i = 1..=μ`.
    pub linking_vector: Vec<i64>,
    image: LMatrix,
    dm: Vec<MultiLaurent>,
    dl: Vec<MultiLaurent>,
}

impl SlopeProblem {
    pub fn new(presentation: GroupPresentation, linking_vector: Vec<i64>) -> Result<SlopeProblem> {
        presentation.validate()?;
        let nv = presentation.ncolors;
        if nv == 0 || linking_vector.len() != nv - 1 {
            return Err(Error::structural("linking vector must have one entry per color of L"));
        }
        let m = presentation.tag("meridian").ok_or_else(|| Error::structural("presentation lacks a meridian"))?;
        let l = presentation.tag("longitude").ok_or_else(|| Error::structural("presentation lacks a longitude"))?;
        let phi = &presentation.abelianization;
        let am = m.abelianize(phi, nv);
        if am[0] != 1 || am[1..].iter().any(|&x| x != 0) {
            return Err(Error::structural("meridian must map to the t generator"));
        }
        let al = l.abelianize(phi, nv);
        if al[0] != 0 {
            return Err(Error::structural("longitude must have zero t-exponent (Seifert framing)"));
        }
        if al[1..].iter().zip(&linking_vector).any(|(&a, &b)| a as i64 != b) {
            return Err(Error::structural("longitude abelianization disagrees with the linking vector"));
        }
        let t_one = |v: Vec<MultiLaurent>| v.into_iter().map(|p| p.set_var_one(0)).collect::<Vec<_>>();
        let a: LMatrix = presentation.alexander_matrix()?.into_iter().map(t_one).collect();
        let dm = t_one(presentation.differential(m));
        let dl = t_one(presentation.differential(l));
        let ncols = presentation.num_generators;
        let red = unit_pivot_reduce(a, vec![dm, dl], ncols);
        let mut extra = red.extra.into_iter();
        let dm = extra.next().unwrap();
        let dl = extra.next().unwrap();
        Ok(SlopeProblem { presentation, linking_vector, image: red.rows, dm, dl })
    }

    /// Number of colors of `L`.
    pub fn mu(&self) -> usize {
        self.linking_vector.len()
    }

    pub fn nvars(&self) -> usize {
        self.mu() + 1
    }

    /// The reduced image matrix and the reduced `dm`, `dl` at `t = 1`.
    pub fn reduced(&self) -> (&LMatrix, &[MultiLaurent], &[MultiLaurent]) {
        (&self.image, &self.dm, &self.dl)
    }
}

/// Result of a slope evaluation with its provenance flags.
#[derive(Clone, Debug, Serialize)]
pub struct SlopeOutcome {
    pub slope: SlopeValue,
    pub admissible: bool,
    pub linking_vector: Vec<i64>,
    /// `"exact"` (cyclotomic arithmetic) or `"numeric"`.
    pub method: &'static str,
    /// Exact value as a rational or a polynomial in `c = ζ + ζ⁻¹`, when available and real.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<String>,
    /// Conductor `N` of the cyclotomic field used on the exact path.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conductor: Option<u32>,
    /// Components removed because the character is trivial on them.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub patched_components: Vec<usize>,
    /// Every component of `L` was patched away.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub patched_to_empty: bool,
    #[serde(skip)]
    pub exact_value: Option<Cyc>,
}

fn exact_text(v: &Cyc) -> Option<String> {
    if let Some(r) = v.as_rational() {
        return Some(r.to_string());
    }
    v.in_real_generator().map(|c| format_real_generator(&c, "c"))
}

fn kernel_at(p: &SlopeProblem, point: &[Coord], opts: &SlopeOptions) -> Result<PairKernel<Value>> {
    kernel_of_pair(&p.image, &p.dm, &p.dl, point, opts.policy, opts.max_conductor)
}

/// `(K/L)(ω)` at a nonvanishing admissible character.
pub fn link_slope(p: &SlopeProblem, omega: &Character, opts: &SlopeOptions) -> Result<SlopeOutcome> {
    if omega.len() != p.mu() {
        return Err(Error::domain(format!("character has {} coordinates, expected {}", omega.len(), p.mu())));
    }
    if !omega.is_admissible(&p.linking_vector)? {
        return Err(Error::domain(format!(
            "character {} is not admissible: ω^λ ≠ 1 for λ = {:?}",
            omega.to_spec(),
            p.linking_vector
        )));
    }
    if !omega.is_nonvanishing() {
        return Err(Error::domain("character is trivial on some color; use the patched slope"));
    }
    let point = omega.point_with_t_one();
    let conductor = exact_conductor(&point, opts.max_conductor);
    let (slope, exact_value) = slope_of_kernel(kernel_at(p, &point, opts)?);
    if opts.dual_check {
        let (dual, dual_exact) = slope_of_kernel(kernel_at(p, &omega.inverse().point_with_t_one(), opts)?);
        let agree = match (&exact_value, &dual_exact) {
            (Some(a), Some(b)) => a == b,
            _ => slope.approx_eq(&dual, 1e-7),
        };
        if !agree {
            return Err(Error::structural(format!(
                "slope at ω ({slope}) and at ω⁻¹ ({dual}) disagree; the rank decision is unreliable here"
            )));
        }
    }
    Ok(SlopeOutcome {
        slope,
        admissible: true,
        linking_vector: p.linking_vector.clone(),
        method: if conductor.is_some() { "exact" } else { "numeric" },
        exact: exact_value.as_ref().and_then(exact_text),
        conductor,
        patched_components: Vec::new(),
        patched_to_empty: false,
        exact_value,
    })
}

/// A one-parameter (or multi-parameter) monomial family of characters:
/// color `i` maps to `Π_j u_j^{exponents[i][j]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parametrization {
    pub exponents: Vec<Vec<i32>>,
    pub nparams: usize,
}

impl Parametrization {
    pub fn new(exponents: Vec<Vec<i32>>) -> Result<Parametrization> {
        let nparams = exponents.first().map(|r| r.len()).unwrap_or(0);
        if exponents.iter().any(|r| r.len() != nparams) {
            return Err(Error::structural("parametrization rows must have equal length"));
        }
        Ok(Parametrization { exponents, nparams })
    }

    /// Parses `2;-1` (one parameter) or `1,0;0,1` style rows, one row per color.
    pub fn parse(text: &str) -> Result<Parametrization> {
        let rows: std::result::Result<Vec<Vec<i32>>, _> = text
            .split(';')
            .map(|r| r.split(',').map(|x| x.trim().parse::<i32>()).collect())
            .collect();
        Parametrization::new(rows.map_err(|_| Error::parse(format!("bad parametrization `{text}`")))?)
    }

    /// Substitution matrix on the slope ring: `t ↦ 1`, color `i ↦ u^{eᵢ}`; variable 0 stays unused.
    fn substitution(&self) -> Vec<Vec<i32>> {
        let mut m = vec![vec![0; self.nparams + 1]];
        for r in &self.exponents {
            let mut row = vec![0];
            row.extend_from_slice(r);
            m.push(row);
        }
        m
    }

    /// The character at parameter values `u`.
    pub fn character_at(&self, u: &[Coord]) -> Character {
        Character::new(
            self.exponents
                .iter()
                .map(|row| {
                    let mut acc = Coord::one();
                    for (c, &e) in u.iter().zip(row) {
                        acc = mul_coord(acc, c.pow(e as i64));
                    }
                    acc
                })
                .collect(),
        )
    }
}

fn mul_coord(a: Coord, b: Coord) -> Coord {
    match (a, b) {
        (Coord::ExactRoot { n: n1, d: d1 }, Coord::ExactRoot { n: n2, d: d2 }) => {
            let d = d1 as i64 * d2 as i64;
            Coord::root(n1 as i64 * d2 as i64 + n2 as i64 * d1 as i64, d as u32).unwrap()
        }
        _ => Coord::Numeric(a.to_complex() * b.to_complex()),
    }
}

/// The slope as a function on the character torus (or on a parametrized family).
#[derive(Clone, Debug, PartialEq)]
pub enum SymbolicSlope {
    Function(RationalFunction),
    /// Infinite at every generic character.
    Infinity,
    Undefined(String),
}

impl SymbolicSlope {
    pub fn to_text(&self) -> String {
        match self {
            SymbolicSlope::Function(f) => f.to_text(),
            SymbolicSlope::Infinity => "infinity".into(),
            SymbolicSlope::Undefined(r) => format!("undefined ({r})"),
        }
    }

    /// Evaluates at a point of the slope ring (variable 0 ignored). Poles give `Undefined`.
    pub fn eval(&self, point: &[Complex64]) -> SlopeValue {
        match self {
            SymbolicSlope::Function(f) => match f.eval_complex(point) {
                Ok(z) => SlopeValue::Finite(z),
                Err(_) => SlopeValue::Undefined("pole of the generic slope".into()),
            },
            SymbolicSlope::Infinity => SlopeValue::Infinity,
            SymbolicSlope::Undefined(r) => SlopeValue::Undefined(r.clone()),
        }
    }
}

/// The generic slope as a reduced rational function. Without a parametrization the
/// linking vector must vanish. Variables of the result: `t` (unused) and `t1…`.
pub fn symbolic_slope(p: &SlopeProblem, param: Option<&Parametrization>, seed: u64) -> Result<SymbolicSlope> {
    let (image, dm, dl, nvars) = match param {
        None => {
            if p.linking_vector.iter().any(|&x| x != 0) {
                return Err(Error::domain(
                    "symbolic slope needs λ = 0 or a monomial parametrization of admissible characters",
                ));
            }
            (p.image.clone(), p.dm.clone(), p.dl.clone(), p.nvars())
        }
        Some(par) => {
            if par.exponents.len() != p.mu() {
                return Err(Error::structural("parametrization needs one row per color"));
            }
            // admissibility along the family: Σ λᵢ eᵢ = 0
            for j in 0..par.nparams {
                let s: i64 = par.exponents.iter().zip(&p.linking_vector).map(|(r, &l)| r[j] as i64 * l).sum();
                if s != 0 {
                    return Err(Error::domain("parametrized characters are not admissible"));
                }
            }
            let sub = par.substitution();
            let nv = par.nparams + 1;
            let f = |v: &[MultiLaurent]| v.iter().map(|q| q.substitute_monomial(&sub, nv)).collect::<Vec<_>>();
            (p.image.iter().map(|r| f(r)).collect(), f(&p.dm), f(&p.dl), nv)
        }
    };
    Ok(match symbolic_kernel_of_pair(&image, &dm, &dl, nvars, seed)? {
        PairKernel::ZeroDim => SymbolicSlope::Undefined("generic kernel is zero".into()),
        PairKernel::TwoDim => SymbolicSlope::Undefined("generic kernel is two-dimensional".into()),
        PairKernel::Line(a, b) => {
            if b.is_zero() {
                SymbolicSlope::Infinity
            } else {
                // b = 1 here
                SymbolicSlope::Function(RationalFunction { num: -a.num, den: a.den })
            }
        }
    })
}

/// A link diagram with a distinguished component and a coloring of the others.
#[derive(Clone, Debug)]
pub struct ColoredLink {
    pub pd: PdCode,
    pub distinguished: usize,
    /// Color of each component; the distinguished one has color 0, the rest `1..=μ`.
    pub colors: Vec<usize>,
    pub mu: usize,
}

impl ColoredLink {
    /// `colors = None` gives every other component its own color, in component order.
    pub fn new(pd: PdCode, distinguished: usize, colors: Option<Vec<usize>>) -> Result<ColoredLink> {
        let n = pd.num_components();
        if distinguished >= n {
            return Err(Error::domain(format!("component {distinguished} not found (the link has {n})")));
        }
        let colors = match colors {
            Some(mut c) => {
                if c.len() != n {
                    return Err(Error::structural("one color per component is required"));
                }
                c[distinguished] = 0;
                for (k, &col) in c.iter().enumerate() {
                    if k != distinguished && col == 0 {
                        return Err(Error::structural("color 0 is reserved for the distinguished component"));
                    }
                }
                c
            }
            None => {
                let mut next = 1;
                (0..n)
                    .map(|k| {
                        if k == distinguished {
                            0
                        } else {
                            next += 1;
                            next - 1
                        }
                    })
                    .collect()
            }
        };
        let used: BTreeSet<usize> = colors.iter().copied().filter(|&c| c > 0).collect();
        let mu = used.iter().max().copied().unwrap_or(0);
        if used.len() != mu {
            return Err(Error::structural("colors of L must be exactly 1..=μ"));
        }
        Ok(ColoredLink { pd, distinguished, colors, mu })
    }

    pub fn linking_vector(&self) -> Vec<i64> {
        let lk = self.pd.linking_matrix();
        let mut v = vec![0; self.mu];
        for (k, &c) in self.colors.iter().enumerate() {
            if k != self.distinguished {
                v[c - 1] += lk[self.distinguished][k];
            }
        }
        v
    }

    pub fn problem(&self) -> Result<SlopeProblem> {
        let p = self.pd.slope_presentation(self.distinguished, &self.colors, self.mu + 1)?;
        SlopeProblem::new(p, self.linking_vector())
    }

    /// Removes every component whose color is trivial under `ω`; returns the smaller link,
    /// the restricted character and the removed components.
    pub fn patch(&self, omega: &Character) -> Result<(ColoredLink, Character, Vec<usize>)> {
        if omega.len() != self.mu {
            return Err(Error::domain(format!("character has {} coordinates, expected {}", omega.len(), self.mu)));
        }
        let dead: BTreeSet<usize> = (1..=self.mu).filter(|&c| omega.coords[c - 1].is_one()).collect();
        let remove: BTreeSet<usize> =
            (0..self.colors.len()).filter(|&k| k != self.distinguished && dead.contains(&self.colors[k])).collect();
        if remove.is_empty() {
            return Ok((self.clone(), omega.clone(), Vec::new()));
        }
        let (pd, map) = self.pd.delete_components(&remove)?;
        let renumber: Vec<usize> = {
            let mut r = vec![0; self.mu + 1];
            let mut next = 1;
            for c in 1..=self.mu {
                if !dead.contains(&c) {
                    r[c] = next;
                    next += 1;
                }
            }
            r
        };
        let mut colors = vec![0; pd.num_components()];
        for (k, m) in map.iter().enumerate() {
            if let Some(j) = m {
                colors[*j] = renumber[self.colors[k]];
            }
        }
        let distinguished = map[self.distinguished].expect("distinguished component survives");
        let coords = (1..=self.mu).filter(|c| !dead.contains(c)).map(|c| omega.coords[c - 1]).collect();
        let link = ColoredLink::new(pd, distinguished, Some(colors))?;
        Ok((link, Character::new(coords), remove.into_iter().collect()))
    }
}

/// The slope extended to characters that are trivial on some colors, by deleting those components.
/// When nothing of `L` survives, the distinguished knot is evaluated on its own and the result
/// carries `patched_to_empty`.
pub fn patched_slope(link: &ColoredLink, omega: &Character, opts: &SlopeOptions) -> Result<SlopeOutcome> {
    let (small, w, removed) = link.patch(omega)?;
    let problem = small.problem()?;
    let mut out = link_slope(&problem, &w, opts)?;
    out.patched_to_empty = small.mu == 0 && link.mu > 0;
    out.patched_components = removed;
    out.linking_vector = link.linking_vector();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn whitehead() -> ColoredLink {
        let pd = PdCode::parse("X[6,1,7,2] X[10,7,5,8] X[4,5,1,6] X[2,10,3,9] X[8,4,9,3]").unwrap();
        ColoredLink::new(pd, 0, None).unwrap()
    }

    #[test]
    fn whitehead_at_minus_one() {
        let p = whitehead().problem().unwrap();
        let out = link_slope(&p, &Character::parse("root:1/2").unwrap(), &SlopeOptions::default()).unwrap();
        assert_eq!(out.slope, SlopeValue::Finite(Complex64::new(4.0, 0.0)));
        assert_eq!(out.exact.as_deref(), Some("4"));
    }

    #[test]
    fn whitehead_symbolic() {
        let p = whitehead().problem().unwrap();
        let s = symbolic_slope(&p, None, 7).unwrap();
        let expect = MultiLaurent::parse("2 - t1 - t1^-1", 2).unwrap();
        assert_eq!(s, SymbolicSlope::Function(RationalFunction::from_poly(expect)));
    }

    #[test]
    fn hopf_slope_is_infinite_and_patching_gives_zero() {
        let pd = PdCode::parse("X[1,3,2,4] X[3,1,4,2]").unwrap();
        let link = ColoredLink::new(pd, 0, None).unwrap();
        assert_eq!(link.linking_vector(), vec![1]);
        let out = patched_slope(&link, &Character::parse("1").unwrap(), &SlopeOptions::default()).unwrap();
        assert!(out.patched_to_empty);
        assert_eq!(out.slope, SlopeValue::Finite(Complex64::new(0.0, 0.0)));
        let p = link.problem().unwrap();
        assert!(link_slope(&p, &Character::parse("root:1/2").unwrap(), &SlopeOptions::default()).is_err());
    }

    #[test]
    fn numeric_and_exact_paths_agree() {
        let p = whitehead().problem().unwrap();
        let opts = SlopeOptions { max_conductor: 1, ..SlopeOptions::default() };
        let out = link_slope(&p, &Character::parse("root:1/3").unwrap(), &opts).unwrap();
        assert_eq!(out.method, "numeric");
        assert!(out.slope.approx_eq(&SlopeValue::Finite(Complex64::new(3.0, 0.0)), 1e-9));
    }
}
