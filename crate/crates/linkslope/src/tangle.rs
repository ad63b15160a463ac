//! Slopes of four-ended tangles and the skein identities they control.
//!
//! The slope of a tangle `T` is computed from two determinants built from the Fox rows of
//! the tangle exterior: adjoining the boundary relation of one strand pair or the other
//! gives the Alexander-type determinants of the two crossing closures `T ⊞ τ±`. Their
//! symmetrically centered values at `√ω`, times the normalization
//! `∇₀(√ω₊)/∇₀(√ω₋)` with `∇₀(t) = 1/(t − t⁻¹)`, give the slope.

use std::sync::OnceLock;

use num_complex::Complex64;
use serde::Serialize;

use crate::alexander::{conway_potential, ConwayPotential};
use crate::charspec::{exact_conductor, Character, Coord, MAX_CONDUCTOR};
use crate::cyclotomic::{Cyc, CycField};
use crate::diagram::{Cap, Pairing, PdCode, TangleDiagram};
use crate::error::{Error, Result};
use crate::laurent::MultiLaurent;
use crate::linalg::{det_bareiss, LMatrix};
use crate::presentation::{GroupPresentation, Word};
use crate::slope::SlopeValue;
use crate::splice::{sgn_triple, ExtReal};

/// Variable carrying each strand: `ω₊` on the strand from `A₁`, `ω₋` on the strand from `A₂`
/// (the same variable when the pairing is crossed), then one per closed component.
pub fn strand_variables(t: &TangleDiagram) -> (Vec<usize>, usize) {
    let n = t.num_strands().max(2);
    let vars = (0..t.num_strands())
        .map(|s| if s == 1 && t.pairing() == Pairing::Crossed { 0 } else { s })
        .collect();
    (vars, n)
}

/// The two closure determinants of a tangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleDeterminants {
    /// Determinant of the `T ⊞ τ₊` closure.
    pub plus: MultiLaurent,
    /// Determinant of the `T ⊞ τ₋` closure.
    pub minus: MultiLaurent,
    pub nvars: usize,
}

/// Fox rows of the tangle exterior together with the two boundary rows `v₋`, `v₊`.
fn tangle_rows(t: &TangleDiagram) -> Result<(LMatrix, Vec<MultiLaurent>, Vec<MultiLaurent>, usize)> {
    let (arcs, narcs) = t.arcs();
    let (vars, nvars) = strand_variables(t);
    let mut ab = vec![vec![0i32; nvars]; narcs];
    for (&e, &g) in &arcs {
        ab[g][vars[t.strand_of(e)]] = 1;
    }
    let relators = t
        .crossings
        .iter()
        .enumerate()
        .map(|(ci, x)| {
            let s = t.crossing_sign(ci);
            let (a, b, c) = (arcs[&x[0]], arcs[&x[2]], arcs[&x[1]]);
            Word::new(vec![(c, -s), (a, 1), (c, s), (b, -1)])
        })
        .collect();
    let p = GroupPresentation {
        num_generators: narcs,
        relators,
        abelianization: ab,
        ncolors: nvars,
        tagged: Default::default(),
    };
    p.validate()?;
    let rows = p.alexander_matrix()?;
    let boundary = |i: usize, j: usize| {
        let mut v = vec![MultiLaurent::zero(nvars); narcs];
        v[arcs[&t.ends[i]]] = &v[arcs[&t.ends[i]]] + &MultiLaurent::one(nvars);
        v[arcs[&t.ends[j]]] = &v[arcs[&t.ends[j]]] - &MultiLaurent::one(nvars);
        v
    };
    Ok((rows, boundary(1, 3), boundary(0, 2), nvars))
}

fn drop_column(m: &LMatrix, j: usize) -> LMatrix {
    m.iter().map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect()).collect()
}

pub fn tangle_determinants(t: &TangleDiagram) -> Result<TangleDeterminants> {
    let (rows, vminus, vplus, nvars) = tangle_rows(t)?;
    let ncols = vminus.len();
    if rows.len() + 2 != ncols {
        return Err(Error::structural(format!(
            "tangle exterior has {} relations for {ncols} generators; expected two fewer",
            rows.len()
        )));
    }
    let with = |v: &[MultiLaurent]| {
        let mut m = vec![v.to_vec()];
        m.extend(rows.iter().cloned());
        m
    };
    let (mp, mm) = (with(&vminus), with(&vplus));
    // any column works as long as its generator variable is not specialized to 1; take the first
    // column where one of the determinants is nonzero
    for j in 0..ncols {
        let plus = det_bareiss(&drop_column(&mp, j), nvars);
        let minus = det_bareiss(&drop_column(&mm, j), nvars);
        if !plus.is_zero() || !minus.is_zero() {
            return Ok(TangleDeterminants { plus, minus, nvars });
        }
    }
    Ok(TangleDeterminants { plus: MultiLaurent::zero(nvars), minus: MultiLaurent::zero(nvars), nvars })
}

/// `t ↦ t²` followed by the unique monomial shift making the exponent range symmetric.
fn centered(d: &MultiLaurent) -> MultiLaurent {
    if d.is_zero() {
        return d.clone();
    }
    let (lo, hi) = (d.min_exponents(), d.max_exponents());
    let shift: Vec<i32> = lo.iter().zip(&hi).map(|(a, b)| -(a + b)).collect();
    d.scale_exponents(2).shift(&shift)
}

/// Value of a slope computation on a tangle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TangleSlope {
    pub slope: SlopeValue,
    /// Both closure potentials vanish at `√ω`.
    pub inconclusive: bool,
    pub exact: bool,
    pub boundary_plus: String,
    pub boundary_minus: String,
}

fn check_character(t: &TangleDiagram, w: &Character) -> Result<()> {
    let (_, nvars) = strand_variables(t);
    if w.len() != nvars {
        return Err(Error::domain(format!(
            "tangle needs {nvars} character coordinates (ω₊, ω₋, then closed components), got {}",
            w.len()
        )));
    }
    if !w.is_nonvanishing() {
        return Err(Error::domain("tangle characters must avoid 1 in every coordinate"));
    }
    if t.pairing() == Pairing::Crossed {
        let (a, b) = (w.coords[0], w.coords[1]);
        if a != b && (a.to_complex() - b.to_complex()).norm() > 1e-12 {
            return Err(Error::domain("the strands join A₁ to A₄, so ω₊ and ω₋ must agree"));
        }
    }
    Ok(())
}

/// The uncalibrated ratio `(ξ₋ − ξ₋⁻¹)/(ξ₊ − ξ₊⁻¹) · Cen(D₋)(ξ)/Cen(D₊)(ξ)` with `ξ = √ω`.
fn raw_ratio(d: &TangleDeterminants, w: &Character, max_conductor: u32) -> Result<(SlopeValue, bool, bool)> {
    let (cp, cm) = (centered(&d.plus), centered(&d.minus));
    let xi = w.sqrt();
    if let Some(n) = exact_conductor(&xi.coords, max_conductor) {
        let f = CycField::get(n);
        let exps: Vec<i64> = xi
            .coords
            .iter()
            .map(|c| match *c {
                Coord::ExactRoot { n: a, d: b } => a as i64 * (n / b) as i64,
                Coord::Numeric(_) => unreachable!(),
            })
            .collect();
        let den = Cyc::eval_laurent(&f, &cp, &exps);
        let num = Cyc::eval_laurent(&f, &cm, &exps);
        let bump = |k: i64| Cyc::zeta_pow(&f, k).sub(&Cyc::zeta_pow(&f, -k));
        let norm = bump(exps[1]).div(&bump(exps[0]));
        return Ok(match (num.is_zero(), den.is_zero()) {
            (true, true) => (SlopeValue::Undefined("both closure potentials vanish".into()), true, true),
            (_, true) => (SlopeValue::Infinity, false, true),
            _ => (SlopeValue::Finite(norm.mul(&num).div(&den).to_complex()), false, true),
        });
    }
    let z: Vec<Complex64> = xi.coords.iter().map(|c| c.to_complex()).collect();
    let scale = |p: &MultiLaurent| p.terms().values().map(|c| num_traits::ToPrimitive::to_f64(c).unwrap_or(0.0).abs()).sum::<f64>();
    let den = cp.eval_complex(&z)?;
    let num = cm.eval_complex(&z)?;
    let dz = den.norm() <= 1e-10 * scale(&cp).max(1.0);
    let nz = num.norm() <= 1e-10 * scale(&cm).max(1.0);
    let bump = |x: Complex64| x - x.inv();
    let norm = bump(z[1]) / bump(z[0]);
    Ok(match (nz, dz) {
        (true, true) => (SlopeValue::Undefined("both closure potentials vanish".into()), true, false),
        (_, true) => (SlopeValue::Infinity, false, false),
        _ => (SlopeValue::Finite(norm * num / den), false, false),
    })
}

/// Overall sign of the ratio, fixed once by requiring slope `1` for `τ₀` on the diagonal.
pub fn calibration_sign() -> Result<i32> {
    static SIGN: OnceLock<std::result::Result<i32, String>> = OnceLock::new();
    SIGN.get_or_init(|| {
        let d = tangle_determinants(&TangleDiagram::tau_zero()).map_err(|e| e.to_string())?;
        let w = Character::parse("root:1/5, root:1/5").map_err(|e| e.to_string())?;
        match raw_ratio(&d, &w, MAX_CONDUCTOR).map_err(|e| e.to_string())?.0 {
            SlopeValue::Finite(z) if (z - 1.0).norm() < 1e-9 => Ok(1),
            SlopeValue::Finite(z) if (z + 1.0).norm() < 1e-9 => Ok(-1),
            other => Err(format!("the τ₀ calibration closure is degenerate: {other}")),
        }
    })
    .clone()
    .map_err(Error::Calibration)
}

/// `κ_T(ω)` for a character on the tangle's strands (`ω₊`, `ω₋`, then closed components).
pub fn tangle_slope(t: &TangleDiagram, w: &Character) -> Result<TangleSlope> {
    check_character(t, w)?;
    let d = tangle_determinants(t)?;
    tangle_slope_from(&d, w)
}

/// As [`tangle_slope`], reusing precomputed determinants.
pub fn tangle_slope_from(d: &TangleDeterminants, w: &Character) -> Result<TangleSlope> {
    let s = calibration_sign()? as f64;
    let (v, inconclusive, exact) = raw_ratio(d, w, MAX_CONDUCTOR)?;
    let slope = match v {
        SlopeValue::Finite(z) => SlopeValue::Finite(z * s),
        other => other,
    };
    Ok(TangleSlope {
        slope,
        inconclusive,
        exact,
        boundary_plus: w.coords[0].to_string(),
        boundary_minus: w.coords[1].to_string(),
    })
}

/// Result of checking the signature identity for three tangles with common boundary values.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkeinTripleReport {
    pub slopes: Vec<ExtReal>,
    /// `sgn(κ⁰, κ¹, κ²)`, the predicted sum of the three pairwise signatures.
    pub predicted: i32,
    pub supplied: Option<i64>,
    pub matches: Option<bool>,
}

pub fn skein_triple_check(
    tangles: [&TangleDiagram; 3],
    chars: [&Character; 3],
    signatures: Option<[i64; 3]>,
) -> Result<SkeinTripleReport> {
    let same = |a: &Coord, b: &Coord| a == b || (a.to_complex() - b.to_complex()).norm() <= 1e-12;
    for w in &chars[1..] {
        if w.len() < 2 || chars[0].len() < 2 {
            return Err(Error::domain("each tangle character needs ω₊ and ω₋"));
        }
        if !same(&w.coords[0], &chars[0].coords[0]) || !same(&w.coords[1], &chars[0].coords[1]) {
            return Err(Error::domain("the three characters must agree on the boundary"));
        }
    }
    let mut slopes = Vec::with_capacity(3);
    for (t, w) in tangles.iter().zip(chars) {
        slopes.push(ExtReal::from_slope(&tangle_slope(t, w)?.slope)?);
    }
    let predicted = sgn_triple(&slopes[0], &slopes[1], &slopes[2]);
    let supplied = signatures.map(|s| s.iter().sum());
    Ok(SkeinTripleReport { slopes, predicted, supplied, matches: supplied.map(|s| s == predicted as i64) })
}

/// Why a Conway-ratio sign is not available.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioStatus {
    Defined,
    /// `∇_{L₊}(√ω) = ∇_{L₋}(√ω) = 0`.
    Inconclusive,
    /// The crossing joins strands of different colors, where the one-variable skein relation
    /// that fixes the relative signs does not apply.
    MixedColors,
}

/// Comparison of the two sides of `σ_{L₊} − σ_{L₋} = sg κ_L = sg(∇_{L₊}/∇_{L₋})` at one crossing.
/// Here `L₊` is the numerator closure of the slope formula, `T ⊞ τ₋` in the cap naming of
/// [`TangleDiagram::close`], and `L₋` the denominator closure `T ⊞ τ₊`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkeinJump {
    pub crossing: usize,
    pub crossing_sign: i32,
    pub kappa: SlopeValue,
    pub sg_kappa: Option<i32>,
    pub ratio_status: RatioStatus,
    /// `∇_{L₊}(√ω)/∇_{L₋}(√ω)` with the signs fixed by the skein identity.
    pub ratio: Option<SlopeValue>,
    pub sg_ratio: Option<i32>,
    /// The slope equals the signed ratio, and the `τ₀` variants agree.
    pub consistent: bool,
    /// `∇₊ − ∇₋ = (t − t⁻¹)∇₀` holds as an identity for some choice of signs.
    pub skein_identity: Option<bool>,
    /// `sg(κ⁻¹ − 1) = sg(i∇₊/∇₀)` and `sg(κ − 1) = −sg(i∇₋/∇₀)`, when both sides are defined.
    pub zero_variants: Option<[bool; 2]>,
}

fn sg_real(z: Complex64) -> Result<i32> {
    if z.im.abs() > 1e-7 * z.norm().max(1.0) {
        return Err(Error::domain(format!("expected a real value, got {z}")));
    }
    Ok(if z.re.abs() <= 1e-10 * z.norm().max(1.0) { 0 } else { z.re.signum() as i32 })
}

/// Signs `(ε₊, ε₋, ε₀)` with `ε₊N₊ − ε₋N₋ = (t_c − t_c⁻¹) ε₀N₀`.
fn skein_signs(p: &ConwayPotential, m: &ConwayPotential, z: &ConwayPotential, var: usize) -> Option<[i32; 3]> {
    let n = p.nvars();
    let bump = &MultiLaurent::var(n, var) - &MultiLaurent::var_pow(n, var, -1);
    let rhs = &bump * &z.numer;
    for (em, ez) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
        let lhs = &p.numer - &m.numer.scale(&num_rational::BigRational::from_integer(em.into()));
        let r = rhs.scale(&num_rational::BigRational::from_integer(ez.into()));
        if lhs == r {
            return Some([1, em, ez]);
        }
    }
    None
}

/// Checks the signature-jump identity at crossing `ci` of a colored link diagram and a character
/// given per color.
pub fn skein_signature_jump(
    pd: &PdCode,
    colors: &[usize],
    ncolors: usize,
    ci: usize,
    w: &Character,
) -> Result<SkeinJump> {
    if colors.len() != pd.num_components() || w.len() != ncolors {
        return Err(Error::domain("one color per component and one coordinate per color are required"));
    }
    if !w.is_unitary() || !w.is_nonvanishing() {
        return Err(Error::domain("the character must be unitary and avoid 1"));
    }
    let (t, sign) = TangleDiagram::from_link_crossing(pd, ci)?;
    let strand_color = |s: usize| -> Result<usize> {
        let e = t
            .crossings
            .iter()
            .flatten()
            .chain(t.ends.iter())
            .copied()
            .find(|&e| t.strand_of(e) == s)
            .ok_or_else(|| Error::structural(format!("strand {s} has no edges")))?;
        let k = pd.component_of_edge(e).ok_or_else(|| Error::structural(format!("edge {e} not in the link")))?;
        Ok(colors[k])
    };
    let scolors: Vec<usize> = (0..t.num_strands()).map(&strand_color).collect::<Result<_>>()?;
    let (vars, nvars) = strand_variables(&t);
    let mut coords = vec![Coord::one(); nvars];
    for (s, &c) in scolors.iter().enumerate() {
        coords[vars[s]] = w.coords[c];
    }
    if t.pairing() == Pairing::Crossed {
        coords[1] = coords[0];
    }
    let kappa = tangle_slope(&t, &Character::new(coords))?.slope;
    let sg_kappa = match &kappa {
        SlopeValue::Infinity => Some(0),
        SlopeValue::Finite(z) => Some(sg_real(*z)?),
        SlopeValue::Undefined(_) => None,
    };

    let x = pd.crossings()[ci];
    let color_of = |e: u32| pd.component_of_edge(e).map(|k| colors[k]);
    let (ca, cb) = (color_of(x[0]), color_of(x[1]));
    let mut report = SkeinJump {
        crossing: ci,
        crossing_sign: sign,
        kappa: kappa.clone(),
        sg_kappa,
        ratio_status: RatioStatus::MixedColors,
        ratio: None,
        sg_ratio: None,
        consistent: true,
        skein_identity: None,
        zero_variants: None,
    };
    if ca != cb {
        return Ok(report);
    }
    let potential = |cap: Cap| -> Result<ConwayPotential> {
        let (l, strand_of_comp) = t.close(cap)?;
        let cols: Vec<usize> = strand_of_comp.iter().map(|&s| scolors[s]).collect();
        conway_potential(&l, &cols, ncolors)
    };
    // the slope is ∇(T ⊞ τ₋)/∇(T ⊞ τ₊) for the caps of `close`, so the Minus closure is the numerator
    let (nn, nd, nz) = (potential(Cap::Minus)?, potential(Cap::Plus)?, potential(Cap::Zero)?);
    let Some([en, ed, ez]) = skein_signs(&nn, &nd, &nz, ca.unwrap_or(0)) else {
        report.skein_identity = Some(false);
        report.consistent = false;
        return Ok(report);
    };
    report.skein_identity = Some(true);
    let xi: Vec<Complex64> = w.sqrt().coords.iter().map(|c| c.to_complex()).collect();
    let vn = nn.numer.eval_complex(&xi)? * en as f64;
    let vd = nd.numer.eval_complex(&xi)? * ed as f64;
    let v0 = nz.numer.eval_complex(&xi)? * ez as f64;
    let tiny = |z: Complex64| z.norm() <= 1e-10;
    report.ratio = match (tiny(vn), tiny(vd)) {
        (true, true) => None,
        (false, true) => Some(SlopeValue::Infinity),
        _ => Some(SlopeValue::Finite(vn / vd)),
    };
    report.sg_ratio = match &report.ratio {
        None => None,
        Some(SlopeValue::Finite(z)) => Some(sg_real(*z)?),
        Some(_) => Some(0),
    };
    report.ratio_status = if report.ratio.is_some() { RatioStatus::Defined } else { RatioStatus::Inconclusive };
    report.consistent = match (&kappa, &report.ratio) {
        (SlopeValue::Undefined(_), _) | (_, None) => true,
        (k, Some(r)) => k.approx_eq(r, 1e-8),
    };
    if let (SlopeValue::Finite(k), false) = (&kappa, tiny(v0)) {
        let i = Complex64::i();
        let mut checks = [true, true];
        if k.norm() > 1e-12 && !tiny(vn) {
            checks[0] = sg_real(k.inv() - 1.0)? == sg_real(i * vn / v0)?;
        }
        if !tiny(vd) {
            checks[1] = sg_real(*k - 1.0)? == -sg_real(i * vd / v0)?;
        }
        report.zero_variants = Some(checks);
        report.consistent &= checks[0] && checks[1];
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ch(s: &str) -> Character {
        Character::parse(s).unwrap()
    }

    #[test]
    fn calibration_is_determined() {
        assert!(calibration_sign().is_ok());
    }

    #[test]
    fn basic_tangles() {
        for w in ["root:1/5, root:2/7", "root:3/8, root:1/3", "c:0.6,0.8, c:-0.28,0.96"] {
            let w = ch(w);
            assert_eq!(tangle_slope(&TangleDiagram::tau_minus(), &w).unwrap().slope, SlopeValue::Infinity);
            let p = tangle_slope(&TangleDiagram::tau_plus(), &w).unwrap().slope;
            assert!(p.approx_eq(&SlopeValue::Finite(Complex64::new(0.0, 0.0)), 1e-12), "{p}");
        }
        for w in ["root:1/5, root:1/5", "c:0.6,0.8, c:0.6,0.8"] {
            let z = tangle_slope(&TangleDiagram::tau_zero(), &ch(w)).unwrap().slope;
            assert!(z.approx_eq(&SlopeValue::Finite(Complex64::new(1.0, 0.0)), 1e-12));
        }
        assert!(tangle_slope(&TangleDiagram::tau_zero(), &ch("root:1/5, root:2/5")).is_err());
    }

    #[test]
    fn triple_of_basic_tangles() {
        let w = ch("root:1/3, root:1/3");
        let r = skein_triple_check(
            [&TangleDiagram::tau_plus(), &TangleDiagram::tau_minus(), &TangleDiagram::tau_zero()],
            [&w, &w, &w],
            None,
        )
        .unwrap();
        assert_eq!(r.predicted, -1);
        let same = TangleDiagram::tau_plus();
        let r = skein_triple_check([&same, &same, &same], [&w, &w, &w], Some([0, 0, 0])).unwrap();
        assert_eq!((r.predicted, r.matches), (0, Some(true)));
    }
}
