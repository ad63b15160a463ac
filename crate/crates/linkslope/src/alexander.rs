//! Alexander polynomials and higher orders from Fitting ideals of the Fox matrix,
//! their symmetric square-root renormalization, and the Torres-ratio slope oracle.

use std::collections::BTreeSet;

use num_complex::Complex64;
use serde::Serialize;

use crate::charspec::{exact_conductor, Character, Coord};
use crate::cyclotomic::{Cyc, CycField};
use crate::error::{Error, Result};
use crate::laurent::{MultiLaurent, UnitNormalForm};
use crate::linalg::{minors_gcd, unit_pivot_reduce};
use crate::presentation::GroupPresentation;
use crate::slope::{link_slope, ColoredLink, SlopeOptions, SlopeValue};

/// `Δ_r`: gcd of the `r`-th elementary ideal, in unit-normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderPolynomial {
    pub value: UnitNormalForm,
    pub r: usize,
    pub nvars: usize,
}

impl OrderPolynomial {
    /// `content · core`, the gcd up to the units `±t^k`.
    pub fn polynomial(&self) -> MultiLaurent {
        self.value.core.scale(&self.value.content)
    }
}

/// `Δ_{r}` = gcd of the `(p − 1 − r)`-minors of the `q × p` Fox matrix.
pub fn order_polynomial(p: &GroupPresentation, r: usize) -> Result<OrderPolynomial> {
    let nvars = p.ncolors;
    let a = p.alexander_matrix()?;
    let ncols = p.num_generators;
    let red = unit_pivot_reduce(a, Vec::new(), ncols);
    let size = (ncols as i64) - 1 - (r as i64) - (red.eliminated as i64);
    let value = if size <= 0 {
        MultiLaurent::one(nvars).unit_normalize()
    } else {
        minors_gcd(&red.rows, red.ncols, size as usize, nvars)
    };
    Ok(OrderPolynomial { value, r, nvars })
}

/// The first order `Δ_r` that is not identically zero, searching `r ≤ max_r`.
pub fn first_nonzero_order(p: &GroupPresentation, max_r: usize) -> Result<Option<OrderPolynomial>> {
    for r in 0..=max_r {
        let o = order_polynomial(p, r)?;
        if !o.value.is_zero() {
            return Ok(Some(o));
        }
    }
    Ok(None)
}

/// A Conway-type potential in square-root variables, known up to sign:
/// `numer` or, for one-colored links, `numer / (t − t⁻¹)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConwayPotential {
    pub numer: MultiLaurent,
    /// The value is `numer / (t₀ − t₀⁻¹)` (one color in total).
    pub over_t_minus_inverse: bool,
    /// Variable carrying the `t − t⁻¹` denominator.
    pub pole_var: usize,
    pub sign_resolved: bool,
}

impl ConwayPotential {
    pub fn nvars(&self) -> usize {
        self.numer.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.numer.is_zero()
    }

    pub fn negate(&self) -> ConwayPotential {
        ConwayPotential { numer: -self.numer.clone(), ..self.clone() }
    }

    pub fn to_text(&self) -> String {
        if self.over_t_minus_inverse {
            let v = if self.nvars() == 1 || self.pole_var == 0 { "t".to_string() } else { format!("t{}", self.pole_var) };
            format!("({})/({v} - {v}^-1)", self.numer.to_text())
        } else {
            self.numer.to_text()
        }
    }

    /// Evaluates at square-root coordinates (one per variable).
    pub fn eval_complex(&self, sqrt_point: &[Complex64]) -> Result<Complex64> {
        let n = self.numer.eval_complex(sqrt_point)?;
        if self.over_t_minus_inverse {
            let s = sqrt_point[self.pole_var];
            let d = s - s.inv();
            if d.norm() == 0.0 {
                return Err(Error::domain("pole of the one-colored potential at t = ±1"));
            }
            return Ok(n / d);
        }
        Ok(n)
    }

    /// Exact value, `None` on a pole.
    pub fn eval_exact(&self, sqrt_point: &[Coord], field: &std::sync::Arc<CycField>) -> Option<Cyc> {
        let exps = zeta_exps(sqrt_point, field.conductor());
        let n = Cyc::eval_laurent(field, &self.numer, &exps);
        if self.over_t_minus_inverse {
            let d = Cyc::zeta_pow(field, exps[self.pole_var]).sub(&Cyc::zeta_pow(field, -exps[self.pole_var]));
            if d.is_zero() {
                return None;
            }
            return Some(n.div(&d));
        }
        Some(n)
    }
}

fn zeta_exps(point: &[Coord], conductor: u32) -> Vec<i64> {
    point
        .iter()
        .map(|c| match *c {
            Coord::ExactRoot { n, d } => n as i64 * (conductor / d) as i64,
            Coord::Numeric(_) => unreachable!("exact path only"),
        })
        .collect()
}

/// Substitutes `tᵢ ↦ tᵢ²`, centers symmetrically, and for a single color divides by `t − t⁻¹`.
pub fn conway_normalize(delta: &OrderPolynomial) -> Result<ConwayPotential> {
    let doubled = delta.polynomial().scale_exponents(2);
    if doubled.is_zero() {
        return Ok(ConwayPotential { numer: doubled, over_t_minus_inverse: delta.nvars == 1, pole_var: 0, sign_resolved: false });
    }
    let sym = UnitNormalForm::symmetric(&doubled);
    if !sym.symmetric {
        return Err(Error::structural(format!(
            "no symmetric centering exists for {}; the input is not an Alexander polynomial",
            delta.polynomial()
        )));
    }
    let numer = sym.core.scale(&sym.content);
    Ok(ConwayPotential { numer, over_t_minus_inverse: delta.nvars == 1, pole_var: 0, sign_resolved: false })
}

/// `∇` of a colored link diagram: colors per component, `ncolors` in total.
pub fn conway_potential(pd: &crate::diagram::PdCode, colors: &[usize], ncolors: usize) -> Result<ConwayPotential> {
    let p = pd.wirtinger(colors, ncolors)?;
    conway_normalize(&order_polynomial(&p, 0)?)
}

/// Outcome of the Torres oracle.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum TorresValue {
    Value(SlopeValue),
    /// Both `∇′(1, √ω)` and `∇_L(√ω)` vanish.
    Inconclusive,
}

/// `−∂_t∇_{K∪L}(1, √ω) / (2∇_L(√ω))`, with a sign fixed once per link by comparison with the
/// kernel computation.
#[derive(Clone, Debug)]
pub struct TorresOracle {
    /// `∂_t ∇_{K∪L}` at `t = 1`, in the ring of `K ∪ L` (variable 0 unused).
    derivative: MultiLaurent,
    /// `∇_L` embedded in the same ring (variables `1..=μ`).
    sublink: ConwayPotential,
    pub knl: ConwayPotential,
    pub sign: Option<i32>,
}

fn embed_sublink(c: &ConwayPotential, mu: usize) -> ConwayPotential {
    let target: Vec<usize> = (1..=mu).collect();
    ConwayPotential { numer: c.numer.embed(mu + 1, &target), pole_var: 1, ..c.clone() }
}

impl TorresOracle {
    pub fn new(link: &ColoredLink) -> Result<TorresOracle> {
        if link.mu == 0 {
            return Err(Error::domain("the Torres ratio needs a nonempty L"));
        }
        let knl = conway_potential(&link.pd, &link.colors, link.mu + 1)?;
        let remove: BTreeSet<usize> = [link.distinguished].into_iter().collect();
        let (lpd, map) = link.pd.delete_components(&remove)?;
        let mut lcolors = vec![0; lpd.num_components()];
        for (k, m) in map.iter().enumerate() {
            if let Some(j) = m {
                lcolors[*j] = link.colors[k] - 1;
            }
        }
        let sub = conway_potential(&lpd, &lcolors, link.mu)?;
        let derivative = knl.numer.partial_derivative(0).set_var_one(0);
        Ok(TorresOracle { derivative, sublink: embed_sublink(&sub, link.mu), knl, sign: None })
    }

    /// `∇_L` in its own variables shifted to `1..=μ`.
    pub fn sublink_potential(&self) -> &ConwayPotential {
        &self.sublink
    }

    /// The uncalibrated ratio `−∇′/(2∇_L)` at `ω`, exact when possible.
    pub fn raw(&self, omega: &Character, max_conductor: u32) -> Result<(TorresValue, Option<Cyc>)> {
        if !omega.is_nonvanishing() {
            return Err(Error::domain(format!("character {} has a coordinate equal to 1", omega.to_spec())));
        }
        let root = omega.sqrt();
        let mut pt = vec![Coord::one()];
        pt.extend(root.coords.iter().copied());
        if let Some(n) = exact_conductor(&pt, max_conductor) {
            let f = CycField::get(n);
            let exps = zeta_exps(&pt, n);
            let num = Cyc::eval_laurent(&f, &self.derivative, &exps);
            let Some(den) = self.sublink.eval_exact(&pt, &f) else {
                return Ok((TorresValue::Value(SlopeValue::Infinity), None));
            };
            return Ok(match (num.is_zero(), den.is_zero()) {
                (true, true) => (TorresValue::Inconclusive, None),
                (false, true) => (TorresValue::Value(SlopeValue::Infinity), None),
                _ => {
                    let v = num.div(&den.scale(&num_rational::BigRational::from_integer(2.into()))).neg();
                    (TorresValue::Value(SlopeValue::Finite(v.to_complex())), Some(v))
                }
            });
        }
        let z: Vec<Complex64> = pt.iter().map(|c| c.to_complex()).collect();
        let num = self.derivative.eval_complex(&z)?;
        let den = self.sublink.eval_complex(&z)?;
        let scale = num.norm().max(den.norm()).max(1.0);
        let tiny = 1e-10 * scale;
        Ok(match (num.norm() < tiny, den.norm() < tiny) {
            (true, true) => (TorresValue::Inconclusive, None),
            (false, true) => (TorresValue::Value(SlopeValue::Infinity), None),
            _ => (TorresValue::Value(SlopeValue::Finite(-num / (2.0 * den))), None),
        })
    }

    /// Fixes the overall sign by comparing with the kernel computation at the first candidate
    /// character where both are finite and nonzero. Returns the character used.
    pub fn calibrate(&mut self, link: &ColoredLink, candidates: &[Character], opts: &SlopeOptions) -> Result<Character> {
        let problem = link.problem()?;
        for w in candidates {
            if !w.is_nonvanishing() || !w.is_admissible(&link.linking_vector())? {
                continue;
            }
            let (raw, _) = self.raw(w, opts.max_conductor)?;
            let TorresValue::Value(SlopeValue::Finite(r)) = raw else { continue };
            let Ok(k) = link_slope(&problem, w, opts) else { continue };
            let SlopeValue::Finite(k) = k.slope else { continue };
            if r.norm() < 1e-9 || k.norm() < 1e-9 {
                continue;
            }
            if (r - k).norm() <= 1e-8 * k.norm().max(1.0) {
                self.sign = Some(1);
            } else if (r + k).norm() <= 1e-8 * k.norm().max(1.0) {
                self.sign = Some(-1);
            } else {
                return Err(Error::Calibration(format!(
                    "Torres ratio {r} is not ± the kernel slope {k} at {}",
                    w.to_spec()
                )));
            }
            return Ok(w.clone());
        }
        Err(Error::Calibration("no regular character among the calibration candidates".into()))
    }

    /// The calibrated Torres slope.
    pub fn slope(&self, omega: &Character, max_conductor: u32) -> Result<TorresValue> {
        let s = self.sign.ok_or_else(|| Error::Calibration("call calibrate first".into()))?;
        let (v, _) = self.raw(omega, max_conductor)?;
        Ok(match v {
            TorresValue::Value(SlopeValue::Finite(z)) => TorresValue::Value(SlopeValue::Finite(z * s as f64)),
            other => other,
        })
    }

    /// The calibrated exact value, when the exact path applies and the value is finite.
    pub fn slope_exact(&self, omega: &Character, max_conductor: u32) -> Result<Option<Cyc>> {
        let s = self.sign.ok_or_else(|| Error::Calibration("call calibrate first".into()))?;
        let (_, exact) = self.raw(omega, max_conductor)?;
        Ok(exact.map(|v| if s < 0 { v.neg() } else { v }))
    }
}
