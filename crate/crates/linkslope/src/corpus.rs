//! Bundled link and tangle diagrams with a manifest of golden values, and a runner that
//! checks every case.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::alexander::{conway_potential, order_polynomial, TorresOracle, TorresValue};
use crate::burau::beta_r;
use crate::charspec::{Character, Coord, RationalFunction};
use crate::diagram::{generalized_hopf, BraidWord, PdCode, TangleDiagram};
use crate::error::{Error, Result};
use crate::laurent::MultiLaurent;
use crate::par;
use crate::slope::{link_slope, patched_slope, symbolic_slope, ColoredLink, Parametrization, SlopeOptions, SymbolicSlope};
use crate::splice::ExtReal;
use crate::tangle::tangle_slope;

const FILES: &[(&str, &str)] = &[
    ("hopf.pd", include_str!("../corpus/hopf.pd")),
    ("trefoil.pd", include_str!("../corpus/trefoil.pd")),
    ("figure_eight.pd", include_str!("../corpus/figure_eight.pd")),
    ("L2a1.pd", include_str!("../corpus/L2a1.pd")),
    ("L4a1.pd", include_str!("../corpus/L4a1.pd")),
    ("whitehead.pd", include_str!("../corpus/whitehead.pd")),
    ("L7n1.pd", include_str!("../corpus/L7n1.pd")),
    ("L10a39.pd", include_str!("../corpus/L10a39.pd")),
    ("L10n36.pd", include_str!("../corpus/L10n36.pd")),
    ("L10n85.pd", include_str!("../corpus/L10n85.pd")),
    ("L11n353.pd", include_str!("../corpus/L11n353.pd")),
    ("L11n384.pd", include_str!("../corpus/L11n384.pd")),
    ("L11n396.pd", include_str!("../corpus/L11n396.pd")),
    ("tangle_tau_plus.tangle", include_str!("../corpus/tangle_tau_plus.tangle")),
    ("tangle_tau_minus.tangle", include_str!("../corpus/tangle_tau_minus.tangle")),
    ("tangle_tau_zero.tangle", include_str!("../corpus/tangle_tau_zero.tangle")),
];

const MANIFEST: &str = include_str!("../corpus/manifest.json");

/// Names of the bundled diagram files.
pub fn bundled_files() -> impl Iterator<Item = &'static str> {
    FILES.iter().map(|(n, _)| *n)
}

/// Text of a bundled file.
pub fn bundled(name: &str) -> Option<&'static str> {
    FILES.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// A bundled link diagram by stem (`"whitehead"`) or file name.
pub fn link(name: &str) -> Result<PdCode> {
    let file = if name.ends_with(".pd") { name.to_string() } else { format!("{name}.pd") };
    PdCode::parse(bundled(&file).ok_or_else(|| Error::domain(format!("no bundled diagram `{file}`")))?)
}

/// How a case expects a slope to come out.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub schema_version: u32,
    #[serde(default)]
    pub cases: Vec<Case>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Case {
    /// `link_slope` (or `patched_slope`) at one character.
    Slope {
        name: String,
        link: String,
        distinguished: usize,
        #[serde(default)]
        colors: Option<Vec<usize>>,
        character: String,
        #[serde(default)]
        patched: bool,
        expect: ExtReal,
    },
    /// `symbolic_slope`, compared as rational functions.
    Symbolic {
        name: String,
        link: String,
        distinguished: usize,
        #[serde(default)]
        colors: Option<Vec<usize>>,
        #[serde(default)]
        parametrization: Option<String>,
        /// Laurent polynomial text, or `infinity`.
        expect: String,
    },
    /// Order polynomial `Δ_r`, compared up to units.
    Alexander {
        name: String,
        link: String,
        colors: Vec<usize>,
        ncolors: usize,
        order: usize,
        expect: String,
    },
    /// Numerator of the Conway potential, compared up to sign.
    Conway {
        name: String,
        link: String,
        colors: Vec<usize>,
        ncolors: usize,
        expect: String,
        #[serde(default)]
        over_t_minus_inverse: bool,
    },
    /// `β_r` of a braid: `inf`, or coefficients in `c = ξ_r + ξ_r⁻¹` from degree 0 up.
    Burau {
        name: String,
        braid: String,
        n: usize,
        r: usize,
        expect: BurauExpect,
    },
    /// Generalized Hopf link `H_{m,n}` with `K` the first strand's component.
    GeneralizedHopf {
        name: String,
        m: usize,
        n: usize,
        character: String,
        expect: ExtReal,
    },
    Tangle {
        name: String,
        tangle: String,
        character: String,
        expect: ExtReal,
    },
    /// The Torres ratio is 0/0 at `character`.
    TorresInconclusive {
        name: String,
        link: String,
        distinguished: usize,
        calibrate: Vec<String>,
        character: String,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BurauExpect {
    Coefficients(Vec<String>),
    Symbol(String),
}

impl Case {
    pub fn name(&self) -> &str {
        match self {
            Case::Slope { name, .. }
            | Case::Symbolic { name, .. }
            | Case::Alexander { name, .. }
            | Case::Conway { name, .. }
            | Case::Burau { name, .. }
            | Case::GeneralizedHopf { name, .. }
            | Case::Tangle { name, .. }
            | Case::TorresInconclusive { name, .. } => name,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub millis: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusReport {
    pub passed: usize,
    pub failed: usize,
    pub warnings: Vec<String>,
    pub results: Vec<CaseResult>,
}

impl CorpusReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

impl Manifest {
    pub fn bundled() -> Manifest {
        serde_json::from_str(MANIFEST).expect("bundled manifest is valid")
    }

    pub fn from_json(text: &str) -> Result<Manifest> {
        serde_json::from_str(text).map_err(|e| Error::parse(format!("manifest: {e}")))
    }
}

/// Resolves file names against an optional directory first, then the bundled corpus.
#[derive(Clone, Debug, Default)]
pub struct Resolver {
    pub dir: Option<PathBuf>,
}

impl Resolver {
    pub fn new(dir: Option<&Path>) -> Resolver {
        Resolver { dir: dir.map(Path::to_path_buf) }
    }

    fn text(&self, file: &str) -> Result<String> {
        if let Some(d) = &self.dir {
            let p = d.join(file);
            if p.exists() {
                return std::fs::read_to_string(&p).map_err(|e| Error::domain(format!("{}: {e}", p.display())));
            }
        }
        bundled(file).map(str::to_string).ok_or_else(|| Error::domain(format!("missing corpus file `{file}`")))
    }

    pub fn link(&self, name: &str) -> Result<PdCode> {
        let file = if name.contains('.') { name.to_string() } else { format!("{name}.pd") };
        PdCode::parse(&self.text(&file)?)
    }

    pub fn tangle(&self, name: &str) -> Result<TangleDiagram> {
        let file = if name.contains('.') { name.to_string() } else { format!("{name}.tangle") };
        TangleDiagram::parse(&self.text(&file)?)
    }
}

fn compare(got: &crate::slope::SlopeValue, want: &ExtReal) -> Result<(bool, String)> {
    let g = ExtReal::from_slope(got)?;
    Ok((g.same(want), format!("got {g}, expected {want}")))
}

fn same_up_to_unit(a: &MultiLaurent, b: &MultiLaurent) -> bool {
    let (x, y) = (a.unit_normalize(), b.unit_normalize());
    x.core == y.core && x.content == y.content
}

fn run_case(case: &Case, res: &Resolver) -> Result<(bool, String)> {
    let opts = SlopeOptions::default();
    match case {
        Case::Slope { link, distinguished, colors, character, patched, expect, .. } => {
            let l = ColoredLink::new(res.link(link)?, *distinguished, colors.clone())?;
            let w = Character::parse(character)?;
            let out = if *patched { patched_slope(&l, &w, &opts)? } else { link_slope(&l.problem()?, &w, &opts)? };
            compare(&out.slope, expect)
        }
        Case::Symbolic { link, distinguished, colors, parametrization, expect, .. } => {
            let l = ColoredLink::new(res.link(link)?, *distinguished, colors.clone())?;
            let param = parametrization.as_deref().map(Parametrization::parse).transpose()?;
            let got = symbolic_slope(&l.problem()?, param.as_ref(), 1)?;
            let ok = match (&got, expect.trim()) {
                (SymbolicSlope::Infinity, "infinity" | "inf") => true,
                (SymbolicSlope::Function(f), text) => {
                    let want = MultiLaurent::parse(text, f.num.nvars())?;
                    *f == RationalFunction::from_poly(want)
                }
                _ => false,
            };
            Ok((ok, format!("got {}, expected {expect}", got.to_text())))
        }
        Case::Alexander { link, colors, ncolors, order, expect, .. } => {
            let p = res.link(link)?.wirtinger(colors, *ncolors)?;
            let got = order_polynomial(&p, *order)?.polynomial();
            let want = MultiLaurent::parse(expect, *ncolors)?;
            Ok((same_up_to_unit(&got, &want), format!("got {got}, expected {want} up to units")))
        }
        Case::Conway { link, colors, ncolors, expect, over_t_minus_inverse, .. } => {
            let got = conway_potential(&res.link(link)?, colors, *ncolors)?;
            let want = MultiLaurent::parse(expect, *ncolors)?;
            let ok = (got.numer == want || got.numer == -want.clone()) && got.over_t_minus_inverse == *over_t_minus_inverse;
            Ok((ok, format!("got {}, expected ±{}", got.to_text(), want)))
        }
        Case::Burau { braid, n, r, expect, .. } => {
            let got = beta_r(&BraidWord::parse(braid, *n)?, *r)?;
            match expect {
                BurauExpect::Symbol(s) if matches!(s.as_str(), "inf" | "infinity") => {
                    Ok((got.value == crate::slope::SlopeValue::Infinity, format!("got {}", got.value)))
                }
                BurauExpect::Symbol(s) => Err(Error::parse(format!("unknown Burau expectation `{s}`"))),
                BurauExpect::Coefficients(c) => {
                    let want: Vec<BigRational> = c
                        .iter()
                        .map(|x| x.parse::<BigRational>().map_err(|_| Error::parse(format!("bad rational `{x}`"))))
                        .collect::<Result<_>>()?;
                    let trim = |mut v: Vec<BigRational>| {
                        while v.last().is_some_and(num_traits::Zero::is_zero) {
                            v.pop();
                        }
                        v
                    };
                    let ok = got.coefficients.clone().map(trim) == Some(trim(want));
                    Ok((ok, format!("got {}", got.exact.as_deref().unwrap_or("no exact value"))))
                }
            }
        }
        Case::GeneralizedHopf { m, n, character, expect, .. } => {
            let h = generalized_hopf(*m, *n)?;
            let l = ColoredLink::new(h.pd, h.strand_components[0], None)?;
            let u = Character::parse(character)?;
            let w = admissible_from_base(&l.linking_vector(), &u.coords[0])
                .ok_or_else(|| Error::domain("no nonvanishing admissible character of this shape"))?;
            let out = link_slope(&l.problem()?, &w, &opts)?;
            compare(&out.slope, expect)
        }
        Case::Tangle { tangle, character, expect, .. } => {
            let out = tangle_slope(&res.tangle(tangle)?, &Character::parse(character)?)?;
            compare(&out.slope, expect)
        }
        Case::TorresInconclusive { link, distinguished, calibrate, character, .. } => {
            let l = ColoredLink::new(res.link(link)?, *distinguished, None)?;
            let mut oracle = TorresOracle::new(&l)?;
            let cands: Vec<Character> = calibrate.iter().map(|c| Character::parse(c)).collect::<Result<_>>()?;
            oracle.calibrate(&l, &cands, &opts)?;
            let got = oracle.slope(&Character::parse(character)?, opts.max_conductor)?;
            Ok((got == TorresValue::Inconclusive, format!("got {got:?}")))
        }
    }
}

/// Puts `u` on every coordinate except the last one with `λ_j = ±1`, which is chosen so that
/// `ω^λ = 1`. Returns `None` when no such coordinate exists or the result vanishes.
pub fn admissible_from_base(lambda: &[i64], u: &Coord) -> Option<Character> {
    if lambda.is_empty() {
        return Some(Character::new(Vec::new()));
    }
    let mut coords = vec![*u; lambda.len()];
    if lambda.iter().any(|&l| l != 0) {
        let j = lambda.iter().rposition(|l| l.abs() == 1)?;
        let rest: i64 = lambda.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, l)| l).sum();
        coords[j] = u.pow(-rest * lambda[j]);
    }
    let w = Character::new(coords);
    w.is_nonvanishing().then_some(w)
}

/// Runs every case, in parallel when the `parallel` feature is on.
pub fn run_manifest(manifest: &Manifest, res: &Resolver) -> CorpusReport {
    let results = par::map(&manifest.cases, |case| {
        let start = Instant::now();
        let (passed, detail) = match run_case(case, res) {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        CaseResult { name: case.name().to_string(), passed, detail, millis: start.elapsed().as_secs_f64() * 1e3 }
    });
    let passed = results.iter().filter(|r| r.passed).count();
    let mut warnings = Vec::new();
    if manifest.cases.is_empty() {
        warnings.push("manifest has no cases".to_string());
    }
    let mut seen = BTreeMap::new();
    for r in &results {
        *seen.entry(r.name.clone()).or_insert(0) += 1;
    }
    for (n, c) in seen {
        if c > 1 {
            warnings.push(format!("case name `{n}` appears {c} times"));
        }
    }
    CorpusReport { passed, failed: results.len() - passed, warnings, results }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_bundled_file_parses() {
        for name in bundled_files() {
            let text = bundled(name).unwrap();
            if name.ends_with(".pd") {
                PdCode::parse(text).unwrap();
            } else {
                TangleDiagram::parse(text).unwrap();
            }
        }
    }

    #[test]
    fn empty_manifest_passes_with_warning() {
        let r = run_manifest(&Manifest::from_json(r#"{"schema_version":1}"#).unwrap(), &Resolver::default());
        assert!(r.ok());
        assert_eq!(r.warnings.len(), 1);
    }
}
