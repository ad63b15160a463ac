//! Free-group words, presentations with peripheral tags, and Fox calculus.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};
use crate::laurent::MultiLaurent;
use crate::linalg::LMatrix;

/// A word in the free group: letters are `(generator, exponent)` with nonzero exponent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word {
    pub letters: Vec<(usize, i32)>,
}

impl Word {
    pub fn new(letters: Vec<(usize, i32)>) -> Word {
        Word { letters: letters.into_iter().filter(|l| l.1 != 0).collect() }
    }

    pub fn empty() -> Word {
        Word::default()
    }

    pub fn generator(g: usize) -> Word {
        Word::new(vec![(g, 1)])
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|&(g, e)| (g, -e)).collect() }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        Word { letters: l }
    }

    /// Expands powers into single letters of exponent ±1.
    pub fn expanded(&self) -> Vec<(usize, i32)> {
        let mut out = Vec::new();
        for &(g, e) in &self.letters {
            for _ in 0..e.unsigned_abs() {
                out.push((g, e.signum()));
            }
        }
        out
    }

    /// Cancels adjacent inverse pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<(usize, i32)> = Vec::new();
        for (g, e) in self.expanded() {
            if let Some(&(h, f)) = stack.last() {
                if h == g && f == -e {
                    stack.pop();
                    continue;
                }
            }
            stack.push((g, e));
        }
        Word { letters: stack }
    }

    /// Image in the abelianization, given each generator's exponent vector.
    pub fn abelianize(&self, phi: &[Vec<i32>], ncolors: usize) -> Vec<i32> {
        let mut v = vec![0; ncolors];
        for &(g, e) in &self.letters {
            for (a, b) in v.iter_mut().zip(&phi[g]) {
                *a += e * b;
            }
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.0).max()
    }

    pub fn parse(text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            let (name, e) = match tok.split_once('^') {
                Some((n, p)) => (n, p.parse::<i32>().map_err(|_| Error::parse(format!("bad exponent in `{tok}`")))?),
                None => (tok, 1),
            };
            let idx: usize = name
                .strip_prefix('x')
                .and_then(|s| s.parse().ok())
                .filter(|&i: &usize| i >= 1)
                .ok_or_else(|| Error::parse(format!("bad generator `{name}`")))?;
            letters.push((idx - 1, e));
        }
        Ok(Word::new(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|&(g, e)| if e == 1 { format!("x{}", g + 1) } else { format!("x{}^{}", g + 1, e) })
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

fn monomial(nvars: usize, e: &[i32]) -> MultiLaurent {
    MultiLaurent::monomial(nvars, e.to_vec(), BigRational::one())
}

/// Fox derivative `∂w/∂x_gen`, abelianized through `phi` (generator → exponent vector).
pub fn fox_derivative(w: &Word, gen: usize, phi: &[Vec<i32>], nvars: usize) -> MultiLaurent {
    word_differential_sparse(w, phi, nvars).remove(&gen).unwrap_or_else(|| MultiLaurent::zero(nvars))
}

fn word_differential_sparse(w: &Word, phi: &[Vec<i32>], nvars: usize) -> BTreeMap<usize, MultiLaurent> {
    let mut acc = vec![0i32; nvars];
    let mut out: BTreeMap<usize, MultiLaurent> = BTreeMap::new();
    for (g, e) in w.expanded() {
        if e > 0 {
            out.entry(g).or_insert_with(|| MultiLaurent::zero(nvars)).add_term(acc.clone(), BigRational::one());
            for (a, b) in acc.iter_mut().zip(&phi[g]) {
                *a += b;
            }
        } else {
            for (a, b) in acc.iter_mut().zip(&phi[g]) {
                *a -= b;
            }
            out.entry(g).or_insert_with(|| MultiLaurent::zero(nvars)).add_term(acc.clone(), -BigRational::one());
        }
    }
    out
}

/// `dw = Σ (∂w/∂x_i) dx_i` as a dense vector.
pub fn word_differential(w: &Word, phi: &[Vec<i32>], ngens: usize, nvars: usize) -> Vec<MultiLaurent> {
    let mut v = vec![MultiLaurent::zero(nvars); ngens];
    for (g, p) in word_differential_sparse(w, phi, nvars) {
        v[g] = p;
    }
    v
}

/// A finitely presented group with an abelianization map to `Z^ncolors` and named words.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    pub num_generators: usize,
    pub relators: Vec<Word>,
    /// Generator index → exponent vector of its image (length `ncolors`).
    pub abelianization: Vec<Vec<i32>>,
    pub ncolors: usize,
    pub tagged: BTreeMap<String, Word>,
}

impl GroupPresentation {
    pub fn validate(&self) -> Result<()> {
        if self.abelianization.len() != self.num_generators {
            return Err(Error::structural("abelianization must list every generator"));
        }
        if self.abelianization.iter().any(|v| v.len() != self.ncolors) {
            return Err(Error::structural("abelianization vectors have the wrong length"));
        }
        for (i, r) in self.relators.iter().enumerate() {
            if r.max_generator().map(|g| g >= self.num_generators).unwrap_or(false) {
                return Err(Error::structural(format!("relator {} uses an unknown generator", i + 1)));
            }
            if r.abelianize(&self.abelianization, self.ncolors).iter().any(|&x| x != 0) {
                return Err(Error::structural(format!(
                    "relator {} does not abelianize to zero",
                    i + 1
                )));
            }
        }
        for (name, w) in &self.tagged {
            if w.max_generator().map(|g| g >= self.num_generators).unwrap_or(false) {
                return Err(Error::structural(format!("tag `{name}` uses an unknown generator")));
            }
        }
        Ok(())
    }

    pub fn tag(&self, name: &str) -> Option<&Word> {
        self.tagged.get(name)
    }

    /// Fox matrix: one row per relator, one column per generator.
    pub fn alexander_matrix(&self) -> Result<LMatrix> {
        self.validate()?;
        Ok(self
            .relators
            .iter()
            .map(|r| word_differential(r, &self.abelianization, self.num_generators, self.ncolors))
            .collect())
    }

    pub fn differential(&self, w: &Word) -> Vec<MultiLaurent> {
        word_differential(w, &self.abelianization, self.num_generators, self.ncolors)
    }

    /// Text form: header lines, one `relator:` line per relator, and `tag <name>:` lines.
    pub fn to_text(&self) -> String {
        let mut s = format!("generators: {}\ncolors: {}\n", self.num_generators, self.ncolors);
        let ab: Vec<String> = self
            .abelianization
            .iter()
            .enumerate()
            .map(|(i, v)| {
                format!("x{}={}", i + 1, v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            })
            .collect();
        s += &format!("abelianization: {}\n", ab.join(" "));
        for r in &self.relators {
            s += &format!("relator: {r}\n");
        }
        for (k, w) in &self.tagged {
            s += &format!("tag {k}: {w}\n");
        }
        s
    }

    pub fn parse(text: &str) -> Result<GroupPresentation> {
        let mut ngen = None;
        let mut ncol = None;
        let mut ab: Vec<Vec<i32>> = Vec::new();
        let mut rels = Vec::new();
        let mut tagged = BTreeMap::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
            let (key, val) = line.split_once(':').ok_or_else(|| Error::parse(format!("missing `:` in `{line}`")))?;
            let val = val.trim();
            match key.trim() {
                "generators" => ngen = Some(val.parse::<usize>().map_err(|_| Error::parse("bad generator count"))?),
                "colors" => ncol = Some(val.parse::<usize>().map_err(|_| Error::parse("bad color count"))?),
                "abelianization" => {
                    for item in val.split_whitespace() {
                        let (_, v) = item.split_once('=').ok_or_else(|| Error::parse(format!("bad entry `{item}`")))?;
                        let vec: std::result::Result<Vec<i32>, _> = v.split(',').map(|x| x.parse::<i32>()).collect();
                        ab.push(vec.map_err(|_| Error::parse(format!("bad vector `{v}`")))?);
                    }
                }
                "relator" => rels.push(Word::parse(val)?),
                k if k.starts_with("tag ") => {
                    tagged.insert(k[4..].trim().to_string(), Word::parse(val)?);
                }
                k => return Err(Error::parse(format!("unknown key `{k}`"))),
            }
        }
        let p = GroupPresentation {
            num_generators: ngen.ok_or_else(|| Error::parse("missing `generators`"))?,
            ncolors: ncol.ok_or_else(|| Error::parse("missing `colors`"))?,
            relators: rels,
            abelianization: ab,
            tagged,
        };
        p.validate()?;
        Ok(p)
    }
}

/// Evaluates `φ(x_i) − 1` as a column vector (used by the fundamental identity).
pub fn phi_minus_one(phi: &[Vec<i32>], nvars: usize) -> Vec<MultiLaurent> {
    phi.iter()
        .map(|e| &monomial(nvars, e) - &MultiLaurent::one(nvars))
        .collect()
}

/// `φ(w) − 1`.
pub fn word_phi_minus_one(w: &Word, phi: &[Vec<i32>], nvars: usize) -> MultiLaurent {
    &monomial(nvars, &w.abelianize(phi, nvars)) - &MultiLaurent::one(nvars)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_reduction() {
        assert_eq!(Word::new(vec![(0, 1), (0, -1), (1, 1)]).free_reduce(), Word::new(vec![(1, 1)]));
        assert!(Word::empty().free_reduce().is_empty());
        assert!(Word::new(vec![(0, 1), (1, 1), (1, -1), (0, -1)]).free_reduce().is_empty());
    }

    #[test]
    fn fox_rules() {
        let phi = vec![vec![1], vec![0]];
        let xy = Word::new(vec![(0, 1), (1, 1)]);
        assert_eq!(fox_derivative(&xy, 1, &phi, 1), MultiLaurent::var(1, 0));
        let xinv = Word::new(vec![(0, -1)]);
        assert_eq!(fox_derivative(&xinv, 0, &phi, 1), -MultiLaurent::var_pow(1, 0, -1));
    }

    #[test]
    fn commutator_differential() {
        // [m, l] with φ(m) = t, φ(l) = 1
        let phi = vec![vec![1], vec![0]];
        let w = Word::new(vec![(0, 1), (1, 1), (0, -1), (1, -1)]);
        let d = word_differential(&w, &phi, 2, 1);
        assert!(d[0].is_zero());
        assert_eq!(d[1], MultiLaurent::parse("t - 1", 1).unwrap());
    }

    #[test]
    fn text_round_trip() {
        let p = GroupPresentation {
            num_generators: 2,
            relators: vec![Word::new(vec![(0, 1), (1, 1), (0, -1), (1, -1)])],
            abelianization: vec![vec![1, 0], vec![0, 1]],
            ncolors: 2,
            tagged: [("meridian".to_string(), Word::generator(0))].into_iter().collect(),
        };
        assert_eq!(GroupPresentation::parse(&p.to_text()).unwrap(), p);
        let unknot = GroupPresentation {
            num_generators: 1,
            relators: vec![],
            abelianization: vec![vec![1]],
            ncolors: 1,
            tagged: BTreeMap::new(),
        };
        assert!(unknot.alexander_matrix().unwrap().is_empty());
    }
}
