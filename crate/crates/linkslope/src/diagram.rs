//! Link and tangle diagrams: PD codes, braid closures, four-ended tangles.
//!
//! PD convention: `X[a,b,c,d]` lists the edges around a crossing counterclockwise,
//! starting from the incoming under-edge `a` (so `c` is the outgoing under-edge).
//! The over-strand runs `d → b` at a positive crossing and `b → d` at a negative one.
//! The over direction is inferred by propagating orientations along shared edges.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::presentation::{GroupPresentation, Word};

/// Position of the incoming over-edge in a crossing tuple: 1 or 3.
pub type OverIn = u8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PdCode {
    crossings: Vec<[u32; 4]>,
    over_in: Vec<OverIn>,
    free_loops: usize,
    components: Vec<Vec<u32>>,
    edge_comp: BTreeMap<u32, usize>,
    /// Edge → (crossing, position) where the edge ends.
    head: BTreeMap<u32, (usize, usize)>,
}

fn occurrences(crossings: &[[u32; 4]]) -> BTreeMap<u32, Vec<(usize, usize)>> {
    let mut occ: BTreeMap<u32, Vec<(usize, usize)>> = BTreeMap::new();
    for (ci, x) in crossings.iter().enumerate() {
        for (pos, &e) in x.iter().enumerate() {
            occ.entry(e).or_default().push((ci, pos));
        }
    }
    occ
}

/// Infers over-strand directions from the under-strand data, filling `known` entries.
/// Returns false on a contradiction.
fn propagate(crossings: &[[u32; 4]], occ: &BTreeMap<u32, Vec<(usize, usize)>>, over: &mut [Option<OverIn>]) -> bool {
    let is_in = |over: &[Option<OverIn>], ci: usize, pos: usize| -> Option<bool> {
        match pos {
            0 => Some(true),
            2 => Some(false),
            _ => over[ci].map(|o| o as usize == pos),
        }
    };
    let mut changed = true;
    while changed {
        changed = false;
        for oc in occ.values() {
            if oc.len() != 2 {
                continue;
            }
            let (a, b) = (oc[0], oc[1]);
            let ia = is_in(over, a.0, a.1);
            let ib = is_in(over, b.0, b.1);
            match (ia, ib) {
                (None, Some(x)) => {
                    over[a.0] = Some(if !x { a.1 as u8 } else { 4 - a.1 as u8 });
                    changed = true;
                }
                (Some(x), None) => {
                    over[b.0] = Some(if !x { b.1 as u8 } else { 4 - b.1 as u8 });
                    changed = true;
                }
                (Some(x), Some(y)) if x == y => {
                    // a kink edge occurring twice at one crossing is fine only if in/out differ
                    return false;
                }
                _ => {}
            }
        }
    }
    let _ = crossings;
    true
}

impl PdCode {
    /// Validates and orients a PD code. `over_hint` fixes over directions where known.
    pub fn new(crossings: Vec<[u32; 4]>, over_hint: Option<Vec<OverIn>>, free_loops: usize) -> Result<PdCode> {
        let occ = occurrences(&crossings);
        for (e, oc) in &occ {
            if oc.len() != 2 {
                let places: Vec<String> = oc.iter().map(|(c, p)| format!("crossing {} slot {}", c + 1, p + 1)).collect();
                return Err(Error::parse(format!(
                    "edge {e} appears {} time(s) ({}); every edge must appear exactly twice",
                    oc.len(),
                    places.join(", ")
                )));
            }
        }
        let mut over: Vec<Option<OverIn>> = match over_hint {
            Some(h) => {
                if h.len() != crossings.len() || h.iter().any(|&o| o != 1 && o != 3) {
                    return Err(Error::structural("orientation hint must give 1 or 3 per crossing"));
                }
                h.into_iter().map(Some).collect()
            }
            None => vec![None; crossings.len()],
        };
        loop {
            if !propagate(&crossings, &occ, &mut over) {
                return Err(Error::parse("orientation inconsistency: an edge is incoming (or outgoing) at both ends"));
            }
            let Some(ci) = over.iter().position(|o| o.is_none()) else { break };
            // a component that only passes over: follow the label order
            let (j, l) = (crossings[ci][1], crossings[ci][3]);
            over[ci] = Some(if j == l + 1 || (l > j + 1) { 3 } else { 1 });
        }
        let over_in: Vec<OverIn> = over.into_iter().map(|o| o.unwrap()).collect();
        // every edge must be in at one end and out at the other
        let mut head = BTreeMap::new();
        let mut next = BTreeMap::new();
        for (ci, x) in crossings.iter().enumerate() {
            let oi = over_in[ci] as usize;
            for (inp, outp) in [(0usize, 2usize), (oi, 4 - oi)] {
                if head.insert(x[inp], (ci, inp)).is_some() {
                    return Err(Error::parse(format!("orientation inconsistency at edge {}", x[inp])));
                }
                next.insert(x[inp], x[outp]);
            }
        }
        let mut seen = BTreeSet::new();
        let mut components = Vec::new();
        let mut edge_comp = BTreeMap::new();
        for &e in occ.keys() {
            if seen.contains(&e) {
                continue;
            }
            let mut comp = Vec::new();
            let mut f = e;
            while seen.insert(f) {
                edge_comp.insert(f, components.len());
                comp.push(f);
                f = next[&f];
            }
            if f != e {
                return Err(Error::parse(format!("edge {e} does not lie on a closed component")));
            }
            components.push(comp);
        }
        for _ in 0..free_loops {
            components.push(Vec::new());
        }
        Ok(PdCode { crossings, over_in, free_loops, components, edge_comp, head })
    }

    /// Parses `X[a,b,c,d]` tokens; `O` or `Loop[]` tokens add crossingless unknotted components.
    pub fn parse(text: &str) -> Result<PdCode> {
        let mut crossings = Vec::new();
        let mut loops = 0;
        let cleaned: String = text
            .lines()
            .map(|l| l.split('#').next().unwrap_or(""))
            .collect::<Vec<_>>()
            .join(" ");
        let mut rest = cleaned.as_str();
        loop {
            rest = rest.trim_start_matches(|c: char| c.is_whitespace() || c == ',' || c == ';');
            if rest.is_empty() {
                break;
            }
            let body_start = rest.find('[');
            let head = match body_start {
                Some(i) => rest[..i].trim(),
                None => rest.split_whitespace().next().unwrap_or(""),
            };
            if head == "O" && body_start.map(|i| rest[..i].trim() != "O").unwrap_or(true) {
                loops += 1;
                rest = &rest[1..];
                continue;
            }
            let Some(open) = body_start else {
                return Err(Error::parse(format!("unexpected text `{}`", rest.chars().take(20).collect::<String>())));
            };
            let close = rest[open..].find(']').ok_or_else(|| Error::parse("unterminated `[`"))? + open;
            let inner = &rest[open + 1..close];
            match head {
                "X" | "PD" | "" => {
                    let nums: std::result::Result<Vec<u32>, _> =
                        inner.split(',').map(|s| s.trim()).filter(|s| !s.is_empty()).map(|s| s.parse::<u32>()).collect();
                    let nums = nums.map_err(|_| Error::parse(format!("bad crossing `{inner}`")))?;
                    if nums.len() != 4 {
                        return Err(Error::parse(format!("crossing `{inner}` must have 4 labels")));
                    }
                    crossings.push([nums[0], nums[1], nums[2], nums[3]]);
                }
                "Loop" | "O" => loops += 1,
                other => return Err(Error::parse(format!("unknown token `{other}`"))),
            }
            rest = &rest[close + 1..];
        }
        if crossings.is_empty() && loops == 0 {
            return Err(Error::parse("empty diagram"));
        }
        PdCode::new(crossings, None, loops)
    }

    pub fn to_text(&self) -> String {
        let mut parts: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        for _ in 0..self.free_loops {
            parts.push("Loop[]".to_string());
        }
        parts.join(" ")
    }

    pub fn crossings(&self) -> &[[u32; 4]] {
        &self.crossings
    }

    pub fn over_in(&self) -> &[OverIn] {
        &self.over_in
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Edges of component `k` in traversal order (empty for a free loop).
    pub fn component_edges(&self, k: usize) -> &[u32] {
        &self.components[k]
    }

    pub fn component_of_edge(&self, e: u32) -> Option<usize> {
        self.edge_comp.get(&e).copied()
    }

    /// +1 when the over-strand runs `d → b`.
    pub fn crossing_sign(&self, ci: usize) -> i32 {
        if self.over_in[ci] == 3 {
            1
        } else {
            -1
        }
    }

    /// Components of the under- and over-strands of a crossing.
    pub fn crossing_components(&self, ci: usize) -> (usize, usize) {
        let x = self.crossings[ci];
        (self.edge_comp[&x[0]], self.edge_comp[&x[1]])
    }

    /// lk off the diagonal, writhe on it.
    pub fn linking_matrix(&self) -> Vec<Vec<i64>> {
        let n = self.num_components();
        let mut m = vec![vec![0i64; n]; n];
        for ci in 0..self.crossings.len() {
            let (a, b) = self.crossing_components(ci);
            let s = self.crossing_sign(ci) as i64;
            if a == b {
                m[a][a] += 2 * s;
            } else {
                m[a][b] += s;
                m[b][a] += s;
            }
        }
        for row in m.iter_mut() {
            for v in row.iter_mut() {
                *v /= 2;
            }
        }
        m
    }

    /// Arc structure: edge → arc index. Arcs are ordered by their smallest edge; free loops follow.
    fn arcs(&self) -> (BTreeMap<u32, usize>, usize) {
        let mut parent: BTreeMap<u32, u32> = self.edge_comp.keys().map(|&e| (e, e)).collect();
        fn find(p: &mut BTreeMap<u32, u32>, mut e: u32) -> u32 {
            while p[&e] != e {
                let g = p[&p[&e]];
                p.insert(e, g);
                e = g;
            }
            e
        }
        for x in &self.crossings {
            let a = find(&mut parent, x[1]);
            let b = find(&mut parent, x[3]);
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent.insert(hi, lo);
            }
        }
        let edges: Vec<u32> = parent.keys().copied().collect();
        let mut roots: BTreeMap<u32, usize> = BTreeMap::new();
        let mut out = BTreeMap::new();
        for e in edges {
            let r = find(&mut parent, e);
            let n = roots.len();
            let idx = *roots.entry(r).or_insert(n);
            out.insert(e, idx);
        }
        let n = roots.len();
        (out, n + self.free_loops)
    }

    /// Generator index of the meridian of component `k` (the arc containing its first edge).
    fn meridian_generator(&self, arcs: &BTreeMap<u32, usize>, narcs: usize, k: usize) -> usize {
        if self.components[k].is_empty() {
            let loop_index = k - (self.components.len() - self.free_loops);
            narcs - self.free_loops + loop_index
        } else {
            arcs[&self.components[k][0]]
        }
    }

    /// Wirtinger presentation with relator `x_c^{-ε} x_a x_c^{ε} x_b^{-1}` per crossing
    /// (`a`, `b` the incoming and outgoing under-arcs, `c` the over-arc, `ε` the sign).
    /// `colors[k]` is the color of component `k`; the abelianization sends each
    /// generator to the unit vector of its color. Tags `meridian_of C<k>` are added
    /// for every component.
    pub fn wirtinger(&self, colors: &[usize], ncolors: usize) -> Result<GroupPresentation> {
        if colors.len() != self.num_components() {
            return Err(Error::structural("one color per component is required"));
        }
        if colors.iter().any(|&c| c >= ncolors) {
            return Err(Error::structural("color index out of range"));
        }
        let (arcs, narcs) = self.arcs();
        let mut ab = vec![vec![0i32; ncolors]; narcs];
        for (&e, &g) in &arcs {
            ab[g][colors[self.edge_comp[&e]]] = 1;
        }
        let first_loop = self.components.len() - self.free_loops;
        for i in 0..self.free_loops {
            ab[narcs - self.free_loops + i][colors[first_loop + i]] = 1;
        }
        let mut relators = Vec::new();
        for (ci, x) in self.crossings.iter().enumerate() {
            let s = self.crossing_sign(ci);
            let (a, b, c) = (arcs[&x[0]], arcs[&x[2]], arcs[&x[1]]);
            relators.push(Word::new(vec![(c, -s), (a, 1), (c, s), (b, -1)]));
        }
        let mut tagged = BTreeMap::new();
        for k in 0..self.num_components() {
            tagged.insert(format!("meridian_of C{k}"), Word::generator(self.meridian_generator(&arcs, narcs, k)));
        }
        let p = GroupPresentation { num_generators: narcs, relators, abelianization: ab, ncolors, tagged };
        p.validate()?;
        Ok(p)
    }

    /// Seifert-framed longitude of component `k`, read from its first edge:
    /// the over-arc generator (exponent = crossing sign) at each under-passage,
    /// followed by `m^{-w}` where `w` is the self-writhe.
    pub fn longitude_word(&self, k: usize) -> Result<Word> {
        if k >= self.num_components() {
            return Err(Error::domain(format!("component {k} not found")));
        }
        let (arcs, narcs) = self.arcs();
        let comp = &self.components[k];
        if comp.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let mut w = 0;
        for e in comp {
            let (ci, pos) = self.head[e];
            if pos == 0 {
                let s = self.crossing_sign(ci);
                let over_edge = self.crossings[ci][1];
                letters.push((arcs[&over_edge], s));
                if self.edge_comp[&over_edge] == k {
                    w += s;
                }
            }
        }
        let m = self.meridian_generator(&arcs, narcs, k);
        if w != 0 {
            letters.push((m, -w));
        }
        Ok(Word::new(letters))
    }

    /// Presentation for the slope problem of component `k`: color 0 on `k`,
    /// colors `1..=μ` on the others via `colors` (indexed by component, entry for `k` ignored).
    /// Tags `meridian` and `longitude` are added.
    pub fn slope_presentation(&self, k: usize, colors: &[usize], ncolors: usize) -> Result<GroupPresentation> {
        let mut cols = colors.to_vec();
        cols[k] = 0;
        let mut p = self.wirtinger(&cols, ncolors)?;
        let (arcs, narcs) = self.arcs();
        let m = self.meridian_generator(&arcs, narcs, k);
        p.tagged.insert("meridian".into(), Word::generator(m));
        p.tagged.insert("longitude".into(), self.longitude_word(k)?);
        Ok(p)
    }

    /// Reverses the orientation of component `k`.
    pub fn reverse_component(&self, k: usize) -> Result<PdCode> {
        if k >= self.num_components() {
            return Err(Error::domain(format!("component {k} not found")));
        }
        let mut cr = self.crossings.clone();
        let mut over = self.over_in.clone();
        for (ci, x) in cr.iter_mut().enumerate() {
            let (u, o) = (self.edge_comp[&x[0]], self.edge_comp[&x[1]]);
            if u == k {
                *x = [x[2], x[3], x[0], x[1]];
                // the over strand keeps its direction but now sits at swapped slots
                over[ci] = 4 - over[ci];
            }
            if o == k {
                over[ci] = 4 - over[ci];
            }
        }
        PdCode::new(cr, Some(over), self.free_loops)
    }

    /// Deletes the listed components. Returns the new diagram and, for each old component,
    /// its index in the new one.
    pub fn delete_components(&self, remove: &BTreeSet<usize>) -> Result<(PdCode, Vec<Option<usize>>)> {
        let mut parent: BTreeMap<u32, u32> = self.edge_comp.keys().map(|&e| (e, e)).collect();
        fn find(p: &mut BTreeMap<u32, u32>, mut e: u32) -> u32 {
            while p[&e] != e {
                e = p[&e];
            }
            e
        }
        fn union(p: &mut BTreeMap<u32, u32>, a: u32, b: u32) {
            let (ra, rb) = (find(p, a), find(p, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                p.insert(hi, lo);
            }
        }
        let mut keep = Vec::new();
        for (ci, x) in self.crossings.iter().enumerate() {
            let (u, o) = (self.edge_comp[&x[0]], self.edge_comp[&x[1]]);
            match (remove.contains(&u), remove.contains(&o)) {
                (true, true) => {}
                (true, false) => union(&mut parent, x[1], x[3]),
                (false, true) => union(&mut parent, x[0], x[2]),
                (false, false) => keep.push(ci),
            }
        }
        let mut cr = Vec::new();
        let mut over = Vec::new();
        for &ci in &keep {
            let x = self.crossings[ci];
            cr.push([find(&mut parent, x[0]), find(&mut parent, x[1]), find(&mut parent, x[2]), find(&mut parent, x[3])]);
            over.push(self.over_in[ci]);
        }
        let used: BTreeSet<u32> = cr.iter().flatten().copied().collect();
        // surviving components with no crossings left become free loops
        let mut crossing_comps = Vec::new();
        let mut loop_comps = Vec::new();
        let first_loop = self.components.len() - self.free_loops;
        for k in 0..self.components.len() {
            if remove.contains(&k) {
                continue;
            }
            if k >= first_loop || !self.components[k].iter().any(|e| used.contains(&find(&mut parent, *e))) {
                loop_comps.push(k);
            } else {
                crossing_comps.push(k);
            }
        }
        let pd = PdCode::new(cr, Some(over), loop_comps.len())?;
        let mut map = vec![None; self.components.len()];
        for &k in &crossing_comps {
            let e = self.components[k].iter().map(|e| find(&mut parent, *e)).find(|e| used.contains(e)).unwrap();
            map[k] = pd.component_of_edge(e);
        }
        let base = pd.num_components() - loop_comps.len();
        for (i, &k) in loop_comps.iter().enumerate() {
            map[k] = Some(base + i);
        }
        Ok((pd, map))
    }
}

/// A braid word on `n` strands; letter `±i` is `σ_i^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BraidWord {
    pub n: usize,
    pub letters: Vec<i32>,
}

impl BraidWord {
    pub fn new(n: usize, letters: Vec<i32>) -> Result<BraidWord> {
        if n == 0 {
            return Err(Error::domain("a braid needs at least one strand"));
        }
        for &g in &letters {
            if g == 0 || g.unsigned_abs() as usize >= n {
                return Err(Error::domain(format!("generator {g} out of range for {n} strands")));
            }
        }
        Ok(BraidWord { n, letters })
    }

    /// Whitespace- or comma-separated signed integers.
    pub fn parse(text: &str, n: usize) -> Result<BraidWord> {
        let letters: std::result::Result<Vec<i32>, _> = text
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<i32>())
            .collect();
        BraidWord::new(n, letters.map_err(|_| Error::parse(format!("bad braid word `{text}`")))?)
    }

    pub fn inverse(&self) -> BraidWord {
        BraidWord { n: self.n, letters: self.letters.iter().rev().map(|g| -g).collect() }
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        let mut l = self.letters.clone();
        l.extend_from_slice(&other.letters);
        BraidWord { n: self.n, letters: l }
    }

    pub fn pow(&self, p: i32) -> BraidWord {
        let base = if p < 0 { self.inverse() } else { self.clone() };
        let mut out = BraidWord { n: self.n, letters: Vec::new() };
        for _ in 0..p.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// The full twist `Δ² = (σ₁…σ_{n−1})^n`.
    pub fn full_twist(n: usize) -> BraidWord {
        BraidWord { n, letters: (1..n as i32).collect() }.pow(n as i32)
    }

    pub fn exponent_sum(&self) -> i32 {
        self.letters.iter().map(|g| g.signum()).sum()
    }
}

/// A closed braid diagram with bookkeeping for its strands and axis.
#[derive(Clone, Debug)]
pub struct BraidClosure {
    pub pd: PdCode,
    /// Component containing the braid axis, when it was added.
    pub axis: Option<usize>,
    /// Component through the bottom of strand `k`.
    pub strand_components: Vec<usize>,
}

/// Closure of a braid, optionally with its axis as an extra component.
pub fn braid_closure(beta: &BraidWord, with_axis: bool) -> Result<BraidClosure> {
    let n = beta.n;
    let mut label = 0u32;
    let mut fresh = || {
        label += 1;
        label
    };
    let start: Vec<u32> = (0..n).map(|_| fresh()).collect();
    let mut cur = start.clone();
    let mut cross: Vec<[u32; 4]> = Vec::new();
    let mut over: Vec<OverIn> = Vec::new();
    let mut axis_start = None;
    if with_axis {
        // a belt around the bottom of the braid: the lower arc runs left to right over the
        // strands, the upper arc returns right to left under them; every crossing is positive
        let ax0 = fresh();
        axis_start = Some(ax0);
        let mut ax = ax0;
        for c in cur.iter_mut() {
            let (s, north, east) = (*c, fresh(), fresh());
            cross.push([s, east, north, ax]);
            over.push(3);
            ax = east;
            *c = north;
        }
        for c in cur.iter_mut().rev() {
            let (s, north, west) = (*c, fresh(), fresh());
            cross.push([ax, north, west, s]);
            over.push(3);
            ax = west;
            *c = north;
        }
        for x in cross.iter_mut() {
            for e in x.iter_mut() {
                if *e == ax {
                    *e = ax0;
                }
            }
        }
    }
    for &g in &beta.letters {
        let i = g.unsigned_abs() as usize - 1;
        let (bl, br) = (cur[i], cur[i + 1]);
        let (tl, tr) = (fresh(), fresh());
        if g > 0 {
            cross.push([br, tr, tl, bl]);
            over.push(3);
        } else {
            cross.push([bl, br, tr, tl]);
            over.push(1);
        }
        cur[i] = tl;
        cur[i + 1] = tr;
    }
    let sub: BTreeMap<u32, u32> = (0..n).map(|k| (cur[k], start[k])).collect();
    for x in cross.iter_mut() {
        for e in x.iter_mut() {
            if let Some(&s) = sub.get(e) {
                *e = s;
            }
        }
    }
    let loose: Vec<usize> = (0..n).filter(|&k| cur[k] == start[k]).collect();
    let pd = PdCode::new(cross, Some(over), loose.len())?;
    let axis = axis_start.map(|a| pd.component_of_edge(a).expect("axis edge"));
    let base = pd.num_components() - loose.len();
    let strand_components = (0..n)
        .map(|k| match loose.iter().position(|&j| j == k) {
            Some(i) => base + i,
            None => pd.component_of_edge(start[k]).expect("strand edge"),
        })
        .collect();
    Ok(BraidClosure { pd, axis, strand_components })
}

/// The generalized Hopf link `H_{m,n}`: `m` parallel copies of one Hopf component and `n` of
/// the other, realized as the closure of the braid in which the last `n` strands make a full
/// turn around the first `m`. Strands `0..m` are the first family.
pub fn generalized_hopf(m: usize, n: usize) -> Result<BraidClosure> {
    if m + n == 0 {
        return Err(Error::domain("H_{m,n} needs at least one component"));
    }
    let total = m + n;
    let twist = |lo: usize, k: usize| -> Vec<i32> {
        // full twist on strands lo..lo+k, inverted
        BraidWord::full_twist(k).inverse().letters.iter().map(|g| g.signum() * (g.abs() + lo as i32)).collect()
    };
    let mut letters = BraidWord::full_twist(total).letters;
    if m > 1 {
        letters.extend(twist(0, m));
    }
    if n > 1 {
        letters.extend(twist(m, n));
    }
    if m == 0 || n == 0 {
        letters.clear();
    }
    braid_closure(&BraidWord::new(total, letters)?, false)
}

/// How the two strands of a tangle join its endpoints.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Pairing {
    /// `A₁ → A₃` and `A₂ → A₄`.
    Standard,
    /// `A₁ → A₄` and `A₂ → A₃`; only diagonal characters make sense.
    Crossed,
}

/// The three basic caps used to close a tangle.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Cap {
    Plus,
    Minus,
    Zero,
}

/// A four-ended tangle: crossings plus the edge labels at `A₁…A₄`.
/// Strands enter at `A₁`, `A₂` and leave at `A₃`, `A₄`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangleDiagram {
    pub crossings: Vec<[u32; 4]>,
    pub ends: [u32; 4],
    over_in: Vec<OverIn>,
    pairing: Pairing,
    /// Edge → strand: 0 for the strand entering at `A₁`, 1 for `A₂`, 2.. for closed components.
    strand: BTreeMap<u32, usize>,
    nstrands: usize,
}

impl TangleDiagram {
    pub fn new(crossings: Vec<[u32; 4]>, ends: [u32; 4], over_hint: Option<Vec<OverIn>>) -> Result<TangleDiagram> {
        let occ = occurrences(&crossings);
        for (k, &e) in ends.iter().enumerate() {
            let internal = occ.get(&e).map(|v| v.len()).unwrap_or(0);
            let boundary = ends.iter().filter(|&&f| f == e).count();
            if internal + boundary != 2 {
                return Err(Error::parse(format!("end A{} (edge {e}) must appear once inside the tangle", k + 1)));
            }
        }
        for (e, oc) in &occ {
            let b = ends.iter().filter(|&&f| f == *e).count();
            if oc.len() + b != 2 {
                return Err(Error::parse(format!("edge {e} must appear exactly twice")));
            }
        }
        let mut over: Vec<Option<OverIn>> = match over_hint {
            Some(h) => h.into_iter().map(Some).collect(),
            None => vec![None; crossings.len()],
        };
        // boundary edges: A1, A2 point inward, so their internal occurrence is incoming
        let mut fixed: BTreeMap<(usize, usize), bool> = BTreeMap::new();
        for (k, &e) in ends.iter().enumerate() {
            if let Some(oc) = occ.get(&e) {
                for &o in oc {
                    fixed.insert(o, k < 2);
                }
            }
        }
        loop {
            let mut changed = true;
            while changed {
                changed = false;
                for (&(ci, pos), &inward) in &fixed {
                    if (pos == 1 || pos == 3) && over[ci].is_none() {
                        over[ci] = Some(if inward { pos as u8 } else { 4 - pos as u8 });
                        changed = true;
                    }
                }
                if !propagate(&crossings, &occ, &mut over) {
                    return Err(Error::parse("orientation inconsistency in tangle"));
                }
            }
            let Some(ci) = over.iter().position(|o| o.is_none()) else { break };
            let (j, l) = (crossings[ci][1], crossings[ci][3]);
            over[ci] = Some(if j == l + 1 || (l > j + 1) { 3 } else { 1 });
        }
        let over_in: Vec<OverIn> = over.into_iter().map(|o| o.unwrap()).collect();
        for (&(ci, pos), &inward) in &fixed {
            let is_in = pos == 0 || pos == over_in[ci] as usize;
            if is_in != inward {
                return Err(Error::parse("tangle end orientation contradicts the crossing data"));
            }
        }
        let mut next: BTreeMap<u32, u32> = BTreeMap::new();
        for (ci, x) in crossings.iter().enumerate() {
            let oi = over_in[ci] as usize;
            next.insert(x[0], x[2]);
            next.insert(x[oi], x[4 - oi]);
        }
        let mut strand = BTreeMap::new();
        let mut exits = [0u32; 2];
        for s in 0..2 {
            let mut e = ends[s];
            loop {
                if strand.insert(e, s).is_some() {
                    return Err(Error::parse("tangle strand revisits an edge"));
                }
                if e == ends[2] || e == ends[3] {
                    exits[s] = e;
                    break;
                }
                e = *next.get(&e).ok_or_else(|| Error::parse("tangle strand does not reach an exit"))?;
            }
        }
        let pairing = if exits[0] == ends[2] && exits[1] == ends[3] {
            Pairing::Standard
        } else if exits[0] == ends[3] && exits[1] == ends[2] {
            Pairing::Crossed
        } else {
            return Err(Error::parse("tangle strands must leave through A3 and A4"));
        };
        let mut nstrands = 2;
        let all: BTreeSet<u32> = occ.keys().copied().collect();
        for &e in &all {
            if strand.contains_key(&e) {
                continue;
            }
            let mut f = e;
            while let std::collections::btree_map::Entry::Vacant(v) = strand.entry(f) {
                v.insert(nstrands);
                f = next[&f];
            }
            nstrands += 1;
        }
        Ok(TangleDiagram { crossings, ends, over_in, pairing, strand, nstrands })
    }

    /// PD-style text followed by an `ends: A1=<e> A2=<e> A3=<e> A4=<e>` line.
    pub fn parse(text: &str) -> Result<TangleDiagram> {
        let mut pd_part = String::new();
        let mut ends: [Option<u32>; 4] = [None; 4];
        for line in text.lines() {
            let l = line.split('#').next().unwrap_or("").trim();
            if let Some(rest) = l.strip_prefix("ends:") {
                for item in rest.split_whitespace() {
                    let (k, v) = item.split_once('=').ok_or_else(|| Error::parse(format!("bad end `{item}`")))?;
                    let idx: usize = k
                        .strip_prefix('A')
                        .and_then(|s| s.parse().ok())
                        .filter(|i| (1..=4).contains(i))
                        .ok_or_else(|| Error::parse(format!("bad end name `{k}`")))?;
                    ends[idx - 1] = Some(v.parse().map_err(|_| Error::parse(format!("bad end label `{v}`")))?);
                }
            } else {
                pd_part.push_str(l);
                pd_part.push(' ');
            }
        }
        let ends = [
            ends[0].ok_or_else(|| Error::parse("missing A1"))?,
            ends[1].ok_or_else(|| Error::parse("missing A2"))?,
            ends[2].ok_or_else(|| Error::parse("missing A3"))?,
            ends[3].ok_or_else(|| Error::parse("missing A4"))?,
        ];
        let mut crossings = Vec::new();
        for tok in pd_part.split(']') {
            let tok = tok.trim().trim_start_matches([',', ';']).trim();
            if tok.is_empty() {
                continue;
            }
            let inner = tok
                .strip_prefix("X[")
                .ok_or_else(|| Error::parse(format!("unexpected text `{tok}`")))?;
            let nums: std::result::Result<Vec<u32>, _> = inner.split(',').map(|s| s.trim().parse::<u32>()).collect();
            let nums = nums.map_err(|_| Error::parse(format!("bad crossing `{inner}`")))?;
            if nums.len() != 4 {
                return Err(Error::parse("a crossing needs 4 labels"));
            }
            crossings.push([nums[0], nums[1], nums[2], nums[3]]);
        }
        TangleDiagram::new(crossings, ends, None)
    }

    pub fn to_text(&self) -> String {
        let mut s: Vec<String> =
            self.crossings.iter().map(|x| format!("X[{},{},{},{}]", x[0], x[1], x[2], x[3])).collect();
        s.push(format!(
            "\nends: A1={} A2={} A3={} A4={}",
            self.ends[0], self.ends[1], self.ends[2], self.ends[3]
        ));
        s.join(" ")
    }

    pub fn pairing(&self) -> Pairing {
        self.pairing
    }

    pub fn over_in(&self) -> &[OverIn] {
        &self.over_in
    }

    pub fn crossing_sign(&self, ci: usize) -> i32 {
        if self.over_in[ci] == 3 {
            1
        } else {
            -1
        }
    }

    /// Strand index of an edge: 0 from `A₁`, 1 from `A₂`, then closed components.
    pub fn strand_of(&self, e: u32) -> usize {
        self.strand[&e]
    }

    pub fn num_strands(&self) -> usize {
        self.nstrands
    }

    /// `τ₊`: a single positive crossing.
    pub fn tau_plus() -> TangleDiagram {
        TangleDiagram::new(vec![[2, 3, 4, 1]], [1, 2, 3, 4], None).expect("basic tangle")
    }

    /// `τ₋`: a single negative crossing.
    pub fn tau_minus() -> TangleDiagram {
        TangleDiagram::new(vec![[1, 2, 3, 4]], [1, 2, 3, 4], None).expect("basic tangle")
    }

    /// `τ₀`: the oriented smoothing, `A₁ → A₄` and `A₂ → A₃`.
    pub fn tau_zero() -> TangleDiagram {
        TangleDiagram::new(vec![], [1, 2, 2, 1], None).expect("basic tangle")
    }

    /// Cuts out crossing `ci` of a link diagram. Returns the tangle and the sign of the
    /// removed crossing; capping with the cap of that sign gives the link back.
    pub fn from_link_crossing(pd: &PdCode, ci: usize) -> Result<(TangleDiagram, i32)> {
        if ci >= pd.crossings().len() {
            return Err(Error::domain(format!("crossing {ci} not found")));
        }
        let [a, b, c, d] = pd.crossings()[ci];
        let s = pd.crossing_sign(ci);
        // positive X[a,b,c,d] is the τ₊ cap X[e3,e2,e1,e4]; negative is the τ₋ cap X[e4,e3,e2,e1]
        let ends = if s > 0 { [c, b, a, d] } else { [d, c, b, a] };
        let cr: Vec<[u32; 4]> =
            pd.crossings().iter().enumerate().filter(|(i, _)| *i != ci).map(|(_, x)| *x).collect();
        let over: Vec<OverIn> =
            pd.over_in().iter().enumerate().filter(|(i, _)| *i != ci).map(|(_, o)| *o).collect();
        if pd.free_loops() > 0 {
            return Err(Error::domain("diagrams with free loops cannot be cut into tangles"));
        }
        Ok((TangleDiagram::new(cr, ends, Some(over))?, s))
    }

    /// `T ⊞ τ`: closes the tangle with a basic tangle whose strands are reversed.
    /// `τ₊` and `τ₋` caps produce a crossing of that sign; `τ₀` joins `A₄` to `A₁` and `A₃` to `A₂`.
    /// Also returns, for each link component, the tangle strand it contains.
    pub fn close(&self, cap: Cap) -> Result<(PdCode, Vec<usize>)> {
        let [e1, e2, e3, e4] = self.ends;
        let mut cr = self.crossings.clone();
        let mut over = self.over_in.clone();
        match cap {
            Cap::Plus => {
                cr.push([e3, e2, e1, e4]);
                over.push(3);
            }
            Cap::Minus => {
                cr.push([e4, e3, e2, e1]);
                over.push(1);
            }
            Cap::Zero => {
                let sub = |e: u32| {
                    if e == e4 {
                        e1
                    } else if e == e3 {
                        e2
                    } else {
                        e
                    }
                };
                for x in cr.iter_mut() {
                    for e in x.iter_mut() {
                        *e = sub(*e);
                    }
                }
            }
        }
        let loops_from_zero = if cap == Cap::Zero {
            // a strand with no crossings closes into a free loop
            let used: BTreeSet<u32> = cr.iter().flatten().copied().collect();
            let mut n = 0;
            if !used.contains(&e1) {
                n += 1;
            }
            if !used.contains(&e2) && e2 != e1 {
                n += 1;
            }
            n
        } else {
            0
        };
        let pd = PdCode::new(cr, Some(over), loops_from_zero)?;
        let mut strand_of_comp = vec![usize::MAX; pd.num_components()];
        for k in 0..pd.num_components() {
            if let Some(&e) = pd.component_edges(k).first() {
                let e = if cap == Cap::Zero && e == e1 { e1 } else { e };
                strand_of_comp[k] = self.strand.get(&e).copied().unwrap_or(0);
            }
        }
        // free loops from the zero cap carry strand 0 and/or 1
        let base = pd.num_components() - pd.free_loops();
        let mut free_strands = Vec::new();
        if cap == Cap::Zero {
            let used: BTreeSet<u32> = pd.crossings().iter().flatten().copied().collect();
            if !used.contains(&e1) {
                free_strands.push(0);
            }
            if !used.contains(&e2) && e2 != e1 {
                free_strands.push(1);
            }
        }
        for (i, s) in free_strands.into_iter().enumerate() {
            strand_of_comp[base + i] = s;
        }
        Ok((pd, strand_of_comp))
    }

    /// Arc structure of the tangle: edge → arc index, and the arc count.
    pub fn arcs(&self) -> (BTreeMap<u32, usize>, usize) {
        let mut labels: BTreeSet<u32> = self.crossings.iter().flatten().copied().collect();
        labels.extend(self.ends.iter().copied());
        let mut parent: BTreeMap<u32, u32> = labels.iter().map(|&e| (e, e)).collect();
        fn find(p: &mut BTreeMap<u32, u32>, mut e: u32) -> u32 {
            while p[&e] != e {
                e = p[&e];
            }
            e
        }
        for x in &self.crossings {
            let (a, b) = (find(&mut parent, x[1]), find(&mut parent, x[3]));
            if a != b {
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                parent.insert(hi, lo);
            }
        }
        let mut roots = BTreeMap::new();
        let mut out = BTreeMap::new();
        for &e in &labels {
            let r = find(&mut parent, e);
            let n = roots.len();
            out.insert(e, *roots.entry(r).or_insert(n));
        }
        let n = roots.len();
        (out, n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hopf_parses() {
        let pd = PdCode::parse("X[1,3,2,4] X[3,1,4,2]").unwrap();
        assert_eq!(pd.num_components(), 2);
        assert_eq!(pd.crossings().len(), 2);
        assert_eq!(pd.linking_matrix()[0][1], 1);
    }

    #[test]
    fn arc_used_once_is_rejected() {
        assert!(PdCode::parse("X[1,3,2,4] X[3,1,4,5]").is_err());
    }

    #[test]
    fn unknot_has_one_generator() {
        let pd = PdCode::parse("Loop[]").unwrap();
        let p = pd.wirtinger(&[0], 1).unwrap();
        assert_eq!(p.num_generators, 1);
        assert!(p.relators.is_empty());
        assert!(pd.longitude_word(0).unwrap().is_empty());
    }

    #[test]
    fn braid_closures() {
        let tref = braid_closure(&BraidWord::new(2, vec![1, 1, 1]).unwrap(), false).unwrap();
        assert!(tref.axis.is_none());
        assert_eq!(tref.pd.num_components(), 1);
        let hopf = braid_closure(&BraidWord::new(2, vec![1, 1]).unwrap(), false).unwrap();
        assert_eq!(hopf.pd.num_components(), 2);
        assert_eq!(hopf.pd.linking_matrix()[0][1], 1);
        let h = braid_closure(&BraidWord::new(1, vec![]).unwrap(), true).unwrap();
        assert_eq!(h.pd.num_components(), 2);
        let a = h.axis.unwrap();
        assert_eq!(h.pd.linking_matrix()[a][1 - a], 1);
        let c = braid_closure(&BraidWord::new(3, vec![1, 2, -1]).unwrap(), true).unwrap();
        let (l, a) = (c.pd, c.axis.unwrap());
        let total: i64 = (0..l.num_components()).filter(|&k| k != a).map(|k| l.linking_matrix()[a][k]).sum();
        assert_eq!(total, 3);
    }

    #[test]
    fn generalized_hopf_linking() {
        for m in 1..=3 {
            for n in 0..=3 {
                let h = generalized_hopf(m, n).unwrap();
                assert_eq!(h.pd.num_components(), m + n);
                let lk = h.pd.linking_matrix();
                for i in 0..m + n {
                    for j in 0..m + n {
                        let (ci, cj) = (h.strand_components[i], h.strand_components[j]);
                        let expect = if i != j && ((i < m) != (j < m)) { 1 } else { 0 };
                        if i != j {
                            assert_eq!(lk[ci][cj], expect, "H({m},{n}) strands {i},{j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn basic_tangle_closures() {
        let plus = TangleDiagram::tau_plus();
        let minus = TangleDiagram::tau_minus();
        assert_eq!(plus.crossing_sign(0), 1);
        assert_eq!(minus.crossing_sign(0), -1);
        assert_eq!(plus.pairing(), Pairing::Standard);
        assert_eq!(TangleDiagram::tau_zero().pairing(), Pairing::Crossed);
        let (u, _) = plus.close(Cap::Zero).unwrap();
        assert_eq!(u.num_components(), 1);
        let (triv, _) = plus.close(Cap::Minus).unwrap();
        assert_eq!(triv.num_components(), 2);
        assert_eq!(triv.linking_matrix()[0][1], 0);
        let (hopf, _) = minus.close(Cap::Minus).unwrap();
        assert_eq!(hopf.num_components(), 2);
        assert_eq!(hopf.linking_matrix()[0][1].abs(), 1);
    }

    #[test]
    fn excise_and_recap_restores_the_link() {
        let pd = PdCode::parse("X[6,1,7,2] X[10,7,5,8] X[4,5,1,6] X[2,10,3,9] X[8,4,9,3]").unwrap();
        for ci in 0..5 {
            let (t, s) = TangleDiagram::from_link_crossing(&pd, ci).unwrap();
            let cap = if s > 0 { Cap::Plus } else { Cap::Minus };
            let (back, _) = t.close(cap).unwrap();
            assert_eq!(back.linking_matrix(), pd.linking_matrix());
        }
    }
}
