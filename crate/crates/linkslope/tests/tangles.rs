use linkslope::alexander::conway_potential;
use linkslope::charspec::Character;
use linkslope::diagram::{Cap, PdCode, TangleDiagram};
use linkslope::slope::SlopeValue;
use linkslope::tangle::{skein_signature_jump, strand_variables, tangle_slope, RatioStatus};
use num_complex::Complex64;

fn corpus(name: &str) -> PdCode {
    let path = format!("{}/corpus/{name}.pd", env!("CARGO_MANIFEST_DIR"));
    PdCode::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn tangle_character(t: &TangleDiagram, vals: &[f64]) -> Character {
    let (_, n) = strand_variables(t);
    let mut coords: Vec<String> = (0..n).map(|i| format!("c:{},{}", vals[i % vals.len()].cos(), vals[i % vals.len()].sin())).collect();
    if t.pairing() == linkslope::diagram::Pairing::Crossed {
        coords[1] = coords[0].clone();
    }
    Character::parse(&coords.join(", ")).unwrap()
}

#[test]
fn excised_slopes_are_real_and_symmetric() {
    for name in ["trefoil", "figure_eight", "whitehead", "L7n1", "L10a39"] {
        let pd = corpus(name);
        for ci in 0..pd.crossings().len() {
            let (t, _) = TangleDiagram::from_link_crossing(&pd, ci).unwrap();
            let w = tangle_character(&t, &[1.1, 2.3, 0.7, 2.9]);
            let k = tangle_slope(&t, &w).unwrap().slope;
            let kinv = tangle_slope(&t, &w.inverse()).unwrap().slope;
            assert!(k.approx_eq(&kinv, 1e-8), "{name} crossing {ci}: {k} vs {kinv}");
            if let SlopeValue::Finite(z) = k {
                assert!(z.im.abs() < 1e-8 * z.norm().max(1.0), "{name} crossing {ci}: {z}");
            }
        }
    }
}

#[test]
fn slope_magnitude_matches_closure_potentials() {
    for name in ["trefoil", "figure_eight", "whitehead", "L10a39"] {
        let pd = corpus(name);
        for ci in 0..pd.crossings().len() {
            let (t, _) = TangleDiagram::from_link_crossing(&pd, ci).unwrap();
            let (vars, nvars) = strand_variables(&t);
            let angles = [0.9, 2.1, 1.7, 2.6];
            let w = tangle_character(&t, &angles);
            let xi: Vec<Complex64> = w.sqrt().coords.iter().map(|c| c.to_complex()).collect();
            let pot = |cap| {
                let (l, strands) = t.close(cap).unwrap();
                let cols: Vec<usize> = strands.iter().map(|&s| vars[s]).collect();
                let used: std::collections::BTreeSet<usize> = cols.iter().copied().collect();
                let remap: Vec<usize> = (0..nvars).map(|v| used.iter().position(|&u| u == v).unwrap_or(0)).collect();
                let cols: Vec<usize> = cols.iter().map(|&c| remap[c]).collect();
                let p = conway_potential(&l, &cols, used.len()).unwrap();
                let point: Vec<Complex64> = used.iter().map(|&v| xi[v]).collect();
                p.eval_complex(&point).unwrap()
            };
            let (p, m) = (pot(Cap::Plus), pot(Cap::Minus));
            let bump = |x: Complex64| x - x.inv();
            let k = tangle_slope(&t, &w).unwrap().slope;
            match k {
                SlopeValue::Finite(z) => {
                    let want = (bump(xi[1]) / bump(xi[0]) * m / p).norm();
                    assert!((z.norm() - want).abs() < 1e-8 * want.max(1.0), "{name} {ci}: {} vs {want}", z.norm());
                }
                SlopeValue::Infinity => assert!(p.norm() < 1e-9),
                SlopeValue::Undefined(_) => assert!(m.norm() < 1e-9 && p.norm() < 1e-9),
            }
        }
    }
}

#[test]
fn signature_jumps_agree_with_conway_ratios() {
    let cases: [(&str, Vec<usize>, usize); 5] = [
        ("trefoil", vec![0], 1),
        ("figure_eight", vec![0], 1),
        ("L10a39", vec![0, 0], 1),
        ("whitehead", vec![0, 1], 2),
        ("L10a39", vec![0, 1], 2),
    ];
    for (name, colors, ncolors) in cases {
        let pd = corpus(name);
        for ci in 0..pd.crossings().len() {
            for spec in ["root:1/3", "root:2/5", "c:0.28,0.96", "root:5/12"] {
                let spec = vec![spec; ncolors].join(", ");
                let w = Character::parse(&spec).unwrap();
                let r = skein_signature_jump(&pd, &colors, ncolors, ci, &w).unwrap();
                assert!(r.consistent, "{name} crossing {ci} at {spec}: {r:?}");
                if r.ratio_status != RatioStatus::MixedColors {
                    assert_eq!(r.skein_identity, Some(true));
                }
            }
        }
    }
}

#[test]
fn kink_crossing_excises_to_the_smoothing() {
    let pd = PdCode::parse("X[1,2,2,1]").unwrap();
    let (t, _) = TangleDiagram::from_link_crossing(&pd, 0).unwrap();
    assert_eq!(t.pairing(), linkslope::diagram::Pairing::Crossed);
    assert!(t.crossings.is_empty());
    // both closures are unknots, so the ratio is 1, as is the slope of the smoothing tangle
    let r = skein_signature_jump(&pd, &[0], 1, 0, &Character::parse("root:1/3").unwrap()).unwrap();
    assert!(r.kappa.approx_eq(&SlopeValue::Finite(Complex64::new(1.0, 0.0)), 1e-12));
    assert_eq!((r.sg_kappa, r.sg_ratio), (Some(1), Some(1)));
    assert!(r.consistent);
}
