use linkslope::charspec::{Character, RationalFunction};
use linkslope::diagram::PdCode;
use linkslope::laurent::MultiLaurent;
use linkslope::slope::{
    link_slope, patched_slope, symbolic_slope, ColoredLink, Parametrization, SlopeOptions, SlopeValue, SymbolicSlope,
};
use num_complex::Complex64;
use std::time::Instant;

fn corpus(name: &str) -> PdCode {
    let path = format!("{}/corpus/{name}.pd", env!("CARGO_MANIFEST_DIR"));
    PdCode::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn poly(s: &str) -> MultiLaurent {
    MultiLaurent::parse(s, 3).unwrap()
}

#[test]
fn l11_symbolic_slopes() {
    let expected = [
        // −(ab² + a² − 4ab + b² + a)/(ab)
        ("L11n353", poly("-t2 - t1*t2^-1 + 4 - t1^-1*t2 - t2^-1")),
        // −(a − 1)(ab² − 1)/(ab)
        ("L11n384", &(&poly("-1") * &(&poly("t1 - 1") * &poly("t1*t2^2 - 1"))) * &poly("t1^-1*t2^-1")),
        // −(ab − 1)²/(ab)
        ("L11n396", &(&poly("-1") * &poly("t1*t2 - 1").pow(2)) * &poly("t1^-1*t2^-1")),
    ];
    for (name, want) in expected {
        let start = Instant::now();
        let link = ColoredLink::new(corpus(name), 1, Some(vec![1, 0, 2])).unwrap();
        assert_eq!(link.linking_vector(), vec![0, 0]);
        let s = symbolic_slope(&link.problem().unwrap(), None, 1).unwrap();
        assert!(start.elapsed().as_secs_f64() < 10.0);
        assert_eq!(s, SymbolicSlope::Function(RationalFunction::from_poly(want)), "{name}");
    }
}

#[test]
fn l10a39_sixth_root_is_infinite() {
    let link = ColoredLink::new(corpus("L10a39"), 0, None).unwrap();
    let p = link.problem().unwrap();
    let out = link_slope(&p, &Character::parse("root:1/6").unwrap(), &SlopeOptions::default()).unwrap();
    assert_eq!(out.slope, SlopeValue::Infinity);
    // the generic formula −(1 − ω)(1 − ω⁻¹) would predict −1 here
    let s = symbolic_slope(&p, None, 3).unwrap();
    assert_eq!(s, SymbolicSlope::Function(RationalFunction::from_poly(MultiLaurent::parse("t1 - 2 + t1^-1", 2).unwrap())));
}

// L10n85 components: C1 = 2, C2 = 1, C3 = 0 in the corpus diagram.
fn l10n85(k: usize, colors: Vec<usize>) -> ColoredLink {
    ColoredLink::new(corpus("L10n85"), k, Some(colors)).unwrap()
}

#[test]
fn l10n85_linking_numbers() {
    let lk = corpus("L10n85").linking_matrix();
    assert_eq!((lk[2][1], lk[2][0], lk[1][0]), (1, 0, 2));
}

#[test]
fn l10n85_case_one_patches_to_zero() {
    // K = C1, L = C2 ∪ C3 with ω = (1, ω₃)
    let link = l10n85(2, vec![2, 1, 0]);
    for spec in ["1,root:1/3", "1,root:2/5", "1,c:0.6,0.8"] {
        let out = patched_slope(&link, &Character::parse(spec).unwrap(), &SlopeOptions::default()).unwrap();
        assert_eq!(out.patched_components, vec![1]);
        assert!(out.slope.approx_eq(&SlopeValue::Finite(Complex64::new(0.0, 0.0)), 1e-9), "{spec}: {}", out.slope);
    }
}

#[test]
fn l10n85_case_two_family() {
    // K = C2, characters (u², u⁻¹) on (C1, C3)
    let link = l10n85(1, vec![2, 0, 1]);
    assert_eq!(link.linking_vector(), vec![1, 2]);
    let p = link.problem().unwrap();
    let fam = Parametrization::parse("2;-1").unwrap();
    assert_eq!(symbolic_slope(&p, Some(&fam), 5).unwrap(), SymbolicSlope::Infinity);
    let opts = SlopeOptions::default();
    for u in ["root:1/6", "root:5/6"] {
        let w = fam.character_at(&Character::parse(u).unwrap().coords);
        let out = link_slope(&p, &w, &opts).unwrap();
        assert_eq!(out.slope, SlopeValue::Finite(Complex64::new(-2.0, 0.0)), "u = {u}");
    }
    for u in ["root:1/5", "root:2/7", "c:0.28,0.96"] {
        let w = fam.character_at(&Character::parse(u).unwrap().coords);
        assert_eq!(link_slope(&p, &w, &opts).unwrap().slope, SlopeValue::Infinity, "u = {u}");
    }
    let at_one = patched_slope(&link, &Character::parse("1,1").unwrap(), &opts).unwrap();
    assert!(at_one.patched_to_empty);
    assert_eq!(at_one.slope, SlopeValue::Finite(Complex64::new(0.0, 0.0)));
}

#[test]
fn l10n85_case_three() {
    // K = C3, characters (ω, ±1) on (C1, C2)
    let link = l10n85(0, vec![0, 2, 1]);
    let p = link.problem().unwrap();
    let opts = SlopeOptions::default();
    for spec in ["root:1/3", "root:1/4", "root:3/7", "c:0.6,0.8"] {
        let w = Character::parse(&format!("{spec},-1")).unwrap();
        let z = w.coords[0].to_complex();
        let want = 2.0 * (z - 3.0 + z.inv());
        let out = link_slope(&p, &w, &opts).unwrap();
        assert!(out.slope.approx_eq(&SlopeValue::Finite(want), 1e-9), "{spec}: {}", out.slope);
        let w1 = Character::parse(&format!("{spec},1")).unwrap();
        let out = patched_slope(&link, &w1, &opts).unwrap();
        assert!(out.slope.approx_eq(&SlopeValue::Finite(Complex64::new(0.0, 0.0)), 1e-9));
    }
}
