use std::collections::BTreeSet;

use linkslope::alexander::{conway_potential, order_polynomial, TorresOracle, TorresValue};
use linkslope::charspec::Character;
use linkslope::diagram::PdCode;
use linkslope::laurent::MultiLaurent;
use linkslope::slope::{link_slope, ColoredLink, SlopeOptions, SlopeValue};

fn corpus(name: &str) -> PdCode {
    let path = format!("{}/corpus/{name}.pd", env!("CARGO_MANIFEST_DIR"));
    PdCode::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn same_up_to_sign(a: &MultiLaurent, b: &MultiLaurent) -> bool {
    a == b || *a == -b.clone()
}

fn chars(specs: &[&str]) -> Vec<Character> {
    specs.iter().map(|s| Character::parse(s).unwrap()).collect()
}

#[test]
fn l10a39_potentials() {
    let pd = corpus("L10a39");
    let p = |s: &str| MultiLaurent::parse(s, 2).unwrap();
    let knl = conway_potential(&pd, &[0, 1], 2).unwrap();
    let want = &(&p("t - t^-1") * &p("t1 - t1^-1")) * &p("t1^2 - 1 + t1^-2").pow(2);
    assert!(same_up_to_sign(&knl.numer, &want), "{}", knl.numer);
    let oracle = TorresOracle::new(&ColoredLink::new(pd, 0, None).unwrap()).unwrap();
    let l = oracle.sublink_potential();
    assert!(l.over_t_minus_inverse);
    assert!(same_up_to_sign(&l.numer, &p("t1^2 - 1 + t1^-2").pow(2)));
}

#[test]
fn torres_agrees_with_kernel_off_the_bad_locus() {
    let opts = SlopeOptions::default();
    for (name, k) in [("whitehead", 0), ("L10a39", 0), ("L7n1", 0), ("L7n1", 1)] {
        let link = ColoredLink::new(corpus(name), k, None).unwrap();
        let mut oracle = TorresOracle::new(&link).unwrap();
        oracle.calibrate(&link, &chars(&["root:1/5", "root:2/7", "-1"]), &opts).unwrap();
        let problem = link.problem().unwrap();
        for w in chars(&["root:1/3", "root:3/8", "root:5/12", "c:-0.28,0.96", "-1"]) {
            if !w.is_admissible(&link.linking_vector()).unwrap() {
                continue;
            }
            let kernel = link_slope(&problem, &w, &opts).unwrap().slope;
            match oracle.slope(&w, opts.max_conductor).unwrap() {
                TorresValue::Value(v) => assert!(v.approx_eq(&kernel, 1e-8), "{name} at {}: {v} vs {kernel}", w.to_spec()),
                TorresValue::Inconclusive => {}
            }
        }
    }
}

#[test]
fn torres_is_inconclusive_where_the_kernel_is_infinite() {
    let link = ColoredLink::new(corpus("L10a39"), 0, None).unwrap();
    let mut oracle = TorresOracle::new(&link).unwrap();
    let opts = SlopeOptions::default();
    oracle.calibrate(&link, &chars(&["root:1/5"]), &opts).unwrap();
    let w = Character::parse("root:1/6").unwrap();
    assert_eq!(oracle.slope(&w, opts.max_conductor).unwrap(), TorresValue::Inconclusive);
    assert_eq!(link_slope(&link.problem().unwrap(), &w, &opts).unwrap().slope, SlopeValue::Infinity);
}

#[test]
fn l11n396_sublink_orders() {
    let pd = corpus("L11n396");
    let drop: BTreeSet<usize> = [1].into_iter().collect();
    let (l, _) = pd.delete_components(&drop).unwrap();
    let pres = l.wirtinger(&[0, 1], 2).unwrap();
    assert!(order_polynomial(&pres, 0).unwrap().value.is_zero());
    assert!(order_polynomial(&pres, 1).unwrap().value.is_one());
}

#[test]
fn sublink_content_enters_the_torres_ratio() {
    // ∇ of the sublink has content 2 here; dropping it doubles the ratio
    let opts = SlopeOptions::default();
    let link = ColoredLink::new(corpus("L11n353"), 0, None).unwrap();
    let mut oracle = TorresOracle::new(&link).unwrap();
    oracle.calibrate(&link, &chars(&["root:1/5,root:2/5"]), &opts).unwrap();
    let problem = link.problem().unwrap();
    for w in chars(&["root:1/2,root:1/2", "root:1/3,root:1/4", "c:0.6,0.8,c:0.28,0.96"]) {
        let kernel = link_slope(&problem, &w, &opts).unwrap().slope;
        let TorresValue::Value(v) = oracle.slope(&w, opts.max_conductor).unwrap() else { panic!("inconclusive") };
        assert!(v.approx_eq(&kernel, 1e-9), "{}: {v} vs {kernel}", w.to_spec());
    }
}
