use linkslope::burau::{beta_r, beta_r_with_alpha};
use linkslope::charspec::Character;
use linkslope::diagram::{braid_closure, BraidWord};
use linkslope::slope::{link_slope, ColoredLink, SlopeOptions, SlopeValue};
use num_bigint::BigInt;
use num_rational::BigRational;

fn axis_slope(beta: &BraidWord, r: usize) -> SlopeValue {
    let c = braid_closure(beta, true).unwrap();
    let axis = c.axis.unwrap();
    let colors: Vec<usize> = (0..c.pd.num_components()).map(|k| if k == axis { 0 } else { 1 }).collect();
    let link = ColoredLink::new(c.pd, axis, Some(colors)).unwrap();
    assert_eq!(link.linking_vector(), vec![beta.n as i64]);
    let w = Character::parse(&format!("root:{r}/{}", beta.n)).unwrap();
    link_slope(&link.problem().unwrap(), &w, &SlopeOptions::default()).unwrap().slope
}

#[test]
fn burau_matches_axis_closure() {
    let words: &[(usize, &[i32])] = &[
        (2, &[1]),
        (2, &[1, 1, 1]),
        (3, &[1, 2]),
        (3, &[-2, 1]),
        (3, &[1, 1, -2, 1]),
        (4, &[1, 2, 3, -1, 2]),
        (5, &[1, 2, 3, 4, 1, 2]),
    ];
    for &(n, l) in words {
        let b = BraidWord::new(n, l.to_vec()).unwrap();
        for r in 1..n {
            let beta = beta_r(&b, r).unwrap().value;
            let kappa = axis_slope(&b, r);
            assert!(kappa.approx_eq(&beta.recip(), 1e-9), "{l:?} r={r}: β = {beta}, slope = {kappa}");
        }
    }
}

#[test]
fn coxeter_power_six_letter_value() {
    // σ₁σ₂σ₃σ₄σ₁σ₂ in B₅; both pipelines give −3/5 − c/5 with c = ξ_r + ξ_r⁻¹
    let b = BraidWord::new(5, vec![1, 2, 3, 4, 1, 2]).unwrap();
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    for r in 1..5 {
        let o = beta_r(&b, r).unwrap();
        assert_eq!(o.coefficients.unwrap(), vec![q(-3, 5), q(-1, 5)]);
    }
}

#[test]
fn alpha_choice_does_not_matter() {
    let b = BraidWord::new(3, vec![1, -2, 1, 1, 2, -1, 2]).unwrap();
    for r in 1..3 {
        let a = beta_r(&b, r).unwrap().value;
        let c = beta_r_with_alpha(&b, r, &[1, 2]).unwrap().value;
        assert!(a.approx_eq(&c, 1e-12), "r={r}: {a} vs {c}");
    }
}
