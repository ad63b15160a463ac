use linkslope::burau::beta_r;
use linkslope::charspec::Character;
use linkslope::diagram::{BraidWord, PdCode};
use linkslope::laurent::MultiLaurent;
use linkslope::presentation::{phi_minus_one, word_differential, word_phi_minus_one, Word};
use linkslope::slope::{link_slope, ColoredLink, SlopeOptions, SlopeValue};
use linkslope::splice::{delta_eta, delta_sigma, sgn_from_vectors, sgn_triple, slope_of_vector, ExtReal};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

fn laurent(nvars: usize) -> impl Strategy<Value = MultiLaurent> {
    prop::collection::vec((-4i64..=4, prop::collection::vec(-3i32..=3, nvars)), 0..5).prop_map(move |terms| {
        MultiLaurent::from_terms(nvars, terms.into_iter().map(|(c, e)| (BigRational::from_integer(BigInt::from(c)), e)))
    })
}

fn braid() -> impl Strategy<Value = BraidWord> {
    (2usize..=5).prop_flat_map(|n| {
        let letter = (1..n as i32).prop_flat_map(|g| prop_oneof![Just(g), Just(-g)]);
        prop::collection::vec(letter, 1..7).prop_map(move |l| BraidWord::new(n, l).unwrap())
    })
}

fn trimmed(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws(a in laurent(2), b in laurent(2), c in laurent(2)) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a - &a, MultiLaurent::zero(2));
    }

    #[test]
    fn involution_is_an_involutive_ring_map(a in laurent(2), b in laurent(2)) {
        prop_assert_eq!(a.involute().involute(), a.clone());
        prop_assert_eq!((&a * &b).involute(), &a.involute() * &b.involute());
        prop_assert_eq!((&a + &b).involute(), &a.involute() + &b.involute());
    }

    #[test]
    fn gcd_divides_both(a in laurent(2), b in laurent(2), c in laurent(2)) {
        prop_assume!(!c.is_zero());
        let (x, y) = (&a * &c, &b * &c);
        let g = x.gcd(&y).value();
        if !g.is_zero() {
            prop_assert!(x.div_exact(&g).is_some());
            prop_assert!(y.div_exact(&g).is_some());
            prop_assert!(g.div_exact(&c.unit_normalize().value()).is_some());
        }
    }

    #[test]
    fn fox_fundamental_identity(letters in prop::collection::vec((0usize..3, prop_oneof![Just(1i32), Just(-1)]), 0..10)) {
        let phi = vec![vec![1, 0], vec![0, 1], vec![1, 1]];
        let w = Word::new(letters);
        let d = word_differential(&w, &phi, 3, 2);
        let cols = phi_minus_one(&phi, 2);
        let mut sum = MultiLaurent::zero(2);
        for (a, b) in d.iter().zip(&cols) {
            sum = &sum + &(a * b);
        }
        prop_assert_eq!(sum, word_phi_minus_one(&w, &phi, 2));
    }

    #[test]
    fn lkg_power_and_twist(beta in braid(), r_seed in 0usize..100, p in prop_oneof![Just(-2i32), Just(-1), Just(2), Just(3)]) {
        let r = 1 + r_seed % (beta.n - 1);
        let base = beta_r(&beta, r).unwrap();
        let power = beta_r(&beta.pow(p), r).unwrap();
        let twisted = beta_r(&beta.concat(&BraidWord::full_twist(beta.n)), r).unwrap();
        match (&base.coefficients, &base.value) {
            (Some(c), _) => {
                let scaled: Vec<BigRational> = c.iter().map(|x| x * BigRational::from_integer(p.into())).collect();
                prop_assert_eq!(trimmed(power.coefficients.clone().unwrap()), trimmed(scaled));
                let mut shifted = c.clone();
                if shifted.is_empty() {
                    shifted.push(BigRational::zero());
                }
                shifted[0] -= BigRational::from_integer(1.into());
                prop_assert_eq!(trimmed(twisted.coefficients.clone().unwrap()), trimmed(shifted));
            }
            (None, SlopeValue::Infinity) => {
                prop_assert_eq!(power.value, SlopeValue::Infinity);
                prop_assert_eq!(twisted.value, SlopeValue::Infinity);
            }
            _ => {}
        }
    }

    #[test]
    fn splice_corrections(a in ext_real(), b in ext_real()) {
        let ds = delta_sigma(&a, &b);
        let de = delta_eta(&a, &b);
        prop_assert_eq!(ds, delta_sigma(&b, &a));
        prop_assert!((-2..=2).contains(&ds));
        prop_assert!((-1..=2).contains(&de));
        prop_assert_eq!((de - ds.abs()).abs(), 1);
    }

    #[test]
    fn sgn_triple_skew(a in ext_real(), b in ext_real(), c in ext_real()) {
        let s = sgn_triple(&a, &b, &c);
        prop_assert_eq!(sgn_triple(&b, &a, &c), -s);
        prop_assert_eq!(sgn_triple(&b, &c, &a), s);
        prop_assert_eq!(s == 0, a == b || b == c || c == a);
    }

    #[test]
    fn wall_sign_matches_slopes(v in prop::collection::vec((-5i32..=5, -5i32..=5, 0.2f64..3.0, 0.0f64..6.3), 3)) {
        let vecs: Vec<[Complex64; 2]> = v
            .iter()
            .map(|&(m, l, r, th)| {
                let s = Complex64::from_polar(r, th);
                [s * m as f64, s * l as f64]
            })
            .collect();
        prop_assume!(vecs.iter().all(|x| x[0].norm() + x[1].norm() > 0.0));
        let k: Vec<ExtReal> = vecs.iter().map(|&x| slope_of_vector(x).unwrap()).collect();
        prop_assert_eq!(sgn_from_vectors(vecs[0], vecs[1], vecs[2]).unwrap(), sgn_triple(&k[0], &k[1], &k[2]));
    }
}

fn ext_real() -> impl Strategy<Value = ExtReal> {
    prop_oneof![
        Just(ExtReal::Infinity),
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| ExtReal::ratio(n, d)),
        (-5.0f64..5.0).prop_map(ExtReal::Real),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn whitehead_slope_is_real_and_symmetric(theta in 0.05f64..6.2) {
        let pd = PdCode::parse("X[6,1,7,2] X[10,7,5,8] X[4,5,1,6] X[2,10,3,9] X[8,4,9,3]").unwrap();
        let link = ColoredLink::new(pd, 0, None).unwrap();
        let p = link.problem().unwrap();
        let w = Character::parse(&format!("c:{},{}", theta.cos(), theta.sin())).unwrap();
        let opts = SlopeOptions::default();
        let a = link_slope(&p, &w, &opts).unwrap().slope;
        let b = link_slope(&p, &w.inverse(), &opts).unwrap().slope;
        prop_assert!(a.approx_eq(&b, 1e-9));
        let SlopeValue::Finite(z) = a else { panic!("finite expected") };
        prop_assert!(z.im.abs() < 1e-9);
        prop_assert!((z.re - (2.0 - 2.0 * theta.cos())).abs() < 1e-9);
    }
}
