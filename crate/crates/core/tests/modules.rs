use htp_core::config::{Workbench, WorkbenchConfig};
use htp_core::divample::eds_divample_create;
use htp_core::error::Error;
use htp_core::field::NumberField;
use htp_core::htp::{find_witness, verify_witness, Witness};
use htp_core::ideals::{factor_element, factor_prime};
use htp_core::lemmas::{divides, divisibility_multiplier, stability_multiplier};
use htp_core::torsion::torsion_order;
use num_bigint::BigInt;
use num_traits::Signed;
use proptest::prelude::*;

#[test]
fn field_construction_rejects_bad_polynomials() {
    assert!(matches!(NumberField::from_i64("q", &[-1, 0, 1], 1), Err(Error::Reducible(_))));
    assert!(matches!(NumberField::from_i64("q", &[1, 0, 2], 1), Err(Error::NotMonic)));
    let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
    assert_eq!(k.discriminant(), &BigInt::from(-4));
    assert_eq!(k.signature(), (0, 1));
}

#[test]
fn splitting_of_small_primes_in_gaussian_integers() {
    let k = NumberField::from_i64("gauss", &[1, 0, 1], 1).unwrap();
    let shape = |p| {
        let mut v: Vec<(u32, u32)> = factor_prime(&k, p).unwrap().iter().map(|q| (q.e, q.f)).collect();
        v.sort();
        v
    };
    assert_eq!(shape(2), vec![(2, 1)]);
    assert_eq!(shape(3), vec![(1, 2)]);
    assert_eq!(shape(5), vec![(1, 1), (1, 1)]);
    assert_eq!(shape(13), vec![(1, 1), (1, 1)]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ideal_norm_matches_element_norm(a in -40i64..40, b in -40i64..40, d in 1i64..12) {
        prop_assume!(a != 0 || b != 0);
        let k = NumberField::from_i64("sqrtm5", &[5, 0, 1], 2).unwrap();
        let x = k.from_i64_coords(&[a, b]).div_int(&BigInt::from(d));
        let f = factor_element(&x).unwrap();
        prop_assert_eq!(f.norm(), x.norm().abs());
    }
}

#[test]
fn eds_set_is_integral_with_strong_divisibility() {
    let wb = Workbench::builtin();
    let e = wb.curve("37a").unwrap();
    let q = e.field().clone();
    let r0 = stability_multiplier(e).unwrap().r0;
    let r = divisibility_multiplier(e, r0, 20).unwrap().r;
    let t = torsion_order(e, 50).unwrap();
    let set = eds_divample_create(e, &q, t, 1, r, None).unwrap();
    let s = set.stride;
    let elems: Vec<_> = (1..=6).map(|i| set.element_at(i * s).unwrap()).collect();
    for (i, a) in elems.iter().enumerate() {
        assert!(a.as_integer().is_some());
        for (j, b) in elems.iter().enumerate() {
            if (j + 1) % (i + 1) == 0 {
                assert!(divides(a, b).unwrap(), "a_{} does not divide a_{}", i + 1, j + 1);
            }
        }
    }
    assert!(set.element_at(s + 1).is_err());
}

#[test]
fn tampered_witness_is_rejected() {
    let wb = Workbench::builtin();
    let setup = wb.htp_setup("rationals").unwrap();
    let xi = setup.field().from_int(2);
    let w = find_witness(&setup, &xi).unwrap().witness.expect("witness for 2");
    let text = w.to_json().to_string();
    let back = Witness::from_json(setup.field(), &serde_json::from_str(&text).unwrap()).unwrap();
    assert!(verify_witness(&setup, &back).unwrap().verdict);

    let wrong_n = Witness { n: w.n + w.m, trace: None, ..w.clone() };
    assert!(!verify_witness(&setup, &wrong_n).unwrap().verdict);
    let wrong_m = Witness { m: w.m / 2, n: w.n / 2, trace: None, ..w.clone() };
    assert!(!verify_witness(&setup, &wrong_m).unwrap().verdict);
}

#[test]
fn config_errors_are_reported() {
    assert!(matches!(WorkbenchConfig::parse("{"), Err(Error::ConfigParse(_))));
    let bad = r#"{"fields": [], "curves": [{"label": "c", "field": "nowhere", "a": [0,0,1,-1,0], "generator": [0,0]}]}"#;
    assert!(matches!(Workbench::new(WorkbenchConfig::parse(bad).unwrap()), Err(Error::ConfigParse(_))));
}
