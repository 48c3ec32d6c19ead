use htp_core::config::Workbench;
use htp_core::curve::{Curve, Point};
use htp_core::field::FieldElement;
use htp_core::htp::dl_bound;
use htp_core::lemmas::{divides, ec4_divisibility, wd, wn};
use proptest::prelude::*;
use std::sync::OnceLock;

fn wb() -> &'static Workbench {
    static WB: OnceLock<Workbench> = OnceLock::new();
    WB.get_or_init(Workbench::builtin)
}

fn gen_point(e: &Curve) -> Point {
    e.multiple(1)
}

fn affine(p: &Point) -> (FieldElement, FieldElement) {
    (p.x().unwrap().clone(), p.y().unwrap().clone())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn group_law_commutes_and_associates(a in -9i64..9, b in -9i64..9, c in -9i64..9) {
        let e = wb().curve("37a").unwrap();
        let g = gen_point(e);
        let (pa, pb, pc) = (e.mul(&g, a), e.mul(&g, b), e.mul(&g, c));
        prop_assert_eq!(e.add(&pa, &pb), e.add(&pb, &pa));
        prop_assert_eq!(e.add(&e.add(&pa, &pb), &pc), e.add(&pa, &e.add(&pb, &pc)));
        prop_assert!(e.contains(&e.add(&pa, &pb)));
    }

    #[test]
    fn ladder_matches_group_law(n in -40i64..40) {
        for label in ["37a", "37a-gauss"] {
            let e = wb().curve(label).unwrap();
            prop_assert_eq!(e.multiple(n), e.mul(&gen_point(e), n));
        }
    }

    // 37a has trivial torsion, so multiples of the generator are distinct.
    #[test]
    fn multiples_of_a_non_torsion_point_are_distinct(n in -25i64..25, m in -25i64..25) {
        let e = wb().curve("37a").unwrap();
        prop_assert_eq!(e.multiple(n) == e.multiple(m), n == m);
    }

    #[test]
    fn archimedean_bound_is_monotone_in_u(a in -6i64..6, b in -6i64..6, u in 1i64..400, k in 2i64..5) {
        let q = wb().field("gauss").unwrap();
        let xi = q.from_i64_coords(&[a, b]);
        let u1 = q.from_int(u);
        let u2 = q.from_int(u * k);
        if dl_bound(&xi, &u1, 1, 2, 2048).unwrap() {
            prop_assert!(dl_bound(&xi, &u2, 1, 2, 2048).unwrap());
        }
        if !dl_bound(&xi, &u2, 1, 2, 2048).unwrap() {
            prop_assert!(!dl_bound(&xi, &u1, 1, 2, 2048).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // The rational shortcut inside ec4_divisibility against the ideal-theoretic
    // definition wd(x_m) | wn(zeta) computed in Z[i]. y_2 = 0 on 37a, so m starts at 3.
    #[test]
    fn ec4_shortcut_matches_ideal_computation(m in 3i64..6, q in 1i64..3, ca in -4i64..4, cb in -3i64..3) {
        let e = wb().curve("37a-gauss").unwrap();
        let k = e.field();
        let (xm, ym) = affine(&e.multiple(m));
        let (xn, yn) = affine(&e.multiple(m * q));
        let c = k.from_i64_coords(&[ca, cb]);
        let (zero, holds) = ec4_divisibility(&xm, &ym, &xn, &yn, &c).unwrap();
        let zeta = &(&(&xn * &ym) * &(&yn * &xm).inv().unwrap()) - &c;
        prop_assert_eq!(zero, zeta.is_zero());
        if !zeta.is_zero() {
            let oracle = divides(&wd(&xm).unwrap(), &wn(&zeta).unwrap()).unwrap();
            prop_assert_eq!(holds, oracle);
        }
    }
}
