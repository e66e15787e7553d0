use proptest::prelude::*;

use semitoric::cartography::{act_shear, polygon_representative};
use semitoric::height::{case_id, height_closed, CaseId};
use semitoric::model::{poisson_bracket, HObservable, LObservable, ModelParams, PhasePoint};
use semitoric::reduced::dh_function;
use semitoric::singularity::{discriminant_e, n_ff};

fn ff_params() -> impl Strategy<Value = ModelParams> {
    (0.3f64..3.0, 1.2f64..8.0, 0.02f64..0.98, 0.02f64..0.98)
        .prop_map(|(r1, r, s1, s2)| ModelParams::new(r1, r1 * r, s1, s2).unwrap())
        .prop_filter("well inside the focus-focus region", |p| {
            discriminant_e(p) < -1e-3 * p.r1() * p.r2() && case_id(p) != CaseId::III
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn heights_sum_to_two(p in ff_params()) {
        let h = height_closed(&p).unwrap();
        prop_assert!((h.h1 + h.h2 - 2.0).abs() <= 1e-12);
        prop_assert!(h.h1 > 0.0 && h.h1 < 2.0);
    }

    #[test]
    fn mirror_in_s1_exchanges_heights(p in ff_params()) {
        let q = ModelParams::new(p.r1(), p.r2(), 1.0 - p.s1(), p.s2()).unwrap();
        let (a, b) = (height_closed(&p).unwrap(), height_closed(&q).unwrap());
        prop_assert!((a.h1 - b.h2).abs() <= 1e-10);
    }

    #[test]
    fn swapping_spheres_keeps_the_height_pair(p in ff_params()) {
        let a = height_closed(&p).unwrap();
        let b = height_closed(&p.swapped()).unwrap();
        prop_assert!((a.h1 - b.h2).abs() <= 1e-10);
        prop_assert!((a.h2 - b.h1).abs() <= 1e-10);
    }

    #[test]
    fn mirror_preserves_the_focus_focus_count(
        r in 1.2f64..8.0, s1 in 0.0f64..1.0, s2 in 0.0f64..1.0,
    ) {
        let p = ModelParams::new(1.0, r, s1, s2).unwrap();
        let q = ModelParams::new(1.0, r, 1.0 - s1, s2).unwrap();
        if let (Ok(a), Ok(b)) = (n_ff(&p), n_ff(&q)) {
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn momentum_components_commute(
        p in ff_params(),
        t1 in -3.0f64..3.0, z1 in -1.0f64..1.0, t2 in -3.0f64..3.0, z2 in -1.0f64..1.0,
    ) {
        let x = PhasePoint::from_cylindrical(t1, z1, t2, z2).unwrap();
        let b = poisson_bracket(&LObservable(p), &HObservable(p), &x, &p).unwrap();
        prop_assert!(b.abs() <= 1e-12);
    }

    #[test]
    fn polygon_width_is_the_dh_profile(
        p in ff_params(), up in any::<bool>(), down in any::<bool>(), k in -3i64..3, t in 0.0f64..1.0,
    ) {
        let cuts = (if up { 1 } else { -1 }, if down { 1 } else { -1 });
        let poly = act_shear(&polygon_representative(&p, cuts).unwrap(), k);
        poly.validate().unwrap();
        let dh = dh_function(poly.r).unwrap();
        let l = -2.0 + t * (2.0 * poly.r + 2.0);
        prop_assert!((poly.width_at(l).unwrap() - dh.eval(l)).abs() <= 1e-10);
    }
}
