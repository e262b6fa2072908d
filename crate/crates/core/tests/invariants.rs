//! Property tests for invariants of the splitting engine and the bookkeeping.

use nbw_core::curve::{self, CurveMap, SectionSlice};
use nbw_core::linalg::{self, Vector};
use nbw_core::modifications::{self, FiberCondition, ModifiedBundle};
use nbw_core::poly::{HomogPoly, ProjPoint};
use nbw_core::stability::rho;
use nbw_core::{Error, FieldSpec};
use proptest::prelude::*;

fn f32003() -> FieldSpec {
    FieldSpec::prime(32003).unwrap()
}

fn ints(f: FieldSpec, xs: &[i64]) -> Vector {
    xs.iter().map(|&x| f.from_i64(x)).collect()
}

fn curve_from(f: FieldSpec, d: usize, coeffs: &[i64]) -> Option<CurveMap> {
    let forms = coeffs.chunks(d + 1).map(|c| HomogPoly::from_ints(f, c)).collect();
    let c = CurveMap::new(f, forms).ok()?;
    curve::validate(&c).is_valid().then_some(c)
}

fn small_curve() -> impl Strategy<Value = (usize, Vec<i64>)> {
    (3usize..=5).prop_flat_map(|d| (Just(d), prop::collection::vec(-6i64..=6, 4 * (d + 1))))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn splitting_is_projectively_invariant(
        (d, coeffs) in small_curve(),
        g in prop::collection::vec(-3i64..=3, 16),
        m in prop::collection::vec(-3i64..=3, 4),
    ) {
        let f = f32003();
        let Some(c) = curve_from(f, d, &coeffs) else { return Ok(()) };
        let gm: Vec<Vector> = g.chunks(4).map(|r| ints(f, r)).collect();
        prop_assume!(linalg::inverse(&f, &gm).is_some());
        prop_assume!((m[0] * m[3] - m[1] * m[2]).rem_euclid(32003) != 0);
        let mobius = [[f.from_i64(m[0]), f.from_i64(m[1])], [f.from_i64(m[2]), f.from_i64(m[3])]];
        let moved = c.transform(&gm, mobius).unwrap();
        prop_assert_eq!(curve::normal_splitting(&c).unwrap(), curve::normal_splitting(&moved).unwrap());
        prop_assert_eq!(
            curve::restricted_tangent_splitting(&c).unwrap(),
            curve::restricted_tangent_splitting(&moved).unwrap()
        );
    }

    /// Reduction mod p can only make the splitting less balanced.
    #[test]
    fn reduction_is_semicontinuous((d, coeffs) in small_curve(), p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let Some(cq) = curve_from(FieldSpec::Rationals, d, &coeffs) else { return Ok(()) };
        let Some(cp) = curve_from(FieldSpec::prime(p).unwrap(), d, &coeffs) else { return Ok(()) };
        let sq = curve::normal_splitting(&cq).unwrap();
        let sp = curve::normal_splitting(&cp).unwrap();
        prop_assert_eq!(sq.degree(), sp.degree());
        prop_assert!(sp.parts().last() >= sq.parts().last(), "{} over F_{} vs {} over Q", sp, p, sq);
    }

    #[test]
    fn section_dimensions_match_splitting((d, coeffs) in small_curve(), extra in 0usize..3) {
        let f = f32003();
        let Some(c) = curve_from(f, d, &coeffs) else { return Ok(()) };
        let st = curve::normal_splitting(&c).unwrap();
        let e = d - 1 + extra;
        prop_assert_eq!(curve::section_slice(&c, e).unwrap().dim(), SectionSlice::predicted_dim(&st, e, d));
    }

    #[test]
    fn characteristic_two_parity(d in 3usize..=7, seed in 0u64..1000) {
        let c = curve::random_curve(d, 3, FieldSpec::prime(2).unwrap(), seed).unwrap().curve;
        let st = curve::normal_splitting(&c).unwrap();
        prop_assert!(st.parts().iter().all(|a| (a - d as i64) % 2 == 0), "{} for d = {}", st, d);
    }

    /// A single general pointing condition lowers exactly one part by one.
    #[test]
    fn one_condition_lowers_one_part(seed in 0u64..500, t in 0i64..50, target in prop::collection::vec(0i64..32003, 4)) {
        let f = f32003();
        let c = curve::random_curve(3, 3, f, seed).unwrap().curve;
        let plain = ModifiedBundle::unmodified(c).unwrap();
        let before = modifications::splitting_type(&plain).unwrap();
        let p = ProjPoint::from_ints(f, 1, t).unwrap();
        let mb = match plain.with_condition(FiberCondition::line(p, ints(f, &target))) {
            Ok(mb) => mb,
            Err(Error::TangentTarget) => return Ok(()),
            Err(err) => return Err(TestCaseError::fail(err.to_string())),
        };
        let after = modifications::splitting_type(&mb).unwrap();
        prop_assert_eq!(after.degree(), before.degree() - 1);
        let lowered = (0..before.rank()).any(|i| {
            let mut parts = before.parts().to_vec();
            parts[i] -= 1;
            parts.sort();
            parts == after.parts()
        });
        prop_assert!(lowered, "{} -> {}", before, after);
    }

    #[test]
    fn verdicts_are_twist_invariant(seed in 0u64..200, d in 3usize..=4, k in -4i64..=4) {
        let f = f32003();
        let c = curve::random_curve(d, 3, f, seed).unwrap().curve;
        let plain = ModifiedBundle::unmodified(c).unwrap();
        let st = modifications::splitting_type(&plain).unwrap();
        let twisted = modifications::splitting_type(&plain.with_twist(k)).unwrap();
        prop_assert_eq!(&twisted, &st.twisted(k));
        prop_assert_eq!(modifications::is_semistable(&twisted), modifications::is_semistable(&st));
    }
}

proptest! {
    #[test]
    fn pancake_raises_rho_by_two(d in -100i64..100, g in -100i64..100) {
        prop_assert_eq!(rho(g - 6, 3, d - 4), rho(g, 3, d) + 2);
    }
}
