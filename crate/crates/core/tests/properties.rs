use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use qhm_core::cf2::{gl2_act, gl2_decompose, gl3_act, serret_equivalent, word_product, Gl2, Gl3};
use qhm_core::classify::{decide_equivalence, normalize_rank2, reduce_dif, Budget, QhmParams, Verdict};
use qhm_core::exactnum::{common_field, AlgebraicReal, FieldContext};
use qhm_core::lattice::{lattice_equal, RatLattice};

fn surd(a: i64, b: i64, d: i64, den: i64) -> AlgebraicReal {
    let root = AlgebraicReal::from_int(d).sqrt().unwrap();
    root.mul_rational(&BigRational::new(b.into(), den.into()))
        .add_rational(&BigRational::new(a.into(), den.into()))
}

fn arb_surd() -> impl Strategy<Value = AlgebraicReal> {
    (-6i64..=6, prop_oneof![-5i64..=-1, 1i64..=5], prop::sample::select(vec![2i64, 3, 5, 7]), 1i64..=9)
        .prop_map(|(a, b, d, den)| surd(a, b, d, den))
}

fn arb_gl2(max: i64) -> impl Strategy<Value = Gl2> {
    [[-max..=max, -max..=max], [-max..=max, -max..=max]]
        .prop_filter("unimodular", |m| (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() == 1)
        .prop_map(|m| Gl2::from_i64(m).unwrap())
}

fn arb_block() -> impl Strategy<Value = Gl3> {
    (arb_gl2(2), 0..3usize, -2i64..=2, -2i64..=2).prop_map(|(m, shape, s, t)| {
        let g = |i: usize, j: usize| i64::try_from(m.get(i, j)).unwrap();
        let rows = match shape {
            0 => [[g(0, 0), g(0, 1), s], [g(1, 0), g(1, 1), t], [0, 0, 1]],
            1 => [[g(0, 0), 0, g(0, 1)], [0, 1, 0], [g(1, 0), 0, g(1, 1)]],
            _ => [[g(0, 0), g(0, 1), 0], [g(1, 0), g(1, 1), 0], [0, 0, 1]],
        };
        Gl3::from_i64(rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms(x in arb_surd(), y in arb_surd(), z in arb_surd()) {
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&x.recip().unwrap()), AlgebraicReal::one());
        prop_assert!(x.sub(&x).is_zero());
        let (ctx, cs) = common_field(&[x.clone(), y.clone()]).unwrap();
        prop_assert_eq!(ctx.to_algebraic(&ctx.mul(&cs[0], &cs[1])), x.mul(&y));
    }

    #[test]
    fn lattice_invariant_under_unimodular_change(
        gens in prop::collection::vec((-12i64..=12, 1i64..=12), 3),
        ops in prop::collection::vec((0..3usize, 0..3usize, -3i64..=3), 0..6),
    ) {
        let ctx = FieldContext::rational();
        let mut v: Vec<BigRational> = gens.iter().map(|&(a, b)| BigRational::new(a.into(), b.into())).collect();
        let lat = RatLattice::new(ctx.clone(), v.iter().map(|g| vec![g.clone()]).collect());
        for (i, j, k) in ops {
            if i != j {
                let add = &v[j] * BigRational::from_integer(BigInt::from(k));
                v[i] = &v[i] + add;
            }
        }
        v.swap(0, 2);
        let lat2 = RatLattice::new(ctx.clone(), v.iter().map(|g| vec![g.clone()]).collect());
        prop_assert!(lattice_equal(&lat, &lat2).unwrap());
        for g in &v {
            prop_assert!(lat.contains(&[g.clone()]));
        }
    }

    #[test]
    fn serret_symmetric_and_reflexive(x in arb_surd(), y in arb_surd()) {
        prop_assert_eq!(serret_equivalent(&x, &x, 64).kind(), "Equivalent");
        prop_assert_eq!(serret_equivalent(&x, &y, 64).kind(), serret_equivalent(&y, &x, 64).kind());
    }

    #[test]
    fn serret_finds_images(x in arb_surd(), a in arb_gl2(3)) {
        let y = gl2_act(&a, &x).unwrap();
        match serret_equivalent(&x, &y, 64) {
            qhm_core::cf2::SerretResult::Equivalent(w) => prop_assert_eq!(gl2_act(&w, &x).unwrap(), y),
            other => prop_assert!(false, "{}", other.kind()),
        }
    }

    #[test]
    fn gl2_decompose_remultiplies(a in arb_gl2(9)) {
        prop_assert_eq!(word_product(&gl2_decompose(&a)), a);
    }

    #[test]
    fn gl3_action_composes(a in arb_block(), b in arb_block(), mu in arb_surd(), s in 1i64..=9) {
        let nu = AlgebraicReal::from_int(11).sqrt().unwrap().mul_rational(&BigRational::new(1.into(), s.into()));
        let (m1, n1) = gl3_act(&b, &mu, &nu).unwrap();
        prop_assert_eq!(gl3_act(&a.mul(&b), &mu, &nu).unwrap(), gl3_act(&a, &m1, &n1).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn rank2_reduction_is_sound(
        c in 1u64..=3,
        p in 1i64..=9,
        q in 1i64..=9,
        t in -4i64..=4,
        nu in arb_surd(),
    ) {
        // mu = t nu + p/(2q) keeps the trace group at rank 2
        let mu = nu.mul_rational(&BigRational::from_integer(t.into()))
            .add_rational(&BigRational::new(p.into(), (2 * q).into()));
        let params = QhmParams::new(c, mu, nu).unwrap();
        let n = normalize_rank2(&params).unwrap();
        let red = reduce_dif(&n.params).unwrap();
        prop_assert!(red.params.mu.is_zero());
        let d = decide_equivalence(&params, &red.params, &Budget::default());
        prop_assert!(matches!(d.verdict, Verdict::Equivalent { .. }), "{}", d.verdict.kind());
    }
}
