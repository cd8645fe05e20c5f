use bow_core::maya::enumerate_fixed_points;
use bow_core::series::{euler_series_enum, poincare_series};
use bow_core::tangent::{list_01_pairs, tangent_via_eyd, tangent_via_pairs};
use bow_core::{BraneTriple, CellSign, GammaOrientation, IntQTSeries, IntSeries, MayaDiagram};
use proptest::prelude::*;

fn margins(max_n: usize, max_m: usize) -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (1..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        (prop::collection::vec(-2i64..=2, n), prop::collection::vec(-2i64..=2, m)).prop_map(|(e, mut f)| {
            let m = f.len();
            let rest: i64 = f[..m - 1].iter().sum();
            f[m - 1] = e.iter().sum::<i64>() - rest;
            (e, f)
        })
    })
}

fn maya() -> impl Strategy<Value = MayaDiagram> {
    (1usize..=3, 1usize..=3, 0usize..=4, -3i64..=1).prop_flat_map(|(n, m, blocks, k)| {
        prop::collection::vec(0u8..=1, blocks * n * m)
            .prop_map(move |bits| MayaDiagram::canonicalize(n, m, 2 * k + 1, bits))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn dimension_is_constant((e, f) in margins(3, 2), d in 0i64..=3) {
        let mut dims = Vec::new();
        for md in enumerate_fixed_points(d, &e, &f).unwrap() {
            let t = tangent_via_pairs(&md);
            prop_assert_eq!(t.dimension(), 2 * list_01_pairs(&md).len() as i64);
            prop_assert!(t.is_symplectic());
            dims.push(t.dimension());
        }
        dims.dedup();
        prop_assert!(dims.len() <= 1);
    }

    #[test]
    fn tangent_formulas_agree(md in maya()) {
        prop_assert_eq!(tangent_via_pairs(&md), tangent_via_eyd(&md));
    }

    #[test]
    fn t_one_is_euler((e, f) in margins(2, 2)) {
        let z: IntSeries = euler_series_enum(&e, &f, 4).unwrap();
        for sign in [CellSign::Minus, CellSign::Plus] {
            let p: IntQTSeries = poincare_series(&e, &f, 4, sign, GammaOrientation::Standard).unwrap();
            prop_assert_eq!(p.at_t_one(), z.clone());
        }
    }

    #[test]
    fn moves_invert((e, f) in margins(4, 4), d in -5i64..=10) {
        let t = BraneTriple::new(d, e, f).unwrap();
        prop_assert_eq!(t.move1().move1_inv(), t.clone());
        prop_assert_eq!(t.move1_inv().move1(), t.clone());
        prop_assert_eq!(t.move2().move2_inv(), t.clone());
        prop_assert_eq!(t.move2_inv().move2(), t);
    }

    #[test]
    fn core_quotient_round_trip(md in maya()) {
        let (core, q) = md.core_decompose();
        prop_assert_eq!(MayaDiagram::compose(&core, &q).unwrap(), md);
    }
}

#[test]
fn parallel_folds_match_sequential() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| {
                poincare_series::<i64>(&[2, 3, 1], &[2, 4], 5, CellSign::Minus, GammaOrientation::Standard).unwrap()
            })
    };
    assert_eq!(run(1), run(4));
}
