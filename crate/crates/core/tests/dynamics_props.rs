use cremona_core::bubble::base_point_tree;
use cremona_core::dynamics::{b_sequence_direct, b_sequence_tracked, degree_sequence, mu_estimate};
use cremona_core::registry;
use cremona_core::{Automorphism, Birational, PlaneMap, Side};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CAP: u64 = 700;

fn small_automorphism(rng: &mut ChaCha8Rng) -> Automorphism {
    loop {
        let m = [0; 3].map(|_| [0; 3].map(|_| rng.gen_range(-3i64..=3)));
        if let Ok(a) = Automorphism::from_ints(m) {
            return a;
        }
    }
}

fn quadratic(seed: u64) -> Birational {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = match rng.gen_range(0..3) {
        0 => registry::sigma(),
        1 => Birational::new(PlaneMap::parse("(x*y : z^2 : y*z)").unwrap()).unwrap(),
        _ => registry::shear_x(2).unwrap(),
    };
    let (a, b) = (small_automorphism(&mut rng), small_automorphism(&mut rng));
    core.act(&b, Side::Right).act(&a, Side::Left)
}

fn b(m: &PlaneMap) -> usize {
    base_point_tree(m).unwrap().len()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn map_and_inverse_have_equally_many_base_points(seed in any::<u64>()) {
        let f = quadratic(seed);
        prop_assert_eq!(b(&f.map), b(&f.inverse));
        let g = f.compose(&quadratic(seed ^ 0xff), CAP).unwrap();
        prop_assert_eq!(b(&g.map), b(&g.inverse));
    }

    #[test]
    fn tracked_counts_match_direct_builds(seed in any::<u64>()) {
        let f = quadratic(seed);
        let direct = b_sequence_direct(&f.map, 2, CAP).unwrap();
        let tracked = b_sequence_tracked(&f, 2).unwrap();
        prop_assert_eq!(tracked, direct.into_iter().map(Some).collect::<Vec<_>>());
    }

    #[test]
    fn iterates_grow_subadditively(seed in any::<u64>()) {
        let f = quadratic(seed);
        let bs = b_sequence_direct(&f.map, 3, CAP).unwrap();
        let ds = degree_sequence(&f.map, 3, CAP).unwrap();
        for k in 1..bs.len() {
            prop_assert!(bs[k] <= bs[k - 1] + bs[0]);
            prop_assert!(ds[k] <= ds[k - 1] * ds[0]);
        }
    }

    #[test]
    fn conjugation_keeps_base_point_counts(seed in any::<u64>()) {
        let f = quadratic(seed);
        let a = small_automorphism(&mut ChaCha8Rng::seed_from_u64(!seed));
        let g = f.act(&a, Side::Conjugate);
        prop_assert_eq!(
            b_sequence_direct(&g.map, 2, CAP).unwrap(),
            b_sequence_direct(&f.map, 2, CAP).unwrap()
        );
        prop_assert_eq!(
            mu_estimate(&g, 3).unwrap().lower_bound,
            mu_estimate(&f, 3).unwrap().lower_bound
        );
    }

    #[test]
    fn persistent_classes_never_exceed_base_points(seed in any::<u64>()) {
        let f = quadratic(seed);
        let mu = mu_estimate(&f, 3).unwrap();
        prop_assert!(mu.lower_bound <= b(&f.map));
        prop_assert_eq!(mu.b_sequence.len(), 3);
    }
}
