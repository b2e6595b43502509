use num_traits::Zero;
use cremona_core::bubble::{base_point_tree, noether_check, push_forward_point};
use cremona_core::plane_map::{contracted_curves, inverse};
use cremona_core::registry;
use cremona_core::{Automorphism, Birational, BubblePoint, PlaneMap, ProjPoint, Side};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn small_automorphism(rng: &mut ChaCha8Rng) -> Automorphism {
    loop {
        let m = [0; 3].map(|_| [0; 3].map(|_| rng.gen_range(-3i64..=3)));
        if let Ok(a) = Automorphism::from_ints(m) {
            return a;
        }
    }
}

/// Quadratic maps `A∘core∘B` with a known inverse, from the three kinds of
/// quadratic base loci: three proper points, a point with one infinitely near
/// point, and a chain of three.
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

fn point(rng: &mut ChaCha8Rng) -> ProjPoint {
    loop {
        if let Ok(p) = ProjPoint::from_ints([0; 3].map(|_| rng.gen_range(-9i64..=9))) {
            return p;
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn printing_then_parsing_a_map_is_the_identity(seed in any::<u64>()) {
        let f = quadratic(seed).map;
        prop_assert_eq!(PlaneMap::parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn composition_is_associative_and_degree_submultiplicative(s in any::<u64>()) {
        let (f, g, h) = (quadratic(s), quadratic(s ^ 1), quadratic(s ^ 2));
        let left = f.map.compose(&g.map).unwrap().compose(&h.map).unwrap();
        let right = f.map.compose(&g.map.compose(&h.map).unwrap()).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert!(f.map.compose(&g.map).unwrap().degree() <= 4);
    }

    #[test]
    fn inverses_compose_to_the_identity(seed in any::<u64>()) {
        let f = quadratic(seed);
        let g = inverse(&f.map).unwrap();
        prop_assert_eq!(&g, &f.inverse);
        prop_assert_eq!(g.degree(), f.degree());
        prop_assert!(g.compose(&f.map).unwrap().is_identity());
        prop_assert!(f.map.compose(&g).unwrap().is_identity());
    }

    #[test]
    fn jacobian_degree_and_contracted_curves(seed in any::<u64>()) {
        let f = quadratic(seed).map;
        let j = f.jacobian().unwrap();
        prop_assert_eq!(j.total_degree(), Some(3 * (f.degree() - 1)));
        for c in contracted_curves(&f).unwrap() {
            prop_assert!(j.rem(&c.polynomial).is_zero());
            prop_assert!(c.polynomial.total_degree() >= Some(1));
        }
    }

    #[test]
    fn left_action_keeps_the_base_points(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = quadratic(seed);
        let a = small_automorphism(&mut rng);
        let moved = f.act(&a, Side::Left);
        prop_assert_eq!(moved.degree(), f.degree());
        prop_assert_eq!(base_point_tree(&moved.map).unwrap(), base_point_tree(&f.map).unwrap());
    }

    #[test]
    fn trees_satisfy_noether_and_proximity(seed in any::<u64>()) {
        let f = quadratic(seed);
        let fg = f.compose(&quadratic(seed.rotate_left(7)), 700).unwrap();
        for m in [&f.map, &f.inverse, &fg.map] {
            let t = base_point_tree(m).unwrap();
            prop_assert!(noether_check(&t).passed());
            for (i, n) in t.nodes.iter().enumerate() {
                prop_assert!(n.proximate_to.len() <= 2);
                if let Some(parent) = n.parent {
                    prop_assert!(n.proximate_to.contains(&parent), "node {} not proximate to parent", i);
                }
            }
        }
        prop_assert_eq!(base_point_tree(&f.map).unwrap().len(), base_point_tree(&f.inverse).unwrap().len());
    }

    #[test]
    fn transport_agrees_with_evaluation_off_contracted_curves(seed in any::<u64>()) {
        let f = quadratic(seed).map;
        let jac = f.jacobian().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = point(&mut rng);
        if !jac.eval(p.coords()).is_zero() {
            let image = push_forward_point(&f, &BubblePoint::proper(p.clone())).unwrap();
            prop_assert_eq!(image, BubblePoint::proper(f.evaluate(&p).unwrap()));
        }
    }

    #[test]
    fn transport_through_a_map_and_back(seed in any::<u64>()) {
        let f = quadratic(seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // points on contracted lines land infinitely near; the inverse brings them back
        let line = contracted_curves(&f.map).unwrap().into_iter().find(|c| c.polynomial.total_degree() == Some(1));
        let p = match line {
            Some(c) => {
                let l = [0, 1, 2].map(|i| c.polynomial.coeff(&cremona_core::algebra::Monomial::var(i)));
                let u = point(&mut rng);
                let u = u.coords();
                ProjPoint::new([
                    &l[1] * &u[2] - &l[2] * &u[1],
                    &l[2] * &u[0] - &l[0] * &u[2],
                    &l[0] * &u[1] - &l[1] * &u[0],
                ])
                .unwrap_or_else(|_| point(&mut rng))
            }
            None => point(&mut rng),
        };
        let bp = BubblePoint::proper(p);
        let base = base_point_tree(&f.map).unwrap();
        if !base.contains(&bp) {
            let image = push_forward_point(&f.map, &bp).unwrap();
            prop_assert_eq!(push_forward_point(&f.inverse, &image).unwrap(), bp);
        }
    }

    #[test]
    fn bubble_points_survive_json(seed in any::<u64>()) {
        let f = quadratic(seed);
        for n in base_point_tree(&f.map).unwrap().nodes {
            let back = BubblePoint::from_json(&n.point.to_json()).unwrap();
            prop_assert_eq!(&back, &n.point);
            prop_assert_eq!(back.to_string(), n.point.to_string());
        }
    }
}
