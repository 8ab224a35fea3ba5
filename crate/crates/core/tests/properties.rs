use hyplab::hyp::gromov_product;
use hyplab::spaces::farey::{farey_distance, farey_geodesic, FareyVertex, Sl2};
use hyplab::{FreeTree, GroupElement, HyperbolicSpace, Rational, Word};
use proptest::prelude::*;

fn word() -> impl Strategy<Value = Word> {
    prop::collection::vec(prop::sample::select(vec![1i8, -1, 2, -2]), 0..24)
        .prop_map(|ls| ls.into_iter().fold(Word::empty(), |w, l| w.mul(&Word::letter(l))))
}

fn vertex() -> impl Strategy<Value = FareyVertex> {
    (-200i64..200, 1i64..120).prop_map(|(p, q)| {
        let g = num_integer::gcd(p, q);
        FareyVertex::new(p / g, q / g).unwrap()
    })
}

fn sl2() -> impl Strategy<Value = Sl2> {
    prop::collection::vec((any::<bool>(), -4i64..=4), 1..8).prop_map(|parts| {
        let s: Sl2 = "[[0,-1],[1,0]]".parse().unwrap();
        let t: Sl2 = "[[1,1],[0,1]]".parse().unwrap();
        parts
            .into_iter()
            .fold(Sl2::identity(), |g, (flip, k)| if flip { g.mul(&s) } else { g.mul(&t.pow(k)) })
    })
}

proptest! {
    #[test]
    fn tree_metric_axioms(a in word(), b in word(), c in word()) {
        let t = FreeTree::new(2).unwrap();
        prop_assert_eq!(t.distance(&a, &b), t.distance(&b, &a));
        prop_assert!(t.distance(&a, &c) <= t.distance(&a, &b) + t.distance(&b, &c));
        prop_assert_eq!(t.distance(&a, &a), 0);
        prop_assert_eq!(t.distance(&c.mul(&a), &c.mul(&b)), t.distance(&a, &b));
    }

    #[test]
    fn tree_gromov_product_is_ultrametric(a in word(), b in word(), c in word()) {
        let t = FreeTree::new(2).unwrap();
        let one = Word::empty();
        let ab = gromov_product(&t, &a, &b, &one);
        let bc = gromov_product(&t, &b, &c, &one);
        let ac = gromov_product(&t, &a, &c, &one);
        prop_assert!(ac >= ab.min(bc));
        prop_assert_eq!(ab, Rational::from_integer(a.common_prefix_len(&b) as i64));
    }

    #[test]
    fn cyclic_length_is_conjugation_invariant(w in word(), g in word()) {
        let conj = g.mul(&w).mul(&g.inverse());
        prop_assert_eq!(conj.cyclic_length(), w.cyclic_length());
        prop_assert!(w.cyclic_length() <= w.len());
    }

    #[test]
    fn farey_metric_axioms(a in vertex(), b in vertex(), c in vertex()) {
        prop_assert_eq!(farey_distance(&a, &b), farey_distance(&b, &a));
        prop_assert!(farey_distance(&a, &c) <= farey_distance(&a, &b) + farey_distance(&b, &c));
        prop_assert_eq!(farey_distance(&a, &b) == 1, a.is_adjacent(&b));
    }

    #[test]
    fn farey_geodesics_are_edge_paths(a in vertex(), b in vertex()) {
        let g = farey_geodesic(&a, &b);
        prop_assert_eq!(g.len() as u64, farey_distance(&a, &b) + 1);
        prop_assert!(g.windows(2).all(|w| w[0].is_adjacent(&w[1])));
    }

    #[test]
    fn sl2_acts_by_isometries(g in sl2(), a in vertex(), b in vertex()) {
        prop_assert_eq!(farey_distance(&g.act(&a), &g.act(&b)), farey_distance(&a, &b));
        prop_assert_eq!(g.inverse().act(&g.act(&a)), a);
    }
}
