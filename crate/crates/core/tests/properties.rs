use arbordim::aut::{aut_order, aut_order_formula};
use arbordim::dimension::divides;
use arbordim::dynamics::{parse_map, Poly, ProjPoint, RationalMap};
use arbordim::quad_tower::{galois_degree_sequence, TowerOptions};
use arbordim::tree::FiniteTree;
use num_bigint::BigUint;
use proptest::prelude::*;

fn poly(coeffs: Vec<i64>) -> Poly {
    Poly::from_ints(coeffs)
}

fn tree_counts(d: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    proptest::collection::vec(1..=d, 1..6).prop_map(move |seeds| {
        let mut counts = Vec::new();
        let mut width = 1;
        for (k, s) in seeds.iter().enumerate() {
            let lvl: Vec<usize> = (0..width).map(|i| 1 + (s + i + k) % d).collect();
            width = lvl.iter().sum();
            counts.push(lvl);
            if width > 200 {
                break;
            }
        }
        counts
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn polynomial_display_parses_back(c in proptest::collection::vec(-9i64..=9, 3..6)) {
        prop_assume!(*c.last().unwrap() != 0);
        let f = RationalMap::polynomial(poly(c));
        prop_assert_eq!(parse_map(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn rational_display_parses_back(n in proptest::collection::vec(-5i64..=5, 3), d in proptest::collection::vec(-5i64..=5, 2..4)) {
        prop_assume!(n[2] != 0);
        if let Ok(f) = RationalMap::new(poly(n), poly(d)) {
            prop_assert_eq!(parse_map(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn complete_tree_order_matches_formula(d in 2usize..=4, n in 0usize..=4) {
        let t = FiniteTree::complete(d, n).unwrap();
        prop_assert_eq!(aut_order(&t), aut_order_formula(d as u32, n as u32).unwrap());
    }

    #[test]
    fn tree_json_round_trip(counts in tree_counts(3)) {
        let t = FiniteTree::from_child_counts(3, &counts).unwrap();
        let back = FiniteTree::from_json(&t.to_json()).unwrap();
        prop_assert_eq!(back.level_sizes(), t.level_sizes());
        prop_assert_eq!(aut_order(&back), aut_order(&t));
    }

    #[test]
    fn tower_degrees_divide_aut_order(c in -6i64..=6, a in -4i64..=4) {
        let f = parse_map(&format!("x^2 + {c}")).unwrap();
        let run = galois_degree_sequence(&f, &ProjPoint::int(a), 3, &TowerOptions::default()).unwrap();
        prop_assume!(run.truncated.is_none());
        for (n, deg) in run.degrees.iter().enumerate() {
            prop_assert!(deg.count_ones() == 1, "degree {} is not a power of 2", deg);
            prop_assert!(divides(deg, &aut_order_formula(2, n as u32).unwrap()));
            prop_assert!(divides(deg, &aut_order(&run.tree.truncate(n).unwrap())));
        }
        prop_assert!(run.degrees.windows(2).all(|w| divides(&w[0], &w[1])));
        prop_assert!(*run.degrees.last().unwrap() >= BigUint::from(1u32));
    }
}
