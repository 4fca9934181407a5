use proptest::prelude::*;

use sturmtree::canon::{branches, canonical_key};
use sturmtree::cover::{ball_size, lift_ball, lift_patch};
use sturmtree::graph::{FiniteEdge, IndexPair, Presentation, Vertex};
use sturmtree::random::random_finite;
use sturmtree::{ball_census, ball_census_with, catalog, parse_presentation, CensusOptions};

fn vertices_of(p: &Presentation) -> Vec<Vertex> {
    (0..p.finite_len().unwrap() as i64).map(|i| p.vertex(i)).collect()
}

/// Same quotient with its edge list permuted and some edges flipped, which
/// reorders children in every lift without changing the coloring.
fn shuffled(p: &Presentation, order: &[usize], flips: &[bool]) -> Presentation {
    let edges = p.finite_edges().unwrap();
    let new: Vec<FiniteEdge> = order
        .iter()
        .zip(flips)
        .map(|(&i, &flip)| {
            let e = edges[i];
            if flip {
                FiniteEdge {
                    u: e.v,
                    v: e.u,
                    pair: IndexPair::new(e.pair.bwd, e.pair.fwd),
                }
            } else {
                e
            }
        })
        .collect();
    Presentation::finite(p.degree(), p.alphabet().to_vec(), vertices_of(p), new).unwrap()
}

#[test]
fn catalog_round_trips() {
    for &name in catalog::NAMES {
        let p = catalog::example(name).unwrap();
        let back = parse_presentation(&p.to_json()).unwrap();
        assert_eq!(back, p, "{name}");
        assert_eq!(parse_presentation(&p.to_json_pretty()).unwrap(), p);
    }
}

#[test]
fn catalog_censuses_are_monotone() {
    for &name in catalog::NAMES {
        let c = ball_census(&catalog::example(name).unwrap(), 8).unwrap();
        let b = c.values();
        assert!(b.windows(2).all(|w| w[1] >= w[0]), "{name}: {b:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serialization_round_trip(seed in 0u64..10_000, k in 2u32..6) {
        let p = random_finite(seed, k, 5);
        prop_assert_eq!(parse_presentation(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn monotone_with_persistent_plateau(seed in 0u64..10_000) {
        let p = random_finite(seed, 3, 5);
        let b = ball_census(&p, 7).unwrap().values();
        prop_assert!(b.windows(2).all(|w| w[1] >= w[0]));
        if let Some(n) = (0..7).find(|&n| b[n + 1] == b[n]) {
            prop_assert!(b[n..].iter().all(|&x| x == b[n]), "{:?}", b);
        }
        prop_assert!(b.iter().all(|&x| x <= p.finite_len().unwrap()));
    }

    #[test]
    fn lifted_balls_have_closed_form_size(seed in 0u64..10_000, k in 3u32..6, n in 0usize..5) {
        let p = random_finite(seed, k, 5);
        let ball = lift_ball(&p, 0, n).unwrap();
        prop_assert_eq!(ball.len() as u64, ball_size(k, n).unwrap());
        prop_assert!(ball.check_invariants(k).is_ok());
    }

    #[test]
    fn fiber_invariance(seed in 0u64..10_000) {
        let p = random_finite(seed, 3, 5);
        let patch = lift_patch(&p, 0, 3, 3).unwrap();
        let mut seen = std::collections::HashMap::new();
        for &c in patch.centers() {
            let key = canonical_key(&patch.sub_ball(c, 3).unwrap());
            let first = seen.entry(patch.node(c).projection).or_insert_with(|| key.clone());
            prop_assert_eq!(&*first, &key);
        }
    }

    #[test]
    fn keys_ignore_sibling_order(
        seed in 0u64..10_000,
        order_seed in any::<u64>(),
        flips in proptest::collection::vec(any::<bool>(), 16),
    ) {
        let p = random_finite(seed, 3, 5);
        let m = p.finite_edges().unwrap().len();
        prop_assume!(m <= 16);
        let mut order: Vec<usize> = (0..m).collect();
        // a cheap deterministic permutation from the seed
        let mut s = order_seed;
        for i in (1..m).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            order.swap(i, (s >> 33) as usize % (i + 1));
        }
        let q = shuffled(&p, &order, &flips[..m]);
        for pos in 0..p.finite_len().unwrap() as i64 {
            let a = lift_ball(&p, pos, 4).unwrap();
            let b = lift_ball(&q, pos, 4).unwrap();
            prop_assert_eq!(canonical_key(&a), canonical_key(&b));
        }
    }

    #[test]
    fn equal_branches_give_equal_balls(seed in 0u64..10_000, n in 1usize..5) {
        let p = random_finite(seed, 3, 5);
        let balls: Vec<_> = (0..p.finite_len().unwrap() as i64)
            .map(|x| lift_ball(&p, x, n).unwrap())
            .collect();
        for a in &balls {
            for b in &balls {
                if branches(a).unwrap() == branches(b).unwrap() {
                    prop_assert_eq!(canonical_key(a), canonical_key(b));
                }
            }
        }
    }

    #[test]
    fn parallel_and_sequential_agree(seed in 0u64..10_000) {
        let p = random_finite(seed, 3, 5);
        let a = ball_census_with(&p, 6, CensusOptions::sequential()).unwrap();
        let b = ball_census_with(&p, 6, CensusOptions::default()).unwrap();
        prop_assert_eq!(a.to_tsv(), b.to_tsv());
        for n in 0..=6 {
            let ka: Vec<_> = a.classes(n).iter().map(|c| (c.key.clone(), c.representative)).collect();
            let kb: Vec<_> = b.classes(n).iter().map(|c| (c.key.clone(), c.representative)).collect();
            prop_assert_eq!(ka, kb);
        }
    }
}
