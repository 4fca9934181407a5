use sturmtree::oracle::{brute_force_census, compare, default_search_radius};
use sturmtree::random::random_finite;
use sturmtree::{ball_census, catalog};

#[test]
fn random_finite_presentations_match_oracle() {
    for seed in 0..100 {
        let p = random_finite(seed, 3, 5);
        let r = default_search_radius(&p, 7);
        let o = brute_force_census(&p, 7, r).unwrap();
        let diff = compare(&ball_census(&p, 7).unwrap(), &o);
        assert!(diff.is_empty(), "seed {seed}: {diff:?}");
    }
}

#[test]
fn degree_four_presentations_match_oracle() {
    for seed in 0..20 {
        let p = random_finite(500 + seed, 4, 4);
        let o = brute_force_census(&p, 5, default_search_radius(&p, 5)).unwrap();
        let diff = compare(&ball_census(&p, 5).unwrap(), &o);
        assert!(diff.is_empty(), "seed {seed}: {diff:?}");
    }
}

#[test]
fn catalog_rays_match_oracle_with_specials() {
    for &name in catalog::STURMIAN_RAYS {
        let p = catalog::example(name).unwrap();
        let c = ball_census(&p, 8).unwrap();
        let o = brute_force_census(&p, 8, default_search_radius(&p, 8)).unwrap();
        assert!(compare(&c, &o).is_empty());
        for n in 0..8 {
            assert_eq!(c.special_count(n), o.special_count(n), "{name} n={n}");
            assert_eq!(c.special_count(n), 1);
        }
    }
}

#[test]
fn shallow_search_is_flagged() {
    let p = catalog::example("ex31-ray3").unwrap();
    let o = brute_force_census(&p, 8, 2).unwrap();
    let diff = compare(&ball_census(&p, 8).unwrap(), &o);
    assert!(diff.iter().any(|d| d.contains("UNSATURATED")), "{diff:?}");
}
