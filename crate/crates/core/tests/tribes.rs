use cube_analysis::inequality::{self, Branch, DEFAULT_S0};
use cube_analysis::zoo;

/// `½ P(D_ij f ≠ 0)` for coordinates in different blocks: both blocks are one
/// flip away from all-ones and no other block is all-ones.
fn distinct_block_pair(k: usize, m: usize) -> f64 {
    0.5 * 0.5f64.powi(2 * (k as i32 - 1)) * (1.0 - 0.5f64.powi(k as i32)).powi(m as i32 - 2)
}

#[test]
fn closed_forms_match_enumeration() {
    for k in 1..=20 {
        for m in 1..=20 / k {
            let f = zoo::tribes(k, m).unwrap();
            let closed = zoo::tribes_influence_closed_form(k, m);
            for i in 1..=k * m {
                assert_eq!(f.influence(i).unwrap(), closed, "k={k} m={m} i={i}");
            }
            assert_eq!(f.mean(), zoo::tribes_mean(k, m));
            if m >= 2 && k * m <= 16 {
                let p = f.pair_influence(1, k + 1).unwrap();
                assert!(p > 0.0);
                assert!((p - distinct_block_pair(k, m)).abs() < 1e-15, "k={k} m={m}");
                if k >= 2 {
                    assert_eq!(f.pair_influence(1, 2).unwrap(), closed);
                }
            }
        }
    }
}

#[test]
fn auto_parameters_are_balanced() {
    for e in 6..=20 {
        let n = 1usize << e;
        let (k, m) = zoo::tribes_auto_params(n).unwrap();
        assert!(k * m <= n && 2 * k * m >= n);
        assert!((zoo::tribes_mean(k, m) - 0.5).abs() <= 0.1, "n={n}");
        let ratio = zoo::tribes_influence_closed_form(k, m) * n as f64 / (n as f64).log2();
        assert!((0.3..=3.0).contains(&ratio), "n={n}: {ratio}");
    }
}

#[test]
fn tribes_select_pair_branch() {
    for (k, m) in [(2, 2), (2, 3), (3, 3), (4, 4), (3, 5)] {
        let r = inequality::corollary_alternative_report(&zoo::tribes(k, m).unwrap(), DEFAULT_S0).unwrap();
        assert_eq!(r.branch, Some(Branch::Pair), "k={k} m={m}");
        assert!(r.c2 > r.c1 && r.c2 > 0.0);
    }
}
