mod common;

use heisvoc_core::{basis_of_weight, basis_up_to, Rank};

fn rank(d: u32) -> Rank {
    Rank::new(d).unwrap()
}

#[test]
fn rank_one_counts_are_partition_numbers() {
    let counts: Vec<usize> = (0..=6).map(|n| basis_of_weight(rank(1), n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 3, 5, 7, 11]);
}

#[test]
fn matches_brute_force_enumeration() {
    for d in 1..=3 {
        for n in 0..=10 {
            let basis = basis_of_weight(rank(d), n);
            let keys: Vec<_> = basis.iter().map(common::key_of).collect();
            let unique: std::collections::BTreeSet<_> = keys.iter().cloned().collect();
            assert_eq!(unique.len(), keys.len(), "duplicates at d={d} N={n}");
            assert_eq!(unique, common::brute_force_basis(d, n), "d={d} N={n}");
            assert!(basis.iter().all(|m| m.weight() == n && m.max_color() <= d));
        }
    }
}

#[test]
fn counts_match_generating_function() {
    // Coefficients of prod_n (1 - q^n)^{-d}.
    for d in 1..=3u32 {
        let mut series = [0u64; 11];
        series[0] = 1;
        for n in 1..=10 {
            for _ in 0..d {
                for k in n..=10 {
                    series[k] += series[k - n];
                }
            }
        }
        for (n, &expected) in series.iter().enumerate() {
            assert_eq!(basis_of_weight(rank(d), n).len() as u64, expected, "d={d} N={n}");
        }
    }
}

#[test]
fn order_is_canonical_and_graded() {
    let all = basis_up_to(rank(2), 6);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    assert!(all.windows(2).all(|w| w[0].weight() <= w[1].weight()));
}
