//! The exact solver against an exhaustive search over all matrices with a
//! given number of ones.

use std::time::Duration;

use alpha_core::solve::{solve_alpha, solve_alpha_with, Engine, SolveOptions};

/// True if every `k` rows of the `n x n` matrix packed in `mask` (row-major,
/// bit `r*n + c`) cover at least `n - k + 1` columns.
fn valid(mask: u32, n: usize, k: usize) -> bool {
    let rows: Vec<u32> = (0..n).map(|r| (mask >> (r * n)) & ((1 << n) - 1)).collect();
    (0u32..1 << n)
        .filter(|s| s.count_ones() as usize == k)
        .all(|s| {
            let cover = (0..n).filter(|r| s >> r & 1 == 1).fold(0, |acc, r| acc | rows[r]);
            cover.count_ones() as usize > n - k
        })
}

/// Smallest `t` such that some matrix with exactly `t` ones is valid.
fn exhaustive(n: usize, k: usize) -> usize {
    let cells = n * n;
    for t in 0..=cells {
        if t == 0 {
            if valid(0, n, k) {
                return 0;
            }
            continue;
        }
        // Gosper's hack over all `t`-subsets of the cells.
        let mut x: u64 = (1 << t) - 1;
        while x < 1 << cells {
            if valid(x as u32, n, k) {
                return t;
            }
            let c = x & x.wrapping_neg();
            let r = x + c;
            x = (((r ^ x) >> 2) / c) | r;
        }
    }
    unreachable!()
}

#[test]
fn orderly_engine_matches_exhaustive_search() {
    for n in 1..=5 {
        for k in 1..=n {
            if n == 5 && k == 1 {
                continue;
            }
            let want = exhaustive(n, k);
            let got = solve_alpha(k, n, Duration::from_secs(60)).unwrap();
            let got = got.exact().expect("solved");
            assert_eq!(got.value, want, "k={k} n={n}");
            assert_eq!(got.certificate.ones_count(), want);
        }
    }
}

#[test]
fn witness_engine_matches_exhaustive_search() {
    let opts = SolveOptions {
        engine: Engine::WitnessBranching,
        ..SolveOptions::default()
    };
    for n in 1..=5 {
        for k in 2..=n {
            let want = exhaustive(n, k);
            let got = solve_alpha_with(k, n, &opts).unwrap();
            assert_eq!(got.exact().expect("solved").value, want, "k={k} n={n}");
        }
    }
}

#[test]
fn full_matrix_is_forced_for_single_cells() {
    // Dropping any one entry of the all-ones 5 x 5 leaves a zero 1 x 1 minor.
    assert!(valid((1 << 25) - 1, 5, 1));
    for c in 0..25 {
        assert!(!valid(((1 << 25) - 1) & !(1 << c), 5, 1));
    }
    let got = solve_alpha(1, 5, Duration::from_secs(60)).unwrap();
    assert_eq!(got.exact().unwrap().value, 25);
}
