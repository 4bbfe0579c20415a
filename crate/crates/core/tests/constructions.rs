//! Every family over its domain up to k = 100, and the validity thresholds of
//! the general family against the golden file.

use std::collections::BTreeMap;
use std::time::Instant;

use alpha_core::bounds::upper_bound_report;
use alpha_core::construct::{
    build_band_4k5, build_diagonal, build_even_middle, build_general, build_seven_halves,
    build_ten_thirds, formula_ones, general_candidate, min_k, BuiltMatrix, ConstructionId,
    MAX_SWEPT_A,
};
use alpha_core::find_zero_minor;

const K_MAX: usize = 100;

fn check(b: &BuiltMatrix) {
    let id = b.construction;
    assert_eq!(b.matrix.ones_count(), formula_ones(id).unwrap(), "{id}");
    assert_eq!(b.matrix.ones_count(), b.claimed_ones, "{id}");
    assert_eq!(b.matrix.n_rows(), id.n());
    assert!(find_zero_minor(&b.matrix, id.k()).unwrap().is_none(), "{id}");
}

#[test]
fn every_family_to_k_100() {
    let start = Instant::now();
    for k in 1..=K_MAX {
        check(&build_band_4k5(k).unwrap());
        check(&build_seven_halves(k).unwrap());
        if k >= 2 {
            check(&build_even_middle(k).unwrap());
        }
        if k >= min_k(3) {
            check(&build_ten_thirds(k).unwrap());
        }
        for a in 1..=MAX_SWEPT_A {
            if k >= min_k(a) {
                check(&build_general(k, a).unwrap());
            }
        }
    }
    for n in 1..=40 {
        for k in n / 2 + 1..=n {
            check(&build_diagonal(n, k).unwrap());
        }
    }
    assert!(start.elapsed().as_secs() < 300);
}

/// Smallest `k0` such that the candidate exists and verifies for every `k`
/// in `k0..=K_MAX`.
fn discovered_threshold(a: usize) -> usize {
    if a == 1 {
        return 1;
    }
    let mut k0 = K_MAX + 1;
    for k in (1..=K_MAX).rev() {
        match general_candidate(k, a) {
            Some(m) if find_zero_minor(&m, k).unwrap().is_none() => k0 = k,
            _ => break,
        }
    }
    k0
}

#[test]
fn thresholds_match_golden_file() {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/data/min_k.json")).unwrap();
    let golden: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(golden["k_max"], K_MAX);
    let want: BTreeMap<String, usize> = serde_json::from_value(golden["min_k"].clone()).unwrap();
    for a in 1..=MAX_SWEPT_A {
        let found = discovered_threshold(a);
        assert_eq!(found, want[&a.to_string()], "a={a}");
        assert_eq!(found, min_k(a), "a={a}");
        if found > 1 {
            assert!(build_general(found - 1, a).is_err());
        }
    }
}

#[test]
fn crossover_counts() {
    for (k, ten, seven) in [(19, 71, 72), (20, 75, 76), (21, 78, 79)] {
        assert_eq!(build_ten_thirds(k).unwrap().claimed_ones, ten);
        assert_eq!(build_seven_halves(k).unwrap().claimed_ones, seven);
        assert_eq!(upper_bound_report(k as u64).best_upper, ten as u64);
    }
}

#[test]
fn sidecar_shape() {
    let id = ConstructionId::General { k: 12, a: 4 };
    let v = serde_json::to_value(id).unwrap();
    assert_eq!(v["family"], "general");
    assert_eq!(v["k"], 12);
    assert_eq!(v["a"], 4);
}
