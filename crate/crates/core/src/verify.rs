//! Zero-minor detection and row surplus checks.

mod surplus;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::matrix::{BinaryMatrix, ColSubset, RowSubset};

pub(crate) use surplus::{certificate, sized, Certificate};

/// Rows above this count go through the matching certificate before the
/// exhaustive search.
const FAST_PATH_ROWS: usize = 14;

const BRUTE_FORCE_LIMIT: u128 = 10_000_000;
const SURPLUS_ROW_LIMIT: usize = 24;

/// `k` rows and `k` columns whose induced minor is all zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MinorWitness {
    pub rows: RowSubset,
    pub cols: ColSubset,
}

impl MinorWitness {
    pub fn k(&self) -> usize {
        self.rows.count()
    }

    /// True if the witness has matching sizes and every induced entry of `a` is 0.
    pub fn validates(&self, a: &BinaryMatrix) -> bool {
        let k = self.rows.count();
        self.rows.len() == a.n_rows()
            && self.cols.len() == a.n_cols()
            && k > 0
            && self.cols.count() == k
            && self
                .rows
                .iter()
                .all(|i| self.cols.iter().all(|j| !a.get(i, j)))
    }
}

fn check_k(a: &BinaryMatrix, k: usize) -> Result<()> {
    if k == 0 || k > a.n_rows().min(a.n_cols()) {
        return Err(Error::Dimension(format!(
            "k={k} outside 1..={} for a {}x{} matrix",
            a.n_rows().min(a.n_cols()),
            a.n_rows(),
            a.n_cols()
        )));
    }
    Ok(())
}

fn least_cols(zeros: &Bits, k: usize) -> ColSubset {
    Bits::from_indices(zeros.len(), zeros.iter().take(k))
}

/// Visiting order of the search: ascending support size, ties by index.
pub fn row_order(a: &BinaryMatrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..a.n_rows()).collect();
    order.sort_by_key(|&i| (a.row(i).count(), i));
    order
}

/// Finds `k` rows with at least `k` common zero columns.
///
/// Rows are visited in [`row_order`]; the witness is the first `k`-set in that
/// order (lexicographically least sequence of positions), and its columns are
/// the `k` smallest common zero columns.
///
/// Only subsets of size exactly `k` are examined: the common zero set of a
/// superset is contained in that of each of its `k`-subsets, so a larger set
/// never succeeds where all its `k`-subsets fail.
pub fn find_zero_minor(a: &BinaryMatrix, k: usize) -> Result<Option<MinorWitness>> {
    check_k(a, k)?;
    let large = a.n_rows() > FAST_PATH_ROWS;
    let known = large && certificate(a, k) == Certificate::Exists;
    if large && !known && certificate(a, k) == Certificate::None {
        return Ok(None);
    }
    Ok(search(a, k, known))
}

fn search(a: &BinaryMatrix, k: usize, greedy: bool) -> Option<MinorWitness> {
    let order = row_order(a);
    let zeros: Vec<Bits> = order
        .iter()
        .map(|&i| {
            let mut z = Bits::full(a.n_cols());
            z.difference_with(a.row(i));
            z
        })
        .collect();

    let mut stack: Vec<Bits> = Vec::with_capacity(k + 1);
    stack.push(Bits::full(a.n_cols()));
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let found = if greedy {
        extend_greedily(a, &order, &zeros, k, &mut chosen, &mut stack)
    } else {
        descend(&zeros, k, 0, &mut chosen, &mut stack)
    };
    if !found {
        return None;
    }
    let rows = Bits::from_indices(a.n_rows(), chosen.iter().map(|&p| order[p]));
    let cols = least_cols(stack.last().expect("nonempty stack"), k);
    Some(MinorWitness { rows, cols })
}

/// Builds the first witness in visiting order one row at a time, asking the
/// sized certificate whether the current prefix still extends. Falls back to
/// [`descend`] from the current prefix when the certificate is inconclusive.
fn extend_greedily(
    a: &BinaryMatrix,
    order: &[usize],
    zeros: &[Bits],
    k: usize,
    chosen: &mut Vec<usize>,
    stack: &mut Vec<Bits>,
) -> bool {
    let n_cols = a.n_cols();
    let mut p = 0;
    while chosen.len() < k {
        if p == order.len() {
            return false;
        }
        let mut next = stack.last().expect("nonempty stack").clone();
        next.intersect_with(&zeros[p]);
        let covered = n_cols - next.count();
        if covered > n_cols - k {
            p += 1;
            continue;
        }
        let need = k - chosen.len() - 1;
        let verdict = if need == 0 {
            Certificate::Exists
        } else {
            let rest: Vec<Bits> = order[p + 1..]
                .iter()
                .map(|&i| {
                    let mut s = a.row(i).clone();
                    s.intersect_with(&next);
                    s
                })
                .collect();
            let refs: Vec<&Bits> = rest.iter().collect();
            sized(&refs, n_cols, need, n_cols - k - covered)
        };
        match verdict {
            Certificate::Exists => {
                chosen.push(p);
                stack.push(next);
            }
            Certificate::None => {}
            Certificate::Unknown => return descend(zeros, k, p, chosen, stack),
        }
        p += 1;
    }
    true
}

fn descend(
    zeros: &[Bits],
    k: usize,
    start: usize,
    chosen: &mut Vec<usize>,
    stack: &mut Vec<Bits>,
) -> bool {
    if chosen.len() == k {
        return true;
    }
    let need = k - chosen.len();
    for p in start..zeros.len() {
        if zeros.len() - p < need {
            break;
        }
        let mut next = stack.last().expect("nonempty stack").clone();
        next.intersect_with(&zeros[p]);
        if next.count() < k {
            continue;
        }
        chosen.push(p);
        stack.push(next);
        if descend(zeros, k, p + 1, chosen, stack) {
            return true;
        }
        stack.pop();
        chosen.pop();
    }
    false
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k.min(n));
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > u128::MAX / 4096 {
            return u128::MAX;
        }
    }
    c
}

/// Exhaustive check over every `k`-subset of rows in index order.
pub fn brute_force_zero_minor(a: &BinaryMatrix, k: usize) -> Result<Option<MinorWitness>> {
    check_k(a, k)?;
    let subsets = binomial(a.n_rows(), k);
    if subsets > BRUTE_FORCE_LIMIT {
        return Err(Error::Size(format!(
            "C({}, {k}) = {subsets} row subsets exceeds {BRUTE_FORCE_LIMIT}",
            a.n_rows()
        )));
    }
    let n = a.n_rows();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let rows = Bits::from_indices(n, idx.iter().copied());
        let zeros = a.common_zero_columns(&rows)?;
        if zeros.count() >= k {
            let cols = least_cols(&zeros, k);
            return Ok(Some(MinorWitness { rows, cols }));
        }
        // next combination in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// True iff every nonempty row subset `S` with `|S| + c <= n_cols` hits at
/// least `|S| + c` columns. Larger subsets are skipped since no matrix could
/// meet the bound on them.
pub fn check_row_surplus(a: &BinaryMatrix, c: usize) -> Result<bool> {
    if a.n_rows() > SURPLUS_ROW_LIMIT {
        return Err(Error::Size(format!(
            "{} rows exceeds the surplus check limit of {SURPLUS_ROW_LIMIT}",
            a.n_rows()
        )));
    }
    fn walk(rows: &[Bits], start: usize, size: usize, cover: &Bits, c: usize) -> bool {
        if size + 1 + c > cover.len() {
            return true;
        }
        for p in start..rows.len() {
            let mut next = cover.clone();
            next.union_with(&rows[p]);
            if next.count() < size + 1 + c || !walk(rows, p + 1, size + 1, &next, c) {
                return false;
            }
        }
        true
    }
    Ok(walk(a.rows(), 0, 0, &Bits::new(a.n_cols()), c))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::from_row_strs(rows).unwrap()
    }

    fn seven_by_seven() -> BinaryMatrix {
        m(&[
            "1000000", "0110000", "0001100", "0000011", "0100101", "0011001", "0010110",
        ])
    }

    #[test]
    fn zero_matrix_witness() {
        let z = BinaryMatrix::zeros(3, 3).unwrap();
        let w = find_zero_minor(&z, 2).unwrap().unwrap();
        assert_eq!(w.rows.to_vec(), vec![0, 1]);
        assert_eq!(w.cols.to_vec(), vec![0, 1]);
        assert!(w.validates(&z));
    }

    #[test]
    fn known_optima_have_no_witness() {
        let left = m(&["10000", "01110", "01101", "01011", "00111"]);
        assert_eq!(left.ones_count(), 13);
        assert!(find_zero_minor(&left, 2).unwrap().is_none());
        let s = seven_by_seven();
        assert_eq!(s.ones_count(), 16);
        assert!(find_zero_minor(&s, 3).unwrap().is_none());
    }

    #[test]
    fn every_deletion_from_the_seven_matrix_breaks_it() {
        let s = seven_by_seven();
        let mut broken = 0;
        for (i, j) in s.ones().collect::<Vec<_>>() {
            let d = s.with_entry(i, j, false).unwrap();
            let oracle = brute_force_zero_minor(&d, 3).unwrap();
            let found = find_zero_minor(&d, 3).unwrap();
            assert_eq!(oracle.is_some(), found.is_some());
            if let Some(w) = found {
                assert!(w.validates(&d));
                broken += 1;
            }
        }
        assert_eq!(broken, 16);
    }

    #[test]
    fn identity_cases() {
        let id = BinaryMatrix::identity(4).unwrap();
        let w = brute_force_zero_minor(&id, 2).unwrap().unwrap();
        assert_eq!(w.rows.to_vec(), vec![0, 1]);
        assert_eq!(w.cols.to_vec(), vec![2, 3]);
        assert!(brute_force_zero_minor(&id, 3).unwrap().is_none());
        assert!(find_zero_minor(&id, 3).unwrap().is_none());
    }

    #[test]
    fn k_out_of_range() {
        let id = BinaryMatrix::identity(3).unwrap();
        assert!(matches!(find_zero_minor(&id, 0), Err(Error::Dimension(_))));
        assert!(matches!(find_zero_minor(&id, 4), Err(Error::Dimension(_))));
    }

    #[test]
    fn brute_force_guard() {
        let z = BinaryMatrix::zeros(60, 60).unwrap();
        assert!(matches!(brute_force_zero_minor(&z, 10), Err(Error::Size(_))));
    }

    #[test]
    fn surplus_cases() {
        // inner block of the 6x6 ten-ones matrix
        let b = m(&["1100", "1010", "0101", "0011"]);
        assert!(check_row_surplus(&b, 1).unwrap());
        assert!(!check_row_surplus(&b, 2).unwrap());
        let zero_row = m(&["11", "00"]);
        assert!(!check_row_surplus(&zero_row, 0).unwrap());
        let big = BinaryMatrix::zeros(25, 3).unwrap();
        assert!(matches!(check_row_surplus(&big, 0), Err(Error::Size(_))));
    }

    #[test]
    fn greedy_witness_matches_plain_search() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut compared = 0;
        for _ in 0..300 {
            let n = rng.gen_range(15..22);
            let ident = rng.gen_range(0..n / 2);
            let mut entries: Vec<(usize, usize)> = (0..ident).map(|i| (i, i)).collect();
            for i in ident..n {
                for _ in 0..rng.gen_range(1..4) {
                    entries.push((i, rng.gen_range(ident..n)));
                }
            }
            let a = BinaryMatrix::from_entries(n, n, entries).unwrap();
            let k = rng.gen_range(n / 3..=n / 2 + 1);
            let plain = search(&a, k, false);
            if plain.is_some() {
                assert_eq!(search(&a, k, true), plain);
                compared += 1;
            }
            assert_eq!(find_zero_minor(&a, k).unwrap(), plain);
        }
        assert!(compared > 50, "{compared}");
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BinaryMatrix> {
        (2usize..=max, 2usize..=max, 0.1f64..0.9).prop_flat_map(|(r, c, p)| {
            proptest::collection::vec(proptest::bool::weighted(p), r * c).prop_map(move |cells| {
                BinaryMatrix::from_entries(
                    r,
                    c,
                    cells
                        .iter()
                        .enumerate()
                        .filter(|(_, &v)| v)
                        .map(|(idx, _)| (idx / c, idx % c)),
                )
                .unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn search_agrees_with_brute_force(a in arb_matrix(7), kk in 1usize..8) {
            let k = 1 + (kk - 1) % a.n_rows().min(a.n_cols());
            let fast = find_zero_minor(&a, k).unwrap();
            let slow = brute_force_zero_minor(&a, k).unwrap();
            prop_assert_eq!(fast.is_some(), slow.is_some());
            if let Some(w) = fast {
                prop_assert!(w.validates(&a));
                prop_assert_eq!(w.k(), k);
            }
        }

        #[test]
        fn transpose_symmetry(a in arb_matrix(7), kk in 1usize..8) {
            let k = 1 + (kk - 1) % a.n_rows().min(a.n_cols());
            let t = a.transpose();
            prop_assert_eq!(
                find_zero_minor(&a, k).unwrap().is_some(),
                find_zero_minor(&t, k).unwrap().is_some()
            );
        }

        #[test]
        fn smaller_minors_inherit(a in arb_matrix(7), kk in 1usize..8) {
            let k = 1 + (kk - 1) % a.n_rows().min(a.n_cols());
            if find_zero_minor(&a, k).unwrap().is_some() {
                for j in 1..k {
                    prop_assert!(find_zero_minor(&a, j).unwrap().is_some());
                }
            }
        }
    }
}
