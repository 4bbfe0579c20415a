//! Explicit matrix families with no zero `k x k` minor. Every builder runs
//! the verifier on its output before returning it.

mod layout;

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::verify::find_zero_minor;

use layout::Layout;

/// Largest `a` whose validity threshold has been swept.
pub const MAX_SWEPT_A: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ConstructionId {
    DiagonalIdentity { n: usize, k: usize },
    EvenMiddle { k: usize },
    Band4k5 { k: usize },
    SevenHalves { k: usize },
    TenThirds { k: usize },
    General { k: usize, a: usize },
}

impl ConstructionId {
    pub fn family(&self) -> &'static str {
        match self {
            ConstructionId::DiagonalIdentity { .. } => "diagonal",
            ConstructionId::EvenMiddle { .. } => "even_middle",
            ConstructionId::Band4k5 { .. } => "band_4k5",
            ConstructionId::SevenHalves { .. } => "seven_halves",
            ConstructionId::TenThirds { .. } => "ten_thirds",
            ConstructionId::General { .. } => "general",
        }
    }

    pub fn k(&self) -> usize {
        match *self {
            ConstructionId::DiagonalIdentity { k, .. }
            | ConstructionId::EvenMiddle { k }
            | ConstructionId::Band4k5 { k }
            | ConstructionId::SevenHalves { k }
            | ConstructionId::TenThirds { k }
            | ConstructionId::General { k, .. } => k,
        }
    }

    /// Group width for the banded families.
    pub fn a(&self) -> Option<usize> {
        match *self {
            ConstructionId::Band4k5 { .. } => Some(1),
            ConstructionId::SevenHalves { .. } => Some(2),
            ConstructionId::TenThirds { .. } => Some(3),
            ConstructionId::General { a, .. } => Some(a),
            _ => None,
        }
    }

    /// Side of the square matrix.
    pub fn n(&self) -> usize {
        match *self {
            ConstructionId::DiagonalIdentity { n, .. } => n,
            ConstructionId::EvenMiddle { k } => 2 * k,
            _ => 2 * self.k() + 1,
        }
    }

    pub fn build(&self) -> Result<BuiltMatrix> {
        match *self {
            ConstructionId::DiagonalIdentity { n, k } => build_diagonal(n, k),
            ConstructionId::EvenMiddle { k } => build_even_middle(k),
            ConstructionId::Band4k5 { k } => build_band_4k5(k),
            ConstructionId::SevenHalves { k } => build_seven_halves(k),
            ConstructionId::TenThirds { k } => build_ten_thirds(k),
            ConstructionId::General { k, a } => build_general(k, a),
        }
    }
}

impl fmt::Display for ConstructionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ConstructionId::DiagonalIdentity { n, k } => write!(f, "diagonal(n={n}, k={k})"),
            ConstructionId::General { k, a } => write!(f, "general(k={k}, a={a})"),
            _ => write!(f, "{}(k={})", self.family(), self.k()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltMatrix {
    pub matrix: BinaryMatrix,
    pub claimed_ones: usize,
    pub construction: ConstructionId,
    /// For the banded families, `C` in `ones = ((3a+1)k + C) / a`.
    pub constant: Option<i64>,
}

impl BuiltMatrix {
    /// The block below the identity rows for the two families whose proofs
    /// rest on a surplus property of that block.
    pub fn inner_block(&self) -> Option<BinaryMatrix> {
        let (k, size) = match self.construction {
            ConstructionId::EvenMiddle { k } if k >= 2 => (k, k + 1),
            ConstructionId::Band4k5 { k } if k >= 2 => (k, k + 2),
            _ => return None,
        };
        let idx: Vec<usize> = (k - 1..k - 1 + size).collect();
        self.matrix.submatrix(&idx, &idx).ok()
    }
}

fn certify(matrix: BinaryMatrix, construction: ConstructionId, constant: Option<i64>) -> Result<BuiltMatrix> {
    let k = construction.k();
    let claimed_ones = formula_ones(construction)?;
    if matrix.ones_count() != claimed_ones {
        return Err(Error::Contract(format!(
            "{construction} has {} ones, expected {claimed_ones}",
            matrix.ones_count()
        )));
    }
    if let Some(w) = find_zero_minor(&matrix, k)? {
        return Err(Error::Contract(format!(
            "{construction} has a zero minor on rows {:?}, columns {:?}",
            w.rows.to_vec(),
            w.cols.to_vec()
        )));
    }
    Ok(BuiltMatrix {
        matrix,
        claimed_ones,
        construction,
        constant,
    })
}

/// The first `2(n-k)+1` diagonal entries.
pub fn build_diagonal(n: usize, k: usize) -> Result<BuiltMatrix> {
    if !(2 * k > n && k <= n) {
        return Err(Error::Domain(format!("diagonal family needs n/2 < k <= n, got n={n}, k={k}")));
    }
    let ones = 2 * (n - k) + 1;
    let m = BinaryMatrix::from_entries(n, n, (0..ones).map(|i| (i, i)))?;
    certify(m, ConstructionId::DiagonalIdentity { n, k }, None)
}

/// `k-1` diagonal ones, then a `(k+1) x (k+1)` block with two ones per row:
/// the first row at the first two columns, the last at the last two, and row
/// `j` in between at columns `j-1` and `j+1`.
pub fn build_even_middle(k: usize) -> Result<BuiltMatrix> {
    if k < 2 {
        return Err(Error::Domain(format!("even middle family needs k >= 2, got {k}")));
    }
    let o = k - 1;
    let mut entries: Vec<(usize, usize)> = (0..o).map(|i| (i, i)).collect();
    entries.extend([(o, o), (o, o + 1)]);
    for j in 1..k {
        entries.extend([(o + j, o + j - 1), (o + j, o + j + 1)]);
    }
    entries.extend([(o + k, o + k - 1), (o + k, o + k)]);
    let m = BinaryMatrix::from_entries(2 * k, 2 * k, entries)?;
    certify(m, ConstructionId::EvenMiddle { k }, None)
}

/// `k-1` diagonal ones, then a `(k+2) x (k+2)` band with three ones per row.
/// `k = 1` gives the all-ones `3 x 3`.
pub fn build_band_4k5(k: usize) -> Result<BuiltMatrix> {
    if k < 1 {
        return Err(Error::Domain("band family needs k >= 1".into()));
    }
    let n = 2 * k + 1;
    let id = ConstructionId::Band4k5 { k };
    if k == 1 {
        let m = BinaryMatrix::from_entries(3, 3, (0..9).map(|i| (i / 3, i % 3)))?;
        return certify(m, id, Some(5));
    }
    let o = k - 1;
    let mut entries: Vec<(usize, usize)> = (0..o).map(|i| (i, i)).collect();
    // One-based block coordinates.
    let mut put = |r: usize, cs: [usize; 3]| {
        entries.extend(cs.iter().map(|&c| (o + r - 1, o + c - 1)));
    };
    put(1, [1, 2, 3]);
    put(2, [1, 2, 4]);
    for j in 3..=k {
        put(j, [j - 2, j, j + 2]);
    }
    put(k + 1, [k - 1, k + 1, k + 2]);
    put(k + 2, [k, k + 1, k + 2]);
    let m = BinaryMatrix::from_entries(n, n, entries)?;
    certify(m, id, Some(5))
}

/// Smallest `k` for which [`build_general`] with this `a` is valid, for every
/// `k` up to 100.
pub fn min_k(a: usize) -> usize {
    match a {
        0 | 1 => 1,
        _ => 2 * a - 2,
    }
}

/// Column offset within a group of width `b` for the star of a given rank:
/// the two outer stars at the ends, the middle one next to the first.
fn spread(b: usize, rank: usize) -> usize {
    match rank {
        0 => 0,
        1 => 1.min(b - 1),
        _ => b - 1,
    }
}

fn general_layout(k: usize, a: usize) -> Layout {
    let width = k + 2 * a - 1;
    let mut groups = vec![a; width / a];
    if width % a > 0 {
        groups.push(width % a);
    }
    Layout {
        identity: k + 2 - 2 * a,
        closing_pair: false,
        groups,
        place: spread,
    }
}

/// The unverified banded layout for `a >= 2`, or `None` when `k` is too
/// small for it to exist (negative identity block).
pub fn general_candidate(k: usize, a: usize) -> Option<BinaryMatrix> {
    if a < 2 || k + 2 < 2 * a {
        return None;
    }
    general_layout(k, a).build().ok()
}

/// `C` in `((3a+1)k + C) / a` for the layout at this `k`.
pub fn realized_constant(k: usize, a: usize) -> i64 {
    if a == 1 {
        return 5;
    }
    let m = (k + 2 * a - 1).div_ceil(a);
    (2 * a * a + a * m) as i64 - k as i64
}

fn banded(k: usize, a: usize, id: ConstructionId) -> Result<BuiltMatrix> {
    let m = general_layout(k, a).build()?;
    certify(m, id, Some(realized_constant(k, a)))
}

/// `k + 2 - 2a` identity rows, then groups of `a` columns each carrying a
/// chain of `a-1` two-ones rows, a shorter remainder group when `a` does not
/// divide `k + 2a - 1`, and one three-ones star row per group linking it to
/// the next two groups cyclically. `a = 1` is the `4k+5` band.
pub fn build_general(k: usize, a: usize) -> Result<BuiltMatrix> {
    if a == 0 || k == 0 {
        return Err(Error::Domain(format!("general family needs a, k >= 1, got a={a}, k={k}")));
    }
    if a == 1 {
        let b = build_band_4k5(k)?;
        return Ok(BuiltMatrix {
            construction: ConstructionId::General { k, a },
            ..b
        });
    }
    if k < min_k(a) {
        return Err(Error::Domain(format!("general family with a={a} needs k >= min_k = {}, got {k}", min_k(a))));
    }
    banded(k, a, ConstructionId::General { k, a })
}

/// Ones `(7k+11)/2` for odd `k`, `(7k+12)/2` for even `k`. `k` of 1 or 2
/// gives the band matrix, which has the same count.
pub fn build_seven_halves(k: usize) -> Result<BuiltMatrix> {
    if k <= 2 {
        let b = build_band_4k5(k)?;
        return Ok(BuiltMatrix {
            construction: ConstructionId::SevenHalves { k },
            constant: Some(realized_constant(k, 2)),
            ..b
        });
    }
    banded(k, 2, ConstructionId::SevenHalves { k })
}

/// Ones `(10k + 24, 23, 25)/3` by `k mod 3`.
pub fn build_ten_thirds(k: usize) -> Result<BuiltMatrix> {
    if k < min_k(3) {
        return Err(Error::Domain(format!("ten-thirds family needs k >= min_k = {}, got {k}", min_k(3))));
    }
    banded(k, 3, ConstructionId::TenThirds { k })
}

/// The closed-form one count of a family member.
pub fn formula_ones(id: ConstructionId) -> Result<usize> {
    let out_of_domain = || Error::Domain(format!("{id} is outside its family's domain"));
    match id {
        ConstructionId::DiagonalIdentity { n, k } => {
            if 2 * k > n && k <= n {
                Ok(2 * (n - k) + 1)
            } else {
                Err(out_of_domain())
            }
        }
        ConstructionId::EvenMiddle { k } if k >= 2 => Ok(3 * k + 1),
        ConstructionId::Band4k5 { k } if k >= 1 => Ok(4 * k + 5),
        ConstructionId::SevenHalves { k } if k >= 1 => Ok(if k % 2 == 1 { (7 * k + 11) / 2 } else { (7 * k + 12) / 2 }),
        ConstructionId::TenThirds { k } if k >= min_k(3) => Ok(match k % 3 {
            0 => (10 * k + 24) / 3,
            1 => (10 * k + 23) / 3,
            _ => (10 * k + 25) / 3,
        }),
        ConstructionId::General { k, a } if a >= 1 && k >= min_k(a) => {
            let num = ((3 * a + 1) * k) as i64 + realized_constant(k, a);
            Ok((num / a as i64) as usize)
        }
        _ => Err(out_of_domain()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::are_equivalent;
    use crate::verify::check_row_surplus;

    fn fixture(name: &str) -> BinaryMatrix {
        let path = format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"));
        std::fs::read_to_string(path).unwrap().parse().unwrap()
    }

    #[test]
    fn diagonal_cases() {
        assert_eq!(build_diagonal(5, 4).unwrap().matrix.ones_count(), 3);
        assert_eq!(build_diagonal(7, 4).unwrap().claimed_ones, 7);
        let one = build_diagonal(6, 6).unwrap().matrix;
        assert_eq!(one.ones().collect::<Vec<_>>(), vec![(0, 0)]);
        assert!(matches!(build_diagonal(6, 3), Err(Error::Domain(_))));
        assert!(matches!(build_diagonal(4, 5), Err(Error::Domain(_))));
    }

    #[test]
    fn even_middle_matches_displayed_matrices() {
        assert_eq!(build_even_middle(2).unwrap().matrix, fixture("four_even.txt"));
        assert_eq!(build_even_middle(3).unwrap().matrix, fixture("six_even.txt"));
        assert_eq!(build_even_middle(50).unwrap().claimed_ones, 151);
        assert!(matches!(build_even_middle(1), Err(Error::Domain(_))));
    }

    #[test]
    fn band_cases() {
        let b2 = build_band_4k5(2).unwrap();
        assert_eq!(b2.claimed_ones, 13);
        assert_eq!(b2.matrix, fixture("five_left.txt"));
        assert_eq!(build_band_4k5(3).unwrap().claimed_ones, 17);
        let b1 = build_band_4k5(1).unwrap();
        assert_eq!(b1.matrix.ones_count(), 9);
    }

    #[test]
    fn inner_blocks_have_surplus() {
        for k in 2..=12 {
            let b = build_even_middle(k).unwrap().inner_block().unwrap();
            assert_eq!(b.n_rows(), k + 1);
            assert!(check_row_surplus(&b, 1).unwrap(), "k={k}");
            let c = build_band_4k5(k).unwrap().inner_block().unwrap();
            assert_eq!(c.n_rows(), k + 2);
            assert!(check_row_surplus(&c, 2).unwrap(), "k={k}");
        }
    }

    #[test]
    fn seven_halves_cases() {
        let s3 = build_seven_halves(3).unwrap();
        assert_eq!(s3.claimed_ones, 16);
        assert!(are_equivalent(&s3.matrix, &fixture("seven.txt"), false).unwrap());
        let s4 = build_seven_halves(4).unwrap();
        assert_eq!(s4.claimed_ones, 20);
        // A different optimal class from both displayed 9 x 9 matrices.
        assert!(!are_equivalent(&s4.matrix, &fixture("nine_left.txt"), false).unwrap());
        assert!(!are_equivalent(&s4.matrix, &fixture("nine_right.txt"), false).unwrap());
        let classes = crate::solve::enumerate_optima(4, 9, 20, None).unwrap().classes;
        let f = crate::canon::canonical_form(&s4.matrix, false).unwrap();
        assert!(classes.contains(&f));
        assert_eq!(build_seven_halves(19).unwrap().claimed_ones, 72);
        assert_eq!(build_seven_halves(1).unwrap().claimed_ones, 9);
        assert_eq!(build_seven_halves(2).unwrap().claimed_ones, 13);
    }

    #[test]
    fn ten_thirds_cases() {
        assert_eq!(build_ten_thirds(19).unwrap().claimed_ones, 71);
        assert_eq!(build_ten_thirds(20).unwrap().claimed_ones, 75);
        assert_eq!(build_ten_thirds(21).unwrap().claimed_ones, 78);
        let err = build_ten_thirds(3).unwrap_err();
        assert!(err.to_string().contains("min_k = 4"), "{err}");
    }

    #[test]
    fn general_agrees_with_named_families() {
        for k in 5..=40 {
            assert_eq!(
                build_general(k, 2).unwrap().claimed_ones,
                formula_ones(ConstructionId::SevenHalves { k }).unwrap()
            );
        }
        for k in min_k(3)..=40 {
            assert_eq!(
                build_general(k, 3).unwrap().matrix,
                build_ten_thirds(k).unwrap().matrix
            );
        }
        let g = build_general(40, 4).unwrap();
        let c = g.constant.unwrap();
        assert_eq!(c, 40);
        assert!(g.claimed_ones as i64 * 4 <= 13 * 40 + c);
        assert_eq!(build_general(7, 1).unwrap().claimed_ones, 33);
        assert!(matches!(build_general(5, 4), Err(Error::Domain(_))));
    }

    #[test]
    fn constants_depend_on_residue_only() {
        for a in 2..=MAX_SWEPT_A {
            for r in 0..a {
                let cs: Vec<i64> = (0..6)
                    .map(|q| a * (q + 2) + r)
                    .map(|k| realized_constant(k, a))
                    .collect();
                assert!(cs.windows(2).all(|w| w[0] == w[1]), "a={a} r={r} {cs:?}");
            }
        }
        assert_eq!(realized_constant(19, 3), 23);
        assert_eq!(realized_constant(20, 3), 25);
        assert_eq!(realized_constant(21, 3), 24);
        assert_eq!(realized_constant(9, 2), 11);
        assert_eq!(realized_constant(10, 2), 12);
    }

    #[test]
    fn formula_examples() {
        assert_eq!(formula_ones(ConstructionId::EvenMiddle { k: 5 }).unwrap(), 16);
        assert_eq!(formula_ones(ConstructionId::Band4k5 { k: 10 }).unwrap(), 45);
        assert_eq!(formula_ones(ConstructionId::TenThirds { k: 19 }).unwrap(), 71);
        assert!(formula_ones(ConstructionId::EvenMiddle { k: 1 }).is_err());
        assert!(formula_ones(ConstructionId::TenThirds { k: 2 }).is_err());
    }

    #[test]
    fn dominance_from_22() {
        for k in 22..=200 {
            let t = formula_ones(ConstructionId::TenThirds { k }).unwrap();
            let s = formula_ones(ConstructionId::SevenHalves { k }).unwrap();
            let b = formula_ones(ConstructionId::Band4k5 { k }).unwrap();
            assert!(t < s && s < b, "k={k}");
        }
    }

    /// At `k = 20` a closing two-ones row under the identity and eight full
    /// groups of three give a valid matrix with 74 ones, one fewer than the
    /// ten-thirds count.
    #[test]
    fn twenty_admits_seventy_four() {
        let l = Layout {
            identity: 16,
            closing_pair: true,
            groups: vec![3; 8],
            place: spread,
        };
        assert_eq!(l.size(), 41);
        assert_eq!(l.ones(), 74);
        let m = l.build().unwrap();
        assert_eq!(m.ones_count(), 74);
        assert!(find_zero_minor(&m, 20).unwrap().is_none());
    }
}
