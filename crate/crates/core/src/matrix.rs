//! The 0/1 matrix type and the permutation actions on it.

use std::fmt;
use std::str::FromStr;

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Largest supported dimension.
pub const MAX_DIM: usize = 4096;

pub type RowSubset = Bits;
pub type ColSubset = Bits;

/// An immutable `n_rows x n_cols` 0/1 matrix stored as one support bit
/// vector per row (bit `j` of row `i` is set iff entry `(i, j)` is 1).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<Bits>,
    ones: usize,
}

fn check_dims(n_rows: usize, n_cols: usize) -> Result<()> {
    if n_rows == 0 || n_cols == 0 {
        return Err(Error::Dimension(format!(
            "matrix must be at least 1x1, got {n_rows}x{n_cols}"
        )));
    }
    if n_rows > MAX_DIM || n_cols > MAX_DIM {
        return Err(Error::Size(format!(
            "{n_rows}x{n_cols} exceeds the {MAX_DIM} dimension limit"
        )));
    }
    Ok(())
}

fn check_perm(perm: &[usize], len: usize, what: &str) -> Result<()> {
    if perm.len() != len {
        return Err(Error::Dimension(format!(
            "{what} permutation has length {}, expected {len}",
            perm.len()
        )));
    }
    let mut seen = vec![false; len];
    for &p in perm {
        if p >= len || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Dimension(format!("{what} permutation is not a bijection")));
        }
    }
    Ok(())
}

impl BinaryMatrix {
    pub fn zeros(n_rows: usize, n_cols: usize) -> Result<Self> {
        check_dims(n_rows, n_cols)?;
        Ok(BinaryMatrix {
            n_rows,
            n_cols,
            rows: vec![Bits::new(n_cols); n_rows],
            ones: 0,
        })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_entries(n, n, (0..n).map(|i| (i, i)))
    }

    /// Builds a matrix from row supports. Every support must have width `n_cols`.
    pub fn from_rows(n_cols: usize, rows: Vec<Bits>) -> Result<Self> {
        check_dims(rows.len(), n_cols)?;
        if let Some(i) = rows.iter().position(|r| r.len() != n_cols) {
            return Err(Error::Dimension(format!(
                "row {i} has width {}, expected {n_cols}",
                rows[i].len()
            )));
        }
        let ones = rows.iter().map(Bits::count).sum();
        Ok(BinaryMatrix {
            n_rows: rows.len(),
            n_cols,
            rows,
            ones,
        })
    }

    /// Builds a matrix with 1s exactly at the listed cells (duplicates are harmless).
    pub fn from_entries(
        n_rows: usize,
        n_cols: usize,
        entries: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self> {
        check_dims(n_rows, n_cols)?;
        let mut rows = vec![Bits::new(n_cols); n_rows];
        for (i, j) in entries {
            if i >= n_rows || j >= n_cols {
                return Err(Error::Dimension(format!(
                    "entry ({i}, {j}) outside {n_rows}x{n_cols}"
                )));
            }
            rows[i].insert(j);
        }
        Self::from_rows(n_cols, rows)
    }

    /// Rows given as strings of `0`/`1`; convenient for literals in tests.
    pub fn from_row_strs(rows: &[&str]) -> Result<Self> {
        let n_cols = rows.first().map_or(0, |r| r.len());
        let mut text = format!("{} {}\n", rows.len(), n_cols);
        for r in rows {
            text.push_str(r);
            text.push('\n');
        }
        text.parse()
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    #[inline]
    pub fn ones_count(&self) -> usize {
        self.ones
    }

    #[inline]
    pub fn row(&self, i: usize) -> &Bits {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Bits] {
        &self.rows
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].contains(j)
    }

    /// All cells holding a 1, in row-major order.
    pub fn ones(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().map(move |j| (i, j)))
    }

    /// A copy with entry `(i, j)` set to `value`.
    pub fn with_entry(&self, i: usize, j: usize, value: bool) -> Result<Self> {
        if i >= self.n_rows || j >= self.n_cols {
            return Err(Error::Dimension(format!("entry ({i}, {j}) out of range")));
        }
        let mut out = self.clone();
        let had = out.rows[i].contains(j);
        if value && !had {
            out.rows[i].insert(j);
            out.ones += 1;
        } else if !value && had {
            out.rows[i].remove(j);
            out.ones -= 1;
        }
        Ok(out)
    }

    pub fn row_sums(&self) -> Vec<usize> {
        self.rows.iter().map(Bits::count).collect()
    }

    pub fn col_sums(&self) -> Vec<usize> {
        let mut sums = vec![0; self.n_cols];
        for (_, j) in self.ones() {
            sums[j] += 1;
        }
        sums
    }

    /// Row `r` of `self` moves to row `row_perm[r]`, column `c` to `col_perm[c]`,
    /// so `result(i, j) = self(row_perm^-1(i), col_perm^-1(j))`.
    pub fn permute(&self, row_perm: &[usize], col_perm: &[usize]) -> Result<Self> {
        check_perm(row_perm, self.n_rows, "row")?;
        check_perm(col_perm, self.n_cols, "column")?;
        let mut rows = vec![Bits::new(self.n_cols); self.n_rows];
        for (r, support) in self.rows.iter().enumerate() {
            let dst = &mut rows[row_perm[r]];
            for c in support.iter() {
                dst.insert(col_perm[c]);
            }
        }
        Ok(BinaryMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            rows,
            ones: self.ones,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Bits::new(self.n_rows); self.n_cols];
        for (i, j) in self.ones() {
            rows[j].insert(i);
        }
        BinaryMatrix {
            n_rows: self.n_cols,
            n_cols: self.n_rows,
            rows,
            ones: self.ones,
        }
    }

    /// Columns that are 0 in every selected row: the intersection of the
    /// complements of the selected supports.
    pub fn common_zero_columns(&self, rows: &RowSubset) -> Result<ColSubset> {
        if rows.len() != self.n_rows {
            return Err(Error::Dimension(format!(
                "row subset has universe {}, matrix has {} rows",
                rows.len(),
                self.n_rows
            )));
        }
        if rows.is_empty() {
            return Err(Error::Contract("row subset must be nonempty".into()));
        }
        let mut zeros = Bits::full(self.n_cols);
        for i in rows.iter() {
            zeros.difference_with(&self.rows[i]);
        }
        Ok(zeros)
    }

    /// Columns with at least one 1 among the selected rows.
    pub fn covered_columns(&self, rows: impl IntoIterator<Item = usize>) -> ColSubset {
        let mut cover = Bits::new(self.n_cols);
        for i in rows {
            cover.union_with(&self.rows[i]);
        }
        cover
    }

    /// The sub-block at the given rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Self> {
        Self::from_entries(
            rows.len(),
            cols.len(),
            rows.iter().enumerate().flat_map(|(a, &i)| {
                cols.iter()
                    .enumerate()
                    .filter(move |&(_, &j)| self.get(i, j))
                    .map(move |(b, _)| (a, b))
            }),
        )
    }

    /// Serializes to the matrix-text format: a `"<rows> <cols>"` header, then
    /// one line of `0`/`1` characters per row, every line newline-terminated.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity((self.n_cols + 1) * (self.n_rows + 1) + 8);
        out.push_str(&format!("{} {}\n", self.n_rows, self.n_cols));
        self.write_body(&mut out);
        out
    }

    /// The row lines only, without the header.
    pub fn body_text(&self) -> String {
        let mut out = String::with_capacity((self.n_cols + 1) * self.n_rows);
        self.write_body(&mut out);
        out
    }

    fn write_body(&self, out: &mut String) {
        for r in &self.rows {
            for j in 0..self.n_cols {
                out.push(if r.contains(j) { '1' } else { '0' });
            }
            out.push('\n');
        }
    }
}

impl FromStr for BinaryMatrix {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
        let (hline, header) = lines
            .next()
            .ok_or_else(|| Error::parse(1, "missing header"))?;
        let dims: Vec<&str> = header.split_whitespace().collect();
        if dims.len() != 2 {
            return Err(Error::parse(hline, "header must be \"<n_rows> <n_cols>\""));
        }
        let parse_dim = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::parse(hline, format!("invalid dimension {s:?}")))
        };
        let (n_rows, n_cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);
        if n_rows == 0 || n_cols == 0 {
            return Err(Error::parse(hline, "dimensions must be positive"));
        }
        if n_rows > MAX_DIM || n_cols > MAX_DIM {
            return Err(Error::parse(hline, format!("dimensions exceed {MAX_DIM}")));
        }

        let mut rows = Vec::with_capacity(n_rows);
        for (lineno, line) in lines.by_ref() {
            if rows.len() == n_rows {
                if line.is_empty() {
                    continue;
                }
                return Err(Error::parse(lineno, "more rows than the header declares"));
            }
            if line.len() != n_cols {
                return Err(Error::parse(
                    lineno,
                    format!("expected {n_cols} entries, found {}", line.chars().count()),
                ));
            }
            let mut bits = Bits::new(n_cols);
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' => bits.insert(j),
                    other => {
                        return Err(Error::parse(lineno, format!("invalid character {other:?}")))
                    }
                }
            }
            rows.push(bits);
        }
        if rows.len() != n_rows {
            return Err(Error::parse(
                text.lines().count() + 1,
                format!("expected {n_rows} rows, found {}", rows.len()),
            ));
        }
        Self::from_rows(n_cols, rows)
    }
}

impl fmt::Display for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryMatrix({}x{}, ones={})\n{}", self.n_rows, self.n_cols, self.ones, self.body_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seven_ones() -> BinaryMatrix {
        BinaryMatrix::from_row_strs(&["1000", "0110", "0101", "0011"]).unwrap()
    }

    #[test]
    fn parse_identity() {
        let m: BinaryMatrix = "2 2\n10\n01".parse().unwrap();
        assert_eq!(m, BinaryMatrix::identity(2).unwrap());
    }

    #[test]
    fn parse_seven_ones() {
        let m: BinaryMatrix = "4 4\n1000\n0110\n0101\n0011\n".parse().unwrap();
        assert_eq!(m.ones_count(), 7);
        assert_eq!(m.to_text(), "4 4\n1000\n0110\n0101\n0011\n");
    }

    #[test]
    fn parse_errors_name_the_line() {
        let err = "1 1\nX".parse::<BinaryMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = "2 3\n101\n10\n".parse::<BinaryMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        let err = "2\n10\n".parse::<BinaryMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, .. }), "{err}");
        let err = "2 2\n10\n".parse::<BinaryMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { .. }), "{err}");
        let err = "1 2\n10\n01\n".parse::<BinaryMatrix>().unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
        assert!("0 2\n".parse::<BinaryMatrix>().is_err());
    }

    #[test]
    fn permute_identity_and_swap() {
        let id = BinaryMatrix::identity(2).unwrap();
        assert_eq!(id.permute(&[0, 1], &[0, 1]).unwrap(), id);
        let anti = id.permute(&[1, 0], &[0, 1]).unwrap();
        assert_eq!(anti, BinaryMatrix::from_row_strs(&["01", "10"]).unwrap());
        assert!(matches!(id.permute(&[0], &[0, 1]), Err(Error::Dimension(_))));
        assert!(matches!(id.permute(&[0, 0], &[0, 1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn permute_follows_inverse_convention() {
        let a = BinaryMatrix::from_row_strs(&["110", "001"]).unwrap();
        let (rp, cp) = ([1, 0], [2, 0, 1]);
        let b = a.permute(&rp, &cp).unwrap();
        for i in 0..2 {
            for j in 0..3 {
                assert_eq!(a.get(i, j), b.get(rp[i], cp[j]));
            }
        }
    }

    #[test]
    fn transpose_cases() {
        let m = seven_ones();
        assert_eq!(m.transpose().transpose(), m);
        assert_eq!(m.transpose().ones_count(), 7);
        let row = BinaryMatrix::from_row_strs(&["111"]).unwrap();
        let col = row.transpose();
        assert_eq!((col.n_rows(), col.n_cols(), col.ones_count()), (3, 1, 3));
    }

    #[test]
    fn common_zero_columns_cases() {
        let z = BinaryMatrix::zeros(3, 3).unwrap();
        let rows = Bits::from_indices(3, [0, 1]);
        assert_eq!(z.common_zero_columns(&rows).unwrap().to_vec(), vec![0, 1, 2]);

        let id = BinaryMatrix::identity(2).unwrap();
        assert!(id.common_zero_columns(&Bits::full(2)).unwrap().is_empty());

        // rows 0110 and 0101 are both zero only in column 0
        let m = seven_ones();
        let rows = Bits::from_indices(4, [1, 2]);
        assert_eq!(m.common_zero_columns(&rows).unwrap().to_vec(), vec![0]);

        assert!(matches!(
            m.common_zero_columns(&Bits::new(4)),
            Err(Error::Contract(_))
        ));
    }

    fn arb_matrix() -> impl Strategy<Value = BinaryMatrix> {
        (1usize..9, 1usize..9).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |cells| {
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

    fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((0..n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #[test]
        fn text_round_trip(m in arb_matrix()) {
            let back: BinaryMatrix = m.to_text().parse().unwrap();
            prop_assert_eq!(&back, &m);
            prop_assert_eq!(back.to_text(), m.to_text());
        }

        #[test]
        fn permutation_preserves_ones(
            (m, rp, cp) in arb_matrix().prop_flat_map(|m| {
                let (r, c) = (m.n_rows(), m.n_cols());
                (Just(m), arb_perm(r), arb_perm(c))
            })
        ) {
            prop_assert_eq!(m.permute(&rp, &cp).unwrap().ones_count(), m.ones_count());
        }

        #[test]
        fn common_zeros_antitone(m in arb_matrix(), seed in any::<u64>()) {
            let n = m.n_rows();
            let mut rows = Bits::new(n);
            rows.insert((seed as usize) % n);
            let mut prev = m.common_zero_columns(&rows).unwrap();
            for step in 1..n {
                rows.insert((seed as usize).wrapping_add(step * 7) % n);
                let next = m.common_zero_columns(&rows).unwrap();
                prop_assert!(next.is_subset(&prev));
                prev = next;
            }
        }
    }
}
