//! Block layout shared by the banded families: identity rows, an optional
//! two-ones row closing the identity block, chained pair rows in groups, and
//! three-ones star rows beneath the groups, one per group.

use crate::error::Result;
use crate::matrix::BinaryMatrix;

/// Star row `t` touches groups `t`, `t-1`, `t-2` (mod `m`), taking rank 0,
/// 1, 2 among the three stars of each of those groups.
fn star_rows(m: usize) -> impl Iterator<Item = [(usize, usize); 3]> {
    (0..m).map(move |t| [(t, 0), ((t + m - 1) % m, 1), ((t + m - 2) % m, 2)])
}

/// Column offset within a group of `b` columns for the star of rank `rank`.
pub(crate) type Placement = fn(b: usize, rank: usize) -> usize;

#[derive(Clone, Debug)]
pub(crate) struct Layout {
    pub identity: usize,
    pub closing_pair: bool,
    pub groups: Vec<usize>,
    pub place: Placement,
}

impl Layout {
    pub(crate) fn size(&self) -> usize {
        self.identity + usize::from(self.closing_pair) + self.groups.iter().sum::<usize>()
    }

    pub(crate) fn ones(&self) -> usize {
        self.identity
            + 2 * usize::from(self.closing_pair)
            + 2 * self.groups.iter().sum::<usize>()
            + self.groups.len()
    }

    pub(crate) fn build(&self) -> Result<BinaryMatrix> {
        let n = self.size();
        let mut entries: Vec<(usize, usize)> = Vec::with_capacity(self.ones());
        let mut row = 0;
        for i in 0..self.identity {
            entries.push((row, i));
            row += 1;
        }
        let mut col = self.identity;
        if self.closing_pair {
            entries.push((row, col.saturating_sub(1)));
            entries.push((row, col));
            row += 1;
            col += 1;
        }
        let mut starts = Vec::with_capacity(self.groups.len());
        for &b in &self.groups {
            starts.push(col);
            for c in col..col + b - 1 {
                entries.push((row, c));
                entries.push((row, c + 1));
                row += 1;
            }
            col += b;
        }
        for stars in star_rows(self.groups.len()) {
            for (g, rank) in stars {
                entries.push((row, starts[g] + (self.place)(self.groups[g], rank)));
            }
            row += 1;
        }
        debug_assert_eq!(row, n);
        BinaryMatrix::from_entries(n, n, entries)
    }
}
