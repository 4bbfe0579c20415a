//! Witness branching: find a zero minor of the partial matrix and branch on
//! which of its cells becomes a one.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::Instant;

use rayon::prelude::*;

use crate::error::Result;
use crate::matrix::BinaryMatrix;
use crate::verify::find_zero_minor;

/// `ones_count(partial)` plus the size of a greedily packed family of
/// cell-disjoint zero minors. Each packed minor needs its own new one.
pub fn lower_bound(k: usize, n: usize, partial: &BinaryMatrix) -> Result<usize> {
    let _ = n;
    let mut blocked = partial.clone();
    let mut packed = 0;
    while let Some(w) = find_zero_minor(&blocked, k)? {
        for r in w.rows.iter() {
            for c in w.cols.iter() {
                blocked = blocked.with_entry(r, c, true)?;
            }
        }
        packed += 1;
    }
    Ok(partial.ones_count() + packed)
}

pub(crate) struct Branching<'a> {
    pub k: usize,
    pub n: usize,
    pub deadline: Option<Instant>,
    pub abort: &'a AtomicBool,
    pub nodes: AtomicU64,
    pub prunes: AtomicU64,
}

impl Branching<'_> {
    /// Root subproblems after symmetry breaking: a one at `(0,0)`, then a
    /// second one at an orbit representative of the stabilizer.
    pub(crate) fn roots(&self) -> Result<Vec<BinaryMatrix>> {
        let first = BinaryMatrix::zeros(self.n, self.n)?.with_entry(0, 0, true)?;
        if self.n == 1 || find_zero_minor(&first, self.k)?.is_none() {
            return Ok(vec![first]);
        }
        let reps = [(0, 1), (1, 0), (1, 1)];
        self.prunes
            .fetch_add((self.n * self.n - 1 - reps.len()) as u64, Ordering::Relaxed);
        reps.iter()
            .map(|&(r, c)| first.with_entry(r, c, true))
            .collect()
    }

    /// A valid completion of `partial` with at most `t` ones.
    pub(crate) fn complete(&self, partial: BinaryMatrix, t: usize) -> Result<Option<BinaryMatrix>> {
        if self.abort.load(Ordering::Relaxed) {
            return Ok(None);
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed);
        if count % 256 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.abort.store(true, Ordering::Relaxed);
                    return Ok(None);
                }
            }
        }
        let Some(w) = find_zero_minor(&partial, self.k)? else {
            return Ok(Some(partial));
        };
        if partial.ones_count() >= t || lower_bound(self.k, self.n, &partial)? > t {
            return Ok(None);
        }
        for r in w.rows.iter() {
            for c in w.cols.iter() {
                if partial.get(r, c) {
                    continue;
                }
                if let Some(m) = self.complete(partial.with_entry(r, c, true)?, t)? {
                    return Ok(Some(m));
                }
            }
        }
        Ok(None)
    }

    pub(crate) fn first_at(&self, t: usize) -> Result<Option<BinaryMatrix>> {
        let roots = self.roots()?;
        let found: Vec<Result<Option<BinaryMatrix>>> = roots
            .into_par_iter()
            .map(|root| {
                if root.ones_count() > t {
                    return Ok(None);
                }
                self.complete(root, t)
            })
            .collect();
        for f in found {
            if let Some(m) = f? {
                return Ok(Some(m));
            }
        }
        Ok(None)
    }
}
