//! Row-orderly branch and bound. Rows are generated in nondecreasing weight,
//! equal-weight rows in nonincreasing lexicographic order, and each row puts
//! its ones at the left end of every column cell (columns not yet told apart
//! by earlier rows). Every matrix has an equivalent in this normal form.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

/// Largest side handled (one row fits in a `u64`).
pub(crate) const MAX_SIDE: usize = 64;

#[inline]
fn bit(c: usize) -> u64 {
    1u64 << (63 - c)
}

/// Mask with the top `len` bits of the window starting at column `start`.
#[inline]
fn run(start: usize, len: usize) -> u64 {
    if len == 0 {
        0
    } else {
        (u64::MAX << (64 - len)) >> start
    }
}

#[derive(Clone, Debug)]
pub(crate) struct State {
    pub rows: Vec<u64>,
    cells: Vec<(usize, usize)>,
    /// `fam[j]`: inclusion-minimal unions of `j` placed rows.
    fam: Vec<Vec<u64>>,
    pub used: u32,
    last_w: u32,
}

pub(crate) struct Search<'a> {
    n: usize,
    k: usize,
    need: u32,
    deadline: Option<Instant>,
    pub abort: &'a AtomicBool,
    pub nodes: AtomicU64,
    pub prunes: AtomicU64,
}

/// What a task does at a leaf.
pub(crate) enum Sink<'a> {
    First,
    Collect(&'a Mutex<Vec<Vec<u64>>>),
}

impl<'a> Search<'a> {
    pub(crate) fn new(k: usize, n: usize, deadline: Option<Instant>, abort: &'a AtomicBool) -> Self {
        assert!(n <= MAX_SIDE && k >= 1 && k <= n);
        Search {
            n,
            k,
            need: (n - k + 1) as u32,
            deadline,
            abort,
            nodes: AtomicU64::new(0),
            prunes: AtomicU64::new(0),
        }
    }

    pub(crate) fn root(&self) -> State {
        let mut fam = vec![Vec::new(); self.k];
        fam[0].push(0);
        State {
            rows: Vec::with_capacity(self.n),
            cells: vec![(0, self.n)],
            fam,
            used: 0,
            last_w: 0,
        }
    }

    /// Admissible bound on the ones still to be placed, given that every
    /// future row has weight at least `w`.
    pub(crate) fn remaining_bound(&self, st: &State, w: u32) -> u32 {
        let rem = (self.n - st.rows.len()) as u32;
        if rem == 0 {
            return 0;
        }
        let mut best = rem * w;
        for p in 1..=(self.k as u32).min(rem) {
            let j = self.k - p as usize;
            let Some(min_u) = st.fam[j].iter().map(|u| u.count_ones()).min() else {
                continue;
            };
            if min_u >= self.need {
                continue;
            }
            let d = self.need - min_u;
            let b = d.max(p * w) + (rem - p) * d.div_ceil(p).max(w);
            best = best.max(b);
        }
        best
    }

    pub(crate) fn start_bound(&self) -> u32 {
        self.remaining_bound(&self.root(), 0)
    }

    fn admits(&self, st: &State, r: u64) -> bool {
        st.fam[self.k - 1]
            .iter()
            .all(|u| (u | r).count_ones() >= self.need)
    }

    fn place(&self, st: &State, r: u64, w: u32) -> State {
        let mut cells = Vec::with_capacity(st.cells.len() + 1);
        for &(s, len) in &st.cells {
            let c = (r & run(s, len)).count_ones() as usize;
            if c > 0 {
                cells.push((s, c));
            }
            if c < len {
                cells.push((s + c, len - c));
            }
        }
        let mut fam = st.fam.clone();
        let placed = st.rows.len() + 1;
        for j in (1..self.k.min(placed + 1)).rev() {
            let mut next: Vec<u64> = fam[j].clone();
            next.extend(fam[j - 1].iter().map(|u| u | r));
            fam[j] = minimal(next);
        }
        let mut rows = st.rows.clone();
        rows.push(r);
        State {
            rows,
            cells,
            fam,
            used: st.used + w,
            last_w: w,
        }
    }

    /// Children of `st` under total budget `t`, in search order.
    pub(crate) fn children(&self, st: &State, t: u32) -> Vec<State> {
        let mut out = Vec::new();
        self.each_child(st, t, &mut |child| {
            out.push(child);
            true
        });
        out
    }

    /// Calls `f` on each child; stops early when `f` returns false.
    fn each_child(&self, st: &State, t: u32, f: &mut dyn FnMut(State) -> bool) -> bool {
        let rem = (self.n - st.rows.len()) as u32;
        if rem == 0 {
            return true;
        }
        let left = t.saturating_sub(st.used);
        let last = st.rows.last().copied();
        let mut w = st.last_w;
        while w as usize <= self.n {
            if st.used + self.remaining_bound(st, w) > t || w * rem > left {
                break;
            }
            let tight = last.filter(|_| w == st.last_w);
            let mut rows = Vec::new();
            self.fill(st, 0, w as usize, 0, tight, &mut rows);
            for r in rows {
                if !self.admits(st, r) {
                    continue;
                }
                let child = self.place(st, r, w);
                if child.used + self.remaining_bound(&child, w) > t {
                    continue;
                }
                if !f(child) {
                    return false;
                }
            }
            w += 1;
        }
        true
    }

    /// Row patterns of weight `left` over cells `i..`, in decreasing order.
    /// `tight` holds the previous row while the prefix still equals it.
    fn fill(&self, st: &State, i: usize, left: usize, acc: u64, tight: Option<u64>, out: &mut Vec<u64>) {
        if i == st.cells.len() {
            if left == 0 {
                out.push(acc);
            }
            return;
        }
        let (s, len) = st.cells[i];
        let later: usize = st.cells[i + 1..].iter().map(|c| c.1).sum();
        let hi = len.min(left);
        let lo = left.saturating_sub(later);
        for c in (lo..=hi).rev() {
            let next_tight = match tight {
                Some(prev) => {
                    let prev_c = (prev & run(s, len)).count_ones() as usize;
                    if c > prev_c {
                        self.prunes.fetch_add(1, Ordering::Relaxed);
                        continue;
                    }
                    if c == prev_c {
                        Some(prev)
                    } else {
                        None
                    }
                }
                None => None,
            };
            self.fill(st, i + 1, left - c, acc | run(s, c), next_tight, out);
        }
    }

    /// Depth-first search below `st`. Returns false when the sink asked to stop
    /// or the budget ran out.
    pub(crate) fn dfs(&self, st: State, t: u32, sink: &Sink<'_>, found: &mut Option<Vec<u64>>) -> bool {
        if self.abort.load(Ordering::Relaxed) {
            return false;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed);
        if count % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.abort.store(true, Ordering::Relaxed);
                    return false;
                }
            }
        }
        if st.rows.len() == self.n {
            match sink {
                Sink::First => {
                    *found = Some(st.rows);
                    return false;
                }
                Sink::Collect(all) => {
                    all.lock().expect("leaf sink poisoned").push(st.rows);
                    return true;
                }
            }
        }
        self.each_child(&st, t, &mut |child| self.dfs(child, t, sink, found))
    }

    /// Deterministically ordered subproblems for the worker pool.
    pub(crate) fn tasks(&self, t: u32) -> Vec<State> {
        let mut level = vec![self.root()];
        for _ in 0..2 {
            if level.iter().any(|s| s.rows.len() == self.n) {
                break;
            }
            level = level.iter().flat_map(|s| self.children(s, t)).collect();
        }
        level
    }

    /// Lowest-index task that completes to a matrix with at most `t` ones.
    pub(crate) fn first_at(&self, t: u32) -> Option<Vec<u64>> {
        let tasks = self.tasks(t);
        tasks.into_par_iter().find_map_first(|task| {
            let mut found = None;
            self.dfs(task, t, &Sink::First, &mut found);
            found
        })
    }

    /// Every normal-form leaf with at most `t` ones.
    pub(crate) fn all_at(&self, t: u32) -> Vec<Vec<u64>> {
        let sink = Mutex::new(Vec::new());
        self.tasks(t).into_par_iter().for_each(|task| {
            let mut found = None;
            self.dfs(task, t, &Sink::Collect(&sink), &mut found);
        });
        sink.into_inner().expect("leaf sink poisoned")
    }
}

/// Deduplicated, inclusion-minimal members.
fn minimal(mut sets: Vec<u64>) -> Vec<u64> {
    sets.sort_unstable_by_key(|s| (s.count_ones(), *s));
    sets.dedup();
    let mut kept: Vec<u64> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|&m| m & s == m) {
            kept.push(s);
        }
    }
    kept
}

/// Row masks back to column index lists.
pub(crate) fn columns(row: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |&c| row & bit(c) != 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn run_masks() {
        assert_eq!(run(0, 1), 1 << 63);
        assert_eq!(run(2, 2), (1 << 61) | (1 << 60));
        assert_eq!(run(5, 0), 0);
        assert_eq!(columns(run(1, 3)).collect::<Vec<_>>(), vec![1, 2, 3]);
    }

    #[test]
    fn minimal_drops_supersets() {
        assert_eq!(minimal(vec![0b111, 0b011, 0b011, 0b100, 0b110]), vec![0b100, 0b011]);
    }

    #[test]
    fn start_bound_values() {
        let abort = AtomicBool::new(false);
        assert_eq!(Search::new(2, 4, None, &abort).start_bound(), 7);
        assert_eq!(Search::new(1, 5, None, &abort).start_bound(), 25);
        assert_eq!(Search::new(4, 4, None, &abort).start_bound(), 1);
    }
}
