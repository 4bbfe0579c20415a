//! Matching certificate for the zero-minor question on large sparse matrices.
//!
//! `k` rows share `k` zero columns iff some `k`-set `S` has `|N(S)| <= n_cols - k`.
//! Zero rows and singleton rows on private columns are folded out; on the
//! remaining rows a row-saturating matching `M` turns `|N(S)| - |S|` into the
//! size of the out-boundary of `S` in the digraph `x -> y` when `M(y)` lies in
//! the support of `x` (plus `x -> c` for unmatched columns `c`). A witness then
//! becomes a closed vertex set of bounded boundary and bounded size.

use crate::bits::Bits;
use crate::matrix::BinaryMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Certificate {
    Exists,
    None,
    Unknown,
}

const MAX_BOUNDARY: i64 = 2;
const NODE_BUDGET: usize = 200_000;

/// Is there a `k`-set of rows of `a` with at least `k` common zero columns?
pub(crate) fn certificate(a: &BinaryMatrix, k: usize) -> Certificate {
    let supports: Vec<&Bits> = a.rows().iter().collect();
    sized(&supports, a.n_cols(), k, a.n_cols() - k)
}

/// Is there a set `T` of exactly `t` rows whose supports cover at most `bound`
/// columns? All supports have width `n_cols`.
pub(crate) fn sized(supports: &[&Bits], n_cols: usize, t: usize, bound: usize) -> Certificate {
    if t == 0 {
        return Certificate::Exists;
    }
    if supports.len() < t {
        return Certificate::None;
    }
    let mut col_use = vec![0usize; n_cols];
    for s in supports {
        for c in s.iter() {
            col_use[c] += 1;
        }
    }

    let mut z0 = 0usize;
    let mut free = 0usize;
    let mut residual: Vec<&Bits> = Vec::new();
    for &row in supports {
        match row.count() {
            0 => z0 += 1,
            1 if col_use[row.first().expect("one bit")] == 1 => free += 1,
            _ => residual.push(row),
        }
    }
    if z0 >= t {
        return Certificate::Exists;
    }
    let hi = (t - z0).min(residual.len());
    let lo = (t - z0).saturating_sub(free);
    if lo > hi {
        return Certificate::None;
    }
    // padding with zero rows and private singletons turns the size target
    // into a bound on |N(S')| - |S'| over residual sets S'
    let slack = bound as i64 + z0 as i64 - t as i64;
    if lo == 0 && slack >= 0 {
        return Certificate::Exists;
    }

    let r = residual.len();
    let supports = residual;
    let Some(mate) = saturating_matching(&supports, n_cols) else {
        return Certificate::Unknown;
    };
    if slack < 0 {
        return Certificate::None;
    }
    if slack > MAX_BOUNDARY {
        return Certificate::Unknown;
    }

    // vertex ids: residual rows 0..r, then unmatched columns touched by them
    let mut col_owner: Vec<Option<usize>> = vec![None; n_cols];
    for (x, &c) in mate.iter().enumerate() {
        col_owner[c] = Some(x);
    }
    let mut col_vertex: Vec<Option<usize>> = vec![None; n_cols];
    let mut n_vertices = r;
    for s in &supports {
        for c in s.iter() {
            if col_owner[c].is_none() && col_vertex[c].is_none() {
                col_vertex[c] = Some(n_vertices);
                n_vertices += 1;
            }
        }
    }
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); r];
    let mut into: Vec<Vec<usize>> = vec![Vec::new(); n_vertices];
    for (x, s) in supports.iter().enumerate() {
        for c in s.iter() {
            let v = match col_owner[c] {
                Some(y) if y == x => continue,
                Some(y) => y,
                None => col_vertex[c].expect("registered"),
            };
            out[x].push(v);
            into[v].push(x);
        }
    }

    let graph = Graph {
        r,
        n_vertices,
        out,
        into,
    };
    let mut unknown = false;
    let mut budget = NODE_BUDGET;
    let mut y: Vec<usize> = Vec::with_capacity(slack as usize);
    match graph.scan_boundaries(&mut y, 0, slack as usize, lo, hi, &mut budget) {
        Some(true) => return Certificate::Exists,
        Some(false) => {}
        None => unknown = true,
    }
    if unknown {
        Certificate::Unknown
    } else {
        Certificate::None
    }
}

/// Kuhn's augmenting paths; returns the column matched to each row, or `None`
/// if some row stays unmatched.
fn saturating_matching(supports: &[&Bits], n_cols: usize) -> Option<Vec<usize>> {
    fn augment(
        x: usize,
        supports: &[&Bits],
        owner: &mut [Option<usize>],
        mate: &mut [usize],
        seen: &mut [bool],
    ) -> bool {
        for c in supports[x].iter() {
            if std::mem::replace(&mut seen[c], true) {
                continue;
            }
            if owner[c].is_none_or(|y| augment(y, supports, owner, mate, seen)) {
                owner[c] = Some(x);
                mate[x] = c;
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; n_cols];
    let mut mate = vec![usize::MAX; supports.len()];
    let mut seen = vec![false; n_cols];
    for x in 0..supports.len() {
        seen.iter_mut().for_each(|s| *s = false);
        if !augment(x, supports, &mut owner, &mut mate, &mut seen) {
            return None;
        }
    }
    Some(mate)
}

struct Graph {
    r: usize,
    n_vertices: usize,
    out: Vec<Vec<usize>>,
    into: Vec<Vec<usize>>,
}

impl Graph {
    /// Tries every boundary set `Y` of at most `max` vertices (in increasing
    /// vertex order). `Some(true)`: a closed set was found, `None`: budget ran out.
    fn scan_boundaries(
        &self,
        y: &mut Vec<usize>,
        start: usize,
        max: usize,
        lo: usize,
        hi: usize,
        budget: &mut usize,
    ) -> Option<bool> {
        let mut incomplete = false;
        match self.closed_within(y, lo, hi, budget) {
            Some(true) => return Some(true),
            Some(false) => {}
            None => incomplete = true,
        }
        if y.len() < max {
            for v in start..self.n_vertices {
                y.push(v);
                let res = self.scan_boundaries(y, v + 1, max, lo, hi, budget);
                y.pop();
                match res {
                    Some(true) => return Some(true),
                    Some(false) => {}
                    None => incomplete = true,
                }
            }
        }
        if incomplete {
            None
        } else {
            Some(false)
        }
    }

    /// Is there a set of rows outside `y` with all out-neighbours in the set
    /// or in `y`, whose size lies in `lo..=hi`?
    fn closed_within(&self, y: &[usize], lo: usize, hi: usize, budget: &mut usize) -> Option<bool> {
        let mut blocked = vec![false; self.n_vertices];
        for &v in y {
            blocked[v] = true;
        }
        // rows that reach an unblocked column vertex through unblocked rows
        let mut bad = vec![false; self.n_vertices];
        let mut queue: Vec<usize> = (self.r..self.n_vertices).filter(|&v| !blocked[v]).collect();
        for &v in &queue {
            bad[v] = true;
        }
        while let Some(v) = queue.pop() {
            for &x in &self.into[v] {
                if !blocked[x] && !bad[x] {
                    bad[x] = true;
                    queue.push(x);
                }
            }
        }
        let allowed: Vec<usize> = (0..self.r).filter(|&x| !blocked[x] && !bad[x]).collect();
        if allowed.len() < lo {
            return Some(false);
        }
        if allowed.len() <= hi {
            return Some(true);
        }
        let mut in_allowed = vec![false; self.r];
        for &x in &allowed {
            in_allowed[x] = true;
        }
        let comps = self.components(&allowed, &in_allowed);
        let mut included = vec![false; comps.len()];
        let suffix: Vec<usize> = {
            let mut s = vec![0; comps.len() + 1];
            for i in (0..comps.len()).rev() {
                s[i] = s[i + 1] + comps[i].size;
            }
            s
        };
        pick(&comps, &suffix, 0, 0, lo, hi, &mut included, budget)
    }

    /// Strongly connected components of the allowed rows, sinks first,
    /// with successor lists pointing to earlier components.
    fn components(&self, allowed: &[usize], in_allowed: &[bool]) -> Vec<Component> {
        let n = self.r;
        let mut index = vec![usize::MAX; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack: Vec<usize> = Vec::new();
        let mut comp_of = vec![usize::MAX; n];
        let mut members: Vec<Vec<usize>> = Vec::new();
        let mut counter = 0;

        for &root in allowed {
            if index[root] != usize::MAX {
                continue;
            }
            // iterative Tarjan: (vertex, next edge position)
            let mut call: Vec<(usize, usize)> = vec![(root, 0)];
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            while let Some(&mut (v, ref mut pos)) = call.last_mut() {
                if let Some(&w) = self.out[v].get(*pos) {
                    *pos += 1;
                    if w >= n || !in_allowed[w] {
                        continue;
                    }
                    if index[w] == usize::MAX {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((w, 0));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some(&(parent, _)) = call.last() {
                        low[parent] = low[parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let id = members.len();
                        let mut group = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack");
                            on_stack[w] = false;
                            comp_of[w] = id;
                            group.push(w);
                            if w == v {
                                break;
                            }
                        }
                        members.push(group);
                    }
                }
            }
        }

        members
            .iter()
            .enumerate()
            .map(|(id, group)| {
                let mut succ: Vec<usize> = group
                    .iter()
                    .flat_map(|&v| self.out[v].iter())
                    .filter(|&&w| w < n && in_allowed[w] && comp_of[w] != id)
                    .map(|&w| comp_of[w])
                    .collect();
                succ.sort_unstable();
                succ.dedup();
                Component {
                    size: group.len(),
                    succ,
                }
            })
            .collect()
    }
}

struct Component {
    size: usize,
    succ: Vec<usize>,
}

#[allow(clippy::too_many_arguments)]
fn pick(
    comps: &[Component],
    suffix: &[usize],
    i: usize,
    size: usize,
    lo: usize,
    hi: usize,
    included: &mut [bool],
    budget: &mut usize,
) -> Option<bool> {
    if size >= lo {
        return Some(true);
    }
    if i == comps.len() || size + suffix[i] < lo {
        return Some(false);
    }
    if *budget == 0 {
        return None;
    }
    *budget -= 1;
    let mut incomplete = false;
    let c = &comps[i];
    if size + c.size <= hi && c.succ.iter().all(|&s| included[s]) {
        included[i] = true;
        let res = pick(comps, suffix, i + 1, size + c.size, lo, hi, included, budget);
        included[i] = false;
        match res {
            Some(true) => return Some(true),
            Some(false) => {}
            None => incomplete = true,
        }
    }
    match pick(comps, suffix, i + 1, size, lo, hi, included, budget) {
        Some(false) if incomplete => None,
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::brute_force_zero_minor;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Identity rows on private columns plus a random sparse block.
    fn structured(rng: &mut ChaCha8Rng) -> BinaryMatrix {
        let ident = rng.gen_range(0..6);
        let zero_rows = rng.gen_range(0..2);
        let block_rows = rng.gen_range(1..9);
        let block_cols = rng.gen_range(block_rows..block_rows + 4);
        let n_rows = ident + zero_rows + block_rows;
        let n_cols = ident + block_cols;
        let weight = rng.gen_range(1..4);
        let mut entries: Vec<(usize, usize)> = (0..ident).map(|i| (i, i)).collect();
        for i in 0..block_rows {
            for _ in 0..weight {
                entries.push((ident + zero_rows + i, ident + rng.gen_range(0..block_cols)));
            }
        }
        BinaryMatrix::from_entries(n_rows, n_cols, entries).unwrap()
    }

    #[test]
    fn agrees_with_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut decided = 0;
        for _ in 0..4000 {
            let a = structured(&mut rng);
            let kmax = a.n_rows().min(a.n_cols());
            let k = rng.gen_range(1..=kmax);
            let truth = brute_force_zero_minor(&a, k).unwrap().is_some();
            match certificate(&a, k) {
                Certificate::Exists => {
                    assert!(truth, "false positive at k={k}\n{a:?}");
                    decided += 1;
                }
                Certificate::None => {
                    assert!(!truth, "false negative at k={k}\n{a:?}");
                    decided += 1;
                }
                Certificate::Unknown => {}
            }
        }
        assert!(decided > 1000, "only {decided} decided");
    }

    #[test]
    fn six_by_six_ten_ones() {
        let a = BinaryMatrix::from_row_strs(&[
            "100000", "010000", "001100", "001010", "000101", "000011",
        ])
        .unwrap();
        assert_eq!(certificate(&a, 3), Certificate::None);
        let b = a.with_entry(2, 2, false).unwrap();
        assert_eq!(certificate(&b, 3), Certificate::Exists);
    }
}
