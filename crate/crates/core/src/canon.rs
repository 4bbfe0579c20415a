//! Canonical forms of 0/1 matrices under row and column permutations.
//!
//! The canonical form is the lexicographically least matrix-text body in the
//! orbit. Rows are fixed one at a time: given the ordered column cells induced
//! by the rows already placed, a row's best rendering puts its zeros before its
//! ones inside every cell, so the next canonical row is the least such
//! rendering. Ties branch; branches related by an automorphism already
//! discovered (from two leaves with equal text) are skipped.

use std::cmp::Ordering;
use std::fmt;

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;

/// Largest dimension accepted by the canonical search.
pub const MAX_CANON_DIM: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    n_rows: usize,
    n_cols: usize,
    body: String,
}

impl CanonicalForm {
    pub fn body(&self) -> &str {
        &self.body
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    /// Full matrix text including the header line.
    pub fn text(&self) -> String {
        format!("{} {}\n{}", self.n_rows, self.n_cols, self.body)
    }

    pub fn matrix(&self) -> BinaryMatrix {
        self.text().parse().expect("canonical text is well formed")
    }

    /// Lowercase SHA-256 hex digest of [`CanonicalForm::text`].
    pub fn digest(&self) -> String {
        Sha256::digest(self.text().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({}x{})\n{}", self.n_rows, self.n_cols, self.body)
    }
}

/// A canonical form together with the permutations carrying the input onto it:
/// `permute(a, &row_perm, &col_perm)` equals the canonical matrix.
#[derive(Clone, Debug)]
pub struct Labeling {
    pub form: CanonicalForm,
    pub row_perm: Vec<usize>,
    pub col_perm: Vec<usize>,
    /// Whether the form was reached through the transpose of the input.
    pub transposed: bool,
}

pub fn canonical_form(a: &BinaryMatrix, with_transpose: bool) -> Result<CanonicalForm> {
    Ok(canonical_labeling(a, with_transpose)?.form)
}

pub fn canonical_labeling(a: &BinaryMatrix, with_transpose: bool) -> Result<Labeling> {
    if a.n_rows() > MAX_CANON_DIM || a.n_cols() > MAX_CANON_DIM {
        return Err(Error::Size(format!(
            "{}x{} exceeds the canonical search limit of {MAX_CANON_DIM}",
            a.n_rows(),
            a.n_cols()
        )));
    }
    if with_transpose && a.n_rows() != a.n_cols() {
        return Err(Error::Dimension(
            "transpose-aware canonical form needs a square matrix".into(),
        ));
    }
    let plain = Search::new(a).run();
    if !with_transpose {
        return Ok(plain);
    }
    let mut flipped = Search::new(&a.transpose()).run();
    flipped.transposed = true;
    Ok(if flipped.form < plain.form { flipped } else { plain })
}

/// False on any dimension mismatch; otherwise compares canonical forms.
pub fn are_equivalent(a: &BinaryMatrix, b: &BinaryMatrix, with_transpose: bool) -> Result<bool> {
    if a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() {
        return Ok(false);
    }
    if with_transpose && a.n_rows() != a.n_cols() {
        return Ok(false);
    }
    Ok(canonical_form(a, with_transpose)? == canonical_form(b, with_transpose)?)
}

/// Row and column permutations carrying `a` onto `b`, if the two are related
/// by row and column permutations.
pub fn equivalence_mapping(
    a: &BinaryMatrix,
    b: &BinaryMatrix,
) -> Result<Option<(Vec<usize>, Vec<usize>)>> {
    if a.n_rows() != b.n_rows() || a.n_cols() != b.n_cols() {
        return Ok(None);
    }
    let la = canonical_labeling(a, false)?;
    let lb = canonical_labeling(b, false)?;
    if la.form != lb.form {
        return Ok(None);
    }
    let compose = |pa: &[usize], pb: &[usize]| {
        let mut inv_b = vec![0; pb.len()];
        for (x, &y) in pb.iter().enumerate() {
            inv_b[y] = x;
        }
        pa.iter().map(|&y| inv_b[y]).collect::<Vec<_>>()
    };
    Ok(Some((
        compose(&la.row_perm, &lb.row_perm),
        compose(&la.col_perm, &lb.col_perm),
    )))
}

struct Best {
    keys: Vec<u64>,
    rows: Vec<usize>,
    cells: Vec<u64>,
}

struct Search {
    n_rows: usize,
    n_cols: usize,
    rows: Vec<u64>,
    best: Option<Best>,
    generators: Vec<Vec<usize>>,
}

impl Search {
    fn new(a: &BinaryMatrix) -> Self {
        let rows = a
            .rows()
            .iter()
            .map(|r| r.iter().fold(0u64, |m, c| m | 1 << c))
            .collect();
        Search {
            n_rows: a.n_rows(),
            n_cols: a.n_cols(),
            rows,
            best: None,
            generators: Vec::new(),
        }
    }

    /// Rendering of `row` under `cells`: bit `63 - p` stands for position `p`,
    /// so integer order is text order.
    fn key(&self, row: u64, cells: &[u64]) -> u64 {
        let mut key = 0u64;
        let mut end = 0usize;
        for &cell in cells {
            end += cell.count_ones() as usize;
            let ones = (row & cell).count_ones() as usize;
            for p in end - ones..end {
                key |= 1 << (63 - p);
            }
        }
        key
    }

    fn refine(row: u64, cells: &[u64]) -> Vec<u64> {
        let mut out = Vec::with_capacity(cells.len() + 1);
        for &cell in cells {
            for part in [cell & !row, cell & row] {
                if part != 0 {
                    out.push(part);
                }
            }
        }
        out
    }

    fn run(mut self) -> Labeling {
        let all_cols = if self.n_cols == 64 { !0 } else { (1u64 << self.n_cols) - 1 };
        let mut keys = Vec::with_capacity(self.n_rows);
        let mut order = Vec::with_capacity(self.n_rows);
        self.descend(&[all_cols], &mut keys, &mut order);
        let best = self.best.take().expect("search reaches a leaf");

        let mut body = String::with_capacity((self.n_cols + 1) * self.n_rows);
        for &key in &best.keys {
            for p in 0..self.n_cols {
                body.push(if key >> (63 - p) & 1 == 1 { '1' } else { '0' });
            }
            body.push('\n');
        }
        let mut row_perm = vec![0; self.n_rows];
        for (pos, &r) in best.rows.iter().enumerate() {
            row_perm[r] = pos;
        }
        let mut col_perm = vec![0; self.n_cols];
        let mut pos = 0;
        for &cell in &best.cells {
            let mut bits = cell;
            while bits != 0 {
                col_perm[bits.trailing_zeros() as usize] = pos;
                bits &= bits - 1;
                pos += 1;
            }
        }
        Labeling {
            form: CanonicalForm {
                n_rows: self.n_rows,
                n_cols: self.n_cols,
                body,
            },
            row_perm,
            col_perm,
            transposed: false,
        }
    }

    fn beaten(&self, keys: &[u64], next: u64) -> bool {
        let Some(best) = &self.best else {
            return false;
        };
        let depth = keys.len();
        match keys.cmp(&best.keys[..depth]) {
            Ordering::Less => false,
            Ordering::Greater => true,
            Ordering::Equal => next > best.keys[depth],
        }
    }

    fn descend(&mut self, cells: &[u64], keys: &mut Vec<u64>, order: &mut Vec<usize>) {
        if keys.len() == self.n_rows {
            self.leaf(cells, keys, order);
            return;
        }
        let mut min_key = u64::MAX;
        let mut candidates: Vec<usize> = Vec::new();
        for r in 0..self.n_rows {
            if order.contains(&r) {
                continue;
            }
            let key = self.key(self.rows[r], cells);
            match key.cmp(&min_key) {
                Ordering::Less => {
                    min_key = key;
                    candidates.clear();
                    candidates.push(r);
                }
                Ordering::Equal => candidates.push(r),
                Ordering::Greater => {}
            }
        }

        let mut explored: Vec<usize> = Vec::new();
        let mut seen_rows: Vec<u64> = Vec::new();
        for &r in &candidates {
            if self.beaten(keys, min_key) {
                return;
            }
            // identical rows lead to identical subtrees
            if seen_rows.contains(&self.rows[r]) {
                continue;
            }
            if !explored.is_empty() && self.equivalent_to_explored(r, &explored, order) {
                continue;
            }
            seen_rows.push(self.rows[r]);
            explored.push(r);
            let next = Self::refine(self.rows[r], cells);
            keys.push(min_key);
            order.push(r);
            self.descend(&next, keys, order);
            order.pop();
            keys.pop();
        }
    }

    /// Is `r` in the orbit of an explored sibling under the known automorphisms
    /// that fix every row of the current prefix?
    fn equivalent_to_explored(&self, r: usize, explored: &[usize], prefix: &[usize]) -> bool {
        let gens: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|g| prefix.iter().all(|&p| g[p] == p))
            .collect();
        if gens.is_empty() {
            return false;
        }
        let mut parent: Vec<usize> = (0..self.n_rows).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for g in gens {
            for (x, &y) in g.iter().enumerate() {
                let (rx, ry) = (find(&mut parent, x), find(&mut parent, y));
                if rx != ry {
                    parent[rx] = ry;
                }
            }
        }
        let root = find(&mut parent, r);
        explored.iter().any(|&e| find(&mut parent, e) == root)
    }

    fn leaf(&mut self, cells: &[u64], keys: &[u64], order: &[usize]) {
        match &self.best {
            None => {}
            Some(best) => match keys.cmp(&best.keys[..]) {
                Ordering::Greater => return,
                Ordering::Equal => {
                    let mut g = vec![0; self.n_rows];
                    for (i, &r) in best.rows.iter().enumerate() {
                        g[r] = order[i];
                    }
                    if g.iter().enumerate().any(|(x, &y)| x != y) && !self.generators.contains(&g) {
                        self.generators.push(g);
                    }
                    return;
                }
                Ordering::Less => {}
            },
        }
        self.best = Some(Best {
            keys: keys.to_vec(),
            rows: order.to_vec(),
            cells: cells.to_vec(),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&str]) -> BinaryMatrix {
        BinaryMatrix::from_row_strs(rows).unwrap()
    }

    /// Least body over all row and column permutations, by enumeration.
    fn orbit_min(a: &BinaryMatrix) -> String {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for i in 0..n {
                    let mut q = p.clone();
                    q.insert(i, n - 1);
                    out.push(q);
                }
            }
            out
        }
        let rps = perms(a.n_rows());
        let cps = perms(a.n_cols());
        let mut best: Option<String> = None;
        for rp in &rps {
            for cp in &cps {
                let body = a.permute(rp, cp).unwrap().body_text();
                if best.as_ref().is_none_or(|b| body < *b) {
                    best = Some(body);
                }
            }
        }
        best.unwrap()
    }

    #[test]
    fn identity_orbit() {
        let id = BinaryMatrix::identity(5).unwrap();
        let f = canonical_form(&id, false).unwrap();
        assert_eq!(f.body(), "00001\n00010\n00100\n01000\n10000\n");
        let p = id.permute(&[3, 1, 4, 0, 2], &[2, 0, 1, 4, 3]).unwrap();
        assert_eq!(canonical_form(&p, false).unwrap(), f);
        let big = BinaryMatrix::identity(16).unwrap();
        assert!(canonical_form(&big, false).is_ok());
        assert!(matches!(
            canonical_form(&BinaryMatrix::identity(17).unwrap(), false),
            Err(Error::Size(_))
        ));
    }

    #[test]
    fn two_five_by_five_optima_differ() {
        let left = m(&["10000", "01110", "01101", "01011", "00111"]);
        let right = m(&["11000", "00110", "10011", "01101", "10101"]);
        assert_eq!(right.ones_count(), 13);
        assert!(!are_equivalent(&left, &right, false).unwrap());
        assert_ne!(canonical_form(&left, false).unwrap(), canonical_form(&right, false).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_false() {
        let a = BinaryMatrix::identity(3).unwrap();
        let b = BinaryMatrix::identity(4).unwrap();
        assert!(!are_equivalent(&a, &b, false).unwrap());
    }

    #[test]
    fn transpose_option() {
        let a = m(&["110", "000", "000"]);
        let t = a.transpose();
        assert!(!are_equivalent(&a, &t, false).unwrap());
        assert!(are_equivalent(&a, &t, true).unwrap());
        assert!(matches!(
            canonical_form(&m(&["110"]), true),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn digest_is_stable_hex() {
        let f = canonical_form(&BinaryMatrix::identity(2).unwrap(), false).unwrap();
        let d = f.digest();
        assert_eq!(d.len(), 64);
        assert!(d.chars().all(|c| c.is_ascii_hexdigit()));
        assert_eq!(d, canonical_form(&BinaryMatrix::identity(2).unwrap(), false).unwrap().digest());
    }

    fn arb_matrix(max: usize) -> impl Strategy<Value = BinaryMatrix> {
        (1usize..=max, 1usize..=max, 0.1f64..0.9).prop_flat_map(|(r, c, p)| {
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
        fn matches_orbit_enumeration(a in arb_matrix(5)) {
            let f = canonical_form(&a, false).unwrap();
            prop_assert_eq!(f.body(), orbit_min(&a));
        }

        #[test]
        fn labeling_maps_onto_form(a in arb_matrix(9)) {
            let l = canonical_labeling(&a, false).unwrap();
            prop_assert_eq!(a.permute(&l.row_perm, &l.col_perm).unwrap(), l.form.matrix());
        }

        #[test]
        fn mapping_between_equivalent(a in arb_matrix(8), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut rp: Vec<usize> = (0..a.n_rows()).collect();
            let mut cp: Vec<usize> = (0..a.n_cols()).collect();
            rp.shuffle(&mut rng);
            cp.shuffle(&mut rng);
            let b = a.permute(&rp, &cp).unwrap();
            let (p, q) = equivalence_mapping(&a, &b).unwrap().unwrap();
            prop_assert_eq!(a.permute(&p, &q).unwrap(), b);
        }
    }
}
