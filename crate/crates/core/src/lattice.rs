//! Mark sets in the `N x N x N` grid that hit every axis-aligned box, and the
//! planar version for rectangles in the `N x N` grid.

mod symmetry;

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use serde::Serialize;

pub use symmetry::GridSymmetry;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::verify::find_zero_minor;

/// Largest side for the exact 3D solvers (a mark set fits in a `u64`).
pub const MAX_SOLVE_3D: usize = 4;
/// Largest side for the orbit computations.
pub const MAX_CANON_3D: usize = 4;
/// Largest side for the planar solver.
pub const MAX_SOLVE_2D: usize = 8;
/// Largest grid side accepted at all.
pub const MAX_GRID: usize = 64;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PointSet3 {
    n: usize,
    marks: Bits,
}

impl PointSet3 {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_GRID {
            return Err(Error::Domain(format!("grid side must be in 1..={MAX_GRID}, got {n}")));
        }
        Ok(PointSet3 {
            n,
            marks: Bits::new(n * n * n),
        })
    }

    pub fn from_points(n: usize, points: impl IntoIterator<Item = [usize; 3]>) -> Result<Self> {
        let mut s = Self::new(n)?;
        for p in points {
            s.insert(p)?;
        }
        Ok(s)
    }

    pub fn from_codes(n: usize, codes: impl IntoIterator<Item = u32>) -> Result<Self> {
        let mut s = Self::new(n)?;
        for c in codes {
            let c = c as usize;
            if c >= n * n * n {
                return Err(Error::Domain(format!("point code {c} out of range for N={n}")));
            }
            s.marks.insert(c);
        }
        Ok(s)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.marks.count()
    }

    pub fn is_empty(&self) -> bool {
        self.marks.is_empty()
    }

    pub fn code(&self, p: [usize; 3]) -> usize {
        p[0] + self.n * p[1] + self.n * self.n * p[2]
    }

    pub fn insert(&mut self, p: [usize; 3]) -> Result<()> {
        if p.iter().any(|&c| c >= self.n) {
            return Err(Error::Domain(format!("point {p:?} outside the grid of side {}", self.n)));
        }
        let c = self.code(p);
        self.marks.insert(c);
        Ok(())
    }

    pub fn contains(&self, p: [usize; 3]) -> bool {
        p.iter().all(|&c| c < self.n) && self.marks.contains(self.code(p))
    }

    /// Marked points in increasing code order.
    pub fn points(&self) -> Vec<[usize; 3]> {
        let n = self.n;
        self.marks.iter().map(|c| [c % n, c / n % n, c / (n * n)]).collect()
    }

    /// Sorted codes `x + N y + N^2 z`.
    pub fn codes(&self) -> Vec<u32> {
        self.marks.iter().map(|c| c as u32).collect()
    }

    fn mask(&self) -> Option<u64> {
        (self.n <= MAX_SOLVE_3D).then(|| self.marks.iter().fold(0u64, |m, c| m | 1 << c))
    }
}

impl PointSet3 {
    /// Text format: a line with `N`, then one `x y z` line per mark.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for p in self.points() {
            out.push_str(&format!("{} {} {}\n", p[0], p[1], p[2]));
        }
        out
    }
}

impl std::str::FromStr for PointSet3 {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing grid side"))?;
        let n: usize = header
            .parse()
            .map_err(|_| Error::parse(hline, format!("invalid grid side {header:?}")))?;
        let mut s = PointSet3::new(n)?;
        for (line, l) in lines {
            let coords: Vec<usize> = l
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| Error::parse(line, format!("invalid coordinate {t:?}"))))
                .collect::<Result<_>>()?;
            let [x, y, z] = coords[..] else {
                return Err(Error::parse(line, "expected \"x y z\""));
            };
            s.insert([x, y, z]).map_err(|e| Error::parse(line, e.to_string()))?;
        }
        Ok(s)
    }
}

impl std::fmt::Debug for PointSet3 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PointSet3(N={}, {:?})", self.n, self.points())
    }
}

impl Serialize for PointSet3 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.points().serialize(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct BoxWitness {
    pub x: (usize, usize),
    pub y: (usize, usize),
    pub z: (usize, usize),
}

impl BoxWitness {
    pub fn corners(&self) -> [[usize; 3]; 8] {
        let mut out = [[0; 3]; 8];
        for (i, c) in out.iter_mut().enumerate() {
            *c = [
                if i & 4 == 0 { self.x.0 } else { self.x.1 },
                if i & 2 == 0 { self.y.0 } else { self.y.1 },
                if i & 1 == 0 { self.z.0 } else { self.z.1 },
            ];
        }
        out
    }
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> + Clone {
    (0..n).flat_map(move |a| (a + 1..n).map(move |b| (a, b)))
}

/// Every box in lexicographic order of `(x-pair, y-pair, z-pair)`.
pub fn boxes(n: usize) -> impl Iterator<Item = BoxWitness> {
    pairs(n).flat_map(move |x| {
        pairs(n).flat_map(move |y| pairs(n).map(move |z| BoxWitness { x, y, z }))
    })
}

/// The lexicographically least box with no marked corner.
pub fn find_unhit_box(s: &PointSet3) -> Option<BoxWitness> {
    boxes(s.n).find(|b| b.corners().iter().all(|&c| !s.contains(c)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    fn index(self) -> usize {
        match self {
            Axis::X => 0,
            Axis::Y => 1,
            Axis::Z => 2,
        }
    }
}

/// Marks of layers `i` and `j` orthogonal to `axis`, projected onto the
/// remaining two coordinates (lower axis indexes rows). A 1 is a mark.
pub fn side_diagram(s: &PointSet3, axis: Axis, i: usize, j: usize) -> Result<BinaryMatrix> {
    if i == j {
        return Err(Error::Contract(format!("side diagram needs two distinct layers, got {i} twice")));
    }
    if i >= s.n || j >= s.n {
        return Err(Error::Domain(format!("layer index out of range for N={}", s.n)));
    }
    let a = axis.index();
    let (r, c) = match a {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    let entries = s
        .points()
        .into_iter()
        .filter(|p| p[a] == i || p[a] == j)
        .map(|p| (p[r], p[c]));
    BinaryMatrix::from_entries(s.n, s.n, entries)
}

/// True if every rectangle (two rows by two columns) of the planar mark set
/// has a marked corner.
pub fn hits_all_rectangles(marks: &BinaryMatrix) -> Result<bool> {
    if marks.n_rows() < 2 || marks.n_cols() < 2 {
        return Ok(true);
    }
    Ok(find_zero_minor(marks, 2)?.is_none())
}

pub fn apply_symmetry(g: &GridSymmetry, s: &PointSet3) -> Result<PointSet3> {
    if g.n() != s.n {
        return Err(Error::Dimension(format!("symmetry for N={} applied to N={}", g.n(), s.n)));
    }
    PointSet3::from_points(s.n, s.points().into_iter().map(|p| g.apply_point(p)))
}

/// `true` when `a` precedes `b` as sorted code lists (equal sizes).
#[inline]
fn list_less(a: u64, b: u64) -> bool {
    let d = a ^ b;
    d != 0 && a & d & d.wrapping_neg() != 0
}

fn image(table: &[u32], mut m: u64) -> u64 {
    let mut out = 0;
    while m != 0 {
        let c = m.trailing_zeros() as usize;
        out |= 1 << table[c];
        m &= m - 1;
    }
    out
}

/// Precomputed point tables for the whole group.
pub struct Orbits {
    n: usize,
    tables: Vec<Vec<u32>>,
}

impl Orbits {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_CANON_3D {
            return Err(Error::Size(format!("orbit computations need N <= {MAX_CANON_3D}, got {n}")));
        }
        Ok(Orbits {
            n,
            tables: GridSymmetry::all(n).iter().map(|g| g.point_table()).collect(),
        })
    }

    /// Sorted code list of the orbit's least member.
    pub fn canonical(&self, s: &PointSet3) -> Result<Vec<u32>> {
        if s.n != self.n {
            return Err(Error::Dimension(format!("orbit tables for N={} used on N={}", self.n, s.n)));
        }
        let m = s.mask().expect("size checked");
        let best = self
            .tables
            .iter()
            .map(|t| image(t, m))
            .fold(m, |best, x| if list_less(x, best) { x } else { best });
        Ok((0..64).filter(|c| best >> c & 1 == 1).collect())
    }
}

/// The orbit's least sorted code list, as bytes (one byte per code).
pub fn canonical_form_3d(s: &PointSet3) -> Result<Vec<u8>> {
    let orbits = Orbits::new(s.n)?;
    Ok(orbits.canonical(s)?.into_iter().map(|c| c as u8).collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Stats3 {
    pub nodes_expanded: u64,
    pub runtime_ms: u64,
    pub exhausted: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MarksResult {
    pub n: usize,
    pub value: usize,
    pub order: usize,
    pub certificate: PointSet3,
    pub stats: Stats3,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Solve3 {
    Exact(MarksResult),
    Bounds { n: usize, lower: usize, upper: usize, stats: Stats3 },
}

impl Solve3 {
    pub fn exact(&self) -> Option<&MarksResult> {
        match self {
            Solve3::Exact(r) => Some(r),
            Solve3::Bounds { .. } => None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine3 {
    /// One planar mark set per Z-layer, pairwise unions hitting all rectangles.
    #[default]
    Layered,
    /// Branch on the corners of an unhit box.
    CornerBranching,
}

/// Planar grid helper over masks with bit `x + N y`.
struct Plane {
    n: usize,
}

impl Plane {
    fn new(n: usize) -> Self {
        Plane { n }
    }

    /// Every rectangle has a marked corner: no two rows share two unmarked
    /// columns.
    fn hits(&self, m: u64) -> bool {
        let full_row = (1u64 << self.n) - 1;
        let free: Vec<u64> = (0..self.n).map(|y| !(m >> (self.n * y)) & full_row).collect();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if (free[a] & free[b]).count_ones() >= 2 {
                    return false;
                }
            }
        }
        true
    }

    /// Image of a planar mask under column permutation `px`, row permutation
    /// `py`, and an optional transpose.
    fn image(&self, m: u64, px: &[usize], py: &[usize], t: bool) -> u64 {
        let n = self.n;
        let mut out = 0u64;
        let mut rest = m;
        while rest != 0 {
            let c = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let (x, y) = (px[c % n], py[c / n]);
            let (x, y) = if t { (y, x) } else { (x, y) };
            out |= 1 << (x + n * y);
        }
        out
    }
}

/// All `n`-bit-squared masks with `c` bits set, ascending.
fn masks_with(cells: usize, c: usize) -> Vec<u64> {
    if c > cells {
        return Vec::new();
    }
    if c == 0 {
        return vec![0];
    }
    let mut out = Vec::new();
    let mut x: u64 = (1 << c) - 1;
    let limit: u128 = 1u128 << cells;
    while (x as u128) < limit {
        out.push(x);
        let low = x & x.wrapping_neg();
        let r = x.wrapping_add(low);
        if r == 0 {
            break;
        }
        x = (((r ^ x) >> 2) / low) | r;
    }
    out
}

/// Fewest marks hitting every rectangle of the `N x N` grid.
pub fn solve_min_marks_2d(n: usize) -> Result<usize> {
    if !(1..=MAX_SOLVE_2D).contains(&n) {
        return Err(Error::Domain(format!("planar solver needs 1 <= N <= {MAX_SOLVE_2D}, got {n}")));
    }
    // Largest set of unmarked cells in which two rows share at most one column.
    let rows = max_two_free(n);
    Ok(n * n - rows)
}

/// Largest total size of `n` subsets of `0..n` pairwise meeting in at most
/// one element. Rows in nonincreasing size; the first row is a prefix.
fn max_two_free(n: usize) -> usize {
    fn go(n: usize, rows: &mut Vec<u64>, last: usize, total: usize, best: &mut usize) {
        if rows.len() == n {
            *best = (*best).max(total);
            return;
        }
        let rem = n - rows.len();
        for size in (0..=last).rev() {
            if total + size * rem <= *best {
                return;
            }
            for m in masks_with(n, size) {
                if rows.iter().all(|r| (r & m).count_ones() <= 1) {
                    rows.push(m);
                    go(n, rows, size, total + size, best);
                    rows.pop();
                    if total + size * rem <= *best {
                        break;
                    }
                }
            }
        }
    }
    let mut best = 0;
    for first in (0..=n).rev() {
        if first * n <= best {
            break;
        }
        let mut rows = vec![(1u64 << first) - 1];
        go(n, &mut rows, first, first, &mut best);
    }
    best
}

/// Least `sum c_i` over `N` layer counts whose pairwise sums all reach the
/// planar minimum.
pub fn layer_count_lower_bound(n: usize) -> Result<usize> {
    let need = solve_min_marks_2d(n)?;
    Ok(layer_count_bound_from(n, need))
}

fn layer_count_bound_from(n: usize, need: usize) -> usize {
    fn go(left: usize, lo: usize, need: usize, first: Option<usize>, sum: usize, best: &mut usize) {
        if left == 0 {
            *best = (*best).min(sum);
            return;
        }
        for c in lo..=need {
            // Sorted counts: the two smallest decide every pairwise sum.
            if let Some(f) = first {
                if f + c < need {
                    continue;
                }
            }
            go(left - 1, c, need, first.or(Some(c)), sum + c, best);
        }
    }
    if n < 2 {
        return 0;
    }
    let mut best = usize::MAX;
    go(n, 0, need, None, 0, &mut best);
    best
}

fn check_solve3(n: usize) -> Result<()> {
    if !(2..=MAX_SOLVE_3D).contains(&n) {
        return Err(Error::Domain(format!("3D solver needs 2 <= N <= {MAX_SOLVE_3D}, got {n}")));
    }
    Ok(())
}

struct Layered<'a> {
    n: usize,
    plane: Plane,
    /// Planar masks of each size whose rectangles are all hit when unioned
    /// with nothing; filled lazily per size.
    by_size: Vec<Vec<u64>>,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
    nodes: AtomicU64,
}

impl<'a> Layered<'a> {
    fn new(n: usize, deadline: Option<Instant>, abort: &'a AtomicBool) -> Self {
        let cells = n * n;
        Layered {
            n,
            plane: Plane::new(n),
            by_size: (0..=cells).map(|c| masks_with(cells, c)).collect(),
            deadline,
            abort,
            nodes: AtomicU64::new(0),
        }
    }

    /// First layers: orbit minima under row and column permutations and
    /// transpose, of size `c`.
    fn first_layers(&self, c: usize) -> Vec<u64> {
        let ps = symmetry::permutations(self.n);
        self.by_size[c]
            .iter()
            .copied()
            .filter(|&m| {
                ps.iter().all(|px| {
                    ps.iter().all(|py| {
                        self.plane.image(m, px, py, false) >= m && self.plane.image(m, px, py, true) >= m
                    })
                })
            })
            .collect()
    }

    fn tick(&self) -> bool {
        let count = self.nodes.fetch_add(1, Ordering::Relaxed);
        if count % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.abort.store(true, Ordering::Relaxed);
                }
            }
        }
        !self.abort.load(Ordering::Relaxed)
    }

    /// Extends `layers` to `n` layers with at most `t` marks in total.
    fn extend(&self, layers: &mut Vec<u64>, used: usize, t: usize, all: bool, out: &mut Vec<Vec<u64>>) -> bool {
        if !self.tick() {
            return false;
        }
        if layers.len() == self.n {
            out.push(layers.clone());
            return all;
        }
        let last = *layers.last().expect("first layer placed");
        let last_c = last.count_ones() as usize;
        let rem = self.n - layers.len();
        for c in last_c..self.by_size.len() {
            if used + c * rem > t {
                break;
            }
            for &m in &self.by_size[c] {
                if c == last_c && m < last {
                    continue;
                }
                if !layers.iter().all(|&l| self.plane.hits(l | m)) {
                    continue;
                }
                layers.push(m);
                let go_on = self.extend(layers, used + c, t, all, out);
                layers.pop();
                if !go_on {
                    return false;
                }
            }
        }
        true
    }

    /// Solutions with at most `t` marks; only the first unless `all`.
    fn run(&self, t: usize, all: bool) -> Vec<Vec<u64>> {
        use rayon::prelude::*;
        let mut tasks = Vec::new();
        for c in 0..=t / self.n {
            for m in self.first_layers(c) {
                tasks.push(m);
            }
        }
        let run_one = |first: u64| {
            let mut out = Vec::new();
            let mut layers = vec![first];
            self.extend(&mut layers, first.count_ones() as usize, t, all, &mut out);
            out
        };
        if all {
            tasks.into_par_iter().flat_map_iter(run_one).collect()
        } else {
            tasks
                .into_par_iter()
                .find_map_first(|f| run_one(f).into_iter().next())
                .into_iter()
                .collect()
        }
    }

    fn to_points(&self, layers: &[u64]) -> Result<PointSet3> {
        let n = self.n;
        let mut pts = Vec::new();
        for (z, &m) in layers.iter().enumerate() {
            for c in 0..n * n {
                if m >> c & 1 == 1 {
                    pts.push([c % n, c / n, z]);
                }
            }
        }
        PointSet3::from_points(n, pts)
    }
}

struct Corners<'a> {
    n: usize,
    boxes: Vec<u64>,
    deadline: Option<Instant>,
    abort: &'a AtomicBool,
    nodes: AtomicU64,
}

impl Corners<'_> {
    fn first_unhit(&self, marks: u64) -> Option<u64> {
        self.boxes.iter().copied().find(|&b| b & marks == 0)
    }

    /// Disjoint unhit boxes, each needing its own new mark outside
    /// `forbidden`. `None` when some box can no longer be hit.
    fn packing(&self, marks: u64, forbidden: u64) -> Option<usize> {
        let mut used = 0u64;
        let mut count = 0;
        for &b in &self.boxes {
            if b & marks != 0 {
                continue;
            }
            let open = b & !forbidden;
            if open == 0 {
                return None;
            }
            if open & used == 0 {
                used |= open;
                count += 1;
            }
        }
        Some(count)
    }

    fn search(&self, marks: u64, forbidden: u64, left: usize) -> Option<u64> {
        if self.abort.load(Ordering::Relaxed) {
            return None;
        }
        let count = self.nodes.fetch_add(1, Ordering::Relaxed);
        if count % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.abort.store(true, Ordering::Relaxed);
                    return None;
                }
            }
        }
        let Some(b) = self.first_unhit(marks) else {
            return Some(marks);
        };
        match self.packing(marks, forbidden) {
            Some(p) if p <= left => {}
            _ => return None,
        }
        let mut forbidden = forbidden;
        let mut rest = b & !forbidden;
        while rest != 0 {
            let c = rest & rest.wrapping_neg();
            rest &= rest - 1;
            if let Some(found) = self.search(marks | c, forbidden, left - 1) {
                return Some(found);
            }
            forbidden |= c;
        }
        None
    }
}

pub fn solve_min_marks_3d(n: usize, budget: Duration) -> Result<Solve3> {
    solve_min_marks_3d_with(n, Some(budget), Engine3::Layered)
}

/// Iterative deepening from the layer-count bound.
pub fn solve_min_marks_3d_with(n: usize, budget: Option<Duration>, engine: Engine3) -> Result<Solve3> {
    check_solve3(n)?;
    solve_3d_from(n, budget, engine, layer_count_lower_bound(n)?)
}

/// Deepening from an explicit starting bound.
pub fn solve_3d_from(n: usize, budget: Option<Duration>, engine: Engine3, start: usize) -> Result<Solve3> {
    check_solve3(n)?;
    let started = Instant::now();
    let deadline = budget.map(|b| started + b);
    let abort = AtomicBool::new(false);
    let mut t = start;
    let mut stats = Stats3::default();
    let layered = Layered::new(n, deadline, &abort);
    let corners = Corners {
        n,
        boxes: boxes(n)
            .map(|b| b.corners().iter().fold(0u64, |m, p| m | 1 << (p[0] + n * p[1] + n * n * p[2])))
            .collect(),
        deadline,
        abort: &abort,
        nodes: AtomicU64::new(0),
    };
    loop {
        let found = match engine {
            Engine3::Layered => layered
                .run(t, false)
                .first()
                .map(|l| layered.to_points(l))
                .transpose()?,
            Engine3::CornerBranching => {
                // Every hitting set can be moved to contain the origin.
                let root = 1u64;
                let hit = if t == 0 { None } else { corners.search(root, 0, t - 1) };
                hit.map(|m| PointSet3::from_codes(n, (0..64).filter(|c| m >> c & 1 == 1)))
                    .transpose()?
            }
        };
        stats.nodes_expanded = layered.nodes.load(Ordering::Relaxed) + corners.nodes.load(Ordering::Relaxed);
        stats.runtime_ms = started.elapsed().as_millis() as u64;
        if let Some(cert) = found {
            if find_unhit_box(&cert).is_some() {
                return Err(Error::Contract(format!("3D certificate for N={n} leaves a box unhit")));
            }
            let value = cert.len();
            let _ = corners.n;
            return Ok(Solve3::Exact(MarksResult {
                n,
                value,
                order: n * n * n - value,
                certificate: cert,
                stats,
            }));
        }
        if abort.load(Ordering::Relaxed) {
            return Ok(Solve3::Bounds {
                n,
                lower: t,
                upper: n * n * n - 2 * n + 1,
                stats,
            });
        }
        stats.exhausted.push(t);
        t += 1;
    }
}

/// Orbit representatives (as canonical code lists) of all minimum hitting
/// sets with exactly `value` marks.
pub fn minimum_classes_3d(n: usize, value: usize) -> Result<Vec<Vec<u32>>> {
    check_solve3(n)?;
    let abort = AtomicBool::new(false);
    let layered = Layered::new(n, None, &abort);
    let orbits = Orbits::new(n)?;
    let mut classes = std::collections::BTreeSet::new();
    for layers in layered.run(value, true) {
        let s = layered.to_points(&layers)?;
        if s.len() == value {
            classes.insert(orbits.canonical(&s)?);
        }
    }
    Ok(classes.into_iter().collect())
}

/// True if no set of exactly `size` marks hits every box, by trying them
/// all.
pub fn no_hitting_set_of_size(n: usize, size: usize) -> Result<bool> {
    check_solve3(n)?;
    let cells = n * n * n;
    let count = (0..size).fold(1f64, |acc, i| acc * (cells - i) as f64 / (i + 1) as f64);
    if count > 1e7 {
        return Err(Error::Size(format!("C({cells},{size}) subsets is too many to try")));
    }
    let boxes: Vec<u64> = boxes(n)
        .map(|b| b.corners().iter().fold(0u64, |m, p| m | 1 << (p[0] + n * p[1] + n * n * p[2])))
        .collect();
    Ok(masks_with(cells, size)
        .into_iter()
        .all(|m| boxes.iter().any(|&b| b & m == 0)))
}
