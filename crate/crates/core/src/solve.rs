//! Exact computation of `alpha(k, n)`, the fewest ones in an `n x n` matrix
//! with no all-zero `k x k` minor.

mod orderly;
mod witness;

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::bits::Bits;
use crate::bounds::upper_bound_report;
use crate::canon::{canonical_form, CanonicalForm, MAX_CANON_DIM};
use crate::error::{Error, Result};
use crate::matrix::BinaryMatrix;
use crate::verify::find_zero_minor;

pub use witness::lower_bound;

/// Largest side the exact solvers accept.
pub const MAX_SOLVE_SIDE: usize = 32;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes_expanded: u64,
    pub runtime_ms: u64,
    /// The last one-count tried.
    pub depth_limit_used: u64,
    pub symmetry_prunes: u64,
    /// One-counts shown infeasible by exhausting the search.
    pub exhausted: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaResult {
    pub k: usize,
    pub n: usize,
    pub value: usize,
    pub certificate: BinaryMatrix,
    pub stats: SearchStats,
}

/// What a budget-limited solve learned before time ran out.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub k: usize,
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub stats: SearchStats,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Solve {
    Exact(AlphaResult),
    Bounds(BoundsReport),
}

impl Solve {
    pub fn exact(&self) -> Option<&AlphaResult> {
        match self {
            Solve::Exact(r) => Some(r),
            Solve::Bounds(_) => None,
        }
    }

    pub fn stats(&self) -> &SearchStats {
        match self {
            Solve::Exact(r) => &r.stats,
            Solve::Bounds(b) => &b.stats,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    /// Rows in canonical order with column-cell refinement.
    #[default]
    RowOrderly,
    /// Branch on the cells of a zero minor of the partial matrix.
    WitnessBranching,
}

#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub budget: Option<Duration>,
    pub threads: Option<usize>,
    pub engine: Engine,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            budget: Some(Duration::from_secs(300)),
            threads: None,
            engine: Engine::RowOrderly,
        }
    }
}

impl SolveOptions {
    pub fn with_budget(budget: Duration) -> Self {
        SolveOptions {
            budget: Some(budget),
            ..Self::default()
        }
    }
}

fn check_params(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::Domain(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if n > MAX_SOLVE_SIDE {
        return Err(Error::Size(format!("n={n} exceeds the solver limit {MAX_SOLVE_SIDE}")));
    }
    Ok(())
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .map_err(|e| Error::Contract(format!("thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Best value known without search: the families that exist for `n = 2k`
/// and `n = 2k + 1`, the diagonal family above `n/2`, and `n^2`.
pub fn known_upper(k: usize, n: usize) -> usize {
    let mut up = n * n;
    if 2 * k > n {
        up = up.min(2 * (n - k) + 1);
    }
    if n == 2 * k && k >= 2 {
        up = up.min(3 * k + 1);
    }
    if n == 2 * k + 1 {
        up = up.min(upper_bound_report(k as u64).best_upper as usize);
    }
    up
}

fn to_matrix(n: usize, rows: &[u64]) -> Result<BinaryMatrix> {
    let rows = rows
        .iter()
        .map(|&r| Bits::from_indices(n, orderly::columns(r)))
        .collect();
    BinaryMatrix::from_rows(n, rows)
}

pub fn solve_alpha(k: usize, n: usize, budget: Duration) -> Result<Solve> {
    solve_alpha_with(k, n, &SolveOptions::with_budget(budget))
}

/// Iterative deepening on the one-count from an admissible start value.
/// The value found does not depend on the worker count.
pub fn solve_alpha_with(k: usize, n: usize, opts: &SolveOptions) -> Result<Solve> {
    check_params(k, n)?;
    let started = Instant::now();
    let deadline = opts.budget.map(|b| started + b);
    let abort = AtomicBool::new(false);
    let (found, mut stats, t) = in_pool(opts.threads, || match opts.engine {
        Engine::RowOrderly => run_orderly(k, n, deadline, &abort),
        Engine::WitnessBranching => run_witness(k, n, deadline, &abort),
    })??;
    stats.runtime_ms = started.elapsed().as_millis() as u64;
    match found {
        Some(certificate) => {
            if find_zero_minor(&certificate, k)?.is_some() || certificate.ones_count() != t {
                return Err(Error::Contract(format!(
                    "solver certificate for ({k},{n}) failed re-verification"
                )));
            }
            Ok(Solve::Exact(AlphaResult {
                k,
                n,
                value: t,
                certificate,
                stats,
            }))
        }
        None => Ok(Solve::Bounds(BoundsReport {
            k,
            n,
            lower: t,
            upper: known_upper(k, n),
            stats,
        })),
    }
}

type Run = Result<(Option<BinaryMatrix>, SearchStats, usize)>;

fn run_orderly(k: usize, n: usize, deadline: Option<Instant>, abort: &AtomicBool) -> Run {
    let search = orderly::Search::new(k, n, deadline, abort);
    let mut stats = SearchStats::default();
    let mut t = search.start_bound();
    loop {
        stats.depth_limit_used = u64::from(t);
        let hit = search.first_at(t);
        stats.nodes_expanded = search.nodes.load(Ordering::Relaxed);
        stats.symmetry_prunes = search.prunes.load(Ordering::Relaxed);
        if let Some(rows) = hit {
            return Ok((Some(to_matrix(n, &rows)?), stats, t as usize));
        }
        if abort.load(Ordering::Relaxed) {
            return Ok((None, stats, t as usize));
        }
        stats.exhausted.push(u64::from(t));
        t += 1;
    }
}

fn run_witness(k: usize, n: usize, deadline: Option<Instant>, abort: &AtomicBool) -> Run {
    let b = witness::Branching {
        k,
        n,
        deadline,
        abort,
        nodes: Default::default(),
        prunes: Default::default(),
    };
    let mut stats = SearchStats::default();
    let mut t = lower_bound(k, n, &BinaryMatrix::zeros(n, n)?)?.max(1);
    loop {
        stats.depth_limit_used = t as u64;
        let hit = b.first_at(t)?;
        stats.nodes_expanded = b.nodes.load(Ordering::Relaxed);
        stats.symmetry_prunes = b.prunes.load(Ordering::Relaxed);
        if let Some(m) = hit {
            let ones = m.ones_count();
            return Ok((Some(m), stats, ones));
        }
        if abort.load(Ordering::Relaxed) {
            return Ok((None, stats, t));
        }
        stats.exhausted.push(t as u64);
        t += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enumeration {
    pub k: usize,
    pub n: usize,
    pub value: usize,
    /// Sorted by canonical body.
    pub classes: Vec<CanonicalForm>,
    pub complete: bool,
    pub stats: SearchStats,
}

/// All equivalence classes (row and column permutations) of valid matrices
/// with exactly `value` ones.
pub fn enumerate_optima(k: usize, n: usize, value: usize, budget: Option<Duration>) -> Result<Enumeration> {
    check_params(k, n)?;
    if n > MAX_CANON_DIM {
        return Err(Error::Size(format!("enumeration needs n <= {MAX_CANON_DIM}")));
    }
    let started = Instant::now();
    let abort = AtomicBool::new(false);
    let search = orderly::Search::new(k, n, budget.map(|b| started + b), &abort);
    let leaves = search.all_at(value as u32);
    let mut classes = BTreeMap::new();
    for rows in leaves {
        let m = to_matrix(n, &rows)?;
        if m.ones_count() != value {
            continue;
        }
        let f = canonical_form(&m, false)?;
        classes.entry(f.body().to_string()).or_insert(f);
    }
    let stats = SearchStats {
        nodes_expanded: search.nodes.load(Ordering::Relaxed),
        runtime_ms: started.elapsed().as_millis() as u64,
        depth_limit_used: value as u64,
        symmetry_prunes: search.prunes.load(Ordering::Relaxed),
        exhausted: Vec::new(),
    };
    Ok(Enumeration {
        k,
        n,
        value,
        classes: classes.into_values().collect(),
        complete: !abort.load(Ordering::Relaxed),
        stats,
    })
}

/// Filled cells of the reference value table, `n <= 11`: the first column,
/// and every `k >= (n-1)/2`.
pub fn table_cells() -> Vec<(usize, usize, usize)> {
    let mut cells = Vec::new();
    for n in 1..=11usize {
        for k in 1..=n {
            let value = if k == 1 {
                n * n
            } else if 2 * k > n {
                2 * (n - k) + 1
            } else if 2 * k == n {
                3 * k + 1
            } else if 2 * k + 1 == n {
                match k {
                    2 => 13,
                    3 => 16,
                    4 => 20,
                    5 => 23,
                    _ => unreachable!(),
                }
            } else {
                continue;
            };
            cells.push((k, n, value));
        }
    }
    cells
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Match,
    Mismatch,
    Timeout,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CellReport {
    pub k: usize,
    pub n: usize,
    pub expected: usize,
    pub found: Option<usize>,
    pub lower: usize,
    pub status: CellStatus,
    pub runtime_ms: u64,
}

/// Solves every table cell with `n <= max_n`, sorted by `(n, k)`.
pub fn verify_table(max_n: usize, budget_per_cell: Duration) -> Result<Vec<CellReport>> {
    let mut out = Vec::new();
    for (k, n, expected) in table_cells() {
        if n > max_n {
            continue;
        }
        let s = solve_alpha(k, n, budget_per_cell)?;
        let (found, lower) = match &s {
            Solve::Exact(r) => (Some(r.value), r.value),
            Solve::Bounds(b) => (None, b.lower),
        };
        let status = match found {
            Some(v) if v == expected => CellStatus::Match,
            Some(_) => CellStatus::Mismatch,
            None => CellStatus::Timeout,
        };
        out.push(CellReport {
            k,
            n,
            expected,
            found,
            lower,
            status,
            runtime_ms: s.stats().runtime_ms,
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn value(k: usize, n: usize) -> usize {
        solve_alpha(k, n, Duration::from_secs(60)).unwrap().exact().unwrap().value
    }

    #[test]
    fn small_values() {
        assert_eq!(value(2, 4), 7);
        assert_eq!(value(2, 3), 3);
        assert_eq!(value(1, 4), 16);
        assert_eq!(value(5, 5), 1);
        assert_eq!(value(3, 5), 5);
    }

    #[test]
    fn engines_agree_small() {
        for n in 1..=4 {
            for k in 1..=n {
                let opts = SolveOptions {
                    engine: Engine::WitnessBranching,
                    ..SolveOptions::default()
                };
                let w = solve_alpha_with(k, n, &opts).unwrap();
                assert_eq!(w.exact().unwrap().value, value(k, n), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn zero_budget_reports_bounds() {
        let s = solve_alpha(3, 7, Duration::ZERO).unwrap();
        match s {
            Solve::Bounds(b) => {
                assert!(b.lower <= 16 && b.upper >= 16);
                assert_eq!(b.upper, 16);
            }
            Solve::Exact(r) => assert_eq!(r.value, 16),
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(solve_alpha(0, 3, Duration::from_secs(1)), Err(Error::Domain(_))));
        assert!(matches!(solve_alpha(4, 3, Duration::from_secs(1)), Err(Error::Domain(_))));
        assert!(matches!(solve_alpha(2, 40, Duration::from_secs(1)), Err(Error::Size(_))));
    }

    #[test]
    fn thread_count_does_not_change_value() {
        for threads in [1, 3] {
            let opts = SolveOptions {
                threads: Some(threads),
                ..SolveOptions::default()
            };
            let r = solve_alpha_with(3, 6, &opts).unwrap();
            assert_eq!(r.exact().unwrap().value, 10);
        }
    }

    #[test]
    fn unique_class_at_2_4() {
        let e = enumerate_optima(2, 4, 7, None).unwrap();
        assert!(e.complete);
        assert_eq!(e.classes.len(), 1);
    }

    #[test]
    fn table_has_expected_cells() {
        let cells = table_cells();
        assert!(cells.contains(&(2, 5, 13)));
        assert!(cells.contains(&(5, 10, 16)));
        assert!(cells.contains(&(1, 11, 121)));
        assert!(!cells.iter().any(|&(k, n, _)| k == 2 && n == 6));
        assert_eq!(cells.iter().filter(|c| c.1 == 7).count(), 6);
    }
}
