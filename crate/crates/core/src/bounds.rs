//! Closed-form upper bounds for the `n = 2k+1` families, crossover scans, and
//! the real-valued counting bounds for the lattice problems.

use serde::Serialize;

use crate::construct;

/// Slack used for every real-valued comparison.
pub const EPS: f64 = 1e-9;

/// `2 N^(11/4)`, an upper bound on the order of the `N x N x N` grid.
pub fn cs_bound_3d(n: u32) -> f64 {
    2.0 * f64::from(n).powf(11.0 / 4.0)
}

/// `sqrt(2) N^(3/2)`, an upper bound on rectangle-free sets in the `N x N` grid.
pub fn cs_bound_2d(n: u32) -> f64 {
    std::f64::consts::SQRT_2 * f64::from(n).powf(1.5)
}

/// True iff `value < bound` with the comparison slack.
pub fn strictly_below(value: f64, bound: f64) -> bool {
    value < bound - EPS
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Band4k5,
    SevenHalves,
    TenThirds,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::Band4k5, Family::SevenHalves, Family::TenThirds];

    pub fn name(self) -> &'static str {
        match self {
            Family::Band4k5 => "4k+5",
            Family::SevenHalves => "7k/2",
            Family::TenThirds => "10k/3",
        }
    }

    /// The closed-form count at `k`.
    pub fn value(self, k: u64) -> u64 {
        match self {
            Family::Band4k5 => 4 * k + 5,
            Family::SevenHalves => {
                if k % 2 == 1 {
                    (7 * k + 11) / 2
                } else {
                    (7 * k + 12) / 2
                }
            }
            Family::TenThirds => match k % 3 {
                0 => (10 * k + 24) / 3,
                1 => (10 * k + 23) / 3,
                _ => (10 * k + 25) / 3,
            },
        }
    }

    pub fn min_k(self) -> u64 {
        match self {
            Family::Band4k5 | Family::SevenHalves => 1,
            Family::TenThirds => construct::min_k(3) as u64,
        }
    }

    pub fn applicable(self, k: u64) -> bool {
        k >= self.min_k()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyValue {
    pub family: Family,
    pub value: u64,
    pub applicable: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub k: u64,
    pub families: Vec<FamilyValue>,
    pub best_upper: u64,
    pub best_family: Family,
}

/// Evaluates every family at `k`. Ties go to the earlier family.
pub fn upper_bound_report(k: u64) -> BoundReport {
    assert!(k >= 1, "k must be positive");
    let families: Vec<FamilyValue> = Family::ALL
        .iter()
        .map(|&family| FamilyValue {
            family,
            value: family.value(k),
            applicable: family.applicable(k),
        })
        .collect();
    let best = families
        .iter()
        .filter(|f| f.applicable)
        .min_by_key(|f| (f.value, f.family))
        .expect("4k+5 always applies");
    BoundReport {
        k,
        best_upper: best.value,
        best_family: best.family,
        families,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crossover {
    pub k: u64,
    pub old_family: Family,
    pub new_family: Family,
}

/// Every `k <= k_max` at which the best family differs from the one at `k - 1`.
pub fn crossover_scan(k_max: u64) -> Vec<Crossover> {
    let mut out = Vec::new();
    let mut prev: Option<Family> = None;
    for k in 1..=k_max {
        let fam = upper_bound_report(k).best_family;
        if let Some(p) = prev {
            if p != fam {
                out.push(Crossover {
                    k,
                    old_family: p,
                    new_family: fam,
                });
            }
        }
        prev = Some(fam);
    }
    out
}
