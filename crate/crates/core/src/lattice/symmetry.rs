//! The symmetry group of the `N x N x N` grid: independent permutations of
//! the layers along each axis, followed by a permutation of the axes.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GridSymmetry {
    /// `perms[a][i]`: where layer `i` along axis `a` goes.
    pub perms: [Vec<usize>; 3],
    /// Axis `a` of the source becomes axis `sigma[a]` of the image.
    pub sigma: [usize; 3],
}

fn is_perm(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &j) in p.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// All permutations of `0..n` in lexicographic order.
pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).expect("pivot has a successor");
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

impl GridSymmetry {
    pub fn identity(n: usize) -> Self {
        let id: Vec<usize> = (0..n).collect();
        GridSymmetry {
            perms: [id.clone(), id.clone(), id],
            sigma: [0, 1, 2],
        }
    }

    pub fn new(perms: [Vec<usize>; 3], sigma: [usize; 3]) -> Result<Self> {
        let n = perms[0].len();
        if !perms.iter().all(|p| is_perm(p, n)) || !is_perm(&sigma, 3) {
            return Err(Error::Domain("layer or axis permutation is not a bijection".into()));
        }
        Ok(GridSymmetry { perms, sigma })
    }

    pub fn n(&self) -> usize {
        self.perms[0].len()
    }

    pub fn apply_point(&self, p: [usize; 3]) -> [usize; 3] {
        let mut out = [0; 3];
        for a in 0..3 {
            out[self.sigma[a]] = self.perms[a][p[a]];
        }
        out
    }

    /// `self` after `other`: `(self.compose(other)).apply(p) = self.apply(other.apply(p))`.
    pub fn compose(&self, other: &GridSymmetry) -> GridSymmetry {
        let mut perms: [Vec<usize>; 3] = Default::default();
        let mut sigma = [0; 3];
        for a in 0..3 {
            let b = other.sigma[a];
            sigma[a] = self.sigma[b];
            perms[a] = other.perms[a].iter().map(|&i| self.perms[b][i]).collect();
        }
        GridSymmetry { perms, sigma }
    }

    pub fn inverse(&self) -> GridSymmetry {
        let mut perms: [Vec<usize>; 3] = Default::default();
        let mut sigma = [0; 3];
        for a in 0..3 {
            let b = self.sigma[a];
            sigma[b] = a;
            perms[b] = invert(&self.perms[a]);
        }
        GridSymmetry { perms, sigma }
    }

    /// Every group element, `6 (N!)^3` of them.
    pub fn all(n: usize) -> Vec<GridSymmetry> {
        let ps = permutations(n);
        let sigmas = permutations(3);
        let mut out = Vec::with_capacity(6 * ps.len().pow(3));
        for s in &sigmas {
            for px in &ps {
                for py in &ps {
                    for pz in &ps {
                        out.push(GridSymmetry {
                            perms: [px.clone(), py.clone(), pz.clone()],
                            sigma: [s[0], s[1], s[2]],
                        });
                    }
                }
            }
        }
        out
    }

    /// The image of every point code `x + N y + N^2 z`.
    pub(crate) fn point_table(&self) -> Vec<u32> {
        let n = self.n();
        (0..n * n * n)
            .map(|c| {
                let q = self.apply_point([c % n, c / n % n, c / (n * n)]);
                (q[0] + n * q[1] + n * n * q[2]) as u32
            })
            .collect()
    }
}
