use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Finitely supported map from integer degree to dimension.
///
/// Zero entries are never stored, so two values are equal exactly when they
/// describe the same graded vector space up to isomorphism.
#[derive(Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GradedDims(BTreeMap<i32, usize>);

impl GradedDims {
    pub fn new() -> Self {
        GradedDims(BTreeMap::new())
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i32, usize)>) -> Self {
        let mut g = GradedDims::new();
        for (d, n) in pairs {
            g.add(d, n);
        }
        g
    }

    /// A single copy of `k` in degree `deg`.
    pub fn unit(deg: i32) -> Self {
        GradedDims::from_pairs([(deg, 1)])
    }

    pub fn get(&self, deg: i32) -> usize {
        self.0.get(&deg).copied().unwrap_or(0)
    }

    pub fn set(&mut self, deg: i32, dim: usize) {
        if dim == 0 {
            self.0.remove(&deg);
        } else {
            self.0.insert(deg, dim);
        }
    }

    pub fn add(&mut self, deg: i32, dim: usize) {
        let v = self.get(deg) + dim;
        self.set(deg, v);
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, usize)> + '_ {
        self.0.iter().map(|(&d, &n)| (d, n))
    }

    pub fn degrees(&self) -> impl Iterator<Item = i32> + '_ {
        self.0.keys().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.0.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.0.keys().next_back().copied()
    }

    pub fn shifted(&self, by: i32) -> Self {
        GradedDims(self.0.iter().map(|(&d, &n)| (d + by, n)).collect())
    }

    pub fn sum(&self, other: &GradedDims) -> Self {
        let mut g = self.clone();
        for (d, n) in other.iter() {
            g.add(d, n);
        }
        g
    }

    /// Dimensions for degrees `lo..=hi` as a dense vector.
    pub fn to_vec(&self, lo: i32, hi: i32) -> Vec<usize> {
        (lo..=hi).map(|d| self.get(d)).collect()
    }
}

impl fmt::Debug for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for GradedDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(d, n)| {
                if n == 1 {
                    format!("k[{d}]")
                } else {
                    format!("k^{n}[{d}]")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
