//! Finite ranked posets of faces.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::simplicial::SimplicialComplex;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PosetError {
    #[error("cover {lower} < {upper} has rank difference {diff}, expected 1")]
    BadCover {
        lower: String,
        upper: String,
        diff: i64,
    },
    #[error("expected exactly one face of rank {rank}, found {found}")]
    Top { rank: usize, found: usize },
    #[error("face {0} is not below the top face")]
    NotBelowTop(String),
    #[error("face {face} has rank {rank} outside 0..={max}")]
    RankRange {
        face: String,
        rank: usize,
        max: usize,
    },
}

/// Graded poset given by ranks and cover relations, with the order relation
/// precomputed. Face indices are positions in the input list.
///
/// Invariant: every cover raises rank by exactly one and there is a unique
/// face of maximal rank lying above every face.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacePoset {
    labels: Vec<String>,
    ranks: Vec<usize>,
    lower: Vec<Vec<usize>>,
    upper: Vec<Vec<usize>>,
    below: Vec<BTreeSet<usize>>,
    top: usize,
}

impl FacePoset {
    pub fn new(
        labels: Vec<String>,
        ranks: Vec<usize>,
        max_rank: usize,
        covers: &[(usize, usize)],
    ) -> Result<Self, PosetError> {
        let n = labels.len();
        for (i, &r) in ranks.iter().enumerate() {
            if r > max_rank {
                return Err(PosetError::RankRange {
                    face: labels[i].clone(),
                    rank: r,
                    max: max_rank,
                });
            }
        }
        let mut lower = vec![Vec::new(); n];
        let mut upper = vec![Vec::new(); n];
        for &(a, b) in covers {
            if ranks[b] as i64 - ranks[a] as i64 != 1 {
                return Err(PosetError::BadCover {
                    lower: labels[a].clone(),
                    upper: labels[b].clone(),
                    diff: ranks[b] as i64 - ranks[a] as i64,
                });
            }
            lower[b].push(a);
            upper[a].push(b);
        }
        for v in lower.iter_mut().chain(upper.iter_mut()) {
            v.sort_unstable();
            v.dedup();
        }
        let tops: Vec<usize> = (0..n).filter(|&i| ranks[i] == max_rank).collect();
        if tops.len() != 1 {
            return Err(PosetError::Top {
                rank: max_rank,
                found: tops.len(),
            });
        }
        // ranks strictly increase along covers, so processing by rank is a linear extension
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| (ranks[i], i));
        let mut below: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); n];
        for &i in &order {
            let mut s = BTreeSet::from([i]);
            for &l in &lower[i] {
                s.extend(below[l].iter().copied());
            }
            below[i] = s;
        }
        let top = tops[0];
        if let Some(i) = (0..n).find(|i| !below[top].contains(i)) {
            return Err(PosetError::NotBelowTop(labels[i].clone()));
        }
        Ok(FacePoset {
            labels,
            ranks,
            lower,
            upper,
            below,
            top,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn max_rank(&self) -> usize {
        self.ranks[self.top]
    }

    pub fn top(&self) -> usize {
        self.top
    }

    /// Facets of face `i` (faces covered by it).
    pub fn facets_of(&self, i: usize) -> &[usize] {
        &self.lower[i]
    }

    /// Faces covering `i`.
    pub fn cofacets_of(&self, i: usize) -> &[usize] {
        &self.upper[i]
    }

    /// All faces `<= i`, including `i`.
    pub fn below(&self, i: usize) -> &BTreeSet<usize> {
        &self.below[i]
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.below[b].contains(&a)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Minimal common upper bounds of `a` and `b`.
    pub fn minimal_upper_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        let common: Vec<usize> = (0..self.len())
            .filter(|&c| self.leq(a, c) && self.leq(b, c))
            .collect();
        common
            .iter()
            .copied()
            .filter(|&c| !common.iter().any(|&d| d != c && self.leq(d, c)))
            .collect()
    }

    /// Maximal common lower bounds of `a` and `b`.
    pub fn maximal_lower_bounds(&self, a: usize, b: usize) -> Vec<usize> {
        let common: Vec<usize> = self.below[a]
            .intersection(&self.below[b])
            .copied()
            .collect();
        common
            .iter()
            .copied()
            .filter(|&c| !common.iter().any(|&d| d != c && self.leq(c, d)))
            .collect()
    }

    /// Order complex of the faces in `subset` (chains become simplices).
    /// Vertices are face indices.
    pub fn order_complex(&self, subset: &BTreeSet<usize>) -> SimplicialComplex {
        if subset.is_empty() {
            return SimplicialComplex::empty(self.len());
        }
        // maximal chains: extend downward from maximal elements
        let mut chains = Vec::new();
        let maximal: Vec<usize> = subset
            .iter()
            .copied()
            .filter(|&c| !subset.iter().any(|&d| d != c && self.leq(c, d)))
            .collect();
        let mut stack: Vec<Vec<usize>> = maximal.into_iter().map(|m| vec![m]).collect();
        while let Some(chain) = stack.pop() {
            let last = *chain.last().unwrap();
            let below: Vec<usize> = subset
                .iter()
                .copied()
                .filter(|&c| c != last && self.leq(c, last))
                .filter(|&c| {
                    !subset
                        .iter()
                        .any(|&d| d != c && d != last && self.leq(c, d) && self.leq(d, last))
                })
                .collect();
            if below.is_empty() {
                chains.push(chain);
            } else {
                for b in below {
                    let mut next = chain.clone();
                    next.push(b);
                    stack.push(next);
                }
            }
        }
        SimplicialComplex::new(self.len(), chains).expect("chain vertices are face indices")
    }
}
