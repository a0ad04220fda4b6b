//! Abstract simplicial complexes and reduced homology over the rationals.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::exactla::{sparse_rank, GradedDims};

/// A face: strictly increasing vertex indices.
pub type Face = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimplicialError {
    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },
    #[error("face {0:?} is not in the complex")]
    NotAFace(Face),
}

/// Finite abstract simplicial complex on vertices `0..vertex_count`.
///
/// Stored by its facets (maximal faces), sorted by length then lexicographically.
/// The two degenerate complexes are explicit: VOID has no facets at all and
/// EMPTY has the single facet `{}`. Vertices need not all be used.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SimplicialComplex {
    vertex_count: usize,
    facets: Vec<Face>,
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    let mut it = b.iter();
    a.iter().all(|x| it.by_ref().any(|y| y == x))
}

fn sort_faces(faces: &mut [Face]) {
    faces.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
}

impl SimplicialComplex {
    /// Builds the complex generated by `faces`; non-maximal generators are dropped.
    pub fn new(
        vertex_count: usize,
        faces: impl IntoIterator<Item = Face>,
    ) -> Result<Self, SimplicialError> {
        let mut fs: Vec<Face> = Vec::new();
        for mut f in faces {
            f.sort_unstable();
            f.dedup();
            if let Some(&v) = f.iter().find(|&&v| v >= vertex_count) {
                return Err(SimplicialError::VertexOutOfRange {
                    vertex: v,
                    count: vertex_count,
                });
            }
            fs.push(f);
        }
        Ok(Self::from_sorted_faces(vertex_count, fs))
    }

    fn from_sorted_faces(vertex_count: usize, mut fs: Vec<Face>) -> Self {
        sort_faces(&mut fs);
        fs.dedup();
        // longer faces come later, so only look forward for supersets
        let facets: Vec<Face> = (0..fs.len())
            .filter(|&i| {
                !fs[i + 1..]
                    .iter()
                    .any(|g| g.len() > fs[i].len() && is_subset(&fs[i], g))
            })
            .map(|i| fs[i].clone())
            .collect();
        SimplicialComplex {
            vertex_count,
            facets,
        }
    }

    /// No faces at all.
    pub fn void(vertex_count: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            facets: Vec::new(),
        }
    }

    /// Only the empty face.
    pub fn empty(vertex_count: usize) -> Self {
        SimplicialComplex {
            vertex_count,
            facets: vec![Vec::new()],
        }
    }

    /// The full simplex on all `n` vertices.
    pub fn simplex(n: usize) -> Self {
        SimplicialComplex {
            vertex_count: n,
            facets: vec![(0..n).collect()],
        }
    }

    /// Boundary of the simplex on `n` vertices (a sphere of dimension `n - 2`).
    pub fn simplex_boundary(n: usize) -> Self {
        let facets = (0..n)
            .rev()
            .map(|skip| (0..n).filter(|&v| v != skip).collect())
            .collect();
        Self::from_sorted_faces(n, facets)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn facets(&self) -> &[Face] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty()
    }

    /// True for the complex whose only face is `{}`.
    pub fn is_empty_complex(&self) -> bool {
        self.facets.len() == 1 && self.facets[0].is_empty()
    }

    /// Dimension, or `None` for VOID. EMPTY has dimension -1.
    pub fn dim(&self) -> Option<i32> {
        self.facets.iter().map(|f| f.len() as i32 - 1).max()
    }

    pub fn contains(&self, face: &[usize]) -> bool {
        self.facets.iter().any(|f| is_subset(face, f))
    }

    /// Vertices that occur in some face.
    pub fn used_vertices(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.facets.iter().flatten().copied().collect();
        s.into_iter().collect()
    }

    /// Every face, sorted by length then lexicographically.
    pub fn all_faces(&self) -> Vec<Face> {
        let mut out: BTreeSet<Face> = BTreeSet::new();
        for f in &self.facets {
            for mask in 0u64..(1u64 << f.len()) {
                out.insert(
                    f.iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &v)| v)
                        .collect(),
                );
            }
        }
        let mut v: Vec<Face> = out.into_iter().collect();
        sort_faces(&mut v);
        v
    }

    /// Faces of dimension `dim` (`dim = -1` gives `{}` for non-void complexes).
    pub fn faces(&self, dim: i32) -> Vec<Face> {
        if dim < -1 {
            return Vec::new();
        }
        let k = (dim + 1) as usize;
        let mut out: BTreeSet<Face> = BTreeSet::new();
        for f in self.facets.iter().filter(|f| f.len() >= k) {
            for c in combinations(f, k) {
                out.insert(c);
            }
        }
        out.into_iter().collect()
    }

    /// Face counts `f_{-1}, f_0, ..., f_dim`.
    pub fn f_vector(&self) -> Vec<usize> {
        match self.dim() {
            None => Vec::new(),
            Some(d) => (-1..=d).map(|i| self.faces(i).len()).collect(),
        }
    }

    /// Reduced Euler characteristic `sum (-1)^i f_i`, including `f_{-1}`.
    pub fn reduced_euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(k, &n)| if k % 2 == 0 { -(n as i64) } else { n as i64 })
            .sum()
    }

    /// Reduced rational homology. VOID gives zero in every degree.
    pub fn reduced_homology(&self) -> GradedDims {
        let Some(d) = self.dim() else {
            return GradedDims::new();
        };
        let by_dim: Vec<Vec<Face>> = (-1..=d).map(|i| self.faces(i)).collect();
        // ranks[k] = rank of the boundary from faces of dim k-1 to faces of dim k-2
        let mut ranks = vec![0usize; by_dim.len() + 1];
        for k in 1..by_dim.len() {
            ranks[k] = boundary_rank(&by_dim[k], &by_dim[k - 1]);
        }
        let mut h = GradedDims::new();
        for (k, faces) in by_dim.iter().enumerate() {
            h.set(k as i32 - 1, faces.len() - ranks[k] - ranks[k + 1]);
        }
        h
    }

    /// True iff all reduced homology vanishes; false for EMPTY and VOID.
    pub fn is_acyclic(&self) -> bool {
        !self.is_void() && self.reduced_homology().is_zero()
    }

    /// `{g : g and f disjoint, g union f in the complex}`, keeping vertex labels.
    pub fn link(&self, face: &[usize]) -> Result<SimplicialComplex, SimplicialError> {
        let mut f = face.to_vec();
        f.sort_unstable();
        f.dedup();
        if !self.contains(&f) {
            return Err(SimplicialError::NotAFace(f));
        }
        let faces = self
            .facets
            .iter()
            .filter(|g| is_subset(&f, g))
            .map(|g| {
                g.iter()
                    .copied()
                    .filter(|v| f.binary_search(v).is_err())
                    .collect()
            })
            .collect();
        Ok(Self::from_sorted_faces(self.vertex_count, faces))
    }

    /// Closed star of a face.
    pub fn star(&self, face: &[usize]) -> SimplicialComplex {
        let faces = self
            .facets
            .iter()
            .filter(|g| is_subset(face, g))
            .cloned()
            .collect();
        Self::from_sorted_faces(self.vertex_count, faces)
    }

    /// Cone with apex `vertex_count` (one new vertex).
    pub fn cone(&self) -> SimplicialComplex {
        let n = self.vertex_count;
        let facets = self
            .facets
            .iter()
            .map(|f| f.iter().copied().chain([n]).collect())
            .collect();
        Self::from_sorted_faces(n + 1, facets)
    }

    /// Subcomplex of faces inside `vertices`.
    pub fn induced(&self, vertices: &[usize]) -> SimplicialComplex {
        if self.is_void() {
            return self.clone();
        }
        let faces = self
            .facets
            .iter()
            .map(|f| f.iter().copied().filter(|v| vertices.contains(v)).collect())
            .collect();
        Self::from_sorted_faces(self.vertex_count, faces)
    }

    /// Relabels used vertices as `0..m` in increasing order; returns the old labels.
    pub fn compact(&self) -> (SimplicialComplex, Vec<usize>) {
        let used = self.used_vertices();
        let index: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| f.iter().map(|v| index[v]).collect())
            .collect();
        (Self::from_sorted_faces(used.len(), facets), used)
    }

    /// Minimal non-faces among subsets of used vertices plus unused singletons.
    pub fn minimal_nonfaces(&self) -> Vec<Face> {
        if self.is_void() {
            return vec![Vec::new()];
        }
        let faces: BTreeSet<Face> = self.all_faces().into_iter().collect();
        let mut out = Vec::new();
        for v in 0..self.vertex_count {
            if !faces.contains(&vec![v]) {
                out.push(vec![v]);
            }
        }
        // a minimal non-face of size k >= 2 is a set whose every (k-1)-subset is a face
        let max = self.dim().unwrap_or(-1) + 2;
        let mut prev: Vec<Face> = faces.iter().filter(|f| f.len() == 1).cloned().collect();
        for k in 2..=max as usize {
            let mut level = BTreeSet::new();
            for a in &prev {
                for b in &prev {
                    if a[..k - 2] == b[..k - 2] && a[k - 2] < b[k - 2] {
                        let mut c = a.clone();
                        c.push(b[k - 2]);
                        if (0..k).all(|skip| {
                            let s: Face = c
                                .iter()
                                .enumerate()
                                .filter(|(i, _)| *i != skip)
                                .map(|(_, &v)| v)
                                .collect();
                            faces.contains(&s)
                        }) {
                            level.insert(c);
                        }
                    }
                }
            }
            out.extend(level.iter().filter(|c| !faces.contains(*c)).cloned());
            prev = level.into_iter().filter(|c| faces.contains(c)).collect();
        }
        sort_faces(&mut out);
        out
    }
}

/// All `k`-subsets of a sorted slice, in lexicographic order.
pub(crate) fn combinations(items: &[usize], k: usize) -> Vec<Face> {
    let n = items.len();
    if k > n {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Rank of the simplicial boundary from `upper` (dim d) to `lower` (dim d-1).
fn boundary_rank(upper: &[Face], lower: &[Face]) -> usize {
    if upper.is_empty() || lower.is_empty() {
        return 0;
    }
    let index: BTreeMap<&Face, usize> = lower.iter().enumerate().map(|(i, f)| (f, i)).collect();
    let rows = upper
        .iter()
        .map(|f| {
            let mut row: Vec<(usize, i64)> = (0..f.len())
                .map(|skip| {
                    let g: Face = f
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| *i != skip)
                        .map(|(_, &v)| v)
                        .collect();
                    (index[&g], if skip % 2 == 0 { 1 } else { -1 })
                })
                .collect();
            row.sort_unstable();
            row
        })
        .collect();
    sparse_rank(rows, lower.len())
}

impl fmt::Display for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_void() {
            return write!(f, "VOID");
        }
        if self.is_empty_complex() {
            return write!(f, "EMPTY");
        }
        let parts: Vec<String> = self
            .facets
            .iter()
            .map(|g| {
                format!(
                    "{{{}}}",
                    g.iter()
                        .map(|v| v.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SimplicialComplex({} vertices: {self})",
            self.vertex_count
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cx(n: usize, facets: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::new(n, facets.iter().map(|f| f.to_vec())).unwrap()
    }

    #[test]
    fn faces_of_degenerate_complexes() {
        let tri = SimplicialComplex::simplex_boundary(3);
        assert_eq!(tri.faces(0).len(), 3);
        assert_eq!(
            SimplicialComplex::empty(0).faces(-1),
            vec![Vec::<usize>::new()]
        );
        assert!(SimplicialComplex::void(3).faces(0).is_empty());
        assert!(SimplicialComplex::void(3).faces(-1).is_empty());
    }

    #[test]
    fn homology_examples() {
        assert_eq!(
            SimplicialComplex::empty(0).reduced_homology(),
            GradedDims::unit(-1)
        );
        assert_eq!(cx(2, &[&[0], &[1]]).reduced_homology(), GradedDims::unit(0));
        let hexagon = cx(6, &[&[0, 1], &[1, 2], &[2, 3], &[3, 4], &[4, 5], &[0, 5]]);
        assert_eq!(hexagon.reduced_homology(), GradedDims::unit(1));
        assert!(SimplicialComplex::void(2).reduced_homology().is_zero());
        assert_eq!(
            SimplicialComplex::simplex_boundary(4).reduced_homology(),
            GradedDims::unit(2)
        );
    }

    #[test]
    fn link_examples() {
        let tri = SimplicialComplex::simplex_boundary(3);
        assert_eq!(tri.link(&[0]).unwrap().facets(), &[vec![1], vec![2]]);
        assert_eq!(
            SimplicialComplex::simplex(3).link(&[0]).unwrap().facets(),
            &[vec![1, 2]]
        );
        assert_eq!(tri.link(&[]).unwrap(), tri);
        assert!(tri.link(&[0, 1]).unwrap().is_empty_complex());
        assert!(tri.link(&[0, 1, 2]).is_err());
    }

    #[test]
    fn acyclicity() {
        assert!(cx(1, &[&[0]]).is_acyclic());
        assert!(!SimplicialComplex::empty(0).is_acyclic());
        assert!(!SimplicialComplex::void(0).is_acyclic());
        assert!(!cx(2, &[&[0], &[1]]).is_acyclic());
    }

    #[test]
    fn minimal_nonfaces_of_two_edges() {
        let k = cx(4, &[&[0, 1], &[2, 3]]);
        assert_eq!(
            k.minimal_nonfaces(),
            vec![vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3]]
        );
        assert!(SimplicialComplex::simplex(3).minimal_nonfaces().is_empty());
        assert_eq!(
            SimplicialComplex::simplex_boundary(3).minimal_nonfaces(),
            vec![vec![0, 1, 2]]
        );
        assert_eq!(cx(3, &[&[0, 1]]).minimal_nonfaces(), vec![vec![2]]);
    }

    #[test]
    fn non_maximal_generators_are_dropped() {
        let k = cx(3, &[&[0], &[0, 1], &[1, 0], &[2]]);
        assert_eq!(k.facets(), &[vec![2], vec![0, 1]]);
    }
}
