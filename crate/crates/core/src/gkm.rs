//! Moment graphs and the dimension of the kernel of the localization map,
//! degree by degree.

use std::collections::{BTreeSet, HashMap};

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::exactla::{sparse_rank, GradedDims};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GkmError {
    #[error("edge {0}: vertex index out of range")]
    VertexOutOfRange(usize),
    #[error("edge {0}: loop")]
    Loop(usize),
    #[error("edge {0}: duplicate of an earlier edge")]
    DuplicateEdge(usize),
    #[error("edge {0}: weight has length {1}, expected {2}")]
    WeightLength(usize, usize, usize),
    #[error("edge {0}: weight is zero or not primitive")]
    WeightNotPrimitive(usize),
    #[error("duplicate vertex label {0}")]
    DuplicateVertex(String),
    #[error("graph has no vertices")]
    Degenerate,
    #[error("max degree {0} must be even and non-negative")]
    OddDegree(i32),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmEdge {
    pub u: usize,
    pub v: usize,
    pub weight: Vec<i64>,
}

/// Simple graph with primitive nonzero edge weights in `Z^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GkmGraph {
    rank: usize,
    vertices: Vec<String>,
    edges: Vec<GkmEdge>,
}

impl GkmGraph {
    pub fn new(rank: usize, vertices: Vec<String>, edges: Vec<GkmEdge>) -> Result<Self, GkmError> {
        let mut labels = BTreeSet::new();
        for v in &vertices {
            if !labels.insert(v) {
                return Err(GkmError::DuplicateVertex(v.clone()));
            }
        }
        let mut seen = BTreeSet::new();
        for (i, e) in edges.iter().enumerate() {
            if e.u >= vertices.len() || e.v >= vertices.len() {
                return Err(GkmError::VertexOutOfRange(i));
            }
            if e.u == e.v {
                return Err(GkmError::Loop(i));
            }
            if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
                return Err(GkmError::DuplicateEdge(i));
            }
            if e.weight.len() != rank {
                return Err(GkmError::WeightLength(i, e.weight.len(), rank));
            }
            if e.weight.iter().fold(0i64, |g, &w| g.gcd(&w)) != 1 {
                return Err(GkmError::WeightNotPrimitive(i));
            }
        }
        Ok(GkmGraph {
            rank,
            vertices,
            edges,
        })
    }

    /// `{0,1}^r` without the all-zero and all-one vertices; edges along
    /// coordinate `i` carry weight `e_i`.
    pub fn from_punctured_cube(r: usize) -> Self {
        let full = (1usize << r) - 1;
        let kept: Vec<usize> = (1..full).collect();
        let label = |m: usize| {
            (0..r)
                .map(|i| if m >> i & 1 == 1 { '1' } else { '0' })
                .collect::<String>()
        };
        let pos: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut edges = Vec::new();
        for (a, &m) in kept.iter().enumerate() {
            for i in 0..r {
                let n = m | 1 << i;
                if n != m {
                    if let Some(&b) = pos.get(&n) {
                        let mut weight = vec![0; r];
                        weight[i] = 1;
                        edges.push(GkmEdge { u: a, v: b, weight });
                    }
                }
            }
        }
        GkmGraph::new(r, kept.into_iter().map(label).collect(), edges)
            .expect("valid by construction")
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn edges(&self) -> &[GkmEdge] {
        &self.edges
    }

    pub fn apply_lattice_map(&self, m: &[Vec<i64>]) -> Result<Self, GkmError> {
        let edges = self
            .edges
            .iter()
            .map(|e| GkmEdge {
                u: e.u,
                v: e.v,
                weight: m
                    .iter()
                    .map(|row| row.iter().zip(&e.weight).map(|(a, b)| a * b).sum())
                    .collect(),
            })
            .collect();
        GkmGraph::new(m.len(), self.vertices.clone(), edges)
    }
}

fn monomials(r: usize, m: usize) -> Vec<Vec<u32>> {
    if r == 0 {
        return if m == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in monomials(r - 1, m - first) {
            rest.insert(0, first as u32);
            out.push(rest);
        }
    }
    out
}

/// Kernel dimension in polynomial degree `m` (topological degree `2m`):
/// unknowns `f_v` in `R_m` and `g_e` in `R_{m-1}` with `f_u - f_v = alpha_e g_e`.
pub fn cs_kernel_dim(g: &GkmGraph, m: usize) -> usize {
    let top = monomials(g.rank, m);
    let index: HashMap<&[u32], usize> = top
        .iter()
        .enumerate()
        .map(|(i, x)| (x.as_slice(), i))
        .collect();
    let lower = if m > 0 {
        monomials(g.rank, m - 1)
    } else {
        Vec::new()
    };
    let nv = g.vertices.len() * top.len();
    let cols = nv + g.edges.len() * lower.len();
    let mut rows: Vec<Vec<(usize, i64)>> = vec![Vec::new(); g.edges.len() * top.len()];
    for (k, e) in g.edges.iter().enumerate() {
        let base = k * top.len();
        for i in 0..top.len() {
            rows[base + i].push((e.u * top.len() + i, 1));
            rows[base + i].push((e.v * top.len() + i, -1));
        }
        for (j, mono) in lower.iter().enumerate() {
            let col = nv + k * lower.len() + j;
            for (var, &w) in e.weight.iter().enumerate() {
                if w != 0 {
                    let mut up = mono.clone();
                    up[var] += 1;
                    rows[base + index[up.as_slice()]].push((col, -w));
                }
            }
        }
    }
    cols - sparse_rank(rows, cols)
}

/// Dims per even topological degree `0..=max_degree`.
pub fn cs_kernel_dims(g: &GkmGraph, max_degree: i32) -> Result<GradedDims, GkmError> {
    if g.vertices.is_empty() {
        return Err(GkmError::Degenerate);
    }
    if max_degree < 0 || max_degree % 2 != 0 {
        return Err(GkmError::OddDegree(max_degree));
    }
    let dims: Vec<(i32, usize)> = (0..=max_degree as usize / 2)
        .into_par_iter()
        .map(|m| (2 * m as i32, cs_kernel_dim(g, m)))
        .collect();
    Ok(GradedDims::from_pairs(dims))
}

/// Serializable mirror of a graph, used by the file formats.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GkmData {
    pub rank: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, Vec<i64>)>,
}

impl From<&GkmGraph> for GkmData {
    fn from(g: &GkmGraph) -> Self {
        GkmData {
            rank: g.rank,
            vertices: g.vertices.clone(),
            edges: g
                .edges
                .iter()
                .map(|e| {
                    (
                        g.vertices[e.u].clone(),
                        g.vertices[e.v].clone(),
                        e.weight.clone(),
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1() -> GkmGraph {
        GkmGraph::new(
            1,
            vec!["P".into(), "Q".into()],
            vec![GkmEdge {
                u: 0,
                v: 1,
                weight: vec![1],
            }],
        )
        .unwrap()
    }

    #[test]
    fn punctured_cube_shapes() {
        let h = GkmGraph::from_punctured_cube(3);
        assert_eq!((h.vertices().len(), h.edges().len()), (6, 6));
        let s = GkmGraph::from_punctured_cube(2);
        assert_eq!((s.vertices().len(), s.edges().len()), (2, 0));
        assert!(GkmGraph::from_punctured_cube(1).vertices().is_empty());
    }

    #[test]
    fn p1_kernel() {
        // k[s,t]/(st) with s, t in degree 2
        let d = cs_kernel_dims(&p1(), 6).unwrap();
        assert_eq!(d.to_vec(0, 6), vec![1, 0, 2, 0, 2, 0, 2]);
    }

    #[test]
    fn no_edges_is_free() {
        let d = cs_kernel_dims(&GkmGraph::from_punctured_cube(2), 6).unwrap();
        assert_eq!(d.to_vec(0, 6), vec![2, 0, 4, 0, 6, 0, 8]);
    }

    #[test]
    fn validation() {
        let e = |u, v, w: Vec<i64>| GkmEdge { u, v, weight: w };
        let vs = || vec!["a".to_string(), "b".to_string()];
        assert_eq!(
            GkmGraph::new(1, vs(), vec![e(0, 1, vec![2])]),
            Err(GkmError::WeightNotPrimitive(0))
        );
        assert_eq!(
            GkmGraph::new(1, vs(), vec![e(0, 1, vec![0])]),
            Err(GkmError::WeightNotPrimitive(0))
        );
        assert_eq!(
            GkmGraph::new(1, vs(), vec![e(0, 0, vec![1])]),
            Err(GkmError::Loop(0))
        );
        assert_eq!(
            GkmGraph::new(1, vs(), vec![e(0, 1, vec![1]), e(1, 0, vec![1])]),
            Err(GkmError::DuplicateEdge(1))
        );
        assert_eq!(cs_kernel_dims(&p1(), 3), Err(GkmError::OddDegree(3)));
    }
}
