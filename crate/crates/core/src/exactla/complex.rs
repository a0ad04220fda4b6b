//! Cochain complexes of graded vector spaces with rational block differentials.

use std::collections::{BTreeMap, BTreeSet};

use super::{GradedDims, Matrix};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ComplexError {
    #[error("differential {position} in degree {degree}: expected {expected_rows}x{expected_cols}, got {rows}x{cols}")]
    Shape {
        position: usize,
        degree: i32,
        expected_rows: usize,
        expected_cols: usize,
        rows: usize,
        cols: usize,
    },
    #[error("differential {0} starts past the last position")]
    TooManyDifferentials(usize),
    #[error("d{next} o d{position} is nonzero in degree {degree}")]
    NotAComplex {
        position: usize,
        next: usize,
        degree: i32,
    },
}

/// A bounded cochain complex `C^0 -> C^1 -> ... -> C^n`.
///
/// Each position is a graded vector space with an ordered basis per internal
/// degree; the differential `C^i -> C^{i+1}` preserves internal degree and is
/// stored as one block matrix per degree (`dim C^{i+1}_q x dim C^i_q`).
/// Missing blocks are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CochainComplex {
    positions: Vec<GradedDims>,
    differentials: Vec<BTreeMap<i32, Matrix>>,
}

impl CochainComplex {
    /// Validates block shapes and `d o d = 0`.
    pub fn new(
        positions: Vec<GradedDims>,
        mut differentials: Vec<BTreeMap<i32, Matrix>>,
    ) -> Result<Self, ComplexError> {
        if !positions.is_empty()
            && differentials.len() > positions.len() - 1
            && differentials[positions.len() - 1..]
                .iter()
                .any(|d| d.values().any(|m| m.rows() * m.cols() > 0))
        {
            return Err(ComplexError::TooManyDifferentials(positions.len() - 1));
        }
        differentials.resize(positions.len().saturating_sub(1), BTreeMap::new());
        for (i, blocks) in differentials.iter_mut().enumerate() {
            blocks.retain(|_, m| !m.is_zero() || m.rows() * m.cols() > 0);
            for (&q, m) in blocks.iter() {
                let (er, ec) = (positions[i + 1].get(q), positions[i].get(q));
                if m.rows() != er || m.cols() != ec {
                    return Err(ComplexError::Shape {
                        position: i,
                        degree: q,
                        expected_rows: er,
                        expected_cols: ec,
                        rows: m.rows(),
                        cols: m.cols(),
                    });
                }
            }
        }
        let c = CochainComplex {
            positions,
            differentials,
        };
        c.check_square_zero()?;
        Ok(c)
    }

    /// A complex with a single position and no differentials.
    pub fn single(dims: GradedDims) -> Self {
        CochainComplex {
            positions: vec![dims],
            differentials: Vec::new(),
        }
    }

    fn check_square_zero(&self) -> Result<(), ComplexError> {
        for i in 0..self.differentials.len().saturating_sub(1) {
            for q in self.degrees() {
                let (a, b) = (self.block(i, q), self.block(i + 1, q));
                if a.rows() * a.cols() == 0 || b.rows() * b.cols() == 0 {
                    continue;
                }
                if !b.mul(&a).is_zero() {
                    return Err(ComplexError::NotAComplex {
                        position: i,
                        next: i + 1,
                        degree: q,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[GradedDims] {
        &self.positions
    }

    /// Every internal degree that occurs at some position.
    pub fn degrees(&self) -> BTreeSet<i32> {
        self.positions.iter().flat_map(|p| p.degrees()).collect()
    }

    /// The block of `d: C^i -> C^{i+1}` in internal degree `q` (zero if unset).
    pub fn block(&self, i: usize, q: i32) -> Matrix {
        self.differentials
            .get(i)
            .and_then(|b| b.get(&q))
            .cloned()
            .unwrap_or_else(|| {
                let rows = self.positions.get(i + 1).map_or(0, |p| p.get(q));
                Matrix::zeros(rows, self.positions[i].get(q))
            })
    }

    pub fn blocks(&self, i: usize) -> &BTreeMap<i32, Matrix> {
        &self.differentials[i]
    }

    fn block_rank(&self, i: usize, q: i32) -> usize {
        self.differentials
            .get(i)
            .and_then(|b| b.get(&q))
            .map_or(0, Matrix::rank)
    }
}

/// Cohomology dimensions at every position, per internal degree.
pub fn cohomology_dims(c: &CochainComplex) -> Vec<GradedDims> {
    let degrees = c.degrees();
    let ranks: Vec<BTreeMap<i32, usize>> = (0..c.len().saturating_sub(1))
        .map(|i| degrees.iter().map(|&q| (q, c.block_rank(i, q))).collect())
        .collect();
    (0..c.len())
        .map(|i| {
            let mut h = GradedDims::new();
            for &q in &degrees {
                let outgoing = ranks.get(i).map_or(0, |r| r[&q]);
                let incoming = if i == 0 { 0 } else { ranks[i - 1][&q] };
                h.set(q, c.positions[i].get(q) - outgoing - incoming);
            }
            h
        })
        .collect()
}
