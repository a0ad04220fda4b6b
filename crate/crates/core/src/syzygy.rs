//! Syzygy order from face complexes and from cone links, plus the
//! torus-manifold acyclicity tests.
//!
//! Order semantics: an integer `j` in `0..=r`. `0` means the module has
//! torsion, `1` torsion-free, `r` free.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bc::{bc_cohomology, BcError, FaceClass, FaceStructure, Space};
use crate::exactla::GradedDims;
use crate::fan::{cone_label, Fan};

/// Depth data for one Stanley-Reisner ring.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DepthInfo {
    /// Number of polynomial variables (used link vertices).
    pub variables: usize,
    /// `variables - pd`, with pd read off the Ext table.
    pub depth: usize,
    pub pd: usize,
    /// Depth from local cohomology via link homology.
    pub lc_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceDiagnostic {
    pub face: String,
    pub rank: usize,
    /// `H^i(B_c(P))` per position for the face criterion; a single entry
    /// holding `H~_*(L_sigma)` for the link criterion; empty for the oracle.
    pub cohomology: Vec<GradedDims>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<DepthInfo>,
    /// Largest `j` this face allows.
    pub permitted: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SyzygyReport {
    pub method: String,
    pub rank: usize,
    pub order: usize,
    pub torsion_free: bool,
    pub free: bool,
    pub faces: Vec<FaceDiagnostic>,
}

impl SyzygyReport {
    pub fn from_faces(method: &str, rank: usize, faces: Vec<FaceDiagnostic>) -> Self {
        let order = faces
            .iter()
            .map(|f| f.permitted)
            .min()
            .unwrap_or(rank)
            .min(rank);
        SyzygyReport {
            method: method.into(),
            rank,
            order,
            torsion_free: order >= 1,
            free: order == rank,
            faces,
        }
    }
}

/// Largest `j <= r` with `H^i = 0` for all `i > max(rank P - j, 0)`.
pub fn permitted_by_bc(face_rank: usize, h: &[GradedDims], r: usize) -> usize {
    match (1..h.len()).rev().find(|&i| !h[i].is_zero()) {
        None => r,
        Some(m) => (face_rank - m).min(r),
    }
}

pub fn syzygy_order_faces(space: &Space) -> Result<SyzygyReport, BcError> {
    let r = space.rank();
    let poset = space.poset();
    let complexes = space.bc_all()?;
    let faces = complexes
        .par_iter()
        .map(|b| {
            let h = bc_cohomology(b);
            let rank = poset.rank(b.owner);
            FaceDiagnostic {
                face: b.owner_label.clone(),
                rank,
                permitted: permitted_by_bc(rank, &h, r),
                cohomology: h,
                depth: None,
            }
        })
        .collect();
    Ok(SyzygyReport::from_faces("faces", r, faces))
}

/// Upper end of the vanishing range for `H~_l(L_sigma)`, `l >= -1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkBound {
    /// `l <= min(j, codim) - 2`, equivalent to the face criterion.
    Derived,
    /// `l <= min(j - 1, codim - 2)`.
    Printed,
}

impl LinkBound {
    fn upper(self, j: usize, codim: usize) -> i64 {
        let (j, c) = (j as i64, codim as i64);
        match self {
            LinkBound::Derived => j.min(c) - 2,
            LinkBound::Printed => (j - 1).min(c - 2),
        }
    }
}

pub fn permitted_by_link(h: &GradedDims, codim: usize, r: usize, bound: LinkBound) -> usize {
    (0..=r)
        .rev()
        .find(|&j| (-1..=bound.upper(j, codim)).all(|l| h.get(l as i32) == 0))
        .unwrap_or(0)
}

pub fn syzygy_order_links(fan: &Fan, bound: LinkBound) -> SyzygyReport {
    let r = fan.rank();
    let faces = fan
        .cones()
        .par_iter()
        .map(|sigma| {
            let h = fan
                .cone_link(sigma)
                .expect("cone of the fan")
                .reduced_homology();
            let c = fan.codim(sigma);
            FaceDiagnostic {
                face: cone_label(sigma),
                rank: c,
                permitted: permitted_by_link(&h, c, r, bound),
                cohomology: vec![h],
                depth: None,
            }
        })
        .collect();
    let method = match bound {
        LinkBound::Derived => "links",
        LinkBound::Printed => "links-printed",
    };
    SyzygyReport::from_faces(method, r, faces)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRealization {
    pub face: String,
    pub rank: usize,
    /// Declared compact and no removed vertex below.
    pub compact: bool,
    pub acyclic: bool,
    pub has_vertex: bool,
    /// Acyclicity of the boundary, reported for non-compact faces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary_acyclic: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorusManifoldReport {
    pub faces: Vec<FaceRealization>,
    /// Every face acyclic and containing a vertex.
    pub torsion_free_test: bool,
    /// Every face acyclic and every non-compact face with acyclic boundary.
    pub free_test: bool,
    pub order: usize,
    pub rank: usize,
    /// `torsion_free_test == (order >= 1)` and `free_test == (order == rank)`.
    pub consistent: bool,
}

/// Faces are realized as order complexes of the surviving faces below them,
/// boundaries as order complexes of the surviving faces strictly below.
pub fn torus_manifold_report(s: &FaceStructure) -> Result<TorusManifoldReport, BcError> {
    if s.class() == FaceClass::Raw {
        return Err(BcError::WrongClass {
            expected: "polytopal or punctured",
            got: s.class(),
        });
    }
    let p = s.poset();
    let faces: Vec<FaceRealization> = s
        .surviving_faces()
        .into_iter()
        .map(|f| {
            let below: BTreeSet<usize> = p
                .below(f)
                .iter()
                .copied()
                .filter(|&q| s.survives(q))
                .collect();
            let compact = s.faces()[f].compact && p.below(f).iter().all(|&q| s.survives(q));
            let boundary: BTreeSet<usize> = below.iter().copied().filter(|&q| q != f).collect();
            FaceRealization {
                face: p.label(f).to_string(),
                rank: p.rank(f),
                compact,
                acyclic: p.order_complex(&below).is_acyclic(),
                has_vertex: below.iter().any(|&q| p.rank(q) == 0),
                boundary_acyclic: (!compact).then(|| p.order_complex(&boundary).is_acyclic()),
            }
        })
        .collect();
    let all_acyclic = faces.iter().all(|f| f.acyclic);
    let torsion_free_test = all_acyclic && faces.iter().all(|f| f.has_vertex);
    let free_test = all_acyclic && faces.iter().all(|f| f.boundary_acyclic != Some(false));
    let order = syzygy_order_faces(&Space::Faces(s.clone()))?.order;
    let rank = s.rank();
    let consistent = torsion_free_test == (order >= 1) && free_test == (order == rank);
    Ok(TorusManifoldReport {
        faces,
        torsion_free_test,
        free_test,
        order,
        rank,
        consistent,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyReport {
    pub order: usize,
    pub rank: usize,
    /// `order` is `0` or `rank`.
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DichotomyError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Bc(#[from] BcError),
}

/// Torsion-free iff free for compact inputs: complete fans (combinatorial
/// test, rank <= 3) or polytopal structures with every face compact.
pub fn compact_dichotomy_check(space: &Space) -> Result<DichotomyReport, DichotomyError> {
    match space {
        Space::Fan(f) if !f.is_complete_combinatorial() => {
            return Err(DichotomyError::Precondition("fan is not complete".into()))
        }
        Space::Faces(s) if s.class() == FaceClass::Raw => {
            return Err(DichotomyError::Precondition(
                "raw structures carry no face geometry".into(),
            ))
        }
        Space::Faces(s) if !s.removed().is_empty() || s.faces().iter().any(|f| !f.compact) => {
            return Err(DichotomyError::Precondition(
                "structure has non-compact faces".into(),
            ))
        }
        _ => {}
    }
    let report = syzygy_order_faces(space)?;
    let holds = report.order == 0 || report.order == report.rank;
    let detail = if holds {
        format!("order {} in {{0, {}}}", report.order, report.rank)
    } else {
        let blocking: Vec<&str> = report
            .faces
            .iter()
            .filter(|f| f.permitted == report.order)
            .map(|f| f.face.as_str())
            .collect();
        format!(
            "order {} strictly between 0 and {}; limited by {}",
            report.order,
            report.rank,
            blocking.join(", ")
        )
    };
    Ok(DichotomyReport {
        order: report.order,
        rank: report.rank,
        holds,
        detail,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::fixtures;
    use crate::generate::{self, named};

    fn faces_order(space: Space) -> usize {
        syzygy_order_faces(&space).unwrap().order
    }

    #[test]
    fn face_criterion_examples() {
        assert_eq!(faces_order(Space::Fan(fixtures::punctured_p1_power(2))), 1);
        assert_eq!(faces_order(Space::Fan(fixtures::punctured_p1_power(3))), 2);
        assert_eq!(faces_order(Space::Faces(generate::cube(3).unwrap())), 3);
        assert_eq!(faces_order(Space::Faces(named::mutant())), 1);
        assert_eq!(faces_order(Space::Faces(named::annulus())), 0);
        assert_eq!(faces_order(Space::Faces(named::no_vertex())), 0);
        assert_eq!(faces_order(Space::Fan(fixtures::p1())), 1);
    }

    #[test]
    fn link_criterion_examples() {
        let order = |f: &Fan, b| syzygy_order_links(f, b).order;
        assert_eq!(order(&fixtures::c2_minus_origin(), LinkBound::Derived), 0);
        assert_eq!(order(&fixtures::punctured_square(), LinkBound::Derived), 1);
        assert_eq!(order(&fixtures::punctured_square(), LinkBound::Printed), 0);
        assert_eq!(order(&fixtures::affine(3), LinkBound::Derived), 3);
    }

    #[test]
    fn torus_manifold_examples() {
        let cube = torus_manifold_report(&generate::cube(3).unwrap()).unwrap();
        assert!(cube.torsion_free_test && cube.free_test && cube.consistent);
        let ps = torus_manifold_report(&generate::punctured_cube(2).unwrap()).unwrap();
        assert!(ps.torsion_free_test && !ps.free_test && ps.consistent);
        let nv = torus_manifold_report(&named::no_vertex()).unwrap();
        assert!(!nv.torsion_free_test && nv.order == 0 && nv.consistent);
    }

    #[test]
    fn dichotomy_examples() {
        assert!(
            compact_dichotomy_check(&Space::Faces(generate::cube(3).unwrap()))
                .unwrap()
                .holds
        );
        assert!(
            compact_dichotomy_check(&Space::Fan(fixtures::p1_power(2)))
                .unwrap()
                .holds
        );
        assert!(compact_dichotomy_check(&Space::Faces(named::annulus())).is_err());
        assert!(compact_dichotomy_check(&Space::Fan(fixtures::punctured_square())).is_err());
    }
}
