//! Generators for products of simplices (as face lattices and as fans of
//! products of projective spaces) and named face structures.

use std::collections::{BTreeMap, BTreeSet};

use crate::bc::{orient, BcError, FaceClass, FaceInfo, FaceStructure};
use crate::exactla::{CochainComplex, GradedDims, Matrix, Rational};
use crate::fan::{Fan, FanError};
use crate::poset::FacePoset;
use crate::simplicial::Face;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GenerateError {
    #[error("unsupported parameters: {0}")]
    Params(String),
    #[error(transparent)]
    Structure(#[from] BcError),
    #[error(transparent)]
    Fan(#[from] FanError),
}

/// A vertex of a product of simplices: one vertex index per factor.
pub type Vertex = Vec<usize>;

fn check_dims(dims: &[usize]) -> Result<(), GenerateError> {
    if dims.is_empty() {
        return Err(GenerateError::Params("need at least one factor".into()));
    }
    if dims.iter().any(|&d| d == 0 || d > 9) {
        return Err(GenerateError::Params(
            "factor dimensions must lie in 1..=9".into(),
        ));
    }
    Ok(())
}

fn subset_id(s: &[usize]) -> String {
    s.iter().map(|v| v.to_string()).collect()
}

fn nonempty_subsets(d: usize) -> Vec<Vec<usize>> {
    (1u32..1 << (d + 1))
        .map(|m| (0..=d).filter(|i| m >> i & 1 == 1).collect())
        .collect()
}

/// Face lattice of `Delta^{d_1} x ... x Delta^{d_m}` with the given vertices
/// removed. Face ids join the per-factor vertex sets with `.`, e.g. `01.1`.
pub fn product_lattice(dims: &[usize], removed: &[Vertex]) -> Result<FaceStructure, GenerateError> {
    check_dims(dims)?;
    let mut faces: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for &d in dims {
        faces = faces
            .into_iter()
            .flat_map(|prefix| {
                nonempty_subsets(d).into_iter().map(move |s| {
                    let mut p = prefix.clone();
                    p.push(s);
                    p
                })
            })
            .collect();
    }
    let rank_of = |f: &Vec<Vec<usize>>| f.iter().map(|s| s.len() - 1).sum::<usize>();
    let id_of = |f: &Vec<Vec<usize>>| f.iter().map(|s| subset_id(s)).collect::<Vec<_>>().join(".");
    faces.sort_by_key(|f| (rank_of(f), id_of(f)));
    let index: BTreeMap<String, usize> = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (id_of(f), i))
        .collect();
    let mut covers = Vec::new();
    for (i, f) in faces.iter().enumerate() {
        for k in 0..f.len() {
            if f[k].len() < 2 {
                continue;
            }
            for drop in 0..f[k].len() {
                let mut g = f.clone();
                g[k].remove(drop);
                covers.push((index[&id_of(&g)], i));
            }
        }
    }
    let mut gone = BTreeSet::new();
    for v in removed {
        if v.len() != dims.len() || v.iter().zip(dims).any(|(&x, &d)| x > d) {
            return Err(GenerateError::Params(format!("{v:?} is not a vertex")));
        }
        let id = v
            .iter()
            .map(|x| x.to_string())
            .collect::<Vec<_>>()
            .join(".");
        gone.insert(index[&id]);
    }
    let class = if gone.is_empty() {
        FaceClass::Polytopal
    } else {
        FaceClass::Punctured
    };
    let infos = faces
        .iter()
        .map(|f| FaceInfo {
            id: id_of(f),
            rank: rank_of(f),
            compact: true,
        })
        .collect();
    Ok(FaceStructure::new(
        dims.iter().sum(),
        None,
        class,
        infos,
        covers,
        gone,
        BTreeMap::new(),
    )?)
}

/// Fan of `CP^{d_1} x ... x CP^{d_m}` with the fixed points of `removed`
/// deleted. Factor `k` contributes rays `e_1..e_d, -(e_1+...+e_d)`, and
/// vertex `v` of `Delta^d` is the maximal cone omitting ray `v` of that factor.
pub fn product_fan(dims: &[usize], removed: &[Vertex]) -> Result<Fan, GenerateError> {
    check_dims(dims)?;
    let r: usize = dims.iter().sum();
    let mut rays = Vec::new();
    let mut offsets = Vec::new();
    let mut coord = 0;
    for &d in dims {
        offsets.push(rays.len());
        for i in 0..d {
            let mut v = vec![0i64; r];
            v[coord + i] = 1;
            rays.push(v);
        }
        let mut v = vec![0i64; r];
        v[coord..coord + d].iter_mut().for_each(|x| *x = -1);
        rays.push(v);
        coord += d;
    }
    let mut vertices: Vec<Vertex> = vec![Vec::new()];
    for &d in dims {
        vertices = vertices
            .into_iter()
            .flat_map(|p| (0..=d).map(move |x| [p.clone(), vec![x]].concat()))
            .collect();
    }
    let offsets = &offsets;
    let cone_of = |v: &Vertex| -> Face {
        v.iter()
            .enumerate()
            .flat_map(|(k, &x)| {
                (0..=dims[k])
                    .filter(move |&i| i != x)
                    .map(move |i| offsets[k] + i)
            })
            .collect()
    };
    let full = Fan::new(r, rays, vertices.iter().map(cone_of).collect())?;
    let gone: Vec<Face> = removed.iter().map(cone_of).collect();
    Ok(full.without_cones(&gone)?)
}

/// The two vertices `(0,..,0)` and the vertex differing in the first
/// `distance` factors; their join has dimension `distance`.
pub fn puncture_pair(dims: &[usize], distance: usize) -> Result<[Vertex; 2], GenerateError> {
    check_dims(dims)?;
    if distance == 0 || distance > dims.len() {
        return Err(GenerateError::Params(format!(
            "distance must lie in 1..={}",
            dims.len()
        )));
    }
    let a = vec![0; dims.len()];
    let b = (0..dims.len()).map(|k| usize::from(k < distance)).collect();
    Ok([a, b])
}

pub fn cube(r: usize) -> Result<FaceStructure, GenerateError> {
    product_lattice(&vec![1; r], &[])
}

/// The r-cube with two opposite vertices removed.
pub fn punctured_cube(r: usize) -> Result<FaceStructure, GenerateError> {
    product_lattice(&vec![1; r], &puncture_pair(&vec![1; r], r)?)
}

pub fn simplex(d: usize) -> Result<FaceStructure, GenerateError> {
    product_lattice(&[d], &[])
}

/// Named face structures used as fixtures.
pub mod named {
    use super::*;

    fn info(id: &str, rank: usize, compact: bool) -> FaceInfo {
        FaceInfo {
            id: id.into(),
            rank,
            compact,
        }
    }

    fn build(
        faces: &[(&str, usize)],
        covers: &[(&str, &str)],
        compact: bool,
    ) -> (Vec<FaceInfo>, Vec<(usize, usize)>) {
        let infos: Vec<FaceInfo> = faces.iter().map(|&(id, r)| info(id, r, compact)).collect();
        let pos = |id: &str| infos.iter().position(|f| f.id == id).expect("fixture id");
        let covers = covers.iter().map(|&(a, b)| (pos(a), pos(b))).collect();
        (infos, covers)
    }

    /// Orbit space of CP^1: an interval with vertices P and Q.
    pub fn interval() -> FaceStructure {
        let (f, c) = build(
            &[("P", 0), ("Q", 0), ("I", 1)],
            &[("P", "I"), ("Q", "I")],
            true,
        );
        FaceStructure::new(
            1,
            None,
            FaceClass::Polytopal,
            f,
            c,
            BTreeSet::new(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    /// A single open rank-1 face without vertices.
    pub fn no_vertex() -> FaceStructure {
        let (f, c) = build(&[("E", 1)], &[], false);
        FaceStructure::new(
            1,
            None,
            FaceClass::Polytopal,
            f,
            c,
            BTreeSet::new(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    /// Incidence complex of a polytopal face tensored with `k` in each degree of
    /// `degrees`; the owner's own column uses `top_degrees` instead.
    fn tensored(
        poset: &FacePoset,
        face: usize,
        degrees: &[i32],
        top_degrees: &[i32],
    ) -> CochainComplex {
        let eps = orient(poset).expect("fixture lattice is orientable");
        let mut columns = vec![Vec::new(); poset.rank(face) + 1];
        for &q in poset.below(face) {
            columns[poset.rank(q)].push(q);
        }
        let degs = |i: usize| {
            if i == poset.rank(face) {
                top_degrees
            } else {
                degrees
            }
        };
        let positions = (0..columns.len())
            .map(|i| GradedDims::from_pairs(degs(i).iter().map(|&q| (q, columns[i].len()))))
            .collect();
        let diffs = (0..columns.len().saturating_sub(1))
            .map(|i| {
                let mut blocks = BTreeMap::new();
                for &q in degs(i).iter().filter(|q| degs(i + 1).contains(q)) {
                    let rows = columns[i + 1]
                        .iter()
                        .map(|&hi| {
                            columns[i]
                                .iter()
                                .map(|&lo| {
                                    Rational::from_integer(eps.get(&(hi, lo)).copied().unwrap_or(0))
                                })
                                .collect()
                        })
                        .collect();
                    blocks.insert(q, Matrix::from_rows_with_cols(rows, columns[i].len()));
                }
                blocks
            })
            .collect();
        CochainComplex::new(positions, diffs).expect("incidence signs satisfy d o d = 0")
    }

    /// Mutant face data: a 3-ball whose boundary is a 2-sphere with two
    /// vertices, three edges and three 2-faces. Every proper face carries
    /// `k` in internal degrees 0 and 1; the top face only in degree 1, so its
    /// degree-0 row is the cellular cochain complex of the boundary sphere.
    /// Resulting cohomology of the top face: degree 0 row `k,0,k,0`, degree 1
    /// row `k,0,0,0`.
    pub fn mutant() -> FaceStructure {
        let faces = [
            ("v0", 0),
            ("vinf", 0),
            ("e1", 1),
            ("e2", 1),
            ("e3", 1),
            ("f12", 2),
            ("f13", 2),
            ("f23", 2),
            ("Q", 3),
        ];
        let covers = [
            ("v0", "e1"),
            ("vinf", "e1"),
            ("v0", "e2"),
            ("vinf", "e2"),
            ("v0", "e3"),
            ("vinf", "e3"),
            ("e1", "f12"),
            ("e2", "f12"),
            ("e1", "f13"),
            ("e3", "f13"),
            ("e2", "f23"),
            ("e3", "f23"),
            ("f12", "Q"),
            ("f13", "Q"),
            ("f23", "Q"),
        ];
        let (f, c) = build(&faces, &covers, true);
        let poset = FacePoset::new(
            f.iter().map(|x| x.id.clone()).collect(),
            f.iter().map(|x| x.rank).collect(),
            3,
            &c,
        )
        .unwrap();
        let raw = (0..f.len())
            .map(|i| {
                let top: &[i32] = if i == poset.top() { &[1] } else { &[0, 1] };
                (i, tensored(&poset, i, &[0, 1], top))
            })
            .collect();
        FaceStructure::new(3, Some(7), FaceClass::Raw, f, c, BTreeSet::new(), raw).unwrap()
    }

    /// Compact annulus: two boundary circles with two vertices and two edges
    /// each, and one open annulus as top face. The top face carries `k` in
    /// internal degrees 0 and -1 (from `H_c^2` and `H_c^1` of the open annulus).
    pub fn annulus() -> FaceStructure {
        let faces = [
            ("u1", 0),
            ("u2", 0),
            ("w1", 0),
            ("w2", 0),
            ("a1", 1),
            ("a2", 1),
            ("b1", 1),
            ("b2", 1),
            ("A", 2),
        ];
        let covers = [
            ("u1", "a1"),
            ("u2", "a1"),
            ("u1", "a2"),
            ("u2", "a2"),
            ("w1", "b1"),
            ("w2", "b1"),
            ("w1", "b2"),
            ("w2", "b2"),
            ("a1", "A"),
            ("a2", "A"),
            ("b1", "A"),
            ("b2", "A"),
        ];
        let (f, c) = build(&faces, &covers, true);
        let poset = FacePoset::new(
            f.iter().map(|x| x.id.clone()).collect(),
            f.iter().map(|x| x.rank).collect(),
            2,
            &c,
        )
        .unwrap();
        let raw = (0..f.len())
            .map(|i| {
                let top: &[i32] = if i == poset.top() { &[-1, 0] } else { &[0] };
                (i, tensored(&poset, i, &[0], top))
            })
            .collect();
        FaceStructure::new(2, Some(4), FaceClass::Raw, f, c, BTreeSet::new(), raw).unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bc::{bc_cohomology, bc_from_polytopal, bc_from_raw, Space};

    #[test]
    fn cube_counts() {
        let sq = cube(2).unwrap();
        assert_eq!(sq.faces().len(), 9);
        assert_eq!(cube(3).unwrap().faces().len(), 27);
        assert_eq!(simplex(2).unwrap().faces().len(), 7);
    }

    #[test]
    fn polytopal_bc_examples() {
        let sq = cube(2).unwrap();
        let h = bc_cohomology(&bc_from_polytopal(&sq, sq.poset().top()).unwrap());
        assert_eq!(
            h.iter().map(|g| g.get(0)).collect::<Vec<_>>(),
            vec![1, 0, 0]
        );
        let ps = punctured_cube(2).unwrap();
        let h = bc_cohomology(&bc_from_polytopal(&ps, ps.poset().top()).unwrap());
        assert_eq!(
            h.iter().map(|g| g.get(0)).collect::<Vec<_>>(),
            vec![0, 1, 0]
        );
        let pc = punctured_cube(3).unwrap();
        let h = bc_cohomology(&bc_from_polytopal(&pc, pc.poset().top()).unwrap());
        assert_eq!(
            h.iter().map(|g| g.get(0)).collect::<Vec<_>>(),
            vec![0, 1, 0, 0]
        );
        // half-open edge
        let edge = product_lattice(&[1], &[vec![0]]).unwrap();
        let h = bc_cohomology(&bc_from_polytopal(&edge, edge.poset().top()).unwrap());
        assert!(h.iter().all(GradedDims::is_zero));
    }

    #[test]
    fn mutant_table() {
        let m = named::mutant();
        let h = bc_cohomology(&bc_from_raw(&m, m.poset().top()).unwrap());
        let row = |q| h.iter().map(|g: &GradedDims| g.get(q)).collect::<Vec<_>>();
        assert_eq!(
            m.raw_complex(m.poset().top()).unwrap().positions()[3],
            GradedDims::unit(1)
        );
        assert_eq!(row(0), vec![1, 0, 1, 0]);
        assert_eq!(row(1), vec![1, 0, 0, 0]);
    }

    #[test]
    fn product_fans_match_lattices() {
        let f = product_fan(&[1, 1], &puncture_pair(&[1, 1], 2).unwrap()).unwrap();
        assert_eq!(f.maximal_cones().len(), 2);
        let p2 = product_fan(&[2], &[]).unwrap();
        assert!(p2.is_complete_combinatorial());
        let top = Space::Fan(f).bc_top().unwrap();
        assert_eq!(
            bc_cohomology(&top)
                .iter()
                .map(|g| g.get(0))
                .collect::<Vec<_>>(),
            vec![0, 1, 0]
        );
    }
}
