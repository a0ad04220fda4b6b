//! Squarefree monomial ideals, Taylor resolutions, Ext patterns and depth.
//!
//! Monomials are bitmasks over at most 63 variables. The Ext groups
//! `Ext^i(R/I, R)` are computed degree by degree from the dual Taylor
//! complex; every nonzero degree is `-N` for a squarefree pattern `N`,
//! tensored with the free part on the remaining variables.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bc::Space;
use crate::exactla::{sparse_rank, GradedDims, HilbertSeries};
use crate::fan::Fan;
use crate::poset::FacePoset;
use crate::simplicial::{Face, SimplicialComplex};
use crate::syzygy::{DepthInfo, FaceDiagnostic, SyzygyReport};

pub const MAX_VARIABLES: usize = 63;
/// Taylor complexes have `2^g` basis elements.
pub const MAX_GENERATORS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IdealError {
    #[error("{0} variables exceeds the limit of {MAX_VARIABLES}")]
    TooManyVariables(usize),
    #[error("variable {var} out of range for {n} variables")]
    VariableOutOfRange { var: usize, n: usize },
    #[error("{0} generators exceeds the Taylor limit of {MAX_GENERATORS}")]
    TooManyGenerators(usize),
}

fn mask(face: &[usize]) -> u64 {
    face.iter().fold(0, |m, &v| m | (1 << v))
}

fn unmask(m: u64) -> Face {
    (0..64).filter(|&v| m >> v & 1 == 1).collect()
}

/// Squarefree monomial ideal with pairwise incomparable generators.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<u64>,
}

impl MonomialIdeal {
    /// Non-minimal generators are dropped.
    pub fn new(n: usize, generators: impl IntoIterator<Item = Face>) -> Result<Self, IdealError> {
        if n > MAX_VARIABLES {
            return Err(IdealError::TooManyVariables(n));
        }
        let mut gens = Vec::new();
        for g in generators {
            if let Some(&var) = g.iter().find(|&&v| v >= n) {
                return Err(IdealError::VariableOutOfRange { var, n });
            }
            gens.push(mask(&g));
        }
        gens.sort_by_key(|&m| (m.count_ones(), m));
        gens.dedup();
        let mut minimal: Vec<u64> = Vec::new();
        for g in gens {
            if !minimal.iter().any(|&h| h & g == h) {
                minimal.push(g);
            }
        }
        if minimal.len() > MAX_GENERATORS {
            return Err(IdealError::TooManyGenerators(minimal.len()));
        }
        Ok(MonomialIdeal {
            n,
            generators: minimal,
        })
    }

    pub fn zero(n: usize) -> Self {
        MonomialIdeal {
            n,
            generators: Vec::new(),
        }
    }

    pub fn variables(&self) -> usize {
        self.n
    }

    pub fn generator_count(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> Vec<Face> {
        self.generators.iter().map(|&g| unmask(g)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.first() == Some(&0)
    }

    pub fn contains_monomial(&self, m: &[usize]) -> bool {
        let m = mask(m);
        self.generators.iter().any(|&g| g & m == g)
    }
}

impl std::fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "(0)");
        }
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|&g| {
                if g == 0 {
                    "1".to_string()
                } else {
                    unmask(g).iter().map(|v| format!("x{v}")).collect()
                }
            })
            .collect();
        write!(f, "({})", gens.join(", "))
    }
}

/// Ideal of minimal non-faces, one variable per vertex.
pub fn stanley_reisner_ideal(k: &SimplicialComplex) -> Result<MonomialIdeal, IdealError> {
    MonomialIdeal::new(k.vertex_count(), k.minimal_nonfaces())
}

pub fn stanley_reisner_ideal_fan(fan: &Fan) -> Result<MonomialIdeal, IdealError> {
    stanley_reisner_ideal(fan.underlying_complex())
}

/// Taylor resolution: basis `e_S` for subsets `S` of generators, in
/// homological degree `|S|` and multidegree `lcm_S`.
#[derive(Debug, Clone)]
pub struct TaylorComplex {
    ideal: MonomialIdeal,
    lcm: Vec<u64>,
}

impl TaylorComplex {
    pub fn new(ideal: &MonomialIdeal) -> Self {
        let g = ideal.generators.len();
        let mut lcm = vec![0u64; 1 << g];
        for s in 1..lcm.len() {
            let low = s.trailing_zeros() as usize;
            lcm[s] = lcm[s & (s - 1)] | ideal.generators[low];
        }
        TaylorComplex {
            ideal: ideal.clone(),
            lcm,
        }
    }

    pub fn length(&self) -> usize {
        self.ideal.generators.len()
    }

    pub fn lcm(&self, subset: usize) -> u64 {
        self.lcm[subset]
    }

    /// Homology dims of the chain complex over the subsets in `keep`, with
    /// boundary `e_S -> sum_k sign * e_{S-k}` restricted to kept subsets.
    fn homology(&self, keep: impl Fn(usize) -> bool) -> Vec<usize> {
        let g = self.length();
        let mut by_size: Vec<Vec<usize>> = vec![Vec::new(); g + 1];
        for s in 0..self.lcm.len() {
            if keep(s) {
                by_size[s.count_ones() as usize].push(s);
            }
        }
        let index: Vec<BTreeMap<usize, usize>> = by_size
            .iter()
            .map(|v| v.iter().enumerate().map(|(i, &s)| (s, i)).collect())
            .collect();
        // rank of the map between sizes i and i+1
        let ranks: Vec<usize> = (0..g)
            .map(|i| {
                let rows: Vec<Vec<(usize, i64)>> = by_size[i + 1]
                    .iter()
                    .map(|&t| {
                        let mut row = Vec::new();
                        for (pos, k) in (0..g).filter(|&k| t >> k & 1 == 1).enumerate() {
                            if let Some(&c) = index[i].get(&(t & !(1 << k))) {
                                row.push((c, if pos % 2 == 0 { 1 } else { -1 }));
                            }
                        }
                        row
                    })
                    .collect();
                sparse_rank(rows, by_size[i].len())
            })
            .collect();
        (0..=g)
            .map(|i| {
                let into = if i > 0 { ranks[i - 1] } else { 0 };
                let out = if i < g { ranks[i] } else { 0 };
                by_size[i].len() - into - out
            })
            .collect()
    }

    /// Homology of the Taylor complex in squarefree multidegree `b`.
    pub fn degree_homology(&self, b: u64) -> Vec<usize> {
        self.homology(|s| self.lcm[s] & !b == 0)
    }

    /// `dim Ext^i(R/I, R)` in degree `-pattern`, for `i = 0..=g`.
    pub fn ext_pattern(&self, pattern: u64) -> Vec<usize> {
        self.homology(|s| pattern & !self.lcm[s] == 0)
    }

    /// Expected: only `H_0 = 1` in degrees that are faces, nothing otherwise.
    pub fn exactness_check(&self) -> Result<(), String> {
        let n = self.ideal.n;
        for b in 0u64..(1 << n) {
            let h = self.degree_homology(b);
            let face = !self.ideal.generators.iter().any(|&g| g & b == g);
            let ok = h
                .iter()
                .enumerate()
                .all(|(i, &d)| d == if i == 0 && face { 1 } else { 0 });
            if !ok {
                return Err(format!("degree {:?}: homology {:?}", unmask(b), h));
            }
        }
        Ok(())
    }
}

/// Nonzero `f_i(N) = dim Ext^i(R/I, R)_{-N}` for squarefree patterns `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtTable {
    variables: usize,
    cells: BTreeMap<(usize, u64), usize>,
}

impl ExtTable {
    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn get(&self, i: usize, pattern: &[usize]) -> usize {
        self.cells.get(&(i, mask(pattern))).copied().unwrap_or(0)
    }

    /// `(i, N, f_i(N))` for nonzero cells, ordered by `i` then pattern mask.
    pub fn cells(&self) -> impl Iterator<Item = (usize, Face, usize)> + '_ {
        self.cells.iter().map(|(&(i, n), &d)| (i, unmask(n), d))
    }

    pub fn is_zero(&self) -> bool {
        self.cells.is_empty()
    }

    /// Projective dimension, `None` when every Ext vanishes.
    pub fn pd(&self) -> Option<usize> {
        self.cells.keys().map(|&(i, _)| i).max()
    }

    pub fn indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cells.keys().map(|&(i, _)| i).collect();
        v.dedup();
        v
    }

    /// `sum_N f_i(N) q^{-|N|} / (1-q)^{n-|N|}`.
    pub fn series(&self, i: usize) -> HilbertSeries {
        self.cells
            .range((i, 0)..=(i, u64::MAX))
            .map(|(&(_, n), &d)| {
                let size = n.count_ones();
                HilbertSeries::new(-(size as i32), vec![d as i64], self.variables as u32 - size)
            })
            .sum()
    }
}

pub fn ext_table(ideal: &MonomialIdeal) -> ExtTable {
    let taylor = TaylorComplex::new(ideal);
    let cells: Vec<((usize, u64), usize)> = (0u64..(1 << ideal.n))
        .into_par_iter()
        .flat_map_iter(|n| {
            taylor
                .ext_pattern(n)
                .into_iter()
                .enumerate()
                .filter(|&(_, d)| d > 0)
                .map(move |(i, d)| ((i, n), d))
        })
        .collect();
    ExtTable {
        variables: ideal.n,
        cells: cells.into_iter().collect(),
    }
}

/// `(depth, pd)` of `R/I`; `None` for the unit ideal.
pub fn depth_pd(ideal: &MonomialIdeal) -> Option<(usize, usize)> {
    let pd = ext_table(ideal).pd()?;
    Some((ideal.n - pd, pd))
}

/// Depth of `k[K]` on the used vertices of `K`, from
/// `H^d_m = 0` unless some face `F` has `H~_{d-|F|-1}(lk F) != 0`.
/// `None` for the void complex.
pub fn depth_local_cohomology(k: &SimplicialComplex) -> Option<usize> {
    if k.is_void() {
        return None;
    }
    k.all_faces()
        .iter()
        .filter_map(|f| {
            let h = k.link(f).expect("face of the complex").reduced_homology();
            h.min_degree().map(|l| (l + f.len() as i32 + 1) as usize)
        })
        .min()
}

/// Depth of the link ring on its used vertices.
fn link_depth(link: &SimplicialComplex) -> DepthInfo {
    let (compact, _) = link.compact();
    let ideal = stanley_reisner_ideal(&compact).expect("links of small fans");
    let (depth, pd) = depth_pd(&ideal).unwrap_or((0, 0));
    let lc_depth = depth_local_cohomology(&compact).unwrap_or(0);
    DepthInfo {
        variables: ideal.n,
        depth,
        pd,
        lc_depth,
    }
}

/// Largest `j <= r` with `depth k[L_sigma] >= min(j, codim sigma)` for all cones.
pub fn syzygy_order_oracle(fan: &Fan) -> SyzygyReport {
    let r = fan.rank();
    let faces = fan
        .cones()
        .par_iter()
        .map(|sigma| {
            let c = fan.codim(sigma);
            let info = link_depth(&fan.cone_link(sigma).expect("cone of the fan"));
            FaceDiagnostic {
                face: crate::fan::cone_label(sigma),
                rank: c,
                cohomology: Vec::new(),
                permitted: if info.depth >= c { r } else { info.depth },
                depth: Some(info),
            }
        })
        .collect();
    SyzygyReport::from_faces("oracle", r, faces)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtCheck {
    pub passed: bool,
    pub cells_checked: usize,
    pub mismatches: Vec<String>,
}

/// Compares the Ext table of `k[K]` against link homology:
/// `f_i(N) = dim H~_{|N|-i-1}(lk F)` when `F = [n] - N` is a face, else `0`,
/// and the per-index Hilbert series against the link-side sum.
pub fn ext_decomposition_check(k: &SimplicialComplex) -> Result<ExtCheck, IdealError> {
    let n = k.vertex_count();
    let ideal = stanley_reisner_ideal(k)?;
    let table = ext_table(&ideal);
    let top = ideal.generators.len().max(n);
    let full: u64 = if n == 0 { 0 } else { (1u64 << n) - 1 };
    let link_side: Vec<(u64, GradedDims)> = (0u64..(1 << n))
        .into_par_iter()
        .map(|pattern| {
            let face = unmask(full & !pattern);
            let h = if k.contains(&face) {
                k.link(&face).expect("face").reduced_homology()
            } else {
                GradedDims::new()
            };
            (pattern, h)
        })
        .collect();
    let mut mismatches = Vec::new();
    let mut cells = 0;
    let mut rhs: Vec<HilbertSeries> = vec![HilbertSeries::zero(); top + 1];
    for (pattern, h) in &link_side {
        let size = pattern.count_ones() as i32;
        for (i, series) in rhs.iter_mut().enumerate() {
            cells += 1;
            let expected = h.get(size - i as i32 - 1);
            let got = table.cells.get(&(i, *pattern)).copied().unwrap_or(0);
            if expected != got {
                mismatches.push(format!(
                    "i={i} N={:?}: ext {got}, links {expected}",
                    unmask(*pattern)
                ));
            }
            if expected > 0 {
                *series = &*series
                    + &HilbertSeries::new(-size, vec![expected as i64], (n as i32 - size) as u32);
            }
        }
    }
    for (i, expected) in rhs.iter().enumerate() {
        let got = table.series(i);
        if &got != expected {
            mismatches.push(format!("series i={i}: ext {got}, links {expected}"));
        }
    }
    Ok(ExtCheck {
        passed: mismatches.is_empty(),
        cells_checked: cells,
        mismatches,
    })
}

/// `sum_{i >= j} (-1)^{i-j} C(r, i) q^i / (1-q)^r`, the Hilbert series of
/// the `j`-th syzygy module of the residue field.
pub fn koszul_syzygy_hilbert(r: usize, j: usize) -> HilbertSeries {
    let coeffs: Vec<i64> = (j..=r)
        .map(|i| {
            let c = crate::exactla::binomial(r as i64, i as i64);
            if (i - j) % 2 == 0 {
                c
            } else {
                -c
            }
        })
        .collect();
    HilbertSeries::new(j as i32, coeffs, r as u32)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Generator {
    pub name: String,
    pub degree: usize,
}

/// `lhs.0 * lhs.1 = join * sum(terms)`; `join = None` stands for the top
/// face, whose generator is `1`. An empty sum is `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: (String, String),
    pub join: Option<String>,
    pub terms: Vec<String>,
}

impl std::fmt::Display for Relation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} * {} = ", self.lhs.0, self.lhs.1)?;
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sum = self.terms.join(" + ");
        match (&self.join, self.terms.len()) {
            (None, _) => write!(f, "{sum}"),
            (Some(j), 1) => write!(f, "{j} * {sum}"),
            (Some(j), _) => write!(f, "{j} * ({sum})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceRingPresentation {
    pub generators: Vec<Generator>,
    pub relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FaceRingError {
    #[error("faces {0} and {1} have no unique join")]
    NoUniqueJoin(String, String),
    #[error("relation for {0} and {1} is not homogeneous")]
    NotHomogeneous(String, String),
}

fn generator_name(label: &str) -> String {
    let inner = label.trim_start_matches('{').trim_end_matches('}');
    if label.starts_with('{') {
        format!("t_{}", inner.replace(',', "_"))
    } else {
        format!("t_{label}")
    }
}

/// Face ring presentation over the surviving faces, with one degree
/// `2 codim P` generator per non-top face.
pub fn face_ring_presentation(space: &Space) -> Result<FaceRingPresentation, FaceRingError> {
    let poset: FacePoset = space.poset();
    let survives = |i: usize| match space {
        Space::Fan(_) => true,
        Space::Faces(s) => s.survives(i),
    };
    let r = poset.max_rank();
    let top = poset.top();
    let faces: Vec<usize> = (0..poset.len())
        .filter(|&i| i != top && survives(i))
        .collect();
    let name = |i: usize| generator_name(poset.label(i));
    let generators = faces
        .iter()
        .map(|&i| Generator {
            name: name(i),
            degree: 2 * (r - poset.rank(i)),
        })
        .collect();
    let mut relations = Vec::new();
    for (a, &p) in faces.iter().enumerate() {
        for &q in &faces[a + 1..] {
            if poset.comparable(p, q) {
                continue;
            }
            let joins: Vec<usize> = poset
                .minimal_upper_bounds(p, q)
                .into_iter()
                .filter(|&i| survives(i))
                .collect();
            let &[join] = joins.as_slice() else {
                return Err(FaceRingError::NoUniqueJoin(
                    poset.label(p).into(),
                    poset.label(q).into(),
                ));
            };
            let meets: Vec<usize> = poset
                .maximal_lower_bounds(p, q)
                .into_iter()
                .filter(|&i| survives(i))
                .collect();
            // degree 2(r - rank) on both sides
            let lhs = 2 * r - poset.rank(p) - poset.rank(q);
            if meets
                .iter()
                .any(|&o| 2 * r - poset.rank(join) - poset.rank(o) != lhs)
            {
                return Err(FaceRingError::NotHomogeneous(
                    poset.label(p).into(),
                    poset.label(q).into(),
                ));
            }
            relations.push(Relation {
                lhs: (name(p), name(q)),
                join: (join != top).then(|| name(join)),
                terms: meets.iter().map(|&o| name(o)).collect(),
            });
        }
    }
    Ok(FaceRingPresentation {
        generators,
        relations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::fixtures;
    use crate::generate;

    fn complex(n: usize, facets: &[&[usize]]) -> SimplicialComplex {
        SimplicialComplex::new(n, facets.iter().map(|f| f.to_vec())).unwrap()
    }

    #[test]
    fn ideal_minimalizes() {
        let i = MonomialIdeal::new(3, vec![vec![0, 1], vec![0], vec![1, 2]]).unwrap();
        assert_eq!(i.generators(), vec![vec![0], vec![1, 2]]);
        assert_eq!(i.to_string(), "(x0, x1x2)");
    }

    #[test]
    fn ext_of_principal_ideal() {
        // k[x,y]/(xy): Ext^1 in degrees -x, -y, -xy
        let i = MonomialIdeal::new(2, vec![vec![0, 1]]).unwrap();
        let t = ext_table(&i);
        assert_eq!(t.get(1, &[0]), 1);
        assert_eq!(t.get(1, &[1]), 1);
        assert_eq!(t.get(1, &[0, 1]), 1);
        assert_eq!(t.get(1, &[]), 0);
        assert_eq!(t.pd(), Some(1));
        assert_eq!(
            t.series(1),
            HilbertSeries::new(-2, vec![1], 0) + HilbertSeries::new(-1, vec![2], 1)
        );
        assert_eq!(depth_pd(&i), Some((1, 1)));
    }

    #[test]
    fn zero_and_unit_ideals() {
        assert_eq!(depth_pd(&MonomialIdeal::zero(3)), Some((3, 0)));
        let unit = MonomialIdeal::new(2, vec![vec![]]).unwrap();
        assert!(unit.is_unit());
        assert_eq!(depth_pd(&unit), None);
    }

    #[test]
    fn taylor_is_exact() {
        for k in [
            complex(4, &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]),
            complex(3, &[&[0], &[1, 2]]),
        ] {
            TaylorComplex::new(&stanley_reisner_ideal(&k).unwrap())
                .exactness_check()
                .unwrap();
        }
    }

    #[test]
    fn depth_examples() {
        let two_points = complex(2, &[&[0], &[1]]);
        assert_eq!(
            depth_pd(&stanley_reisner_ideal(&two_points).unwrap()),
            Some((1, 1))
        );
        assert_eq!(depth_local_cohomology(&two_points), Some(1));
        let square = complex(4, &[&[0, 1], &[1, 2], &[2, 3], &[3, 0]]);
        assert_eq!(depth_local_cohomology(&square), Some(2));
        assert_eq!(
            depth_local_cohomology(&SimplicialComplex::empty(0)),
            Some(0)
        );
    }

    #[test]
    fn hochster_on_small_complexes() {
        for k in [
            complex(2, &[&[0], &[1]]),
            complex(4, &[&[0, 1], &[2, 3]]),
            SimplicialComplex::simplex_boundary(3),
            SimplicialComplex::void(2),
            SimplicialComplex::empty(2),
        ] {
            let check = ext_decomposition_check(&k).unwrap();
            assert!(check.passed, "{k:?}: {:?}", check.mismatches);
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(syzygy_order_oracle(&fixtures::punctured_square()).order, 1);
        assert_eq!(syzygy_order_oracle(&fixtures::c2_minus_origin()).order, 0);
        assert_eq!(syzygy_order_oracle(&fixtures::p1_power(2)).order, 2);
    }

    #[test]
    fn koszul_series() {
        assert_eq!(koszul_syzygy_hilbert(3, 0), HilbertSeries::one());
        assert_eq!(
            koszul_syzygy_hilbert(2, 1).to_string(),
            "(2q - q^2)/(1-q)^2"
        );
    }

    #[test]
    fn face_ring_of_p1() {
        let p = face_ring_presentation(&Space::Fan(fixtures::p1())).unwrap();
        assert_eq!(p.generators.len(), 2);
        assert_eq!(p.relations.len(), 1);
        assert_eq!(p.relations[0].to_string(), "t_0 * t_1 = 0");
    }

    #[test]
    fn face_ring_of_square() {
        let p = face_ring_presentation(&Space::Faces(generate::cube(2).unwrap())).unwrap();
        assert_eq!(p.generators.len(), 8);
        let nonzero: Vec<String> = p
            .relations
            .iter()
            .filter(|r| !r.terms.is_empty())
            .map(|r| r.to_string())
            .collect();
        // adjacent edges meet in a vertex and join at the top
        assert_eq!(nonzero.len(), 4);
        assert!(p.generators.iter().all(|g| g.degree == 2 || g.degree == 4));
    }
}
