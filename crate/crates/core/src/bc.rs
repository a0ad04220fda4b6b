//! Face complexes `B_c(P)`: one column per rank of faces below `P`, holding the
//! compactly supported cohomology of the open faces, with the connecting maps
//! as differential.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::exactla::{cohomology_dims, CochainComplex, ComplexError, GradedDims, Matrix, Rational};
use crate::fan::{Fan, FanError};
use crate::poset::{FacePoset, PosetError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceClass {
    /// Face lattice only; every open face contributes one `k` in internal degree 0.
    Polytopal,
    /// Polytopal with some rank-0 faces removed.
    Punctured,
    /// Explicit `B_c` complex per face.
    Raw,
}

impl fmt::Display for FaceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FaceClass::Polytopal => "polytopal",
            FaceClass::Punctured => "punctured",
            FaceClass::Raw => "raw",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceInfo {
    pub id: String,
    pub rank: usize,
    pub compact: bool,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum BcError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error("duplicate face id {0}")]
    DuplicateFace(String),
    #[error("unknown face {0}")]
    UnknownFace(String),
    #[error("removed face {0} must have rank 0")]
    RemovedRank(String),
    #[error("only punctured structures may remove faces")]
    RemovedClass,
    #[error("raw face {face}: {reason}")]
    Raw { face: String, reason: String },
    #[error("face {face}: {source}")]
    Complex { face: String, source: ComplexError },
    #[error("no incidence signs with d o d = 0 exist at face {0}")]
    Orientation(String),
    #[error("operation needs a {expected} structure, got {got}")]
    WrongClass {
        expected: &'static str,
        got: FaceClass,
    },
}

/// Abstract orbit-space face poset with per-face data.
///
/// Invariants: ranks lie in `0..=rank`, covers raise rank by one, a unique
/// face of rank `rank` lies above all faces; removed faces have rank 0 and
/// occur only in punctured structures; raw structures carry a valid complex
/// with `rank P + 1` positions for every face. The class is uniform.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceStructure {
    rank: usize,
    dimension: Option<usize>,
    class: FaceClass,
    faces: Vec<FaceInfo>,
    covers: Vec<(usize, usize)>,
    removed: BTreeSet<usize>,
    raw: BTreeMap<usize, CochainComplex>,
    poset: FacePoset,
}

impl FaceStructure {
    pub fn new(
        rank: usize,
        dimension: Option<usize>,
        class: FaceClass,
        faces: Vec<FaceInfo>,
        covers: Vec<(usize, usize)>,
        removed: BTreeSet<usize>,
        raw: BTreeMap<usize, CochainComplex>,
    ) -> Result<Self, BcError> {
        let mut seen = BTreeSet::new();
        for f in &faces {
            if !seen.insert(f.id.as_str()) {
                return Err(BcError::DuplicateFace(f.id.clone()));
            }
        }
        let poset = FacePoset::new(
            faces.iter().map(|f| f.id.clone()).collect(),
            faces.iter().map(|f| f.rank).collect(),
            rank,
            &covers,
        )?;
        if !removed.is_empty() && class != FaceClass::Punctured {
            return Err(BcError::RemovedClass);
        }
        for &v in &removed {
            if faces[v].rank != 0 {
                return Err(BcError::RemovedRank(faces[v].id.clone()));
            }
        }
        if class == FaceClass::Raw {
            for (i, f) in faces.iter().enumerate() {
                let c = raw.get(&i).ok_or_else(|| BcError::Raw {
                    face: f.id.clone(),
                    reason: "missing complex".into(),
                })?;
                if c.len() != f.rank + 1 {
                    return Err(BcError::Raw {
                        face: f.id.clone(),
                        reason: format!("expected {} columns, got {}", f.rank + 1, c.len()),
                    });
                }
            }
        } else if !raw.is_empty() {
            return Err(BcError::Raw {
                face: faces[*raw.keys().next().unwrap()].id.clone(),
                reason: "raw payload in a non-raw structure".into(),
            });
        }
        Ok(FaceStructure {
            rank,
            dimension,
            class,
            faces,
            covers,
            removed,
            raw,
            poset,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dimension(&self) -> Option<usize> {
        self.dimension
    }

    pub fn class(&self) -> FaceClass {
        self.class
    }

    pub fn faces(&self) -> &[FaceInfo] {
        &self.faces
    }

    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn removed(&self) -> &BTreeSet<usize> {
        &self.removed
    }

    pub fn raw_complex(&self, face: usize) -> Option<&CochainComplex> {
        self.raw.get(&face)
    }

    pub fn poset(&self) -> &FacePoset {
        &self.poset
    }

    pub fn face_index(&self, id: &str) -> Result<usize, BcError> {
        self.faces
            .iter()
            .position(|f| f.id == id)
            .ok_or_else(|| BcError::UnknownFace(id.into()))
    }

    pub fn survives(&self, face: usize) -> bool {
        !self.removed.contains(&face)
    }

    /// Faces of the space (removed faces excluded), in input order.
    pub fn surviving_faces(&self) -> Vec<usize> {
        (0..self.faces.len())
            .filter(|&i| self.survives(i))
            .collect()
    }
}

/// Incidence signs `eps(Q, F)` for covers `F <1 Q`.
pub type Orientation = BTreeMap<(usize, usize), i64>;

/// Deterministic incidence signs with `d o d = 0` on the whole face lattice.
pub fn orient(poset: &FacePoset) -> Result<Orientation, BcError> {
    orient_with(poset, None)
}

/// Incidence signs from a seeded random linear extension and random per-face flips.
pub fn orient_seeded(poset: &FacePoset, seed: u64) -> Result<Orientation, BcError> {
    orient_with(poset, Some(&mut ChaCha8Rng::seed_from_u64(seed)))
}

fn orient_with(
    poset: &FacePoset,
    mut rng: Option<&mut ChaCha8Rng>,
) -> Result<Orientation, BcError> {
    let mut eps = Orientation::new();
    let mut order: Vec<usize> = (0..poset.len()).collect();
    if let Some(r) = rng.as_deref_mut() {
        order.shuffle(r);
    }
    order.sort_by_key(|&i| poset.rank(i));
    for q in order {
        let mut facets = poset.facets_of(q).to_vec();
        if let Some(r) = rng.as_deref_mut() {
            facets.shuffle(r);
        }
        let flip = coin(&mut rng);
        match poset.rank(q) {
            0 => {}
            1 => {
                // boundary of an interval: first endpoint -1, the rest +1
                for (k, &f) in facets.iter().enumerate() {
                    let s = if k == 0 && facets.len() >= 2 { -1 } else { 1 };
                    eps.insert((q, f), s * flip);
                }
            }
            _ => {
                let signs = solve_face(poset, &facets, &eps, &mut rng)
                    .ok_or_else(|| BcError::Orientation(poset.label(q).to_string()))?;
                for (f, s) in facets.iter().zip(signs) {
                    eps.insert((q, *f), s * flip);
                }
            }
        }
    }
    Ok(eps)
}

/// `-1` or `1` at random, always `1` without a generator.
fn coin(rng: &mut Option<&mut ChaCha8Rng>) -> i64 {
    match rng.as_deref_mut() {
        Some(r) => {
            if r.gen_bool(0.5) {
                -1
            } else {
                1
            }
        }
        None => 1,
    }
}

/// Signs on the facets of `q` with `sum_F eps(q,F) eps(F,O) = 0` for every
/// rank-(k-2) face `O` below `q`.
fn solve_face(
    poset: &FacePoset,
    facets: &[usize],
    eps: &Orientation,
    rng: &mut Option<&mut ChaCha8Rng>,
) -> Option<Vec<i64>> {
    // ridge -> [(facet position, eps(F, O))]
    let mut ridges: BTreeMap<usize, Vec<(usize, i64)>> = BTreeMap::new();
    for (i, &f) in facets.iter().enumerate() {
        for &o in poset.facets_of(f) {
            ridges.entry(o).or_default().push((i, eps[&(f, o)]));
        }
    }
    if ridges.values().any(|v| v.len() == 1) {
        return None;
    }
    // BFS over facets linked through ridges shared by exactly two facets:
    // eps(q,F2) = -eps(q,F1) eps(F1,O) eps(F2,O)
    let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); facets.len()];
    for v in ridges.values().filter(|v| v.len() == 2) {
        let ((a, sa), (b, sb)) = (v[0], v[1]);
        adj[a].push((b, -sa * sb));
        adj[b].push((a, -sa * sb));
    }
    let mut sign = vec![0i64; facets.len()];
    let mut components: Vec<Vec<usize>> = Vec::new();
    for start in 0..facets.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = coin(rng);
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for &(b, rel) in &adj[a] {
                let want = sign[a] * rel;
                if sign[b] == 0 {
                    sign[b] = want;
                    comp.push(b);
                    queue.push_back(b);
                } else if sign[b] != want {
                    return None;
                }
            }
        }
        components.push(comp);
    }
    let holds = |sign: &[i64]| {
        ridges
            .values()
            .all(|v| v.iter().map(|&(i, s)| sign[i] * s).sum::<i64>() == 0)
    };
    if holds(&sign) {
        return Some(sign);
    }
    // ridges in three or more facets: search over component flips
    if components.len() > 16 {
        return None;
    }
    for mask in 1u32..(1u32 << components.len()) {
        let mut s = sign.clone();
        for (c, comp) in components.iter().enumerate() {
            if mask >> c & 1 == 1 {
                for &i in comp {
                    s[i] = -s[i];
                }
            }
        }
        if holds(&s) {
            return Some(s);
        }
    }
    None
}

/// `B_c(P)` with the faces behind each column.
#[derive(Debug, Clone, PartialEq)]
pub struct BcComplex {
    pub owner: usize,
    pub owner_label: String,
    /// Face indices per column, or empty lists for raw input.
    pub columns: Vec<Vec<usize>>,
    pub complex: CochainComplex,
}

fn single_degree(dim: usize) -> GradedDims {
    GradedDims::from_pairs([(0, dim)])
}

fn incidence_complex(
    owner: usize,
    owner_label: String,
    columns: Vec<Vec<usize>>,
    sign: impl Fn(usize, usize) -> Option<i64>,
) -> Result<BcComplex, BcError> {
    let positions = columns.iter().map(|c| single_degree(c.len())).collect();
    let diffs = columns
        .windows(2)
        .map(|w| {
            let rows = w[1]
                .iter()
                .map(|&hi| {
                    w[0].iter()
                        .map(|&lo| Rational::from_integer(sign(hi, lo).unwrap_or(0)))
                        .collect()
                })
                .collect();
            BTreeMap::from([(0, Matrix::from_rows_with_cols(rows, w[0].len()))])
        })
        .collect();
    let complex = CochainComplex::new(positions, diffs).map_err(|source| BcError::Complex {
        face: owner_label.clone(),
        source,
    })?;
    Ok(BcComplex {
        owner,
        owner_label,
        columns,
        complex,
    })
}

/// `B_c(P_sigma)` for a fan: column `i` has one `k` (internal degree 0) per
/// cone `tau` containing `sigma` with `codim tau = i`; the differential drops a
/// ray `v` not in `sigma` with sign `(-1)^(position of v in tau)`.
pub fn bc_from_fan(fan: &Fan, sigma: &[usize]) -> Result<BcComplex, BcError> {
    let owner = fan
        .cone_index(sigma)
        .ok_or_else(|| FanError::UnknownCone(sigma.to_vec()))?;
    let sigma = &fan.cones()[owner];
    let r = fan.rank();
    let mut columns = vec![Vec::new(); fan.codim(sigma) + 1];
    for (i, tau) in fan.cones().iter().enumerate() {
        if sigma.iter().all(|v| tau.contains(v)) {
            columns[r - tau.len()].push(i);
        }
    }
    let cones = fan.cones();
    incidence_complex(owner, crate::fan::cone_label(sigma), columns, |hi, lo| {
        let (small, big) = (&cones[hi], &cones[lo]);
        if big.len() != small.len() + 1 || !small.iter().all(|v| big.contains(v)) {
            return None;
        }
        let p = big.iter().position(|v| !small.contains(v)).unwrap();
        Some(if p % 2 == 0 { 1 } else { -1 })
    })
}

/// `B_c(P)` for a polytopal or punctured structure with precomputed signs.
pub fn bc_from_polytopal_with(
    s: &FaceStructure,
    face: usize,
    eps: &Orientation,
) -> Result<BcComplex, BcError> {
    if s.class == FaceClass::Raw {
        return Err(BcError::WrongClass {
            expected: "polytopal or punctured",
            got: s.class,
        });
    }
    let p = s.poset();
    let mut columns = vec![Vec::new(); p.rank(face) + 1];
    for &q in p.below(face) {
        if s.survives(q) {
            columns[p.rank(q)].push(q);
        }
    }
    incidence_complex(face, p.label(face).to_string(), columns, |hi, lo| {
        eps.get(&(hi, lo)).copied()
    })
}

pub fn bc_from_polytopal(s: &FaceStructure, face: usize) -> Result<BcComplex, BcError> {
    bc_from_polytopal_with(s, face, &orient(s.poset())?)
}

/// The stored complex of a raw face.
pub fn bc_from_raw(s: &FaceStructure, face: usize) -> Result<BcComplex, BcError> {
    if s.class != FaceClass::Raw {
        return Err(BcError::WrongClass {
            expected: "raw",
            got: s.class,
        });
    }
    let complex = s.raw[&face].clone();
    Ok(BcComplex {
        owner: face,
        owner_label: s.faces[face].id.clone(),
        columns: vec![Vec::new(); complex.len()],
        complex,
    })
}

pub fn bc_cohomology(b: &BcComplex) -> Vec<GradedDims> {
    cohomology_dims(&b.complex)
}

/// Compares `H^i(B_c(P_sigma))` with `H~_{codim sigma - i - 1}(L_sigma)`.
pub fn link_correspondence_check(fan: &Fan, sigma: &[usize]) -> Result<bool, BcError> {
    let h = bc_cohomology(&bc_from_fan(fan, sigma)?);
    let link = fan.cone_link(sigma)?.reduced_homology();
    let c = fan.codim(sigma) as i32;
    let mut shifted = GradedDims::new();
    for (i, g) in h.iter().enumerate() {
        // toric columns are concentrated in internal degree 0
        if g.degrees().any(|q| q != 0) {
            return Ok(false);
        }
        shifted.set(c - i as i32 - 1, g.get(0));
    }
    Ok(shifted == link)
}

/// Input accepted by the criterion pipelines.
#[derive(Debug, Clone)]
pub enum Space {
    Fan(Fan),
    Faces(FaceStructure),
}

impl Space {
    pub fn rank(&self) -> usize {
        match self {
            Space::Fan(f) => f.rank(),
            Space::Faces(s) => s.rank(),
        }
    }

    /// Real dimension of `X` when known (`2r` for toric and polytopal input).
    pub fn dimension(&self) -> Option<usize> {
        match self {
            Space::Fan(f) => Some(2 * f.rank()),
            Space::Faces(s) => match (s.dimension, s.class) {
                (Some(d), _) => Some(d),
                (None, FaceClass::Raw) => None,
                (None, _) => Some(2 * s.rank),
            },
        }
    }

    pub fn poset(&self) -> FacePoset {
        match self {
            Space::Fan(f) => f.face_poset(),
            Space::Faces(s) => s.poset().clone(),
        }
    }

    /// `B_c(P)` for every face of the space, in face-index order.
    pub fn bc_all(&self) -> Result<Vec<BcComplex>, BcError> {
        match self {
            Space::Fan(f) => f.cones().iter().map(|c| bc_from_fan(f, c)).collect(),
            Space::Faces(s) if s.class == FaceClass::Raw => {
                (0..s.faces.len()).map(|i| bc_from_raw(s, i)).collect()
            }
            Space::Faces(s) => {
                let eps = orient(s.poset())?;
                s.surviving_faces()
                    .into_iter()
                    .map(|i| bc_from_polytopal_with(s, i, &eps))
                    .collect()
            }
        }
    }

    /// `B_c` of the unique top face.
    pub fn bc_top(&self) -> Result<BcComplex, BcError> {
        match self {
            Space::Fan(f) => bc_from_fan(f, &[]),
            Space::Faces(s) if s.class == FaceClass::Raw => bc_from_raw(s, s.poset().top()),
            Space::Faces(s) => bc_from_polytopal(s, s.poset().top()),
        }
    }
}

/// `E_2` page of the orbit filtration spectral sequence for `H_c(X/T)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitE2 {
    /// `table[p]` is `E_2^{p,*}` by internal degree.
    pub table: Vec<GradedDims>,
    /// No differential `d_s` (`s >= 2`) can connect two nonzero cells.
    pub degenerate: bool,
    /// `H_c^*(X/T)` by total degree, when degenerate.
    pub hc: Option<GradedDims>,
    pub dimension: Option<usize>,
    /// `dim X - r - j`.
    pub bound: Option<i64>,
    /// `H_c^i(X/T) = 0` for `i > bound`; `None` if undecided.
    pub bound_holds: Option<bool>,
}

pub fn orbit_space_e2(space: &Space, order: usize) -> Result<OrbitE2, BcError> {
    let table = bc_cohomology(&space.bc_top()?);
    let cells: Vec<(i32, i32)> = table
        .iter()
        .enumerate()
        .flat_map(|(p, g)| g.degrees().map(move |q| (p as i32, q)))
        .collect();
    let nonzero: BTreeSet<(i32, i32)> = cells.iter().copied().collect();
    let max_p = table.len() as i32;
    let degenerate = !cells
        .iter()
        .any(|&(p, q)| (2..=max_p).any(|s| nonzero.contains(&(p + s, q - s + 1))));
    let hc = degenerate.then(|| {
        let mut h = GradedDims::new();
        for (p, g) in table.iter().enumerate() {
            for (q, n) in g.iter() {
                h.add(p as i32 + q, n);
            }
        }
        h
    });
    let dimension = space.dimension();
    let bound = dimension.map(|d| d as i64 - space.rank() as i64 - order as i64);
    let bound_holds = bound.and_then(|b| {
        match &hc {
            Some(h) => Some(h.degrees().all(|t| t as i64 <= b)),
            // E_infinity is a subquotient of E_2
            None if cells.iter().all(|(p, q)| (p + q) as i64 <= b) => Some(true),
            None => None,
        }
    });
    Ok(OrbitE2 {
        table,
        degenerate,
        hc,
        dimension,
        bound,
        bound_holds,
    })
}
