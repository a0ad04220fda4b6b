//! Regular simplicial fans, their cone posets and links.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::exactla::{determinant, Matrix};
use crate::poset::FacePoset;
use crate::simplicial::{combinations, Face, SimplicialComplex, SimplicialError};

/// One failed validation check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub check: String,
    /// Offending ray or cone indices.
    pub subject: Vec<usize>,
    pub detail: String,
}

/// Which checks ran and what they found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<String>,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid ({})", self.checks.join(", "));
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{}: {:?}: {}", v.check, v.subject, v.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FanError {
    #[error("invalid fan:\n{0}")]
    Invalid(ValidationReport),
    #[error("{0:?} is not a cone of the fan")]
    UnknownCone(Face),
}

/// Checks that run on every fan; geometric intersection of cones is not checked.
pub const FAN_CHECKS: [&str; 7] = [
    "ray-length",
    "primitive",
    "distinct",
    "ray-index",
    "simplicial",
    "unimodular",
    "common-ray",
];

/// A regular simplicial fan in `Q^rank`.
///
/// Invariants (enforced by [`Fan::new`]): rays are primitive, nonzero and
/// pairwise distinct; every cone's rays extend to a lattice basis. Every ray
/// is a 1-cone and the zero cone is always present. `cones` lists all cones
/// sorted by size then lexicographically, so index 0 is the zero cone.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fan {
    rank: usize,
    rays: Vec<Vec<i64>>,
    maximal: Vec<Face>,
    cones: Vec<Face>,
    complex: SimplicialComplex,
}

fn gcd_all(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// gcd of all maximal minors of the `rank x k` matrix with the given columns.
fn minor_gcd(rank: usize, cols: &[&Vec<i64>]) -> i64 {
    let k = cols.len();
    if k == 0 {
        return 1;
    }
    if k > rank {
        return 0;
    }
    let rows: Vec<usize> = (0..rank).collect();
    let mut g = 0i64;
    for sel in combinations(&rows, k) {
        let m = Matrix::from_i64_rows(
            &sel.iter()
                .map(|&i| cols.iter().map(|c| c[i]).collect())
                .collect::<Vec<_>>(),
        );
        let d = determinant(&m);
        let d: i64 = d.to_string().parse().expect("integer minor fits i64");
        g = g.gcd(&d);
        if g == 1 {
            break;
        }
    }
    g
}

impl Fan {
    /// Runs every check of [`FAN_CHECKS`] without building the fan.
    pub fn validate(rank: usize, rays: &[Vec<i64>], cones: &[Face]) -> ValidationReport {
        let mut violations = Vec::new();
        let mut bad = |check: &str, subject: Vec<usize>, detail: String| {
            violations.push(Violation {
                check: check.into(),
                subject,
                detail,
            })
        };
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                bad(
                    "ray-length",
                    vec![i],
                    format!("ray has {} entries, rank is {rank}", r.len()),
                );
            } else if gcd_all(r) != 1 {
                let detail = if r.iter().all(|&x| x == 0) {
                    "zero ray".into()
                } else {
                    format!("gcd {}", gcd_all(r))
                };
                bad("primitive", vec![i], detail);
            }
        }
        let mut seen: BTreeMap<&Vec<i64>, usize> = BTreeMap::new();
        for (i, r) in rays.iter().enumerate() {
            if let Some(&j) = seen.get(r) {
                bad("distinct", vec![j, i], "repeated ray".into());
            } else {
                seen.insert(r, i);
            }
        }
        let mut ok_cones: BTreeSet<Face> = BTreeSet::new();
        for c in cones {
            if let Some(&v) = c.iter().find(|&&v| v >= rays.len()) {
                bad("ray-index", c.clone(), format!("ray {v} does not exist"));
                continue;
            }
            let mut s = c.clone();
            s.sort_unstable();
            if s.windows(2).any(|w| w[0] == w[1]) {
                bad("ray-index", c.clone(), "repeated ray in cone".into());
                continue;
            }
            if s.iter().any(|&v| rays[v].len() != rank) {
                continue;
            }
            let cols: Vec<&Vec<i64>> = s.iter().map(|&v| &rays[v]).collect();
            match minor_gcd(rank, &cols) {
                0 => bad("simplicial", s, "rays are linearly dependent".into()),
                1 => {
                    ok_cones.insert(s);
                }
                g => bad("unimodular", s, format!("maximal minors have gcd {g}")),
            }
        }
        // faces are inferred from maximal cones, so the common-ray set of two cones is
        // a cone whenever both are; this records that the combinatorial check ran
        let listed: Vec<&Face> = ok_cones.iter().collect();
        for (i, a) in listed.iter().enumerate() {
            for b in &listed[i + 1..] {
                let common: Face = a.iter().copied().filter(|v| b.contains(v)).collect();
                if !ok_cones
                    .iter()
                    .any(|c| common.iter().all(|v| c.contains(v)))
                {
                    bad(
                        "common-ray",
                        common,
                        "common rays do not span a cone".into(),
                    );
                }
            }
        }
        let mut checks: Vec<String> = FAN_CHECKS.iter().map(|s| s.to_string()).collect();
        checks.push("face-closure (by construction)".into());
        ValidationReport { checks, violations }
    }

    pub fn new(rank: usize, rays: Vec<Vec<i64>>, cones: Vec<Face>) -> Result<Fan, FanError> {
        let report = Fan::validate(rank, &rays, &cones);
        if !report.is_valid() {
            return Err(FanError::Invalid(report));
        }
        let n = rays.len();
        let generators = cones.into_iter().chain((0..n).map(|v| vec![v]));
        let complex = SimplicialComplex::new(n, generators).expect("indices checked");
        let complex = if complex.is_void() {
            SimplicialComplex::empty(n)
        } else {
            complex
        };
        let maximal = complex.facets().to_vec();
        let cones = complex.all_faces();
        Ok(Fan {
            rank,
            rays,
            maximal,
            cones,
            complex,
        })
    }

    /// The open subfan missing exactly the given maximal cones; their proper
    /// faces stay, so only the corresponding fixed points are deleted.
    pub fn without_cones(&self, removed: &[Face]) -> Result<Fan, FanError> {
        let removed: BTreeSet<Face> = removed
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.sort_unstable();
                c
            })
            .collect();
        let kept = self
            .cones
            .iter()
            .filter(|c| !c.is_empty() && !removed.contains(*c))
            .cloned()
            .collect();
        Fan::new(self.rank, self.rays.clone(), kept)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[Vec<i64>] {
        &self.rays
    }

    /// Maximal cones (nonempty unless the fan is the zero fan).
    pub fn maximal_cones(&self) -> &[Face] {
        &self.maximal
    }

    /// All cones including the zero cone, sorted by size then lexicographically.
    pub fn cones(&self) -> &[Face] {
        &self.cones
    }

    pub fn cone_index(&self, sigma: &[usize]) -> Option<usize> {
        let mut s = sigma.to_vec();
        s.sort_unstable();
        self.cones.iter().position(|c| *c == s)
    }

    /// `codim sigma = rank P_sigma`.
    pub fn codim(&self, sigma: &[usize]) -> usize {
        self.rank - sigma.len()
    }

    pub fn underlying_complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn cone_link(&self, sigma: &[usize]) -> Result<SimplicialComplex, FanError> {
        self.complex.link(sigma).map_err(|e| match e {
            SimplicialError::NotAFace(f) => FanError::UnknownCone(f),
            SimplicialError::VertexOutOfRange { vertex, .. } => FanError::UnknownCone(vec![vertex]),
        })
    }

    /// Orbit-space face poset: `P_tau <= P_sigma` iff `tau` contains `sigma`,
    /// `rank P_sigma = codim sigma`. Face `i` is cone `cones()[i]`.
    pub fn face_poset(&self) -> FacePoset {
        let labels = self.cones.iter().map(|c| cone_label(c)).collect();
        let ranks = self.cones.iter().map(|c| self.codim(c)).collect();
        let index: BTreeMap<&Face, usize> =
            self.cones.iter().enumerate().map(|(i, c)| (c, i)).collect();
        let mut covers = Vec::new();
        for (i, c) in self.cones.iter().enumerate() {
            for skip in 0..c.len() {
                let mut smaller = c.clone();
                smaller.remove(skip);
                covers.push((i, index[&smaller]));
            }
        }
        FacePoset::new(labels, ranks, self.rank, &covers)
            .expect("cone poset is graded with a unique top")
    }

    /// Combinatorial completeness test for rank <= 3: the underlying complex
    /// is a pseudomanifold sphere of dimension `rank - 1` by Euler
    /// characteristic and connectivity. Not meaningful for higher rank.
    pub fn is_complete_combinatorial(&self) -> bool {
        let r = self.rank;
        if r == 0 {
            return true;
        }
        let k = &self.complex;
        if k.facets().iter().any(|f| f.len() != r) {
            return false;
        }
        if r >= 2 {
            let ridges = k.faces(r as i32 - 2);
            if ridges.iter().any(|g| {
                k.facets()
                    .iter()
                    .filter(|f| g.iter().all(|v| f.contains(v)))
                    .count()
                    != 2
            }) {
                return false;
            }
            if k.reduced_homology().get(0) != 0 {
                return false;
            }
        }
        // reduced Euler characteristic of S^{r-1} is (-1)^{r-1}
        let expected = if r % 2 == 1 { 1 } else { -1 };
        k.reduced_euler_characteristic() == expected
    }
}

/// Face label of a cone, e.g. `{0,2}`; the zero cone is `{}`.
pub fn cone_label(c: &[usize]) -> String {
    format!(
        "{{{}}}",
        c.iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(",")
    )
}

impl fmt::Debug for Fan {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Fan")
            .field("rank", &self.rank)
            .field("rays", &self.rays)
            .field("maximal", &self.maximal)
            .finish()
    }
}

/// Named fans used as fixtures and test data.
pub mod fixtures {
    use super::*;

    fn unit(rank: usize, i: usize, sign: i64) -> Vec<i64> {
        let mut v = vec![0; rank];
        v[i] = sign;
        v
    }

    /// CP^1: rays 1 and -1.
    pub fn p1() -> Fan {
        Fan::new(1, vec![vec![1], vec![-1]], vec![vec![0], vec![1]]).unwrap()
    }

    /// C: a single ray in rank 1.
    pub fn c1() -> Fan {
        Fan::new(1, vec![vec![1]], vec![vec![0]]).unwrap()
    }

    /// C^r: one unimodular r-cone.
    pub fn affine(r: usize) -> Fan {
        Fan::new(
            r,
            (0..r).map(|i| unit(r, i, 1)).collect(),
            vec![(0..r).collect()],
        )
        .unwrap()
    }

    /// C^2 minus the origin: two rays, no 2-cone.
    pub fn c2_minus_origin() -> Fan {
        Fan::new(2, vec![vec![1, 0], vec![0, 1]], vec![vec![0], vec![1]]).unwrap()
    }

    /// The zero fan in rank r (the torus itself).
    pub fn torus(r: usize) -> Fan {
        Fan::new(r, Vec::new(), Vec::new()).unwrap()
    }

    /// CP^n: rays e_1..e_n and -(e_1+...+e_n).
    pub fn projective(n: usize) -> Fan {
        let mut rays: Vec<Vec<i64>> = (0..n).map(|i| unit(n, i, 1)).collect();
        rays.push(vec![-1; n]);
        let cones = (0..=n)
            .map(|skip| (0..=n).filter(|&v| v != skip).collect())
            .collect();
        Fan::new(n, rays, cones).unwrap()
    }

    /// (CP^1)^r: rays `e_i` (index 2i) and `-e_i` (index 2i+1), all orthants.
    pub fn p1_power(r: usize) -> Fan {
        let rays = (0..r)
            .flat_map(|i| [unit(r, i, 1), unit(r, i, -1)])
            .collect();
        let cones = (0..1usize << r).map(|mask| orthant(r, mask)).collect();
        Fan::new(r, rays, cones).unwrap()
    }

    /// Orthant cone of `(CP^1)^r`: bit i of `mask` picks `-e_i`.
    pub fn orthant(r: usize, mask: usize) -> Face {
        (0..r).map(|i| 2 * i + (mask >> i & 1)).collect()
    }

    /// (CP^1)^r with the fixed points of orthants `a` and `b` removed.
    pub fn p1_power_minus(r: usize, a: usize, b: usize) -> Fan {
        p1_power(r)
            .without_cones(&[orthant(r, a), orthant(r, b)])
            .unwrap()
    }

    /// (CP^1)^r minus two opposite fixed points (orthants `+...+` and `-...-`).
    pub fn punctured_p1_power(r: usize) -> Fan {
        p1_power_minus(r, 0, (1 << r) - 1)
    }

    /// The punctured-square fan: rays +e1, -e1, +e2, -e2 with 2-cones {-e1,+e2}, {+e1,-e2}.
    pub fn punctured_square() -> Fan {
        punctured_p1_power(2)
    }
}

#[cfg(test)]
mod tests {
    use super::fixtures::*;
    use super::*;
    use crate::exactla::GradedDims;

    #[test]
    fn validation_examples() {
        assert!(Fan::validate(1, &[vec![1], vec![-1]], &[vec![0], vec![1]]).is_valid());
        let r = Fan::validate(1, &[vec![2]], &[vec![0]]);
        assert_eq!(r.violations[0].check, "primitive");
        let r = Fan::validate(2, &[vec![1, 0], vec![1, 2]], &[vec![0, 1]]);
        assert_eq!(r.violations[0].check, "unimodular");
        let r = Fan::validate(2, &[vec![1, 0], vec![-1, 0]], &[vec![0, 1]]);
        assert_eq!(r.violations[0].check, "simplicial");
        let r = Fan::validate(1, &[vec![1], vec![1]], &[]);
        assert_eq!(r.violations[0].check, "distinct");
    }

    #[test]
    fn underlying_complexes() {
        assert_eq!(p1().underlying_complex().facets(), &[vec![0], vec![1]]);
        assert_eq!(affine(2).underlying_complex().facets(), &[vec![0, 1]]);
        let ps = punctured_square();
        assert_eq!(ps.underlying_complex().facets(), &[vec![0, 3], vec![1, 2]]);
        assert!(torus(2).underlying_complex().is_empty_complex());
    }

    #[test]
    fn links() {
        assert_eq!(
            p1().cone_link(&[]).unwrap().reduced_homology(),
            GradedDims::unit(0)
        );
        assert_eq!(
            punctured_square()
                .cone_link(&[])
                .unwrap()
                .reduced_homology(),
            GradedDims::unit(0)
        );
        assert!(affine(2).cone_link(&[0, 1]).unwrap().is_empty_complex());
        assert!(matches!(
            p1().cone_link(&[0, 1]),
            Err(FanError::UnknownCone(_))
        ));
    }

    #[test]
    fn face_posets() {
        let p = p1().face_poset();
        assert_eq!(p.len(), 3);
        assert_eq!(p.rank(p.top()), 1);
        assert_eq!((0..3).filter(|&i| p.rank(i) == 0).count(), 2);
        let c2 = affine(2).face_poset();
        assert_eq!(
            (0..c2.len()).map(|i| c2.rank(i)).collect::<Vec<_>>(),
            vec![2, 1, 1, 0]
        );
        let t = torus(3).face_poset();
        assert_eq!(t.len(), 1);
        assert_eq!(t.rank(0), 3);
    }

    #[test]
    fn completeness() {
        assert!(p1().is_complete_combinatorial());
        assert!(p1_power(2).is_complete_combinatorial());
        assert!(p1_power(3).is_complete_combinatorial());
        assert!(projective(2).is_complete_combinatorial());
        assert!(!punctured_square().is_complete_combinatorial());
        assert!(!c1().is_complete_combinatorial());
    }
}
