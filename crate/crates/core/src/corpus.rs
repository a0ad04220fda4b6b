//! Deterministic test corpora: small regular fans and small simplicial complexes.
//!
//! Fans are enumerated over fixed ray pools in which every admissible set of
//! cones is automatically a fan:
//! - rank 1: rays `+1`, `-1`;
//! - rank 2: the cyclic pool `e1, e1+e2, e2, -e1, -e2`, 2-cones between
//!   cyclic neighbours only;
//! - rank 3: `+-e_i`, at most five rays, cones free of antipodal pairs.
//!
//! Every subset of the pool and every admissible family of cones on it is
//! listed; fans are not identified up to lattice automorphism.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fan::{fixtures, Fan};
use crate::simplicial::{combinations, Face, SimplicialComplex};

pub const COMPLEX_SEED: u64 = 0x5eed_c0de;
pub const RANDOM_COMPLEXES_PER_SIZE: usize = 40;
pub const MAX_RANDOM_GENERATORS: usize = 10;

/// Antichains among `candidates` (faces of size >= 2), as maximal-face lists.
fn antichains(candidates: &[Face]) -> Vec<Vec<Face>> {
    let subset = |a: &Face, b: &Face| a.iter().all(|v| b.contains(v));
    let mut out = vec![Vec::new()];
    for c in candidates {
        let extended: Vec<Vec<Face>> = out
            .iter()
            .filter(|chain: &&Vec<Face>| chain.iter().all(|m| !subset(m, c) && !subset(c, m)))
            .map(|chain| {
                let mut next = chain.clone();
                next.push(c.clone());
                next
            })
            .collect();
        out.extend(extended);
    }
    out
}

fn pool_fans(
    rank: usize,
    pool: &[Vec<i64>],
    max_rays: usize,
    allowed: impl Fn(&[usize]) -> bool,
) -> Vec<Fan> {
    let n = pool.len();
    let mut fans = Vec::new();
    for mask in 0usize..1 << n {
        let chosen: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if chosen.len() > max_rays {
            continue;
        }
        let mut candidates = Vec::new();
        for k in 2..=rank.min(chosen.len()) {
            for c in combinations(&chosen, k) {
                if allowed(&c) {
                    // relabel into the chosen subset
                    candidates.push(
                        c.iter()
                            .map(|v| chosen.iter().position(|w| w == v).unwrap())
                            .collect(),
                    );
                }
            }
        }
        let rays: Vec<Vec<i64>> = chosen.iter().map(|&i| pool[i].clone()).collect();
        for maximal in antichains(&candidates) {
            fans.push(
                Fan::new(rank, rays.clone(), maximal).expect("pool cones form a regular fan"),
            );
        }
    }
    fans
}

pub fn enumerated_fans(rank: usize) -> Vec<Fan> {
    match rank {
        1 => pool_fans(1, &[vec![1], vec![-1]], 2, |_| true),
        2 => {
            let pool = [vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![0, -1]];
            pool_fans(2, &pool, 5, |c| c[1] - c[0] == 1 || (c[0], c[1]) == (0, 4))
        }
        3 => {
            // ray 2i = +e_i, ray 2i+1 = -e_i
            let pool: Vec<Vec<i64>> = (0..6)
                .map(|k| {
                    let mut v = vec![0; 3];
                    v[k / 2] = if k % 2 == 0 { 1 } else { -1 };
                    v
                })
                .collect();
            pool_fans(3, &pool, 5, |c| c.windows(2).all(|w| w[0] / 2 != w[1] / 2))
        }
        _ => Vec::new(),
    }
}

pub fn named_fans() -> Vec<(String, Fan)> {
    let mut v: Vec<(String, Fan)> = vec![
        ("affine2".into(), fixtures::affine(2)),
        ("affine3".into(), fixtures::affine(3)),
        ("c1".into(), fixtures::c1()),
        ("c2_minus_origin".into(), fixtures::c2_minus_origin()),
        ("p1".into(), fixtures::p1()),
        ("p1xp1".into(), fixtures::p1_power(2)),
        ("p1xp1xp1".into(), fixtures::p1_power(3)),
        ("p2".into(), fixtures::projective(2)),
        ("p3".into(), fixtures::projective(3)),
        ("punctured_cube_2".into(), fixtures::punctured_p1_power(2)),
        ("punctured_cube_3".into(), fixtures::punctured_p1_power(3)),
        ("punctured_square".into(), fixtures::punctured_square()),
        ("torus2".into(), fixtures::torus(2)),
    ];
    for d in 1..=3 {
        let b = (1usize << d) - 1;
        v.push((
            format!("cube3_minus_0_{b}"),
            fixtures::p1_power_minus(3, 0, b),
        ));
    }
    v.sort_by(|a, b| a.0.cmp(&b.0));
    v
}

/// Enumerated fans (`r<rank>_<index>`) followed by the named fans.
pub fn fan_corpus() -> Vec<(String, Fan)> {
    let mut v = Vec::new();
    for rank in 1..=3 {
        for (i, f) in enumerated_fans(rank).into_iter().enumerate() {
            v.push((format!("r{rank}_{i:04}"), f));
        }
    }
    v.extend(
        named_fans()
            .into_iter()
            .map(|(n, f)| (format!("named_{n}"), f)),
    );
    v
}

/// Complex of subsets of `[n]` containing no generator.
pub fn complex_from_nonfaces(n: usize, generators: &[Face]) -> SimplicialComplex {
    let gens: Vec<u64> = generators
        .iter()
        .map(|g| g.iter().fold(0u64, |m, &v| m | 1 << v))
        .collect();
    let faces = (0u64..1 << n)
        .filter(|&s| !gens.iter().any(|&g| g & s == g))
        .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect());
    SimplicialComplex::new(n, faces).expect("subsets of the vertex set")
}

/// All complexes on the vertex set `[n]` (unused vertices allowed), one per
/// antichain of the Boolean lattice, including void and empty.
pub fn all_complexes(n: usize) -> Vec<SimplicialComplex> {
    let subsets = 1usize << n;
    let mut out = Vec::new();
    for family in 0u64..1 << subsets {
        // family bit s means subset s is a face; require closure under removal
        let closed = (0..subsets).all(|s| {
            family >> s & 1 == 0
                || (0..n).all(|v| s >> v & 1 == 0 || family >> (s & !(1 << v)) & 1 == 1)
        });
        if closed {
            let faces = (0..subsets)
                .filter(|&s| family >> s & 1 == 1)
                .map(|s| (0..n).filter(|&v| s >> v & 1 == 1).collect());
            out.push(SimplicialComplex::new(n, faces).expect("subsets of the vertex set"));
        }
    }
    out
}

pub fn random_complexes(n: usize, count: usize, seed: u64) -> Vec<SimplicialComplex> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ n as u64);
    (0..count)
        .map(|_| {
            let g = rng.gen_range(1..=MAX_RANDOM_GENERATORS);
            let gens: Vec<Face> = (0..g)
                .map(|_| {
                    let size = rng.gen_range(2..=n.min(4));
                    let mut f: Face = rand::seq::index::sample(&mut rng, n, size).into_vec();
                    f.sort_unstable();
                    f
                })
                .collect();
            complex_from_nonfaces(n, &gens)
        })
        .collect()
}

pub fn named_complexes() -> Vec<(String, SimplicialComplex)> {
    let octahedron = complex_from_nonfaces(6, &[vec![0, 1], vec![2, 3], vec![4, 5]]);
    let cycle6 = SimplicialComplex::new(6, (0..6).map(|i| vec![i, (i + 1) % 6])).unwrap();
    let rp2 = SimplicialComplex::new(
        6,
        [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [2, 4, 5],
            [1, 3, 5],
        ]
        .map(|f| f.to_vec()),
    )
    .unwrap();
    vec![
        ("cycle6".into(), cycle6),
        ("octahedron".into(), octahedron),
        ("rp2_6".into(), rp2),
    ]
}

/// All complexes on at most four vertices, seeded random complexes on five
/// and six vertices, and the named complexes.
pub fn complex_corpus() -> Vec<(String, SimplicialComplex)> {
    let mut v = Vec::new();
    for n in 0..=4 {
        for (i, k) in all_complexes(n).into_iter().enumerate() {
            v.push((format!("all{n}_{i:03}"), k));
        }
    }
    for n in 5..=6 {
        for (i, k) in random_complexes(n, RANDOM_COMPLEXES_PER_SIZE, COMPLEX_SEED)
            .into_iter()
            .enumerate()
        {
            v.push((format!("random{n}_{i:02}"), k));
        }
    }
    v.extend(
        named_complexes()
            .into_iter()
            .map(|(n, k)| (format!("named_{n}"), k)),
    );
    v
}
