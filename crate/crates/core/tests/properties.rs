use std::sync::OnceLock;

use proptest::prelude::*;

use torsyz_core::bc::{
    bc_cohomology, bc_from_polytopal_with, link_correspondence_check, orient, orient_seeded,
};
use torsyz_core::corpus::{self, complex_from_nonfaces};
use torsyz_core::exactla::sparse_rank;
use torsyz_core::generate;
use torsyz_core::gkm::{cs_kernel_dims, GkmGraph};
use torsyz_core::stanley::{
    depth_local_cohomology, depth_pd, ext_decomposition_check, stanley_reisner_ideal, TaylorComplex,
};
use torsyz_core::{kernel_basis, rank, Fan, HilbertSeries, Matrix, Rational, SimplicialComplex};

fn corpus_fans() -> &'static [(String, Fan)] {
    static FANS: OnceLock<Vec<(String, Fan)>> = OnceLock::new();
    FANS.get_or_init(corpus::fan_corpus)
}

fn matrix(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max, 1..=max)
        .prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(-3i64..=3, c), r))
}

/// Unit lower-triangular integer matrix, hence invertible over Z.
fn unitriangular(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            1
                        } else if j < i {
                            v[i * n + j]
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    })
}

/// Complex on `n` vertices given by random minimal non-faces (as bitmasks).
fn complex(max_n: usize) -> impl Strategy<Value = SimplicialComplex> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(1u64..(1 << n), 0..=8).prop_map(move |masks| {
            let gens: Vec<Vec<usize>> = masks
                .iter()
                .map(|m| (0..n).filter(|&v| m >> v & 1 == 1).collect())
                .collect();
            complex_from_nonfaces(n, &gens)
        })
    })
}

fn dense(rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_i64_rows(rows)
}

fn product(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).map(|(x, r)| x * r[j]).sum())
                .collect()
        })
        .collect()
}

proptest! {
    #[test]
    fn rank_nullity(rows in matrix(6)) {
        let m = dense(&rows);
        let k = kernel_basis(&m);
        prop_assert_eq!(rank(&m) + k.cols(), m.cols());
        prop_assert!(m.mul(&k).is_zero());
        prop_assert_eq!(rank(&k), k.cols());
    }

    #[test]
    fn sparse_and_dense_rank_agree(rows in matrix(7)) {
        let cols = rows[0].len();
        let sparse = rows
            .iter()
            .map(|r| r.iter().enumerate().filter(|(_, &x)| x != 0).map(|(j, &x)| (j, x)).collect())
            .collect();
        prop_assert_eq!(sparse_rank(sparse, cols), rank(&dense(&rows)));
    }

    #[test]
    fn rank_invariant_under_basis_change(
        (rows, u, v) in matrix(5).prop_flat_map(|m| {
            let (r, c) = (m.len(), m[0].len());
            (Just(m), unitriangular(r), unitriangular(c))
        })
    ) {
        let changed = product(&product(&u, &rows), &v);
        prop_assert_eq!(rank(&dense(&changed)), rank(&dense(&rows)));
    }

    #[test]
    fn rational_field_axioms(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        let x = Rational::new(a, b);
        let y = Rational::new(c, d);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        if c != 0 {
            prop_assert_eq!(&(&x * &y) * &y.recip(), x);
        }
    }

    #[test]
    fn euler_characteristic_matches_homology(k in complex(6)) {
        let h = k.reduced_homology();
        let alternating: i64 = h.iter().map(|(d, n)| if d.rem_euclid(2) == 0 { n as i64 } else { -(n as i64) }).sum();
        prop_assert_eq!(alternating, k.reduced_euler_characteristic());
    }

    #[test]
    fn cones_are_acyclic(k in complex(6)) {
        prop_assume!(!k.is_void());
        prop_assert!(k.cone().is_acyclic());
    }

    #[test]
    fn series_arithmetic_matches_coefficients(
        a in prop::collection::vec(-4i64..=4, 1..4), ea in 0u32..3, la in 0i32..3,
        b in prop::collection::vec(-4i64..=4, 1..4), eb in 0u32..3, lb in 0i32..3,
        s in -3i32..=3,
    ) {
        let x = HilbertSeries::new(la, a, ea);
        let y = HilbertSeries::new(lb, b, eb);
        let sum = &x + &y;
        let prod = &x * &y;
        for d in 0..12 {
            prop_assert_eq!(sum.coefficient(d), x.coefficient(d) + y.coefficient(d));
            let conv: i64 = (0..=d).map(|i| x.coefficient(i) * y.coefficient(d - i)).sum();
            prop_assert_eq!(prod.coefficient(d), conv);
            prop_assert_eq!(x.shift(s).coefficient(d + s), x.coefficient(d));
        }
    }

    #[test]
    fn taylor_complexes_resolve(k in complex(6)) {
        let ideal = stanley_reisner_ideal(&k).unwrap();
        prop_assert!(TaylorComplex::new(&ideal).exactness_check().is_ok());
    }

    /// Ext in an arbitrary multidegree `b`, straight from the dual Taylor
    /// complex: zero once some `b_j <= -2`, and otherwise determined by the
    /// coordinates equal to -1.
    #[test]
    fn ext_lives_in_squarefree_patterns(
        (k, b) in complex(5).prop_flat_map(|k| {
            let n = k.vertex_count();
            (Just(k), prop::collection::vec(-3i64..=2, n))
        })
    ) {
        let ideal = stanley_reisner_ideal(&k).unwrap();
        let taylor = TaylorComplex::new(&ideal);
        let g = taylor.length();
        let kept = |s: usize| {
            let l = taylor.lcm(s);
            b.iter().enumerate().all(|(j, &bj)| bj + (l >> j & 1) as i64 >= 0)
        };
        let mut by_size = vec![Vec::new(); g + 1];
        for s in 0..1usize << g {
            if kept(s) {
                by_size[s.count_ones() as usize].push(s);
            }
        }
        let ranks: Vec<usize> = (0..g)
            .map(|i| {
                let rows: Vec<Vec<i64>> = by_size[i + 1]
                    .iter()
                    .map(|&t| {
                        by_size[i]
                            .iter()
                            .map(|&s| {
                                if s & t != s {
                                    return 0;
                                }
                                let k = (t & !s).trailing_zeros();
                                if (t & ((1 << k) - 1)).count_ones() % 2 == 0 { 1 } else { -1 }
                            })
                            .collect()
                    })
                    .collect();
                if rows.is_empty() || by_size[i].is_empty() { 0 } else { rank(&dense(&rows)) }
            })
            .collect();
        let direct: Vec<usize> = (0..=g)
            .map(|i| by_size[i].len() - if i > 0 { ranks[i - 1] } else { 0 } - if i < g { ranks[i] } else { 0 })
            .collect();
        if b.iter().any(|&x| x <= -2) {
            prop_assert!(direct.iter().all(|&d| d == 0), "{:?}", direct);
        } else {
            let pattern = b.iter().enumerate().filter(|(_, &x)| x == -1).fold(0u64, |m, (j, _)| m | 1 << j);
            prop_assert_eq!(direct, taylor.ext_pattern(pattern));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hochster_decomposition_on_random_complexes(k in complex(7)) {
        let check = ext_decomposition_check(&k).unwrap();
        prop_assert!(check.passed, "{:?}", check.mismatches);
    }

    #[test]
    fn depth_plus_pd_is_variable_count(k in complex(7)) {
        let ideal = stanley_reisner_ideal(&k).unwrap();
        match depth_pd(&ideal) {
            Some((depth, pd)) => {
                prop_assert_eq!(depth + pd, k.vertex_count());
                prop_assert_eq!(depth_local_cohomology(&k), Some(depth));
            }
            None => prop_assert!(k.is_void()),
        }
    }

    #[test]
    fn link_correspondence_on_corpus_cones(i in 0usize..3435, pick in any::<prop::sample::Index>()) {
        let (name, fan) = &corpus_fans()[i % corpus_fans().len()];
        let sigma = pick.get(fan.cones());
        prop_assert!(link_correspondence_check(fan, sigma).unwrap(), "{} {:?}", name, sigma);
    }

    #[test]
    fn bc_cohomology_independent_of_orientation(
        dims in prop::collection::vec(1usize..=2, 1..=3),
        holes in prop::collection::vec(any::<prop::sample::Index>(), 0..=2),
        seed in any::<u64>(),
    ) {
        let vertices: Vec<Vec<usize>> = dims.iter().fold(vec![Vec::new()], |acc, &d| {
            acc.into_iter().flat_map(|p| (0..=d).map(move |x| [p.clone(), vec![x]].concat())).collect()
        });
        let mut removed: Vec<Vec<usize>> = holes.iter().map(|h| h.get(&vertices).clone()).collect();
        removed.dedup();
        let s = generate::product_lattice(&dims, &removed).unwrap();
        let base = orient(s.poset()).unwrap();
        let other = orient_seeded(s.poset(), seed).unwrap();
        for face in s.surviving_faces() {
            let a = bc_cohomology(&bc_from_polytopal_with(&s, face, &base).unwrap());
            let b = bc_cohomology(&bc_from_polytopal_with(&s, face, &other).unwrap());
            prop_assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn gkm_dims_invariant_under_lattice_automorphisms(u in unitriangular(3), l in unitriangular(3)) {
        let g = GkmGraph::from_punctured_cube(3);
        let t: Vec<Vec<i64>> = product(&u, &l.iter().cloned().rev().map(|r| r.into_iter().rev().collect()).collect::<Vec<Vec<i64>>>());
        let moved = g.apply_lattice_map(&t).unwrap();
        prop_assert_eq!(cs_kernel_dims(&moved, 10).unwrap(), cs_kernel_dims(&g, 10).unwrap());
    }

    #[test]
    fn removing_gkm_edges_never_shrinks_the_kernel(keep in prop::collection::vec(any::<bool>(), 6)) {
        let g = GkmGraph::from_punctured_cube(3);
        let edges = g.edges().iter().zip(&keep).filter(|(_, &k)| k).map(|(e, _)| e.clone()).collect();
        let sub = GkmGraph::new(3, g.vertices().to_vec(), edges).unwrap();
        let (full, fewer) = (cs_kernel_dims(&g, 10).unwrap(), cs_kernel_dims(&sub, 10).unwrap());
        for d in (0..=10).step_by(2) {
            prop_assert!(fewer.get(d) >= full.get(d));
        }
    }
}

#[test]
fn hexagon_has_six_edges() {
    assert_eq!(GkmGraph::from_punctured_cube(3).edges().len(), 6);
}
