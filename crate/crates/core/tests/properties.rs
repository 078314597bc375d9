//! Randomized checks of the linear algebra and of basis-independence.

use std::collections::HashSet;

use hecke_core::chain::block_homology;
use hecke_core::coeff::{smith_normal_form, Matrix};
use hecke_core::lie::{ce_complex, ce_homology, free_lie_basis, GradedLieAlgebra};
use hecke_core::wgmod::{koszul_sign, symmetry};
use hecke_core::{BasisElem, FreeWGModule, RingSpec, Scalar};
use proptest::prelude::*;
use serde_json::Value;

/// Bareiss determinant over i128.
fn det(mut a: Vec<Vec<i128>>) -> i128 {
    let n = a.len();
    let mut sign = 1;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

/// Rank over Q by fraction-free elimination.
fn rational_rank(a: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let cols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(rank, piv);
        for i in rank + 1..m.len() {
            let (f, g) = (m[i][c], m[rank][c]);
            for j in 0..cols {
                m[i][j] = m[i][j] * g - m[rank][j] * f;
            }
            let gcd = m[i].iter().fold(0i128, |acc, &x| num_gcd(acc, x));
            if gcd > 1 {
                m[i].iter_mut().for_each(|x| *x /= gcd);
            }
        }
        rank += 1;
    }
    rank
}

fn num_gcd(a: i128, b: i128) -> i128 {
    if b == 0 { a.abs() } else { num_gcd(b, a % b) }
}

fn vp(mut x: i128, p: i128) -> u32 {
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    v
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(prop::collection::vec(-9i64..=9, cols), rows)
}

// Brute force over (Z/9)^n.
const Q: u64 = 9;

fn vectors(n: usize) -> Vec<Vec<u64>> {
    (0..Q.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % Q;
                    k /= Q;
                    d
                })
                .collect()
        })
        .collect()
}

fn apply(d: &[Vec<u64>], x: &[u64]) -> Vec<u64> {
    d.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum::<u64>() % Q).collect()
}

/// log_3 of |H[3^k]| for k = 0, 1, 2, where H = ker d1 / im d2.
fn brute_torsion_profile(n1: usize, d1: &[Vec<u64>], d2: &[Vec<u64>], n2: usize) -> Vec<u32> {
    let image: HashSet<Vec<u64>> = vectors(n2).iter().map(|y| apply(d2, y)).collect();
    let kernel: Vec<Vec<u64>> = vectors(n1).into_iter().filter(|x| apply(d1, x).iter().all(|&c| c == 0)).collect();
    (0..=2u32)
        .map(|k| {
            let f = 3u64.pow(k);
            let hits = kernel.iter().filter(|x| image.contains(&x.iter().map(|c| c * f % Q).collect::<Vec<_>>())).count();
            let ratio = hits / image.len();
            assert_eq!(ratio * image.len(), hits);
            ratio.ilog(3)
        })
        .collect()
}

fn to_matrix(spec: RingSpec, d: &[Vec<u64>], ncols: usize) -> Matrix {
    let dense: Vec<Vec<i64>> = d.iter().map(|r| r.iter().map(|&x| x as i64).collect()).collect();
    if dense.is_empty() {
        return Matrix::zeros(0, ncols, spec);
    }
    Matrix::from_ints(spec, &dense)
}

fn module(spec: RingSpec, elems: &[(String, i64, u32)]) -> FreeWGModule {
    FreeWGModule::new(spec, elems.iter().map(|(n, d, w)| BasisElem::new(n.clone(), *d, *w)).collect()).unwrap()
}

fn heisenberg() -> GradedLieAlgebra {
    let spec = RingSpec::PLocal { p: 3 };
    let m = module(spec, &[("a".into(), 0, 1), ("b".into(), 0, 1), ("c".into(), 0, 2)]);
    GradedLieAlgebra::new(m, vec![(0, 1, vec![(2, spec.one())])]).unwrap()
}

/// Reorder the basis of a serialized algebra.
fn shuffled(g: &GradedLieAlgebra, perm: &[usize]) -> GradedLieAlgebra {
    let mut v = g.to_json_value();
    let basis = v["basis"].as_array().unwrap().clone();
    v["basis"] = Value::Array(perm.iter().map(|&i| basis[i].clone()).collect());
    GradedLieAlgebra::from_json_value(&v).unwrap()
}

fn generator_list() -> impl Strategy<Value = Vec<(String, i64, u32)>> {
    prop::collection::vec((-2i64..=2, 1u32..=2), 1..=2)
        .prop_map(|gs| gs.into_iter().enumerate().map(|(i, (d, w))| (format!("g{i}"), d, w)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_form_reconstructs(a in int_matrix(3, 4)) {
        let spec = RingSpec::PLocal { p: 3 };
        let m = Matrix::from_ints(spec, &a);
        let s = smith_normal_form(&m).unwrap();
        prop_assert_eq!(s.u.mul(&m).mul(&s.v).to_dense(), s.d.to_dense());
        prop_assert_eq!(s.rank(), rational_rank(&a));
        prop_assert!(s.exponents.windows(2).all(|w| w[0] <= w[1]));
        for i in 0..3 {
            for j in 0..4 {
                let x = s.d.get(i, j);
                if i == j && i < s.rank() {
                    prop_assert_eq!(x.valuation().unwrap(), Some(s.exponents[i]));
                } else {
                    prop_assert!(x.is_zero());
                }
            }
        }
    }

    #[test]
    fn smith_exponents_sum_to_det_valuation(a in int_matrix(3, 3)) {
        let d = det(a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect());
        prop_assume!(d != 0);
        let s = smith_normal_form(&Matrix::from_ints(RingSpec::PLocal { p: 3 }, &a)).unwrap();
        prop_assert_eq!(s.exponents.iter().sum::<u32>(), vp(d, 3));
    }

    #[test]
    fn chain_ring_block_homology_matches_brute_force(
        n0 in 0usize..=2, n1 in 1usize..=3, n2 in 0usize..=2,
        d2_entries in prop::collection::vec(0u64..Q, 6),
        picks in prop::collection::vec((any::<prop::sample::Index>(), any::<prop::sample::Index>()), 2),
    ) {
        let d2: Vec<Vec<u64>> = (0..n1).map(|i| (0..n2).map(|j| d2_entries[i * 2 + j]).collect()).collect();
        // Rows of d1 are sums of two left-kernel vectors of d2, so d1 d2 = 0.
        let left_kernel: Vec<Vec<u64>> = vectors(n1)
            .into_iter()
            .filter(|r| (0..n2).all(|j| (0..n1).map(|i| r[i] * d2[i][j]).sum::<u64>() % Q == 0))
            .collect();
        let d1: Vec<Vec<u64>> = picks[..n0]
            .iter()
            .map(|(a, b)| {
                let (x, y) = (a.get(&left_kernel), b.get(&left_kernel));
                x.iter().zip(y).map(|(s, t)| (s + t) % Q).collect()
            })
            .collect();
        let spec = RingSpec::ChainRing { p: 3, n: 2 };
        let h = block_homology(spec, n1, Some(&to_matrix(spec, &d1, n1)), Some(&to_matrix(spec, &d2, n2))).unwrap();
        let profile: Vec<u32> = (0..=2u32)
            .map(|k| k * h.free as u32 + h.torsion.iter().map(|&e| e.min(k)).sum::<u32>())
            .collect();
        prop_assert_eq!(profile, brute_torsion_profile(n1, &d1, &d2, n2));
    }

    #[test]
    fn ce_homology_ignores_basis_order(perm in Just((0..3).collect::<Vec<usize>>()).prop_shuffle()) {
        let g = heisenberg();
        prop_assert_eq!(ce_homology(&shuffled(&g, &perm), 4).unwrap(), ce_homology(&g, 4).unwrap());
    }

    #[test]
    fn free_lie_algebras_satisfy_axioms(gens in generator_list()) {
        let g = free_lie_basis(&module(RingSpec::PLocal { p: 3 }, &gens), 4).unwrap();
        prop_assert!(g.check_axioms().is_ok());
        prop_assert!(ce_complex(&g, 4).unwrap().verify().is_ok());
    }

    #[test]
    fn free_lie_homology_is_generators(gens in generator_list()) {
        // H_1 of a free Lie algebra is its generators and H_n = 0 above.
        let g = free_lie_basis(&module(RingSpec::PLocal { p: 3 }, &gens), 4).unwrap();
        let h = ce_homology(&g, 4).unwrap();
        let mut h1 = 0;
        for (&(n, _, w), grp) in &h.entries {
            prop_assert!(grp.torsion.is_empty());
            if w == 0 { continue; }
            prop_assert_eq!(n, 1);
            h1 += grp.free;
        }
        prop_assert_eq!(h1, gens.iter().filter(|g| g.2 <= 4).count());
    }

    #[test]
    fn koszul_sign_symmetric(i in -6i64..6, j in -6i64..6) {
        prop_assert_eq!(koszul_sign(i, j), koszul_sign(j, i));
        prop_assert_eq!(koszul_sign(i, j) == -1, i.rem_euclid(2) == 1 && j.rem_euclid(2) == 1);
    }

    #[test]
    fn symmetry_is_an_involution(a in generator_list(), b in generator_list()) {
        let spec = RingSpec::PLocal { p: 5 };
        let (m, n) = (module(spec, &a), module(spec, &b));
        let there = symmetry(&m, &n).unwrap();
        let back = symmetry(&n, &m).unwrap();
        let round = back.compose(&there).unwrap();
        prop_assert_eq!(round.matrix.to_dense(), Matrix::identity(m.rank() * n.rank(), spec).to_dense());
    }

    #[test]
    fn chain_ring_arithmetic(a in -100i64..100, b in -100i64..100, c in -100i64..100) {
        let spec = RingSpec::ChainRing { p: 3, n: 3 };
        let (x, y, z) = (spec.from_i64(a), spec.from_i64(b), spec.from_i64(c));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        prop_assert_eq!(x.add(&x.neg()), spec.zero());
        let expect = (a * b).rem_euclid(27);
        prop_assert_eq!(x.mul(&y), spec.from_i64(expect));
    }

    #[test]
    fn p_local_valuation_is_additive(a in 1i64..500, b in 1i64..500) {
        let spec = RingSpec::PLocal { p: 3 };
        let (x, y): (Scalar, Scalar) = (spec.from_i64(a), spec.from_i64(b));
        let v = |s: &Scalar| s.valuation().unwrap().unwrap();
        prop_assert_eq!(v(&x.mul(&y)), v(&x) + v(&y));
        prop_assert_eq!(v(&x), vp(a as i128, 3));
    }
}
