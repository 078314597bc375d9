//! Engine-versus-closed-form checks. `compare` runs these; the acceptance
//! test target runs them too.

use std::collections::BTreeMap;

use hecke_core::chain::{HomologyGroup, HomologySummary};
use hecke_core::coeff::{cokernel_length, smith_exponents, Matrix};
use hecke_core::fgl::{euler_poly, honda_pseries};
use hecke_core::hecke::{atomic_algebra, euclidean_algebra, hecke_ce_complex, hecke_homology, surface_algebra, WeightPOpModel};
use hecke_core::lie::{ce_complex, ce_homology, free_lie_basis, lie_homology_via_bar, GradedLieAlgebra};
use hecke_core::specseq::{
    apply_assertions, assemble, closed_form_euclidean, closed_form_euclidean_e2, closed_form_surface_betti, companion_over_base,
    e2_page, e2_page_cohomological, euclidean_assertions, fp_surface_homology, kh_euclidean_total, kh_multiplicity, reduce_poly,
    surface_assertions, torus_betti, zhu_quartic,
};
use hecke_core::wgmod::{koszul_sign, symmetry};
use hecke_core::{BasisElem, FreeWGModule, RingSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Check = std::result::Result<(), String>;

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: u8,
    pub name: &'static str,
    pub result: Check,
}

impl Outcome {
    pub fn line(&self) -> String {
        match &self.result {
            Ok(()) => format!("criterion {}: PASS  {}", self.id, self.name),
            Err(e) => format!("criterion {}: FAIL  {}: {e}", self.id, self.name),
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn free(n: usize) -> HomologyGroup {
    HomologyGroup { free: n, torsion: Vec::new() }
}

/// Exterior or divided-power algebra on `x`, plus the torsion class of `y`.
fn expected_atomic(a: i64, n: u32, w: u32, p: u64) -> HomologySummary {
    let mut s = HomologySummary::default();
    s.insert(0, 0, 0, free(1));
    let top = if a.rem_euclid(2) == 0 { 1 } else { p as i64 };
    for j in 1..=top {
        s.insert(j, j * a, j as u32 * w, free(1));
    }
    let e = if a.rem_euclid(2) == 0 { n / 2 } else { n.div_ceil(2) };
    if e > 0 {
        s.insert(1, a - 1, p as u32 * w, HomologyGroup { free: 0, torsion: vec![e] });
    }
    s
}

pub fn atomic_homology() -> Check {
    for p in [3u64, 5] {
        let model = WeightPOpModel::height1(p).map_err(err)?;
        for a in -2..=2 {
            for n in 1..=6 {
                for w in 1..=2 {
                    let got = hecke_homology(&atomic_algebra(a, n, w, &model).map_err(err)?, p as u32 * w).map_err(err)?;
                    let want = expected_atomic(a, n, w, p);
                    ensure(got == want, || format!("atomic (a={a}, n={n}, w={w}) at p={p}: got {got:?}"))?;
                }
            }
        }
    }
    Ok(())
}

pub fn euclidean_e2() -> Check {
    let p = 3;
    let model = WeightPOpModel::height1(p).map_err(err)?;
    let lines = [0, (p as i64 - 1) / 2, p as i64 - 2, p as i64 - 1];
    for n in 1..=5 {
        for k in -1..=2 {
            let e2 = e2_page(&euclidean_algebra(n, k, &model).map_err(err)?, p as u32).map_err(err)?.weight(p as u32);
            ensure(e2.lines().iter().all(|s| lines.contains(s)), || format!("(n={n}, k={k}) support {:?}", e2.lines()))?;
            let want = closed_form_euclidean_e2(n, k, p);
            ensure(e2 == want, || format!("(n={n}, k={k}) E2 {:?} vs {:?}", e2.entries, want.entries))?;
        }
    }
    Ok(())
}

pub fn euclidean_final() -> Check {
    let p = 3;
    let model = WeightPOpModel::height1(p).map_err(err)?;
    for n in 1..=5 {
        for k in -1..=2 {
            let e2 = e2_page(&euclidean_algebra(n, k, &model).map_err(err)?, p as u32).map_err(err)?;
            let einf = apply_assertions(&e2, &euclidean_assertions(k, p)).map_err(err)?;
            let got = assemble(&einf).map_err(err)?.weight(p as u32);
            let want = closed_form_euclidean(n, k, p).evaluate(&model).map_err(err)?;
            ensure(got == want, || format!("(n={n}, k={k}) {} vs {}", got.render(p as u32, p), want.render(p as u32, p)))?;
        }
    }
    Ok(())
}

/// The weight-`p` model of the height-`h` Honda formal group over `F_p`.
pub fn honda_model(p: u64, h: u32) -> hecke_core::Result<WeightPOpModel> {
    let ps = honda_pseries(p, h)?;
    WeightPOpModel::from_euler_poly(ps.spec(), &euler_poly(&ps, h)?)
}

pub fn honda_heights() -> Check {
    let p = 3;
    for h in 1..=3 {
        let model = honda_model(p, h).map_err(err)?;
        for m in 0..=5 {
            let len = cokernel_length(&model.euler_power(m)).map_err(err)?;
            let want = kh_multiplicity(p, h, m);
            ensure(len == want, || format!("h={h}: coker(e^{m}) has length {len}, expected {want}"))?;
        }
    }
    let model = honda_model(p, 3).map_err(err)?;
    for m in 1..=4u32 {
        let e2 = e2_page(&euclidean_algebra(2 * m, 1, &model).map_err(err)?, p as u32).map_err(err)?.weight(p as u32);
        let total = e2.total_free() + e2.torsion_classes().len();
        ensure(total as u32 == 2 * m, || format!("(n={}, k=1): total dimension {total}, expected {}", 2 * m, 2 * m))?;
        ensure(kh_euclidean_total(2 * m, 1, p, 3) == 2 * m as u64, || "closed-form K(h) total".into())?;
    }
    Ok(())
}

fn power(a: &Matrix, k: u32) -> Matrix {
    let mut out = Matrix::identity(a.nrows, a.spec);
    for _ in 0..k {
        out = a.mul(&out);
    }
    out
}

pub fn zhu_height_two() -> Check {
    let p = 3;
    let field = RingSpec::ChainRing { p, n: 1 };
    let ps = honda_pseries(p, 2).map_err(err)?;
    let f = euler_poly(&ps, 2).map_err(err)?;
    let zhu_ring = RingSpec::TruncPoly { p, n: 1, m: 1 };
    let g = zhu_quartic(zhu_ring).map_err(err)?;
    let reduced = reduce_poly(&g, field).map_err(err)?;
    ensure(reduced == f, || format!("Zhu quartic reduces to {reduced:?}, f is {f:?}"))?;
    let e_model = WeightPOpModel::from_euler_poly(field, &f).map_err(err)?;
    let alpha = companion_over_base(zhu_ring, &g).map_err(err)?;
    for n in 0..=5 {
        let a = cokernel_length(&e_model.euler_power(n)).map_err(err)?;
        let b = cokernel_length(&power(&alpha, n)).map_err(err)?;
        ensure(a == b, || format!("n={n}: |coker e^n| = 3^{a}, |coker alpha^n| = 3^{b}"))?;
    }
    Ok(())
}

pub fn surfaces() -> Check {
    for p in [3u64, 5] {
        let model = WeightPOpModel::height1(p).map_err(err)?;
        for genus in 0..=2 {
            let g = surface_algebra(genus, &model).map_err(err)?;
            let w = p as u32;
            let co = e2_page_cohomological(&g, w).map_err(err)?.weight(w);
            let tors = co.torsion_classes();
            ensure(tors.len() == 1 && tors[0].0 .0 == 1 && tors[0].1 == 1, || format!("g={genus}, p={p}: cohomological torsion {tors:?}"))?;
            let e2 = e2_page(&g, w).map_err(err)?;
            let einf = apply_assertions(&e2, &surface_assertions(p)).map_err(err)?;
            ensure(einf.weight(w).torsion_classes().is_empty(), || format!("g={genus}, p={p}: torsion survives"))?;
            ensure(einf.free_part().entries == e2.free_part().entries, || format!("g={genus}, p={p}: free part changed"))?;
            let ranks = assemble(&einf).map_err(err)?.free_ranks(w);
            let want: BTreeMap<i64, usize> = (0..=w)
                .map(|i| (i as i64, closed_form_surface_betti(genus, p, i) as usize))
                .filter(|(_, b)| *b > 0)
                .collect();
            ensure(ranks == want, || format!("g={genus}, p={p}: ranks {ranks:?}, expected {want:?}"))?;
            if genus == 1 {
                for i in 0..=w {
                    ensure(want.get(&(i as i64)).copied().unwrap_or(0) as u64 == torus_betti(p, i), || format!("torus beta_{i} at p={p}"))?;
                }
            }
        }
    }
    Ok(())
}

pub fn fp_totals() -> Check {
    let (even, odd) = fp_surface_homology(1, 3);
    ensure((even, odd) == (5, 6), || format!("(g, p) = (1, 3): totals ({even}, {odd})"))?;
    // the same totals from the engine's final page
    let model = WeightPOpModel::height1(3).map_err(err)?;
    let g = surface_algebra(1, &model).map_err(err)?;
    let einf = apply_assertions(&e2_page(&g, 3).map_err(err)?, &surface_assertions(3)).map_err(err)?;
    let ranks = assemble(&einf).map_err(err)?.free_ranks(3);
    let engine_even: usize = ranks.iter().filter(|(d, _)| d.rem_euclid(2) == 0 && **d < 3).map(|(_, r)| r).sum();
    let engine_odd: usize = ranks.iter().filter(|(d, _)| d.rem_euclid(2) == 1).map(|(_, r)| r).sum();
    ensure((engine_even, engine_odd) == (5, 6), || format!("engine totals ({engine_even}, {engine_odd})"))
}

fn module(p: u64, elems: &[(&str, i64, u32)]) -> FreeWGModule {
    FreeWGModule::new(RingSpec::PLocal { p }, elems.iter().map(|(n, d, w)| BasisElem::new(*n, *d, *w)).collect()).expect("valid module")
}

/// Lie algebras the CE and bar computations are compared on, with the
/// weight bound used for each.
pub fn lie_corpus() -> Vec<(&'static str, GradedLieAlgebra, u32)> {
    let heis = module(3, &[("a", 0, 1), ("b", 0, 1), ("c", 0, 2)]);
    let one = heis.spec().one();
    let heisenberg = GradedLieAlgebra::new(heis, vec![(0, 1, vec![(2, one)])]).expect("Heisenberg");
    let surf = module(3, &[("cx", -1, 1), ("ax", 0, 1), ("bx", 0, 1), ("cxt", 0, 2), ("axt", 1, 2), ("bxt", 1, 2)]);
    let neg = surf.spec().from_i64(-1);
    let surface = GradedLieAlgebra::new(surf, vec![(1, 2, vec![(3, neg)])]).expect("surface");
    vec![
        ("abelian", GradedLieAlgebra::abelian(module(3, &[("u", 0, 1), ("v", 1, 1), ("z", -1, 2)])), 6),
        ("heisenberg", heisenberg, 6),
        ("free odd", free_lie_basis(&module(3, &[("x", 1, 1)]), 6).expect("free"), 6),
        ("free even", free_lie_basis(&module(5, &[("x", 0, 1), ("y", 2, 2)]), 6).expect("free"), 6),
        ("free mixed", free_lie_basis(&module(3, &[("a", 0, 1), ("b", 1, 1)]), 6).expect("free"), 6),
        ("surface genus 1", surface, 5),
    ]
}

fn rank_over_q(a: &Matrix) -> usize {
    // fraction-free elimination over the integers
    use num_bigint::BigInt;
    use num_traits::Zero;
    let mut m: Vec<Vec<BigInt>> = a.to_dense().iter().map(|r| r.iter().map(|x| x.to_bigint().expect("integral entries")).collect()).collect();
    let (rows, cols) = (a.nrows, a.ncols);
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(piv) = (rank..rows).find(|&r| !m[r][c].is_zero()) else { continue };
        m.swap(rank, piv);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                m[r][j] = (&m[rank][c] * &m[r][j] - &m[r][c] * &m[rank][j]) / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

fn rank_mod_p(a: &Matrix, p: i64) -> usize {
    let mut m: Vec<Vec<i64>> = a
        .to_dense()
        .iter()
        .map(|r| r.iter().map(|x| i64::try_from(x.to_bigint().expect("integral")).unwrap().rem_euclid(p)).collect())
        .collect();
    let mut rank = 0;
    for c in 0..a.ncols {
        let Some(piv) = (rank..a.nrows).find(|&r| m[r][c] != 0) else { continue };
        m.swap(rank, piv);
        let inv = (1..p).find(|x| x * m[rank][c] % p == 1).unwrap();
        for r in 0..a.nrows {
            if r != rank && m[r][c] != 0 {
                let f = m[r][c] * inv % p;
                for j in 0..a.ncols {
                    m[r][j] = (m[r][j] - f * m[rank][j]).rem_euclid(p);
                }
            }
        }
        rank += 1;
    }
    rank
}

fn snf_against_ranks() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for trial in 0..200 {
        let p = [3u64, 5][trial % 2];
        let (r, c) = (rng.random_range(1..7), rng.random_range(1..7));
        let dense: Vec<Vec<i64>> = (0..r)
            .map(|_| (0..c).map(|_| if rng.random_bool(0.4) { 0 } else { rng.random_range(-9..10) }).collect())
            .collect();
        let a = Matrix::from_ints(RingSpec::PLocal { p }, &dense);
        let e = smith_exponents(&a).map_err(err)?;
        ensure(e.len() == rank_over_q(&a), || format!("trial {trial}: rational rank of {dense:?}"))?;
        let units = e.iter().filter(|&&x| x == 0).count();
        ensure(units == rank_mod_p(&a, p as i64), || format!("trial {trial}: rank mod {p} of {dense:?}"))?;
        // over Z/p^2, invariants are the local ones capped at 2
        let b = Matrix::from_ints(RingSpec::ChainRing { p, n: 2 }, &dense);
        let capped: Vec<u32> = e.iter().copied().filter(|&x| x < 2).collect();
        ensure(smith_exponents(&b).map_err(err)? == capped, || format!("trial {trial}: Z/{p}^2 invariants of {dense:?}"))?;
    }
    Ok(())
}

fn sign_separation() -> Check {
    for (i, j, s) in [(0, 0, 1), (1, 0, 1), (1, 1, -1), (3, 5, -1), (2, 7, 1), (-1, -1, -1)] {
        ensure(koszul_sign(i, j) == s, || format!("koszul_sign({i}, {j})"))?;
    }
    // equal degrees, weights of both parities: the symmetry sign ignores weight
    let m = module(3, &[("a", 1, 1), ("b", 1, 2), ("c", 2, 3)]);
    let n = module(3, &[("u", 1, 4), ("v", 1, 1)]);
    let tau = symmetry(&m, &n).map_err(err)?;
    for (i, row) in tau.matrix.to_dense().iter().enumerate() {
        for x in row.iter().filter(|x| !x.is_zero()) {
            let (b, a) = (i / m.rank(), i % m.rank());
            let want = koszul_sign(m.degree(a), n.degree(b));
            ensure(*x == m.spec().from_i64(want), || format!("symmetry entry for ({a}, {b})"))?;
        }
    }
    // CE of an abelian generator depends on its degree, not its weight
    for d in [-1i64, 0, 1, 2] {
        let h1 = ce_homology(&GradedLieAlgebra::abelian(module(3, &[("x", d, 1)])), 4).map_err(err)?;
        let h2 = ce_homology(&GradedLieAlgebra::abelian(module(3, &[("x", d, 2)])), 8).map_err(err)?;
        let rescaled: BTreeMap<_, _> = h1.entries.iter().map(|(&(n, i, w), g)| ((n, i, 2 * w), g.clone())).collect();
        ensure(h2.entries == rescaled, || format!("degree {d}: weight parity changed CE homology"))?;
    }
    Ok(())
}

fn determinism() -> Check {
    let model = WeightPOpModel::height1(3).map_err(err)?;
    let g = surface_algebra(1, &model).map_err(err)?;
    let run = |threads: &str| -> std::result::Result<String, String> {
        std::env::set_var("HECKE_CE_THREADS", threads);
        let h = hecke_homology(&g, 3).map_err(err)?;
        serde_json::to_string(&h).map_err(err)
    };
    let a = run("1")?;
    let b = run("4")?;
    let c = run("4")?;
    std::env::remove_var("HECKE_CE_THREADS");
    ensure(a == b && b == c, || "homology JSON differs between runs".into())?;
    let j1 = serde_json::to_string(&g.to_json_value()).map_err(err)?;
    let j2 = serde_json::to_string(&surface_algebra(1, &model).map_err(err)?.to_json_value()).map_err(err)?;
    ensure(j1 == j2, || "algebra JSON differs between builds".into())
}

fn d_squared_on_builders() -> Check {
    for p in [3u64, 5] {
        let model = WeightPOpModel::height1(p).map_err(err)?;
        for a in -2..=2 {
            hecke_ce_complex(&atomic_algebra(a, 3, 1, &model).map_err(err)?, p as u32).map_err(err)?.verify().map_err(err)?;
        }
        for n in 1..=5 {
            for k in -1..=2 {
                hecke_ce_complex(&euclidean_algebra(n, k, &model).map_err(err)?, p as u32).map_err(err)?.verify().map_err(err)?;
            }
        }
        for genus in 0..=2 {
            hecke_ce_complex(&surface_algebra(genus, &model).map_err(err)?, p as u32).map_err(err)?.verify().map_err(err)?;
        }
    }
    for (name, g, w) in lie_corpus() {
        ce_complex(&g, w).map_err(err)?.verify().map_err(|e| format!("{name}: {e}"))?;
    }
    Ok(())
}

fn ce_against_bar() -> Check {
    for (name, g, w) in lie_corpus() {
        let ce = ce_homology(&g, w).map_err(err)?;
        let bar = lie_homology_via_bar(&g, w).map_err(err)?;
        ensure(ce == bar, || format!("{name}: CE {ce:?} vs bar {bar:?}"))?;
    }
    Ok(())
}

pub fn properties() -> Check {
    d_squared_on_builders().map_err(|e| format!("d^2: {e}"))?;
    snf_against_ranks().map_err(|e| format!("SNF: {e}"))?;
    sign_separation().map_err(|e| format!("signs: {e}"))?;
    determinism().map_err(|e| format!("determinism: {e}"))?;
    ce_against_bar().map_err(|e| format!("CE vs bar: {e}"))
}

pub const CRITERIA: [(u8, &str, fn() -> Check); 8] = [
    (1, "atomic homology", atomic_homology),
    (2, "Euclidean E2 pages", euclidean_e2),
    (3, "Euclidean final answers", euclidean_final),
    (4, "Honda models and K(h) multiplicities", honda_heights),
    (5, "height-2 Zhu consistency", zhu_height_two),
    (6, "punctured surfaces", surfaces),
    (7, "F_p totals", fp_totals),
    (8, "property suites", properties),
];

pub fn run(id: u8) -> Outcome {
    let (id, name, f) = CRITERIA[(id - 1) as usize];
    Outcome { id, name, result: f() }
}
