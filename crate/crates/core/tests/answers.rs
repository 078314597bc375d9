//! Assembled weight-p answers against their closed forms.

use hecke_core::hecke::{euclidean_algebra, surface_algebra, WeightPOpModel};
use hecke_core::specseq::{apply_assertions, assemble, closed_form_euclidean, closed_form_euclidean_e2, e2_page, euclidean_assertions, surface_assertions, surface_bettis};

#[test]
fn euclidean_grid() {
    for p in [3u64, 5] {
        let model = WeightPOpModel::height1(p).unwrap();
        for n in 1..=4 {
            for k in -1..=2 {
                let g = euclidean_algebra(n, k, &model).unwrap();
                let einf = apply_assertions(&e2_page(&g, p as u32).unwrap(), &euclidean_assertions(k, p)).unwrap();
                let got = assemble(&einf).unwrap().weight(p as u32);
                assert_eq!(got, closed_form_euclidean(n, k, p).evaluate(&model).unwrap(), "n={n} k={k} p={p}");
            }
        }
    }
}

#[test]
fn surfaces_are_torsion_free_with_binomial_ranks() {
    for (genus, p) in [(0u32, 3u64), (1, 3), (2, 3), (1, 5)] {
        let model = WeightPOpModel::height1(p).unwrap();
        let g = surface_algebra(genus, &model).unwrap();
        let einf = apply_assertions(&e2_page(&g, p as u32).unwrap(), &surface_assertions(p)).unwrap();
        let got = assemble(&einf).unwrap().weight(p as u32);
        assert!(got.entries.values().all(|h| h.torsion.is_empty()), "genus {genus} p={p}");
        let ranks = got.free_ranks(p as u32);
        let bettis = surface_bettis(genus, p);
        for (i, b) in bettis.iter().enumerate() {
            assert_eq!(ranks.get(&(i as i64)).copied().unwrap_or(0) as u64, *b, "genus {genus} p={p} degree {i}");
        }
    }
}

#[test]
fn euclidean_e2_grid() {
    for p in [3u64, 5] {
        let model = WeightPOpModel::height1(p).unwrap();
        for n in 1..=4 {
            for k in -1..=2 {
                let page = e2_page(&euclidean_algebra(n, k, &model).unwrap(), p as u32).unwrap();
                assert_eq!(page.weight(p as u32).entries, closed_form_euclidean_e2(n, k, p).entries, "n={n} k={k} p={p}");
            }
        }
    }
}
