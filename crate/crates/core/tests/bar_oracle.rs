//! Chevalley-Eilenberg homology against the bar construction, computed by
//! normalizing the simplicial bar object and taking total homology.

use hecke_core::lie::{ce_complex, ce_homology, free_lie_basis, lie_homology_via_bar, GradedLieAlgebra};
use hecke_core::{BasisElem, FreeWGModule, RingSpec};

fn module(spec: RingSpec, elems: &[(&str, i64, u32)]) -> FreeWGModule {
    FreeWGModule::new(spec, elems.iter().map(|(n, d, w)| BasisElem::new(*n, *d, *w)).collect()).unwrap()
}

fn agree(g: &GradedLieAlgebra, max_weight: u32) {
    ce_complex(g, max_weight).unwrap().verify().unwrap();
    for w in 1..=max_weight {
        let ce = ce_homology(g, w).unwrap();
        let bar = lie_homology_via_bar(g, w).unwrap();
        assert_eq!(ce, bar, "weight {w}");
    }
}

#[test]
fn abelian_even_and_odd() {
    let m = module(RingSpec::PLocal { p: 3 }, &[("a", 0, 1), ("b", 1, 1), ("c", 2, 2)]);
    agree(&GradedLieAlgebra::abelian(m), 4);
}

#[test]
fn heisenberg() {
    let m = module(RingSpec::PLocal { p: 3 }, &[("a", 0, 1), ("b", 0, 1), ("c", 0, 2)]);
    let one = m.spec().one();
    agree(&GradedLieAlgebra::new(m, vec![(0, 1, vec![(2, one)])]).unwrap(), 4);
}

#[test]
fn free_on_odd_generator() {
    let m = module(RingSpec::PLocal { p: 3 }, &[("x", 1, 1)]);
    agree(&free_lie_basis(&m, 5).unwrap(), 5);
}

#[test]
fn free_on_mixed_generators() {
    let m = module(RingSpec::PLocal { p: 3 }, &[("a", 0, 1), ("b", 1, 1)]);
    agree(&free_lie_basis(&m, 4).unwrap(), 4);
}

#[test]
fn free_over_chain_ring() {
    let m = module(RingSpec::ChainRing { p: 3, n: 2 }, &[("x", 1, 1), ("y", 0, 2)]);
    agree(&free_lie_basis(&m, 4).unwrap(), 4);
}

#[test]
fn surface_genus_one_lie_part() {
    let m = module(
        RingSpec::PLocal { p: 3 },
        &[("cx", -1, 1), ("ax", 0, 1), ("bx", 0, 1), ("cxt", 0, 2), ("axt", 1, 2), ("bxt", 1, 2)],
    );
    let neg = m.spec().from_i64(-1);
    agree(&GradedLieAlgebra::new(m, vec![(1, 2, vec![(3, neg)])]).unwrap(), 4);
}
