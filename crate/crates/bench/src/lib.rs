//! Fixtures shared by the benchmarks.

use hecke_core::lie::{free_lie_basis, GradedLieAlgebra};
use hecke_core::{BasisElem, FreeWGModule, Matrix, RingSpec};

/// A dense `n x n` integer matrix with a fixed, irregular pattern of
/// entries and p-adic valuations.
pub fn patterned_matrix(spec: RingSpec, n: usize) -> Matrix {
    let dense: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| ((i * 7 + j * 13 + i * j) % 19) as i64 - 9).collect()).collect();
    Matrix::from_ints(spec, &dense)
}

pub fn module(spec: RingSpec, elems: &[(&str, i64, u32)]) -> FreeWGModule {
    FreeWGModule::new(spec, elems.iter().map(|(n, d, w)| BasisElem::new(*n, *d, *w)).collect()).unwrap()
}

/// Free Lie algebra on one even and one odd weight-one generator.
pub fn mixed_free(max_weight: u32) -> GradedLieAlgebra {
    free_lie_basis(&module(RingSpec::PLocal { p: 3 }, &[("a", 0, 1), ("b", 1, 1)]), max_weight).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_build() {
        assert_eq!(patterned_matrix(RingSpec::PLocal { p: 3 }, 4).nrows, 4);
        assert!(mixed_free(3).rank() > 2);
    }
}
