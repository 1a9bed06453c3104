//! Deterministic fixtures shared by the benchmarks.

use intellistate::{make_pair, AlgebraKind, ComplexSquareMatrix, ObservablePair, PairSelector, Parity, Spin, C64};

/// Dense non-Hermitian matrix with entries of order one, no randomness.
pub fn generic_matrix(dim: usize) -> ComplexSquareMatrix {
    ComplexSquareMatrix::from_fn(dim, |i, j| {
        let t = (i * dim + j) as f64;
        C64::new((0.37 * t).sin(), (0.11 * t + 0.5).cos()) / (dim as f64).sqrt()
    })
}

pub fn spin_pair(j: f64, selector: PairSelector) -> ObservablePair {
    make_pair(AlgebraKind::Su2Spin(Spin::new(j).expect("valid spin")), selector).expect("su(2) pair")
}

pub fn single_mode_pair(cutoff: usize, selector: PairSelector) -> ObservablePair {
    make_pair(
        AlgebraKind::Su11SingleMode {
            parity: Parity::Even,
            cutoff,
        },
        selector,
    )
    .expect("su(1,1) pair")
}
