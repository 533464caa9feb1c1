//! Fixtures shared by the benchmarks.

use sturmjsr::{Matrix2, MatrixPair, Surd};

pub fn paper_pair() -> MatrixPair<Surd> {
    MatrixPair::new(
        Matrix2::from_ratios([(5, 8), (3, 112), (7, 8), (15, 16)]),
        Matrix2::from_ratios([(15, 16), (1, 1), (1, 128), (7, 8)]),
    )
}
