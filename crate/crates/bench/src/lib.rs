//! Benchmark fixtures shared by the criterion targets.

use symdyn_core::{Algebra, Alphabet, ShiftPresentation, Side};

/// The one-sided test systems by name.
pub fn systems() -> Vec<(&'static str, Algebra)> {
    let alg = |p| Algebra::from_presentation(p).expect("valid presentation");
    vec![
        ("golden", alg(ShiftPresentation::golden_mean(Side::OneSided))),
        ("upper-triangular", alg(ShiftPresentation::upper_triangular(Side::OneSided))),
        ("full", alg(ShiftPresentation::full_shift(Alphabet::ab(), Side::OneSided))),
        ("fibonacci", alg(ShiftPresentation::fibonacci(Side::OneSided))),
    ]
}
