//! Joint spectral radius of concave-convex pairs of positive 2×2 matrices,
//! their Sturmian maximizing measures and the devil's staircase of the
//! Sturmian parameter.

pub mod certify;
pub mod classify;
pub mod dynamics;
pub mod error;
pub mod jsr;
pub mod matrix;
pub mod pair_file;
pub mod scalar;
pub mod staircase;
pub mod surd;
pub mod words;

pub use certify::{
    certify, certify_with, delta_extremal, delta_extremal_ratio, delta_numeric, domination_check,
    extremal_plateau_edges, gamma_of_t, phi_extremal, phi_series, thresholds, CertificateReport, CertificateTolerances,
    Regime, ThresholdPair, TransferSeriesConfig, Verdict,
};
pub use classify::{
    classify_matrix, classify_pair, d2_pair, in_class_c, in_class_d, scale_pair, similarity_transform, Convexity,
    InequalityMargins, MatrixClassReport, PairClassReport,
};
pub use dynamics::{InducedSystem, Interval, Itinerary, SturmianIntervalSpec};
pub use error::{Error, Result};
pub use jsr::{
    ergodic_average_f, jsr_bounds, jsr_lower_bruteforce, jsr_upper_norm, sturmian_restricted_max, sturmian_value,
    JsrEstimate, SturmianTable,
};
pub use matrix::{projective_data, spectral_radius, Matrix2, MatrixPair, ProjectiveData};
pub use pair_file::{parse_pair, read_pair};
pub use scalar::{Scalar, Tolerance};
pub use staircase::{
    counterexample_search, parameter_map, parse_target, plateau_bounds, staircase_scan, CounterexampleReport,
    PlateauEstimate, Staircase, StaircaseSample,
};
pub use surd::{Rational, Surd};
pub use words::{
    is_balanced, mechanical_word, orbit_min_max, parameter_from_itinerary, BinaryWord, ParameterBracket,
    RationalParameter,
};
