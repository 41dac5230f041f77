//! Shared fixtures for the benchmarks.

use cantor_evt::Params;

/// Parameter pairs exercised by every benchmark.
pub fn bench_params() -> Vec<(&'static str, Params)> {
    vec![
        ("b1_3_p1_2", Params::ratio(1, 3, 0.5).expect("valid")),
        ("b2_5_p1_4", Params::ratio(2, 5, 0.25).expect("valid")),
        ("b1_2_p3_4", Params::ratio(1, 2, 0.75).expect("valid")),
    ]
}
