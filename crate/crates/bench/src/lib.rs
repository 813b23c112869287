//! Shared fixtures for the criterion benchmarks.

use shearchaos::Parameters;

/// Parameter points the benchmarks sweep over: below, near and above the
/// critical noise amplitude for `alpha = 1, b = 2`.
pub fn reference_points() -> [(&'static str, Parameters); 3] {
    [
        (
            "equilibrium",
            Parameters {
                alpha: 1.0,
                b: 2.0,
                sigma: 0.5,
            },
        ),
        (
            "critical",
            Parameters {
                alpha: 1.0,
                b: 2.0,
                sigma: 0.941,
            },
        ),
        (
            "strange",
            Parameters {
                alpha: 1.0,
                b: 2.0,
                sigma: 2.0,
            },
        ),
    ]
}
