//! Metric-Diophantine machinery: envelope functions, the truncated
//! convergence/divergence series, interval-union measures for the
//! approximation sets, overlap diagnostics, and the D(N, M) counting
//! statistic.

pub mod envelope;
pub mod intervals;
pub mod overlap;
pub mod series;

pub use envelope::{eval_envelope, ford_c, Envelope};
pub use intervals::{build_s, dyadic_to_rational, rational_to_f64, IntervalUnion};
pub use overlap::{chung_erdos_check, overlap_diagnostics, ChungErdosReport, OverlapDiagnostics};
pub use series::{catlin_series_partial, occurrence_series_partial, DecayFamily};

use crate::numtheory::{torus_norm, AlphaFixed};

/// D(N, M): the number of listed differences z with ‖z·α‖ ≤ 1/(2M).
///
/// Averaged over α this is (number of terms)/M, which the Monte Carlo
/// harness checks. Callers pass the canonical z-enumeration prefix.
pub fn d_statistic(zs: &[u64], m_param: f64, alpha: AlphaFixed) -> u64 {
    assert!(m_param > 0.0, "d_statistic needs M > 0");
    // ||z alpha|| <= 1/(2M) in bits: threshold = 2^64/(2M), saturating
    // (every torus norm is <= 2^63, so saturation means "count all").
    let threshold = (18446744073709551616.0 / (2.0 * m_param)) as u64;
    zs.iter()
        .filter(|&&z| torus_norm(z, alpha).bits <= threshold)
        .count() as u64
}
