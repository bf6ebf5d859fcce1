//! Python bindings for the gapslab core: sequences, exact difference-set
//! statistics, minimal-gap trajectories, approximation-set measures,
//! envelopes, and billiard spectra.
//!
//! Dilation factors cross the boundary as their 64 fractional bits (a
//! Python int), so the exact dyadic semantics survive the FFI; values
//! returned for plotting are plain floats.

use std::collections::HashMap;

use pyo3::exceptions::{PyOverflowError, PyValueError};
use pyo3::prelude::*;

use gapslab::billiard;
use gapslab::diffstats;
use gapslab::error::Error;
use gapslab::experiments::rng;
use gapslab::gaps;
use gapslab::metricda;
use gapslab::multtable;
use gapslab::numtheory::{self, AlphaFixed, Dyadic64};
use gapslab::sequences::{IntegerSequence, SequenceSpec};

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Overflow(_) => PyOverflowError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse_spec(spec: &str) -> PyResult<SequenceSpec> {
    spec.parse().map_err(py_err)
}

/// A strictly increasing integer sequence (generator or file-backed).
#[pyclass]
struct Sequence {
    inner: IntegerSequence,
    spec: String,
}

#[pymethods]
impl Sequence {
    /// Specs: natural | squares | primes | quadratic:a,b,c |
    /// geometric:ratio,first | ps:p/q | file:path
    #[new]
    fn new(spec: &str) -> PyResult<Self> {
        Ok(Sequence {
            inner: IntegerSequence::new(parse_spec(spec)?).map_err(py_err)?,
            spec: spec.to_string(),
        })
    }

    fn prefix(&mut self, n: usize) -> PyResult<Vec<u64>> {
        Ok(self.inner.prefix(n).map_err(py_err)?.to_vec())
    }

    /// (c_plus, c_full, energy) of the length-n truncation, exact.
    fn diff_summary(&mut self, n: usize) -> PyResult<(u64, u64, u128)> {
        let s = diffstats::diff_summary(&mut self.inner, n).map_err(py_err)?;
        Ok((s.c_plus, s.c_full, s.energy))
    }

    /// Canonical enumeration of the positive differences up to horizon n_max.
    fn z_enumeration(&mut self, n_max: u32) -> PyResult<Vec<u64>> {
        diffstats::z_enumeration(&mut self.inner, n_max).map_err(py_err)
    }

    /// k -> first truncation length at which k occurs as a difference.
    fn first_occurrence(&mut self, n_max: u32) -> PyResult<HashMap<u64, u32>> {
        let occ = diffstats::first_occurrence(&mut self.inner, n_max).map_err(py_err)?;
        Ok(occ.iter().collect())
    }

    /// C⁺_N for every N = 1..=n_max.
    fn c_plus_trajectory(&mut self, n_max: usize) -> PyResult<Vec<u64>> {
        diffstats::c_plus_trajectory(&mut self.inner, n_max).map_err(py_err)
    }

    /// Minimal-gap trajectory (δ at N = 2..=n_max as floats, degenerate flag).
    fn min_gap_trajectory(&mut self, alpha_bits: u64, n_max: usize) -> PyResult<(Vec<f64>, bool)> {
        let traj = gaps::min_gap_trajectory(&mut self.inner, AlphaFixed::new(alpha_bits), n_max)
            .map_err(py_err)?;
        Ok((traj.deltas.iter().map(|d| d.to_f64()).collect(), traj.degenerate))
    }

    fn __repr__(&self) -> String {
        format!("Sequence({:?})", self.spec)
    }
}

/// Nearest 64-fractional-bit dyadic below 1 for a float in [0, 1).
#[pyfunction]
fn alpha_from_float(x: f64) -> u64 {
    AlphaFixed::from_f64(x).numerator
}

#[pyfunction]
fn alpha_to_float(alpha_bits: u64) -> f64 {
    AlphaFixed::new(alpha_bits).to_f64()
}

/// ‖k·α‖ as a float (the underlying value is an exact dyadic).
#[pyfunction]
fn torus_norm(k: u64, alpha_bits: u64) -> f64 {
    numtheory::torus_norm(k, AlphaFixed::new(alpha_bits)).to_f64()
}

/// ‖k·α‖ as its exact 64 fractional bits.
#[pyfunction]
fn torus_norm_bits(k: u64, alpha_bits: u64) -> u64 {
    numtheory::torus_norm(k, AlphaFixed::new(alpha_bits)).bits
}

#[pyfunction]
fn primes_up_to(x: u64) -> PyResult<Vec<u64>> {
    numtheory::primes_up_to(x).map_err(py_err)
}

/// φ(1), …, φ(x).
#[pyfunction]
fn totient_values(x: u64) -> PyResult<Vec<u64>> {
    let t = numtheory::totient_sieve(x).map_err(py_err)?;
    Ok((1..=x).map(|k| t.phi(k)).collect())
}

#[pyfunction]
fn mertens_product(x: u64) -> PyResult<f64> {
    numtheory::mertens_product(x).map_err(py_err)
}

#[pyfunction]
fn ford_c() -> f64 {
    metricda::ford_c()
}

/// Minimal gap of {a·α mod 1} over the listed values: (delta, degenerate).
#[pyfunction]
fn min_gap(values: Vec<u64>, alpha_bits: u64) -> PyResult<(f64, bool)> {
    if values.len() < 2 {
        return Err(PyValueError::new_err("min_gap needs at least two values"));
    }
    let g = gaps::min_gap_sorted(&values, AlphaFixed::new(alpha_bits));
    Ok((g.delta.to_f64(), g.degenerate))
}

#[pyfunction]
fn gcd_sum(values: Vec<u64>) -> PyResult<f64> {
    if values.is_empty() {
        return Err(PyValueError::new_err("gcd_sum needs a nonempty list"));
    }
    Ok(diffstats::gcd_sum(&values))
}

/// #{z : ‖z·α‖ ≤ 1/(2M)}.
#[pyfunction]
fn d_statistic(zs: Vec<u64>, m: f64, alpha_bits: u64) -> PyResult<u64> {
    if m <= 0.0 {
        return Err(PyValueError::new_err("d_statistic needs M > 0"));
    }
    Ok(metricda::d_statistic(&zs, m, AlphaFixed::new(alpha_bits)))
}

/// Exact Lebesgue measure of S_k (as a float).
#[pyfunction]
fn build_s_measure(k: u64, psi: f64, coprime_only: bool) -> PyResult<f64> {
    if !(0.0..0.5).contains(&psi) {
        return Err(PyValueError::new_err("psi must lie in [0, 1/2)"));
    }
    Ok(metricda::build_s(k, Dyadic64::from_f64(psi), coprime_only).measure_f64())
}

/// Exact measure of S_{k1} ∩ S_{k2} (as a float).
#[pyfunction]
fn s_intersection_measure(k1: u64, psi1: f64, k2: u64, psi2: f64) -> PyResult<f64> {
    for psi in [psi1, psi2] {
        if !(0.0..0.5).contains(&psi) {
            return Err(PyValueError::new_err("psi must lie in [0, 1/2)"));
        }
    }
    let a = metricda::build_s(k1, Dyadic64::from_f64(psi1), false);
    let b = metricda::build_s(k2, Dyadic64::from_f64(psi2), false);
    Ok(a.intersect(&b).measure_f64())
}

fn envelope_by_name(name: &str, epsilon: f64) -> PyResult<metricda::Envelope> {
    use metricda::Envelope as E;
    Ok(match name {
        "th1_lower" => E::Th1Lower { epsilon },
        "th1_upper_sizedep" => E::Th1UpperSizedep,
        "th1_upper_plain" => E::Th1UpperPlain,
        "conj_up" => E::ConjUp { epsilon },
        "all_n" => E::AllN { epsilon },
        "primes_cd" => E::PrimesCd { epsilon },
        "squares_up" => E::SquaresUp,
        "squares_low" => E::SquaresLow { epsilon },
        "billiard_up" => E::BilliardUp,
        "billiard_low" => E::BilliardLow,
        "billiard_up_strong" => E::BilliardUpStrong { epsilon },
        "billiard_low_strong" => E::BilliardLowStrong { epsilon },
        other => return Err(PyValueError::new_err(format!("unknown envelope `{other}`"))),
    })
}

/// Evaluate a named envelope at (N, C_N, a_N).
#[pyfunction]
#[pyo3(signature = (name, n, c_n, a_n=None, epsilon=1.0))]
fn eval_envelope(name: &str, n: u64, c_n: u64, a_n: Option<u64>, epsilon: f64) -> PyResult<f64> {
    metricda::eval_envelope(&envelope_by_name(name, epsilon)?, n, c_n, a_n).map_err(py_err)
}

/// Σ_{k≤K} φ(k)·max_{b≤B} ψ(bk)/(bk) with ψ(k) = k^{-s}.
#[pyfunction]
fn catlin_series_power(s: f64, k_max: u64, b_max: u64) -> PyResult<f64> {
    if s <= 0.0 {
        return Err(PyValueError::new_err("decay exponent must be positive"));
    }
    metricda::catlin_series_partial(|k| (k as f64).powf(-s), k_max, b_max).map_err(py_err)
}

/// First-occurrence series for η(N) = N^{-s} through a sequence's
/// difference sets.
#[pyfunction]
fn occurrence_series_power(seq_spec: &str, s: f64, k_max: u64, b_max: u64, l_max: u32) -> PyResult<f64> {
    if s <= 0.0 {
        return Err(PyValueError::new_err("decay exponent must be positive"));
    }
    let mut seq = IntegerSequence::new(parse_spec(seq_spec)?).map_err(py_err)?;
    let occ = diffstats::first_occurrence(&mut seq, l_max).map_err(py_err)?;
    metricda::occurrence_series_partial(&occ, |n| (n as f64).powf(-s), true, k_max, b_max, l_max)
        .map_err(py_err)
}

#[pyfunction]
fn h_count(x: u64, y: u64, z: u64) -> PyResult<u64> {
    multtable::h_count(&multtable::HQuery { x, y, z }).map_err(py_err)
}

#[pyfunction]
fn table_count(n: u64) -> PyResult<u64> {
    multtable::table_count(n).map_err(py_err)
}

#[pyfunction]
fn square_diff_count(n: u64) -> PyResult<u64> {
    multtable::square_diff_count(n).map_err(py_err)
}

/// Sorted billiard spectrum {α·m² + n² ≤ Λ} as (value, m, n) triples.
#[pyfunction]
fn billiard_spectrum(alpha: f64, lambda: f64) -> PyResult<Vec<(f64, u32, u32)>> {
    let a = billiard::BilliardAlpha::from_f64(alpha).map_err(py_err)?;
    let s = billiard::spectrum(a, billiard::lambda_fp_from_f64(lambda)).map_err(py_err)?;
    Ok(s.entries
        .iter()
        .map(|e| (billiard::fp_to_f64(e.value), e.m, e.n))
        .collect())
}

/// δ_min(N) for N = 1..=n_max of the billiard spectrum.
#[pyfunction]
fn billiard_min_gaps(alpha: f64, n_max: usize) -> PyResult<Vec<f64>> {
    let a = billiard::BilliardAlpha::from_f64(alpha).map_err(py_err)?;
    let traj = billiard::billiard_trajectory(a, n_max).map_err(py_err)?;
    Ok(traj.deltas.iter().map(|&d| billiard::fp_to_f64(d)).collect())
}

/// Odd-numerator dyadic α for (master_seed, trial) — the harness sampler.
#[pyfunction]
fn sample_alpha_bits(master_seed: u64, trial: u64) -> u64 {
    rng::sample_alpha(master_seed, trial).numerator
}

#[pymodule]
fn gapslab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Sequence>()?;
    m.add_function(wrap_pyfunction!(alpha_from_float, m)?)?;
    m.add_function(wrap_pyfunction!(alpha_to_float, m)?)?;
    m.add_function(wrap_pyfunction!(torus_norm, m)?)?;
    m.add_function(wrap_pyfunction!(torus_norm_bits, m)?)?;
    m.add_function(wrap_pyfunction!(primes_up_to, m)?)?;
    m.add_function(wrap_pyfunction!(totient_values, m)?)?;
    m.add_function(wrap_pyfunction!(mertens_product, m)?)?;
    m.add_function(wrap_pyfunction!(ford_c, m)?)?;
    m.add_function(wrap_pyfunction!(min_gap, m)?)?;
    m.add_function(wrap_pyfunction!(gcd_sum, m)?)?;
    m.add_function(wrap_pyfunction!(d_statistic, m)?)?;
    m.add_function(wrap_pyfunction!(build_s_measure, m)?)?;
    m.add_function(wrap_pyfunction!(s_intersection_measure, m)?)?;
    m.add_function(wrap_pyfunction!(eval_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(catlin_series_power, m)?)?;
    m.add_function(wrap_pyfunction!(occurrence_series_power, m)?)?;
    m.add_function(wrap_pyfunction!(h_count, m)?)?;
    m.add_function(wrap_pyfunction!(table_count, m)?)?;
    m.add_function(wrap_pyfunction!(square_diff_count, m)?)?;
    m.add_function(wrap_pyfunction!(billiard_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(billiard_min_gaps, m)?)?;
    m.add_function(wrap_pyfunction!(sample_alpha_bits, m)?)?;
    Ok(())
}
