//! Experiment runners: seeded α-ensembles of minimal-gap trajectories
//! checked against envelopes, with order-independent aggregation, plus the
//! table/series report writer.
//!
//! Determinism contract: per-trial seeds depend only on (master_seed,
//! trial), trial results are collected in trial order, and aggregation is
//! a left fold over that order — so outputs are byte-identical for every
//! worker count.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use crate::billiard::{billiard_trajectory, fp_to_f64};
use crate::diffstats::{c_plus_trajectory, diff_summary, first_occurrence};
use crate::error::{Error, Result};
use crate::gaps::min_gap_trajectory_slice;
use crate::metricda::{catlin_series_partial, eval_envelope, occurrence_series_partial, DecayFamily, Envelope};
use crate::multtable::{ford_ratio, table_count};
use crate::numtheory::clog;
use crate::sequences::IntegerSequence;

use super::config::{
    AggregateReport, AlphaEnvelopeStat, AlphaSummary, BucketStat, EnvelopeAggregate,
    ExperimentConfig, ExperimentKind,
};
use super::rng::{sample_alpha, sample_billiard_alpha};

struct TrialOutcome {
    summary: AlphaSummary,
    /// Per envelope, per dyadic window j: count of N with δ(N) < envelope.
    bucket_violations: Vec<Vec<u64>>,
    /// Per envelope: count of N ≥ n_lower_threshold with δ(N) < envelope.
    tail_violations: Vec<u64>,
}

/// Per-envelope scan of one trajectory. `deltas[i]` is δ at N = first_n + i;
/// `env_vals` is indexed the same way. Returns per-envelope stats, bucket
/// violation counts, and tail violation counts.
fn scan_trajectory(
    deltas: &[f64],
    first_n: u64,
    env_vals: &[Vec<f64>],
    env_labels: &[String],
    cfg: &ExperimentConfig,
) -> (Vec<AlphaEnvelopeStat>, Vec<Vec<u64>>, Vec<u64>) {
    let j_max = cfg.dyadic_window_max;
    let thresh = cfg.n_lower_threshold;
    let mut per_envelope = Vec::with_capacity(env_labels.len());
    let mut bucket_violations = Vec::with_capacity(env_labels.len());
    let mut tail_violations = Vec::with_capacity(env_labels.len());
    for (vals, label) in env_vals.iter().zip(env_labels) {
        let mut hit_mask = 0u64;
        let mut exceed_mask = 0u64;
        let mut last_violation_n = None;
        let mut hit_ge_threshold = false;
        let mut buckets = vec![0u64; j_max as usize + 1];
        let mut tail = 0u64;
        for (i, (&delta, &env)) in deltas.iter().zip(vals).enumerate() {
            let n = first_n + i as u64;
            let j = n.ilog2();
            if delta < env {
                last_violation_n = Some(n);
                if j <= j_max {
                    buckets[j as usize] += 1;
                }
                if n >= thresh {
                    tail += 1;
                }
            }
            if delta <= env {
                if j <= j_max {
                    hit_mask |= 1 << j.min(63);
                }
                if n >= thresh {
                    hit_ge_threshold = true;
                }
            }
            if delta >= env && j <= j_max {
                exceed_mask |= 1 << j.min(63);
            }
        }
        per_envelope.push(AlphaEnvelopeStat {
            envelope: label.clone(),
            last_violation_n,
            windows_hit: hit_mask.count_ones(),
            windows_exceed: exceed_mask.count_ones(),
            hit_ge_threshold,
        });
        bucket_violations.push(buckets);
        tail_violations.push(tail);
    }
    (per_envelope, bucket_violations, tail_violations)
}

fn run_trials<F>(threads: usize, trials: u64, run_one: F) -> Result<Vec<TrialOutcome>>
where
    F: Fn(u64) -> Result<TrialOutcome> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let idx: Vec<u64> = (0..trials).collect();
    pool.install(|| idx.par_iter().map(|&t| run_one(t)).collect())
}

fn aggregate(
    cfg: &ExperimentConfig,
    env_labels: &[String],
    first_n: u64,
    outcomes: Vec<TrialOutcome>,
) -> AggregateReport {
    let trials = outcomes.len() as u64;
    let j_max = cfg.dyadic_window_max;
    let thresh = cfg.n_lower_threshold.max(first_n);
    let n_max = cfg.n_max as u64;
    let tail_pairs_per_alpha = if n_max >= thresh { n_max - thresh + 1 } else { 0 };
    // Window population: how many N in [first_n, n_max] fall in window j.
    let bucket_pairs: Vec<u64> = (0..=j_max)
        .map(|j| {
            let lo = (1u64 << j).max(first_n);
            let hi = ((1u64 << (j + 1)) - 1).min(n_max);
            if hi >= lo {
                (hi - lo + 1) * trials
            } else {
                0
            }
        })
        .collect();

    let mut envelopes = Vec::with_capacity(env_labels.len());
    for (e, label) in env_labels.iter().enumerate() {
        let mut bucket_viol = vec![0u64; j_max as usize + 1];
        let mut tail_viol = 0u64;
        let mut alpha_hits = 0u64;
        let mut alpha_windows = 0u64;
        let mut alpha_exceed = 0u64;
        for o in &outcomes {
            for (j, &v) in o.bucket_violations[e].iter().enumerate() {
                bucket_viol[j] += v;
            }
            tail_viol += o.tail_violations[e];
            let st = &o.summary.per_envelope[e];
            alpha_hits += u64::from(st.hit_ge_threshold);
            alpha_windows += u64::from(st.windows_hit >= cfg.window_hit_min);
            alpha_exceed += u64::from(st.windows_exceed >= 1);
        }
        let pairs = tail_pairs_per_alpha * trials;
        let frac = |num: u64, den: u64| {
            if den > 0 {
                Some(num as f64 / den as f64)
            } else {
                None
            }
        };
        envelopes.push(EnvelopeAggregate {
            envelope: label.clone(),
            pairs_ge_threshold: pairs,
            violations_ge_threshold: tail_viol,
            violation_rate_ge_threshold: frac(tail_viol, pairs),
            bucket_violations: (0..=j_max)
                .map(|j| BucketStat {
                    j,
                    pairs: bucket_pairs[j as usize],
                    violations: bucket_viol[j as usize],
                })
                .collect(),
            alpha_with_hit_ge_threshold: alpha_hits,
            frac_alpha_hit_ge_threshold: frac(alpha_hits, trials),
            alpha_with_window_hits: alpha_windows,
            frac_alpha_window_hits: frac(alpha_windows, trials),
            alpha_with_window_exceed: alpha_exceed,
            frac_alpha_window_exceed: frac(alpha_exceed, trials),
        });
    }
    AggregateReport {
        kind: cfg.kind,
        sequence: cfg.sequence.to_string(),
        n_max: cfg.n_max,
        alpha_trials: trials,
        master_seed: cfg.master_seed,
        epsilon: cfg.epsilon,
        dyadic_window_max: j_max,
        window_hit_min: cfg.window_hit_min,
        n_lower_threshold: cfg.n_lower_threshold,
        envelopes,
        alphas: outcomes.into_iter().map(|o| o.summary).collect(),
    }
}

/// Envelope value tables for a dilated-sequence experiment, one entry per
/// N in 2..=n_max.
fn gap_envelope_tables(
    envs: &[Envelope],
    prefix: &[u64],
    c_plus: &[u64],
) -> Result<Vec<Vec<f64>>> {
    let n_max = prefix.len();
    let mut tables = Vec::with_capacity(envs.len());
    for e in envs {
        let mut vals = Vec::with_capacity(n_max - 1);
        for n in 2..=n_max {
            let c_full = 2 * c_plus[n - 1] + 1;
            vals.push(eval_envelope(e, n as u64, c_full, Some(prefix[n - 1]))?);
        }
        tables.push(vals);
    }
    Ok(tables)
}

/// Monte Carlo over sampled α: minimal-gap trajectories of a dilated
/// integer sequence checked against the selected envelopes.
pub fn run_gap_experiment(cfg: &ExperimentConfig) -> Result<AggregateReport> {
    cfg.validate()?;
    let envs = cfg.effective_envelopes();
    let env_labels: Vec<String> = envs.iter().map(|e| e.to_string()).collect();
    let mut seq = IntegerSequence::new(cfg.sequence.clone())?;
    let prefix = seq.prefix(cfg.n_max)?.to_vec();
    let c_plus = c_plus_trajectory(&mut seq, cfg.n_max)?;
    let env_vals = gap_envelope_tables(&envs, &prefix, &c_plus)?;

    let outcomes = run_trials(cfg.threads, cfg.alpha_trials, |t| {
        let alpha = sample_alpha(cfg.master_seed, t);
        let traj = min_gap_trajectory_slice(&prefix, alpha);
        let deltas: Vec<f64> = traj.deltas.iter().map(|d| d.to_f64()).collect();
        let (per_envelope, bucket_violations, tail_violations) =
            scan_trajectory(&deltas, 2, &env_vals, &env_labels, cfg);
        Ok(TrialOutcome {
            summary: AlphaSummary {
                trial: t,
                alpha_bits: format!("{:016x}", alpha.numerator),
                degenerate: traj.degenerate,
                final_delta: *deltas.last().unwrap_or(&f64::NAN),
                per_envelope,
            },
            bucket_violations,
            tail_violations,
        })
    })?;
    Ok(aggregate(cfg, &env_labels, 2, outcomes))
}

/// Monte Carlo over billiard aspect ratios α ∈ [1, 2]: spectrum gap
/// trajectories against the billiard envelopes.
pub fn run_billiard_experiment(cfg: &ExperimentConfig) -> Result<AggregateReport> {
    cfg.validate()?;
    let envs = cfg.effective_envelopes();
    let env_labels: Vec<String> = envs.iter().map(|e| e.to_string()).collect();
    let mut env_vals = Vec::with_capacity(envs.len());
    for e in &envs {
        let mut vals = Vec::with_capacity(cfg.n_max);
        for n in 1..=cfg.n_max {
            vals.push(eval_envelope(e, n as u64, 1, None)?);
        }
        env_vals.push(vals);
    }

    let outcomes = run_trials(cfg.threads, cfg.alpha_trials, |t| {
        let alpha = sample_billiard_alpha(cfg.master_seed, t);
        let traj = billiard_trajectory(alpha, cfg.n_max)?;
        let deltas: Vec<f64> = traj.deltas.iter().map(|&d| fp_to_f64(d)).collect();
        let (per_envelope, bucket_violations, tail_violations) =
            scan_trajectory(&deltas, 1, &env_vals, &env_labels, cfg);
        Ok(TrialOutcome {
            summary: AlphaSummary {
                trial: t,
                alpha_bits: format!("{:032x}", alpha.fp),
                degenerate: false,
                final_delta: *deltas.last().unwrap_or(&f64::NAN),
                per_envelope,
            },
            bucket_violations,
            tail_violations,
        })
    })?;
    Ok(aggregate(cfg, &env_labels, 1, outcomes))
}

fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// report.json + alpha_summary.csv under cfg.out_dir.
pub fn write_experiment_outputs(
    report: &AggregateReport,
    cfg: &ExperimentConfig,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(&cfg.out_dir)?;
    let json_path = cfg.out_dir.join("report.json");
    let mut json = serde_json::to_string_pretty(report).expect("report is serializable");
    json.push('\n');
    std::fs::write(&json_path, json)?;

    let csv_path = cfg.out_dir.join("alpha_summary.csv");
    let mut csv = String::new();
    csv.push_str(
        "trial,alpha_bits,degenerate,final_delta,envelope,last_violation_n,windows_hit,windows_exceed,hit_ge_threshold\n",
    );
    for a in &report.alphas {
        for st in &a.per_envelope {
            let last = st
                .last_violation_n
                .map(|v| v.to_string())
                .unwrap_or_default();
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{},{}",
                a.trial,
                a.alpha_bits,
                a.degenerate,
                a.final_delta,
                csv_field(&st.envelope),
                last,
                st.windows_hit,
                st.windows_exceed,
                st.hit_ge_threshold
            )
            .expect("string write");
        }
    }
    std::fs::write(&csv_path, csv)?;
    Ok(vec![json_path, csv_path])
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub series: String,
    pub k_max: u64,
    pub b_max: u64,
    pub l_max: Option<u32>,
    pub partial_sum: f64,
}

/// Dyadic checkpoints 2, 4, 8, … plus n_max itself.
pub fn checkpoints(n_max: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut n = 2usize;
    while n < n_max {
        out.push(n);
        n *= 2;
    }
    if n_max >= 2 {
        out.push(n_max);
    }
    out.dedup();
    out
}

/// Difference-set trajectory CSV (exact per-checkpoint statistics).
pub fn diffstats_csv(seq: &mut IntegerSequence, n_max: usize) -> Result<String> {
    let mut csv = String::from("n,c_plus,c_full,energy,ratio_e_lower,ratio_e_upper,c_over_nlogn\n");
    for n in checkpoints(n_max) {
        let s = diff_summary(seq, n)?;
        let c_over = s.c_full as f64 / (n as f64 * clog(n as f64));
        writeln!(
            csv,
            "{},{},{},{},{},{},{}",
            n,
            s.c_plus,
            s.c_full,
            s.energy,
            s.ratio_e_lower(),
            s.ratio_e_upper(),
            c_over
        )
        .expect("string write");
    }
    Ok(csv)
}

/// Multiplication-table CSV: N, exact count, Ford ratio.
pub fn multtable_csv(n_max: usize) -> Result<String> {
    let mut csv = String::from("n,count,ford_ratio\n");
    for n in checkpoints(n_max) {
        let count = table_count(n as u64)?;
        writeln!(csv, "{},{},{}", n, count, ford_ratio(n as u64, count)).expect("string write");
    }
    Ok(csv)
}

/// The canned series evaluations for the report runner: a polynomial-decay
/// Catlin sum and the log-weighted first-occurrence sum on the configured
/// sequence.
pub fn series_reports(cfg: &ExperimentConfig) -> Result<Vec<SeriesReport>> {
    let psi = DecayFamily::Power { s: 2.0 };
    let catlin = catlin_series_partial(|k| psi.eval(k), cfg.series_k_max, cfg.series_b_max)?;
    let mut out = vec![SeriesReport {
        series: format!("catlin[psi={}]", psi.label()),
        k_max: cfg.series_k_max,
        b_max: cfg.series_b_max,
        l_max: None,
        partial_sum: catlin,
    }];
    let l_max = cfg.series_l_max_effective();
    let mut seq = IntegerSequence::new(cfg.sequence.clone())?;
    let occ = first_occurrence(&mut seq, l_max)?;
    let eta = DecayFamily::LogWeighted { epsilon: cfg.epsilon };
    let occurrence = occurrence_series_partial(
        &occ,
        |n| eta.eval(n),
        true,
        cfg.series_k_max,
        cfg.series_b_max,
        l_max,
    )?;
    out.push(SeriesReport {
        series: format!("occurrence[{}; eta={}]", cfg.sequence, eta.label()),
        k_max: cfg.series_k_max,
        b_max: cfg.series_b_max,
        l_max: Some(l_max),
        partial_sum: occurrence,
    });
    Ok(out)
}

/// The `report` experiment kind: exact difference-set trajectory CSV,
/// multiplication-table CSV, and the series JSON.
pub fn run_report(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    cfg.validate()?;
    std::fs::create_dir_all(&cfg.out_dir)?;
    let mut seq = IntegerSequence::new(cfg.sequence.clone())?;

    let diff_path = cfg.out_dir.join("diffstats_trajectory.csv");
    std::fs::write(&diff_path, diffstats_csv(&mut seq, cfg.n_max)?)?;

    let mult_path = cfg.out_dir.join("multtable.csv");
    std::fs::write(&mult_path, multtable_csv(cfg.n_max)?)?;

    let series_path = cfg.out_dir.join("series.json");
    let mut json = serde_json::to_string_pretty(&series_reports(cfg)?).expect("serializable");
    json.push('\n');
    std::fs::write(&series_path, json)?;
    Ok(vec![diff_path, mult_path, series_path])
}

/// Dispatch on the configured kind, writing outputs; returns written paths.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<PathBuf>> {
    match cfg.kind {
        ExperimentKind::Gaps => {
            let report = run_gap_experiment(cfg)?;
            write_experiment_outputs(&report, cfg)
        }
        ExperimentKind::Billiard => {
            let report = run_billiard_experiment(cfg)?;
            write_experiment_outputs(&report, cfg)
        }
        ExperimentKind::Report => run_report(cfg),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::SequenceSpec;

    fn small_cfg(kind: ExperimentKind, trials: u64) -> ExperimentConfig {
        ExperimentConfig {
            kind,
            sequence: SequenceSpec::Squares,
            n_max: 128,
            alpha_trials: trials,
            master_seed: 11,
            epsilon: 1.0,
            envelopes: Vec::new(),
            dyadic_window_max: 6,
            window_hit_min: 2,
            n_lower_threshold: 32,
            threads: 1,
            out_dir: PathBuf::from("unused"),
            series_k_max: 100,
            series_b_max: 10,
            series_l_max: None,
        }
    }

    #[test]
    fn zero_trials_is_empty_success() {
        let report = run_gap_experiment(&small_cfg(ExperimentKind::Gaps, 0)).unwrap();
        assert!(report.alphas.is_empty());
        assert_eq!(report.envelopes.len(), 4);
        assert_eq!(report.envelopes[0].violation_rate_ge_threshold, None);
    }

    #[test]
    fn gap_experiment_deterministic_across_threads() {
        let mut cfg = small_cfg(ExperimentKind::Gaps, 6);
        let a = run_gap_experiment(&cfg).unwrap();
        cfg.threads = 2;
        let b = run_gap_experiment(&cfg).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn violation_rate_monotone_in_epsilon() {
        // A larger epsilon shrinks the lower envelope, so violations can
        // only become rarer.
        let mut cfg = small_cfg(ExperimentKind::Gaps, 8);
        cfg.envelopes = vec![Envelope::Th1Lower { epsilon: 0.5 }];
        let small_eps = run_gap_experiment(&cfg).unwrap();
        cfg.envelopes = vec![Envelope::Th1Lower { epsilon: 2.0 }];
        let large_eps = run_gap_experiment(&cfg).unwrap();
        assert!(
            large_eps.envelopes[0].violations_ge_threshold
                <= small_eps.envelopes[0].violations_ge_threshold
        );
    }

    #[test]
    fn billiard_experiment_smoke() {
        let report = run_billiard_experiment(&small_cfg(ExperimentKind::Billiard, 3)).unwrap();
        assert_eq!(report.alphas.len(), 3);
        for a in &report.alphas {
            assert!(a.final_delta > 0.0);
        }
    }

    #[test]
    fn checkpoints_cover_dyadics_and_endpoint() {
        assert_eq!(checkpoints(10), vec![2, 4, 8, 10]);
        assert_eq!(checkpoints(8), vec![2, 4, 8]);
        assert_eq!(checkpoints(2), vec![2]);
    }

    #[test]
    fn diffstats_csv_c_column_matches_square_diff_count() {
        let mut seq = IntegerSequence::new(SequenceSpec::Squares).unwrap();
        let csv = diffstats_csv(&mut seq, 1000).unwrap();
        for line in csv.lines().skip(1) {
            let mut cols = line.split(',');
            let n: u64 = cols.next().unwrap().parse().unwrap();
            let _c_plus = cols.next().unwrap();
            let c_full: u64 = cols.next().unwrap().parse().unwrap();
            assert_eq!(
                c_full,
                2 * crate::multtable::square_diff_count(n).unwrap() + 1,
                "C_N column disagrees with the product-count route at N = {n}"
            );
        }
    }
}
