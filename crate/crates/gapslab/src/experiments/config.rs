//! Experiment configuration (JSON, snake_case fields) and the aggregate
//! report emitted by the runners.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metricda::Envelope;
use crate::sequences::SequenceSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Gaps,
    Billiard,
    Report,
}

fn default_trials() -> u64 {
    100
}
fn default_epsilon() -> f64 {
    1.0
}
fn default_window_max() -> u32 {
    13
}
fn default_window_hit_min() -> u32 {
    3
}
fn default_n_lower_threshold() -> u64 {
    1000
}
fn default_out_dir() -> PathBuf {
    PathBuf::from("out")
}
fn default_series_k_max() -> u64 {
    10_000
}
fn default_series_b_max() -> u64 {
    1000
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub sequence: SequenceSpec,
    pub n_max: usize,
    #[serde(default = "default_trials")]
    pub alpha_trials: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    /// Envelope selection; empty means the kind's default set.
    #[serde(default)]
    pub envelopes: Vec<Envelope>,
    /// Largest dyadic window exponent j: windows are [2^j, 2^{j+1}).
    #[serde(default = "default_window_max")]
    pub dyadic_window_max: u32,
    /// "Infinitely often" proxy: hits in at least this many distinct windows.
    #[serde(default = "default_window_hit_min")]
    pub window_hit_min: u32,
    /// Tail statistics (violation rates, any-hit fractions) count N at or
    /// above this threshold.
    #[serde(default = "default_n_lower_threshold")]
    pub n_lower_threshold: u64,
    /// Worker threads; 0 uses the rayon default. Output bytes do not
    /// depend on this.
    #[serde(default)]
    pub threads: usize,
    #[serde(default = "default_out_dir")]
    pub out_dir: PathBuf,
    #[serde(default = "default_series_k_max")]
    pub series_k_max: u64,
    #[serde(default = "default_series_b_max")]
    pub series_b_max: u64,
    #[serde(default)]
    pub series_l_max: Option<u32>,
}

impl ExperimentConfig {
    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        let cfg: ExperimentConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_max < 2 {
            return Err(Error::Config("n_max must be at least 2".into()));
        }
        if self.epsilon < 0.0 {
            return Err(Error::Config("epsilon must be nonnegative".into()));
        }
        Ok(())
    }

    /// The envelope set actually evaluated: the configured one, or the
    /// kind's default.
    pub fn effective_envelopes(&self) -> Vec<Envelope> {
        if !self.envelopes.is_empty() {
            return self.envelopes.clone();
        }
        let eps = self.epsilon;
        match self.kind {
            ExperimentKind::Gaps | ExperimentKind::Report => vec![
                Envelope::Th1Lower { epsilon: eps },
                Envelope::Th1UpperPlain,
                Envelope::Th1UpperSizedep,
                Envelope::ConjUp { epsilon: eps },
            ],
            ExperimentKind::Billiard => vec![
                Envelope::BilliardUp,
                Envelope::BilliardLow,
                Envelope::BilliardUpStrong { epsilon: eps },
                Envelope::BilliardLowStrong { epsilon: eps },
            ],
        }
    }

    pub fn series_l_max_effective(&self) -> u32 {
        self.series_l_max.unwrap_or_else(|| self.n_max.min(1000) as u32)
    }
}

/// Per-(α, envelope) statistics over one trajectory.
#[derive(Clone, Debug, Serialize)]
pub struct AlphaEnvelopeStat {
    pub envelope: String,
    /// Last N with δ(N) strictly below the envelope ("finiteness" proxy:
    /// for an almost-sure lower envelope this should stall well before
    /// n_max).
    pub last_violation_n: Option<u64>,
    /// Number of dyadic windows [2^j, 2^{j+1}), j ≤ dyadic_window_max,
    /// containing some N with δ(N) ≤ envelope ("infinitely often" proxy).
    pub windows_hit: u32,
    /// Windows containing some N with δ(N) ≥ envelope.
    pub windows_exceed: u32,
    /// Whether any N ≥ n_lower_threshold has δ(N) ≤ envelope.
    pub hit_ge_threshold: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlphaSummary {
    pub trial: u64,
    /// Fixed-point bits of the sampled α, hex.
    pub alpha_bits: String,
    pub degenerate: bool,
    pub final_delta: f64,
    pub per_envelope: Vec<AlphaEnvelopeStat>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BucketStat {
    pub j: u32,
    pub pairs: u64,
    pub violations: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct EnvelopeAggregate {
    pub envelope: String,
    /// (α, N) pairs with N ≥ n_lower_threshold.
    pub pairs_ge_threshold: u64,
    pub violations_ge_threshold: u64,
    pub violation_rate_ge_threshold: Option<f64>,
    /// Violation counts per dyadic window across all α.
    pub bucket_violations: Vec<BucketStat>,
    pub alpha_with_hit_ge_threshold: u64,
    pub frac_alpha_hit_ge_threshold: Option<f64>,
    /// α registering hits in at least `window_hit_min` distinct windows.
    pub alpha_with_window_hits: u64,
    pub frac_alpha_window_hits: Option<f64>,
    /// α registering at least one window with an exceedance (δ ≥ envelope).
    pub alpha_with_window_exceed: u64,
    pub frac_alpha_window_exceed: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AggregateReport {
    pub kind: ExperimentKind,
    pub sequence: String,
    pub n_max: usize,
    pub alpha_trials: u64,
    pub master_seed: u64,
    pub epsilon: f64,
    pub dyadic_window_max: u32,
    pub window_hit_min: u32,
    pub n_lower_threshold: u64,
    pub envelopes: Vec<EnvelopeAggregate>,
    pub alphas: Vec<AlphaSummary>,
}

impl AggregateReport {
    pub fn envelope(&self, label: &str) -> Option<&EnvelopeAggregate> {
        self.envelopes.iter().find(|e| e.envelope == label)
    }
}
