use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use gapslab::billiard::{billiard_trajectory, fp_to_f64, BilliardAlpha};
use gapslab::diffstats::{c_plus_trajectory, first_occurrence};
use gapslab::error::{Error, Result};
use gapslab::experiments::runner::{diffstats_csv, multtable_csv, SeriesReport};
use gapslab::experiments::{rng, run_experiment, ExperimentConfig};
use gapslab::gaps::min_gap_trajectory;
use gapslab::metricda::{
    catlin_series_partial, eval_envelope, occurrence_series_partial, DecayFamily, Envelope,
};
use gapslab::numtheory::AlphaFixed;
use gapslab::sequences::{IntegerSequence, SequenceSpec};

#[derive(Parser)]
#[command(
    name = "gapslab",
    about = "Minimal gaps of dilated integer sequences mod 1: exact difference-set statistics, envelopes, and seeded experiments",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print or write the first N terms of a sequence (one per line).
    Gen {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exact difference-set trajectory (C⁺, C, E, sandwich ratios) at
    /// dyadic checkpoints, as CSV.
    Diffstats {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Minimal-gap trajectory for one α, with envelope columns, as CSV.
    Gaps {
        #[arg(long)]
        seq: String,
        #[arg(long)]
        n_max: usize,
        /// Seed for sampling α (ignored when --alpha-bits is given).
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Explicit α as 16 hex digits of its 64 fractional bits.
        #[arg(long)]
        alpha_bits: Option<String>,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Truncated convergence/divergence series, as JSON.
    Series {
        /// catlin (ψ over all k) or occurrence (η through first occurrences).
        #[arg(long, default_value = "occurrence")]
        family: String,
        /// Decay family: power:<s> or logweighted:<eps>.
        #[arg(long, default_value = "power:3")]
        decay: String,
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value_t = 1000)]
        n_max: usize,
        #[arg(long, default_value_t = 10_000)]
        k_max: u64,
        #[arg(long, default_value_t = 1000)]
        b_max: u64,
        #[arg(long)]
        l_max: Option<u32>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Multiplication-table counts and Ford ratios, as CSV.
    Multtable {
        #[arg(long)]
        n_max: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Billiard spectrum minimal-gap trajectory for one α, as CSV.
    Billiard {
        /// Aspect ratio α (decimal); sampled from --seed when absent.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1.0)]
        epsilon: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configured experiment (gaps | billiard | report kinds).
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Optional overrides of the config file.
        #[arg(long)]
        trials: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(out: Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => {
            if let Some(parent) = path.parent() {
                if !parent.as_os_str().is_empty() {
                    std::fs::create_dir_all(parent)?;
                }
            }
            std::fs::write(path, content)?;
        }
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
        }
    }
    Ok(())
}

fn parse_alpha_bits(hex: &str) -> Result<AlphaFixed> {
    let numerator = u64::from_str_radix(hex.trim_start_matches("0x"), 16)
        .map_err(|e| Error::InvalidParameter(format!("--alpha-bits: {e}")))?;
    Ok(AlphaFixed::new(numerator))
}

fn gaps_csv(seq_spec: &str, n_max: usize, alpha: AlphaFixed, epsilon: f64) -> Result<String> {
    let spec: SequenceSpec = seq_spec.parse()?;
    let mut seq = IntegerSequence::new(spec)?;
    let prefix = seq.prefix(n_max)?.to_vec();
    let c_plus = c_plus_trajectory(&mut seq, n_max)?;
    let traj = min_gap_trajectory(&mut seq, alpha, n_max)?;
    let envs = [
        Envelope::Th1Lower { epsilon },
        Envelope::Th1UpperPlain,
        Envelope::Th1UpperSizedep,
        Envelope::ConjUp { epsilon },
    ];
    let mut csv = String::from("n,delta,delta_times_cn");
    for e in &envs {
        write!(csv, ",{e}").expect("string write");
    }
    csv.push('\n');
    for (n, delta) in traj.iter() {
        let c_full = 2 * c_plus[n - 1] + 1;
        write!(
            csv,
            "{},{},{}",
            n,
            delta.to_f64(),
            delta.to_f64() * c_full as f64
        )
        .expect("string write");
        for e in &envs {
            let v = eval_envelope(e, n as u64, c_full, Some(prefix[n - 1]))?;
            write!(csv, ",{v}").expect("string write");
        }
        csv.push('\n');
    }
    Ok(csv)
}

fn billiard_csv(alpha: BilliardAlpha, n_max: usize, epsilon: f64) -> Result<String> {
    let traj = billiard_trajectory(alpha, n_max)?;
    let up = Envelope::BilliardUp;
    let low = Envelope::BilliardLow;
    let up_strong = Envelope::BilliardUpStrong { epsilon };
    let low_strong = Envelope::BilliardLowStrong { epsilon };
    let mut csv = String::from(
        "n,delta,up_envelope,low_envelope,hit_up,exceed_low,up_strong,low_strong\n",
    );
    for (n, d) in traj.iter() {
        let delta = fp_to_f64(d);
        let up_v = eval_envelope(&up, n as u64, 1, None)?;
        let low_v = eval_envelope(&low, n as u64, 1, None)?;
        writeln!(
            csv,
            "{},{},{},{},{},{},{},{}",
            n,
            delta,
            up_v,
            low_v,
            u8::from(delta <= up_v),
            u8::from(delta >= low_v),
            eval_envelope(&up_strong, n as u64, 1, None)?,
            eval_envelope(&low_strong, n as u64, 1, None)?
        )
        .expect("string write");
    }
    Ok(csv)
}

fn series_json(
    family: &str,
    decay: DecayFamily,
    seq: Option<String>,
    n_max: usize,
    k_max: u64,
    b_max: u64,
    l_max: Option<u32>,
) -> Result<String> {
    let report = match family {
        "catlin" => SeriesReport {
            series: format!("catlin[psi={}]", decay.label()),
            k_max,
            b_max,
            l_max: None,
            partial_sum: catlin_series_partial(|k| decay.eval(k), k_max, b_max)?,
        },
        "occurrence" => {
            let spec: SequenceSpec = seq
                .ok_or_else(|| Error::InvalidParameter("occurrence needs --seq".into()))?
                .parse()?;
            let mut sequence = IntegerSequence::new(spec.clone())?;
            let l = l_max.unwrap_or(n_max.min(1000) as u32);
            let occ = first_occurrence(&mut sequence, l)?;
            SeriesReport {
                series: format!("occurrence[{spec}; eta={}]", decay.label()),
                k_max,
                b_max,
                l_max: Some(l),
                partial_sum: occurrence_series_partial(&occ, |n| decay.eval(n), true, k_max, b_max, l)?,
            }
        }
        other => {
            return Err(Error::InvalidParameter(format!(
                "unknown series family `{other}` (want catlin or occurrence)"
            )))
        }
    };
    let mut json = serde_json::to_string_pretty(&report).expect("serializable");
    json.push('\n');
    Ok(json)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Gen { seq, n_max, out } => {
            let spec: SequenceSpec = seq.parse()?;
            let mut sequence = IntegerSequence::new(spec)?;
            let terms = sequence.prefix(n_max)?;
            let mut text = String::new();
            for t in terms {
                writeln!(text, "{t}").expect("string write");
            }
            emit(out, &text)
        }
        Command::Diffstats { seq, n_max, out } => {
            let spec: SequenceSpec = seq.parse()?;
            let mut sequence = IntegerSequence::new(spec)?;
            emit(out, &diffstats_csv(&mut sequence, n_max)?)
        }
        Command::Gaps {
            seq,
            n_max,
            seed,
            alpha_bits,
            epsilon,
            out,
        } => {
            let alpha = match alpha_bits {
                Some(hex) => parse_alpha_bits(&hex)?,
                None => rng::sample_alpha(seed, 0),
            };
            emit(out, &gaps_csv(&seq, n_max, alpha, epsilon)?)
        }
        Command::Series {
            family,
            decay,
            seq,
            n_max,
            k_max,
            b_max,
            l_max,
            out,
        } => {
            let decay: DecayFamily = decay.parse()?;
            emit(out, &series_json(&family, decay, seq, n_max, k_max, b_max, l_max)?)
        }
        Command::Multtable { n_max, out } => emit(out, &multtable_csv(n_max)?),
        Command::Billiard {
            alpha,
            seed,
            n_max,
            epsilon,
            out,
        } => {
            let alpha = match alpha {
                Some(a) => BilliardAlpha::from_f64(a)?,
                None => rng::sample_billiard_alpha(seed, 0),
            };
            emit(out, &billiard_csv(alpha, n_max, epsilon)?)
        }
        Command::Experiment {
            config,
            trials,
            seed,
            out,
        } => {
            let mut cfg = ExperimentConfig::from_json_file(&config)?;
            if let Some(t) = trials {
                cfg.alpha_trials = t;
            }
            if let Some(s) = seed {
                cfg.master_seed = s;
            }
            if let Some(o) = out {
                cfg.out_dir = o;
            }
            let paths = run_experiment(&cfg)?;
            for p in paths {
                println!("{}", p.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("gapslab: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
