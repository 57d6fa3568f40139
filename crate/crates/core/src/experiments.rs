//! Monte-Carlo sweeps over the MIMO tracking scenario.
//!
//! Every trial simulates two frames: frame 1 runs without a prior and only
//! supplies `T0`; frame 2 is measured. Trial `i` seeds its RNG with
//! `base_seed + i`, so all algorithms at one sweep point see the same
//! channels, pilots and noise.
//!
//! Config files are `key = value` lines; `#` starts a comment.
//!
//! | key            | meaning                                            | default |
//! |----------------|----------------------------------------------------|---------|
//! | `bs_antennas`  | `M`                                                | 64      |
//! | `ue_antennas`  | `N_ue`                                             | 2       |
//! | `pilot_length` | `T`                                                | 24      |
//! | `snr_db`       | transmit SNR `P` in dB                             | 25      |
//! | `s_bar`        | support size upper bound                           | 8       |
//! | `s_c`          | true overlap lower bound of consecutive supports   | 4       |
//! | `believed_s_c` | `s_c` handed to the algorithms                     | `s_c`   |
//! | `fixed_overlap`| pin the overlap to exactly this many chunks        | none    |
//! | `noise`        | `true`/`false`                                     | true    |
//! | `sweep_axis`   | `pilot_length`, `snr_db`, `s_c` or `believed_s_c`  | required|
//! | `sweep_values` | comma-separated values                             | required|
//! | `algorithms`   | comma-separated subset of `msp,cmsp,mmv_sp,sp,genie` | all   |
//! | `n_trials`     | trials per point                                   | 200     |
//! | `base_seed`    | seed of trial 0                                    | 0       |
//! | `gamma`        | `default` for `√(2·N_ue·T)`, or a number           | default |

use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::analysis::format_float;
use crate::error::{Error, Result};
use crate::mimo::{run_frame_sequence, Algorithm, MimoScenario, Transforms};
use crate::sparsity::{OverlapRule, SupportEvolutionParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    PilotLength,
    SnrDb,
    SC,
    BelievedSC,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            Self::PilotLength => "pilot_length",
            Self::SnrDb => "snr_db",
            Self::SC => "s_c",
            Self::BelievedSC => "believed_s_c",
        }
    }

    fn is_integral(self) -> bool {
        !matches!(self, Self::SnrDb)
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [Self::PilotLength, Self::SnrDb, Self::SC, Self::BelievedSC]
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::config("sweep_axis", format!("unknown axis '{s}'")))
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GammaRule {
    /// `γ = √(2·N_ue·T)`.
    NoiseScaled,
    Explicit(f64),
}

impl GammaRule {
    pub fn value(self, ue_antennas: usize, pilot_len: usize) -> f64 {
        match self {
            Self::NoiseScaled => (2.0 * (ue_antennas * pilot_len) as f64).sqrt(),
            Self::Explicit(g) => g,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub bs_antennas: usize,
    pub ue_antennas: usize,
    pub pilot_length: usize,
    pub snr_db: f64,
    pub s_bar: usize,
    pub s_c: usize,
    pub believed_s_c: Option<usize>,
    pub fixed_overlap: Option<usize>,
    pub noise: bool,
    pub sweep_axis: SweepAxis,
    pub sweep_values: Vec<f64>,
    pub algorithms: Vec<Algorithm>,
    pub n_trials: usize,
    pub base_seed: u64,
    pub gamma: GammaRule,
}

impl ExperimentConfig {
    /// Defaults for every optional key, sweeping `axis` over `values`.
    pub fn new(sweep_axis: SweepAxis, sweep_values: Vec<f64>) -> Self {
        Self {
            bs_antennas: 64,
            ue_antennas: 2,
            pilot_length: 24,
            snr_db: 25.0,
            s_bar: 8,
            s_c: 4,
            believed_s_c: None,
            fixed_overlap: None,
            noise: true,
            sweep_axis,
            sweep_values,
            algorithms: Algorithm::ALL.to_vec(),
            n_trials: 200,
            base_seed: 0,
            gamma: GammaRule::NoiseScaled,
        }
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        std::fs::read_to_string(path)?.parse()
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials == 0 {
            return Err(Error::config("n_trials", "must be at least 1"));
        }
        if self.sweep_values.is_empty() {
            return Err(Error::config("sweep_values", "must not be empty"));
        }
        if self.algorithms.is_empty() {
            return Err(Error::config("algorithms", "must not be empty"));
        }
        for &v in &self.sweep_values {
            if !v.is_finite() || (self.sweep_axis.is_integral() && (v < 0.0 || v.fract() != 0.0)) {
                return Err(Error::config(
                    "sweep_values",
                    format!("invalid value {v} for axis {}", self.sweep_axis),
                ));
            }
        }
        if let GammaRule::Explicit(g) = self.gamma {
            if !(g >= 0.0 && g.is_finite()) {
                return Err(Error::config("gamma", "must be a non-negative number"));
            }
        }
        for &v in &self.sweep_values {
            self.point(v)?;
        }
        Ok(())
    }

    /// Scenario, believed `s_c` and `γ` at one sweep value.
    pub fn point(&self, value: f64) -> Result<SweepPoint> {
        let mut t = self.pilot_length;
        let mut snr_db = self.snr_db;
        let mut s_c = self.s_c;
        let mut believed = self.believed_s_c;
        match self.sweep_axis {
            SweepAxis::PilotLength => t = value as usize,
            SweepAxis::SnrDb => snr_db = value,
            SweepAxis::SC => {
                s_c = value as usize;
                believed = None;
            }
            SweepAxis::BelievedSC => believed = Some(value as usize),
        }
        let overlap = match self.fixed_overlap {
            Some(o) => OverlapRule::Fixed(o),
            None => OverlapRule::Uniform,
        };
        let evolution_s_c = self.fixed_overlap.unwrap_or(s_c);
        let evolution = SupportEvolutionParams::new(self.s_bar, evolution_s_c, self.bs_antennas)
            .map_err(|e| Error::config("s_c", e.to_string()))?;
        let mut scenario = MimoScenario::new(
            self.bs_antennas,
            self.ue_antennas,
            t,
            10f64.powf(snr_db / 10.0),
            evolution,
        )
        .map_err(|e| Error::config(self.sweep_axis.name(), e.to_string()))?
        .with_overlap(overlap);
        if !self.noise {
            scenario = scenario.noiseless();
        }
        Ok(SweepPoint {
            value,
            believed_s_c: believed.unwrap_or(s_c),
            gamma: self.gamma.value(self.ue_antennas, t),
            scenario,
        })
    }
}

fn parse_field<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::config(key, format!("cannot parse '{value}'")))
}

fn parse_list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| parse_field(key, s))
        .collect()
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut cfg = Self::new(SweepAxis::PilotLength, Vec::new());
        let mut axis_seen = false;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(
                    format!("line {}", lineno + 1),
                    format!("expected key = value, got '{line}'"),
                )
            })?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "bs_antennas" => cfg.bs_antennas = parse_field(key, value)?,
                "ue_antennas" => cfg.ue_antennas = parse_field(key, value)?,
                "pilot_length" => cfg.pilot_length = parse_field(key, value)?,
                "snr_db" => cfg.snr_db = parse_field(key, value)?,
                "s_bar" => cfg.s_bar = parse_field(key, value)?,
                "s_c" => cfg.s_c = parse_field(key, value)?,
                "believed_s_c" => cfg.believed_s_c = Some(parse_field(key, value)?),
                "fixed_overlap" => cfg.fixed_overlap = Some(parse_field(key, value)?),
                "noise" => cfg.noise = parse_field(key, value)?,
                "sweep_axis" => {
                    cfg.sweep_axis = value.parse()?;
                    axis_seen = true;
                }
                "sweep_values" => cfg.sweep_values = parse_list(key, value)?,
                "algorithms" => cfg.algorithms = parse_list(key, value)?,
                "n_trials" => cfg.n_trials = parse_field(key, value)?,
                "base_seed" => cfg.base_seed = parse_field(key, value)?,
                "gamma" => {
                    cfg.gamma = if value == "default" {
                        GammaRule::NoiseScaled
                    } else {
                        GammaRule::Explicit(parse_field(key, value)?)
                    }
                }
                other => return Err(Error::config(other, "unknown key")),
            }
        }
        if !axis_seen {
            return Err(Error::config("sweep_axis", "missing"));
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// A fully resolved sweep point.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub value: f64,
    pub scenario: MimoScenario,
    pub believed_s_c: usize,
    pub gamma: f64,
}

/// Measured-frame outcome of one trial.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrialOutcome {
    pub error_ratio: f64,
    pub iterations: usize,
    pub support_recovered: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ResultRow {
    pub axis: SweepAxis,
    pub value: f64,
    pub algorithm: Algorithm,
    /// Mean of `‖H − Ĥ‖_F² / ‖H‖_F²` over trials.
    pub nmse: f64,
    pub nmse_ci95_halfwidth: f64,
    pub nmse_median: f64,
    pub mean_iterations: f64,
    /// Fraction of trials with `T_true ⊆ T̂`.
    pub support_recovery_rate: f64,
    pub n_trials: usize,
    pub seed: u64,
}

pub const CSV_HEADER: &str =
    "axis,value,algorithm,nmse,nmse_ci95_halfwidth,nmse_median,mean_iterations,support_recovery_rate,n_trials,seed";

impl ResultRow {
    pub fn csv_line(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.axis,
            format_float(self.value),
            self.algorithm,
            format_float(self.nmse),
            format_float(self.nmse_ci95_halfwidth),
            format_float(self.nmse_median),
            format_float(self.mean_iterations),
            format_float(self.support_recovery_rate),
            self.n_trials,
            self.seed
        )
    }
}

pub fn write_csv<W: Write>(mut w: W, rows: &[ResultRow]) -> Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for r in rows {
        writeln!(w, "{}", r.csv_line())?;
    }
    Ok(())
}

pub fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// Runs trial `trial` of `algorithm` at `point`.
pub fn run_trial(point: &SweepPoint, algorithm: Algorithm, base_seed: u64, trial: usize) -> Result<TrialOutcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed.wrapping_add(trial as u64));
    let transforms = Transforms::dft(&point.scenario);
    let records = run_frame_sequence(
        &point.scenario,
        &transforms,
        2,
        algorithm,
        point.believed_s_c,
        point.gamma,
        &mut rng,
    )?;
    let measured = &records[1];
    Ok(TrialOutcome {
        error_ratio: measured.error_ratio,
        iterations: measured.iterations,
        support_recovered: measured.support_recovered,
    })
}

/// All trial outcomes at one point, in trial order.
pub fn run_point(
    point: &SweepPoint,
    algorithm: Algorithm,
    base_seed: u64,
    n_trials: usize,
) -> Result<Vec<TrialOutcome>> {
    (0..n_trials)
        .into_par_iter()
        .map(|i| run_trial(point, algorithm, base_seed, i))
        .collect()
}

fn aggregate(cfg: &ExperimentConfig, value: f64, algorithm: Algorithm, outcomes: &[TrialOutcome]) -> ResultRow {
    let n = outcomes.len() as f64;
    let errors: Vec<f64> = outcomes.iter().map(|o| o.error_ratio).collect();
    let mean = errors.iter().sum::<f64>() / n;
    let var = if outcomes.len() > 1 {
        errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    ResultRow {
        axis: cfg.sweep_axis,
        value,
        algorithm,
        nmse: mean,
        nmse_ci95_halfwidth: 1.96 * (var / n).sqrt(),
        nmse_median: median(&errors),
        mean_iterations: outcomes.iter().map(|o| o.iterations as f64).sum::<f64>() / n,
        support_recovery_rate: outcomes.iter().filter(|o| o.support_recovered).count() as f64 / n,
        n_trials: outcomes.len(),
        seed: cfg.base_seed,
    }
}

/// One row per (sweep value, algorithm), in config order.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::with_capacity(cfg.sweep_values.len() * cfg.algorithms.len());
    for &value in &cfg.sweep_values {
        let point = cfg.point(value)?;
        for &alg in &cfg.algorithms {
            let outcomes = run_point(&point, alg, cfg.base_seed, cfg.n_trials)?;
            rows.push(aggregate(cfg, value, alg, &outcomes));
        }
    }
    Ok(rows)
}

/// [`run_sweep`] for the model-mismatch study: the true overlap is pinned
/// by `fixed_overlap` while the algorithms are told `believed_s_c`.
pub fn run_mismatch(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    if cfg.sweep_axis != SweepAxis::BelievedSC {
        return Err(Error::config("sweep_axis", "mismatch runs sweep believed_s_c"));
    }
    match cfg.fixed_overlap {
        None => Err(Error::config("fixed_overlap", "mismatch runs need a fixed overlap")),
        Some(o) if o + 2 > cfg.s_bar => Err(Error::config("fixed_overlap", "must not exceed s_bar - 2")),
        Some(_) => run_sweep(cfg),
    }
}
