use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use msp_cs::analysis::{
    block_rip_exact, block_rip_montecarlo, channel_recovery_bound, cmsp_constants, cmsp_constants_for_matrix,
    cmsp_convergence_bound, cmsp_distortion_bound, msp_constants, msp_constants_for_matrix, msp_convergence_bound,
    msp_distortion_bound, BoundReport, CmspDeltas, RipQuery,
};
use msp_cs::experiments::{run_mismatch, run_sweep, write_csv, ExperimentConfig};
use msp_cs::io::{read_matrix_file, write_matrix_file};
use msp_cs::mimo::Algorithm;
use msp_cs::pursuit::{cmsp_recover, genie_ls, msp_recover, sp_recover_columns, PursuitConfig};
use msp_cs::{ChunkSparseMatrix, ComplexMatrix};
use msp_cs::{ChunkSupport, PriorSupportInfo, Result};

#[derive(Parser)]
#[command(
    name = "msp-cs",
    version,
    about = "Chunk-sparse recovery with prior support information"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a Monte-Carlo sweep and write one CSV row per point and algorithm.
    Sweep(ExperimentArgs),
    /// Sweep the believed s_c with the true overlap pinned by fixed_overlap.
    Mismatch(ExperimentArgs),
    /// Block-RIP constant of a CSMAT1 matrix.
    Rip(RipArgs),
    /// Evaluate recovery constants and bounds.
    Bounds(BoundsArgs),
    /// Recover X from Y = ΦX + N stored as CSMAT1 files.
    Recover(RecoverArgs),
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Overrides base_seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides n_trials.
    #[arg(long)]
    trials: Option<usize>,
}

#[derive(Args)]
struct RipArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Sample this many supports instead of enumerating (lower bound).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct BoundsArgs {
    /// Compute every δ exactly from this CSMAT1 matrix.
    #[arg(long, conflicts_with = "delta")]
    matrix: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Use this δ for every order not given explicitly.
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    delta_sbar: Option<f64>,
    #[arg(long)]
    delta_s1: Option<f64>,
    #[arg(long)]
    delta_s2: Option<f64>,
    #[arg(long)]
    delta_s3: Option<f64>,
    #[arg(long)]
    delta_2sbar: Option<f64>,
    #[arg(long)]
    delta_2sbar_sc: Option<f64>,
    #[arg(long)]
    delta_3sbar_sc: Option<f64>,
    #[arg(long)]
    s_bar: usize,
    #[arg(long, default_value_t = 0)]
    s_c: usize,
    /// |T0|; defaults to s_bar.
    #[arg(long)]
    t0_len: Option<usize>,
    /// True |T0 ∩ T|, if known.
    #[arg(long)]
    overlap: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Noise level ‖N‖_F.
    #[arg(long, default_value_t = 0.0)]
    eta: f64,
    /// Signal energy ‖X‖_F², enables the iteration-count bound.
    #[arg(long)]
    rho: Option<f64>,
    /// Channel-estimation bound parameters: M, N_ue, T and P in dB.
    #[arg(long, requires_all = ["ue_antennas", "pilot_length", "snr_db"])]
    bs_antennas: Option<usize>,
    #[arg(long)]
    ue_antennas: Option<usize>,
    #[arg(long)]
    pilot_length: Option<usize>,
    #[arg(long)]
    snr_db: Option<f64>,
    /// Also write the report as a one-row CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct RecoverArgs {
    #[arg(long)]
    y: PathBuf,
    #[arg(long)]
    phi: PathBuf,
    /// msp, cmsp, mmv_sp, sp or genie.
    #[arg(long, default_value = "msp")]
    algorithm: String,
    #[arg(long)]
    s_bar: usize,
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, default_value_t = 0.0)]
    gamma: f64,
    /// Comma-separated 1-based prior chunk indices (for genie: the true support).
    #[arg(long, value_delimiter = ',')]
    t0: Vec<usize>,
    #[arg(long, default_value_t = 0)]
    s_c: usize,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Write X̂ here as CSMAT1.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn experiment(args: &ExperimentArgs, mismatch: bool) -> Result<()> {
    let mut cfg = ExperimentConfig::from_file(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.base_seed = seed;
    }
    if let Some(trials) = args.trials {
        cfg.n_trials = trials;
    }
    let rows = if mismatch {
        run_mismatch(&cfg)?
    } else {
        run_sweep(&cfg)?
    };
    let mut out = BufWriter::new(File::create(&args.out)?);
    write_csv(&mut out, &rows)?;
    out.flush()?;
    Ok(())
}

fn rip(args: &RipArgs) -> Result<()> {
    let phi = read_matrix_file(&args.matrix)?;
    let q = RipQuery::new(args.k, args.d);
    match args.samples {
        Some(n) => {
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            let delta = block_rip_montecarlo(&phi, q, n, &mut rng)?;
            println!("delta_lower_bound={delta:.8e}");
        }
        None => println!("delta={:.8e}", block_rip_exact(&phi, q)?),
    }
    Ok(())
}

fn bounds(args: &BoundsArgs) -> Result<BoundReport> {
    let t0_len = args.t0_len.unwrap_or(args.s_bar);
    let mut report = BoundReport::new();
    report.push("s_bar", args.s_bar);
    report.push("s_c", args.s_c);
    report.push("t0_len", t0_len);

    let (msp, cmsp) = match &args.matrix {
        Some(path) => {
            let phi = read_matrix_file(path)?;
            (
                msp_constants_for_matrix(&phi, args.d, args.s_bar, t0_len, args.s_c)?,
                cmsp_constants_for_matrix(&phi, args.d, args.s_bar, args.s_c, t0_len, args.overlap)?,
            )
        }
        None => {
            let pick = |v: Option<f64>, name: &str| {
                v.or(args.delta)
                    .ok_or_else(|| msp_cs::Error::BoundPrecondition(format!("need --{name} or --delta (or --matrix)")))
            };
            let ds1 = pick(args.delta_s1, "delta-s1")?;
            let dsbar = pick(args.delta_sbar, "delta-sbar")?;
            let msp = msp_constants(
                dsbar,
                ds1,
                pick(args.delta_s2, "delta-s2")?,
                args.s_bar,
                t0_len,
                args.s_c,
            )?;
            let deltas = CmspDeltas {
                sbar: dsbar,
                two_sbar: pick(args.delta_2sbar, "delta-2sbar")?,
                two_sbar_plus_sc: pick(args.delta_2sbar_sc, "delta-2sbar-sc")?,
                three_sbar_plus_sc: pick(args.delta_3sbar_sc, "delta-3sbar-sc")?,
                s3: pick(args.delta_s3, "delta-s3")?,
                s1: ds1,
            };
            (msp, cmsp_constants(deltas, args.s_bar, args.s_c, t0_len, args.overlap)?)
        }
    };

    report.add_msp(&msp);
    report.add_cmsp(&cmsp);
    report.push_f64("gamma", args.gamma);
    report.push_f64("eta", args.eta);
    let mut optional = |key: &str, value: Result<f64>| match value {
        Ok(v) => report.push_f64(key, v),
        Err(e) => {
            eprintln!("{key}: {e}");
            report.push(key, "n/a");
        }
    };
    optional("msp.distortion_bound", msp_distortion_bound(&msp, args.gamma, args.eta));
    optional(
        "cmsp.distortion_bound",
        cmsp_distortion_bound(&cmsp, args.gamma, args.eta),
    );
    if let Some(rho) = args.rho {
        optional(
            "msp.n_co",
            msp_convergence_bound(&msp, args.gamma, args.eta, rho).map(|b| b.n_co),
        );
        optional(
            "cmsp.n_co",
            cmsp_convergence_bound(&cmsp, args.gamma, args.eta, rho).map(|b| b.n_co),
        );
    }
    if let (Some(m), Some(n), Some(t), Some(db)) = (args.bs_antennas, args.ue_antennas, args.pilot_length, args.snr_db)
    {
        optional(
            "channel_bound",
            channel_recovery_bound(msp.delta_s2(), msp.c4, args.gamma, m, n, t, 10f64.powf(db / 10.0)),
        );
    }
    Ok(report)
}

fn recover(args: &RecoverArgs) -> Result<()> {
    let y = read_matrix_file(&args.y)?;
    let phi = read_matrix_file(&args.phi)?;
    let k = phi.cols() / args.d.max(1);
    let t0 = ChunkSupport::new(args.t0.iter().copied(), k)?;
    let algorithm: Algorithm = args.algorithm.parse()?;
    let (x_hat, t_hat, summary) = match algorithm {
        Algorithm::Genie => {
            let x = genie_ls(&y, &phi, &t0, args.d)?;
            (x, t0, String::new())
        }
        Algorithm::Sp => {
            if args.d != 1 {
                return Err(msp_cs::Error::Config {
                    field: "d".into(),
                    message: "sp works on d = 1; use mmv_sp".into(),
                });
            }
            let cols = sp_recover_columns(&y, &phi, args.s_bar, args.gamma)?;
            let mut data = ComplexMatrix::zeros(k, y.cols());
            let mut t_hat = ChunkSupport::empty(k);
            for (c, r) in cols.iter().enumerate() {
                for row in 0..k {
                    data.set(row, c, r.x_hat.data().get(row, 0));
                }
                t_hat = t_hat.union(&r.t_hat);
            }
            let iterations: Vec<String> = cols.iter().map(|r| r.iterations.to_string()).collect();
            let summary = format!("iterations={}\n", iterations.join(","));
            (ChunkSparseMatrix::new(data, 1)?, t_hat, summary)
        }
        other => {
            let prior = match other {
                Algorithm::Msp | Algorithm::Cmsp => PriorSupportInfo::new(t0, args.s_c)?,
                _ => PriorSupportInfo::none(k),
            };
            let cfg = PursuitConfig::new(args.s_bar, prior, args.gamma, args.d)?.with_max_iter(args.max_iter);
            let res = if other == Algorithm::Cmsp {
                cmsp_recover(&y, &phi, &cfg)?
            } else {
                msp_recover(&y, &phi, &cfg)?
            };
            let summary = format!(
                "iterations={}\nstop_reason={:?}\nresidue={:.8e}\nrank_deficient_ls={}\n",
                res.iterations,
                res.stop_reason,
                res.residue_norms.last().copied().unwrap_or(0.0),
                res.rank_deficient_ls
            );
            (res.x_hat, res.t_hat, summary)
        }
    };
    let stdout = io::stdout();
    let mut out = stdout.lock();
    writeln!(out, "t_hat={t_hat}")?;
    write!(out, "{summary}")?;
    if let Some(path) = &args.out {
        write_matrix_file(path, x_hat.data())?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sweep(a) => experiment(a, false),
        Command::Mismatch(a) => experiment(a, true),
        Command::Rip(a) => rip(a),
        Command::Bounds(a) => bounds(a).and_then(|report| {
            print!("{report}");
            if let Some(path) = &a.csv {
                let mut f = File::create(path)?;
                writeln!(f, "{}", report.csv_header())?;
                writeln!(f, "{}", report.csv_row())?;
            }
            Ok(())
        }),
        Command::Recover(a) => recover(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
