//! Massive-MIMO downlink channel estimation as a chunk-sparse problem.
//!
//! The received pilots are `Z = √P·H·Θ + W` with `H = U·H_a·Vᴴ` (`N_ue × M`)
//! and `H_a` sharing one column support across its rows. Conjugating and
//! rotating gives `Y = ZᴴU = Φ·X + N` with
//!
//! * `Φ = √(M/T)·ΘᴴV` (`T × M`),
//! * `X = √(PT/M)·H_aᴴ` (`M × N_ue`, chunk height 1, one chunk per angle),
//! * `N = WᴴU`.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pursuit::{
    cmsp_recover, genie_ls, mmv_sp_recover, msp_recover, sp_recover_columns, PursuitConfig, StopReason,
};
use crate::sparsity::{
    complex_gaussian, generate_support_sequence_with, ChunkSparseMatrix, ChunkSupport, OverlapRule, PriorSupportInfo,
    SupportEvolutionParams,
};

#[derive(Clone, Debug, PartialEq)]
pub struct MimoScenario {
    /// `M`, base-station antennas; also the number of chunks `K`.
    pub bs_antennas: usize,
    /// `N_ue`, user antennas; the number of columns `L`.
    pub ue_antennas: usize,
    /// `T`, pilot length.
    pub pilot_len: usize,
    /// Transmit SNR `P`, linear.
    pub snr: f64,
    pub evolution: SupportEvolutionParams,
    pub overlap: OverlapRule,
    /// When false, `W = 0`.
    pub noise: bool,
}

impl MimoScenario {
    pub fn new(
        bs_antennas: usize,
        ue_antennas: usize,
        pilot_len: usize,
        snr: f64,
        evolution: SupportEvolutionParams,
    ) -> Result<Self> {
        let s = Self {
            bs_antennas,
            ue_antennas,
            pilot_len,
            snr,
            evolution,
            overlap: OverlapRule::Uniform,
            noise: true,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn with_overlap(mut self, overlap: OverlapRule) -> Self {
        self.overlap = overlap;
        self
    }

    pub fn noiseless(mut self) -> Self {
        self.noise = false;
        self
    }

    pub fn s_bar(&self) -> usize {
        self.evolution.s_bar()
    }

    pub fn validate(&self) -> Result<()> {
        if self.pilot_len == 0 || self.ue_antennas == 0 || self.bs_antennas == 0 {
            return Err(Error::Dimension("M, N_ue and T must all be at least 1".into()));
        }
        if !(self.snr > 0.0 && self.snr.is_finite()) {
            return Err(Error::Dimension(format!("SNR must be positive, got {}", self.snr)));
        }
        if self.evolution.universe() != self.bs_antennas {
            return Err(Error::Dimension(format!(
                "support universe {} differs from M = {}",
                self.evolution.universe(),
                self.bs_antennas
            )));
        }
        Ok(())
    }
}

/// Angular-domain transforms `U` (`N_ue × N_ue`) and `V` (`M × M`).
#[derive(Clone, Debug, PartialEq)]
pub struct Transforms {
    pub u: ComplexMatrix,
    pub v: ComplexMatrix,
}

impl Transforms {
    /// Unitary DFT matrices, the uniform-linear-array model.
    pub fn dft(scenario: &MimoScenario) -> Self {
        Self {
            u: dft_unitary(scenario.ue_antennas),
            v: dft_unitary(scenario.bs_antennas),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ChannelFrame {
    pub h: ComplexMatrix,
    pub h_a: ComplexMatrix,
    pub t_true: ChunkSupport,
}

/// `n × n` unitary DFT, entry `(a, b) = exp(−2πi·ab/n)/√n` (0-based).
pub fn dft_unitary(n: usize) -> ComplexMatrix {
    let norm = 1.0 / (n as f64).sqrt();
    ComplexMatrix::from_fn(n, n, |a, b| {
        // Reduce a·b mod n first so the phase stays accurate for large n.
        let phase = -2.0 * std::f64::consts::PI * ((a * b) % n) as f64 / n as f64;
        Complex64::from_polar(norm, phase)
    })
}

/// `M × T` pilots with i.i.d. entries `±1/√M`.
pub fn generate_pilots<R: Rng + ?Sized>(bs_antennas: usize, pilot_len: usize, rng: &mut R) -> ComplexMatrix {
    let amp = 1.0 / (bs_antennas as f64).sqrt();
    ComplexMatrix::from_fn(bs_antennas, pilot_len, |_, _| {
        Complex64::new(if rng.random::<bool>() { amp } else { -amp }, 0.0)
    })
}

pub fn generate_channel<R: Rng + ?Sized>(
    scenario: &MimoScenario,
    transforms: &Transforms,
    t_true: &ChunkSupport,
    rng: &mut R,
) -> Result<ChannelFrame> {
    let (n, m) = (scenario.ue_antennas, scenario.bs_antennas);
    if t_true.universe() != m {
        return Err(Error::Dimension(format!(
            "support universe {} differs from M = {m}",
            t_true.universe()
        )));
    }
    let mut h_a = ComplexMatrix::zeros(n, m);
    for col in t_true.iter() {
        for row in 0..n {
            h_a.set(row, col - 1, complex_gaussian(rng));
        }
    }
    let h = transforms.u.try_matmul(&h_a)?.try_matmul(&transforms.v.adjoint())?;
    Ok(ChannelFrame {
        h,
        h_a,
        t_true: t_true.clone(),
    })
}

/// A received frame rewritten as `Y = Φ·X + N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CsProblem {
    pub y: ComplexMatrix,
    pub phi: ComplexMatrix,
    /// `√(PT/M)`, so that `X = scale·H_aᴴ`.
    pub scale: f64,
}

pub fn to_cs_problem(
    z: &ComplexMatrix,
    theta: &ComplexMatrix,
    transforms: &Transforms,
    snr: f64,
    pilot_len: usize,
    bs_antennas: usize,
) -> Result<CsProblem> {
    let (m, t) = (bs_antennas, pilot_len);
    if theta.shape() != (m, t) {
        return Err(Error::Dimension(format!(
            "Θ is {:?}, expected ({m}, {t})",
            theta.shape()
        )));
    }
    if transforms.v.shape() != (m, m) {
        return Err(Error::Dimension(format!(
            "V is {:?}, expected ({m}, {m})",
            transforms.v.shape()
        )));
    }
    let n = transforms.u.rows();
    if z.shape() != (n, t) {
        return Err(Error::Dimension(format!("Z is {:?}, expected ({n}, {t})", z.shape())));
    }
    let y = z.adjoint().try_matmul(&transforms.u)?;
    let phi = theta
        .adjoint()
        .try_matmul(&transforms.v)?
        .scale((m as f64 / t as f64).sqrt());
    Ok(CsProblem {
        y,
        phi,
        scale: (snr * t as f64 / m as f64).sqrt(),
    })
}

/// `Ĥ = √(M/(PT))·U·X̂ᴴ·Vᴴ`.
pub fn recover_channel(
    x_hat: &ComplexMatrix,
    transforms: &Transforms,
    snr: f64,
    pilot_len: usize,
    bs_antennas: usize,
) -> Result<ComplexMatrix> {
    let n = transforms.u.rows();
    if x_hat.shape() != (bs_antennas, n) {
        return Err(Error::Dimension(format!(
            "X̂ is {:?}, expected ({bs_antennas}, {n})",
            x_hat.shape()
        )));
    }
    let h = transforms
        .u
        .try_matmul(&x_hat.adjoint())?
        .try_matmul(&transforms.v.adjoint())?;
    Ok(h.scale((bs_antennas as f64 / (snr * pilot_len as f64)).sqrt()))
}

/// `‖H − Ĥ‖_F² / ‖H‖_F²` for one frame.
pub fn normalized_error(h: &ComplexMatrix, h_hat: &ComplexMatrix) -> Result<f64> {
    let energy = h.frobenius_norm().powi(2);
    if energy == 0.0 {
        return Err(Error::Metric("NMSE is undefined for a zero channel".into()));
    }
    if h.shape() != h_hat.shape() {
        return Err(Error::Dimension(format!(
            "H is {:?} but Ĥ is {:?}",
            h.shape(),
            h_hat.shape()
        )));
    }
    Ok((h - h_hat).frobenius_norm().powi(2) / energy)
}

/// Mean of the per-frame normalized errors.
pub fn nmse(frames: &[(ComplexMatrix, ComplexMatrix)]) -> Result<f64> {
    if frames.is_empty() {
        return Err(Error::Metric("NMSE of zero frames".into()));
    }
    let total = frames
        .iter()
        .map(|(h, h_hat)| normalized_error(h, h_hat))
        .sum::<Result<f64>>()?;
    Ok(total / frames.len() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algorithm {
    Msp,
    Cmsp,
    MmvSp,
    Sp,
    Genie,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [Self::Msp, Self::Cmsp, Self::MmvSp, Self::Sp, Self::Genie];

    pub fn name(self) -> &'static str {
        match self {
            Self::Msp => "msp",
            Self::Cmsp => "cmsp",
            Self::MmvSp => "mmv_sp",
            Self::Sp => "sp",
            Self::Genie => "genie",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|a| a.name() == s.trim())
            .ok_or_else(|| Error::config("algorithm", format!("unknown algorithm '{s}'")))
    }
}

/// Output of one algorithm on one CS problem.
#[derive(Clone, Debug, PartialEq)]
pub struct Estimate {
    pub x_hat: ChunkSparseMatrix,
    pub t_hat: ChunkSupport,
    pub iterations: usize,
    pub stop_reason: Option<StopReason>,
}

/// Runs `algorithm` on `Y = ΦX + N` with chunk height 1. Per-column SP
/// reports the union of its column supports and the largest column
/// iteration count; the genie reports zero iterations.
pub fn estimate(
    algorithm: Algorithm,
    problem: &CsProblem,
    s_bar: usize,
    prior: PriorSupportInfo,
    gamma: f64,
    t_true: &ChunkSupport,
) -> Result<Estimate> {
    let (y, phi) = (&problem.y, &problem.phi);
    let from = |r: crate::pursuit::RecoveryResult| Estimate {
        x_hat: r.x_hat,
        t_hat: r.t_hat,
        iterations: r.iterations,
        stop_reason: Some(r.stop_reason),
    };
    Ok(match algorithm {
        Algorithm::Msp => from(msp_recover(y, phi, &PursuitConfig::new(s_bar, prior, gamma, 1)?)?),
        Algorithm::Cmsp => from(cmsp_recover(y, phi, &PursuitConfig::new(s_bar, prior, gamma, 1)?)?),
        Algorithm::MmvSp => from(mmv_sp_recover(y, phi, s_bar, gamma, 1)?),
        Algorithm::Sp => {
            let cols = sp_recover_columns(y, phi, s_bar, gamma)?;
            let k = phi.cols();
            let mut data = ComplexMatrix::zeros(k, y.cols());
            let mut t_hat = ChunkSupport::empty(k);
            let mut iterations = 0;
            for (c, r) in cols.iter().enumerate() {
                for row in 0..k {
                    data.set(row, c, r.x_hat.data().get(row, 0));
                }
                t_hat = t_hat.union(&r.t_hat);
                iterations = iterations.max(r.iterations);
            }
            Estimate {
                x_hat: ChunkSparseMatrix::new(data, 1)?,
                t_hat,
                iterations,
                stop_reason: None,
            }
        }
        Algorithm::Genie => Estimate {
            x_hat: genie_ls(y, phi, t_true, 1)?,
            t_hat: t_true.clone(),
            iterations: 0,
            stop_reason: None,
        },
    })
}

/// Outcome of one frame in a tracked sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct FrameRecord {
    pub frame: usize,
    /// `‖H − Ĥ‖_F² / ‖H‖_F²`.
    pub error_ratio: f64,
    pub t_true: ChunkSupport,
    pub t_hat: ChunkSupport,
    /// Whether `T_true ⊆ T̂`.
    pub support_recovered: bool,
    pub iterations: usize,
    /// `‖W‖_F`, the noise level `η` of the frame.
    pub noise_norm: f64,
}

/// Simulates `n_frames` consecutive frames. Frame 1 is recovered without a
/// prior; each later frame uses the previous `T̂` as `T0` with quality
/// `believed_s_c` (clamped to `|T0|`). Random draws do not depend on
/// `algorithm`: all supports first, then per frame the channel, the
/// pilots and the noise.
pub fn run_frame_sequence<R: Rng + ?Sized>(
    scenario: &MimoScenario,
    transforms: &Transforms,
    n_frames: usize,
    algorithm: Algorithm,
    believed_s_c: usize,
    gamma: f64,
    rng: &mut R,
) -> Result<Vec<FrameRecord>> {
    scenario.validate()?;
    let (m, n, t, p) = (
        scenario.bs_antennas,
        scenario.ue_antennas,
        scenario.pilot_len,
        scenario.snr,
    );
    let supports = generate_support_sequence_with(&scenario.evolution, scenario.overlap, n_frames, rng)?;
    let mut prior = PriorSupportInfo::none(m);
    let mut records = Vec::with_capacity(n_frames);
    for (i, t_true) in supports.iter().enumerate() {
        let frame = generate_channel(scenario, transforms, t_true, rng)?;
        let theta = generate_pilots(m, t, rng);
        let w = if scenario.noise {
            ComplexMatrix::from_fn(n, t, |_, _| complex_gaussian(rng))
        } else {
            ComplexMatrix::zeros(n, t)
        };
        let z = &frame.h.try_matmul(&theta)?.scale(p.sqrt()) + &w;
        let problem = to_cs_problem(&z, &theta, transforms, p, t, m)?;
        let est = estimate(algorithm, &problem, scenario.s_bar(), prior, gamma, t_true)?;
        let h_hat = recover_channel(est.x_hat.data(), transforms, p, t, m)?;
        records.push(FrameRecord {
            frame: i + 1,
            error_ratio: normalized_error(&frame.h, &h_hat)?,
            support_recovered: t_true.is_subset(&est.t_hat),
            t_true: t_true.clone(),
            iterations: est.iterations,
            noise_norm: w.frobenius_norm(),
            t_hat: est.t_hat.clone(),
        });
        let s_c = believed_s_c.min(est.t_hat.len());
        prior = PriorSupportInfo::new(est.t_hat, s_c)?;
    }
    Ok(records)
}
