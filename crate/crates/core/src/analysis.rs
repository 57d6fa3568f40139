//! Block-RIP constants and the recovery guarantees built on them.
//!
//! `δ_{k|d}` is the smallest `δ` with `(1−δ)‖x‖² ≤ ‖Φx‖² ≤ (1+δ)‖x‖²` for
//! every `x` supported on at most `k` chunks of height `d`. It equals the
//! largest deviation from 1 of any eigenvalue of `Φ_[S]ᴴ Φ_[S]` over chunk
//! supports `|S| = k` (eigenvalue interlacing makes smaller supports
//! redundant). Exact computation enumerates every support and refuses past a
//! cap; [`block_rip_montecarlo`] samples supports and so only ever yields a
//! lower bound.
//!
//! The constants `C1..C7` and the distortion and iteration-count bounds are
//! closed-form expressions in these constants.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::matrix::{ls_solve, submatrix_by_chunks, ChunkIndexing, ComplexMatrix};
use crate::sparsity::{chunk_support, ChunkSparseMatrix, ChunkSupport};

/// Largest number of supports [`block_rip_exact`] will enumerate by default.
pub const DEFAULT_ENUMERATION_CAP: u128 = 2_000_000;

/// The RIP constant threshold under which `C1 < 1` (and `C5 < 1`).
pub const RIP_THRESHOLD: f64 = 0.246;

/// Slack allowed when comparing computed quantities against inequality
/// bounds in [`lemma1_check`].
const CHECK_TOL: f64 = 1e-10;

/// Order `k` and chunk height `d` of a block-RIP constant `δ_{k|d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RipQuery {
    pub order: usize,
    pub chunk_rows: usize,
}

impl RipQuery {
    pub fn new(order: usize, chunk_rows: usize) -> Self {
        Self { order, chunk_rows }
    }

    fn validate(&self, phi: &ComplexMatrix) -> Result<ChunkIndexing> {
        if self.order == 0 {
            return Err(Error::Dimension("RIP order must be at least 1".into()));
        }
        let idx = ChunkIndexing::new(phi.cols(), self.chunk_rows)?;
        if self.order > idx.chunks() {
            return Err(Error::Dimension(format!(
                "RIP order {} exceeds the {} chunks of Φ",
                self.order,
                idx.chunks()
            )));
        }
        Ok(idx)
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Lexicographic `k`-subsets of `{1..n}`.
#[derive(Clone, Debug)]
pub(crate) struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Self {
            n,
            current: (k <= n).then(|| (1..=k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let k = cur.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if cur[i] < self.n - (k - 1 - i) {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

/// Extreme eigenvalues `(λ_min, λ_max)` of `Φ_[S]ᴴ Φ_[S]`.
pub fn gram_eigen_range(phi: &ComplexMatrix, support: &ChunkSupport, chunk_rows: usize) -> Result<(f64, f64)> {
    let idx = ChunkIndexing::new(phi.cols(), chunk_rows)?;
    let sub = submatrix_by_chunks(phi, support, idx)?;
    Ok(hermitian_extremes(&(sub.adjoint().as_dmatrix() * sub.as_dmatrix())))
}

fn hermitian_extremes(gram: &DMatrix<Complex64>) -> (f64, f64) {
    if gram.nrows() == 0 {
        return (1.0, 1.0);
    }
    let eig = gram.clone().symmetric_eigenvalues();
    let lo = eig.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = eig.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo, hi)
}

fn support_deviation(phi: &ComplexMatrix, idx: ChunkIndexing, chunks: &[usize]) -> f64 {
    let cols: Vec<usize> = chunks.iter().flat_map(|&k| idx.rows_of(k)).collect();
    let sub = phi.as_dmatrix().select_columns(&cols);
    let (lo, hi) = hermitian_extremes(&(sub.adjoint() * &sub));
    (hi - 1.0).max(1.0 - lo)
}

/// Exact `δ_{k|d}` by enumerating all `C(K, k)` chunk supports.
pub fn block_rip_exact(phi: &ComplexMatrix, q: RipQuery) -> Result<f64> {
    block_rip_exact_with_cap(phi, q, DEFAULT_ENUMERATION_CAP)
}

pub fn block_rip_exact_with_cap(phi: &ComplexMatrix, q: RipQuery, cap: u128) -> Result<f64> {
    let idx = q.validate(phi)?;
    let count = binomial(idx.chunks(), q.order);
    if count > cap {
        return Err(Error::EnumerationCap { count, cap });
    }
    Ok(Combinations::new(idx.chunks(), q.order)
        .par_bridge()
        .map(|s| support_deviation(phi, idx, &s))
        .reduce(|| 0.0, f64::max))
}

/// Lower bound on `δ_{k|d}` from `n_samples` distinct uniformly drawn
/// supports. When `n_samples ≥ C(K, k)` every support is visited and the
/// result is exact.
pub fn block_rip_montecarlo<R: Rng + ?Sized>(
    phi: &ComplexMatrix,
    q: RipQuery,
    n_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    let idx = q.validate(phi)?;
    if n_samples == 0 {
        return Err(Error::Dimension("at least one sample is required".into()));
    }
    let total = binomial(idx.chunks(), q.order);
    if n_samples as u128 >= total {
        return Ok(Combinations::new(idx.chunks(), q.order)
            .map(|s| support_deviation(phi, idx, &s))
            .fold(0.0, f64::max));
    }
    let mut seen: HashSet<Vec<usize>> = HashSet::with_capacity(n_samples);
    let mut worst: f64 = 0.0;
    while seen.len() < n_samples {
        let mut s: Vec<usize> = index::sample(rng, idx.chunks(), q.order)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        s.sort_unstable();
        if seen.insert(s.clone()) {
            worst = worst.max(support_deviation(phi, idx, &s));
        }
    }
    Ok(worst)
}

/// `δ` for every requested order, clamping orders above `K` to `K`
/// (a support can never hold more than `K` chunks).
pub fn delta_table(phi: &ComplexMatrix, chunk_rows: usize, orders: &[usize]) -> Result<BTreeMap<usize, f64>> {
    let chunks = ChunkIndexing::new(phi.cols(), chunk_rows)?.chunks();
    let mut out = BTreeMap::new();
    for &k in orders {
        if let std::collections::btree_map::Entry::Vacant(e) = out.entry(k) {
            let eff = k.clamp(1, chunks);
            e.insert(block_rip_exact(phi, RipQuery::new(eff, chunk_rows))?);
        }
    }
    Ok(out)
}

fn check_delta(order: usize, delta: f64) -> Result<f64> {
    if (0.0..1.0).contains(&delta) {
        Ok(delta)
    } else {
        Err(Error::RipViolation { order, delta })
    }
}

/// `s1 = 2s̄ + min(0, |T0| − 2s_c)` and `s2 = 3s̄ + min(0, |T0| − 3s_c)`.
pub fn msp_orders(s_bar: usize, t0_len: usize, s_c: usize) -> (usize, usize) {
    let s1 = 2 * s_bar as i64 + (t0_len as i64 - 2 * s_c as i64).min(0);
    let s2 = 3 * s_bar as i64 + (t0_len as i64 - 3 * s_c as i64).min(0);
    (s1.max(0) as usize, s2.max(0) as usize)
}

/// `s3 = 3s̄ + s_c + min(0, |T0| − |T0 ∩ T| − s_c)`; without the true overlap
/// the worst case `3s̄ + s_c` is returned.
pub fn cmsp_s3(s_bar: usize, s_c: usize, t0_len: usize, overlap: Option<usize>) -> usize {
    let base = 3 * s_bar + s_c;
    match overlap {
        Some(ov) => {
            let slack = t0_len as i64 - ov as i64 - s_c as i64;
            (base as i64 + slack.min(0)).max(0) as usize
        }
        None => base,
    }
}

/// `2δ√(1+δ)√(1−δ+4δ²+4δ³)/(1−δ)²`, the contraction factor `C1` (or `C5`).
pub fn contraction_constant(delta: f64) -> f64 {
    2.0 * delta * (1.0 + delta).sqrt() * (1.0 - delta + 4.0 * delta.powi(2) + 4.0 * delta.powi(3)).sqrt()
        / (1.0 - delta).powi(2)
}

/// Constants for the modified-SP guarantees.
#[derive(Clone, Debug, PartialEq)]
pub struct MspConstants {
    pub s_bar: usize,
    pub t0_len: usize,
    pub s_c: usize,
    pub s1: usize,
    pub s2: usize,
    /// Order → `δ_{order|d}` for the orders `s̄`, `s1`, `s2`.
    pub deltas: BTreeMap<usize, f64>,
    pub c1: f64,
    pub c2: f64,
    pub c4: f64,
    /// `δ_{s2|d} < 0.246`, which makes `C1 < 1`.
    pub valid: bool,
}

impl MspConstants {
    pub fn delta_sbar(&self) -> f64 {
        self.deltas[&self.s_bar]
    }

    pub fn delta_s1(&self) -> f64 {
        self.deltas[&self.s1]
    }

    pub fn delta_s2(&self) -> f64 {
        self.deltas[&self.s2]
    }

    /// `C3(l)`, the noise gain of the per-iteration distortion bound after
    /// `l` iterations.
    pub fn c3(&self, l: u32) -> f64 {
        let ratio = self.c2 / (1.0 - self.c1);
        (self.c1.powi(l as i32) * (1.0 - ratio) + ratio + 1.0) / (1.0 - self.delta_s1()).sqrt()
    }

    fn require_valid(&self) -> Result<()> {
        if self.valid {
            Ok(())
        } else {
            Err(Error::RipViolation {
                order: self.s2,
                delta: self.delta_s2(),
            })
        }
    }
}

pub fn msp_constants(
    delta_sbar: f64,
    delta_s1: f64,
    delta_s2: f64,
    s_bar: usize,
    t0_len: usize,
    s_c: usize,
) -> Result<MspConstants> {
    if s_c > t0_len {
        return Err(Error::PriorInfo(format!("s_c = {s_c} exceeds |T0| = {t0_len}")));
    }
    let (s1, s2) = msp_orders(s_bar, t0_len, s_c);
    let ds = check_delta(s_bar, delta_sbar)?;
    let d1 = check_delta(s1, delta_s1)?;
    let d2 = check_delta(s2, delta_s2)?;

    let c1 = contraction_constant(d2);
    let c2 = 2.0 * ((1.0 + ds) / (1.0 - d1)).sqrt()
        + (1.0 + ds).sqrt()
            * (1.0 + 4.0 * d2 * d2 * (1.0 + d2) / (1.0 - d1)).sqrt()
            * (2.0 * d2 / ((1.0 - ds) * (1.0 - d1).sqrt()) + 2.0 * (1.0 + ds).sqrt() / (1.0 - ds))
        + 1.0;
    let c4 = (1.0 - c1 + c2) / ((1.0 - c1) * (1.0 - d1).sqrt());

    let mut deltas = BTreeMap::new();
    deltas.insert(s_bar, ds);
    deltas.insert(s1, d1);
    deltas.insert(s2, d2);
    Ok(MspConstants {
        s_bar,
        t0_len,
        s_c,
        s1,
        s2,
        deltas,
        c1,
        c2,
        c4,
        valid: d2 < RIP_THRESHOLD,
    })
}

/// Computes every required `δ` of `phi` exactly and feeds [`msp_constants`].
pub fn msp_constants_for_matrix(
    phi: &ComplexMatrix,
    chunk_rows: usize,
    s_bar: usize,
    t0_len: usize,
    s_c: usize,
) -> Result<MspConstants> {
    let (s1, s2) = msp_orders(s_bar, t0_len, s_c);
    let table = delta_table(phi, chunk_rows, &[s_bar, s1, s2])?;
    msp_constants(table[&s_bar], table[&s1], table[&s2], s_bar, t0_len, s_c)
}

/// Block-RIP constants needed by the conservative-M-SP guarantees.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CmspDeltas {
    pub sbar: f64,
    pub two_sbar: f64,
    pub two_sbar_plus_sc: f64,
    pub three_sbar_plus_sc: f64,
    pub s3: f64,
    /// `δ_{s1|d}`, used only by the support-recovery condition of the refined
    /// bound.
    pub s1: f64,
}

impl CmspDeltas {
    pub fn uniform(delta: f64) -> Self {
        Self {
            sbar: delta,
            two_sbar: delta,
            two_sbar_plus_sc: delta,
            three_sbar_plus_sc: delta,
            s3: delta,
            s1: delta,
        }
    }
}

/// Constants for the conservative-M-SP guarantees.
#[derive(Clone, Debug, PartialEq)]
pub struct CmspConstants {
    pub s_bar: usize,
    pub t0_len: usize,
    pub s_c: usize,
    pub overlap: Option<usize>,
    pub s1: usize,
    pub s3: usize,
    pub deltas: CmspDeltas,
    pub c5: f64,
    pub c6: f64,
    pub c7: f64,
    /// `δ_{s3|d} < 0.246`.
    pub valid: bool,
}

impl CmspConstants {
    fn require_valid(&self) -> Result<()> {
        if self.valid {
            Ok(())
        } else {
            Err(Error::RipViolation {
                order: self.s3,
                delta: self.deltas.s3,
            })
        }
    }

    /// Orders of the constants in [`CmspDeltas`], field by field.
    pub fn orders(s_bar: usize, s_c: usize, s3: usize, s1: usize) -> [usize; 6] {
        [s_bar, 2 * s_bar, 2 * s_bar + s_c, 3 * s_bar + s_c, s3, s1]
    }
}

pub fn cmsp_constants(
    deltas: CmspDeltas,
    s_bar: usize,
    s_c: usize,
    t0_len: usize,
    overlap: Option<usize>,
) -> Result<CmspConstants> {
    if s_c > t0_len {
        return Err(Error::PriorInfo(format!("s_c = {s_c} exceeds |T0| = {t0_len}")));
    }
    if let Some(ov) = overlap {
        if ov > t0_len {
            return Err(Error::PriorInfo(format!("overlap {ov} exceeds |T0| = {t0_len}")));
        }
    }
    let s3 = cmsp_s3(s_bar, s_c, t0_len, overlap);
    let (s1, _) = msp_orders(s_bar, t0_len, s_c);
    let ds = check_delta(s_bar, deltas.sbar)?;
    let d2s = check_delta(2 * s_bar, deltas.two_sbar)?;
    let d2sc = check_delta(2 * s_bar + s_c, deltas.two_sbar_plus_sc)?;
    let d3sc = check_delta(3 * s_bar + s_c, deltas.three_sbar_plus_sc)?;
    let d3 = check_delta(s3, deltas.s3)?;
    check_delta(s1, deltas.s1)?;

    let c5 = contraction_constant(d3);
    let c6 = 2.0 * ((1.0 + ds) / (1.0 - d2sc)).sqrt()
        + (1.0 + ds).sqrt()
            * (1.0 + 4.0 * d3sc * d3sc * (1.0 + d3sc) / (1.0 - d2sc)).sqrt()
            * (2.0 * d3sc / ((1.0 - ds) * (1.0 - d2s).sqrt()) + 2.0 * (1.0 + ds).sqrt() / (1.0 - ds))
        + 1.0;
    let c7 = (1.0 - c5 + c6) / ((1.0 - c5) * (1.0 - d2s).sqrt());
    Ok(CmspConstants {
        s_bar,
        t0_len,
        s_c,
        overlap,
        s1,
        s3,
        deltas,
        c5,
        c6,
        c7,
        valid: d3 < RIP_THRESHOLD,
    })
}

pub fn cmsp_constants_for_matrix(
    phi: &ComplexMatrix,
    chunk_rows: usize,
    s_bar: usize,
    s_c: usize,
    t0_len: usize,
    overlap: Option<usize>,
) -> Result<CmspConstants> {
    let s3 = cmsp_s3(s_bar, s_c, t0_len, overlap);
    let (s1, _) = msp_orders(s_bar, t0_len, s_c);
    let orders = CmspConstants::orders(s_bar, s_c, s3, s1);
    let t = delta_table(phi, chunk_rows, &orders)?;
    let deltas = CmspDeltas {
        sbar: t[&orders[0]],
        two_sbar: t[&orders[1]],
        two_sbar_plus_sc: t[&orders[2]],
        three_sbar_plus_sc: t[&orders[3]],
        s3: t[&orders[4]],
        s1: t[&orders[5]],
    };
    cmsp_constants(deltas, s_bar, s_c, t0_len, overlap)
}

/// `max(C4·η, (γ+η)/√(1−δ_{s1|d}))`, the worst-case `‖X − X̂‖_F` of M-SP.
pub fn msp_distortion_bound(c: &MspConstants, gamma: f64, eta: f64) -> Result<f64> {
    c.require_valid()?;
    Ok((c.c4 * eta).max((gamma + eta) / (1.0 - c.delta_s1()).sqrt()))
}

/// `η/√(1−δ_{s̄|d})`, valid once every true chunk is stronger than the
/// distortion bound. Returns `None` when `min_chunk_norm` (the smallest
/// `‖X[k]‖_F` over the true support, supplied by the caller) does not clear
/// that bound.
pub fn msp_refined_bound(c: &MspConstants, gamma: f64, eta: f64, min_chunk_norm: f64) -> Result<Option<f64>> {
    let coarse = msp_distortion_bound(c, gamma, eta)?;
    Ok((min_chunk_norm > coarse).then(|| eta / (1.0 - c.delta_sbar()).sqrt()))
}

/// Iteration budget after which the residue is guaranteed below `γ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConvergenceBound {
    pub n_co: f64,
    /// `max(1, ⌈n_co⌉)`: the first iteration always runs.
    pub guaranteed_iterations: usize,
}

fn convergence(
    contraction: f64,
    gain: f64,
    delta_sbar: f64,
    gamma: f64,
    eta: f64,
    rho: f64,
) -> Result<ConvergenceBound> {
    let floor = gain * eta / (1.0 - contraction);
    let energy_floor = ((gain + contraction - 1.0) / (1.0 - contraction) * eta).powi(2);
    if !(rho > energy_floor) {
        return Err(Error::BoundPrecondition(format!(
            "rho > ((C_gain + C_contraction - 1)/(1 - C_contraction) * eta)^2 failed: rho = {rho}, bound = {energy_floor}"
        )));
    }
    if !(gamma > floor) {
        return Err(Error::BoundPrecondition(format!(
            "gamma > C_gain * eta / (1 - C_contraction) failed: gamma = {gamma}, bound = {floor}"
        )));
    }
    let arg = (gamma - floor) / ((1.0 + delta_sbar).sqrt() * rho.sqrt() + eta - floor);
    let n_co = arg.ln() / contraction.ln();
    let guaranteed = if n_co.is_finite() && n_co > 1.0 {
        n_co.ceil() as usize
    } else {
        1
    };
    Ok(ConvergenceBound {
        n_co,
        guaranteed_iterations: guaranteed,
    })
}

/// `n_co = log_{C1}[(γ − C2η/(1−C1)) / (√(1+δ_{s̄|d})·√ρ + η − C2η/(1−C1))]`.
pub fn msp_convergence_bound(c: &MspConstants, gamma: f64, eta: f64, rho: f64) -> Result<ConvergenceBound> {
    c.require_valid()?;
    convergence(c.c1, c.c2, c.delta_sbar(), gamma, eta, rho)
}

/// `max(C7·η, (γ+η)/√(1−δ_{2s̄|d}))`.
pub fn cmsp_distortion_bound(c: &CmspConstants, gamma: f64, eta: f64) -> Result<f64> {
    c.require_valid()?;
    Ok((c.c7 * eta).max((gamma + eta) / (1.0 - c.deltas.two_sbar).sqrt()))
}

/// Conservative counterpart of [`msp_refined_bound`]. The support-recovery
/// condition uses `√(1−δ_{s1|d})` in its second term.
pub fn cmsp_refined_bound(c: &CmspConstants, gamma: f64, eta: f64, min_chunk_norm: f64) -> Result<Option<f64>> {
    c.require_valid()?;
    let condition = (c.c7 * eta).max((gamma + eta) / (1.0 - c.deltas.s1).sqrt());
    Ok((min_chunk_norm > condition).then(|| eta / (1.0 - c.deltas.sbar).sqrt()))
}

pub fn cmsp_convergence_bound(c: &CmspConstants, gamma: f64, eta: f64, rho: f64) -> Result<ConvergenceBound> {
    c.require_valid()?;
    convergence(c.c5, c.c6, c.deltas.sbar, gamma, eta, rho)
}

/// `Γ(x + ½)/Γ(x)` via log-gamma, which stays finite for large `x`.
pub fn gamma_half_ratio(x: f64) -> f64 {
    (ln_gamma(x + 0.5) - ln_gamma(x)).exp()
}

/// Bound on the mean channel error `E‖Ĥ − H‖_F` of M-SP channel estimation:
/// `√(M/(PT))·((C4 + 1/√(1−δ_{s2}))·Γ(NT+½)/Γ(NT) + γ/√(1−δ_{s2}))`.
pub fn channel_recovery_bound(
    delta_s2: f64,
    c4: f64,
    gamma: f64,
    bs_antennas: usize,
    ue_antennas: usize,
    pilot_len: usize,
    snr: f64,
) -> Result<f64> {
    if !(0.0..RIP_THRESHOLD).contains(&delta_s2) {
        return Err(Error::RipViolation {
            order: 0,
            delta: delta_s2,
        });
    }
    if !(snr > 0.0) || pilot_len == 0 || ue_antennas == 0 {
        return Err(Error::BoundPrecondition(
            "SNR, pilot length and UE antenna count must be positive".into(),
        ));
    }
    let nt = (ue_antennas * pilot_len) as f64;
    let inv = 1.0 / (1.0 - delta_s2).sqrt();
    Ok((bs_antennas as f64 / (snr * pilot_len as f64)).sqrt() * ((c4 + inv) * gamma_half_ratio(nt) + gamma * inv))
}

/// Both sides of one inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InequalityCheck {
    pub lhs: f64,
    pub rhs: f64,
}

impl InequalityCheck {
    fn le(lhs: f64, rhs: f64) -> Self {
        Self { lhs, rhs }
    }

    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs + CHECK_TOL * (1.0 + self.rhs.abs())
    }
}

/// Eigenvalue and pseudo-inverse bounds for one support.
#[derive(Clone, Debug, PartialEq)]
pub struct SupportBounds {
    pub support: ChunkSupport,
    pub order: usize,
    /// `1 − δ_k ≤ λ_min`.
    pub lower: InequalityCheck,
    /// `λ_max ≤ 1 + δ_k`.
    pub upper: InequalityCheck,
    /// `σ_max(Φ_[T]^†) ≤ 1/√(1 − δ_k)`; the right side is `+∞` when `δ_k ≥ 1`.
    pub pinv: InequalityCheck,
}

impl SupportBounds {
    pub fn holds(&self) -> bool {
        self.lower.holds() && self.upper.holds() && self.pinv.holds()
    }
}

/// Numerical evaluation of the four block-RIP inequalities for one instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Lemma1Report {
    /// `δ_{k|d}` for `k = 1..=deltas.len()`.
    pub deltas: Vec<f64>,
    /// Item 1: `δ_{k1|d} ≤ δ_{k2|d}` whenever `k1 ≤ k2`.
    pub monotone: bool,
    /// Item 2 for `T1`, `T2` and `T1 ∪ T2`.
    pub support_bounds: Vec<SupportBounds>,
    /// Item 3: `σ_max(Φ_[T1]ᴴ Φ_[T2]) ≤ δ_{k1+k2|d}`.
    pub cross_gram: InequalityCheck,
    /// Item 4: `‖P_(T2) Φ X‖_F ≤ δ_{k1+k2|d}·√(1+δ_{k1+k2|d})·‖X‖_F`.
    pub projection: InequalityCheck,
}

impl Lemma1Report {
    pub fn item_results(&self) -> [bool; 4] {
        [
            self.monotone,
            self.support_bounds.iter().all(SupportBounds::holds),
            self.cross_gram.holds(),
            self.projection.holds(),
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.item_results().iter().all(|&b| b)
    }
}

fn spectral_norm(m: &DMatrix<Complex64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}

/// Checks the four block-RIP inequalities on `Φ` for disjoint supports `T1`,
/// `T2` and a signal `X` supported inside `T1`, using exact `δ` values up to
/// order `max(q.order, |T1| + |T2|)`.
pub fn lemma1_check(
    phi: &ComplexMatrix,
    t1: &ChunkSupport,
    t2: &ChunkSupport,
    x: &ChunkSparseMatrix,
    q: RipQuery,
) -> Result<Lemma1Report> {
    let idx = ChunkIndexing::new(phi.cols(), q.chunk_rows)?;
    if !t1.intersection(t2).is_empty() {
        return Err(Error::Dimension("T1 and T2 must be disjoint".into()));
    }
    if x.indexing() != idx {
        return Err(Error::Dimension("X does not match the chunk layout of Φ".into()));
    }
    if !chunk_support(x, 0.0).is_subset(t1) {
        return Err(Error::Dimension("X must be supported inside T1".into()));
    }
    let (k1, k2) = (t1.len(), t2.len());
    let top = q.order.max(k1 + k2).min(idx.chunks());
    let deltas = (1..=top)
        .map(|k| block_rip_exact(phi, RipQuery::new(k, q.chunk_rows)))
        .collect::<Result<Vec<_>>>()?;
    let delta_of = |k: usize| if k == 0 { 0.0 } else { deltas[k - 1] };
    let monotone = deltas.windows(2).all(|w| w[0] <= w[1] + CHECK_TOL);

    let union = t1.union(t2);
    let mut support_bounds = Vec::new();
    for t in [t1, t2, &union] {
        if t.is_empty() {
            continue;
        }
        let k = t.len();
        let delta = delta_of(k);
        let sub = submatrix_by_chunks(phi, t, idx)?;
        let (lo, hi) = hermitian_extremes(&(sub.adjoint().as_dmatrix() * sub.as_dmatrix()));
        let pinv_norm = if lo > 0.0 { 1.0 / lo.sqrt() } else { f64::INFINITY };
        let pinv_rhs = if delta < 1.0 {
            1.0 / (1.0 - delta).sqrt()
        } else {
            f64::INFINITY
        };
        support_bounds.push(SupportBounds {
            support: t.clone(),
            order: k,
            lower: InequalityCheck::le(1.0 - delta, lo),
            upper: InequalityCheck::le(hi, 1.0 + delta),
            pinv: if pinv_rhs.is_infinite() {
                InequalityCheck::le(0.0, pinv_rhs)
            } else {
                InequalityCheck::le(pinv_norm, pinv_rhs)
            },
        });
    }

    let d12 = delta_of(k1 + k2);
    let phi1 = submatrix_by_chunks(phi, t1, idx)?;
    let phi2 = submatrix_by_chunks(phi, t2, idx)?;
    let cross = spectral_norm(&(phi1.adjoint().as_dmatrix() * phi2.as_dmatrix()));

    // P_(T2)·(ΦX) is Φ_[T2] times the least-squares coefficients of ΦX on T2.
    let signal = phi * x.data();
    let projected = &phi2 * &ls_solve(&phi2, &signal)?;
    let projection = InequalityCheck::le(
        projected.frobenius_norm(),
        d12 * (1.0 + d12).sqrt() * x.data().frobenius_norm(),
    );

    Ok(Lemma1Report {
        deltas,
        monotone,
        support_bounds,
        cross_gram: InequalityCheck::le(cross, d12),
        projection,
    })
}

/// Flat `key=value` record of evaluated constants and bounds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BoundReport {
    entries: Vec<(String, String)>,
}

impl BoundReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    pub fn push_f64(&mut self, key: impl Into<String>, value: f64) {
        self.push(key, format_float(value));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn csv_header(&self) -> String {
        self.entries
            .iter()
            .map(|(k, _)| k.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn csv_row(&self) -> String {
        self.entries
            .iter()
            .map(|(_, v)| v.as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn add_msp(&mut self, c: &MspConstants) {
        self.push("msp.s1", c.s1);
        self.push("msp.s2", c.s2);
        self.push_f64("msp.delta_sbar", c.delta_sbar());
        self.push_f64("msp.delta_s1", c.delta_s1());
        self.push_f64("msp.delta_s2", c.delta_s2());
        self.push_f64("msp.C1", c.c1);
        self.push_f64("msp.C2", c.c2);
        self.push_f64("msp.C4", c.c4);
        self.push("msp.valid", c.valid);
    }

    pub fn add_cmsp(&mut self, c: &CmspConstants) {
        self.push("cmsp.s3", c.s3);
        self.push_f64("cmsp.delta_s3", c.deltas.s3);
        self.push_f64("cmsp.delta_2sbar", c.deltas.two_sbar);
        self.push_f64("cmsp.C5", c.c5);
        self.push_f64("cmsp.C6", c.c6);
        self.push_f64("cmsp.C7", c.c7);
        self.push("cmsp.valid", c.valid);
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        Ok(())
    }
}

/// Nine significant digits in scientific notation.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.8e}")
    } else {
        v.to_string()
    }
}
