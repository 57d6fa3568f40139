//! Greedy recovery with prior support information.
//!
//! [`msp_recover`] is subspace pursuit extended to chunk-sparse signals that
//! always keeps `s_c` chunks of the prior support `T0` in both the merge and
//! the refinement step. [`cmsp_recover`] is the conservative variant: it still
//! seeds the merged candidate set with prior chunks, but refines over the
//! whole index set so that an over-optimistic `s_c` cannot lock the estimate
//! onto wrong prior chunks.
//!
//! Both share one iteration loop:
//!
//! 1. `T̂_0 = ∅`, `R_0 = Y`.
//! 2. merge `T_a` from `‖(Φᴴ R_l)[k]‖_F`, least squares on `T_a`,
//!    refine `T̂_{l+1}` from the LS chunk norms, least squares on
//!    `T̂_{l+1}`, new residue `R_{l+1}`.
//! 3. stop with iterate `l+1` once `‖R_{l+1}‖_F ≤ γ`, or with iterate `l`
//!    once the residue stops decreasing.

use crate::error::{Error, Result};
use crate::matrix::{chunk_norms, ls_solve_detailed, submatrix_by_chunks, top_k_chunks, ChunkIndexing, ComplexMatrix};
use crate::sparsity::{validate_prior, ChunkSparseMatrix, ChunkSupport, PriorSupportInfo};

/// Residues below this fraction of `‖Y‖_F` are treated as zero.
pub const RESIDUE_FLOOR: f64 = 1e-12;

pub const DEFAULT_MAX_ITER: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct PursuitConfig {
    /// Maximum chunk sparsity level `s̄`.
    pub s_bar: usize,
    pub prior: PriorSupportInfo,
    /// Residue threshold `γ`.
    pub gamma: f64,
    /// Chunk height `d`.
    pub chunk_rows: usize,
    pub max_iter: usize,
}

impl PursuitConfig {
    pub fn new(s_bar: usize, prior: PriorSupportInfo, gamma: f64, chunk_rows: usize) -> Result<Self> {
        let cfg = Self {
            s_bar,
            prior,
            gamma,
            chunk_rows,
            max_iter: DEFAULT_MAX_ITER,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// No prior support (`T0 = ∅`, `s_c = 0`).
    pub fn without_prior(s_bar: usize, gamma: f64, chunk_rows: usize) -> Result<Self> {
        Self::new(s_bar, PriorSupportInfo::none(0), gamma, chunk_rows)
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn validate(&self) -> Result<()> {
        validate_prior(&self.prior, self.s_bar)?;
        if self.s_bar == 0 {
            return Err(Error::PriorInfo("s_bar must be at least 1".into()));
        }
        if !(self.gamma >= 0.0) {
            return Err(Error::PriorInfo(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if self.max_iter == 0 {
            return Err(Error::PriorInfo("max_iter must be at least 1".into()));
        }
        if self.chunk_rows == 0 {
            return Err(Error::Dimension("chunk height must be at least 1".into()));
        }
        Ok(())
    }

    fn s_c(&self) -> usize {
        self.prior.s_c()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StopReason {
    ThresholdMet,
    ResidueNonDecreasing,
    MaxIterations,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecoveryResult {
    pub x_hat: ChunkSparseMatrix,
    pub t_hat: ChunkSupport,
    /// `‖R_l‖_F` for `l = 0..=iterations`, starting with `‖Y‖_F`.
    pub residue_norms: Vec<f64>,
    /// Refined support `T̂_{l+1}` of every executed iteration.
    pub support_trace: Vec<ChunkSupport>,
    pub iterations: usize,
    pub stop_reason: StopReason,
    /// Some least-squares step ran on a rank-deficient submatrix.
    pub rank_deficient_ls: bool,
}

/// Prior support restated over the universe `{1..K}` of the measurement matrix.
struct Problem<'a> {
    y: &'a ComplexMatrix,
    phi: &'a ComplexMatrix,
    phi_h: ComplexMatrix,
    idx: ChunkIndexing,
    t0: ChunkSupport,
    all: ChunkSupport,
}

impl<'a> Problem<'a> {
    fn new(y: &'a ComplexMatrix, phi: &'a ComplexMatrix, cfg: &PursuitConfig) -> Result<Self> {
        cfg.validate()?;
        if y.rows() != phi.rows() {
            return Err(Error::Dimension(format!(
                "Y has {} rows but Φ has {}",
                y.rows(),
                phi.rows()
            )));
        }
        let idx = ChunkIndexing::new(phi.cols(), cfg.chunk_rows)?;
        let k = idx.chunks();
        if cfg.s_bar > k {
            return Err(Error::PriorInfo(format!("s_bar = {} exceeds K = {k}", cfg.s_bar)));
        }
        let t0 = ChunkSupport::new(cfg.prior.t0().iter(), k)?;
        Ok(Self {
            y,
            phi,
            phi_h: phi.adjoint(),
            idx,
            t0,
            all: ChunkSupport::full(k),
        })
    }

    fn correlation_norms(&self, residue: &ComplexMatrix) -> Vec<f64> {
        chunk_norms(&(&self.phi_h * residue), self.idx).expect("Φᴴ R has K·d rows")
    }
}

fn msp_merge_from_scores(
    scores: &[f64],
    t_hat: &ChunkSupport,
    t0: &ChunkSupport,
    all: &ChunkSupport,
    cfg: &PursuitConfig,
) -> Result<ChunkSupport> {
    let s_c = cfg.s_c();
    let t_b = top_k_chunks(scores, s_c, t0)?;
    let t_c = top_k_chunks(scores, cfg.s_bar - s_c, &all.difference(&t_b))?;
    Ok(t_hat.union(&t_b).union(&t_c))
}

fn msp_refine_from_norms(
    norms: &[f64],
    t0: &ChunkSupport,
    all: &ChunkSupport,
    cfg: &PursuitConfig,
) -> Result<ChunkSupport> {
    let s_c = cfg.s_c();
    let first = top_k_chunks(norms, s_c, t0)?;
    let second = top_k_chunks(norms, cfg.s_bar - s_c, &all.difference(&first))?;
    Ok(first.union(&second))
}

fn cmsp_merge_from_scores(
    scores: &[f64],
    t_hat: &ChunkSupport,
    t0: &ChunkSupport,
    all: &ChunkSupport,
    cfg: &PursuitConfig,
) -> Result<ChunkSupport> {
    let already = t_hat.intersection(t0).len();
    let t_b = if cfg.s_c() > already {
        top_k_chunks(scores, cfg.s_c() - already, &t0.difference(t_hat))?
    } else {
        ChunkSupport::empty(all.universe())
    };
    let t_c = top_k_chunks(scores, cfg.s_bar, all)?;
    Ok(t_hat.union(&t_b).union(&t_c))
}

/// Support merge of M-SP: `T̂_l ∪ T_b ∪ T_c` with `T_b` the best `s_c` prior
/// chunks and `T_c` the best `s̄ − s_c` chunks outside `T_b`, both ranked by
/// `‖(Φᴴ R)[k]‖_F`.
pub fn msp_support_merge(
    residue: &ComplexMatrix,
    phi: &ComplexMatrix,
    t_hat: &ChunkSupport,
    cfg: &PursuitConfig,
) -> Result<ChunkSupport> {
    let p = Problem::new(residue, phi, cfg)?;
    let t_hat = ChunkSupport::new(t_hat.iter(), p.idx.chunks())?;
    msp_merge_from_scores(&p.correlation_norms(residue), &t_hat, &p.t0, &p.all, cfg)
}

/// Support refinement of M-SP: the best `s_c` chunks of `Z` inside `T0`, then
/// the best `s̄ − s_c` of the remaining chunks (which may re-enter `T0`).
pub fn msp_support_refine(z: &ChunkSparseMatrix, cfg: &PursuitConfig) -> Result<ChunkSupport> {
    cfg.validate()?;
    let k = z.indexing().chunks();
    let t0 = ChunkSupport::new(cfg.prior.t0().iter(), k)?;
    msp_refine_from_norms(&z.chunk_norms(), &t0, &ChunkSupport::full(k), cfg)
}

/// Support merge of conservative M-SP: with `s̃ = s_c − |T̂_l ∩ T0|`, `T_b` is
/// the best `s̃` chunks of `T0 \ T̂_l` (empty when `s̃ ≤ 0`) and `T_c` the
/// global best `s̄`.
pub fn cmsp_support_merge(
    residue: &ComplexMatrix,
    phi: &ComplexMatrix,
    t_hat: &ChunkSupport,
    cfg: &PursuitConfig,
) -> Result<ChunkSupport> {
    let p = Problem::new(residue, phi, cfg)?;
    let t_hat = ChunkSupport::new(t_hat.iter(), p.idx.chunks())?;
    cmsp_merge_from_scores(&p.correlation_norms(residue), &t_hat, &p.t0, &p.all, cfg)
}

#[derive(Clone, Copy)]
enum Variant {
    Modified,
    Conservative,
}

fn run(y: &ComplexMatrix, phi: &ComplexMatrix, cfg: &PursuitConfig, variant: Variant) -> Result<RecoveryResult> {
    let p = Problem::new(y, phi, cfg)?;
    let idx = p.idx;
    let cols = y.cols();

    let mut t_prev = ChunkSupport::empty(idx.chunks());
    let mut x_prev = ChunkSparseMatrix::zeros(idx, cols);
    let mut residue = y.clone();
    let mut residue_norms = vec![y.frobenius_norm()];
    let mut support_trace = Vec::new();
    let mut rank_deficient_ls = false;
    // Least-squares rounding keeps an exactly explained Y from reaching a
    // residue of 0, so residues at rounding level count as meeting γ.
    let threshold = cfg.gamma.max(RESIDUE_FLOOR * residue_norms[0]);

    for l in 0..cfg.max_iter {
        let scores = p.correlation_norms(&residue);
        let t_a = match variant {
            Variant::Modified => msp_merge_from_scores(&scores, &t_prev, &p.t0, &p.all, cfg)?,
            Variant::Conservative => cmsp_merge_from_scores(&scores, &t_prev, &p.t0, &p.all, cfg)?,
        };

        let merged = ls_solve_detailed(&submatrix_by_chunks(p.phi, &t_a, idx)?, p.y)?;
        rank_deficient_ls |= merged.rank_deficient;
        let z = ChunkSparseMatrix::scatter(idx, &t_a, &merged.x);

        let t_next = match variant {
            Variant::Modified => msp_refine_from_norms(&z.chunk_norms(), &p.t0, &p.all, cfg)?,
            Variant::Conservative => top_k_chunks(&z.chunk_norms(), cfg.s_bar, &p.all)?,
        };

        let phi_t = submatrix_by_chunks(p.phi, &t_next, idx)?;
        let est = ls_solve_detailed(&phi_t, p.y)?;
        rank_deficient_ls |= est.rank_deficient;
        let next_residue = p.y - &(&phi_t * &est.x);
        let next_norm = next_residue.frobenius_norm();
        let prev_norm = *residue_norms.last().expect("seeded with ‖Y‖");
        residue_norms.push(next_norm);
        support_trace.push(t_next.clone());

        if next_norm <= threshold {
            return Ok(RecoveryResult {
                x_hat: ChunkSparseMatrix::scatter(idx, &t_next, &est.x),
                t_hat: t_next,
                residue_norms,
                support_trace,
                iterations: l + 1,
                stop_reason: StopReason::ThresholdMet,
                rank_deficient_ls,
            });
        }
        if next_norm >= prev_norm {
            return Ok(RecoveryResult {
                x_hat: x_prev,
                t_hat: t_prev,
                residue_norms,
                support_trace,
                iterations: l + 1,
                stop_reason: StopReason::ResidueNonDecreasing,
                rank_deficient_ls,
            });
        }
        t_prev = t_next;
        x_prev = ChunkSparseMatrix::scatter(idx, &t_prev, &est.x);
        residue = next_residue;
    }

    // Every executed iteration strictly reduced the residue, so the last
    // iterate is also the best one.
    Ok(RecoveryResult {
        x_hat: x_prev,
        t_hat: t_prev,
        iterations: cfg.max_iter,
        residue_norms,
        support_trace,
        stop_reason: StopReason::MaxIterations,
        rank_deficient_ls,
    })
}

/// Modified subspace pursuit.
pub fn msp_recover(y: &ComplexMatrix, phi: &ComplexMatrix, cfg: &PursuitConfig) -> Result<RecoveryResult> {
    run(y, phi, cfg, Variant::Modified)
}

/// Conservative modified subspace pursuit.
pub fn cmsp_recover(y: &ComplexMatrix, phi: &ComplexMatrix, cfg: &PursuitConfig) -> Result<RecoveryResult> {
    run(y, phi, cfg, Variant::Conservative)
}

/// Conventional subspace pursuit: M-SP with `d = 1` and no prior.
pub fn sp_recover(y: &ComplexMatrix, phi: &ComplexMatrix, s_bar: usize, gamma: f64) -> Result<RecoveryResult> {
    msp_recover(y, phi, &PursuitConfig::without_prior(s_bar, gamma, 1)?)
}

/// Subspace pursuit adapted to chunk sparsity, without prior: M-SP with
/// `s_c = 0`.
pub fn mmv_sp_recover(
    y: &ComplexMatrix,
    phi: &ComplexMatrix,
    s_bar: usize,
    gamma: f64,
    chunk_rows: usize,
) -> Result<RecoveryResult> {
    msp_recover(y, phi, &PursuitConfig::without_prior(s_bar, gamma, chunk_rows)?)
}

/// Runs [`sp_recover`] on every column of `Y` separately, with the threshold
/// split evenly in energy (`γ/√L` per column).
pub fn sp_recover_columns(
    y: &ComplexMatrix,
    phi: &ComplexMatrix,
    s_bar: usize,
    gamma: f64,
) -> Result<Vec<RecoveryResult>> {
    let per_column = gamma / (y.cols().max(1) as f64).sqrt();
    (0..y.cols())
        .map(|c| sp_recover(&y.column(c), phi, s_bar, per_column))
        .collect()
}

/// Least squares restricted to a known support; zero elsewhere.
pub fn genie_ls(
    y: &ComplexMatrix,
    phi: &ComplexMatrix,
    t_true: &ChunkSupport,
    chunk_rows: usize,
) -> Result<ChunkSparseMatrix> {
    if y.rows() != phi.rows() {
        return Err(Error::Dimension(format!(
            "Y has {} rows but Φ has {}",
            y.rows(),
            phi.rows()
        )));
    }
    let idx = ChunkIndexing::new(phi.cols(), chunk_rows)?;
    let sol = ls_solve_detailed(&submatrix_by_chunks(phi, t_true, idx)?, y)?;
    Ok(ChunkSparseMatrix::scatter(idx, t_true, &sol.x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sparsity::chunk_support;
    use num_complex::Complex64;

    fn s(ix: &[usize], k: usize) -> ChunkSupport {
        ChunkSupport::new(ix.to_vec(), k).unwrap()
    }

    fn prior(ix: &[usize], k: usize, s_c: usize) -> PriorSupportInfo {
        PriorSupportInfo::new(s(ix, k), s_c).unwrap()
    }

    fn column(v: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(v.len(), 1, v).unwrap()
    }

    #[test]
    fn merge_degenerates_to_sp_without_prior() {
        let phi = ComplexMatrix::identity(5);
        let r = column(&[1.0, 4.0, 0.0, 3.0, 2.0]);
        let cfg = PursuitConfig::without_prior(2, 0.0, 1).unwrap();
        let t_a = msp_support_merge(&r, &phi, &ChunkSupport::empty(5), &cfg).unwrap();
        assert_eq!(t_a, s(&[2, 4], 5));
    }

    #[test]
    fn merge_hand_checked() {
        let phi = ComplexMatrix::identity(4);
        let r = column(&[0.0, 5.0, 0.0, 3.0]);
        let cfg = PursuitConfig::new(2, prior(&[2], 4, 1), 0.0, 1).unwrap();
        let t_a = msp_support_merge(&r, &phi, &ChunkSupport::empty(4), &cfg).unwrap();
        assert_eq!(t_a, s(&[2, 4], 4));
    }

    #[test]
    fn refine_examples() {
        let z = ChunkSparseMatrix::new(column(&[9.0, 1.0, 8.0, 7.0]), 1).unwrap();
        let plain = PursuitConfig::without_prior(2, 0.0, 1).unwrap();
        assert_eq!(msp_support_refine(&z, &plain).unwrap(), s(&[1, 3], 4));

        let cfg = PursuitConfig::new(2, prior(&[2, 4], 4, 1), 0.0, 1).unwrap();
        assert_eq!(msp_support_refine(&z, &cfg).unwrap(), s(&[1, 4], 4));

        let z = ChunkSparseMatrix::new(column(&[1.0, 9.0, 8.0, 0.0]), 1).unwrap();
        let cfg = PursuitConfig::new(2, prior(&[2, 3], 4, 1), 0.0, 1).unwrap();
        assert_eq!(msp_support_refine(&z, &cfg).unwrap(), s(&[2, 3], 4));
    }

    #[test]
    fn refine_fills_with_zero_norm_chunks() {
        let z = ChunkSparseMatrix::new(column(&[0.0, 0.0, 0.0, 5.0, 0.0]), 1).unwrap();
        let cfg = PursuitConfig::new(3, prior(&[2, 3], 5, 2), 0.0, 1).unwrap();
        assert_eq!(msp_support_refine(&z, &cfg).unwrap(), s(&[2, 3, 4], 5));
    }

    #[test]
    fn cmsp_merge_examples() {
        let phi = ComplexMatrix::identity(8);
        let r = column(&[1.0, 2.0, 9.0, 8.0, 0.0, 0.0, 0.0, 0.0]);
        let cfg = PursuitConfig::new(2, prior(&[1, 2], 8, 2), 0.0, 1).unwrap();
        let t_a = cmsp_support_merge(&r, &phi, &ChunkSupport::empty(8), &cfg).unwrap();
        assert_eq!(t_a, s(&[1, 2, 3, 4], 8));

        // T̂_l already holds s_c prior chunks: nothing is forced from T0.
        let t_hat = s(&[1, 2], 8);
        let t_a = cmsp_support_merge(&r, &phi, &t_hat, &cfg).unwrap();
        assert_eq!(t_a, s(&[1, 2, 3, 4], 8));
        let r2 = column(&[0.0, 0.0, 9.0, 8.0, 7.0, 0.0, 0.0, 0.0]);
        let cfg2 = PursuitConfig::new(2, prior(&[1, 2], 8, 1), 0.0, 1).unwrap();
        let t_a = cmsp_support_merge(&r2, &phi, &s(&[2, 6], 8), &cfg2).unwrap();
        assert_eq!(t_a, s(&[2, 3, 4, 6], 8));

        let none = PursuitConfig::without_prior(2, 0.0, 1).unwrap();
        let t_a = cmsp_support_merge(&r, &phi, &ChunkSupport::empty(8), &none).unwrap();
        assert_eq!(t_a, s(&[3, 4], 8));
    }

    #[test]
    fn identity_measurements_recover_exactly() {
        let phi = ComplexMatrix::identity(6);
        let y = column(&[0.0, 2.0, 0.0, 0.0, -1.5, 0.0]);
        let cfg = PursuitConfig::without_prior(2, 0.0, 1).unwrap();
        let res = msp_recover(&y, &phi, &cfg).unwrap();
        assert_eq!(res.t_hat, s(&[2, 5], 6));
        assert_eq!(res.stop_reason, StopReason::ThresholdMet);
        assert_eq!(res.iterations, 1);
        assert_eq!(res.residue_norms.len(), 2);
        assert!(res.x_hat.data().max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn zero_measurements() {
        let phi = ComplexMatrix::identity(5);
        let y = ComplexMatrix::zeros(5, 2);
        let cfg = PursuitConfig::new(2, prior(&[4], 5, 1), 0.0, 1).unwrap();
        for res in [
            msp_recover(&y, &phi, &cfg).unwrap(),
            cmsp_recover(&y, &phi, &cfg).unwrap(),
        ] {
            assert!(res.x_hat.data().is_zero());
            assert_eq!(res.iterations, 1);
            assert_eq!(res.residue_norms, vec![0.0, 0.0]);
            assert_eq!(res.stop_reason, StopReason::ThresholdMet);
        }
    }

    #[test]
    fn chunked_identity_recovery() {
        let phi = ComplexMatrix::identity(8);
        let y = ComplexMatrix::from_real_rows(
            8,
            2,
            &[
                0.0, 0.0, 0.0, 0.0, 1.0, 2.0, 3.0, -1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0,
            ],
        )
        .unwrap();
        let res = mmv_sp_recover(&y, &phi, 1, 1e-12, 2).unwrap();
        assert_eq!(res.t_hat, s(&[2], 4));
        assert!(res.x_hat.data().max_abs_diff(&y) < 1e-12);
    }

    #[test]
    fn dimension_and_config_errors() {
        let phi = ComplexMatrix::identity(4);
        let y = ComplexMatrix::zeros(3, 1);
        let cfg = PursuitConfig::without_prior(1, 0.0, 1).unwrap();
        assert!(matches!(msp_recover(&y, &phi, &cfg), Err(Error::Dimension(_))));
        assert!(matches!(
            msp_recover(
                &ComplexMatrix::zeros(4, 1),
                &phi,
                &PursuitConfig::without_prior(1, 0.0, 3).unwrap()
            ),
            Err(Error::Dimension(_))
        ));
        let too_many = PursuitConfig::without_prior(5, 0.0, 1).unwrap();
        assert!(matches!(
            msp_recover(&ComplexMatrix::zeros(4, 1), &phi, &too_many),
            Err(Error::PriorInfo(_))
        ));
        // |T0| > s_bar
        assert!(PursuitConfig::new(1, prior(&[1, 2], 4, 1), 0.0, 1).is_err());
        assert!(PursuitConfig::without_prior(1, -1.0, 1).is_err());
    }

    #[test]
    fn stops_on_non_decreasing_residue_with_previous_iterate() {
        // The second iteration re-selects chunk 1, so the residue stays put.
        let phi = ComplexMatrix::identity(3);
        let y = column(&[3.0, 2.0, 1.0]);
        let cfg = PursuitConfig::without_prior(1, 0.0, 1).unwrap();
        let res = msp_recover(&y, &phi, &cfg).unwrap();
        assert_eq!(res.stop_reason, StopReason::ResidueNonDecreasing);
        assert_eq!(res.iterations, 2);
        assert_eq!(res.t_hat, s(&[1], 3));
        assert_eq!(res.residue_norms.len(), res.iterations + 1);
        let best = res.residue_norms.iter().copied().fold(f64::INFINITY, f64::min);
        let returned = (&y - &(&phi * res.x_hat.data())).frobenius_norm();
        assert!((returned - best).abs() < 1e-12);
        assert!(chunk_support(&res.x_hat, 0.0).is_subset(&res.t_hat));
    }

    #[test]
    fn genie_examples() {
        let phi =
            ComplexMatrix::from_real_rows(3, 4, &[1.0, 0.0, 0.5, 0.0, 0.0, 1.0, 0.0, 0.2, 0.0, 0.0, 1.0, 1.0]).unwrap();
        let x = ComplexMatrix::from_row_major(
            4,
            1,
            vec![
                Complex64::new(1.0, 1.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-2.0, 0.5),
                Complex64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let y = &phi * &x;
        let t = s(&[1, 3], 4);
        let est = genie_ls(&y, &phi, &t, 1).unwrap();
        assert!(est.data().max_abs_diff(&x) < 1e-8);
        assert!(genie_ls(&ComplexMatrix::zeros(3, 1), &phi, &t, 1)
            .unwrap()
            .data()
            .is_zero());
    }

    #[test]
    fn columnwise_sp_matches_per_column_runs() {
        let phi = ComplexMatrix::identity(4);
        let y = ComplexMatrix::from_real_rows(4, 2, &[1.0, 0.0, 0.0, 0.0, 0.0, 3.0, 0.0, 0.0]).unwrap();
        let runs = sp_recover_columns(&y, &phi, 1, 0.0).unwrap();
        assert_eq!(runs.len(), 2);
        assert_eq!(runs[0].t_hat, s(&[1], 4));
        assert_eq!(runs[1].t_hat, s(&[3], 4));
    }
}
