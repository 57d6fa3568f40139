//! Brute-force reference implementations.
//!
//! Both functions enumerate every candidate support, so they are slow and
//! only usable at desk scale. They share no selection or eigenvalue code with
//! [`crate::pursuit`] and [`crate::analysis`] and serve as independent
//! oracles for them.

use crate::error::{Error, Result};
use crate::matrix::{ls_solve, submatrix_by_chunks, ChunkIndexing, ComplexMatrix};
use crate::sparsity::ChunkSupport;

/// Largest number of supports [`exhaustive_best_support`] will try.
pub const BEST_SUPPORT_CAP: u128 = 500_000;

/// Largest number of supports [`rip_bruteforce_reference`] will try.
pub const RIP_REFERENCE_CAP: u128 = 2_000_000;

/// Optional requirement `|S ∩ T0| ≥ min_from_t0` on candidate supports.
#[derive(Clone, Debug)]
pub struct PriorConstraint {
    pub t0: ChunkSupport,
    pub min_from_t0: usize,
}

fn count_subsets(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i as u128 + 1);
    }
    c
}

/// Calls `visit` on every `k`-subset of `{1..n}` in lexicographic order.
fn for_each_subset(n: usize, k: usize, visit: &mut impl FnMut(&[usize])) {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        let remaining = k - cur.len();
        for i in start..=n + 1 - remaining {
            cur.push(i);
            rec(i + 1, n, k, cur, visit);
            cur.pop();
        }
    }
    if k <= n {
        rec(1, n, k, &mut Vec::with_capacity(k), visit);
    }
}

/// The size-`s` chunk support minimizing `‖Y − Φ_[S] Φ_[S]^† Y‖_F`, ties
/// going to the lexicographically first support.
pub fn exhaustive_best_support(
    y: &ComplexMatrix,
    phi: &ComplexMatrix,
    s: usize,
    chunk_rows: usize,
    constraint: Option<&PriorConstraint>,
) -> Result<ChunkSupport> {
    let idx = ChunkIndexing::new(phi.cols(), chunk_rows)?;
    if y.rows() != phi.rows() {
        return Err(Error::Dimension(format!(
            "Y has {} rows but Φ has {}",
            y.rows(),
            phi.rows()
        )));
    }
    let k = idx.chunks();
    if s > k {
        return Err(Error::Selection {
            requested: s,
            available: k,
        });
    }
    if let Some(c) = constraint {
        if c.t0.universe() != k {
            return Err(Error::Dimension("T0 universe does not match Φ".into()));
        }
    }
    let count = count_subsets(k, s);
    if count > BEST_SUPPORT_CAP {
        return Err(Error::EnumerationCap {
            count,
            cap: BEST_SUPPORT_CAP,
        });
    }

    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut failure = None;
    for_each_subset(k, s, &mut |cand| {
        if failure.is_some() {
            return;
        }
        if let Some(c) = constraint {
            if cand.iter().filter(|&&i| c.t0.contains(i)).count() < c.min_from_t0 {
                return;
            }
        }
        let support = ChunkSupport::new(cand.to_vec(), k).expect("indices within 1..=K");
        let res = submatrix_by_chunks(phi, &support, idx)
            .and_then(|sub| ls_solve(&sub, y).map(|x| (y - &(&sub * &x)).frobenius_norm()));
        match res {
            Ok(r) => {
                if best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, cand.to_vec()));
                }
            }
            Err(e) => failure = Some(e),
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let (_, indices) = best.ok_or_else(|| Error::PriorInfo("no support satisfies the prior constraint".into()))?;
    ChunkSupport::new(indices, k)
}

/// Eigenvalues of a Hermitian matrix given as separate real and imaginary
/// parts, via cyclic Jacobi on the real symmetric embedding
/// `[[Re, −Im], [Im, Re]]` (each eigenvalue appears twice).
fn hermitian_eigenvalues(re: &[Vec<f64>], im: &[Vec<f64>]) -> Vec<f64> {
    let n = re.len();
    let m = 2 * n;
    let mut a = vec![vec![0.0; m]; m];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = re[i][j];
            a[i + n][j + n] = re[i][j];
            a[i][j + n] = -im[i][j];
            a[i + n][j] = im[i][j];
        }
    }
    let scale: f64 = a.iter().flatten().map(|v| v * v).sum::<f64>().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let off: f64 = (0..m)
            .flat_map(|i| (0..m).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off <= 1e-32 * scale {
            break;
        }
        for p in 0..m {
            for q in p + 1..m {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for r in 0..m {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r][p];
                    let arq = a[r][q];
                    a[r][p] = arp - s * (arq + tau * arp);
                    a[r][q] = arq + s * (arp - tau * arq);
                    a[p][r] = a[r][p];
                    a[q][r] = a[r][q];
                }
            }
        }
    }
    (0..m).map(|i| a[i][i]).collect()
}

/// `δ_{k|d}` by explicit enumeration, Gram assembly and Jacobi
/// eigenvalues. Reference for [`crate::analysis::block_rip_exact`].
pub fn rip_bruteforce_reference(phi: &ComplexMatrix, k: usize, chunk_rows: usize) -> Result<f64> {
    let idx = ChunkIndexing::new(phi.cols(), chunk_rows)?;
    if k == 0 || k > idx.chunks() {
        return Err(Error::Dimension(format!("RIP order {k} outside 1..={}", idx.chunks())));
    }
    let count = count_subsets(idx.chunks(), k);
    if count > RIP_REFERENCE_CAP {
        return Err(Error::EnumerationCap {
            count,
            cap: RIP_REFERENCE_CAP,
        });
    }
    let m = phi.rows();
    let mut worst: f64 = 0.0;
    for_each_subset(idx.chunks(), k, &mut |chunks| {
        let cols: Vec<usize> = chunks
            .iter()
            .flat_map(|&c| (c - 1) * chunk_rows..c * chunk_rows)
            .collect();
        let n = cols.len();
        let mut re = vec![vec![0.0; n]; n];
        let mut im = vec![vec![0.0; n]; n];
        for (i, &ci) in cols.iter().enumerate() {
            for (j, &cj) in cols.iter().enumerate() {
                let mut acc_re = 0.0;
                let mut acc_im = 0.0;
                for r in 0..m {
                    let a = phi.get(r, ci);
                    let b = phi.get(r, cj);
                    // conj(a)·b
                    acc_re += a.re * b.re + a.im * b.im;
                    acc_im += a.re * b.im - a.im * b.re;
                }
                re[i][j] = acc_re;
                im[i][j] = acc_im;
            }
        }
        for ev in hermitian_eigenvalues(&re, &im) {
            worst = worst.max((ev - 1.0).abs());
        }
    });
    Ok(worst)
}
