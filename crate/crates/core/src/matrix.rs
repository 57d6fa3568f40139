//! Dense complex matrices and the chunk-indexed primitives every recovery
//! algorithm is built from.
//!
//! A signal `X` with `N = K·d` rows is split into `K` chunks of `d`
//! consecutive rows each. Chunk indices are 1-based in the public API:
//! chunk `k` covers rows `(k-1)·d .. k·d` (0-based, half-open) of `X` and
//! the matching columns of the measurement matrix.

use std::ops::{Add, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::sparsity::ChunkSupport;

/// Relative singular-value cutoff used by [`ls_solve`].
pub const LS_RCOND: f64 = 1e-12;

/// Dense complex matrix with finite entries.
///
/// Storage is delegated to `nalgebra`; the row-major view used for I/O is
/// produced on demand.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    inner: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            inner: DMatrix::zeros(rows, cols),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            inner: DMatrix::identity(n, n),
        }
    }

    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn from_row_major(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Self::from_dmatrix(DMatrix::from_row_iterator(rows, cols, entries))
    }

    /// Real-valued convenience constructor (row-major).
    pub fn from_real_rows(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(rows, cols, entries.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl FnMut(usize, usize) -> Complex64) -> Self {
        Self {
            inner: DMatrix::from_fn(rows, cols, f),
        }
    }

    pub fn from_dmatrix(inner: DMatrix<Complex64>) -> Result<Self> {
        for c in 0..inner.ncols() {
            for r in 0..inner.nrows() {
                let z = inner[(r, c)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: r, col: c });
                }
            }
        }
        Ok(Self { inner })
    }

    pub(crate) fn wrap(inner: DMatrix<Complex64>) -> Self {
        Self { inner }
    }

    pub fn as_dmatrix(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_dmatrix(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn rows(&self) -> usize {
        self.inner.nrows()
    }

    pub fn cols(&self) -> usize {
        self.inner.ncols()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.inner.shape()
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.inner[(row, col)]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.inner[(row, col)] = value;
    }

    pub fn to_row_major(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.rows() * self.cols());
        for r in 0..self.rows() {
            for c in 0..self.cols() {
                out.push(self.inner[(r, c)]);
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn try_matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols() != rhs.rows() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows(),
                self.cols(),
                rhs.rows(),
                rhs.cols()
            )));
        }
        Ok(Self::wrap(&self.inner * &rhs.inner))
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self::wrap(self.inner.map(|z| z * factor))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_zero(&self) -> bool {
        self.inner.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Columns `indices` (0-based) in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> Self {
        Self::wrap(self.inner.select_columns(indices))
    }

    /// Rows `indices` (0-based) in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Self {
        Self::wrap(self.inner.select_rows(indices))
    }

    pub fn column(&self, col: usize) -> Self {
        Self::wrap(self.inner.columns(col, 1).into_owned())
    }

    /// Largest absolute entry-wise difference, used by tests and checks.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape(), "shape mismatch");
        self.inner
            .iter()
            .zip(other.inner.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner * &rhs.inner)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::wrap(&self.inner - &rhs.inner)
    }
}

/// Partition of `total_rows = chunks · chunk_rows` rows into equal chunks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChunkIndexing {
    chunks: usize,
    chunk_rows: usize,
}

impl ChunkIndexing {
    pub fn new(total_rows: usize, chunk_rows: usize) -> Result<Self> {
        if chunk_rows == 0 || !total_rows.is_multiple_of(chunk_rows) {
            return Err(Error::Dimension(format!(
                "chunk height {chunk_rows} does not divide {total_rows} rows"
            )));
        }
        Ok(Self {
            chunks: total_rows / chunk_rows,
            chunk_rows,
        })
    }

    /// Number of chunks `K`.
    pub fn chunks(&self) -> usize {
        self.chunks
    }

    /// Chunk height `d`.
    pub fn chunk_rows(&self) -> usize {
        self.chunk_rows
    }

    pub fn total_rows(&self) -> usize {
        self.chunks * self.chunk_rows
    }

    /// 0-based row range of the 1-based chunk `k`.
    pub fn rows_of(&self, k: usize) -> std::ops::Range<usize> {
        debug_assert!(k >= 1 && k <= self.chunks);
        (k - 1) * self.chunk_rows..k * self.chunk_rows
    }

    /// 0-based rows (or columns of `Φ`) covered by `support`, ascending.
    pub fn expand(&self, support: &ChunkSupport) -> Vec<usize> {
        support.iter().flat_map(|k| self.rows_of(k)).collect()
    }
}

/// Frobenius norm of every chunk of `x`.
pub fn chunk_norms(x: &ComplexMatrix, idx: ChunkIndexing) -> Result<Vec<f64>> {
    if x.rows() != idx.total_rows() {
        return Err(Error::Dimension(format!(
            "matrix has {} rows, chunk layout expects {}",
            x.rows(),
            idx.total_rows()
        )));
    }
    let m = x.as_dmatrix();
    Ok((1..=idx.chunks())
        .map(|k| {
            let mut acc = 0.0;
            for r in idx.rows_of(k) {
                for c in 0..m.ncols() {
                    acc += m[(r, c)].norm_sqr();
                }
            }
            acc.sqrt()
        })
        .collect())
}

/// The `k` candidates with the largest scores, ascending.
///
/// Ties go to the smallest chunk index. `scores[i]` belongs to chunk `i + 1`.
pub fn top_k_chunks(scores: &[f64], k: usize, candidates: &ChunkSupport) -> Result<ChunkSupport> {
    if k > candidates.len() {
        return Err(Error::Selection {
            requested: k,
            available: candidates.len(),
        });
    }
    if let Some(&bad) = candidates.as_slice().iter().find(|&&c| c > scores.len()) {
        return Err(Error::Index {
            index: bad,
            universe: scores.len(),
        });
    }
    let mut ranked: Vec<usize> = candidates.iter().collect();
    // Candidates arrive ascending, so a stable sort on score alone keeps the
    // smallest index first among equal scores.
    ranked.sort_by(|&a, &b| scores[b - 1].total_cmp(&scores[a - 1]));
    ranked.truncate(k);
    ChunkSupport::new(ranked, candidates.universe())
}

/// Columns of `phi` belonging to the chunks in `support`, in ascending chunk
/// order.
pub fn submatrix_by_chunks(phi: &ComplexMatrix, support: &ChunkSupport, idx: ChunkIndexing) -> Result<ComplexMatrix> {
    if phi.cols() != idx.total_rows() {
        return Err(Error::Dimension(format!(
            "measurement matrix has {} columns, chunk layout expects {}",
            phi.cols(),
            idx.total_rows()
        )));
    }
    if let Some(bad) = support.iter().find(|&k| k > idx.chunks()) {
        return Err(Error::Index {
            index: bad,
            universe: idx.chunks(),
        });
    }
    Ok(phi.select_columns(&idx.expand(support)))
}

/// Minimum-norm least-squares solution together with rank diagnostics.
#[derive(Clone, Debug)]
pub struct LsSolution {
    pub x: ComplexMatrix,
    pub rank: usize,
    /// `rank < A.cols`, i.e. the minimizer is not unique.
    pub rank_deficient: bool,
}

/// Moore-Penrose solution of `min ‖A·X − B‖_F`.
pub fn ls_solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    ls_solve_detailed(a, b).map(|s| s.x)
}

/// [`ls_solve`] via a truncated SVD with cutoff `LS_RCOND · σ_max`.
pub fn ls_solve_detailed(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<LsSolution> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "least squares with {} equations but {} right-hand-side rows",
            a.rows(),
            b.rows()
        )));
    }
    let (m, n) = a.shape();
    if m == 0 || n == 0 {
        return Ok(LsSolution {
            x: ComplexMatrix::zeros(n, b.cols()),
            rank: 0,
            rank_deficient: n > 0,
        });
    }
    let svd = a.as_dmatrix().clone().svd(true, true);
    let u = svd.u.as_ref().expect("left singular vectors requested");
    let v_t = svd.v_t.as_ref().expect("right singular vectors requested");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().copied().fold(0.0, f64::max);
    let cutoff = LS_RCOND * sigma_max;

    // X = V · Σ⁺ · Uᴴ · B, keeping only singular values above the cutoff.
    let mut coeffs = u.adjoint() * b.as_dmatrix();
    let mut rank = 0;
    for (i, &s) in sigma.iter().enumerate() {
        let scale = if s > cutoff && s > 0.0 {
            rank += 1;
            1.0 / s
        } else {
            0.0
        };
        coeffs.row_mut(i).iter_mut().for_each(|z| *z *= scale);
    }
    let x = v_t.adjoint() * coeffs;
    Ok(LsSolution {
        x: ComplexMatrix::wrap(x),
        rank,
        rank_deficient: rank < n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn support(ix: &[usize], k: usize) -> ChunkSupport {
        ChunkSupport::new(ix.to_vec(), k).unwrap()
    }

    #[test]
    fn chunk_norms_examples() {
        let x = ComplexMatrix::from_real_rows(4, 1, &[0.0, 0.0, 1.0, 0.0]).unwrap();
        let idx = ChunkIndexing::new(4, 2).unwrap();
        assert_eq!(chunk_norms(&x, idx).unwrap(), vec![0.0, 1.0]);

        let z = ComplexMatrix::zeros(6, 3);
        let idx = ChunkIndexing::new(6, 3).unwrap();
        assert_eq!(chunk_norms(&z, idx).unwrap(), vec![0.0, 0.0]);

        let d = ComplexMatrix::from_real_rows(2, 2, &[3.0, 0.0, 0.0, 4.0]).unwrap();
        let idx = ChunkIndexing::new(2, 1).unwrap();
        assert_eq!(chunk_norms(&d, idx).unwrap(), vec![3.0, 4.0]);
    }

    #[test]
    fn chunk_norms_dimension_mismatch() {
        let x = ComplexMatrix::zeros(3, 1);
        let idx = ChunkIndexing::new(4, 2).unwrap();
        assert!(matches!(chunk_norms(&x, idx), Err(Error::Dimension(_))));
    }

    #[test]
    fn chunk_indexing_requires_divisibility() {
        assert!(ChunkIndexing::new(5, 2).is_err());
        assert!(ChunkIndexing::new(4, 0).is_err());
        let idx = ChunkIndexing::new(6, 2).unwrap();
        assert_eq!(idx.rows_of(3), 4..6);
    }

    #[test]
    fn top_k_examples() {
        let all3 = support(&[1, 2, 3], 3);
        assert_eq!(top_k_chunks(&[3.0, 1.0, 2.0], 2, &all3).unwrap(), support(&[1, 3], 3));
        assert_eq!(top_k_chunks(&[2.0, 2.0, 1.0], 1, &all3).unwrap(), support(&[1], 3));
        let cands = support(&[2, 3, 4], 4);
        assert_eq!(
            top_k_chunks(&[5.0, 9.0, 9.0, 1.0], 2, &cands).unwrap(),
            support(&[2, 3], 4)
        );
    }

    #[test]
    fn top_k_rejects_oversized_request() {
        let cands = support(&[1, 2], 3);
        assert!(matches!(
            top_k_chunks(&[1.0, 2.0, 3.0], 3, &cands),
            Err(Error::Selection {
                requested: 3,
                available: 2
            })
        ));
    }

    #[test]
    fn submatrix_examples() {
        let phi = ComplexMatrix::from_real_rows(2, 4, &[1.0, 0.0, 5.0, 6.0, 0.0, 1.0, 7.0, 8.0]).unwrap();
        let idx = ChunkIndexing::new(4, 2).unwrap();
        let sub = submatrix_by_chunks(&phi, &support(&[2], 2), idx).unwrap();
        assert_eq!(sub, ComplexMatrix::from_real_rows(2, 2, &[5.0, 6.0, 7.0, 8.0]).unwrap());

        let empty = submatrix_by_chunks(&phi, &ChunkSupport::empty(2), idx).unwrap();
        assert_eq!(empty.shape(), (2, 0));

        let eye = ComplexMatrix::identity(3);
        let idx = ChunkIndexing::new(3, 1).unwrap();
        let sub = submatrix_by_chunks(&eye, &support(&[1, 3], 3), idx).unwrap();
        assert_eq!(sub, eye.select_columns(&[0, 2]));
    }

    #[test]
    fn submatrix_rejects_out_of_range() {
        let eye = ComplexMatrix::identity(4);
        let idx = ChunkIndexing::new(4, 2).unwrap();
        let too_big = support(&[3], 3);
        assert!(matches!(
            submatrix_by_chunks(&eye, &too_big, idx),
            Err(Error::Index { index: 3, universe: 2 })
        ));
    }

    #[test]
    fn ls_solve_examples() {
        let b = ComplexMatrix::from_row_major(
            3,
            2,
            vec![
                c(1.0),
                Complex64::new(0.5, -2.0),
                c(3.0),
                c(-1.0),
                c(0.0),
                Complex64::new(0.0, 4.0),
            ],
        )
        .unwrap();
        let x = ls_solve(&ComplexMatrix::identity(3), &b).unwrap();
        assert!(x.max_abs_diff(&b) < 1e-14);

        let a = ComplexMatrix::from_real_rows(1, 1, &[2.0]).unwrap();
        let b = ComplexMatrix::from_real_rows(1, 1, &[6.0]).unwrap();
        assert!((ls_solve(&a, &b).unwrap().get(0, 0) - c(3.0)).norm() < 1e-15);
    }

    #[test]
    fn ls_solve_orthonormal_round_trip() {
        let s = 1.0 / 2f64.sqrt();
        // Columns (1,1,0)/√2 and (0,0,1) are orthonormal.
        let a = ComplexMatrix::from_real_rows(3, 2, &[s, 0.0, s, 0.0, 0.0, 1.0]).unwrap();
        let x0 = ComplexMatrix::from_row_major(
            2,
            2,
            vec![c(1.5), Complex64::new(0.0, -2.0), Complex64::new(0.3, 0.7), c(-4.0)],
        )
        .unwrap();
        let b = &a * &x0;
        let x = ls_solve(&a, &b).unwrap();
        assert!(x.max_abs_diff(&x0) < 1e-10);
    }

    #[test]
    fn ls_solve_rank_deficient_is_min_norm() {
        // Two identical columns: the min-norm solution splits the weight evenly.
        let a = ComplexMatrix::from_real_rows(2, 2, &[1.0, 1.0, 0.0, 0.0]).unwrap();
        let b = ComplexMatrix::from_real_rows(2, 1, &[2.0, 0.0]).unwrap();
        let sol = ls_solve_detailed(&a, &b).unwrap();
        assert!(sol.rank_deficient);
        assert_eq!(sol.rank, 1);
        assert!((sol.x.get(0, 0) - c(1.0)).norm() < 1e-12);
        assert!((sol.x.get(1, 0) - c(1.0)).norm() < 1e-12);
    }

    #[test]
    fn ls_solve_wide_and_empty() {
        let a = ComplexMatrix::from_real_rows(1, 2, &[3.0, 4.0]).unwrap();
        let b = ComplexMatrix::from_real_rows(1, 1, &[25.0]).unwrap();
        let x = ls_solve(&a, &b).unwrap();
        // Min-norm solution of 3x + 4y = 25 is (3, 4).
        assert!((x.get(0, 0) - c(3.0)).norm() < 1e-12);
        assert!((x.get(1, 0) - c(4.0)).norm() < 1e-12);

        let empty = ComplexMatrix::zeros(3, 0);
        let b = ComplexMatrix::zeros(3, 2);
        assert_eq!(ls_solve(&empty, &b).unwrap().shape(), (0, 2));
        assert!(ls_solve(&empty, &ComplexMatrix::zeros(2, 1)).is_err());
    }

    #[test]
    fn non_finite_entries_rejected() {
        let err = ComplexMatrix::from_row_major(1, 2, vec![c(1.0), Complex64::new(f64::NAN, 0.0)]);
        assert!(matches!(err, Err(Error::NonFinite { row: 0, col: 1 })));
        assert!(ComplexMatrix::from_row_major(2, 2, vec![c(1.0)]).is_err());
    }
}
