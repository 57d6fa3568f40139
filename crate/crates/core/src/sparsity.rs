//! Chunk-sparse signals, prior support information and the random
//! generators for signals and temporally correlated support sequences.

use std::fmt;

use num_complex::Complex64;
use rand::seq::index;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{chunk_norms, ChunkIndexing, ComplexMatrix};

/// Sorted, duplicate-free set of 1-based chunk indices drawn from `1..=universe`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChunkSupport {
    indices: Vec<usize>,
    universe: usize,
}

impl ChunkSupport {
    /// Sorts and deduplicates `indices`; any index outside `1..=universe`
    /// is an [`Error::Index`].
    pub fn new(indices: impl IntoIterator<Item = usize>, universe: usize) -> Result<Self> {
        let mut indices: Vec<usize> = indices.into_iter().collect();
        indices.sort_unstable();
        indices.dedup();
        if let Some(&bad) = indices.iter().find(|&&k| k == 0 || k > universe) {
            return Err(Error::Index { index: bad, universe });
        }
        Ok(Self { indices, universe })
    }

    pub fn empty(universe: usize) -> Self {
        Self {
            indices: Vec::new(),
            universe,
        }
    }

    pub fn full(universe: usize) -> Self {
        Self {
            indices: (1..=universe).collect(),
            universe,
        }
    }

    fn from_sorted(indices: Vec<usize>, universe: usize) -> Self {
        debug_assert!(indices.windows(2).all(|w| w[0] < w[1]));
        Self { indices, universe }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn contains(&self, k: usize) -> bool {
        self.indices.binary_search(&k).is_ok()
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.iter().all(|k| other.contains(k))
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut v: Vec<usize> = self.iter().chain(other.iter()).collect();
        v.sort_unstable();
        v.dedup();
        Self::from_sorted(v, self.universe.max(other.universe))
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_sorted(self.iter().filter(|&k| other.contains(k)).collect(), self.universe)
    }

    /// `self \ other`.
    pub fn difference(&self, other: &Self) -> Self {
        Self::from_sorted(self.iter().filter(|&k| !other.contains(k)).collect(), self.universe)
    }

    /// `{1..universe} \ self`.
    pub fn complement(&self) -> Self {
        Self::from_sorted(
            (1..=self.universe).filter(|&k| !self.contains(k)).collect(),
            self.universe,
        )
    }
}

/// Renders as a JSON integer array, e.g. `[2,5,9]`.
impl fmt::Display for ChunkSupport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, k) in self.indices.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str("]")
    }
}

/// An `N×L` signal viewed as `K = N/d` chunks of size `d×L`.
#[derive(Clone, Debug, PartialEq)]
pub struct ChunkSparseMatrix {
    data: ComplexMatrix,
    idx: ChunkIndexing,
}

impl ChunkSparseMatrix {
    pub fn new(data: ComplexMatrix, chunk_rows: usize) -> Result<Self> {
        let idx = ChunkIndexing::new(data.rows(), chunk_rows)?;
        Ok(Self { data, idx })
    }

    pub fn zeros(idx: ChunkIndexing, cols: usize) -> Self {
        Self {
            data: ComplexMatrix::zeros(idx.total_rows(), cols),
            idx,
        }
    }

    /// Places `values` (rows ordered by ascending chunk of `support`) into an
    /// otherwise zero signal.
    pub(crate) fn scatter(idx: ChunkIndexing, support: &ChunkSupport, values: &ComplexMatrix) -> Self {
        let mut out = Self::zeros(idx, values.cols());
        for (src, dst) in idx.expand(support).into_iter().enumerate() {
            for c in 0..values.cols() {
                out.data.set(dst, c, values.get(src, c));
            }
        }
        out
    }

    pub fn data(&self) -> &ComplexMatrix {
        &self.data
    }

    pub fn into_data(self) -> ComplexMatrix {
        self.data
    }

    pub fn indexing(&self) -> ChunkIndexing {
        self.idx
    }

    pub fn chunk_norms(&self) -> Vec<f64> {
        chunk_norms(&self.data, self.idx).expect("layout matches by construction")
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            data: self.data.scale(factor),
            idx: self.idx,
        }
    }
}

/// `{k : ‖X[k]‖_F > tol}`.
pub fn chunk_support(x: &ChunkSparseMatrix, tol: f64) -> ChunkSupport {
    let norms = x.chunk_norms();
    ChunkSupport::from_sorted(
        norms
            .iter()
            .enumerate()
            .filter(|(_, &n)| n > tol)
            .map(|(i, _)| i + 1)
            .collect(),
        x.indexing().chunks(),
    )
}

/// Prior support `T0` together with the guaranteed overlap `s_c ≤ |T0 ∩ T|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PriorSupportInfo {
    t0: ChunkSupport,
    s_c: usize,
}

impl PriorSupportInfo {
    pub fn new(t0: ChunkSupport, s_c: usize) -> Result<Self> {
        if s_c > t0.len() {
            return Err(Error::PriorInfo(format!(
                "s_c <= |T0| violated: s_c = {s_c}, |T0| = {}",
                t0.len()
            )));
        }
        Ok(Self { t0, s_c })
    }

    /// No prior: `T0 = ∅`, `s_c = 0`.
    pub fn none(universe: usize) -> Self {
        Self {
            t0: ChunkSupport::empty(universe),
            s_c: 0,
        }
    }

    pub fn t0(&self) -> &ChunkSupport {
        &self.t0
    }

    pub fn s_c(&self) -> usize {
        self.s_c
    }
}

/// Checks `s_c ≤ |T0| ≤ s_bar`.
pub fn validate_prior(prior: &PriorSupportInfo, s_bar: usize) -> Result<()> {
    let t0 = prior.t0.len();
    if prior.s_c > t0 {
        return Err(Error::PriorInfo(format!(
            "s_c <= |T0| violated: s_c = {}, |T0| = {t0}",
            prior.s_c
        )));
    }
    if t0 > s_bar {
        return Err(Error::PriorInfo(format!(
            "|T0| <= s_bar violated: |T0| = {t0}, s_bar = {s_bar}"
        )));
    }
    Ok(())
}

/// Parameters of the support-evolution process: each support has size
/// `U(s_bar-2, s_bar)` and consecutive supports share `U(s_c, s_c+2)` chunks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SupportEvolutionParams {
    s_bar: usize,
    s_c: usize,
    universe: usize,
}

impl SupportEvolutionParams {
    pub fn new(s_bar: usize, s_c: usize, universe: usize) -> Result<Self> {
        if s_c + 2 > s_bar {
            return Err(Error::Generation(format!(
                "s_c + 2 <= s_bar violated: s_c = {s_c}, s_bar = {s_bar}"
            )));
        }
        if s_bar > universe {
            return Err(Error::Generation(format!(
                "s_bar <= K violated: s_bar = {s_bar}, K = {universe}"
            )));
        }
        Ok(Self { s_bar, s_c, universe })
    }

    pub fn s_bar(&self) -> usize {
        self.s_bar
    }

    pub fn s_c(&self) -> usize {
        self.s_c
    }

    pub fn universe(&self) -> usize {
        self.universe
    }
}

/// How many chunks consecutive supports share.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OverlapRule {
    /// `U(s_c, s_c+2)`, clamped to the smaller of the two support sizes.
    Uniform,
    /// Exactly this many (must not exceed `s_bar - 2`).
    Fixed(usize),
}

/// Standard circular complex Gaussian, `CN(0, 1)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// `K·d × L` signal whose chunks in `support` hold i.i.d. `CN(0,1)` entries
/// and whose other chunks are exactly zero.
pub fn generate_chunk_sparse<R: Rng + ?Sized>(
    chunks: usize,
    chunk_rows: usize,
    cols: usize,
    support: &ChunkSupport,
    rng: &mut R,
) -> Result<ChunkSparseMatrix> {
    if let Some(bad) = support.iter().find(|&k| k > chunks) {
        return Err(Error::Index {
            index: bad,
            universe: chunks,
        });
    }
    let idx = ChunkIndexing::new(chunks * chunk_rows, chunk_rows)?;
    let values = ComplexMatrix::from_fn(support.len() * chunk_rows, cols, |_, _| complex_gaussian(rng));
    Ok(ChunkSparseMatrix::scatter(idx, support, &values))
}

/// Supports `T_1..T_n` following the evolution model with overlap drawn from
/// `U(s_c, s_c+2)`.
pub fn generate_support_sequence<R: Rng + ?Sized>(
    params: &SupportEvolutionParams,
    n_frames: usize,
    rng: &mut R,
) -> Result<Vec<ChunkSupport>> {
    generate_support_sequence_with(params, OverlapRule::Uniform, n_frames, rng)
}

pub fn generate_support_sequence_with<R: Rng + ?Sized>(
    params: &SupportEvolutionParams,
    overlap: OverlapRule,
    n_frames: usize,
    rng: &mut R,
) -> Result<Vec<ChunkSupport>> {
    if n_frames == 0 {
        return Err(Error::Generation("at least one frame is required".into()));
    }
    let (s_bar, universe) = (params.s_bar, params.universe);
    let min_overlap = match overlap {
        OverlapRule::Uniform => params.s_c,
        OverlapRule::Fixed(o) => {
            if o + 2 > s_bar {
                return Err(Error::Generation(format!(
                    "fixed overlap {o} exceeds s_bar - 2 = {}",
                    s_bar.saturating_sub(2)
                )));
            }
            o
        }
    };
    // Worst case: a full-size support followed by one needing s_bar - overlap
    // fresh chunks outside it.
    if universe < s_bar + (s_bar - min_overlap) {
        return Err(Error::Generation(format!(
            "K = {universe} too small: need at least {}",
            s_bar + (s_bar - min_overlap)
        )));
    }

    let draw_size = |rng: &mut R| rng.random_range(s_bar - 2..=s_bar);
    let first_size = draw_size(rng);
    let first = ChunkSupport::new(
        index::sample(rng, universe, first_size).into_iter().map(|i| i + 1),
        universe,
    )?;
    let mut frames = vec![first];
    while frames.len() < n_frames {
        let prev = frames.last().expect("non-empty");
        let size = draw_size(rng);
        let wanted = match overlap {
            OverlapRule::Uniform => rng.random_range(params.s_c..=params.s_c + 2),
            OverlapRule::Fixed(o) => o,
        };
        let shared = wanted.min(prev.len()).min(size);
        let kept: Vec<usize> = index::sample(rng, prev.len(), shared)
            .into_iter()
            .map(|i| prev.as_slice()[i])
            .collect();
        let outside = prev.complement();
        let fresh: Vec<usize> = index::sample(rng, outside.len(), size - shared)
            .into_iter()
            .map(|i| outside.as_slice()[i])
            .collect();
        frames.push(ChunkSupport::new(kept.into_iter().chain(fresh), universe)?);
    }
    Ok(frames)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn s(ix: &[usize], k: usize) -> ChunkSupport {
        ChunkSupport::new(ix.to_vec(), k).unwrap()
    }

    #[test]
    fn support_set_operations() {
        let a = s(&[5, 1, 3, 3], 6);
        assert_eq!(a.as_slice(), &[1, 3, 5]);
        let b = s(&[3, 4], 6);
        assert_eq!(a.union(&b).as_slice(), &[1, 3, 4, 5]);
        assert_eq!(a.intersection(&b).as_slice(), &[3]);
        assert_eq!(a.difference(&b).as_slice(), &[1, 5]);
        assert_eq!(a.complement().as_slice(), &[2, 4, 6]);
        assert_eq!(a.to_string(), "[1,3,5]");
        assert_eq!(ChunkSupport::empty(3).to_string(), "[]");
        assert!(matches!(ChunkSupport::new([0], 3), Err(Error::Index { index: 0, .. })));
        assert!(matches!(ChunkSupport::new([4], 3), Err(Error::Index { index: 4, .. })));
    }

    #[test]
    fn chunk_support_examples() {
        let z = ChunkSparseMatrix::new(ComplexMatrix::zeros(4, 2), 2).unwrap();
        assert!(chunk_support(&z, 0.0).is_empty());

        let x = ChunkSparseMatrix::new(ComplexMatrix::from_real_rows(4, 1, &[0.0, 0.0, 1.0, 0.0]).unwrap(), 2).unwrap();
        assert_eq!(chunk_support(&x, 0.0), s(&[2], 2));

        let x = ChunkSparseMatrix::new(ComplexMatrix::from_real_rows(2, 1, &[1e-15, 0.5]).unwrap(), 1).unwrap();
        assert_eq!(chunk_support(&x, 1e-9), s(&[2], 2));
    }

    #[test]
    fn generate_chunk_sparse_support_and_zeros() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let empty = generate_chunk_sparse(5, 2, 3, &ChunkSupport::empty(5), &mut rng).unwrap();
        assert!(empty.data().is_zero());

        let t = s(&[1, 4], 5);
        let x = generate_chunk_sparse(5, 2, 3, &t, &mut rng).unwrap();
        assert_eq!(chunk_support(&x, 0.0), t);
        for k in [2, 3, 5] {
            for r in x.indexing().rows_of(k) {
                for c in 0..3 {
                    let z = x.data().get(r, c);
                    assert!(z.re.to_bits() == 0 && z.im.to_bits() == 0);
                }
            }
        }
        assert!(generate_chunk_sparse(3, 1, 1, &s(&[4], 4), &mut rng).is_err());
    }

    #[test]
    fn generate_chunk_sparse_energy() {
        // E‖X‖_F² = |T|·d·L = 3·2·2 for unit-variance entries.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let t = s(&[2, 5, 7], 8);
        let draws = 1000;
        let mean: f64 = (0..draws)
            .map(|_| {
                generate_chunk_sparse(8, 2, 2, &t, &mut rng)
                    .unwrap()
                    .data()
                    .frobenius_norm()
                    .powi(2)
            })
            .sum::<f64>()
            / draws as f64;
        assert!((mean - 12.0).abs() < 1.2, "mean energy {mean}");
    }

    #[test]
    fn validate_prior_examples() {
        let ok = PriorSupportInfo::new(s(&[1, 2], 5), 2).unwrap();
        assert!(validate_prior(&ok, 3).is_ok());
        assert!(matches!(PriorSupportInfo::new(s(&[1], 5), 2), Err(Error::PriorInfo(_))));
        let big = PriorSupportInfo::new(s(&[1, 2, 3, 4, 5], 5), 0).unwrap();
        let err = validate_prior(&big, 4).unwrap_err();
        assert!(err.to_string().contains("|T0| <= s_bar"));
    }

    #[test]
    fn evolution_params_invariants() {
        assert!(SupportEvolutionParams::new(8, 6, 64).is_ok());
        assert!(SupportEvolutionParams::new(8, 7, 64).is_err());
        assert!(SupportEvolutionParams::new(8, 0, 7).is_err());
    }

    #[test]
    fn single_frame_size_range() {
        let p = SupportEvolutionParams::new(6, 2, 20).unwrap();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let seq = generate_support_sequence(&p, 1, &mut rng).unwrap();
            assert_eq!(seq.len(), 1);
            assert!((4..=6).contains(&seq[0].len()));
        }
    }

    #[test]
    fn overlap_clamped_when_s_c_is_maximal() {
        let p = SupportEvolutionParams::new(6, 4, 20).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let seq = generate_support_sequence(&p, 200, &mut rng).unwrap();
        for w in seq.windows(2) {
            let ov = w[0].intersection(&w[1]).len();
            assert!(ov >= 4 && ov <= w[0].len().min(w[1].len()));
        }
    }

    #[test]
    fn infeasible_universe_rejected() {
        let p = SupportEvolutionParams::new(8, 2, 13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            generate_support_sequence(&p, 2, &mut rng),
            Err(Error::Generation(_))
        ));
        assert!(generate_support_sequence(&SupportEvolutionParams::new(8, 2, 14).unwrap(), 2, &mut rng).is_ok());
        assert!(generate_support_sequence(&p, 0, &mut rng).is_err());
    }

    #[test]
    fn fixed_overlap_is_exact() {
        let p = SupportEvolutionParams::new(8, 0, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let seq = generate_support_sequence_with(&p, OverlapRule::Fixed(3), 100, &mut rng).unwrap();
        assert!(seq.windows(2).all(|w| w[0].intersection(&w[1]).len() == 3));
        assert!(generate_support_sequence_with(&p, OverlapRule::Fixed(7), 2, &mut rng).is_err());
    }

    /// Exact `E[min(O, A, B)]` with `O ~ U(s_c, s_c+2)` and `A, B ~ U(s̄-2, s̄)`
    /// independent, by enumeration.
    fn expected_clamped_overlap(s_bar: usize, s_c: usize) -> f64 {
        let mut total = 0.0;
        let mut count = 0.0;
        for o in s_c..=s_c + 2 {
            for a in s_bar - 2..=s_bar {
                for b in s_bar - 2..=s_bar {
                    total += o.min(a).min(b) as f64;
                    count += 1.0;
                }
            }
        }
        total / count
    }

    #[test]
    fn mean_overlap_matches_enumeration() {
        let expected = expected_clamped_overlap(13, 10);
        assert!((expected - 10.815).abs() < 1e-3, "oracle {expected}");
        let p = SupportEvolutionParams::new(13, 10, 64).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let seq = generate_support_sequence(&p, 2001, &mut rng).unwrap();
        let mean = seq
            .windows(2)
            .map(|w| w[0].intersection(&w[1]).len() as f64)
            .sum::<f64>()
            / 2000.0;
        assert!((mean - expected).abs() < 0.2, "empirical {mean} vs {expected}");
    }

    #[test]
    fn sequence_is_deterministic() {
        let p = SupportEvolutionParams::new(8, 4, 64).unwrap();
        let a = generate_support_sequence(&p, 10, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        let b = generate_support_sequence(&p, 10, &mut ChaCha8Rng::seed_from_u64(9)).unwrap();
        assert_eq!(a, b);
    }
}
