use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use msp_cs::analysis::{block_rip_exact, RipQuery};
use msp_cs::matrix::{ls_solve, submatrix_by_chunks, ChunkIndexing};
use msp_cs::oracle::{exhaustive_best_support, rip_bruteforce_reference};
use msp_cs::pursuit::{mmv_sp_recover, msp_recover, PursuitConfig};
use msp_cs::sparsity::{complex_gaussian, generate_chunk_sparse};
use msp_cs::{ChunkSupport, ComplexMatrix, PriorSupportInfo};

fn gaussian(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng) / (rows as f64).sqrt())
}

fn residual(y: &ComplexMatrix, phi: &ComplexMatrix, s: &ChunkSupport, d: usize) -> f64 {
    let sub = submatrix_by_chunks(phi, s, ChunkIndexing::new(phi.cols(), d).unwrap()).unwrap();
    let x = ls_solve(&sub, y).unwrap();
    (y - &(&sub * &x)).frobenius_norm()
}

#[test]
fn well_conditioned_mmv_matches_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut agree = 0;
    for _ in 0..50 {
        let phi = gaussian(14, 16, &mut rng);
        let t = ChunkSupport::new(index::sample(&mut rng, 8, 2).into_iter().map(|i| i + 1), 8).unwrap();
        let x = generate_chunk_sparse(8, 2, 3, &t, &mut rng).unwrap();
        let y = &phi * x.data();
        let got = mmv_sp_recover(&y, &phi, 2, 1e-9, 2).unwrap().t_hat;
        let best = exhaustive_best_support(&y, &phi, 2, 2, None).unwrap();
        assert_eq!(best, t);
        agree += (got == best) as usize;
    }
    assert!(agree >= 48, "{agree}/50");
}

#[test]
fn exhaustive_residual_lower_bounds_pursuit() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..40 {
        let phi = gaussian(6, 16, &mut rng);
        let y = gaussian(6, 2, &mut rng);
        let t0 = ChunkSupport::new([1, 4], 8).unwrap();
        let cfg = PursuitConfig::new(3, PriorSupportInfo::new(t0, 1).unwrap(), 0.0, 2).unwrap();
        let res = msp_recover(&y, &phi, &cfg).unwrap();
        let best = exhaustive_best_support(&y, &phi, 3, 2, None).unwrap();
        assert!(residual(&y, &phi, &best, 2) <= residual(&y, &phi, &res.t_hat, 2) + 1e-10);
    }
}

#[test]
fn block_rip_matches_jacobi_reference() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for (rows, cols, k, d) in [(6, 8, 2, 2), (8, 12, 3, 2), (5, 9, 2, 3), (7, 7, 4, 1)] {
        let phi = gaussian(rows, cols, &mut rng);
        let a = block_rip_exact(&phi, RipQuery::new(k, d)).unwrap();
        let b = rip_bruteforce_reference(&phi, k, d).unwrap();
        assert!((a - b).abs() < 1e-9, "{a} vs {b}");
    }
}
