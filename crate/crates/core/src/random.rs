//! Seeded random operators for property checks and the verification harness.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::ComplexMatrix;

pub type TestRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Matrix with i.i.d. complex Gaussian entries.
pub fn random_matrix<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, n, |_, _| gaussian(rng))
}

pub fn random_hermitian<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(n, rng);
    let h = g.add(&g.adjoint()).expect("same shape");
    h.scale(Complex64::new(0.5, 0.0))
}

/// Haar-distributed unitary: Gram–Schmidt on the columns of a Gaussian matrix.
pub fn random_unitary<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(n, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for c in 0..n {
        let mut v: Vec<Complex64> = (0..n).map(|r| g[(r, c)]).collect();
        // two passes keep the basis orthonormal to machine precision
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    ComplexMatrix::from_fn(n, n, |r, c| cols[c][r])
}

/// Normalized random pure state.
pub fn random_ket<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.iter_mut().for_each(|z| *z /= norm);
    v
}

/// Full-rank random density matrix `GG†/Tr[GG†]`.
pub fn random_density_matrix<R: Rng>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = random_matrix(n, rng);
    let rho = g.matmul(&g.adjoint()).expect("square");
    let tr = rho.trace().expect("square").re;
    rho.scale(Complex64::new(1.0 / tr, 0.0))
}
