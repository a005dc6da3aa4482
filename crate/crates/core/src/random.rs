//! Seeded randomness.
//!
//! The generator is ChaCha8 (`rand_chacha`) seeded from a `u64`, which gives
//! the same stream on every platform. Normal variates come from the
//! Box–Muller transform so the mapping from uniforms is fixed and documented.
//! Batch work derives one independent seed per item with [`derive_seed`], so
//! the result of item `k` does not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{c, Complex, ComplexMatrix};

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: ChaCha8Rng,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        Self {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Uniform in `[0, 1)`.
    pub fn uniform(&mut self) -> f64 {
        self.inner.gen::<f64>()
    }

    /// Uniform integer in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    /// A pair of independent standard normals.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        // 1 - U lies in (0, 1], keeping the log finite.
        let u1 = 1.0 - self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, co) = (std::f64::consts::TAU * u2).sin_cos();
        (r * co, r * s)
    }

    /// Complex normal with independent standard-normal real and imaginary parts.
    pub fn complex_normal(&mut self) -> Complex {
        let (re, im) = self.normal_pair();
        c(re, im)
    }

    pub fn complex_normal_vec(&mut self, n: usize) -> Vec<Complex> {
        (0..n).map(|_| self.complex_normal()).collect()
    }
}

/// SplitMix64 finalizer over `(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Haar-random unitary: QR of a complex Ginibre matrix by modified
/// Gram–Schmidt. Gram–Schmidt leaves `R` with a positive real diagonal,
/// which is the phase normalization that makes `Q` Haar distributed.
pub fn haar_unitary(dim: usize, rng: &mut SeededRng) -> ComplexMatrix {
    // Columns of the Ginibre matrix.
    let mut cols: Vec<Vec<Complex>> = (0..dim).map(|_| rng.complex_normal_vec(dim)).collect();
    for j in 0..dim {
        for k in 0..j {
            let (done, rest) = cols.split_at_mut(j);
            let q = &done[k];
            let v = &mut rest[0];
            let proj: Complex = q.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = cols[j].iter().map(Complex::norm_sqr).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    ComplexMatrix::from_fn(dim, dim, |i, j| cols[j][i])
}
