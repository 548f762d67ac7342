#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tpd_core::{Tensor3, C64};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn real_slices(rows: &[[[f64; 3]; 3]]) -> Tensor3 {
    let slices: Vec<DMatrix<f64>> = rows
        .iter()
        .map(|s| DMatrix::from_fn(3, 3, |i, j| s[i][j]))
        .collect();
    Tensor3::from_real_slices(&slices).unwrap()
}

/// The 3x3x2 pair from the worked geometric-mean example.
pub fn example_a() -> Tensor3 {
    real_slices(&[
        [[6.0, 1.0, 2.0], [1.0, 8.0, 3.0], [2.0, 3.0, 10.0]],
        [[4.0, 1.0, 2.0], [1.0, 6.0, 4.0], [2.0, 4.0, 2.0]],
    ])
}

pub fn example_b() -> Tensor3 {
    real_slices(&[
        [[8.0, -3.0, -3.0], [-3.0, 6.0, 1.0], [-3.0, 1.0, 8.0]],
        [[-6.0, 2.0, 5.0], [2.0, -2.0, -3.0], [5.0, -3.0, -2.0]],
    ])
}

/// Published values of the example's mean, 4 decimals.
pub fn example_mean() -> Tensor3 {
    real_slices(&[
        [[4.5916, -0.6057, 0.1536], [-0.6057, 5.1580, 0.4850], [0.1536, 0.4850, 7.4309]],
        [[-0.4400, 0.3644, 2.2243], [0.3644, 1.4536, 0.0987], [2.2243, 0.0987, -0.0154]],
    ])
}

/// Unitary DFT matrix `F_p` with entries `ω^{jk} / sqrt(p)`, `ω = exp(2πi/p)`.
pub fn dft_matrix(p: usize) -> DMatrix<C64> {
    let scale = 1.0 / (p as f64).sqrt();
    DMatrix::from_fn(p, p, |j, k| {
        C64::from_polar(scale, 2.0 * std::f64::consts::PI * (j * k) as f64 / p as f64)
    })
}

/// `F_p ⊗ I_n`.
pub fn dft_kron(p: usize, n: usize) -> DMatrix<C64> {
    dft_matrix(p).kronecker(&DMatrix::<C64>::identity(n, n))
}

pub fn rel(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
