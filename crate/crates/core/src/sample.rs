//! Random test and benchmark inputs.
//!
//! T-positive definite tensors are drawn in the Fourier domain as
//! `M M^H + I` per block, which is positive definite without rejection. With
//! `real = true` the blocks are drawn conjugate-symmetric so that the tensor
//! comes out real.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::spectral::{from_spectrum, from_spectrum_real, BlockSpectrum};
use crate::tensor::{Tensor3, C64};

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, real: bool) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        let re = normal(rng);
        let im = if real { 0.0 } else { normal(rng) };
        C64::new(re, im)
    })
}

/// Entries i.i.d. standard normal (complex normal unless `real`).
pub fn tensor<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize, p: usize, real: bool) -> Tensor3 {
    let slices: Vec<_> = (0..p).map(|_| gaussian_matrix(rng, m, n, real)).collect();
    Tensor3::from_slices(&slices).expect("finite gaussian entries")
}

/// `(X + X^H) / 2` for a Gaussian `X`.
pub fn t_hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, real: bool) -> Tensor3 {
    tensor(rng, n, n, p, real).hermitian_part().expect("square")
}

/// T-Hermitian tensor rescaled to Frobenius norm `norm`.
pub fn t_hermitian_with_norm<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, real: bool, norm: f64) -> Tensor3 {
    let h = t_hermitian(rng, n, p, real);
    let current = h.frobenius_norm();
    h.scale(norm / current)
}

/// Draws `p` blocks with `make(rng, i)` for the independent frequencies and
/// mirrors them so that `A_{p-i} = conj(A_i)` when `real` is set.
fn spectrum_from<R, F>(rng: &mut R, n: usize, p: usize, real: bool, mut make: F) -> BlockSpectrum
where
    R: Rng + ?Sized,
    F: FnMut(&mut R, bool) -> DMatrix<C64>,
{
    let mut blocks: Vec<Option<DMatrix<C64>>> = vec![None; p];
    for i in 0..p {
        if blocks[i].is_some() {
            continue;
        }
        let mirror = (p - i) % p;
        if real {
            // self-conjugate frequencies must be real
            let blk = make(rng, mirror == i);
            if mirror != i {
                blocks[mirror] = Some(blk.conjugate());
            }
            blocks[i] = Some(blk);
        } else {
            blocks[i] = Some(make(rng, false));
        }
    }
    BlockSpectrum {
        n,
        p,
        blocks: blocks.into_iter().map(|b| b.expect("filled")).collect(),
    }
}

fn finish(spec: &BlockSpectrum, real: bool) -> Tensor3 {
    let mut t = if real {
        from_spectrum_real(spec).expect("conjugate-symmetric blocks give a real tensor")
    } else {
        from_spectrum(spec)
    };
    t = t.hermitian_part().expect("square");
    t
}

/// T-positive definite tensor with Fourier blocks `M M^H / n + I`.
pub fn tpd<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, real: bool) -> Tensor3 {
    let spec = spectrum_from(rng, n, p, real, |rng, real_block| {
        let m = gaussian_matrix(rng, n, n, real_block);
        let mut blk = &m * m.adjoint() / C64::new(n as f64, 0.0);
        for d in 0..n {
            blk[(d, d)] += C64::new(1.0, 0.0);
        }
        blk
    });
    finish(&spec, real)
}

/// A commuting T-positive definite pair: all Fourier blocks diagonal, so all
/// frontal slices are diagonal.
pub fn commuting_tpd_pair<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, real: bool) -> (Tensor3, Tensor3) {
    let draw = |rng: &mut R| {
        let spec = spectrum_from(rng, n, p, real, |rng, _| {
            DMatrix::from_fn(n, n, |i, j| {
                if i == j {
                    C64::new((normal(rng) * 0.8).exp(), 0.0)
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        });
        finish(&spec, real)
    };
    let a = draw(rng);
    let b = draw(rng);
    (a, b)
}

/// `W * W^H` for a Gaussian `n x 1 x p` tube tensor `W`: T-positive semidefinite.
pub fn tube_outer<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, real: bool) -> Tensor3 {
    let w = tensor(rng, n, 1, p, real);
    w.t_product(&w.conj_transpose())
        .expect("compatible dims")
        .hermitian_part()
        .expect("square")
}

/// Well-conditioned invertible tensor `2 I + 0.5 G / sqrt(n p)` with Gaussian `G`.
pub fn invertible<R: Rng + ?Sized>(rng: &mut R, n: usize, p: usize, real: bool) -> Tensor3 {
    let g = tensor(rng, n, n, p, real);
    let scale = 0.5 / ((n * p) as f64).sqrt();
    Tensor3::identity(n, p).scale(2.0).add_scaled(&g, scale).expect("same dims")
}
