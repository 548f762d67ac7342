//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.
//!
//! This is the eigensolver behind every Fourier-block matrix function. Blocks
//! are small (`n x n` with `n` the slice size), where Jacobi is both fast enough
//! and accurate to a few ulps of `‖A‖`. The dense oracle deliberately uses a
//! different solver (nalgebra's tridiagonal QR).

use nalgebra::DMatrix;

use crate::tensor::C64;

const MAX_SWEEPS: usize = 64;

/// `A = V diag(values) V^H` with `values` ascending.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl Eigh {
    /// Eigendecomposition of the Hermitian part of `a` (only the upper triangle
    /// and the real part of the diagonal are read).
    pub fn new(a: &DMatrix<C64>) -> Self {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "eigh: matrix must be square");
        let mut w = DMatrix::from_fn(n, n, |i, j| {
            if i == j {
                C64::new(a[(i, i)].re, 0.0)
            } else if i < j {
                a[(i, j)]
            } else {
                a[(j, i)].conj()
            }
        });
        let mut v = DMatrix::<C64>::identity(n, n);
        let norm = w.norm();
        let threshold = f64::EPSILON * norm / (n.max(1) as f64);

        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = w[(p, q)];
                    let r = apq.norm();
                    if r <= threshold || r == 0.0 {
                        continue;
                    }
                    rotated = true;
                    let phase = apq / r;
                    let app = w[(p, p)].re;
                    let aqq = w[(q, q)].re;
                    let tau = (aqq - app) / (2.0 * r);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    let s_fwd = phase * s; // s e^{iφ}
                    let s_bwd = phase.conj() * s; // s e^{-iφ}

                    // W <- W J
                    for k in 0..n {
                        let wkp = w[(k, p)];
                        let wkq = w[(k, q)];
                        w[(k, p)] = wkp * c - wkq * s_bwd;
                        w[(k, q)] = wkp * s_fwd + wkq * c;
                    }
                    // W <- J^H W
                    for k in 0..n {
                        let wpk = w[(p, k)];
                        let wqk = w[(q, k)];
                        w[(p, k)] = wpk * c - wqk * s_fwd;
                        w[(q, k)] = wpk * s_bwd + wqk * c;
                    }
                    w[(p, q)] = C64::new(0.0, 0.0);
                    w[(q, p)] = C64::new(0.0, 0.0);
                    w[(p, p)].im = 0.0;
                    w[(q, q)].im = 0.0;

                    for k in 0..n {
                        let vkp = v[(k, p)];
                        let vkq = v[(k, q)];
                        v[(k, p)] = vkp * c - vkq * s_bwd;
                        v[(k, q)] = vkp * s_fwd + vkq * c;
                    }
                }
            }
            if !rotated {
                break;
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| w[(i, i)].re.total_cmp(&w[(j, j)].re));
        let values = order.iter().map(|&i| w[(i, i)].re).collect();
        let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
        Self { values, vectors }
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(f64::INFINITY)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(f64::NEG_INFINITY)
    }

    /// `V diag(f(λ)) V^H`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fl = f(lam);
            for i in 0..n {
                scaled[(i, j)] *= fl;
            }
        }
        let mut out = &scaled * self.vectors.adjoint();
        hermitize_in_place(&mut out);
        out
    }
}

/// Replaces `a` by `(a + a^H) / 2`.
pub fn hermitize_in_place(a: &mut DMatrix<C64>) {
    let n = a.nrows();
    for i in 0..n {
        a[(i, i)].im = 0.0;
        for j in i + 1..n {
            let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
            a[(i, j)] = avg;
            a[(j, i)] = avg.conj();
        }
    }
}

/// `‖a - a^H‖_F / max(1, ‖a‖_F)`.
pub fn hermitian_residual(a: &DMatrix<C64>) -> f64 {
    (a - a.adjoint()).norm() / a.norm().max(1.0)
}
