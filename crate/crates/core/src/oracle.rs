//! Dense reference implementations over explicit block circulant matrices.
//!
//! Everything here works on the full `(n p) x (n p)` matrix with nalgebra's
//! Hermitian eigensolver, and shares no intermediate results with the
//! Fourier-block path. It is slow on purpose and capped at `np <= 512` unless
//! the caller opts out.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::eigh::{hermitian_residual, hermitize_in_place};
use crate::error::{Error, Result};
use crate::spectral::{self, MatrixFn, DEFAULT_TOL};
use crate::tensor::{DenseCirc, Tensor3, C64};

pub const ORACLE_MAX_DIM: usize = 512;

/// Block circulant tolerance for matrices produced by the oracle.
pub const ORACLE_CIRCULANT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    max_dim: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Self {
            max_dim: ORACLE_MAX_DIM,
        }
    }
}

struct DenseEig {
    values: Vec<f64>,
    vectors: DMatrix<C64>,
}

impl DenseEig {
    fn map(&self, f: impl Fn(f64) -> f64) -> DMatrix<C64> {
        let mut scaled = self.vectors.clone();
        for (j, &lam) in self.values.iter().enumerate() {
            let fl = C64::new(f(lam), 0.0);
            for z in scaled.column_mut(j).iter_mut() {
                *z *= fl;
            }
        }
        let mut out = scaled * self.vectors.adjoint();
        hermitize_in_place(&mut out);
        out
    }

    fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

impl Oracle {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_cap(max_dim: usize) -> Self {
        Self { max_dim }
    }

    /// No size limit; reserved for explicit benchmark overrides.
    pub fn unbounded() -> Self {
        Self { max_dim: usize::MAX }
    }

    pub fn max_dim(&self) -> usize {
        self.max_dim
    }

    pub fn admits(&self, dim: usize) -> bool {
        dim <= self.max_dim
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if self.admits(dim) {
            Ok(())
        } else {
            Err(Error::OracleTooLarge {
                dim,
                cap: self.max_dim,
            })
        }
    }

    fn eig(&self, mat: &DMatrix<C64>) -> Result<DenseEig> {
        if !mat.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "dense eigensolve of a {}x{} matrix",
                mat.nrows(),
                mat.ncols()
            )));
        }
        self.check_dim(mat.nrows())?;
        let residual = hermitian_residual(mat);
        if residual > DEFAULT_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let mut h = mat.clone();
        hermitize_in_place(&mut h);
        let se = SymmetricEigen::new(h);
        Ok(DenseEig {
            values: se.eigenvalues.iter().copied().collect(),
            vectors: se.eigenvectors,
        })
    }

    fn eig_pd(&self, mat: &DMatrix<C64>) -> Result<DenseEig> {
        let e = self.eig(mat)?;
        let lambda_min = e.min();
        if lambda_min <= DEFAULT_TOL * e.max().max(1.0) {
            return Err(Error::NotPd { lambda_min });
        }
        Ok(e)
    }

    /// Sorted eigenvalues of a Hermitian matrix.
    pub fn eigenvalues(&self, mat: &DMatrix<C64>) -> Result<Vec<f64>> {
        let mut v = self.eig(mat)?.values;
        v.sort_by(f64::total_cmp);
        Ok(v)
    }

    pub fn funcs(&self, mat: &DMatrix<C64>, f: MatrixFn) -> Result<DMatrix<C64>> {
        let e = if f.requires_pd() { self.eig_pd(mat)? } else { self.eig(mat)? };
        Ok(e.map(|x| f.eval(x)))
    }

    /// `A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}` on dense matrices.
    pub fn weighted_mean_matrix(&self, a: &DMatrix<C64>, b: &DMatrix<C64>, t: f64) -> Result<DMatrix<C64>> {
        let ea = self.eig_pd(a)?;
        let root = ea.map(f64::sqrt);
        let inv_root = ea.map(|x| 1.0 / x.sqrt());
        self.eig_pd(b)?;
        let mut inner = &inv_root * b * &inv_root;
        hermitize_in_place(&mut inner);
        let ei = self.eig_pd(&inner)?;
        let middle = if t == 0.5 { ei.map(f64::sqrt) } else { ei.map(|x| x.powf(t)) };
        let mut out = &root * middle * &root;
        hermitize_in_place(&mut out);
        Ok(out)
    }

    pub fn gmean(&self, a: &DenseCirc, b: &DenseCirc) -> Result<DenseCirc> {
        self.weighted_mean(a, b, 0.5)
    }

    pub fn weighted_mean(&self, a: &DenseCirc, b: &DenseCirc, t: f64) -> Result<DenseCirc> {
        if a.mat.shape() != b.mat.shape() || a.p != b.p {
            return Err(Error::DimensionMismatch("dense mean of differently shaped matrices".into()));
        }
        let mat = self.weighted_mean_matrix(&a.mat, &b.mat, t)?;
        Ok(DenseCirc {
            m: a.m,
            n: a.n,
            p: a.p,
            mat,
        })
    }

    /// `‖log(A^{-1/2} B A^{-1/2})‖_F`.
    pub fn distance(&self, a: &DenseCirc, b: &DenseCirc) -> Result<f64> {
        self.distance_matrix(&a.mat, &b.mat)
    }

    pub fn distance_matrix(&self, a: &DMatrix<C64>, b: &DMatrix<C64>) -> Result<f64> {
        if a.shape() != b.shape() {
            return Err(Error::DimensionMismatch("dense distance".into()));
        }
        let inv_root = self.eig_pd(a)?.map(|x| 1.0 / x.sqrt());
        self.eig_pd(b)?;
        let inner = &inv_root * b * &inv_root;
        let e = self.eig_pd(&inner)?;
        Ok(e.values.iter().map(|x| x.ln().powi(2)).sum::<f64>().sqrt())
    }

    /// Reads a tensor back from an oracle result, applying real-output recovery
    /// when the inputs were real.
    pub fn read_back(&self, c: &DenseCirc, real: bool) -> Result<Tensor3> {
        let mut t = c.to_tensor_tol(ORACLE_CIRCULANT_TOL)?;
        if real {
            let residue = t.max_abs_imag();
            if residue > spectral::REAL_RECOVERY_TOL * (1.0 + t.frobenius_norm()) {
                return Err(Error::Internal(format!(
                    "dense result of real inputs has imaginary residue {residue:.3e}"
                )));
            }
            t.zero_imag();
        }
        Ok(t)
    }

    /// Weighted geometric mean of two tensors computed through their bcirc images.
    pub fn tensor_weighted_mean(&self, a: &Tensor3, b: &Tensor3, t: f64) -> Result<Tensor3> {
        a.require_square()?;
        if a.dims() != b.dims() {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
        }
        self.check_dim(a.n() * a.p())?;
        let c = self.weighted_mean(&a.bcirc(), &b.bcirc(), t)?;
        self.read_back(&c, a.is_real() && b.is_real())
    }

    pub fn tensor_gmean(&self, a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
        self.tensor_weighted_mean(a, b, 0.5)
    }

    pub fn tensor_distance(&self, a: &Tensor3, b: &Tensor3) -> Result<f64> {
        a.require_square()?;
        if a.dims() != b.dims() {
            return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
        }
        self.distance(&a.bcirc(), &b.bcirc())
    }
}

pub fn dense_gmean(a: &DenseCirc, b: &DenseCirc) -> Result<DenseCirc> {
    Oracle::default().gmean(a, b)
}

pub fn dense_distance(a: &DenseCirc, b: &DenseCirc) -> Result<f64> {
    Oracle::default().distance(a, b)
}

pub fn dense_funcs(mat: &DMatrix<C64>, f: MatrixFn) -> Result<DMatrix<C64>> {
    Oracle::default().funcs(mat, f)
}
