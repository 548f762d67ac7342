//! Dense third-order tensors and the structural operators of the T-product algebra.
//!
//! A [`Tensor3`] of size `m x n x p` is a stack of `p` frontal slices, each an
//! `m x n` complex matrix. Storage is one contiguous buffer, slice-major, with
//! each slice column-major (the nalgebra convention), so that slice `k` is the
//! range `k*m*n .. (k+1)*m*n` and can be viewed as a `DMatrixView` without copying.

use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DMatrixView, DMatrixViewMut};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Relative tolerance for reading a tensor back out of a block circulant matrix.
pub const CIRCULANT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor3 {
    m: usize,
    n: usize,
    p: usize,
    data: Vec<C64>,
}

impl Tensor3 {
    pub fn zeros(m: usize, n: usize, p: usize) -> Self {
        assert!(m > 0 && n > 0 && p > 0, "tensor dimensions must be positive");
        Self {
            m,
            n,
            p,
            data: vec![C64::new(0.0, 0.0); m * n * p],
        }
    }

    /// The identity tensor `I_{n,p}`: first slice `I_n`, all others zero.
    pub fn identity(n: usize, p: usize) -> Self {
        let mut t = Self::zeros(n, n, p);
        for i in 0..n {
            t.set(i, i, 0, C64::new(1.0, 0.0));
        }
        t
    }

    pub fn from_fn(m: usize, n: usize, p: usize, mut f: impl FnMut(usize, usize, usize) -> C64) -> Self {
        let mut t = Self::zeros(m, n, p);
        for k in 0..p {
            for j in 0..n {
                for i in 0..m {
                    t.data[k * m * n + j * m + i] = f(i, j, k);
                }
            }
        }
        t
    }

    /// Builds a tensor from its frontal slices; all slices must share one shape.
    pub fn from_slices(slices: &[DMatrix<C64>]) -> Result<Self> {
        let first = slices
            .first()
            .ok_or_else(|| Error::DimensionMismatch("a tensor needs at least one slice".into()))?;
        let (m, n) = first.shape();
        if m == 0 || n == 0 {
            return Err(Error::DimensionMismatch("empty frontal slice".into()));
        }
        let mut data = Vec::with_capacity(m * n * slices.len());
        for (k, s) in slices.iter().enumerate() {
            if s.shape() != (m, n) {
                return Err(Error::DimensionMismatch(format!(
                    "slice {} is {}x{}, expected {}x{}",
                    k + 1,
                    s.nrows(),
                    s.ncols(),
                    m,
                    n
                )));
            }
            data.extend_from_slice(s.as_slice());
        }
        let t = Self {
            m,
            n,
            p: slices.len(),
            data,
        };
        t.ensure_finite("from_slices")?;
        Ok(t)
    }

    pub fn from_real_slices(slices: &[DMatrix<f64>]) -> Result<Self> {
        let cs: Vec<DMatrix<C64>> = slices.iter().map(|s| s.map(|x| C64::new(x, 0.0))).collect();
        Self::from_slices(&cs)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn dims(&self) -> (usize, usize, usize) {
        (self.m, self.n, self.p)
    }

    pub fn is_frontal_square(&self) -> bool {
        self.m == self.n
    }

    pub(crate) fn require_square(&self) -> Result<()> {
        if self.is_frontal_square() {
            Ok(())
        } else {
            Err(Error::NotFrontalSquare { m: self.m, n: self.n })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> C64 {
        self.data[k * self.m * self.n + j * self.m + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: C64) {
        let idx = k * self.m * self.n + j * self.m + i;
        self.data[idx] = v;
    }

    /// Frontal slice `k` (0-based).
    pub fn slice(&self, k: usize) -> DMatrixView<'_, C64> {
        let len = self.m * self.n;
        DMatrixView::from_slice(&self.data[k * len..(k + 1) * len], self.m, self.n)
    }

    pub fn slice_mut(&mut self, k: usize) -> DMatrixViewMut<'_, C64> {
        let len = self.m * self.n;
        DMatrixViewMut::from_slice(&mut self.data[k * len..(k + 1) * len], self.m, self.n)
    }

    pub fn slices(&self) -> Vec<DMatrix<C64>> {
        (0..self.p).map(|k| self.slice(k).into_owned()).collect()
    }

    /// Raw storage in slice-major, column-major-within-slice order.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    /// True when every imaginary part is exactly zero.
    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }

    pub fn max_abs_imag(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, z| acc.max(z.im.abs()))
    }

    pub(crate) fn zero_imag(&mut self) {
        for z in &mut self.data {
            z.im = 0.0;
        }
    }

    pub(crate) fn ensure_finite(&self, what: &'static str) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::NonFinite(what))
        }
    }

    fn require_same_dims(&self, other: &Tensor3, op: &str) -> Result<()> {
        if self.dims() == other.dims() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(format!(
                "{op}: {:?} vs {:?}",
                self.dims(),
                other.dims()
            )))
        }
    }

    pub fn scale(&self, s: f64) -> Tensor3 {
        let mut out = self.clone();
        for z in &mut out.data {
            *z *= s;
        }
        out
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Tensor3, s: f64) -> Result<Tensor3> {
        self.require_same_dims(other, "add")?;
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&other.data) {
            *z += w * s;
        }
        Ok(out)
    }

    /// `Σ conj(a_ijk) b_ijk`.
    pub fn frobenius_inner(&self, other: &Tensor3) -> Result<C64> {
        self.require_same_dims(other, "frobenius_inner")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(C64::new(0.0, 0.0), |acc, (a, b)| acc + a.conj() * b))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖self - other‖ / max(1, ‖other‖)`.
    pub fn rel_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims(), other.dims(), "rel_diff: dimension mismatch");
        let d: f64 = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        d / other.frobenius_norm().max(1.0)
    }

    pub fn max_abs_diff(&self, other: &Tensor3) -> f64 {
        assert_eq!(self.dims(), other.dims(), "max_abs_diff: dimension mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).norm()))
    }

    /// T-conjugate transpose: conjugate-transpose each slice, then reverse slices 2..p.
    pub fn conj_transpose(&self) -> Tensor3 {
        let p = self.p;
        let mut out = Tensor3::zeros(self.n, self.m, p);
        for k in 0..p {
            let src = (p - k) % p;
            let s = self.slice(src);
            out.slice_mut(k).copy_from(&s.adjoint());
        }
        out
    }

    /// `‖a - a^H‖ / max(1, ‖a‖)`.
    pub fn hermitian_residual(&self) -> Result<f64> {
        self.require_square()?;
        Ok(self.conj_transpose().rel_diff(self))
    }

    pub fn is_t_hermitian(&self, tol: f64) -> Result<bool> {
        Ok(self.hermitian_residual()? <= tol)
    }

    /// `(a + a^H) / 2`.
    pub fn hermitian_part(&self) -> Result<Tensor3> {
        self.require_square()?;
        let h = self.conj_transpose();
        let mut out = self.clone();
        for (z, w) in out.data.iter_mut().zip(&h.data) {
            *z = (*z + w) * 0.5;
        }
        Ok(out)
    }

    /// T-product `self * other`, evaluated as the slice-wise cyclic convolution
    /// `C^(k) = Σ_j A^((k-j) mod p) B^(j)`.
    pub fn t_product(&self, other: &Tensor3) -> Result<Tensor3> {
        if self.n != other.m || self.p != other.p {
            return Err(Error::DimensionMismatch(format!(
                "t_product: {:?} * {:?}",
                self.dims(),
                other.dims()
            )));
        }
        let p = self.p;
        let mut out = Tensor3::zeros(self.m, other.n, p);
        for k in 0..p {
            let mut acc = DMatrix::<C64>::zeros(self.m, other.n);
            for j in 0..p {
                let a = self.slice((k + p - j) % p);
                acc.gemm(C64::new(1.0, 0.0), &a, &other.slice(j), C64::new(1.0, 0.0));
            }
            out.slice_mut(k).copy_from(&acc);
        }
        Ok(out)
    }

    /// Vertical stack of the frontal slices, `(m p) x n`.
    pub fn unfold(&self) -> DMatrix<C64> {
        let (m, n, p) = self.dims();
        DMatrix::from_fn(m * p, n, |r, c| self.get(r % m, c, r / m))
    }

    /// Inverse of [`Tensor3::unfold`].
    pub fn fold(mat: &DMatrix<C64>, p: usize) -> Result<Tensor3> {
        if p == 0 || !mat.nrows().is_multiple_of(p) || mat.nrows() == 0 || mat.ncols() == 0 {
            return Err(Error::DimensionMismatch(format!(
                "fold: {} rows not divisible into {} slices",
                mat.nrows(),
                p
            )));
        }
        let m = mat.nrows() / p;
        Ok(Tensor3::from_fn(m, mat.ncols(), p, |i, j, k| mat[(k * m + i, j)]))
    }

    /// Block circulant matricization. Block `(r, c)` is `A^((r - c) mod p)`.
    pub fn bcirc(&self) -> DenseCirc {
        let (m, n, p) = self.dims();
        let mut mat = DMatrix::<C64>::zeros(m * p, n * p);
        for br in 0..p {
            for bc in 0..p {
                let k = (br + p - bc) % p;
                mat.view_mut((br * m, bc * n), (m, n)).copy_from(&self.slice(k));
            }
        }
        DenseCirc { m, n, p, mat }
    }
}

/// An explicit `(m p) x (n p)` block circulant matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseCirc {
    pub m: usize,
    pub n: usize,
    pub p: usize,
    pub mat: DMatrix<C64>,
}

impl DenseCirc {
    /// Wraps a matrix as block circulant with `m x n` blocks, without checking structure.
    pub fn new(mat: DMatrix<C64>, m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 || !mat.nrows().is_multiple_of(m) || !mat.ncols().is_multiple_of(n) || mat.nrows() / m != mat.ncols() / n {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix cannot hold a square grid of {}x{} blocks",
                mat.nrows(),
                mat.ncols(),
                m,
                n
            )));
        }
        let p = mat.nrows() / m;
        Ok(Self { m, n, p, mat })
    }

    pub fn block(&self, br: usize, bc: usize) -> DMatrixView<'_, C64> {
        self.mat.view((br * self.m, bc * self.n), (self.m, self.n))
    }

    /// Frobenius distance from circulant structure, relative to `‖mat‖_F`.
    pub fn circulant_residual(&self) -> f64 {
        let p = self.p;
        let mut sq = 0.0;
        for br in 0..p {
            for bc in 1..p {
                let reference = self.block((br + p - bc) % p, 0);
                sq += (self.block(br, bc) - reference).norm_squared();
            }
        }
        let norm = self.mat.norm();
        if norm == 0.0 {
            0.0
        } else {
            sq.sqrt() / norm
        }
    }

    /// Reads the tensor back from the first block column.
    pub fn to_tensor(&self) -> Result<Tensor3> {
        self.to_tensor_tol(CIRCULANT_TOL)
    }

    pub fn to_tensor_tol(&self, tol: f64) -> Result<Tensor3> {
        let residual = self.circulant_residual();
        if residual > tol {
            return Err(Error::NotCirculant { residual });
        }
        let slices: Vec<DMatrix<C64>> = (0..self.p).map(|k| self.block(k, 0).into_owned()).collect();
        Tensor3::from_slices(&slices)
    }

    pub fn adjoint(&self) -> DenseCirc {
        DenseCirc {
            m: self.n,
            n: self.m,
            p: self.p,
            mat: self.mat.adjoint(),
        }
    }
}

pub fn bcirc(a: &Tensor3) -> DenseCirc {
    a.bcirc()
}

pub fn bcirc_inverse(c: &DenseCirc) -> Result<Tensor3> {
    c.to_tensor()
}

impl Add for &Tensor3 {
    type Output = Tensor3;

    /// Panics on a dimension mismatch; use [`Tensor3::add_scaled`] for a checked sum.
    fn add(self, rhs: &Tensor3) -> Tensor3 {
        self.add_scaled(rhs, 1.0).expect("tensor add: dimension mismatch")
    }
}

impl Sub for &Tensor3 {
    type Output = Tensor3;

    fn sub(self, rhs: &Tensor3) -> Tensor3 {
        self.add_scaled(rhs, -1.0).expect("tensor sub: dimension mismatch")
    }
}

impl Neg for &Tensor3 {
    type Output = Tensor3;

    fn neg(self) -> Tensor3 {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &Tensor3 {
    type Output = Tensor3;

    fn mul(self, s: f64) -> Tensor3 {
        self.scale(s)
    }
}
