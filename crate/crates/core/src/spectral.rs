//! Fourier-domain block diagonalization and the spectral calculus built on it.
//!
//! For a frontal-square `n x n x p` tensor the DFT along the tube direction,
//! `A_i = Σ_k ω^{(i-1)(k-1)} A^(k)` with `ω = exp(2πi/p)`, produces the `p`
//! diagonal blocks of `(F_p ⊗ I_n) bcirc(A) (F_p^H ⊗ I_n)`. Every T-product
//! identity becomes a blockwise matrix identity there, so all matrix functions
//! of T-Hermitian tensors are computed per block and transformed back.

use std::f64::consts::PI;

use nalgebra::DMatrix;

use crate::eigh::{hermitize_in_place, Eigh};
use crate::error::{Error, Result};
use crate::par;
use crate::tensor::{Tensor3, C64};

/// Default scale-aware tolerance for Hermitian and positive-definiteness tests.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Bound on the imaginary residue of results computed from all-real inputs,
/// relative to `1 + ‖result‖`.
pub const REAL_RECOVERY_TOL: f64 = 1e-10;

/// `ω^j = exp(2πi j / p)` for `j = 0..p`.
fn twiddles(p: usize) -> Vec<C64> {
    (0..p)
        .map(|j| {
            if j == 0 {
                C64::new(1.0, 0.0)
            } else {
                C64::from_polar(1.0, 2.0 * PI * j as f64 / p as f64)
            }
        })
        .collect()
}

/// The `p` Fourier-domain diagonal blocks of a frontal-square tensor.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSpectrum {
    pub n: usize,
    pub p: usize,
    pub blocks: Vec<DMatrix<C64>>,
}

impl BlockSpectrum {
    pub fn new(blocks: Vec<DMatrix<C64>>) -> Result<Self> {
        let n = blocks
            .first()
            .map(|b| b.nrows())
            .ok_or_else(|| Error::DimensionMismatch("spectrum needs at least one block".into()))?;
        if n == 0 || blocks.iter().any(|b| b.shape() != (n, n)) {
            return Err(Error::DimensionMismatch("spectrum blocks must all be n x n".into()));
        }
        let p = blocks.len();
        Ok(Self { n, p, blocks })
    }

    /// `Σ_i ‖A_i‖_F²`, which equals `p ‖a‖²` for the source tensor.
    pub fn norm_squared(&self) -> f64 {
        self.blocks.iter().map(|b| b.norm_squared()).sum()
    }

    /// Blockwise product; the spectrum of the T-product.
    pub fn mul(&self, other: &BlockSpectrum) -> Result<BlockSpectrum> {
        if self.n != other.n || self.p != other.p {
            return Err(Error::DimensionMismatch("spectrum product".into()));
        }
        Ok(BlockSpectrum {
            n: self.n,
            p: self.p,
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        })
    }

    /// Largest deviation from `A_{p+2-i} = conj(A_i)`, relative to `max(1, max_i ‖A_i‖)`.
    pub fn conjugate_symmetry_residual(&self) -> f64 {
        let p = self.p;
        let scale = self.blocks.iter().map(|b| b.norm()).fold(1.0, f64::max);
        (0..p)
            .map(|i| (&self.blocks[(p - i) % p] - self.blocks[i].conjugate()).norm())
            .fold(0.0, f64::max)
            / scale
    }
}

/// Forward transform, evaluated as the direct sum over slices.
pub fn to_spectrum(a: &Tensor3) -> Result<BlockSpectrum> {
    a.require_square()?;
    let (n, _, p) = a.dims();
    let w = twiddles(p);
    let blocks = par::map_indexed(p, |i| {
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for k in 0..p {
            acc.zip_apply(&a.slice(k), |x, y| *x += w[(i * k) % p] * y);
        }
        acc
    });
    Ok(BlockSpectrum { n, p, blocks })
}

/// Inverse transform `A^(k) = (1/p) Σ_i ω^{-(i-1)(k-1)} A_i`.
pub fn from_spectrum(s: &BlockSpectrum) -> Tensor3 {
    let (n, p) = (s.n, s.p);
    let w = twiddles(p);
    let inv_p = 1.0 / p as f64;
    let slices = par::map_indexed(p, |k| {
        let mut acc = DMatrix::<C64>::zeros(n, n);
        for i in 0..p {
            let coeff = w[(i * k) % p].conj();
            acc.zip_apply(&s.blocks[i], |x, y| *x += coeff * y);
        }
        acc * C64::new(inv_p, 0.0)
    });
    Tensor3::from_slices(&slices).expect("blocks are n x n by construction")
}

/// Inverse transform for results that are provably real. The imaginary residue
/// must stay within [`REAL_RECOVERY_TOL`] and is then zeroed.
pub fn from_spectrum_real(s: &BlockSpectrum) -> Result<Tensor3> {
    let mut t = from_spectrum(s);
    let residue = t.max_abs_imag();
    if residue > REAL_RECOVERY_TOL * (1.0 + t.frobenius_norm()) {
        return Err(Error::Internal(format!(
            "result of real inputs has imaginary residue {residue:.3e}"
        )));
    }
    t.zero_imag();
    Ok(t)
}

/// Reassembles a tensor, applying real-output recovery when `real` is set.
pub(crate) fn assemble(s: &BlockSpectrum, real: bool) -> Result<Tensor3> {
    let t = if real { from_spectrum_real(s)? } else { from_spectrum(s) };
    t.ensure_finite("spectral reassembly")?;
    Ok(t)
}

/// T-eigenvalues: the union of the Fourier blocks' spectra, sorted by real
/// then imaginary part. Equal to the spectrum of `bcirc(a)`.
pub fn t_eigenvalues(a: &Tensor3) -> Result<Vec<C64>> {
    let spec = to_spectrum(a)?;
    let hermitian = a.hermitian_residual()? <= DEFAULT_TOL;
    let per_block: Vec<Vec<C64>> = par::map_indexed(spec.p, |i| {
        let block = &spec.blocks[i];
        if hermitian {
            Eigh::new(block).values.into_iter().map(|x| C64::new(x, 0.0)).collect()
        } else {
            nalgebra::Schur::new(block.clone())
                .eigenvalues()
                .map(|v| v.iter().copied().collect())
                .unwrap_or_default()
        }
    });
    let mut all: Vec<C64> = per_block.into_iter().flatten().collect();
    if all.len() != a.n() * a.p() {
        return Err(Error::Internal("Schur iteration failed to converge".into()));
    }
    all.sort_by(|x, y| x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)));
    Ok(all)
}

/// `tr(bcirc(a)) = p Σ_i (A^(1))_ii`.
pub fn t_trace(a: &Tensor3) -> Result<C64> {
    a.require_square()?;
    Ok(a.slice(0).trace() * a.p() as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    PositiveDefinite,
    PositiveSemiDefinite,
    Indefinite,
    NotHermitian,
}

/// Evidence for (or against) T-positive definiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct TpdCertificate {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub per_block_min: Vec<f64>,
    pub hermitian_residual: f64,
    pub tol_used: f64,
    pub verdict: Verdict,
}

impl TpdCertificate {
    fn from_blocks(eigs: &[Eigh], hermitian_residual: f64, tol: f64) -> Self {
        let per_block_min: Vec<f64> = eigs.iter().map(Eigh::min).collect();
        let lambda_min = per_block_min.iter().copied().fold(f64::INFINITY, f64::min);
        let lambda_max = eigs.iter().map(Eigh::max).fold(f64::NEG_INFINITY, f64::max);
        let scale = tol * lambda_max.max(1.0);
        let verdict = if hermitian_residual > tol {
            Verdict::NotHermitian
        } else if lambda_min > scale {
            Verdict::PositiveDefinite
        } else if lambda_min >= -scale {
            Verdict::PositiveSemiDefinite
        } else {
            Verdict::Indefinite
        };
        Self {
            lambda_min,
            lambda_max,
            per_block_min,
            hermitian_residual,
            tol_used: tol,
            verdict,
        }
    }

    pub fn is_pd(&self) -> bool {
        self.verdict == Verdict::PositiveDefinite
    }

    pub(crate) fn require_pd(&self, arg: &str) -> Result<()> {
        if self.is_pd() {
            Ok(())
        } else {
            Err(Error::NotTpd {
                arg: arg.to_string(),
                verdict: self.verdict,
                lambda_min: self.lambda_min,
            })
        }
    }
}

/// Per-block Hermitian eigendecompositions of a T-Hermitian tensor: the
/// T-eigenvalue decomposition in block form.
#[derive(Debug, Clone)]
pub struct THermitianEig {
    pub n: usize,
    pub p: usize,
    pub blocks: Vec<Eigh>,
    pub certificate: TpdCertificate,
    /// Hermitized Fourier blocks of the source tensor.
    pub spectrum: BlockSpectrum,
    real_input: bool,
}

impl THermitianEig {
    /// Decomposes `a`, symmetrizing each Fourier block first. Does not reject
    /// non-Hermitian input; inspect `certificate.verdict`.
    pub fn new(a: &Tensor3, tol: f64) -> Result<Self> {
        let residual = a.hermitian_residual()?;
        let mut spec = to_spectrum(a)?;
        for b in &mut spec.blocks {
            hermitize_in_place(b);
        }
        let blocks = par::map_indexed(spec.p, |i| Eigh::new(&spec.blocks[i]));
        let certificate = TpdCertificate::from_blocks(&blocks, residual, tol);
        Ok(Self {
            n: spec.n,
            p: spec.p,
            blocks,
            certificate,
            spectrum: spec,
            real_input: a.is_real(),
        })
    }

    /// Decomposition of a tensor that must be T-Hermitian.
    pub fn hermitian(a: &Tensor3, tol: f64, arg: &str) -> Result<Self> {
        let e = Self::new(a, tol)?;
        if e.certificate.verdict == Verdict::NotHermitian {
            return Err(Error::NotTHermitian {
                arg: arg.to_string(),
                residual: e.certificate.hermitian_residual,
            });
        }
        Ok(e)
    }

    /// Decomposition of a tensor that must be T-positive definite.
    pub fn positive_definite(a: &Tensor3, tol: f64, arg: &str) -> Result<Self> {
        let e = Self::hermitian(a, tol, arg)?;
        e.certificate.require_pd(arg)?;
        Ok(e)
    }

    pub fn is_real_input(&self) -> bool {
        self.real_input
    }

    /// Fourier blocks of `f(a)`.
    pub fn map_blocks(&self, f: impl Fn(f64) -> f64 + Sync + Send) -> BlockSpectrum {
        let blocks = par::map_indexed(self.p, |i| self.blocks[i].map(&f));
        BlockSpectrum {
            n: self.n,
            p: self.p,
            blocks,
        }
    }

    /// `f(a)` as a tensor.
    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync + Send) -> Result<Tensor3> {
        assemble(&self.map_blocks(f), self.real_input)
    }
}

pub fn check_tpd(a: &Tensor3, tol: f64) -> Result<TpdCertificate> {
    Ok(THermitianEig::new(a, tol)?.certificate)
}

/// Scalar functions lifted to T-Hermitian tensors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFn {
    Power(f64),
    Sqrt,
    Inv,
    Exp,
    Log,
}

impl MatrixFn {
    /// Whether the function is only defined on T-positive definite input.
    pub fn requires_pd(self) -> bool {
        match self {
            MatrixFn::Power(r) => r.fract() != 0.0 || r < 0.0,
            MatrixFn::Sqrt | MatrixFn::Inv | MatrixFn::Log => true,
            MatrixFn::Exp => false,
        }
    }

    pub fn eval(self, x: f64) -> f64 {
        match self {
            MatrixFn::Power(r) if r.fract() == 0.0 && r.abs() < i32::MAX as f64 => x.powi(r as i32),
            MatrixFn::Power(r) => x.powf(r),
            MatrixFn::Sqrt => x.sqrt(),
            MatrixFn::Inv => 1.0 / x,
            MatrixFn::Exp => x.exp(),
            MatrixFn::Log => x.ln(),
        }
    }
}

/// Applies `f` through each Fourier block's eigendecomposition.
pub fn spectral_map(a: &Tensor3, f: MatrixFn) -> Result<Tensor3> {
    spectral_map_tol(a, f, DEFAULT_TOL)
}

pub fn spectral_map_tol(a: &Tensor3, f: MatrixFn, tol: f64) -> Result<Tensor3> {
    let e = if f.requires_pd() {
        THermitianEig::positive_definite(a, tol, "a")?
    } else {
        THermitianEig::hermitian(a, tol, "a")?
    };
    e.map(|x| f.eval(x))
}
