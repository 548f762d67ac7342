//! Geometric means of T-positive definite tensors and the T-Löwner order.

use nalgebra::DMatrix;

use crate::eigh::{hermitize_in_place, Eigh};
use crate::error::{Error, Result};
use crate::oracle::Oracle;
use crate::par;
use crate::spectral::{self, assemble, BlockSpectrum, MatrixFn, THermitianEig, TpdCertificate, Verdict, DEFAULT_TOL};
use crate::tensor::{Tensor3, C64};

/// Upper bound on the relative Riccati residual of a computed mean.
pub const RICCATI_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanPath {
    DenseOracle,
    FourierBlocks,
}

#[derive(Debug, Clone)]
pub struct MeanResult {
    pub mean: Tensor3,
    pub path_used: MeanPath,
    pub riccati_residual: f64,
    pub certificate: TpdCertificate,
}

fn require_same_square(a: &Tensor3, b: &Tensor3) -> Result<()> {
    a.require_square()?;
    b.require_square()?;
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

/// Per-block factors of the weighted mean curve `A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}`,
/// so the curve can be evaluated at many `t` for the price of two eigensolves per block.
#[derive(Debug, Clone)]
pub struct WeightedMeanCurve {
    n: usize,
    p: usize,
    root_a: Vec<DMatrix<C64>>,
    inner: Vec<Eigh>,
    real: bool,
}

impl WeightedMeanCurve {
    pub fn new(a: &Tensor3, b: &Tensor3) -> Result<Self> {
        require_same_square(a, b)?;
        let ea = THermitianEig::positive_definite(a, DEFAULT_TOL, "a")?;
        let eb = THermitianEig::positive_definite(b, DEFAULT_TOL, "b")?;
        let factors = par::map_indexed(ea.p, |i| {
            let root = ea.blocks[i].map(f64::sqrt);
            let inv_root = ea.blocks[i].map(|x| 1.0 / x.sqrt());
            let mut c = &inv_root * &eb.spectrum.blocks[i] * &inv_root;
            hermitize_in_place(&mut c);
            (root, Eigh::new(&c))
        });
        let (root_a, inner) = factors.into_iter().unzip();
        Ok(Self {
            n: ea.n,
            p: ea.p,
            root_a,
            inner,
            real: ea.is_real_input() && eb.is_real_input(),
        })
    }

    /// Fourier blocks of the curve at `t`.
    pub fn blocks_at(&self, t: f64) -> BlockSpectrum {
        let blocks = par::map_indexed(self.p, |i| {
            let middle = if t == 0.5 {
                self.inner[i].map(f64::sqrt)
            } else {
                self.inner[i].map(|x| x.powf(t))
            };
            let mut out = &self.root_a[i] * middle * &self.root_a[i];
            hermitize_in_place(&mut out);
            out
        });
        BlockSpectrum {
            n: self.n,
            p: self.p,
            blocks,
        }
    }

    pub fn at(&self, t: f64) -> Result<Tensor3> {
        assemble(&self.blocks_at(t), self.real)
    }

    /// `sqrt(Σ_i ‖log(A_i^{-1/2} B_i A_i^{-1/2})‖_F²)`: the Riemannian distance between the endpoints.
    pub fn length(&self) -> f64 {
        self.inner
            .iter()
            .map(|e| e.values.iter().map(|x| x.ln().powi(2)).sum::<f64>())
            .sum::<f64>()
            .sqrt()
    }
}

/// `A # B` by per-block matrix means in the Fourier domain.
pub fn geometric_mean_blocks(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    WeightedMeanCurve::new(a, b)?.at(0.5)
}

/// Weighted geometric mean `A #_t B`; `t` may be any real.
pub fn weighted_geometric_mean(a: &Tensor3, b: &Tensor3, t: f64) -> Result<Tensor3> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("weight t = {t}")));
    }
    WeightedMeanCurve::new(a, b)?.at(t)
}

/// `A # B` with post-construction verification of the Riccati equation and
/// positive definiteness.
pub fn geometric_mean(a: &Tensor3, b: &Tensor3, path: MeanPath) -> Result<MeanResult> {
    require_same_square(a, b)?;
    let mean = match path {
        MeanPath::FourierBlocks => geometric_mean_blocks(a, b)?,
        MeanPath::DenseOracle => {
            THermitianEig::positive_definite(a, DEFAULT_TOL, "a")?;
            THermitianEig::positive_definite(b, DEFAULT_TOL, "b")?;
            Oracle::default().tensor_gmean(a, b)?
        }
    };
    let certificate = spectral::check_tpd(&mean, DEFAULT_TOL)?;
    if certificate.verdict != Verdict::PositiveDefinite {
        return Err(Error::Internal(format!(
            "computed mean is not T-positive definite ({:?})",
            certificate.verdict
        )));
    }
    let riccati_residual = riccati_residual(&mean, a, b)?;
    if riccati_residual > RICCATI_TOL {
        return Err(Error::Internal(format!(
            "computed mean has Riccati residual {riccati_residual:.3e}"
        )));
    }
    Ok(MeanResult {
        mean,
        path_used: path,
        riccati_residual,
        certificate,
    })
}

/// `‖X * A^{-1} * X - B‖ / max(1, ‖B‖)`.
pub fn riccati_residual(x: &Tensor3, a: &Tensor3, b: &Tensor3) -> Result<f64> {
    require_same_square(x, a)?;
    require_same_square(x, b)?;
    let a_inv = spectral::spectral_map(a, MatrixFn::Inv).map_err(|e| e.with_arg("a"))?;
    let lhs = x.t_product(&a_inv)?.t_product(x)?;
    Ok((&lhs - b).frobenius_norm() / b.frobenius_norm().max(1.0))
}

/// A Fourier block counts as singular when its smallest singular value falls
/// below this fraction of the largest singular value over all blocks.
const SINGULAR_RCOND: f64 = 1e-14;

/// Congruence `Γ_C(A) = C^H * A * C`.
pub fn congruence(c: &Tensor3, a: &Tensor3) -> Result<Tensor3> {
    require_same_square(c, a)?;
    let spec = spectral::to_spectrum(c)?;
    let extremes = par::map_indexed(spec.p, |i| {
        let sv = spec.blocks[i].clone().singular_values();
        (sv.min(), sv.max())
    });
    let scale = extremes.iter().map(|e| e.1).fold(0.0, f64::max);
    if let Some(block) = extremes.iter().position(|e| scale == 0.0 || e.0 <= SINGULAR_RCOND * scale) {
        return Err(Error::SingularTensor { block });
    }
    c.conj_transpose().t_product(a)?.t_product(c)
}

/// `(A + B) / 2`.
pub fn arithmetic_mean(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    Ok(a.add_scaled(b, 1.0)?.scale(0.5))
}

/// `2 (A^{-1} + B^{-1})^{-1}`.
pub fn harmonic_mean(a: &Tensor3, b: &Tensor3) -> Result<Tensor3> {
    let ai = spectral::spectral_map(a, MatrixFn::Inv).map_err(|e| e.with_arg("a"))?;
    let bi = spectral::spectral_map(b, MatrixFn::Inv).map_err(|e| e.with_arg("b"))?;
    let sum = ai.add_scaled(&bi, 1.0)?.hermitian_part()?;
    Ok(spectral::spectral_map(&sum, MatrixFn::Inv)?.scale(2.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LownerOrder {
    /// `B - A` is T-positive definite.
    StrictlyLess,
    /// `B - A` is T-positive semidefinite but not definite.
    LessOrEqual,
    Incomparable,
}

impl LownerOrder {
    /// `A <= B` in the T-Löwner order.
    pub fn is_le(self) -> bool {
        matches!(self, LownerOrder::StrictlyLess | LownerOrder::LessOrEqual)
    }
}

/// Classifies `B - A` in the T-Löwner order.
pub fn lowner_compare(a: &Tensor3, b: &Tensor3, tol: f64) -> Result<LownerOrder> {
    require_same_square(a, b)?;
    for (t, name) in [(a, "a"), (b, "b")] {
        let residual = t.hermitian_residual()?;
        if residual > tol {
            return Err(Error::NotTHermitian {
                arg: name.to_string(),
                residual,
            });
        }
    }
    let diff = b.add_scaled(a, -1.0)?.hermitian_part()?;
    let cert = spectral::check_tpd(&diff, tol)?;
    Ok(match cert.verdict {
        Verdict::PositiveDefinite => LownerOrder::StrictlyLess,
        Verdict::PositiveSemiDefinite => LownerOrder::LessOrEqual,
        _ => LownerOrder::Incomparable,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diag_first_slice(n: usize, p: usize, v: f64) -> Tensor3 {
        Tensor3::identity(n, p).scale(v)
    }

    #[test]
    fn commuting_scalar_case() {
        let id = Tensor3::identity(2, 3);
        let four = diag_first_slice(2, 3, 4.0);
        let m = geometric_mean(&id, &four, MeanPath::FourierBlocks).unwrap();
        assert!(m.mean.max_abs_diff(&diag_first_slice(2, 3, 2.0)) < 1e-14);
        assert!(m.riccati_residual < 1e-14);
        assert!(m.mean.is_real());
    }

    #[test]
    fn riccati_residual_direct() {
        let id = Tensor3::identity(3, 2);
        let two = id.scale(2.0);
        let r = riccati_residual(&id, &id, &two).unwrap();
        assert!((r - 0.5).abs() < 1e-15);
        assert_eq!(riccati_residual(&two, &two, &two).unwrap(), 0.0);
        let neg = id.scale(-1.0);
        match riccati_residual(&id, &neg, &id) {
            Err(Error::NotTpd { arg, .. }) => assert_eq!(arg, "a"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn not_tpd_names_argument() {
        let id = Tensor3::identity(2, 2);
        let neg = id.scale(-1.0);
        for path in [MeanPath::FourierBlocks, MeanPath::DenseOracle] {
            match geometric_mean(&id, &neg, path) {
                Err(Error::NotTpd { arg, .. }) => assert_eq!(arg, "b"),
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(matches!(
            geometric_mean(&id, &Tensor3::identity(2, 3), MeanPath::FourierBlocks),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn lowner_basics() {
        let id = Tensor3::identity(2, 3);
        assert_eq!(lowner_compare(&id, &id, DEFAULT_TOL).unwrap(), LownerOrder::LessOrEqual);
        assert_eq!(lowner_compare(&id, &id.scale(2.0), DEFAULT_TOL).unwrap(), LownerOrder::StrictlyLess);
        assert_eq!(lowner_compare(&id.scale(2.0), &id, DEFAULT_TOL).unwrap(), LownerOrder::Incomparable);
        let skew = Tensor3::from_fn(2, 2, 3, |i, j, k| C64::new((i + 2 * j + k) as f64, 0.0));
        assert!(matches!(lowner_compare(&skew, &id, DEFAULT_TOL), Err(Error::NotTHermitian { .. })));
    }

    #[test]
    fn congruence_by_identity_and_singular() {
        let a = diag_first_slice(2, 3, 3.0);
        let id = Tensor3::identity(2, 3);
        assert_eq!(congruence(&id, &a).unwrap(), a);
        // all slices equal => Fourier blocks 1..p-1 vanish
        let flat = Tensor3::from_fn(2, 2, 3, |i, j, _| C64::new(if i == j { 1.0 } else { 0.0 }, 0.0));
        let r = congruence(&flat, &a);
        assert!(matches!(r, Err(Error::SingularTensor { block: 1 })), "{r:?}");
    }

    #[test]
    fn curve_endpoints() {
        let a = diag_first_slice(2, 2, 3.0);
        let b = Tensor3::from_fn(2, 2, 2, |i, j, k| {
            C64::new(if i == j { [5.0, 1.0][k] } else { [0.5, 0.25][k] }, 0.0)
        });
        let curve = WeightedMeanCurve::new(&a, &b).unwrap();
        assert!(curve.at(0.0).unwrap().rel_diff(&a) < 1e-14);
        assert!(curve.at(1.0).unwrap().rel_diff(&b) < 1e-14);
    }
}
