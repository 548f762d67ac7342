//! Riemannian geometry of the T-positive definite cone under the trace metric
//! `g_P(X, Y) = tr(P^{-1} * X * P^{-1} * Y)`.
//!
//! Distances carry the `√p` factor that makes `δ(A, B)` coincide with the
//! affine-invariant distance between `bcirc(A)` and `bcirc(B)`. All quantities
//! are evaluated per Fourier block; by Parseval `p ‖X‖² = Σ_i ‖X_i‖_F²`.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use nalgebra::DMatrix;

use crate::eigh::hermitize_in_place;
use crate::error::{Error, Result};
use crate::means::WeightedMeanCurve;
use crate::par;
use crate::spectral::{self, MatrixFn, THermitianEig, DEFAULT_TOL};
use crate::tensor::{Tensor3, C64};

#[derive(Debug, Clone)]
pub struct MetricValue {
    pub base: Tensor3,
    pub x: Tensor3,
    pub y: Tensor3,
    pub value: f64,
}

fn require_same_dims(a: &Tensor3, b: &Tensor3) -> Result<()> {
    a.require_square()?;
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!("{:?} vs {:?}", a.dims(), b.dims())));
    }
    Ok(())
}

/// `tr(P^{-1} * X * P^{-1} * Y)`, evaluated as `Σ_i tr(P_i^{-1} X_i P_i^{-1} Y_i)`.
pub fn metric(base: &Tensor3, x: &Tensor3, y: &Tensor3) -> Result<MetricValue> {
    require_same_dims(base, x)?;
    require_same_dims(base, y)?;
    let ep = THermitianEig::positive_definite(base, DEFAULT_TOL, "p")?;
    let ex = THermitianEig::hermitian(x, DEFAULT_TOL, "x")?;
    let ey = THermitianEig::hermitian(y, DEFAULT_TOL, "y")?;
    let terms = par::map_indexed(ep.p, |i| {
        let inv = ep.blocks[i].map(|v| 1.0 / v);
        (&inv * &ex.spectrum.blocks[i] * &inv * &ey.spectrum.blocks[i]).trace()
    });
    let total = terms.into_iter().fold(C64::new(0.0, 0.0), |acc, z| acc + z);
    let scale = 1.0 + total.norm();
    if total.im.abs() > 1e-10 * scale {
        return Err(Error::Internal(format!("metric has imaginary part {:.3e}", total.im)));
    }
    Ok(MetricValue {
        base: base.clone(),
        x: x.clone(),
        y: y.clone(),
        value: total.re,
    })
}

/// `δ(A, B) = √p ‖log(A^{-1/2} * B * A^{-1/2})‖`.
pub fn distance(a: &Tensor3, b: &Tensor3) -> Result<f64> {
    Ok(WeightedMeanCurve::new(a, b)?.length())
}

/// A point on the geodesic between two tensors.
#[derive(Debug, Clone)]
pub struct GeodesicSample {
    pub t: f64,
    pub point: Tensor3,
    /// Content fingerprints of the endpoints.
    pub a_ref: u64,
    pub b_ref: u64,
}

/// Fingerprint of a tensor's dimensions and bit pattern.
pub fn fingerprint(t: &Tensor3) -> u64 {
    let mut h = DefaultHasher::new();
    t.dims().hash(&mut h);
    for z in t.as_slice() {
        z.re.to_bits().hash(&mut h);
        z.im.to_bits().hash(&mut h);
    }
    h.finish()
}

/// Samples `γ(t) = A #_t B` at each `t` in `ts`, which must lie in `[0, 1]`.
pub fn geodesic(a: &Tensor3, b: &Tensor3, ts: &[f64]) -> Result<Vec<GeodesicSample>> {
    if let Some(&bad) = ts.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::ParameterOutOfRange(bad));
    }
    let curve = WeightedMeanCurve::new(a, b)?;
    let (a_ref, b_ref) = (fingerprint(a), fingerprint(b));
    ts.iter()
        .map(|&t| {
            Ok(GeodesicSample {
                t,
                point: curve.at(t)?,
                a_ref,
                b_ref,
            })
        })
        .collect()
}

/// Riemannian exponential at `base`: `P^{1/2} exp(P^{-1/2} X P^{-1/2}) P^{1/2}`.
pub fn exp_map(base: &Tensor3, x: &Tensor3) -> Result<Tensor3> {
    require_same_dims(base, x)?;
    let ep = THermitianEig::positive_definite(base, DEFAULT_TOL, "p")?;
    let root = spectral::assemble(&ep.map_blocks(f64::sqrt), ep.is_real_input())?;
    let inv_root = spectral::assemble(&ep.map_blocks(|v| 1.0 / v.sqrt()), ep.is_real_input())?;
    let inner = inv_root.t_product(x)?.t_product(&inv_root)?.hermitian_part()?;
    let e = spectral::spectral_map(&inner, MatrixFn::Exp).map_err(|e| e.with_arg("x"))?;
    root.t_product(&e)?.t_product(&root)?.hermitian_part()
}

/// Riemannian logarithm at `base`: `P^{1/2} log(P^{-1/2} Q P^{-1/2}) P^{1/2}`.
pub fn log_map(base: &Tensor3, q: &Tensor3) -> Result<Tensor3> {
    require_same_dims(base, q)?;
    let ep = THermitianEig::positive_definite(base, DEFAULT_TOL, "p")?;
    THermitianEig::positive_definite(q, DEFAULT_TOL, "q")?;
    let root = spectral::assemble(&ep.map_blocks(f64::sqrt), ep.is_real_input())?;
    let inv_root = spectral::assemble(&ep.map_blocks(|v| 1.0 / v.sqrt()), ep.is_real_input())?;
    let inner = inv_root.t_product(q)?.t_product(&inv_root)?.hermitian_part()?;
    let l = spectral::spectral_map(&inner, MatrixFn::Log)?;
    root.t_product(&l)?.t_product(&root)?.hermitian_part()
}

/// 4-point Gauss–Legendre nodes and weights on [-1, 1].
const GL4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_8),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_2),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_2),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_8),
];
const GL3: [(f64, f64); 3] = [
    (-0.774_596_669_241_483_4, 5.0 / 9.0),
    (0.0, 8.0 / 9.0),
    (0.774_596_669_241_483_4, 5.0 / 9.0),
];
const GL2: [(f64, f64); 2] = [(-0.577_350_269_189_625_8, 1.0), (0.577_350_269_189_625_8, 1.0)];

/// Relative finite-difference step for path derivatives.
pub const PATH_FD_STEP: f64 = 1e-5;

/// Default number of quadrature nodes (16 panels of the 4-point rule).
pub const DEFAULT_QUAD_POINTS: usize = 64;

/// Length `√p ∫ ‖γ^{-1/2} * γ' * γ^{-1/2}‖ dt` of a user-supplied path.
///
/// The integral is a composite Gauss–Legendre rule: 4-point panels, with
/// `quad_points / 4` panels (rounded up); fewer than 4 points use a single
/// panel of that order. `γ'` is a central difference with step
/// `PATH_FD_STEP * |t1 - t0|`.
pub fn path_length<F>(path: F, t0: f64, t1: f64, quad_points: usize) -> Result<f64>
where
    F: Fn(f64) -> Result<Tensor3>,
{
    if quad_points < 2 {
        return Err(Error::InvalidArgument(format!("quad_points = {quad_points}, need at least 2")));
    }
    if !(t0.is_finite() && t1.is_finite()) {
        return Err(Error::InvalidArgument("non-finite path interval".into()));
    }
    if t0 == t1 {
        return Ok(0.0);
    }
    let rule: &[(f64, f64)] = match quad_points {
        2 => &GL2,
        3 => &GL3,
        _ => &GL4,
    };
    let panels = quad_points.div_ceil(rule.len());
    let h = PATH_FD_STEP * (t1 - t0).abs();
    let width = (t1 - t0) / panels as f64;
    let mut total = 0.0;
    for panel in 0..panels {
        let lo = t0 + width * panel as f64;
        let mid = lo + 0.5 * width;
        for &(x, w) in rule {
            let t = mid + 0.5 * width * x;
            total += w * 0.5 * width * speed(&path, t, h)?;
        }
    }
    Ok(total.abs())
}

/// `√p ‖γ(t)^{-1/2} * γ'(t) * γ(t)^{-1/2}‖`.
fn speed<F>(path: &F, t: f64, h: f64) -> Result<f64>
where
    F: Fn(f64) -> Result<Tensor3>,
{
    let g = path(t)?;
    let deriv = path(t + h)?.add_scaled(&path(t - h)?, -1.0)?.scale(0.5 / h);
    require_same_dims(&g, &deriv)?;
    let eg = THermitianEig::positive_definite(&g, DEFAULT_TOL, &format!("path({t})"))?;
    let mut ds = spectral::to_spectrum(&deriv)?;
    for blk in &mut ds.blocks {
        hermitize_in_place(blk);
    }
    let terms = par::map_indexed(eg.p, |i| {
        let inv_root = eg.blocks[i].map(|v| 1.0 / v.sqrt());
        let m: DMatrix<C64> = &inv_root * &ds.blocks[i] * &inv_root;
        m.norm_squared()
    });
    Ok(terms.into_iter().sum::<f64>().sqrt())
}

/// Finite-difference check of the exponential metric increasing property.
///
/// Returns `(‖(e^H)^{-1/2} * D(K) * (e^H)^{-1/2}‖, ‖K‖)` where `D(K)` is the
/// central difference `(exp(H + εK) - exp(H - εK)) / (2ε)`, `ε = fd_step`.
pub fn iemi_check(h: &Tensor3, k: &Tensor3, fd_step: f64) -> Result<(f64, f64)> {
    require_same_dims(h, k)?;
    if !(fd_step > 0.0 && fd_step.is_finite()) {
        return Err(Error::InvalidArgument(format!("fd_step = {fd_step}")));
    }
    for (t, name) in [(h, "h"), (k, "k")] {
        let residual = t.hermitian_residual()?;
        if residual > DEFAULT_TOL {
            return Err(Error::NotTHermitian {
                arg: name.to_string(),
                residual,
            });
        }
    }
    let h = h.hermitian_part()?;
    let k = k.hermitian_part()?;
    let plus = spectral::spectral_map(&h.add_scaled(&k, fd_step)?, MatrixFn::Exp)?;
    let minus = spectral::spectral_map(&h.add_scaled(&k, -fd_step)?, MatrixFn::Exp)?;
    let deriv = plus.add_scaled(&minus, -1.0)?.scale(0.5 / fd_step);
    let inv_root = spectral::spectral_map(&h.scale(-0.5), MatrixFn::Exp)?;
    let lhs = inv_root.t_product(&deriv)?.t_product(&inv_root)?.frobenius_norm();
    Ok((lhs, k.frobenius_norm()))
}

/// Default finite-difference step for [`iemi_check`]: `1e-5 max(1, ‖k‖)`.
pub fn default_iemi_step(k: &Tensor3) -> f64 {
    1e-5 * k.frobenius_norm().max(1.0)
}

/// `(δ(A, B), √p ‖log A - log B‖)`; the first is never smaller than the second.
pub fn lower_bound_check(a: &Tensor3, b: &Tensor3) -> Result<(f64, f64)> {
    let delta = distance(a, b)?;
    let la = spectral::spectral_map(a, MatrixFn::Log)?;
    let lb = spectral::spectral_map(b, MatrixFn::Log).map_err(|e| e.with_arg("b"))?;
    let bound = (a.p() as f64).sqrt() * la.add_scaled(&lb, -1.0)?.frobenius_norm();
    Ok((delta, bound))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_to_e_times_first_slice() {
        let a = Tensor3::identity(2, 3);
        let b = a.scale(std::f64::consts::E);
        let d = distance(&a, &b).unwrap();
        assert!((d - 6f64.sqrt()).abs() < 1e-14);
        assert!(distance(&b, &b).unwrap() < 1e-15);
    }

    #[test]
    fn metric_at_identity() {
        let id = Tensor3::identity(2, 3);
        let x = Tensor3::from_fn(2, 2, 3, |i, j, k| C64::new((i + j) as f64 + [1.0, 0.5, 0.5][k], 0.0));
        let v = metric(&id, &x, &x).unwrap();
        let norm = x.frobenius_norm();
        assert!((v.value - 3.0 * norm * norm).abs() < 1e-12);
    }

    #[test]
    fn geodesic_range_checked() {
        let id = Tensor3::identity(2, 2);
        assert!(matches!(geodesic(&id, &id, &[0.5, 1.5]), Err(Error::ParameterOutOfRange(t)) if t == 1.5));
        assert!(matches!(geodesic(&id, &id, &[-0.1]), Err(Error::ParameterOutOfRange(_))));
        let s = geodesic(&id, &id.scale(4.0), &[0.5]).unwrap();
        assert!(s[0].point.max_abs_diff(&id.scale(2.0)) < 1e-14);
        assert_eq!(s[0].a_ref, fingerprint(&id));
    }

    #[test]
    fn constant_path_has_zero_length() {
        let a = Tensor3::identity(2, 3).scale(2.0);
        let len = path_length(|_| Ok(a.clone()), 0.0, 1.0, 64).unwrap();
        assert!(len.abs() < 1e-10);
        assert!(path_length(|_| Ok(a.clone()), 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn iemi_at_zero_is_equality() {
        let h = Tensor3::zeros(2, 2, 2);
        let k = Tensor3::from_fn(2, 2, 2, |i, j, _| C64::new(if i == j { 0.3 } else { 0.1 }, 0.0));
        let (lhs, rhs) = iemi_check(&h, &k, 1e-5).unwrap();
        assert!((lhs - rhs).abs() < 1e-9 * rhs);
        assert!(iemi_check(&h, &k, 0.0).is_err());
    }

    #[test]
    fn lower_bound_with_identity_base() {
        let a = Tensor3::identity(2, 3);
        let b = Tensor3::from_fn(2, 2, 3, |i, j, k| {
            C64::new(if i == j { [3.0, 0.4, 0.4][k] } else { [0.2, 0.1, 0.1][k] }, 0.0)
        });
        let (delta, bound) = lower_bound_check(&a, &b).unwrap();
        assert!((delta - bound).abs() < 1e-12 * delta);
    }
}
