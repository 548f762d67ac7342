mod common;

use common::rng;
use nalgebra::DMatrix;
use tpd_core::geometry::{default_iemi_step, exp_map, fingerprint, log_map, DEFAULT_QUAD_POINTS};
use tpd_core::means::{congruence, geometric_mean_blocks, weighted_geometric_mean};
use tpd_core::oracle::Oracle;
use tpd_core::spectral::{spectral_map, to_spectrum, MatrixFn};
use tpd_core::{distance, geodesic, iemi_check, lower_bound_check, metric, path_length, sample, Error, Tensor3, C64};

const DIMS: [(usize, usize); 4] = [(1, 3), (2, 2), (3, 4), (2, 5)];

#[test]
fn metric_is_symmetric_positive_and_matches_dense() {
    let mut r = rng(41);
    for &(n, p) in &DIMS {
        for real in [true, false] {
            let base = sample::tpd(&mut r, n, p, real);
            let x = sample::t_hermitian(&mut r, n, p, real);
            let y = sample::t_hermitian(&mut r, n, p, real);
            let gxy = metric(&base, &x, &y).unwrap().value;
            let gyx = metric(&base, &y, &x).unwrap().value;
            assert!((gxy - gyx).abs() < 1e-10 * gxy.abs().max(1.0));
            assert!(metric(&base, &x, &x).unwrap().value > 0.0);

            let pinv = base.bcirc().mat.try_inverse().unwrap();
            let dense = (&pinv * x.bcirc().mat * &pinv * y.bcirc().mat).trace();
            assert!((gxy - dense.re).abs() < 1e-10 * dense.norm().max(1.0));
        }
    }
}

#[test]
fn distance_matches_dense_and_is_a_metric() {
    let mut r = rng(42);
    let oracle = Oracle::default();
    for &(n, p) in &DIMS {
        for real in [true, false] {
            let a = sample::tpd(&mut r, n, p, real);
            let b = sample::tpd(&mut r, n, p, real);
            let c = sample::tpd(&mut r, n, p, real);
            let dab = distance(&a, &b).unwrap();
            let dense = oracle.distance_matrix(&a.bcirc().mat, &b.bcirc().mat).unwrap();
            assert!((dab - dense).abs() < 1e-10 * dense.max(1.0));
            assert!((dab - distance(&b, &a).unwrap()).abs() < 1e-10 * dab);
            assert!(distance(&a, &a).unwrap() < 1e-12);
            let (dac, dcb) = (distance(&a, &c).unwrap(), distance(&c, &b).unwrap());
            assert!(dab <= dac + dcb + 1e-10);

            // congruence and inversion invariance
            let g = sample::invertible(&mut r, n, p, real);
            let moved = distance(&congruence(&g, &a).unwrap(), &congruence(&g, &b).unwrap()).unwrap();
            assert!((moved - dab).abs() < 1e-9 * dab.max(1.0));
            let ai = spectral_map(&a, MatrixFn::Inv).unwrap();
            let bi = spectral_map(&b, MatrixFn::Inv).unwrap();
            assert!((distance(&ai, &bi).unwrap() - dab).abs() < 1e-9 * dab.max(1.0));
        }
    }
}

#[test]
fn geodesic_midpoint_and_constant_speed() {
    let mut r = rng(43);
    for &(n, p) in &DIMS {
        let a = sample::tpd(&mut r, n, p, true);
        let b = sample::tpd(&mut r, n, p, true);
        let d = distance(&a, &b).unwrap();
        let m = geometric_mean_blocks(&a, &b).unwrap();
        assert!((distance(&a, &m).unwrap() - d / 2.0).abs() < 1e-9 * d.max(1.0));
        assert!((distance(&m, &b).unwrap() - d / 2.0).abs() < 1e-9 * d.max(1.0));

        let ts = [0.0, 0.2, 0.5, 0.9, 1.0];
        let samples = geodesic(&a, &b, &ts).unwrap();
        assert!(samples[0].point.rel_diff(&a) < 1e-10);
        assert!(samples[4].point.rel_diff(&b) < 1e-10);
        assert!(samples.iter().all(|s| s.a_ref == fingerprint(&a) && s.b_ref == fingerprint(&b)));
        for s in &samples {
            for u in &samples {
                let lhs = distance(&s.point, &u.point).unwrap();
                assert!((lhs - (s.t - u.t).abs() * d).abs() < 1e-8 * d.max(1.0));
            }
        }
    }
}

#[test]
fn geodesic_rejects_parameters_outside_unit_interval() {
    let id = Tensor3::identity(2, 2);
    for t in [-0.1, 1.5, f64::NAN] {
        assert!(matches!(geodesic(&id, &id, &[0.5, t]), Err(Error::ParameterOutOfRange(_))));
    }
}

#[test]
fn path_length_of_geodesic_is_distance() {
    let mut r = rng(44);
    for &(n, p) in &DIMS {
        let a = sample::tpd(&mut r, n, p, false);
        let b = sample::tpd(&mut r, n, p, false);
        let d = distance(&a, &b).unwrap();
        let len = path_length(|t| weighted_geometric_mean(&a, &b, t), 0.0, 1.0, DEFAULT_QUAD_POINTS).unwrap();
        assert!((len - d).abs() < 1e-6 * d.max(1.0), "{len} vs {d}");
    }
}

#[test]
fn straight_path_between_commuting_tensors() {
    // diagonal slices commute, so the straight line has an integrable speed
    let mut r = rng(45);
    let (a, b) = sample::commuting_tpd_pair(&mut r, 3, 4, true);
    let line = |t: f64| a.add_scaled(&b.add_scaled(&a, -1.0)?, t);
    let len = path_length(line, 0.0, 1.0, 256).unwrap();

    // exact speed from the diagonal Fourier blocks
    let sa = to_spectrum(&a).unwrap();
    let sb = to_spectrum(&b).unwrap();
    let speed = |t: f64| -> f64 {
        let mut s = 0.0;
        for (ba, bb) in sa.blocks.iter().zip(&sb.blocks) {
            for d in 0..3 {
                let (x, y) = (ba[(d, d)].re, bb[(d, d)].re);
                s += ((y - x) / ((1.0 - t) * x + t * y)).powi(2);
            }
        }
        s.sqrt()
    };
    // fine Simpson rule as reference
    let steps = 20_000;
    let hstep = 1.0 / steps as f64;
    let mut reference = speed(0.0) + speed(1.0);
    for i in 1..steps {
        reference += if i % 2 == 1 { 4.0 } else { 2.0 } * speed(i as f64 * hstep);
    }
    reference *= hstep / 3.0;
    assert!((len - reference).abs() < 1e-6 * reference.max(1.0), "{len} vs {reference}");
    assert!(len >= distance(&a, &b).unwrap() - 1e-9);
}

#[test]
fn path_length_rejects_degenerate_rules() {
    let id = Tensor3::identity(1, 1);
    assert!(path_length(|_| Ok(id.clone()), 0.0, 1.0, 1).is_err());
    assert_eq!(path_length(|_| Ok(id.clone()), 0.3, 0.3, 8).unwrap(), 0.0);
}

/// `D exp(H)[K]` by the Daleckii–Krein formula on one Hermitian block.
fn dk_derivative(h: &DMatrix<C64>, k: &DMatrix<C64>) -> DMatrix<C64> {
    let eig = nalgebra::SymmetricEigen::new(h.clone());
    let u = &eig.eigenvectors;
    let lam = &eig.eigenvalues;
    let kk = u.adjoint() * k * u;
    let n = h.nrows();
    let q = DMatrix::from_fn(n, n, |i, j| {
        let (a, b) = (lam[i], lam[j]);
        let g = if (a - b).abs() < 1e-12 { a.exp() } else { (a.exp() - b.exp()) / (a - b) };
        kk[(i, j)] * g
    });
    u * q * u.adjoint()
}

fn dk_lhs(h: &Tensor3, k: &Tensor3) -> f64 {
    let sh = to_spectrum(h).unwrap();
    let sk = to_spectrum(k).unwrap();
    let mut total = 0.0;
    for (bh, bk) in sh.blocks.iter().zip(&sk.blocks) {
        let bh = (bh + bh.adjoint()) * C64::new(0.5, 0.0);
        let half = tpd_core::dense_funcs(&(&bh * C64::new(-0.5, 0.0)), MatrixFn::Exp).unwrap();
        total += (&half * dk_derivative(&bh, bk) * &half).norm_squared();
    }
    (total / h.p() as f64).sqrt()
}

#[test]
fn iemi_holds_and_matches_daleckii_krein() {
    let mut r = rng(46);
    for trial in 0..40 {
        let (n, p) = DIMS[trial % DIMS.len()];
        let real = trial % 2 == 0;
        let h = sample::t_hermitian_with_norm(&mut r, n, p, real, 1.0);
        let k = sample::t_hermitian_with_norm(&mut r, n, p, real, 0.3 + 0.7 * (trial as f64 / 40.0));
        let (lhs, rhs) = iemi_check(&h, &k, 1e-5).unwrap();
        assert!(lhs >= rhs * (1.0 - 1e-6), "trial {trial}: {lhs} < {rhs}");
        let dk = dk_lhs(&h, &k);
        assert!((lhs - dk).abs() < 1e-7 * dk, "trial {trial}: {lhs} vs {dk}");
    }
}

#[test]
fn iemi_is_tight_for_commuting_directions() {
    let mut r = rng(47);
    let (a, _) = sample::commuting_tpd_pair(&mut r, 3, 4, true);
    let h = spectral_map(&a, MatrixFn::Log).unwrap();
    let k = h.scale(0.5);
    let (lhs, rhs) = iemi_check(&h, &k, default_iemi_step(&k)).unwrap();
    assert!((lhs - rhs).abs() < 1e-8 * rhs);
}

#[test]
fn iemi_rejects_non_hermitian_input() {
    let mut r = rng(48);
    let h = sample::tensor(&mut r, 2, 2, 3, false);
    let k = sample::t_hermitian(&mut r, 2, 3, false);
    assert!(matches!(iemi_check(&h, &k, 1e-5), Err(Error::NotTHermitian { arg, .. }) if arg == "h"));
}

#[test]
fn log_euclidean_lower_bound() {
    let mut r = rng(49);
    for &(n, p) in &DIMS {
        for real in [true, false] {
            let a = sample::tpd(&mut r, n, p, real);
            let b = sample::tpd(&mut r, n, p, real);
            let (delta, bound) = lower_bound_check(&a, &b).unwrap();
            assert!(delta >= bound - 1e-10 * bound.max(1.0));
        }
        let (a, b) = sample::commuting_tpd_pair(&mut r, n, p, true);
        let (delta, bound) = lower_bound_check(&a, &b).unwrap();
        assert!((delta - bound).abs() < 1e-10 * delta.max(1.0));
        let id = Tensor3::identity(n, p);
        let (delta, bound) = lower_bound_check(&id, &b).unwrap();
        assert!((delta - bound).abs() < 1e-10 * delta.max(1.0));
    }
}

#[test]
fn semi_parallelogram_law() {
    let mut r = rng(50);
    for trial in 0..40 {
        let (n, p) = DIMS[trial % DIMS.len()];
        let a = sample::tpd(&mut r, n, p, trial % 2 == 0);
        let b = sample::tpd(&mut r, n, p, trial % 2 == 0);
        let c = sample::tpd(&mut r, n, p, trial % 2 == 0);
        let m = geometric_mean_blocks(&a, &b).unwrap();
        let lhs = distance(&m, &c).unwrap().powi(2);
        let rhs = 0.5 * (distance(&a, &c).unwrap().powi(2) + distance(&b, &c).unwrap().powi(2))
            - 0.25 * distance(&a, &b).unwrap().powi(2);
        assert!(lhs <= rhs + 1e-9, "trial {trial}: {lhs} > {rhs}");
    }
}

#[test]
fn exp_and_log_maps_are_inverse() {
    let mut r = rng(51);
    for &(n, p) in &DIMS {
        for real in [true, false] {
            let base = sample::tpd(&mut r, n, p, real);
            let q = sample::tpd(&mut r, n, p, real);
            let v = log_map(&base, &q).unwrap();
            assert!(exp_map(&base, &v).unwrap().rel_diff(&q) < 1e-10);
            // the geodesic from base in direction v reaches weighted means
            let half = exp_map(&base, &v.scale(0.5)).unwrap();
            let mean = weighted_geometric_mean(&base, &q, 0.5).unwrap();
            assert!(half.rel_diff(&mean) < 1e-10);
            // ‖v‖ in the metric at base is the distance
            let norm = metric(&base, &v, &v).unwrap().value.sqrt();
            let d = distance(&base, &q).unwrap();
            assert!((norm - d).abs() < 1e-9 * d.max(1.0));
        }
    }
}
