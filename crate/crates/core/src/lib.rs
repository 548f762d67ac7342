//! Geometric means and Riemannian geometry of T-positive definite third-order
//! tensors under the T-product.
//!
//! Two computation paths are provided and cross-checked in the test suite:
//! the Fourier-block path ([`spectral`], [`means`], [`geometry`]), which works
//! on `p` independent `n x n` blocks, and the dense path ([`oracle`]), which
//! materializes the `np x np` block circulant matrix.

pub mod eigh;
pub mod error;
pub mod geometry;
pub mod io;
pub mod means;
pub mod oracle;
pub mod par;
pub mod sample;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
pub use geometry::{distance, geodesic, iemi_check, lower_bound_check, metric, path_length, GeodesicSample, MetricValue};
pub use means::{
    congruence, geometric_mean, lowner_compare, riccati_residual, weighted_geometric_mean, LownerOrder, MeanPath,
    MeanResult,
};
pub use oracle::{dense_distance, dense_funcs, dense_gmean, Oracle};
pub use spectral::{
    check_tpd, from_spectrum, spectral_map, t_eigenvalues, t_trace, to_spectrum, BlockSpectrum, MatrixFn,
    TpdCertificate, Verdict, DEFAULT_TOL,
};
pub use tensor::{bcirc, bcirc_inverse, DenseCirc, Tensor3, C64};
