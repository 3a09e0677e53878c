//! Separability certification for a family of N-qudit mixed states.
//!
//! The states handled here mix the maximally mixed state with a
//! repeated-basis entangled pure state,
//!
//! ```text
//! W(v) = (1 - v) I/d^N + v |psi><psi|,    |psi> = sum_i alpha_i |i...i>,
//! ```
//!
//! and admit an exact separability threshold `v_c = T/(d^N + T)` with
//! `T = 1/max_{i != j} |alpha_i alpha_j|`. The crate computes that
//! threshold, certifies entanglement above it (partial-transpose spectra
//! and a pairwise-inequality scan), and below it constructs an explicit
//! convex decomposition into product states and verifies it numerically,
//! so every verdict is backed by a checkable witness.
//!
//! Modules:
//!
//! * [`cmatrix`] — dense complex kernel (Jacobi eigensolver, Kronecker
//!   products, partial transposition, PSD square roots);
//! * [`sgws`] — state construction, coefficient validation, thresholds and
//!   the one-parameter theta family;
//! * [`sep`] — decompositions, witnesses, certification and the
//!   restriction-(ii) conjecture scan;
//! * [`ent2q`] — two-qubit concurrence and entanglement of formation;
//! * [`rng`] — pinned SplitMix64 generator for reproducible scans.
//!
//! All numerics are generic over the scalar type through
//! [`scalar::Scalar`] (`f32` or `f64`); the aliases below fix the common
//! double-precision instantiations.

pub mod cmatrix;
pub mod ent2q;
pub mod jsonnum;
pub mod rng;
pub mod scalar;
pub mod sep;
pub mod sgws;

pub use scalar::Scalar;

/// Double-precision complex matrix.
pub type CMatrix64 = cmatrix::CMatrix<f64>;
/// Single-precision complex matrix.
pub type CMatrix32 = cmatrix::CMatrix<f32>;
/// Double-precision validated coefficient vector.
pub type CoeffVector64 = sgws::CoeffVector<f64>;
/// Double-precision state specification.
pub type SgwsSpec64 = sgws::SgwsSpec<f64>;
/// Double-precision product decomposition.
pub type ProductDecomposition64 = sep::ProductDecomposition<f64>;
/// Double-precision certification report.
pub type CertReport64 = sep::CertReport<f64>;
