//! Construction and validation of the Werner-type states this crate
//! certifies.
//!
//! A state instance is `W(v) = (1-v) I/d^N + v |psi><psi|` with
//! `|psi> = sum_i alpha_i |i...i>`. The coefficient vector must be
//! normalized and genuinely entangled (at least two nonzero entries), and
//! carries two derived quantities used everywhere downstream:
//!
//! * `T = 1 / max_{i != j} |alpha_i alpha_j|`, which fixes the exact
//!   separability threshold `v_c = T / (d^N + T)`;
//! * the single-qudit seed matrix `(1/d)(I + T sum_{i != j} alpha_i
//!   conj(alpha_j) |i><j|)` whose positivity the constructive decomposition
//!   relies on, recorded in the `restriction2_*` fields.

use num_complex::Complex;
use thiserror::Error;

use crate::cmatrix::{min_eigenvalue, CMatrix, MatrixError, DIM_CAP};
use crate::scalar::{cr, real, Scalar};

#[derive(Debug, Error)]
pub enum SgwsError {
    #[error("need at least two levels, got d={0}")]
    TooFewLevels(usize),
    #[error("coefficients are not normalized: |sum|alpha|^2 - 1| = {0:e}")]
    NotNormalized(f64),
    #[error("fewer than two nonzero coefficients: |psi> is a product state, not entangled")]
    NotEntangled,
    #[error("total dimension {d}^{n} exceeds the cap {cap}")]
    DimensionCap { d: usize, n: usize, cap: usize },
    #[error("mixing parameter v={0} outside [0, 1]")]
    InvalidV(f64),
    #[error("number of parties must be at least 1")]
    NoParties,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// d^n if it stays within the dimension cap.
pub(crate) fn total_dim(d: usize, n: usize) -> Result<usize, SgwsError> {
    let mut dim = 1usize;
    for _ in 0..n {
        dim = dim
            .checked_mul(d)
            .ok_or(SgwsError::DimensionCap { d, n, cap: DIM_CAP })?;
        if dim > DIM_CAP {
            return Err(SgwsError::DimensionCap { d, n, cap: DIM_CAP });
        }
    }
    Ok(dim)
}

/// Validated coefficient vector of |psi> = sum_i alpha_i |i...i|>.
#[derive(Debug, Clone)]
pub struct CoeffVector<T: Scalar> {
    d: usize,
    alpha: Vec<Complex<T>>,
    t_value: T,
    restriction2_min_eig: T,
    restriction2_ok: bool,
}

impl<T: Scalar> CoeffVector<T> {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn alpha(&self) -> &[Complex<T>] {
        &self.alpha
    }

    /// T = 1 / max_{i != j} |alpha_i alpha_j|.
    pub fn t_value(&self) -> T {
        self.t_value
    }

    /// Whether the seed matrix is PSD (minimum eigenvalue >= -psd_floor).
    pub fn restriction2_ok(&self) -> bool {
        self.restriction2_ok
    }

    pub fn restriction2_min_eig(&self) -> T {
        self.restriction2_min_eig
    }

    /// The single-qudit seed with phases applied:
    /// `(1/d)(I + T sum_{i != j} alpha_i xi_i conj(alpha_j xi_j) |i><j|)`.
    ///
    /// Phases are assumed unit-modulus; with all phases 1 this is the
    /// matrix whose positivity the `restriction2_ok` flag records. Phased variants
    /// are unitary (diagonal) conjugations of it, so they share its
    /// spectrum.
    pub fn phased_seed(&self, phases: &[Complex<T>]) -> CMatrix<T> {
        assert_eq!(phases.len(), self.d, "one phase per level");
        let d = self.d;
        let inv_d = T::one() / T::from_usize(d).unwrap();
        let mut m = CMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                let v = if i == j {
                    cr(inv_d)
                } else {
                    let z = self.alpha[i] * phases[i] * (self.alpha[j] * phases[j]).conj();
                    z.scale(self.t_value * inv_d)
                };
                *m.at_mut(i, j) = v;
            }
        }
        m
    }

    /// The seed matrix with unit phases.
    pub fn seed_state(&self) -> CMatrix<T> {
        let ones = vec![cr(T::one()); self.d];
        self.phased_seed(&ones)
    }

    /// Magnitude of the pure two-qubit-style concurrence driver
    /// `max_{i != j} |alpha_i alpha_j| = 1/T`.
    pub fn max_pair_product(&self) -> T {
        T::one() / self.t_value
    }
}

/// Validate a coefficient list and derive T and the restriction-(ii) record.
pub fn validate_coeffs<T: Scalar>(alpha: &[Complex<T>]) -> Result<CoeffVector<T>, SgwsError> {
    let d = alpha.len();
    if d < 2 {
        return Err(SgwsError::TooFewLevels(d));
    }
    let norm_sq = alpha
        .iter()
        .map(|z| z.norm_sqr())
        .fold(T::zero(), |a, b| a + b);
    let deviation = (norm_sq - T::one()).abs();
    if deviation > T::sum_tol() {
        return Err(SgwsError::NotNormalized(
            deviation.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let moduli: Vec<T> = alpha.iter().map(|z| z.norm()).collect();
    let nonzero = moduli.iter().filter(|&&m| m > T::negligible()).count();
    if nonzero < 2 {
        return Err(SgwsError::NotEntangled);
    }
    let mut max_pair = T::zero();
    for i in 0..d {
        for j in (i + 1)..d {
            let p = moduli[i] * moduli[j];
            if p > max_pair {
                max_pair = p;
            }
        }
    }
    let t_value = T::one() / max_pair;
    let mut coeffs = CoeffVector {
        d,
        alpha: alpha.to_vec(),
        t_value,
        restriction2_min_eig: T::zero(),
        restriction2_ok: false,
    };
    let min_eig = min_eigenvalue(&coeffs.seed_state().hermitize())?;
    coeffs.restriction2_min_eig = min_eig;
    coeffs.restriction2_ok = min_eig >= -T::psd_floor();
    Ok(coeffs)
}

/// One fully specified state instance: (d, N, alpha, v).
#[derive(Debug, Clone)]
pub struct SgwsSpec<T: Scalar> {
    coeffs: CoeffVector<T>,
    n_parties: usize,
    v: T,
}

impl<T: Scalar> SgwsSpec<T> {
    pub fn new(coeffs: CoeffVector<T>, n_parties: usize, v: T) -> Result<Self, SgwsError> {
        if n_parties == 0 {
            return Err(SgwsError::NoParties);
        }
        total_dim(coeffs.d(), n_parties)?;
        if !(v >= T::zero() && v <= T::one()) {
            return Err(SgwsError::InvalidV(v.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self {
            coeffs,
            n_parties,
            v,
        })
    }

    pub fn coeffs(&self) -> &CoeffVector<T> {
        &self.coeffs
    }

    pub fn d(&self) -> usize {
        self.coeffs.d()
    }

    pub fn n_parties(&self) -> usize {
        self.n_parties
    }

    pub fn v(&self) -> T {
        self.v
    }

    pub fn dims(&self) -> Vec<usize> {
        vec![self.d(); self.n_parties]
    }

    /// Same coefficients and party count at a different mixing parameter.
    pub fn with_v(&self, v: T) -> Result<Self, SgwsError> {
        Self::new(self.coeffs.clone(), self.n_parties, v)
    }
}

/// |psi> = sum_i alpha_i |i...i> as a d^N column vector.
///
/// The repeated-index basis state |i...i> sits at flat index
/// i * (d^N - 1)/(d - 1).
pub fn build_pure_state<T: Scalar>(
    coeffs: &CoeffVector<T>,
    n_parties: usize,
) -> Result<CMatrix<T>, SgwsError> {
    if n_parties == 0 {
        return Err(SgwsError::NoParties);
    }
    let d = coeffs.d();
    let dim = total_dim(d, n_parties)?;
    let repunit = (0..n_parties).fold(0usize, |acc, _| acc * d + 1);
    let mut entries = vec![cr(T::zero()); dim];
    for (i, &a) in coeffs.alpha().iter().enumerate() {
        entries[i * repunit] = a;
    }
    Ok(CMatrix::column(entries))
}

/// W(v) = (1-v) I/d^N + v |psi><psi|.
pub fn build_sgws<T: Scalar>(spec: &SgwsSpec<T>) -> CMatrix<T> {
    let dim = total_dim(spec.d(), spec.n_parties()).expect("spec validated on construction");
    let psi = build_pure_state(spec.coeffs(), spec.n_parties()).expect("spec validated");
    let uniform = CMatrix::identity(dim).scale((T::one() - spec.v()) / T::from_usize(dim).unwrap());
    uniform.add(&psi.outer().scale(spec.v()))
}

/// Exact separability threshold v_c = T / (d^N + T).
pub fn critical_v<T: Scalar>(coeffs: &CoeffVector<T>, n_parties: usize) -> T {
    let t = coeffs.t_value();
    let dn = T::from_usize(coeffs.d()).unwrap().powi(n_parties as i32);
    t / (dn + t)
}

/// One-parameter coefficient family: alpha_0 = cos(theta)/sqrt(d),
/// alpha_i = sqrt((d - cos^2 theta)/(d(d-1))) for i >= 1.
///
/// Only cos^2 theta enters, so theta is canonicalized through |cos theta|.
pub fn family_coeffs<T: Scalar>(d: usize, theta: T) -> Result<CoeffVector<T>, SgwsError> {
    if d < 2 {
        return Err(SgwsError::TooFewLevels(d));
    }
    let c = theta.cos().abs();
    let df = T::from_usize(d).unwrap();
    let a0 = c / df.sqrt();
    let rest = ((df - c * c) / (df * (df - T::one()))).sqrt();
    let mut alpha = vec![cr(a0)];
    alpha.extend(std::iter::repeat_n(cr(rest), d - 1));
    validate_coeffs(&alpha)
}

/// Closed-form threshold for the theta family.
///
/// For d >= 3 the largest coefficient pair is two of the equal alpha_i, so
/// T = d(d-1)/(d - cos^2 theta); for d = 2 the only pair is alpha_0 alpha_1.
pub fn family_critical_v<T: Scalar>(d: usize, n_parties: usize, theta: T) -> Result<T, SgwsError> {
    family_coeffs::<T>(d, theta)?;
    let c = theta.cos().abs();
    let c2 = c * c;
    let df = T::from_usize(d).unwrap();
    let dn = df.powi(n_parties as i32);
    if d >= 3 {
        let dd1 = df * (df - T::one());
        Ok(dd1 / (dn * (df - c2) + dd1))
    } else {
        let two = real::<T>(2.0);
        let t = two / (c * (two - c2).sqrt());
        Ok(t / (dn + t))
    }
}

/// Closed-form spectrum of the family's seed matrix, ascending.
///
/// d-2 zeros plus (1/2)(1 ± sqrt(((d-2)^2 + (3d-4) cos^2 theta) /
/// (d (d - cos^2 theta)))). For d = 2 the seed has |off-diagonal| equal to
/// the diagonal 1/2, so the spectrum is {0, 1} for every admissible theta.
pub fn family_rho_eigs<T: Scalar>(d: usize, theta: T) -> Result<Vec<T>, SgwsError> {
    family_coeffs::<T>(d, theta)?;
    if d == 2 {
        return Ok(vec![T::zero(), T::one()]);
    }
    let c2 = theta.cos().abs().powi(2);
    let df = T::from_usize(d).unwrap();
    let dm2 = df - real::<T>(2.0);
    let radicand = (dm2 * dm2 + (real::<T>(3.0) * df - real::<T>(4.0)) * c2) / (df * (df - c2));
    let root = radicand.sqrt();
    let half = real::<T>(0.5);
    let mut eigs = vec![T::zero(); d - 2];
    eigs.push(half * (T::one() - root));
    eigs.push(half * (T::one() + root));
    Ok(eigs)
}
