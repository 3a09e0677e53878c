//! Two-qubit entanglement measures: concurrence, entanglement of formation,
//! and the closed form for the qubit Werner-type family.

use thiserror::Error;

use crate::cmatrix::{hermitian_eigen, psd_sqrt, CMatrix, MatrixError};
use crate::scalar::{cr, real, Scalar};
use crate::sgws::{build_sgws, validate_coeffs, SgwsError, SgwsSpec};

#[derive(Debug, Error)]
pub enum Ent2qError {
    #[error("state must be 4x4, got {0}x{1}")]
    NotTwoQubits(usize, usize),
    #[error("trace deviates from 1 by {0:e}")]
    BadTrace(f64),
    #[error("concurrence argument {0} outside [0, 1]")]
    ConcurrenceRange(f64),
    #[error("mixing parameter v={0} outside [0, 1]")]
    InvalidV(f64),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Sgws(#[from] SgwsError),
}

/// Validated two-qubit density matrix (4x4, Hermitian, PSD, trace 1).
#[derive(Debug, Clone)]
pub struct TwoQubitState<T: Scalar> {
    rho: CMatrix<T>,
}

impl<T: Scalar> TwoQubitState<T> {
    pub fn new(rho: CMatrix<T>) -> Result<Self, Ent2qError> {
        if rho.rows() != 4 || rho.cols() != 4 {
            return Err(Ent2qError::NotTwoQubits(rho.rows(), rho.cols()));
        }
        rho.require_hermitian()?;
        let trace_dev = (rho.trace().re - T::one()).abs();
        if trace_dev > T::sum_tol() {
            return Err(Ent2qError::BadTrace(trace_dev.to_f64().unwrap_or(f64::NAN)));
        }
        let min = crate::cmatrix::min_eigenvalue(&rho.hermitize())?;
        if min < -T::psd_floor() {
            return Err(Ent2qError::Matrix(MatrixError::NotPsd(
                min.to_f64().unwrap_or(f64::NAN),
            )));
        }
        Ok(Self { rho })
    }

    pub fn rho(&self) -> &CMatrix<T> {
        &self.rho
    }
}

fn sigma_y_tensor_sigma_y<T: Scalar>() -> CMatrix<T> {
    // (sigma_y ⊗ sigma_y) is real: antidiagonal (-1, 1, 1, -1)
    let mut m = CMatrix::zeros(4, 4);
    *m.at_mut(0, 3) = cr(-T::one());
    *m.at_mut(1, 2) = cr(T::one());
    *m.at_mut(2, 1) = cr(T::one());
    *m.at_mut(3, 0) = cr(-T::one());
    m
}

/// Spin-flipped state (sigma_y ⊗ sigma_y) conj(rho) (sigma_y ⊗ sigma_y).
pub fn spin_flip<T: Scalar>(state: &TwoQubitState<T>) -> CMatrix<T> {
    let syy = sigma_y_tensor_sigma_y::<T>();
    syy.matmul(&state.rho().conjugate()).matmul(&syy)
}

/// Wootters concurrence max(0, l1 - l2 - l3 - l4) from the descending
/// eigenvalues of R = sqrt(sqrt(rho) rho~ sqrt(rho)).
pub fn concurrence<T: Scalar>(state: &TwoQubitState<T>) -> Result<T, Ent2qError> {
    let root = psd_sqrt(state.rho())?;
    let flipped = spin_flip(state);
    let inner = root.matmul(&flipped).matmul(&root).hermitize();
    let r = psd_sqrt(&inner)?;
    let eigs = hermitian_eigen(&r)?.eigenvalues; // ascending
    let c = eigs[3] - eigs[2] - eigs[1] - eigs[0];
    Ok(c.max(T::zero()).min(T::one()))
}

/// Entanglement of formation h((1 + sqrt(1 - c^2))/2) with the binary
/// entropy h; strictly increasing in c, h(0) = 0, h(1) = 1.
pub fn eof<T: Scalar>(concurrence: T) -> Result<T, Ent2qError> {
    if !(concurrence >= T::zero() && concurrence <= T::one()) {
        return Err(Ent2qError::ConcurrenceRange(
            concurrence.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let half = real::<T>(0.5);
    let x = (T::one() + (T::one() - concurrence * concurrence).sqrt()) * half;
    let h = |x: T| {
        if x <= T::zero() || x >= T::one() {
            T::zero()
        } else {
            -(x * x.log2()) - (T::one() - x) * (T::one() - x).log2()
        }
    };
    Ok(h(x))
}

/// Closed-form concurrence of the qubit family state
/// W(v) = (1-v) I/4 + v |psi><psi| with |psi> = sin(theta)|00> + cos(theta)|11>.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormConcurrence<T: Scalar> {
    pub value: T,
    /// True when the auxiliary radicand (1-v)^2 + 2 v^2 cos(4 theta) is
    /// nonnegative; outside that region the value falls back to the
    /// numeric concurrence.
    pub closed_form_domain: bool,
}

/// Closed-form expression, grouping fixed against the numeric oracle:
///
/// C = max{0, (1/4)(sqrt(A+) - sqrt(A-)) + (1/2)(v - 1)} with
/// A± = (sqrt(P) ± 2 v |sin 2 theta|)^2 and
/// P = 1 + 2v + v^2 - 4 v^2 cos 4 theta (P = 16 rho_00 rho_33 >= 0).
pub fn concurrence_closed_form<T: Scalar>(
    v: T,
    theta: T,
) -> Result<ClosedFormConcurrence<T>, Ent2qError> {
    if !(v >= T::zero() && v <= T::one()) {
        return Err(Ent2qError::InvalidV(v.to_f64().unwrap_or(f64::NAN)));
    }
    let one = T::one();
    let two = real::<T>(2.0);
    let four = real::<T>(4.0);
    let s2 = (two * theta).sin();
    let c4 = (four * theta).cos();
    let aux_radicand = (one - v) * (one - v) + two * v * v * c4;
    if aux_radicand < T::zero() {
        // outside the printed formula's domain: defer to the numeric value
        let value = family_concurrence_numeric(v, theta)?;
        return Ok(ClosedFormConcurrence {
            value,
            closed_form_domain: false,
        });
    }
    let p = one + two * v + v * v - four * v * v * c4;
    let x = p.max(T::zero()).sqrt();
    let y = two * v * s2.abs();
    // sqrt(A+) - sqrt(A-) with A± = (x ± y)^2
    let diff = (x + y).abs() - (x - y).abs();
    let value = (diff / four + (v - one) / two).max(T::zero());
    Ok(ClosedFormConcurrence {
        value,
        closed_form_domain: true,
    })
}

/// Numeric Wootters concurrence of the family state, used as the oracle and
/// as the fallback outside the closed form's stated domain.
pub fn family_concurrence_numeric<T: Scalar>(v: T, theta: T) -> Result<T, Ent2qError> {
    let alpha = [cr(theta.sin()), cr(theta.cos())];
    let coeffs = validate_coeffs(&alpha)?;
    let spec = SgwsSpec::new(coeffs, 2, v)?;
    let state = TwoQubitState::new(build_sgws(&spec))?;
    concurrence(&state)
}
