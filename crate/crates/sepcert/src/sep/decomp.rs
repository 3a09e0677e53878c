//! Constructive separable decompositions.
//!
//! The N-qudit mixture `rho_N = (1/d^N)(I + T sum_{i != j} alpha_i
//! conj(alpha_j) |i..i><j..j|)` is expanded inductively into a convex sum of
//! product states. Going from k to k+1 parties, every term fans out over
//! the 4^d phase tuples z: the child multiplies the first factor's phases
//! by conj(z), appends the rank-one factor |z><z|/d as the new last qudit,
//! and divides the weight by 4^d. Averaging over the tuple set then kills
//! every cross term through the exact moment identities
//!
//!   sum_k z_r conj(z_s) = 0                      (r != s)
//!   (1/4^d) sum_k z_i conj(z_j) conj(z_r) z_s = delta(i,r) delta(j,s)
//!
//! so the reconstruction is exact up to floating-point roundoff. Note the
//! conjugation pattern: multiplying the first factor by z itself instead
//! leaves a surviving |i..ij><j..ji| cross term and does not reconstruct.
//!
//! At the threshold the full state splits as
//!   W(v_c) = v_c sum_i |alpha_i|^2 (|i><i|)^tensor-N + (d^N/(d^N+T)) rho_N
//! and below it the deficit is absorbed by one extra maximally mixed
//! product term.

use num_complex::Complex;

use crate::cmatrix::CMatrix;
use crate::scalar::Scalar;
use crate::sgws::{critical_v, CoeffVector, SgwsSpec};

use super::{phase_vectors, DecompositionTerm, ProductDecomposition, SepError, TERM_CAP};

fn check_restriction2<T: Scalar>(
    coeffs: &CoeffVector<T>,
    override_restriction2: bool,
) -> Result<(), SepError> {
    if coeffs.restriction2_ok() || override_restriction2 {
        Ok(())
    } else {
        Err(SepError::Restriction2 {
            min_eig: coeffs.restriction2_min_eig().to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Single-qudit seed with explicit phases:
/// `(1/d)(I + T sum_{i != j} alpha_i xi_i conj(alpha_j xi_j) |i><j|)`.
///
/// Refuses when the seed is not PSD, unless the override is set (the
/// result is then a unitary conjugate of the non-PSD seed and is flagged by
/// the caller's verification, never silently accepted).
pub fn rho1_with_phases<T: Scalar>(
    coeffs: &CoeffVector<T>,
    phases: &[Complex<T>],
    override_restriction2: bool,
) -> Result<CMatrix<T>, SepError> {
    if phases.len() != coeffs.d() {
        return Err(SepError::PhaseCount {
            expected: coeffs.d(),
            got: phases.len(),
        });
    }
    for (index, z) in phases.iter().enumerate() {
        let modulus = z.norm();
        if (modulus - T::one()).abs() > T::sum_tol() {
            return Err(SepError::NonUnitPhase {
                index,
                modulus: modulus.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    check_restriction2(coeffs, override_restriction2)?;
    Ok(coeffs.phased_seed(phases))
}

/// Number of terms in the expanded decomposition of rho_N: (4^d)^(N-1).
fn expansion_terms(d: usize, n_parties: usize) -> Result<usize, SepError> {
    let per_level = 1u128 << (2 * d as u32);
    let mut terms = 1u128;
    for _ in 1..n_parties {
        terms = terms.saturating_mul(per_level);
        if terms > TERM_CAP as u128 {
            return Err(SepError::TermCap {
                terms,
                cap: TERM_CAP,
            });
        }
    }
    Ok(terms as usize)
}

/// Fully expanded product decomposition of the N-qudit seed mixture rho_N
/// (unit top-level phases).
pub fn decompose_rho_n<T: Scalar>(
    coeffs: &CoeffVector<T>,
    n_parties: usize,
    override_restriction2: bool,
) -> Result<ProductDecomposition<T>, SepError> {
    if n_parties == 0 {
        return Err(SepError::Sgws(crate::sgws::SgwsError::NoParties));
    }
    check_restriction2(coeffs, override_restriction2)?;
    let d = coeffs.d();
    expansion_terms(d, n_parties)?;
    let tuples = phase_vectors::<T>(d)?;
    let projectors: Vec<CMatrix<T>> = tuples
        .iter()
        .map(|z| {
            // |z><z|/d equals (1/d)(I + sum_{r != s} z_r conj(z_s) |r><s|)
            let inv_d = T::one() / T::from_usize(d).unwrap();
            CMatrix::column(z.clone()).outer().scale(inv_d)
        })
        .collect();
    let level_weight = T::one() / T::from_usize(tuples.len()).unwrap();

    // (weight, first-factor phases, appended projector indices)
    let ones = vec![Complex::new(T::one(), T::zero()); d];
    let mut partial: Vec<(T, Vec<Complex<T>>, Vec<usize>)> = vec![(T::one(), ones, vec![])];
    for _ in 1..n_parties {
        let mut next = Vec::with_capacity(partial.len() * tuples.len());
        for (weight, phases, tail) in &partial {
            for (k, z) in tuples.iter().enumerate() {
                let child_phases: Vec<Complex<T>> = phases
                    .iter()
                    .zip(z)
                    .map(|(xi, zk)| xi * zk.conj())
                    .collect();
                let mut child_tail = tail.clone();
                child_tail.push(k);
                next.push((*weight * level_weight, child_phases, child_tail));
            }
        }
        partial = next;
    }

    let terms = partial
        .into_iter()
        .map(|(weight, phases, tail)| {
            let mut factors = Vec::with_capacity(n_parties);
            factors.push(coeffs.phased_seed(&phases));
            factors.extend(tail.into_iter().map(|k| projectors[k].clone()));
            DecompositionTerm { weight, factors }
        })
        .collect();
    Ok(ProductDecomposition {
        d,
        n_parties,
        terms,
    })
}

/// Verified-constructible product decomposition of W(v) for v <= v_c.
///
/// At v = v_c the terms are the repeated-basis projectors (weight
/// v_c |alpha_i|^2 each) plus the scaled expansion of rho_N; for v < v_c one
/// extra maximally mixed product term carries the deficit 1 - v/v_c.
/// Zero-weight terms are dropped.
pub fn decompose_sgws<T: Scalar>(
    spec: &SgwsSpec<T>,
    override_restriction2: bool,
) -> Result<ProductDecomposition<T>, SepError> {
    let coeffs = spec.coeffs();
    let d = spec.d();
    let n = spec.n_parties();
    let v = spec.v();
    let v_c = critical_v(coeffs, n);
    if v > v_c + T::sum_tol() {
        return Err(SepError::SuperCritical {
            v: v.to_f64().unwrap_or(f64::NAN),
            v_c: v_c.to_f64().unwrap_or(f64::NAN),
        });
    }

    let maximally_mixed = || {
        let factor = CMatrix::identity(d).scale(T::one() / T::from_usize(d).unwrap());
        DecompositionTerm {
            weight: T::one(),
            factors: vec![factor; n],
        }
    };

    if v == T::zero() {
        // W(0) = I/d^N regardless of the coefficients.
        return Ok(ProductDecomposition {
            d,
            n_parties: n,
            terms: vec![maximally_mixed()],
        });
    }

    let scale = (v / v_c).min(T::one());
    let mut terms: Vec<DecompositionTerm<T>> = Vec::new();
    for (i, a) in coeffs.alpha().iter().enumerate() {
        let weight = v * a.norm_sqr();
        if weight > T::zero() {
            terms.push(DecompositionTerm {
                weight,
                factors: vec![CMatrix::basis_projector(d, i); n],
            });
        }
    }

    let dn = T::from_usize(crate::sgws::total_dim(d, n)?).unwrap();
    let seed_share = scale * dn / (dn + coeffs.t_value());
    let expanded = decompose_rho_n(coeffs, n, override_restriction2)?;
    for mut term in expanded.terms {
        term.weight *= seed_share;
        if term.weight > T::zero() {
            terms.push(term);
        }
    }

    let deficit = T::one() - scale;
    if deficit > T::zero() {
        let mut mixed = maximally_mixed();
        mixed.weight = deficit;
        terms.push(mixed);
    }
    Ok(ProductDecomposition {
        d,
        n_parties: n,
        terms,
    })
}

/// Target the decomposition of rho_N must reconstruct (unit phases).
#[cfg(test)]
pub(crate) fn rho_n_target<T: Scalar>(coeffs: &CoeffVector<T>, n_parties: usize) -> CMatrix<T> {
    let d = coeffs.d();
    let dim = crate::sgws::total_dim(d, n_parties).unwrap();
    let repunit = (0..n_parties).fold(0usize, |acc, _| acc * d + 1);
    let inv = T::one() / T::from_usize(dim).unwrap();
    let mut m = CMatrix::identity(dim).scale(inv);
    for i in 0..d {
        for j in 0..d {
            if i != j {
                let z =
                    (coeffs.alpha()[i] * coeffs.alpha()[j].conj()).scale(coeffs.t_value() * inv);
                *m.at_mut(i * repunit, j * repunit) = z;
            }
        }
    }
    m
}
