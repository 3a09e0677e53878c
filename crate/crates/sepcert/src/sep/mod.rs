//! Separability certification: constructive product decompositions,
//! partial-transpose and pairwise-inequality witnesses, and the combined
//! certifier.

mod certify;
mod decomp;
mod scan;

pub use certify::{
    cauchy_schwarz_scan, certify, ppt_min_eig, ppt_threshold, CertReport, CsViolation,
    PptThreshold, Verdict, Witness,
};
pub use decomp::{decompose_rho_n, decompose_sgws, rho1_with_phases};
pub use scan::{conjecture_scan, ScanReport, ScanRow};

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cmatrix::{min_eigenvalue, CMatrix, MatrixError};
use crate::jsonnum::F17;
use crate::scalar::Scalar;
use crate::sgws::SgwsError;

/// Cap on the number of fully materialized decomposition terms.
pub const TERM_CAP: usize = 1 << 20;

/// Cap on d for phase-vector enumeration (4^6 = 4096 tuples).
pub const PHASE_DIM_CAP: usize = 6;

/// Cap on the total dimension d^N explored by the conjecture scan.
pub const SCAN_DIM_CAP: usize = 256;

/// Fixed bisection depth for threshold searches (interval ~1e-18 < 1e-8).
pub const BISECTION_ITERATIONS: u32 = 60;

#[derive(Debug, Error)]
pub enum SepError {
    #[error("phase-vector enumeration is limited to d <= {cap}, got d = {d}")]
    PhaseDimCap { d: usize, cap: usize },
    #[error("expansion would produce {terms} terms, above the cap {cap}")]
    TermCap { terms: u128, cap: usize },
    #[error(
        "the single-qudit seed is not positive semidefinite (min eigenvalue {min_eig:e}); set the restriction2 override to proceed"
    )]
    Restriction2 { min_eig: f64 },
    #[error(
        "v = {v} exceeds the separability threshold v_c = {v_c}: the state is entangled there \
         and admits no product decomposition"
    )]
    SuperCritical { v: f64, v_c: f64 },
    #[error("expected {expected} phases, got {got}")]
    PhaseCount { expected: usize, got: usize },
    #[error("phase {index} has modulus {modulus}, expected unit modulus")]
    NonUnitPhase { index: usize, modulus: f64 },
    #[error("subsystem dimensions must all be equal, got {0:?}")]
    HeterogeneousDims(Vec<usize>),
    #[error("scan dimension d^N = {dim} exceeds the cap {cap}")]
    ScanDimCap { dim: usize, cap: usize },
    #[error("decomposition is for dimension {decomp}, target has dimension {target}")]
    TargetDimension { decomp: usize, target: usize },
    #[error("malformed decomposition document: {0}")]
    Document(String),
    #[error(transparent)]
    Sgws(#[from] SgwsError),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// One weighted product term: weight * factor_1 ⊗ ... ⊗ factor_N.
#[derive(Debug, Clone)]
pub struct DecompositionTerm<T: Scalar> {
    pub weight: T,
    pub factors: Vec<CMatrix<T>>,
}

/// A convex combination of N-fold products of single-qudit states.
#[derive(Debug, Clone)]
pub struct ProductDecomposition<T: Scalar> {
    pub d: usize,
    pub n_parties: usize,
    pub terms: Vec<DecompositionTerm<T>>,
}

impl<T: Scalar> ProductDecomposition<T> {
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn weight_sum(&self) -> T {
        self.terms
            .iter()
            .map(|t| t.weight)
            .fold(T::zero(), |a, b| a + b)
    }

    /// Σ weight * ⊗ factors.
    pub fn reconstruct(&self) -> Result<CMatrix<T>, SepError> {
        let dim = crate::sgws::total_dim(self.d, self.n_parties)?;
        let mut sum = CMatrix::zeros(dim, dim);
        for term in &self.terms {
            let prod = crate::cmatrix::kron_all(&term.factors)?;
            sum = sum.add(&prod.scale(term.weight));
        }
        Ok(sum)
    }

    /// JSON document: {"d": .., "N": .., "terms": [{"weight": ..,
    /// "factors": [[[re, im], ...], ...]}, ...]} with 17-significant-digit
    /// numbers.
    pub fn to_json_string(&self) -> Result<String, SepError> {
        let doc = DecompositionDoc {
            d: self.d,
            n: self.n_parties,
            terms: self
                .terms
                .iter()
                .map(|t| TermDoc {
                    weight: F17(t.weight.to_f64().unwrap_or(f64::NAN)),
                    factors: t
                        .factors
                        .iter()
                        .map(|f| {
                            f.entries()
                                .iter()
                                .map(|z| {
                                    [
                                        F17(z.re.to_f64().unwrap_or(f64::NAN)),
                                        F17(z.im.to_f64().unwrap_or(f64::NAN)),
                                    ]
                                })
                                .collect()
                        })
                        .collect(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).map_err(|e| SepError::Document(e.to_string()))
    }

    pub fn from_json_str(text: &str) -> Result<Self, SepError> {
        let doc: DecompositionDocIn =
            serde_json::from_str(text).map_err(|e| SepError::Document(e.to_string()))?;
        let d = doc.d;
        let mut terms = Vec::with_capacity(doc.terms.len());
        for (ti, term) in doc.terms.into_iter().enumerate() {
            if term.factors.len() != doc.n {
                return Err(SepError::Document(format!(
                    "term {ti} has {} factors, expected N = {}",
                    term.factors.len(),
                    doc.n
                )));
            }
            let mut factors = Vec::with_capacity(doc.n);
            for (fi, flat) in term.factors.into_iter().enumerate() {
                if flat.len() != d * d {
                    return Err(SepError::Document(format!(
                        "term {ti} factor {fi} has {} entries, expected {}",
                        flat.len(),
                        d * d
                    )));
                }
                let entries = flat
                    .into_iter()
                    .map(|[re, im]| {
                        Complex::new(
                            T::from_f64(re).unwrap_or_else(T::nan),
                            T::from_f64(im).unwrap_or_else(T::nan),
                        )
                    })
                    .collect();
                factors.push(CMatrix::new(d, d, entries).map_err(SepError::Matrix)?);
            }
            terms.push(DecompositionTerm {
                weight: T::from_f64(term.weight).unwrap_or_else(T::nan),
                factors,
            });
        }
        Ok(Self {
            d,
            n_parties: doc.n,
            terms,
        })
    }
}

#[derive(Serialize)]
struct DecompositionDoc {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<TermDoc>,
}

#[derive(Serialize)]
struct TermDoc {
    weight: F17,
    factors: Vec<Vec<[F17; 2]>>,
}

#[derive(Deserialize)]
struct DecompositionDocIn {
    d: usize,
    #[serde(rename = "N")]
    n: usize,
    terms: Vec<TermDocIn>,
}

#[derive(Deserialize)]
struct TermDocIn {
    weight: f64,
    factors: Vec<Vec<[f64; 2]>>,
}

/// Outcome of checking a decomposition against its target state.
#[derive(Debug, Clone)]
pub struct VerificationRecord<T: Scalar> {
    pub reconstruction_error: T,
    pub min_factor_eig: T,
    pub weight_sum_error: T,
    pub pass: bool,
}

/// Verify weights, factor positivity and the Frobenius reconstruction error
/// of `decomp` against `target`.
///
/// Pass requires reconstruction <= recon_tol, every factor eigenvalue
/// >= -psd_floor, and |Σ weights - 1| <= sum_tol.
pub fn verify_decomposition<T: Scalar>(
    decomp: &ProductDecomposition<T>,
    target: &CMatrix<T>,
) -> Result<VerificationRecord<T>, SepError> {
    let dim = crate::sgws::total_dim(decomp.d, decomp.n_parties)?;
    if target.rows() != dim || target.cols() != dim {
        return Err(SepError::TargetDimension {
            decomp: dim,
            target: target.rows(),
        });
    }
    let weight_sum_error = (decomp.weight_sum() - T::one()).abs();
    let mut min_factor_eig = T::infinity();
    for term in &decomp.terms {
        for factor in &term.factors {
            let eig = min_eigenvalue(&factor.hermitize())?;
            if eig < min_factor_eig {
                min_factor_eig = eig;
            }
        }
    }
    let reconstruction_error = crate::cmatrix::frobenius_distance(&decomp.reconstruct()?, target)?;
    let pass = reconstruction_error <= T::recon_tol()
        && min_factor_eig >= -T::psd_floor()
        && weight_sum_error <= T::sum_tol();
    Ok(VerificationRecord {
        reconstruction_error,
        min_factor_eig,
        weight_sum_error,
        pass,
    })
}

/// All 4^d phase tuples (z_0, ..., z_{d-1}) with z_r in {1, i, -1, -i}.
///
/// Tuple k assigns z_r = i^((k / 4^r) mod 4), so z_0 cycles fastest.
pub fn phase_vectors<T: Scalar>(d: usize) -> Result<Vec<Vec<Complex<T>>>, SepError> {
    if d > PHASE_DIM_CAP {
        return Err(SepError::PhaseDimCap {
            d,
            cap: PHASE_DIM_CAP,
        });
    }
    let units = [
        Complex::new(T::one(), T::zero()),
        Complex::new(T::zero(), T::one()),
        Complex::new(-T::one(), T::zero()),
        Complex::new(T::zero(), -T::one()),
    ];
    let count = 1usize << (2 * d);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let tuple: Vec<Complex<T>> = (0..d).map(|r| units[(k >> (2 * r)) & 3]).collect();
        out.push(tuple);
    }
    Ok(out)
}

/// Tolerances in force for a given scalar type, echoed into reports.
#[derive(Debug, Clone, Serialize)]
pub struct Tolerances {
    pub hermitian: f64,
    pub psd_floor: f64,
    pub reconstruction: f64,
    pub sqrt_reconstruction: f64,
    pub weight_sum: f64,
    pub scan_slack: f64,
    pub negligible: f64,
    pub jacobi_off_diagonal: f64,
    pub bisection_iterations: u32,
}

impl Tolerances {
    pub fn for_scalar<T: Scalar>() -> Self {
        Self {
            hermitian: T::herm_tol().to_f64().unwrap(),
            psd_floor: T::psd_floor().to_f64().unwrap(),
            reconstruction: T::recon_tol().to_f64().unwrap(),
            sqrt_reconstruction: T::sqrt_recon_tol().to_f64().unwrap(),
            weight_sum: T::sum_tol().to_f64().unwrap(),
            scan_slack: T::sum_tol().to_f64().unwrap(),
            negligible: T::negligible().to_f64().unwrap(),
            jacobi_off_diagonal: T::jacobi_off_tol().to_f64().unwrap(),
            bisection_iterations: BISECTION_ITERATIONS,
        }
    }
}

/// Canonical representatives of the nontrivial bipartitions of N parties:
/// every nonempty subset of {2, ..., N} (the half not containing party 1),
/// 2^(N-1) - 1 in total.
pub fn bipartition_subsets(n_parties: usize) -> Vec<Vec<usize>> {
    if n_parties < 2 {
        return vec![];
    }
    let mut out = Vec::with_capacity((1 << (n_parties - 1)) - 1);
    for mask in 1u32..(1 << (n_parties - 1)) {
        let subset: Vec<usize> = (0..n_parties - 1)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| b + 2)
            .collect();
        out.push(subset);
    }
    out
}
