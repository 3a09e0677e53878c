//! Reproducible survey of coefficient vectors with a non-PSD seed.
//!
//! The constructive decomposition requires the single-qudit seed to be
//! PSD, but it is an open question whether the threshold itself needs it.
//! This scan draws Haar-like random coefficient vectors (complex Gaussian
//! entries, normalized), keeps exactly those whose seed is NOT PSD, and
//! reports the formula threshold next to the bisected partial-transpose
//! threshold for each; no equality is asserted.

use num_complex::Complex;

use crate::rng::SplitMix64;
use crate::scalar::Scalar;
use crate::sgws::validate_coeffs;

use super::{bipartition_subsets, certify::ppt_threshold, SepError, SCAN_DIM_CAP};

/// One kept sample.
#[derive(Debug, Clone)]
pub struct ScanRow<T: Scalar> {
    pub sample_index: usize,
    pub alpha: Vec<Complex<T>>,
    pub t_value: T,
    pub restriction2_min_eig: T,
    /// Formula threshold T/(d^N + T).
    pub formula_v: T,
    /// Minimum over bipartitions of the bisected PT threshold.
    pub ppt_v: T,
    pub ppt_crossing_found: bool,
    /// ppt_v - formula_v.
    pub diff: T,
}

/// Full scan output; deterministic for a fixed (d, N, samples, seed).
#[derive(Debug, Clone)]
pub struct ScanReport<T: Scalar> {
    pub d: usize,
    pub n_parties: usize,
    pub samples: usize,
    pub seed: u64,
    /// Samples skipped because validation failed (degenerate draws).
    pub skipped_invalid: usize,
    /// Samples skipped because the seed was PSD.
    pub skipped_restriction2_ok: usize,
    pub rows: Vec<ScanRow<T>>,
}

/// Draw `samples` random coefficient vectors and report every one whose
/// seed fails positivity.
///
/// Each sample consumes exactly `d` Box-Muller pairs from the SplitMix64
/// stream regardless of filtering, so the mapping from seed to output is
/// stable under any post-processing.
pub fn conjecture_scan<T: Scalar>(
    d: usize,
    n_parties: usize,
    samples: usize,
    seed: u64,
) -> Result<ScanReport<T>, SepError> {
    let dim = crate::sgws::total_dim(d, n_parties)?;
    if dim > SCAN_DIM_CAP {
        return Err(SepError::ScanDimCap {
            dim,
            cap: SCAN_DIM_CAP,
        });
    }
    let subsets = bipartition_subsets(n_parties);
    let mut rng = SplitMix64::new(seed);
    let mut report = ScanReport {
        d,
        n_parties,
        samples,
        seed,
        skipped_invalid: 0,
        skipped_restriction2_ok: 0,
        rows: Vec::new(),
    };
    for sample_index in 0..samples {
        let mut alpha: Vec<Complex<T>> = Vec::with_capacity(d);
        let mut norm_sq = 0.0f64;
        let mut raw = Vec::with_capacity(d);
        for _ in 0..d {
            let (re, im) = rng.next_gaussian_pair();
            norm_sq += re * re + im * im;
            raw.push((re, im));
        }
        if norm_sq <= 0.0 {
            report.skipped_invalid += 1;
            continue;
        }
        let norm = norm_sq.sqrt();
        for (re, im) in raw {
            alpha.push(Complex::new(
                T::from_f64(re / norm).unwrap(),
                T::from_f64(im / norm).unwrap(),
            ));
        }
        let coeffs = match validate_coeffs(&alpha) {
            Ok(c) => c,
            Err(_) => {
                report.skipped_invalid += 1;
                continue;
            }
        };
        if coeffs.restriction2_ok() {
            report.skipped_restriction2_ok += 1;
            continue;
        }
        let formula_v = crate::sgws::critical_v(&coeffs, n_parties);
        let mut ppt_v = T::one();
        let mut crossing_found = false;
        for subset in &subsets {
            let th = ppt_threshold(&coeffs, n_parties, subset)?;
            if th.v < ppt_v {
                ppt_v = th.v;
            }
            crossing_found |= th.crossing_found;
        }
        report.rows.push(ScanRow {
            sample_index,
            t_value: coeffs.t_value(),
            restriction2_min_eig: coeffs.restriction2_min_eig(),
            alpha,
            formula_v,
            ppt_v,
            ppt_crossing_found: crossing_found,
            diff: ppt_v - formula_v,
        });
    }
    Ok(report)
}
