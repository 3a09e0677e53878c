//! Machine-readable report assembly.
//!
//! Every report is one JSON object with a fixed field order
//! (command, inputs, tolerances, results, witnesses, version) and every
//! float carries 17 significant digits. CSV output reuses the same float
//! rendering.

use num_complex::Complex64;
use serde::Serialize;

use sepcert::jsonnum::{format_sig17, F17};
use sepcert::sep::{CertReport, Tolerances, Witness};

#[derive(Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Inputs,
    pub tolerances: TolerancesDoc,
    pub results: serde_json::Value,
    pub witnesses: Vec<WitnessDoc>,
    pub version: String,
}

impl Report {
    pub fn new(command: &str, inputs: Inputs, results: serde_json::Value) -> Self {
        Self {
            command: command.to_string(),
            inputs,
            tolerances: TolerancesDoc::current(),
            results,
            witnesses: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialization");
        text.push('\n');
        text
    }
}

#[derive(Default, Serialize)]
pub struct Inputs {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Vec<[F17; 2]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v: Option<F17>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub override_restriction2: bool,
}

/// Tolerances echoed with full-precision floats.
#[derive(Serialize)]
pub struct TolerancesDoc {
    pub hermitian: F17,
    pub psd_floor: F17,
    pub reconstruction: F17,
    pub sqrt_reconstruction: F17,
    pub weight_sum: F17,
    pub scan_slack: F17,
    pub negligible: F17,
    pub jacobi_off_diagonal: F17,
    pub bisection_iterations: u32,
}

impl TolerancesDoc {
    pub fn current() -> Self {
        let t = Tolerances::for_scalar::<f64>();
        Self {
            hermitian: F17(t.hermitian),
            psd_floor: F17(t.psd_floor),
            reconstruction: F17(t.reconstruction),
            sqrt_reconstruction: F17(t.sqrt_reconstruction),
            weight_sum: F17(t.weight_sum),
            scan_slack: F17(t.scan_slack),
            negligible: F17(t.negligible),
            jacobi_off_diagonal: F17(t.jacobi_off_diagonal),
            bisection_iterations: t.bisection_iterations,
        }
    }
}

#[derive(Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum WitnessDoc {
    NegativePtEigenvalue {
        subset: Vec<usize>,
        eigenvalue: F17,
    },
    CauchySchwarz {
        n: Vec<usize>,
        m: Vec<usize>,
        mu: Vec<usize>,
        nu: Vec<usize>,
        lhs: F17,
        rhs: F17,
        total_violations: usize,
    },
    Decomposition {
        terms: usize,
        reconstruction_error: F17,
        min_factor_eig: F17,
        weight_sum_error: F17,
    },
}

pub fn witness_docs(report: &CertReport<f64>) -> Vec<WitnessDoc> {
    report
        .witnesses
        .iter()
        .map(|w| match w {
            Witness::NegativePtEigenvalue { subset, eigenvalue } => {
                WitnessDoc::NegativePtEigenvalue {
                    subset: subset.clone(),
                    eigenvalue: F17(*eigenvalue),
                }
            }
            Witness::CauchySchwarz {
                violation,
                total_violations,
            } => WitnessDoc::CauchySchwarz {
                n: violation.n_digits.clone(),
                m: violation.m_digits.clone(),
                mu: violation.mu_digits.clone(),
                nu: violation.nu_digits.clone(),
                lhs: F17(violation.lhs),
                rhs: F17(violation.rhs),
                total_violations: *total_violations,
            },
            Witness::Decomposition {
                terms,
                reconstruction_error,
                min_factor_eig,
                weight_sum_error,
            } => WitnessDoc::Decomposition {
                terms: *terms,
                reconstruction_error: F17(*reconstruction_error),
                min_factor_eig: F17(*min_factor_eig),
                weight_sum_error: F17(*weight_sum_error),
            },
        })
        .collect()
}

/// Float as a JSON value with 17 significant digits.
pub fn f17(x: f64) -> serde_json::Value {
    serde_json::to_value(F17(x)).expect("finite float")
}

/// CSV cell with the same 17-digit rendering the JSON output uses.
pub fn csv_float(x: f64) -> String {
    format_sig17(x)
}

pub fn alpha_doc(alpha: &[Complex64]) -> Vec<[F17; 2]> {
    alpha.iter().map(|z| [F17(z.re), F17(z.im)]).collect()
}
