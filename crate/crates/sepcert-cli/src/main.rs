//! Batch front end for the separability toolkit.
//!
//! Subcommands map onto the library operations: `threshold`, `certify`,
//! `decompose` and `ppt` work on one state instance, `concurrence` on the
//! two-qubit family, `family-scan` sweeps the theta family and
//! `conjecture-scan` surveys restriction-(ii) violators. Reports are JSON
//! (CSV for the sweeps), floats carry 17 significant digits, and runs are
//! deterministic for fixed flags. Exit codes: 0 success, 1 validation or
//! usage error, 2 numeric failure.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde_json::json;

use sepcert::cmatrix::MatrixError;
use sepcert::ent2q::{concurrence, concurrence_closed_form, eof, Ent2qError, TwoQubitState};
use sepcert::sep::{
    bipartition_subsets, certify, conjecture_scan, decompose_sgws, ppt_min_eig, ppt_threshold,
    verify_decomposition, SepError,
};
use sepcert::sgws::{
    build_sgws, critical_v, family_coeffs, family_critical_v, family_rho_eigs, validate_coeffs,
    SgwsError,
};
use sepcert::CoeffVector64;

use report::{alpha_doc, csv_float, f17, witness_docs, Inputs, Report};

#[derive(Parser)]
#[command(
    name = "sepcert",
    version,
    about = "Separability certification for Werner-type N-qudit states",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact separability threshold v_c = T/(d^N + T) for given coefficients
    Threshold(StateArgs),
    /// Certify W(v): verified decomposition below v_c, witnesses above
    Certify(MixArgs),
    /// Construct and verify an explicit product decomposition of W(v)
    Decompose(MixArgs),
    /// Partial-transpose spectrum and threshold for every bipartition
    Ppt(MixArgs),
    /// Two-qubit concurrence and entanglement of formation of W(v)
    Concurrence(ConcurrenceArgs),
    /// Sweep the theta family: thresholds and seed spectra
    FamilyScan(FamilyScanArgs),
    /// Survey random coefficient vectors whose single-qudit seed is not PSD
    ConjectureScan(ConjectureScanArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct StateArgs {
    /// Levels per qudit; inferred from --alpha, required with --theta
    #[arg(long)]
    d: Option<usize>,
    /// Number of parties
    #[arg(long = "N")]
    n: usize,
    /// Coefficients as a JSON list of [re, im] pairs; components may be
    /// numbers or "p/q" fraction strings
    #[arg(long)]
    alpha: Option<String>,
    /// State angle: for d=2 the coefficients are (sin theta, cos theta);
    /// for d >= 3 the one-parameter family alpha_0 = cos(theta)/sqrt(d),
    /// remaining entries equal
    #[arg(long)]
    theta: Option<f64>,
    /// Write the report here instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format (csv only for family-scan and conjecture-scan)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct MixArgs {
    #[command(flatten)]
    state: StateArgs,
    /// Mixing parameter v in [0, 1]
    #[arg(long)]
    v: f64,
    /// Proceed with the construction even when the single-qudit seed is not PSD
    #[arg(long)]
    override_restriction2: bool,
}

#[derive(Args)]
struct ConcurrenceArgs {
    /// Pure-state angle: alpha = (sin theta, cos theta)
    #[arg(long)]
    theta: Option<f64>,
    /// Two coefficients as a JSON list of [re, im] pairs
    #[arg(long)]
    alpha: Option<String>,
    /// Mixing parameter v in [0, 1]
    #[arg(long)]
    v: f64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct FamilyScanArgs {
    /// Levels per qudit
    #[arg(long)]
    d: usize,
    /// Number of parties
    #[arg(long = "N")]
    n: usize,
    /// Number of theta steps, uniform on [0, pi/2)
    #[arg(long, default_value_t = 32)]
    theta_steps: usize,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Report format (default csv for this command)
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct ConjectureScanArgs {
    /// Levels per qudit
    #[arg(long)]
    d: usize,
    /// Number of parties
    #[arg(long = "N")]
    n: usize,
    /// Number of random coefficient vectors to draw
    #[arg(long)]
    samples: usize,
    /// Generator seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug)]
enum CliError {
    Validation(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Numeric(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Validation(m) | CliError::Numeric(m) => m,
        }
    }
}

fn classify_matrix(e: MatrixError) -> CliError {
    match e {
        MatrixError::NoConvergence { .. } | MatrixError::NotPsd(_) => {
            CliError::Numeric(e.to_string())
        }
        _ => CliError::Validation(e.to_string()),
    }
}

impl From<MatrixError> for CliError {
    fn from(e: MatrixError) -> Self {
        classify_matrix(e)
    }
}

impl From<SgwsError> for CliError {
    fn from(e: SgwsError) -> Self {
        match e {
            SgwsError::Matrix(m) => classify_matrix(m),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<SepError> for CliError {
    fn from(e: SepError) -> Self {
        match e {
            SepError::Matrix(m) => classify_matrix(m),
            SepError::Sgws(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

impl From<Ent2qError> for CliError {
    fn from(e: Ent2qError) -> Self {
        match e {
            Ent2qError::Matrix(m) => classify_matrix(m),
            Ent2qError::Sgws(s) => s.into(),
            other => CliError::Validation(other.to_string()),
        }
    }
}

fn parse_component(value: &serde_json::Value) -> Result<f64, CliError> {
    match value {
        serde_json::Value::Number(x) => x.as_f64().ok_or_else(|| {
            CliError::Validation(format!("coefficient component {x} is not finite"))
        }),
        serde_json::Value::String(s) => parse_number_or_fraction(s),
        other => Err(CliError::Validation(format!(
            "coefficient component must be a number or \"p/q\" string, got {other}"
        ))),
    }
}

fn parse_number_or_fraction(text: &str) -> Result<f64, CliError> {
    let bad = |t: &str| CliError::Validation(format!("cannot parse \"{t}\" as a number"));
    if let Some((num, den)) = text.split_once('/') {
        let p: f64 = num.trim().parse().map_err(|_| bad(text))?;
        let q: f64 = den.trim().parse().map_err(|_| bad(text))?;
        if q == 0.0 {
            return Err(CliError::Validation(format!(
                "zero denominator in \"{text}\""
            )));
        }
        Ok(p / q)
    } else {
        text.trim().parse().map_err(|_| bad(text))
    }
}

fn parse_alpha(text: &str) -> Result<Vec<Complex64>, CliError> {
    let value: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::Validation(format!("malformed --alpha: {e}")))?;
    let rows = value.as_array().ok_or_else(|| {
        CliError::Validation("--alpha must be a JSON list of [re, im] pairs".into())
    })?;
    rows.iter()
        .map(|row| {
            let pair = row.as_array().filter(|p| p.len() == 2).ok_or_else(|| {
                CliError::Validation(format!("expected [re, im] pair, got {row}"))
            })?;
            Ok(Complex64::new(
                parse_component(&pair[0])?,
                parse_component(&pair[1])?,
            ))
        })
        .collect()
}

/// Resolve --alpha / --theta into a validated coefficient vector; exactly
/// one of the two has to be present.
fn resolve_coeffs(args: &StateArgs) -> Result<(CoeffVector64, Inputs), CliError> {
    let mut inputs = Inputs {
        n: Some(args.n),
        ..Inputs::default()
    };
    let coeffs = match (&args.alpha, args.theta) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::Validation(
                "exactly one of --alpha and --theta must be given".into(),
            ))
        }
        (Some(text), None) => {
            let alpha = parse_alpha(text)?;
            if let Some(d) = args.d {
                if d != alpha.len() {
                    return Err(CliError::Validation(format!(
                        "--d {} disagrees with --alpha length {}",
                        d,
                        alpha.len()
                    )));
                }
            }
            inputs.alpha = Some(alpha_doc(&alpha));
            validate_coeffs(&alpha)?
        }
        (None, Some(theta)) => {
            let d = args
                .d
                .ok_or_else(|| CliError::Validation("--theta requires --d".into()))?;
            inputs.theta = Some(theta.into());
            if d == 2 {
                // qubit convention: |psi> = sin(theta)|00..> + cos(theta)|11..>
                let alpha = [
                    Complex64::new(theta.sin(), 0.0),
                    Complex64::new(theta.cos(), 0.0),
                ];
                validate_coeffs(&alpha)?
            } else {
                family_coeffs(d, theta)?
            }
        }
    };
    inputs.d = Some(coeffs.d());
    Ok((coeffs, inputs))
}

fn require_json(format: Option<Format>, command: &str) -> Result<(), CliError> {
    if format == Some(Format::Csv) {
        return Err(CliError::Validation(format!(
            "csv output is not available for `{command}`; use json"
        )));
    }
    Ok(())
}

fn restriction2_fields(coeffs: &CoeffVector64) -> (bool, f64) {
    (coeffs.restriction2_ok(), coeffs.restriction2_min_eig())
}

fn run_threshold(args: &StateArgs) -> Result<String, CliError> {
    require_json(args.format, "threshold")?;
    let (coeffs, inputs) = resolve_coeffs(args)?;
    let v_c = critical_v(&coeffs, args.n);
    let (r2_ok, r2_eig) = restriction2_fields(&coeffs);
    let mut results = json!({
        "d": coeffs.d(),
        "N": args.n,
        "t_value": f17(coeffs.t_value()),
        "critical_v": f17(v_c),
        "restriction2_ok": r2_ok,
        "restriction2_min_eig": f17(r2_eig),
    });
    if let Some(theta) = args.theta {
        // closed form under the applicable theta convention, as a cross-check
        let closed = if coeffs.d() == 2 {
            let sc = theta.sin() * theta.cos();
            1.0 / (2f64.powi(args.n as i32) * sc + 1.0)
        } else {
            family_critical_v::<f64>(coeffs.d(), args.n, theta)?
        };
        results["threshold_closed_form"] = f17(closed);
    }
    Ok(Report::new("threshold", inputs, results).render())
}

fn run_certify(args: &MixArgs) -> Result<String, CliError> {
    require_json(args.state.format, "certify")?;
    let (coeffs, mut inputs) = resolve_coeffs(&args.state)?;
    inputs.v = Some(args.v.into());
    inputs.override_restriction2 = args.override_restriction2;
    let spec = sepcert::SgwsSpec64::new(coeffs, args.state.n, args.v)?;
    let cert = certify(&spec, args.override_restriction2);
    let results = json!({
        "verdict": cert.verdict,
        "v": f17(args.v),
        "threshold_formula": f17(cert.threshold_formula),
        "threshold_numeric": cert.threshold_numeric.map(f17),
        "restriction2_ok": cert.restriction2_ok,
        "restriction2_min_eig": f17(cert.restriction2_min_eig),
        "notes": cert.notes,
    });
    let mut report = Report::new("certify", inputs, results);
    report.witnesses = witness_docs(&cert);
    Ok(report.render())
}

fn run_decompose(args: &MixArgs) -> Result<String, CliError> {
    require_json(args.state.format, "decompose")?;
    let (coeffs, mut inputs) = resolve_coeffs(&args.state)?;
    inputs.v = Some(args.v.into());
    inputs.override_restriction2 = args.override_restriction2;
    let v_c = critical_v(&coeffs, args.state.n);
    let spec = sepcert::SgwsSpec64::new(coeffs, args.state.n, args.v)?;
    let dec = decompose_sgws(&spec, args.override_restriction2)?;
    let record = verify_decomposition(&dec, &build_sgws(&spec))?;
    let doc: serde_json::Value =
        serde_json::from_str(&dec.to_json_string()?).expect("decomposition document is valid JSON");
    let results = json!({
        "critical_v": f17(v_c),
        "v": f17(args.v),
        "terms": dec.len(),
        "verification": {
            "reconstruction_error": f17(record.reconstruction_error),
            "min_factor_eig": f17(record.min_factor_eig),
            "weight_sum_error": f17(record.weight_sum_error),
            "pass": record.pass,
        },
        "decomposition": doc,
    });
    Ok(Report::new("decompose", inputs, results).render())
}

fn run_ppt(args: &MixArgs) -> Result<String, CliError> {
    require_json(args.state.format, "ppt")?;
    let (coeffs, mut inputs) = resolve_coeffs(&args.state)?;
    inputs.v = Some(args.v.into());
    let n = args.state.n;
    let v_c = critical_v(&coeffs, n);
    let spec = sepcert::SgwsSpec64::new(coeffs.clone(), n, args.v)?;
    let w = build_sgws(&spec);
    let dims = spec.dims();
    let mut rows = Vec::new();
    let mut min_eig_overall = f64::INFINITY;
    let mut min_threshold = 1.0f64;
    let mut any_crossing = false;
    for subset in bipartition_subsets(n) {
        let eig = ppt_min_eig(&w, &dims, &subset)?;
        let th = ppt_threshold(&coeffs, n, &subset)?;
        min_eig_overall = min_eig_overall.min(eig);
        min_threshold = min_threshold.min(th.v);
        any_crossing |= th.crossing_found;
        rows.push(json!({
            "subset": subset,
            "min_eig_at_v": f17(eig),
            "threshold_v": f17(th.v),
            "crossing_found": th.crossing_found,
        }));
    }
    if rows.is_empty() {
        return Err(CliError::Validation(
            "ppt needs at least two parties to form a bipartition".into(),
        ));
    }
    let results = json!({
        "critical_v": f17(v_c),
        "v": f17(args.v),
        "bipartitions": rows,
        "min_eig_overall": f17(min_eig_overall),
        "threshold_numeric": f17(min_threshold),
        "any_crossing_found": any_crossing,
        "entangled_at_v": min_eig_overall < -1e-10,
    });
    Ok(Report::new("ppt", inputs, results).render())
}

fn run_concurrence(args: &ConcurrenceArgs) -> Result<String, CliError> {
    require_json(args.format, "concurrence")?;
    let mut inputs = Inputs {
        d: Some(2),
        n: Some(2),
        v: Some(args.v.into()),
        ..Inputs::default()
    };
    let (coeffs, closed_form) = match (&args.alpha, args.theta) {
        (Some(_), Some(_)) | (None, None) => {
            return Err(CliError::Validation(
                "exactly one of --alpha and --theta must be given".into(),
            ))
        }
        (Some(text), None) => {
            let alpha = parse_alpha(text)?;
            if alpha.len() != 2 {
                return Err(CliError::Validation(format!(
                    "concurrence is a two-qubit measure; got {} coefficients",
                    alpha.len()
                )));
            }
            inputs.alpha = Some(alpha_doc(&alpha));
            (validate_coeffs(&alpha)?, None)
        }
        (None, Some(theta)) => {
            inputs.theta = Some(theta.into());
            let alpha = [
                Complex64::new(theta.sin(), 0.0),
                Complex64::new(theta.cos(), 0.0),
            ];
            let closed = concurrence_closed_form(args.v, theta)?;
            (validate_coeffs(&alpha)?, Some(closed))
        }
    };
    let spec = sepcert::SgwsSpec64::new(coeffs.clone(), 2, args.v)?;
    let state = TwoQubitState::new(build_sgws(&spec))?;
    let c = concurrence(&state)?;
    let e = eof(c)?;
    let results = json!({
        "concurrence": f17(c),
        "entanglement_of_formation": f17(e),
        "critical_v": f17(critical_v(&coeffs, 2)),
        "closed_form": closed_form.map(|cf| json!({
            "value": f17(cf.value),
            "within_printed_domain": cf.closed_form_domain,
        })),
    });
    Ok(Report::new("concurrence", inputs, results).render())
}

fn run_family_scan(args: &FamilyScanArgs) -> Result<String, CliError> {
    let format = args.format.unwrap_or(Format::Csv);
    let steps = args.theta_steps;
    if steps == 0 {
        return Err(CliError::Validation(
            "--theta-steps must be positive".into(),
        ));
    }
    let mut rows = Vec::with_capacity(steps);
    for j in 0..steps {
        let theta = j as f64 * std::f64::consts::FRAC_PI_2 / steps as f64;
        let v_c = family_critical_v::<f64>(args.d, args.n, theta)?;
        let eigs = family_rho_eigs::<f64>(args.d, theta)?;
        let eig_plus = eigs[eigs.len() - 1];
        let eig_minus = eigs[eigs.len() - 2];
        rows.push((theta, v_c, eig_plus, eig_minus, args.d - 2));
    }
    match format {
        Format::Csv => {
            let mut text = String::from("theta,critical_v,eig_plus,eig_minus,zeros\n");
            for (theta, v_c, plus, minus, zeros) in rows {
                text.push_str(&format!(
                    "{},{},{},{},{}\n",
                    csv_float(theta),
                    csv_float(v_c),
                    csv_float(plus),
                    csv_float(minus),
                    zeros
                ));
            }
            Ok(text)
        }
        Format::Json => {
            let inputs = Inputs {
                d: Some(args.d),
                n: Some(args.n),
                theta_steps: Some(steps),
                ..Inputs::default()
            };
            let rows: Vec<serde_json::Value> = rows
                .into_iter()
                .map(|(theta, v_c, plus, minus, zeros)| {
                    json!({
                        "theta": f17(theta),
                        "critical_v": f17(v_c),
                        "eig_plus": f17(plus),
                        "eig_minus": f17(minus),
                        "zeros": zeros,
                    })
                })
                .collect();
            let results = json!({ "rows": rows });
            Ok(Report::new("family-scan", inputs, results).render())
        }
    }
}

fn run_conjecture_scan(args: &ConjectureScanArgs) -> Result<String, CliError> {
    let format = args.format.unwrap_or(Format::Json);
    let scan = conjecture_scan::<f64>(args.d, args.n, args.samples, args.seed)?;
    match format {
        Format::Csv => {
            let mut header = String::from("sample_index");
            for i in 0..args.d {
                header.push_str(&format!(",alpha_re_{i},alpha_im_{i}"));
            }
            header.push_str(
                ",t_value,restriction2_min_eig,formula_v,ppt_v,ppt_crossing_found,diff\n",
            );
            let mut text = header;
            for row in &scan.rows {
                let mut line = format!("{}", row.sample_index);
                for z in &row.alpha {
                    line.push_str(&format!(",{},{}", csv_float(z.re), csv_float(z.im)));
                }
                line.push_str(&format!(
                    ",{},{},{},{},{},{}\n",
                    csv_float(row.t_value),
                    csv_float(row.restriction2_min_eig),
                    csv_float(row.formula_v),
                    csv_float(row.ppt_v),
                    row.ppt_crossing_found,
                    csv_float(row.diff)
                ));
                text.push_str(&line);
            }
            Ok(text)
        }
        Format::Json => {
            let inputs = Inputs {
                d: Some(args.d),
                n: Some(args.n),
                samples: Some(args.samples),
                seed: Some(args.seed),
                ..Inputs::default()
            };
            let rows: Vec<serde_json::Value> = scan
                .rows
                .iter()
                .map(|row| {
                    json!({
                        "sample_index": row.sample_index,
                        "alpha": alpha_doc(&row.alpha),
                        "t_value": f17(row.t_value),
                        "restriction2_min_eig": f17(row.restriction2_min_eig),
                        "formula_v": f17(row.formula_v),
                        "ppt_v": f17(row.ppt_v),
                        "ppt_crossing_found": row.ppt_crossing_found,
                        "diff": f17(row.diff),
                    })
                })
                .collect();
            let results = json!({
                "samples_drawn": scan.samples,
                "kept": scan.rows.len(),
                "skipped_invalid": scan.skipped_invalid,
                "skipped_restriction2_ok": scan.skipped_restriction2_ok,
                "rows": rows,
            });
            Ok(Report::new("conjecture-scan", inputs, results).render())
        }
    }
}

fn emit(text: &str, output: Option<&PathBuf>) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Validation(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let (text, output) = match &cli.command {
        Command::Threshold(args) => (run_threshold(args)?, args.output.clone()),
        Command::Certify(args) => (run_certify(args)?, args.state.output.clone()),
        Command::Decompose(args) => (run_decompose(args)?, args.state.output.clone()),
        Command::Ppt(args) => (run_ppt(args)?, args.state.output.clone()),
        Command::Concurrence(args) => (run_concurrence(args)?, args.output.clone()),
        Command::FamilyScan(args) => (run_family_scan(args)?, args.output.clone()),
        Command::ConjectureScan(args) => (run_conjecture_scan(args)?, args.output.clone()),
    };
    emit(&text, output.as_ref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            // usage problems are validation errors: exit 1, diagnostics on stderr
            eprintln!("{e}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
