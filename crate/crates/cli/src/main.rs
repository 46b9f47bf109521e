mod model;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use jmatrix::jacobi::{golub_welsch, truncate_blocks};
use jmatrix::operators::{AffineMap, JacobiOperator};
use jmatrix::oracle::{verify_tridiagonal, VerificationReport};
use jmatrix::recurrences::OrthonormalCoeffs;
use jmatrix::spectra::{determinacy, qhermite_support, spectrum_report, zero_bounds, SpectrumReport, DEFAULT_SCAN};
use model::{build_family, build_model, Params};
use serde::Serialize;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "jmatrix", version, about = "Tridiagonal operator representations and their spectra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the tridiagonal entries of a model.
    Build(ModelRun),
    /// Compare the closed-form entries against the quadrature oracle.
    Verify(ModelRun),
    /// Eigenvalues of the N x N truncation with predicted discrete values.
    Spectrum(ModelRun),
    /// Zeros of the degree-N polynomial of the associated recurrence.
    Zeros(ModelRun),
    /// Moment-problem determinacy tests on the associated recurrence.
    Determinacy(ModelRun),
    /// N-point Gauss rule of a basis family (or of a model's basis).
    Quadrature(QuadratureRun),
    /// Support points and masses of the extremal q^{-1}-Hermite measure.
    QhermiteSupport(SupportRun),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct Output {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ModelRun {
    #[arg(long)]
    model: String,
    #[command(flatten)]
    params: Params,
    #[arg(long = "N")]
    n: Option<usize>,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct QuadratureRun {
    #[arg(long, conflicts_with = "family", required_unless_present = "family")]
    model: Option<String>,
    #[arg(long)]
    family: Option<String>,
    #[command(flatten)]
    params: Params,
    #[arg(long = "N", default_value_t = 10)]
    n: usize,
    #[command(flatten)]
    out: Output,
}

#[derive(Args, Debug)]
struct SupportRun {
    #[command(flatten)]
    params: Params,
    /// Points with |k| <= N are listed.
    #[arg(long = "N", default_value_t = 20)]
    n: usize,
    #[command(flatten)]
    out: Output,
}

enum Failure {
    Usage(String),
    Verification(String),
}

impl From<String> for Failure {
    fn from(s: String) -> Self {
        Failure::Usage(s)
    }
}

type Run<T> = Result<T, Failure>;

const DEFAULT_N: usize = 20;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cmd: Command) -> Run<()> {
    match cmd {
        Command::Build(r) => cmd_build(r),
        Command::Verify(r) => cmd_verify(r),
        Command::Spectrum(r) => cmd_spectrum(r),
        Command::Zeros(r) => cmd_zeros(r),
        Command::Determinacy(r) => cmd_determinacy(r),
        Command::Quadrature(r) => cmd_quadrature(r),
        Command::QhermiteSupport(r) => cmd_support(r),
    }
}

impl ModelRun {
    fn validated(&self) -> Run<(JacobiOperator, usize)> {
        if !(self.tol > 0.0) {
            return Err(format!("--tol must be positive, got {}", self.tol).into());
        }
        let n = self.n.unwrap_or(DEFAULT_N);
        if n == 0 {
            return Err("--N must be at least 1".to_string().into());
        }
        Ok((build_model(&self.model, &self.params)?, n))
    }
}

/// Fixed-width scientific notation with 17 significant digits.
fn fmt(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn emit(out: &Output, text: String) -> Run<()> {
    match &out.output {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(v: &T) -> Run<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn csv_table(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Run<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Failure::Usage(e.to_string());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(&r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| Failure::Usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct BuildOutput {
    model: String,
    provenance: String,
    operator: JacobiOperator,
    n: usize,
    /// Diagonal entries `b_0..b_{N-1}`.
    diag: Vec<f64>,
    /// Signed couplings; entry `k` joins rows `k-1` and `k`, entry 0 is 0.
    coupling: Vec<f64>,
    coeffs: OrthonormalCoeffs,
}

fn cmd_build(r: ModelRun) -> Run<()> {
    let (op, n) = r.validated()?;
    let diag: Vec<f64> = (0..n).map(|k| op.diag(k)).collect();
    let coupling: Vec<f64> = (0..n).map(|k| if k == 0 { 0.0 } else { op.coupling(k) }).collect();
    let text = match r.out.format {
        Format::Json => json(&BuildOutput {
            model: op.model.tag().into(),
            provenance: op.provenance.clone(),
            coeffs: op.coeffs(n),
            operator: op,
            n,
            diag,
            coupling,
        })?,
        Format::Csv => csv_table(
            &["n", "diag", "coupling"],
            (0..n).map(|k| vec![k.to_string(), fmt(diag[k]), fmt(coupling[k])]),
        )?,
    };
    emit(&r.out, text)
}

fn cmd_verify(r: ModelRun) -> Run<()> {
    let (op, n) = r.validated()?;
    let rep = verify_tridiagonal(&op, n, r.tol).map_err(|e| Failure::Verification(e.to_string()))?;
    let text = match r.out.format {
        Format::Json => json(&rep)?,
        Format::Csv => verify_csv(&rep)?,
    };
    emit(&r.out, text)?;
    if rep.passed {
        Ok(())
    } else {
        Err(Failure::Verification(format!(
            "{}: residual {:e}, leak {:e}, symmetry {:e} against tol {:e}",
            rep.model, rep.max_tridiag_residual, rep.max_off_tridiag_leak, rep.max_symmetry_defect, rep.tol
        )))
    }
}

fn verify_csv(rep: &VerificationReport) -> Run<String> {
    csv_table(
        &[
            "model",
            "max_tridiag_residual",
            "max_symmetry_defect",
            "max_off_tridiag_leak",
            "indices_checked",
            "pairs_checked",
            "quadrature_order",
            "tol",
            "passed",
        ],
        [vec![
            rep.model.clone(),
            fmt(rep.max_tridiag_residual),
            fmt(rep.max_symmetry_defect),
            fmt(rep.max_off_tridiag_leak),
            rep.indices_checked.to_string(),
            rep.pairs_checked.to_string(),
            rep.quadrature_order.to_string(),
            fmt(rep.tol),
            rep.passed.to_string(),
        ]],
    )
}

/// `(N, index, value, kind)` rows; predicted discrete values follow the
/// truncation eigenvalues with kind `predicted`.
fn plot_rows(rep: &SpectrumReport) -> Vec<Vec<String>> {
    let n = rep.trunc_size.to_string();
    let mut rows: Vec<Vec<String>> = rep
        .eigenvalues_desc
        .iter()
        .enumerate()
        .map(|(i, e)| vec![n.clone(), i.to_string(), fmt(*e), "eigenvalue".into()])
        .collect();
    for (k, e) in rep.predicted_discrete.iter().flatten().enumerate() {
        rows.push(vec![n.clone(), k.to_string(), fmt(*e), "predicted".into()]);
    }
    rows
}

fn cmd_spectrum(r: ModelRun) -> Run<()> {
    let (op, n) = r.validated()?;
    let rep = spectrum_report(&op, n).map_err(|e| e.to_string())?;
    let text = match r.out.format {
        Format::Json => json(&rep)?,
        Format::Csv => csv_table(&["N", "index", "value", "kind"], plot_rows(&rep))?,
    };
    emit(&r.out, text)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ZerosOutput {
    model: String,
    provenance: String,
    n: usize,
    /// `E = sigma x + tau` links the operator to the recurrence variable `x`.
    recurrence_map: AffineMap,
    recurrence_offset: usize,
    zeros: Vec<f64>,
    zero_bound_interval: (f64, f64),
}

fn cmd_zeros(r: ModelRun) -> Run<()> {
    let (op, n) = r.validated()?;
    let c = op.recurrence_coeffs(n + 1);
    let mut zeros: Vec<f64> = truncate_blocks(&c, n).into_iter().flat_map(|(_, t)| t.eigenvalues()).collect();
    zeros.sort_by(f64::total_cmp);
    let text = match r.out.format {
        Format::Json => json(&ZerosOutput {
            model: op.model.tag().into(),
            provenance: op.provenance.clone(),
            n,
            recurrence_map: op.recurrence_map,
            recurrence_offset: op.recurrence_offset,
            zero_bound_interval: zero_bounds(&c, n),
            zeros,
        })?,
        Format::Csv => csv_table(
            &["index", "zero"],
            zeros.iter().enumerate().map(|(i, z)| vec![i.to_string(), fmt(*z)]),
        )?,
    };
    emit(&r.out, text)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DeterminacyOutput {
    model: String,
    provenance: String,
    #[serde(flatten)]
    verdict: jmatrix::spectra::DeterminacyVerdict,
}

fn cmd_determinacy(r: ModelRun) -> Run<()> {
    let (op, _) = r.validated()?;
    let scan = r.n.unwrap_or(DEFAULT_SCAN);
    let verdict = determinacy(&op.determinacy_coeffs(scan + 2), scan);
    let text = match r.out.format {
        Format::Json => json(&DeterminacyOutput {
            model: op.model.tag().into(),
            provenance: op.provenance.clone(),
            verdict,
        })?,
        Format::Csv => {
            let w = verdict.witness;
            let status = serde_json::to_value(verdict.status).map_err(|e| Failure::Usage(e.to_string()))?;
            let status = status.as_str().unwrap_or_default().to_string();
            let row = |name: &str, stat: f64, ok: bool| vec![name.into(), fmt(stat), ok.to_string(), status.clone()];
            csv_table(
                &["criterion", "statistic", "satisfied", "status"],
                [
                    row("series_i", w.series_i.partial_sum, w.series_i.divergent),
                    row("bound_ii", w.bound_ii.c, w.bound_ii.holds()),
                    row("bound_iii", w.bound_iii.c, w.bound_iii.holds()),
                    row("carleman", w.carleman.partial_sum, w.carleman.divergent),
                ],
            )?
        }
    };
    emit(&r.out, text)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct QuadratureOutput {
    family: jmatrix::recurrences::FamilySpec,
    provenance: String,
    n: usize,
    total_mass: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

fn cmd_quadrature(r: QuadratureRun) -> Run<()> {
    if r.n == 0 {
        return Err("--N must be at least 1".to_string().into());
    }
    let fam = match (&r.model, &r.family) {
        (Some(m), _) => build_model(m, &r.params)?.basis,
        (None, Some(f)) => build_family(f, &r.params)?,
        (None, None) => unreachable!("clap requires one of --model/--family"),
    };
    let rule = golub_welsch(&fam.orthonormal(r.n), r.n, fam.total_mass());
    let text = match r.out.format {
        Format::Json => json(&QuadratureOutput {
            family: fam,
            provenance: "Golub-Welsch rule from the orthonormal three-term recurrence".into(),
            n: r.n,
            total_mass: rule.total_mass,
            nodes: rule.nodes,
            weights: rule.weights,
        })?,
        Format::Csv => csv_table(
            &["index", "node", "weight"],
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .enumerate()
                .map(|(i, (x, w))| vec![i.to_string(), fmt(*x), fmt(*w)]),
        )?,
    };
    emit(&r.out, text)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SupportOutput {
    provenance: String,
    a: f64,
    q: f64,
    k_max: usize,
    points: Vec<jmatrix::spectra::LatticePoint>,
}

fn cmd_support(r: SupportRun) -> Run<()> {
    let q = r.params.q.ok_or_else(|| "qhermite-support needs --q".to_string())?;
    let a = r.params.a.unwrap_or(0.5 * (1.0 + q));
    let points = qhermite_support(a, q, r.n).map_err(|e| e.to_string())?;
    let text = match r.out.format {
        Format::Json => json(&SupportOutput {
            provenance: "extremal q^{-1}-Hermite measure on x_k = (q^{-k}/a - a q^k)/2".into(),
            a,
            q,
            k_max: r.n,
            points,
        })?,
        Format::Csv => csv_table(
            &["k", "x", "mass", "ln_mass"],
            points.iter().map(|p| vec![p.k.to_string(), fmt(p.x), fmt(p.mass), fmt(p.ln_mass)]),
        )?,
    };
    emit(&r.out, text)
}
