//! Argument types and command dispatch. Exit-code policy: 0 = ran (verdicts
//! and "not detected" are results, not failures), 2 = unreadable or invalid
//! input data, 3 = bad arguments.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use weylcrit::sample::{random_biseparable, random_mixed, random_pure, seeded_rng};
use weylcrit::{
    detect, emit_curve, sample_point, scan, Bipartition, CriterionReport, DensityMatrix,
    DetectionMode, Family, ScanCriterion, ScanResult,
};

use crate::statefile::StateFile;

#[derive(Parser)]
#[command(name = "weylcrit", version, about = "Entanglement certification from correlation-tensor trace norms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check a stored density matrix against the separability bounds
    Analyze(AnalyzeArgs),
    /// Find the noise threshold where a criterion starts firing
    Scan(ScanArgs),
    /// Emit a bundled reference table or curve as CSV
    Repro(ReproArgs),
    /// Write a seeded random state file for testing
    Sample(SampleArgs),
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Path to a state file (JSON; see `sample` for the layout)
    pub state: PathBuf,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    /// Bound to score against: max over cuts, or mean for symmetric states
    #[arg(long, value_enum, default_value_t = ModeArg::General)]
    pub mode: ModeArg,
    /// Write the per-bipartition table to this file instead of stdout
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScanArgs {
    /// w3_noise, example2_noise, ghz4_noise, or a label for --state
    pub family: String,
    #[arg(long)]
    pub alpha: f64,
    #[arg(long)]
    pub beta: f64,
    /// Scan one cut, e.g. "2|1,3", instead of the GME score
    #[arg(long)]
    pub partition: Option<String>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Bisection tolerance on x
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Base state for a custom white-noise family
    #[arg(long)]
    pub state: Option<PathBuf>,
    /// Write the sample grid to this file
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    pub target: Target,
    /// Points per curve (fig targets only)
    #[arg(long, default_value_t = 101)]
    pub grid: usize,
    /// Write the CSV to this file instead of stdout
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

#[derive(Args)]
pub struct SampleArgs {
    /// Subsystem dimensions, e.g. 3,3,2
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<usize>,
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Cut for biseparable states, e.g. "1|2,3"
    #[arg(long)]
    pub partition: Option<String>,
    /// Mixture length for biseparable states
    #[arg(long, default_value_t = 2)]
    pub components: usize,
    #[arg(long)]
    pub seed: u64,
    /// Write the state file here instead of stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    General,
    PermInvariant,
}

#[derive(Copy, Clone, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Example3,
    Fig1,
    Fig2,
}

#[derive(Copy, Clone, ValueEnum)]
pub enum Kind {
    Pure,
    Mixed,
    Biseparable,
}

/// Which exit code a failure maps to.
pub enum CmdError {
    /// Exit 2: unreadable file, malformed JSON, or a matrix that fails
    /// validation.
    Input(String),
    /// Exit 3: arguments that name impossible work.
    Args(String),
}

type CmdResult<T = ()> = Result<T, CmdError>;

fn args_err(msg: impl Into<String>) -> CmdError {
    CmdError::Args(msg.into())
}

fn lib_err(e: weylcrit::Error) -> CmdError {
    match e {
        weylcrit::Error::NotPermutationInvariant { .. } | weylcrit::Error::InvalidState(_) => {
            CmdError::Input(e.to_string())
        }
        other => CmdError::Args(other.to_string()),
    }
}

pub fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Repro(args) => cmd_repro(args),
        Command::Sample(args) => cmd_sample(args),
    }
}

fn load_state(path: &Path) -> CmdResult<(DensityMatrix, Option<String>)> {
    let file = StateFile::read(path).map_err(CmdError::Input)?;
    let state = file.to_state().map_err(CmdError::Input)?;
    Ok((state, file.name))
}

fn parse_labels(text: &str) -> CmdResult<Vec<usize>> {
    text.split(',')
        .map(|p| p.trim().parse::<usize>().map_err(|_| args_err(format!("bad subsystem label {p:?}"))))
        .collect()
}

fn parse_bipartition(text: &str, n: usize) -> CmdResult<Bipartition> {
    let (l, r) = text
        .split_once('|')
        .ok_or_else(|| args_err(format!("--partition must look like \"1,3|2,4\", got {text:?}")))?;
    let mut left = parse_labels(l)?;
    let mut right = parse_labels(r)?;
    left.sort_unstable();
    right.sort_unstable();
    let bp = Bipartition::new(&left, n).map_err(lib_err)?;
    if bp.right() != right.as_slice() {
        return Err(args_err(format!(
            "{text:?} does not split {n} parties: right block should be {:?}",
            bp.right()
        )));
    }
    Ok(bp)
}

fn cmd_analyze(args: AnalyzeArgs) -> CmdResult {
    let (state, name) = load_state(&args.state)?;
    let mode = match args.mode {
        ModeArg::General => DetectionMode::General,
        ModeArg::PermInvariant => DetectionMode::PermutationInvariant,
    };
    let report = detect(&state, args.alpha, args.beta, mode).map_err(lib_err)?;
    print!("{}", render_report(&report, name.as_deref(), state.dims()));
    if let Some(path) = &args.csv {
        let headers = ["bipartition", "trace_norm", "bound", "violated"].map(String::from);
        let rows: Vec<Vec<String>> = report
            .records
            .iter()
            .map(|r| {
                vec![
                    r.bipartition.label(),
                    r.trace_norm.to_string(),
                    r.bound.to_string(),
                    r.violated.to_string(),
                ]
            })
            .collect();
        write_csv(Some(path), &headers, &rows)?;
    }
    Ok(())
}

fn render_report(report: &CriterionReport, name: Option<&str>, dims: &[usize]) -> String {
    let mut out = String::new();
    let label_width = report
        .records
        .iter()
        .map(|r| r.bipartition.label().len())
        .max()
        .unwrap_or(0)
        .max("bipartition".len());
    out += &format!("state: {} • dims {:?}\n", name.unwrap_or("(unnamed)"), dims);
    out += &format!(
        "mode: {} • α = {:.4} • β = {:.4}\n\n",
        report.mode, report.alpha, report.beta
    );
    out += &format!("{:label_width$}  {:>9}  {:>9}  violated\n", "bipartition", "‖N‖_tr", "bound");
    for r in &report.records {
        out += &format!(
            "{:label_width$}  {:>9.4}  {:>9.4}  {}\n",
            r.bipartition.label(),
            r.trace_norm,
            r.bound,
            if r.violated { "yes" } else { "no" },
        );
    }
    let bound_name = match report.mode {
        DetectionMode::General => "K",
        DetectionMode::PermutationInvariant => "J",
    };
    out += &format!("\nT(ρ) = {:.4}\n{} = {:.4}\n", report.score, bound_name, report.threshold);
    out += &format!("verdict: {}\n", report.verdict);
    out
}

fn cmd_scan(args: ScanArgs) -> CmdResult {
    let family = match &args.state {
        Some(path) => {
            let (base, _) = load_state(path)?;
            Family::custom(args.family.clone(), base)
        }
        None => Family::named(&args.family).map_err(lib_err)?,
    };
    let criterion = match (&args.partition, args.mode) {
        (Some(_), Some(_)) => {
            return Err(args_err("--partition already fixes the criterion; drop --mode"));
        }
        (Some(p), None) => {
            ScanCriterion::Bipartition(parse_bipartition(p, family.dims().len())?)
        }
        (None, Some(ModeArg::PermInvariant)) => ScanCriterion::GmePermInvariant,
        (None, _) => ScanCriterion::GmeGeneral,
    };
    let result = scan(&family, args.alpha, args.beta, &criterion, args.tol).map_err(lib_err)?;
    print!("{}", render_scan(&result, &family.dims()));
    if let Some(path) = &args.csv {
        let headers = ["x", "score", "bound"].map(String::from);
        let rows: Vec<Vec<String>> = result
            .samples
            .iter()
            .map(|s| vec![s.x.to_string(), s.score.to_string(), s.bound.to_string()])
            .collect();
        write_csv(Some(path), &headers, &rows)?;
    }
    Ok(())
}

fn render_scan(result: &ScanResult, dims: &[usize]) -> String {
    let mut out = String::new();
    out += &format!(
        "family: {} • dims {:?} • α = {:.4} • β = {:.4}\n",
        result.family, dims, result.alpha, result.beta
    );
    out += &format!("criterion: {}\n", result.criterion);
    out += &format!("bound: {:.4}\n", result.samples[0].bound);
    match result.threshold_x {
        Some(x) => out += &format!("threshold: x = {x:.4}\n"),
        None => out += "threshold: not detected within [0, 1]\n",
    }
    if result.sign_changes.len() > 1 {
        let list: Vec<String> = result.sign_changes.iter().map(|x| format!("{x:.4}")).collect();
        out += &format!("sign changes: {}\n", list.join(", "));
    }
    out
}

fn cmd_repro(args: ReproArgs) -> CmdResult {
    let (headers, rows) = match args.target {
        Target::Table1 => table_rows(
            &Family::W3Noise,
            &ScanCriterion::GmeGeneral,
            &[(1.0, 1.0), (0.5, 2.0), (0.1, 2.0)],
        )?,
        Target::Table2 => {
            let bp = Bipartition::new(&[2], 3).map_err(lib_err)?;
            table_rows(
                &Family::Example2Noise,
                &ScanCriterion::Bipartition(bp),
                &[(1.0, 1.0), (0.5, 2.0), (0.0, 1.0)],
            )?
        }
        Target::Example3 => example3_rows()?,
        Target::Fig1 => curve_rows(&Family::W3Noise, 0.1, 2.0, &ScanCriterion::GmeGeneral, args.grid, "f1")?,
        Target::Fig2 => {
            let bp = Bipartition::new(&[1], 4).map_err(lib_err)?;
            curve_rows(&Family::Ghz4Noise, 1.0, 1.0, &ScanCriterion::Bipartition(bp), args.grid, "f3")?
        }
    };
    write_csv(args.csv.as_deref(), &headers, &rows)
}

fn table_rows(
    family: &Family,
    criterion: &ScanCriterion,
    cases: &[(f64, f64)],
) -> CmdResult<(Vec<String>, Vec<Vec<String>>)> {
    let headers = ["alpha", "beta", "slope", "bound", "threshold"].map(String::from).to_vec();
    let mut rows = Vec::new();
    for &(alpha, beta) in cases {
        rows.push(reference_row(&[], family, criterion, alpha, beta)?);
    }
    Ok((headers, rows))
}

fn example3_rows() -> CmdResult<(Vec<String>, Vec<Vec<String>>)> {
    let headers =
        ["criterion", "alpha", "beta", "slope", "bound", "threshold"].map(String::from).to_vec();
    let fam = Family::Ghz4Noise;
    let bp = Bipartition::new(&[1], 4).map_err(lib_err)?;
    let criteria = [
        ScanCriterion::Bipartition(bp),
        ScanCriterion::GmePermInvariant,
        ScanCriterion::GmeGeneral,
    ];
    let mut rows = Vec::new();
    for criterion in &criteria {
        rows.push(reference_row(&[criterion.to_string()], &fam, criterion, 1.0, 1.0)?);
    }
    Ok((headers, rows))
}

/// One table row: optional leading cells, then α, β, the score slope (the
/// families are linear, so the slope is the score at x = 1), the bound, and
/// the detection threshold.
fn reference_row(
    prefix: &[String],
    family: &Family,
    criterion: &ScanCriterion,
    alpha: f64,
    beta: f64,
) -> CmdResult<Vec<String>> {
    let at_one = sample_point(family, alpha, beta, criterion, 1.0).map_err(lib_err)?;
    let result = scan(family, alpha, beta, criterion, 1e-6).map_err(lib_err)?;
    let mut row = prefix.to_vec();
    row.extend([
        alpha.to_string(),
        beta.to_string(),
        at_one.score.to_string(),
        at_one.bound.to_string(),
        result.threshold_x.map(|x| x.to_string()).unwrap_or_default(),
    ]);
    Ok(row)
}

fn curve_rows(
    family: &Family,
    alpha: f64,
    beta: f64,
    criterion: &ScanCriterion,
    grid: usize,
    f_name: &str,
) -> CmdResult<(Vec<String>, Vec<Vec<String>>)> {
    let mut table = emit_curve(family, alpha, beta, criterion, grid).map_err(lib_err)?;
    table.headers[1] = f_name.to_string();
    let rows = table
        .rows
        .iter()
        .map(|row| row.iter().map(|v| v.to_string()).collect())
        .collect();
    Ok((table.headers, rows))
}

fn cmd_sample(args: SampleArgs) -> CmdResult {
    let mut rng = seeded_rng(args.seed);
    let (state, kind_name) = match args.kind {
        Kind::Pure => (random_pure(&args.dims, &mut rng).map_err(lib_err)?, "pure"),
        Kind::Mixed => (random_mixed(&args.dims, &mut rng).map_err(lib_err)?, "mixed"),
        Kind::Biseparable => {
            let text = args
                .partition
                .as_deref()
                .ok_or_else(|| args_err("--kind biseparable needs --partition"))?;
            let bp = parse_bipartition(text, args.dims.len())?;
            let state = random_biseparable(&args.dims, &bp, args.components, &mut rng)
                .map_err(lib_err)?;
            (state, "biseparable")
        }
    };
    let dims_label: Vec<String> = args.dims.iter().map(ToString::to_string).collect();
    let file = StateFile::from_state(
        &state,
        Some(format!("{kind_name} {} seed {}", dims_label.join(","), args.seed)),
        Some("weylcrit sample".to_string()),
    );
    match &args.out {
        Some(path) => fs::write(path, file.canonical_json())
            .map_err(|e| CmdError::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{}", file.canonical_json());
            Ok(())
        }
    }
}

fn write_csv(dest: Option<&Path>, headers: &[String], rows: &[Vec<String>]) -> CmdResult {
    let sink: Box<dyn Write> = match dest {
        Some(path) => Box::new(
            fs::File::create(path)
                .map_err(|e| CmdError::Input(format!("cannot write {}: {e}", path.display())))?,
        ),
        None => Box::new(io::stdout().lock()),
    };
    let mut writer = csv::Writer::from_writer(sink);
    let io_err = |e: csv::Error| CmdError::Input(format!("csv write failed: {e}"));
    writer.write_record(headers).map_err(io_err)?;
    for row in rows {
        writer.write_record(row).map_err(io_err)?;
    }
    writer.flush().map_err(|e| CmdError::Input(format!("csv write failed: {e}")))
}
