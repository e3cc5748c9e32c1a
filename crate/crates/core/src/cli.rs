//! Command-line front end. `run` parses arguments, dispatches, and maps
//! outcomes to exit codes: 0 success, 1 failed numeric check, 2 bad input.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bose_hubbard::{self, BhVersion, PresetParams};
use crate::ed::{convergence_sweep, fmt12, two_site_spt};
use crate::kitaev::{self, KitaevParams, ScanNumerics};
use crate::model::Boundary;
use crate::model_io::{self, ModelFile};
use crate::potts;
use crate::rydberg::{self, C6Triple, PairInput};
use crate::selftest;
use crate::transmute::{transmute_qubit_model, TransmutePath};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NUMERIC: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Environment variable giving the default worker count.
pub const JOBS_ENV: &str = "ISING_FORGE_JOBS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("check failed: {0}")]
    Numeric(String),
    #[error(transparent)]
    Library(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use crate::Error as E;
        match self {
            CliError::Numeric(_) => EXIT_NUMERIC,
            CliError::Library(E::NoConvergence { .. } | E::Gapless(_) | E::NotProjective(_) | E::NotHermitian(_)) => EXIT_NUMERIC,
            _ => EXIT_INPUT,
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "ising-forge", version, about = "Transmute qubit models into clock-variable Ising models and check them numerically")]
pub struct Cli {
    /// Run the full invariant battery and report one line per criterion.
    #[arg(long)]
    pub selftest: bool,

    /// Worker threads for sweeps; defaults to $ISING_FORGE_JOBS, then all cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,

    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rewrite a qubit model file as a clock-variable Ising model file.
    Transmute(TransmuteArgs),
    /// Field spectra, projected Pauli algebra, round trips and symmetries.
    VerifyAlgebra(VerifyArgs),
    /// Spectral error of a transmuted model against its source over field strengths.
    EdConverge(ConvergeArgs),
    /// Gap and entanglement of the two-site four-state pair.
    Spt2(SptArgs),
    /// Band gap, critical fields, phase and Chern number at one Kitaev point.
    KitaevGap(KitaevGapArgs),
    /// Phase labels over the coupling simplex at fixed field.
    KitaevPhasediag(PhaseDiagArgs),
    /// Second-order couplings of the three-state Potts chain.
    PottsEff(PottsEffArgs),
    /// Compare first- and second-order Potts models with exact spectra.
    PottsValidate(PottsValidateArgs),
    /// Spin couplings of a Rydberg pair from C6 data or pair energies.
    Rydberg(RydbergArgs),
    /// Bose-Hubbard constants and two-triangle cluster comparison.
    BhVerify(BhArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathArg {
    FourState,
    ThreeState,
}

impl From<PathArg> for TransmutePath {
    fn from(p: PathArg) -> Self {
        match p {
            PathArg::FourState => TransmutePath::FourState,
            PathArg::ThreeState => TransmutePath::ThreeState,
        }
    }
}

#[derive(Debug, Args)]
pub struct TransmuteArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "four-state")]
    pub path: PathArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    /// Field strength to store in the output; left unset when omitted.
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Seed for the randomized round-trip battery.
    #[arg(long, default_value_t = 2024)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub count: usize,
}

#[derive(Debug, Args)]
pub struct ConvergeArgs {
    /// Qubit model file.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "four-state")]
    pub path: PathArg,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub phi: f64,
    #[arg(long, value_delimiter = ',', default_value = "50,100,200,400")]
    pub lambdas: Vec<f64>,
    /// Number of low levels compared.
    #[arg(long, default_value_t = 8)]
    pub k: usize,
    /// Fail unless errors decrease and the fitted exponent lies in [0.8, 1.2].
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SptArgs {
    #[arg(long, default_value_t = 1.0)]
    pub j: f64,
    #[arg(long, value_delimiter = ',', default_value = "0.1,0.5,1,2,10")]
    pub lambdas: Vec<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct KitaevGapArgs {
    #[arg(long, allow_negative_numbers = true)]
    pub jx: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub jy: f64,
    #[arg(long, allow_negative_numbers = true)]
    pub jz: f64,
    #[arg(long)]
    pub lambda: f64,
    /// Read the couplings as the rescaled values 3 J.
    #[arg(long)]
    pub scaled: bool,
    #[arg(long, default_value_t = kitaev::DEFAULT_GAP_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = kitaev::DEFAULT_CHERN_GRID)]
    pub chern_grid: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PhaseDiagArgs {
    #[arg(long)]
    pub lambda: f64,
    #[arg(long, default_value_t = 60)]
    pub res: usize,
    /// Common sign of the three couplings.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub sign: f64,
    /// Also compute the band gap on this grid at every point.
    #[arg(long)]
    pub gap_grid: Option<usize>,
    /// Also compute the Chern number on this grid at every point.
    #[arg(long)]
    pub chern_grid: Option<usize>,
    /// Emit plane coordinates `u,v,label` instead of couplings.
    #[arg(long)]
    pub ternary: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PottsEffArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    #[arg(long)]
    pub lambda: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PottsValidateArgs {
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub j: f64,
    #[arg(long, value_delimiter = ',', default_value = "20,40,80")]
    pub lambdas: Vec<f64>,
    #[arg(long, default_value_t = 3)]
    pub l: usize,
    #[arg(long, default_value = "open")]
    pub boundary: Boundary,
    /// Fail unless the second-order model wins everywhere and its error
    /// shrinks by at least 0.3 per doubling.
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RydbergArgs {
    /// C6_nn C6_tt C6_nt in GHz um^6.
    #[arg(long, num_args = 3, value_names = ["NN", "TT", "NT"], allow_negative_numbers = true)]
    pub c6: Option<Vec<f64>>,
    /// Separation in um.
    #[arg(long, default_value_t = 1.0)]
    pub r: f64,
    /// U_nn U_tt U_nt in GHz.
    #[arg(long, num_args = 3, value_names = ["NN", "TT", "NT"], allow_negative_numbers = true, conflicts_with = "c6")]
    pub energies: Option<Vec<f64>>,
    /// JSON with either C6_nn/C6_tt/C6_nt/R_um or U_nn/U_tt/U_nt.
    #[arg(long = "in", conflicts_with_all = ["c6", "energies"])]
    pub input: Option<PathBuf>,
    /// A bundled dataset entry, e.g. K-56-58-s+1.
    #[arg(long, conflicts_with_all = ["c6", "energies", "input"])]
    pub case: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BhArgs {
    #[arg(long, default_value = "interaction")]
    pub version: BhVersion,
    /// Preset JSON; the bundled preset of the chosen version when omitted.
    #[arg(long)]
    pub preset: Option<PathBuf>,
    /// Hierarchy ratios for the two-triangle comparison.
    #[arg(long, value_delimiter = ',', default_value = "10,30,100")]
    pub ratios: Vec<f64>,
    #[arg(long, default_value_t = 4)]
    pub k: usize,
    /// Fail unless the mismatch decreases with the ratio and is at most 5% at the first.
    #[arg(long)]
    pub check: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Round to twelve significant digits so printed JSON is stable.
fn r12(x: f64) -> Value {
    if x.is_finite() {
        json!(fmt12(x).parse::<f64>().unwrap_or(x))
    } else {
        json!(x.to_string())
    }
}

fn opt12(x: Option<f64>) -> Value {
    x.map(r12).unwrap_or(Value::Null)
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

/// The single writer: a file when `--out` is given, stdout otherwise.
fn emit(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, v: &Value) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v).expect("json values serialize");
    text.push('\n');
    emit(out, &text)
}

fn resolve_jobs(flag: Option<usize>) -> CliResult<Option<usize>> {
    let n = match flag {
        Some(n) => Some(n),
        None => match std::env::var(JOBS_ENV) {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| CliError::Input(format!("{JOBS_ENV} must be a positive integer, got `{s}`")))?),
            Err(_) => None,
        },
    };
    match n {
        Some(0) => Err(CliError::Input("--jobs must be at least 1".into())),
        other => Ok(other),
    }
}

/// Parse `argv` (including the program name), execute, and return the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli) -> CliResult<i32> {
    let jobs = resolve_jobs(cli.jobs)?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Input(format!("thread pool: {e}")))?;
    pool.install(|| {
        if cli.selftest {
            return Ok(run_selftest());
        }
        match cli.command {
            Some(cmd) => dispatch(cmd).map(|()| EXIT_OK),
            None => Err(CliError::Input("no subcommand given; try --help".into())),
        }
    })
}

fn run_selftest() -> i32 {
    let reports = selftest::run_all();
    for r in &reports {
        println!("{}", r.verdict());
        eprintln!("    {:.2}s of {}s", r.elapsed.as_secs_f64(), r.budget.as_secs());
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    println!("{passed} of {} criteria passed", reports.len());
    if passed == reports.len() {
        EXIT_OK
    } else {
        EXIT_NUMERIC
    }
}

fn dispatch(cmd: Command) -> CliResult<()> {
    match cmd {
        Command::Transmute(a) => transmute(a),
        Command::VerifyAlgebra(a) => verify_algebra(a),
        Command::EdConverge(a) => ed_converge(a),
        Command::Spt2(a) => spt2(a),
        Command::KitaevGap(a) => kitaev_gap(a),
        Command::KitaevPhasediag(a) => kitaev_phasediag(a),
        Command::PottsEff(a) => potts_eff(a),
        Command::PottsValidate(a) => potts_validate(a),
        Command::Rydberg(a) => rydberg_cmd(a),
        Command::BhVerify(a) => bh_verify(a),
    }
}

fn load_qubit(path: &Path) -> CliResult<crate::model::QubitModel> {
    match model_io::from_str(&read(path)?)? {
        ModelFile::Qubit(m) => Ok(m),
        ModelFile::Ising(_) => Err(CliError::Input(format!("{}: expected a qubit model, found an Ising model", path.display()))),
    }
}

fn transmute(a: TransmuteArgs) -> CliResult<()> {
    let q = load_qubit(&a.input)?;
    let mut ising = transmute_qubit_model(&q, a.phi, a.path.into())?;
    if let Some(l) = a.lambda {
        ising = ising.with_lambda(l);
        ising.validate()?;
    }
    emit(a.out.as_deref(), &model_io::to_string(&ModelFile::Ising(ising)))
}

fn verify_algebra(a: VerifyArgs) -> CliResult<()> {
    let mut failed = Vec::new();
    for id in [1, 2, 11] {
        let r = selftest::run_criterion(id);
        println!("{}", r.verdict());
        if !r.passed {
            failed.push(r.name);
        }
    }
    let worst = selftest::roundtrip_battery(a.seed, a.count)?;
    let ok = worst <= 1e-12;
    println!("[{}]    roundtrip: seed {} count {} max coefficient error {}", if ok { "PASS" } else { "FAIL" }, a.seed, a.count, fmt12(worst));
    if !ok {
        failed.push("roundtrip");
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Numeric(failed.join(", ")))
    }
}

fn ed_converge(a: ConvergeArgs) -> CliResult<()> {
    let q = load_qubit(&a.input)?;
    let ising = transmute_qubit_model(&q, a.phi, a.path.into())?;
    let table = convergence_sweep(&ising, &q, &a.lambdas, a.k)?;
    emit(a.out.as_deref(), &table.to_csv())?;
    let p = table.exponent;
    eprintln!("fitted exponent {}", p.map(fmt12).unwrap_or_else(|| "NA".into()));
    if a.check {
        let monotone = table.rows.windows(2).all(|w| w[1].spectral_error < w[0].spectral_error);
        let in_range = p.is_some_and(|p| (0.8..=1.2).contains(&p));
        if !(monotone && in_range) {
            return Err(CliError::Numeric(format!("monotone = {monotone}, exponent = {p:?}")));
        }
    }
    Ok(())
}

fn spt2(a: SptArgs) -> CliResult<()> {
    let mut s = String::from("lambda,gap,entropy,schmidt_degeneracy\n");
    for &l in &a.lambdas {
        let r = two_site_spt(a.j, l)?;
        let pattern: Vec<String> = r.report.degeneracy_pattern.iter().map(|d| d.to_string()).collect();
        s.push_str(&format!("{},{},{},{}\n", fmt12(l), fmt12(r.gap), fmt12(r.report.entropy), pattern.join(";")));
    }
    emit(a.out.as_deref(), &s)
}

fn kitaev_gap(a: KitaevGapArgs) -> CliResult<()> {
    let p = if a.scaled { KitaevParams::from_scaled(a.jx, a.jy, a.jz, a.lambda)? } else { KitaevParams::new(a.jx, a.jy, a.jz, a.lambda)? };
    let g = kitaev::gap(&p, a.grid)?;
    let cf = kitaev::critical_fields(&p);
    let chern = match kitaev::chern_number(&p, a.chern_grid) {
        Ok(v) => json!(v),
        Err(crate::Error::Gapless(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let v = json!({
        "Jx": r12(p.jx), "Jy": r12(p.jy), "Jz": r12(p.jz), "lambda": r12(p.lambda),
        "gap": r12(g),
        "lambda_c": r12(cf.lambda_c),
        "lambda_c1": opt12(cf.lambda_c1),
        "lambda_c2": opt12(cf.lambda_c2),
        "label": kitaev::phase_label(&p).name(),
        "chern": chern,
        "corner_det_residual": r12(kitaev::corner_det_check(&p)),
    });
    emit_json(a.out.as_deref(), &v)
}

fn kitaev_phasediag(a: PhaseDiagArgs) -> CliResult<()> {
    let pts = kitaev::phase_scan(a.lambda, a.res, a.sign, ScanNumerics { gap_grid: a.gap_grid, chern_grid: a.chern_grid })?;
    let text = if a.ternary { kitaev::ternary_csv(&pts) } else { kitaev::scan_csv(&pts) };
    emit(a.out.as_deref(), &text)
}

fn potts_eff(a: PottsEffArgs) -> CliResult<()> {
    let r = potts::effective_xxz(a.j, a.lambda)?;
    // Sign of J_eff folded into the anisotropy seen by the bosonized chain.
    let dt = r.delta * r.j_eff.signum();
    let k = match potts::luttinger_k(dt) {
        Ok(k) => r12(k),
        Err(crate::Error::LuttingerDivergence(_) | crate::Error::OutOfRange(_)) => Value::Null,
        Err(e) => return Err(e.into()),
    };
    let v = json!({
        "J": r12(r.j), "lambda": r12(r.lambda),
        "J_eff": r12(r.j_eff), "Delta": r12(r.delta),
        "nnn_flip": r12(r.nnn_flip), "triple_term": r12(r.triple_term),
        "K": k,
        "threshold_Delta": r12(potts::threshold_delta()),
        "threshold_lambda": opt12(potts::threshold_lambda(a.j).ok()),
    });
    emit_json(a.out.as_deref(), &v)
}

fn potts_validate(a: PottsValidateArgs) -> CliResult<()> {
    let rows = potts::validate_against_ed(a.j, &a.lambdas, a.l, a.boundary)?;
    emit(a.out.as_deref(), &potts::validation_csv(&rows))?;
    if a.check {
        let better = rows.iter().all(|r| r.err_second_order < r.err_first_order);
        let worst = rows.windows(2).map(|w| w[1].err_second_order / w[0].err_second_order).fold(0.0, f64::max);
        if !(better && worst <= 0.3) {
            return Err(CliError::Numeric(format!("err2 < err1 everywhere = {better}, worst err2 ratio = {}", fmt12(worst))));
        }
    }
    Ok(())
}

fn rydberg_cmd(a: RydbergArgs) -> CliResult<()> {
    let input = if let Some(c) = &a.c6 {
        PairInput::C6(C6Triple { c6_nn: c[0], c6_tt: c[1], c6_nt: c[2], r_um: a.r })
    } else if let Some(u) = &a.energies {
        PairInput::Energies { u_nn: u[0], u_tt: u[1], u_nt: u[2] }
    } else if let Some(path) = &a.input {
        let text = read(path)?;
        serde_json::from_str(&text).map_err(|e| crate::Error::Schema { path: path.display().to_string(), message: e.to_string() })?
    } else if let Some(name) = &a.case {
        PairInput::C6(rydberg::c6_case(name)?.at(a.r))
    } else {
        return Err(CliError::Input("give one of --c6, --energies, --in or --case".into()));
    };
    let k = rydberg::couplings(&input.energies()?);
    let v = json!({ "J_pm": r12(k.j_pm), "J_pp": r12(k.j_pp), "phase": r12(k.phase), "ratio": r12(k.ratio()) });
    emit_json(a.out.as_deref(), &v)
}

fn bh_verify(a: BhArgs) -> CliResult<()> {
    let params = match &a.preset {
        Some(p) => PresetParams::from_json(&read(p)?)?,
        None => PresetParams::bundled(a.version),
    };
    params.validate()?;
    let eff = bose_hubbard::effective_kitaev(&params)?;
    let nu0 = bose_hubbard::zero_field_nu(&params)?;
    let mut rows = Vec::new();
    for &ratio in &a.ratios {
        let row = bose_hubbard::verify_small_cluster(params.version, ratio, a.k)?;
        if let Some(w) = &row.warning {
            eprintln!("warning at ratio {}: {w}", fmt12(ratio));
        }
        rows.push(row);
    }
    let v = json!({
        "version": params.version.name(),
        "J": eff.j.map(r12),
        "h": eff.h.map(r12),
        "zero_field_nu": nu0.map(r12),
        "cluster": rows.iter().map(|r| json!({"lambda_ratio": r12(r.lambda_ratio), "mismatch": r12(r.mismatch), "absolute": r12(r.absolute)})).collect::<Vec<_>>(),
    });
    emit_json(a.out.as_deref(), &v)?;
    if a.check {
        let decreasing = rows.windows(2).all(|w| w[1].mismatch < w[0].mismatch);
        let first = rows.first().map(|r| r.mismatch).unwrap_or(f64::INFINITY);
        if !(decreasing && first <= 0.05) {
            return Err(CliError::Numeric(format!("mismatch decreasing = {decreasing}, first = {}", fmt12(first))));
        }
    }
    Ok(())
}
