use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bellgauge_core::bell::linalg3::norm;
use bellgauge_core::bell::{optimize_settings, Vec3};
use bellgauge_core::explorer::csv::write_records;
use bellgauge_core::explorer::{
    default_target_entropy, family_sweep, find_counterexamples, sample_records, scan_family, GridRange,
    ScanGrid,
};
use bellgauge_core::format::format_sig;
use bellgauge_core::paper::{verify, PaperFixtures, Quantity};
use bellgauge_core::qstate::StateFile;
use bellgauge_core::{
    analyze as analyze_state, chsh_max, chsh_value, entanglement_report, santos_threshold, BellError,
    ChshSettings, DensityMatrix, EntanglementError, ExplorerError, StateError, StateRecord, TracePolicy,
};
use serde::{Deserialize, Serialize};

use crate::output::{fields, to_json, vector};
use crate::{BatchOutput, Format};

#[derive(Debug)]
pub enum Failure {
    Verification(String),
    Invalid(String),
    Parse(String),
    EmptyGrid(String),
    Exhausted(String),
    Io(String),
    Usage(String),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::Parse(_) => 3,
            Failure::EmptyGrid(_) => 4,
            Failure::Exhausted(_) => 5,
            Failure::Io(_) => 6,
            Failure::Usage(_) => 64,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Verification(m)
            | Failure::Invalid(m)
            | Failure::Parse(m)
            | Failure::EmptyGrid(m)
            | Failure::Exhausted(m)
            | Failure::Io(m)
            | Failure::Usage(m) => m,
        }
    }
}

impl From<StateError> for Failure {
    fn from(e: StateError) -> Self {
        Failure::Invalid(format!("invalid state: {e}"))
    }
}

impl From<BellError> for Failure {
    fn from(e: BellError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<EntanglementError> for Failure {
    fn from(e: EntanglementError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<ExplorerError> for Failure {
    fn from(e: ExplorerError) -> Self {
        let message = e.to_string();
        match e {
            ExplorerError::EmptyGrid => Failure::EmptyGrid(message),
            ExplorerError::SearchExhausted { best, .. } => match best {
                Some(b) => Failure::Exhausted(format!(
                    "{message}; best candidate s12 = {}, chsh_max = {}",
                    format_sig(b.s12),
                    format_sig(b.chsh_max)
                )),
                None => Failure::Exhausted(message),
            },
            ExplorerError::InvalidGrid(_) | ExplorerError::InvalidArgument(_) | ExplorerError::NoRoot { .. } => {
                Failure::Usage(message)
            }
            ExplorerError::InfeasibleParams(_)
            | ExplorerError::State(_)
            | ExplorerError::Bell(_)
            | ExplorerError::Entanglement(_) => Failure::Invalid(message),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Io(format!("{}: {e}", path.display()))
}

fn require(format: Format, allowed: &[Format], command: &str) -> Result<(), Failure> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(
            format!("{command} does not support --format {format:?}").to_lowercase(),
        ))
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    serde_json::from_str(&text).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path, policy: TracePolicy) -> Result<(DensityMatrix, Option<String>), Failure> {
    let file: StateFile = read_json(path)?;
    let rho = DensityMatrix::validate(&file.to_matrix(), policy)?;
    Ok((rho, file.label))
}

#[derive(Deserialize)]
struct SettingsFile {
    a: Vec3,
    a_prime: Vec3,
    b: Vec3,
    b_prime: Vec3,
}

/// Directions printed with nine significant digits miss unit norm by up to
/// about `1e-9`; within this slack they are rescaled instead of rejected.
const FILE_NORM_TOL: f64 = 1e-8;

fn load_settings(path: &Path) -> Result<ChshSettings, Failure> {
    let f: SettingsFile = read_json(path)?;
    let near_unit = [f.a, f.a_prime, f.b, f.b_prime]
        .iter()
        .all(|v| (norm(v) - 1.0).abs() <= FILE_NORM_TOL);
    let settings = if near_unit {
        ChshSettings::normalized(f.a, f.a_prime, f.b, f.b_prime)
    } else {
        ChshSettings::new(f.a, f.a_prime, f.b, f.b_prime)
    };
    Ok(settings?)
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut stdout = io::stdout().lock();
    stdout
        .write_all(text.as_bytes())
        .and_then(|_| stdout.flush())
        .map_err(|e| Failure::Io(format!("stdout: {e}")))
}

#[derive(Serialize)]
struct AnalyzeReport {
    #[serde(flatten)]
    record: StateRecord,
    min_pt_eigenvalue: f64,
    is_ppt: bool,
    eigenvalues: [f64; 4],
}

pub fn analyze(path: &Path, policy: TracePolicy, format: Format) -> Result<(), Failure> {
    require(format, &[Format::Text, Format::Json], "analyze")?;
    let (rho, label) = load_state(path, policy)?;
    let mut record = analyze_state(&rho)?;
    record.label = label.unwrap_or_default();
    let ent = entanglement_report(&rho)?;
    let report = AnalyzeReport {
        record,
        min_pt_eigenvalue: ent.min_pt_eigenvalue,
        is_ppt: ent.is_ppt,
        eigenvalues: rho.eigenvalues(),
    };
    let text = match format {
        Format::Json => to_json(&report),
        _ => {
            let r = &report.record;
            fields(&[
                ("label", r.label.clone()),
                ("s12", format_sig(r.s12)),
                ("s_norm", format_sig(r.s_norm)),
                ("concurrence", format_sig(r.concurrence)),
                ("chsh_max", format_sig(r.chsh_max)),
                ("satisfies_santos", r.satisfies_santos.to_string()),
                ("violates_chsh", r.violates_chsh.to_string()),
                ("min_pt_eigenvalue", format_sig(report.min_pt_eigenvalue)),
                ("is_ppt", report.is_ppt.to_string()),
                ("eigenvalues", vector(&report.eigenvalues)),
            ])
        }
    };
    emit(&text)
}

fn quantity(q: Quantity) -> String {
    match q {
        Quantity::Number(x) => format_sig(x),
        Quantity::Flag(b) => b.to_string(),
    }
}

pub fn verify_paper(format: Format, perturb: Option<f64>) -> Result<(), Failure> {
    require(format, &[Format::Text, Format::Json], "verify-paper")?;
    let fixtures = match perturb {
        Some(eps) => PaperFixtures::perturbed(eps)?,
        None => PaperFixtures::load(),
    };
    let report = verify(&fixtures)?;
    let verdict = format!("Santos Theorem 1 refuted: {}", report.refuted);

    match format {
        Format::Json => {
            emit(&to_json(&report.checks))?;
            eprintln!("{verdict}");
        }
        _ => {
            let width = report.checks.iter().map(|c| c.check.len()).max().unwrap_or(0);
            let mut text = String::new();
            for c in &report.checks {
                let status = if c.pass { "PASS" } else { "FAIL" };
                text.push_str(&format!(
                    "{status}  {:<width$}  expected {}  actual {}",
                    c.check,
                    quantity(c.expected),
                    quantity(c.actual)
                ));
                if let Some(d) = c.delta() {
                    text.push_str(&format!("  delta {}", format_sig(d)));
                }
                text.push('\n');
            }
            text.push_str(&verdict);
            text.push('\n');
            emit(&text)?;
        }
    }

    if report.refuted {
        return Ok(());
    }
    let failed: Vec<String> = report
        .checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| match c.delta() {
            Some(d) => format!("{} (delta {})", c.check, format_sig(d)),
            None => c.check.clone(),
        })
        .collect();
    Err(Failure::Verification(format!("failed checks: {}", failed.join(", "))))
}

#[derive(Serialize)]
struct ChshReport {
    value: f64,
    abs_value: f64,
    chsh_max: f64,
}

pub fn chsh(state: &Path, policy: TracePolicy, settings: &Path, format: Format) -> Result<(), Failure> {
    require(format, &[Format::Text, Format::Json], "chsh")?;
    let (rho, _) = load_state(state, policy)?;
    let settings = load_settings(settings)?;
    let value = chsh_value(&rho, &settings);
    let report = ChshReport {
        value,
        abs_value: value.abs(),
        chsh_max: chsh_max(&rho)?.chsh_max,
    };
    let text = match format {
        Format::Json => to_json(&report),
        _ => fields(&[
            ("value", format_sig(report.value)),
            ("abs_value", format_sig(report.abs_value)),
            ("chsh_max", format_sig(report.chsh_max)),
        ]),
    };
    emit(&text)
}

#[derive(Serialize)]
struct OptimizeReport {
    settings: ChshSettings,
    value: f64,
    abs_value: f64,
    chsh_max: f64,
    sweeps: usize,
    degenerate: bool,
}

pub fn optimize(state: &Path, policy: TracePolicy, budget: usize, format: Format) -> Result<(), Failure> {
    require(format, &[Format::Text, Format::Json], "optimize")?;
    let (rho, _) = load_state(state, policy)?;
    let opt = optimize_settings(&rho, budget)?;
    let report = OptimizeReport {
        settings: opt.settings,
        value: opt.value,
        abs_value: opt.abs_value(),
        chsh_max: chsh_max(&rho)?.chsh_max,
        sweeps: opt.sweeps,
        degenerate: opt.degenerate,
    };
    let text = match format {
        Format::Json => to_json(&report),
        _ => {
            let s = &report.settings;
            fields(&[
                ("value", format_sig(report.value)),
                ("abs_value", format_sig(report.abs_value)),
                ("chsh_max", format_sig(report.chsh_max)),
                ("sweeps", report.sweeps.to_string()),
                ("degenerate", report.degenerate.to_string()),
                ("a", vector(&s.a())),
                ("a_prime", vector(&s.a_prime())),
                ("b", vector(&s.b())),
                ("b_prime", vector(&s.b_prime())),
            ])
        }
    };
    emit(&text)
}

fn write_batch(records: &[StateRecord], out: &BatchOutput) -> Result<(), Failure> {
    let write = |w: &mut dyn Write| -> io::Result<()> {
        match out.format {
            Format::Json => {
                w.write_all(to_json(&records).as_bytes())?;
                w.flush()
            }
            _ => write_records(w, records),
        }
    };
    match &out.output {
        Some(path) => {
            let file = File::create(path).map_err(|e| io_failure(path, e))?;
            write(&mut BufWriter::new(file)).map_err(|e| io_failure(path, e))?;
        }
        None => write(&mut io::stdout().lock()).map_err(|e| Failure::Io(format!("stdout: {e}")))?,
    }

    let violating = records.iter().filter(|r| r.violates_chsh).count();
    let best = records.iter().map(|r| r.chsh_max).fold(f64::NEG_INFINITY, f64::max);
    let target = out.output.as_ref().map_or("stdout".to_string(), |p| p.display().to_string());
    eprintln!(
        "{} states, {violating} violating CHSH, max chsh_max {} -> {target}",
        records.len(),
        format_sig(best)
    );
    Ok(())
}

fn require_batch(out: &BatchOutput, command: &str) -> Result<(), Failure> {
    require(out.format, &[Format::Csv, Format::Json], command)
}

pub fn scan(c: GridRange, p22: GridRange, p44: GridRange, p11: f64, out: &BatchOutput) -> Result<(), Failure> {
    require_batch(out, "scan")?;
    let grid = ScanGrid { c_range: c, p22_range: p22, p44_range: p44, p11 };
    write_batch(&scan_family(&grid)?, out)
}

pub fn sample(count: usize, rank: usize, seed: u64, out: &BatchOutput) -> Result<(), Failure> {
    require_batch(out, "sample")?;
    write_batch(&sample_records(seed, count, rank)?, out)
}

pub fn family(points: usize, entropy: Option<f64>, out: &BatchOutput) -> Result<(), Failure> {
    require_batch(out, "family")?;
    let target = entropy.unwrap_or_else(default_target_entropy);
    let records = family_sweep(points, target)?
        .iter()
        .map(|p| p.record())
        .collect::<Result<Vec<_>, _>>()?;
    write_batch(&records, out)
}

pub fn search(threshold: Option<f64>, count: usize, seed: u64, out: &BatchOutput) -> Result<(), Failure> {
    require_batch(out, "search")?;
    let threshold = threshold.unwrap_or_else(santos_threshold);
    write_batch(&find_counterexamples(threshold, count, seed)?, out)
}
