//! Run and sweep orchestration. Artifacts are rendered in memory first and
//! written afterwards, so a failed run leaves no partial output.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use qnexus_core::arch::{ArchShape, Diagnostic};
use qnexus_core::circuit::generate_rsa_subroutine;
use qnexus_core::estimator::{
    fill_ratios, rsa_estimate, rsa_fidelity, rsa_shot_time, sized_for_width, tabulated_profiles, CompareCell,
    CompareMetrics, SubroutineKind, SubroutineProfile, TABULATED_FIDELITY,
};
use qnexus_core::resources::{count_architecture, ResourceCounts};
use qnexus_core::{compile, ArchitectureSpec, LogicalCircuit, ScheduledProgram};
use rayon::prelude::*;

use crate::config::{arch_to_toml, resolve_arch, ConfigError};
use crate::report::{self, RsaModeReport, RsaReport, Summary};
use crate::workload::Workload;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Text,
}

impl Format {
    pub const ALL: [Format; 3] = [Format::Csv, Format::Json, Format::Text];
}

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("architecture failed validation:\n{}", list(.0))]
    Validation(Vec<Diagnostic>),
    #[error("compile failed: {0}")]
    Compile(String),
    #[error("cannot write `{path}`: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

fn list(d: &[Diagnostic]) -> String {
    d.iter().map(|d| format!("  {d}")).collect::<Vec<_>>().join("\n")
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 2,
            RunError::Validation(_) => 3,
            RunError::Compile(_) => 4,
            RunError::Io { .. } => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub workload: String,
    /// Builtin name or architecture file.
    pub arch: String,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub overrides: Vec<(String, String)>,
    /// Program fidelity for the RSA runtime.
    pub fidelity: Option<f64>,
    /// Resize the architecture to the circuit width, as a sweep does.
    pub fit: bool,
}

/// File name to contents.
pub type Artifacts = BTreeMap<String, String>;

pub fn write_artifacts(dir: &Path, artifacts: &Artifacts) -> Result<(), RunError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| RunError::Io { path, source }
    };
    std::fs::create_dir_all(dir).map_err(io(dir))?;
    for (name, text) in artifacts {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(io(&path))?;
    }
    Ok(())
}

fn check_formats(formats: &[Format]) -> Result<(), ConfigError> {
    if formats.is_empty() {
        return Err(ConfigError::Invalid("at least one output format is required".into()));
    }
    Ok(())
}

fn resolve(arch: &str, overrides: &[(String, String)]) -> Result<ArchitectureSpec, RunError> {
    resolve_arch(arch, overrides)?.map_err(RunError::Validation)
}

fn compile_error(e: impl ToString) -> RunError {
    RunError::Compile(e.to_string())
}

/// A compiled circuit together with its rendered artifacts.
pub struct CircuitRun {
    pub program: ScheduledProgram,
    pub resources: ResourceCounts,
    pub artifacts: Artifacts,
}

pub fn render_circuit(
    label: &str,
    c: &LogicalCircuit,
    spec: &ArchitectureSpec,
    formats: &[Format],
) -> Result<CircuitRun, RunError> {
    let program = compile(c, spec).map_err(compile_error)?;
    let resources = count_architecture(spec).map_err(compile_error)?;
    let mut artifacts = Artifacts::new();
    if formats.contains(&Format::Json) {
        artifacts.insert("summary.json".into(), report::to_json(&Summary::new(label, c, &program, &resources)));
    }
    if formats.contains(&Format::Csv) {
        artifacts.insert("budget.csv".into(), report::budget_csv(&[(label, &program.budget)]));
        artifacts.insert("resources.csv".into(), report::resources_csv(&spec.name, &resources));
    }
    if formats.contains(&Format::Text) {
        artifacts.insert("schedule.txt".into(), report::schedule_text(&program));
        artifacts.insert("arch.toml".into(), arch_to_toml(spec));
    }
    Ok(CircuitRun { program, resources, artifacts })
}

/// RSA runtime from the reference subroutine times and from the three
/// subroutines compiled on `spec`. `fidelity` replaces both the pinned
/// reference fidelity and the one derived from compiled errors.
pub fn render_rsa(spec: &ArchitectureSpec, fidelity: Option<f64>, formats: &[Format]) -> Result<Artifacts, RunError> {
    let tabulated = rsa_estimate(spec, tabulated_profiles(spec), Some(fidelity.unwrap_or(TABULATED_FIDELITY)))
        .map_err(compile_error)?;
    let mut programs = Vec::new();
    let mut profiles = [SubroutineProfile::new(SubroutineKind::Adder, 0.0, 0.0); 3];
    for (slot, kind) in profiles.iter_mut().zip(SubroutineKind::ALL) {
        let p = compile(&generate_rsa_subroutine(kind.circuit_kind()), spec).map_err(compile_error)?;
        *slot = SubroutineProfile::new(kind, p.makespan_s(), p.total_error());
        programs.push((kind.name(), p));
    }
    let compiled_fidelity = fidelity.unwrap_or_else(|| rsa_fidelity(&profiles));
    let compiled = if compiled_fidelity > 0.0 {
        RsaModeReport::from_estimate(&rsa_estimate(spec, profiles, Some(compiled_fidelity)).map_err(compile_error)?)
    } else {
        let shot = rsa_shot_time(&profiles).map_err(compile_error)?;
        RsaModeReport::without_runtime(&profiles, shot, compiled_fidelity)
    };

    let mut artifacts = Artifacts::new();
    if formats.contains(&Format::Json) {
        let r = RsaReport {
            arch: spec.name.clone(),
            runtime_days: tabulated.runtime_days,
            tabulated: RsaModeReport::from_estimate(&tabulated),
            compiled,
            resources: (&tabulated.resources).into(),
        };
        artifacts.insert("rsa.json".into(), report::to_json(&r));
    }
    if formats.contains(&Format::Csv) {
        let budgets: Vec<(&str, &qnexus_core::ErrorBudget)> = programs.iter().map(|(n, p)| (*n, &p.budget)).collect();
        artifacts.insert("budget.csv".into(), report::budget_csv(&budgets));
        artifacts.insert("resources.csv".into(), report::resources_csv(&spec.name, &tabulated.resources));
    }
    if formats.contains(&Format::Text) {
        for (name, p) in &programs {
            artifacts.insert(format!("schedule_{name}.txt"), report::schedule_text(p));
        }
        artifacts.insert("arch.toml".into(), arch_to_toml(spec));
    }
    Ok(artifacts)
}

/// Renders every artifact of one run without touching the disk.
pub fn render_run(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    check_formats(&cfg.formats)?;
    let workload = Workload::parse(&cfg.workload)?;
    if let Some(f) = cfg.fidelity {
        if !(f > 0.0 && f <= 1.0) {
            return Err(ConfigError::Invalid(format!("fidelity must lie in (0, 1], got {f}")).into());
        }
    }
    let spec = resolve(&cfg.arch, &cfg.overrides)?;
    match workload.circuit(&spec)? {
        Some(c) => {
            let spec = if cfg.fit { fitted(&spec, &c)? } else { spec };
            Ok(render_circuit(&workload.to_string(), &c, &spec, &cfg.formats)?.artifacts)
        }
        None => render_rsa(&spec, cfg.fidelity, &cfg.formats),
    }
}

fn fitted(spec: &ArchitectureSpec, c: &LogicalCircuit) -> Result<ArchitectureSpec, RunError> {
    let sized = sized_for_width(spec, c.width() as u32);
    let diagnostics = qnexus_core::arch::validate(&sized);
    if diagnostics.is_empty() {
        Ok(sized)
    } else {
        Err(RunError::Validation(diagnostics))
    }
}

pub fn run(cfg: &RunConfig) -> Result<Artifacts, RunError> {
    let artifacts = render_run(cfg)?;
    write_artifacts(&cfg.out, &artifacts)?;
    Ok(artifacts)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    /// Workload whose size parameter is filled in per cell, e.g. `aqft:k=8`.
    pub workload: String,
    pub sizes: Vec<u32>,
    pub archs: Vec<String>,
    pub out: PathBuf,
    pub formats: Vec<Format>,
    pub overrides: Vec<(String, String)>,
    pub jobs: usize,
}

/// `points` sizes spaced evenly in log scale from `lo` to `hi`, rounded
/// and deduplicated.
pub fn log_sizes(lo: u32, hi: u32, points: usize) -> Vec<u32> {
    if points <= 1 || lo >= hi {
        return vec![lo];
    }
    let (a, b) = ((lo.max(1) as f64).ln(), (hi as f64).ln());
    let mut out: Vec<u32> =
        (0..points).map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp().round() as u32).collect();
    out[0] = lo;
    out[points - 1] = hi;
    out.dedup();
    out
}

fn sanitize(s: &str) -> String {
    s.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

fn sweep_cell(
    template: &str,
    size: u32,
    spec: &ArchitectureSpec,
    formats: &[Format],
) -> Result<(usize, CircuitRun), String> {
    let workload = Workload::parse_sized(template, Some(size)).map_err(|e| e.to_string())?;
    let c = workload.circuit(spec).map_err(|e| e.to_string())?.expect("sized workloads build circuits");
    let spec = fitted(spec, &c).map_err(|e| e.to_string())?;
    let run = render_circuit(&workload.to_string(), &c, &spec, formats).map_err(|e| e.to_string())?;
    Ok((c.width(), run))
}

/// Runs every (size, architecture) cell, writes one artifact set per cell
/// under `cells/` and the merged `comparison.csv`. Architectures that fail
/// to load or validate, and cells that fail to compile, become error rows.
pub fn sweep(cfg: &SweepConfig) -> Result<Vec<CompareCell>, RunError> {
    check_formats(&cfg.formats)?;
    if cfg.sizes.is_empty() || cfg.archs.is_empty() {
        return Err(ConfigError::Invalid("a sweep needs at least one size and one architecture".into()).into());
    }
    Workload::parse_sized(&cfg.workload, Some(cfg.sizes[0]))?;
    let archs: Vec<(String, Result<ArchitectureSpec, String>)> = cfg
        .archs
        .iter()
        .map(|a| match resolve(a, &cfg.overrides) {
            Ok(spec) => (spec.name.clone(), Ok(spec)),
            Err(e) => (a.clone(), Err(e.to_string())),
        })
        .collect();
    let baseline = archs.iter().position(|(_, s)| matches!(s, Ok(s) if s.shape() == ArchShape::Homogeneous));

    let grid: Vec<(u32, usize)> = cfg.sizes.iter().flat_map(|&s| (0..archs.len()).map(move |a| (s, a))).collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs.max(1))
        .build()
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let results: Vec<(CompareCell, Option<Artifacts>)> = pool.install(|| {
        grid.par_iter()
            .map(|&(size, a)| {
                let (name, spec) = &archs[a];
                let outcome = spec.clone().and_then(|spec| sweep_cell(&cfg.workload, size, &spec, &cfg.formats));
                match outcome {
                    Ok((width, run)) => {
                        let p = &run.program;
                        let metrics = CompareMetrics {
                            total_error: p.total_error(),
                            makespan_s: p.makespan_s(),
                            cnot: p.counters.cnot,
                            st: p.counters.st,
                            resources: run.resources,
                            error_ratio: None,
                            qubit_ratio: None,
                        };
                        let cell = CompareCell { size, arch: name.clone(), width, outcome: Ok(metrics) };
                        (cell, Some(run.artifacts))
                    }
                    Err(e) => (CompareCell { size, arch: name.clone(), width: 0, outcome: Err(e) }, None),
                }
            })
            .collect()
    });

    let mut cells = Vec::with_capacity(results.len());
    for (cell, artifacts) in results {
        if let Some(artifacts) = artifacts {
            let dir = cfg.out.join("cells").join(format!("{}_{}", cell.size, sanitize(&cell.arch)));
            write_artifacts(&dir, &artifacts)?;
        }
        cells.push(cell);
    }
    if let Some(b) = baseline {
        for row in cells.chunks_mut(archs.len()) {
            fill_ratios(row, b);
        }
    }
    let mut merged = Artifacts::new();
    merged.insert("comparison.csv".into(), report::comparison_csv(&cells));
    write_artifacts(&cfg.out, &merged)?;
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_spacing() {
        assert_eq!(log_sizes(6, 1000, 1), vec![6]);
        let s = log_sizes(6, 1000, 6);
        assert_eq!(s.first(), Some(&6));
        assert_eq!(s.last(), Some(&1000));
        assert!(s.windows(2).all(|w| w[0] < w[1]));
        let ratios: Vec<f64> = s.windows(2).map(|w| w[1] as f64 / w[0] as f64).collect();
        for r in &ratios {
            assert!((r / ratios[0] - 1.0).abs() < 0.1, "{ratios:?}");
        }
        assert_eq!(log_sizes(1, 3, 10), vec![1, 2, 3]);
    }

    #[test]
    fn exit_codes_are_distinct() {
        let codes = [
            RunError::Config(ConfigError::Invalid(String::new())).exit_code(),
            RunError::Validation(Vec::new()).exit_code(),
            RunError::Compile(String::new()).exit_code(),
        ];
        assert_eq!(codes, [2, 3, 4]);
    }

    #[test]
    fn rendering_is_deterministic() {
        let cfg = RunConfig {
            workload: "aqft:n=12,k=4".into(),
            arch: "A2".into(),
            out: PathBuf::new(),
            formats: Format::ALL.to_vec(),
            overrides: Vec::new(),
            fidelity: None,
            fit: false,
        };
        let a = render_run(&cfg).unwrap();
        assert_eq!(
            a.keys().map(String::as_str).collect::<Vec<_>>(),
            ["arch.toml", "budget.csv", "resources.csv", "schedule.txt", "summary.json"]
        );
        assert_eq!(a, render_run(&cfg).unwrap());
    }

    #[test]
    fn formats_select_artifacts() {
        let mut cfg = RunConfig {
            workload: "adder:bits=3".into(),
            arch: "A1".into(),
            out: PathBuf::new(),
            formats: vec![Format::Json],
            overrides: Vec::new(),
            fidelity: None,
            fit: false,
        };
        assert_eq!(render_run(&cfg).unwrap().keys().collect::<Vec<_>>(), ["summary.json"]);
        cfg.formats.clear();
        assert_eq!(render_run(&cfg).unwrap_err().exit_code(), 2);
    }
}
