//! Side-by-side runs of one workload on several architectures.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::arch::{ArchShape, ArchitectureSpec, ModuleKind};
use crate::circuit::{CircuitError, LogicalCircuit};
use crate::compiler::{compile, ScheduledProgram};
use crate::resources::{count_architecture, ResourceCounts};

#[derive(Clone, Debug, PartialEq)]
pub struct CompareMetrics {
    pub total_error: f64,
    pub makespan_s: f64,
    pub cnot: u64,
    pub st: u64,
    pub resources: ResourceCounts,
    /// Baseline error over this error, when a baseline ran at this size.
    pub error_ratio: Option<f64>,
    /// Baseline qubits over these qubits.
    pub qubit_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompareCell {
    pub size: u32,
    pub arch: String,
    pub width: usize,
    pub outcome: Result<CompareMetrics, String>,
}

/// Copy of `spec` sized for a `width`-qubit circuit.
///
/// A homogeneous processor holds every qubit. Memory tiers hold every
/// qubit as well; when the circuit fits in the processor alone the
/// memories are dropped and the processor shrinks to the circuit.
pub fn sized_for_width(spec: &ArchitectureSpec, width: u32) -> ArchitectureSpec {
    let qpu_cap = spec.qpu().map(|q| q.n_logical).unwrap_or(0);
    match spec.shape() {
        ArchShape::Homogeneous => spec.with_qpu_size(width),
        _ if width <= qpu_cap => {
            let mut s = spec.clone();
            s.modules.retain(|m| matches!(m.kind, ModuleKind::Qpu | ModuleKind::Qsf));
            s.links.clear();
            for q in s.modules.iter_mut().filter_map(|m| m.qpu.as_mut()) {
                q.ls_edges = None;
            }
            s.with_qpu_size(width)
        }
        _ => spec.with_memory_size(width),
    }
}

/// Compiles `c` on `spec` as given and collects the metrics of one cell.
pub fn evaluate(c: &LogicalCircuit, spec: &ArchitectureSpec) -> Result<(ScheduledProgram, CompareMetrics), String> {
    let p = compile(c, spec).map_err(|e| e.to_string())?;
    let resources = count_architecture(spec).map_err(|e| e.to_string())?;
    let metrics = CompareMetrics {
        total_error: p.total_error(),
        makespan_s: p.makespan_s(),
        cnot: p.counters.cnot,
        st: p.counters.st,
        resources,
        error_ratio: None,
        qubit_ratio: None,
    };
    Ok((p, metrics))
}

/// Fills the ratios of `row` against the cell at `baseline`, if it succeeded.
pub fn fill_ratios(row: &mut [CompareCell], baseline: usize) {
    let Some(Ok(base)) = row.get(baseline).map(|c| c.outcome.clone()) else { return };
    for cell in row {
        if let Ok(m) = &mut cell.outcome {
            m.error_ratio = (m.total_error > 0.0).then(|| base.total_error / m.total_error);
            m.qubit_ratio = Some(base.resources.total_qubits() as f64 / m.resources.total_qubits().max(1) as f64);
        }
    }
}

/// Compiles `workload(size)` on every architecture for every size. Ratios
/// are taken against the first homogeneous architecture in `archs`.
/// Failures are reported per cell.
pub fn compare_architectures(
    workload: impl Fn(u32) -> Result<LogicalCircuit, CircuitError>,
    sizes: &[u32],
    archs: &[ArchitectureSpec],
) -> Vec<CompareCell> {
    let baseline = archs.iter().position(|a| a.shape() == ArchShape::Homogeneous);
    let mut out = Vec::new();
    for &size in sizes {
        let circuit = workload(size);
        let start = out.len();
        for spec in archs {
            let (width, outcome) = match &circuit {
                Ok(c) => {
                    let width = c.width();
                    (width, evaluate(c, &sized_for_width(spec, width as u32)).map(|(_, m)| m))
                }
                Err(e) => (0, Err(e.to_string())),
            };
            out.push(CompareCell { size, arch: spec.name.clone(), width, outcome });
        }
        if let Some(b) = baseline {
            fill_ratios(&mut out[start..], b);
        }
    }
    out
}
