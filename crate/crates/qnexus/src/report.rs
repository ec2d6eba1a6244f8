//! Report rendering. Every function returns the artifact text so output
//! is byte-identical for identical inputs.
//!
//! JSON keys that hold numbers end in a unit: `_s`, `_days`, `_prob` or
//! `_count`.

use std::collections::BTreeMap;

use qnexus_core::compiler::Category;
use qnexus_core::estimator::{CompareCell, RsaEstimate, SubroutineProfile};
use qnexus_core::resources::ResourceCounts;
use qnexus_core::time::NANOS_PER_SECOND;
use qnexus_core::{ErrorBudget, LogicalCircuit, ScheduledProgram};
use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BreakdownReport {
    pub logical_count: u64,
    pub memory_count: u64,
    pub interconnect_count: u64,
    pub lattice_surgery_count: u64,
    pub injection_count: u64,
    pub distillation_count: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResourceReport {
    pub qubits_active_count: u64,
    pub qubits_static_count: u64,
    pub qubits_total_count: u64,
    pub couplers_local_count: u64,
    pub couplers_nonlocal_count: u64,
    pub couplers_total_count: u64,
    pub interconnects_count: u64,
    pub breakdown: BreakdownReport,
}

impl From<&ResourceCounts> for ResourceReport {
    fn from(rc: &ResourceCounts) -> Self {
        let b = &rc.breakdown;
        ResourceReport {
            qubits_active_count: rc.qubits_active,
            qubits_static_count: rc.qubits_static,
            qubits_total_count: rc.total_qubits(),
            couplers_local_count: rc.couplers_local,
            couplers_nonlocal_count: rc.couplers_nonlocal,
            couplers_total_count: rc.total_couplers(),
            interconnects_count: rc.interconnects,
            breakdown: BreakdownReport {
                logical_count: b.logical,
                memory_count: b.memory,
                interconnect_count: b.interconnect,
                lattice_surgery_count: b.lattice_surgery,
                injection_count: b.injection,
                distillation_count: b.distillation,
            },
        }
    }
}

/// Share of the total failure probability per category.
pub fn budget_map(b: &ErrorBudget) -> BTreeMap<String, f64> {
    Category::ALL.iter().map(|c| (format!("{}_prob", c.name()), b.mass(*c))).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub arch: String,
    pub workload: String,
    pub logical_qubits_count: usize,
    pub ops_count: usize,
    pub blocks_count: usize,
    pub events_count: usize,
    pub makespan_s: f64,
    pub total_error_prob: f64,
    pub dominant_error: String,
    pub cnot_count: u64,
    pub st_count: u64,
    pub t_count: u64,
    pub swap_count: u64,
    pub error_budget: BTreeMap<String, f64>,
    pub resources: ResourceReport,
    pub diagnostics: Vec<String>,
}

impl Summary {
    pub fn new(workload: &str, c: &LogicalCircuit, p: &ScheduledProgram, rc: &ResourceCounts) -> Summary {
        Summary {
            arch: p.arch.clone(),
            workload: workload.to_string(),
            logical_qubits_count: c.width(),
            ops_count: c.ops.len(),
            blocks_count: p.blocks,
            events_count: p.events.len(),
            makespan_s: p.makespan_s(),
            total_error_prob: p.total_error(),
            dominant_error: p.budget.dominant().name().to_string(),
            cnot_count: p.counters.cnot,
            st_count: p.counters.st,
            t_count: p.counters.t,
            swap_count: p.counters.swap,
            error_budget: budget_map(&p.budget),
            resources: rc.into(),
            diagnostics: p.diagnostics.clone(),
        }
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize to JSON");
    s.push('\n');
    s
}

/// Exact decimal seconds from integer nanoseconds.
fn seconds(ns: u64) -> String {
    let per = NANOS_PER_SECOND as u64;
    format!("{}.{:09}", ns / per, ns % per)
}

/// One line per event, ordered by start time:
/// `t=<s> module=<id> kind=<k> qubits=<list> dur=<s> eps=<p> op=<label>`.
pub fn schedule_text(p: &ScheduledProgram) -> String {
    let mut order: Vec<usize> = (0..p.events.len()).collect();
    order.sort_by_key(|&i| (p.events[i].start_ns, i));
    let mut out = String::new();
    for i in order {
        let e = &p.events[i];
        let qubits: Vec<String> = e.qubits.iter().map(|q| q.to_string()).collect();
        let module = p.modules.get(e.module).map(String::as_str).unwrap_or("?");
        out.push_str(&format!(
            "t={} module={} kind={} qubits={} dur={} eps={:e} op={}\n",
            seconds(e.start_ns),
            module,
            e.kind.name(),
            qubits.join(","),
            seconds(e.duration_ns),
            e.error,
            if e.label.is_empty() { "-" } else { e.label },
        ));
    }
    out
}

fn csv_string(rows: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> csv::Result<()>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    rows(&mut w).expect("writing CSV to memory");
    String::from_utf8(w.into_inner().expect("flushing CSV to memory")).expect("CSV is UTF-8")
}

/// Per-category share and stand-alone probability, one block per program.
pub fn budget_csv(programs: &[(&str, &ErrorBudget)]) -> String {
    csv_string(|w| {
        w.write_record(["program", "category", "mass_prob", "raw_prob"])?;
        for (name, b) in programs {
            for c in Category::ALL {
                w.write_record([*name, c.name(), &format!("{:e}", b.mass(c)), &format!("{:e}", b.raw(c))])?;
            }
            let total = format!("{:e}", b.total());
            w.write_record([*name, "total", &total, &total])?;
        }
        Ok(())
    })
}

pub fn resources_csv(arch: &str, rc: &ResourceCounts) -> String {
    let r = ResourceReport::from(rc);
    let b = &r.breakdown;
    let fields = [
        ("qubits_active", r.qubits_active_count),
        ("qubits_static", r.qubits_static_count),
        ("qubits_total", r.qubits_total_count),
        ("couplers_local", r.couplers_local_count),
        ("couplers_nonlocal", r.couplers_nonlocal_count),
        ("couplers_total", r.couplers_total_count),
        ("interconnects", r.interconnects_count),
        ("breakdown_logical", b.logical_count),
        ("breakdown_memory", b.memory_count),
        ("breakdown_interconnect", b.interconnect_count),
        ("breakdown_lattice_surgery", b.lattice_surgery_count),
        ("breakdown_injection", b.injection_count),
        ("breakdown_distillation", b.distillation_count),
    ];
    csv_string(|w| {
        w.write_record(["arch", "field", "count"])?;
        for (field, value) in fields {
            w.write_record([arch, field, &value.to_string()])?;
        }
        Ok(())
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

/// Merged sweep table. Failed cells keep their row with `status=error`.
pub fn comparison_csv(cells: &[CompareCell]) -> String {
    csv_string(|w| {
        w.write_record([
            "size",
            "arch",
            "width",
            "status",
            "total_error_prob",
            "makespan_s",
            "cnot_count",
            "st_count",
            "qubits_total_count",
            "error_ratio",
            "qubit_ratio",
            "message",
        ])?;
        for c in cells {
            let head = [c.size.to_string(), c.arch.clone(), c.width.to_string()];
            match &c.outcome {
                Ok(m) => w.write_record(head.iter().cloned().chain([
                    "ok".to_string(),
                    format!("{:e}", m.total_error),
                    m.makespan_s.to_string(),
                    m.cnot.to_string(),
                    m.st.to_string(),
                    m.resources.total_qubits().to_string(),
                    opt(m.error_ratio),
                    opt(m.qubit_ratio),
                    String::new(),
                ]))?,
                Err(e) => w.write_record(
                    head.iter()
                        .cloned()
                        .chain(["error".to_string()])
                        .chain((0..7).map(|_| String::new()))
                        .chain([e.clone()]),
                )?,
            }
        }
        Ok(())
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SubroutineReport {
    pub name: String,
    pub tau_s: f64,
    pub occurrences_count: u64,
    pub error_prob: f64,
}

impl From<&SubroutineProfile> for SubroutineReport {
    fn from(p: &SubroutineProfile) -> Self {
        SubroutineReport {
            name: p.kind.name().to_string(),
            tau_s: p.tau_s,
            occurrences_count: p.occurrences,
            error_prob: p.error,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RsaModeReport {
    pub subroutines: Vec<SubroutineReport>,
    pub shot_time_s: f64,
    pub fidelity_prob: f64,
    pub runtime_days: Option<f64>,
    pub qubit_days: Option<f64>,
    pub coupler_days: Option<f64>,
}

impl RsaModeReport {
    pub fn from_estimate(e: &RsaEstimate) -> RsaModeReport {
        RsaModeReport {
            subroutines: e.profiles.iter().map(Into::into).collect(),
            shot_time_s: e.shot_time_s,
            fidelity_prob: e.fidelity,
            runtime_days: Some(e.runtime_days),
            qubit_days: Some(e.costs.qubit_days),
            coupler_days: Some(e.costs.coupler_days),
        }
    }

    /// A mode whose fidelity is zero has no finite runtime.
    pub fn without_runtime(profiles: &[SubroutineProfile], shot_time_s: f64, fidelity: f64) -> RsaModeReport {
        RsaModeReport {
            subroutines: profiles.iter().map(Into::into).collect(),
            shot_time_s,
            fidelity_prob: fidelity,
            runtime_days: None,
            qubit_days: None,
            coupler_days: None,
        }
    }
}

/// Runtime from reference subroutine durations, and from the durations
/// compiled on this architecture.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RsaReport {
    pub arch: String,
    pub runtime_days: f64,
    pub tabulated: RsaModeReport,
    pub compiled: RsaModeReport,
    pub resources: ResourceReport,
}
