//! Structural and numeric checks on architecture specs.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{ArchitectureSpec, CodeFamily, LinkProtocol, ModuleKind, ModuleSpec};

/// One violated invariant, naming the offending field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub message: String,
}

impl core::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

struct Sink(Vec<Diagnostic>);

impl Sink {
    fn push(&mut self, field: String, message: impl Into<String>) {
        self.0.push(Diagnostic { field, message: message.into() });
    }

    fn check(&mut self, ok: bool, field: impl FnOnce() -> String, message: &str) {
        if !ok {
            self.push(field(), message);
        }
    }
}

fn is_probability(x: f64) -> bool {
    (0.0..1.0).contains(&x)
}

fn check_module(m: &ModuleSpec, out: &mut Sink) {
    let f = |name: &str| format!("{}.{}", m.id, name);
    let code = &m.code;
    match code.family {
        CodeFamily::Surface => {
            out.check(
                code.distance >= 3 && code.distance % 2 == 1,
                || f("code.distance"),
                "surface code distance must be odd and at least 3",
            );
        }
        CodeFamily::GrossBb => {
            out.check(
                m.n_logical.is_multiple_of(code.logical_per_block()),
                || f("n_logical"),
                "gross code memories store whole blocks of 12 logical qubits",
            );
            out.check(code.distance == 12, || f("code.distance"), "gross code distance is 12");
        }
        CodeFamily::Repetition | CodeFamily::None => {
            out.check(code.distance >= 1, || f("code.distance"), "distance must be positive");
        }
    }
    out.check(code.c_anc >= 0.0, || f("code.c_anc"), "ancilla overhead must be non-negative");
    out.check(code.prefactor > 0.0, || f("code.prefactor"), "prefactor must be positive");

    let md = &m.modality;
    out.check(
        md.p_phys > 0.0 && md.p_phys < md.p_th && md.p_th < 1.0,
        || f("modality.p_phys"),
        "threshold ordering 0 < p_phys < p_th < 1 violated",
    );
    out.check(
        md.t_cycle_min_s >= 0.0 && md.t_cycle_min_s <= md.t_cycle_max_s,
        || f("modality.t_cycle_min_s"),
        "cycle range must satisfy 0 <= t_cycle_min_s <= t_cycle_max_s",
    );
    out.check(
        md.t1_s > 0.0 && md.t2_s > 0.0 && md.t2_s <= 2.0 * md.t1_s,
        || f("modality.t2_s"),
        "coherence times must be positive with t2 <= 2 t1",
    );

    match m.kind {
        ModuleKind::Qpu => match &m.qpu {
            None => out.push(f("qpu"), "processor parameters missing"),
            Some(q) => {
                out.check(q.cores >= 1, || f("qpu.cores"), "at least one core required");
                out.check(
                    q.cores >= 1 && m.n_logical.is_multiple_of(q.cores.max(1)),
                    || f("n_logical"),
                    "logical qubits must split evenly across cores",
                );
                out.check(m.core_capacity() >= 2, || f("n_logical"), "each core needs at least 2 logical qubits");
                out.check(is_probability(q.eps_2q), || f("qpu.eps_2q"), "must be a probability");
                out.check(
                    m.modality.t_cycle_min_s > 0.0,
                    || f("modality.t_cycle_min_s"),
                    "processor cycle must be positive",
                );
            }
        },
        ModuleKind::Qsf => match &m.qsf {
            None => out.push(f("qsf"), "factory parameters missing"),
            Some(q) => {
                out.check(q.n_mf_per_qpu > 0.0, || f("qsf.n_mf_per_qpu"), "must be positive");
                out.check(q.injection_cycles >= 1, || f("qsf.injection_cycles"), "must be at least 1");
                out.check(is_probability(q.eps_state), || f("qsf.eps_state"), "must be a probability");
            }
        },
        ModuleKind::Asqpu => match &m.asqpu {
            None => out.push(f("asqpu"), "accelerator parameters missing"),
            Some(a) => {
                out.check(!a.specialty.is_empty(), || f("asqpu.specialty"), "must name a subroutine tag");
                out.check(a.cnot_cycles >= 1, || f("asqpu.cnot_cycles"), "must be at least 1");
                out.check(a.ccz_factories >= 1, || f("asqpu.ccz_factories"), "must be at least 1");
                out.check(m.n_logical >= 2, || f("n_logical"), "needs at least 2 logical qubits");
            }
        },
        ModuleKind::Raqm => {
            out.check(m.raqm.is_some(), || f("raqm"), "memory parameters missing");
            out.check(
                m.modality.t_cycle_min_s > 0.0,
                || f("modality.t_cycle_min_s"),
                "active memory needs a positive cycle",
            );
        }
        ModuleKind::Stqm => {}
        ModuleKind::Qb => match &m.qb {
            None => out.push(f("qb"), "bus parameters missing"),
            Some(q) => {
                out.check(q.n_anc_pump == 1 || q.n_anc_pump == 2, || f("qb.n_anc_pump"), "must be 1 or 2");
                out.check(q.bell_rate_hz > 0.0, || f("qb.bell_rate_hz"), "must be positive");
                out.check(is_probability(q.bell_error), || f("qb.bell_error"), "must be a probability");
                out.check(is_probability(q.eps_tele), || f("qb.eps_tele"), "must be a probability");
            }
        },
    }
}

/// Returns every violated invariant; empty means the spec is valid.
pub fn validate(spec: &ArchitectureSpec) -> Vec<Diagnostic> {
    let mut out = Sink(Vec::new());
    let mut ids = BTreeSet::new();
    for m in &spec.modules {
        if !ids.insert(m.id.as_str()) {
            out.push(format!("modules.{}", m.id), "duplicate module id");
        }
        check_module(m, &mut out);
    }
    let qpus = spec.of_kind(ModuleKind::Qpu).count();
    out.check(qpus == 1, || "modules".into(), "exactly one qpu module required");
    out.check(spec.of_kind(ModuleKind::Qsf).count() == 1, || "modules".into(), "exactly one qsf module required");
    let has_memory = spec.memories().next().is_some();
    if has_memory {
        out.check(spec.qb_params().is_some(), || "modules".into(), "memory tiers need a qb module");
    }

    for (i, l) in spec.links.iter().enumerate() {
        let field = || format!("links[{i}]");
        let a = spec.module(&l.a);
        let b = spec.module(&l.b);
        if a.is_none() || b.is_none() {
            out.push(field(), format!("unknown endpoint `{}` or `{}`", l.a, l.b));
            continue;
        }
        let (a, b) = (a.unwrap(), b.unwrap());
        let kinds = [a.kind, b.kind];
        let compute = kinds.iter().any(|k| matches!(k, ModuleKind::Qpu | ModuleKind::Asqpu));
        let memory = kinds.iter().any(|k| k.is_memory());
        out.check(compute && memory, field, "links join a processor to a memory");
        if kinds.contains(&ModuleKind::Stqm) {
            out.check(
                l.protocol == LinkProtocol::Transversal,
                field,
                "protocol incompatible: static memories only support transversal transfer",
            );
        }
    }
    for m in spec.memories() {
        out.check(
            spec.link("qpu", &m.id).is_some() || spec.links.iter().any(|l| l.a == m.id || l.b == m.id),
            || format!("modules.{}", m.id),
            "memory is not linked to any processor",
        );
    }
    out.0
}
