//! Declarative architecture descriptions.
//!
//! An [`ArchitectureSpec`] is a list of modules (processors, factories,
//! memories and the bus) plus the links between them. Derived quantities such
//! as the boundary sizes are always computed on demand.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

mod builtins;
mod validate;

pub use builtins::{all_builtins, builtin_architecture, BUILTIN_NAMES};
pub use validate::{validate, Diagnostic};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeFamily {
    Surface,
    GrossBb,
    Repetition,
    None,
}

/// Logical qubits stored per gross-code block.
pub const GROSS_LOGICAL_PER_BLOCK: u32 = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSpec {
    pub family: CodeFamily,
    pub distance: u32,
    /// Ancilla qubits per data qubit used for syndrome extraction.
    pub c_anc: f64,
    /// Prefactor of the logical error scaling law.
    pub prefactor: f64,
}

impl CodeSpec {
    pub fn surface(distance: u32) -> Self {
        CodeSpec { family: CodeFamily::Surface, distance, c_anc: 1.0, prefactor: 0.03 }
    }

    /// Physical-qubit encoding without active correction, sized by `distance`.
    pub fn passive(distance: u32) -> Self {
        CodeSpec { family: CodeFamily::None, distance, c_anc: 0.0, prefactor: 0.03 }
    }

    pub fn gross() -> Self {
        CodeSpec { family: CodeFamily::GrossBb, distance: 12, c_anc: 1.0, prefactor: 0.03 }
    }

    pub fn logical_per_block(&self) -> u32 {
        match self.family {
            CodeFamily::GrossBb => GROSS_LOGICAL_PER_BLOCK,
            _ => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModalitySpec {
    pub name: String,
    /// Physical error per operation.
    pub p_phys: f64,
    /// Threshold of the code run on this modality.
    pub p_th: f64,
    pub t_cycle_min_s: f64,
    pub t_cycle_max_s: f64,
    pub t1_s: f64,
    pub t2_s: f64,
}

impl ModalitySpec {
    pub fn bias(&self) -> f64 {
        self.t1_s / self.t2_s
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModuleKind {
    Qpu,
    Qsf,
    Asqpu,
    Stqm,
    Raqm,
    Qb,
}

impl ModuleKind {
    pub fn name(&self) -> &'static str {
        match self {
            ModuleKind::Qpu => "qpu",
            ModuleKind::Qsf => "qsf",
            ModuleKind::Asqpu => "asqpu",
            ModuleKind::Stqm => "stqm",
            ModuleKind::Raqm => "raqm",
            ModuleKind::Qb => "qb",
        }
    }

    pub fn is_memory(&self) -> bool {
        matches!(self, ModuleKind::Stqm | ModuleKind::Raqm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MagicState {
    T,
    Ccz,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QpuParams {
    /// Independently schedulable cores; each holds `n_logical / cores` qubits.
    pub cores: u32,
    /// Logical two-qubit gate error.
    pub eps_2q: f64,
    /// Lattice-surgery edges; `None` means two per logical qubit.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ls_edges: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QsfParams {
    pub state: MagicState,
    /// Physical qubits per distillation unit, in units of d^2.
    pub n_dist: u32,
    /// Factories per QPU logical qubit.
    pub n_mf_per_qpu: f64,
    /// QPU cycles a factory needs to produce one state.
    pub injection_cycles: u32,
    /// Error of one delivered magic state.
    pub eps_state: f64,
    /// Footprint rows of size (4d^2 + 2d) per QPU logical qubit, for CCZ factories.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ccz_rows_per_qpu: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsqpuParams {
    /// Subroutine tag this processor accelerates.
    pub specialty: String,
    /// Cycles of a transversal CNOT.
    pub cnot_cycles: u32,
    pub ccz_factories: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RaqmParams {
    /// Maximum swap distance from a storage patch to a transfer patch.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k_swap: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transfer_code: Option<CodeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_transfer: Option<u32>,
    /// Physical qubits per stored logical qubit for gross-code memories.
    #[serde(default = "gross_qubits_default")]
    pub gross_qubits_per_lq: f64,
    #[serde(default = "gross_local_default")]
    pub gross_local_couplers_per_lq: f64,
    #[serde(default = "gross_nonlocal_default")]
    pub gross_nonlocal_couplers_per_lq: f64,
}

fn gross_qubits_default() -> f64 {
    24.0
}
fn gross_local_default() -> f64 {
    48.0
}
fn gross_nonlocal_default() -> f64 {
    24.0
}

impl Default for RaqmParams {
    fn default() -> Self {
        RaqmParams {
            k_swap: None,
            transfer_code: None,
            n_transfer: None,
            gross_qubits_per_lq: gross_qubits_default(),
            gross_local_couplers_per_lq: gross_local_default(),
            gross_nonlocal_couplers_per_lq: gross_nonlocal_default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QbParams {
    /// Stored Bell-pair halves per link rail.
    pub n_buf: u32,
    /// Ancilla pairs consumed per purified pair.
    pub n_anc_pump: u32,
    pub bell_rate_hz: f64,
    pub bell_error: f64,
    /// Teleportation error after purification.
    pub eps_tele: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub id: String,
    pub kind: ModuleKind,
    pub n_logical: u32,
    pub code: CodeSpec,
    pub modality: ModalitySpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qpu: Option<QpuParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qsf: Option<QsfParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub asqpu: Option<AsqpuParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raqm: Option<RaqmParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qb: Option<QbParams>,
}

impl ModuleSpec {
    pub fn distance(&self) -> u32 {
        self.code.distance
    }

    pub fn cores(&self) -> u32 {
        self.qpu.as_ref().map(|q| q.cores.max(1)).unwrap_or(1)
    }

    /// Logical qubits per schedulable core.
    pub fn core_capacity(&self) -> u32 {
        self.n_logical / self.cores()
    }

    /// Nominal QEC cycle time in seconds.
    pub fn cycle_s(&self) -> f64 {
        self.modality.t_cycle_min_s
    }

    /// Logical error per QEC cycle of this module's code on its modality.
    pub fn eps_cycle(&self) -> f64 {
        crate::qec::logical_error_per_cycle(
            self.modality.p_phys,
            self.modality.p_th,
            self.code.distance,
            self.code.prefactor,
        )
        .unwrap_or(1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LinkProtocol {
    Transversal,
    LatticeSurgery,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkSpec {
    pub a: String,
    pub b: String,
    pub protocol: LinkProtocol,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchitectureSpec {
    pub name: String,
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub links: Vec<LinkSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ArchError {
    #[error("unknown builtin architecture `{0}`")]
    UnknownBuiltin(String),
    #[error("architecture has no {0} module")]
    MissingModule(&'static str),
    #[error("no module with id `{0}`")]
    UnknownModule(String),
    #[error("module `{0}` is missing its {1} parameters")]
    MissingParams(String, &'static str),
    #[error("no link between `{0}` and `{1}`")]
    MissingLink(String, String),
    #[error("link `{0}`-`{1}`: {2}")]
    ProtocolMismatch(String, String, &'static str),
    #[error("unsupported architecture shape: {0}")]
    UnsupportedShape(String),
}

/// Boundary quantities between a processor tier and a memory tier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Boundary {
    pub n_bdry: u32,
    pub d_bdry: u32,
    pub d_time: u32,
}

/// Pure boundary rule: two interconnects per processor logical qubit and one
/// per memory logical qubit.
pub fn boundary(n_qpu: u32, n_qm: u32, d_qpu: u32, d_qm: u32) -> Boundary {
    Boundary { n_bdry: 2 * n_qpu + n_qm, d_bdry: d_qpu.min(d_qm), d_time: d_qpu.max(d_qm) }
}

/// Coarse architecture families, used to pick resource formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArchShape {
    Homogeneous,
    Stqm,
    Raqm,
    RsaExtended,
}

impl ArchitectureSpec {
    pub fn module(&self, id: &str) -> Option<&ModuleSpec> {
        self.modules.iter().find(|m| m.id == id)
    }

    pub fn module_index(&self, id: &str) -> Option<usize> {
        self.modules.iter().position(|m| m.id == id)
    }

    pub fn first_of(&self, kind: ModuleKind) -> Option<&ModuleSpec> {
        self.modules.iter().find(|m| m.kind == kind)
    }

    pub fn of_kind(&self, kind: ModuleKind) -> impl Iterator<Item = &ModuleSpec> {
        self.modules.iter().filter(move |m| m.kind == kind)
    }

    pub fn qpu(&self) -> Result<&ModuleSpec, ArchError> {
        self.first_of(ModuleKind::Qpu).ok_or(ArchError::MissingModule("qpu"))
    }

    pub fn memories(&self) -> impl Iterator<Item = &ModuleSpec> {
        self.modules.iter().filter(|m| m.kind.is_memory())
    }

    pub fn link(&self, a: &str, b: &str) -> Option<&LinkSpec> {
        self.links.iter().find(|l| (l.a == a && l.b == b) || (l.a == b && l.b == a))
    }

    pub fn qb_params(&self) -> Option<&QbParams> {
        self.first_of(ModuleKind::Qb).and_then(|m| m.qb.as_ref())
    }

    /// Boundary between the QPU and memory module `qm_id`.
    pub fn derive_boundary(&self, qm_id: &str) -> Result<Boundary, ArchError> {
        let qpu = self.qpu()?;
        let qm = self.module(qm_id).ok_or_else(|| ArchError::UnknownModule(qm_id.into()))?;
        if !qm.kind.is_memory() {
            return Err(ArchError::MissingModule("memory"));
        }
        Ok(boundary(qpu.n_logical, qm.n_logical, qpu.distance(), qm.distance()))
    }

    pub fn shape(&self) -> ArchShape {
        let stqm = self.of_kind(ModuleKind::Stqm).count();
        let raqm = self.of_kind(ModuleKind::Raqm).count();
        let ccz = self
            .first_of(ModuleKind::Qsf)
            .and_then(|m| m.qsf.as_ref())
            .map(|q| q.state == MagicState::Ccz)
            .unwrap_or(false);
        let asqpu = self.first_of(ModuleKind::Asqpu).is_some();
        if stqm + raqm == 0 && !asqpu {
            ArchShape::Homogeneous
        } else if ccz || asqpu || (stqm > 0 && raqm > 0) {
            ArchShape::RsaExtended
        } else if stqm > 0 {
            ArchShape::Stqm
        } else {
            ArchShape::Raqm
        }
    }

    /// Copy of this spec with every memory tier resized to hold `n` qubits.
    pub fn with_memory_size(&self, n: u32) -> ArchitectureSpec {
        let mut s = self.clone();
        for m in s.modules.iter_mut().filter(|m| m.kind.is_memory()) {
            m.n_logical = n;
        }
        s
    }

    /// Copy of a homogeneous spec with the processor resized to `n` qubits.
    pub fn with_qpu_size(&self, n: u32) -> ArchitectureSpec {
        let mut s = self.clone();
        if let Some(m) = s.modules.iter_mut().find(|m| m.kind == ModuleKind::Qpu) {
            m.n_logical = n;
        }
        s.name = format!("{}@{}", self.name, n);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_rule() {
        assert_eq!(boundary(3, 1000, 15, 9), Boundary { n_bdry: 1006, d_bdry: 9, d_time: 15 });
        assert_eq!(boundary(3, 1000, 15, 15), Boundary { n_bdry: 1006, d_bdry: 15, d_time: 15 });
    }

    #[test]
    fn shapes_of_builtins() {
        let shape = |n: &str| builtin_architecture(n).unwrap().shape();
        assert_eq!(shape("baseline1000"), ArchShape::Homogeneous);
        assert_eq!(shape("Mono"), ArchShape::Homogeneous);
        assert_eq!(shape("A1"), ArchShape::Stqm);
        assert_eq!(shape("A2"), ArchShape::Raqm);
        assert_eq!(shape("A3"), ArchShape::Raqm);
        for b in ["B1", "B2", "B3", "B4", "B5", "B6"] {
            assert_eq!(shape(b), ArchShape::RsaExtended, "{b}");
        }
    }

    #[test]
    fn derive_boundary_needs_memory() {
        let a2 = builtin_architecture("A2").unwrap();
        let b = a2.derive_boundary("raqm").unwrap();
        assert_eq!((b.n_bdry, b.d_bdry, b.d_time), (1006, 9, 15));
        assert!(a2.derive_boundary("qpu").is_err());
        assert!(a2.derive_boundary("nope").is_err());
        let base = builtin_architecture("baseline1000").unwrap();
        assert!(base.derive_boundary("stqm").is_err());
    }
}
