//! Closed-form physical resource counts.

use core::ops::Add;

use serde::{Deserialize, Serialize};

use crate::arch::{boundary, ArchError, ArchShape, ArchitectureSpec, CodeFamily, LinkProtocol, ModuleKind, ModuleSpec};

pub mod placement;

pub use placement::{place_transfer_patches, placement, TransferLayout};

/// Physical qubits split by what they are used for.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Breakdown {
    /// Processor data qubits and stabilizer ancillas.
    pub logical: u64,
    /// Memory and cache storage, including transfer patches.
    pub memory: u64,
    pub interconnect: u64,
    /// Lattice-surgery routing space and other Clifford overhead.
    pub lattice_surgery: u64,
    pub injection: u64,
    /// Magic-state factories.
    pub distillation: u64,
}

impl Breakdown {
    pub fn total(&self) -> u64 {
        self.logical + self.memory + self.interconnect + self.lattice_surgery + self.injection + self.distillation
    }
}

impl Add for Breakdown {
    type Output = Breakdown;
    fn add(self, o: Breakdown) -> Breakdown {
        Breakdown {
            logical: self.logical + o.logical,
            memory: self.memory + o.memory,
            interconnect: self.interconnect + o.interconnect,
            lattice_surgery: self.lattice_surgery + o.lattice_surgery,
            injection: self.injection + o.injection,
            distillation: self.distillation + o.distillation,
        }
    }
}

/// Physical resource totals. Interconnect qubits are part of the active count.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResourceCounts {
    pub qubits_active: u64,
    pub qubits_static: u64,
    pub couplers_local: u64,
    pub couplers_nonlocal: u64,
    pub interconnects: u64,
    pub breakdown: Breakdown,
}

impl ResourceCounts {
    pub fn total_qubits(&self) -> u64 {
        self.qubits_active + self.qubits_static
    }

    pub fn total_couplers(&self) -> u64 {
        self.couplers_local + self.couplers_nonlocal
    }
}

impl Add for ResourceCounts {
    type Output = ResourceCounts;
    fn add(self, o: ResourceCounts) -> ResourceCounts {
        ResourceCounts {
            qubits_active: self.qubits_active + o.qubits_active,
            qubits_static: self.qubits_static + o.qubits_static,
            couplers_local: self.couplers_local + o.couplers_local,
            couplers_nonlocal: self.couplers_nonlocal + o.couplers_nonlocal,
            interconnects: self.interconnects + o.interconnects,
            breakdown: self.breakdown + o.breakdown,
        }
    }
}

/// Per-resource weights of the space-cost model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub active: f64,
    pub static_: f64,
    pub local_coupler: f64,
    pub nonlocal_coupler: f64,
    pub interconnect: f64,
}

impl CostWeights {
    /// Weights under which the cost is the plain physical qubit count.
    pub const QUBITS: CostWeights =
        CostWeights { active: 1.0, static_: 1.0, local_coupler: 0.0, nonlocal_coupler: 0.0, interconnect: 0.0 };

    /// Connection weights used for the coupler-time cost of the RSA study.
    pub const CONNECTIONS: CostWeights =
        CostWeights { active: 0.0, static_: 0.0, local_coupler: 1.0, nonlocal_coupler: 4.0, interconnect: 0.5 };
}

pub fn space_cost(rc: &ResourceCounts, w: &CostWeights) -> f64 {
    w.active * rc.qubits_active as f64
        + w.static_ * rc.qubits_static as f64
        + w.local_coupler * rc.couplers_local as f64
        + w.nonlocal_coupler * rc.couplers_nonlocal as f64
        + w.interconnect * rc.interconnects as f64
}

fn round(x: f64) -> u64 {
    libm::round(x.max(0.0)) as u64
}

/// Monolithic surface-code processor with embedded factories. Every qubit is
/// actively corrected and carries two local couplers. Injection sites are
/// only counted when a factory exists.
pub fn count_homogeneous(n: u64, d: u64, c_anc: f64, n_edges: u64, n_mf: f64, n_dist: u64) -> ResourceCounts {
    let logical = round(n as f64 * (1.0 + c_anc) * (d * d) as f64);
    let lattice_surgery = 2 * n_edges * d;
    let distillation = round(n_mf * (n_dist * n * d * d) as f64);
    let injection = if distillation > 0 { 2 * d * n } else { 0 };
    let breakdown = Breakdown { logical, lattice_surgery, injection, distillation, ..Breakdown::default() };
    let total = breakdown.total();
    ResourceCounts { qubits_active: total, couplers_local: 2 * total, breakdown, ..ResourceCounts::default() }
}

struct ProcessorTerms {
    n: u64,
    d: u64,
    counts: ResourceCounts,
}

fn processor_terms(spec: &ArchitectureSpec) -> Result<ProcessorTerms, ArchError> {
    let qpu = spec.qpu()?;
    let params = qpu.qpu.as_ref().ok_or_else(|| ArchError::MissingParams(qpu.id.clone(), "qpu"))?;
    let n = qpu.n_logical as u64;
    let d = qpu.distance() as u64;
    let edges = params.ls_edges.map(u64::from).unwrap_or(2 * n);
    let (n_mf, n_dist) = spec
        .first_of(ModuleKind::Qsf)
        .and_then(|m| m.qsf.as_ref())
        .map(|q| (q.n_mf_per_qpu, q.n_dist as u64))
        .unwrap_or((0.0, 0));
    Ok(ProcessorTerms { n, d, counts: count_homogeneous(n, d, qpu.code.c_anc, edges, n_mf, n_dist) })
}

fn homogeneous_from_spec(spec: &ArchitectureSpec) -> Result<ResourceCounts, ArchError> {
    Ok(processor_terms(spec)?.counts)
}

fn single_memory(spec: &ArchitectureSpec, kind: ModuleKind, protocol: LinkProtocol) -> Result<&ModuleSpec, ArchError> {
    let qpu = spec.qpu()?;
    let qm = spec.first_of(kind).ok_or(ArchError::MissingModule(kind.name()))?;
    let link = spec.link(&qpu.id, &qm.id).ok_or_else(|| ArchError::MissingLink(qpu.id.clone(), qm.id.clone()))?;
    if link.protocol != protocol {
        return Err(ArchError::ProtocolMismatch(
            link.a.clone(),
            link.b.clone(),
            match protocol {
                LinkProtocol::Transversal => "expected transversal teleportation",
                LinkProtocol::LatticeSurgery => "expected lattice surgery",
            },
        ));
    }
    Ok(qm)
}

/// Processor plus a static transversal memory reached by teleportation.
pub fn count_heterogeneous_stqm(spec: &ArchitectureSpec) -> Result<ResourceCounts, ArchError> {
    let qm = single_memory(spec, ModuleKind::Stqm, LinkProtocol::Transversal)?;
    if qm.n_logical == 0 {
        return homogeneous_from_spec(spec);
    }
    let qb = spec.qb_params().ok_or(ArchError::MissingModule("qb"))?;
    let p = processor_terms(spec)?;
    let n_qm = qm.n_logical as u64;
    let n_bdry = boundary(p.n as u32, qm.n_logical, p.d as u32, qm.distance()).n_bdry as u64;
    let d2 = p.d * p.d;
    let memory = n_qm * d2;
    let interconnect = n_bdry * d2 * (1 + qb.n_anc_pump as u64);
    let breakdown = Breakdown { memory, interconnect, ..p.counts.breakdown };
    Ok(ResourceCounts {
        qubits_active: breakdown.total() - memory,
        qubits_static: memory,
        couplers_local: 2 * p.counts.breakdown.logical + n_bdry * d2,
        couplers_nonlocal: 0,
        interconnects: interconnect,
        breakdown,
    })
}

/// Processor plus an actively corrected memory reached by lattice surgery.
pub fn count_heterogeneous_raqm(spec: &ArchitectureSpec) -> Result<ResourceCounts, ArchError> {
    let qm = single_memory(spec, ModuleKind::Raqm, LinkProtocol::LatticeSurgery)?;
    if qm.n_logical == 0 {
        return homogeneous_from_spec(spec);
    }
    let qb = spec.qb_params().ok_or(ArchError::MissingModule("qb"))?;
    let p = processor_terms(spec)?;
    let b = boundary(p.n as u32, qm.n_logical, p.d as u32, qm.distance());
    let (n_bdry, d_bdry) = (b.n_bdry as u64, b.d_bdry as u64);
    let d_qm = qm.distance() as u64;
    let memory = round(qm.n_logical as f64 * (1.0 + qm.code.c_anc) * (d_qm * d_qm) as f64);
    let interconnect = n_bdry * d_bdry * (2 + qb.n_buf as u64 + qb.n_anc_pump as u64);
    let breakdown = Breakdown { memory, interconnect, ..p.counts.breakdown };
    Ok(ResourceCounts {
        qubits_active: breakdown.total(),
        qubits_static: 0,
        couplers_local: 2 * memory + 2 * p.counts.breakdown.logical + n_bdry * d_bdry,
        couplers_nonlocal: 0,
        interconnects: interconnect,
        breakdown,
    })
}

/// Multi-core processor with a static cache, optional long-term memory and
/// optional adder accelerator, fed by CCZ factories.
pub fn count_rsa_architecture(spec: &ArchitectureSpec) -> Result<ResourceCounts, ArchError> {
    if spec.shape() != ArchShape::RsaExtended {
        return Err(ArchError::UnsupportedShape(alloc::format!(
            "`{}` is not a processor + cache architecture",
            spec.name
        )));
    }
    let qpu = spec.qpu()?;
    let n = qpu.n_logical as u64;
    let d = qpu.distance() as u64;
    let d2 = d * d;
    let cache = spec.first_of(ModuleKind::Stqm).ok_or(ArchError::MissingModule("stqm"))?;
    let n_cache = cache.n_logical as u64;
    let rows =
        spec.first_of(ModuleKind::Qsf).and_then(|m| m.qsf.as_ref()).and_then(|q| q.ccz_rows_per_qpu).unwrap_or(0.0);
    let ccz_row = 4 * d2 + 2 * d;

    let qpu_interconnect = (2 * n + n_cache) * d2;
    let qpu_logical = 2 * n * d2;
    let mut rc = ResourceCounts {
        qubits_active: 0,
        qubits_static: n_cache * d2,
        couplers_local: 4 * n * d2 + n_cache * d2,
        couplers_nonlocal: 0,
        interconnects: qpu_interconnect,
        breakdown: Breakdown {
            logical: qpu_logical,
            memory: n_cache * d2,
            interconnect: qpu_interconnect,
            lattice_surgery: 2 * n * d,
            injection: 0,
            distillation: round(rows * n as f64 * ccz_row as f64),
        },
    };

    if let Some(lts) = spec.first_of(ModuleKind::Raqm) {
        let rp = lts.raqm.clone().unwrap_or_default();
        let n_lts = lts.n_logical as u64;
        let n_tr =
            rp.n_transfer.map(u64::from).unwrap_or_else(|| place_transfer_patches(n_lts, rp.k_swap.unwrap_or(0)));
        let transfer_d = rp.transfer_code.as_ref().map(|c| c.distance as u64).unwrap_or(d);
        let tr2 = transfer_d * transfer_d;
        let extra = match lts.code.family {
            CodeFamily::GrossBb => {
                let storage = round(rp.gross_qubits_per_lq * n_lts as f64);
                ResourceCounts {
                    couplers_local: round(rp.gross_local_couplers_per_lq * n_lts as f64) + 4 * n_tr * tr2,
                    couplers_nonlocal: round(rp.gross_nonlocal_couplers_per_lq * n_lts as f64),
                    interconnects: n_tr * tr2,
                    breakdown: Breakdown {
                        memory: storage + 2 * n_tr * tr2,
                        interconnect: n_tr * tr2,
                        ..Breakdown::default()
                    },
                    ..ResourceCounts::default()
                }
            }
            _ => {
                let d_lts = lts.distance() as u64;
                ResourceCounts {
                    couplers_local: 4 * n_lts * d_lts * d_lts + 4 * n_tr * tr2,
                    interconnects: n_tr * tr2,
                    breakdown: Breakdown {
                        memory: 2 * n_lts * d_lts * d_lts + 2 * n_tr * tr2,
                        interconnect: n_tr * tr2,
                        lattice_surgery: 2 * n_lts * d_lts,
                        ..Breakdown::default()
                    },
                    ..ResourceCounts::default()
                }
            }
        };
        rc = rc + extra;
    }

    if let Some(acc) = spec.first_of(ModuleKind::Asqpu) {
        let n_acc = acc.n_logical as u64;
        let factories = acc.asqpu.as_ref().map(|a| a.ccz_factories as u64).unwrap_or(0);
        rc = rc
            + ResourceCounts {
                couplers_local: 4 * n_acc * d2,
                interconnects: n_acc * d2,
                breakdown: Breakdown {
                    logical: 2 * n_acc * d2,
                    interconnect: n_acc * d2,
                    distillation: factories * ccz_row,
                    ..Breakdown::default()
                },
                ..ResourceCounts::default()
            };
    }
    rc.qubits_active = rc.breakdown.total() - rc.qubits_static;
    Ok(rc)
}

/// Dispatches on the architecture shape.
pub fn count_architecture(spec: &ArchitectureSpec) -> Result<ResourceCounts, ArchError> {
    match spec.shape() {
        ArchShape::Homogeneous => homogeneous_from_spec(spec),
        ArchShape::Stqm => count_heterogeneous_stqm(spec),
        ArchShape::Raqm => count_heterogeneous_raqm(spec),
        ArchShape::RsaExtended => count_rsa_architecture(spec),
    }
}
