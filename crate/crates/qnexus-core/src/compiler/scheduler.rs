//! Cross-module list scheduler for heterogeneous architectures.
//!
//! Blocks are taken in consolidation order. Each block is dry-run on every
//! eligible core and committed to the one that finishes first. Qubits are
//! prepared on first use and released after their last use. Qubits that
//! must make room are evicted least recently scheduled first and read back
//! just in time. Every idle gap of a resident qubit goes through the router.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arch::{ArchError, ArchitectureSpec, LinkProtocol, ModuleKind, ModuleSpec};
use crate::circuit::{LogicalCircuit, QubitId};
use crate::qec::{logical_error_per_cycle, transfer_lattice_surgery, transversal_channel_term, TransferParams};
use crate::resources::placement;
use crate::time::{secs_to_ns, Nanos};

use super::blocks::{consolidate_by_class, UnitaryBlock};
use super::clock::{synchronize_dwell, CycleWindow};
use super::factory::FactoryPool;
use super::lowering::{lower, GateCosts, MicroOp};
use super::router::{decide, Candidate, Decision};
use super::{
    Category, CompileError, EventKind, MoveReason, RouteRecord, ScheduledEvent, ScheduledProgram, SlotInterval,
};

const ACCELERATOR: usize = 1;

struct Slot {
    occupant: Option<QubitId>,
    free_at: Nanos,
}

struct Unit {
    module: usize,
    core: u32,
    class: usize,
    costs: GateCosts,
    slots: Vec<Slot>,
    pool: FactoryPool,
    /// Linked memories, cheapest transfer first.
    memories: Vec<usize>,
}

enum Storage {
    Static {
        t2_s: f64,
        eps_th: f64,
        eps_tele: f64,
        d_qpu: u32,
        /// Storage error above which retrieval is no longer correctable.
        limit: f64,
        refresh_ns: Nanos,
    },
    Active {
        eps_qm: f64,
        window: CycleWindow,
        swap_ns: Nanos,
        swap_error: f64,
        swaps: Vec<u32>,
    },
}

struct Memory {
    module: usize,
    capacity: usize,
    used: usize,
    transfer_ns: Nanos,
    /// Error of one transfer excluding storage.
    transfer_error: f64,
    storage: Storage,
}

/// Result of fitting a stay in memory between a write and a read.
struct Stay {
    dwell_ns: Nanos,
    cycles: u64,
    stretched: bool,
    fallback_ns: Nanos,
    swaps: u32,
}

impl Memory {
    fn swaps_for(&self, q: QubitId) -> u32 {
        match &self.storage {
            Storage::Active { swaps, .. } if !swaps.is_empty() => swaps[q as usize % swaps.len()],
            _ => 0,
        }
    }

    fn swap_time(&self, q: QubitId) -> Nanos {
        match &self.storage {
            Storage::Active { swap_ns, .. } => self.swaps_for(q) as u64 * swap_ns,
            Storage::Static { .. } => 0,
        }
    }

    /// Shortest realizable dwell of at least `at_least`.
    fn min_dwell(&self, q: QubitId, at_least: Nanos) -> Nanos {
        match &self.storage {
            Storage::Static { .. } => at_least,
            Storage::Active { window, .. } => window.feasible_at_least(at_least.max(self.swap_time(q))),
        }
    }

    fn stay(&self, q: QubitId, jit_ns: Nanos, min_ns: Nanos) -> Option<Stay> {
        match &self.storage {
            Storage::Static { .. } => (jit_ns >= min_ns).then_some(Stay {
                dwell_ns: jit_ns,
                cycles: 0,
                stretched: false,
                fallback_ns: 0,
                swaps: 0,
            }),
            Storage::Active { window, .. } => {
                let s = synchronize_dwell(window, jit_ns, min_ns.max(self.swap_time(q)))?;
                Some(Stay {
                    dwell_ns: s.dwell_ns,
                    cycles: s.plan.cycles,
                    stretched: s.plan.stretched,
                    fallback_ns: s.fallback_ns,
                    swaps: self.swaps_for(q),
                })
            }
        }
    }

    /// Static storage error for a dwell, attributed to memory idling.
    fn static_idle_error(&self, dwell_ns: Nanos) -> Result<f64, f64> {
        let Storage::Static { t2_s, eps_th, eps_tele, d_qpu, .. } = &self.storage else { return Ok(0.0) };
        let stored = dwell_ns as f64 * 1e-9 / t2_s;
        let base = transversal_channel_term(*eps_tele, *eps_th, *d_qpu).unwrap_or(1.0);
        match transversal_channel_term(stored + eps_tele, *eps_th, *d_qpu) {
            Ok(t) => Ok((t - base).max(0.0)),
            Err(_) => Err(stored),
        }
    }

    /// Error of memory-side storage and routing for a stay, excluding transfers.
    fn stay_error(&self, stay: &Stay) -> f64 {
        match &self.storage {
            Storage::Static { .. } => self.static_idle_error(stay.dwell_ns).unwrap_or(1.0),
            Storage::Active { eps_qm, swap_error, .. } => stay.cycles as f64 * eps_qm + stay.swaps as f64 * swap_error,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Loc {
    Unborn,
    Slot { unit: usize, slot: usize },
    Memory { mem: usize, write_end: Nanos },
    Dead,
}

struct QubitState {
    loc: Loc,
    /// End of the qubit's latest activity.
    ready: Nanos,
    /// When the qubit entered its current slot.
    arrived: Nanos,
    ops_left: usize,
}

#[derive(Clone, Copy)]
enum Source {
    Fresh,
    Stored {
        mem: usize,
        write_end: Nanos,
    },
    /// Resident on another core; written out at `ready` then read here.
    Migrate {
        unit: usize,
        slot: usize,
        mem: usize,
    },
}

struct Incoming {
    qubit: QubitId,
    slot: usize,
    source: Source,
    /// Lower bound on the read's dwell for stored qubits.
    min_dwell: Nanos,
    avail: Nanos,
}

struct Eviction {
    victim: QubitId,
    slot: usize,
    mem: usize,
}

struct Plan {
    unit: usize,
    finish: Nanos,
    evictions: Vec<Eviction>,
    incoming: Vec<Incoming>,
}

/// A static-memory storage event eligible for refresh.
struct StorageMark {
    event: usize,
    qubit: QubitId,
    mem: usize,
}

struct Scheduler<'a> {
    circuit: &'a LogicalCircuit,
    units: Vec<Unit>,
    mems: Vec<Memory>,
    qubits: Vec<QubitState>,
    events: Vec<ScheduledEvent>,
    routes: Vec<RouteRecord>,
    slots: Vec<SlotInterval>,
    marks: Vec<StorageMark>,
    diagnostics: Vec<String>,
}

fn module_index(spec: &ArchitectureSpec, m: &ModuleSpec) -> usize {
    spec.module_index(&m.id).unwrap_or(0)
}

fn build_memory(spec: &ArchitectureSpec, qpu: &ModuleSpec, m: &ModuleSpec) -> Result<Memory, CompileError> {
    let qb = spec.qb_params().ok_or(ArchError::MissingModule("qb"))?;
    let protocol = spec
        .link(&qpu.id, &m.id)
        .or_else(|| spec.links.iter().find(|l| l.a == m.id || l.b == m.id))
        .map(|l| l.protocol)
        .ok_or_else(|| ArchError::MissingLink(qpu.id.clone(), m.id.clone()))?;
    let t_qpu_s = qpu.cycle_s();
    let eps_qpu = qpu.eps_cycle();
    let base = TransferParams {
        eps_qpu,
        eps_qm: 0.0,
        eps_tele: qb.eps_tele,
        eps_eff_idle: 0.0,
        eps_th: qpu.modality.p_th,
        t_qpu_s,
        t_qm_s: m.modality.t_cycle_min_s,
        d_qpu: qpu.distance(),
        d_qm: m.distance(),
        d_time: qpu.distance().max(m.distance()),
        n_idle: 0.0,
    };
    let transversal = |tp: &TransferParams| -> Result<(Nanos, f64), CompileError> {
        let term = transversal_channel_term(tp.eps_tele, tp.eps_th, tp.d_qpu)?;
        Ok((secs_to_ns(2.0 * t_qpu_s), 2.0 * eps_qpu + term))
    };
    let tq_ns = secs_to_ns(t_qpu_s).max(1);
    let (transfer_ns, transfer_error, storage) = match m.kind {
        ModuleKind::Stqm => {
            if protocol != LinkProtocol::Transversal {
                return Err(ArchError::ProtocolMismatch(
                    qpu.id.clone(),
                    m.id.clone(),
                    "static memories need transversal transfer",
                )
                .into());
            }
            let (ns, err) = transversal(&base)?;
            let limit = qpu.modality.p_phys;
            let t2 = m.modality.t2_s;
            let term = |s: f64| {
                transversal_channel_term(s / t2 + qb.eps_tele, base.eps_th, base.d_qpu).unwrap_or(f64::INFINITY)
            };
            let bound = 2.0 * err;
            let (mut lo, mut hi) = (0.0, limit * t2);
            if term(hi) > bound {
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    if term(mid) <= bound {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
            } else {
                lo = hi;
            }
            let storage = Storage::Static {
                t2_s: t2,
                eps_th: base.eps_th,
                eps_tele: qb.eps_tele,
                d_qpu: base.d_qpu,
                limit,
                refresh_ns: secs_to_ns(lo),
            };
            (ns, err, storage)
        }
        _ => {
            let eps_qm = logical_error_per_cycle(m.modality.p_phys, m.modality.p_th, m.distance(), m.code.prefactor)?;
            let tp = TransferParams { eps_qm, ..base };
            let (ns, err) = match protocol {
                LinkProtocol::Transversal => transversal(&tp)?,
                LinkProtocol::LatticeSurgery => {
                    let t = transfer_lattice_surgery(&tp)?;
                    (secs_to_ns(t.duration_s), t.error)
                }
            };
            let window =
                CycleWindow::new(secs_to_ns(m.modality.t_cycle_min_s), secs_to_ns(m.modality.t_cycle_max_s), tq_ns)?;
            let rp = m.raqm.clone().unwrap_or_default();
            let swaps = match rp.k_swap {
                Some(k) => placement(m.n_logical as u64, k).slots.iter().map(|s| s.swaps).collect(),
                None => Vec::new(),
            };
            let d_qm = m.distance() as u64;
            let storage = Storage::Active {
                eps_qm,
                window,
                swap_ns: 2 * d_qm * window.nominal_ns(),
                swap_error: 2.0 * d_qm as f64 * eps_qm,
                swaps,
            };
            (ns, err, storage)
        }
    };
    Ok(Memory {
        module: module_index(spec, m),
        capacity: m.n_logical as usize,
        used: 0,
        transfer_ns,
        transfer_error,
        storage,
    })
}

impl<'a> Scheduler<'a> {
    fn new(c: &'a LogicalCircuit, spec: &'a ArchitectureSpec, blocks: &[UnitaryBlock]) -> Result<Self, CompileError> {
        let qpu = spec.qpu()?;
        let mems: Vec<Memory> = spec.memories().map(|m| build_memory(spec, qpu, m)).collect::<Result<_, _>>()?;
        let mut units = Vec::new();
        let mut processors: Vec<(&ModuleSpec, u32, usize, usize)> =
            (0..qpu.cores()).map(|core| (qpu, core, 0, qpu.core_capacity() as usize)).collect();
        if let Some(acc) = spec.first_of(ModuleKind::Asqpu) {
            processors.push((acc, 0, ACCELERATOR, acc.n_logical as usize));
        }
        for (m, core, class, capacity) in processors {
            let costs = GateCosts::for_processor(spec, m)?;
            let mut memories: Vec<usize> =
                (0..mems.len()).filter(|&i| spec.link(&m.id, &spec.modules[mems[i].module].id).is_some()).collect();
            memories.sort_by(|&a, &b| {
                mems[a].transfer_error.total_cmp(&mems[b].transfer_error).then(mems[a].module.cmp(&mems[b].module))
            });
            units.push(Unit {
                module: module_index(spec, m),
                core,
                class,
                pool: FactoryPool::new(costs.factories, costs.factory_period_ns),
                costs,
                slots: (0..capacity).map(|_| Slot { occupant: None, free_at: 0 }).collect(),
                memories,
            });
        }

        let width = c.width();
        let total: usize =
            units.iter().map(|u| u.slots.len()).sum::<usize>() + mems.iter().map(|m| m.capacity).sum::<usize>();
        if width > total {
            return Err(CompileError::Capacity(format!(
                "{width} qubits exceed the {total} available on {}",
                spec.name
            )));
        }
        let mut qubits: Vec<QubitState> =
            (0..width).map(|_| QubitState { loc: Loc::Unborn, ready: 0, arrived: 0, ops_left: 0 }).collect();
        for op in &c.ops {
            for &q in &op.qubits {
                qubits[q as usize].ops_left += 1;
            }
        }
        for block in blocks {
            let slots = units.iter().filter(|u| u.class == block.class).map(|u| u.slots.len()).max().unwrap_or(0);
            if block.footprint.len() > slots {
                return Err(CompileError::Capacity(format!(
                    "a {}-qubit gate group does not fit a {slots}-qubit processor",
                    block.footprint.len()
                )));
            }
        }
        Ok(Scheduler {
            circuit: c,
            units,
            mems,
            qubits,
            events: Vec::new(),
            routes: Vec::new(),
            slots: Vec::new(),
            marks: Vec::new(),
            diagnostics: Vec::new(),
        })
    }

    fn lowered(&self, block: &UnitaryBlock, unit: usize) -> Vec<(usize, MicroOp)> {
        let mut out = Vec::new();
        let mut tmp = Vec::new();
        for &i in &block.ops {
            tmp.clear();
            lower(&self.circuit.ops[i], &self.units[unit].costs, &mut tmp);
            out.extend(tmp.drain(..).map(|m| (i, m)));
        }
        out
    }

    fn memory_with_room(&self, unit: usize, also: Option<usize>) -> Option<usize> {
        self.units[unit].memories.iter().copied().find(|&m| {
            self.mems[m].used < self.mems[m].capacity && also.is_none_or(|u| self.units[u].memories.contains(&m))
        })
    }

    fn plan(&self, block: &UnitaryBlock, u: usize, b: usize) -> Result<Plan, CompileError> {
        let unit = &self.units[u];
        let first_op =
            |q: QubitId| block.ops.iter().position(|&i| self.circuit.ops[i].qubits.contains(&q)).unwrap_or(0);
        let mut incoming: Vec<QubitId> = block
            .footprint
            .iter()
            .copied()
            .filter(|&q| !matches!(self.qubits[q as usize].loc, Loc::Slot { unit, .. } if unit == u))
            .collect();
        incoming.sort_by_key(|&q| (first_op(q), q));

        let mut free: Vec<(Nanos, usize)> =
            unit.slots.iter().enumerate().filter(|(_, s)| s.occupant.is_none()).map(|(i, s)| (s.free_at, i)).collect();
        let mut evictions = Vec::new();
        if free.len() < incoming.len() {
            let mut residents: Vec<(Nanos, QubitId, usize)> = unit
                .slots
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.occupant.map(|q| (i, q)))
                .filter(|(_, q)| block.footprint.binary_search(q).is_err())
                .map(|(i, q)| (self.qubits[q as usize].ready, q, i))
                .collect();
            residents.sort_unstable();
            let mut reserved: BTreeMap<usize, usize> = BTreeMap::new();
            for &(_, victim, slot) in residents.iter().take(incoming.len() - free.len()) {
                let mem = self.units[u]
                    .memories
                    .iter()
                    .copied()
                    .find(|&m| self.mems[m].used + reserved.get(&m).copied().unwrap_or(0) < self.mems[m].capacity)
                    .ok_or_else(|| {
                        CompileError::Capacity(format!("no memory can take evicted qubit q{victim} in block {b}"))
                    })?;
                *reserved.entry(mem).or_default() += 1;
                let ready = self.qubits[victim as usize].ready;
                free.push((ready + self.mems[mem].transfer_ns, slot));
                evictions.push(Eviction { victim, slot, mem });
            }
        }
        free.sort_unstable();

        let mut plans = Vec::with_capacity(incoming.len());
        for (&q, &(slot_free, slot)) in incoming.iter().zip(free.iter()) {
            let st = &self.qubits[q as usize];
            let (source, write_end) = match st.loc {
                Loc::Unborn => (Source::Fresh, 0),
                Loc::Memory { mem, write_end } => (Source::Stored { mem, write_end }, write_end),
                Loc::Slot { unit: other, slot: other_slot } => {
                    let mem = self.memory_with_room(other, Some(u)).ok_or_else(|| {
                        CompileError::Capacity(format!("no shared memory to move q{q} between cores"))
                    })?;
                    (Source::Migrate { unit: other, slot: other_slot, mem }, st.ready + self.mems[mem].transfer_ns)
                }
                Loc::Dead => return Err(CompileError::Capacity(format!("q{q} used after release"))),
            };
            let (min_dwell, avail) = match source {
                Source::Fresh => (0, slot_free),
                Source::Stored { mem, .. } | Source::Migrate { mem, .. } => {
                    let m = &self.mems[mem];
                    let min = m.min_dwell(q, slot_free.saturating_sub(write_end));
                    (min, write_end + min + m.transfer_ns)
                }
            };
            plans.push(Incoming { qubit: q, slot, source, min_dwell, avail });
        }

        let mut ready: Vec<(QubitId, Nanos)> = block
            .footprint
            .iter()
            .map(|&q| {
                let avail =
                    plans.iter().find(|p| p.qubit == q).map(|p| p.avail).unwrap_or(self.qubits[q as usize].ready);
                (q, avail)
            })
            .collect();
        let mut pool = unit.pool.clone();
        let mut finish = 0;
        for (_, m) in self.lowered(block, u) {
            let (start, end) = place(&m, &ready, &mut pool, unit.costs.inject_ns);
            for r in ready.iter_mut().filter(|r| m.qubits.contains(&r.0)) {
                r.1 = end;
            }
            finish = finish.max(end).max(start);
        }
        Ok(Plan { unit: u, finish, evictions, incoming: plans })
    }

    fn push(&mut self, ev: ScheduledEvent) -> usize {
        self.events.push(ev);
        self.events.len() - 1
    }

    #[allow(clippy::too_many_arguments)]
    fn event(
        &mut self,
        module: usize,
        core: u32,
        kind: EventKind,
        start_ns: Nanos,
        duration_ns: Nanos,
        q: QubitId,
        error: f64,
        category: Category,
        label: &'static str,
    ) -> usize {
        self.push(ScheduledEvent {
            module,
            core,
            kind,
            start_ns,
            duration_ns,
            qubits: alloc::vec![q],
            error,
            category,
            label,
            magic_states: 0,
        })
    }

    fn emit_write(&mut self, q: QubitId, unit: usize, mem: usize, at: Nanos) -> Nanos {
        let (module, core) = (self.mems[mem].module, self.units[unit].core);
        let (ns, err) = (self.mems[mem].transfer_ns, self.mems[mem].transfer_error);
        self.event(module, core, EventKind::TransferWrite, at, ns, q, err, Category::Transfer, "write");
        self.mems[mem].used += 1;
        at + ns
    }

    /// Emits storage, routing and the read so that `q` is usable on `unit` at
    /// `use_at`. Returns the read start.
    fn emit_read(
        &mut self,
        q: QubitId,
        unit: usize,
        mem: usize,
        write_end: Nanos,
        use_at: Nanos,
        min_dwell: Nanos,
    ) -> Nanos {
        let m = &self.mems[mem];
        let (module, core, ns, err) = (m.module, self.units[unit].core, m.transfer_ns, m.transfer_error);
        let jit = use_at - ns - write_end;
        let stay = m.stay(q, jit, min_dwell).unwrap_or(Stay {
            dwell_ns: jit,
            cycles: 0,
            stretched: false,
            fallback_ns: 0,
            swaps: 0,
        });
        let read_start = write_end + stay.dwell_ns;
        match &m.storage {
            Storage::Static { .. } => {
                if stay.dwell_ns > 0 {
                    let error = match m.static_idle_error(stay.dwell_ns) {
                        Ok(e) => e,
                        Err(stored) => {
                            self.diagnostics.push(format!(
                                "q{q}: stored error {stored:.3e} at {write_end} ns is not correctable on retrieval"
                            ));
                            1.0
                        }
                    };
                    let event = self.event(
                        module,
                        core,
                        EventKind::IdleBuffer,
                        write_end,
                        stay.dwell_ns,
                        q,
                        error,
                        Category::QmIdle,
                        "store",
                    );
                    self.marks.push(StorageMark { event, qubit: q, mem });
                }
            }
            Storage::Active { eps_qm, swap_ns, swap_error, .. } => {
                let (eps_qm, swap_ns, swap_error) = (*eps_qm, *swap_ns, *swap_error);
                let swap_total = stay.swaps as u64 * swap_ns;
                let kind = if stay.stretched { EventKind::QecCycleStretch } else { EventKind::IdleBuffer };
                if stay.dwell_ns > swap_total || stay.cycles > 0 {
                    let error = stay.cycles as f64 * eps_qm;
                    self.event(
                        module,
                        core,
                        kind,
                        write_end,
                        stay.dwell_ns - swap_total,
                        q,
                        error,
                        Category::QmIdle,
                        "store",
                    );
                }
                let mut t = read_start - swap_total;
                for _ in 0..stay.swaps {
                    self.event(
                        module,
                        core,
                        EventKind::SwapRoute,
                        t,
                        swap_ns,
                        q,
                        swap_error,
                        Category::Transfer,
                        "route",
                    );
                    t += swap_ns;
                }
            }
        }
        self.event(module, core, EventKind::TransferRead, read_start, ns, q, err, Category::Transfer, "read");
        if stay.fallback_ns > 0 {
            let u = &self.units[unit];
            let (umod, ucore, idle) = (u.module, u.core, u.costs.idle(stay.fallback_ns));
            self.event(
                umod,
                ucore,
                EventKind::IdleBuffer,
                read_start + ns,
                stay.fallback_ns,
                q,
                idle,
                Category::QpuIdle,
                "wait",
            );
        }
        self.mems[mem].used -= 1;
        read_start
    }

    fn record_slot(&mut self, unit: usize, slot: usize, qubit: QubitId, start_ns: Nanos, end_ns: Nanos) {
        self.slots.push(SlotInterval { unit: unit as u32, slot: slot as u32, qubit, start_ns, end_ns });
    }

    /// Router decision for a resident qubit idle on `unit` over `[from, to)`.
    fn settle_gap(&mut self, q: QubitId, unit: usize, from: Nanos, to: Nanos) {
        let gap = to - from;
        let u = &self.units[unit];
        let keep = u.costs.idle(gap);
        let candidates: Vec<Candidate> = u
            .memories
            .iter()
            .map(|&mi| {
                let m = &self.mems[mi];
                let cost = gap.checked_sub(2 * m.transfer_ns).and_then(|jit| {
                    let stay = m.stay(q, jit, m.min_dwell(q, 0))?;
                    if let Storage::Static { .. } = m.storage {
                        m.static_idle_error(stay.dwell_ns).ok()?;
                    }
                    Some(2.0 * m.transfer_error + m.stay_error(&stay) + u.costs.idle(stay.fallback_ns))
                });
                Candidate { memory: mi, cost, has_capacity: m.used < m.capacity }
            })
            .collect();
        let (decision, move_cost) = decide(keep, &candidates);
        let (umod, ucore) = (u.module, u.core);
        match decision {
            Decision::Move(mi) => {
                let write_end = self.emit_write(q, unit, mi, from);
                let min = self.mems[mi].min_dwell(q, 0);
                self.emit_read(q, unit, mi, write_end, to, min);
                let module = self.mems[mi].module;
                self.routes.push(RouteRecord {
                    qubit: q,
                    gap_start_ns: from,
                    gap_ns: gap,
                    keep_cost: keep,
                    move_cost,
                    decision: Decision::Move(module),
                    reason: Some(MoveReason::Router),
                });
            }
            Decision::Keep(reason) => {
                self.event(umod, ucore, EventKind::IdleBuffer, from, gap, q, keep, Category::QpuIdle, "idle");
                self.routes.push(RouteRecord {
                    qubit: q,
                    gap_start_ns: from,
                    gap_ns: gap,
                    keep_cost: keep,
                    move_cost,
                    decision: Decision::Keep(reason),
                    reason: None,
                });
            }
        }
    }

    fn record_move(&mut self, q: QubitId, from: Nanos, mem: usize, reason: MoveReason) {
        let module = self.mems[mem].module;
        self.routes.push(RouteRecord {
            qubit: q,
            gap_start_ns: from,
            gap_ns: 0,
            keep_cost: 0.0,
            move_cost: None,
            decision: Decision::Move(module),
            reason: Some(reason),
        });
    }

    fn commit(&mut self, block: &UnitaryBlock, plan: Plan) {
        let u = plan.unit;
        for ev in &plan.evictions {
            let st = &self.qubits[ev.victim as usize];
            let (ready, arrived) = (st.ready, st.arrived);
            let write_end = self.emit_write(ev.victim, u, ev.mem, ready);
            self.record_slot(u, ev.slot, ev.victim, arrived, write_end);
            self.record_move(ev.victim, ready, ev.mem, MoveReason::Capacity);
            self.units[u].slots[ev.slot] = Slot { occupant: None, free_at: write_end };
            self.qubits[ev.victim as usize].loc = Loc::Memory { mem: ev.mem, write_end };
        }
        let mut pending: Vec<(QubitId, usize, Nanos, Nanos)> = Vec::new();
        for inc in &plan.incoming {
            let q = inc.qubit;
            match inc.source {
                Source::Fresh => {}
                Source::Stored { mem, write_end } => pending.push((q, mem, write_end, inc.min_dwell)),
                Source::Migrate { unit, slot, mem } => {
                    let st = &self.qubits[q as usize];
                    let (ready, arrived) = (st.ready, st.arrived);
                    let write_end = self.emit_write(q, unit, mem, ready);
                    self.record_slot(unit, slot, q, arrived, write_end);
                    self.record_move(q, ready, mem, MoveReason::Migration);
                    self.units[unit].slots[slot] = Slot { occupant: None, free_at: write_end };
                    pending.push((q, mem, write_end, inc.min_dwell));
                }
            }
            self.units[u].slots[inc.slot].occupant = Some(q);
            self.qubits[q as usize].loc = Loc::Slot { unit: u, slot: inc.slot };
        }

        let mut fresh: Vec<QubitId> =
            plan.incoming.iter().filter(|i| matches!(i.source, Source::Fresh)).map(|i| i.qubit).collect();
        let mut ready: Vec<(QubitId, Nanos)> = block
            .footprint
            .iter()
            .map(|&q| {
                let avail = plan
                    .incoming
                    .iter()
                    .find(|p| p.qubit == q)
                    .map(|p| p.avail)
                    .unwrap_or(self.qubits[q as usize].ready);
                (q, avail)
            })
            .collect();
        let micro = self.lowered(block, u);
        let inject_ns = self.units[u].costs.inject_ns;
        let mut last_op = usize::MAX;
        for (k, (op_index, m)) in micro.iter().enumerate() {
            let mut pool = core::mem::replace(&mut self.units[u].pool, FactoryPool::new(0, 0));
            let (start, end) = place(m, &ready, &mut pool, inject_ns);
            self.units[u].pool = pool;
            for &q in &m.qubits {
                if let Some(pos) = pending.iter().position(|p| p.0 == q) {
                    let (_, mem, write_end, min) = pending.remove(pos);
                    let arrived = self.emit_read(q, u, mem, write_end, start, min);
                    self.qubits[q as usize].arrived = arrived;
                } else if let Some(pos) = fresh.iter().position(|&f| f == q) {
                    fresh.remove(pos);
                    self.qubits[q as usize].arrived = start;
                } else {
                    let prev = self.qubits[q as usize].ready;
                    if start > prev {
                        self.settle_gap(q, u, prev, start);
                    }
                }
            }
            let unit = &self.units[u];
            self.push(ScheduledEvent {
                module: unit.module,
                core: unit.core,
                kind: m.kind,
                start_ns: start,
                duration_ns: end - start,
                qubits: m.qubits.clone(),
                error: m.error,
                category: m.category,
                label: m.label,
                magic_states: m.magic,
            });
            for r in ready.iter_mut().filter(|r| m.qubits.contains(&r.0)) {
                r.1 = end;
            }
            for &q in &m.qubits {
                self.qubits[q as usize].ready = end;
            }
            let op_done = micro.get(k + 1).is_none_or(|next| next.0 != *op_index);
            if op_done && last_op != *op_index {
                last_op = *op_index;
                for &q in &self.circuit.ops[*op_index].qubits {
                    self.release_if_done(q);
                }
            }
        }
    }

    fn release_if_done(&mut self, q: QubitId) {
        let st = &mut self.qubits[q as usize];
        st.ops_left -= 1;
        if st.ops_left > 0 {
            return;
        }
        if let Loc::Slot { unit, slot } = st.loc {
            let (arrived, ready) = (st.arrived, st.ready);
            st.loc = Loc::Dead;
            self.units[unit].slots[slot] = Slot { occupant: None, free_at: ready };
            self.record_slot(unit, slot, q, arrived, ready);
        }
    }

    fn run(&mut self, blocks: &[UnitaryBlock]) -> Result<(), CompileError> {
        for (b, block) in blocks.iter().enumerate() {
            let mut best: Option<Plan> = None;
            for u in 0..self.units.len() {
                if self.units[u].class != block.class {
                    continue;
                }
                let p = self.plan(block, u, b)?;
                if best.as_ref().is_none_or(|bp| p.finish < bp.finish) {
                    best = Some(p);
                }
            }
            let plan = best.ok_or_else(|| CompileError::Capacity(format!("no processor for block {b}")))?;
            self.commit(block, plan);
        }
        self.refresh_pass();
        Ok(())
    }

    /// Splits static-memory stays that outlive the refresh interval with a
    /// read-write round trip through a free processor slot.
    fn refresh_pass(&mut self) {
        let marks = core::mem::take(&mut self.marks);
        let mut busy: BTreeMap<(usize, usize), Vec<(Nanos, Nanos)>> = BTreeMap::new();
        for s in &self.slots {
            busy.entry((s.unit as usize, s.slot as usize)).or_default().push((s.start_ns, s.end_ns));
        }
        for u in 0..self.units.len() {
            for (i, slot) in self.units[u].slots.iter().enumerate() {
                if slot.occupant.is_some() {
                    busy.entry((u, i)).or_default().push((0, Nanos::MAX));
                }
            }
        }
        for v in busy.values_mut() {
            v.sort_unstable();
        }
        for mark in marks {
            let Storage::Static { refresh_ns, limit, t2_s, .. } = self.mems[mark.mem].storage else { continue };
            let ev = &self.events[mark.event];
            let (start, end) = (ev.start_ns, ev.end_ns());
            if end - start <= refresh_ns {
                continue;
            }
            let w = self.mems[mark.mem].transfer_ns;
            let mut last = start;
            while end - last > refresh_ns {
                let lo = last + refresh_ns / 2;
                let hi = (last + refresh_ns).min(end.saturating_sub(2 * w));
                let mut found: Option<(Nanos, usize, usize)> = None;
                for u in 0..self.units.len() {
                    if !self.units[u].memories.contains(&mark.mem) {
                        continue;
                    }
                    for s in 0..self.units[u].slots.len() {
                        let t = earliest_window(busy.get(&(u, s)).map(|v| v.as_slice()).unwrap_or(&[]), lo, 2 * w);
                        if t <= hi && found.is_none_or(|f| t < f.0) {
                            found = Some((t, u, s));
                        }
                    }
                }
                let Some((t, u, s)) = found else {
                    self.diagnostics.push(format!(
                        "q{}: no free slot to refresh static storage between {} ns and {} ns",
                        mark.qubit, lo, hi
                    ));
                    break;
                };
                let seg = self.static_segment(mark.mem, mark.qubit, last, t);
                if let Some(e) = seg {
                    self.push(e);
                }
                let (module, core, err) =
                    (self.mems[mark.mem].module, self.units[u].core, self.mems[mark.mem].transfer_error);
                self.event(module, core, EventKind::TransferRead, t, w, mark.qubit, err, Category::Transfer, "read");
                self.event(
                    module,
                    core,
                    EventKind::TransferWrite,
                    t + w,
                    w,
                    mark.qubit,
                    err,
                    Category::Transfer,
                    "write",
                );
                self.record_slot(u, s, mark.qubit, t, t + 2 * w);
                let v = busy.entry((u, s)).or_default();
                let pos = v.partition_point(|iv| iv.0 < t);
                v.insert(pos, (t, t + 2 * w));
                self.record_move(mark.qubit, t, mark.mem, MoveReason::Refresh);
                last = t + 2 * w;
            }
            if last != start {
                let error = self.mems[mark.mem].static_idle_error(end - last).unwrap_or(1.0);
                let ev = &mut self.events[mark.event];
                ev.start_ns = last;
                ev.duration_ns = end - last;
                ev.error = error;
            }
            if (end - last) as f64 * 1e-9 / t2_s > limit {
                self.diagnostics
                    .push(format!("q{}: refresh required; static storage exceeds the correctable load", mark.qubit));
            }
        }
    }

    fn static_segment(&self, mem: usize, q: QubitId, from: Nanos, to: Nanos) -> Option<ScheduledEvent> {
        if to <= from {
            return None;
        }
        let m = &self.mems[mem];
        let core = self.events.iter().find(|e| e.module == m.module && e.qubits == [q]).map(|e| e.core).unwrap_or(0);
        Some(ScheduledEvent {
            module: m.module,
            core,
            kind: EventKind::IdleBuffer,
            start_ns: from,
            duration_ns: to - from,
            qubits: alloc::vec![q],
            error: m.static_idle_error(to - from).unwrap_or(1.0),
            category: Category::QmIdle,
            label: "store",
            magic_states: 0,
        })
    }
}

/// Earliest `t >= lo` such that `[t, t + len)` misses every interval in the
/// sorted list.
fn earliest_window(busy: &[(Nanos, Nanos)], lo: Nanos, len: Nanos) -> Nanos {
    let mut t = lo;
    for &(s, e) in busy {
        if e <= t {
            continue;
        }
        if s >= t + len {
            break;
        }
        t = t.max(e);
    }
    t
}

/// Start and end of `m` given per-qubit ready times, drawing magic states
/// from `pool` for injections.
pub(super) fn place(
    m: &MicroOp,
    ready: &[(QubitId, Nanos)],
    pool: &mut FactoryPool,
    inject_ns: Nanos,
) -> (Nanos, Nanos) {
    let mut start = 0;
    for r in ready.iter().filter(|r| m.qubits.contains(&r.0)) {
        start = start.max(r.1);
    }
    if m.magic == 0 {
        return (start, start + m.duration_ns);
    }
    let first = pool.consume(start);
    let mut t = first + inject_ns.max(m.duration_ns);
    for _ in 1..m.magic {
        t = pool.consume(t) + m.duration_ns;
    }
    (start, t)
}

/// Schedules `c` on a heterogeneous architecture.
pub fn schedule(c: &LogicalCircuit, spec: &ArchitectureSpec) -> Result<ScheduledProgram, CompileError> {
    c.validate()?;
    let qpu = spec.qpu()?;
    let accelerator = spec.first_of(ModuleKind::Asqpu);
    let specialty = accelerator.and_then(|m| m.asqpu.as_ref()).map(|a| a.specialty.clone());
    let blocks = consolidate_by_class(
        c,
        |op| match (&specialty, &op.tag) {
            (Some(s), Some(t)) if s == t => ACCELERATOR,
            _ => 0,
        },
        |class| match class {
            ACCELERATOR => accelerator.map(|m| m.n_logical as usize).unwrap_or(0),
            _ => qpu.core_capacity() as usize,
        },
    );
    let mut s = Scheduler::new(c, spec, &blocks)?;
    s.run(&blocks)?;
    let modules = spec.modules.iter().map(|m| m.id.clone()).collect();
    Ok(ScheduledProgram::finalize(spec.name.clone(), modules, s.events, s.routes, s.slots, blocks.len(), s.diagnostics))
}
