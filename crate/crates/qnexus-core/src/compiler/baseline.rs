//! SWAP-routing baseline for homogeneous processors.
//!
//! Logical qubits sit on a square grid in row-major order. Blocks run one
//! after another; two-qubit gates first walk the control next to the target
//! with SWAPs and three-qubit gates additionally bring the second control
//! next to the target. Every qubit that is not busy idles on the grid.

use alloc::collections::VecDeque;
use alloc::string::String;
use alloc::vec::Vec;

use crate::arch::ArchitectureSpec;
use crate::circuit::{LogicalCircuit, QubitId};
use crate::time::Nanos;

use super::blocks::consolidate_blocks;
use super::factory::FactoryPool;
use super::lowering::{lower, GateCosts};
use super::scheduler::place;
use super::{Category, CompileError, EventKind, ScheduledEvent, ScheduledProgram};

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineParams {
    pub arch: String,
    pub module: String,
    pub module_index: usize,
    pub costs: GateCosts,
    /// Qubits per consolidated block.
    pub block_capacity: usize,
}

impl BaselineParams {
    pub fn from_spec(spec: &ArchitectureSpec) -> Result<BaselineParams, CompileError> {
        let qpu = spec.qpu()?;
        let block_capacity = 3;
        let mut costs = GateCosts::for_processor(spec, qpu)?;
        if let Some(qsf) = spec.first_of(crate::arch::ModuleKind::Qsf).and_then(|m| m.qsf.as_ref()) {
            costs.factories = (libm::round(qsf.n_mf_per_qpu * block_capacity as f64) as usize).max(1);
        }
        Ok(BaselineParams {
            arch: spec.name.clone(),
            module: qpu.id.clone(),
            module_index: spec.module_index(&qpu.id).unwrap_or(0),
            costs,
            block_capacity,
        })
    }
}

type Cell = (i64, i64);

struct Grid {
    side: i64,
    pos: Vec<Cell>,
    /// Occupant of each cell, row-major.
    cells: Vec<Option<QubitId>>,
}

impl Grid {
    fn new(width: usize, n_grid: usize) -> Result<Grid, CompileError> {
        let mut side = libm::sqrt(n_grid as f64) as i64;
        while (side * side) < n_grid as i64 {
            side += 1;
        }
        if width > n_grid {
            return Err(CompileError::GridTooSmall { grid: n_grid, width });
        }
        let pos = (0..width as i64).map(|i| (i % side, i / side)).collect();
        let mut cells = alloc::vec![None; (side * side) as usize];
        for (q, cell) in cells.iter_mut().take(width).enumerate() {
            *cell = Some(q as QubitId);
        }
        Ok(Grid { side, pos, cells })
    }

    fn index(&self, c: Cell) -> usize {
        (c.1 * self.side + c.0) as usize
    }

    fn inside(&self, c: Cell) -> bool {
        c.0 >= 0 && c.1 >= 0 && c.0 < self.side && c.1 < self.side
    }

    fn neighbours(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .into_iter()
            .map(move |(dx, dy)| (c.0 + dx, c.1 + dy))
            .filter(|&n| self.inside(n))
    }

    /// Moves `q` into cell `to`, returning the displaced occupant.
    fn swap_into(&mut self, q: QubitId, to: Cell) -> Option<QubitId> {
        let from = self.pos[q as usize];
        let (fi, ti) = (self.index(from), self.index(to));
        let other = self.cells[ti];
        self.cells.swap(fi, ti);
        self.pos[q as usize] = to;
        if let Some(o) = other {
            self.pos[o as usize] = from;
        }
        other
    }

    /// Path from `from` to a neighbour of `target`, avoiding `blocked` cells.
    fn path_to_neighbour(&self, from: Cell, target: Cell, blocked: &[Cell]) -> Option<Vec<Cell>> {
        let n = (self.side * self.side) as usize;
        let mut prev: Vec<Option<Cell>> = alloc::vec![None; n];
        let mut seen = alloc::vec![false; n];
        let mut queue = VecDeque::from([from]);
        seen[self.index(from)] = true;
        while let Some(c) = queue.pop_front() {
            if (c.0 - target.0).abs() + (c.1 - target.1).abs() == 1 {
                let mut path = alloc::vec![c];
                let mut cur = c;
                while let Some(p) = prev[self.index(cur)] {
                    path.push(p);
                    cur = p;
                }
                path.pop();
                path.reverse();
                return Some(path);
            }
            for nb in self.neighbours(c) {
                let i = self.index(nb);
                if !seen[i] && !blocked.contains(&nb) {
                    seen[i] = true;
                    prev[i] = Some(c);
                    queue.push_back(nb);
                }
            }
        }
        None
    }
}

fn adjacent(a: Cell, b: Cell) -> bool {
    (a.0 - b.0).abs() + (a.1 - b.1).abs() == 1
}

struct Baseline<'a> {
    p: &'a BaselineParams,
    grid: Grid,
    ready: Vec<Nanos>,
    events: Vec<ScheduledEvent>,
    pool: FactoryPool,
}

impl Baseline<'_> {
    fn swap(&mut self, q: QubitId, to: Cell, floor: Nanos) -> Nanos {
        let other = self.grid.swap_into(q, to);
        let mut qubits = alloc::vec![q];
        qubits.extend(other);
        let start = qubits.iter().map(|&x| self.ready[x as usize]).max().unwrap_or(0).max(floor);
        let duration = 3 * self.p.costs.two_qubit_ns;
        let error = -libm::expm1(3.0 * libm::log1p(-self.p.costs.eps_2q));
        for &x in &qubits {
            self.ready[x as usize] = start + duration;
        }
        qubits.sort_unstable();
        self.events.push(ScheduledEvent {
            module: self.p.module_index,
            core: 0,
            kind: EventKind::Gate,
            start_ns: start,
            duration_ns: duration,
            qubits,
            error,
            category: Category::Gate2q,
            label: "SWAP",
            magic_states: 0,
        });
        start + duration
    }

    /// Walks `q` next to `target`, x first then y.
    fn route_adjacent(&mut self, q: QubitId, target: QubitId, floor: Nanos) {
        loop {
            let (a, b) = (self.grid.pos[q as usize], self.grid.pos[target as usize]);
            if adjacent(a, b) {
                return;
            }
            let step = if (a.0 - b.0).abs() > 1 || (a.0 != b.0 && a.1 != b.1) {
                (a.0 + (b.0 - a.0).signum(), a.1)
            } else {
                (a.0, a.1 + (b.1 - a.1).signum())
            };
            self.swap(q, step, floor);
        }
    }

    fn route_second_control(&mut self, c1: QubitId, c2: QubitId, t: QubitId, floor: Nanos) {
        let (p1, p2, pt) = (self.grid.pos[c1 as usize], self.grid.pos[c2 as usize], self.grid.pos[t as usize]);
        if adjacent(p2, pt) {
            return;
        }
        if let Some(path) = self.grid.path_to_neighbour(p2, pt, &[pt, p1]) {
            for cell in path {
                self.swap(c2, cell, floor);
            }
        }
    }
}

/// Schedules `c` on an `n_grid`-qubit homogeneous processor.
pub fn schedule_baseline(
    c: &LogicalCircuit,
    n_grid: usize,
    p: &BaselineParams,
) -> Result<ScheduledProgram, CompileError> {
    c.validate()?;
    let width = c.width();
    let mut b = Baseline {
        p,
        grid: Grid::new(width, n_grid)?,
        ready: alloc::vec![0; width],
        events: Vec::new(),
        pool: FactoryPool::new(p.costs.factories, p.costs.factory_period_ns),
    };
    let blocks = consolidate_blocks(c, p.block_capacity);
    let mut block_start = 0;
    let mut micro = Vec::new();
    for block in &blocks {
        let mut finish = block_start;
        for &i in &block.ops {
            let op = &c.ops[i];
            match op.qubits.len() {
                2 => b.route_adjacent(op.qubits[0], op.qubits[1], block_start),
                3 => {
                    b.route_adjacent(op.qubits[0], op.qubits[2], block_start);
                    b.route_second_control(op.qubits[0], op.qubits[1], op.qubits[2], block_start);
                }
                _ => {}
            }
            micro.clear();
            lower(op, &p.costs, &mut micro);
            for m in &micro {
                let ready: Vec<(QubitId, Nanos)> =
                    m.qubits.iter().map(|&q| (q, b.ready[q as usize].max(block_start))).collect();
                let (start, end) = place(m, &ready, &mut b.pool, p.costs.inject_ns);
                for &q in &m.qubits {
                    b.ready[q as usize] = end;
                }
                b.events.push(ScheduledEvent {
                    module: p.module_index,
                    core: 0,
                    kind: m.kind,
                    start_ns: start,
                    duration_ns: end - start,
                    qubits: m.qubits.clone(),
                    error: m.error,
                    category: m.category,
                    label: m.label,
                    magic_states: m.magic,
                });
            }
        }
        for &q in &block.footprint {
            finish = finish.max(b.ready[q as usize]);
        }
        for e in b.events.iter().rev().take_while(|e| e.start_ns >= block_start) {
            finish = finish.max(e.end_ns());
        }
        block_start = finish;
    }

    let makespan = b.events.iter().map(|e| e.end_ns()).max().unwrap_or(0);
    let mut busy: Vec<Vec<(Nanos, Nanos)>> = alloc::vec![Vec::new(); width];
    for e in &b.events {
        for &q in &e.qubits {
            busy[q as usize].push((e.start_ns, e.end_ns()));
        }
    }
    let mut idle = Vec::new();
    for (q, intervals) in busy.iter_mut().enumerate() {
        intervals.sort_unstable();
        let mut t = 0;
        for &(s, e) in intervals.iter().chain(core::iter::once(&(makespan, makespan))) {
            if s > t {
                idle.push(ScheduledEvent {
                    module: p.module_index,
                    core: 0,
                    kind: EventKind::IdleBuffer,
                    start_ns: t,
                    duration_ns: s - t,
                    qubits: alloc::vec![q as QubitId],
                    error: p.costs.idle(s - t),
                    category: Category::QpuIdle,
                    label: "idle",
                    magic_states: 0,
                });
            }
            t = t.max(e);
        }
    }
    b.events.extend(idle);
    Ok(ScheduledProgram::finalize(
        p.arch.clone(),
        alloc::vec![p.module.clone()],
        b.events,
        Vec::new(),
        Vec::new(),
        blocks.len(),
        Vec::new(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::builtin_architecture;
    use crate::circuit::GateKind;

    fn params() -> BaselineParams {
        BaselineParams::from_spec(&builtin_architecture("baseline1000").unwrap()).unwrap()
    }

    #[test]
    fn distant_cnot_needs_swaps() {
        let mut c = LogicalCircuit::new("far", 9);
        c.push(GateKind::Cnot, &[0, 8]);
        let p = schedule_baseline(&c, 9, &params()).unwrap();
        // (0,0) to (2,2): three steps bring the control adjacent.
        assert_eq!(p.counters.swap, 3);
        assert_eq!(p.counters.cnot, 10);
        let swap = p.events.iter().find(|e| e.label == "SWAP").unwrap();
        assert_eq!(swap.duration_ns, 45_000);
    }

    #[test]
    fn neighbours_need_no_swaps() {
        let mut c = LogicalCircuit::new("near", 4);
        c.push(GateKind::Cnot, &[0, 1]);
        c.push(GateKind::Toffoli, &[1, 2, 0]);
        let p = schedule_baseline(&c, 4, &params()).unwrap();
        assert_eq!(p.counters.swap, 0);
    }

    #[test]
    fn grid_too_small() {
        let c = LogicalCircuit::new("wide", 10);
        assert!(matches!(schedule_baseline(&c, 9, &params()), Err(CompileError::GridTooSmall { .. })));
    }

    #[test]
    fn idle_fills_every_gap() {
        let mut c = LogicalCircuit::new("idle", 3);
        c.push(GateKind::H, &[0]);
        c.push(GateKind::Cnot, &[0, 1]);
        c.push(GateKind::T, &[2]);
        let p = schedule_baseline(&c, 4, &params()).unwrap();
        for q in 0..3u32 {
            let covered: Nanos = p.events.iter().filter(|e| e.qubits.contains(&q)).map(|e| e.duration_ns).sum();
            assert_eq!(covered, p.makespan_ns, "q{q}");
        }
    }
}
