//! Workload generators.

use alloc::vec::Vec;
use core::f64::consts::PI;

use super::{CircuitError, GateKind, LogicalCircuit, QubitId, QubitRole};

/// Smallest `k` such that a controlled phase of `pi / 2^k` is below the
/// configured two-qubit gate error, so omitting it costs less than running it.
pub fn default_aqft_truncation(eps_2q: f64) -> u32 {
    let mut k = 1;
    while k < 1024 && PI / libm::pow(2.0, k as f64) >= eps_2q {
        k += 1;
    }
    k
}

/// Approximate quantum Fourier transform on `n` qubits.
///
/// Qubit `j` receives a Hadamard followed by controlled phases `pi / 2^(m-j)`
/// from every later qubit `m`. Phases with exponent `m - j >= k_th` are dropped.
pub fn generate_aqft(n: u32, k_th: u32) -> Result<LogicalCircuit, CircuitError> {
    if n == 0 {
        return Err(CircuitError::InvalidParameter("aqft needs n >= 1"));
    }
    if k_th == 0 {
        return Err(CircuitError::InvalidParameter("aqft needs k_th >= 1"));
    }
    let mut c = LogicalCircuit::new("aqft", n);
    c.set_param("n", n);
    c.set_param("k_th", k_th);
    for j in 0..n {
        c.push(GateKind::H, &[j]);
        for m in (j + 1)..n {
            let k = m - j;
            if k >= k_th {
                break;
            }
            c.push(GateKind::CPhase(PI / libm::pow(2.0, k as f64)), &[m, j]);
        }
    }
    Ok(c)
}

/// Qubit layout of the ripple-carry adder: `c0`, then `a[0..bits]`,
/// `b[0..bits]` and the carry-out `z`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AdderLayout {
    pub bits: u32,
}

impl AdderLayout {
    pub fn carry_in(&self) -> QubitId {
        0
    }
    pub fn a(&self, i: u32) -> QubitId {
        1 + i
    }
    pub fn b(&self, i: u32) -> QubitId {
        1 + self.bits + i
    }
    pub fn carry_out(&self) -> QubitId {
        1 + 2 * self.bits
    }
    pub fn width(&self) -> u32 {
        2 * self.bits + 2
    }
}

fn maj(c: &mut LogicalCircuit, x: QubitId, y: QubitId, z: QubitId, tag: &str) {
    c.push_op(super::GateOp::new(GateKind::Cnot, &[z, y]).tagged(tag));
    c.push_op(super::GateOp::new(GateKind::Cnot, &[z, x]).tagged(tag));
    c.push_op(super::GateOp::new(GateKind::Toffoli, &[x, y, z]).tagged(tag));
}

fn uma(c: &mut LogicalCircuit, x: QubitId, y: QubitId, z: QubitId, tag: &str) {
    c.push_op(super::GateOp::new(GateKind::Toffoli, &[x, y, z]).tagged(tag));
    c.push_op(super::GateOp::new(GateKind::Cnot, &[z, x]).tagged(tag));
    c.push_op(super::GateOp::new(GateKind::Cnot, &[x, y]).tagged(tag));
}

/// Ripple-carry (MAJ/UMA) adder computing `b <- a + b` with the carry XORed
/// into the carry-out qubit. Uses `2 * bits + 2` qubits and `2 * bits` Toffolis.
pub fn generate_cuccaro_adder(bits: u32) -> Result<LogicalCircuit, CircuitError> {
    if bits == 0 {
        return Err(CircuitError::InvalidParameter("adder needs bits >= 1"));
    }
    let l = AdderLayout { bits };
    let mut c = LogicalCircuit::new("cuccaro_adder", l.width());
    c.set_param("bits", bits);
    c.set_role(l.carry_in(), QubitRole::Ancilla);
    c.set_role(l.carry_out(), QubitRole::Ancilla);
    let tag = "adder";
    maj(&mut c, l.carry_in(), l.b(0), l.a(0), tag);
    for i in 1..bits {
        maj(&mut c, l.a(i - 1), l.b(i), l.a(i), tag);
    }
    c.push_op(super::GateOp::new(GateKind::Cnot, &[l.a(bits - 1), l.carry_out()]).tagged(tag));
    for i in (1..bits).rev() {
        uma(&mut c, l.a(i - 1), l.b(i), l.a(i), tag);
    }
    uma(&mut c, l.carry_in(), l.b(0), l.a(0), tag);
    Ok(c)
}

/// Mode index of spin species `s` at lattice site `(x, y)`.
pub fn hubbard_mode(lx: u32, ly: u32, s: u32, x: u32, y: u32) -> QubitId {
    s * lx * ly + y * lx + x
}

/// One or more first-order Trotter steps of the 2D Fermi-Hubbard model.
///
/// Hopping terms are CNOT-Rz-CNOT on lattice-adjacent modes of the same spin,
/// grouped into horizontal-even, horizontal-odd, vertical-even and
/// vertical-odd sublayers. The interaction layer applies one controlled phase
/// between the two spin modes of every site.
pub fn generate_fermi_hubbard_step(lx: u32, ly: u32, trotter_steps: u32) -> Result<LogicalCircuit, CircuitError> {
    if lx == 0 || ly == 0 || trotter_steps == 0 {
        return Err(CircuitError::InvalidParameter("hubbard needs Lx, Ly, steps >= 1"));
    }
    let hop_angle = 0.05;
    let onsite_angle = 0.1;
    let mut c = LogicalCircuit::new("fermi_hubbard", 2 * lx * ly);
    c.set_param("lx", lx);
    c.set_param("ly", ly);
    c.set_param("steps", trotter_steps);
    c.set_param("hop_angle", hop_angle);
    c.set_param("onsite_angle", onsite_angle);
    let mut bonds: Vec<((u32, u32), (u32, u32))> = Vec::new();
    for parity in 0..2 {
        for y in 0..ly {
            for x in (parity..lx.saturating_sub(1)).step_by(2) {
                bonds.push(((x, y), (x + 1, y)));
            }
        }
    }
    for parity in 0..2 {
        for y in (parity..ly.saturating_sub(1)).step_by(2) {
            for x in 0..lx {
                bonds.push(((x, y), (x, y + 1)));
            }
        }
    }
    for _ in 0..trotter_steps {
        for &((x0, y0), (x1, y1)) in &bonds {
            for s in 0..2 {
                let a = hubbard_mode(lx, ly, s, x0, y0);
                let b = hubbard_mode(lx, ly, s, x1, y1);
                c.push(GateKind::Cnot, &[a, b]);
                c.push(GateKind::Rz(hop_angle), &[b]);
                c.push(GateKind::Cnot, &[a, b]);
            }
        }
        for y in 0..ly {
            for x in 0..lx {
                let up = hubbard_mode(lx, ly, 0, x, y);
                let down = hubbard_mode(lx, ly, 1, x, y);
                c.push(GateKind::CPhase(onsite_angle), &[up, down]);
            }
        }
    }
    Ok(c)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RsaSubroutine {
    Adder33,
    Lookup6,
    Phaseup6,
}

impl RsaSubroutine {
    pub const ALL: [RsaSubroutine; 3] = [RsaSubroutine::Adder33, RsaSubroutine::Lookup6, RsaSubroutine::Phaseup6];

    pub fn name(&self) -> &'static str {
        match self {
            RsaSubroutine::Adder33 => "adder33",
            RsaSubroutine::Lookup6 => "lookup6",
            RsaSubroutine::Phaseup6 => "phaseup6",
        }
    }

    pub fn tag(&self) -> &'static str {
        match self {
            RsaSubroutine::Adder33 => "adder",
            RsaSubroutine::Lookup6 => "lookup",
            RsaSubroutine::Phaseup6 => "phaseup",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

pub const LOOKUP6_DEFAULT_TOFFOLIS: u32 = 63;
pub const PHASEUP6_DEFAULT_CCZ: u32 = 63;

const ADDRESS_BITS: u32 = 6;
const LOOKUP_OUTPUT_BITS: u32 = 57;

/// Level of the unary-iteration tree touched at step `t`: the leaf level
/// changes every step, the level above every second step, and so on.
fn iteration_level(t: u32) -> u32 {
    (ADDRESS_BITS - 1) - (t + 1).trailing_zeros().min(ADDRESS_BITS - 1)
}

/// Table lookup over a 6-bit address by unary iteration.
///
/// Registers: enable (1), address (6), iteration ancillas (6), output (57).
/// Each step runs one Toffoli on the ancilla ladder, fans the leaf ancilla out
/// to two output bits and uncomputes the level below by measurement and a
/// classically controlled CZ.
pub fn generate_lookup(toffolis: u32) -> LogicalCircuit {
    let enable = 0;
    let addr = |i: u32| 1 + i;
    let anc = |i: u32| 1 + ADDRESS_BITS + i;
    let out = |i: u32| 1 + 2 * ADDRESS_BITS + i;
    let width = 1 + 2 * ADDRESS_BITS + LOOKUP_OUTPUT_BITS;
    let mut c = LogicalCircuit::new("lookup6", width);
    c.set_param("address_bits", ADDRESS_BITS);
    c.set_param("toffolis", toffolis);
    for i in 0..ADDRESS_BITS {
        c.set_role(anc(i), QubitRole::Ancilla);
    }
    let tag = "lookup";
    let op = |k: GateKind, q: &[QubitId]| super::GateOp::new(k, q).tagged(tag);
    for t in 0..toffolis {
        let h = iteration_level(t);
        let parent = if h == 0 { enable } else { anc(h - 1) };
        c.push_op(op(GateKind::Toffoli, &[parent, addr(h), anc(h)]));
        let leaf = anc(ADDRESS_BITS - 1);
        c.push_op(op(GateKind::Cnot, &[leaf, out((t * 7) % LOOKUP_OUTPUT_BITS)]));
        c.push_op(op(GateKind::Cnot, &[leaf, out((t * 13 + 3) % LOOKUP_OUTPUT_BITS)]));
        if h + 1 < ADDRESS_BITS {
            c.push_op(op(GateKind::Measure, &[anc(h + 1)]));
            c.push_op(op(GateKind::Cz, &[anc(h), addr(h + 1)]));
        }
    }
    c
}

/// Phase-table application over a 6-bit target register.
///
/// Registers: target (6), ladder ancillas (6), enable (1), phase ancilla (1).
/// Each step applies one CCZ on the ladder and a phase kick to the phase ancilla.
pub fn generate_phaseup(ccz_count: u32) -> LogicalCircuit {
    let target = |i: u32| i;
    let anc = |i: u32| ADDRESS_BITS + i;
    let enable = 2 * ADDRESS_BITS;
    let phase = 2 * ADDRESS_BITS + 1;
    let mut c = LogicalCircuit::new("phaseup6", 2 * ADDRESS_BITS + 2);
    c.set_param("target_bits", ADDRESS_BITS);
    c.set_param("ccz", ccz_count);
    for i in 0..ADDRESS_BITS {
        c.set_role(anc(i), QubitRole::Ancilla);
    }
    c.set_role(phase, QubitRole::Ancilla);
    let tag = "phaseup";
    let op = |k: GateKind, q: &[QubitId]| super::GateOp::new(k, q).tagged(tag);
    c.push_op(op(GateKind::H, &[phase]));
    for t in 0..ccz_count {
        let h = iteration_level(t);
        let parent = if h == 0 { enable } else { anc(h - 1) };
        c.push_op(op(GateKind::Ccz, &[parent, target(h), anc(h)]));
        c.push_op(op(GateKind::Cz, &[anc(ADDRESS_BITS - 1), phase]));
    }
    c.push_op(op(GateKind::H, &[phase]));
    c
}

pub fn generate_rsa_subroutine(kind: RsaSubroutine) -> LogicalCircuit {
    match kind {
        RsaSubroutine::Adder33 => {
            let mut c = generate_cuccaro_adder(33).expect("33 bits is valid");
            c.metadata.name = "adder33".into();
            c
        }
        RsaSubroutine::Lookup6 => generate_lookup(LOOKUP6_DEFAULT_TOFFOLIS),
        RsaSubroutine::Phaseup6 => generate_phaseup(PHASEUP6_DEFAULT_CCZ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;

    fn touched(c: &LogicalCircuit) -> BTreeSet<QubitId> {
        c.ops.iter().flat_map(|o| o.qubits.iter().copied()).collect()
    }

    #[test]
    fn aqft_small_cases() {
        let c = generate_aqft(1, 8).unwrap();
        assert_eq!(c.count(|k| *k == GateKind::H), 1);
        assert_eq!(c.count(|k| matches!(k, GateKind::CPhase(_))), 0);
        let c = generate_aqft(4, 8).unwrap();
        assert_eq!(c.count(|k| *k == GateKind::H), 4);
        assert_eq!(c.count(|k| matches!(k, GateKind::CPhase(_))), 6);
        assert!(generate_aqft(0, 3).is_err());
        assert!(generate_aqft(3, 0).is_err());
    }

    #[test]
    fn default_truncation_for_table_error() {
        // pi / 2^31 ~ 1.46e-9 is still above 1e-9, pi / 2^32 ~ 7.3e-10 is below.
        assert_eq!(default_aqft_truncation(1e-9), 32);
        assert_eq!(default_aqft_truncation(1.0), 2);
    }

    #[test]
    fn rsa_subroutine_widths() {
        let adder = generate_rsa_subroutine(RsaSubroutine::Adder33);
        let lookup = generate_rsa_subroutine(RsaSubroutine::Lookup6);
        let phaseup = generate_rsa_subroutine(RsaSubroutine::Phaseup6);
        assert_eq!(adder.num_qubits(), 68);
        assert_eq!(lookup.num_qubits(), 70);
        assert_eq!(phaseup.num_qubits(), 14);
        for c in [&adder, &lookup, &phaseup] {
            c.validate().unwrap();
            assert_eq!(touched(c).len(), c.num_qubits(), "{} leaves qubits unused", c.metadata.name);
        }
        assert_eq!(lookup.count(|k| *k == GateKind::Toffoli), 63);
        assert_eq!(phaseup.count(|k| *k == GateKind::Ccz), 63);
        assert_eq!(adder.count(|k| *k == GateKind::Toffoli), 66);
        assert!(adder.count(|k| !matches!(k, GateKind::Toffoli | GateKind::Cnot)) == 0);
    }

    #[test]
    fn hubbard_small_lattices() {
        let c = generate_fermi_hubbard_step(1, 1, 1).unwrap();
        assert_eq!(c.num_qubits(), 2);
        assert_eq!(c.count(|k| matches!(k, GateKind::Rz(_))), 0);
        assert_eq!(c.count(|k| matches!(k, GateKind::CPhase(_))), 1);
        let c = generate_fermi_hubbard_step(2, 1, 1).unwrap();
        assert_eq!(c.count(|k| matches!(k, GateKind::Rz(_))), 2);
        assert_eq!(c.count(|k| matches!(k, GateKind::CPhase(_))), 2);
    }

    #[test]
    fn iteration_levels_cover_tree() {
        let levels: Vec<u32> = (0..8).map(iteration_level).collect();
        assert_eq!(levels, alloc::vec![5, 4, 5, 3, 5, 4, 5, 2]);
    }
}
