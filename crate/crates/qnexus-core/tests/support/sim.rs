//! State-vector and classical simulation of small circuits, and random
//! circuit strategies on up to six qubits.

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use proptest::prelude::*;
use qnexus_core::circuit::{
    generate_cuccaro_adder, rewrite_depth_reduce, AdderLayout, GateKind, GateOp, LogicalCircuit,
};
pub fn phase(theta: f64) -> C {
    C::from_polar(1.0, theta)
}

pub fn bit(i: usize, q: u32) -> bool {
    (i >> q) & 1 == 1
}

/// Applies `op` to a state vector whose index bit `q` holds qubit `q`.
pub fn apply(op: &GateOp, psi: &mut [C]) {
    let q = &op.qubits;
    let diag = |psi: &mut [C], f: &dyn Fn(usize) -> C| {
        for (i, a) in psi.iter_mut().enumerate() {
            *a *= f(i);
        }
    };
    let permute = |psi: &mut [C], f: &dyn Fn(usize) -> usize| {
        let old = psi.to_vec();
        for (i, a) in old.into_iter().enumerate() {
            psi[f(i)] = a;
        }
    };
    let one = C::new(1.0, 0.0);
    match op.kind {
        GateKind::H => {
            let m = 1usize << q[0];
            let s = std::f64::consts::FRAC_1_SQRT_2;
            for i in 0..psi.len() {
                if i & m == 0 {
                    let (a, b) = (psi[i], psi[i | m]);
                    psi[i] = (a + b) * s;
                    psi[i | m] = (a - b) * s;
                }
            }
        }
        GateKind::X => permute(psi, &|i| i ^ (1 << q[0])),
        GateKind::Z => diag(psi, &|i| if bit(i, q[0]) { -one } else { one }),
        GateKind::S => diag(psi, &|i| if bit(i, q[0]) { C::i() } else { one }),
        GateKind::T => diag(psi, &|i| if bit(i, q[0]) { phase(PI / 4.0) } else { one }),
        GateKind::Tdg => diag(psi, &|i| if bit(i, q[0]) { phase(-PI / 4.0) } else { one }),
        GateKind::Rz(t) => diag(psi, &|i| if bit(i, q[0]) { phase(t / 2.0) } else { phase(-t / 2.0) }),
        GateKind::CPhase(t) => diag(psi, &|i| if bit(i, q[0]) && bit(i, q[1]) { phase(t) } else { one }),
        GateKind::Cz => diag(psi, &|i| if bit(i, q[0]) && bit(i, q[1]) { -one } else { one }),
        GateKind::Ccz => diag(psi, &|i| if bit(i, q[0]) && bit(i, q[1]) && bit(i, q[2]) { -one } else { one }),
        GateKind::Cnot => permute(psi, &|i| if bit(i, q[0]) { i ^ (1 << q[1]) } else { i }),
        GateKind::Toffoli => permute(psi, &|i| if bit(i, q[0]) && bit(i, q[1]) { i ^ (1 << q[2]) } else { i }),
        GateKind::Swap => permute(psi, &|i| {
            let (a, b) = (bit(i, q[0]), bit(i, q[1]));
            let mut j = i & !(1 << q[0]) & !(1 << q[1]);
            if a {
                j |= 1 << q[1];
            }
            if b {
                j |= 1 << q[0];
            }
            j
        }),
        GateKind::Measure | GateKind::Prep => panic!("not unitary"),
    }
}

/// Columns of the circuit unitary.
pub fn unitary(n: u32, ops: &[GateOp]) -> Vec<Vec<C>> {
    (0..1usize << n)
        .map(|col| {
            let mut psi = vec![C::new(0.0, 0.0); 1 << n];
            psi[col] = C::new(1.0, 0.0);
            for op in ops {
                apply(op, &mut psi);
            }
            psi
        })
        .collect()
}

pub fn equal_up_to_phase(u: &[Vec<C>], v: &[Vec<C>]) -> bool {
    let (col, row) =
        (0..u.len()).flat_map(|c| (0..u.len()).map(move |r| (c, r))).find(|&(c, r)| u[c][r].norm() > 1e-6).unwrap();
    let g = v[col][row] / u[col][row];
    if (g.norm() - 1.0).abs() > 1e-9 {
        return false;
    }
    u.iter().zip(v).all(|(a, b)| a.iter().zip(b).all(|(x, y)| (*x * g - *y).norm() < 1e-9))
}

pub fn distinct(n: u32, k: usize) -> impl Strategy<Value = Vec<u32>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(move |v| v[..k].to_vec())
}

pub fn gate(n: u32) -> impl Strategy<Value = GateOp> {
    let angle = (-8i32..=8).prop_map(|k| k as f64 * PI / 8.0);
    let one = prop_oneof![
        Just(GateKind::H),
        Just(GateKind::S),
        Just(GateKind::X),
        Just(GateKind::Z),
        Just(GateKind::T),
        Just(GateKind::Tdg),
        angle.clone().prop_map(GateKind::Rz),
    ];
    let two =
        prop_oneof![Just(GateKind::Cnot), Just(GateKind::Cz), Just(GateKind::Swap), angle.prop_map(GateKind::CPhase),];
    let three = prop_oneof![Just(GateKind::Toffoli), Just(GateKind::Ccz)];
    let mut options = vec![(one, distinct(n, 1)).prop_map(|(k, q)| GateOp::new(k, &q)).boxed()];
    if n >= 2 {
        options.push((two, distinct(n, 2)).prop_map(|(k, q)| GateOp::new(k, &q)).boxed());
    }
    if n >= 3 {
        options.push((three, distinct(n, 3)).prop_map(|(k, q)| GateOp::new(k, &q)).boxed());
    }
    proptest::strategy::Union::new(options)
}

pub fn circuit() -> impl Strategy<Value = LogicalCircuit> {
    (1u32..=6).prop_flat_map(|n| {
        prop::collection::vec(gate(n), 0..40).prop_map(move |ops| {
            let mut c = LogicalCircuit::new("random", n);
            for op in ops {
                c.push_op(op);
            }
            c
        })
    })
}

/// Circuits biased towards cancellations: a random prefix, its mirror image
/// with a few ops dropped, and some noise.
pub fn mirrored() -> impl Strategy<Value = LogicalCircuit> {
    circuit().prop_flat_map(|c| {
        let len = c.ops.len();
        (Just(c), prop::collection::vec(any::<bool>(), len)).prop_map(|(mut c, keep)| {
            let mirror: Vec<GateOp> = c
                .ops
                .iter()
                .rev()
                .zip(keep.iter())
                .filter(|(_, &k)| k)
                .map(|(op, _)| {
                    let kind = match op.kind {
                        GateKind::T => GateKind::Tdg,
                        GateKind::Tdg => GateKind::T,
                        GateKind::Rz(a) => GateKind::Rz(-a),
                        GateKind::CPhase(a) => GateKind::CPhase(-a),
                        k => k,
                    };
                    GateOp::new(kind, &op.qubits)
                })
                .collect();
            c.ops.extend(mirror);
            c
        })
    })
}

/// Runs a reversible circuit of X, CNOT and Toffoli gates on a bit string.
pub fn run_classical(c: &LogicalCircuit, mut bits: u64) -> u64 {
    for op in &c.ops {
        let q = &op.qubits;
        let get = |b: u64, i: u32| (b >> i) & 1 == 1;
        match op.kind {
            GateKind::X => bits ^= 1 << q[0],
            GateKind::Cnot if get(bits, q[0]) => bits ^= 1 << q[1],
            GateKind::Toffoli if get(bits, q[0]) && get(bits, q[1]) => bits ^= 1 << q[2],
            GateKind::Cnot | GateKind::Toffoli => {}
            ref k => panic!("unexpected gate {k:?}"),
        }
    }
    bits
}

/// Every input of a `bits`-bit adder: `a` is preserved, `b` becomes the sum
/// and the carry-out flips on overflow.
pub fn adder_matches_truth_table(bits: u32) -> Result<(), String> {
    let c = generate_cuccaro_adder(bits).map_err(|e| e.to_string())?;
    let l = AdderLayout { bits };
    let mask = (1u64 << bits) - 1;
    for a in 0..=mask {
        for b in 0..=mask {
            for z in 0..=1u64 {
                let mut input = z << l.carry_out();
                for i in 0..bits {
                    input |= ((a >> i) & 1) << l.a(i);
                    input |= ((b >> i) & 1) << l.b(i);
                }
                let out = run_classical(&c, input);
                let read = |f: &dyn Fn(u32) -> u32| (0..bits).map(|i| ((out >> f(i)) & 1) << i).sum::<u64>();
                let sum = a + b;
                let ok = read(&|i| l.a(i)) == a
                    && read(&|i| l.b(i)) == sum & mask
                    && (out >> l.carry_in()) & 1 == 0
                    && (out >> l.carry_out()) & 1 == z ^ (sum >> bits);
                if !ok {
                    return Err(format!("bits={bits} a={a} b={b} carry={z}: got {out:#b}"));
                }
            }
        }
    }
    Ok(())
}

/// A two-bit adder spans six qubits: its dense unitary must be the
/// permutation given by classical simulation, before and after rewriting.
pub fn two_bit_adder_matches_matrix() -> Result<(), String> {
    let c = generate_cuccaro_adder(2).map_err(|e| e.to_string())?;
    let u = unitary(6, &c.ops);
    for (col, psi) in u.iter().enumerate() {
        let expected = run_classical(&c, col as u64) as usize;
        for (row, amp) in psi.iter().enumerate() {
            let want = if row == expected { 1.0 } else { 0.0 };
            if (amp - C::new(want, 0.0)).norm() >= 1e-12 {
                return Err(format!("column {col}, row {row}: {amp}"));
            }
        }
    }
    if !equal_up_to_phase(&u, &unitary(6, &rewrite_depth_reduce(&c).ops)) {
        return Err("rewritten adder differs".into());
    }
    Ok(())
}
