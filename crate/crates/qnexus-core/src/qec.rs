//! Error and duration formulas: logical error scaling, state transfer,
//! idling and the memory cycle-time tradeoff.

use crate::arch::ModalitySpec;

#[derive(Clone, Copy, Debug, PartialEq, thiserror::Error)]
pub enum QecError {
    #[error("physical error {p} is not below threshold {p_th}")]
    AboveThreshold { p: f64, p_th: f64 },
    #[error("sub-threshold transfer impossible: channel error {channel} >= threshold {threshold}")]
    SuperThresholdTransfer { channel: f64, threshold: f64 },
    #[error("lattice-surgery transfer needs a memory cycle no shorter than the processor cycle")]
    MemoryFasterThanProcessor,
    #[error("refresh required: storage error {error} exceeds {limit}")]
    RefreshRequired { error: f64, limit: f64 },
}

/// `a * (p / p_th)^((d + 1) / 2)`.
pub fn logical_error_per_cycle(p: f64, p_th: f64, d: u32, a: f64) -> Result<f64, QecError> {
    if !(p < p_th) {
        return Err(QecError::AboveThreshold { p, p_th });
    }
    Ok(a * libm::pow(p / p_th, (d as f64 + 1.0) / 2.0))
}

/// Inputs to the two state-transfer protocols.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransferParams {
    /// Logical error per processor QEC cycle.
    pub eps_qpu: f64,
    /// Logical error per memory QEC cycle.
    pub eps_qm: f64,
    pub eps_tele: f64,
    /// Physical error accrued while the state sat in memory.
    pub eps_eff_idle: f64,
    pub eps_th: f64,
    pub t_qpu_s: f64,
    pub t_qm_s: f64,
    pub d_qpu: u32,
    pub d_qm: u32,
    pub d_time: u32,
    /// Memory QEC cycles spent between write and read.
    pub n_idle: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transfer {
    pub error: f64,
    pub duration_s: f64,
}

/// Residual logical error from the physical channel of a transversal move.
pub fn transversal_channel_term(channel: f64, eps_th: f64, d_qpu: u32) -> Result<f64, QecError> {
    if !(channel < eps_th) {
        return Err(QecError::SuperThresholdTransfer { channel, threshold: eps_th });
    }
    Ok(libm::pow(channel / eps_th, (d_qpu as f64 + 1.0) / 2.0))
}

/// Transversal teleportation of a whole patch over the bus.
pub fn transfer_transversal(tp: &TransferParams) -> Result<Transfer, QecError> {
    let term = transversal_channel_term(tp.eps_eff_idle + tp.eps_tele, tp.eps_th, tp.d_qpu)?;
    Ok(Transfer { error: 2.0 * tp.eps_qpu + term, duration_s: 2.0 * tp.t_qpu_s })
}

/// Merge/split transfer between a processor and an actively corrected memory.
pub fn transfer_lattice_surgery(tp: &TransferParams) -> Result<Transfer, QecError> {
    if tp.t_qm_s < tp.t_qpu_s {
        return Err(QecError::MemoryFasterThanProcessor);
    }
    let d_time = tp.d_time as f64;
    let error = 2.0 * d_time * (tp.eps_qm + tp.eps_qpu * (tp.t_qm_s / tp.t_qpu_s)) + tp.n_idle * tp.eps_qm;
    Ok(Transfer { error, duration_s: 2.0 * d_time * tp.t_qm_s })
}

/// `1 - (1 - eps_cycle)^cycles`, evaluated stably for tiny rates. Fractional
/// cycle counts are accepted.
pub fn idle_error(eps_cycle: f64, cycles: f64) -> f64 {
    if cycles <= 0.0 || eps_cycle <= 0.0 {
        return 0.0;
    }
    if eps_cycle >= 1.0 {
        return 1.0;
    }
    -libm::expm1(cycles * libm::log1p(-eps_cycle))
}

/// Real-valued distance a memory with relative error `p`, slowdown penalty
/// `kappa` and cycle-time ratio `r` needs to match a processor code of
/// distance `d_a` over the same wall-clock time.
pub fn equivalent_memory_distance(p: f64, d_a: u32, kappa: f64, r: f64) -> f64 {
    let exponent = (d_a as f64 + 1.0) / 2.0;
    2.0 * (exponent * libm::log(p) + libm::log(r)) / libm::log(p / kappa) - 1.0
}

/// Smallest cycle-time ratio at which `equivalent_memory_distance` drops to `d_b`.
pub fn ratio_for_memory_distance(p: f64, d_a: u32, kappa: f64, d_b: u32) -> f64 {
    libm::pow(p / kappa, (d_b as f64 + 1.0) / 2.0) / libm::pow(p, (d_a as f64 + 1.0) / 2.0)
}

/// Physical error a stored qubit accrues over `dwell_s`: linear accumulation
/// against the dominant-channel coherence time.
pub fn stqm_storage_error(modality: &ModalitySpec, dwell_s: f64) -> f64 {
    if dwell_s <= 0.0 {
        return 0.0;
    }
    dwell_s / modality.t2_s
}

/// Like [`stqm_storage_error`], but signals when the accrued error exceeds
/// `limit`, the physical error the consuming processor can absorb.
pub fn checked_stqm_storage_error(modality: &ModalitySpec, dwell_s: f64, limit: f64) -> Result<f64, QecError> {
    let error = stqm_storage_error(modality, dwell_s);
    if error > limit {
        return Err(QecError::RefreshRequired { error, limit });
    }
    Ok(error)
}

/// Longest storage dwell that stays within `limit`.
pub fn stqm_max_dwell_s(modality: &ModalitySpec, limit: f64) -> f64 {
    limit * modality.t2_s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arch::builtin_architecture;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn calibrated_prefactor_matches_tables() {
        let a = logical_error_per_cycle(5e-4, 6e-3, 15, 0.03).unwrap();
        assert!(rel(a, 7.0e-11) < 0.03, "{a}");
        let b = logical_error_per_cycle(1e-4, 6e-3, 9, 0.03).unwrap();
        assert!(rel(b, 3.8e-11) < 0.03, "{b}");
        assert!(rel(logical_error_per_cycle(0.5, 1.0, 1, 1.0).unwrap(), 0.5) < 1e-15);
        assert!(logical_error_per_cycle(6e-3, 6e-3, 3, 0.03).is_err());
    }

    #[test]
    fn prefactor_fit_agrees_across_anchors() {
        let fit = |target: f64, ratio: f64, d: f64| target / libm::pow(ratio, (d + 1.0) / 2.0);
        let a15 = fit(7e-11, 1.0 / 12.0, 15.0);
        let a9 = fit(3.8e-11, 1.0 / 60.0, 9.0);
        assert!(rel(a15, 0.03) < 0.02 && rel(a9, 0.03) < 0.02, "{a15} {a9}");
    }

    fn a1_params() -> TransferParams {
        TransferParams {
            eps_qpu: logical_error_per_cycle(5e-4, 6e-3, 15, 0.03).unwrap(),
            eps_qm: 0.0,
            eps_tele: 1e-4,
            eps_eff_idle: 0.0,
            eps_th: 6e-3,
            t_qpu_s: 1e-6,
            t_qm_s: 0.0,
            d_qpu: 15,
            d_qm: 15,
            d_time: 15,
            n_idle: 0.0,
        }
    }

    #[test]
    fn transversal_transfer() {
        let t = transfer_transversal(&a1_params()).unwrap();
        assert!(rel(t.error, 1.4e-10) < 0.05, "{}", t.error);
        assert_eq!(t.duration_s, 2e-6);

        let noiseless = TransferParams { eps_tele: 0.0, ..a1_params() };
        let t = transfer_transversal(&noiseless).unwrap();
        assert_eq!(t.error, 2.0 * noiseless.eps_qpu);

        let half = TransferParams { eps_tele: 3e-3, d_qpu: 3, ..a1_params() };
        let t = transfer_transversal(&half).unwrap();
        assert!(rel(t.error, 2.0 * half.eps_qpu + 0.25) < 1e-12);

        let over = TransferParams { eps_tele: 6e-3, ..a1_params() };
        assert!(matches!(transfer_transversal(&over), Err(QecError::SuperThresholdTransfer { .. })));
    }

    fn a3_params() -> TransferParams {
        TransferParams {
            eps_qm: logical_error_per_cycle(1e-4, 6e-3, 9, 0.03).unwrap(),
            t_qm_s: 1e-3,
            d_qm: 9,
            ..a1_params()
        }
    }

    #[test]
    fn lattice_surgery_transfer() {
        let t = transfer_lattice_surgery(&a3_params()).unwrap();
        assert!(rel(t.error, 2.1e-6) < 0.05, "{}", t.error);
        assert!(rel(t.duration_s, 3.0e-2) < 1e-12);

        let perfect = TransferParams { eps_qm: 0.0, ..a3_params() };
        let t = transfer_lattice_surgery(&perfect).unwrap();
        assert!(rel(t.error, 30.0 * perfect.eps_qpu * 1000.0) < 1e-12);

        let fast = TransferParams { t_qm_s: 1e-7, ..a3_params() };
        assert!(transfer_lattice_surgery(&fast).is_err());
    }

    #[test]
    fn idle_worked_examples() {
        assert_eq!(idle_error(0.3, 0.0), 0.0);
        let e_a = logical_error_per_cycle(1.0, 12.0, 25, 0.03).unwrap();
        let one_second = idle_error(e_a, 1e6);
        assert!(rel(one_second, 3.33e-10) < 0.2, "{one_second}");
        let e_b = logical_error_per_cycle(1.0, 60.0, 9, 0.03).unwrap();
        let four = idle_error(e_b, 4.0);
        assert!(rel(four, 1.54e-10) < 0.2, "{four}");
        assert!(four < one_second);
    }

    #[test]
    fn memory_distance_crossing() {
        let d = equivalent_memory_distance(1.0 / 12.0, 25, 5.0, 1.368e5);
        assert!((d - 9.0).abs() < 0.01, "{d}");
        let same = equivalent_memory_distance(1.0 / 12.0, 25, 1.0, 1.0);
        assert!((same - 25.0).abs() < 1e-9);
        let r = ratio_for_memory_distance(1.0 / 12.0, 25, 5.0, 9);
        let crossing_ms = r * 1e-6 * 1e3;
        assert!((130.0..=140.0).contains(&crossing_ms), "{crossing_ms}");
        assert!((equivalent_memory_distance(1.0 / 12.0, 25, 5.0, r) - 9.0).abs() < 1e-9);
    }

    #[test]
    fn memory_distance_monotone_sweep() {
        let mut prev = f64::INFINITY;
        let mut crossed = None;
        for i in 0..=200 {
            let r = libm::pow(10.0, 4.0 + 2.0 * i as f64 / 200.0);
            let d = equivalent_memory_distance(1.0 / 12.0, 25, 5.0, r);
            assert!(d < prev);
            if crossed.is_none() && d <= 9.0 {
                crossed = Some(r);
            }
            prev = d;
        }
        let r = crossed.unwrap();
        assert!((1.3e5..1.45e5).contains(&r), "{r}");
    }

    #[test]
    fn stqm_storage() {
        let a1 = builtin_architecture("A1").unwrap();
        let m = &a1.module("stqm").unwrap().modality;
        assert_eq!(stqm_storage_error(m, 0.0), 0.0);
        let e = checked_stqm_storage_error(m, 0.1, 5e-4).unwrap();
        assert!(rel(e, 2.78e-6) < 0.01);
        let max = stqm_max_dwell_s(m, 5e-4);
        assert!(rel(max, 18.0) < 1e-12);
        assert!(checked_stqm_storage_error(m, max * 1.001, 5e-4).is_err());
    }

    #[test]
    fn thinner_memory_beats_baseline_at_250ms() {
        let e_a = logical_error_per_cycle(1.0, 12.0, 25, 0.03).unwrap();
        let e_b = logical_error_per_cycle(1.0, 60.0, 9, 0.03).unwrap();
        assert!(idle_error(e_b, 1.0 / 0.25) < idle_error(e_a, 1e6));
    }

    proptest! {
        #[test]
        fn logical_error_monotone(p in 1e-6f64..5e-3, d in 1u32..40, a in 0.001f64..1.0) {
            let th = 6e-3;
            let base = logical_error_per_cycle(p, th, d, a).unwrap();
            prop_assert!(logical_error_per_cycle(p, th, d + 2, a).unwrap() < base);
            prop_assert!(logical_error_per_cycle(p * 1.1, th, d, a).unwrap() > base);
        }

        #[test]
        fn idle_composes(e in 1e-15f64..1e-2, a in 0.0f64..1e6, b in 0.0f64..1e6) {
            let whole = idle_error(e, a + b);
            let parts = 1.0 - (1.0 - idle_error(e, a)) * (1.0 - idle_error(e, b));
            prop_assert!((whole - parts).abs() <= 1e-12 * whole.max(1e-300));
        }

        #[test]
        fn lattice_surgery_duration_linear(t in 1e-6f64..1e-2, d in 1u32..40, s in 1.0f64..10.0) {
            let tp = TransferParams { t_qm_s: t.max(1e-6), d_time: d, ..a3_params() };
            let a = transfer_lattice_surgery(&tp).unwrap().duration_s;
            let scaled = TransferParams { t_qm_s: tp.t_qm_s * s, ..tp };
            let b = transfer_lattice_surgery(&scaled).unwrap().duration_s;
            prop_assert!((b - a * s).abs() <= 1e-12 * b);
            let doubled = TransferParams { d_time: 2 * d, ..tp };
            let c = transfer_lattice_surgery(&doubled).unwrap().duration_s;
            prop_assert!((c - 2.0 * a).abs() <= 1e-12 * c);
        }
    }
}
