//! Memory clock synchronization.
//!
//! A memory QEC cycle may be stretched anywhere within `[t_min, t_max]` as
//! long as it stays an integer multiple of the processor cycle. A dwell of
//! `k` processor cycles is realizable with `n` memory cycles whenever
//! `n * c_min <= k <= n * c_max`, where `c_min` and `c_max` are the cycle
//! bounds in processor cycles. Using the fewest cycles minimizes idle error.

use crate::time::Nanos;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ClockError {
    #[error("no multiple of the {tq_ns} ns processor cycle fits in [{min_ns}, {max_ns}] ns")]
    NoAlignedCycle { min_ns: Nanos, max_ns: Nanos, tq_ns: Nanos },
    #[error("cycle of {required_ns} ns cannot be aligned below the {max_ns} ns maximum")]
    AboveMaximum { required_ns: Nanos, max_ns: Nanos },
}

/// Memory cycle bounds expressed in processor cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycleWindow {
    pub tq_ns: Nanos,
    pub c_min: u64,
    pub c_max: u64,
}

impl CycleWindow {
    pub fn new(t_min_ns: Nanos, t_max_ns: Nanos, tq_ns: Nanos) -> Result<CycleWindow, ClockError> {
        let c_min = t_min_ns.div_ceil(tq_ns).max(1);
        let c_max = t_max_ns / tq_ns;
        if c_max < c_min {
            return Err(ClockError::NoAlignedCycle { min_ns: t_min_ns, max_ns: t_max_ns, tq_ns });
        }
        Ok(CycleWindow { tq_ns, c_min, c_max })
    }

    /// Nominal (unstretched) memory cycle.
    pub fn nominal_ns(&self) -> Nanos {
        self.c_min * self.tq_ns
    }

    fn plan_units(&self, k: u64) -> Option<DwellPlan> {
        let n = k.div_ceil(self.c_max);
        (n * self.c_min <= k).then_some(DwellPlan { cycles: n, stretched: k > n * self.c_min })
    }

    /// Largest realizable dwell not above `d`.
    pub fn feasible_at_most(&self, d: Nanos) -> Nanos {
        let k = d / self.tq_ns;
        let n = k.div_ceil(self.c_max);
        let units = if n * self.c_min <= k { k } else { (n - 1) * self.c_max };
        units * self.tq_ns
    }

    /// Smallest realizable dwell not below `d`.
    pub fn feasible_at_least(&self, d: Nanos) -> Nanos {
        let k = d.div_ceil(self.tq_ns);
        let n = k.div_ceil(self.c_max);
        let units = if n * self.c_min <= k { k } else { n * self.c_min };
        units * self.tq_ns
    }

    pub fn plan(&self, dwell_ns: Nanos) -> Option<DwellPlan> {
        if !dwell_ns.is_multiple_of(self.tq_ns) {
            return None;
        }
        self.plan_units(dwell_ns / self.tq_ns)
    }
}

/// How a dwell is covered by memory cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DwellPlan {
    pub cycles: u64,
    /// Whether any cycle runs longer than nominal.
    pub stretched: bool,
}

/// Rounds a required memory cycle up to the next processor-cycle multiple
/// within `[t_min, t_max]`.
pub fn align_cycle(required_ns: Nanos, t_min_ns: Nanos, t_max_ns: Nanos, tq_ns: Nanos) -> Result<Nanos, ClockError> {
    let w = CycleWindow::new(t_min_ns, t_max_ns, tq_ns)?;
    let aligned = required_ns.div_ceil(tq_ns).max(w.c_min) * tq_ns;
    if aligned > w.c_max * tq_ns {
        return Err(ClockError::AboveMaximum { required_ns, max_ns: t_max_ns });
    }
    Ok(aligned)
}

/// Cycle plan for a dwell, or `None` when it cannot be realized exactly.
pub fn plan_dwell(dwell_ns: Nanos, t_min_ns: Nanos, t_max_ns: Nanos, tq_ns: Nanos) -> Option<DwellPlan> {
    CycleWindow::new(t_min_ns, t_max_ns, tq_ns).ok()?.plan(dwell_ns)
}

/// Outcome of fitting a just-in-time dwell onto the memory clock.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SyncedDwell {
    pub dwell_ns: Nanos,
    pub plan: DwellPlan,
    /// Time the qubit waits in the processor because the memory clock could
    /// not release it exactly when needed.
    pub fallback_ns: Nanos,
}

/// Fits the dwell `jit_ns` onto the memory clock, never going below
/// `min_ns`. Returns `None` when no realizable dwell lies in `[min_ns, jit_ns]`.
pub fn synchronize_dwell(w: &CycleWindow, jit_ns: Nanos, min_ns: Nanos) -> Option<SyncedDwell> {
    let d = w.feasible_at_most(jit_ns);
    if d < min_ns {
        return None;
    }
    let plan = w.plan(d)?;
    Some(SyncedDwell { dwell_ns: d, plan, fallback_ns: jit_ns - d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const US: Nanos = 1_000;

    #[test]
    fn worked_alignments() {
        assert_eq!(align_cycle(50 * US, 50 * US, 1000 * US, US), Ok(50 * US));
        assert_eq!(align_cycle(50_500, 50 * US, 60 * US, US), Ok(51 * US));
        assert!(matches!(align_cycle(61 * US, 50 * US, 60 * US, US), Err(ClockError::AboveMaximum { .. })));
        assert!(CycleWindow::new(1500, 1800, US).is_err());
    }

    #[test]
    fn fixed_cycle_memory() {
        let w = CycleWindow::new(1000 * US, 1000 * US, US).unwrap();
        assert_eq!(w.plan(3000 * US), Some(DwellPlan { cycles: 3, stretched: false }));
        assert_eq!(w.plan(2500 * US), None);
        assert_eq!(w.feasible_at_most(2500 * US), 2000 * US);
        assert_eq!(w.feasible_at_least(2500 * US), 3000 * US);
        let s = synchronize_dwell(&w, 2500 * US, 0).unwrap();
        assert_eq!((s.dwell_ns, s.fallback_ns, s.plan.cycles), (2000 * US, 500 * US, 2));
        assert!(synchronize_dwell(&w, 2500 * US, 2100 * US).is_none());
    }

    #[test]
    fn stretchable_memory() {
        let w = CycleWindow::new(50 * US, 1000 * US, US).unwrap();
        assert_eq!(w.plan(50 * US), Some(DwellPlan { cycles: 1, stretched: false }));
        assert_eq!(w.plan(51 * US), Some(DwellPlan { cycles: 1, stretched: true }));
        assert_eq!(w.plan(1500 * US), Some(DwellPlan { cycles: 2, stretched: true }));
        assert_eq!(w.plan(20 * US), None);
        assert_eq!(w.feasible_at_most(20 * US), 0);
        assert_eq!(w.feasible_at_least(20 * US), 50 * US);
        assert_eq!(w.plan(0), Some(DwellPlan { cycles: 0, stretched: false }));
    }

    proptest! {
        #[test]
        fn feasible_bounds_are_tight(cmin in 1u64..40, extra in 0u64..40, k in 0u64..5000) {
            let w = CycleWindow { tq_ns: 7, c_min: cmin, c_max: cmin + extra };
            let d = k * 7 + 3;
            let lo = w.feasible_at_most(d);
            let hi = w.feasible_at_least(d);
            prop_assert!(lo <= d && hi >= d);
            prop_assert!(w.plan(lo).is_some() && w.plan(hi).is_some());
            for units in (lo / 7 + 1)..(hi / 7) {
                prop_assert!(w.plan(units * 7).is_none());
            }
            if let Some(p) = w.plan(k * 7) {
                prop_assert!(p.cycles * w.c_min <= k && k <= p.cycles * w.c_max);
                if p.cycles > 0 {
                    prop_assert!(k > (p.cycles - 1) * w.c_max);
                }
            }
        }
    }
}
