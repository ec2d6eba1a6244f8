//! Magic-state factory pools.

use alloc::vec::Vec;

use crate::time::Nanos;

/// Factories serving one processor. Each factory buffers at most one state
/// and starts the next one as soon as its state is taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoryPool {
    pub period_ns: Nanos,
    ready_at: Vec<Nanos>,
}

impl FactoryPool {
    /// A pool whose factories all hold a state at time zero.
    pub fn new(factories: usize, period_ns: Nanos) -> FactoryPool {
        FactoryPool { period_ns, ready_at: alloc::vec![0; factories.max(1)] }
    }

    pub fn len(&self) -> usize {
        self.ready_at.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ready_at.is_empty()
    }

    /// Earliest time a state is available at or after `t`, without taking it.
    pub fn peek(&self, t: Nanos) -> Nanos {
        self.ready_at.iter().map(|&a| a.max(t)).min().unwrap_or(t)
    }

    /// Takes a state at or after `t` from the earliest-ready factory, lowest
    /// index first on ties. Returns the consumption time.
    pub fn consume(&mut self, t: Nanos) -> Nanos {
        let (idx, at) = self
            .ready_at
            .iter()
            .enumerate()
            .map(|(i, &a)| (i, a.max(t)))
            .min_by_key(|&(i, a)| (a, i))
            .unwrap_or((0, t));
        self.ready_at[idx] = at + self.period_ns;
        at
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn throughput_limited_by_period() {
        let mut p = FactoryPool::new(2, 100);
        assert_eq!(p.consume(0), 0);
        assert_eq!(p.consume(0), 0);
        assert_eq!(p.consume(0), 100);
        assert_eq!(p.consume(10), 100);
        assert_eq!(p.peek(0), 200);
        assert_eq!(p.consume(500), 500);
    }

    #[test]
    fn enough_factories_never_stall() {
        let mut p = FactoryPool::new(9, 90_000);
        let mut t = 0;
        for _ in 0..1000 {
            let s = p.consume(t);
            assert_eq!(s, t);
            t = s + 30_000;
        }
    }
}
