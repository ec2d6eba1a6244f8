//! Integer time base.
//!
//! Schedules use whole nanoseconds so that clock alignment between modules is
//! exact. Configuration values stay in seconds.

/// A point in time or a duration, in nanoseconds.
pub type Nanos = u64;

pub const NANOS_PER_SECOND: f64 = 1e9;

pub const SECONDS_PER_DAY: f64 = 86_400.0;

/// Converts seconds to the nearest whole nanosecond. Negative inputs clamp to zero.
pub fn secs_to_ns(seconds: f64) -> Nanos {
    if !(seconds > 0.0) {
        return 0;
    }
    libm::round(seconds * NANOS_PER_SECOND) as Nanos
}

pub fn ns_to_secs(ns: Nanos) -> f64 {
    ns as f64 / NANOS_PER_SECOND
}

/// Smallest multiple of `step` that is `>= value`.
pub fn ceil_to_multiple(value: Nanos, step: Nanos) -> Nanos {
    if step == 0 {
        return value;
    }
    value.div_ceil(step) * step
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_microseconds() {
        assert_eq!(secs_to_ns(1e-6), 1_000);
        assert_eq!(secs_to_ns(3e-2), 30_000_000);
        assert_eq!(ns_to_secs(2_000), 2e-6);
        assert_eq!(secs_to_ns(-1.0), 0);
    }

    #[test]
    fn multiples() {
        assert_eq!(ceil_to_multiple(50_500, 1_000), 51_000);
        assert_eq!(ceil_to_multiple(51_000, 1_000), 51_000);
        assert_eq!(ceil_to_multiple(7, 0), 7);
    }
}
