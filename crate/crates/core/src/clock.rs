//! Time source abstraction so that time limits work without `std`.

/// Monotone wall clock measured in seconds from an arbitrary origin.
pub trait Clock {
    fn now(&self) -> f64;
}

/// A clock that never advances; time limits never trigger.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoClock;

impl Clock for NoClock {
    fn now(&self) -> f64 {
        0.0
    }
}

/// A deadline relative to a [`Clock`].
#[derive(Clone, Copy)]
pub struct Deadline<'a> {
    clock: &'a dyn Clock,
    end: f64,
}

impl<'a> Deadline<'a> {
    pub fn after(clock: &'a dyn Clock, seconds: f64) -> Self {
        Self {
            clock,
            end: clock.now() + seconds,
        }
    }

    pub fn never(clock: &'a dyn Clock) -> Self {
        Self {
            clock,
            end: f64::INFINITY,
        }
    }

    pub fn expired(&self) -> bool {
        self.end.is_finite() && self.clock.now() >= self.end
    }

    /// The earlier of `self` and `seconds` from now.
    pub fn min_after(&self, seconds: f64) -> Self {
        let end = self.clock.now() + seconds;
        Self {
            clock: self.clock,
            end: if end < self.end { end } else { self.end },
        }
    }

    pub fn clock(&self) -> &'a dyn Clock {
        self.clock
    }
}
