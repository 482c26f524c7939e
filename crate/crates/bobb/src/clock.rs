use std::time::Instant;

use bobb_core::clock::Clock;

/// Seconds elapsed since the clock was started. Copies share the origin,
/// so worker threads can carry their own copy and agree on deadlines.
#[derive(Debug, Clone, Copy)]
pub struct StdClock {
    origin: Instant,
}

impl StdClock {
    pub fn start() -> Self {
        Self { origin: Instant::now() }
    }
}

impl Clock for StdClock {
    fn now(&self) -> f64 {
        self.origin.elapsed().as_secs_f64()
    }
}
