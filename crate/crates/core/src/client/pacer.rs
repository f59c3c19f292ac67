use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

/// Slack added to every interval so that boundary requests never land in the
/// same one-second window as the request `rate` slots earlier.
const GUARD: Duration = Duration::from_millis(1);

/// Token bucket with a burst of one, shared by every handle cloned from it.
#[derive(Clone, Debug)]
pub struct Pacer {
    interval: Duration,
    next_slot: Arc<Mutex<Option<Instant>>>,
}

impl Pacer {
    /// `rate` requests per second; non-positive rates disable pacing.
    pub fn new(rate: f64) -> Self {
        let interval = if rate > 0.0 {
            Duration::from_secs_f64(1.0 / rate) + GUARD
        } else {
            Duration::ZERO
        };
        Pacer {
            interval,
            next_slot: Arc::new(Mutex::new(None)),
        }
    }

    pub fn interval(&self) -> Duration {
        self.interval
    }

    /// Blocks until the caller may issue a request.
    pub fn acquire(&self) {
        let wait = {
            let mut next = self.next_slot.lock().expect("pacer lock poisoned");
            let now = Instant::now();
            let slot = next.map_or(now, |t| t.max(now));
            *next = Some(slot + self.interval);
            slot - now
        };
        if !wait.is_zero() {
            std::thread::sleep(wait);
        }
    }
}
