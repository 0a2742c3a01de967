use rand::Rng;

use super::{Budget, SearchResult, Tracker};
use crate::level::Level;
use crate::operators::random_changes;

/// Upper bound on the random tile changes applied to each sample.
pub const RS_MAX_CHANGES: u32 = 20;

/// Samples `start` with 0..=20 random tile changes per evaluation and keeps the
/// best. The unmodified start is always evaluated first.
pub fn random_search<R: Rng + ?Sized>(start: &Level, budget: Budget, rng: &mut R) -> SearchResult {
    let mut tracker = Tracker::new(start, budget);
    tracker.evaluate(start);
    let mut samples = 1;
    while tracker.remaining() > 0 {
        let k = rng.gen_range(0..=RS_MAX_CHANGES) as usize;
        let candidate = random_changes(start, k, rng);
        tracker.evaluate(&candidate);
        samples += 1;
    }
    tracker.finish(samples)
}
