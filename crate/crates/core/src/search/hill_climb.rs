use rand::Rng;

use super::{Budget, SearchResult, Tracker};
use crate::level::Level;
use crate::operators::MUTABLE_KINDS;

/// Location-wise best-improvement hill climber.
///
/// Each step samples one mutable location and evaluates every other tile kind
/// there, adopting the best only if it strictly beats the current level. Ties
/// keep the current tile, then the lowest kind ordinal. Each alternative costs
/// one evaluation; a step cut short by the budget still adopts the best seen.
pub fn hill_climb<R: Rng + ?Sized>(start: &Level, budget: Budget, rng: &mut R) -> SearchResult {
    let mut tracker = Tracker::new(start, budget);
    let locations = start.mutable_indices();
    let mut current = start.clone();
    let mut current_fitness = tracker
        .evaluate(&current)
        .expect("budget admits one evaluation")
        .total();
    let mut steps = 0;
    while tracker.remaining() > 0 && !locations.is_empty() {
        let loc = locations[rng.gen_range(0..locations.len() as u32) as usize];
        let here = current.tile_at(loc);
        let mut best: Option<(Level, f64)> = None;
        for kind in MUTABLE_KINDS.into_iter().filter(|&k| k != here) {
            let mut candidate = current.clone();
            candidate.set_unprotected(loc, kind);
            let Some(eval) = tracker.evaluate(&candidate) else {
                break;
            };
            let bar = best.as_ref().map_or(current_fitness, |b| b.1);
            if eval.total() > bar {
                best = Some((candidate, eval.total()));
            }
        }
        if let Some((lvl, f)) = best {
            current = lvl;
            current_fitness = f;
        }
        steps += 1;
    }
    tracker.finish(steps)
}
