use rand::Rng;

use super::{Archive, Budget, Curve, SearchResult, Tracker};
use crate::level::Level;
use crate::operators::{mutate, MutationConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeParams {
    /// Mutants of the start level evaluated before the main loop.
    pub init_count: usize,
    /// Candidates drawn from one archive snapshot before inserting them.
    pub batch_size: usize,
    pub qd_sample_every: u64,
}

impl Default for MeParams {
    fn default() -> Self {
        MeParams {
            init_count: 100,
            batch_size: 1,
            qd_sample_every: 1_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct MeOutcome {
    pub result: SearchResult,
    pub archive: Archive,
    /// QD score every `qd_sample_every` evaluations, plus the final value.
    pub qd_curve: Curve,
}

struct QdSampler {
    every: u64,
    next: u64,
    curve: Curve,
}

impl QdSampler {
    fn record(&mut self, evals: u64, archive: &Archive) {
        while evals >= self.next {
            self.curve.push((self.next, archive.qd_score()));
            self.next += self.every;
        }
    }

    fn finish(mut self, evals: u64, archive: &Archive) -> Curve {
        if self.curve.last().map(|p| p.0) != Some(evals) {
            self.curve.push((evals, archive.qd_score()));
        }
        std::mem::take(&mut self.curve)
    }
}

/// MAP-Elites over the (added ropes, added ladders) archive.
///
/// Parents are drawn uniformly from occupied cells; the elite's own fitness
/// drives the mutation schedule.
pub fn map_elites<R: Rng + ?Sized>(
    start: &Level,
    params: &MeParams,
    budget: Budget,
    cfg: &MutationConfig,
    rng: &mut R,
) -> MeOutcome {
    assert!(params.init_count >= 1 && params.batch_size >= 1 && params.qd_sample_every >= 1);
    let mut tracker = Tracker::new(start, budget);
    let mut archive = Archive::new();
    let mut sampler = QdSampler {
        every: params.qd_sample_every,
        next: params.qd_sample_every,
        curve: Vec::new(),
    };

    let mut iterations = 0;
    let mut pending_init = params.init_count;
    while tracker.remaining() > 0 {
        let batch: Vec<Level> = if pending_init > 0 {
            let n = std::mem::take(&mut pending_init);
            (0..n).map(|_| mutate(start, start, 0.0, cfg, rng)).collect()
        } else {
            (0..params.batch_size)
                .map(|_| {
                    let parent = archive.occupied_at(rng.gen_range(0..archive.len() as u32) as usize);
                    mutate(&parent.level, start, parent.fitness, cfg, rng)
                })
                .collect()
        };
        let before = tracker.evals();
        let evals = tracker.evaluate_batch(&batch);
        for (i, (level, eval)) in batch.iter().zip(&evals).enumerate() {
            archive.insert_evaluated(level, eval);
            sampler.record(before + i as u64 + 1, &archive);
        }
        iterations += 1;
    }
    let evals = tracker.evals();
    MeOutcome {
        result: tracker.finish(iterations),
        qd_curve: sampler.finish(evals, &archive),
        archive,
    }
}
