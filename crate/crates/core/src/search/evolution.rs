use std::cmp::Ordering;

use rand::Rng;

use super::{Archive, Budget, SearchResult, Tracker};
use crate::level::Level;
use crate::objective::Evaluation;
use crate::operators::{initial_population, mutate, MutationConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EsParams {
    pub mu: usize,
    pub lambda: usize,
    /// Charge the `mu` initial evaluations to the budget.
    pub count_initialization: bool,
}

impl Default for EsParams {
    fn default() -> Self {
        EsParams {
            mu: 50,
            lambda: 50,
            count_initialization: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EsOutcome {
    pub result: SearchResult,
    /// Every playable candidate the run evaluated, binned like MAP-Elites.
    /// Never read by the search itself.
    pub shadow: Archive,
    pub generations: u64,
}

struct Member {
    level: Level,
    eval: Evaluation,
    birth: u64,
}

/// Survivor order: higher fitness, then fewer changes, then older.
fn rank(a: &Member, b: &Member) -> Ordering {
    b.eval
        .total()
        .total_cmp(&a.eval.total())
        .then(a.eval.changes.cmp(&b.eval.changes))
        .then(a.birth.cmp(&b.birth))
}

/// (mu + lambda) evolution strategy.
///
/// Only whole generations run: the loop stops once fewer than `lambda`
/// evaluations remain.
pub fn evolution_strategy<R: Rng + ?Sized>(
    start: &Level,
    params: &EsParams,
    budget: Budget,
    cfg: &MutationConfig,
    rng: &mut R,
) -> EsOutcome {
    assert!(params.mu >= 1 && params.lambda >= 1, "mu and lambda must be positive");
    let mut tracker = Tracker::new(start, budget);
    let mut shadow = Archive::new();
    let mut birth = 0u64;

    let initial = initial_population(start, params.mu, cfg, rng);
    let evals: Vec<Evaluation> = if params.count_initialization {
        tracker.evaluate_batch(&initial)
    } else {
        initial.iter().map(|l| tracker.evaluate_uncounted(l)).collect()
    };
    let mut population: Vec<Member> = initial
        .into_iter()
        .zip(evals)
        .map(|(level, eval)| {
            birth += 1;
            Member { level, eval, birth }
        })
        .collect();
    for m in &population {
        if m.eval.fitness.playable {
            shadow.insert_evaluated(&m.level, &m.eval);
        }
    }
    population.sort_by(rank);
    population.truncate(params.mu);

    let mut generations = 0;
    while !population.is_empty() && tracker.remaining() >= params.lambda as u64 {
        let offspring: Vec<Level> = (0..params.lambda)
            .map(|_| {
                let parent = &population[rng.gen_range(0..population.len() as u32) as usize];
                mutate(&parent.level, start, parent.eval.total(), cfg, rng)
            })
            .collect();
        let evals = tracker.evaluate_batch(&offspring);
        for (level, eval) in offspring.into_iter().zip(evals) {
            if eval.fitness.playable {
                shadow.insert_evaluated(&level, &eval);
            }
            birth += 1;
            population.push(Member { level, eval, birth });
        }
        population.sort_by(rank);
        population.truncate(params.mu);
        generations += 1;
    }

    EsOutcome {
        result: tracker.finish(generations),
        shadow,
        generations,
    }
}
