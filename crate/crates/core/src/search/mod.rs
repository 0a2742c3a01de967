//! The four repair algorithms and the evaluation budget they share.
//!
//! Every candidate evaluation goes through [`Tracker`], which enforces the
//! budget and maintains the best-so-far record and curve.

mod archive;
mod evolution;
mod hill_climb;
mod map_elites;
mod random;

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use archive::{coverage, qd_score, Archive, Elite, FitnessGrid, ARCHIVE_CELLS};
pub use evolution::{evolution_strategy, EsOutcome, EsParams};
pub use hill_climb::hill_climb;
pub use map_elites::{map_elites, MeOutcome, MeParams};
pub use random::{random_search, RS_MAX_CHANGES};

use crate::level::Level;
use crate::objective::{Evaluation, Evaluator};
use crate::operators::MutationConfig;

/// Maximum number of fitness evaluations (flood fills) a search may spend.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    max_evaluations: u64,
}

impl Budget {
    pub fn new(max_evaluations: u64) -> Result<Budget, ParamError> {
        if max_evaluations == 0 {
            return Err(ParamError("budget must be at least 1 evaluation".into()));
        }
        Ok(Budget { max_evaluations })
    }

    pub fn max_evaluations(&self) -> u64 {
        self.max_evaluations
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid search parameter: {0}")]
pub struct ParamError(pub String);

/// `(evaluation index, value)` samples.
pub type Curve = Vec<(u64, f64)>;

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub best: Level,
    pub best_fitness: f64,
    /// All gold reachable in `best`.
    pub success: bool,
    /// Hamming distance from the start level to `best`.
    pub changes: u32,
    pub evals_used: u64,
    /// Best-so-far fitness, one point per improvement plus the final evaluation.
    pub fitness_curve: Curve,
    pub first_success_eval: Option<u64>,
    /// Hill-climb steps, ES generations or MAP-Elites iterations.
    pub iterations: u64,
}

/// Budgeted evaluation with best-so-far bookkeeping.
pub(crate) struct Tracker {
    evaluator: Evaluator,
    budget: Budget,
    evals: u64,
    best: Option<(Level, Evaluation)>,
    curve: Curve,
    first_success: Option<u64>,
}

impl Tracker {
    pub(crate) fn new(start: &Level, budget: Budget) -> Tracker {
        Tracker {
            evaluator: Evaluator::new(start),
            budget,
            evals: 0,
            best: None,
            curve: Vec::new(),
            first_success: None,
        }
    }

    pub(crate) fn evals(&self) -> u64 {
        self.evals
    }

    pub(crate) fn remaining(&self) -> u64 {
        self.budget.max_evaluations - self.evals
    }

    pub(crate) fn evaluate(&mut self, lvl: &Level) -> Option<Evaluation> {
        if self.remaining() == 0 {
            return None;
        }
        let eval = self.evaluator.evaluate(lvl);
        self.evals += 1;
        self.observe(lvl, &eval);
        Some(eval)
    }

    /// Evaluation outside the budget; only the ES uncounted-initialization mode uses this.
    pub(crate) fn evaluate_uncounted(&mut self, lvl: &Level) -> Evaluation {
        let eval = self.evaluator.evaluate(lvl);
        self.observe(lvl, &eval);
        eval
    }

    /// Evaluates as many of `lvls` as the budget allows, in order.
    pub(crate) fn evaluate_batch(&mut self, lvls: &[Level]) -> Vec<Evaluation> {
        let take = (self.remaining().min(lvls.len() as u64)) as usize;
        let lvls = &lvls[..take];
        #[cfg(feature = "parallel")]
        let evals: Vec<Evaluation> = {
            use rayon::prelude::*;
            let evaluator = &self.evaluator;
            lvls.par_iter().map(|l| evaluator.evaluate(l)).collect()
        };
        #[cfg(not(feature = "parallel"))]
        let evals: Vec<Evaluation> = lvls.iter().map(|l| self.evaluator.evaluate(l)).collect();
        for (lvl, eval) in lvls.iter().zip(&evals) {
            self.evals += 1;
            self.observe(lvl, eval);
        }
        evals
    }

    fn observe(&mut self, lvl: &Level, eval: &Evaluation) {
        if eval.fitness.playable && self.first_success.is_none() {
            self.first_success = Some(self.evals);
        }
        let improved = match &self.best {
            None => true,
            Some((_, b)) => eval.total() > b.total(),
        };
        if improved {
            self.best = Some((lvl.clone(), *eval));
            self.curve.push((self.evals, eval.total()));
        }
    }

    pub(crate) fn finish(self, iterations: u64) -> SearchResult {
        let (best, eval) = self.best.expect("at least one evaluation");
        let mut curve = self.curve;
        if curve.last().map(|p| p.0) != Some(self.evals) {
            curve.push((self.evals, eval.total()));
        }
        SearchResult {
            best,
            best_fitness: eval.total(),
            success: eval.fitness.playable,
            changes: eval.changes,
            evals_used: self.evals,
            fitness_curve: curve,
            first_success_eval: self.first_success,
            iterations,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "rs")]
    RandomSearch,
    #[serde(rename = "hc")]
    HillClimber,
    #[serde(rename = "es")]
    EvolutionStrategy,
    #[serde(rename = "me")]
    MapElites,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [
        Algorithm::RandomSearch,
        Algorithm::HillClimber,
        Algorithm::EvolutionStrategy,
        Algorithm::MapElites,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            Algorithm::RandomSearch => "rs",
            Algorithm::HillClimber => "hc",
            Algorithm::EvolutionStrategy => "es",
            Algorithm::MapElites => "me",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for Algorithm {
    type Err = ParamError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.short_name() == s)
            .ok_or_else(|| ParamError(format!("unknown algorithm {s:?}, expected rs|hc|es|me")))
    }
}

/// Union of every algorithm's knobs; each algorithm reads the ones it uses.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SearchParams {
    pub budget: u64,
    pub mu: usize,
    pub lambda: usize,
    pub init_count: usize,
    pub mutation: MutationConfig,
    /// Whether the ES initial population is charged to the budget.
    pub count_initialization: bool,
    /// MAP-Elites candidates generated per archive snapshot; 1 is the classic loop.
    pub batch_size: usize,
    /// Spacing of the recorded QD-score curve.
    pub qd_sample_every: u64,
}

impl Default for SearchParams {
    fn default() -> Self {
        SearchParams {
            budget: 200_000,
            mu: 50,
            lambda: 50,
            init_count: 100,
            mutation: MutationConfig::default(),
            count_initialization: true,
            batch_size: 1,
            qd_sample_every: 1_000,
        }
    }
}

impl SearchParams {
    /// Defaults with the per-algorithm budget used in the reference protocol.
    pub fn defaults_for(algo: Algorithm) -> SearchParams {
        let budget = match algo {
            Algorithm::MapElites => 2_000_000,
            _ => 200_000,
        };
        SearchParams {
            budget,
            ..SearchParams::default()
        }
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        Budget::new(self.budget)?;
        self.mutation.validate().map_err(ParamError)?;
        if self.mu == 0 || self.lambda == 0 {
            return Err(ParamError("mu and lambda must be at least 1".into()));
        }
        if self.init_count == 0 {
            return Err(ParamError("init_count must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(ParamError("batch_size must be at least 1".into()));
        }
        if self.qd_sample_every == 0 {
            return Err(ParamError("qd_sample_every must be at least 1".into()));
        }
        Ok(())
    }
}

/// What a repair run produces, whichever algorithm ran.
#[derive(Debug, Clone)]
pub struct RepairOutcome {
    pub algorithm: Algorithm,
    pub result: SearchResult,
    /// MAP-Elites archive, or the ES passive archive of playable candidates.
    pub archive: Option<Archive>,
    pub qd_curve: Curve,
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Runs one algorithm from `start`, single-threaded and fully determined by `seed`.
pub fn repair(
    start: &Level,
    algorithm: Algorithm,
    params: &SearchParams,
    seed: u64,
) -> Result<RepairOutcome, ParamError> {
    params.validate()?;
    let budget = Budget::new(params.budget)?;
    let mut rng = rng_from_seed(seed);
    let outcome = match algorithm {
        Algorithm::RandomSearch => RepairOutcome {
            algorithm,
            result: random_search(start, budget, &mut rng),
            archive: None,
            qd_curve: Vec::new(),
        },
        Algorithm::HillClimber => RepairOutcome {
            algorithm,
            result: hill_climb(start, budget, &mut rng),
            archive: None,
            qd_curve: Vec::new(),
        },
        Algorithm::EvolutionStrategy => {
            let es = evolution_strategy(
                start,
                &EsParams {
                    mu: params.mu,
                    lambda: params.lambda,
                    count_initialization: params.count_initialization,
                },
                budget,
                &params.mutation,
                &mut rng,
            );
            RepairOutcome {
                algorithm,
                result: es.result,
                archive: Some(es.shadow),
                qd_curve: Vec::new(),
            }
        }
        Algorithm::MapElites => {
            let me = map_elites(
                start,
                &MeParams {
                    init_count: params.init_count,
                    batch_size: params.batch_size,
                    qd_sample_every: params.qd_sample_every,
                },
                budget,
                &params.mutation,
                &mut rng,
            );
            RepairOutcome {
                algorithm,
                result: me.result,
                archive: Some(me.archive),
                qd_curve: me.qd_curve,
            }
        }
    };
    Ok(outcome)
}
