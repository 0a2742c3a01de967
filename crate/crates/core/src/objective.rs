//! Playability, similarity, cascading total fitness and MAP-Elites behavior bins.

use serde::{Deserialize, Serialize};

use crate::level::{hamming_distance, Level, TileKind, LEVEL_SIZE};
use crate::traversal::{flood_fill, ReachabilityReport};

/// Number of bins per behavior axis.
pub const BINS_PER_AXIS: usize = 9;

/// Upper-edge labels of the behavior bins, lowest first.
pub const BIN_LABELS: [&str; BINS_PER_AXIS] = ["<0", "0", "5", "10", "15", "20", "60", "100", "100+"];

/// Smoothed gold-reachability score in `[0, 1]`.
pub fn playability(report: &ReachabilityReport) -> f64 {
    let explored = report.tiles_explored as f64 / LEVEL_SIZE as f64;
    ((report.gold_collect as f64 + explored) / report.gold_total as f64).min(1.0)
}

pub fn similarity_from_distance(distance: usize) -> f64 {
    (LEVEL_SIZE - distance) as f64 / LEVEL_SIZE as f64
}

pub fn similarity(lvl: &Level, lvl_start: &Level) -> f64 {
    similarity_from_distance(hamming_distance(lvl, lvl_start))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitnessBreakdown {
    pub playability: f64,
    pub similarity: f64,
    pub total: f64,
    pub playable: bool,
}

impl FitnessBreakdown {
    /// Cascading elitism: similarity only counts once every gold is reachable.
    pub fn cascade(report: &ReachabilityReport, distance: usize) -> FitnessBreakdown {
        let playability = playability(report);
        let similarity = similarity_from_distance(distance);
        let playable = report.all_gold_reachable();
        let total = if playable { 1.0 + similarity } else { playability };
        FitnessBreakdown {
            playability,
            similarity,
            total,
            playable,
        }
    }
}

pub fn total_fitness(lvl: &Level, lvl_start: &Level) -> FitnessBreakdown {
    FitnessBreakdown::cascade(&flood_fill(lvl), hamming_distance(lvl, lvl_start))
}

/// Added ropes and ladders relative to the starting level; negative when removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BehaviorDescriptor {
    pub ropes_delta: i32,
    pub ladders_delta: i32,
}

pub fn behavior_descriptor(lvl: &Level, lvl_start: &Level) -> BehaviorDescriptor {
    let delta = |k| lvl.count(k) as i32 - lvl_start.count(k) as i32;
    BehaviorDescriptor {
        ropes_delta: delta(TileKind::Rope),
        ladders_delta: delta(TileKind::Ladder),
    }
}

/// Archive coordinates: `ropes` is the row axis, `ladders` the column axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BinIndex {
    pub ropes: u8,
    pub ladders: u8,
}

impl BinIndex {
    pub fn new(ropes: usize, ladders: usize) -> Option<BinIndex> {
        (ropes < BINS_PER_AXIS && ladders < BINS_PER_AXIS).then_some(BinIndex {
            ropes: ropes as u8,
            ladders: ladders as u8,
        })
    }

    pub fn flat(self) -> usize {
        self.ropes as usize * BINS_PER_AXIS + self.ladders as usize
    }

    pub fn from_flat(flat: usize) -> Option<BinIndex> {
        BinIndex::new(flat / BINS_PER_AXIS, flat % BINS_PER_AXIS)
    }
}

/// Quantizes one axis: `<0`, `0`, `1..=5`, `6..=10`, `11..=15`, `16..=20`,
/// `21..=60`, `61..=100`, `>100`.
pub fn bin_delta(delta: i32) -> u8 {
    match delta {
        i32::MIN..=-1 => 0,
        0 => 1,
        1..=5 => 2,
        6..=10 => 3,
        11..=15 => 4,
        16..=20 => 5,
        21..=60 => 6,
        61..=100 => 7,
        _ => 8,
    }
}

pub fn bin_descriptor(d: BehaviorDescriptor) -> BinIndex {
    BinIndex {
        ropes: bin_delta(d.ropes_delta),
        ladders: bin_delta(d.ladders_delta),
    }
}

/// Everything the searches need from one evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub fitness: FitnessBreakdown,
    pub descriptor: BehaviorDescriptor,
    pub changes: u32,
    pub gold_collect: u32,
    pub tiles_explored: u32,
}

impl Evaluation {
    pub fn total(&self) -> f64 {
        self.fitness.total
    }

    pub fn bin(&self) -> BinIndex {
        bin_descriptor(self.descriptor)
    }
}

/// Evaluates candidates against a fixed starting level (one flood fill each).
#[derive(Debug, Clone)]
pub struct Evaluator {
    start: Level,
    start_ropes: i32,
    start_ladders: i32,
}

impl Evaluator {
    pub fn new(start: &Level) -> Evaluator {
        Evaluator {
            start: start.clone(),
            start_ropes: start.count(TileKind::Rope) as i32,
            start_ladders: start.count(TileKind::Ladder) as i32,
        }
    }

    pub fn start(&self) -> &Level {
        &self.start
    }

    pub fn evaluate(&self, lvl: &Level) -> Evaluation {
        let report = flood_fill(lvl);
        let mut changes = 0u32;
        let mut ropes = 0i32;
        let mut ladders = 0i32;
        for (&a, &b) in lvl.tiles().iter().zip(self.start.tiles().iter()) {
            changes += u32::from(a != b);
            ropes += i32::from(a == TileKind::Rope);
            ladders += i32::from(a == TileKind::Ladder);
        }
        Evaluation {
            fitness: FitnessBreakdown::cascade(&report, changes as usize),
            descriptor: BehaviorDescriptor {
                ropes_delta: ropes - self.start_ropes,
                ladders_delta: ladders - self.start_ladders,
            },
            changes,
            gold_collect: report.gold_collect,
            tiles_explored: report.tiles_explored,
        }
    }
}
