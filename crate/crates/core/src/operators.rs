//! Fitness-adaptive mutation, initial populations and the broken-level generator.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::level::{place_player, Cell, Level, LevelError, TileKind};
use crate::traversal::flood_fill;

/// Tile kinds an operator may write. Gold and the player are excluded.
pub const MUTABLE_KINDS: [TileKind; 6] = [
    TileKind::Empty,
    TileKind::Brick,
    TileKind::SolidBrick,
    TileKind::Rope,
    TileKind::Ladder,
    TileKind::Enemy,
];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationConfig {
    /// Upper bound on the number of locations changed per application.
    pub m_max: u32,
    pub p_random_at_f0: f64,
    pub p_random_at_f2: f64,
}

impl Default for MutationConfig {
    fn default() -> Self {
        MutationConfig {
            m_max: 10,
            p_random_at_f0: 0.8,
            p_random_at_f2: 0.2,
        }
    }
}

impl MutationConfig {
    pub fn validate(&self) -> Result<(), String> {
        if self.m_max < 1 {
            return Err("m_max must be at least 1".into());
        }
        for p in [self.p_random_at_f0, self.p_random_at_f2] {
            if !(0.0..=1.0).contains(&p) {
                return Err(format!("probability {p} outside [0, 1]"));
            }
        }
        Ok(())
    }

    /// Probability of a random (rather than copy-from-start) tile change,
    /// linear in the parent's fitness over `[0, 2]`.
    pub fn p_random(&self, fitness: f64) -> f64 {
        let t = (fitness / 2.0).clamp(0.0, 1.0);
        self.p_random_at_f0 + (self.p_random_at_f2 - self.p_random_at_f0) * t
    }
}

/// Which branch each mutated location took.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MutationTrace {
    pub random: u32,
    pub copied: u32,
}

fn random_other_kind<R: Rng + ?Sized>(current: TileKind, rng: &mut R) -> TileKind {
    let pool: Vec<TileKind> = MUTABLE_KINDS.iter().copied().filter(|&k| k != current).collect();
    pool[rng.gen_range(0..pool.len() as u32) as usize]
}

/// Picks `k` distinct mutable locations of `lvl` (fewer if not enough exist).
fn pick_locations<R: Rng + ?Sized>(lvl: &Level, k: usize, rng: &mut R) -> Vec<usize> {
    let candidates = lvl.mutable_indices();
    let k = k.min(candidates.len());
    index::sample(rng, candidates.len(), k)
        .into_iter()
        .map(|i| candidates[i])
        .collect()
}

pub fn mutate<R: Rng + ?Sized>(
    lvl: &Level,
    lvl_start: &Level,
    parent_fitness: f64,
    cfg: &MutationConfig,
    rng: &mut R,
) -> Level {
    mutate_traced(lvl, lvl_start, parent_fitness, cfg, rng).0
}

/// Changes 1..=m_max distinct non-gold, non-player locations. Each one either
/// gets a random different kind or the starting level's tile at that location.
pub fn mutate_traced<R: Rng + ?Sized>(
    lvl: &Level,
    lvl_start: &Level,
    parent_fitness: f64,
    cfg: &MutationConfig,
    rng: &mut R,
) -> (Level, MutationTrace) {
    let k = rng.gen_range(1..=cfg.m_max) as usize;
    let p_random = cfg.p_random(parent_fitness);
    let mut child = lvl.clone();
    let mut trace = MutationTrace::default();
    for loc in pick_locations(lvl, k, rng) {
        if rng.gen::<f64>() < p_random {
            child.set_unprotected(loc, random_other_kind(child.tile_at(loc), rng));
            trace.random += 1;
        } else {
            // Gold and player never move, so the start tile here is unprotected too.
            child.set_unprotected(loc, lvl_start.tile_at(loc));
            trace.copied += 1;
        }
    }
    (child, trace)
}

pub fn initial_population<R: Rng + ?Sized>(
    lvl_start: &Level,
    n: usize,
    cfg: &MutationConfig,
    rng: &mut R,
) -> Vec<Level> {
    (0..n)
        .map(|_| mutate(lvl_start, lvl_start, 0.0, cfg, rng))
        .collect()
}

/// `k` random-kind changes at distinct mutable locations of `lvl`.
pub fn random_changes<R: Rng + ?Sized>(lvl: &Level, k: usize, rng: &mut R) -> Level {
    let mut out = lvl.clone();
    for loc in pick_locations(lvl, k, rng) {
        out.set_unprotected(loc, random_other_kind(out.tile_at(loc), rng));
    }
    out
}

/// A starting-playability band in whole percent, `lo` inclusive and `hi` exclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Band {
    lo: u8,
    hi: u8,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BandError {
    #[error("malformed band {0:?}, expected LO-HI")]
    Malformed(String),
    #[error("band {lo}-{hi} must satisfy 30 <= LO < HI <= 90")]
    OutOfRange { lo: u32, hi: u32 },
}

impl Band {
    pub const LOW: Band = Band { lo: 30, hi: 50 };
    pub const MID: Band = Band { lo: 50, hi: 70 };
    pub const HIGH: Band = Band { lo: 70, hi: 90 };
    pub const STANDARD: [Band; 3] = [Band::LOW, Band::MID, Band::HIGH];

    pub fn new(lo: u32, hi: u32) -> Result<Band, BandError> {
        if lo < 30 || hi > 90 || lo >= hi {
            return Err(BandError::OutOfRange { lo, hi });
        }
        Ok(Band {
            lo: lo as u8,
            hi: hi as u8,
        })
    }

    pub fn lo(&self) -> u32 {
        self.lo as u32
    }

    pub fn hi(&self) -> u32 {
        self.hi as u32
    }

    /// Exact integer test of `lo <= 100 * collect / total < hi`.
    pub fn contains(&self, gold_collect: u32, gold_total: u32) -> bool {
        let pct = 100 * gold_collect as u64;
        pct >= self.lo as u64 * gold_total as u64 && pct < self.hi as u64 * gold_total as u64
    }

    /// The standard band a level's gold ratio falls into, if any.
    pub fn classify(gold_collect: u32, gold_total: u32) -> Option<Band> {
        Band::STANDARD
            .into_iter()
            .find(|b| b.contains(gold_collect, gold_total))
    }
}

impl fmt::Display for Band {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl FromStr for Band {
    type Err = BandError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || BandError::Malformed(s.to_string());
        let (lo, hi) = s.trim().split_once('-').ok_or_else(malformed)?;
        let lo = lo.trim().parse().map_err(|_| malformed())?;
        let hi = hi.trim().parse().map_err(|_| malformed())?;
        Band::new(lo, hi)
    }
}

impl TryFrom<String> for Band {
    type Error = BandError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Band> for String {
    fn from(b: Band) -> String {
        b.to_string()
    }
}

/// Fraction of gold reachable from the spawn, without exploration smoothing.
pub fn gold_ratio(level: &Level) -> f64 {
    let r = flood_fill(level);
    r.gold_collect as f64 / r.gold_total as f64
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorruptError {
    #[error("input level is not playable")]
    NotPlayable,
    #[error("no level in band {band} after {attempts} attempts")]
    BandUnreachable { band: Band, attempts: u32 },
    #[error(transparent)]
    Level(#[from] LevelError),
}

/// Damages a playable level until its gold-reachable percentage lands in `band`.
///
/// Each attempt starts from the pristine level with the player removed, applies
/// 1..=6 corruptions, then respawns the player on a random empty tile. A
/// corruption either scrambles one non-gold tile or cuts a vertical run of
/// 2..=4 tiles out of a ladder.
pub fn corrupt_level<R: Rng + ?Sized>(
    playable: &Level,
    band: Band,
    rng: &mut R,
    max_attempts: u32,
) -> Result<Level, CorruptError> {
    if !flood_fill(playable).all_gold_reachable() {
        return Err(CorruptError::NotPlayable);
    }
    let base = playable.without_player();
    for _ in 0..max_attempts {
        let mut tiles = base;
        let ops = rng.gen_range(1..=6u32);
        for _ in 0..ops {
            if rng.gen_bool(0.5) {
                cut_ladder(&mut tiles, rng);
            } else {
                scramble_tile(&mut tiles, rng);
            }
        }
        let candidate = match place_player(&tiles, rng) {
            Ok(level) => level,
            Err(LevelError::NoEmptyTile) => continue,
            Err(e) => return Err(e.into()),
        };
        let report = flood_fill(&candidate);
        if band.contains(report.gold_collect, report.gold_total) {
            return Ok(candidate);
        }
    }
    Err(CorruptError::BandUnreachable {
        band,
        attempts: max_attempts,
    })
}

/// A single tile change that makes `level` playable, if one exists.
///
/// Exhaustive over every mutable location and every other mutable kind.
pub fn single_tile_repair(level: &Level) -> Option<(Cell, TileKind)> {
    let mut probe = level.clone();
    for loc in level.mutable_indices() {
        let original = level.tile_at(loc);
        for kind in MUTABLE_KINDS.into_iter().filter(|&k| k != original) {
            probe.set_unprotected(loc, kind);
            if flood_fill(&probe).all_gold_reachable() {
                return Cell::from_index(loc).map(|c| (c, kind));
            }
        }
        probe.set_unprotected(loc, original);
    }
    None
}

fn scramble_tile<R: Rng + ?Sized>(tiles: &mut crate::level::Tiles, rng: &mut R) {
    let candidates: Vec<usize> = (0..tiles.len()).filter(|&i| !tiles[i].is_protected()).collect();
    if candidates.is_empty() {
        return;
    }
    let loc = candidates[rng.gen_range(0..candidates.len() as u32) as usize];
    tiles[loc] = random_other_kind(tiles[loc], rng);
}

fn cut_ladder<R: Rng + ?Sized>(tiles: &mut crate::level::Tiles, rng: &mut R) {
    use crate::level::WIDTH;
    let ladders: Vec<usize> = (0..tiles.len()).filter(|&i| tiles[i] == TileKind::Ladder).collect();
    if ladders.is_empty() {
        return scramble_tile(tiles, rng);
    }
    let mut loc = ladders[rng.gen_range(0..ladders.len() as u32) as usize];
    let run = rng.gen_range(2..=4u32);
    for _ in 0..run {
        if loc >= tiles.len() || tiles[loc] != TileKind::Ladder {
            break;
        }
        tiles[loc] = TileKind::Empty;
        loc += WIDTH;
    }
}
