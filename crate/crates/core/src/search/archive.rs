use serde::{Deserialize, Serialize};

use crate::level::Level;
use crate::objective::{
    behavior_descriptor, bin_descriptor, BehaviorDescriptor, BinIndex, Evaluation, BINS_PER_AXIS,
};

pub const ARCHIVE_CELLS: usize = BINS_PER_AXIS * BINS_PER_AXIS;

#[derive(Debug, Clone, PartialEq)]
pub struct Elite {
    pub level: Level,
    pub fitness: f64,
    pub descriptor: BehaviorDescriptor,
    pub changes: u32,
}

/// 9×9 MAP-Elites grid keyed by (added-ropes bin, added-ladders bin).
#[derive(Debug, Clone)]
pub struct Archive {
    cells: Vec<Option<Elite>>,
    /// Occupied flat indices in first-filled order; selection draws from this.
    occupied: Vec<usize>,
}

impl Default for Archive {
    fn default() -> Self {
        Archive::new()
    }
}

impl Archive {
    pub fn new() -> Archive {
        Archive {
            cells: vec![None; ARCHIVE_CELLS],
            occupied: Vec::new(),
        }
    }

    pub fn get(&self, bin: BinIndex) -> Option<&Elite> {
        self.cells[bin.flat()].as_ref()
    }

    /// Bins and elites in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (BinIndex, &Elite)> {
        self.cells.iter().enumerate().filter_map(|(i, c)| {
            c.as_ref()
                .map(|e| (BinIndex::from_flat(i).expect("flat index in range"), e))
        })
    }

    pub fn len(&self) -> usize {
        self.occupied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupied.is_empty()
    }

    pub(crate) fn occupied_at(&self, k: usize) -> &Elite {
        self.cells[self.occupied[k]]
            .as_ref()
            .expect("occupied list only holds filled cells")
    }

    /// Bin computed from the candidate's descriptor relative to `start`.
    pub fn insert(&mut self, candidate: Level, fitness: f64, start: &Level) -> bool {
        let descriptor = behavior_descriptor(&candidate, start);
        let changes = crate::level::hamming_distance(&candidate, start) as u32;
        self.insert_elite(Elite {
            level: candidate,
            fitness,
            descriptor,
            changes,
        })
    }

    pub fn insert_evaluated(&mut self, candidate: &Level, eval: &Evaluation) -> bool {
        let flat = eval.bin().flat();
        if matches!(&self.cells[flat], Some(e) if eval.total() <= e.fitness) {
            return false;
        }
        self.insert_elite(Elite {
            level: candidate.clone(),
            fitness: eval.total(),
            descriptor: eval.descriptor,
            changes: eval.changes,
        })
    }

    /// Replaces the occupant only on strictly greater fitness.
    pub fn insert_elite(&mut self, elite: Elite) -> bool {
        let flat = bin_descriptor(elite.descriptor).flat();
        match &self.cells[flat] {
            Some(incumbent) if elite.fitness <= incumbent.fitness => false,
            Some(_) => {
                self.cells[flat] = Some(elite);
                true
            }
            None => {
                self.cells[flat] = Some(elite);
                self.occupied.push(flat);
                true
            }
        }
    }

    /// Sum of stored fitnesses, accumulated in row-major bin order.
    pub fn qd_score(&self) -> f64 {
        self.cells.iter().flatten().map(|e| e.fitness).sum()
    }

    pub fn coverage(&self) -> f64 {
        self.occupied.len() as f64 / ARCHIVE_CELLS as f64
    }

    pub fn fitness_grid(&self) -> FitnessGrid {
        FitnessGrid {
            cells: self.cells.iter().map(|c| c.as_ref().map(|e| e.fitness)).collect(),
        }
    }
}

/// Fitness-only snapshot of an archive; what gets exported and stored in records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitnessGrid {
    /// Row-major, `ARCHIVE_CELLS` entries.
    pub cells: Vec<Option<f64>>,
}

impl FitnessGrid {
    pub fn empty() -> FitnessGrid {
        FitnessGrid {
            cells: vec![None; ARCHIVE_CELLS],
        }
    }

    pub fn get(&self, bin: BinIndex) -> Option<f64> {
        self.cells[bin.flat()]
    }

    pub fn qd_score(&self) -> f64 {
        self.cells.iter().flatten().sum()
    }

    pub fn coverage(&self) -> f64 {
        self.cells.iter().flatten().count() as f64 / ARCHIVE_CELLS as f64
    }
}

pub fn qd_score(archive: &Archive) -> f64 {
    archive.qd_score()
}

pub fn coverage(archive: &Archive) -> f64 {
    archive.coverage()
}
