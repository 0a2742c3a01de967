use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::operators::Band;
use crate::search::{Algorithm, Curve, FitnessGrid, RepairOutcome};

/// One repair run, as stored in `records.jsonl`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub level_id: String,
    /// Starting gold-reachable band; `None` only for levels outside every band.
    pub band: Option<Band>,
    pub algorithm: Algorithm,
    pub repeat: u32,
    pub seed: u64,
    pub success: bool,
    pub changes: u32,
    pub best_fitness: f64,
    pub evals_used: u64,
    pub evals_to_first_success: Option<u64>,
    pub iterations: u64,
    /// MAP-Elites archive, or the ES passive archive.
    pub qd_score: Option<f64>,
    pub coverage: Option<f64>,
    pub archive: Option<FitnessGrid>,
    /// Spacing of `curve` and `qd_curve`.
    pub curve_every: u64,
    pub curve: Curve,
    pub qd_curve: Curve,
    pub error: Option<String>,
}

/// Best-so-far value at every multiple of `every`, plus the final evaluation.
pub fn subsample_curve(curve: &Curve, every: u64, evals_used: u64) -> Curve {
    let mut out = Vec::new();
    let mut k = 0;
    let mut value = match curve.first() {
        Some(&(_, v)) => v,
        None => return out,
    };
    let mut at = every;
    while at <= evals_used {
        while k < curve.len() && curve[k].0 <= at {
            value = curve[k].1;
            k += 1;
        }
        out.push((at, value));
        at += every;
    }
    if out.last().map(|p| p.0) != Some(evals_used) {
        out.push((evals_used, curve.last().map_or(value, |p| p.1)));
    }
    out
}

impl RunRecord {
    pub fn from_outcome(
        level_id: &str,
        band: Option<Band>,
        repeat: u32,
        seed: u64,
        curve_every: u64,
        outcome: &RepairOutcome,
    ) -> RunRecord {
        let r = &outcome.result;
        RunRecord {
            level_id: level_id.to_string(),
            band,
            algorithm: outcome.algorithm,
            repeat,
            seed,
            success: r.success,
            changes: r.changes,
            best_fitness: r.best_fitness,
            evals_used: r.evals_used,
            evals_to_first_success: r.first_success_eval,
            iterations: r.iterations,
            qd_score: outcome.archive.as_ref().map(|a| a.qd_score()),
            coverage: outcome.archive.as_ref().map(|a| a.coverage()),
            archive: outcome.archive.as_ref().map(|a| a.fitness_grid()),
            curve_every,
            curve: subsample_curve(&r.fitness_curve, curve_every, r.evals_used),
            qd_curve: outcome.qd_curve.clone(),
            error: None,
        }
    }

    pub fn failed(level_id: &str, band: Option<Band>, algorithm: Algorithm, repeat: u32, seed: u64, error: String) -> RunRecord {
        RunRecord {
            level_id: level_id.to_string(),
            band,
            algorithm,
            repeat,
            seed,
            success: false,
            changes: 0,
            best_fitness: 0.0,
            evals_used: 0,
            evals_to_first_success: None,
            iterations: 0,
            qd_score: None,
            coverage: None,
            archive: None,
            curve_every: 1,
            curve: Vec::new(),
            qd_curve: Vec::new(),
            error: Some(error),
        }
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}

pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let file = std::fs::File::create(path).map_err(|e| HarnessError::io(path, e))?;
    let mut w = std::io::BufWriter::new(file);
    for r in records {
        writeln!(w, "{}", r.to_json_line()).map_err(|e| HarnessError::io(path, e))?;
    }
    w.flush().map_err(|e| HarnessError::io(path, e))
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let file = std::fs::File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| HarnessError::Config(format!("{}:{}: {e}", path.display(), i + 1)))?;
        out.push(rec);
    }
    Ok(out)
}
