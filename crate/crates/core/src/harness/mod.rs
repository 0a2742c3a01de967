//! Experiment runner: corpus loading, seeded batch repairs, records and tables.

mod aggregate;
mod config;
pub mod heatmap;
mod record;
pub mod stats;

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use thiserror::Error;

pub use aggregate::{aggregate, Aggregates, CoverageRow, CurveRow, SuccessRow};
pub use config::{AlgorithmSpec, ExperimentConfig};
pub use record::{read_records, subsample_curve, write_records, RunRecord};

use crate::level::{Level, LevelError};
use crate::operators::Band;
use crate::search::{repair, Algorithm};
use crate::traversal::flood_fill;

pub const RECORDS_FILE: &str = "records.jsonl";

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Level { path: PathBuf, source: LevelError },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Param(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> HarnessError {
        HarnessError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

/// Per-run seed: the first 8 bytes (little-endian) of
/// SHA-256(`"{master}:{level_id}:{algorithm}:{repeat}"`).
pub fn derive_seed(master_seed: u64, level_id: &str, algorithm: Algorithm, repeat: u32) -> u64 {
    let digest = Sha256::digest(format!("{master_seed}:{level_id}:{algorithm}:{repeat}").as_bytes());
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone)]
pub struct CorpusLevel {
    pub id: String,
    pub path: PathBuf,
    pub level: Level,
    pub band: Option<Band>,
}

pub fn load_level(path: &Path) -> Result<Level, HarnessError> {
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
    Level::parse(&text).map_err(|source| HarnessError::Level {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads corpus entries; directories contribute their `*.txt` files in name order.
pub fn load_corpus(entries: &[PathBuf]) -> Result<Vec<CorpusLevel>, HarnessError> {
    let mut paths = Vec::new();
    for entry in entries {
        if entry.is_dir() {
            let mut found: Vec<PathBuf> = std::fs::read_dir(entry)
                .map_err(|e| HarnessError::io(entry, e))?
                .filter_map(|d| d.ok().map(|d| d.path()))
                .filter(|p| p.extension().is_some_and(|e| e == "txt"))
                .collect();
            found.sort();
            paths.extend(found);
        } else {
            paths.push(entry.clone());
        }
    }
    let mut out = Vec::with_capacity(paths.len());
    for path in paths {
        let level = load_level(&path)?;
        let report = flood_fill(&level);
        let id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        if out.iter().any(|c: &CorpusLevel| c.id == id) {
            return Err(HarnessError::Config(format!("duplicate level id {id:?}")));
        }
        out.push(CorpusLevel {
            id,
            path,
            band: Band::classify(report.gold_collect, report.gold_total),
            level,
        });
    }
    Ok(out)
}

#[derive(Debug, Clone)]
struct Job {
    level: usize,
    spec: usize,
    repeat: u32,
}

fn run_job(cfg: &ExperimentConfig, corpus: &[CorpusLevel], job: &Job) -> RunRecord {
    let lvl = &corpus[job.level];
    let spec = &cfg.algorithms[job.spec];
    let seed = derive_seed(cfg.master_seed, &lvl.id, spec.algo, job.repeat);
    let params = spec.params(cfg.curve_every);
    let run = std::panic::catch_unwind(|| repair(&lvl.level, spec.algo, &params, seed));
    match run {
        Ok(Ok(outcome)) => RunRecord::from_outcome(&lvl.id, lvl.band, job.repeat, seed, cfg.curve_every, &outcome),
        Ok(Err(e)) => RunRecord::failed(&lvl.id, lvl.band, spec.algo, job.repeat, seed, e.to_string()),
        Err(_) => RunRecord::failed(&lvl.id, lvl.band, spec.algo, job.repeat, seed, "run panicked".into()),
    }
}

/// Runs every (level, algorithm, repeat) combination without touching the filesystem.
///
/// Corpus levels must sit in one of the standard starting bands.
pub fn run_records(cfg: &ExperimentConfig, corpus: &[CorpusLevel]) -> Result<Vec<RunRecord>, HarnessError> {
    cfg.validate()?;
    if let Some(bad) = corpus.iter().find(|c| c.band.is_none()) {
        return Err(HarnessError::Param(format!(
            "level {} is outside the 30-90% starting-playability bands",
            bad.id
        )));
    }
    let mut jobs = Vec::new();
    for level in 0..corpus.len() {
        for spec in 0..cfg.algorithms.len() {
            for repeat in 0..cfg.repeats {
                jobs.push(Job { level, spec, repeat });
            }
        }
    }
    #[cfg(feature = "parallel")]
    let records = {
        use rayon::prelude::*;
        jobs.par_iter().map(|j| run_job(cfg, corpus, j)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let records = jobs.iter().map(|j| run_job(cfg, corpus, j)).collect();
    Ok(records)
}

/// Loads the corpus, runs everything, and writes records, tables and heatmaps
/// under `cfg.output_dir`.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<(Vec<RunRecord>, Aggregates), HarnessError> {
    cfg.validate()?;
    let corpus = load_corpus(&cfg.corpus)?;
    let records = run_records(cfg, &corpus)?;
    let out = &cfg.output_dir;
    let heatmaps = out.join("heatmaps");
    std::fs::create_dir_all(&heatmaps).map_err(|e| HarnessError::io(&heatmaps, e))?;
    std::fs::write(out.join("experiment.toml"), cfg.to_toml()).map_err(|e| HarnessError::io(out, e))?;
    write_records(&out.join(RECORDS_FILE), &records)?;
    write_run_heatmaps(&heatmaps, &records)?;
    let agg = aggregate(&records);
    agg.write_tables(out)?;
    Ok((records, agg))
}

fn write_run_heatmaps(dir: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    for r in records {
        if let Some(grid) = &r.archive {
            let path = dir.join(format!("{}_{}_{}.csv", r.level_id, r.algorithm, r.repeat));
            std::fs::write(&path, heatmap::export_heatmap(grid)).map_err(|e| HarnessError::io(&path, e))?;
        }
    }
    Ok(())
}

/// Recomputes tables from `records.jsonl` in `dir` and writes them back there.
pub fn report(dir: &Path) -> Result<Aggregates, HarnessError> {
    let records = read_records(&dir.join(RECORDS_FILE))?;
    let agg = aggregate(&records);
    agg.write_tables(dir)?;
    Ok(agg)
}
