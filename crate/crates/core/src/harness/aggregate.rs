//! Tables and curves computed from a set of run records.
//!
//! Everything here is a pure function of the records, so `report` can rebuild
//! the tables of any finished experiment.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use super::heatmap::export_counts;
use super::record::RunRecord;
use super::stats::Summary;
use super::HarnessError;
use crate::operators::Band;
use crate::search::{Algorithm, Curve, ARCHIVE_CELLS};

/// Band, ES shadow coverages and ME coverages for one level.
type CoverageAcc = (Option<Band>, Vec<f64>, Vec<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessRow {
    pub algorithm: Algorithm,
    pub runs: usize,
    pub successes: usize,
}

impl SuccessRow {
    pub fn rate(&self) -> f64 {
        if self.runs == 0 {
            0.0
        } else {
            self.successes as f64 / self.runs as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveRow {
    pub algorithm: Algorithm,
    pub eval: u64,
    pub summary: Summary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverageRow {
    pub level_id: String,
    pub band: Option<Band>,
    pub es_shadow: Option<Summary>,
    pub me: Option<Summary>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Aggregates {
    pub success: Vec<SuccessRow>,
    /// Changes of successful runs pooled over every (level, repeat) of a band.
    pub changes_by_band: BTreeMap<(Algorithm, Band), Summary>,
    pub changes_by_level: BTreeMap<(Algorithm, String), (Option<Band>, Summary)>,
    pub fitness_curves: Vec<CurveRow>,
    pub qd_curves: Vec<CurveRow>,
    pub coverage: Vec<CoverageRow>,
    /// Per algorithm: how many runs filled each archive cell.
    pub occupancy: BTreeMap<Algorithm, Vec<u32>>,
}

fn value_at(curve: &Curve, eval: u64) -> Option<f64> {
    let k = curve.partition_point(|p| p.0 <= eval);
    if k == 0 {
        None
    } else {
        Some(curve[k - 1].1)
    }
}

fn mean_curves<'a>(runs: impl Iterator<Item = (Algorithm, &'a Curve)>) -> Vec<CurveRow> {
    let mut by_algo: BTreeMap<Algorithm, Vec<&Curve>> = BTreeMap::new();
    for (a, c) in runs {
        if !c.is_empty() {
            by_algo.entry(a).or_default().push(c);
        }
    }
    let mut rows = Vec::new();
    for (algorithm, curves) in by_algo {
        let grid: BTreeSet<u64> = curves.iter().flat_map(|c| c.iter().map(|p| p.0)).collect();
        for eval in grid {
            let values: Vec<f64> = curves.iter().filter_map(|c| value_at(c, eval)).collect();
            if let Some(summary) = Summary::of(&values) {
                rows.push(CurveRow {
                    algorithm,
                    eval,
                    summary,
                });
            }
        }
    }
    rows
}

pub fn aggregate(records: &[RunRecord]) -> Aggregates {
    let ok: Vec<&RunRecord> = records.iter().filter(|r| r.error.is_none()).collect();

    let mut success: BTreeMap<Algorithm, SuccessRow> = BTreeMap::new();
    for r in records {
        let row = success.entry(r.algorithm).or_insert(SuccessRow {
            algorithm: r.algorithm,
            runs: 0,
            successes: 0,
        });
        row.runs += 1;
        row.successes += usize::from(r.success && r.error.is_none());
    }

    let mut band_changes: BTreeMap<(Algorithm, Band), Vec<f64>> = BTreeMap::new();
    let mut level_changes: BTreeMap<(Algorithm, String), (Option<Band>, Vec<f64>)> = BTreeMap::new();
    for r in ok.iter().filter(|r| r.success) {
        if let Some(band) = r.band {
            band_changes
                .entry((r.algorithm, band))
                .or_default()
                .push(r.changes as f64);
        }
        level_changes
            .entry((r.algorithm, r.level_id.clone()))
            .or_insert_with(|| (r.band, Vec::new()))
            .1
            .push(r.changes as f64);
    }

    let mut coverage_acc: BTreeMap<String, CoverageAcc> = BTreeMap::new();
    let mut occupancy: BTreeMap<Algorithm, Vec<u32>> = BTreeMap::new();
    for r in &ok {
        let Some(grid) = &r.archive else { continue };
        let counts = occupancy
            .entry(r.algorithm)
            .or_insert_with(|| vec![0; ARCHIVE_CELLS]);
        for (c, cell) in counts.iter_mut().zip(&grid.cells) {
            *c += u32::from(cell.is_some());
        }
        let entry = coverage_acc
            .entry(r.level_id.clone())
            .or_insert_with(|| (r.band, Vec::new(), Vec::new()));
        match r.algorithm {
            Algorithm::EvolutionStrategy => entry.1.push(grid.coverage()),
            Algorithm::MapElites => entry.2.push(grid.coverage()),
            _ => {}
        }
    }

    Aggregates {
        success: success.into_values().collect(),
        changes_by_band: band_changes
            .into_iter()
            .filter_map(|(k, v)| Summary::of(&v).map(|s| (k, s)))
            .collect(),
        changes_by_level: level_changes
            .into_iter()
            .filter_map(|(k, (band, v))| Summary::of(&v).map(|s| (k, (band, s))))
            .collect(),
        fitness_curves: mean_curves(ok.iter().map(|r| (r.algorithm, &r.curve))),
        qd_curves: mean_curves(
            ok.iter()
                .filter(|r| r.algorithm == Algorithm::MapElites)
                .map(|r| (r.algorithm, &r.qd_curve)),
        ),
        coverage: coverage_acc
            .into_iter()
            .map(|(level_id, (band, es, me))| CoverageRow {
                level_id,
                band,
                es_shadow: Summary::of(&es),
                me: Summary::of(&me),
            })
            .collect(),
        occupancy,
    }
}

fn band_label(band: Option<Band>) -> String {
    band.map_or_else(|| "none".to_string(), |b| b.to_string())
}

fn opt_summary(s: Option<Summary>) -> String {
    s.map_or_else(|| ",,".to_string(), |s| format!("{},{},{}", s.n, s.mean, s.ci95))
}

impl Aggregates {
    pub fn mean_coverage(&self, algorithm: Algorithm) -> Option<f64> {
        let pick = |row: &CoverageRow| match algorithm {
            Algorithm::EvolutionStrategy => row.es_shadow,
            Algorithm::MapElites => row.me,
            _ => None,
        };
        let values: Vec<f64> = self.coverage.iter().filter_map(|r| pick(r).map(|s| s.mean)).collect();
        Summary::of(&values).map(|s| s.mean)
    }

    pub fn success_csv(&self) -> String {
        let mut out = String::from("algorithm,runs,successes,success_rate\n");
        for r in &self.success {
            let _ = writeln!(out, "{},{},{},{}", r.algorithm, r.runs, r.successes, r.rate());
        }
        out
    }

    pub fn changes_by_band_csv(&self) -> String {
        let mut out = String::from("algorithm,band,n,mean,ci95\n");
        for ((a, b), s) in &self.changes_by_band {
            let _ = writeln!(out, "{a},{b},{},{},{}", s.n, s.mean, s.ci95);
        }
        out
    }

    /// One row per algorithm, one column per standard band, cells "mean ± ci95".
    pub fn changes_table_csv(&self) -> String {
        let algos: BTreeSet<Algorithm> = self.success.iter().map(|r| r.algorithm).collect();
        let mut out = String::from("algorithm");
        for b in Band::STANDARD {
            let _ = write!(out, ",{b}");
        }
        out.push('\n');
        for a in algos {
            out.push_str(a.short_name());
            for b in Band::STANDARD {
                match self.changes_by_band.get(&(a, b)) {
                    Some(s) => {
                        let _ = write!(out, ",{:.2} ± {:.2}", s.mean, s.ci95);
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn changes_by_level_csv(&self) -> String {
        let mut out = String::from("algorithm,level_id,band,n,mean,ci95\n");
        for ((a, level), (band, s)) in &self.changes_by_level {
            let _ = writeln!(out, "{a},{level},{},{},{},{}", band_label(*band), s.n, s.mean, s.ci95);
        }
        out
    }

    pub fn curve_csv(rows: &[CurveRow]) -> String {
        let mut out = String::from("algorithm,eval,n,mean,ci95\n");
        for r in rows {
            let s = r.summary;
            let _ = writeln!(out, "{},{},{},{},{}", r.algorithm, r.eval, s.n, s.mean, s.ci95);
        }
        out
    }

    pub fn coverage_csv(&self) -> String {
        let mut out = String::from("level_id,band,es_n,es_shadow_mean,es_shadow_ci95,me_n,me_mean,me_ci95\n");
        for r in &self.coverage {
            let _ = writeln!(
                out,
                "{},{},{},{}",
                r.level_id,
                band_label(r.band),
                opt_summary(r.es_shadow),
                opt_summary(r.me)
            );
        }
        out
    }

    pub fn write_tables(&self, dir: &Path) -> Result<(), HarnessError> {
        let write = |name: &str, body: String| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| HarnessError::io(&path, e))
        };
        write("success.csv", self.success_csv())?;
        write("changes_by_band.csv", self.changes_by_band_csv())?;
        write("changes_table.csv", self.changes_table_csv())?;
        write("changes_by_level.csv", self.changes_by_level_csv())?;
        write("fitness_curves.csv", Self::curve_csv(&self.fitness_curves))?;
        write("qd_curves.csv", Self::curve_csv(&self.qd_curves))?;
        write("coverage.csv", self.coverage_csv())?;
        for (a, counts) in &self.occupancy {
            write(&format!("occupancy_{a}.csv"), export_counts(counts))?;
        }
        Ok(())
    }

    /// Human-readable digest printed by the CLI.
    pub fn summary_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "success rate:");
        for r in &self.success {
            let _ = writeln!(
                out,
                "  {:<3} {:>4}/{:<4} ({:.1}%)",
                r.algorithm.short_name(),
                r.successes,
                r.runs,
                100.0 * r.rate()
            );
        }
        let _ = writeln!(out, "mean changes to repair (95% CI):");
        for line in self.changes_table_csv().lines() {
            let _ = writeln!(out, "  {}", line.replace(',', "  |  "));
        }
        for a in [Algorithm::EvolutionStrategy, Algorithm::MapElites] {
            if let Some(c) = self.mean_coverage(a) {
                let label = if a == Algorithm::EvolutionStrategy { "es (passive archive)" } else { "me" };
                let _ = writeln!(out, "archive coverage {label}: {:.1}%", 100.0 * c);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::FitnessGrid;

    fn rec(level: &str, band: Band, algorithm: Algorithm, repeat: u32, success: bool, changes: u32) -> RunRecord {
        let mut r = RunRecord::failed(level, Some(band), algorithm, repeat, 0, String::new());
        r.error = None;
        r.success = success;
        r.changes = changes;
        r.curve = vec![(10, 0.5), (20, 1.0 + changes as f64 / 100.0)];
        r
    }

    #[test]
    fn pools_successful_runs_per_band() {
        let records = vec![
            rec("a", Band::LOW, Algorithm::HillClimber, 0, true, 4),
            rec("b", Band::LOW, Algorithm::HillClimber, 0, true, 8),
            rec("b", Band::LOW, Algorithm::HillClimber, 1, false, 100),
            rec("c", Band::HIGH, Algorithm::EvolutionStrategy, 0, true, 3),
        ];
        let agg = aggregate(&records);
        let low = agg.changes_by_band[&(Algorithm::HillClimber, Band::LOW)];
        assert_eq!((low.n, low.mean), (2, 6.0));
        assert_eq!(agg.success[0].algorithm, Algorithm::HillClimber);
        assert_eq!((agg.success[0].runs, agg.success[0].successes), (3, 2));
        let table = agg.changes_table_csv();
        assert_eq!(table.lines().count(), 3);
        assert!(table.starts_with("algorithm,30-50,50-70,70-90\n"));
    }

    #[test]
    fn curves_average_carried_forward_values() {
        let mut a = rec("a", Band::LOW, Algorithm::HillClimber, 0, true, 0);
        a.curve = vec![(10, 0.25), (20, 0.5)];
        let mut b = rec("a", Band::LOW, Algorithm::HillClimber, 1, true, 0);
        b.curve = vec![(10, 0.75), (15, 1.0)];
        let agg = aggregate(&[a, b]);
        let at: Vec<(u64, f64)> = agg.fitness_curves.iter().map(|r| (r.eval, r.summary.mean)).collect();
        assert_eq!(at, vec![(10, 0.5), (15, 0.625), (20, 0.75)]);
    }

    #[test]
    fn coverage_split_by_algorithm() {
        let mut es = rec("a", Band::MID, Algorithm::EvolutionStrategy, 0, true, 1);
        let mut grid = FitnessGrid::empty();
        grid.cells[10] = Some(1.5);
        es.archive = Some(grid.clone());
        let mut me = rec("a", Band::MID, Algorithm::MapElites, 0, true, 1);
        grid.cells[11] = Some(1.2);
        me.archive = Some(grid);
        let agg = aggregate(&[es, me]);
        assert_eq!(agg.coverage.len(), 1);
        assert_eq!(agg.coverage[0].es_shadow.unwrap().mean, 1.0 / 81.0);
        assert_eq!(agg.coverage[0].me.unwrap().mean, 2.0 / 81.0);
        assert_eq!(agg.occupancy[&Algorithm::MapElites][11], 1);
    }
}
