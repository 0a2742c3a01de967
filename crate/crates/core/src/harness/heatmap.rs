//! 9×9 archive grids as CSV. Rows are the added-ropes bins, columns the
//! added-ladders bins, both labelled with the bin edge list.

use std::fmt::Write as _;

use thiserror::Error;

use crate::objective::{BINS_PER_AXIS, BIN_LABELS};
use crate::search::{Archive, FitnessGrid, ARCHIVE_CELLS};

/// Marker written for unoccupied cells.
pub const EMPTY_MARKER: &str = "-";

const CORNER: &str = "ropes\\ladders";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HeatmapError {
    #[error("heatmap line {line}: {msg}")]
    Malformed { line: usize, msg: String },
}

fn header() -> String {
    let mut out = String::from(CORNER);
    for label in BIN_LABELS {
        out.push(',');
        out.push_str(label);
    }
    out.push('\n');
    out
}

/// Full-precision fitness grid; `{}` on f64 prints the shortest round-tripping form.
pub fn export_heatmap(grid: &FitnessGrid) -> String {
    render(grid.cells.iter().map(|c| c.map(|f| f.to_string())))
}

pub fn export_archive_heatmap(archive: &Archive) -> String {
    export_heatmap(&archive.fitness_grid())
}

/// Occupancy counts summed over many archives.
pub fn export_counts(counts: &[u32]) -> String {
    assert_eq!(counts.len(), ARCHIVE_CELLS);
    render(counts.iter().map(|c| Some(c.to_string())))
}

fn render(cells: impl Iterator<Item = Option<String>>) -> String {
    let cells: Vec<Option<String>> = cells.collect();
    let mut out = header();
    for (r, label) in BIN_LABELS.iter().enumerate() {
        out.push_str(label);
        for c in 0..BINS_PER_AXIS {
            let cell = cells[r * BINS_PER_AXIS + c].as_deref().unwrap_or(EMPTY_MARKER);
            let _ = write!(out, ",{cell}");
        }
        out.push('\n');
    }
    out
}

pub fn import_heatmap(text: &str) -> Result<FitnessGrid, HeatmapError> {
    let mut lines = text.lines();
    let bad = |line: usize, msg: &str| HeatmapError::Malformed {
        line,
        msg: msg.to_string(),
    };
    if lines.next().map(|h| format!("{h}\n")) != Some(header()) {
        return Err(bad(1, "unexpected header"));
    }
    let mut cells = Vec::with_capacity(ARCHIVE_CELLS);
    for (r, label) in BIN_LABELS.iter().enumerate() {
        let line_no = r + 2;
        let line = lines.next().ok_or_else(|| bad(line_no, "missing row"))?;
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != BINS_PER_AXIS + 1 || fields[0] != *label {
            return Err(bad(line_no, "bad row shape or label"));
        }
        for f in &fields[1..] {
            if *f == EMPTY_MARKER {
                cells.push(None);
            } else {
                cells.push(Some(f.parse::<f64>().map_err(|_| bad(line_no, "bad number"))?));
            }
        }
    }
    Ok(FitnessGrid { cells })
}
