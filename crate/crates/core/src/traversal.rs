//! Movement-aware flood fill from the player's spawn.
//!
//! Movement model (no digging):
//! - `Brick` and `SolidBrick` block; every other tile can be entered.
//! - A player holds position on a ladder or rope, on the bottom row, or above
//!   a `Brick`, `SolidBrick` or `Ladder` tile. Anywhere else it falls one row.
//! - A supported player may step left or right, climb up when standing on a
//!   ladder, and move down whenever the tile below can be entered.
//! - Outside the grid is solid. Enemies and gold never block.

use crate::level::{Cell, Level, TileKind};

pub fn is_enterable(kind: TileKind) -> bool {
    !matches!(kind, TileKind::Brick | TileKind::SolidBrick)
}

fn is_support_below(kind: TileKind) -> bool {
    matches!(kind, TileKind::Brick | TileKind::SolidBrick | TileKind::Ladder)
}

/// Borrowed view of a row-major tile grid of any size.
///
/// Levels are always 32×22; smaller grids are used for exhaustive checks.
#[derive(Debug, Clone, Copy)]
pub struct GridView<'a> {
    width: usize,
    height: usize,
    tiles: &'a [TileKind],
}

impl<'a> GridView<'a> {
    pub fn new(width: usize, height: usize, tiles: &'a [TileKind]) -> GridView<'a> {
        assert!(width > 0 && height > 0, "grid must be non-empty");
        assert_eq!(tiles.len(), width * height, "tile count must match dimensions");
        GridView {
            width,
            height,
            tiles,
        }
    }

    pub fn of_level(level: &'a Level) -> GridView<'a> {
        GridView::new(crate::level::WIDTH, crate::level::HEIGHT, level.tiles())
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn tile(&self, index: usize) -> TileKind {
        self.tiles[index]
    }

    /// Whether the player can hold position at `index`.
    pub fn is_supported(&self, index: usize) -> bool {
        let here = self.tiles[index];
        if matches!(here, TileKind::Ladder | TileKind::Rope) {
            return true;
        }
        let below = index + self.width;
        below >= self.tiles.len() || is_support_below(self.tiles[below])
    }

    /// Calls `visit` for each cell reachable in one move from `index`.
    #[inline]
    pub fn for_each_move(&self, index: usize, mut visit: impl FnMut(usize)) {
        let w = self.width;
        let n = self.tiles.len();
        let below = index + w;
        if !self.is_supported(index) {
            // Unsupported implies a non-blocking tile below inside the grid.
            visit(below);
            return;
        }
        let col = index % w;
        if col > 0 && is_enterable(self.tiles[index - 1]) {
            visit(index - 1);
        }
        if col + 1 < w && is_enterable(self.tiles[index + 1]) {
            visit(index + 1);
        }
        if self.tiles[index] == TileKind::Ladder && index >= w && is_enterable(self.tiles[index - w]) {
            visit(index - w);
        }
        if below < n && is_enterable(self.tiles[below]) {
            visit(below);
        }
    }

    pub fn moves_from(&self, index: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(4);
        self.for_each_move(index, |i| out.push(i));
        out
    }

    /// Flood fill from `start`, which must be enterable.
    pub fn flood_fill_from(&self, start: usize) -> ReachabilityReport {
        let n = self.tiles.len();
        let mut visited = CellSet::with_len(self.width, n);
        let mut stack: Vec<u16> = Vec::with_capacity(64);
        visited.insert_index(start);
        stack.push(start as u16);
        let mut explored = 1u32;
        let mut golds = u32::from(self.tiles[start] == TileKind::Gold);
        while let Some(i) = stack.pop() {
            self.for_each_move(i as usize, |next| {
                if visited.insert_index(next) {
                    explored += 1;
                    if self.tiles[next] == TileKind::Gold {
                        golds += 1;
                    }
                    stack.push(next as u16);
                }
            });
        }
        let gold_total = self.tiles.iter().filter(|&&t| t == TileKind::Gold).count() as u32;
        ReachabilityReport {
            reachable: visited,
            gold_collect: golds,
            gold_total,
            tiles_explored: explored,
        }
    }
}

/// Bit set over the cells of a grid.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellSet {
    width: usize,
    len: usize,
    words: Vec<u64>,
}

impl CellSet {
    pub fn with_len(width: usize, len: usize) -> CellSet {
        CellSet {
            width,
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Returns true if the index was newly inserted.
    #[inline]
    pub fn insert_index(&mut self, index: usize) -> bool {
        let (w, b) = (index / 64, 1u64 << (index % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    #[inline]
    pub fn contains_index(&self, index: usize) -> bool {
        index < self.len && self.words[index / 64] & (1u64 << (index % 64)) != 0
    }

    /// Only meaningful for full-size level grids.
    pub fn contains(&self, cell: Cell) -> bool {
        self.width == crate::level::WIDTH && self.contains_index(cell.index())
    }

    pub fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len).filter(|&i| self.contains_index(i))
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.indices().filter_map(Cell::from_index)
    }
}

/// Result of a flood fill from the player cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReachabilityReport {
    pub reachable: CellSet,
    pub gold_collect: u32,
    pub gold_total: u32,
    pub tiles_explored: u32,
}

impl ReachabilityReport {
    pub fn all_gold_reachable(&self) -> bool {
        self.gold_collect == self.gold_total
    }
}

pub fn is_supported(level: &Level, cell: Cell) -> bool {
    GridView::of_level(level).is_supported(cell.index())
}

pub fn moves_from(level: &Level, cell: Cell) -> Vec<Cell> {
    GridView::of_level(level)
        .moves_from(cell.index())
        .into_iter()
        .filter_map(Cell::from_index)
        .collect()
}

pub fn flood_fill(level: &Level) -> ReachabilityReport {
    GridView::of_level(level).flood_fill_from(level.player().index())
}
