//! Tile vocabulary, the fixed-size level grid and its text format.
//!
//! A level is 22 rows of 32 columns stored row-major with `(0, 0)` at the
//! top-left corner. "Below" a cell is `row + 1`, the direction of gravity.

use std::fmt;

use rand::Rng;
use thiserror::Error;

pub const WIDTH: usize = 32;
pub const HEIGHT: usize = 22;
pub const LEVEL_SIZE: usize = WIDTH * HEIGHT;

/// The eight tile kinds, in ordinal order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(u8)]
pub enum TileKind {
    Empty = 0,
    Brick = 1,
    SolidBrick = 2,
    Rope = 3,
    Ladder = 4,
    Gold = 5,
    Enemy = 6,
    Player = 7,
}

impl TileKind {
    pub const ALL: [TileKind; 8] = [
        TileKind::Empty,
        TileKind::Brick,
        TileKind::SolidBrick,
        TileKind::Rope,
        TileKind::Ladder,
        TileKind::Gold,
        TileKind::Enemy,
        TileKind::Player,
    ];

    pub fn glyph(self) -> char {
        match self {
            TileKind::Empty => '.',
            TileKind::Brick => 'b',
            TileKind::SolidBrick => 'B',
            TileKind::Rope => '-',
            TileKind::Ladder => '#',
            TileKind::Gold => 'G',
            TileKind::Enemy => 'E',
            TileKind::Player => 'M',
        }
    }

    pub fn from_glyph(c: char) -> Option<TileKind> {
        Some(match c {
            '.' => TileKind::Empty,
            'b' => TileKind::Brick,
            'B' => TileKind::SolidBrick,
            '-' => TileKind::Rope,
            '#' => TileKind::Ladder,
            'G' => TileKind::Gold,
            'E' => TileKind::Enemy,
            'M' => TileKind::Player,
            _ => return None,
        })
    }

    pub fn from_ordinal(v: u8) -> Option<TileKind> {
        TileKind::ALL.get(v as usize).copied()
    }

    /// Gold and the player are never created or destroyed by any search operator.
    pub fn is_protected(self) -> bool {
        matches!(self, TileKind::Gold | TileKind::Player)
    }
}

/// A position inside a 32×22 level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    col: u8,
    row: u8,
}

impl Cell {
    pub fn new(col: usize, row: usize) -> Option<Cell> {
        (col < WIDTH && row < HEIGHT).then_some(Cell {
            col: col as u8,
            row: row as u8,
        })
    }

    pub fn from_index(index: usize) -> Option<Cell> {
        (index < LEVEL_SIZE).then_some(Cell {
            col: (index % WIDTH) as u8,
            row: (index / WIDTH) as u8,
        })
    }

    pub fn col(self) -> usize {
        self.col as usize
    }

    pub fn row(self) -> usize {
        self.row as usize
    }

    pub fn index(self) -> usize {
        self.row() * WIDTH + self.col()
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.col, self.row)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LevelError {
    #[error("bad dimensions: {0}")]
    BadDimensions(String),
    #[error("unknown tile glyph {glyph:?} at line {line}, column {col}")]
    BadChar { glyph: char, line: usize, col: usize },
    #[error("bad tile cardinality: {players} player tile(s) and {golds} gold tile(s); need exactly 1 player and at least 1 gold")]
    BadCardinality { players: usize, golds: usize },
    #[error("no empty tile to place the player on")]
    NoEmptyTile,
}

/// Raw tile storage without the level invariants.
pub type Tiles = [TileKind; LEVEL_SIZE];

/// A validated level: 704 tiles, exactly one player, at least one gold.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Level {
    tiles: Tiles,
    player: u16,
    gold_total: u16,
}

impl Level {
    pub fn from_tiles(tiles: Tiles) -> Result<Level, LevelError> {
        let mut player = None;
        let mut players = 0;
        let mut golds = 0;
        for (i, &t) in tiles.iter().enumerate() {
            match t {
                TileKind::Player => {
                    players += 1;
                    player = Some(i);
                }
                TileKind::Gold => golds += 1,
                _ => {}
            }
        }
        match player {
            Some(p) if players == 1 && golds >= 1 => Ok(Level {
                tiles,
                player: p as u16,
                gold_total: golds as u16,
            }),
            _ => Err(LevelError::BadCardinality { players, golds }),
        }
    }

    pub fn parse(text: &str) -> Result<Level, LevelError> {
        let body = text.strip_suffix('\n').unwrap_or(text);
        let lines: Vec<&str> = body.split('\n').collect();
        if lines.len() != HEIGHT {
            return Err(LevelError::BadDimensions(format!(
                "expected {HEIGHT} lines, found {}",
                lines.len()
            )));
        }
        let mut tiles = [TileKind::Empty; LEVEL_SIZE];
        for (row, line) in lines.iter().enumerate() {
            let len = line.chars().count();
            if len != WIDTH {
                return Err(LevelError::BadDimensions(format!(
                    "line {} has {len} characters, expected {WIDTH}",
                    row + 1
                )));
            }
            for (col, c) in line.chars().enumerate() {
                tiles[row * WIDTH + col] =
                    TileKind::from_glyph(c).ok_or(LevelError::BadChar {
                        glyph: c,
                        line: row + 1,
                        col: col + 1,
                    })?;
            }
        }
        Level::from_tiles(tiles)
    }

    /// Text form: 22 lines of 32 glyphs, each terminated by LF.
    pub fn serialize(&self) -> String {
        let mut out = String::with_capacity(LEVEL_SIZE + HEIGHT);
        for row in self.tiles.chunks(WIDTH) {
            out.extend(row.iter().map(|t| t.glyph()));
            out.push('\n');
        }
        out
    }

    pub fn tiles(&self) -> &Tiles {
        &self.tiles
    }

    pub fn tile(&self, cell: Cell) -> TileKind {
        self.tiles[cell.index()]
    }

    pub fn tile_at(&self, index: usize) -> TileKind {
        self.tiles[index]
    }

    pub fn player(&self) -> Cell {
        Cell::from_index(self.player as usize).expect("player index in bounds")
    }

    pub fn gold_total(&self) -> u32 {
        self.gold_total as u32
    }

    /// Returns a copy with one tile replaced, re-validating the invariants.
    pub fn with_tile(&self, cell: Cell, kind: TileKind) -> Result<Level, LevelError> {
        let mut tiles = self.tiles;
        tiles[cell.index()] = kind;
        Level::from_tiles(tiles)
    }

    /// Overwrites a tile that is neither gold nor player with another such tile.
    /// Gold and player positions are unchanged, so the cached invariants stay valid.
    pub(crate) fn set_unprotected(&mut self, index: usize, kind: TileKind) {
        debug_assert!(!self.tiles[index].is_protected() && !kind.is_protected());
        self.tiles[index] = kind;
    }

    /// The grid with the player cell cleared to `Empty`.
    pub fn without_player(&self) -> Tiles {
        let mut tiles = self.tiles;
        tiles[self.player as usize] = TileKind::Empty;
        tiles
    }

    pub fn count(&self, kind: TileKind) -> usize {
        count_tiles(self, kind)
    }

    /// Indices whose tile may be changed by search operators.
    pub fn mutable_indices(&self) -> Vec<usize> {
        (0..LEVEL_SIZE)
            .filter(|&i| !self.tiles[i].is_protected())
            .collect()
    }
}

impl fmt::Debug for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Level {{")?;
        for line in self.serialize().lines() {
            writeln!(f, "  {line}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize())
    }
}

impl std::str::FromStr for Level {
    type Err = LevelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Level::parse(s)
    }
}

pub fn parse_level(text: &str) -> Result<Level, LevelError> {
    Level::parse(text)
}

pub fn serialize_level(level: &Level) -> String {
    level.serialize()
}

/// Number of positions where the two levels differ.
pub fn hamming_distance(a: &Level, b: &Level) -> usize {
    a.tiles
        .iter()
        .zip(b.tiles.iter())
        .filter(|(x, y)| x != y)
        .count()
}

pub fn count_tiles(level: &Level, kind: TileKind) -> usize {
    level.tiles.iter().filter(|&&t| t == kind).count()
}

/// Puts the player on a uniformly chosen `Empty` tile of a player-less grid.
pub fn place_player<R: Rng + ?Sized>(tiles: &Tiles, rng: &mut R) -> Result<Level, LevelError> {
    let players = tiles.iter().filter(|&&t| t == TileKind::Player).count();
    if players != 0 {
        let golds = tiles.iter().filter(|&&t| t == TileKind::Gold).count();
        return Err(LevelError::BadCardinality { players, golds });
    }
    let empties: Vec<usize> = (0..LEVEL_SIZE)
        .filter(|&i| tiles[i] == TileKind::Empty)
        .collect();
    if empties.is_empty() {
        return Err(LevelError::NoEmptyTile);
    }
    let pick = empties[rng.gen_range(0..empties.len() as u32) as usize];
    let mut placed = *tiles;
    placed[pick] = TileKind::Player;
    Level::from_tiles(placed)
}
