#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};
use std::path::PathBuf;

use lode_repair::{Level, TileKind};
use rand::Rng;

pub fn corpus_dir(sub: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(sub)
}

pub fn playable(name: &str) -> Level {
    let text = std::fs::read_to_string(corpus_dir("playable").join(format!("{name}.txt"))).unwrap();
    Level::parse(&text).unwrap()
}

pub fn broken(name: &str) -> Level {
    let text = std::fs::read_to_string(corpus_dir("broken").join(format!("{name}.txt"))).unwrap();
    Level::parse(&text).unwrap()
}

/// Breadth-first search over the movement rules, written out case by case on
/// (col, row) pairs and sharing no code with the library.
pub fn bfs_reachable(w: usize, h: usize, tiles: &[TileKind], start: (usize, usize)) -> BTreeSet<(usize, usize)> {
    let at = |c: usize, r: usize| tiles[r * w + c];
    let blocks = |t: TileKind| matches!(t, TileKind::Brick | TileKind::SolidBrick);
    let standing = |c: usize, r: usize| {
        let here = at(c, r);
        if here == TileKind::Ladder || here == TileKind::Rope || r + 1 == h {
            return true;
        }
        matches!(at(c, r + 1), TileKind::Brick | TileKind::SolidBrick | TileKind::Ladder)
    };
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start);
    queue.push_back(start);
    while let Some((c, r)) = queue.pop_front() {
        let mut next = Vec::new();
        if !standing(c, r) {
            next.push((c, r + 1));
        } else {
            if c > 0 {
                next.push((c - 1, r));
            }
            if c + 1 < w {
                next.push((c + 1, r));
            }
            if r > 0 && at(c, r) == TileKind::Ladder {
                next.push((c, r - 1));
            }
            if r + 1 < h {
                next.push((c, r + 1));
            }
        }
        for (nc, nr) in next {
            if !blocks(at(nc, nr)) && seen.insert((nc, nr)) {
                queue.push_back((nc, nr));
            }
        }
    }
    seen
}

/// A random `w` x `h` grid with one non-blocking start cell.
pub fn random_grid<R: Rng>(w: usize, h: usize, rng: &mut R) -> (Vec<TileKind>, usize) {
    const KINDS: [TileKind; 7] = [
        TileKind::Empty,
        TileKind::Brick,
        TileKind::SolidBrick,
        TileKind::Rope,
        TileKind::Ladder,
        TileKind::Gold,
        TileKind::Enemy,
    ];
    let weights = [5u32, 3, 1, 2, 2, 1, 1];
    let total: u32 = weights.iter().sum();
    let mut tiles: Vec<TileKind> = (0..w * h)
        .map(|_| {
            let mut roll = rng.gen_range(0..total);
            let mut i = 0;
            while roll >= weights[i] {
                roll -= weights[i];
                i += 1;
            }
            KINDS[i]
        })
        .collect();
    let start = rng.gen_range(0..w * h);
    tiles[start] = TileKind::Player;
    (tiles, start)
}
