mod common;

use lode_repair::level::{count_tiles, hamming_distance, LEVEL_SIZE};
use lode_repair::objective::{bin_delta, similarity, BINS_PER_AXIS};
use lode_repair::operators::{mutate, MutationConfig};
use lode_repair::search::{Archive, ARCHIVE_CELLS};
use lode_repair::{parse_level, serialize_level, total_fitness, Level, TileKind};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const BODY: [TileKind; 7] = [
    TileKind::Empty,
    TileKind::Brick,
    TileKind::SolidBrick,
    TileKind::Rope,
    TileKind::Ladder,
    TileKind::Enemy,
    TileKind::Gold,
];

fn arb_level() -> impl Strategy<Value = Level> {
    (prop::collection::vec(prop::sample::select(BODY.to_vec()), LEVEL_SIZE), 0..LEVEL_SIZE, 0..LEVEL_SIZE)
        .prop_map(|(mut tiles, p, g)| {
            tiles[p] = TileKind::Player;
            if g != p {
                tiles[g] = TileKind::Gold;
            } else {
                tiles[(g + 1) % LEVEL_SIZE] = TileKind::Gold;
            }
            Level::from_tiles(tiles.try_into().unwrap()).unwrap()
        })
}

/// A level and a variant sharing its gold and player cells.
fn arb_pair() -> impl Strategy<Value = (Level, Level)> {
    (arb_level(), any::<u64>(), 0usize..40).prop_map(|(a, seed, n)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = lode_repair::operators::random_changes(&a, n, &mut rng);
        (a, b)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn serialize_parse_round_trip(lvl in arb_level()) {
        let text = serialize_level(&lvl);
        prop_assert_eq!(text.lines().count(), 22);
        prop_assert!(text.lines().all(|l| l.chars().count() == 32));
        prop_assert_eq!(parse_level(&text).unwrap(), lvl);
    }

    #[test]
    fn hamming_is_a_metric(a in arb_level(), b in arb_level(), c in arb_level()) {
        prop_assert_eq!(hamming_distance(&a, &a), 0);
        prop_assert_eq!(hamming_distance(&a, &b), hamming_distance(&b, &a));
        prop_assert!(hamming_distance(&a, &c) <= hamming_distance(&a, &b) + hamming_distance(&b, &c));
        prop_assert!(hamming_distance(&a, &b) <= LEVEL_SIZE);
        prop_assert_eq!(hamming_distance(&a, &b) == 0, a == b);
    }

    #[test]
    fn fitness_cascade_keeps_playable_above_unplayable((start, lvl) in arb_pair()) {
        let f = total_fitness(&lvl, &start);
        prop_assert!((0.0..=1.0).contains(&f.playability));
        prop_assert!((0.0..=1.0).contains(&f.similarity));
        if f.playable {
            prop_assert!(f.total >= 1.0 && f.total <= 2.0);
            prop_assert_eq!(f.total, 1.0 + f.similarity);
        } else {
            prop_assert!(f.total <= 1.0);
            prop_assert_eq!(f.total, f.playability);
        }
        prop_assert_eq!(f.playable, f.total >= 1.0 && f.playability == 1.0);
        let expect = (LEVEL_SIZE - hamming_distance(&lvl, &start)) as f64 / LEVEL_SIZE as f64;
        prop_assert_eq!(similarity(&lvl, &start), expect);
        prop_assert_eq!(total_fitness(&start, &start).similarity, 1.0);
    }

    #[test]
    fn bins_are_monotone_and_in_range(a in -800i32..800, b in -800i32..800) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        prop_assert!(bin_delta(lo) <= bin_delta(hi));
        prop_assert!((bin_delta(hi) as usize) < BINS_PER_AXIS);
    }

    #[test]
    fn mutation_preserves_gold_and_player(lvl in arb_level(), seed in any::<u64>(), f in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cfg = MutationConfig::default();
        let start = lvl.clone();
        let mut cur = lvl;
        for _ in 0..8 {
            let child = mutate(&cur, &start, f, &cfg, &mut rng);
            prop_assert!(hamming_distance(&child, &cur) <= cfg.m_max as usize);
            prop_assert_eq!(child.player(), start.player());
            prop_assert_eq!(count_tiles(&child, TileKind::Gold), count_tiles(&start, TileKind::Gold));
            for i in 0..LEVEL_SIZE {
                if start.tile_at(i) == TileKind::Gold {
                    prop_assert_eq!(child.tile_at(i), TileKind::Gold);
                }
            }
            cur = child;
        }
    }

    #[test]
    fn copy_mutation_is_identity_on_start(lvl in arb_level(), seed in any::<u64>()) {
        let cfg = MutationConfig { p_random_at_f0: 0.0, p_random_at_f2: 0.0, ..MutationConfig::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(mutate(&lvl, &lvl, 1.0, &cfg, &mut rng), lvl);
    }

    #[test]
    fn archive_invariants(pairs in prop::collection::vec(arb_pair(), 1..12)) {
        let start = pairs[0].0.clone();
        let mut archive = Archive::new();
        let mut best_per_bin = vec![f64::NEG_INFINITY; ARCHIVE_CELLS];
        for (_, cand) in &pairs {
            // Variants of other starts are still valid levels; bin them against `start`.
            let f = total_fitness(cand, &start).total;
            let d = lode_repair::objective::behavior_descriptor(cand, &start);
            let flat = lode_repair::objective::bin_descriptor(d).flat();
            let before = archive.qd_score();
            let inserted = archive.insert(cand.clone(), f, &start);
            prop_assert_eq!(inserted, f > best_per_bin[flat]);
            if inserted {
                best_per_bin[flat] = f;
            }
            prop_assert!(archive.qd_score() >= before);
        }
        let occupied = best_per_bin.iter().filter(|v| v.is_finite()).count();
        prop_assert_eq!(archive.len(), occupied);
        prop_assert_eq!(archive.coverage(), occupied as f64 / ARCHIVE_CELLS as f64);
        let expect: f64 = best_per_bin.iter().filter(|v| v.is_finite()).sum();
        prop_assert!((archive.qd_score() - expect).abs() < 1e-9);
        for (bin, elite) in archive.iter() {
            prop_assert_eq!(lode_repair::objective::bin_descriptor(elite.descriptor), bin);
        }
    }
}
