mod common;

use lode_repair::level::hamming_distance;
use lode_repair::search::{
    evolution_strategy, hill_climb, map_elites, random_search, rng_from_seed, Budget, EsParams, MeParams,
};
use lode_repair::operators::MutationConfig;
use lode_repair::{flood_fill, repair, total_fitness, Algorithm, Cell, Level, SearchParams, SearchResult, TileKind};

/// A playable corpus level with one ladder tile blanked so that gold is lost.
fn one_ladder_short() -> Level {
    let lvl = common::playable("towers");
    for i in 0..lode_repair::level::LEVEL_SIZE {
        if lvl.tile_at(i) != TileKind::Ladder {
            continue;
        }
        let cell = Cell::from_index(i).unwrap();
        let cut = lvl.with_tile(cell, TileKind::Empty).unwrap();
        if !flood_fill(&cut).all_gold_reachable() {
            return cut;
        }
    }
    panic!("no critical ladder tile");
}

fn check_result(r: &SearchResult, start: &Level, budget: u64) {
    assert!(r.evals_used <= budget);
    assert_eq!(r.changes as usize, hamming_distance(&r.best, start));
    assert_eq!(r.success, r.best_fitness >= 1.0);
    assert_eq!(r.best_fitness, total_fitness(&r.best, start).total);
    assert!(r.fitness_curve.windows(2).all(|w| w[0].0 <= w[1].0 && w[0].1 <= w[1].1));
    assert_eq!(r.fitness_curve.last().map(|p| p.1), Some(r.best_fitness));
    assert_eq!(r.best.player(), start.player());
    assert_eq!(r.best.gold_total(), start.gold_total());
}

#[test]
fn budget_of_one_is_one_evaluation() {
    let start = common::broken("tiers_50-70");
    for algo in Algorithm::ALL {
        let params = SearchParams {
            budget: 1,
            mu: 1,
            lambda: 1,
            init_count: 1,
            ..SearchParams::default()
        };
        let out = repair(&start, algo, &params, 5).unwrap();
        assert_eq!(out.result.evals_used, 1, "{algo}");
        check_result(&out.result, &start, 1);
    }
}

#[test]
fn all_algorithms_respect_budget_and_bookkeeping() {
    let start = common::broken("stairs_70-90");
    for algo in Algorithm::ALL {
        let params = SearchParams {
            budget: 3_000,
            ..SearchParams::default()
        };
        let out = repair(&start, algo, &params, 9).unwrap();
        check_result(&out.result, &start, 3_000);
        assert!(out.qd_curve.windows(2).all(|w| w[0].1 <= w[1].1), "{algo}");
    }
}

#[test]
fn fixed_seed_is_deterministic() {
    let start = common::broken("towers_70-90");
    for algo in Algorithm::ALL {
        let params = SearchParams {
            budget: 2_000,
            ..SearchParams::default()
        };
        let a = repair(&start, algo, &params, 77).unwrap();
        let b = repair(&start, algo, &params, 77).unwrap();
        assert_eq!(a.result.best, b.result.best, "{algo}");
        assert_eq!(a.result.fitness_curve, b.result.fitness_curve, "{algo}");
        assert_eq!(a.qd_curve, b.qd_curve, "{algo}");
    }
}

#[test]
fn hill_climber_restores_a_single_missing_ladder() {
    let broken = one_ladder_short();
    let r = hill_climb(&broken, Budget::new(40_000).unwrap(), &mut rng_from_seed(3));
    assert!(r.success);
    assert_eq!(r.changes, 1);
    assert!(flood_fill(&r.best).all_gold_reachable());
}

#[test]
fn playable_start_stays_untouched() {
    let start = common::playable("stairs");
    let hc = hill_climb(&start, Budget::new(5_000).unwrap(), &mut rng_from_seed(1));
    assert_eq!((hc.success, hc.changes), (true, 0));
    assert_eq!(hc.best_fitness, 2.0);
    let rs = random_search(&start, Budget::new(500).unwrap(), &mut rng_from_seed(1));
    assert_eq!((rs.success, rs.changes), (true, 0));
    assert_eq!(rs.fitness_curve[0], (1, 2.0));
}

#[test]
fn es_generation_arithmetic() {
    let start = common::broken("tiers_70-90");
    let cfg = MutationConfig::default();
    let counted = evolution_strategy(
        &start,
        &EsParams::default(),
        Budget::new(1_050).unwrap(),
        &cfg,
        &mut rng_from_seed(2),
    );
    assert_eq!((counted.generations, counted.result.evals_used), (20, 1_050));
    let uncounted = evolution_strategy(
        &start,
        &EsParams {
            count_initialization: false,
            ..EsParams::default()
        },
        Budget::new(1_049).unwrap(),
        &cfg,
        &mut rng_from_seed(2),
    );
    assert_eq!((uncounted.generations, uncounted.result.evals_used), (20, 1_000));
}

#[test]
fn es_shadow_archive_only_holds_playable_candidates() {
    let start = common::broken("stairs_70-90");
    let es = evolution_strategy(
        &start,
        &EsParams::default(),
        Budget::new(20_000).unwrap(),
        &MutationConfig::default(),
        &mut rng_from_seed(4),
    );
    assert!(es.result.success);
    assert!(!es.shadow.is_empty());
    for (_, elite) in es.shadow.iter() {
        assert!(elite.fitness >= 1.0);
        assert!(flood_fill(&elite.level).all_gold_reachable());
    }
}

#[test]
fn map_elites_archive_is_consistent() {
    let start = common::broken("towers_70-90");
    let params = MeParams {
        qd_sample_every: 500,
        ..MeParams::default()
    };
    let me = map_elites(&start, &params, Budget::new(10_000).unwrap(), &MutationConfig::default(), &mut rng_from_seed(8));
    assert_eq!(me.result.evals_used, 10_000);
    assert_eq!(me.qd_curve.len(), 20);
    assert_eq!(me.qd_curve.last().unwrap(), &(10_000, me.archive.qd_score()));
    let best = me.archive.iter().map(|(_, e)| e.fitness).fold(f64::MIN, f64::max);
    assert_eq!(best, me.result.best_fitness);
    for (bin, elite) in me.archive.iter() {
        assert_eq!(elite.fitness, total_fitness(&elite.level, &start).total);
        assert_eq!(lode_repair::objective::bin_descriptor(elite.descriptor), bin);
    }
}

#[test]
fn batched_map_elites_spends_the_same_budget() {
    let start = common::broken("towers_70-90");
    let params = MeParams {
        batch_size: 16,
        ..MeParams::default()
    };
    let me = map_elites(&start, &params, Budget::new(4_000).unwrap(), &MutationConfig::default(), &mut rng_from_seed(8));
    assert_eq!(me.result.evals_used, 4_000);
    assert!(me.qd_curve.windows(2).all(|w| w[0].1 <= w[1].1));
}

#[test]
fn invalid_parameters_are_rejected() {
    let start = common::broken("towers_70-90");
    for bad in [
        SearchParams { budget: 0, ..SearchParams::default() },
        SearchParams { mu: 0, ..SearchParams::default() },
        SearchParams { lambda: 0, ..SearchParams::default() },
        SearchParams { batch_size: 0, ..SearchParams::default() },
    ] {
        assert!(repair(&start, Algorithm::EvolutionStrategy, &bad, 0).is_err());
    }
}
