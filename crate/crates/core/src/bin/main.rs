use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use lode_repair::harness::{self, ExperimentConfig, HarnessError, RunRecord};
use lode_repair::objective::playability;
use lode_repair::operators::{corrupt_level, single_tile_repair, Band, CorruptError};
use lode_repair::search::{rng_from_seed, Algorithm, SearchParams};
use lode_repair::{flood_fill, repair, Level};

const EXIT_UNREPAIRED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_PARAM: u8 = 3;
const EXIT_BAND_UNREACHABLE: u8 = 4;

#[derive(Parser)]
#[command(name = "lode-repair", version, about = "Repair broken Lode Runner levels by search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Flood-fill a level and print its playability report as JSON.
    Evaluate { file: PathBuf },
    /// Search for a minimally changed playable variant of a level.
    Repair {
        file: PathBuf,
        #[arg(long, value_parser = parse_algo)]
        algo: Algorithm,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        mu: Option<usize>,
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(long)]
        init_count: Option<usize>,
        #[arg(long)]
        m_max: Option<u32>,
        /// Do not charge the ES initial population to the budget.
        #[arg(long)]
        uncounted_init: bool,
        /// Repaired level path [default: <file stem>.repaired.txt beside the input]
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run record path [default: <out stem>.json]
        #[arg(long)]
        record: Option<PathBuf>,
    },
    /// Break a playable level into a given starting-playability band.
    Corrupt {
        file: PathBuf,
        /// Gold-reachable percentage band, LO-HI with 30 <= LO < HI <= 90.
        #[arg(long)]
        band: String,
        #[arg(long, default_value_t = 1)]
        count: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        max_attempts: u32,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Skip broken levels that a single tile change would make playable.
        #[arg(long)]
        non_trivial: bool,
    },
    /// Run a batch experiment described by a TOML config.
    Experiment { config: PathBuf },
    /// Rebuild the tables of a finished experiment from its records.
    Report { records_dir: PathBuf },
}

fn parse_algo(s: &str) -> Result<Algorithm, String> {
    s.parse().map_err(|e: lode_repair::search::ParamError| e.to_string())
}

struct Failure {
    code: u8,
    msg: String,
}

fn fail(code: u8, msg: impl ToString) -> Failure {
    Failure {
        code,
        msg: msg.to_string(),
    }
}

fn harness_failure(e: HarnessError) -> Failure {
    let code = match e {
        HarnessError::Level { .. } => EXIT_PARSE,
        HarnessError::Config(_) | HarnessError::Param(_) => EXIT_PARAM,
        HarnessError::Io { .. } => EXIT_UNREPAIRED,
    };
    fail(code, e)
}

fn read_level(path: &Path) -> Result<Level, Failure> {
    harness::load_level(path).map_err(harness_failure)
}

fn write_file(path: &Path, body: &str) -> Result<(), Failure> {
    std::fs::write(path, body).map_err(|e| fail(EXIT_UNREPAIRED, format!("{}: {e}", path.display())))
}

#[derive(Serialize)]
struct EvaluateReport {
    playability: f64,
    gold_collect: u32,
    gold_total: u32,
    tiles_explored: u32,
    playable: bool,
}

fn evaluate(file: &Path) -> Result<u8, Failure> {
    let level = read_level(file)?;
    let r = flood_fill(&level);
    let report = EvaluateReport {
        playability: playability(&r),
        gold_collect: r.gold_collect,
        gold_total: r.gold_total,
        tiles_explored: r.tiles_explored,
        playable: r.all_gold_reachable(),
    };
    println!("{}", serde_json::to_string(&report).expect("report serializes"));
    Ok(0)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "level".into())
}

#[allow(clippy::too_many_arguments)]
fn repair_cmd(
    file: &Path,
    algo: Algorithm,
    budget: Option<u64>,
    seed: u64,
    mu: Option<usize>,
    lambda: Option<usize>,
    init_count: Option<usize>,
    m_max: Option<u32>,
    uncounted_init: bool,
    out: Option<PathBuf>,
    record: Option<PathBuf>,
) -> Result<u8, Failure> {
    let level = read_level(file)?;
    let mut params = SearchParams::defaults_for(algo);
    if let Some(v) = budget {
        params.budget = v;
    }
    if let Some(v) = mu {
        params.mu = v;
    }
    if let Some(v) = lambda {
        params.lambda = v;
    }
    if let Some(v) = init_count {
        params.init_count = v;
    }
    if let Some(v) = m_max {
        params.mutation.m_max = v;
    }
    params.count_initialization = !uncounted_init;
    let outcome = repair(&level, algo, &params, seed).map_err(|e| fail(EXIT_PARAM, e))?;

    let out = out.unwrap_or_else(|| file.with_file_name(format!("{}.repaired.txt", stem(file))));
    let record_path = record.unwrap_or_else(|| out.with_extension("json"));
    write_file(&out, &outcome.result.best.serialize())?;
    let start = flood_fill(&level);
    let rec = RunRecord::from_outcome(
        &stem(file),
        Band::classify(start.gold_collect, start.gold_total),
        0,
        seed,
        params.qd_sample_every,
        &outcome,
    );
    write_file(&record_path, &(rec.to_json_line() + "\n"))?;

    let r = &outcome.result;
    eprintln!(
        "{}: success={} changes={} fitness={} evals={}",
        algo, r.success, r.changes, r.best_fitness, r.evals_used
    );
    Ok(if r.success { 0 } else { EXIT_UNREPAIRED })
}

fn corrupt_cmd(
    file: &Path,
    band: &str,
    count: u32,
    seed: u64,
    max_attempts: u32,
    out_dir: &Path,
    non_trivial: bool,
) -> Result<u8, Failure> {
    let band: Band = band.parse().map_err(|e| fail(EXIT_PARAM, e))?;
    let level = read_level(file)?;
    std::fs::create_dir_all(out_dir).map_err(|e| fail(EXIT_UNREPAIRED, format!("{}: {e}", out_dir.display())))?;
    let mut rng = rng_from_seed(seed);
    let mut i = 0;
    let mut budget = max_attempts;
    while i < count {
        let broken = corrupt_level(&level, band, &mut rng, budget).map_err(|e| match e {
            CorruptError::BandUnreachable { .. } => fail(EXIT_BAND_UNREACHABLE, e),
            CorruptError::NotPlayable => fail(EXIT_PARAM, e),
            CorruptError::Level(_) => fail(EXIT_PARSE, e),
        })?;
        if non_trivial && single_tile_repair(&broken).is_some() {
            budget = budget.saturating_sub(1);
            if budget == 0 {
                return Err(fail(
                    EXIT_BAND_UNREACHABLE,
                    format!("no non-trivial level in band {band} after {max_attempts} attempts"),
                ));
            }
            continue;
        }
        let r = flood_fill(&broken);
        assert!(band.contains(r.gold_collect, r.gold_total), "generated level left its band");
        let path = out_dir.join(format!("{}_{}_{}.txt", stem(file), band, i));
        write_file(&path, &broken.serialize())?;
        println!("{} gold {}/{}", path.display(), r.gold_collect, r.gold_total);
        i += 1;
    }
    Ok(0)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Evaluate { file } => evaluate(&file),
        Command::Repair {
            file,
            algo,
            budget,
            seed,
            mu,
            lambda,
            init_count,
            m_max,
            uncounted_init,
            out,
            record,
        } => repair_cmd(&file, algo, budget, seed, mu, lambda, init_count, m_max, uncounted_init, out, record),
        Command::Corrupt {
            file,
            band,
            count,
            seed,
            max_attempts,
            out_dir,
            non_trivial,
        } => corrupt_cmd(&file, &band, count, seed, max_attempts, &out_dir, non_trivial),
        Command::Experiment { config } => {
            let cfg = ExperimentConfig::load(&config).map_err(harness_failure)?;
            let (records, agg) = harness::run_experiment(&cfg).map_err(harness_failure)?;
            println!("{} runs written to {}", records.len(), cfg.output_dir.display());
            print!("{}", agg.summary_text());
            Ok(0)
        }
        Command::Report { records_dir } => {
            let agg = harness::report(&records_dir).map_err(harness_failure)?;
            print!("{}", agg.summary_text());
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
