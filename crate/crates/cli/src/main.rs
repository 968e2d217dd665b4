//! Command-line surface: compute partition functions and genera, run the
//! verification suites, emit JSON/CSV coefficient tables.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 invalid configuration,
//! 3 genericity failure, 4 internal dual-path disagreement.

use clap::{Parser, Subcommand, ValueEnum};
use qq_engine::error::EngineError;
use qq_engine::instanton::{chi_y_genus, CALIBRATED_CONVENTION};
use qq_engine::params::random_param_point;
use qq_engine::series::MultiSeries;
use qq_engine::verify::{calibration_record, run_suite, SuiteId, SuiteOptions};
use qq_engine::vertex::{normalized_zr, zr_full, Direction, NetworkConfig};
use serde_json::{json, Value};
use std::io::Write;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "qq-engine", version, about = "Exact refined-vertex network and instanton genus engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Dir {
    H,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Truncated chain partition function, raw and normalized.
    Zr {
        #[arg(long = "r", default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        cap_q: u32,
        #[arg(long, default_value_t = 2)]
        cap_a: u32,
        #[arg(long, default_value_t = 1)]
        cap_b: u32,
        #[arg(long, value_enum, default_value_t = Dir::H)]
        direction: Dir,
        /// Comma-separated deterministic seeds.
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64])]
        seeds: Vec<u64>,
        /// Override the genericity bound (defaults to the window-derived bound).
        #[arg(long)]
        genericity_bound: Option<u32>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Equivariant χ_y-genus of the instanton moduli as a (Q, m) series.
    ChiY {
        #[arg(long = "r", default_value_t = 1)]
        rank: usize,
        #[arg(long, default_value_t = 2)]
        cap_q: u32,
        #[arg(long, default_value_t = 3)]
        cap_m: u32,
        #[arg(long, value_delimiter = ',', default_values_t = vec![3u64])]
        seeds: Vec<u64>,
        #[arg(long)]
        genericity_bound: Option<u32>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Run one verification suite and report pass/fail.
    Verify {
        /// Suite id: prop-3-4, thm-3-5, thm-3-17, pref-dir, lemma-3-9,
        /// lemma-3-10, identity-3-16, oracle-contraction, oracle-trace,
        /// calibration.
        id: String,
        #[arg(long = "r")]
        rank: Option<usize>,
        #[arg(long)]
        cap_q: Option<u32>,
        #[arg(long)]
        cap_a: Option<u32>,
        #[arg(long)]
        cap_b: Option<u32>,
        #[arg(long)]
        cap_m: Option<u32>,
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<u64>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
}

fn exit_code_for(e: &EngineError) -> u8 {
    match e {
        EngineError::NonGeneric(_) => 3,
        EngineError::OracleDisagreement { .. } => 4,
        _ => 2,
    }
}

fn write_output(path: &Option<std::path::PathBuf>, contents: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, contents),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(contents.as_bytes())?;
            if !contents.ends_with('\n') {
                stdout.write_all(b"\n")?;
            }
            Ok(())
        }
    }
}

fn series_csv(series: &MultiSeries) -> String {
    series.to_csv()
}

#[allow(clippy::too_many_arguments)]
fn run_zr(
    rank: usize,
    cap_q: u32,
    cap_a: u32,
    cap_b: u32,
    direction: Dir,
    seeds: &[u64],
    genericity_bound: Option<u32>,
    out: &Option<std::path::PathBuf>,
    format: Format,
) -> Result<(), (u8, String)> {
    if seeds.is_empty() {
        return Err((2, "at least one seed is required".into()));
    }
    let dir = match direction {
        Dir::H => Direction::Horizontal,
        Dir::V => Direction::Vertical,
    };
    let needed = 4 * (cap_q + cap_a + (rank.saturating_sub(1) as u32) * cap_b + cap_q);
    let bound = genericity_bound.unwrap_or(needed).max(needed);
    let mut runs = Vec::new();
    let mut csv = String::new();
    for &seed in seeds {
        let point = random_param_point(seed, rank, bound);
        let cfg = NetworkConfig::new(
            rank,
            dir,
            cap_q,
            cap_a,
            vec![cap_b; rank - 1],
            cap_q,
            point,
        )
        .map_err(|e| (exit_code_for(&e), e.to_string()))?;
        let raw = zr_full(&cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
        let normalized = normalized_zr(&cfg).map_err(|e| (exit_code_for(&e), e.to_string()))?;
        if csv.is_empty() {
            csv = series_csv(&normalized);
        }
        runs.push(json!({
            "seed": seed,
            "q_half": cfg.point.q_half().to_string(),
            "t_half": cfg.point.t_half().to_string(),
            "normalized": normalized.to_json(),
            "raw": raw.to_json(),
        }));
    }
    let doc = json!({
        "command": "zr",
        "rank": rank,
        "direction": match direction { Dir::H => "h", Dir::V => "v" },
        "caps": { "Q": cap_q, "A": cap_a, "B": cap_b },
        "seeds": seeds,
        "genericity_bound": bound,
        "calibration": calibration_record(),
        "runs": runs,
    });
    let contents = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable"),
        Format::Csv => csv,
    };
    write_output(out, &contents).map_err(|e| (2, e.to_string()))?;
    Ok(())
}

fn run_chi_y(
    rank: usize,
    cap_q: u32,
    cap_m: u32,
    seeds: &[u64],
    genericity_bound: Option<u32>,
    out: &Option<std::path::PathBuf>,
    format: Format,
) -> Result<(), (u8, String)> {
    if seeds.is_empty() || rank == 0 {
        return Err((2, "rank ≥ 1 and at least one seed required".into()));
    }
    let needed = 4 * (cap_q + cap_m + cap_q);
    let bound = genericity_bound.unwrap_or(needed).max(needed);
    let mut runs = Vec::new();
    let mut csv = String::new();
    for &seed in seeds {
        let point = random_param_point(seed, rank, bound);
        let genus = chi_y_genus(rank, cap_q, cap_m, &point, CALIBRATED_CONVENTION)
            .map_err(|e| (exit_code_for(&e), e.to_string()))?;
        if csv.is_empty() {
            csv = series_csv(&genus);
        }
        runs.push(json!({
            "seed": seed,
            "q_half": point.q_half().to_string(),
            "t_half": point.t_half().to_string(),
            "genus": genus.to_json(),
        }));
    }
    let doc = json!({
        "command": "chi-y",
        "rank": rank,
        "caps": { "Q": cap_q, "m": cap_m },
        "seeds": seeds,
        "genericity_bound": bound,
        "tangent_convention": CALIBRATED_CONVENTION.name(),
        "calibration": calibration_record(),
        "runs": runs,
    });
    let contents = match format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable"),
        Format::Csv => csv,
    };
    write_output(out, &contents).map_err(|e| (2, e.to_string()))?;
    Ok(())
}

fn run_verify(
    id: &str,
    opts: SuiteOptions,
    out: &Option<std::path::PathBuf>,
) -> Result<bool, (u8, String)> {
    let suite = SuiteId::parse(id).ok_or_else(|| {
        (
            2,
            format!(
                "unknown suite '{id}'; expected one of {}",
                SuiteId::ALL.map(|s| s.name()).join(", ")
            ),
        )
    })?;
    let report = run_suite(suite, &opts).map_err(|e| (exit_code_for(&e), e.to_string()))?;
    println!("{}", report.summary_line());
    if let Some(m) = &report.first_mismatch {
        println!("first mismatch: {m}");
    }
    if let Some(p) = out {
        let doc: Value = report.to_json();
        std::fs::write(p, serde_json::to_string_pretty(&doc).expect("serializable"))
            .map_err(|e| (2, e.to_string()))?;
    }
    Ok(report.pass)
}

fn main() -> ExitCode {
    qq_engine::init_threads();
    let cli = Cli::parse();
    let result: Result<bool, (u8, String)> = match &cli.command {
        Command::Zr { rank, cap_q, cap_a, cap_b, direction, seeds, genericity_bound, out, format } => {
            run_zr(*rank, *cap_q, *cap_a, *cap_b, *direction, seeds, *genericity_bound, out, *format)
                .map(|()| true)
        }
        Command::ChiY { rank, cap_q, cap_m, seeds, genericity_bound, out, format } => {
            run_chi_y(*rank, *cap_q, *cap_m, seeds, *genericity_bound, out, *format).map(|()| true)
        }
        Command::Verify { id, rank, cap_q, cap_a, cap_b, cap_m, seeds, out } => {
            let opts = SuiteOptions {
                rank: *rank,
                cap_q: *cap_q,
                cap_a: *cap_a,
                cap_b: *cap_b,
                cap_m: *cap_m,
                seeds: seeds.clone(),
            };
            run_verify(id, opts, out)
        }
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
