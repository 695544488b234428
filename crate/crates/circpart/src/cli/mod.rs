//! Command-line front end: summary table, partition documents with SVG
//! figures, termination curves as CSV, ratio optimization, and document
//! verification.
//!
//! Exit codes: 0 success, 1 verification or I/O failure, 2 nonterminating
//! covering, 3 usage or domain error.

pub mod document;
pub mod svg;

use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bounds::{gamma_one, gamma_theta, interior_angle};
use crate::construct::{build_partition, optimal_gamma, scaled_initial_gap, KgonFrame};
use crate::edgecover::{
    canonical_scaled_gap, classify, steps_to_cover, StepsOutcome, DEFAULT_MAX_STEPS,
};
use crate::error::{Error, Result};
use crate::fixedpoint::fixed_points;
use crate::geom::gap_chord_half_width;
use crate::verify::{check_covering, connected_regions, grow_pieces};
use document::PartitionDocument;

#[derive(Parser)]
#[command(
    name = "circpart",
    about = "Partition regular polygons into pieces of bounded aspect ratio",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the ratio and piece-count summary for k = 3..8.
    Table {
        /// Also write the rows as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Build a partition and write it as JSON (and optionally SVG).
    Partition {
        /// Number of polygon vertices (k >= 3).
        k: u32,
        /// Aspect ratio, or "auto" for the best known terminating choice.
        #[arg(long, default_value = "auto")]
        gamma: String,
        /// JSON output path (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
        /// SVG figure output path.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// CSV of covering steps versus ratio on the canonical two-disk gap.
    StepsCurve {
        #[arg(long, default_value_t = 1.114)]
        gamma_min: f64,
        #[arg(long, default_value_t = 1.25)]
        gamma_max: f64,
        #[arg(long, default_value_t = 69)]
        points: usize,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// CSV of the fixed points of the gap map and the stopping threshold.
    FixedPointCurve {
        #[arg(long, default_value_t = 1.01)]
        gamma_min: f64,
        #[arg(long, default_value_t = 1.3)]
        gamma_max: f64,
        #[arg(long, default_value_t = 59)]
        points: usize,
        /// CSV output path (stdout if omitted).
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Search for the smallest workable ratio of a k-gon.
    Optimize {
        /// Number of polygon vertices (k >= 5).
        k: u32,
        /// Also write a sweep over k = 5..=k-max as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        k_max: u32,
    },
    /// Check a partition document: sampling coverage and piece growth.
    Verify {
        /// Path to a partition JSON document.
        document: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        /// Grid cell size for piece growth (default 1/512).
        #[arg(long, default_value_t = 0.001953125)]
        resolution: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
}

pub fn run() -> i32 {
    init_threads();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 3,
            };
            let _ = e.print();
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Table { csv } => cmd_table(csv.as_deref()),
        Command::Partition { k, gamma, out, svg } => {
            cmd_partition(k, &gamma, out.as_deref(), svg.as_deref())
        }
        Command::StepsCurve { gamma_min, gamma_max, points, csv } => {
            cmd_steps_curve(gamma_min, gamma_max, points, csv.as_deref())
        }
        Command::FixedPointCurve { gamma_min, gamma_max, points, csv } => {
            cmd_fixed_point_curve(gamma_min, gamma_max, points, csv.as_deref())
        }
        Command::Optimize { k, csv, k_max } => cmd_optimize(k, csv.as_deref(), k_max),
        Command::Verify { document, samples, resolution, seed } => {
            cmd_verify(&document, samples, resolution, seed)
        }
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code_for(&e)
        }
    }
}

fn exit_code_for(error: &Error) -> i32 {
    match error {
        Error::InvalidArgument(_) | Error::Degenerate(_) | Error::AlreadyTerminated => 3,
        Error::Io(_) | Error::GrowthStalled(_) => 1,
        Error::Infeasible(_) => 2,
    }
}

/// CIRCPART_THREADS caps internal parallelism; 0 or unset picks the default.
fn init_threads() {
    if let Ok(value) = std::env::var("CIRCPART_THREADS") {
        if let Ok(n) = value.parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut file = tempfile::NamedTempFile::new_in(dir)?;
    file.write_all(content.as_bytes())?;
    file.persist(path).map_err(|e| Error::Io(e.to_string()))?;
    Ok(())
}

fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(path) => write_atomic(path, content),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n <= 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn cmd_table(csv: Option<&Path>) -> Result<i32> {
    struct Row {
        k: u32,
        one_piece: f64,
        vertex_bound: f64,
        achieved: f64,
        pieces: Option<u64>,
    }
    let mut rows = Vec::new();
    for k in 3..=8 {
        let one_piece = gamma_one(k)?.value;
        let vertex_bound = gamma_theta(interior_angle(k))?.value;
        let achieved = if k <= 5 { vertex_bound } else { optimal_gamma(k)? };
        let partition = build_partition(k, achieved)?;
        rows.push(Row {
            k,
            one_piece,
            vertex_bound,
            achieved,
            pieces: partition.terminated.then_some(partition.piece_count),
        });
    }
    println!(
        "{:>2}  {:>10}  {:>10}  {:>10}  {:>8}",
        "k", "one-piece", "vertex-lb", "achieved", "pieces"
    );
    for row in &rows {
        println!(
            "{:>2}  {:>10.5}  {:>10.5}  {:>10.5}  {:>8}",
            row.k,
            row.one_piece,
            row.vertex_bound,
            row.achieved,
            row.pieces.map_or_else(|| "-".into(), |p| p.to_string())
        );
    }
    println!("k > 8: one-piece = 1/cos(pi/k), vertex-lb = (1 + 1/sin((k-2) pi / (2k))) / 2");
    if let Some(path) = csv {
        let mut text = String::from("k,gamma_one,gamma_theta,gamma_achieved,pieces\n");
        for row in &rows {
            text.push_str(&format!(
                "{},{},{},{},{}\n",
                row.k,
                fmt_float(row.one_piece),
                fmt_float(row.vertex_bound),
                fmt_float(row.achieved),
                row.pieces.map_or_else(String::new, |p| p.to_string())
            ));
        }
        write_atomic(path, &text)?;
    }
    Ok(0)
}

/// Human-readable termination diagnosis for a requested ratio.
fn region_report(gap: f64, gamma: f64) -> Result<String> {
    if gap <= 0.0 {
        return Ok(format!(
            "scaled initial gap {gap:.6} at gamma {gamma}: already closed in the one-variable model"
        ));
    }
    let class = classify(gap, gamma)?;
    let mut text = format!(
        "scaled initial gap {gap:.6} at gamma {gamma}: region {}, covering {}",
        class.region.label(),
        if class.terminates { "terminates" } else { "does not terminate" }
    );
    if !class.fixed_points.is_empty() {
        let listed: Vec<String> = class.fixed_points.iter().map(|x| format!("{x:.6}")).collect();
        text.push_str(&format!(" (positive fixed points: {})", listed.join(", ")));
    }
    Ok(text)
}

fn cmd_partition(
    k: u32,
    gamma_arg: &str,
    out: Option<&Path>,
    svg_path: Option<&Path>,
) -> Result<i32> {
    let frame = KgonFrame::new(k)?;
    let partition = if gamma_arg == "auto" {
        let vertex_bound = gamma_theta(interior_angle(k))?.value;
        let at_bound = build_partition(k, vertex_bound)?;
        if at_bound.terminated {
            at_bound
        } else {
            let best = build_partition(k, optimal_gamma(k)?)?;
            if !best.terminated {
                eprintln!(
                    "warning: covering at gamma = {} did not terminate; writing the partial covering",
                    best.gamma
                );
            }
            best
        }
    } else {
        let gamma: f64 = gamma_arg.parse().map_err(|_| {
            Error::InvalidArgument(format!(
                "--gamma must be a number or \"auto\", got {gamma_arg:?}"
            ))
        })?;
        if !(gamma.is_finite() && gamma > 1.0) {
            return Err(Error::InvalidArgument(format!(
                "partition requires gamma > 1, got {gamma}"
            )));
        }
        let gap = scaled_initial_gap(&frame, gamma)?;
        if gap > 0.0
            && steps_to_cover(gap, gamma, DEFAULT_MAX_STEPS) == StepsOutcome::NonTerminating {
                eprintln!("{}", region_report(gap, gamma)?);
                return Ok(2);
            }
        let partition = build_partition(k, gamma)?;
        if !partition.terminated {
            eprintln!(
                "edge covering did not terminate within {DEFAULT_MAX_STEPS} levels at gamma = {gamma}"
            );
            eprintln!("{}", region_report(gap, gamma)?);
            return Ok(2);
        }
        partition
    };
    let doc = PartitionDocument::from_partition(&partition);
    emit(out, &doc.to_json())?;
    if let Some(path) = svg_path {
        write_atomic(path, &svg::render(&partition))?;
    }
    Ok(0)
}

fn cmd_steps_curve(
    gamma_min: f64,
    gamma_max: f64,
    points: usize,
    csv: Option<&Path>,
) -> Result<i32> {
    if !(gamma_min > 1.0 && gamma_max > gamma_min) {
        return Err(Error::InvalidArgument(format!(
            "need 1 < gamma-min < gamma-max, got {gamma_min} .. {gamma_max}"
        )));
    }
    let mut text = String::from("gamma,steps\n");
    for gamma in linspace(gamma_min, gamma_max, points) {
        let steps = match steps_to_cover(canonical_scaled_gap(gamma), gamma, DEFAULT_MAX_STEPS) {
            StepsOutcome::Covered(n) => n.to_string(),
            StepsOutcome::NonTerminating => String::new(),
        };
        text.push_str(&format!("{},{steps}\n", fmt_float(gamma)));
    }
    emit(csv, &text)?;
    Ok(0)
}

fn cmd_fixed_point_curve(
    gamma_min: f64,
    gamma_max: f64,
    points: usize,
    csv: Option<&Path>,
) -> Result<i32> {
    if !(gamma_min > 1.0 && gamma_max <= 1.3 && gamma_max >= gamma_min) {
        return Err(Error::InvalidArgument(format!(
            "grid must lie within (1, 1.3], got {gamma_min} .. {gamma_max}"
        )));
    }
    let mut text = String::from("gamma,upper_fixed_point,lower_fixed_point,stopping_threshold\n");
    for gamma in linspace(gamma_min, gamma_max, points) {
        let roots = fixed_points(gamma)?;
        let positive: Vec<f64> = roots.roots.iter().copied().filter(|&x| x > 0.0).collect();
        let (upper, lower) = if positive.len() >= 2 {
            (fmt_float(positive[0]), fmt_float(positive[1]))
        } else {
            (String::new(), String::new())
        };
        text.push_str(&format!(
            "{},{upper},{lower},{}\n",
            fmt_float(gamma),
            fmt_float(gap_chord_half_width(1.0, gamma))
        ));
    }
    emit(csv, &text)?;
    Ok(0)
}

fn cmd_optimize(k: u32, csv: Option<&Path>, k_max: u32) -> Result<i32> {
    let best = optimal_gamma(k)?;
    let one_piece = gamma_one(k)?.value;
    let vertex_bound = gamma_theta(interior_angle(k))?.value;
    println!("k = {k}");
    println!("  one-piece ratio (circumradius)  {one_piece:.5}");
    println!("  vertex lower bound              {vertex_bound:.5}");
    println!("  best covering ratio             {best:.5}");
    if best < one_piece - 1e-9 {
        println!("  recommendation: covering construction ({best:.5} < {one_piece:.5})");
    } else {
        println!("  recommendation: single piece (covering offers no improvement)");
    }
    if let Some(path) = csv {
        if k_max < 5 {
            return Err(Error::InvalidArgument(format!(
                "sweep needs k-max >= 5, got {k_max}"
            )));
        }
        let mut text = String::from("k,gamma_theta,gamma_one,optimal\n");
        for kk in 5..=k_max {
            text.push_str(&format!(
                "{kk},{},{},{}\n",
                fmt_float(gamma_theta(interior_angle(kk))?.value),
                fmt_float(gamma_one(kk)?.value),
                fmt_float(optimal_gamma(kk)?)
            ));
        }
        write_atomic(path, &text)?;
    }
    Ok(0)
}

fn cmd_verify(document: &Path, samples: usize, resolution: f64, seed: u64) -> Result<i32> {
    let text = std::fs::read_to_string(document)?;
    let doc = PartitionDocument::from_json(&text)?;
    let partition = doc.to_partition()?;
    println!(
        "document: k={}, gamma={}, pieces {}, terminated {}",
        partition.k,
        fmt_float(partition.gamma),
        partition.piece_count,
        partition.terminated
    );
    if !partition.terminated {
        eprintln!("partition is not terminated; coverage verification needs a complete covering");
        return Ok(2);
    }
    let report = check_covering(&partition, samples, seed);
    println!(
        "coverage: {} samples, {} uncovered",
        report.samples_total, report.samples_uncovered
    );
    if let Some(p) = report.worst_point {
        println!("worst uncovered point: ({}, {})", p.x, p.y);
    }
    println!(
        "indisk disjointness violations: {}",
        report.disjointness_violations.len()
    );
    let stalled = match grow_pieces(&partition, resolution) {
        Ok(grid) => {
            let regions = connected_regions(&grid);
            let total: usize = regions.iter().map(|&(_, n)| n).sum();
            println!(
                "growth: {} pieces labeled, {} connected regions, resolution {}",
                regions.len(),
                total,
                resolution
            );
            false
        }
        Err(Error::GrowthStalled(_)) => {
            println!("growth: stalled (coverage gap or resolution too coarse)");
            true
        }
        Err(e) => return Err(e),
    };
    let clean = report.samples_uncovered == 0
        && report.disjointness_violations.is_empty()
        && !stalled;
    if clean {
        println!("PASS");
        Ok(0)
    } else {
        let failures = serde_json::json!({
            "samples_uncovered": report.samples_uncovered,
            "worst_point": report.worst_point.map(|p| [p.x, p.y]),
            "disjointness_violations": report.disjointness_violations,
            "growth_stalled": stalled,
        });
        println!("{failures}");
        println!("FAIL");
        Ok(1)
    }
}
