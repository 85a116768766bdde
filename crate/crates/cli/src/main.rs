mod campaign;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use convexdecomp::generators::{gen_pm_set, gen_random};
use convexdecomp::io::{format_decomposition, format_points, parse_decomposition, parse_points};
use convexdecomp::oracle::{min_convex_decomposition, theorem_bound_check};
use convexdecomp::svg::render_svg;
use convexdecomp::{
    baseline_decompose, convex_hull, decompose, pm_decompose, verify, Decomposition, PointSet, RadialStructure,
    Source, VerificationReport,
};

use campaign::{Campaign, Generator};

#[derive(Parser)]
#[command(name = "convexdecomp", version, about = "Minimal convex decompositions of planar point sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    Baseline,
    Pm,
    Main,
}

impl Algorithm {
    pub fn run(self, ps: &PointSet) -> convexdecomp::Result<Decomposition> {
        match self {
            Algorithm::Baseline => baseline_decompose(ps),
            Algorithm::Pm => pm_decompose(ps),
            Algorithm::Main => decompose(ps),
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::Baseline => "baseline",
            Algorithm::Pm => "pm",
            Algorithm::Main => "main",
        }
    }
}

/// The baseline makes no minimality claim, so it passes on C1-C3 alone.
pub fn accepted(report: &VerificationReport, source: Source) -> bool {
    if source == Source::Baseline {
        report.is_decomposition()
    } else {
        report.passed()
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decompose a point file.
    Decompose {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "main")]
        algorithm: Algorithm,
        /// Write the decomposition here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Check a decomposition file against a point file.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        cells: PathBuf,
    },
    /// Generate a point file.
    Gen {
        #[arg(value_enum)]
        kind: Generator,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        range: i64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate, decompose and verify many instances.
    Fuzz {
        #[command(flatten)]
        campaign: Campaign,
    },
    /// Exhaustive minimum for a small point file.
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Time the pipeline and write one CSV row per trial.
    Bench {
        #[command(flatten)]
        campaign: Campaign,
        #[arg(long)]
        csv: PathBuf,
    },
}

fn invalid(path: &Path, e: convexdecomp::Error) -> anyhow::Error {
    anyhow!("{}: {e}", path.display())
}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_points(path: &Path) -> anyhow::Result<PointSet> {
    parse_points(&read(path)?).map_err(|e| invalid(path, e))
}

fn write(path: &Path, text: &str) -> anyhow::Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn header_counts(ps: &PointSet) -> anyhow::Result<(usize, usize)> {
    let c = convex_hull(ps)?.len();
    let k = RadialStructure::build(ps)?.k;
    Ok((c, k))
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    match cli.command {
        Command::Decompose { input, algorithm, out, verify: check, svg } => {
            let ps = load_points(&input)?;
            let d = algorithm.run(&ps).map_err(|e| invalid(&input, e))?;
            let (c, k) = header_counts(&ps)?;
            let text = format_decomposition(&d, ps.len(), c, k);
            match &out {
                Some(path) => write(path, &text)?,
                None => print!("{text}"),
            }
            if let Some(path) = &svg {
                write(path, &render_svg(&d, &ps)?)?;
            }
            if !check {
                return Ok(true);
            }
            let report = verify(&d, &ps);
            // keep stdout parseable when it carries the cells
            if out.is_some() {
                print!("{report}");
            } else {
                eprint!("{report}");
            }
            Ok(accepted(&report, d.source))
        }
        Command::Verify { input, cells } => {
            let ps = load_points(&input)?;
            let (header, d) = parse_decomposition(&read(&cells)?).map_err(|e| invalid(&cells, e))?;
            if header.n != ps.len() {
                bail!("{}: header says n={} but {} has {} points", cells.display(), header.n, input.display(), ps.len());
            }
            let report = verify(&d, &ps);
            print!("{report}");
            Ok(accepted(&report, header.algo))
        }
        Command::Gen { kind, n, seed, range, out } => {
            let ps = match kind {
                Generator::Random => gen_random(n, seed, range),
                Generator::Pm => gen_pm_set(n, seed),
            }
            ?;
            write(&out, &format_points(&ps))?;
            Ok(true)
        }
        Command::Fuzz { campaign } => {
            let summary = campaign.run()?;
            print!("{summary}");
            Ok(summary.failures() == 0)
        }
        Command::Oracle { input } => {
            let ps = load_points(&input)?;
            let result = min_convex_decomposition(&ps).map_err(|e| invalid(&input, e))?;
            let check = theorem_bound_check(&result, &ps)?;
            let regime = if check.holds { "" } else { " (small-n regime)" };
            println!("min={} bound={} bound_check={}{regime}", result.min_cells, check.bound, check.holds);
            for algo in [Algorithm::Baseline, Algorithm::Pm, Algorithm::Main] {
                match algo.run(&ps) {
                    Ok(d) => println!("{}={}", algo.tag(), d.len()),
                    Err(e) => println!("{}=n/a ({e})", algo.tag()),
                }
            }
            Ok(true)
        }
        Command::Bench { campaign, csv } => {
            let summary = campaign.run()?;
            write(&csv, &summary.csv())?;
            print!("{summary}");
            Ok(summary.failures() == 0)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
