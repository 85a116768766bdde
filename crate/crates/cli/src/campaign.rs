//! Seeded trial campaigns shared by `fuzz` and `bench`.
//!
//! Trial `i` uses seed `seed + i` and draws its size from that seed, so a
//! trial can be replayed alone. Trials run on a rayon pool and are merged
//! by index, which keeps every report independent of the worker count.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::time::Instant;

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use convexdecomp::generators::{gen_pm_set, gen_random};
use convexdecomp::io::format_points;
use convexdecomp::{verify, PointSet};
use rayon::prelude::*;

use crate::{accepted, Algorithm};

pub const ARCHIVE_ENV: &str = "CONVEXDECOMP_ARCHIVE_DIR";
const DEFAULT_ARCHIVE: &str = "convexdecomp-archive";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Generator {
    Random,
    Pm,
}

#[derive(Args, Clone, Debug)]
pub struct Campaign {
    #[arg(long)]
    pub trials: u64,
    #[arg(long, default_value_t = 4)]
    pub n_min: usize,
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "main")]
    pub algorithm: Algorithm,
    /// Defaults to `pm` for the pm algorithm and `random` otherwise.
    #[arg(long, value_enum)]
    pub generator: Option<Generator>,
    #[arg(long, default_value_t = 1_000_000)]
    pub range: i64,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    pub jobs: usize,
}

#[derive(Clone, Debug)]
pub struct Trial {
    pub seed: u64,
    pub n: usize,
    pub c: usize,
    pub k: usize,
    pub branch: String,
    pub cells: usize,
    pub bound: i64,
    pub slack: i64,
    pub ms: f64,
    pub passed: bool,
    pub fallbacks: usize,
    pub discrepancies: usize,
    pub error: Option<String>,
}

/// Size of trial with seed `s`, a fixed mix of the seed folded into range.
fn trial_size(s: u64, lo: usize, hi: usize) -> usize {
    let mixed = s.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    lo + ((mixed >> 32) % (hi - lo + 1) as u64) as usize
}

impl Campaign {
    fn generator(&self) -> Generator {
        self.generator.unwrap_or(if self.algorithm == Algorithm::Pm { Generator::Pm } else { Generator::Random })
    }

    fn instance(&self, seed: u64, n: usize) -> convexdecomp::Result<PointSet> {
        match self.generator() {
            Generator::Random => gen_random(n, seed, self.range),
            Generator::Pm => gen_pm_set(n, seed),
        }
    }

    fn trial(&self, index: u64) -> (Trial, Option<PointSet>) {
        let seed = self.seed.wrapping_add(index);
        let n = trial_size(seed, self.n_min, self.n_max);
        let mut t = Trial {
            seed,
            n,
            c: 0,
            k: 0,
            branch: "-".into(),
            cells: 0,
            bound: 0,
            slack: 0,
            ms: 0.0,
            passed: false,
            fallbacks: 0,
            discrepancies: 0,
            error: None,
        };
        let ps = match self.instance(seed, n) {
            Ok(ps) => ps,
            Err(e) => {
                t.error = Some(format!("generator: {e}"));
                return (t, None);
            }
        };
        let start = Instant::now();
        let result = self.algorithm.run(&ps);
        t.ms = start.elapsed().as_secs_f64() * 1e3;
        match result {
            Ok(d) => {
                let report = verify(&d, &ps);
                t.c = report.counts.c;
                t.k = report.counts.k;
                t.cells = d.len();
                t.bound = report.counts.theorem_target;
                t.slack = report.counts.theorem_slack();
                t.passed = accepted(&report, d.source);
                t.fallbacks = d.accounting.fallbacks;
                t.discrepancies = d.accounting.discrepancies.len();
                t.branch = d.accounting.branch.map_or_else(|| self.algorithm.tag().to_string(), |b| b.tag().to_string());
            }
            Err(e) => t.error = Some(e.to_string()),
        }
        (t, Some(ps))
    }

    pub fn run(&self) -> anyhow::Result<Summary> {
        if self.n_min < 3 || self.n_max < self.n_min {
            bail!("need 3 <= n-min <= n-max, got {}..{}", self.n_min, self.n_max);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(self.jobs).build()?;
        let results: Vec<(Trial, Option<PointSet>)> =
            pool.install(|| (0..self.trials).into_par_iter().map(|i| self.trial(i)).collect());
        let mut archived = Vec::new();
        let dir = std::env::var_os(ARCHIVE_ENV).map_or_else(|| PathBuf::from(DEFAULT_ARCHIVE), PathBuf::from);
        for (t, ps) in &results {
            let notable = !t.passed || t.discrepancies > 0 || t.fallbacks > 0;
            if let (true, Some(ps)) = (notable, ps) {
                std::fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join(format!("{}-seed{}-n{}.txt", self.algorithm.tag(), t.seed, t.n));
                let mut text = format!("# {} seed={} n={}", self.algorithm.tag(), t.seed, t.n);
                if let Some(e) = &t.error {
                    text.push_str(&format!(" error: {e}"));
                }
                text.push('\n');
                text.push_str(&format_points(ps));
                std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                archived.push(path);
            }
        }
        Ok(Summary { algorithm: self.algorithm, trials: results.into_iter().map(|(t, _)| t).collect(), archived })
    }
}

pub struct Summary {
    pub algorithm: Algorithm,
    pub trials: Vec<Trial>,
    pub archived: Vec<PathBuf>,
}

impl Summary {
    pub fn failures(&self) -> usize {
        self.trials.iter().filter(|t| !t.passed).count()
    }

    pub fn csv(&self) -> String {
        let mut s = String::from("seed,n,c,k,branch,cells,bound,slack,ms\n");
        for t in &self.trials {
            s.push_str(&format!(
                "{},{},{},{},{},{},{},{},{:.3}\n",
                t.seed, t.n, t.c, t.k, t.branch, t.cells, t.bound, t.slack, t.ms
            ));
        }
        s
    }
}

/// Everything but timings, so the text is reproducible.
impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fallbacks: usize = self.trials.iter().map(|t| t.fallbacks).sum();
        let discrepancies: usize = self.trials.iter().map(|t| t.discrepancies).sum();
        writeln!(
            f,
            "trials={} algorithm={} failures={} fallbacks={} discrepancies={} archived={}",
            self.trials.len(),
            self.algorithm.tag(),
            self.failures(),
            fallbacks,
            discrepancies,
            self.archived.len()
        )?;
        let mut branches: BTreeMap<&str, usize> = BTreeMap::new();
        let mut slack: BTreeMap<i64, usize> = BTreeMap::new();
        for t in self.trials.iter().filter(|t| t.error.is_none()) {
            *branches.entry(&t.branch).or_default() += 1;
            *slack.entry(t.slack).or_default() += 1;
        }
        for (b, count) in &branches {
            writeln!(f, "branch {b}={count}")?;
        }
        for (s, count) in &slack {
            writeln!(f, "slack_10n7 {s:+} {count}")?;
        }
        for t in self.trials.iter().filter(|t| !t.passed) {
            writeln!(f, "FAIL seed={} n={} {}", t.seed, t.n, t.error.as_deref().unwrap_or("verification"))?;
        }
        for p in &self.archived {
            writeln!(f, "archived {}", p.display())?;
        }
        Ok(())
    }
}
