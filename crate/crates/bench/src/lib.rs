//! Fixed workloads shared by the criterion benchmarks.

use convexdecomp::generators::{gen_pm_set, gen_random};
use convexdecomp::PointSet;

/// Random point sets of the given size, one per seed in `0..count`.
pub fn random_corpus(n: usize, count: u64) -> Vec<PointSet> {
    (0..count).map(|seed| gen_random(n, seed, 1_000_000).expect("generator")).collect()
}

/// Generated ± sets of the given size, one per seed in `0..count`.
pub fn pm_corpus(n: usize, count: u64) -> Vec<PointSet> {
    (0..count).map(|seed| gen_pm_set(n, seed).expect("generator")).collect()
}
