use convexdecomp::generators::{gen_pm_set, gen_random};
use convexdecomp::io::parse_points;
use convexdecomp::oracle::min_convex_decomposition;
use convexdecomp::verifier::BoundCounts;
use convexdecomp::{baseline_decompose, decompose, pm_decompose, verify, Branch, RadialStructure, Sign};

/// Fifteen points with three hull vertices and four plus-runs.
const FIG2: &str = "\
0 0
1000 1000
755 964
526 870
246 547
205 657
168 919
35 571
-31 515
-149 812
-241 774
-289 642
-469 776
-716 914
-1000 1000
";

#[test]
fn fifteen_point_instance_gives_sixteen() {
    let ps = parse_points(FIG2).unwrap();
    let rs = RadialStructure::build(&ps).unwrap();
    let signs: String = (3..15).map(|r| if rs.sign(r) == Some(Sign::Plus) { '+' } else { '-' }).collect();
    assert_eq!(signs, "++--+--++-++");
    assert_eq!(rs.k, 4);
    let d = baseline_decompose(&ps).unwrap();
    assert_eq!(d.accounting.c, 3);
    assert_eq!(d.accounting.fallbacks, 0);
    assert_eq!(d.len(), 16);
    let report = verify(&d, &ps);
    assert!(report.is_decomposition(), "{report}");

    let main = decompose(&ps).unwrap();
    assert!(verify(&main, &ps).passed());
    assert!(main.len() <= 16);
}

#[test]
fn baseline_count_is_exact_on_random_sets() {
    for seed in 0..60 {
        let n = 4 + (seed as usize * 7) % 90;
        let ps = gen_random(n, seed, 1_000_000).unwrap();
        let d = baseline_decompose(&ps).unwrap();
        let a = &d.accounting;
        assert_eq!(a.fallbacks, 0, "seed {seed}");
        assert_eq!(d.len(), n + a.k - a.c, "seed {seed}");
        assert!(verify(&d, &ps).is_decomposition());
    }
}

#[test]
fn main_passes_and_small_k_meets_bound() {
    for seed in 0..80 {
        let n = 4 + (seed as usize * 13) % 120;
        let ps = gen_random(n, seed, 1_000_000).unwrap();
        let d = decompose(&ps).unwrap();
        let report = verify(&d, &ps);
        assert!(report.passed(), "seed {seed}: {report}");
        if d.accounting.branch == Some(Branch::BaselineSmallK) {
            assert!(report.counts.theorem_slack() <= 0, "seed {seed}");
        }
    }
}

#[test]
fn pm_sets_stay_within_four_thirds() {
    for n in [8, 14, 20, 26, 50, 98] {
        for seed in 0..4 {
            let ps = gen_pm_set(n, seed).unwrap();
            let d = pm_decompose(&ps).unwrap();
            let report = verify(&d, &ps);
            assert!(report.passed(), "n={n} seed={seed}: {report}");
            let c = d.accounting.c;
            assert!(d.len() + c <= (4 * n).div_ceil(3) + 2, "n={n} seed={seed} cells={}", d.len());
        }
    }
}

#[test]
fn oracle_is_a_lower_bound() {
    for seed in 0..40 {
        let n = 4 + (seed as usize % 5);
        let ps = gen_random(n, seed, 1000).unwrap();
        let o = min_convex_decomposition(&ps).unwrap();
        assert!(verify(&o.witness, &ps).passed());
        assert!(o.min_cells <= decompose(&ps).unwrap().len());
        assert!(o.min_cells <= baseline_decompose(&ps).unwrap().len());
    }
}

#[test]
fn bound_arithmetic() {
    let b = BoundCounts::new(3, 4, 3, 1);
    assert_eq!(b.theorem_target, 2);
    assert_eq!(b.theorem_slack(), 1);
}
