use convexdecomp::decomposer::split_cell_at_interior_point;
use convexdecomp::generators::gen_random;
use convexdecomp::geom::{contains_strict, convex_join, shared_edge};
use convexdecomp::{area2, baseline_decompose, convex_hull, edge_join, is_convex, minimalize, orient, Point};
use proptest::prelude::*;

const COORD: i64 = 1 << 40;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 128, ..ProptestConfig::default() }
}

fn point() -> impl Strategy<Value = Point> {
    (-COORD..COORD, -COORD..COORD).prop_map(|(x, y)| Point::new(x, y))
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn orient_is_antisymmetric(a in point(), b in point(), c in point()) {
        let o = orient(a, b, c);
        prop_assert_eq!(orient(b, a, c), -o);
        prop_assert_eq!(orient(a, c, b), -o);
        prop_assert_eq!(orient(b, c, a), o);
        prop_assert_eq!(orient(c, a, b), o);
    }

    #[test]
    fn hull_is_convex_and_encloses(n in 3usize..60, seed in any::<u64>()) {
        let ps = gen_random(n, seed, 1_000_000).unwrap();
        let hull = convex_hull(&ps).unwrap();
        prop_assert!(is_convex(&hull, &ps));
        for i in 0..n {
            for (u, v) in hull.edges() {
                prop_assert!(ps.orient(u, v, i) >= 0);
            }
        }
    }

    #[test]
    fn minimalize_is_idempotent(n in 4usize..80, seed in any::<u64>()) {
        let ps = gen_random(n, seed, 1_000_000).unwrap();
        let once = minimalize(baseline_decompose(&ps).unwrap(), &ps);
        let twice = minimalize(once.clone(), &ps);
        prop_assert_eq!(once.canonical_cells(), twice.canonical_cells());
    }

    #[test]
    fn edge_join_adds_areas(n in 4usize..60, seed in any::<u64>()) {
        let ps = gen_random(n, seed, 1_000_000).unwrap();
        let d = baseline_decompose(&ps).unwrap();
        let mut joined = 0;
        for (i, a) in d.cells.iter().enumerate() {
            for b in &d.cells[i + 1..] {
                if shared_edge(a, b).is_some() {
                    let j = edge_join(a, b, &ps).unwrap();
                    prop_assert_eq!(area2(&j, &ps), area2(a, &ps) + area2(b, &ps));
                    joined += 1;
                }
            }
        }
        prop_assert!(d.len() == 1 || joined > 0);
    }

    #[test]
    fn split_gives_three_convex_minimal_cells(n in 4usize..40, seed in any::<u64>()) {
        let ps = gen_random(n, seed, 1_000_000).unwrap();
        let hull = convex_hull(&ps).unwrap();
        let inside: Vec<usize> = (0..n).filter(|&i| contains_strict(&hull, &ps, ps.point(i))).collect();
        prop_assume!(!inside.is_empty());
        let p = inside[(seed % inside.len() as u64) as usize];
        let parts = split_cell_at_interior_point(&hull, p, &ps).unwrap();
        let total: i128 = parts.iter().map(|c| area2(c, &ps)).sum();
        prop_assert_eq!(total, area2(&hull, &ps));
        for c in &parts {
            prop_assert!(is_convex(c, &ps));
            prop_assert!(area2(c, &ps) > 0);
        }
        for i in 0..3 {
            for j in i + 1..3 {
                prop_assert!(shared_edge(&parts[i], &parts[j]).is_some());
                prop_assert!(convex_join(&parts[i], &parts[j], &ps).is_none());
            }
        }
    }
}
